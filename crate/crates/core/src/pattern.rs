//! Cyclic patterns of periodic orbits and their Markov covering graphs.
//!
//! A pattern of size `m` records how a map permutes the points
//! `x_1 < ... < x_m` of an orbit: `images()[i - 1]` is the rank of
//! `f(x_i)`. Node `i` of the Markov graph stands for `[x_i, x_{i+1}]`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::ops::ControlFlow;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pwl::{connect_the_dots, pattern_orbit, PwlMap};
use crate::rational::Rational;
use crate::witness::lemma4_periodic_point;
use crate::Limits;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicPattern {
    sigma: Vec<usize>,
}

impl CyclicPattern {
    /// From the image list `sigma`, 1-based: `sigma[i - 1]` is the rank of
    /// the image of the `i`-th smallest point.
    pub fn from_images(sigma: Vec<usize>) -> Result<Self> {
        let m = sigma.len();
        if m < 2 {
            return Err(Error::InvalidPattern("pattern needs at least two points"));
        }
        let mut seen = vec![false; m];
        for &s in &sigma {
            if s == 0 || s > m || seen[s - 1] {
                return Err(Error::InvalidPattern("not a permutation of 1..m"));
            }
            seen[s - 1] = true;
        }
        let mut len = 1;
        let mut i = sigma[0];
        while i != 1 {
            i = sigma[i - 1];
            len += 1;
        }
        if len != m {
            return Err(Error::InvalidPattern("permutation is not a single cycle"));
        }
        Ok(CyclicPattern { sigma })
    }

    /// Parse cycle notation such as `1>3>2` (optionally closed, `1>3>2>1`).
    pub fn from_cycle_notation(s: &str) -> Result<Self> {
        let mut cycle = Vec::new();
        for tok in s.split('>') {
            let v: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPattern("cycle entries must be positive integers"))?;
            cycle.push(v);
        }
        if cycle.len() > 1 && cycle.first() == cycle.last() {
            cycle.pop();
        }
        let m = cycle.len();
        let mut sigma = vec![0; m];
        for (idx, &v) in cycle.iter().enumerate() {
            if v == 0 || v > m || sigma[v - 1] != 0 {
                return Err(Error::InvalidPattern("cycle must list each of 1..m once"));
            }
            sigma[v - 1] = cycle[(idx + 1) % m];
        }
        CyclicPattern::from_images(sigma)
    }

    pub fn size(&self) -> usize {
        self.sigma.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.sigma
    }

    /// Rank of the image of the point of rank `i` (both 1-based).
    pub fn image(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    /// The same pattern seen through the reflection of the line.
    pub fn mirror(&self) -> CyclicPattern {
        let m = self.size();
        CyclicPattern {
            sigma: (1..=m).map(|i| m + 1 - self.sigma[m - i]).collect(),
        }
    }

    /// Every cyclic pattern of size `m`, ordered by image list.
    pub fn all(m: usize) -> Vec<CyclicPattern> {
        if m < 2 {
            return Vec::new();
        }
        let mut rest: Vec<usize> = (2..=m).collect();
        let mut out = Vec::new();
        permute(&mut rest, 0, &mut |tail| {
            let mut sigma = vec![0; m];
            let mut prev = 1;
            for &v in tail {
                sigma[prev - 1] = v;
                prev = v;
            }
            sigma[prev - 1] = 1;
            out.push(CyclicPattern { sigma });
        });
        out.sort();
        out
    }
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

impl fmt::Display for CyclicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        let mut i = self.sigma[0];
        while i != 1 {
            write!(f, ">{i}")?;
            i = self.sigma[i - 1];
        }
        Ok(())
    }
}

impl fmt::Debug for CyclicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicPattern({self})")
    }
}

impl FromStr for CyclicPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CyclicPattern::from_cycle_notation(s)
    }
}

/// The spiral pattern of odd size `m` whose center point moves right first:
/// `c -> c+1 -> c-1 -> c+2 -> c-2 -> ... -> c+n -> c-n -> c`.
pub fn stefan_pattern(m: usize) -> Result<CyclicPattern> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::NotOddPeriod(m));
    }
    let c = m.div_ceil(2);
    let mut seq = vec![c];
    for d in 1..=(m - 1) / 2 {
        seq.push(c + d);
        seq.push(c - d);
    }
    let mut sigma = vec![0; m];
    for (i, &p) in seq.iter().enumerate() {
        sigma[p - 1] = seq[(i + 1) % m];
    }
    CyclicPattern::from_images(sigma)
}

pub fn is_stefan_pattern(pattern: &CyclicPattern) -> Result<bool> {
    let spiral = stefan_pattern(pattern.size())?;
    Ok(*pattern == spiral || *pattern == spiral.mirror())
}

/// Directed covering graph on the intervals between consecutive orbit
/// points; nodes are `1..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovGraph {
    successors: Vec<Vec<usize>>,
}

pub fn markov_graph(pattern: &CyclicPattern) -> MarkovGraph {
    let m = pattern.size();
    let successors = (1..m)
        .map(|i| {
            let (a, b) = (pattern.image(i), pattern.image(i + 1));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            (lo..hi).collect()
        })
        .collect();
    MarkovGraph { successors }
}

impl MarkovGraph {
    pub fn node_count(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.successors[node - 1]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from >= 1 && from <= self.node_count() && self.successors(from).contains(&to)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| succ.iter().map(move |&j| (i + 1, j)))
    }

    pub fn is_closed_walk(&self, walk: &[usize]) -> bool {
        !walk.is_empty()
            && (0..walk.len()).all(|i| self.has_edge(walk[i], walk[(i + 1) % walk.len()]))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        for i in 1..=self.node_count() {
            let _ = writeln!(s, "  {i} [label=\"I{i}\"];");
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "  {a} -> {b};");
        }
        s.push_str("}\n");
        s
    }

    /// Visit every closed walk of length `n` once, as its lexicographically
    /// least rotation, in lexicographic order.
    pub fn visit_closed_walks<B>(
        &self,
        n: usize,
        walk_budget: usize,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let mut count = 0usize;
        let mut path = Vec::with_capacity(n);
        for start in 1..=self.node_count() {
            path.clear();
            path.push(start);
            if let Some(b) =
                self.extend_walk(n, start, &mut path, &mut count, walk_budget, &mut visit)?
            {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    fn extend_walk<B>(
        &self,
        n: usize,
        start: usize,
        path: &mut Vec<usize>,
        count: &mut usize,
        budget: usize,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let last = path[path.len() - 1];
        if path.len() == n {
            if self.has_edge(last, start) && is_least_rotation(path) {
                *count += 1;
                if *count > budget {
                    return Err(Error::WalkBudgetExceeded { budget });
                }
                if let ControlFlow::Break(b) = visit(path) {
                    return Ok(Some(b));
                }
            }
            return Ok(None);
        }
        for &next in self.successors(last) {
            // the least rotation starts at its smallest node
            if next < start {
                continue;
            }
            path.push(next);
            let r = self.extend_walk(n, start, path, count, budget, visit);
            path.pop();
            if let Some(b) = r? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }
}

fn is_least_rotation(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        for i in 0..n {
            let (a, b) = (w[i], w[(i + r) % n]);
            if a != b {
                return a < b;
            }
        }
        true
    })
}

/// All closed walks of length `n`, up to rotation.
pub fn closed_walks(graph: &MarkovGraph, n: usize, walk_budget: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    graph.visit_closed_walks::<()>(n, walk_budget, |w| {
        out.push(w.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Closed intervals `J_0 .. J_{n-1}` with `f(J_i) ⊇ J_{i+1}` cyclically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalLoop {
    intervals: Vec<Interval>,
}

impl IntervalLoop {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::PreconditionViolated(
                "interval loop must be nonempty",
            ));
        }
        Ok(IntervalLoop { intervals })
    }

    /// Build and check the covering condition against `f`.
    pub fn checked(f: &PwlMap, intervals: Vec<Interval>) -> Result<Self> {
        let lp = IntervalLoop::new(intervals)?;
        lp.check_covering(f)?;
        Ok(lp)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn check_covering(&self, f: &PwlMap) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !f.covers(&self.intervals[i], &self.intervals[(i + 1) % n])? {
                return Err(Error::NotACycle { index: i });
            }
        }
        Ok(())
    }

    pub(crate) fn reflect(&self, sum: &Rational) -> IntervalLoop {
        IntervalLoop {
            intervals: self.intervals.iter().map(|j| j.reflect(sum)).collect(),
        }
    }
}

/// Relabel a closed walk as intervals of the connect-the-dots realization.
pub fn loop_to_intervals(pattern: &CyclicPattern, walk: &[usize]) -> Result<IntervalLoop> {
    if !markov_graph(pattern).is_closed_walk(walk) {
        return Err(Error::NotAWalk);
    }
    let orbit = pattern_orbit(pattern);
    let pts = orbit.points();
    IntervalLoop::new(
        walk.iter()
            .map(|&i| Interval::spanning(pts[i - 1].clone(), pts[i].clone()))
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMethod {
    /// Enumerate fixed points of each iterate.
    Direct,
    /// Search closed Markov-graph walks for least-period witnesses.
    Walks,
    /// Direct, falling back to walks when the piece budget is exceeded.
    Auto,
}

/// Least periods `k <= upto` of the pattern's connect-the-dots map.
pub fn realized_periods(
    pattern: &CyclicPattern,
    upto: usize,
    method: SpectrumMethod,
    limits: &Limits,
) -> Result<BTreeSet<usize>> {
    match method {
        SpectrumMethod::Direct => realized_periods_direct(pattern, upto, limits),
        SpectrumMethod::Walks => realized_periods_walks(pattern, upto, limits),
        SpectrumMethod::Auto => match realized_periods_direct(pattern, upto, limits) {
            Err(Error::PieceBudgetExceeded { .. }) => realized_periods_walks(pattern, upto, limits),
            r => r,
        },
    }
}

fn realized_periods_direct(
    pattern: &CyclicPattern,
    upto: usize,
    limits: &Limits,
) -> Result<BTreeSet<usize>> {
    let f = connect_the_dots(pattern);
    let mut out = BTreeSet::new();
    let mut g = f.clone();
    for k in 1..=upto {
        if k > 1 {
            g = f.compose(&g, limits)?;
        }
        if !f.orbits_from_fixed(&g.fixed_points(), k)?.orbits.is_empty() {
            out.insert(k);
        }
    }
    Ok(out)
}

fn realized_periods_walks(
    pattern: &CyclicPattern,
    upto: usize,
    limits: &Limits,
) -> Result<BTreeSet<usize>> {
    let f = connect_the_dots(pattern);
    let graph = markov_graph(pattern);
    let mut out = BTreeSet::new();
    for k in 1..=upto {
        let hit = graph.visit_closed_walks(k, limits.walks, |walk| {
            let lp = match loop_to_intervals(pattern, walk) {
                Ok(lp) => lp,
                Err(e) => return ControlFlow::Break(Err(e)),
            };
            match lemma4_periodic_point(&f, &lp, true, limits) {
                Ok(_) => ControlFlow::Break(Ok(())),
                Err(Error::NoLeastPeriodWitness { .. }) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(Err(e)),
            }
        })?;
        match hit {
            Some(Ok(())) => {
                out.insert(k);
            }
            Some(Err(e)) => return Err(e),
            None => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::string::ToString;

    fn pat(s: &str) -> CyclicPattern {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = pat("1>3>2");
        assert_eq!(p.images(), &[3, 1, 2]);
        assert_eq!(p.to_string(), "1>3>2");
        assert_eq!(pat("1>3>2>1"), p);
        assert_eq!(pat("3>2>1"), p);
        assert!("1>2>2".parse::<CyclicPattern>().is_err());
        assert!("1".parse::<CyclicPattern>().is_err());
        assert!(CyclicPattern::from_images(vec![2, 1, 3]).is_err());
    }

    #[test]
    fn pattern_counts() {
        let counts: Vec<_> = (2..=6).map(|m| CyclicPattern::all(m).len()).collect();
        assert_eq!(counts, vec![1, 2, 6, 24, 120]);
    }

    #[test]
    fn mirror_of_three_cycle() {
        assert_eq!(pat("1>3>2").mirror(), pat("1>2>3"));
        for p in CyclicPattern::all(5) {
            assert_eq!(p.mirror().mirror(), p);
        }
    }

    #[test]
    fn markov_graph_examples() {
        let g = markov_graph(&pat("1>2>3"));
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(1, 2), (2, 1), (2, 2)]);
        let g2 = markov_graph(&pat("1>2"));
        assert_eq!(g2.edges().collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn closed_walk_examples() {
        let g = markov_graph(&pat("1>2>3"));
        assert_eq!(closed_walks(&g, 1, 100).unwrap(), vec![vec![2]]);
        assert_eq!(
            closed_walks(&g, 2, 100).unwrap(),
            vec![vec![1, 2], vec![2, 2]]
        );
        assert_eq!(
            closed_walks(&g, 3, 100).unwrap(),
            vec![vec![1, 2, 2], vec![2, 2, 2]]
        );
        assert_eq!(
            closed_walks(&g, 6, 1),
            Err(Error::WalkBudgetExceeded { budget: 1 })
        );
    }

    #[test]
    fn loop_relabeling() {
        let p = pat("1>2>3");
        let lp = loop_to_intervals(&p, &[1, 2, 2]).unwrap();
        let half = Interval::new(rat(0, 1), rat(1, 2)).unwrap();
        let upper = Interval::new(rat(1, 2), rat(1, 1)).unwrap();
        assert_eq!(lp.intervals(), &[half, upper.clone(), upper.clone()]);
        assert_eq!(loop_to_intervals(&p, &[2]).unwrap().intervals(), &[upper]);
        assert_eq!(loop_to_intervals(&p, &[1, 1]), Err(Error::NotAWalk));
        let two = loop_to_intervals(&pat("1>2"), &[1]).unwrap();
        assert_eq!(
            two.intervals(),
            &[Interval::new(rat(0, 1), rat(1, 1)).unwrap()]
        );
    }

    #[test]
    fn stefan_patterns() {
        assert_eq!(stefan_pattern(3).unwrap(), pat("1>2>3"));
        assert_eq!(stefan_pattern(5).unwrap(), pat("3>4>2>5>1"));
        assert_eq!(stefan_pattern(4), Err(Error::NotOddPeriod(4)));
        for m in [3, 5, 7, 9] {
            let s = stefan_pattern(m).unwrap();
            assert!(is_stefan_pattern(&s).unwrap());
            assert!(is_stefan_pattern(&s.mirror()).unwrap());
        }
        assert!(is_stefan_pattern(&pat("1>3>2")).unwrap());
        assert!(!is_stefan_pattern(&pat("1>2>3>4>5")).unwrap());
        assert_eq!(
            is_stefan_pattern(&pat("1>2>3>4")),
            Err(Error::NotOddPeriod(4))
        );
    }

    #[test]
    fn spectrum_examples() {
        let l = Limits::default();
        for method in [SpectrumMethod::Direct, SpectrumMethod::Walks] {
            let three = realized_periods(&pat("1>2>3"), 6, method, &l).unwrap();
            assert_eq!(three, (1..=6).collect(), "{method:?}");
            let two = realized_periods(&pat("1>2"), 4, method, &l).unwrap();
            assert_eq!(two, [1, 2].into_iter().collect(), "{method:?}");
            let four = realized_periods(&pat("1>2>3>4"), 4, method, &l).unwrap();
            assert!(four.contains(&1) && four.contains(&2) && four.contains(&4));
            let s7 = realized_periods(&stefan_pattern(7).unwrap(), 9, method, &l).unwrap();
            assert_eq!(
                s7,
                [1, 2, 4, 6, 7, 8, 9].into_iter().collect(),
                "{method:?}"
            );
        }
    }
}
