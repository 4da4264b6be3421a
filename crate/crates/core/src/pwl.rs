//! Continuous piecewise-linear self-maps of a compact interval.
//!
//! Every quantity is an exact [`Rational`]. Composition materializes all
//! breakpoints of `f^n`, so piece counts can grow exponentially; each
//! materializing operation takes a [`Limits`] and fails with
//! [`Error::PieceBudgetExceeded`] instead of truncating.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pattern::CyclicPattern;
use crate::rational::Rational;
use crate::Limits;

#[derive(Clone)]
pub struct PwlMap {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

/// A linear piece `x0..=x1 -> y0..=y1`; degenerate when `x0 == x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Piece {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

/// Solution set of `g(x) = x` on one linear piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum FixedSolution {
    None,
    Point(Rational),
    Segment(Rational, Rational),
}

impl Piece {
    pub fn identity_on(j: &Interval) -> Piece {
        Piece {
            x0: j.lo().clone(),
            x1: j.hi().clone(),
            y0: j.lo().clone(),
            y1: j.hi().clone(),
        }
    }

    /// x at which the piece takes value `y`; `y` must lie strictly between
    /// `y0` and `y1`.
    fn x_at(&self, y: &Rational) -> Rational {
        &self.x0 + (y - &self.y0) * (&self.x1 - &self.x0) / (&self.y1 - &self.y0)
    }

    pub fn solve_fixed(&self) -> FixedSolution {
        let h0 = &self.y0 - &self.x0;
        let h1 = &self.y1 - &self.x1;
        match (h0.is_zero(), h1.is_zero()) {
            (true, true) if self.x0 == self.x1 => FixedSolution::Point(self.x0.clone()),
            (true, true) => FixedSolution::Segment(self.x0.clone(), self.x1.clone()),
            (true, false) => FixedSolution::Point(self.x0.clone()),
            (false, true) => FixedSolution::Point(self.x1.clone()),
            (false, false) => {
                if h0.is_negative() != h1.is_negative() {
                    let x = &self.x0 + &h0 * (&self.x1 - &self.x0) / (&h0 - &h1);
                    FixedSolution::Point(x)
                } else {
                    FixedSolution::None
                }
            }
        }
    }

    /// Restrict to the part whose values lie in `k`.
    pub fn clip(&self, k: &Interval) -> Option<Piece> {
        if self.y0 == self.y1 {
            return k.contains(&self.y0).then(|| self.clone());
        }
        let (ymin, ymax) = if self.y0 < self.y1 {
            (&self.y0, &self.y1)
        } else {
            (&self.y1, &self.y0)
        };
        let lo = if ymin < k.lo() { k.lo() } else { ymin };
        let hi = if ymax > k.hi() { k.hi() } else { ymax };
        if lo > hi {
            return None;
        }
        let at = |y: &Rational| {
            if y == &self.y0 {
                self.x0.clone()
            } else if y == &self.y1 {
                self.x1.clone()
            } else {
                self.x_at(y)
            }
        };
        let (xa, xb) = (at(lo), at(hi));
        Some(if xa <= xb {
            Piece {
                x0: xa,
                x1: xb,
                y0: lo.clone(),
                y1: hi.clone(),
            }
        } else {
            Piece {
                x0: xb,
                x1: xa,
                y0: hi.clone(),
                y1: lo.clone(),
            }
        })
    }
}

impl PwlMap {
    pub fn from_breakpoints(pairs: Vec<(Rational, Rational)>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::TooFewBreakpoints);
        }
        for (i, w) in pairs.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(Error::NonMonotoneBreakpoints { index: i + 1 });
            }
        }
        let (xs, ys): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let (lo, hi) = (&xs[0], &xs[xs.len() - 1]);
        for (x, y) in xs.iter().zip(&ys) {
            if y < lo || y > hi {
                return Err(Error::NotSelfMap {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
        Ok(PwlMap { xs, ys })
    }

    pub fn identity(domain: &Interval) -> Result<Self> {
        PwlMap::from_breakpoints(vec![
            (domain.lo().clone(), domain.lo().clone()),
            (domain.hi().clone(), domain.hi().clone()),
        ])
    }

    /// `T(x) = 1 - |2x - 1|` on `[0, 1]`.
    pub fn tent() -> Self {
        PwlMap {
            xs: vec![Rational::zero(), Rational::new(1, 2), Rational::one()],
            ys: vec![Rational::zero(), Rational::one(), Rational::zero()],
        }
    }

    pub fn domain(&self) -> Interval {
        Interval::spanning(self.xs[0].clone(), self.xs[self.xs.len() - 1].clone())
    }

    pub fn breakpoints(&self) -> impl ExactSizeIterator<Item = (&Rational, &Rational)> + '_ {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn breakpoint_count(&self) -> usize {
        self.xs.len()
    }

    fn lo(&self) -> &Rational {
        &self.xs[0]
    }

    fn hi(&self) -> &Rational {
        &self.xs[self.xs.len() - 1]
    }

    fn check_in_domain(&self, x: &Rational) -> Result<()> {
        if x < self.lo() || x > self.hi() {
            Err(Error::OutOfDomain(x.clone()))
        } else {
            Ok(())
        }
    }

    fn check_interval(&self, j: &Interval) -> Result<()> {
        self.check_in_domain(j.lo())?;
        self.check_in_domain(j.hi())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.check_in_domain(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Rational) -> Rational {
        match self.xs.binary_search(x) {
            Ok(i) => self.ys[i].clone(),
            Err(i) => {
                // 0 < i < len because x is strictly inside the domain
                let (x0, x1) = (&self.xs[i - 1], &self.xs[i]);
                let (y0, y1) = (&self.ys[i - 1], &self.ys[i]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// `f^n(x)` by repeated evaluation.
    pub fn eval_iterate(&self, x: &Rational, n: usize) -> Result<Rational> {
        self.check_in_domain(x)?;
        let mut y = x.clone();
        for _ in 0..n {
            y = self.eval_unchecked(&y);
        }
        Ok(y)
    }

    pub(crate) fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        (1..self.xs.len()).map(move |i| Piece {
            x0: self.xs[i - 1].clone(),
            x1: self.xs[i].clone(),
            y0: self.ys[i - 1].clone(),
            y1: self.ys[i].clone(),
        })
    }

    /// Apply `self` to the values of `piece`, splitting it at every
    /// breakpoint of `self` the values pass through.
    pub(crate) fn push_through(&self, piece: &Piece, out: &mut Vec<Piece>) {
        if piece.y0 == piece.y1 || piece.x0 == piece.x1 {
            let v = self.eval_unchecked(&piece.y0);
            out.push(Piece {
                x0: piece.x0.clone(),
                x1: piece.x1.clone(),
                y0: v.clone(),
                y1: v,
            });
            return;
        }
        let ascending = piece.y0 < piece.y1;
        let (ymin, ymax) = if ascending {
            (&piece.y0, &piece.y1)
        } else {
            (&piece.y1, &piece.y0)
        };
        let start = self.xs.partition_point(|b| b <= ymin);
        let end = self.xs.partition_point(|b| b < ymax);
        let mut x_prev = piece.x0.clone();
        let mut v_prev = self.eval_unchecked(&piece.y0);
        let mut emit = |x: Rational, v: Rational, out: &mut Vec<Piece>| {
            out.push(Piece {
                x0: core::mem::replace(&mut x_prev, x.clone()),
                x1: x,
                y0: core::mem::replace(&mut v_prev, v.clone()),
                y1: v,
            });
        };
        if start < end {
            let idx: Vec<usize> = if ascending {
                (start..end).collect()
            } else {
                (start..end).rev().collect()
            };
            for i in idx {
                let x = piece.x_at(&self.xs[i]);
                emit(x, self.ys[i].clone(), out);
            }
        }
        emit(piece.x1.clone(), self.eval_unchecked(&piece.y1), out);
    }

    fn from_pieces(pieces: &[Piece], limits: &Limits) -> Result<PwlMap> {
        let mut xs = Vec::with_capacity(pieces.len() + 1);
        let mut ys = Vec::with_capacity(pieces.len() + 1);
        for p in pieces {
            if xs.is_empty() {
                xs.push(p.x0.clone());
                ys.push(p.y0.clone());
            }
            if p.x1 == xs[xs.len() - 1] {
                continue;
            }
            push_simplified(&mut xs, &mut ys, p.x1.clone(), p.y1.clone());
            if xs.len() > limits.pieces {
                return Err(Error::PieceBudgetExceeded {
                    budget: limits.pieces,
                });
            }
        }
        Ok(PwlMap { xs, ys })
    }

    /// `self ∘ inner`, with collinear breakpoints merged.
    pub fn compose(&self, inner: &PwlMap, limits: &Limits) -> Result<PwlMap> {
        if inner.domain() != self.domain() {
            return Err(Error::PreconditionViolated(
                "composed maps must share a domain",
            ));
        }
        let mut out = Vec::new();
        for piece in inner.pieces() {
            self.push_through(&piece, &mut out);
            if out.len() > limits.pieces {
                return Err(Error::PieceBudgetExceeded {
                    budget: limits.pieces,
                });
            }
        }
        PwlMap::from_pieces(&out, limits)
    }

    /// Materialize `f^n`. `iterate(1)` returns `self` unchanged.
    pub fn iterate(&self, n: usize, limits: &Limits) -> Result<PwlMap> {
        if n == 0 {
            return Err(Error::ZeroIterate);
        }
        let mut g = self.clone();
        for _ in 1..n {
            g = self.compose(&g, limits)?;
        }
        Ok(g)
    }

    /// `[f, f^2, ..., f^n]`.
    pub fn iterates(&self, n: usize, limits: &Limits) -> Result<Vec<PwlMap>> {
        let mut out: Vec<PwlMap> = Vec::with_capacity(n);
        for i in 0..n {
            let g = match out.last() {
                None => self.clone(),
                Some(prev) => self.compose(prev, limits)?,
            };
            debug_assert_eq!(out.len(), i);
            out.push(g);
        }
        Ok(out)
    }

    pub fn interval_image(&self, j: &Interval) -> Result<Interval> {
        self.check_interval(j)?;
        let mut lo = self.eval_unchecked(j.lo());
        let mut hi = lo.clone();
        let mut consider = |v: Rational| {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        };
        consider(self.eval_unchecked(j.hi()));
        let start = self.xs.partition_point(|b| b <= j.lo());
        let end = self.xs.partition_point(|b| b < j.hi());
        for i in start..end {
            consider(self.ys[i].clone());
        }
        Ok(Interval::spanning(lo, hi))
    }

    /// `f(j) ⊇ k`.
    pub fn covers(&self, j: &Interval, k: &Interval) -> Result<bool> {
        self.check_interval(k)?;
        Ok(self.interval_image(j)?.contains_interval(k))
    }

    /// All maximal closed `L ⊆ j` with `f(L) = k` and `f(∂L) = ∂k`,
    /// ordered by left endpoint.
    pub fn preimage_branches(&self, j: &Interval, k: &Interval) -> Result<Vec<Interval>> {
        if !self.covers(j, k)? {
            return Err(Error::NotCovering);
        }
        let pts = self.refined_points(j, k);
        let degenerate = k.is_degenerate();
        let mut branches = Vec::new();
        let mut i = 0;
        while i < pts.len() {
            if pts[i].2 == Level::Out {
                i += 1;
                continue;
            }
            let start = i;
            while i < pts.len() && pts[i].2 != Level::Out {
                i += 1;
            }
            let comp = &pts[start..i];
            // maximal runs of boundary hits: (label, first x, last x)
            let mut runs: Vec<(Level, &Rational, &Rational)> = Vec::new();
            let mut prev_in_run = false;
            for (x, _, lvl) in comp {
                if matches!(lvl, Level::Lo | Level::Hi) {
                    match runs.last_mut() {
                        Some(run) if prev_in_run && run.0 == *lvl => run.2 = x,
                        _ => runs.push((*lvl, x, x)),
                    }
                    prev_in_run = true;
                } else {
                    prev_in_run = false;
                }
            }
            if degenerate {
                for (_, a, b) in runs {
                    branches.push(Interval::spanning(a.clone(), b.clone()));
                }
                continue;
            }
            // group same-label runs into blocks: (label, first x, last x)
            let mut blocks: Vec<(Level, &Rational, &Rational)> = Vec::new();
            for (lvl, a, b) in runs {
                match blocks.last_mut() {
                    Some(block) if block.0 == lvl => block.2 = b,
                    _ => blocks.push((lvl, a, b)),
                }
            }
            for w in blocks.windows(2) {
                branches.push(Interval::spanning(w[0].1.clone(), w[1].2.clone()));
            }
        }
        Ok(branches)
    }

    /// Breakpoints of `f` restricted to `j`, refined by the crossings of the
    /// levels `k.lo` and `k.hi`, each tagged with where its value sits.
    fn refined_points(&self, j: &Interval, k: &Interval) -> Vec<(Rational, Rational, Level)> {
        let classify = |y: &Rational| {
            if y < k.lo() || y > k.hi() {
                Level::Out
            } else if y == k.lo() {
                Level::Lo
            } else if y == k.hi() {
                Level::Hi
            } else {
                Level::Mid
            }
        };
        let mut raw: Vec<(Rational, Rational)> = Vec::new();
        raw.push((j.lo().clone(), self.eval_unchecked(j.lo())));
        let start = self.xs.partition_point(|b| b <= j.lo());
        let end = self.xs.partition_point(|b| b < j.hi());
        for i in start..end {
            raw.push((self.xs[i].clone(), self.ys[i].clone()));
        }
        if j.hi() != j.lo() {
            raw.push((j.hi().clone(), self.eval_unchecked(j.hi())));
        }
        let mut out: Vec<(Rational, Rational, Level)> = Vec::with_capacity(raw.len() * 2);
        for (idx, (x, y)) in raw.iter().enumerate() {
            if idx > 0 {
                let (px, py) = &raw[idx - 1];
                let piece = Piece {
                    x0: px.clone(),
                    x1: x.clone(),
                    y0: py.clone(),
                    y1: y.clone(),
                };
                let mut levels = vec![k.lo()];
                if !k.is_degenerate() {
                    levels.push(k.hi());
                }
                if py > y {
                    levels.reverse();
                }
                for level in levels {
                    let strictly_between = (py < level && level < y) || (y < level && level < py);
                    if strictly_between {
                        out.push((piece.x_at(level), level.clone(), classify(level)));
                    }
                }
            }
            out.push((x.clone(), y.clone(), classify(y)));
        }
        out
    }

    pub fn fixed_points(&self) -> FixedPoints {
        FixedPoints::collect(self.pieces().map(|p| p.solve_fixed()))
    }

    /// Every solution of `f^k(x) = x`, ascending.
    pub fn fixed_points_of_iterate(&self, k: usize, limits: &Limits) -> Result<FixedPoints> {
        Ok(self.iterate(k, limits)?.fixed_points())
    }

    /// Least `p <= max` with `f^p(y) = y`.
    pub fn least_period(&self, y: &Rational, max: usize) -> Option<usize> {
        let mut z = y.clone();
        for p in 1..=max {
            z = self.eval_unchecked(&z);
            if &z == y {
                return Some(p);
            }
        }
        None
    }

    /// Orbits of least period exactly `k`, ordered by minimum point.
    pub fn periodic_orbits(&self, k: usize, limits: &Limits) -> Result<Vec<Orbit>> {
        Ok(self.periodic_orbits_flagged(k, limits)?.orbits)
    }

    pub fn periodic_orbits_flagged(&self, k: usize, limits: &Limits) -> Result<PeriodicOrbits> {
        let fixed = self.fixed_points_of_iterate(k, limits)?;
        self.orbits_from_fixed(&fixed, k)
    }

    pub(crate) fn orbits_from_fixed(
        &self,
        fixed: &FixedPoints,
        k: usize,
    ) -> Result<PeriodicOrbits> {
        let mut candidates = fixed.points.clone();
        for seg in &fixed.continua {
            candidates.extend(self.identity_lap_representatives(seg, k)?);
        }
        let mut found: BTreeMap<Rational, Orbit> = BTreeMap::new();
        let mut seen: alloc::collections::BTreeSet<Rational> = Default::default();
        for y in candidates {
            if seen.contains(&y) {
                continue;
            }
            // every candidate returns within k steps; mark its whole orbit
            let mut points = vec![y.clone()];
            let mut z = self.eval_unchecked(&y);
            while z != y && points.len() <= k {
                points.push(z.clone());
                z = self.eval_unchecked(&z);
            }
            seen.extend(points.iter().cloned());
            if points.len() == k && z == y {
                let orbit = Orbit::from_points(points)?;
                found.insert(orbit.min().clone(), orbit);
            }
        }
        Ok(PeriodicOrbits {
            orbits: found.into_values().collect(),
            continuum: !fixed.continua.is_empty(),
        })
    }

    /// Sample points of a lap on which `f^k` is the identity, one per cell
    /// of the partition cut out by the breakpoints and fixed points of
    /// `f, ..., f^(k-1)`. Every least period occurring on the lap occurs
    /// at one of them.
    pub(crate) fn identity_lap_representatives(
        &self,
        seg: &Interval,
        k: usize,
    ) -> Result<Vec<Rational>> {
        let mut cuts = vec![seg.lo().clone(), seg.hi().clone()];
        let mut pieces = vec![Piece::identity_on(seg)];
        for _ in 1..k {
            let mut next = Vec::new();
            for p in &pieces {
                self.push_through(p, &mut next);
            }
            pieces = next;
            for p in &pieces {
                cuts.push(p.x0.clone());
                cuts.push(p.x1.clone());
                match p.solve_fixed() {
                    FixedSolution::None => {}
                    FixedSolution::Point(x) => cuts.push(x),
                    FixedSolution::Segment(a, b) => {
                        cuts.push(a);
                        cuts.push(b);
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut reps = Vec::with_capacity(cuts.len() * 2);
        for (i, c) in cuts.iter().enumerate() {
            if i > 0 {
                reps.push(Rational::midpoint(&cuts[i - 1], c));
            }
            reps.push(c.clone());
        }
        Ok(reps)
    }

    /// `x -> median(lo, f(x), hi)` with breakpoints inserted where `f`
    /// crosses either bound.
    pub fn clamp(&self, lo: &Rational, hi: &Rational) -> Result<PwlMap> {
        if lo > hi || lo < self.lo() || hi > self.hi() {
            return Err(Error::BadClampBounds {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        let median = |y: &Rational| {
            if y < lo {
                lo.clone()
            } else if y > hi {
                hi.clone()
            } else {
                y.clone()
            }
        };
        let mut xs = vec![self.xs[0].clone()];
        let mut ys = vec![median(&self.ys[0])];
        for p in self.pieces() {
            let mut levels = vec![lo];
            if lo != hi {
                levels.push(hi);
            }
            if p.y0 > p.y1 {
                levels.reverse();
            }
            for level in levels {
                if (&p.y0 < level && level < &p.y1) || (&p.y1 < level && level < &p.y0) {
                    xs.push(p.x_at(level));
                    ys.push(level.clone());
                }
            }
            xs.push(p.x1.clone());
            ys.push(median(&p.y1));
        }
        Ok(PwlMap { xs, ys })
    }

    /// Conjugate by the reflection `x -> lo + hi - x` of the domain.
    pub fn reflect(&self) -> PwlMap {
        let sum = self.lo() + self.hi();
        PwlMap {
            xs: self.xs.iter().rev().map(|x| &sum - x).collect(),
            ys: self.ys.iter().rev().map(|y| &sum - y).collect(),
        }
    }

    pub(crate) fn reflection_sum(&self) -> Rational {
        self.lo() + self.hi()
    }

    /// Breakpoints with collinear interior points removed.
    pub fn simplified(&self) -> PwlMap {
        let mut xs = vec![self.xs[0].clone()];
        let mut ys = vec![self.ys[0].clone()];
        for (x, y) in self.xs.iter().zip(&self.ys).skip(1) {
            push_simplified(&mut xs, &mut ys, x.clone(), y.clone());
        }
        PwlMap { xs, ys }
    }
}

fn push_simplified(xs: &mut Vec<Rational>, ys: &mut Vec<Rational>, x: Rational, y: Rational) {
    let n = xs.len();
    if n >= 2 {
        let (xa, ya) = (&xs[n - 2], &ys[n - 2]);
        let (xb, yb) = (&xs[n - 1], &ys[n - 1]);
        if (yb - ya) * (&x - xb) == (&y - yb) * (xb - xa) {
            xs.pop();
            ys.pop();
        }
    }
    xs.push(x);
    ys.push(y);
}

/// Two maps are equal when they are the same function on the same domain,
/// regardless of redundant collinear breakpoints.
impl PartialEq for PwlMap {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.simplified(), other.simplified());
        a.xs == b.xs && a.ys == b.ys
    }
}

impl Eq for PwlMap {}

impl fmt::Debug for PwlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.breakpoints()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Level {
    Out,
    Lo,
    Mid,
    Hi,
}

/// Solutions of `g(x) = x`. `points` is ascending and includes the
/// endpoints of every lap in `continua` on which `g` is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixedPoints {
    pub points: Vec<Rational>,
    pub continua: Vec<Interval>,
}

impl FixedPoints {
    pub(crate) fn collect(solutions: impl IntoIterator<Item = FixedSolution>) -> FixedPoints {
        let mut points = Vec::new();
        let mut continua: Vec<Interval> = Vec::new();
        for s in solutions {
            match s {
                FixedSolution::None => {}
                FixedSolution::Point(x) => points.push(x),
                FixedSolution::Segment(a, b) => match continua.last_mut() {
                    Some(last) if last.hi() == &a => {
                        *last = Interval::spanning(last.lo().clone(), b);
                    }
                    _ => continua.push(Interval::spanning(a, b)),
                },
            }
        }
        continua.sort_by(|a, b| a.lo().cmp(b.lo()));
        for c in &continua {
            points.push(c.lo().clone());
            points.push(c.hi().clone());
        }
        points.sort();
        points.dedup();
        FixedPoints { points, continua }
    }

    /// Some lap of the iterate is the identity.
    pub fn is_continuum(&self) -> bool {
        !self.continua.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicOrbits {
    pub orbits: Vec<Orbit>,
    /// An identity lap was met; `orbits` then holds one representative
    /// orbit per sample point of the continuum.
    pub continuum: bool,
}

/// A finite set of points, ascending, meant to be permuted cyclically by a
/// map. Whether it actually is an orbit is checked against a map with
/// [`Orbit::is_orbit_of`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Orbit {
    points: Vec<Rational>,
}

impl Orbit {
    /// Sorts the points; duplicates or an empty set are rejected.
    pub fn from_points(mut points: Vec<Rational>) -> Result<Orbit> {
        if points.is_empty() {
            return Err(Error::NotAnOrbit);
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotAnOrbit);
        }
        Ok(Orbit { points })
    }

    /// The orbit of `y`, which must return to itself within `max_period`
    /// steps.
    pub fn generated_by(f: &PwlMap, y: &Rational, max_period: usize) -> Result<Orbit> {
        f.check_in_domain(y)?;
        let mut points = vec![y.clone()];
        let mut z = f.eval_unchecked(y);
        while &z != y {
            if points.len() >= max_period {
                return Err(Error::NotAnOrbit);
            }
            points.push(z.clone());
            z = f.eval_unchecked(&z);
        }
        points.sort();
        Ok(Orbit { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn min(&self) -> &Rational {
        &self.points[0]
    }

    pub fn max(&self) -> &Rational {
        &self.points[self.points.len() - 1]
    }

    pub fn diameter(&self) -> Rational {
        self.max() - self.min()
    }

    pub fn hull(&self) -> Interval {
        Interval::spanning(self.min().clone(), self.max().clone())
    }

    /// 0-based rank of `x` among the points.
    pub fn rank_of(&self, x: &Rational) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    /// `f` permutes the points as a single cycle.
    pub fn is_orbit_of(&self, f: &PwlMap) -> bool {
        let dom = f.domain();
        if !self.points.iter().all(|x| dom.contains(x)) {
            return false;
        }
        let start = self.min();
        let mut z = start.clone();
        for step in 1..=self.period() {
            z = f.eval_unchecked(&z);
            if self.rank_of(&z).is_none() {
                return false;
            }
            if &z == start {
                return step == self.period();
            }
        }
        false
    }

    pub(crate) fn reflect(&self, sum: &Rational) -> Orbit {
        Orbit {
            points: self.points.iter().rev().map(|x| sum - x).collect(),
        }
    }
}

impl fmt::Debug for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.points).finish()
    }
}

/// Piecewise-linear interpolant of a pattern on the equally spaced points
/// `(i - 1) / (m - 1)`; those points form an orbit with the given pattern.
pub fn connect_the_dots(pattern: &CyclicPattern) -> PwlMap {
    let m = pattern.size() as i64;
    let pairs = pattern
        .images()
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            (
                Rational::new(i as i64, m - 1),
                Rational::new(s as i64 - 1, m - 1),
            )
        })
        .collect();
    PwlMap::from_breakpoints(pairs).expect("pattern interpolant is a valid self-map")
}

/// The points `(i - 1) / (m - 1)` carrying the pattern's orbit.
pub fn pattern_orbit(pattern: &CyclicPattern) -> Orbit {
    let m = pattern.size() as i64;
    Orbit {
        points: (0..m).map(|i| Rational::new(i, m - 1)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit() -> Interval {
        Interval::new(rat(0, 1), rat(1, 1)).unwrap()
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    fn three_cycle() -> PwlMap {
        PwlMap::from_breakpoints(vec![
            (rat(0, 1), rat(1, 2)),
            (rat(1, 2), rat(1, 1)),
            (rat(1, 1), rat(0, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn breakpoint_validation() {
        assert_eq!(
            PwlMap::from_breakpoints(vec![(rat(0, 1), rat(0, 1))]),
            Err(Error::TooFewBreakpoints)
        );
        assert_eq!(
            PwlMap::from_breakpoints(vec![(rat(0, 1), rat(0, 1)), (rat(0, 1), rat(1, 1))]),
            Err(Error::NonMonotoneBreakpoints { index: 1 })
        );
        assert!(matches!(
            PwlMap::from_breakpoints(vec![(rat(0, 1), rat(2, 1)), (rat(1, 1), rat(0, 1))]),
            Err(Error::NotSelfMap { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let t = PwlMap::tent();
        assert_eq!(t.eval(&rat(1, 3)).unwrap(), rat(2, 3));
        assert_eq!(t.eval(&rat(1, 2)).unwrap(), rat(1, 1));
        assert_eq!(t.eval(&rat(3, 2)), Err(Error::OutOfDomain(rat(3, 2))));
        let id = PwlMap::identity(&unit()).unwrap();
        assert_eq!(id.eval(&rat(5, 7)).unwrap(), rat(5, 7));
        let f = three_cycle();
        for (x, y) in [((0, 1), (1, 2)), ((1, 2), (1, 1)), ((1, 1), (0, 1))] {
            assert_eq!(f.eval(&rat(x.0, x.1)).unwrap(), rat(y.0, y.1));
        }
    }

    #[test]
    fn tent_square_has_five_breakpoints() {
        let t2 = PwlMap::tent().iterate(2, &Limits::default()).unwrap();
        let xs: Vec<_> = t2.breakpoints().map(|(x, _)| x.clone()).collect();
        assert_eq!(
            xs,
            vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)]
        );
        let ys: Vec<_> = t2.breakpoints().map(|(_, y)| y.clone()).collect();
        assert_eq!(
            ys,
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1), rat(0, 1)]
        );
    }

    #[test]
    fn iterate_base_cases() {
        let l = Limits::default();
        let f = three_cycle();
        assert_eq!(f.iterate(1, &l).unwrap(), f);
        let id = PwlMap::identity(&unit()).unwrap();
        assert_eq!(id.iterate(9, &l).unwrap(), id);
        assert_eq!(f.iterate(0, &l), Err(Error::ZeroIterate));
    }

    #[test]
    fn piece_budget_is_reported() {
        let l = Limits {
            pieces: 100,
            ..Limits::default()
        };
        assert_eq!(
            PwlMap::tent().iterate(8, &l),
            Err(Error::PieceBudgetExceeded { budget: 100 })
        );
    }

    #[test]
    fn images_and_covers() {
        let t = PwlMap::tent();
        assert_eq!(t.interval_image(&iv((0, 1), (1, 2))).unwrap(), unit());
        assert_eq!(
            t.interval_image(&iv((1, 4), (3, 4))).unwrap(),
            iv((1, 2), (1, 1))
        );
        let id = PwlMap::identity(&unit()).unwrap();
        let j = iv((1, 5), (2, 3));
        assert_eq!(id.interval_image(&j).unwrap(), j);

        assert!(t.covers(&iv((0, 1), (1, 2)), &iv((1, 2), (1, 1))).unwrap());
        assert!(!id.covers(&iv((0, 1), (1, 2)), &iv((1, 2), (1, 1))).unwrap());
        assert!(!t.covers(&iv((0, 1), (1, 4)), &iv((3, 4), (1, 1))).unwrap());
        // degenerate target reduces to membership
        assert!(t
            .covers(&iv((0, 1), (1, 4)), &Interval::point(rat(1, 2)))
            .unwrap());
        assert!(!t
            .covers(&iv((0, 1), (1, 4)), &Interval::point(rat(2, 3)))
            .unwrap());
    }

    #[test]
    fn preimage_branch_examples() {
        let t = PwlMap::tent();
        assert_eq!(
            t.preimage_branches(&unit(), &unit()).unwrap(),
            vec![iv((0, 1), (1, 2)), iv((1, 2), (1, 1))]
        );
        assert_eq!(
            t.preimage_branches(&iv((0, 1), (1, 2)), &iv((1, 2), (1, 1)))
                .unwrap(),
            vec![iv((1, 4), (1, 2))]
        );
        let id = PwlMap::identity(&unit()).unwrap();
        let j = iv((1, 3), (3, 5));
        assert_eq!(id.preimage_branches(&j, &j).unwrap(), vec![j.clone()]);
        assert_eq!(
            t.preimage_branches(&iv((0, 1), (1, 4)), &iv((3, 4), (1, 1))),
            Err(Error::NotCovering)
        );
    }

    #[test]
    fn preimage_branches_keep_excursions() {
        // lo -> mid -> lo -> hi: the maximal branch starts at the first lo hit
        let f = PwlMap::from_breakpoints(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), rat(0, 1)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(f.preimage_branches(&unit(), &unit()).unwrap(), vec![unit()]);
    }

    #[test]
    fn fixed_point_examples() {
        let l = Limits::default();
        let t = PwlMap::tent();
        assert_eq!(
            t.fixed_points_of_iterate(1, &l).unwrap().points,
            vec![rat(0, 1), rat(2, 3)]
        );
        assert_eq!(
            t.fixed_points_of_iterate(2, &l).unwrap().points,
            vec![rat(0, 1), rat(2, 5), rat(2, 3), rat(4, 5)]
        );
    }

    #[test]
    fn identity_laps_are_flagged() {
        let flip =
            PwlMap::from_breakpoints(vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(0, 1))]).unwrap();
        let fp = flip.fixed_points_of_iterate(2, &Limits::default()).unwrap();
        assert!(fp.is_continuum());
        assert_eq!(fp.continua, vec![unit()]);
        assert_eq!(fp.points, vec![rat(0, 1), rat(1, 1)]);
        let orbits = flip.periodic_orbits_flagged(2, &Limits::default()).unwrap();
        assert!(orbits.continuum);
        assert!(orbits.orbits.iter().all(|o| o.period() == 2));
        assert_eq!(orbits.orbits[0].points(), &[rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn periodic_orbit_examples() {
        let l = Limits::default();
        let t = PwlMap::tent();
        let p2 = t.periodic_orbits(2, &l).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].points(), &[rat(2, 5), rat(4, 5)]);
        let p3 = t.periodic_orbits(3, &l).unwrap();
        assert_eq!(p3.len(), 2);
        assert_eq!(p3[0].points(), &[rat(2, 9), rat(4, 9), rat(8, 9)]);
        assert_eq!(p3[1].points(), &[rat(2, 7), rat(4, 7), rat(6, 7)]);
        let id = PwlMap::identity(&unit()).unwrap();
        assert!(id.periodic_orbits(2, &l).unwrap().is_empty());
    }

    #[test]
    fn clamp_examples() {
        let t = PwlMap::tent();
        let t3 = t.clamp(&rat(2, 7), &rat(6, 7)).unwrap();
        for (x, y) in [
            ((0, 1), (2, 7)),
            ((1, 14), (2, 7)),
            ((1, 7), (2, 7)),
            ((3, 7), (6, 7)),
            ((1, 2), (6, 7)),
            ((4, 7), (6, 7)),
            ((6, 7), (2, 7)),
            ((1, 1), (2, 7)),
            ((2, 7), (4, 7)),
        ] {
            assert_eq!(t3.eval(&rat(x.0, x.1)).unwrap(), rat(y.0, y.1), "x = {x:?}");
        }
        let xs: Vec<_> = t3.breakpoints().map(|(x, _)| x.clone()).collect();
        for b in [rat(1, 7), rat(3, 7), rat(4, 7), rat(6, 7)] {
            assert!(xs.contains(&b));
        }
        assert_eq!(t.clamp(&rat(0, 1), &rat(1, 1)).unwrap(), t);
        assert!(matches!(
            t.clamp(&rat(1, 2), &rat(1, 3)),
            Err(Error::BadClampBounds { .. })
        ));
    }

    #[test]
    fn reflection_is_an_involution() {
        let f = three_cycle();
        let g = f.reflect();
        assert_eq!(g.reflect(), f);
        // g(x) = 1 - f(1 - x)
        assert_eq!(g.eval(&rat(1, 1)).unwrap(), rat(1, 2));
    }

    #[test]
    fn orbit_checks() {
        let f = three_cycle();
        let o = Orbit::from_points(vec![rat(1, 1), rat(0, 1), rat(1, 2)]).unwrap();
        assert!(o.is_orbit_of(&f));
        assert_eq!(o.period(), 3);
        let not = Orbit::from_points(vec![rat(0, 1), rat(1, 2)]).unwrap();
        assert!(!not.is_orbit_of(&f));
        assert_eq!(
            Orbit::from_points(vec![rat(0, 1), rat(0, 1)]),
            Err(Error::NotAnOrbit)
        );
    }
}
