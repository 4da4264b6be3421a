//! Constructive periodic-point witnesses.
//!
//! Each routine follows a covering argument step by step and returns the
//! exact point it produces together with the intermediate points, so that
//! every claim can be re-checked by evaluation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pattern::IntervalLoop;
use crate::pwl::{FixedSolution, Orbit, Piece, PwlMap};
use crate::rational::Rational;
use crate::Limits;

/// `f^n(y) = y` and `f^i(y) != y` for `0 < i < n`.
pub fn has_least_period(f: &PwlMap, y: &Rational, n: usize) -> bool {
    f.domain().contains(y) && f.least_period(y, n) == Some(n)
}

/// Pieces of `f^n` on the set of `x ∈ J_0` with `f^i(x) ∈ J_i` for every
/// `i`, including `f^n(x) ∈ J_0`.
fn itinerary_pieces(f: &PwlMap, lp: &IntervalLoop, limits: &Limits) -> Result<Vec<Piece>> {
    let js = lp.intervals();
    let n = js.len();
    let mut pieces = vec![Piece::identity_on(&js[0])];
    for i in 0..n {
        let target = &js[(i + 1) % n];
        let mut next = Vec::with_capacity(pieces.len());
        for p in &pieces {
            f.push_through(p, &mut next);
        }
        pieces = next.into_iter().filter_map(|p| p.clip(target)).collect();
        if pieces.len() > limits.pieces {
            return Err(Error::PieceBudgetExceeded {
                budget: limits.pieces,
            });
        }
        if pieces.is_empty() {
            break;
        }
    }
    Ok(pieces)
}

/// Candidate solutions of `f^n(x) = x` among `pieces`, ascending. Identity
/// laps contribute the sample points of
/// [`PwlMap::identity_lap_representatives`].
fn fixed_candidates(f: &PwlMap, pieces: &[Piece], n: usize) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for p in pieces {
        match p.solve_fixed() {
            FixedSolution::None => {}
            FixedSolution::Point(x) => out.push(x),
            FixedSolution::Segment(a, b) => {
                out.extend(f.identity_lap_representatives(&Interval::spanning(a, b), n)?)
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A periodic point following the interval loop: `f^i(y) ∈ J_i` and
/// `f^n(y) = y`. All such points are enumerated exactly and the smallest is
/// returned; with `require_least_period` the smallest of least period `n`.
pub fn lemma4_periodic_point(
    f: &PwlMap,
    lp: &IntervalLoop,
    require_least_period: bool,
    limits: &Limits,
) -> Result<Rational> {
    lp.check_covering(f)?;
    let n = lp.len();
    let pieces = itinerary_pieces(f, lp, limits)?;
    fixed_candidates(f, &pieces, n)?
        .into_iter()
        .find(|y| !require_least_period || f.least_period(y, n) == Some(n))
        .ok_or(Error::NoLeastPeriodWitness { period: n })
}

/// Lemma 4 by backward nesting: pick the leftmost preimage branch
/// `L_{i} ⊆ J_i` with `f(L_i) = L_{i+1}` (and `L_n = J_0`), then return the
/// smallest solution of `f^n(y) = y` on `L_0`. No least-period filtering.
pub fn lemma4_nested_point(f: &PwlMap, lp: &IntervalLoop, limits: &Limits) -> Result<Rational> {
    lp.check_covering(f)?;
    let js = lp.intervals();
    let n = js.len();
    let mut target = js[0].clone();
    let mut nested = vec![target.clone(); n];
    for i in (0..n).rev() {
        let branches = f.preimage_branches(&js[i], &target)?;
        target = branches
            .into_iter()
            .next()
            .ok_or(Error::NotACycle { index: i })?;
        nested[i] = target.clone();
    }
    let mut pieces = vec![Piece::identity_on(&nested[0])];
    for _ in 0..n {
        let mut next = Vec::with_capacity(pieces.len());
        for p in &pieces {
            f.push_through(p, &mut next);
        }
        if next.len() > limits.pieces {
            return Err(Error::PieceBudgetExceeded {
                budget: limits.pieces,
            });
        }
        pieces = next;
    }
    fixed_candidates(f, &pieces, n)?
        .into_iter()
        .next()
        .ok_or(Error::NoLeastPeriodWitness { period: n })
}

/// Pieces of `g` over the part of its domain inside `within`.
fn restrict(g: &PwlMap, within: &Interval) -> Vec<Piece> {
    g.pieces()
        .filter(|p| &p.x1 >= within.lo() && &p.x0 <= within.hi())
        .map(|p| {
            let x0 = if &p.x0 < within.lo() {
                within.lo().clone()
            } else {
                p.x0.clone()
            };
            let x1 = if &p.x1 > within.hi() {
                within.hi().clone()
            } else {
                p.x1.clone()
            };
            Piece {
                y0: g.eval_unchecked(&x0),
                y1: g.eval_unchecked(&x1),
                x0,
                x1,
            }
        })
        .collect()
}

/// Smallest `x ∈ within` with `f(x) = target`.
fn leftmost_preimage(f: &PwlMap, within: &Interval, target: &Rational) -> Option<Rational> {
    restrict(f, within).into_iter().find_map(|p| {
        if &p.y0 == target {
            Some(p.x0)
        } else if &p.y1 == target {
            Some(p.x1)
        } else if (&p.y0 < target && target < &p.y1) || (&p.y1 < target && target < &p.y0) {
            Some(&p.x0 + (target - &p.y0) * (&p.x1 - &p.x0) / (&p.y1 - &p.y0))
        } else {
            None
        }
    })
}

/// Smallest `y ∈ within` with `f^2(y) = y` and `f(y) != y`.
fn leftmost_period_two(f: &PwlMap, within: &Interval, limits: &Limits) -> Result<Option<Rational>> {
    let f2 = f.iterate(2, limits)?;
    for p in restrict(&f2, within) {
        let candidates = match p.solve_fixed() {
            FixedSolution::None => continue,
            FixedSolution::Point(x) => vec![x],
            FixedSolution::Segment(a, b) => {
                f.identity_lap_representatives(&Interval::spanning(a, b), 2)?
            }
        };
        if let Some(y) = candidates.into_iter().find(|y| &f.eval_unchecked(y) != y) {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period2Case {
    NoFixedPointLeft,
    FixedPointLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period2Witness {
    pub c: Rational,
    pub d: Rational,
    /// Smallest fixed point in `[c, d]`.
    pub w: Rational,
    /// `f(v) = d`, `v ∈ [c, w]`.
    pub v: Rational,
    /// Largest fixed point left of `c`, when there is one.
    pub t: Option<Rational>,
    /// `f(u) = c`, `u ∈ [t, c]`.
    pub u: Option<Rational>,
    pub y: Rational,
    pub case: Period2Case,
}

impl Period2Witness {
    pub fn orbit(&self, f: &PwlMap) -> Orbit {
        Orbit::generated_by(f, &self.y, 2).expect("certified period-2 point")
    }
}

/// A point of least period 2 from a pair `f(d) <= c < d <= f(c)`.
pub fn lemma2_period2(
    f: &PwlMap,
    c: &Rational,
    d: &Rational,
    limits: &Limits,
) -> Result<Period2Witness> {
    let fc = f.eval(c)?;
    let fd = f.eval(d)?;
    if !(fd <= *c && c < d && *d <= fc) {
        return Err(Error::PreconditionViolated("need f(d) <= c < d <= f(c)"));
    }
    let dom = f.domain();
    let fixed = f.fixed_points();
    let w = fixed
        .points
        .iter()
        .find(|x| *x >= c && *x <= d)
        .cloned()
        .ok_or(Error::PreconditionViolated("no fixed point in [c, d]"))?;
    let v = leftmost_preimage(f, &Interval::spanning(c.clone(), w.clone()), d)
        .ok_or(Error::PreconditionViolated("d is not attained on [c, w]"))?;
    let t = fixed.points.iter().rfind(|x| *x < c).cloned();
    let (case, u, search) = match &t {
        None => (
            Period2Case::NoFixedPointLeft,
            None,
            Interval::spanning(dom.lo().clone(), v.clone()),
        ),
        Some(t) => {
            let u = leftmost_preimage(f, &Interval::spanning(t.clone(), c.clone()), c)
                .ok_or(Error::PreconditionViolated("c is not attained on [t, c]"))?;
            let search = Interval::spanning(u.clone(), v.clone());
            (Period2Case::FixedPointLeft, Some(u), search)
        }
    };
    let y = leftmost_period_two(f, &search, limits)?
        .ok_or(Error::NoLeastPeriodWitness { period: 2 })?;
    debug_assert!(has_least_period(f, &y, 2));
    Ok(Period2Witness {
        c: c.clone(),
        d: d.clone(),
        w,
        v,
        t,
        u,
        y,
        case,
    })
}

fn check_orbit(f: &PwlMap, p: &Orbit) -> Result<()> {
    if p.is_orbit_of(f) {
        Ok(())
    } else {
        Err(Error::NotAnOrbit)
    }
}

/// 1-based index of the largest orbit point moved to the right.
fn rightmost_rising(f: &PwlMap, p: &Orbit) -> usize {
    p.points()
        .iter()
        .rposition(|x| x < &f.eval_unchecked(x))
        .expect("the smallest orbit point moves right")
        + 1
}

/// A period-2 witness from an orbit of least period at least 3.
pub fn prop3_period2(f: &PwlMap, p: &Orbit, limits: &Limits) -> Result<Period2Witness> {
    check_orbit(f, p)?;
    if p.period() <= 2 {
        return Err(Error::PeriodTooSmall(p.period()));
    }
    let s = rightmost_rising(f, p);
    let xs = p.points();
    lemma2_period2(f, &xs[s - 1], &xs[s], limits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop5Case {
    /// The orbit has period 3.
    M3,
    /// `x_{t+1} <= f^{q-1}(x_s) < x_s`.
    Q1LeftOfXs,
    /// `f^{q-1}(x_s) = x_{s+1}`.
    Q1EqualsXs1,
    /// `x_{s+1} <= f^{k-1}(x_s) < f^{q-1}(x_s)`.
    KCaseLeft,
    /// `x_{t+1} <= f^{k-1}(x_s) <= x_s`.
    KCaseRight,
}

impl Prop5Case {
    pub fn name(self) -> &'static str {
        match self {
            Prop5Case::M3 => "M3",
            Prop5Case::Q1LeftOfXs => "Q1LeftOfXs",
            Prop5Case::Q1EqualsXs1 => "Q1EqualsXs1",
            Prop5Case::KCaseLeft => "KCaseLeft",
            Prop5Case::KCaseRight => "KCaseRight",
        }
    }

    /// Cases whose only loop yields a period-3 point.
    pub fn reduces_to_period3(self) -> bool {
        matches!(
            self,
            Prop5Case::Q1LeftOfXs | Prop5Case::Q1EqualsXs1 | Prop5Case::KCaseLeft
        )
    }
}

/// Case analysis of an odd orbit. Indices are 1-based in the orbit's own
/// ascending order; points are in the map's coordinates. When `mirrored`,
/// the analysis ran on the reflected map, where `t < s` holds, and the
/// choices of `u, v, w` are leftmost in that frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop5Trace {
    pub orbit: Orbit,
    pub s: usize,
    pub t: usize,
    pub q: usize,
    pub z: Rational,
    pub k: Option<usize>,
    pub u: Option<Rational>,
    pub v: Option<Rational>,
    pub w: Option<Rational>,
    pub mirrored: bool,
    pub case: Prop5Case,
}

/// The analysis in the frame where `x_t < x_s`.
struct Oriented {
    map: PwlMap,
    xs: Vec<Rational>,
    s: usize,
    t: usize,
    z: Rational,
    /// `f^i(x_s)` for `0 <= i <= m`.
    forward: Vec<Rational>,
    q: usize,
    k: Option<usize>,
    uvw: Option<(Rational, Rational, Rational)>,
    case: Prop5Case,
}

impl Oriented {
    fn build(map: PwlMap, xs: Vec<Rational>, s: usize, t: usize, z: Rational) -> Result<Oriented> {
        let m = xs.len();
        debug_assert!(t < s);
        let mut forward = vec![xs[s - 1].clone()];
        for i in 0..m {
            let next = map.eval_unchecked(&forward[i]);
            forward.push(next);
        }
        let (x_t, x_t1) = (&xs[t - 1], &xs[t]);
        let (x_s, x_s1) = (&xs[s - 1], &xs[s]);
        let q = (1..=m)
            .find(|&i| &forward[i] <= x_t)
            .ok_or(Error::NotAnOrbit)?;
        let mut k = None;
        let mut uvw = None;
        let case = if m == 3 {
            Prop5Case::M3
        } else {
            let p = &forward[q - 1];
            if x_t1 <= p && p < x_s {
                Prop5Case::Q1LeftOfXs
            } else if p == x_s1 {
                Prop5Case::Q1EqualsXs1
            } else {
                let kk = (1..q)
                    .find(|&i| p <= &forward[i])
                    .expect("i = q - 1 qualifies");
                k = Some(kk);
                let r = &forward[kk - 1];
                if x_s1 <= r && r < p {
                    Prop5Case::KCaseLeft
                } else {
                    debug_assert!(x_t1 <= r && r <= x_s);
                    let missing = Error::PreconditionViolated("covering point not found");
                    let u =
                        leftmost_preimage(&map, &Interval::spanning(x_t.clone(), x_t1.clone()), &z)
                            .ok_or(missing.clone())?;
                    let w = leftmost_preimage(&map, &Interval::spanning(z.clone(), p.clone()), &u)
                        .ok_or(missing.clone())?;
                    let v = leftmost_preimage(&map, &Interval::spanning(r.clone(), z.clone()), &w)
                        .ok_or(missing)?;
                    uvw = Some((u, v, w));
                    Prop5Case::KCaseRight
                }
            }
        };
        Ok(Oriented {
            map,
            xs,
            s,
            t,
            z,
            forward,
            q,
            k,
            uvw,
            case,
        })
    }

    fn interval_between(&self, a: usize) -> Interval {
        Interval::spanning(self.xs[a - 1].clone(), self.xs[a].clone())
    }

    /// `[z : f^i(x_s)]`.
    fn hull_with_z(&self, i: usize) -> Interval {
        Interval::spanning(self.z.clone(), self.forward[i].clone())
    }

    fn cycle(&self, n: usize) -> Result<Vec<Interval>> {
        let m = self.xs.len();
        let unsupported = Error::UnsupportedPeriodForCase {
            period: n,
            case: self.case.name(),
        };
        let z = &self.z;
        let jt = self.interval_between(self.t);
        let js = self.interval_between(self.s);
        let out = match self.case {
            Prop5Case::M3 => match n {
                0 => return Err(unsupported),
                1 => vec![js],
                _ => {
                    let mut v = vec![jt];
                    v.extend(core::iter::repeat_n(js, n - 1));
                    v
                }
            },
            Prop5Case::Q1LeftOfXs => {
                if n != 3 {
                    return Err(unsupported);
                }
                let p = &self.forward[self.q - 1];
                let a = Interval::spanning(self.xs[self.t - 1].clone(), p.clone());
                let b = Interval::spanning(p.clone(), z.clone());
                vec![a, b.clone(), b]
            }
            Prop5Case::Q1EqualsXs1 => {
                if n != 3 {
                    return Err(unsupported);
                }
                vec![
                    Interval::spanning(z.clone(), self.xs[self.s].clone()),
                    jt,
                    js,
                ]
            }
            Prop5Case::KCaseLeft => {
                if n != 3 {
                    return Err(unsupported);
                }
                let k = self.k.expect("k is set in the k cases");
                let p = &self.forward[self.q - 1];
                let r = &self.forward[k - 1];
                let a = Interval::spanning(r.clone(), p.clone());
                let b = Interval::spanning(z.clone(), r.clone());
                vec![a, b.clone(), b]
            }
            Prop5Case::KCaseRight => {
                let (u, v, w) = self.uvw.as_ref().expect("u, v, w are set in KCaseRight");
                if n >= 2 && n.is_multiple_of(2) {
                    let uv = Interval::spanning(u.clone(), v.clone());
                    let zw = Interval::spanning(z.clone(), w.clone());
                    let vz = Interval::spanning(v.clone(), z.clone());
                    let mut out = vec![uv];
                    for _ in 0..(n - 2) / 2 {
                        out.push(zw.clone());
                        out.push(vz.clone());
                    }
                    out.push(zw);
                    out
                } else if n > m {
                    let k = self.k.expect("k is set in the k cases");
                    let mut out: Vec<Interval> = (0..k).map(|i| self.hull_with_z(i)).collect();
                    out.push(self.hull_with_z(self.q - 1));
                    out.push(jt);
                    let fill = n - k - 2;
                    out.extend(core::iter::repeat_n(js, fill));
                    out
                } else {
                    return Err(unsupported);
                }
            }
        };
        Ok(out)
    }
}

/// Recover the oriented frame for a trace; returns the reflection sum when
/// the trace is mirrored.
fn orient(
    f: &PwlMap,
    orbit: &Orbit,
    s: usize,
    t: usize,
    z: &Rational,
) -> Result<(Oriented, Option<Rational>)> {
    let m = orbit.period();
    if t < s {
        let o = Oriented::build(f.clone(), orbit.points().to_vec(), s, t, z.clone())?;
        Ok((o, None))
    } else {
        let sum = f.reflection_sum();
        let xs = orbit.reflect(&sum).points().to_vec();
        let o = Oriented::build(f.reflect(), xs, m - s, m - t, &sum - z)?;
        Ok((o, Some(sum)))
    }
}

pub fn prop5_analyze(f: &PwlMap, p: &Orbit) -> Result<Prop5Trace> {
    check_orbit(f, p)?;
    let m = p.period();
    if m.is_multiple_of(2) {
        return Err(Error::EvenPeriod(m));
    }
    if m < 3 {
        return Err(Error::PeriodTooSmall(m));
    }
    let xs = p.points();
    let s = rightmost_rising(f, p);
    let z = f
        .fixed_points()
        .points
        .into_iter()
        .find(|x| x >= &xs[s - 1] && x <= &xs[s])
        .expect("f(x_s) > x_s and f(x_{s+1}) < x_{s+1}");
    let sign_change = |t: usize| {
        let a = f.eval_unchecked(&xs[t - 1]);
        let b = f.eval_unchecked(&xs[t]);
        (a < z) != (b < z)
    };
    let t = (1..s)
        .rev()
        .find(|&t| sign_change(t))
        .or_else(|| (s + 1..m).find(|&t| sign_change(t)))
        .ok_or(Error::PreconditionViolated(
            "no interval maps across the fixed point",
        ))?;
    let (o, sum) = orient(f, p, s, t, &z)?;
    let back = |x: &Rational| match &sum {
        Some(sum) => sum - x,
        None => x.clone(),
    };
    let (u, v, w) = match &o.uvw {
        Some((u, v, w)) => (Some(back(u)), Some(back(v)), Some(back(w))),
        None => (None, None, None),
    };
    Ok(Prop5Trace {
        orbit: p.clone(),
        s,
        t,
        q: o.q,
        z,
        k: o.k,
        u,
        v,
        w,
        mirrored: sum.is_some(),
        case: o.case,
    })
}

/// The interval loop of length `n` the trace's case provides, checked for
/// covering against `f`.
pub fn prop5_cycles(f: &PwlMap, trace: &Prop5Trace, n: usize) -> Result<IntervalLoop> {
    let (o, sum) = orient(f, &trace.orbit, trace.s, trace.t, &trace.z)?;
    debug_assert_eq!(o.case, trace.case);
    let lp = IntervalLoop::new(o.cycle(n)?)?;
    debug_assert!(lp.check_covering(&o.map).is_ok());
    let lp = match sum {
        Some(sum) => lp.reflect(&sum),
        None => lp,
    };
    lp.check_covering(f)?;
    Ok(lp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop5Witness {
    pub trace: Prop5Trace,
    /// Period-3 point and its analysis, when the original case only
    /// produces period 3.
    pub period3: Option<(Rational, Prop5Trace)>,
    pub cycle: IntervalLoop,
    pub y: Rational,
}

/// A point of least period `n` from an orbit of odd period `m >= 3`.
pub fn prop5_witness(f: &PwlMap, p: &Orbit, n: usize, limits: &Limits) -> Result<Prop5Witness> {
    let trace = prop5_analyze(f, p)?;
    let (period3, active) = if trace.case.reduces_to_period3() {
        let lp3 = prop5_cycles(f, &trace, 3)?;
        let y3 = lemma4_periodic_point(f, &lp3, true, limits)?;
        let p3 = Orbit::generated_by(f, &y3, 3)?;
        let t3 = prop5_analyze(f, &p3)?;
        (Some((y3, t3.clone())), t3)
    } else {
        (None, trace.clone())
    };
    let cycle = prop5_cycles(f, &active, n)?;
    let y = lemma4_periodic_point(f, &cycle, true, limits)?;
    debug_assert!(has_least_period(f, &y, n));
    Ok(Prop5Witness {
        trace,
        period3,
        cycle,
        y,
    })
}
