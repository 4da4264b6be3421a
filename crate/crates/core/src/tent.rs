//! Truncations of the tent map that realize each tail of the Sharkovsky
//! ordering, and the nested period-doubling chain above period 3.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pwl::{Orbit, PwlMap};
use crate::rational::Rational;
use crate::Limits;

/// Among orbits of least period `k` lying in `within` (closed containment),
/// one of minimal diameter; ties go to the smallest minimum point.
pub fn minimal_diameter_orbit(
    f: &PwlMap,
    k: usize,
    within: &Interval,
    limits: &Limits,
) -> Result<Orbit> {
    f.periodic_orbits(k, limits)?
        .into_iter()
        .filter(|o| within.contains_interval(&o.hull()))
        .min_by(|a, b| (a.diameter(), a.min()).cmp(&(b.diameter(), b.min())))
        .ok_or(Error::NoSuchOrbit { period: k })
}

/// `f` clamped to the hull of one of its orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMap {
    pub base: PwlMap,
    pub anchor_orbit: Orbit,
    pub bounds: Interval,
    pub map: PwlMap,
}

pub fn truncate_at_orbit(f: &PwlMap, p: &Orbit) -> Result<TruncatedMap> {
    if !p.is_orbit_of(f) {
        return Err(Error::NotAnOrbit);
    }
    let bounds = p.hull();
    let map = f.clamp(bounds.lo(), bounds.hi())?;
    debug_assert!(p.is_orbit_of(&map));
    Ok(TruncatedMap {
        base: f.clone(),
        anchor_orbit: p.clone(),
        bounds,
        map,
    })
}

/// `T_k`: the tent map clamped to a minimal-diameter period-`k` orbit.
pub fn truncated_tent(k: usize, limits: &Limits) -> Result<TruncatedMap> {
    let t = PwlMap::tent();
    let pk = minimal_diameter_orbit(&t, k, &t.domain(), limits)?;
    truncate_at_orbit(&t, &pk)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub period: usize,
    pub orbit_count: usize,
    /// Some lap of `f^period` is the identity; `orbit_count` then counts
    /// sampled representatives only.
    pub continuum: bool,
}

/// Number of least-period-`k` orbits for each `k <= upto`.
pub fn period_spectrum(f: &PwlMap, upto: usize, limits: &Limits) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::with_capacity(upto);
    let mut g = f.clone();
    for k in 1..=upto {
        if k > 1 {
            g = f.compose(&g, limits)?;
        }
        let found = f.orbits_from_fixed(&g.fixed_points(), k)?;
        out.push(SpectrumEntry {
            period: k,
            orbit_count: found.orbits.len(),
            continuum: found.continuum,
        });
    }
    Ok(out)
}

/// Nested minimal-diameter orbits `Q_3, Q_6, Q_12, ...` of the tent map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingChain {
    pub levels: Vec<Orbit>,
    /// Largest orbit minimum over the computed levels.
    pub q0: Rational,
    /// Smallest orbit maximum over the computed levels.
    pub q1: Rational,
}

impl DoublingChain {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

/// `Q_{2^j·3}` for `j = 0..=levels`, each of minimal diameter within the
/// hull of the previous one.
pub fn doubling_chain(levels: usize, limits: &Limits) -> Result<DoublingChain> {
    let t = PwlMap::tent();
    let mut chain: Vec<Orbit> = Vec::with_capacity(levels + 1);
    let mut hull = t.domain();
    for j in 0..=levels {
        let period = 3usize.checked_shl(j as u32).ok_or(Error::Overflow)?;
        let q = minimal_diameter_orbit(&t, period, &hull, limits)?;
        if j > 0 && !(q.min() > hull.lo() && q.max() < hull.hi()) {
            return Err(Error::ChainNotNested { level: j });
        }
        hull = q.hull();
        chain.push(q);
    }
    let q0 = chain
        .iter()
        .map(|q| q.min())
        .max()
        .expect("nonempty")
        .clone();
    let q1 = chain
        .iter()
        .map(|q| q.max())
        .min()
        .expect("nonempty")
        .clone();
    Ok(DoublingChain {
        levels: chain,
        q0,
        q1,
    })
}

/// Finite-level stand-in for `T_∞`: the tent map clamped to `[q0, q1]` of
/// the chain's deepest level.
pub fn t_infinity_level(chain: &DoublingChain) -> Result<PwlMap> {
    PwlMap::tent().clamp(&chain.q0, &chain.q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::vec;

    #[test]
    fn minimal_orbits() {
        let l = Limits::default();
        let t = PwlMap::tent();
        let unit = t.domain();
        let p3 = minimal_diameter_orbit(&t, 3, &unit, &l).unwrap();
        assert_eq!(p3.points(), &[rat(2, 7), rat(4, 7), rat(6, 7)]);
        assert_eq!(p3.diameter(), rat(4, 7));
        let p1 = minimal_diameter_orbit(&t, 1, &unit, &l).unwrap();
        assert_eq!(p1.points(), &[rat(0, 1)]);
        let p2 = minimal_diameter_orbit(&t, 2, &unit, &l).unwrap();
        assert_eq!(p2.points(), &[rat(2, 5), rat(4, 5)]);
        let tight = Interval::new(rat(1, 2), rat(1, 1)).unwrap();
        assert_eq!(
            minimal_diameter_orbit(&t, 3, &tight, &l),
            Err(Error::NoSuchOrbit { period: 3 })
        );
    }

    #[test]
    fn truncations() {
        let t = PwlMap::tent();
        let p3 = Orbit::from_points(vec![rat(2, 7), rat(4, 7), rat(6, 7)]).unwrap();
        let t3 = truncate_at_orbit(&t, &p3).unwrap();
        assert_eq!(t3.map, t.clamp(&rat(2, 7), &rat(6, 7)).unwrap());
        assert!(p3.is_orbit_of(&t3.map));
        let zero = Orbit::from_points(vec![rat(0, 1)]).unwrap();
        let t1 = truncate_at_orbit(&t, &zero).unwrap();
        let constant =
            PwlMap::from_breakpoints(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(0, 1))]).unwrap();
        assert_eq!(t1.map, constant);
        let bogus = Orbit::from_points(vec![rat(1, 3), rat(1, 2)]).unwrap();
        assert_eq!(truncate_at_orbit(&t, &bogus), Err(Error::NotAnOrbit));
    }

    #[test]
    fn spectra() {
        let l = Limits::default();
        let counts = |f: &PwlMap, k| -> Vec<usize> {
            period_spectrum(f, k, &l)
                .unwrap()
                .into_iter()
                .map(|e| e.orbit_count)
                .collect()
        };
        assert_eq!(counts(&PwlMap::tent(), 3), [2, 1, 2]);
        let t3 = truncated_tent(3, &l).unwrap();
        assert_eq!(counts(&t3.map, 3)[2], 1);
        let constant =
            PwlMap::from_breakpoints(vec![(rat(0, 1), rat(1, 3)), (rat(1, 1), rat(1, 3))]).unwrap();
        assert_eq!(counts(&constant, 5), [1, 0, 0, 0, 0]);
    }

    #[test]
    fn chain_levels() {
        let l = Limits::default();
        let c0 = doubling_chain(0, &l).unwrap();
        assert_eq!(c0.levels[0].points(), &[rat(2, 7), rat(4, 7), rat(6, 7)]);
        assert_eq!((c0.q0.clone(), c0.q1.clone()), (rat(2, 7), rat(6, 7)));
        assert_eq!(
            t_infinity_level(&c0).unwrap(),
            truncated_tent(3, &l).unwrap().map
        );
        let c1 = doubling_chain(1, &l).unwrap();
        let q6 = &c1.levels[1];
        assert_eq!(q6.period(), 6);
        assert!(q6.min() > &rat(2, 7) && q6.max() < &rat(6, 7));
        assert_eq!(c1.q0, q6.min().clone());
        assert_eq!(c1.q1, q6.max().clone());
    }
}
