use std::collections::BTreeSet;
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sharkovsky_core::order::{
    forced_periods_upto, forces, iterate_least_period, lift_least_periods,
};
use sharkovsky_core::pattern::{is_stefan_pattern, realized_periods, stefan_pattern};
use sharkovsky_core::tent::{
    doubling_chain, minimal_diameter_orbit, period_spectrum, t_infinity_level, truncated_tent,
};
use sharkovsky_core::witness::{has_least_period, prop3_period2, prop5_witness};
use sharkovsky_core::{
    connect_the_dots, pattern_orbit, rat, CyclicPattern, Limits, Orbit, PwlMap, Rational,
    SpectrumMethod,
};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn orbit(points: &[(i64, i64)]) -> Orbit {
    Orbit::from_points(points.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
}

/// Roots of `T^k(x) = x` one lap at a time: on increasing lap `j` (even)
/// `T^k(x) = 2^k x - j`, on decreasing lap `j` (odd) `T^k(x) = j + 1 - 2^k x`.
fn tent_roots_by_lap(k: u32) -> Vec<Rational> {
    let n = 1i64 << k;
    let mut roots = Vec::new();
    for j in 0..n {
        let x = if j % 2 == 0 {
            rat(j, n - 1)
        } else {
            rat(j + 1, n + 1)
        };
        if x >= rat(j, n) && x <= rat(j + 1, n) {
            roots.push(x);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn root_count_law() -> Result<(), String> {
    let t = PwlMap::tent();
    let limits = Limits::default();
    for k in 1..=14u32 {
        let fixed = t.fixed_points_of_iterate(k as usize, &limits).map_err(e)?;
        ensure(!fixed.is_continuum(), || format!("k={k}: identity lap"))?;
        ensure(fixed.len() == 1 << k, || {
            format!("k={k}: {} roots", fixed.len())
        })?;
        if k <= 10 {
            ensure(fixed.points == tent_roots_by_lap(k), || {
                format!("k={k}: roots differ from lap solve")
            })?;
        }
    }
    Ok(())
}

fn minimal_p3() -> Result<(), String> {
    let t = PwlMap::tent();
    let limits = Limits::default();
    let mut oracle: Vec<Rational> = tent_roots_by_lap(3)
        .into_iter()
        .filter(|x| t.eval(x).unwrap() != *x)
        .collect();
    oracle.sort();
    let expected = vec![
        orbit(&[(2, 9), (4, 9), (8, 9)]),
        orbit(&[(2, 7), (4, 7), (6, 7)]),
    ];
    let mut from_oracle: Vec<Rational> =
        expected.iter().flat_map(|o| o.points().to_vec()).collect();
    from_oracle.sort();
    ensure(from_oracle == oracle, || {
        "oracle roots disagree with expected orbits".into()
    })?;
    let found = t.periodic_orbits(3, &limits).map_err(e)?;
    ensure(found == expected, || {
        format!("periodic_orbits(T,3) = {found:?}")
    })?;
    let p3 = minimal_diameter_orbit(&t, 3, &t.domain(), &limits).map_err(e)?;
    ensure(p3 == expected[1], || format!("minimal orbit {p3:?}"))
}

fn truncation_spectrum() -> Result<(), String> {
    let limits = Limits::default();
    for k in [1usize, 2, 3, 4, 5, 6, 8] {
        let tk = truncated_tent(k, &limits).map_err(e)?;
        let spectrum = period_spectrum(&tk.map, 10, &limits).map_err(e)?;
        let own = tk.map.periodic_orbits(k, &limits).map_err(e)?;
        ensure(own == vec![tk.anchor_orbit.clone()], || {
            format!("T_{k}: period-{k} orbits {own:?}")
        })?;
        let realized: Vec<u64> = spectrum
            .iter()
            .filter(|s| s.orbit_count > 0)
            .map(|s| s.period as u64)
            .collect();
        let tail = forced_periods_upto(k as u64, 10);
        ensure(realized == tail, || {
            format!("T_{k}: spectrum {realized:?}, tail {tail:?}")
        })?;
        ensure(spectrum.iter().all(|s| !s.continuum), || {
            format!("T_{k}: identity lap")
        })?;
    }
    Ok(())
}

fn upward_closed(periods: &BTreeSet<usize>, upto: usize) -> bool {
    periods
        .iter()
        .all(|&k| (1..=upto).all(|j| !forces(k as u64, j as u64) || periods.contains(&j)))
}

fn sharkovsky_sufficiency() -> Result<(), String> {
    let limits = Limits::default();
    let mut count = 0;
    for m in 2..=6 {
        for p in CyclicPattern::all(m) {
            count += 1;
            let walks = realized_periods(&p, 8, SpectrumMethod::Walks, &limits).map_err(e)?;
            ensure(upward_closed(&walks, 8), || {
                format!("{p}: {walks:?} not upward-closed")
            })?;
            ensure(walks.contains(&m), || {
                format!("{p}: own period missing from {walks:?}")
            })?;
            if m <= 5 {
                let direct = realized_periods(&p, 8, SpectrumMethod::Direct, &limits).map_err(e)?;
                ensure(direct == walks, || {
                    format!("{p}: direct {direct:?} vs walks {walks:?}")
                })?;
            }
        }
    }
    ensure(count == 153, || format!("{count} patterns"))
}

fn prop3_witnesses() -> Result<(), String> {
    let limits = Limits::default();
    for m in 3..=7 {
        for p in CyclicPattern::all(m) {
            let f = connect_the_dots(&p);
            let w = prop3_period2(&f, &pattern_orbit(&p), &limits)
                .map_err(|err| format!("{p}: {err}"))?;
            ensure(has_least_period(&f, &w.y, 2), || {
                format!("{p}: y={} not period 2", w.y)
            })?;
        }
    }
    Ok(())
}

fn odd_patterns(m: usize, rng: &mut ChaCha8Rng) -> Vec<CyclicPattern> {
    let stefan = stefan_pattern(m).unwrap();
    let all = CyclicPattern::all(m);
    let mut chosen: Vec<CyclicPattern> = if all.len() <= 26 {
        all
    } else {
        all.choose_multiple(rng, 25).cloned().collect()
    };
    if !chosen.contains(&stefan) {
        chosen.push(stefan);
    }
    chosen
}

fn prop5_witnesses() -> Result<(), String> {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in [3usize, 5, 7] {
        let targets: BTreeSet<usize> = [2, 4, 6, 8, 10].into_iter().chain(m + 1..=m + 5).collect();
        for p in odd_patterns(m, &mut rng) {
            let f = connect_the_dots(&p);
            let orbit = pattern_orbit(&p);
            for &n in &targets {
                let w = prop5_witness(&f, &orbit, n, &limits)
                    .map_err(|err| format!("{p}, n={n}: {err}"))?;
                ensure(has_least_period(&f, &w.y, n), || {
                    format!("{p}, n={n}: y={} uncertified", w.y)
                })?;
            }
        }
    }
    Ok(())
}

fn lemma1_cross_validation() -> Result<(), String> {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..200 {
        let m = rng.gen_range(2..=7);
        let p = CyclicPattern::all(m).choose(&mut rng).unwrap().clone();
        let f = connect_the_dots(&p);
        let n = rng.gen_range(1..=6usize);
        let g = f.iterate(n, &limits).map_err(e)?;
        let expected = iterate_least_period(m as u64, n as u64) as usize;
        for x in pattern_orbit(&p).points() {
            ensure(g.least_period(x, m) == Some(expected), || {
                format!("case {case}: {p}, n={n}, x={x}")
            })?;
        }
        let k = rng.gen_range(1..=(8 / n).max(1));
        let lifts = lift_least_periods(k as u64, n as u64).map_err(e)?;
        for o in g.periodic_orbits(k, &limits).map_err(e)? {
            for x in o.points() {
                let period = f
                    .least_period(x, k * n)
                    .ok_or_else(|| format!("case {case}: {x} not periodic"))?;
                ensure(lifts.contains(&(period as u64)), || {
                    format!("case {case}: {p}, n={n}, k={k}, x={x} has period {period}")
                })?;
            }
        }
    }
    Ok(())
}

fn doubling_chain_levels() -> Result<(), String> {
    let limits = Limits::default();
    let t = PwlMap::tent();
    let chain = doubling_chain(1, &limits).map_err(e)?;
    let (q3, q6) = (&chain.levels[0], &chain.levels[1]);
    ensure(*q3 == orbit(&[(2, 7), (4, 7), (6, 7)]), || {
        format!("Q3 = {q3:?}")
    })?;
    ensure(q6.min() > q3.min() && q6.max() < q3.max(), || {
        "hulls not strictly nested".into()
    })?;
    ensure(
        q6.points().iter().all(|x| has_least_period(&t, x, 6)),
        || "Q6 not period 6".into(),
    )?;
    ensure(chain.q0 < chain.q1, || "q0 >= q1".into())?;
    let level1 = t_infinity_level(&chain).map_err(e)?;
    let six = level1.periodic_orbits(6, &limits).map_err(e)?;
    ensure(six == vec![q6.clone()], || {
        format!("period-6 orbits {six:?}")
    })?;
    let three = level1.periodic_orbits(3, &limits).map_err(e)?;
    ensure(three.is_empty(), || format!("period-3 orbits {three:?}"))?;
    let spectrum = period_spectrum(&level1, 8, &limits).map_err(e)?;
    for s in &spectrum {
        if s.period != 6 && forces(s.period as u64, 6) {
            ensure(s.orbit_count == 0, || {
                format!("period {} present", s.period)
            })?;
        }
    }
    Ok(())
}

fn remark_property() -> Result<(), String> {
    let limits = Limits::default();
    for m in [3usize, 5] {
        for p in CyclicPattern::all(m) {
            let periods = realized_periods(&p, m, SpectrumMethod::Direct, &limits).map_err(e)?;
            let smaller_odd = (3..m).step_by(2).any(|j| periods.contains(&j));
            let stefan = is_stefan_pattern(&p).map_err(e)?;
            ensure(smaller_odd || stefan, || {
                format!("{p}: no smaller odd period but not Štefan")
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("root-count law for T^k, k <= 14", root_count_law),
        ("minimal-diameter P3 of the tent map", minimal_p3),
        (
            "truncated tent spectra equal Sharkovsky tails",
            truncation_spectrum,
        ),
        (
            "pattern spectra up to 8 are upward-closed (m <= 6)",
            sharkovsky_sufficiency,
        ),
        (
            "period-2 witnesses for every pattern, 3 <= m <= 7",
            prop3_witnesses,
        ),
        (
            "odd-orbit witnesses for even and long periods",
            prop5_witnesses,
        ),
        (
            "iterate least periods on 200 random cases",
            lemma1_cross_validation,
        ),
        ("doubling chain to level 1", doubling_chain_levels),
        (
            "odd patterns without smaller odd periods are Štefan",
            remark_property,
        ),
    ];
    let results: Vec<(Result<(), String>, Duration)> = thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .map(|&(_, check)| {
                s.spawn(move || {
                    let start = Instant::now();
                    (check(), start.elapsed())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO))
            })
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (result, elapsed))) in checks.iter().zip(results).enumerate() {
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2?})", i + 1, elapsed),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} ({:.2?})", i + 1, elapsed);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
