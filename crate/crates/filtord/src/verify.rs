//! The acceptance suite: every criterion is runnable programmatically (the
//! `verify` CLI subcommand) and from the integration test target. Each check
//! pins its grid, tolerances, and seeds here.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::characters::{
    character_jumpset_family, finite_quotient_jump_sets, is_adequate, is_compatible, ModuleSpec,
};
use crate::eisenstein::{jump_set_of_shape, ramification_polygon, realize, shape_of_tower,
    tame_transform};
use crate::filtered::{torsion_order, ValuationVector, Weight};
use crate::jumpset::{enumerate, enumerate_admissible, JumpSet};
use crate::padic::{
    default_precision, field_jump_set, ramification_newton, sample_eisenstein, substitute_power,
    Tower,
};
use crate::seed::derive;
use crate::shift::Shift;
use crate::shooting::{exact_distribution, haar_distribution, identity_checks, Rat};

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

fn ep(p: u64, e: u64) -> Shift {
    Shift::rho_ep(p, e).unwrap()
}

fn rat_f64(r: &Rat) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap();
    let d: f64 = r.denom().to_string().parse().unwrap();
    n / d
}

/// Criterion 1: the three quadratic classes over Q_2 have masses
/// 1/2, 1/4, 1/4, exactly.
fn c1() -> (bool, String) {
    let shift = ep(2, 2);
    let dist = exact_distribution(&shift, 2, 2, 2, true).unwrap();
    let js = |entries: &[(u64, u32)]| {
        JumpSet::new(shift.clone(), true, entries.to_vec()).unwrap()
    };
    let half = Rat::new(1.into(), 2.into());
    let quarter = Rat::new(1.into(), 4.into());
    let ok = dist.map.len() == 3
        && dist.mass(&js(&[(1, 2), (3, 1)])) == half
        && dist.mass(&js(&[(1, 2)])) == quarter
        && dist.mass(&js(&[(1, 2), (4, 1)])) == quarter
        && dist.total() == Rat::one();
    (
        ok,
        format!(
            "masses: {{1,3}}->{}, {{1}}->{}, {{1,4}}->{}",
            dist.mass(&js(&[(1, 2), (3, 1)])),
            dist.mass(&js(&[(1, 2)])),
            dist.mass(&js(&[(1, 2), (4, 1)]))
        ),
    )
}

fn mass_grid() -> Vec<(u64, u32, u64)> {
    let mut grid = Vec::new();
    for p in [2u64, 3, 5] {
        for f in [1u32, 2] {
            for e0 in 1..=6u64 {
                grid.push((p, f, e0));
            }
        }
    }
    grid
}

/// Criterion 2: Haar-side distribution equals the shooting distribution at
/// r = e', conditioned on admissibility, exactly, across the grid.
fn c2() -> (bool, String) {
    let mut checked = 0;
    for (p, f, e0) in mass_grid() {
        let shift = ep(p, (p - 1) * e0);
        let q = p.pow(f);
        let haar = haar_distribution(&shift, p, f).unwrap();
        let game = exact_distribution(&shift, q, p, shift.e_prime().unwrap(), true).unwrap();
        // condition the game side on admissibility (a no-op at r = e', which
        // is itself part of the check)
        let total: Rat = game
            .map
            .iter()
            .filter(|(js, _)| js.is_admissible().unwrap())
            .map(|(_, m)| m.clone())
            .sum();
        let conditioned: BTreeMap<JumpSet, Rat> = game
            .map
            .iter()
            .filter(|(js, _)| js.is_admissible().unwrap())
            .map(|(js, m)| (js.clone(), m / &total))
            .collect();
        if haar.map != conditioned {
            return (
                false,
                format!("mismatch at p={p} f={f} e0={e0}"),
            );
        }
        checked += 1;
    }
    (true, format!("{checked} grid points, two algorithms, equal maps"))
}

/// Criterion 3: the most probable admissible jump set has mass (q-1)/q.
/// The law holds where the strongly Eisenstein class exists, i.e. p | e0;
/// at tame degrees (p coprime to e0) the admissible distribution is a point
/// mass, which is checked as the degenerate form.
fn c3() -> (bool, String) {
    let mut wild = 0;
    for (p, f, e0) in mass_grid() {
        let shift = ep(p, (p - 1) * e0);
        let q = p.pow(f);
        let dist = exact_distribution(&shift, q, p, shift.e_prime().unwrap(), true).unwrap();
        let max = dist.map.values().max().unwrap().clone();
        if e0 % p == 0 {
            if max != Rat::new((q - 1).into(), q.into()) {
                return (false, format!("p={p} f={f} e0={e0}: max mass {max}"));
            }
            wild += 1;
        } else if dist.map.len() != 1 || !max.is_one() {
            return (
                false,
                format!("p={p} f={f} e0={e0}: tame degree should be deterministic"),
            );
        }
    }
    (true, format!("max mass = (q-1)/q at all {wild} wild grid points"))
}

/// Criterion 4: the starred-decomposition identity
/// `(p-1) mu*(min beta >= j+1) = mu*(beta(e*) = j)` for every j, on grid
/// points with v(e*) >= 2.
fn c4() -> (bool, String) {
    let mut checked = 0;
    for (p, f, e0) in mass_grid() {
        if e0 % p != 0 {
            continue; // v(e*) = 1 + v_p(e') needs p | e0
        }
        let shift = ep(p, (p - 1) * e0);
        let checks = identity_checks(&shift, p.pow(f), p).unwrap();
        for c in checks.iter().filter(|c| c.name.starts_with("(p-1)")) {
            if !c.ok {
                return (
                    false,
                    format!("p={p} f={f} e0={e0}: {} gives {} vs {}", c.name, c.lhs, c.rhs),
                );
            }
            checked += 1;
        }
    }
    (true, format!("{checked} identities, all exact"))
}

fn empirical_oracle_counts(
    p: u64,
    f: u32,
    e0: u32,
    n_samples: u64,
    seed_label: &str,
) -> BTreeMap<JumpSet, u64> {
    let n_prec = default_precision(p, e0, 0);
    (0..n_samples)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<JumpSet, u64>, idx| {
            use rand::SeedableRng;
            let mut rng =
                rand_chacha::ChaCha12Rng::seed_from_u64(derive(0x0acce9, seed_label, idx));
            let tower = sample_eisenstein(p, f, 0, e0, n_prec, &mut rng).unwrap();
            let js = field_jump_set(&tower).unwrap();
            *acc.entry(js).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        })
}

/// Criterion 5: Haar-sampled Eisenstein polynomials land on each jump set
/// with the exact shooting-game frequency, within 4 sigma, for
/// (p,f,e0) in {(3,1,3), (2,1,2)} with 2*10^4 samples each.
fn c5() -> (bool, String) {
    let n_samples = 20_000u64;
    let mut details = String::new();
    for (p, f, e0) in [(3u64, 1u32, 3u32), (2, 1, 2)] {
        let e = (p - 1) * e0 as u64;
        let shift = ep(p, e);
        let q = p.pow(f);
        let exact = exact_distribution(&shift, q, p, shift.e_prime().unwrap(), true).unwrap();
        let counts = empirical_oracle_counts(p, f, e0, n_samples, "eisenstein-mass");
        let sampled: u64 = counts.values().sum();
        if sampled != n_samples {
            return (false, "sample count mismatch".into());
        }
        for (js, mass) in &exact.map {
            let expect = rat_f64(mass);
            let got = *counts.get(js).unwrap_or(&0) as f64 / n_samples as f64;
            let sigma = (expect * (1.0 - expect) / n_samples as f64).sqrt();
            if (got - expect).abs() > 4.0 * sigma {
                return (
                    false,
                    format!("p={p} e0={e0} {js}: freq {got:.5} vs {expect:.5} (4s={:.5})",
                        4.0 * sigma),
                );
            }
        }
        // no unexpected classes
        for js in counts.keys() {
            if !exact.map.contains_key(js) {
                return (false, format!("unexpected class {js}"));
            }
        }
        details.push_str(&format!("(p={p},e0={e0}): {} classes ok; ", exact.map.len()));
    }
    (true, details)
}

fn strongly_separable_samples(
    p: u64,
    f: u32,
    e0: u32,
    count: u64,
    label: &str,
) -> Vec<Tower> {
    let n_prec = default_precision(p, e0, 0);
    (0..count)
        .into_par_iter()
        .map(|idx| {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive(0x5e9a, label, idx));
            loop {
                let tower = sample_eisenstein(p, f, 0, e0, n_prec, &mut rng).unwrap();
                if shape_of_tower(&tower).unwrap().is_strongly_separable() {
                    return tower;
                }
            }
        })
        .collect()
}

/// Criterion 6: on 100 strongly separable samples per grid point, the
/// coefficient-valuation extraction equals the field oracle exactly.
fn c6() -> (bool, String) {
    let mut total = 0;
    for p in [3u64, 5] {
        for f in [1u32, 2] {
            for e0 in 1..=5u32 {
                let towers = strongly_separable_samples(p, f, e0, 100, "procedure");
                for tower in &towers {
                    let shape = shape_of_tower(tower).unwrap();
                    let from_shape = jump_set_of_shape(&shape).unwrap().field.unwrap();
                    let from_oracle = field_jump_set(tower).unwrap();
                    if from_shape != from_oracle {
                        return (
                            false,
                            format!(
                                "p={p} f={f} e0={e0}: shape gives {from_shape}, oracle {from_oracle}"
                            ),
                        );
                    }
                }
                total += towers.len();
            }
        }
    }
    (true, format!("{total} strongly separable samples agree"))
}

/// Criterion 7: the ramification polygon computed from the jump set equals
/// the Newton polygon of g(xt + x) computed in the tower, on the criterion-6
/// samples, plus the worked cubic example.
fn c7() -> (bool, String) {
    // the worked example x^3 + yx + y over Q_3(zeta_3)
    let base = crate::padic::BaseRing::new(3, 1, 0, 8).unwrap();
    let tower = Tower::new(3, 1, 0, vec![base.y(), base.y(), base.zero()], 8).unwrap();
    let newt = ramification_newton(&tower).unwrap();
    if newt.vertices() != [(1, 4), (3, 3)] {
        return (false, format!("hand example polygon: {:?}", newt.vertices()));
    }
    let mut total = 0;
    for p in [3u64, 5] {
        for f in [1u32, 2] {
            for e0 in 1..=5u32 {
                let towers = strongly_separable_samples(p, f, e0, 100, "procedure");
                for tower in &towers {
                    let shape = shape_of_tower(tower).unwrap();
                    let game = jump_set_of_shape(&shape).unwrap().game;
                    let from_js = ramification_polygon(&game, e0).unwrap();
                    let from_field = ramification_newton(tower).unwrap();
                    if from_js != from_field {
                        return (
                            false,
                            format!(
                                "p={p} f={f} e0={e0}: {:?} vs {:?}",
                                from_js.vertices(),
                                from_field.vertices()
                            ),
                        );
                    }
                }
                total += towers.len();
            }
        }
    }
    (true, format!("hand example plus {total} samples agree"))
}

/// Criterion 8: the negative control x^2 + 2x + 2 over Q_2: the oracle gives
/// ({1}, 1->2) while the untrusted shape computation differs.
fn c8() -> (bool, String) {
    let base = crate::padic::BaseRing::new(2, 1, 0, 8).unwrap();
    let two = base.from_zq(base.zq.from_u64(2));
    let tower = Tower::new(2, 1, 0, vec![two.clone(), two], 8).unwrap();
    let oracle = field_jump_set(&tower).unwrap();
    let shape = shape_of_tower(&tower).unwrap();
    if shape.is_strongly_separable() {
        return (false, "x^2+2x+2 must not be strongly separable".into());
    }
    let game = jump_set_of_shape(&shape).unwrap().game;
    let oracle_ok = oracle.entries() == [(1, 2)];
    let differs = game.entries() != oracle.entries();
    (
        oracle_ok && differs,
        format!("oracle {oracle}, shape {game}"),
    )
}

/// Criterion 9: compatibility and adequacy agree on every pair of extended
/// jump sets with beta <= 4, p in {2,3,5}, e0 <= 3, f in {1,2}.
fn c9() -> (bool, String) {
    let mut total = 0u64;
    for p in [2u64, 3, 5] {
        for e0 in 1..=3u64 {
            let shift = ep(p, (p - 1) * e0);
            let all = enumerate(&shift, true, 4).unwrap();
            let pairs: Vec<(usize, usize)> = (0..all.len())
                .flat_map(|a| (0..all.len()).map(move |b| (a, b)))
                .collect();
            for f in [1u32, 2] {
                let bad = pairs
                    .par_iter()
                    .find_any(|&&(a, b)| {
                        let cand = &all[a];
                        let module = &all[b];
                        let compat = is_compatible(cand, module, f, p).unwrap().compatible;
                        let adequate = is_adequate(cand, module, f, p).unwrap();
                        compat != adequate
                    });
                if let Some(&(a, b)) = bad {
                    return (
                        false,
                        format!(
                            "p={p} e0={e0} f={f}: {} vs module {}",
                            all[a], all[b]
                        ),
                    );
                }
                total += pairs.len() as u64;
            }
        }
    }
    (true, format!("{total} pairs, zero mismatches"))
}

/// Criterion 10: the brute-force finite-quotient character oracle matches
/// the compatibility family for p in {2,3}, e <= 4, f = 1, N <= 4.
fn c10() -> (bool, String) {
    let mut total = 0;
    for p in [2u64, 3] {
        for e in 1..=4u64 {
            if e % (p - 1) != 0 {
                continue;
            }
            let shift = ep(p, e);
            for module in enumerate_admissible(&shift).unwrap() {
                for n in 1..=4u32 {
                    let got = finite_quotient_jump_sets(&module, n).unwrap();
                    let family = character_jumpset_family(
                        &shift,
                        &ModuleSpec::QuasiFree(module.clone()),
                        1,
                        p,
                        n,
                    )
                    .unwrap();
                    let expected: std::collections::BTreeSet<Vec<u64>> =
                        family.iter().map(|j| j.to_subset()).collect();
                    if got != expected {
                        return (
                            false,
                            format!(
                                "p={p} e={e} N={n} module {module}: {} vs {} jump sets",
                                got.len(),
                                expected.len()
                            ),
                        );
                    }
                    total += 1;
                }
            }
        }
    }
    (true, format!("{total} finite quotients match their families"))
}

/// Criterion 11: quotient-weight breaks reconstruct filt_ord on 10^3 random
/// vectors per grid point, and the canonical vector round-trips.
fn c11() -> (bool, String) {
    use rand::{Rng, SeedableRng};
    let mut total = 0;
    for p in [2u64, 3] {
        for e in 1..=6u64 {
            let shift = ep(p, e);
            let mut indices = shift.tset(0);
            indices.push(shift.e_star().unwrap());
            for f in [1u32, 2] {
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive(
                    0xf117,
                    "filt-ord",
                    p * 1000 + e * 10 + f as u64,
                ));
                for _ in 0..1000 {
                    let mut coords = BTreeMap::new();
                    for &i in &indices {
                        let slots = if Some(i) == shift.e_star() { 1 } else { f };
                        for slot in 1..=slots {
                            if rng.gen_bool(0.7) {
                                coords.insert((i, slot), rng.gen_range(1..=5u32));
                            }
                        }
                    }
                    let v = ValuationVector::new(shift.clone(), f, coords).unwrap();
                    let js = v.filt_ord().unwrap();
                    let betas: Vec<u32> =
                        js.entries().iter().map(|&(_, b)| b).rev().collect();
                    if v.profile_breaks() != betas {
                        return (false, format!("break mismatch at p={p} e={e}"));
                    }
                    for &(i, b) in js.entries() {
                        let g = v.quotient_weight_profile(b + 1);
                        if g[(b + 1) as usize] != Weight::Finite(shift.iterate(i, b)) {
                            return (false, format!("break value mismatch at p={p} e={e}"));
                        }
                    }
                    total += 1;
                }
            }
            for f in [1u32, 2] {
                for js in enumerate(&shift, true, 4).unwrap() {
                    let v = ValuationVector::canonical(&js, f).unwrap();
                    if v.filt_ord().unwrap() != js {
                        return (false, format!("canonical round trip failed for {js}"));
                    }
                    // torsion bookkeeping on the admissible ones
                    if js.is_admissible().unwrap() {
                        let k = torsion_order(&js).unwrap();
                        if Some(k) != js.min_beta() {
                            return (false, "torsion order mismatch".into());
                        }
                    }
                }
            }
        }
    }
    (true, format!("{total} random vectors + all canonical round trips"))
}

/// Criterion 12: realization round trip: every admissible jump set with
/// e* outside I over e <= 6, p in {2,3}, f = 1 comes back unchanged from
/// the oracle run on its realized polynomial.
fn c12() -> (bool, String) {
    let mut cases: Vec<(u64, u64, JumpSet)> = Vec::new();
    for p in [2u64, 3] {
        for e in 1..=6u64 {
            if e % (p - 1) != 0 {
                continue;
            }
            let shift = ep(p, e);
            let e_star = shift.e_star().unwrap();
            for js in enumerate_admissible(&shift).unwrap() {
                if js.beta(e_star).is_none() {
                    cases.push((p, e, js));
                }
            }
        }
    }
    let results: Vec<std::result::Result<(), String>> = cases
        .par_iter()
        .map(|(p, e, js)| {
            let e0 = (e / (p - 1)) as u32;
            let lambda_digits = 4 * (e + 1) as u32;
            let prec = (lambda_digits / (*p as u32 - 1).max(1) + 2)
                .max(default_precision(*p, e0, 0));
            let (tower, _) = realize(js, 1, prec).map_err(|err| format!("{js}: {err}"))?;
            let back = field_jump_set(&tower).map_err(|err| format!("{js}: {err}"))?;
            if back != *js {
                return Err(format!("p={p} e={e}: {js} came back as {back}"));
            }
            Ok(())
        })
        .collect();
    let n = results.len();
    for r in results {
        if let Err(msg) = r {
            return (false, msg);
        }
    }
    (true, format!("{n} realizations round-trip"))
}

/// Criterion 13: the oracle on g(x^d) equals the tame transform of the
/// oracle on g, for d in {2,5} coprime to p, on sampled polynomials.
fn c13() -> (bool, String) {
    let mut total = 0;
    for p in [3u64, 5] {
        for e0 in 1..=3u32 {
            let towers = strongly_separable_samples(p, 1, e0, 10, "tame");
            for d in [2u64, 5] {
                if d % p == 0 {
                    continue;
                }
                for tower in &towers {
                    let plain = field_jump_set(tower).unwrap();
                    let twisted_tower = substitute_power(tower, d as u32).unwrap();
                    let twisted = field_jump_set(&twisted_tower).unwrap();
                    let expected = tame_transform(&plain, d).unwrap();
                    if twisted != expected {
                        return (
                            false,
                            format!("p={p} e0={e0} d={d}: {twisted} vs {expected}"),
                        );
                    }
                    total += 1;
                }
            }
        }
    }
    (true, format!("{total} substituted polynomials agree"))
}

pub fn criteria() -> Vec<(u32, &'static str, fn() -> (bool, String))> {
    vec![
        (1, "quadratic-over-Q2 masses (exact)", c1 as fn() -> (bool, String)),
        (2, "mass-formula equality haar = shooting (exact, grid)", c2),
        (3, "maximal-mass law (q-1)/q (exact, grid)", c3),
        (4, "starred decomposition identity (exact, grid)", c4),
        (5, "Eisenstein mass formula (4-sigma, 2x20000 samples)", c5),
        (6, "coefficient extraction vs field oracle (exact, sampled)", c6),
        (7, "ramification polygon two ways (exact, sampled)", c7),
        (8, "negative control x^2+2x+2 over Q_2", c8),
        (9, "compatibility = adequacy (exhaustive)", c9),
        (10, "finite-quotient character oracle (exhaustive)", c10),
        (11, "filt-ord vs weight-profile breaks (randomized + exhaustive)", c11),
        (12, "realization round trip (exhaustive)", c12),
        (13, "tame transform vs oracle on g(x^d) (sampled)", c13),
    ]
}

/// Run all criteria (or one, by id). Prints one line per criterion.
pub fn run(only: Option<u32>, quiet: bool) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    for (id, name, body) in criteria() {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = std::time::Instant::now();
        let (passed, details) = body();
        let elapsed = start.elapsed();
        if !quiet {
            println!(
                "[{}] criterion {:>2}: {} ({:.1?}) - {}",
                if passed { "PASS" } else { "FAIL" },
                id,
                name,
                elapsed,
                details
            );
        }
        out.push(CriterionResult {
            id,
            name,
            passed,
            details,
        });
    }
    out
}
