//! Jump sets of characters: the classification of which extended jump sets
//! occur as sets of jumps of a character of a free or quasi-free filtered
//! module, via the compatibility criterion, and the equivalent
//! Miki/Maus/Sueyoshi adequacy criterion.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::jumpset::{enumerate, extract, Extremal, JumpSet};
use crate::shift::{Point, Shift};

/// Trace of a character on each coordinate block: the set `A` of indices with
/// nonzero restriction and the order exponent `b` there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSummary {
    shift: Shift,
    extended: bool,
    /// `(i, b(i))` sorted by `i`, with `b >= 1`.
    entries: Vec<(u64, u32)>,
}

impl CharacterSummary {
    pub fn new(shift: Shift, extended: bool, mut entries: Vec<(u64, u32)>) -> Result<Self> {
        entries.sort_unstable();
        for win in entries.windows(2) {
            if win[0].0 == win[1].0 {
                return Err(Error::Precondition(format!(
                    "duplicate index {} in character summary",
                    win[0].0
                )));
            }
        }
        for &(i, b) in &entries {
            let allowed = if extended {
                shift.in_t(i) || Some(i) == shift.e_star()
            } else {
                shift.in_t(i)
            };
            if !allowed {
                return Err(Error::Precondition(format!(
                    "character index {i} lies outside the coordinate set"
                )));
            }
            if b == 0 {
                return Err(Error::Precondition(format!(
                    "order exponent at {i} must be >= 1"
                )));
            }
        }
        Ok(CharacterSummary {
            shift,
            extended,
            entries,
        })
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    /// The set of jumps of any character with this summary: the maximal
    /// points of the graph of `b`.
    pub fn jumps(&self) -> Result<JumpSet> {
        let points: Vec<Point> = self
            .entries
            .iter()
            .map(|&(i, b)| Point::new(i, b))
            .collect();
        extract(&self.shift, self.extended, &points, Extremal::Maximal)
    }

    /// `ord(chi(M_i)) = max_j max(0, b(j) - v(j, i))`.
    pub fn order_at_level(&self, i: u64) -> u32 {
        order_at_level(&self.shift, &self.entries, i)
    }
}

fn order_at_level(shift: &Shift, entries: &[(u64, u32)], i: u64) -> u32 {
    entries
        .iter()
        .map(|&(j, b)| b.saturating_sub(shift.hops_to_reach(j, i)))
        .max()
        .unwrap_or(0)
}

/// The set of levels where [`order_at_level`] drops, read off by direct
/// evaluation. Used as the independent route to a character's jumps.
pub fn jumps_by_order_formula(shift: &Shift, entries: &[(u64, u32)]) -> Vec<u64> {
    let top = entries
        .iter()
        .map(|&(j, b)| shift.iterate(j, b))
        .max()
        .unwrap_or(0);
    let mut jumps = Vec::new();
    let mut prev = order_at_level(shift, entries, 1);
    for i in 1..=top as u64 + 1 {
        let next = order_at_level(shift, entries, i + 1);
        if next != prev {
            jumps.push(i);
        }
        prev = next;
    }
    jumps
}

/// Outcome of the compatibility test, with the comparison data used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatReport {
    pub compatible: bool,
    /// Indices of `I ∩ I'` where `beta - beta'` attains its positive maximum.
    pub max_set: Vec<u64>,
    /// That maximum, when it exists.
    pub c: Option<u32>,
    /// Which of the three incompatibility conditions held.
    pub conditions: [bool; 3],
}

fn max_set_and_c(candidate: &JumpSet, module_js: &JumpSet) -> (Vec<u64>, Option<u32>) {
    let mut best: Option<u32> = None;
    let mut max_set = Vec::new();
    for &(i, b) in candidate.entries() {
        if let Some(b_mod) = module_js.beta(i) {
            if b > b_mod {
                let diff = b - b_mod;
                match best {
                    Some(c) if diff < c => {}
                    Some(c) if diff == c => max_set.push(i),
                    _ => {
                        best = Some(diff);
                        max_set = vec![i];
                    }
                }
            }
        }
    }
    (max_set, best)
}

/// Compatibility of `candidate` with the quasi-free module of invariant
/// `module_js`: true exactly when `candidate` occurs as the set of jumps of a
/// character of that module. `candidate` is incompatible when all three of
/// the following hold: the positive maximum of `beta - beta'` on `I ∩ I'` is
/// attained once (p > 2) or an odd number of times (p = 2); for `f > 1` only
/// at `e*`; and no point `(i, c + beta'(i))` with `i` in `I' - I` is
/// dominated by the graph of `beta`.
pub fn is_compatible(
    candidate: &JumpSet,
    module_js: &JumpSet,
    f: u32,
    p: u64,
) -> Result<CompatReport> {
    if candidate.shift() != module_js.shift() {
        return Err(Error::ShiftMismatch);
    }
    let shift = candidate.shift();
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let (max_set, c) = max_set_and_c(candidate, module_js);

    let cond1 = match (p, max_set.len()) {
        (_, 0) => false,
        (2, n) => n % 2 == 1,
        (_, n) => n == 1,
    };
    let cond2 = f == 1 || max_set == [e_star];
    let cond3 = if let Some(c) = c {
        module_js.entries().iter().all(|&(i, b_mod)| {
            if candidate.beta(i).is_some() {
                return true;
            }
            let pt = Point::new(i, c + b_mod);
            !candidate
                .entries()
                .iter()
                .any(|&(j, b)| shift.lt(pt, Point::new(j, b)))
        })
    } else {
        false
    };

    Ok(CompatReport {
        compatible: !(cond1 && cond2 && cond3),
        max_set,
        c,
        conditions: [cond1, cond2, cond3],
    })
}

/// The reduced form of the incompatibility test: condition (3) collapses to
/// the two comparisons against the floor and ceiling of each `i` in `I'`
/// inside `I`.
pub fn cheaper_is_compatible(
    candidate: &JumpSet,
    module_js: &JumpSet,
    f: u32,
    p: u64,
) -> Result<bool> {
    if candidate.shift() != module_js.shift() {
        return Err(Error::ShiftMismatch);
    }
    let shift = candidate.shift();
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let (max_set, c) = max_set_and_c(candidate, module_js);
    let cond1 = match (p, max_set.len()) {
        (_, 0) => false,
        (2, n) => n % 2 == 1,
        (_, n) => n == 1,
    };
    let cond2 = f == 1 || max_set == [e_star];
    if !(cond1 && cond2) {
        return Ok(true);
    }
    let c = c.unwrap();
    let support = candidate.support();
    let (min_i, max_i) = (support[0], *support.last().unwrap());
    for &(i, b_mod) in module_js.entries() {
        if max_set.contains(&i) {
            continue;
        }
        if i <= max_i {
            let ceil = *support.iter().find(|&&j| j >= i).unwrap();
            if b_mod + c <= candidate.beta(ceil).unwrap() {
                return Ok(true);
            }
        }
        if i >= min_i {
            let floor = *support.iter().rev().find(|&&j| j <= i).unwrap();
            let lhs = shift.iterate(i, c + b_mod);
            let rhs = shift.iterate(floor, candidate.beta(floor).unwrap());
            if lhs <= rhs {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The Miki/Maus/Sueyoshi criterion, implemented literally as a search over
/// the alignment offset `L`. Equivalent to incompatibility.
pub fn is_adequate(candidate: &JumpSet, module_js: &JumpSet, f: u32, p: u64) -> Result<bool> {
    if candidate.shift() != module_js.shift() {
        return Err(Error::ShiftMismatch);
    }
    if candidate.is_empty() || module_js.is_empty() {
        return Ok(true);
    }
    let shift = candidate.shift();
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let t = candidate.to_subset();
    let lambda = module_js.to_subset();
    let m = t.len() as i64;
    let l = lambda.len() as i64;
    let s = module_js.min_beta().unwrap() as i64;
    let window = l - (s - 1);
    if window <= 0 {
        return Ok(true);
    }
    let module_support = module_js.support();
    'outer: for big_l in 1..=(m - s).max(0) {
        let mut equalities = Vec::new();
        for i in 0..window {
            let x = if big_l - i >= 1 {
                t[(big_l - i - 1) as usize]
            } else {
                0
            };
            let y = lambda[(l - i - (s - 1) - 1) as usize];
            if module_support.contains(&y) {
                // At a shared index of I the collision is head-on and counts
                // toward the parity; at an index of I' alone, hitting it with
                // an orbit element of the candidate's subset already breaks
                // the strict comparison, so equality fails the alignment
                // (cf. the f > 1 clause, which spells out x_0 = y_0 = e* in
                // I ∩ I').
                if candidate.beta(y).is_some() {
                    if x > y {
                        continue 'outer;
                    }
                    if x == y {
                        equalities.push(i);
                    }
                } else if x >= y {
                    continue 'outer;
                }
            }
        }
        let parity_ok = if p == 2 {
            equalities.len() % 2 == 1
        } else {
            equalities.len() == 1
        };
        if !parity_ok {
            continue;
        }
        if f > 1 {
            let head_eq = equalities == [0]
                && lambda[(l - (s - 1) - 1) as usize] == e_star
                && big_l >= 1
                && t[(big_l - 1) as usize] == e_star
                && candidate.beta(e_star).is_some()
                && module_js.beta(e_star).is_some();
            if !head_eq {
                continue;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// What the character family is taken over.
#[derive(Debug, Clone)]
pub enum ModuleSpec {
    /// The free module `M^f`: every plain jump set occurs.
    Free,
    /// The quasi-free module with the given invariant.
    QuasiFree(JumpSet),
}

/// All jump sets of characters of the module, up to `beta <= beta_bound`.
pub fn character_jumpset_family(
    shift: &Shift,
    module: &ModuleSpec,
    f: u32,
    p: u64,
    beta_bound: u32,
) -> Result<Vec<JumpSet>> {
    match module {
        ModuleSpec::Free => enumerate(shift, false, beta_bound),
        ModuleSpec::QuasiFree(module_js) => {
            let mut out = Vec::new();
            for cand in enumerate(shift, true, beta_bound)? {
                if is_compatible(&cand, module_js, f, p)?.compatible {
                    out.push(cand);
                }
            }
            Ok(out)
        }
    }
}

fn vp_mod(x: u64, p: u64, n: u32) -> u32 {
    if x == 0 {
        return n;
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v.min(n)
}

/// Brute-force character oracle over the finite quotient of
/// `M* / <v_{(I',beta')}>` by `p^n`, for `f = 1`: enumerates all characters
/// directly, reads their jumps off the order formula, and returns the set of
/// jump sets as subsets of the positive integers.
pub fn finite_quotient_jump_sets(module_js: &JumpSet, n: u32) -> Result<BTreeSet<Vec<u64>>> {
    let shift = module_js.shift().clone();
    let p = shift.p();
    let t_star = shift.tset_star()?;
    let pn = p.checked_pow(n).ok_or(Error::Overflow)?;

    // Achievable order profiles on the constrained block I': enumerate every
    // value assignment of all coordinates but one, then solve the kill
    // condition for the remaining coordinate of smallest beta'.
    let module_entries = module_js.entries();
    let mut on_profiles: BTreeSet<Vec<u32>> = BTreeSet::new();
    if module_entries.is_empty() {
        on_profiles.insert(Vec::new());
    } else {
        let solve_pos = module_entries.len() - 1;
        let beta_exp = module_entries[solve_pos].1;
        let free: Vec<usize> = (0..module_entries.len())
            .filter(|&k| k != solve_pos)
            .collect();
        let mut values = vec![0u64; free.len()];
        loop {
            // Solve p^{beta_exp} z = rhs (mod p^n) given the free values.
            let mut sum = 0u64;
            for (slot, &k) in free.iter().enumerate() {
                let b = module_entries[k].1;
                let factor = if b >= n { 0 } else { p.pow(b) };
                sum = (sum + (values[slot] as u128 * factor as u128 % pn as u128) as u64) % pn;
            }
            let rhs = (pn - sum) % pn;
            let ords_for_solutions: Vec<u32> = if beta_exp >= n {
                if rhs == 0 {
                    (0..=n).collect()
                } else {
                    Vec::new()
                }
            } else {
                let pb = p.pow(beta_exp);
                if rhs % pb != 0 {
                    Vec::new()
                } else {
                    let z0 = (rhs / pb) % (pn / pb);
                    if z0 == 0 {
                        // z ranges over multiples of p^{n - beta_exp}.
                        (0..=beta_exp).collect()
                    } else {
                        vec![n - vp_mod(z0, p, n)]
                    }
                }
            };
            for ord in ords_for_solutions {
                let mut profile: Vec<u32> = Vec::with_capacity(module_entries.len());
                for k in 0..module_entries.len() {
                    if k == solve_pos {
                        profile.push(ord);
                    } else {
                        let slot = free.iter().position(|&x| x == k).unwrap();
                        profile.push(n - vp_mod(values[slot], p, n));
                    }
                }
                on_profiles.insert(profile);
            }
            // Next assignment in mixed radix base p^n.
            let mut pos = 0;
            loop {
                if pos == values.len() {
                    break;
                }
                values[pos] += 1;
                if values[pos] < pn {
                    break;
                }
                values[pos] = 0;
                pos += 1;
            }
            if pos == values.len() {
                break;
            }
        }
    }

    // Indices outside I' carry arbitrary orders in 0..=n.
    let off_indices: Vec<u64> = t_star
        .iter()
        .copied()
        .filter(|i| module_js.beta(*i).is_none())
        .collect();

    let mut result = BTreeSet::new();
    let mut summaries: BTreeSet<Vec<(u64, u32)>> = BTreeSet::new();
    let mut off_profile = vec![0u32; off_indices.len()];
    loop {
        for on in &on_profiles {
            let mut entries: Vec<(u64, u32)> = Vec::new();
            for (k, &(i, _)) in module_entries.iter().enumerate() {
                if on[k] > 0 {
                    entries.push((i, on[k]));
                }
            }
            for (k, &i) in off_indices.iter().enumerate() {
                if off_profile[k] > 0 {
                    entries.push((i, off_profile[k]));
                }
            }
            entries.sort_unstable();
            summaries.insert(entries);
        }
        // next off-profile in mixed radix
        let mut pos = 0;
        loop {
            if pos == off_profile.len() {
                for summary in &summaries {
                    result.insert(jumps_by_order_formula(&shift, summary));
                }
                return Ok(result);
            }
            if off_profile[pos] < n {
                off_profile[pos] += 1;
                break;
            }
            off_profile[pos] = 0;
            pos += 1;
        }
    }
}

/// Reconstruction of `e` and the module invariant from the family alone,
/// through a membership oracle (the `f = 1` case).
pub fn reconstruct_from_membership(
    shift: &Shift,
    member: impl Fn(&JumpSet) -> bool,
    beta_probe: u32,
) -> Result<(u64, BTreeMap<u64, u32>)> {
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let mut t_star_rec = Vec::new();
    let mut module = BTreeMap::new();
    for i in 1..=2 * e_star {
        let mut some_member = false;
        let mut forbidden_from: Option<u32> = None;
        for b in 1..=beta_probe {
            let Ok(single) = JumpSet::new(shift.clone(), true, vec![(i, b)]) else {
                continue;
            };
            if member(&single) {
                some_member = true;
            } else if forbidden_from.is_none() {
                forbidden_from = Some(b);
            }
        }
        if some_member {
            t_star_rec.push(i);
            if let Some(b) = forbidden_from {
                module.insert(i, b - 1);
            }
        }
    }
    Ok((t_star_rec.len() as u64 - 1, module))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(p: u64, e: u64) -> Shift {
        Shift::rho_ep(p, e).unwrap()
    }

    fn js(shift: Shift, entries: &[(u64, u32)]) -> JumpSet {
        JumpSet::new(shift, true, entries.to_vec()).unwrap()
    }

    #[test]
    fn jumps_of_character_examples() {
        let empty = CharacterSummary::new(ep(2, 2), true, vec![]).unwrap();
        assert!(empty.jumps().unwrap().is_empty());

        // (1,2) and (3,1) are incomparable for rho_{2,2}; both survive.
        let cs = CharacterSummary::new(ep(2, 2), true, vec![(1, 2), (3, 1)]).unwrap();
        assert_eq!(cs.jumps().unwrap().entries(), &[(1, 2), (3, 1)]);

        let cs = CharacterSummary::new(ep(3, 6), true, vec![(1, 2), (4, 1)]).unwrap();
        assert_eq!(cs.jumps().unwrap().entries(), &[(1, 2), (4, 1)]);

        // A genuinely dominated point: (1,1) <= (2,2) for rho_{3,2}.
        let cs = CharacterSummary::new(ep(3, 2), true, vec![(1, 1), (2, 2)]).unwrap();
        assert_eq!(cs.jumps().unwrap().entries(), &[(2, 2)]);
    }

    #[test]
    fn jumps_agree_with_order_formula() {
        // The maximal-point extraction and the order-drop scan are two
        // independent routes to the same subset.
        for shift in [ep(2, 2), ep(3, 6), ep(2, 4)] {
            let t_star = shift.tset_star().unwrap();
            // all summaries with orders <= 3
            let mut stack = vec![(0usize, Vec::<(u64, u32)>::new())];
            while let Some((pos, entries)) = stack.pop() {
                if pos == t_star.len() {
                    let cs =
                        CharacterSummary::new(shift.clone(), true, entries.clone()).unwrap();
                    let via_extract = cs.jumps().unwrap().to_subset();
                    let via_orders = jumps_by_order_formula(&shift, &entries);
                    assert_eq!(via_extract, via_orders, "summary {entries:?}");
                    continue;
                }
                for b in 0..=3u32 {
                    let mut next = entries.clone();
                    if b > 0 {
                        next.push((t_star[pos], b));
                    }
                    stack.push((pos + 1, next));
                }
            }
        }
    }

    #[test]
    fn order_at_level_examples() {
        let cs = CharacterSummary::new(ep(2, 2), true, vec![(1, 2)]).unwrap();
        assert_eq!(cs.order_at_level(1), 2);
        assert_eq!(cs.order_at_level(2), 1);
        assert_eq!(cs.order_at_level(3), 0);
        assert_eq!(cs.order_at_level(5), 0);
    }

    #[test]
    fn compatibility_examples() {
        let shift = ep(2, 2);
        let module = js(shift.clone(), &[(1, 2)]);
        // Disjoint support: compatible.
        let cand = js(shift.clone(), &[(3, 1)]);
        assert!(is_compatible(&cand, &module, 1, 2).unwrap().compatible);
        // Same jump set: Max empty, compatible.
        assert!(is_compatible(&module, &module, 1, 2).unwrap().compatible);
        // Singleton over the module's index with larger beta: incompatible at f = 1.
        let cand = js(shift.clone(), &[(1, 3)]);
        let report = is_compatible(&cand, &module, 1, 2).unwrap();
        assert!(!report.compatible);
        assert_eq!(report.max_set, vec![1]);
        assert_eq!(report.c, Some(1));
        // f >= 2 with e* outside I': everything is compatible.
        for cand in enumerate(&shift, true, 4).unwrap() {
            assert!(is_compatible(&cand, &module, 2, 2).unwrap().compatible);
        }
    }

    #[test]
    fn family_example() {
        let shift = ep(2, 2);
        let module = js(shift.clone(), &[(1, 2)]);
        let family = character_jumpset_family(
            &shift,
            &ModuleSpec::QuasiFree(module),
            1,
            2,
            3,
        )
        .unwrap();
        let has = |entries: &[(u64, u32)]| {
            family.iter().any(|j| j.entries() == entries)
        };
        assert!(!has(&[(1, 3)]));
        assert!(has(&[(1, 2)]));
        assert!(has(&[(1, 1)]));
    }

    #[test]
    fn adequacy_equals_compatibility_small() {
        for (p, e0) in [(2u64, 1u64), (2, 2), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1)] {
            let shift = ep(p, (p - 1) * e0);
            let all = enumerate(&shift, true, 4).unwrap();
            for f in [1u32, 2] {
                for module in &all {
                    if module.is_empty() {
                        continue;
                    }
                    for cand in &all {
                        if cand.is_empty() {
                            continue;
                        }
                        let compat = is_compatible(cand, module, f, p).unwrap().compatible;
                        let adequate = is_adequate(cand, module, f, p).unwrap();
                        assert_eq!(
                            compat, adequate,
                            "mismatch p={p} f={f} cand={cand} module={module}"
                        );
                        let cheap = cheaper_is_compatible(cand, module, f, p).unwrap();
                        assert_eq!(compat, cheap, "cheap mismatch {cand} {module}");
                    }
                }
            }
        }
    }

    #[test]
    fn finite_quotient_oracle_tiny() {
        // rho_{3,2}: the unique admissible module is ({1}, 1->1).
        let shift = ep(3, 2);
        let module = js(shift.clone(), &[(1, 1)]);
        let n = 2;
        let got = finite_quotient_jump_sets(&module, n).unwrap();
        let family = character_jumpset_family(
            &shift,
            &ModuleSpec::QuasiFree(module),
            1,
            3,
            n,
        )
        .unwrap();
        let expected: BTreeSet<Vec<u64>> =
            family.iter().map(|j| j.to_subset()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn reconstruction_small() {
        for (p, e0) in [(2u64, 2u64), (3, 1), (2, 1)] {
            let shift = ep(p, (p - 1) * e0);
            for module in crate::jumpset::enumerate_admissible(&shift).unwrap() {
                let (e_rec, entries) = reconstruct_from_membership(
                    &shift,
                    |cand| is_compatible(cand, &module, 1, p).unwrap().compatible,
                    module.min_entry().map(|(_, b)| b).unwrap_or(1) + 3,
                )
                .unwrap();
                assert_eq!(e_rec, (p - 1) * e0);
                let want: BTreeMap<u64, u32> =
                    module.entries().iter().copied().collect();
                assert_eq!(entries, want, "module {module}");
            }
        }
    }
}
