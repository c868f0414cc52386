//! Jump sets: the pairs `(I, beta)` with `I` inside `T` (or `T*`), `beta`
//! strictly decreasing and `i -> rho^{beta(i)}(i)` strictly increasing.
//!
//! A jump set is equivalent data to a finite subset `A` of the positive
//! integers satisfying the two closure conditions (C.1) and (C.2); both
//! directions of that bijection live here, together with extraction of
//! minimal/maximal points of a graph and enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::{Point, Shift};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawJumpSet", into = "RawJumpSet")]
pub struct JumpSet {
    shift: Shift,
    extended: bool,
    /// `(i, beta(i))` sorted by `i` ascending.
    entries: Vec<(u64, u32)>,
}

#[derive(Serialize, Deserialize)]
struct RawJumpSet {
    shift: Shift,
    extended: bool,
    entries: Vec<(u64, u32)>,
}

impl TryFrom<RawJumpSet> for JumpSet {
    type Error = String;
    fn try_from(raw: RawJumpSet) -> std::result::Result<Self, String> {
        JumpSet::new(raw.shift, raw.extended, raw.entries).map_err(|e| e.to_string())
    }
}

impl From<JumpSet> for RawJumpSet {
    fn from(js: JumpSet) -> RawJumpSet {
        RawJumpSet {
            shift: js.shift,
            extended: js.extended,
            entries: js.entries,
        }
    }
}

impl JumpSet {
    /// Validate and build. Entries may arrive in any order; they are sorted
    /// by index.
    pub fn new(shift: Shift, extended: bool, mut entries: Vec<(u64, u32)>) -> Result<Self> {
        entries.sort_unstable();
        if extended && shift.e_star().is_none() {
            return Err(Error::InfiniteTset);
        }
        for win in entries.windows(2) {
            if win[0].0 == win[1].0 {
                return Err(Error::InvalidJumpSet(format!(
                    "duplicate index {}",
                    win[0].0
                )));
            }
        }
        for &(i, b) in &entries {
            if b == 0 {
                return Err(Error::InvalidJumpSet(format!("beta({i}) must be >= 1")));
            }
            let allowed = if extended {
                shift.in_t(i) || Some(i) == shift.e_star()
            } else {
                shift.in_t(i)
            };
            if !allowed {
                return Err(Error::InvalidJumpSet(format!(
                    "index {i} lies outside {}",
                    if extended { "T*" } else { "T" }
                )));
            }
        }
        for win in entries.windows(2) {
            let (i1, b1) = win[0];
            let (i2, b2) = win[1];
            if b1 <= b2 {
                return Err(Error::InvalidJumpSet(format!(
                    "beta is not strictly decreasing: beta({i1}) = {b1} <= beta({i2}) = {b2}"
                )));
            }
            if shift.iterate(i1, b1) >= shift.iterate(i2, b2) {
                return Err(Error::InvalidJumpSet(format!(
                    "i -> rho^beta(i) is not strictly increasing between {i1} and {i2}"
                )));
            }
        }
        Ok(JumpSet {
            shift,
            extended,
            entries,
        })
    }

    pub fn empty(shift: Shift, extended: bool) -> Result<Self> {
        Self::new(shift, extended, Vec::new())
    }

    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    pub fn extended(&self) -> bool {
        self.extended
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The support `I`.
    pub fn support(&self) -> Vec<u64> {
        self.entries.iter().map(|&(i, _)| i).collect()
    }

    pub fn beta(&self, i: u64) -> Option<u32> {
        self.entries
            .iter()
            .find(|&&(j, _)| j == i)
            .map(|&(_, b)| b)
    }

    pub fn min_entry(&self) -> Option<(u64, u32)> {
        self.entries.first().copied()
    }

    pub fn max_entry(&self) -> Option<(u64, u32)> {
        self.entries.last().copied()
    }

    /// `beta(max I)`, the smallest beta value.
    pub fn min_beta(&self) -> Option<u32> {
        self.max_entry().map(|(_, b)| b)
    }

    /// Add `delta` to every beta value.
    pub fn shift_beta(&self, delta: i64) -> Result<JumpSet> {
        let entries = self
            .entries
            .iter()
            .map(|&(i, b)| {
                let nb = b as i64 + delta;
                if nb < 1 {
                    Err(Error::InvalidJumpSet(format!(
                        "shifting beta({i}) by {delta} leaves the positive range"
                    )))
                } else {
                    Ok((i, nb as u32))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        JumpSet::new(self.shift.clone(), self.extended, entries)
    }

    /// The subset `A_{(I,beta)}`: for each `i` except the largest, the orbit
    /// `rho^n(i)` for `n < beta(i) - beta(succ(i))`, and the full orbit
    /// `n < beta(max I)` for the largest index.
    pub fn to_subset(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (k, &(i, b)) in self.entries.iter().enumerate() {
            let reps = match self.entries.get(k + 1) {
                Some(&(_, b_next)) => b - b_next,
                None => b,
            };
            let mut x = i;
            for _ in 0..reps {
                out.push(x);
                x = self.shift.apply(x);
            }
        }
        out.sort_unstable();
        out
    }

    /// Inverse of [`JumpSet::to_subset`]: `I = A - rho(A)` and
    /// `beta(i) = |[i, oo) ∩ A|`, after checking (C.2) and (C.1).
    pub fn from_subset(shift: Shift, extended: bool, subset: &[u64]) -> Result<JumpSet> {
        let mut a: Vec<u64> = subset.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.first().is_some_and(|&x| x == 0) {
            return Err(Error::InvalidJumpSet("subset elements start at 1".into()));
        }
        let rho_a: std::collections::BTreeSet<u64> = a.iter().map(|&x| shift.apply(x)).collect();
        // (C.2) first: every element of A - rho(A) must lie in T (resp. T*).
        for &x in &a {
            if rho_a.contains(&x) {
                continue;
            }
            let allowed = if extended {
                shift.in_t(x) || Some(x) == shift.e_star()
            } else {
                shift.in_t(x)
            };
            if !allowed {
                return Err(Error::SubsetC2 { elem: x });
            }
        }
        // (C.1): consecutive elements must be at least one rho-step apart.
        for win in a.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let rho_lo = shift.apply(lo);
            if rho_lo > hi {
                return Err(Error::SubsetC1 {
                    a: lo,
                    b: hi,
                    rho_a: rho_lo,
                });
            }
        }
        let entries: Vec<(u64, u32)> = a
            .iter()
            .filter(|&&x| !rho_a.contains(&x))
            .map(|&x| {
                let count = a.iter().filter(|&&y| y >= x).count() as u32;
                (x, count)
            })
            .collect();
        JumpSet::new(shift, extended, entries)
    }

    /// Admissibility: `I` non-empty and `rho^{beta(min I)}(min I) = e*`.
    pub fn is_admissible(&self) -> Result<bool> {
        let e_star = self.shift.e_star().ok_or(Error::InfiniteTset)?;
        Ok(match self.min_entry() {
            None => false,
            Some((i, b)) => self.shift.iterate(i, b) == e_star as u128,
        })
    }
}

/// Which extremal set of a graph to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    Minimal,
    Maximal,
}

/// The unique jump set whose graph is the set of minimal (resp. maximal)
/// points of `points` under the shift order. Indices must be distinct and lie
/// in `T` (resp. `T*`); levels must be >= 1.
pub fn extract(
    shift: &Shift,
    extended: bool,
    points: &[Point],
    which: Extremal,
) -> Result<JumpSet> {
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        if !seen.insert(p.a) {
            return Err(Error::InvalidJumpSet(format!(
                "duplicate index {} in graph",
                p.a
            )));
        }
        if p.b == 0 {
            return Err(Error::InvalidJumpSet(format!(
                "graph level at index {} must be >= 1",
                p.a
            )));
        }
    }
    let survivors: Vec<(u64, u32)> = points
        .iter()
        .filter(|&&p| {
            !points.iter().any(|&q| match which {
                Extremal::Minimal => shift.lt(q, p),
                Extremal::Maximal => shift.lt(p, q),
            })
        })
        .map(|&p| (p.a, p.b))
        .collect();
    JumpSet::new(shift.clone(), extended, survivors)
}

/// All jump sets (extended if requested) whose largest beta value is at most
/// `beta_bound`, in lexicographic order of (min I, beta(min I), tail...).
/// Includes the empty jump set.
pub fn enumerate(shift: &Shift, extended: bool, beta_bound: u32) -> Result<Vec<JumpSet>> {
    let indices: Vec<u64> = if extended {
        shift.tset_star()?
    } else {
        if shift.e_star().is_none() {
            return Err(Error::InfiniteTset);
        }
        shift.tset(0)
    };
    let mut out = vec![JumpSet::empty(shift.clone(), extended)?];
    let mut stack = Vec::new();
    for (pos, &i) in indices.iter().enumerate() {
        for b in 1..=beta_bound {
            stack.push((i, b));
            collect_tails(shift, extended, &indices, pos, &mut stack, &mut out)?;
            stack.pop();
        }
    }
    Ok(out)
}

fn collect_tails(
    shift: &Shift,
    extended: bool,
    indices: &[u64],
    last_pos: usize,
    stack: &mut Vec<(u64, u32)>,
    out: &mut Vec<JumpSet>,
) -> Result<()> {
    out.push(JumpSet::new(shift.clone(), extended, stack.clone())?);
    let &(last_i, last_b) = stack.last().unwrap();
    let last_val = shift.iterate(last_i, last_b);
    for (pos, &i) in indices.iter().enumerate().skip(last_pos + 1) {
        for b in 1..last_b {
            if shift.iterate(i, b) > last_val {
                stack.push((i, b));
                collect_tails(shift, extended, indices, pos, stack, out)?;
                stack.pop();
            }
        }
    }
    Ok(())
}

/// Exactly the admissible extended jump sets. Finite without any beta bound:
/// the head entry is pinned to the inverse orbit of `e*` and beta decreases
/// strictly from there.
pub fn enumerate_admissible(shift: &Shift) -> Result<Vec<JumpSet>> {
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let indices = shift.tset_star()?;
    // Heads (i, b) with rho^b(i) = e*, b >= 1, i in T.
    let mut heads = Vec::new();
    let mut x = e_star;
    let mut depth = 0u32;
    while let Some(y) = shift.preimage(x) {
        x = y;
        depth += 1;
        if shift.in_t(x) {
            heads.push((x, depth));
        }
    }
    heads.sort_unstable();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for &(i, b) in &heads {
        let pos = indices.iter().position(|&j| j == i).unwrap();
        stack.push((i, b));
        collect_tails(shift, true, &indices, pos, &mut stack, &mut out)?;
        stack.pop();
    }
    out.sort();
    Ok(out)
}

impl std::fmt::Display for JumpSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, (i, b)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}->{b}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(p: u64, e: u64) -> Shift {
        Shift::rho_ep(p, e).unwrap()
    }

    fn js(shift: Shift, extended: bool, entries: &[(u64, u32)]) -> JumpSet {
        JumpSet::new(shift, extended, entries.to_vec()).unwrap()
    }

    #[test]
    fn to_subset_examples() {
        assert!(JumpSet::empty(ep(2, 2), false).unwrap().to_subset().is_empty());
        assert_eq!(js(ep(2, 2), false, &[(1, 2)]).to_subset(), vec![1, 2]);
        // beta(1) - beta(4) = 1 keeps only one orbit element at index 1.
        assert_eq!(js(ep(3, 6), true, &[(1, 2), (4, 1)]).to_subset(), vec![1, 4]);
        assert_eq!(js(ep(2, 2), false, &[(1, 2), (3, 1)]).to_subset(), vec![1, 3]);
    }

    #[test]
    fn subset_oracle() {
        // Independent check of the A_{(I,beta)} formula: the set returned must
        // have I = A - rho(A) and beta(i) = |[i, oo) ∩ A| matching the input.
        for shift in [ep(2, 2), ep(3, 6), ep(2, 4), ep(5, 4)] {
            for set in enumerate(&shift, true, 4).unwrap() {
                let a = set.to_subset();
                let rho_a: Vec<u64> = a.iter().map(|&x| shift.apply(x)).collect();
                let i_a: Vec<u64> = a
                    .iter()
                    .copied()
                    .filter(|x| !rho_a.contains(x))
                    .collect();
                assert_eq!(i_a, set.support(), "I mismatch for {set}");
                for &(i, b) in set.entries() {
                    let count = a.iter().filter(|&&y| y >= i).count() as u32;
                    assert_eq!(count, b, "beta mismatch at {i} for {set}");
                }
            }
        }
    }

    #[test]
    fn from_subset_examples() {
        let got = JumpSet::from_subset(ep(2, 2), false, &[1, 2]).unwrap();
        assert_eq!(got.entries(), &[(1, 2)]);
        let got = JumpSet::from_subset(ep(2, 2), false, &[1, 3]).unwrap();
        assert_eq!(got.entries(), &[(1, 2), (3, 1)]);
        match JumpSet::from_subset(ep(2, 2), false, &[2, 3]) {
            Err(Error::SubsetC2 { elem: 2 }) => {}
            other => panic!("expected C2 diagnosis on element 2, got {other:?}"),
        }
    }

    #[test]
    fn round_trips() {
        for shift in [ep(2, 2), ep(3, 6), ep(2, 3)] {
            for set in enumerate(&shift, true, 4).unwrap() {
                let back =
                    JumpSet::from_subset(shift.clone(), true, &set.to_subset()).unwrap();
                assert_eq!(back, set);
            }
        }
    }

    #[test]
    fn from_subset_exhaustive_small() {
        // All subsets of {1..30} of size <= 6: from_subset either rejects or
        // round-trips through to_subset.
        fn visit(shift: &Shift, start: u64, stack: &mut Vec<u64>, seen: &mut u64) {
            if let Ok(set) = JumpSet::from_subset(shift.clone(), true, stack) {
                assert_eq!(&set.to_subset(), stack);
                *seen += 1;
            }
            if stack.len() == 6 {
                return;
            }
            for next in start..=30 {
                stack.push(next);
                visit(shift, next + 1, stack, seen);
                stack.pop();
            }
        }
        // rho_{2,2} admits exactly 29 such subsets (including the empty one);
        // the count pins the validator against silent over- or
        // under-acceptance.
        let mut seen = 0;
        visit(&ep(2, 2), 1, &mut Vec::new(), &mut seen);
        assert_eq!(seen, 29);
        let mut seen = 0;
        visit(&ep(3, 6), 1, &mut Vec::new(), &mut seen);
        assert!(seen > 100, "rho_{{6,3}} has a rich family, got {seen}");
    }

    #[test]
    fn extract_examples() {
        let s63 = ep(3, 6);
        let got = extract(
            &s63,
            true,
            &[Point::new(1, 2), Point::new(4, 1)],
            Extremal::Minimal,
        )
        .unwrap();
        assert_eq!(got.entries(), &[(1, 2), (4, 1)]);

        let s23 = ep(3, 2);
        let got = extract(
            &s23,
            true,
            &[Point::new(1, 2), Point::new(2, 1)],
            Extremal::Minimal,
        )
        .unwrap();
        assert_eq!(got.entries(), &[(2, 1)]);

        let got = extract(&s23, true, &[Point::new(2, 5)], Extremal::Maximal).unwrap();
        assert_eq!(got.entries(), &[(2, 5)]);
    }

    #[test]
    fn extract_idempotent() {
        for shift in [ep(2, 2), ep(3, 6)] {
            for set in enumerate(&shift, true, 4).unwrap() {
                let graph: Vec<Point> = set
                    .entries()
                    .iter()
                    .map(|&(i, b)| Point::new(i, b))
                    .collect();
                for which in [Extremal::Minimal, Extremal::Maximal] {
                    assert_eq!(extract(&shift, true, &graph, which).unwrap(), set);
                }
            }
        }
    }

    #[test]
    fn admissible_examples() {
        assert!(js(ep(3, 2), true, &[(1, 1)]).is_admissible().unwrap());
        assert!(js(ep(3, 6), true, &[(1, 2), (4, 1)]).is_admissible().unwrap());
        assert!(!JumpSet::empty(ep(3, 2), true)
            .unwrap()
            .is_admissible()
            .unwrap());
    }

    #[test]
    fn enumerate_admissible_examples() {
        let got = enumerate_admissible(&ep(3, 2)).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].entries(), &[(1, 1)]);

        let got = enumerate_admissible(&ep(2, 2)).unwrap();
        let entry_sets: Vec<_> = got.iter().map(|j| j.entries().to_vec()).collect();
        assert_eq!(got.len(), 3);
        assert!(entry_sets.contains(&vec![(1, 2)]));
        assert!(entry_sets.contains(&vec![(1, 2), (3, 1)]));
        assert!(entry_sets.contains(&vec![(1, 2), (4, 1)]));
    }

    #[test]
    fn enumerate_zero_bound_is_empty_only() {
        let got = enumerate(&ep(3, 6), false, 0).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got[0].is_empty());
    }

    #[test]
    fn enumerate_admissible_matches_filter() {
        for shift in [ep(2, 2), ep(2, 4), ep(3, 6), ep(5, 4)] {
            let direct = enumerate_admissible(&shift).unwrap();
            // Admissibility pins beta(min I) = v(e*) at the head, so the
            // filtered enumeration needs no deeper bound than that.
            let bound = shift.v_rho(shift.e_star().unwrap());
            let mut filtered: Vec<JumpSet> = enumerate(&shift, true, bound)
                .unwrap()
                .into_iter()
                .filter(|j| j.is_admissible().unwrap())
                .collect();
            filtered.sort();
            assert_eq!(direct, filtered);
        }
    }

    #[test]
    fn serde_round_trip() {
        let set = js(ep(3, 6), true, &[(1, 2), (4, 1)]);
        let text = serde_json::to_string(&set).unwrap();
        let back: JumpSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, set);
        // Invalid entries must be rejected on deserialization.
        let bad = r#"{"shift":{"kind":"rho_ep","p":3,"e":6},"extended":true,"entries":[[1,1],[4,2]]}"#;
        assert!(serde_json::from_str::<JumpSet>(bad).is_err());
    }
}
