//! Coordinate model of the free filtered module `M^{f-1} ⊕ M*` and the
//! orbit invariant `filt_ord`.
//!
//! A vector is stored through its coordinate valuations only: the orbit under
//! filtered automorphisms depends on nothing else, so unit multipliers are
//! never materialized here. Full ring elements live in [`crate::padic`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jumpset::{extract, Extremal, JumpSet};
use crate::shift::{Point, Shift};

/// A weight in `Z ∪ {∞}`, ordered with `∞` on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Weight {
    Finite(u128),
    Infinite,
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => write!(f, "inf"),
        }
    }
}

/// Coordinate valuations of a vector of `pi * (M^{f-1} ⊕ M*)`, keyed by
/// `(index, slot)` with `index` in `T`, `slot` in `1..=f`, plus `(e*, 1)`.
/// Missing keys mean valuation `∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationVector {
    shift: Shift,
    f: u32,
    coords: BTreeMap<(u64, u32), u32>,
}

impl ValuationVector {
    pub fn new(shift: Shift, f: u32, coords: BTreeMap<(u64, u32), u32>) -> Result<Self> {
        if f == 0 {
            return Err(Error::Precondition("f must be >= 1".into()));
        }
        let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
        for (&(i, slot), &val) in &coords {
            let slot_bound = if i == e_star {
                1
            } else if shift.in_t(i) {
                f
            } else {
                return Err(Error::Precondition(format!(
                    "coordinate index {i} lies outside T*"
                )));
            };
            if slot == 0 || slot > slot_bound {
                return Err(Error::Precondition(format!(
                    "slot {slot} out of range at index {i}"
                )));
            }
            if val == 0 {
                return Err(Error::ZeroValuation { index: i, slot });
            }
        }
        Ok(ValuationVector { shift, f, coords })
    }

    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn coords(&self) -> &BTreeMap<(u64, u32), u32> {
        &self.coords
    }

    /// `v_{(I,beta)}`: valuation `beta(i)` on the first slot of each `i` in
    /// `I`, everything else `∞`.
    pub fn canonical(js: &JumpSet, f: u32) -> Result<Self> {
        let coords = js.entries().iter().map(|&(i, b)| ((i, 1), b)).collect();
        ValuationVector::new(js.shift().clone(), f, coords)
    }

    /// Per-index minimum over slots: the graph `S_v`.
    fn collapsed(&self) -> BTreeMap<u64, u32> {
        let mut graph: BTreeMap<u64, u32> = BTreeMap::new();
        for (&(i, _), &val) in &self.coords {
            graph
                .entry(i)
                .and_modify(|v| *v = (*v).min(val))
                .or_insert(val);
        }
        graph
    }

    /// The orbit invariant: the jump set whose graph is the set of minimal
    /// points of `S_v` under the shift order.
    pub fn filt_ord(&self) -> Result<JumpSet> {
        let points: Vec<Point> = self
            .collapsed()
            .into_iter()
            .map(|(i, b)| Point::new(i, b))
            .collect();
        extract(&self.shift, true, &points, Extremal::Minimal)
    }

    /// `g_v(n)` for `n = 0..=n_max`: the weight of `v` in `M / pi^n M`,
    /// i.e. the weight of the truncation of `v` to coordinates of valuation
    /// `< n`.
    pub fn quotient_weight_profile(&self, n_max: u32) -> Vec<Weight> {
        let graph = self.collapsed();
        (0..=n_max)
            .map(|n| {
                graph
                    .iter()
                    .filter(|&(_, &val)| val < n)
                    .map(|(&i, &val)| Weight::Finite(self.shift.iterate(i, val)))
                    .min()
                    .unwrap_or(Weight::Infinite)
            })
            .collect()
    }

    /// Break positions of the quotient weight profile: the `n >= 1` with
    /// `g_v(n) != g_v(n+1)`, scanned far enough to catch every break.
    pub fn profile_breaks(&self) -> Vec<u32> {
        let n_max = self.coords.values().copied().max().unwrap_or(0) + 1;
        let profile = self.quotient_weight_profile(n_max);
        (1..n_max)
            .filter(|&n| profile[n as usize] != profile[n as usize + 1])
            .collect()
    }
}

/// Exponent `k` such that the torsion of the quasi-free module with invariant
/// `js` is `Z/p^k`: this is `beta(max I)`.
pub fn torsion_order(js: &JumpSet) -> Result<u32> {
    if !js.is_admissible()? {
        return Err(Error::NotAdmissible(format!("{js}")));
    }
    js.min_beta().ok_or(Error::EmptyJumpSet)
}

#[derive(Serialize, Deserialize)]
struct RawVector {
    #[serde(skip_serializing_if = "Option::is_none")]
    shift: Option<Shift>,
    f: u32,
    coords: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    inf_default: Option<bool>,
}

impl ValuationVector {
    /// JSON form `{"f":1,"coords":{"1":2,"4":1},"inf_default":true}` with an
    /// optional embedded `shift`; multi-slot coordinates are arrays with
    /// `null` for `∞`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut coords = BTreeMap::new();
        let grouped: BTreeMap<u64, Vec<Option<u32>>> = {
            let mut m = BTreeMap::new();
            for (&(i, slot), &val) in &self.coords {
                let e = m.entry(i).or_insert_with(|| vec![None; self.f as usize]);
                let v: &mut Vec<Option<u32>> = e;
                v[(slot - 1) as usize] = Some(val);
            }
            m
        };
        for (i, slots) in grouped {
            let value = if self.f == 1 || slots.iter().filter(|s| s.is_some()).count() == 1 {
                match slots.iter().flatten().next() {
                    Some(&v) if slots[0].is_some() => serde_json::json!(v),
                    _ => serde_json::json!(slots),
                }
            } else {
                serde_json::json!(slots)
            };
            coords.insert(i.to_string(), value);
        }
        serde_json::json!({
            "shift": self.shift,
            "f": self.f,
            "coords": coords,
            "inf_default": true,
        })
    }

    pub fn from_json(value: &serde_json::Value, fallback_shift: Option<Shift>) -> Result<Self> {
        let raw: RawVector = serde_json::from_value(value.clone())
            .map_err(|e| Error::Precondition(format!("bad vector JSON: {e}")))?;
        let shift = raw
            .shift
            .or(fallback_shift)
            .ok_or_else(|| Error::Precondition("vector JSON carries no shift".into()))?;
        let mut coords = BTreeMap::new();
        for (key, val) in raw.coords {
            let i: u64 = key
                .parse()
                .map_err(|_| Error::Precondition(format!("bad coordinate index {key}")))?;
            match val {
                serde_json::Value::Number(n) => {
                    let v = n
                        .as_u64()
                        .ok_or_else(|| Error::Precondition("bad valuation".into()))?;
                    coords.insert((i, 1), v as u32);
                }
                serde_json::Value::Array(slots) => {
                    for (k, slot_val) in slots.iter().enumerate() {
                        match slot_val {
                            serde_json::Value::Null => {}
                            serde_json::Value::Number(n) => {
                                let v = n.as_u64().ok_or_else(|| {
                                    Error::Precondition("bad valuation".into())
                                })?;
                                coords.insert((i, k as u32 + 1), v as u32);
                            }
                            _ => return Err(Error::Precondition("bad slot value".into())),
                        }
                    }
                }
                serde_json::Value::Null => {}
                _ => return Err(Error::Precondition("bad coordinate value".into())),
            }
        }
        ValuationVector::new(shift, raw.f, coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jumpset::enumerate;

    fn ep(p: u64, e: u64) -> Shift {
        Shift::rho_ep(p, e).unwrap()
    }

    fn vector(shift: Shift, f: u32, coords: &[((u64, u32), u32)]) -> ValuationVector {
        ValuationVector::new(shift, f, coords.iter().copied().collect()).unwrap()
    }

    #[test]
    fn filt_ord_examples() {
        let all_inf = vector(ep(3, 2), 1, &[]);
        assert!(all_inf.filt_ord().unwrap().is_empty());

        let v = vector(ep(3, 2), 1, &[((1, 1), 2), ((2, 1), 1)]);
        assert_eq!(v.filt_ord().unwrap().entries(), &[(2, 1)]);

        let v = vector(ep(3, 6), 1, &[((1, 1), 2), ((4, 1), 1)]);
        assert_eq!(v.filt_ord().unwrap().entries(), &[(1, 2), (4, 1)]);
    }

    #[test]
    fn zero_valuation_rejected() {
        let coords: BTreeMap<(u64, u32), u32> = [((1, 1), 0)].into_iter().collect();
        assert!(matches!(
            ValuationVector::new(ep(3, 2), 1, coords),
            Err(Error::ZeroValuation { index: 1, slot: 1 })
        ));
    }

    #[test]
    fn canonical_round_trip_exhaustive() {
        for p in [2u64, 3] {
            for e0 in 1..=3u64 {
                let shift = ep(p, (p - 1).max(1) * e0);
                for f in [1u32, 2] {
                    for js in enumerate(&shift, true, 4).unwrap() {
                        let v = ValuationVector::canonical(&js, f).unwrap();
                        assert_eq!(v.filt_ord().unwrap(), js);
                    }
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        // canonical vector of ({1}, 1->2) over rho_{2,2}
        let shift = ep(2, 2);
        let v = vector(shift.clone(), 1, &[((1, 1), 2)]);
        let g = v.quotient_weight_profile(3);
        assert_eq!(g[1], Weight::Infinite);
        assert_eq!(g[2], Weight::Infinite);
        assert_eq!(g[3], Weight::Finite(4));
        assert_eq!(v.profile_breaks(), vec![2]);

        let v = vector(ep(3, 6), 1, &[((1, 1), 2), ((4, 1), 1)]);
        let g = v.quotient_weight_profile(3);
        assert_eq!(g[1], Weight::Infinite);
        assert_eq!(g[2], Weight::Finite(10));
        assert_eq!(g[3], Weight::Finite(9));
        assert_eq!(v.profile_breaks(), vec![1, 2]);

        let all_inf = vector(ep(3, 6), 2, &[]);
        assert!(all_inf
            .quotient_weight_profile(4)
            .iter()
            .all(|w| *w == Weight::Infinite));
    }

    #[test]
    fn profile_monotone_and_breaks_match_filt_ord() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for (p, e) in [(2u64, 2u64), (2, 4), (3, 6), (3, 2)] {
            let shift = ep(p, e);
            let mut indices = shift.tset(0);
            indices.push(shift.e_star().unwrap());
            for f in [1u32, 2] {
                for _ in 0..500 {
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
                    let profile = v.quotient_weight_profile(7);
                    for w in profile.windows(2) {
                        assert!(w[1] <= w[0], "profile must be non-increasing");
                    }
                    let js = v.filt_ord().unwrap();
                    let betas: Vec<u32> = js.entries().iter().map(|&(_, b)| b).rev().collect();
                    assert_eq!(v.profile_breaks(), betas);
                    for &(i, b) in js.entries() {
                        assert_eq!(
                            v.quotient_weight_profile(b + 1)[(b + 1) as usize],
                            Weight::Finite(shift.iterate(i, b))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn filt_ord_depends_only_on_minimal_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let shift = ep(3, 6);
        for _ in 0..800 {
            let mut coords = BTreeMap::new();
            let mut indices = shift.tset(0);
            indices.push(shift.e_star().unwrap());
            for &i in &indices {
                if rng.gen_bool(0.6) {
                    coords.insert((i, 1), rng.gen_range(1..=5u32));
                }
            }
            let v = ValuationVector::new(shift.clone(), 1, coords.clone()).unwrap();
            let js = v.filt_ord().unwrap();
            let minimal: Vec<u64> = js.support();
            // Bump every dominated coordinate; the invariant must not move.
            let mut bumped = coords.clone();
            for (&(i, _), val) in bumped.iter_mut() {
                if !minimal.contains(&i) {
                    *val += rng.gen_range(0..=3);
                }
            }
            let v2 = ValuationVector::new(shift.clone(), 1, bumped).unwrap();
            assert_eq!(v2.filt_ord().unwrap(), js);
            // Or drop them entirely.
            let kept: BTreeMap<(u64, u32), u32> = coords
                .iter()
                .filter(|((i, _), _)| minimal.contains(i))
                .map(|(&k, &v)| (k, v))
                .collect();
            let v3 = ValuationVector::new(shift.clone(), 1, kept).unwrap();
            assert_eq!(v3.filt_ord().unwrap(), js);
        }
    }

    #[test]
    fn slot_permutation_invariance() {
        let shift = ep(2, 2);
        let v1 = vector(shift.clone(), 2, &[((1, 1), 3), ((1, 2), 1), ((3, 1), 2)]);
        let v2 = vector(shift.clone(), 2, &[((1, 1), 1), ((1, 2), 3), ((3, 2), 2)]);
        assert_eq!(v1.filt_ord().unwrap(), v2.filt_ord().unwrap());
        // Raising a non-minimal slot value changes nothing.
        let v3 = vector(shift, 2, &[((1, 1), 5), ((1, 2), 1), ((3, 1), 2)]);
        assert_eq!(v1.filt_ord().unwrap(), v3.filt_ord().unwrap());
    }

    #[test]
    fn torsion_order_examples() {
        let js = JumpSet::new(ep(3, 2), true, vec![(1, 1)]).unwrap();
        assert_eq!(torsion_order(&js).unwrap(), 1);
        let js = JumpSet::new(ep(2, 2), true, vec![(1, 2)]).unwrap();
        assert_eq!(torsion_order(&js).unwrap(), 2);
        let js = JumpSet::new(ep(2, 2), true, vec![(1, 2), (4, 1)]).unwrap();
        assert_eq!(torsion_order(&js).unwrap(), 1);
        let empty = JumpSet::empty(ep(2, 2), true).unwrap();
        assert!(torsion_order(&empty).is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = vector(ep(3, 6), 2, &[((1, 1), 2), ((1, 2), 4), ((4, 1), 1)]);
        let json = v.to_json();
        let back = ValuationVector::from_json(&json, None).unwrap();
        assert_eq!(back, v);
        // Spec-shaped input without an embedded shift.
        let text: serde_json::Value =
            serde_json::from_str(r#"{"f":1,"coords":{"1":2,"4":1},"inf_default":true}"#).unwrap();
        let v2 = ValuationVector::from_json(&text, Some(ep(3, 6))).unwrap();
        assert_eq!(v2.filt_ord().unwrap().entries(), &[(1, 2), (4, 1)]);
    }
}
