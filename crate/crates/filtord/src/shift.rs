//! Shift maps and the partial order they induce on weighted points.
//!
//! A shift is a strictly increasing self-map of the positive integers with
//! `rho(1) > 1`. The complement of its image is `T`, and when `T` is finite
//! the derived constants `e* = max(T) + 1` and `e'` (the preimage of `e*`)
//! drive everything else in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(a, b)` with weight index `a >= 1` and level `b >= 0`, compared
/// through [`Shift::leq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub a: u64,
    pub b: u32,
}

impl Point {
    pub fn new(a: u64, b: u32) -> Self {
        Point { a, b }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Kind {
    /// `rho(i) = min(i + e, p * i)`, the shift of a characteristic-0 local
    /// field with `e = v(p)` and residue characteristic `p`.
    RhoEp { p: u64, e: u64 },
    /// `rho(i) = p * i`, the characteristic-`p` shift.
    RhoInf { p: u64 },
    /// Explicit values on `1..=values.len()`, continued by `i -> i + tail_step`.
    Table { values: Vec<u64>, tail_step: u64 },
}

/// A shift map. Immutable after construction and cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Kind", into = "Kind")]
pub struct Shift {
    kind: Kind,
}

impl TryFrom<Kind> for Shift {
    type Error = String;
    fn try_from(kind: Kind) -> std::result::Result<Self, String> {
        let shift = Shift { kind };
        shift.validate().map_err(|e| e.to_string())?;
        Ok(shift)
    }
}

impl From<Shift> for Kind {
    fn from(s: Shift) -> Kind {
        s.kind
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Shift {
    pub fn rho_ep(p: u64, e: u64) -> Result<Self> {
        let s = Shift {
            kind: Kind::RhoEp { p, e },
        };
        s.validate()?;
        Ok(s)
    }

    pub fn rho_inf(p: u64) -> Result<Self> {
        let s = Shift {
            kind: Kind::RhoInf { p },
        };
        s.validate()?;
        Ok(s)
    }

    pub fn table(values: Vec<u64>, tail_step: u64) -> Result<Self> {
        let s = Shift {
            kind: Kind::Table { values, tail_step },
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            Kind::RhoEp { p, e } => {
                if !is_prime(*p) {
                    return Err(Error::Precondition(format!("p = {p} is not prime")));
                }
                if *e == 0 {
                    return Err(Error::Precondition("e must be positive".into()));
                }
            }
            Kind::RhoInf { p } => {
                if !is_prime(*p) {
                    return Err(Error::Precondition(format!("p = {p} is not prime")));
                }
            }
            Kind::Table { values, tail_step } => {
                if *tail_step == 0 {
                    return Err(Error::Precondition("tail_step must be positive".into()));
                }
                let mut prev = 1u64;
                for (idx, &v) in values.iter().enumerate() {
                    let i = idx as u64 + 1;
                    if v <= prev || v <= i {
                        return Err(Error::Precondition(format!(
                            "table is not a strictly increasing shift at i = {i}"
                        )));
                    }
                    prev = v;
                }
                let next_tail = values.len() as u64 + 1 + tail_step;
                if !values.is_empty() && next_tail <= prev {
                    return Err(Error::Precondition(
                        "affine tail does not continue the table increasingly".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Residue characteristic attached to this shift.
    pub fn p(&self) -> u64 {
        match self.kind {
            Kind::RhoEp { p, .. } | Kind::RhoInf { p } => p,
            // No canonical p for a table shift; callers that need one supply it.
            Kind::Table { .. } => 0,
        }
    }

    /// The ramification index `e` for `rho_ep`, if applicable.
    pub fn e(&self) -> Option<u64> {
        match self.kind {
            Kind::RhoEp { e, .. } => Some(e),
            _ => None,
        }
    }

    pub fn is_rho_ep(&self) -> bool {
        matches!(self.kind, Kind::RhoEp { .. })
    }

    /// `rho(i)`. Panics on `i = 0`.
    pub fn apply(&self, i: u64) -> u64 {
        assert!(i >= 1, "shift arguments start at 1");
        match &self.kind {
            Kind::RhoEp { p, e } => (i + e).min(p.saturating_mul(i)),
            Kind::RhoInf { p } => p.saturating_mul(i),
            Kind::Table { values, tail_step } => {
                if i as usize <= values.len() {
                    values[i as usize - 1]
                } else {
                    i + tail_step
                }
            }
        }
    }

    /// `rho^k(i)` in wide arithmetic.
    pub fn iterate(&self, i: u64, k: u32) -> u128 {
        let mut x = i as u128;
        for _ in 0..k {
            x = match &self.kind {
                Kind::RhoEp { p, e } => (x + *e as u128).min(*p as u128 * x),
                Kind::RhoInf { p } => *p as u128 * x,
                Kind::Table { values, tail_step } => {
                    if x <= values.len() as u128 {
                        values[x as usize - 1] as u128
                    } else {
                        x + *tail_step as u128
                    }
                }
            };
        }
        x
    }

    /// The unique `y` with `rho(y) = x`, if any. Binary search over the
    /// strictly increasing map.
    pub fn preimage(&self, x: u64) -> Option<u64> {
        if x < 2 {
            return None;
        }
        let (mut lo, mut hi) = (1u64, x);
        while lo <= hi {
            let mid = lo + (hi - lo) / 2;
            let v = self.apply(mid);
            if v == x {
                return Some(mid);
            } else if v < x {
                lo = mid + 1;
            } else {
                if mid == 1 {
                    break;
                }
                hi = mid - 1;
            }
        }
        None
    }

    /// The unique `y` with `rho^k(y) = m`, if any.
    pub fn inverse_iterate(&self, m: u64, k: u32) -> Option<u64> {
        let mut x = m;
        for _ in 0..k {
            x = self.preimage(x)?;
        }
        Some(x)
    }

    /// `v(m)`: the largest `i` with `m` in the image of `rho^i`.
    pub fn v_rho(&self, m: u64) -> u32 {
        assert!(m >= 1);
        let mut x = m;
        let mut k = 0;
        while let Some(y) = self.preimage(x) {
            x = y;
            k += 1;
        }
        k
    }

    /// True when `i` lies in `T = Z_{>=1} - rho(Z_{>=1})`.
    pub fn in_t(&self, i: u64) -> bool {
        i >= 1 && self.preimage(i).is_none()
    }

    /// `T` intersected with `[1, bound]`, sorted. For finite `T` the full set
    /// is returned regardless of `bound`.
    pub fn tset(&self, bound: u64) -> Vec<u64> {
        let cap = match self.e_star() {
            Some(e_star) => e_star - 1,
            None => bound,
        };
        (1..=cap).filter(|&i| self.in_t(i)).collect()
    }

    /// `T* = T ∪ {e*}` for finite `T`.
    pub fn tset_star(&self) -> Result<Vec<u64>> {
        let e_star = self.e_star().ok_or(Error::InfiniteTset)?;
        let mut t = self.tset(e_star);
        t.push(e_star);
        Ok(t)
    }

    /// `max(T) + 1` when `T` is finite.
    pub fn e_star(&self) -> Option<u64> {
        match &self.kind {
            Kind::RhoEp { p, e } => {
                // ceil(p e / (p - 1))
                Some((p * e + (p - 2)) / (p - 1))
            }
            Kind::RhoInf { .. } => None,
            Kind::Table { values, tail_step } => {
                // Everything beyond the table reach is i + tail_step of an
                // argument past the table, so T is contained in a finite box.
                let reach = values.iter().copied().max().unwrap_or(1) + tail_step + 1;
                (1..=reach).filter(|&i| self.in_t(i)).max().map(|m| m + 1)
            }
        }
    }

    /// The unique `e'` with `rho(e') = e*`.
    pub fn e_prime(&self) -> Option<u64> {
        self.e_star().and_then(|s| self.preimage(s))
    }

    /// Depth `m` when `pos = rho^m(e*)`, for finite `T`.
    pub fn starred_depth(&self, pos: u64) -> Option<u32> {
        let e_star = self.e_star()?;
        let mut x = e_star;
        let mut m = 0;
        while x < pos {
            x = self.apply(x);
            m += 1;
        }
        (x == pos).then_some(m)
    }

    /// Largest position that can still produce a shot of length `< m` or a
    /// starred arrival of depth `< m`. Positions strictly beyond it are inert
    /// for a game whose current record is `m`.
    ///
    /// For `rho_ep` this is `e* + (m-1) e`: beyond it, every first-kind length
    /// is at least `m` (stepping down by `e` stays above `e*` for `m-1` steps)
    /// and every starred depth is at least `m`.
    pub fn inert_bound(&self, m: u32) -> Result<u64> {
        assert!(m >= 1);
        match &self.kind {
            Kind::RhoEp { e, .. } => {
                let e_star = self.e_star().unwrap();
                Ok(e_star + (m as u64 - 1) * e)
            }
            _ => Err(Error::Precondition(
                "inert bound is only available for rho_ep shifts".into(),
            )),
        }
    }

    /// The partial order: `(a1,b1) <= (a2,b2)` iff `b2 >= b1` and
    /// `rho^{b2}(a2) >= rho^{b1}(a1)`.
    pub fn leq(&self, x: Point, y: Point) -> bool {
        y.b >= x.b && self.iterate(y.a, y.b) >= self.iterate(x.a, x.b)
    }

    /// Strict version of [`Shift::leq`].
    pub fn lt(&self, x: Point, y: Point) -> bool {
        x != y && self.leq(x, y)
    }

    /// `min { s >= 0 : rho^s(j) >= i }`.
    pub fn hops_to_reach(&self, j: u64, i: u64) -> u32 {
        let mut x = j as u128;
        let mut s = 0;
        while x < i as u128 {
            x = self.iterate(x as u64, 1);
            s += 1;
        }
        s
    }
}

impl std::fmt::Display for Shift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            Kind::RhoEp { p, e } => write!(f, "rho_{{{e},{p}}}"),
            Kind::RhoInf { p } => write!(f, "rho_{{inf,{p}}}"),
            Kind::Table { values, tail_step } => {
                write!(f, "rho_table{values:?}+{tail_step}")
            }
        }
    }
}
