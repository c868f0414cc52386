//! `O_K` for `K = Q_q(zeta_{p^{j+1}})[x]/(g)`, `g` Eisenstein of degree
//! `e0` over the base: truncated-precision arithmetic with exact valuations.
//!
//! Elements are polynomials in the uniformizer `x` with base-ring
//! coefficients. The monomial `p^v y^b x^c` has valuation
//! `e v + e0 b + c`, and `e0 b + c` runs bijectively over `[0, e)`, so the
//! minimum over monomials is the exact valuation whenever the element is
//! nonzero at this precision. Computed valuations at or above `e (n - 1)`
//! are treated as beyond the reliable ceiling.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::shift::Shift;

use super::base::{BaseElem, BaseRing};
use super::zq::FqElem;

static NEXT_TOWER_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct Tower {
    pub id: u64,
    pub base: BaseRing,
    /// Degree of the Eisenstein step.
    pub e0: u32,
    /// Lower coefficients `a_0 .. a_{e0-1}` of the monic `g`.
    pub g_lower: Vec<BaseElem>,
    /// `v_K(p) = p^j (p-1) e0`.
    pub e: u64,
    pub shift: Shift,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    pub tower_id: u64,
    /// `e0` base-ring coefficients, `x`-power basis.
    pub coeffs: Vec<BaseElem>,
}

impl Tower {
    pub fn new(p: u64, f: u32, j: u32, g_lower: Vec<BaseElem>, n: u32) -> Result<Self> {
        let base = BaseRing::new(p, f, j, n)?;
        let e0 = g_lower.len() as u32;
        if e0 == 0 {
            return Err(Error::NotEisenstein("degree must be at least 1".into()));
        }
        for (i, a) in g_lower.iter().enumerate() {
            if a.len() != base.d as usize {
                return Err(Error::NotEisenstein(format!(
                    "coefficient {i} has wrong shape"
                )));
            }
            let v = base.val(a);
            if i == 0 {
                if v != Some(1) {
                    return Err(Error::NotEisenstein(format!(
                        "constant term has valuation {v:?}, need exactly 1"
                    )));
                }
            } else if let Some(v) = v {
                if v == 0 {
                    return Err(Error::NotEisenstein(format!(
                        "coefficient {i} is a unit"
                    )));
                }
            }
        }
        let e = base.d as u64 * e0 as u64;
        let shift = Shift::rho_ep(p, e)?;
        Ok(Tower {
            id: NEXT_TOWER_ID.fetch_add(1, Ordering::Relaxed),
            base,
            e0,
            g_lower,
            e,
            shift,
        })
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn precision(&self) -> u32 {
        self.base.zq.n
    }

    /// Valuations computed at or above this are unreliable.
    pub fn ceiling(&self) -> u64 {
        self.e * (self.precision() as u64 - 1)
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            tower_id: self.id,
            coeffs: vec![self.base.zero(); self.e0 as usize],
        }
    }

    pub fn one(&self) -> RingElement {
        let mut z = self.zero();
        z.coeffs[0] = self.base.one();
        z
    }

    pub fn from_base(&self, c: BaseElem) -> RingElement {
        let mut z = self.zero();
        z.coeffs[0] = c;
        z
    }

    /// The uniformizer `x`.
    pub fn x(&self) -> RingElement {
        let mut z = self.zero();
        if self.e0 == 1 {
            z.coeffs[0] = self.base.neg(&self.g_lower[0]);
        } else {
            z.coeffs[1] = self.base.one();
        }
        z
    }

    /// `zeta_{p^{j+1}}` as a constant.
    pub fn zeta(&self) -> RingElement {
        self.from_base(self.base.zeta())
    }

    fn check(&self, a: &RingElement) -> Result<()> {
        if a.tower_id != self.id {
            return Err(Error::TowerMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement {
            tower_id: self.id,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        })
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        Ok(RingElement {
            tower_id: self.id,
            coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect(),
        })
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        let e0 = self.e0 as usize;
        let mut wide = vec![self.base.zero(); 2 * e0 - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let prod = self.base.mul(x, y);
                wide[i + j] = self.base.add(&wide[i + j], &prod);
            }
        }
        for k in (e0..wide.len()).rev() {
            if self.base.is_zero(&wide[k]) {
                continue;
            }
            let lead = std::mem::replace(&mut wide[k], self.base.zero());
            for (i, c) in self.g_lower.iter().enumerate() {
                let sub = self.base.mul(&lead, c);
                wide[k - e0 + i] = self.base.sub(&wide[k - e0 + i], &sub);
            }
        }
        wide.truncate(e0);
        Ok(RingElement {
            tower_id: self.id,
            coeffs: wide,
        })
    }

    pub fn pow(&self, a: &RingElement, mut exp: u64) -> Result<RingElement> {
        let mut result = self.one();
        let mut b = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &b)?;
            }
            b = self.mul(&b, &b)?;
            exp >>= 1;
        }
        Ok(result)
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }

    /// Exact valuation, or `None` when the element is zero at this precision
    /// (true valuation at least `e * n`).
    pub fn val(&self, a: &RingElement) -> Option<u64> {
        a.coeffs
            .iter()
            .enumerate()
            .filter_map(|(c, coeff)| {
                self.base
                    .val(coeff)
                    .map(|vb| self.e0 as u64 * vb + c as u64)
            })
            .min()
    }

    /// `v(a - 1)`.
    pub fn val_minus_one(&self, a: &RingElement) -> Result<Option<u64>> {
        let diff = self.sub(a, &self.one())?;
        Ok(self.val(&diff))
    }

    /// Residue of a valuation-0 element.
    pub fn residue(&self, a: &RingElement) -> FqElem {
        self.base.residue(&a.coeffs[0])
    }

    pub fn teichmuller(&self, residue: &FqElem) -> Result<RingElement> {
        let lift = self.base.zq.teichmuller(residue)?;
        Ok(self.from_base(self.base.from_zq(lift)))
    }

    /// Inverse of a unit by lifting the residue-field inverse.
    pub fn invert_unit(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        if self.val(a) != Some(0) {
            return Err(Error::Precondition("inverse of a non-unit".into()));
        }
        let fq = self.base.zq.residue_ring();
        let r = self.residue(a);
        // residue inverse: r^{q-2} in F_q*
        let q = self.p().pow(self.base.zq.f);
        let rinv = fq.pow(&r, q - 2);
        let mut z = self.teichmuller(&rinv)?;
        // Newton: z <- z (2 - a z), doubling correct digits each round.
        let two = self.add(&self.one(), &self.one())?;
        let rounds = 64 - (self.ceiling() + self.e).leading_zeros() as u64 + 2;
        for _ in 0..rounds {
            let az = self.mul(a, &z)?;
            let corr = self.sub(&two, &az)?;
            z = self.mul(&z, &corr)?;
        }
        debug_assert!(self.is_zero(&self.sub(&self.mul(a, &z)?, &self.one())?));
        Ok(z)
    }
}
