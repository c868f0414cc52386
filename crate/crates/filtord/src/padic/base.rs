//! The cyclotomic layer: `O = Z_q[y]` with `1 + y = zeta_{p^{j+1}}`, i.e.
//! `y` a root of `Phi_{p^{j+1}}(1 + y)`, Eisenstein of degree `p^j (p-1)`
//! over `Z_q`. `y` is the uniformizer of the base field.

use crate::error::{Error, Result};

use super::zq::{FqElem, Zq, ZqElem};

/// Element of the base ring: `d` coefficients in `Z_q`, the `y`-power basis.
pub type BaseElem = Vec<ZqElem>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseRing {
    pub zq: Zq,
    pub j: u32,
    /// Ramification degree `d = p^j (p - 1)` over `Q_q`.
    pub d: u32,
    /// Lower coefficients of the monic relation:
    /// `y^d = -(rel[0] + rel[1] y + ... + rel[d-1] y^{d-1})`.
    rel: Vec<ZqElem>,
}

impl BaseRing {
    pub fn new(p: u64, f: u32, j: u32, n: u32) -> Result<Self> {
        if j > 1 {
            return Err(Error::Precondition(
                "cyclotomic levels j > 1 are not supported".into(),
            ));
        }
        let zq = Zq::new(p, f, n)?;
        let d = p.pow(j) as u32 * (p - 1) as u32;
        // Phi_{p^{j+1}}(1 + y) = sum_{k < p} (1 + y)^{k p^j}, expanded with
        // binomials mod p^n.
        let top = (p - 1) as usize * p.pow(j) as usize;
        let mut binom = vec![vec![0u64; top + 1]; top + 1];
        for r in 0..=top {
            binom[r][0] = 1 % zq.modulus;
            for c in 1..=r {
                binom[r][c] = (binom[r - 1][c - 1] + binom[r - 1][c]) % zq.modulus;
            }
        }
        let mut poly = vec![0u64; top + 1];
        for k in 0..p {
            let exp = (k * p.pow(j)) as usize;
            for c in 0..=exp {
                poly[c] = (poly[c] + binom[exp][c]) % zq.modulus;
            }
        }
        debug_assert_eq!(poly[top], 1 % zq.modulus, "relation must be monic");
        debug_assert_eq!(poly[0] % zq.modulus, p % zq.modulus, "Phi(1) = p");
        let rel: Vec<ZqElem> = poly[..top].iter().map(|&c| zq.from_u64(c)).collect();
        Ok(BaseRing { zq, j, d, rel })
    }

    pub fn p(&self) -> u64 {
        self.zq.p
    }

    pub fn zero(&self) -> BaseElem {
        vec![self.zq.zero(); self.d as usize]
    }

    pub fn one(&self) -> BaseElem {
        let mut e = self.zero();
        e[0] = self.zq.one();
        e
    }

    pub fn from_zq(&self, c: ZqElem) -> BaseElem {
        let mut e = self.zero();
        e[0] = c;
        e
    }

    /// The uniformizer `y`.
    pub fn y(&self) -> BaseElem {
        let mut e = self.zero();
        if self.d == 1 {
            // y reduces immediately: y = -rel[0].
            e[0] = self.zq.neg(&self.rel[0]);
        } else {
            e[1] = self.zq.one();
        }
        e
    }

    /// `zeta_{p^{j+1}} = 1 + y`.
    pub fn zeta(&self) -> BaseElem {
        self.add(&self.one(), &self.y())
    }

    pub fn is_zero(&self, a: &BaseElem) -> bool {
        a.iter().all(|c| self.zq.is_zero(c))
    }

    pub fn add(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        a.iter().zip(b).map(|(x, y)| self.zq.add(x, y)).collect()
    }

    pub fn neg(&self, a: &BaseElem) -> BaseElem {
        a.iter().map(|x| self.zq.neg(x)).collect()
    }

    pub fn sub(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        a.iter().zip(b).map(|(x, y)| self.zq.sub(x, y)).collect()
    }

    pub fn mul(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        let d = self.d as usize;
        let mut wide = vec![self.zq.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if self.zq.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let prod = self.zq.mul(x, y);
                wide[i + j] = self.zq.add(&wide[i + j], &prod);
            }
        }
        for k in (d..wide.len()).rev() {
            if self.zq.is_zero(&wide[k]) {
                continue;
            }
            let lead = std::mem::replace(&mut wide[k], self.zq.zero());
            for (i, c) in self.rel.iter().enumerate() {
                let sub = self.zq.mul(&lead, c);
                wide[k - d + i] = self.zq.sub(&wide[k - d + i], &sub);
            }
        }
        wide.truncate(d);
        wide
    }

    /// Valuation in `y`-units (`v(y) = 1`, `v(p) = d`); `None` when the
    /// element vanishes at this precision.
    pub fn val(&self, a: &BaseElem) -> Option<u64> {
        a.iter()
            .enumerate()
            .filter(|(_, c)| !self.zq.is_zero(c))
            .map(|(b, c)| self.d as u64 * self.zq.vp(c) as u64 + b as u64)
            .min()
    }

    /// Residue of a unit (valuation 0): the `y^0` coefficient mod `p`.
    pub fn residue(&self, a: &BaseElem) -> FqElem {
        self.zq.residue(&a[0])
    }
}
