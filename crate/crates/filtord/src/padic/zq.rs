//! The unramified layer: `Z_q = Z_{p^f}` truncated at `p^n`, realized as
//! `(Z/p^n)[s]` modulo a fixed monic irreducible of degree `f`.

use crate::error::{Error, Result};

/// Element of `Z_q mod p^n`: `f` coefficients in `[0, p^n)`.
pub type ZqElem = Vec<u64>;

/// Element of the residue field `F_q`: `f` coefficients in `[0, p)`.
pub type FqElem = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zq {
    pub p: u64,
    pub n: u32,
    pub modulus: u64,
    pub f: u32,
    /// Lower coefficients of the monic minimal polynomial:
    /// `s^f = -(c_0 + c_1 s + ... + c_{f-1} s^{f-1})`.
    min_poly_lower: Vec<u64>,
}

fn pow_u64(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

/// Lexicographically first monic irreducible of degree `f` over `F_p`,
/// found by trial division against all monic polynomials of degree
/// `1..=f/2`. Coefficients are the lower ones, constant term first.
fn find_irreducible(p: u64, f: u32) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    let f = f as usize;
    let total = p.pow(f as u32);
    'cand: for code in 0..total {
        let mut lower = Vec::with_capacity(f);
        let mut c = code;
        for _ in 0..f {
            lower.push(c % p);
            c /= p;
        }
        // divide by every monic divisor of degree d <= f/2
        for d in 1..=f / 2 {
            let dtotal = p.pow(d as u32);
            for dcode in 0..dtotal {
                let mut div = Vec::with_capacity(d + 1);
                let mut c = dcode;
                for _ in 0..d {
                    div.push(c % p);
                    c /= p;
                }
                div.push(1);
                let mut rem: Vec<u64> = lower.clone();
                rem.push(1);
                // synthetic division of rem by div over F_p
                for k in (d..rem.len()).rev() {
                    let lead = rem[k] % p;
                    if lead == 0 {
                        continue;
                    }
                    rem[k] = 0;
                    for (i, &dc) in div.iter().enumerate().take(d) {
                        let idx = k - d + i;
                        rem[idx] = (rem[idx] + p * p - (lead * dc) % p) % p;
                    }
                }
                if rem.iter().all(|&x| x % p == 0) {
                    continue 'cand;
                }
            }
        }
        return lower;
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

impl Zq {
    pub fn new(p: u64, f: u32, n: u32) -> Result<Self> {
        let modulus = pow_u64(p, n)?;
        // products must fit in u128: modulus^2 * f stays well below 2^127
        if modulus > u64::MAX / 2 {
            return Err(Error::Overflow);
        }
        let mut min_poly_lower = find_irreducible(p, f);
        // lift coefficients to [0, p^n) as-is
        for c in &mut min_poly_lower {
            *c %= modulus;
        }
        Ok(Zq {
            p,
            n,
            modulus,
            f,
            min_poly_lower,
        })
    }

    /// The same field at precision 1 (the residue field as a ring).
    pub fn residue_ring(&self) -> Zq {
        let mut lower = self.min_poly_lower.clone();
        for c in &mut lower {
            *c %= self.p;
        }
        Zq {
            p: self.p,
            n: 1,
            modulus: self.p,
            f: self.f,
            min_poly_lower: lower,
        }
    }

    pub fn zero(&self) -> ZqElem {
        vec![0; self.f as usize]
    }

    pub fn one(&self) -> ZqElem {
        let mut e = self.zero();
        e[0] = 1 % self.modulus;
        e
    }

    pub fn from_u64(&self, v: u64) -> ZqElem {
        let mut e = self.zero();
        e[0] = v % self.modulus;
        e
    }

    pub fn is_zero(&self, a: &ZqElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= self.modulus {
                    s - self.modulus
                } else {
                    s
                }
            })
            .collect()
    }

    pub fn neg(&self, a: &ZqElem) -> ZqElem {
        a.iter()
            .map(|&x| if x == 0 { 0 } else { self.modulus - x })
            .collect()
    }

    pub fn sub(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        self.add(a, &self.neg(b))
    }

    fn mul_mod(&self, x: u64, y: u64) -> u64 {
        (x as u128 * y as u128 % self.modulus as u128) as u64
    }

    pub fn scale(&self, a: &ZqElem, k: u64) -> ZqElem {
        a.iter().map(|&x| self.mul_mod(x, k % self.modulus)).collect()
    }

    pub fn mul(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        let f = self.f as usize;
        let mut wide = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                wide[i + j] = (wide[i + j] + self.mul_mod(x, y)) % self.modulus;
            }
        }
        // reduce s^k for k >= f via the minimal polynomial
        for k in (f..wide.len()).rev() {
            let lead = wide[k];
            if lead == 0 {
                continue;
            }
            wide[k] = 0;
            for (i, &c) in self.min_poly_lower.iter().enumerate() {
                let sub = self.mul_mod(lead, c);
                let idx = k - f + i;
                wide[idx] = (wide[idx] + self.modulus - sub) % self.modulus;
            }
        }
        wide.truncate(f);
        wide
    }

    pub fn pow(&self, a: &ZqElem, mut exp: u64) -> ZqElem {
        let mut result = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        result
    }

    /// `v_p` of the element: the minimum `v_p` of its coefficients, clamped
    /// at the precision `n` for zero.
    pub fn vp(&self, a: &ZqElem) -> u32 {
        a.iter()
            .map(|&c| {
                if c == 0 {
                    self.n
                } else {
                    let mut v = 0;
                    let mut c = c;
                    while c % self.p == 0 {
                        c /= self.p;
                        v += 1;
                    }
                    v
                }
            })
            .min()
            .unwrap_or(self.n)
    }

    /// Reduction modulo `p`.
    pub fn residue(&self, a: &ZqElem) -> FqElem {
        a.iter().map(|&c| c % self.p).collect()
    }

    /// The multiplicative lift of a residue: the fixed point of `z -> z^q`
    /// congruent to it modulo `p`.
    pub fn teichmuller(&self, residue: &FqElem) -> Result<ZqElem> {
        let q = pow_u64(self.p, self.f)?;
        let mut z: ZqElem = residue.iter().map(|&c| c % self.modulus).collect();
        for _ in 0..=self.n {
            let next = self.pow(&z, q);
            if next == z {
                return Ok(z);
            }
            z = next;
        }
        Err(Error::TeichmullerDivergence)
    }

    /// All residue-field elements, zero first, in a fixed order.
    pub fn fq_elements(&self) -> Vec<FqElem> {
        let q = self.p.pow(self.f);
        (0..q)
            .map(|code| {
                let mut c = code;
                let mut e = Vec::with_capacity(self.f as usize);
                for _ in 0..self.f {
                    e.push(c % self.p);
                    c /= self.p;
                }
                e
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_arithmetic() {
        let zq = Zq::new(3, 1, 5).unwrap();
        let a = zq.from_u64(17);
        let b = zq.from_u64(200);
        assert_eq!(zq.mul(&a, &b), zq.from_u64(17 * 200 % 243));
        assert_eq!(zq.add(&a, &zq.neg(&a)), zq.zero());
        assert_eq!(zq.vp(&zq.from_u64(18)), 2);
        assert_eq!(zq.vp(&zq.zero()), 5);
    }

    #[test]
    fn quadratic_extension() {
        let zq = Zq::new(2, 2, 4).unwrap();
        // s satisfies the lexicographically first irreducible: x^2 + x + 1.
        let s = vec![0, 1];
        let s2 = zq.mul(&s, &s);
        // s^2 = -(1 + s) = 15 + 15 s mod 16
        assert_eq!(s2, vec![15, 15]);
        // Frobenius cycles F_4 - {0}: s^3 = 1 mod 2.
        let s3 = zq.mul(&s2, &s);
        assert_eq!(zq.residue(&s3), vec![1, 0]);
    }

    #[test]
    fn irreducibles_are_irreducible() {
        // Sanity for f = 4 where degree-2 factors must be excluded.
        for p in [2u64, 3] {
            let zq = Zq::new(p, 4, 1).unwrap();
            // The minimal polynomial has no roots in F_p.
            for r in 0..p {
                let mut acc = 1 % p;
                let mut val = 0;
                for (i, &c) in zq.min_poly_lower.iter().enumerate() {
                    let _ = i;
                    val = (val + c * acc) % p;
                    acc = acc * r % p;
                }
                val = (val + acc) % p; // leading term r^4
                assert_ne!((r, val.eq(&0)), (r, true), "root {r} mod {p}");
            }
        }
    }

    #[test]
    fn teichmuller_properties() {
        let zq = Zq::new(3, 1, 8).unwrap();
        assert_eq!(zq.teichmuller(&vec![0]).unwrap(), zq.zero());
        assert_eq!(zq.teichmuller(&vec![1]).unwrap(), zq.one());
        // teich(2) = -1 since (-1)^3 = -1.
        assert_eq!(zq.teichmuller(&vec![2]).unwrap(), zq.neg(&zq.one()));

        let zq = Zq::new(2, 2, 6).unwrap();
        for a in zq.fq_elements() {
            for b in zq.fq_elements() {
                let ta = zq.teichmuller(&a).unwrap();
                let tb = zq.teichmuller(&b).unwrap();
                let fq = zq.residue_ring();
                let prod_res = fq.mul(&a, &b);
                let tp = zq.teichmuller(&prod_res).unwrap();
                assert_eq!(zq.mul(&ta, &tb), tp, "teich({a:?}) teich({b:?})");
            }
        }
    }
}
