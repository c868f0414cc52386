//! The field oracle: compute `(I_K, beta_K)` by absorbing `zeta_{p^{j+1}}`
//! into a product of `p`-power torsion of one-unit generators.
//!
//! Starting from `u = zeta_{p^{j+1}}` (weight `e0`), each round kills the
//! leading term of `u` by multiplying with `(1 + eps x^i)^{p^b}` where
//! `rho^b(i)` equals the current weight and `i` lies in `T`. At starred
//! weights `rho^m(e*)` that absorption can fail — the leading residue must
//! lie in the image of `z -> z^p + c z` picked up when the orbit crosses
//! `e'` — and then the `e*`-generator `(1 + eps x^{e*})^{p^m}` is used
//! instead, which both decides `e* in I_K` and ends accrual. Raising the
//! finished relation to the `p^{j+1}`-th power removes `zeta` and leaves a
//! relation in the shape of the one-unit reconstruction corollary, whose
//! minimal points are exactly the strict records collected along the way.
//! Recording stops once the weight passes the inert bound of the current
//! record.

use rand::Rng;

use crate::eisenstein::{lower_convex_hull, Polygon};
use crate::error::{Error, Result};
use crate::jumpset::JumpSet;

use super::base::BaseElem;
use super::tower::{RingElement, Tower};

/// Find `eps` (an `F_p`-combination of the basis candidates) whose absorber
/// `prod_k cand_k^{m_k}` raises the weight of `u` past `w`. Residues of the
/// candidates add, so `F_p`-combinations sweep the whole reachable set.
fn try_absorb(
    tower: &Tower,
    u: &RingElement,
    w: u64,
    level: u64,
    pw: u64,
) -> Result<Option<RingElement>> {
    let p = tower.p();
    let f = tower.base.zq.f;
    let x_level = tower.pow(&tower.x(), level)?;
    // cand_powers[k][m] = (1 + teich(s^k) x^level)^{m * p^b}
    let mut cand_powers: Vec<Vec<RingElement>> = Vec::with_capacity(f as usize);
    for k in 0..f {
        let mut basis = vec![0u64; f as usize];
        basis[k as usize] = 1;
        let t = tower.teichmuller(&basis)?;
        let unit = tower.add(&tower.one(), &tower.mul(&t, &x_level)?)?;
        let b = tower.pow(&unit, pw)?;
        let mut pows = vec![tower.one(), b.clone()];
        for _ in 2..p {
            let next = tower.mul(pows.last().unwrap(), &b)?;
            pows.push(next);
        }
        cand_powers.push(pows);
    }
    let q = p.pow(f);
    for code in 1..q {
        let mut absorber = tower.one();
        let mut c = code;
        for pows in cand_powers.iter() {
            let digit = (c % p) as usize;
            c /= p;
            if digit > 0 {
                absorber = tower.mul(&absorber, &pows[digit])?;
            }
        }
        let candidate = tower.mul(u, &absorber)?;
        match tower.val_minus_one(&candidate)? {
            None => return Ok(Some(candidate)),
            Some(nw) if nw > w => return Ok(Some(candidate)),
            _ => {}
        }
    }
    Ok(None)
}

/// The jump set `(I_K, beta_K)` of the field the tower presents, at field
/// level: entries carry `beta = length + j + 1`.
pub fn field_jump_set(tower: &Tower) -> Result<JumpSet> {
    let shift = &tower.shift;
    let e_star = shift.e_star().unwrap();
    let e = tower.e;
    let j = tower.base.j;
    let mut u = tower.zeta();
    let mut entries: Vec<(u64, u32)> = Vec::new();
    let mut record: Option<u32> = None;
    // An element that vanishes at this precision has true valuation at least
    // e * n; that is enough to finish when the inert bound sits below it.
    let hard_ceiling = tower.e * tower.precision() as u64;

    loop {
        let w_opt = tower.val_minus_one(&u)?;
        if let Some(m) = record {
            if m == 0 {
                break;
            }
            let bound = shift.inert_bound(m)?;
            match w_opt {
                Some(w) if w > bound => break,
                None if hard_ceiling > bound => break,
                _ => {}
            }
        }
        let Some(w) = w_opt else {
            // The unit vanished before accrual was provably complete.
            return Err(Error::PrecisionExhausted {
                reached: hard_ceiling,
                required: tower.precision() + 4,
            });
        };
        let starred = if w >= e_star && (w - e_star) % e == 0 {
            Some(((w - e_star) / e) as u32)
        } else {
            None
        };
        // First-kind absorber: (1 + eps x^i)^{p^b} with rho^b(i) = w.
        let b = shift.v_rho(w);
        let i = shift.inverse_iterate(w, b).unwrap();
        let pw = tower
            .p()
            .checked_pow(b)
            .ok_or(Error::Overflow)?;
        let absorbed = try_absorb(tower, &u, w, i, pw)?;
        match absorbed {
            Some(next) => {
                if record.map_or(true, |m| b < m) {
                    record = Some(b);
                    entries.push((i, b + j + 1));
                }
                if b == 0 {
                    break;
                }
                u = next;
            }
            None => {
                let depth = starred.ok_or_else(|| {
                    Error::Precondition(format!(
                        "absorption failed at non-starred weight {w}; this is a bug"
                    ))
                })?;
                let pw = tower
                    .p()
                    .checked_pow(depth)
                    .ok_or(Error::Overflow)?;
                let next = try_absorb(tower, &u, w, e_star, pw)?.ok_or_else(|| {
                    Error::Precondition(format!(
                        "e*-absorption failed at weight {w}; this is a bug"
                    ))
                })?;
                let _ = next;
                if record.map_or(true, |m| depth < m) {
                    entries.push((e_star, depth + j + 1));
                }
                // Any starred arrival ends accrual.
                break;
            }
        }
    }
    JumpSet::new(shift.clone(), true, entries)
}

/// The ramification polygon from inside the tower: valuations of the
/// `t`-coefficients of `g(x t + x)`, reduced with `g(x) = 0`, then the lower
/// convex hull.
pub fn ramification_newton(tower: &Tower) -> Result<Polygon> {
    let n = tower.e0 as usize;
    let x = tower.x();
    let x_pows: Vec<RingElement> = {
        let mut v = vec![tower.one()];
        for _ in 1..=n {
            v.push(tower.mul(v.last().unwrap(), &x)?);
        }
        v
    };
    // coefficient of t^i: sum_{k >= i} C(k, i) a_k x^k, with a_n = 1
    let modulus = tower.base.zq.modulus;
    let mut binom = vec![vec![0u64; n + 1]; n + 1];
    for r in 0..=n {
        binom[r][0] = 1 % modulus;
        for c in 1..=r {
            binom[r][c] = (binom[r - 1][c - 1] + binom[r - 1][c]) % modulus;
        }
    }
    let mut points = Vec::new();
    for i in 1..=n {
        let mut acc = tower.zero();
        for k in i..=n {
            let a_k = if k == n {
                tower.one()
            } else {
                tower.from_base(tower.g_lower[k].clone())
            };
            let term = tower.mul(&a_k, &x_pows[k])?;
            let scaled = tower.mul(
                &term,
                &tower.from_base(tower.base.from_zq(tower.base.zq.from_u64(binom[k][i]))),
            )?;
            acc = tower.add(&acc, &scaled)?;
        }
        let v = tower.val(&acc).ok_or(Error::PrecisionExhausted {
            reached: tower.ceiling(),
            required: tower.precision() + 4,
        })?;
        points.push((i as i64, v as i64));
    }
    Ok(lower_convex_hull(&points))
}

/// Uniform element of the maximal ideal of the base at this precision:
/// `y * u` with `u` uniform.
pub fn sample_maximal_ideal(tower: &Tower, rng: &mut impl Rng) -> BaseElem {
    let b = &tower.base;
    let mut u = b.zero();
    for c in u.iter_mut() {
        for digit in c.iter_mut() {
            *digit = rng.gen_range(0..b.zq.modulus);
        }
    }
    b.mul(&b.y(), &u)
}

/// Haar-uniform Eisenstein polynomial of degree `e0` over the base of the
/// given parameters: lower coefficients in the maximal ideal, constant term
/// of valuation exactly 1.
pub fn sample_eisenstein(
    p: u64,
    f: u32,
    j: u32,
    e0: u32,
    n: u32,
    rng: &mut impl Rng,
) -> Result<Tower> {
    // A scratch tower supplies the base ring; coefficients resample until the
    // constant term is a uniformizer times a unit.
    let base = super::base::BaseRing::new(p, f, j, n)?;
    loop {
        let mut g_lower = Vec::with_capacity(e0 as usize);
        for _ in 0..e0 {
            let mut u = base.zero();
            for c in u.iter_mut() {
                for digit in c.iter_mut() {
                    *digit = rng.gen_range(0..base.zq.modulus);
                }
            }
            g_lower.push(base.mul(&base.y(), &u));
        }
        if base.val(&g_lower[0]) == Some(1) {
            return Tower::new(p, f, j, g_lower, n);
        }
    }
}

/// The tower of `g(x^d)` over the same base.
pub fn substitute_power(tower: &Tower, d: u32) -> Result<Tower> {
    let e0 = tower.e0;
    let mut g_lower = vec![tower.base.zero(); (d * e0) as usize];
    for (k, a) in tower.g_lower.iter().enumerate() {
        g_lower[k * d as usize] = a.clone();
    }
    Tower::new(
        tower.p(),
        tower.base.zq.f,
        tower.base.j,
        g_lower,
        tower.precision(),
    )
}

/// Suggested precision for the oracle on a degree-`e0` tower at level `j`.
pub fn default_precision(p: u64, e0: u32, j: u32) -> u32 {
    let mut vp = 0;
    let mut m = e0 as u64;
    while m % p == 0 {
        m /= p;
        vp += 1;
    }
    vp + j + 6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::base::BaseRing;

    fn entries(js: &JumpSet) -> Vec<(u64, u32)> {
        js.entries().to_vec()
    }

    #[test]
    fn quadratic_counterexample_field() {
        // x^2 + 2x + 2 over Q_2 is Q_2(zeta_4): jump set ({1}, 1 -> 2).
        let base = BaseRing::new(2, 1, 0, 8).unwrap();
        let two = base.from_zq(base.zq.from_u64(2));
        let tower = Tower::new(2, 1, 0, vec![two.clone(), two], 8).unwrap();
        let js = field_jump_set(&tower).unwrap();
        assert_eq!(entries(&js), vec![(1, 2)]);
    }

    #[test]
    fn twisted_quadratic_field() {
        // x^2 + 2x - 2 over Q_2 is Q_2(sqrt 3): jump set ({1,4}, (2,1)).
        let base = BaseRing::new(2, 1, 0, 8).unwrap();
        let two = base.from_zq(base.zq.from_u64(2));
        let tower = Tower::new(2, 1, 0, vec![base.neg(&two), two], 8).unwrap();
        let js = field_jump_set(&tower).unwrap();
        assert_eq!(entries(&js), vec![(1, 2), (4, 1)]);
    }

    #[test]
    fn strongly_separable_cubic() {
        // x^3 + yx + y over Q_3(zeta_3): jump set ({1,4}, (2,1)).
        let base = BaseRing::new(3, 1, 0, 8).unwrap();
        let tower =
            Tower::new(3, 1, 0, vec![base.y(), base.y(), base.zero()], 8).unwrap();
        let js = field_jump_set(&tower).unwrap();
        assert_eq!(entries(&js), vec![(1, 2), (4, 1)]);
    }

    #[test]
    fn base_field_itself() {
        // Degree 1: K = Q_q(zeta_p), jump set ({1}, 1 -> 1).
        for (p, f) in [(3u64, 1u32), (2, 1), (5, 2)] {
            let base = BaseRing::new(p, f, 0, 8).unwrap();
            let tower = Tower::new(p, f, 0, vec![base.y()], 8).unwrap();
            let js = field_jump_set(&tower).unwrap();
            assert_eq!(entries(&js), vec![(1, 1)], "p={p} f={f}");
        }
    }

    #[test]
    fn oracle_output_is_admissible() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        for (p, f, e0) in [(2u64, 1u32, 2u32), (3, 1, 3), (3, 2, 2), (5, 1, 1)] {
            for _ in 0..20 {
                let tower =
                    sample_eisenstein(p, f, 0, e0, default_precision(p, e0, 0), &mut rng)
                        .unwrap();
                let js = field_jump_set(&tower).unwrap();
                assert!(js.is_admissible().unwrap(), "p={p} f={f} e0={e0}: {js}");
            }
        }
    }

    #[test]
    fn newton_polygon_of_cubic() {
        let base = BaseRing::new(3, 1, 0, 8).unwrap();
        let tower =
            Tower::new(3, 1, 0, vec![base.y(), base.y(), base.zero()], 8).unwrap();
        let poly = ramification_newton(&tower).unwrap();
        assert_eq!(poly.vertices(), &[(1, 4), (3, 3)]);
    }

    #[test]
    fn newton_polygon_degree_one() {
        let base = BaseRing::new(3, 1, 0, 8).unwrap();
        let tower = Tower::new(3, 1, 0, vec![base.y()], 8).unwrap();
        let poly = ramification_newton(&tower).unwrap();
        assert_eq!(poly.vertices(), &[(1, 1)]);
    }
}
