//! Jump sets read off an Eisenstein polynomial: the monomial-valuation
//! extraction and the equivalent walk procedure, strong separability,
//! ramification polygons, realization of admissible jump sets by explicit
//! polynomials, and jump-set transforms under field extensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jumpset::{extract, Extremal, JumpSet};
use crate::padic::base::{BaseElem, BaseRing};
use crate::padic::zq::FqElem;
use crate::padic::Tower;
use crate::shift::{Point, Shift};

/// Valuation profile of an Eisenstein polynomial of degree `n` over
/// `Q_q(zeta_{p^{j+1}})`: `coeff_vals[i]` is the base valuation of `a_i`
/// (`None` for a zero coefficient), the leading coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinShape {
    pub p: u64,
    pub f: u32,
    pub j: u32,
    pub n: u32,
    pub coeff_vals: Vec<Option<u64>>,
}

impl EisensteinShape {
    pub fn new(p: u64, f: u32, j: u32, n: u32, coeff_vals: Vec<Option<u64>>) -> Result<Self> {
        if n == 0 || coeff_vals.len() != n as usize {
            return Err(Error::MalformedShape(format!(
                "need exactly n = {n} coefficient valuations"
            )));
        }
        if coeff_vals[0] != Some(1) {
            return Err(Error::MalformedShape(
                "constant term must have valuation exactly 1".into(),
            ));
        }
        for (i, v) in coeff_vals.iter().enumerate() {
            if let Some(v) = v {
                if *v == 0 {
                    return Err(Error::MalformedShape(format!(
                        "coefficient {i} is a unit; the polynomial is not Eisenstein"
                    )));
                }
            }
        }
        Ok(EisensteinShape {
            p,
            f,
            j,
            n,
            coeff_vals,
        })
    }

    /// `v(p)` in the base field.
    pub fn base_e(&self) -> u64 {
        self.p.pow(self.j) * (self.p - 1)
    }

    /// `v_K(p) = p^j (p-1) n` in the extension the shape presents.
    pub fn e(&self) -> u64 {
        self.base_e() * self.n as u64
    }

    /// Base valuation of `a_i` for `1 <= i <= n`, the leading term counting
    /// with valuation 0.
    fn val_at(&self, i: u32) -> Option<u64> {
        if i == self.n {
            Some(0)
        } else {
            self.coeff_vals[i as usize]
        }
    }

    /// Strong separability: some `a_i` with `i` coprime to `p` and
    /// `v(a_i) < v(p)`.
    pub fn is_strongly_separable(&self) -> bool {
        (1..=self.n).any(|i| {
            i as u64 % self.p != 0
                && self
                    .val_at(i)
                    .is_some_and(|v| v < self.base_e())
        })
    }
}

fn vp(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Jump sets of a shape: the minimal points of the monomial graph over
/// `rho_inf` (shot-level beta), plus the same data as a field-level jump set
/// over `rho_{e,p}` when the shape is strongly separable.
#[derive(Debug, Clone)]
pub struct ShapeJumpSets {
    /// Minimal extraction over `rho_{inf,p}`: beta = shot length + 1.
    pub game: JumpSet,
    /// Over `rho_{e,p}` with beta raised by `j` (the field convention);
    /// trustworthy exactly when the shape is strongly separable.
    pub field: Option<JumpSet>,
}

/// The monomial graph `S_g`: a point
/// `((v(a_i) n + i) / p^{v_p(i)}, v_p(i) + 1)` for each nonzero monomial
/// with `v_p(i) <= v_p(n)`, the leading term included.
pub fn shape_points(shape: &EisensteinShape) -> Vec<Point> {
    let p = shape.p;
    let n = shape.n as u64;
    let cap = vp(n, p);
    let mut points = Vec::new();
    for i in 1..=shape.n {
        let Some(v) = shape.val_at(i) else { continue };
        let t = vp(i as u64, p);
        if t > cap {
            continue;
        }
        let w = v * n + i as u64;
        debug_assert_eq!(w % p.pow(t), 0, "side condition keeps positions integral");
        points.push(Point::new(w / p.pow(t), t + 1));
    }
    points
}

pub fn jump_set_of_shape(shape: &EisensteinShape) -> Result<ShapeJumpSets> {
    let rho_inf = Shift::rho_inf(shape.p)?;
    let mut points = shape_points(shape);
    // Distinct monomials can share a graph point only through equal weight
    // and equal length; keep one.
    points.sort_unstable();
    points.dedup();
    // Equal positions at different lengths: the smaller length dominates.
    points.dedup_by(|b, a| {
        if a.a == b.a {
            debug_assert!(a.b <= b.b);
            true
        } else {
            false
        }
    });
    let game = extract(&rho_inf, false, &points, Extremal::Minimal)?;
    let field = if shape.is_strongly_separable() {
        let shift = Shift::rho_ep(shape.p, shape.e())?;
        let entries: Vec<(u64, u32)> = game
            .entries()
            .iter()
            .map(|&(i, b)| (i, b + shape.j))
            .collect();
        Some(JumpSet::new(shift, true, entries)?)
    } else {
        None
    };
    Ok(ShapeJumpSets { game, field })
}

/// The walk form of the same computation: follow the monomials from the
/// leading term, moving to the smallest eligible index of strictly smaller
/// `p`-adic valuation, first among equal coefficient valuations and then
/// through increasing ones below the weight cutoff `e`. Returns the graph
/// points it visits.
pub fn procedure_walk(shape: &EisensteinShape) -> Vec<Point> {
    let p = shape.p;
    let n = shape.n as u64;
    let mut alpha = shape.n;
    let mut out = Vec::new();
    loop {
        let v_alpha = shape.val_at(alpha).unwrap();
        let t = vp(alpha as u64, p);
        let w = v_alpha * n + alpha as u64;
        out.push(Point::new(w / p.pow(t), t + 1));
        if t == 0 {
            break;
        }
        // Same coefficient valuation, larger index, smaller p-adic valuation.
        let same = (alpha..=shape.n)
            .filter(|&i| shape.val_at(i) == Some(v_alpha))
            .filter(|&i| vp(i as u64, p) < t)
            .min();
        let next = same.or_else(|| {
            // Increasing coefficient valuations below the cutoff n v < e.
            let mut vals: Vec<u64> = (1..=shape.n)
                .filter_map(|i| shape.val_at(i))
                .filter(|&v| v > v_alpha && n * v < shape.e())
                .collect();
            vals.sort_unstable();
            vals.dedup();
            for d in vals {
                let hit = (1..=shape.n)
                    .filter(|&i| shape.val_at(i) == Some(d))
                    .filter(|&i| vp(i as u64, p) < t)
                    .min();
                if hit.is_some() {
                    return hit;
                }
            }
            None
        });
        match next {
            Some(a) => alpha = a,
            None => break,
        }
    }
    out
}

/// A lower-convex polygon: lattice vertices with strictly increasing x and
/// strictly increasing slopes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<(i64, i64)>,
}

impl Polygon {
    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }
}

/// Lower convex hull of a point set, collinear points dropped.
pub fn lower_convex_hull(points: &[(i64, i64)]) -> Polygon {
    let mut pts: Vec<(i64, i64)> = points.to_vec();
    pts.sort_unstable();
    // keep the lowest point per x
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) as i128 * (p.1 - o.1) as i128
                - (a.1 - o.1) as i128 * (p.0 - o.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Polygon { vertices: hull }
}

/// The ramification polygon determined by a shot-level jump set: the lower
/// hull of `(p^{beta(i)-1}, p^{beta(i)-1} i)` over the entries together with
/// `(n, n)`.
pub fn ramification_polygon(js: &JumpSet, n: u32) -> Result<Polygon> {
    if js.is_empty() {
        return Err(Error::EmptyJumpSet);
    }
    let p = js.shift().p();
    let mut points = Vec::new();
    for &(i, b) in js.entries() {
        let scale = p
            .checked_pow(b - 1)
            .ok_or(Error::Overflow)? as i64;
        points.push((scale, scale * i as i64));
    }
    points.push((n as i64, n as i64));
    Ok(lower_convex_hull(&points))
}

// --- polynomial helpers over the cyclotomic base ring ---

type BPoly = Vec<BaseElem>;

fn bpoly_mul(b: &BaseRing, x: &BPoly, y: &BPoly) -> BPoly {
    let mut out = vec![b.zero(); x.len() + y.len() - 1];
    for (i, xc) in x.iter().enumerate() {
        if b.is_zero(xc) {
            continue;
        }
        for (j, yc) in y.iter().enumerate() {
            let prod = b.mul(xc, yc);
            out[i + j] = b.add(&out[i + j], &prod);
        }
    }
    out
}

fn bpoly_sub(b: &BaseRing, x: &BPoly, y: &BPoly) -> BPoly {
    let len = x.len().max(y.len());
    (0..len)
        .map(|k| {
            let xc = x.get(k).cloned().unwrap_or_else(|| b.zero());
            let yc = y.get(k).cloned().unwrap_or_else(|| b.zero());
            b.sub(&xc, &yc)
        })
        .collect()
}

fn bpoly_is_zero(b: &BaseRing, x: &BPoly) -> bool {
    x.iter().all(|c| b.is_zero(c))
}

/// Division with remainder by a monic divisor.
fn bpoly_divrem_monic(b: &BaseRing, num: &BPoly, den: &BPoly) -> (BPoly, BPoly) {
    let d = den.len() - 1;
    let mut rem = num.clone();
    if rem.len() <= d {
        return (vec![b.zero()], rem);
    }
    let mut quo = vec![b.zero(); rem.len() - d];
    for k in (d..rem.len()).rev() {
        let lead = std::mem::replace(&mut rem[k], b.zero());
        if b.is_zero(&lead) {
            continue;
        }
        quo[k - d] = lead.clone();
        for (i, dc) in den.iter().enumerate().take(d) {
            let sub = b.mul(&lead, dc);
            rem[k - d + i] = b.sub(&rem[k - d + i], &sub);
        }
    }
    rem.truncate(d.max(1));
    (quo, rem)
}

// --- polynomial helpers over the residue field ---

type QPoly = Vec<FqElem>;

fn qpoly_trim(fq: &crate::padic::Zq, x: &mut QPoly) {
    while x.len() > 1 && fq.is_zero(x.last().unwrap()) {
        x.pop();
    }
}

fn qpoly_divrem(fq: &crate::padic::Zq, num: &QPoly, den: &QPoly) -> (QPoly, QPoly) {
    let q_order = fq.p.pow(fq.f);
    let lead_inv = fq.pow(den.last().unwrap(), q_order - 2);
    let d = den.len() - 1;
    let mut rem = num.clone();
    if rem.len() <= d {
        return (vec![fq.zero()], rem);
    }
    let mut quo = vec![fq.zero(); rem.len() - d];
    for k in (d..rem.len()).rev() {
        let factor = fq.mul(&rem[k], &lead_inv);
        rem[k] = fq.zero();
        if fq.is_zero(&factor) {
            continue;
        }
        quo[k - d] = factor.clone();
        for (i, dc) in den.iter().enumerate().take(d) {
            let sub = fq.mul(&factor, dc);
            rem[k - d + i] = fq.sub(&rem[k - d + i], &sub);
        }
    }
    rem.truncate(d.max(1));
    qpoly_trim(fq, &mut rem);
    (quo, rem)
}

fn qpoly_mul(fq: &crate::padic::Zq, x: &QPoly, y: &QPoly) -> QPoly {
    let mut out = vec![fq.zero(); x.len() + y.len() - 1];
    for (i, xc) in x.iter().enumerate() {
        for (j, yc) in y.iter().enumerate() {
            let prod = fq.mul(xc, yc);
            out[i + j] = fq.add(&out[i + j], &prod);
        }
    }
    qpoly_trim(fq, &mut out);
    out
}

fn qpoly_sub(fq: &crate::padic::Zq, x: &QPoly, y: &QPoly) -> QPoly {
    let len = x.len().max(y.len());
    let mut out: QPoly = (0..len)
        .map(|k| {
            let xc = x.get(k).cloned().unwrap_or_else(|| fq.zero());
            let yc = y.get(k).cloned().unwrap_or_else(|| fq.zero());
            fq.sub(&xc, &yc)
        })
        .collect();
    qpoly_trim(fq, &mut out);
    out
}

/// Extended gcd over `F_q[x]` for coprime inputs: returns `(s, t)` with
/// `s a + t b = 1`.
fn qpoly_bezout(fq: &crate::padic::Zq, a: &QPoly, b: &QPoly) -> Result<(QPoly, QPoly)> {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: QPoly = vec![fq.one()];
    let mut s1: QPoly = vec![fq.zero()];
    let mut t0: QPoly = vec![fq.zero()];
    let mut t1: QPoly = vec![fq.one()];
    qpoly_trim(fq, &mut r0);
    qpoly_trim(fq, &mut r1);
    while !(r1.len() == 1 && fq.is_zero(&r1[0])) {
        let (q, r) = qpoly_divrem(fq, &r0, &r1);
        let new_s = qpoly_sub(fq, &s0, &qpoly_mul(fq, &q, &s1));
        let new_t = qpoly_sub(fq, &t0, &qpoly_mul(fq, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, new_s);
        t0 = std::mem::replace(&mut t1, new_t);
    }
    if r0.len() != 1 || fq.is_zero(&r0[0]) {
        return Err(Error::Precondition("inputs are not coprime".into()));
    }
    let q_order = fq.p.pow(fq.f);
    let inv = fq.pow(&r0[0], q_order - 2);
    let s = s0.iter().map(|c| fq.mul(c, &inv)).collect();
    let t = t0.iter().map(|c| fq.mul(c, &inv)).collect();
    Ok((s, t))
}

fn bpoly_add(b: &BaseRing, x: &BPoly, y: &BPoly) -> BPoly {
    let len = x.len().max(y.len());
    (0..len)
        .map(|k| {
            let xc = x.get(k).cloned().unwrap_or_else(|| b.zero());
            let yc = y.get(k).cloned().unwrap_or_else(|| b.zero());
            b.add(&xc, &yc)
        })
        .collect()
}

/// Hensel-split a monic polynomial `f` over the base into `g * h`, where the
/// reductions mod the maximal ideal are the coprime pair
/// `(x^{split}, f/x^{split} mod m)`.
///
/// Linear lifting: with `s g + t h = 1` mod `m`, the corrections
/// `dg = rem(t e, g)` and `dh = quo(e - h dg, g)` push the error
/// `e = f - g h` one power of `m` deeper each round (the division's
/// remainder is itself in the deeper power and is absorbed by later
/// rounds). The ideal is nilpotent at finite precision, so the error
/// vanishes exactly after at most `d * n` rounds.
fn hensel_split(b: &BaseRing, f: &BPoly, split: usize) -> Result<(BPoly, BPoly)> {
    let fq = b.zq.residue_ring();
    // residues of the coefficients; val >= 1 reduces to zero
    let reduced: QPoly = f
        .iter()
        .map(|c| {
            if b.val(c) == Some(0) {
                b.residue(c)
            } else {
                fq.zero()
            }
        })
        .collect();
    for (k, c) in reduced.iter().enumerate().take(split) {
        if !fq.is_zero(c) {
            return Err(Error::Precondition(format!(
                "coefficient {k} is a unit below the split point"
            )));
        }
    }
    if fq.is_zero(&reduced[split]) {
        return Err(Error::Precondition(
            "split coefficient is not a unit; the polygon has no vertex there".into(),
        ));
    }
    let mut h_bar: QPoly = reduced[split..].to_vec();
    qpoly_trim(&fq, &mut h_bar);
    let mut g_bar: QPoly = vec![fq.zero(); split + 1];
    g_bar[split] = fq.one();
    let (_, t) = qpoly_bezout(&fq, &g_bar, &h_bar)?;
    // Only t mod m enters the iteration; lift digits as they are.
    let t_lift: BPoly = t.iter().map(|c| b.from_zq(c.clone())).collect();
    // initial factors: g = x^split + (low part of f), h = high part of f
    let mut g: BPoly = f[..split].to_vec();
    g.push(b.one());
    let mut h: BPoly = f[split..].to_vec();
    let max_rounds = b.d as u64 * b.zq.n as u64 + 2;
    for _ in 0..max_rounds {
        let e = bpoly_sub(b, f, &bpoly_mul(b, &g, &h));
        if bpoly_is_zero(b, &e) {
            return Ok((g, h));
        }
        let te = bpoly_mul(b, &t_lift, &e);
        let (_, dg) = bpoly_divrem_monic(b, &te, &g);
        let num = bpoly_sub(b, &e, &bpoly_mul(b, &h, &dg));
        let (dh, _rem) = bpoly_divrem_monic(b, &num, &g);
        g = bpoly_add(b, &g, &dg);
        h = bpoly_add(b, &h, &dh);
        g.truncate(split + 1);
        h.truncate(f.len() - split);
    }
    Err(Error::FactorResidual {
        required: b.zq.n + 4,
    })
}

/// Realize an admissible jump set with `e*` outside `I` as an actual
/// Eisenstein polynomial over `Q_q(zeta_p)`: expand
/// `G(x) = prod (1 + x^i)^{p^{beta(i)-1}} - zeta_p` and extract its degree
/// `e/(p-1)` Eisenstein factor by Hensel lifting along the Newton polygon.
pub fn realize(js: &JumpSet, f: u32, precision: u32) -> Result<(Tower, EisensteinShape)> {
    if !js.is_admissible()? {
        return Err(Error::NotAdmissible(format!("{js}")));
    }
    let shift = js.shift();
    let p = shift.p();
    let e = shift
        .e()
        .ok_or_else(|| Error::Precondition("realization needs a rho_ep jump set".into()))?;
    let e_star = shift.e_star().unwrap();
    if js.beta(e_star).is_some() {
        return Err(Error::EStarInI { e_star });
    }
    if e % (p - 1) != 0 {
        return Err(Error::Precondition("(p-1) must divide e".into()));
    }
    let e0 = (e / (p - 1)) as usize;
    let base = BaseRing::new(p, f, 0, precision)?;
    // G(x) = prod (1+x^i)^{p^{beta(i)-1}} - zeta
    let mut g_big: BPoly = vec![base.one()];
    for &(i, b) in js.entries() {
        let exp = p.checked_pow(b - 1).ok_or(Error::Overflow)?;
        let mut factor: BPoly = vec![base.zero(); i as usize + 1];
        factor[0] = base.one();
        factor[i as usize] = base.one();
        let mut acc: BPoly = vec![base.one()];
        let mut sq = factor;
        let mut exp = exp;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = bpoly_mul(&base, &acc, &sq);
            }
            sq = bpoly_mul(&base, &sq, &sq);
            exp >>= 1;
        }
        g_big = bpoly_mul(&base, &g_big, &acc);
    }
    g_big[0] = base.sub(&g_big[0], &base.zeta());
    if g_big.len() - 1 == e0 {
        // already Eisenstein of the right degree
        let tower = Tower::new(p, f, 0, g_big[..e0].to_vec(), precision)?;
        let shape = shape_of_tower(&tower)?;
        return Ok((tower, shape));
    }
    let (g, _h) = hensel_split(&base, &g_big, e0)?;
    let tower = Tower::new(p, f, 0, g[..e0].to_vec(), precision)?;
    let shape = shape_of_tower(&tower)?;
    Ok((tower, shape))
}

/// The valuation profile of the tower's defining polynomial.
pub fn shape_of_tower(tower: &Tower) -> Result<EisensteinShape> {
    let coeff_vals = tower
        .g_lower
        .iter()
        .map(|c| tower.base.val(c))
        .collect();
    EisensteinShape::new(
        tower.p(),
        tower.base.zq.f,
        tower.base.j,
        tower.e0,
        coeff_vals,
    )
}

/// Jump set of a degree-`d` tame extension: entries `(d i, beta(i))` over
/// `rho_{de,p}`.
pub fn tame_transform(js: &JumpSet, d: u64) -> Result<JumpSet> {
    let shift = js.shift();
    let p = shift.p();
    if d == 0 || d % p == 0 {
        return Err(Error::NotCoprime { d, p });
    }
    let e = shift
        .e()
        .ok_or_else(|| Error::Precondition("tame transform needs a rho_ep jump set".into()))?;
    let new_shift = Shift::rho_ep(p, d * e)?;
    let entries = js.entries().iter().map(|&(i, b)| (d * i, b)).collect();
    JumpSet::new(new_shift, true, entries)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Necessary conditions on the jump set of a degree-`d` totally ramified
/// extension: each sufficiently isolated entry of the ground jump set must
/// reappear scaled by `d/p^{v_p(d)}` with beta raised by `v_p(d)`; an
/// `e*`-entry reappears at `d e*` with equal beta; and for tame `d` the
/// transform is exact.
pub fn extension_constraints(
    js1: &JumpSet,
    d: u64,
    js2: &JumpSet,
) -> Result<Vec<ConstraintCheck>> {
    let shift1 = js1.shift();
    let p = shift1.p();
    let e1 = shift1
        .e()
        .ok_or_else(|| Error::Precondition("constraints need rho_ep jump sets".into()))?;
    let shift2 = js2.shift();
    if shift2.e() != Some(d * e1) || shift2.p() != p {
        return Err(Error::ShiftMismatch);
    }
    if !js1.is_admissible()? || !js2.is_admissible()? {
        return Err(Error::NotAdmissible(
            "extension constraints compare admissible jump sets".into(),
        ));
    }
    let v = vp(d, p);
    let d_tame = d / p.pow(v);
    let e_star1 = shift1.e_star().unwrap();
    let mut checks = Vec::new();
    for &(i, b) in js1.entries() {
        if i == e_star1 {
            let target = d * e_star1;
            let pass = js2.beta(target) == Some(b);
            checks.push(ConstraintCheck {
                name: format!("e*-entry persists at {target}"),
                pass,
                detail: format!(
                    "require beta2({target}) = {b}, found {:?}",
                    js2.beta(target)
                ),
            });
            continue;
        }
        let gap_ok = match js1.entries().iter().rev().find(|&&(j, _)| j < i) {
            None => true,
            Some(&(_, b_prev)) => b_prev - b > v,
        };
        if gap_ok {
            let target = d_tame * i;
            let want = b + v;
            let pass = js2.beta(target) == Some(want);
            checks.push(ConstraintCheck {
                name: format!("entry {i} persists at {target}"),
                pass,
                detail: format!(
                    "require beta2({target}) = {want}, found {:?}",
                    js2.beta(target)
                ),
            });
        }
    }
    if v == 0 {
        let transformed = tame_transform(js1, d)?;
        let pass = transformed == *js2;
        checks.push(ConstraintCheck {
            name: "tame case is the exact transform".into(),
            pass,
            detail: format!("expected {transformed}, found {js2}"),
        });
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{default_precision, field_jump_set};

    fn shape(p: u64, f: u32, j: u32, n: u32, vals: &[(usize, u64)]) -> EisensteinShape {
        let mut coeff_vals = vec![None; n as usize];
        coeff_vals[0] = Some(1);
        for &(i, v) in vals {
            coeff_vals[i] = Some(v);
        }
        EisensteinShape::new(p, f, j, n, coeff_vals).unwrap()
    }

    #[test]
    fn cubic_shape_example() {
        // x^3 + y x + y over Q_3(zeta_3)
        let s = shape(3, 1, 0, 3, &[(1, 1)]);
        assert!(s.is_strongly_separable());
        let sets = jump_set_of_shape(&s).unwrap();
        assert_eq!(sets.game.entries(), &[(1, 2), (4, 1)]);
        let field = sets.field.unwrap();
        assert_eq!(field.entries(), &[(1, 2), (4, 1)]);
        assert!(field.is_admissible().unwrap());
    }

    #[test]
    fn quadratic_counterexample_shape() {
        // x^2 + 2x + 2 over Q_2 is not strongly separable; the shape data
        // wrongly suggests ({1,3},(2,1)) while the field is Q_2(zeta_4).
        let s = shape(2, 1, 0, 2, &[(1, 1)]);
        assert!(!s.is_strongly_separable());
        let sets = jump_set_of_shape(&s).unwrap();
        assert!(sets.field.is_none());
        assert_eq!(sets.game.entries(), &[(1, 2), (3, 1)]);
    }

    #[test]
    fn leading_only_shape() {
        // p does not divide n: the leading term is a shot of length 0.
        let s = shape(3, 1, 0, 2, &[]);
        assert!(s.is_strongly_separable());
        let sets = jump_set_of_shape(&s).unwrap();
        assert_eq!(sets.game.entries(), &[(2, 1)]);
    }

    #[test]
    fn strongly_eisenstein_shapes() {
        // v(a_1) = 1 with p | n: the most likely jump set.
        for (p, n) in [(3u64, 3u32), (3, 6), (5, 5)] {
            let s = shape(p, 1, 0, n, &[(1, 1)]);
            let sets = jump_set_of_shape(&s).unwrap();
            let vpn = vp(n as u64, p);
            let want = vec![
                (n as u64 / p.pow(vpn), vpn + 1),
                (n as u64 + 1, 1),
            ];
            assert_eq!(sets.game.entries(), want, "p={p} n={n}");
        }
    }

    #[test]
    fn procedure_agrees_with_extraction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(41);
        for p in [2u64, 3, 5] {
            for n in 1..=8u32 {
                for _ in 0..200 {
                    let mut vals = vec![None; n as usize];
                    vals[0] = Some(1);
                    for v in vals.iter_mut().skip(1) {
                        if rng.gen_bool(0.8) {
                            *v = Some(rng.gen_range(1..=2 * p * n as u64));
                        }
                    }
                    let s = EisensteinShape::new(p, 1, 0, n, vals).unwrap();
                    if !s.is_strongly_separable() {
                        continue;
                    }
                    let via_extract = jump_set_of_shape(&s).unwrap().game;
                    let mut walked = procedure_walk(&s);
                    walked.sort_unstable();
                    let graph: Vec<Point> = via_extract
                        .entries()
                        .iter()
                        .map(|&(i, b)| Point::new(i, b))
                        .collect();
                    assert_eq!(walked, graph, "shape {s:?}");
                }
            }
        }
    }

    #[test]
    fn hull_examples() {
        let h = lower_convex_hull(&[(3, 3), (1, 4), (3, 3)]);
        assert_eq!(h.vertices(), &[(1, 4), (3, 3)]);
        // collinear interior points are dropped
        let h = lower_convex_hull(&[(1, 1), (2, 2), (3, 3)]);
        assert_eq!(h.vertices(), &[(1, 1), (3, 3)]);
        // points above the hull are ignored
        let h = lower_convex_hull(&[(1, 4), (2, 9), (3, 3)]);
        assert_eq!(h.vertices(), &[(1, 4), (3, 3)]);
    }

    #[test]
    fn polygon_examples() {
        let shift = Shift::rho_inf(3).unwrap();
        let js = JumpSet::new(shift.clone(), false, vec![(1, 2), (4, 1)]).unwrap();
        let poly = ramification_polygon(&js, 3).unwrap();
        assert_eq!(poly.vertices(), &[(1, 4), (3, 3)]);

        let js = JumpSet::new(shift, false, vec![(5, 1)]).unwrap();
        let poly = ramification_polygon(&js, 7).unwrap();
        assert_eq!(poly.vertices(), &[(1, 5), (7, 7)]);
    }

    #[test]
    fn realize_degree_one() {
        let shift = Shift::rho_ep(3, 2).unwrap();
        let js = JumpSet::new(shift, true, vec![(1, 1)]).unwrap();
        let (tower, shape) = realize(&js, 1, 8).unwrap();
        assert_eq!(tower.e0, 1);
        assert_eq!(shape.n, 1);
        let back = field_jump_set(&tower).unwrap();
        assert_eq!(back.entries(), js.entries());
    }

    #[test]
    fn realize_quadratic_classes_over_q2() {
        let shift = Shift::rho_ep(2, 2).unwrap();
        for entries in [vec![(1u64, 2u32)], vec![(1, 2), (3, 1)], vec![(1, 2), (4, 1)]] {
            let js = JumpSet::new(shift.clone(), true, entries.clone()).unwrap();
            if js.beta(4).is_some() {
                assert!(matches!(realize(&js, 1, 16), Err(Error::EStarInI { .. })));
                continue;
            }
            let (tower, _) = realize(&js, 1, 16).unwrap();
            let back = field_jump_set(&tower).unwrap();
            assert_eq!(back.entries(), js.entries(), "{entries:?}");
        }
    }

    #[test]
    fn tame_transform_examples() {
        let shift = Shift::rho_ep(3, 2).unwrap();
        let js = JumpSet::new(shift, true, vec![(1, 1)]).unwrap();
        assert_eq!(tame_transform(&js, 1).unwrap(), js);
        let t = tame_transform(&js, 2).unwrap();
        assert_eq!(t.entries(), &[(2, 1)]);
        assert!(t.is_admissible().unwrap());
        assert!(tame_transform(&js, 3).is_err());

        let shift = Shift::rho_ep(3, 6).unwrap();
        let js = JumpSet::new(shift, true, vec![(1, 2), (4, 1)]).unwrap();
        let t = tame_transform(&js, 2).unwrap();
        assert_eq!(t.entries(), &[(2, 2), (8, 1)]);
        assert!(t.is_admissible().unwrap());
    }

    #[test]
    fn tame_transform_polygon_matches_oracle() {
        // Two routes to the ramification polygon of g(x^d): the transformed
        // jump set, and the Newton computation inside the substituted tower.
        use crate::padic::{ramification_newton, substitute_power, BaseRing};
        let base = BaseRing::new(3, 1, 0, 8).unwrap();
        let tower =
            crate::padic::Tower::new(3, 1, 0, vec![base.y(), base.y(), base.zero()], 8).unwrap();
        let js = field_jump_set(&tower).unwrap();
        for d in [2u64, 5] {
            let twisted = substitute_power(&tower, d as u32).unwrap();
            let transformed = tame_transform(&js, d).unwrap();
            let from_js = ramification_polygon(&transformed, 3 * d as u32).unwrap();
            let from_field = ramification_newton(&twisted).unwrap();
            assert_eq!(from_js, from_field, "d={d}");
        }
    }

    #[test]
    fn constraints_examples() {
        let shift = Shift::rho_ep(3, 6).unwrap();
        let js1 = JumpSet::new(shift, true, vec![(1, 2), (4, 1)]).unwrap();
        // Tame: the transform passes, anything else fails.
        let good = tame_transform(&js1, 2).unwrap();
        let checks = extension_constraints(&js1, 2, &good).unwrap();
        assert!(checks.iter().all(|c| c.pass));

        let shift12 = Shift::rho_ep(3, 12).unwrap();
        let bad = JumpSet::new(shift12, true, vec![(2, 2), (7, 1)]).unwrap();
        assert!(bad.is_admissible().unwrap());
        let checks = extension_constraints(&js1, 2, &bad).unwrap();
        assert!(checks.iter().any(|c| !c.pass));
    }

    #[test]
    fn realize_round_trip_small_grid() {
        for (p, e) in [(2u64, 2u64), (2, 3), (3, 2)] {
            let shift = Shift::rho_ep(p, e).unwrap();
            let e_star = shift.e_star().unwrap();
            for js in crate::jumpset::enumerate_admissible(&shift).unwrap() {
                if js.beta(e_star).is_some() {
                    continue;
                }
                let prec = default_precision(p, (e / (p - 1)) as u32, 0) + 8;
                let (tower, _) = realize(&js, 1, prec).unwrap();
                let back = field_jump_set(&tower).unwrap();
                assert_eq!(back, js, "p={p} e={e}");
            }
        }
    }
}
