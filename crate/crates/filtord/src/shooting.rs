//! The shooting game: a Markov process on positions whose strict records of
//! shot lengths produce a jump set.
//!
//! Three computations share one transition law. `simulate` runs the walker
//! form of the process (one coin per position, a starred coin at iterates of
//! `e*`). `exact_distribution` is an absorbing-chain dynamic program with
//! exact rationals, truncated at the inert bound beyond which no record can
//! ever happen again. `haar_distribution` computes the same measure a second
//! way, from independent coordinate valuations of a random module vector.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::jumpset::{enumerate_admissible, JumpSet};
use crate::shift::Shift;

pub type Rat = BigRational;

fn rat_int(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `1 / base^exp`.
fn inv_pow(base: u64, exp: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(base).pow(exp as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// `length = v(position)`.
    First,
    /// `position = rho^length(e*)`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameState {
    pub position: u64,
    pub length: u32,
    pub kind: StateKind,
}

impl GameState {
    pub fn first(shift: &Shift, position: u64) -> Self {
        GameState {
            position,
            length: shift.v_rho(position),
            kind: StateKind::First,
        }
    }

    pub fn second(shift: &Shift, position: u64) -> Result<Self> {
        let depth = shift
            .starred_depth(position)
            .ok_or_else(|| Error::Precondition(format!("{position} is not an iterate of e*")))?;
        Ok(GameState {
            position,
            length: depth,
            kind: StateKind::Second,
        })
    }
}

/// `#{m >= 0 : lo < rho^m(e*) <= hi}`.
fn starred_between(shift: &Shift, lo: u64, hi: u64) -> u64 {
    let Some(e_star) = shift.e_star() else {
        return 0;
    };
    let mut x = e_star;
    let mut count = 0;
    while x <= hi {
        if x > lo {
            count += 1;
        }
        x = shift.apply(x);
    }
    count
}

/// Exact one-step law from `state`: explicit transitions up to
/// `max_position`, plus the closed-form mass of everything beyond.
pub fn step_distribution(
    shift: &Shift,
    q: u64,
    p: u64,
    state: &GameState,
    extended: bool,
    max_position: u64,
) -> Result<(Vec<(GameState, Rat)>, Rat)> {
    if extended && shift.e_star().is_none() {
        return Err(Error::InfiniteTset);
    }
    let x = state.position;
    let mut out = Vec::new();
    let mut total = Rat::zero();
    for y in x + 1..=max_position {
        let vstar = if extended {
            starred_between(shift, x, y)
        } else {
            0
        };
        let p1 = rat_int(q - 1) * inv_pow(q, y - x) * inv_pow(p, vstar);
        total += &p1;
        out.push((GameState::first(shift, y), p1));
        if extended {
            if let Some(depth) = shift.starred_depth(y) {
                let p2 = rat_int(p - 1) * inv_pow(q, y - x - 1) * inv_pow(p, vstar);
                total += &p2;
                out.push((
                    GameState {
                        position: y,
                        length: depth,
                        kind: StateKind::Second,
                    },
                    p2,
                ));
            }
        }
    }
    Ok((out, Rat::one() - total))
}

/// A realized trajectory together with its jump set.
#[derive(Debug, Clone)]
pub struct GamePath {
    pub states: Vec<GameState>,
    pub jump_set: JumpSet,
}

/// Sample one game with the walker form of the transition law: from each
/// position move to the next, at starred positions toss the `p`-coin first
/// (stop there as a second-kind state on success), then the `q`-coin (stop as
/// a first-kind state on success). Stops when no further record can occur.
pub fn simulate(
    shift: &Shift,
    q: u64,
    p: u64,
    r: u64,
    extended: bool,
    rng: &mut impl Rng,
    max_steps: usize,
) -> Result<GamePath> {
    if extended {
        let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
        if r >= e_star {
            return Err(Error::StartTooLarge { r, e_star });
        }
    }
    let mut states = vec![GameState::first(shift, r)];
    let mut entries: Vec<(u64, u32)> = Vec::new();
    let mut record: Option<u32> = None;
    let mut steps = 0;
    loop {
        let state = *states.last().unwrap();
        let is_record = record.is_none_or(|m| state.length < m);
        if is_record {
            record = Some(state.length);
            match state.kind {
                StateKind::First => {
                    let origin = shift
                        .inverse_iterate(state.position, state.length)
                        .expect("first-kind state has a shooting position");
                    entries.push((origin, state.length + 1));
                }
                StateKind::Second => {
                    entries.push((shift.e_star().unwrap(), state.length + 1));
                }
            }
        }
        // Accrual is complete after a length-0 shot or any starred arrival.
        if (state.kind == StateKind::First && state.length == 0)
            || state.kind == StateKind::Second
        {
            break;
        }
        let bound = match shift.inert_bound(record.unwrap()) {
            Ok(b) => Some(b),
            Err(_) => None,
        };
        steps += 1;
        if steps > max_steps {
            break;
        }
        // Walk forward one position at a time.
        let mut z = state.position;
        let next = loop {
            z += 1;
            if let Some(b) = bound {
                if z > b {
                    break None;
                }
            }
            if extended {
                if let Some(depth) = shift.starred_depth(z) {
                    if rng.gen_range(0..p) != 0 {
                        break Some(GameState {
                            position: z,
                            length: depth,
                            kind: StateKind::Second,
                        });
                    }
                }
            }
            if rng.gen_range(0..q) != 0 {
                break Some(GameState::first(shift, z));
            }
        };
        match next {
            Some(s) => states.push(s),
            None => break,
        }
    }
    let jump_set = JumpSet::new(shift.clone(), extended, entries)?;
    Ok(GamePath { states, jump_set })
}

/// An exact probability measure on jump sets.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub shift: Shift,
    pub q: u64,
    pub map: BTreeMap<JumpSet, Rat>,
}

impl Distribution {
    pub fn total(&self) -> Rat {
        self.map.values().sum()
    }

    pub fn mass(&self, js: &JumpSet) -> Rat {
        self.map.get(js).cloned().unwrap_or_else(Rat::zero)
    }
}

type Suffixes = BTreeMap<Vec<(u64, u32)>, Rat>;

struct Dp<'a> {
    shift: &'a Shift,
    q: u64,
    p: u64,
    extended: bool,
    memo: HashMap<(u64, u32), Suffixes>,
}

impl Dp<'_> {
    /// Distribution of future jump-set entries, given the current position
    /// and record `m >= 1`.
    fn solve(&mut self, pos: u64, m: u32) -> Suffixes {
        if let Some(hit) = self.memo.get(&(pos, m)) {
            return hit.clone();
        }
        let bound = self.shift.inert_bound(m).expect("rho_ep only");
        let mut out: Suffixes = BTreeMap::new();
        let mut total = Rat::zero();
        for y in pos + 1..=bound {
            let vstar = if self.extended {
                starred_between(self.shift, pos, y)
            } else {
                0
            };
            let p1 = rat_int(self.q - 1) * inv_pow(self.q, y - pos) * inv_pow(self.p, vstar);
            total += &p1;
            let s = self.shift.v_rho(y);
            if s == 0 {
                *out.entry(vec![(y, 1)]).or_insert_with(Rat::zero) += p1;
            } else if s < m {
                let origin = self.shift.inverse_iterate(y, s).unwrap();
                let rest = self.solve(y, s);
                for (tail, pr) in rest {
                    let mut key = vec![(origin, s + 1)];
                    key.extend(tail);
                    *out.entry(key).or_insert_with(Rat::zero) += &p1 * pr;
                }
            } else {
                let rest = self.solve(y, m);
                for (tail, pr) in rest {
                    *out.entry(tail).or_insert_with(Rat::zero) += &p1 * pr;
                }
            }
            if self.extended {
                if let Some(depth) = self.shift.starred_depth(y) {
                    let p2 =
                        rat_int(self.p - 1) * inv_pow(self.q, y - pos - 1) * inv_pow(self.p, vstar);
                    total += &p2;
                    let key = if depth < m {
                        vec![(self.shift.e_star().unwrap(), depth + 1)]
                    } else {
                        Vec::new()
                    };
                    *out.entry(key).or_insert_with(Rat::zero) += p2;
                }
            }
        }
        // Everything beyond the inert bound ends accrual with no new entry.
        *out.entry(Vec::new()).or_insert_with(Rat::zero) += Rat::one() - total;
        self.memo.insert((pos, m), out.clone());
        out
    }
}

/// Exact law of the jump set of a game started at `r`, over `rho_ep` shifts.
pub fn exact_distribution(
    shift: &Shift,
    q: u64,
    p: u64,
    r: u64,
    extended: bool,
) -> Result<Distribution> {
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    if !shift.is_rho_ep() {
        return Err(Error::Precondition(
            "exact distributions are computed for rho_ep shifts".into(),
        ));
    }
    if extended && r >= e_star {
        return Err(Error::StartTooLarge { r, e_star });
    }
    let n0 = shift.v_rho(r);
    let head = (shift.inverse_iterate(r, n0).unwrap(), n0 + 1);
    let suffixes = if n0 == 0 {
        BTreeMap::from([(Vec::new(), Rat::one())])
    } else {
        let mut dp = Dp {
            shift,
            q,
            p,
            extended,
            memo: HashMap::new(),
        };
        dp.solve(r, n0)
    };
    let mut map = BTreeMap::new();
    for (tail, pr) in suffixes {
        let mut entries = vec![head];
        entries.extend(tail);
        let js = JumpSet::new(shift.clone(), extended, entries)?;
        *map.entry(js).or_insert_with(Rat::zero) += pr;
    }
    Ok(Distribution {
        shift: shift.clone(),
        q,
        map,
    })
}

/// The Haar-side law: the distribution of the orbit invariant of a random
/// vector whose coordinate valuations are independent with
/// `P(val >= k) = q^{-(k-1)}` on `T`-indices and `p^{-(k-1)}` at `e*`,
/// conditioned on landing in an admissible orbit.
///
/// For a fixed admissible jump set the probability factors: each entry pins
/// its coordinate valuation exactly, and every other index only needs its
/// valuation to reach the threshold where some entry dominates it — a
/// geometric tail in closed form.
pub fn haar_distribution(shift: &Shift, p: u64, f: u32) -> Result<Distribution> {
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let q = p.pow(f);
    let t_star = shift.tset_star()?;
    let base = |i: u64| if i == e_star { p } else { q };
    let mut map = BTreeMap::new();
    let mut total = Rat::zero();
    for js in enumerate_admissible(shift)? {
        let mut prob = Rat::one();
        for &(i, b) in js.entries() {
            // P(val = b) = (base-1)/base^b
            prob *= rat_int(base(i) - 1) * inv_pow(base(i), b as u64);
        }
        for &j in &t_star {
            if js.beta(j).is_some() {
                continue;
            }
            // Smallest v with some entry (i,b) satisfying v >= b and
            // rho^v(j) >= rho^b(i); P(val >= v) = base^{-(v-1)}.
            let threshold = js
                .entries()
                .iter()
                .map(|&(i, b)| {
                    let target = shift.iterate(i, b);
                    let mut v = b;
                    while shift.iterate(j, v) < target {
                        v += 1;
                    }
                    v
                })
                .min()
                .expect("admissible jump sets are non-empty");
            prob *= inv_pow(base(j), threshold as u64 - 1);
        }
        total += &prob;
        map.insert(js, prob);
    }
    for v in map.values_mut() {
        *v /= &total;
    }
    Ok(Distribution {
        shift: shift.clone(),
        q,
        map,
    })
}

/// One checked distributional identity.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub ok: bool,
}

/// Exact verification of the two decomposition identities of the extended
/// game started at `e'`:
/// `(p-1) mu*(min beta >= j+1) = mu*(e* in I, beta(e*) = j)` for each `j`,
/// and the reindexing of `{min beta >= j}` games onto the full game started
/// at the `(j-1)`-fold preimage of `e'` with beta shifted by `j-1`.
pub fn identity_checks(shift: &Shift, q: u64, p: u64) -> Result<Vec<IdentityCheck>> {
    let e_star = shift.e_star().ok_or(Error::InfiniteTset)?;
    let e_prime = shift.e_prime().unwrap();
    let m = shift.v_rho(e_star);
    if m < 2 {
        return Err(Error::Precondition(format!(
            "identities need v(e*) >= 2, got {m}"
        )));
    }
    let full = exact_distribution(shift, q, p, e_prime, true)?;
    let mut checks = Vec::new();

    for j in 1..=m {
        let lhs: Rat = full
            .map
            .iter()
            .filter(|(js, _)| js.min_beta().is_some_and(|b| b >= j + 1))
            .map(|(_, pr)| pr.clone())
            .sum::<Rat>()
            * rat_int(p - 1);
        let rhs: Rat = full
            .map
            .iter()
            .filter(|(js, _)| js.min_beta() == Some(j) && js.beta(e_star).is_some())
            .map(|(_, pr)| pr.clone())
            .sum();
        checks.push(IdentityCheck {
            name: format!("(p-1) mu*(min beta >= {}) = mu*(beta(e*) = {j})", j + 1),
            ok: lhs == rhs,
            lhs,
            rhs,
        });
    }

    for j in 1..=m {
        let Some(r_j) = shift.inverse_iterate(e_prime, j - 1) else {
            break;
        };
        let small = exact_distribution(shift, q, p, r_j, true)?;
        let mass_j: Rat = full
            .map
            .iter()
            .filter(|(js, _)| js.min_beta().is_some_and(|b| b >= j))
            .map(|(_, pr)| pr.clone())
            .sum();
        let mut ok = !mass_j.is_zero();
        let mut matched = 0usize;
        if ok {
            for (js, pr) in &small.map {
                let shifted = js.shift_beta(j as i64 - 1)?;
                if full.mass(&shifted) != pr * &mass_j {
                    ok = false;
                    break;
                }
                matched += 1;
            }
            let conditioned = full
                .map
                .keys()
                .filter(|js| js.min_beta().is_some_and(|b| b >= j))
                .count();
            if matched != conditioned {
                ok = false;
            }
        }
        checks.push(IdentityCheck {
            name: format!("conditioned {{min beta >= {j}}} = game at rho^-{}(e')", j - 1),
            lhs: mass_j.clone(),
            rhs: mass_j,
            ok,
        });
    }
    Ok(checks)
}
