//! Command-line front end: jump-set combinatorics, character families,
//! shooting games, Eisenstein shapes, and the p-adic field oracle.

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use filtord::characters::{self, ModuleSpec};
use filtord::eisenstein::{self, EisensteinShape};
use filtord::error::Error;
use filtord::filtered::ValuationVector;
use filtord::jumpset::{self, Extremal, JumpSet};
use filtord::padic::{self, BaseElem, BaseRing, Tower};
use filtord::seed::derive;
use filtord::shift::{Point, Shift};
use filtord::shooting;
use filtord::verify;

#[derive(Parser)]
#[command(name = "filtord", version, about = "jump sets of local fields: combinatorics, mass formulas, and a p-adic oracle")]
struct Cli {
    /// Worker threads for sampling commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jump-set combinatorics.
    #[command(subcommand)]
    Jumpset(JumpsetCmd),
    /// Jump sets of characters of (quasi-)free filtered modules.
    #[command(subcommand)]
    Characters(CharactersCmd),
    /// The shooting game: simulation, exact law, Haar law, identities.
    Shoot(ShootArgs),
    /// Eisenstein shapes, polygons, realization, extension transforms.
    #[command(subcommand)]
    Eis(EisCmd),
    /// The p-adic field oracle.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Run the acceptance suite.
    Verify {
        /// `all` or a criterion id 1..=13.
        #[arg(default_value = "all")]
        which: String,
    },
}

#[derive(Args)]
struct ShiftArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    e: u64,
}

impl ShiftArgs {
    fn shift(&self) -> Result<Shift, Error> {
        Shift::rho_ep(self.p, self.e)
    }
}

#[derive(Subcommand)]
enum JumpsetCmd {
    /// List jump sets for rho_{e,p}.
    Enumerate {
        #[command(flatten)]
        shift: ShiftArgs,
        /// Extended jump sets (allow e*).
        #[arg(long)]
        extended: bool,
        /// Bound on the largest beta value.
        #[arg(long, default_value_t = 4)]
        bound: u32,
        /// Only the admissible extended jump sets (ignores --bound).
        #[arg(long)]
        admissible: bool,
    },
    /// Extract the minimal or maximal jump set of a graph.
    Extract {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long)]
        extended: bool,
        /// Graph as `i:b,i:b,...`.
        #[arg(long)]
        points: String,
        #[arg(long, default_value = "minimal")]
        which: String,
    },
    /// Orbit invariant of a valuation vector.
    FiltOrd {
        /// Vector JSON, e.g. `{"f":1,"coords":{"1":2,"4":1}}`.
        #[arg(long)]
        vector: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        e: Option<u64>,
    },
    /// Canonical vector of a jump set.
    Vector {
        /// Jump set JSON.
        #[arg(long)]
        js: String,
        #[arg(long, default_value_t = 1)]
        f: u32,
    },
}

#[derive(Subcommand)]
enum CharactersCmd {
    /// The family of character jump sets of a module.
    Family {
        /// Module jump set JSON; omit for the free module.
        #[arg(long)]
        module_js: Option<String>,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Compatibility of a candidate with a module, with the witness data.
    Check {
        #[arg(long)]
        candidate: String,
        #[arg(long)]
        module_js: String,
        #[arg(long, default_value_t = 1)]
        f: u32,
    },
    /// Brute-force finite-quotient character oracle (f = 1).
    Oracle {
        #[arg(long)]
        module_js: String,
        /// Quotient exponent N (work modulo p^N).
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
}

#[derive(Args)]
struct ShootArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    f: u32,
    #[arg(long)]
    e: u64,
    /// Start position; defaults to e'.
    #[arg(long)]
    start: Option<u64>,
    /// simulate | exact | haar | identities
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Number of simulated games.
    #[arg(long, default_value_t = 10)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Plain (non-extended) game.
    #[arg(long)]
    plain: bool,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum EisCmd {
    /// Jump set of a coefficient-valuation shape.
    Jumpset {
        /// Shape JSON: `{"p":3,"f":1,"j":0,"n":3,"coeff_vals":{"0":1,"1":1}}`.
        #[arg(long)]
        shape: String,
    },
    /// Ramification polygon of a (shot-level) jump set.
    Polygon {
        #[arg(long)]
        js: String,
        /// Degree of the extension.
        #[arg(long)]
        n: u32,
    },
    /// Realize an admissible jump set (e* outside I) as a polynomial.
    Realize {
        #[arg(long)]
        js: String,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Jump set of a degree-d tame extension.
    Tame {
        #[arg(long)]
        js: String,
        #[arg(long)]
        d: u64,
    },
    /// Necessary conditions on a jump set under a degree-d extension.
    Constraints {
        #[arg(long)]
        js1: String,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        js2: String,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Jump set of the field cut out by an Eisenstein polynomial.
    Jumpset {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Lower coefficients a_0..a_{n-1} as JSON. Each coefficient is an
        /// integer, or nested arrays [y-power][s-power] of little-endian
        /// base-p digit lists.
        #[arg(long)]
        g: String,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Empirical jump-set distribution of Haar-random Eisenstein polynomials.
    Sample {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long)]
        e0: u32,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_js(text: &str) -> Result<JumpSet, Error> {
    serde_json::from_str(text).map_err(|e| Error::Precondition(format!("bad jump set JSON: {e}")))
}

fn parse_points(text: &str) -> Result<Vec<Point>, Error> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| Error::Precondition(format!("bad point `{pair}`, want i:b")))?;
            Ok(Point::new(
                a.trim()
                    .parse()
                    .map_err(|_| Error::Precondition(format!("bad index `{a}`")))?,
                b.trim()
                    .parse()
                    .map_err(|_| Error::Precondition(format!("bad level `{b}`")))?,
            ))
        })
        .collect()
}

/// Parse one polynomial coefficient into the base ring. Accepted forms:
/// a (possibly negative) integer, or `[yterm, ...]` with each `yterm`
/// either an integer or `[sterm, ...]`, each `sterm` either an integer or a
/// little-endian digit list `[d0, d1, ...]` meaning `sum d_k p^k`.
fn parse_coefficient(base: &BaseRing, v: &serde_json::Value) -> Result<BaseElem, Error> {
    let modulus = base.zq.modulus;
    let to_residue = |n: i64| -> u64 {
        let m = modulus as i64;
        (((n % m) + m) % m) as u64
    };
    let parse_sterm = |v: &serde_json::Value| -> Result<u64, Error> {
        match v {
            serde_json::Value::Number(n) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| Error::Precondition("bad digit value".into()))?;
                Ok(to_residue(n))
            }
            serde_json::Value::Array(digits) => {
                let mut acc: u64 = 0;
                let mut scale: u64 = 1;
                for d in digits {
                    let d = d
                        .as_u64()
                        .ok_or_else(|| Error::Precondition("digits must be nonnegative".into()))?;
                    acc = (acc + (d % modulus) * scale) % modulus;
                    scale = scale * base.zq.p % modulus;
                }
                Ok(acc)
            }
            _ => Err(Error::Precondition("bad coefficient term".into())),
        }
    };
    match v {
        serde_json::Value::Number(n) => {
            let n = n
                .as_i64()
                .ok_or_else(|| Error::Precondition("bad coefficient".into()))?;
            Ok(base.from_zq(base.zq.from_u64(to_residue(n))))
        }
        serde_json::Value::Array(yterms) => {
            if yterms.len() > base.d as usize {
                return Err(Error::Precondition(format!(
                    "coefficient has {} y-terms; the base has degree {}",
                    yterms.len(),
                    base.d
                )));
            }
            let mut out = base.zero();
            for (b, yv) in yterms.iter().enumerate() {
                let zq_elem = match yv {
                    serde_json::Value::Array(sterms) => {
                        if sterms.len() > base.zq.f as usize {
                            return Err(Error::Precondition("too many s-terms".into()));
                        }
                        let mut e = base.zq.zero();
                        for (a, sv) in sterms.iter().enumerate() {
                            e[a] = parse_sterm(sv)?;
                        }
                        e
                    }
                    other => base.zq.from_u64(parse_sterm(other)?),
                };
                out[b] = zq_elem;
            }
            Ok(out)
        }
        _ => Err(Error::Precondition("bad coefficient".into())),
    }
}

fn parse_shape(text: &str) -> Result<EisensteinShape, Error> {
    #[derive(serde::Deserialize)]
    struct RawShape {
        p: u64,
        #[serde(default = "one_u32")]
        f: u32,
        #[serde(default)]
        j: u32,
        n: u32,
        coeff_vals: std::collections::BTreeMap<String, u64>,
    }
    fn one_u32() -> u32 {
        1
    }
    let raw: RawShape = serde_json::from_str(text)
        .map_err(|e| Error::Precondition(format!("bad shape JSON: {e}")))?;
    let mut vals = vec![None; raw.n as usize];
    for (k, v) in raw.coeff_vals {
        let i: usize = k
            .parse()
            .map_err(|_| Error::Precondition(format!("bad coefficient index {k}")))?;
        if i >= raw.n as usize {
            return Err(Error::Precondition(format!("coefficient index {i} >= n")));
        }
        vals[i] = Some(v);
    }
    EisensteinShape::new(raw.p, raw.f, raw.j, raw.n, vals)
}

fn js_to_json(js: &JumpSet) -> serde_json::Value {
    serde_json::to_value(js).unwrap()
}

fn rat_str(r: &shooting::Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn run(cli: Cli) -> Result<i32, Error> {
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match cli.command {
        Command::Jumpset(cmd) => run_jumpset(cmd)?,
        Command::Characters(cmd) => run_characters(cmd)?,
        Command::Shoot(args) => run_shoot(args)?,
        Command::Eis(cmd) => run_eis(cmd)?,
        Command::Field(cmd) => run_field(cmd)?,
        Command::Verify { which } => {
            let only = if which == "all" {
                None
            } else {
                Some(which.parse::<u32>().map_err(|_| {
                    Error::Precondition(format!("criterion id must be 1..=13, got `{which}`"))
                })?)
            };
            let results = verify::run(only, false);
            if results.is_empty() {
                return Err(Error::Precondition(format!("no criterion `{which}`")));
            }
            if results.iter().any(|r| !r.passed) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn run_jumpset(cmd: JumpsetCmd) -> Result<(), Error> {
    match cmd {
        JumpsetCmd::Enumerate {
            shift,
            extended,
            bound,
            admissible,
        } => {
            let shift = shift.shift()?;
            let sets = if admissible {
                jumpset::enumerate_admissible(&shift)?
            } else {
                jumpset::enumerate(&shift, extended, bound)?
            };
            for js in &sets {
                println!("{}", js_to_json(js));
            }
            eprintln!("{} jump sets", sets.len());
        }
        JumpsetCmd::Extract {
            shift,
            extended,
            points,
            which,
        } => {
            let shift = shift.shift()?;
            let pts = parse_points(&points)?;
            let which = match which.as_str() {
                "minimal" => Extremal::Minimal,
                "maximal" => Extremal::Maximal,
                other => {
                    return Err(Error::Precondition(format!(
                        "--which must be minimal or maximal, got {other}"
                    )))
                }
            };
            let js = jumpset::extract(&shift, extended, &pts, which)?;
            println!("{}", js_to_json(&js));
        }
        JumpsetCmd::FiltOrd { vector, p, e } => {
            let value: serde_json::Value = serde_json::from_str(&vector)
                .map_err(|err| Error::Precondition(format!("bad vector JSON: {err}")))?;
            let fallback = match (p, e) {
                (Some(p), Some(e)) => Some(Shift::rho_ep(p, e)?),
                _ => None,
            };
            let v = ValuationVector::from_json(&value, fallback)?;
            println!("{}", js_to_json(&v.filt_ord()?));
        }
        JumpsetCmd::Vector { js, f } => {
            let js = parse_js(&js)?;
            let v = ValuationVector::canonical(&js, f)?;
            println!("{}", v.to_json());
        }
    }
    Ok(())
}

fn run_characters(cmd: CharactersCmd) -> Result<(), Error> {
    match cmd {
        CharactersCmd::Family {
            module_js,
            shift,
            f,
            bound,
        } => {
            let p = shift.p;
            let shift = shift.shift()?;
            let spec = match module_js {
                None => ModuleSpec::Free,
                Some(text) => ModuleSpec::QuasiFree(parse_js(&text)?),
            };
            let family = characters::character_jumpset_family(&shift, &spec, f, p, bound)?;
            for js in &family {
                println!("{}", js_to_json(js));
            }
            eprintln!("{} jump sets in the family (beta <= {bound})", family.len());
        }
        CharactersCmd::Check {
            candidate,
            module_js,
            f,
        } => {
            let candidate = parse_js(&candidate)?;
            let module = parse_js(&module_js)?;
            let p = candidate.shift().p();
            let report = characters::is_compatible(&candidate, &module, f, p)?;
            let adequate = characters::is_adequate(&candidate, &module, f, p)?;
            println!(
                "{}",
                json!({
                    "compatible": report.compatible,
                    "adequate": adequate,
                    "max_set": report.max_set,
                    "c": report.c,
                    "incompatibility_conditions": report.conditions,
                })
            );
        }
        CharactersCmd::Oracle { module_js, n } => {
            let module = parse_js(&module_js)?;
            let sets = characters::finite_quotient_jump_sets(&module, n)?;
            for s in &sets {
                println!("{}", json!(s));
            }
            eprintln!("{} jump sets from the finite quotient at N = {n}", sets.len());
        }
    }
    Ok(())
}

fn run_shoot(args: ShootArgs) -> Result<(), Error> {
    let shift = Shift::rho_ep(args.p, args.e)?;
    let q = args.p.pow(args.f);
    let extended = !args.plain;
    let start = args
        .start
        .or_else(|| shift.e_prime())
        .ok_or_else(|| Error::Precondition("no start position".into()))?;
    match args.mode.as_str() {
        "simulate" => {
            use rand::SeedableRng;
            let mut counts: std::collections::BTreeMap<JumpSet, u64> = Default::default();
            for idx in 0..args.n {
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive(
                    args.seed, "shoot", idx,
                ));
                let path =
                    shooting::simulate(&shift, q, args.p, start, extended, &mut rng, 100_000)?;
                if args.n == 1 {
                    for s in &path.states {
                        println!(
                            "position {:>4} length {:>2} {}",
                            s.position,
                            s.length,
                            if s.kind == shooting::StateKind::Second {
                                "(starred)"
                            } else {
                                ""
                            }
                        );
                    }
                }
                *counts.entry(path.jump_set).or_default() += 1;
            }
            for (js, c) in &counts {
                if args.json {
                    println!("{}", json!({"jump_set": js_to_json(js), "count": c}));
                } else {
                    println!("{c:>8}  {js}");
                }
            }
        }
        "exact" | "haar" => {
            let dist = if args.mode == "exact" {
                shooting::exact_distribution(&shift, q, args.p, start, extended)?
            } else {
                shooting::haar_distribution(&shift, args.p, args.f)?
            };
            for (js, mass) in &dist.map {
                if args.json {
                    println!("{}", json!({"jump_set": js_to_json(js), "mass": rat_str(mass)}));
                } else {
                    println!("{:>12}  {js}", rat_str(mass));
                }
            }
        }
        "identities" => {
            let checks = shooting::identity_checks(&shift, q, args.p)?;
            let mut all_ok = true;
            for c in &checks {
                all_ok &= c.ok;
                if args.json {
                    println!(
                        "{}",
                        json!({"identity": c.name, "ok": c.ok,
                               "lhs": rat_str(&c.lhs), "rhs": rat_str(&c.rhs)})
                    );
                } else {
                    println!(
                        "[{}] {} ({} vs {})",
                        if c.ok { "ok" } else { "FAIL" },
                        c.name,
                        rat_str(&c.lhs),
                        rat_str(&c.rhs)
                    );
                }
            }
            if !all_ok {
                return Err(Error::Precondition("an identity failed".into()));
            }
        }
        other => {
            return Err(Error::Precondition(format!(
                "--mode must be simulate|exact|haar|identities, got {other}"
            )))
        }
    }
    Ok(())
}

fn run_eis(cmd: EisCmd) -> Result<(), Error> {
    match cmd {
        EisCmd::Jumpset { shape } => {
            let shape = parse_shape(&shape)?;
            let sets = eisenstein::jump_set_of_shape(&shape)?;
            println!(
                "{}",
                json!({
                    "strongly_separable": shape.is_strongly_separable(),
                    "game": js_to_json(&sets.game),
                    "field": sets.field.as_ref().map(js_to_json),
                })
            );
        }
        EisCmd::Polygon { js, n } => {
            let js = parse_js(&js)?;
            let poly = eisenstein::ramification_polygon(&js, n)?;
            println!("{}", json!({"vertices": poly.vertices()}));
        }
        EisCmd::Realize { js, f, precision } => {
            let js = parse_js(&js)?;
            let p = js.shift().p();
            let e = js.shift().e().unwrap_or(1);
            let prec = precision.unwrap_or_else(|| {
                (4 * (e + 1) as u32) / (p as u32 - 1).max(1) + 4
            });
            let (tower, shape) = eisenstein::realize(&js, f, prec)?;
            let back = padic::field_jump_set(&tower)?;
            println!(
                "{}",
                json!({
                    "shape": shape,
                    "coefficients": tower_coefficients_json(&tower),
                    "oracle_jump_set": js_to_json(&back),
                    "round_trip_ok": back == js,
                })
            );
        }
        EisCmd::Tame { js, d } => {
            let js = parse_js(&js)?;
            println!("{}", js_to_json(&eisenstein::tame_transform(&js, d)?));
        }
        EisCmd::Constraints { js1, d, js2 } => {
            let js1 = parse_js(&js1)?;
            let js2 = parse_js(&js2)?;
            let checks = eisenstein::extension_constraints(&js1, d, &js2)?;
            let all = checks.iter().all(|c| c.pass);
            for c in &checks {
                println!(
                    "[{}] {} ({})",
                    if c.pass { "ok" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            println!("{}", json!({"all_pass": all}));
        }
    }
    Ok(())
}

/// Coefficients of the tower's polynomial in the documented digit format:
/// per coefficient, per y-power, per s-power, little-endian base-p digits.
fn tower_coefficients_json(tower: &Tower) -> serde_json::Value {
    let p = tower.p();
    let digits = |mut v: u64| -> Vec<u64> {
        let mut out = Vec::new();
        while v > 0 {
            out.push(v % p);
            v /= p;
        }
        out
    };
    json!(tower
        .g_lower
        .iter()
        .map(|coeff| coeff
            .iter()
            .map(|zq| zq.iter().map(|&c| digits(c)).collect::<Vec<_>>())
            .collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn run_field(cmd: FieldCmd) -> Result<(), Error> {
    match cmd {
        FieldCmd::Jumpset {
            p,
            f,
            j,
            g,
            precision,
            json: as_json,
        } => {
            let coeffs: Vec<serde_json::Value> = serde_json::from_str(&g)
                .map_err(|err| Error::Precondition(format!("bad polynomial JSON: {err}")))?;
            let e0 = coeffs.len() as u32;
            let prec = precision.unwrap_or_else(|| padic::default_precision(p, e0, j));
            let base = BaseRing::new(p, f, j, prec)?;
            let g_lower = coeffs
                .iter()
                .map(|c| parse_coefficient(&base, c))
                .collect::<Result<Vec<_>, _>>()?;
            let tower = Tower::new(p, f, j, g_lower, prec)?;
            let js = padic::field_jump_set(&tower)?;
            let newt = padic::ramification_newton(&tower)?;
            if as_json {
                println!(
                    "{}",
                    json!({"jump_set": js_to_json(&js), "newton_polygon": newt.vertices()})
                );
            } else {
                println!("jump set       {js}");
                println!("ramification   {:?}", newt.vertices());
            }
        }
        FieldCmd::Sample {
            p,
            f,
            e0,
            n,
            seed,
            json: as_json,
        } => {
            use rand::SeedableRng;
            use rayon::prelude::*;
            let prec = padic::default_precision(p, e0, 0);
            let counts: std::collections::BTreeMap<JumpSet, u64> = (0..n)
                .into_par_iter()
                .fold(
                    std::collections::BTreeMap::new,
                    |mut acc: std::collections::BTreeMap<JumpSet, u64>, idx| {
                        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive(
                            seed,
                            "field-sample",
                            idx,
                        ));
                        let tower =
                            padic::sample_eisenstein(p, f, 0, e0, prec, &mut rng).unwrap();
                        let js = padic::field_jump_set(&tower).unwrap();
                        *acc.entry(js).or_default() += 1;
                        acc
                    },
                )
                .reduce(std::collections::BTreeMap::new, |mut a, b| {
                    for (k, v) in b {
                        *a.entry(k).or_default() += v;
                    }
                    a
                });
            let shift = Shift::rho_ep(p, (p - 1) * e0 as u64)?;
            let exact =
                shooting::exact_distribution(&shift, p.pow(f), p, shift.e_prime().unwrap(), true)?;
            for (js, c) in &counts {
                let expect = exact.map.get(js).map(rat_str);
                if as_json {
                    println!(
                        "{}",
                        json!({"jump_set": js_to_json(js), "count": c,
                               "exact_mass": expect})
                    );
                } else {
                    println!(
                        "{c:>8} / {n}  {js}   exact {}",
                        expect.unwrap_or_else(|| "0".into())
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let code = match err {
                Error::PrecisionExhausted { .. } | Error::FactorResidual { .. } => 2,
                _ => 1,
            };
            eprintln!(
                "{}",
                json!({"error": err.to_string(), "exit_code": code})
            );
            std::process::exit(code);
        }
    }
}
