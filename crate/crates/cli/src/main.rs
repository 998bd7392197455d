//! `phiterate`: JSON front-end to the phiterate library.
//!
//! Every run prints one JSON object `{"inputEcho", "result", "certificates",
//! "timingMs"}`. Exit status is 0 when every certificate holds, 2 when one
//! fails and 3 when the input is rejected.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use phiterate::chebyshev::{cheb_p, cyclotomic_tower, laurent_identity, verify_chebyshev_example};
use phiterate::dynamics::{
    congruent_mod, lubin_log_limit, lubin_log_product, lubin_log_recursive, solve_commuting, LogarithmResult,
};
use phiterate::json::{parse_poly, parse_ring, poly_json, JsonRing};
use phiterate::lubin_tate::{
    endomorphism, group_inverse, group_law, iterate_twisted, verify_group_axioms, LubinTateData,
};
use phiterate::padic::{newton_polygon_rational, RingContext};
use phiterate::props::run_props;
use phiterate::ring::parse_rational;
use phiterate::tower::{NormCompatibleSequence, TowerContext};
use phiterate::{CoeffRing, Error, Poly, Rationals, Result, TruncSeries};

#[derive(Parser, Debug)]
#[command(name = "phiterate", version, about = "Coleman power series, Lubin logarithms and relative Lubin-Tate groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Residue characteristic.
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Ring precision M: elements are known modulo p^M.
    #[arg(long)]
    precision: Option<u32>,
    /// Series truncation order N: series are known modulo T^(N+1).
    #[arg(long)]
    order: Option<usize>,
    /// Tower depth (highest level u_n).
    #[arg(long)]
    depth: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Read the input object from a file, or from stdin with "-".
    #[arg(long)]
    json: Option<String>,
    /// Write the report to a file instead of stdout ("-" for stdout).
    #[arg(long)]
    out: Option<String>,
    /// Target congruence precision k: results are certified modulo p^k.
    #[arg(long = "pi-precision")]
    pi_precision: Option<u32>,
    /// Report wall-clock time in "timingMs" (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recover a Coleman power series from a norm-compatible sequence.
    Coleman {
        #[command(flatten)]
        common: Common,
        /// Build the sequence (f(u_n)) in the Chebyshev tower from this polynomial.
        #[arg(long, default_value = "[0,1]")]
        poly: String,
    },
    /// Lubin's logarithm of P, by recursion, product and limit.
    Log {
        #[command(flatten)]
        common: Common,
        /// P as a coefficient array, constant term first.
        #[arg(long, default_value = "[0,9,6,1]")]
        poly: String,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Also solve F(P) = P(F) with F'(0) = eta.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Relative Lubin-Tate group law for f = pi T + T^q.
    Ltgroup {
        #[command(flatten)]
        common: Common,
        /// Defining polynomial of E over Q_p (omit for E = Q_p).
        #[arg(long)]
        modulus: Option<String>,
        /// f'(0), as an integer or a coefficient array in E (default p).
        #[arg(long)]
        pi: Option<String>,
    },
    /// Checks for the Chebyshev family P_k = 2(C_k(T/2 + 1) - 1).
    Cheb {
        #[command(flatten)]
        common: Common,
    },
    /// Newton polygon of a polynomial over Q_p.
    Polygon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
    },
    /// Seeded randomized property suites.
    Props {
        #[command(flatten)]
        common: Common,
        /// Cases per property.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Only run properties whose name starts with this prefix (repeatable).
        #[arg(long)]
        suite: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Recursion,
    Product,
    Limit,
    All,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Recursion => "recursion",
            Method::Product => "product",
            Method::Limit => "limit",
            Method::All => "all",
        }
    }
}

struct Outcome {
    result: Value,
    certificates: Map<String, Value>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.certificates.values().all(|v| v.as_bool().unwrap_or(true))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let common = match &cli.command {
        Command::Coleman { common, .. }
        | Command::Log { common, .. }
        | Command::Ltgroup { common, .. }
        | Command::Cheb { common }
        | Command::Polygon { common, .. }
        | Command::Props { common, .. } => common.clone(),
    };
    let start = Instant::now();
    let input = match read_input(&common) {
        Ok(v) => v,
        Err(e) => return finish(&common, error_report(Value::Null, &e), 3),
    };
    let echo = echo(&cli.command, &common, &input);
    let outcome = match dispatch(&cli.command, &common, &input) {
        Ok(o) => o,
        Err(e) => return finish(&common, error_report(echo, &e), 3),
    };
    let timing = if common.timing { json!(start.elapsed().as_millis() as u64) } else { Value::Null };
    let code = if outcome.passed() { 0 } else { 2 };
    let report = json!({
        "inputEcho": echo,
        "result": outcome.result,
        "certificates": Value::Object(outcome.certificates),
        "timingMs": timing,
    });
    finish(&common, report, code)
}

fn finish(common: &Common, report: Value, code: u8) -> ExitCode {
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    let written = match common.out.as_deref() {
        None | Some("-") => io::stdout().write_all(text.as_bytes()),
        Some(path) => fs::write(path, text),
    };
    if let Err(e) = written {
        eprintln!("phiterate: cannot write report: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}

fn error_report(echo: Value, e: &Error) -> Value {
    json!({
        "inputEcho": echo,
        "error": {"code": e.code(), "message": e.to_string()},
    })
}

fn read_input(common: &Common) -> Result<Value> {
    let Some(src) = common.json.as_deref() else {
        return Ok(Value::Null);
    };
    let text = if src == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Schema(format!("cannot read stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(src).map_err(|e| Error::Schema(format!("cannot read {src}: {e}")))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("malformed JSON: {e}")))?;
    if !v.is_object() {
        return Err(Error::Schema("input must be a JSON object".into()));
    }
    Ok(v)
}

fn echo(cmd: &Command, c: &Common, input: &Value) -> Value {
    let mut flags = json!({
        "p": c.p,
        "precision": c.precision,
        "order": c.order,
        "depth": c.depth,
        "seed": c.seed,
        "piPrecision": c.pi_precision,
    });
    let name = match cmd {
        Command::Coleman { poly, .. } => {
            flags["poly"] = json!(poly);
            "coleman"
        }
        Command::Log { poly, method, eta, .. } => {
            flags["poly"] = json!(poly);
            flags["method"] = json!(method.name());
            flags["eta"] = json!(eta);
            "log"
        }
        Command::Ltgroup { modulus, pi, .. } => {
            flags["modulus"] = json!(modulus);
            flags["pi"] = json!(pi);
            "ltgroup"
        }
        Command::Cheb { .. } => "cheb",
        Command::Polygon { poly, .. } => {
            flags["poly"] = json!(poly);
            "polygon"
        }
        Command::Props { count, suite, .. } => {
            flags["count"] = json!(count);
            flags["suite"] = json!(suite);
            "props"
        }
    };
    json!({"subcommand": name, "flags": flags, "input": input})
}

fn dispatch(cmd: &Command, c: &Common, input: &Value) -> Result<Outcome> {
    match cmd {
        Command::Coleman { poly, .. } => run_coleman(c, poly, input),
        Command::Log { poly, method, eta, .. } => run_log(c, poly, *method, eta.as_deref()),
        Command::Ltgroup { modulus, pi, .. } => run_ltgroup(c, modulus.as_deref(), pi.as_deref(), input),
        Command::Cheb { .. } => run_cheb(c),
        Command::Polygon { poly, .. } => run_polygon(c, poly),
        Command::Props { count, suite, .. } => run_props_cmd(c, *count, suite),
    }
}

fn cert(map: &mut Map<String, Value>, name: &str, pass: bool) {
    map.insert(name.to_string(), Value::Bool(pass));
}

fn target_j(c: &Common) -> Result<usize> {
    let k = c.pi_precision.unwrap_or(3);
    if k == 0 {
        return Err(Error::Schema("--pi-precision must be at least 1".into()));
    }
    Ok(k as usize - 1)
}

fn parse_flag_value(s: &str) -> Result<Value> {
    let s = s.replace('\u{2212}', "-");
    Ok(serde_json::from_str(&s).unwrap_or(Value::String(s)))
}

fn run_coleman(c: &Common, poly: &str, input: &Value) -> Result<Outcome> {
    let j = target_j(c)?;
    let (tower, seq) = if input.is_null() {
        if c.p != 3 {
            return Err(Error::Schema("without --json the Chebyshev tower over Z_3 is used; --p must be 3".into()));
        }
        let levels = c.depth.unwrap_or(0).max(2 * j);
        let tower = TowerContext::chebyshev(c.precision.unwrap_or(8), levels)?;
        let f = parse_poly(tower.ring(), &Value::String(poly.to_string()))?;
        let seq = tower.sequence_from_poly(&f, levels)?;
        (tower, seq)
    } else {
        let t = input.get("tower").ok_or_else(|| Error::Schema("missing \"tower\"".into()))?;
        let ring = parse_ring(t.get("ring").ok_or_else(|| Error::Schema("missing \"tower.ring\"".into()))?)?;
        let p = parse_poly(&ring, t.get("P").ok_or_else(|| Error::Schema("missing \"tower.P\"".into()))?)?;
        let u0 = ring.parse_elem(t.get("u0").ok_or_else(|| Error::Schema("missing \"tower.u0\"".into()))?)?;
        let elements = input.get("elements").ok_or_else(|| Error::Schema("missing \"elements\"".into()))?;
        let levels = elements.as_array().map_or(0, |a| a.len().saturating_sub(1));
        let tower = TowerContext::new(ring, p, u0, levels)?;
        let seq = NormCompatibleSequence::from_json(&tower, elements)?;
        (tower, seq)
    };
    let col = tower.coleman_series(&seq, j)?;
    let mut certs = Map::new();
    cert(&mut certs, "congruences", col.congruences.iter().all(|&b| b));
    cert(&mut certs, "normFixed", col.norm_fixed);
    Ok(Outcome {
        result: json!({"tower": tower.to_json(), "coleman": col.to_json()}),
        certificates: certs,
    })
}

fn run_log(c: &Common, poly: &str, method: Method, eta: Option<&str>) -> Result<Outcome> {
    let n = c.order.unwrap_or(9);
    let m = c.precision.unwrap_or(6);
    let f = parse_poly(&Rationals, &Value::String(poly.to_string()))?;
    let p_series = TruncSeries::from_poly(&f, n);
    let recursion = lubin_log_recursive(&p_series, n, c.p)?;
    let mut certs = Map::new();
    cert(
        &mut certs,
        "functionalEquation",
        recursion.residual_valuation.is_none_or(|v| v >= m as i64),
    );
    let mut results: Vec<LogarithmResult> = Vec::new();
    if matches!(method, Method::Product | Method::All) {
        let prod = lubin_log_product(&p_series, n, c.p, m, 256)?;
        cert(&mut certs, "productAgrees", congruent_mod(&prod.series, &recursion.series, c.p, m));
        results.push(prod);
    }
    if matches!(method, Method::Limit | Method::All) {
        let lim = lubin_log_limit(&p_series, n, c.p, m, 256)?;
        cert(&mut certs, "limitAgrees", congruent_mod(&lim.series, &recursion.series, c.p, m));
        results.push(lim);
    }
    if matches!(method, Method::Recursion | Method::All) {
        results.insert(0, recursion);
    }
    let mut result = json!({
        "P": poly_json(&f),
        "logarithms": results.iter().map(LogarithmResult::to_json).collect::<Vec<_>>(),
    });
    if let Some(eta) = eta {
        let eta0 = parse_rational(&eta.replace('\u{2212}', "-"))?;
        let sol = solve_commuting(&p_series, &eta0, n, c.p)?;
        result["commuting"] = json!({
            "series": sol.series.to_json(),
            "integral": sol.integral,
        });
    }
    Ok(Outcome { result, certificates: certs })
}

fn run_ltgroup(c: &Common, modulus: Option<&str>, pi: Option<&str>, input: &Value) -> Result<Outcome> {
    let n = c.order.unwrap_or(9);
    let k = c.pi_precision.unwrap_or(6);
    let m = c.precision.unwrap_or(12);
    let data = if input.is_null() {
        let ring = match modulus {
            None => RingContext::base(c.p, m)?,
            Some(s) => {
                let ring_json = json!({"p": c.p, "precision": m, "modulus": parse_flag_value(s)?});
                parse_ring(&ring_json)?
            }
        };
        let pi = match pi {
            None => ring.from_i64(c.p as i64),
            Some(s) => ring.parse_elem(&parse_flag_value(s)?)?,
        };
        LubinTateData::canonical(&ring, pi, n)?
    } else {
        let ring = parse_ring(input.get("E").ok_or_else(|| Error::Schema("missing \"E\"".into()))?)?;
        let alpha = ring.parse_elem(input.get("alpha").ok_or_else(|| Error::Schema("missing \"alpha\"".into()))?)?;
        let fv = input.get("f").ok_or_else(|| Error::Schema("missing \"f\"".into()))?;
        let f = if fv.is_object() {
            TruncSeries::from_json(&ring, fv)?
        } else {
            TruncSeries::from_poly(&parse_poly(&ring, fv)?, n.max(c.p as usize))
        };
        LubinTateData::new(f, alpha)?
    };
    let g = group_law(&data, n)?;
    let axioms = verify_group_axioms(&g, k)?;
    let alpha_endo = endomorphism(&data, data.alpha(), n)?;
    let composite = iterate_twisted(&data, n)?;
    let inverse = group_inverse(&g)?;
    let slope = data.torsion_slope_check()?;
    let mut certs = Map::new();
    cert(&mut certs, "twistedIdentity", g.certified());
    cert(&mut certs, "precisionReached", g.precision() >= k);
    cert(&mut certs, "groupAxioms", axioms.all_pass());
    cert(&mut certs, "iterateTwistedIsAlpha", composite.congruent(&alpha_endo, k));
    cert(&mut certs, "torsionSlope", slope);
    Ok(Outcome {
        result: json!({
            "group": g.to_json(),
            "axioms": axioms.to_json(),
            "endomorphismAlpha": alpha_endo.to_json(),
            "iterateTwisted": composite.to_json(),
            "inverse": inverse.to_json(),
        }),
        certificates: certs,
    })
}

fn run_cheb(c: &Common) -> Result<Outcome> {
    let j = target_j(c)?;
    let depth = c.depth.unwrap_or(2);
    let report = verify_chebyshev_example(j, depth, c.precision.unwrap_or(8))?;
    let mut semigroup = true;
    for a in 1..=30usize {
        for b in 1..=30 / a {
            let pa = cheb_p(a)?;
            let pb = cheb_p(b)?;
            let pab = cheb_p(a * b)?;
            semigroup &= pa.compose(&pb) == pab && pb.compose(&pa) == pab;
        }
    }
    let mut laurent = true;
    for k in 1..=12 {
        laurent &= laurent_identity(k, 1)?;
    }
    let tower = cyclotomic_tower(depth)?;
    let mut certs = Map::new();
    for item in &report.items {
        cert(&mut certs, &format!("item_{}", item.label), item.pass);
    }
    cert(&mut certs, "semigroupLaw", semigroup);
    cert(&mut certs, "laurentIdentity", laurent);
    cert(&mut certs, "cyclotomicTower", tower);
    Ok(Outcome {
        result: json!({
            "P": poly_json(&cheb_p(3)?),
            "levels": depth.max(2 * j),
            "report": report.to_json(),
        }),
        certificates: certs,
    })
}

fn run_polygon(c: &Common, poly: &str) -> Result<Outcome> {
    let f: Poly<Rationals> = parse_poly(&Rationals, &Value::String(poly.to_string()))?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !phiterate::ring::is_prime_u64(c.p) {
        return Err(Error::CompositeP(c.p.to_string()));
    }
    let np = newton_polygon_rational(&f, c.p)?;
    let eisenstein = f.is_monic() && f.is_integral() && np.is_eisenstein_shape();
    Ok(Outcome {
        result: json!({
            "poly": poly_json(&f),
            "polygon": serde_json::to_value(&np).expect("plain data"),
            "eisenstein": eisenstein,
        }),
        certificates: Map::new(),
    })
}

fn run_props_cmd(c: &Common, count: usize, suite: &[String]) -> Result<Outcome> {
    let report = run_props(c.seed, count, suite)?;
    let mut certs = Map::new();
    for p in &report.properties {
        cert(&mut certs, &p.name, p.passed == p.cases);
    }
    Ok(Outcome { result: report.to_json(), certificates: certs })
}
