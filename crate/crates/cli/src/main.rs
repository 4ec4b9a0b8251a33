//! `repzeta`: abscissae, orbit counts, centralizers and twist zeta functions
//! from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use repzeta::centralizers::{norm_one_count, norm_one_structural, sc_order};
use repzeta::gl2zeta::{
    dims_and_mults, sum_squares_identity, sum_squares_symbolic, twist_blocks_podd,
    twist_zeta_gl2_podd,
};
use repzeta::mat2::Mat2;
use repzeta::mellin::{abscissa, is_minimal_abscissa, rational_string, substitute_one};
use repzeta::orbits::{
    class_counts_brute, class_counts_closed, count_twist_orbits_wdelta,
    count_twist_orbits_wdelta_floor, twist_counts_brute, twist_counts_closed, wdelta_cells,
    wdelta_census_brute,
};
use repzeta::rootsys::{ratio, weyl_polynomial};
use repzeta::verify::{criterion_suites, run_suite, SuiteParams, SUITES};
use repzeta::{Config, Error, Flavor, Format, LinearFormPoly, Ring, RingDesc, RootSystem};

use output::{emit, rat};

#[derive(Parser)]
#[command(
    name = "repzeta",
    version,
    about = "Representation zeta functions and GL2/SL2 orbit counts"
)]
struct Cli {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the enumeration cap (also REPZETA_CAP)
    #[arg(long, global = true)]
    cap: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FlavorArg {
    Gl,
    Sl,
}

#[derive(Subcommand)]
enum Command {
    /// Abscissa of convergence of the Mellin zeta function of a polynomial
    MellinAbscissa {
        #[arg(long)]
        input: PathBuf,
        /// Also print the maximizing subset
        #[arg(long)]
        witness: bool,
    },
    /// Abscissa of the Witten zeta function of a root system
    Witten {
        #[arg(long = "type")]
        system: String,
        /// Restrict to weights with m_j = 0
        #[arg(long)]
        irregular: Option<usize>,
        #[arg(long)]
        poly_out: Option<PathBuf>,
    },
    /// Conjugacy-class and twist-orbit counts of M2(O)
    Orbits(OrbitArgs),
    /// Order of the SL2-centralizer of a companion matrix
    ScCount {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        trace: String,
        #[arg(long)]
        det: String,
        #[arg(long, conflicts_with = "structural")]
        brute: bool,
        #[arg(long)]
        structural: bool,
    },
    /// Twist zeta function of GL2(O) for p odd
    TwistZeta {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        rmax: Option<u32>,
        /// Also evaluate the closed form
        #[arg(long)]
        closed_form: bool,
    },
    /// Sum-of-squares identity for the level blocks of GL2(F_q[[t]])
    IdentityCheck {
        #[arg(long, default_value = "2..8")]
        q: String,
        #[arg(long, default_value = "2..6")]
        r: String,
    },
    /// Runs verification suites; exits with 2 when a check fails
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    ring: String,
    #[arg(long, conflicts_with = "by_wdelta")]
    by_type: bool,
    #[arg(long)]
    by_wdelta: bool,
    #[arg(long, value_enum, default_value = "gl")]
    flavor: FlavorArg,
    #[arg(long)]
    brute: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; repeatable. Defaults to every acceptance criterion.
    #[arg(long)]
    suite: Vec<String>,
    /// Acceptance criterion number; repeatable
    #[arg(long)]
    criterion: Vec<usize>,
    /// Comma-separated residue field sizes
    #[arg(long)]
    q: Option<String>,
    /// Level range a..b
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
}

fn malformed(field: &str, reason: impl Into<String>) -> Error {
    Error::Malformed {
        field: field.into(),
        reason: reason.into(),
    }
}

fn parse_range(field: &str, s: &str) -> Result<(u64, u64), Error> {
    let bad = || {
        malformed(
            field,
            format!("expected a..b or a single integer, got {s:?}"),
        )
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?,
        ),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a > b {
        return Err(malformed(field, format!("empty range {s:?}")));
    }
    Ok((a, b))
}

fn load_config(cli: &Cli) -> Result<Config, Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| malformed("config", e.to_string()))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    cfg = cfg.with_env()?;
    if let Some(cap) = &cli.cap {
        cfg.set("cap", cap)?;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }
    cfg.apply_workers()?;
    Ok(cfg)
}

fn read_json(path: &PathBuf, field: &str) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| malformed(field, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(field, e.to_string()))
}

fn parse_ring(spec: &str) -> Result<Ring, Error> {
    Ring::new(RingDesc::from_json(spec)?)
}

fn parse_elem(r: &Ring, s: &str, field: &str) -> Result<u32, Error> {
    let v: Value = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    r.elem_from_json(&v, field)
}

fn mellin_cmd(input: &PathBuf, witness: bool) -> Result<Value, Error> {
    let p = LinearFormPoly::from_json(&read_json(input, "input")?)?;
    let a = abscissa(&p)?;
    let mut out = json!({
        "r": p.r,
        "kappa": p.kappa(),
        "abscissa": rational_string(&a.value),
        "abscissa_approx": rat(&a.value),
        "minimal": is_minimal_abscissa(&p)?,
    });
    if witness {
        out["witness"] = json!(a.witness);
    }
    Ok(out)
}

fn witten_cmd(
    system: &str,
    irregular: Option<usize>,
    poly_out: Option<&PathBuf>,
) -> Result<Value, Error> {
    let phi = RootSystem::parse(system)?;
    let mut poly = weyl_polynomial(&phi);
    if let Some(j) = irregular {
        if phi.rank < 2 {
            return Err(Error::Unsupported(
                "a rank-one system has no irregular weights".into(),
            ));
        }
        poly = substitute_one(&poly, j)
            .map_err(|_| malformed("irregular", format!("must lie in 1..={}", phi.rank)))?;
    }
    let a = abscissa(&poly)?;
    if let Some(path) = poly_out {
        let text = serde_json::to_string_pretty(&poly.to_json()).unwrap();
        std::fs::write(path, text + "\n").map_err(|e| malformed("poly-out", e.to_string()))?;
    }
    let base = ratio(&phi);
    let mut out = json!({
        "type": phi.name(),
        "r": phi.rank,
        "kappa": phi.kappa(),
        "abscissa": rational_string(&a.value),
        "abscissa_approx": rat(&a.value),
    });
    match irregular {
        Some(j) => {
            out["irregular"] = json!(j);
            out["below_regular"] = json!(a.value < base);
        }
        None => out["equals_r_over_kappa"] = json!(a.value == base),
    }
    Ok(out)
}

fn counts(xs: &[num_bigint::BigUint; 3]) -> Value {
    json!(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn orbits_cmd(a: &OrbitArgs, cfg: &Config) -> Result<Value, Error> {
    let r = parse_ring(&a.ring)?;
    let flavor = if a.flavor == FlavorArg::Sl {
        Flavor::SL2
    } else {
        Flavor::GL2
    };
    let mut out = json!({ "ring": r.desc().to_json(), "flavor": if a.flavor == FlavorArg::Sl { "sl" } else { "gl" } });
    if a.by_wdelta {
        let brute = if a.brute {
            Some(wdelta_census_brute(&r, flavor, cfg.cap)?)
        } else {
            None
        };
        let mut rows = Vec::new();
        for (w, d) in wdelta_cells(r.level()) {
            let mut row = json!({ "w": w, "delta": d });
            if flavor == Flavor::GL2 && r.is_char2() && r.kind() == repzeta::RingKind::EqualChar {
                let q = r.q() as u64;
                let c = count_twist_orbits_wdelta(q, r.level(), w, d)?;
                let f = count_twist_orbits_wdelta_floor(q, r.level(), w, d)?;
                row["closed"] = json!(rational_string(&c));
                row["closed_floor"] = json!(rational_string(&f));
            }
            if let Some(b) = &brute {
                row["brute"] = json!(b.get(&(w, d)).copied().unwrap_or(0));
            }
            rows.push(row);
        }
        out["cells"] = json!(rows);
        return Ok(out);
    }
    let labels = ["type1", "type2", "type3"];
    let mut table = Vec::new();
    for (kind, twist) in [("classes", false), ("twist_orbits", true)] {
        let mut row = json!({ "count": kind, "types": labels });
        if flavor == Flavor::GL2 {
            row["closed"] = if twist {
                counts(&twist_counts_closed(&r))
            } else {
                counts(&class_counts_closed(r.q() as u64, r.level()))
            };
        }
        if a.brute {
            let b = if twist {
                twist_counts_brute(&r, flavor, cfg.cap)?
            } else {
                class_counts_brute(&r, flavor, cfg.cap)?
            };
            row["brute"] = json!(b.by_type);
            row["brute_nonregular"] = json!(b.nonregular);
        }
        table.push(row);
    }
    out["table"] = json!(table);
    Ok(out)
}

fn sc_cmd(
    ring: &str,
    trace: &str,
    det: &str,
    brute: bool,
    structural: bool,
) -> Result<Value, Error> {
    let r = parse_ring(ring)?;
    let tau = parse_elem(&r, trace, "trace")?;
    let d = parse_elem(&r, det, "det")?;
    let beta = Mat2::companion(&r, tau, d);
    let mut out = json!({ "ring": r.desc().to_json(), "beta": beta.to_json(&r) });
    let rep = if structural {
        sc_order(&r, &beta, false)
    } else {
        sc_order(&r, &beta, brute)
    }?;
    out["type"] = json!(rep.otype.label());
    out["level"] = json!(rep.level);
    if let Some(f) = &rep.order_formula {
        out["order_formula"] = json!(f.to_string());
    }
    if !structural {
        if let Some(b) = rep.order_brute {
            out["order_brute"] = json!(b);
        }
    }
    if r.is_char2() && !r.is_unit(tau) && r.kind() == repzeta::RingKind::EqualChar {
        let n = if structural {
            norm_one_structural(&r, tau, d)?
        } else {
            norm_one_count(&r, tau, d)?
        };
        out["w"] = json!(n.w);
        out["delta"] = json!(n.delta);
        out["base"] = json!(n.base);
        out["admissible_c"] = json!(n.admissible);
        if let Some(c) = n.c {
            out["c"] = json!(c);
        }
    }
    Ok(out)
}

fn twist_cmd(q: u64, s: f64, rmax: Option<u32>, closed: bool) -> Result<Value, Error> {
    let mut out = json!({ "q": q, "s": s, "rmax": rmax });
    if let Some(r) = rmax {
        let blocks = twist_blocks_podd(q, r)?;
        let merged = blocks
            .iter()
            .fold(repzeta::gl2zeta::DirichletPoly::new(), |acc, (_, p)| {
                acc.add(p)
            });
        let table: Vec<Value> = blocks
            .iter()
            .flat_map(|(level, p)| {
                p.terms.iter().map(move |(d, m)| json!({ "level": level, "dim": d.to_string(), "mult": m.to_string() }))
            })
            .collect();
        out["blocks"] = json!(table);
        out["sum"] = json!(merged.eval(s));
        if s.fract() == 0.0 && s.abs() <= 64.0 {
            let exact = merged.eval_exact(s as i64);
            out["sum_exact"] = json!(rational_string(&exact));
        }
    } else if !closed {
        return Err(malformed("rmax", "required unless --closed-form is given"));
    }
    if closed {
        out["closed_form"] = json!(twist_zeta_gl2_podd(q, s, rmax)?);
    }
    Ok(out)
}

fn identity_cmd(qs: &str, rs: &str) -> Result<Value, Error> {
    let (q0, q1) = parse_range("q", qs)?;
    let (r0, r1) = parse_range("r", rs)?;
    if r0 < 2 {
        return Err(malformed("r", "levels start at 2"));
    }
    let mut rows = Vec::new();
    let mut all = true;
    for r in r0..=r1 {
        let ok = sum_squares_symbolic(r as u32);
        all &= ok;
        rows.push(json!({ "q": "symbolic", "r": r, "holds": ok }));
    }
    for q in q0..=q1 {
        if dims_and_mults(q, 2).is_err() {
            continue;
        }
        for r in r0..=r1 {
            let b = dims_and_mults(q, r as u32)?;
            let lhs: num_bigint::BigUint =
                (0..3).map(|i| &b.mults[i] * &b.dims[i] * &b.dims[i]).sum();
            let ok = sum_squares_identity(q, r as u32)?;
            all &= ok;
            rows.push(json!({ "q": q, "r": r, "sum_squares": lhs.to_string(), "holds": ok }));
        }
    }
    Ok(json!({ "holds": all, "rows": rows }))
}

fn verify_cmd(a: &VerifyArgs, cfg: &Config) -> Result<(Value, bool), Error> {
    let mut names: Vec<String> = a.suite.clone();
    for &c in &a.criterion {
        let s = criterion_suites(c);
        if s.is_empty() {
            return Err(malformed("criterion", format!("no criterion {c}")));
        }
        names.extend(s.iter().map(|x| x.to_string()));
    }
    if names.is_empty() {
        names = (1..=12)
            .flat_map(|c| criterion_suites(c).iter().map(|x| x.to_string()))
            .collect();
    }
    for n in &names {
        if !SUITES.contains(&n.as_str()) {
            return Err(malformed(
                "suite",
                format!("unknown suite {n:?}; known: {}", SUITES.join(", ")),
            ));
        }
    }
    let qs = match &a.q {
        Some(s) => Some(
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| malformed("q", format!("not an integer: {x:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let levels = match &a.levels {
        Some(s) => {
            let (lo, hi) = parse_range("levels", s)?;
            if lo < 1 {
                return Err(malformed("levels", "levels start at 1"));
            }
            Some((lo as u32, hi as u32))
        }
        None => None,
    };
    let params = SuiteParams {
        qs,
        levels,
        cap: cfg.cap,
        tolerance: cfg.tolerance,
        seed: a.seed.unwrap_or(SuiteParams::default().seed),
        samples: a.samples,
    };
    let mut reports = Vec::new();
    let mut passed = true;
    for n in &names {
        let rep = run_suite(n, &params)?;
        passed &= rep.passed;
        reports.push(serde_json::to_value(&rep).unwrap());
    }
    Ok((json!({ "passed": passed, "suites": reports }), passed))
}

fn run(cli: &Cli) -> Result<(Value, bool, Format), Error> {
    let cfg = load_config(cli)?;
    let (out, ok) = match &cli.command {
        Command::MellinAbscissa { input, witness } => (mellin_cmd(input, *witness)?, true),
        Command::Witten {
            system,
            irregular,
            poly_out,
        } => (witten_cmd(system, *irregular, poly_out.as_ref())?, true),
        Command::Orbits(a) => (orbits_cmd(a, &cfg)?, true),
        Command::ScCount {
            ring,
            trace,
            det,
            brute,
            structural,
        } => (sc_cmd(ring, trace, det, *brute, *structural)?, true),
        Command::TwistZeta {
            q,
            s,
            rmax,
            closed_form,
        } => (twist_cmd(*q, *s, *rmax, *closed_form)?, true),
        Command::IdentityCheck { q, r } => {
            let v = identity_cmd(q, r)?;
            let ok = v["holds"] == json!(true);
            (v, ok)
        }
        Command::Verify(a) => verify_cmd(a, &cfg)?,
    };
    Ok((out, ok, cfg.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((v, ok, format)) => {
            print!("{}", emit(&v, format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
