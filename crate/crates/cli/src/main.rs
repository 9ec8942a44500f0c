use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modcurv::curvature::{eh_functions, extract_dimension, limit_eval, log_form, CurvatureError, ModularExpr};
use modcurv::exact::Assignment;
use modcurv::verify::{run_suites, Suite, VerifyConfig};
use modcurv::{curvature, symcalc, RationalFunction};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "modcurv", version, about = "Modular scalar curvature of Connes-Landi deformations")]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Local curvature functions in one dimension.
    Derive {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_enum, default_value_t = Operator::Laplacian)]
        operator: Operator,
        #[arg(long, value_enum, default_value_t = Form::K)]
        form: Form,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Evaluate one function at a point.
    Eval {
        #[arg(long)]
        dim: u32,
        /// K, H, K_dirac, H_dirac, logK, logH, K_EH, H_EH, T, T~, L, M, P or Q.
        #[arg(long)]
        function: String,
        /// Point as `s=..,t=..`; positive values for K and H, log variables otherwise.
        #[arg(long)]
        at: String,
    },
    /// The one- and two-variable functions for several dimensions.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        dims: Vec<u32>,
    },
    /// The terms of b2 grouped by their origin.
    DumpB2,
    /// The spectral functions summed into the masters F and G.
    DumpSpectral,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    Laplacian,
    Dirac,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    K,
    Log,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Dimensions for the relations, oracle and clifford suites.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<u32>>,
    /// Oracle seeds.
    #[arg(long)]
    seeds: Option<u32>,
    /// Oracle matrix size.
    #[arg(long)]
    size: Option<usize>,
    /// Sample points per dimension for the relations.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides each suite's default tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    radius: Option<u32>,
}

enum Failure {
    Usage(String),
    Checks(String),
}

type Outcome = Result<(String, Value), (Failure, Option<(String, Value)>)>;

fn usage(msg: impl ToString) -> (Failure, Option<(String, Value)>) {
    (Failure::Usage(msg.to_string()), None)
}

fn curvature_err(e: CurvatureError) -> (Failure, Option<(String, Value)>) {
    usage(e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derive { dim, operator, form } => derive(dim, operator, form),
        Command::Verify(args) => verify(args),
        Command::Eval { dim, function, at } => eval(dim, &function, &at),
        Command::Table { dims } => table(&dims),
        Command::DumpB2 => dump_b2(),
        Command::DumpSpectral => dump_spectral(),
    };
    let (code, payload, message) = match result {
        Ok(p) => (ExitCode::SUCCESS, Some(p), None),
        Err((Failure::Checks(m), p)) => (ExitCode::from(1), p, Some(m)),
        Err((Failure::Usage(m), p)) => (ExitCode::from(2), p, Some(m)),
    };
    if let Some((text, value)) = payload {
        let body = if cli.out.json {
            serde_json::to_string_pretty(&value).expect("serializable") + "\n"
        } else {
            text
        };
        match &cli.out.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => print!("{body}"),
        }
    }
    if let Some(m) = message {
        eprintln!("error: {m}");
    }
    code
}

fn derive(dim: u32, operator: Operator, form: Form) -> Outcome {
    let set = extract_dimension(dim).map_err(curvature_err)?;
    let (rational, log, op) = match (operator, form) {
        (Operator::Laplacian, Form::K) => (Some((&set.k_delta, &set.h_delta)), None, "laplacian"),
        (Operator::Dirac, Form::K) => (Some((&set.k_dirac, &set.h_dirac)), None, "dirac"),
        (Operator::Dirac, Form::Log) => (None, Some(log_form(&set)), "dirac"),
        (Operator::Laplacian, Form::Log) => return Err(usage("the log form is defined for the Dirac-type operator")),
    };
    let form_name = match form {
        Form::K => "k",
        Form::Log => "log",
    };
    let (k, h) = match (&rational, &log) {
        (Some((k, h)), _) => (k.pretty(), h.pretty()),
        (_, Some(lf)) => (lf.k.to_string(), lf.h.to_string()),
        _ => unreachable!(),
    };
    let mut value = json!({
        "dim": dim,
        "operator": op,
        "form": form_name,
        "K": k,
        "H": h,
        "c_scal": set.c_scal.to_string(),
        "scalar_coefficient": set.scalar_coefficient().to_string(),
        "four_pi_power": set.normalization.four_pi_power,
    });
    if let Some((kf, hf)) = rational {
        value["K_terms"] = json!(kf.to_string());
        value["H_terms"] = json!(hf.to_string());
    }
    let mut text = format!("m = {dim}, {op}, form {form_name}\n");
    let _ = writeln!(text, "  K = {k}");
    let _ = writeln!(text, "  H = {h}");
    let _ = writeln!(text, "  c(m) = {}, c(m)/Gamma(m/2) = {}", set.c_scal, set.scalar_coefficient());
    Ok((text, value))
}

fn verify(a: VerifyArgs) -> Outcome {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse::<Suite>().map_err(usage)?]
    };
    let mut cfg = VerifyConfig { seed: a.seed, tol: a.tol, ..VerifyConfig::default() };
    if let Some(dims) = a.dims {
        if let Some(&m) = dims.iter().find(|&&m| m < 4 || m % 2 != 0) {
            return Err(usage(format!("dimension {m} is not an even integer >= 4")));
        }
        cfg.relation_dims = dims.clone();
        cfg.oracle_dims = dims.clone();
        cfg.sphere_dims = dims.iter().map(|&m| m as usize).collect();
    }
    if let Some(n) = a.seeds {
        cfg.oracle_seeds = n;
    }
    if let Some(n) = a.size {
        cfg.oracle_sizes = vec![n];
    }
    if let Some(n) = a.samples {
        cfg.samples = n;
    }
    if let Some(r) = a.rank {
        if !(2..=3).contains(&r) {
            return Err(usage("torus rank must be 2 or 3"));
        }
        cfg.rank = r;
    }
    if let Some(r) = a.radius {
        cfg.radius = r;
    }
    let start = Instant::now();
    let reports = run_suites(&suites, &cfg);
    let elapsed = start.elapsed().as_secs_f64();
    let passed = reports.iter().all(|r| r.passed());
    let mut text = String::new();
    for r in &reports {
        let _ = write!(text, "{r}");
    }
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let _ = writeln!(text, "{} of {total} checks passed in {elapsed:.2}s", total - failed);
    let value = json!({ "seed": cfg.seed, "passed": passed, "reports": reports });
    if passed {
        Ok((text, value))
    } else {
        Err((Failure::Checks(format!("{failed} checks failed")), Some((text, value))))
    }
}

fn parse_point(at: &str) -> Result<(Option<f64>, Option<f64>), String> {
    let (mut s, mut t) = (None, None);
    for part in at.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected name=value, got `{part}`"))?;
        let x: f64 = v.trim().parse().map_err(|_| format!("not a number: `{v}`"))?;
        match k.trim() {
            "s" => s = Some(x),
            "t" => t = Some(x),
            other => return Err(format!("unknown variable `{other}`")),
        }
    }
    Ok((s, t))
}

fn eval_rational(f: &RationalFunction, s: Option<f64>, t: Option<f64>) -> Result<f64, String> {
    let mut at = Assignment::new();
    for (name, v) in [("s", s), ("t", t)] {
        if matches!(v, Some(x) if x <= 0.0) {
            return Err(format!("{name} must be positive"));
        }
    }
    if let Some(s) = s {
        at = at.with_s(s);
    }
    if let Some(t) = t {
        at = at.with_t(t);
    }
    let z = f.eval_numeric(&at).map_err(|e| e.to_string())?;
    Ok(z.re)
}

/// Evaluates directly, or by extrapolation when the point lies on a
/// removable singularity.
fn eval_modular(f: &ModularExpr, args: &[f64]) -> Result<(f64, bool), String> {
    match f.eval(args) {
        Ok(v) => Ok((v, false)),
        Err(CurvatureError::SingularLocus { .. }) => {
            let dir = [1.0, 0.5];
            limit_eval(f, args, &dir[..args.len()]).map(|l| (l.value, true)).map_err(|e| e.to_string())
        }
        Err(e) => Err(e.to_string()),
    }
}

fn eval(dim: u32, function: &str, at: &str) -> Outcome {
    let (s, t) = parse_point(at).map_err(usage)?;
    let set = extract_dimension(dim).map_err(curvature_err)?;
    let need = |two: bool| -> Result<Vec<f64>, (Failure, Option<(String, Value)>)> {
        let s = s.ok_or_else(|| usage("missing s"))?;
        if two {
            Ok(vec![s, t.ok_or_else(|| usage("missing t"))?])
        } else {
            Ok(vec![s])
        }
    };
    let (value, limit) = match function {
        "K" | "K_dirac" => {
            need(false)?;
            let f = if function == "K" { &set.k_delta } else { &set.k_dirac };
            (eval_rational(f, s, None).map_err(usage)?, false)
        }
        "H" | "H_dirac" => {
            let args = need(true)?;
            let f = if function == "H" { &set.h_delta } else { &set.h_dirac };
            (eval_rational(f, Some(args[0]), Some(args[1])).map_err(usage)?, false)
        }
        "logK" | "logH" => {
            let lf = log_form(&set);
            let (f, two) = if function == "logK" { (&lf.k, false) } else { (&lf.h, true) };
            eval_modular(f, &need(two)?).map_err(usage)?
        }
        name => {
            let eh = eh_functions(&set);
            let f = eh.get(name).ok_or_else(|| usage(format!("unknown function `{name}`")))?;
            let two = matches!(name, "H_EH" | "L" | "M" | "P" | "Q");
            eval_modular(f, &need(two)?).map_err(usage)?
        }
    };
    let value_json = json!({ "dim": dim, "function": function, "s": s, "t": t, "value": value, "limit": limit });
    let text = format!(
        "{function}^({dim})({}) = {value:.17e}{}\n",
        [s, t].iter().flatten().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
        if limit { "  (limit)" } else { "" }
    );
    Ok((text, value_json))
}

fn table(dims: &[u32]) -> Outcome {
    let mut rows = Vec::new();
    let mut text = String::new();
    for &m in dims {
        let set = extract_dimension(m).map_err(curvature_err)?;
        let _ = writeln!(text, "m = {m}");
        let _ = writeln!(text, "  K = {}", set.k_delta.pretty());
        let _ = writeln!(text, "  H = {}", set.h_delta.pretty());
        rows.push(json!({
            "dim": m,
            "K": set.k_delta.pretty(),
            "H": set.h_delta.pretty(),
            "K_terms": set.k_delta.to_string(),
            "H_terms": set.h_delta.to_string(),
        }));
    }
    Ok((text, json!({ "table": rows })))
}

fn dump_b2() -> Outcome {
    let parts = symcalc::resolvent_b2_parts().map_err(usage)?;
    let mut text = String::new();
    let mut groups = Vec::new();
    for (name, sum) in &parts {
        let _ = writeln!(text, "{name}: {} terms", sum.len());
        for t in sum.terms() {
            let _ = writeln!(text, "  {t}");
        }
        groups.push(json!({ "part": name, "terms": sum.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>() }));
    }
    let total: usize = parts.iter().map(|(_, s)| s.len()).sum();
    let b2 = symcalc::resolvent_b2().map_err(usage)?;
    let _ = writeln!(text, "{total} terms in parts, {} after collection", b2.len());
    Ok((text, json!({ "parts": groups, "collected": b2.len() })))
}

fn dump_spectral() -> Outcome {
    let ms = curvature::masters().map_err(curvature_err)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for f in &ms.spectral {
        let _ = writeln!(text, "{f}");
        rows.push(json!({
            "kind": format!("{:?}", f.kind),
            "basis": f.basis.to_string(),
            "prefactor": f.prefactor.to_string(),
        }));
    }
    let _ = writeln!(text, "F = {}", ms.f.pretty());
    let _ = writeln!(text, "G = {}", ms.g.pretty());
    Ok((text, json!({ "spectral": rows, "F": ms.f.pretty(), "G": ms.g.pretty() })))
}
