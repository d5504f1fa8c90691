//! Command-line front end: `compute`, `reduce`, `verify` and `nodes`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::functions::{parse_integrand, Integrand};
use crate::inequalities::{round15, Evaluator, TheoremId};
use crate::operator::{
    katugampola_integral, power_closed_form, reduce, ReductionKind, ReductionLabel,
};
use crate::quadrature::{jacobi_rule, QuadratureConfig};
use crate::special::{EvalPoint, FractionalParams};
use crate::sweep::{evaluate_case, reports_to_json, run_sweep, Case, Summary, SweepSpec};

/// Success.
pub const EXIT_OK: i32 = 0;
/// Bad arguments, unreadable input or a failed evaluation.
pub const EXIT_USAGE: i32 = 1;
/// The computation ran but did not pass: non-convergence, an oracle
/// mismatch or a violated inequality.
pub const EXIT_CHECK: i32 = 2;

/// Agreement required between `reduce` and the power-function closed form.
pub const REDUCE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "fracineq",
    version,
    about = "Generalized Katugampola fractional integrals and Chebyshev-type inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the operator on one function at one point.
    Compute(ComputeArgs),
    /// Evaluate a named special case and compare with the power closed form.
    Reduce(ReduceArgs),
    /// Check inequalities over a sweep or at a single point.
    Verify(VerifyArgs),
    /// Print a Gauss-Jacobi rule on (0, 1) as CSV.
    Nodes(NodesArgs),
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Relative tolerance of successive doubling.
    #[arg(long, env = "FRACINEQ_QUAD_TOL", default_value_t = 1e-10)]
    quad_tol: f64,
    /// Largest points-per-panel count.
    #[arg(long, default_value_t = 4096)]
    quad_max: usize,
}

impl QuadArgs {
    fn config(&self) -> crate::Result<QuadratureConfig> {
        let cfg = QuadratureConfig {
            n_max: self.quad_max,
            ..QuadratureConfig::default()
        }
        .with_rel_tol(self.quad_tol);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta: f64,
    /// Evaluation point, x > 0.
    #[arg(long)]
    x: f64,
}

impl ParamArgs {
    fn params(&self) -> crate::Result<FractionalParams> {
        FractionalParams::new(self.alpha, self.beta, self.rho, self.k, self.eta)
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Function spec such as `pow:1.5`, `exp:2` or `poly:1,0,3`.
    #[arg(long)]
    function: String,
    /// Also print points per panel, error estimate and convergence.
    #[arg(long)]
    verbose: bool,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// One of riemann-liouville, katugampola, erdelyi-kober, liouville-a0.
    #[arg(long)]
    kind: ReductionLabel,
    #[arg(long)]
    alpha: f64,
    /// Used by katugampola and erdelyi-kober.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Used by erdelyi-kober.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta: f64,
    #[arg(long)]
    x: f64,
    /// Function spec; defaults to `pow:<sigma>` when `--sigma-oracle` is set.
    #[arg(long)]
    function: Option<String>,
    /// Compare with the closed form for `τ^sigma`.
    #[arg(long, allow_negative_numbers = true)]
    sigma_oracle: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Sweep file (JSON).
    #[arg(long, conflicts_with_all = ["standard", "theorem"])]
    sweep: Option<PathBuf>,
    /// Use the sweep shipped with the crate.
    #[arg(long, conflicts_with = "theorem")]
    standard: bool,
    /// Write reports here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Single-point check of one statement, e.g. `T3.1` or `T5.2`.
    #[arg(long, requires = "alpha")]
    theorem: Option<TheoremId>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta: f64,
    /// Second order; defaults to alpha.
    #[arg(long)]
    delta: Option<f64>,
    /// Second exponent; defaults to beta.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    #[arg(long, default_value = "pow:1")]
    phi: String,
    #[arg(long, default_value = "pow:1")]
    psi: String,
    /// Weight functions in order; missing ones default to `const:1`.
    #[arg(long = "weight")]
    weights: Vec<String>,
    /// Hölder exponent s > 1 of the derivative norms.
    #[arg(long, default_value_t = 2.0)]
    holder_s: f64,
    /// Upper end of the norm interval; defaults to x.
    #[arg(long)]
    t_norm: Option<f64>,
    /// Verdict tolerance coefficient.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
struct NodesArgs {
    /// Exponent of (1-t)^(alpha-1).
    #[arg(long)]
    alpha: f64,
    /// Exponent of t^eta.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta: f64,
    /// Number of nodes, at least 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
}

/// Formats a value at 15 significant digits in its shortest form.
pub fn fmt15(v: f64) -> String {
    let r = round15(v);
    if r == 0.0 || (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(&a, out, err),
        Command::Reduce(a) => reduce_cmd(&a, out),
        Command::Verify(a) => verify(&a, out, err),
        Command::Nodes(a) => nodes(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn compute(a: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = a.quad.config()?;
    let p = a.params.params()?;
    let x = EvalPoint::new(a.params.x)?;
    let f = parse_integrand(&a.function)?;
    let r = katugampola_integral(&p, &f, x, &cfg)?;
    writeln!(out, "{}", fmt15(r.value))?;
    if a.verbose {
        writeln!(out, "n_used: {}", r.n_used)?;
        writeln!(out, "est_err: {:e}", r.est_err)?;
        writeln!(out, "converged: {}", r.converged)?;
    }
    if r.converged {
        Ok(EXIT_OK)
    } else {
        writeln!(
            err,
            "warning: quadrature did not reach rel tol {:e} (estimated error {:e})",
            cfg.rel_tol, r.est_err
        )?;
        Ok(EXIT_CHECK)
    }
}

fn reduce_cmd(a: &ReduceArgs, out: &mut dyn Write) -> Outcome {
    let cfg = a.quad.config()?;
    let kind = match a.kind {
        ReductionLabel::RiemannLiouville => ReductionKind::RiemannLiouville,
        ReductionLabel::Katugampola => ReductionKind::Katugampola { rho: a.rho },
        ReductionLabel::ErdelyiKober => ReductionKind::ErdelyiKober {
            rho: a.rho,
            eta: a.eta,
        },
        ReductionLabel::LiouvilleA0 => ReductionKind::LiouvilleA0,
    };
    let p = reduce(kind, a.alpha)?;
    let x = EvalPoint::new(a.x)?;
    let f: Integrand = match (&a.function, a.sigma_oracle) {
        (Some(spec), _) => parse_integrand(spec)?,
        (None, Some(s)) => parse_integrand(&format!("pow:{s}"))?,
        (None, None) => return Err(Failure("give --function or --sigma-oracle".into())),
    };
    let r = katugampola_integral(&p, &f, x, &cfg)?;
    writeln!(out, "kind: {}", kind.name())?;
    writeln!(
        out,
        "params: alpha={} beta={} rho={} k={} eta={}",
        fmt15(p.alpha()),
        fmt15(p.beta()),
        fmt15(p.rho()),
        fmt15(p.k()),
        fmt15(p.eta())
    )?;
    writeln!(out, "function: {}", f.spec())?;
    writeln!(out, "value: {}", fmt15(r.value))?;
    writeln!(out, "converged: {}", r.converged)?;
    let Some(sigma) = a.sigma_oracle else {
        return Ok(if r.converged { EXIT_OK } else { EXIT_CHECK });
    };
    let exact = power_closed_form(&p, sigma, x)?;
    let rel = (r.value - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
    writeln!(out, "closed_form: {}", fmt15(exact))?;
    writeln!(out, "rel_error: {rel:e}")?;
    Ok(if rel <= REDUCE_REL_TOL {
        EXIT_OK
    } else {
        EXIT_CHECK
    })
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = a.quad.config()?;
    if let Some(t) = a.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure(format!("--tol must be positive, got {t}")));
        }
    }
    let reports = if let Some(id) = a.theorem {
        single_shot(a, id, cfg)?
    } else {
        let mut spec = match (&a.sweep, a.standard) {
            (Some(path), _) => SweepSpec::from_path(path)?,
            (None, true) => SweepSpec::standard(),
            (None, false) => return Err(Failure("give --sweep, --standard or --theorem".into())),
        };
        if let Some(t) = a.tol {
            spec.tol_override = Some(t);
        }
        run_sweep(&spec, cfg)
    };
    let json = reports_to_json(&reports);
    let summary = Summary::of(&reports);
    let line = format!(
        "holds: {}, violated: {}, indeterminate: {}, not converged: {}",
        summary.holds, summary.violated, summary.indeterminate, summary.not_converged
    );
    match &a.out {
        Some(path) => {
            std::fs::write(path, json)
                .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
            writeln!(out, "{line}")?;
        }
        None => {
            write!(out, "{json}")?;
            writeln!(err, "{line}")?;
        }
    }
    Ok(if summary.violated == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK
    })
}

fn single_shot(
    a: &VerifyArgs,
    id: TheoremId,
    cfg: QuadratureConfig,
) -> std::result::Result<Vec<crate::inequalities::InequalityReport>, Failure> {
    let phi = parse_integrand(&a.phi)?;
    let psi = parse_integrand(&a.psi)?;
    if a.weights.len() > id.weight_arity() {
        return Err(Failure(format!(
            "{id} takes {} weight(s), got {}",
            id.weight_arity(),
            a.weights.len()
        )));
    }
    let mut weights = a
        .weights
        .iter()
        .map(|s| parse_integrand(s))
        .collect::<crate::Result<Vec<_>>>()?;
    weights.resize_with(id.weight_arity(), || Integrand::constant(1.0));
    let mut ev = Evaluator::new(cfg);
    if let Some(t) = a.tol {
        ev = ev.with_tol(t);
    }
    let alpha = a.alpha.unwrap_or(1.0);
    let case = Case {
        id,
        alpha,
        beta: a.beta,
        rho: a.rho,
        k: a.k,
        eta: a.eta,
        delta: a.delta.unwrap_or(alpha),
        lambda: a.lambda.unwrap_or(a.beta),
        x: a.x,
        phi: &phi,
        psi: &psi,
        weights: weights.iter().collect(),
        holder_s: a.holder_s,
        t_norm: a.t_norm.unwrap_or(a.x),
    };
    Ok(vec![evaluate_case(&mut ev, &case)])
}

fn nodes(a: &NodesArgs, out: &mut dyn Write) -> Outcome {
    let rule = jacobi_rule(a.alpha, a.eta, a.n as usize)?;
    writeln!(out, "node,weight")?;
    for (t, w) in rule.iter() {
        writeln!(out, "{t:.16e},{w:.16e}")?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("fracineq").chain(args.iter().copied()),
            &mut o,
            &mut e,
        );
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn formats_fifteen_digits() {
        assert_eq!(fmt15(0.5), "0.5");
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(2.0e-300 / 3.0), "6.66666666666667e-301");
        assert_eq!(fmt15(0.0), "0");
    }

    #[test]
    fn compute_power_function() {
        let (code, out, _) = call(&["compute", "--alpha", "1", "--x", "1", "--function", "pow:1"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.trim(), "0.5");
        let (code, out, _) = call(&[
            "compute",
            "--alpha",
            "0.5",
            "--beta",
            "-1",
            "--rho",
            "2",
            "--k",
            "-0.5",
            "--eta",
            "-0.5",
            "--x",
            "2",
            "--function",
            "exp:1",
            "--verbose",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("converged: true"));
    }

    #[test]
    fn compute_flags_non_convergence() {
        let (code, out, err) = call(&[
            "compute",
            "--alpha",
            "0.5",
            "--x",
            "1",
            "--function",
            "pow:0.3",
            "--quad-max",
            "16",
            "--quad-tol",
            "1e-15",
        ]);
        assert_eq!(code, EXIT_CHECK, "{out}{err}");
        assert!(!out.trim().is_empty());
        assert!(err.contains("warning"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["compute", "--alpha", "1", "--x", "1"]).0, EXIT_USAGE);
        assert_eq!(
            call(&[
                "compute",
                "--alpha",
                "-1",
                "--x",
                "1",
                "--function",
                "pow:1"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(
            call(&["compute", "--alpha", "1", "--x", "1", "--function", "sin:1"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["nodes", "--alpha", "1", "--n", "1"]).0, EXIT_USAGE);
        let (code, _, err) = call(&["reduce", "--kind", "hadamard", "--alpha", "1", "--x", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("riemann-liouville"));
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn reduce_matches_closed_form() {
        for kind in ReductionKind::SUPPORTED {
            let (code, out, _) = call(&[
                "reduce",
                "--kind",
                kind,
                "--alpha",
                "1.5",
                "--rho",
                "2",
                "--eta",
                "0.5",
                "--x",
                "1.5",
                "--sigma-oracle",
                "2",
            ]);
            assert_eq!(code, EXIT_OK, "{kind}: {out}");
            assert!(out.contains("rel_error"));
        }
        let (code, _, _) = call(&[
            "reduce",
            "--kind",
            "katugampola",
            "--alpha",
            "1",
            "--x",
            "1",
            "--function",
            "pow:3",
            "--sigma-oracle",
            "2",
        ]);
        assert_eq!(code, EXIT_CHECK);
    }

    #[test]
    fn nodes_csv() {
        let (code, out, _) = call(&["nodes", "--alpha", "1", "--eta", "0", "--n", "2"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "node,weight");
        assert_eq!(lines.len(), 3);
        let w: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert!((w - 0.5).abs() < 1e-15);
    }

    #[test]
    fn verify_single_shot() {
        let (code, out, err) = call(&["verify", "--theorem", "T3.1", "--alpha", "1", "--x", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"verdict\":\"holds\""));
        assert!(err.contains("violated: 0"));
        let (code, out, _) = call(&[
            "verify",
            "--theorem",
            "T4.2",
            "--alpha",
            "1",
            "--weight",
            "pow:1",
            "--phi",
            "pow:1",
            "--psi",
            "exp:1",
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        let (code, _, _) = call(&[
            "verify",
            "--theorem",
            "T3.1",
            "--alpha",
            "1",
            "--weight",
            "pow:1",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(call(&["verify"]).0, EXIT_USAGE);
    }
}
