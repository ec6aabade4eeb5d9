//! Command-line front end. Every check in the library is reachable from one
//! subcommand; reports are JSON (with `"schema": 1`) or CSV.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::basis::{casimir_expression, cocycle_check, lambda_reconstruction, product_law_check, CasimirVariant};
use crate::bridge::{
    clock_shift, independence_evidence, index_box, intertwine_check, phi_inverse_roundtrip, phi_relation_residuals,
    spectral_check, BridgeReport,
};
use crate::coeff::{Domain, ExactDomain, FloatDomain};
use crate::error::{Error, Result};
use crate::module::{
    curvature_check, leibniz_residual, relation_checks, sample_points, DerivationVariant, ModuleCheck, ModuleElement,
    ModuleParams,
};
use crate::params::{derive_params, DeformParams, ParamSummary, RealParam};
use crate::parse::{format_poly, parse_expression, Spell};
use crate::poisson::{poisson_bracket, CommutativePoly3};
use crate::reps::{
    casimir_residuals, lambda_reconstruct, relation_residuals_with, scaling_sphere, scaling_torus, sphere_rep,
    torus_rep, ScalingTable,
};
use crate::rewrite::ReductionSystem;
use crate::word::Letter;

#[derive(Debug, Parser)]
#[command(name = "nctorus", version, about = "Checks for the deformed noncommutative torus")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Deformation parameter; integer, `p/q` or decimal.
    #[arg(long, global = true, default_value = "2")]
    pub mu: RealParam,
    /// Rotation angle; `p/N` keeps it exact.
    #[arg(long, global = true, default_value = "1/5")]
    pub theta: RealParam,
    #[arg(long, global = true, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,
    /// Overrides the default tolerance of float comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of an expression in canonical syntax.
    NormalForm {
        #[arg(long)]
        expr: String,
    },
    /// Resolve every overlap ambiguity of the reduction system.
    Confluence,
    /// Structure constants of the T and S bases and the phase cocycle.
    BasisProduct {
        #[arg(long, default_value_t = 3)]
        range: i64,
    },
    /// Reduce the Casimir and the Lambda reconstruction to normal form.
    Casimir,
    /// Finite-dimensional representations.
    Rep {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: i64,
        /// Report relation residuals instead of the matrices.
        #[arg(long)]
        check: bool,
    },
    /// Scaling limits along a ladder of eps values.
    Scaling {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long = "eps-ladder", value_delimiter = ',', default_value = "0.1,0.01,0.001")]
        eps_ladder: Vec<f64>,
    },
    /// The embedding into the rotation algebra at theta = p/N.
    Phi {
        #[arg(value_enum)]
        check: PhiCheck,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: i64,
        /// Index box half-width for `independence`: `m1` in `[-r, r]`, `m2` in `[0, 2]`.
        #[arg(long, default_value_t = 2)]
        range: i64,
    },
    /// Minimum eigenvalue of `R` over unit-circle phases against its lower bound.
    Spectrum {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 64)]
        phases: usize,
    },
    /// The projective module, its connection and derivations.
    Module {
        #[arg(value_enum)]
        check: ModuleCheckArg,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
    /// Poisson brackets of the classical surface, compared exactly.
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Torus,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhiCheck {
    Residuals,
    Intertwine,
    Roundtrip,
    Independence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModuleCheckArg {
    Relations,
    Leibniz,
    Curvature,
}

/// A finished report and whether every requested check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub body: String,
}

/// Parses `argv`, runs the subcommand and writes the report. Returns the
/// process exit code: 0 pass, 1 failed check, 2 usage or configuration error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => match emit(&cli.config, &out.body) {
            Ok(()) => i32::from(!out.pass),
            Err(e) => {
                eprintln!("error: cannot write report: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(cfg: &RunConfig, body: &str) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Runs the parsed command without touching stdout.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    match &cli.command {
        Command::NormalForm { expr } => with_backend(cfg, |d| normal_form(cfg, d, expr), |d| normal_form(cfg, d, expr)),
        Command::Confluence => with_backend(cfg, |d| confluence(cfg, d), |d| confluence(cfg, d)),
        Command::BasisProduct { range } => {
            with_backend(cfg, |d| basis_product(cfg, d, *range), |d| basis_product(cfg, d, *range))
        }
        Command::Casimir => with_backend(cfg, |d| casimir(cfg, d), |d| casimir(cfg, d)),
        Command::Rep { family, n, p, check } => rep(cfg, *family, *n, *p, *check),
        Command::Scaling { family, n, p, eps_ladder } => scaling(cfg, *family, *n, *p, eps_ladder),
        Command::Phi { check, n, p, range } => phi(cfg, *check, *n, *p, *range),
        Command::Spectrum { n, p, phases } => spectrum(cfg, *n, *p, *phases),
        Command::Module { check, m, n } => module(cfg, *check, *m, *n),
        Command::Poisson => poisson(cfg),
    }
}

fn params(cfg: &RunConfig) -> Result<DeformParams> {
    derive_params(cfg.mu, cfg.theta)
}

/// `theta = p/N` for the subcommands that build clock-shift or torus matrices.
fn lattice_params(cfg: &RunConfig, n: usize, p: i64) -> Result<DeformParams> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    derive_params(cfg.mu, (p, n as i64))
}

fn with_backend(
    cfg: &RunConfig,
    exact: impl FnOnce(ExactDomain) -> Result<Outcome>,
    float: impl FnOnce(FloatDomain) -> Result<Outcome>,
) -> Result<Outcome> {
    let p = params(cfg)?;
    match cfg.backend {
        Backend::Exact => exact(ExactDomain::new(&p)?),
        Backend::Float => float(match cfg.tol {
            Some(t) => FloatDomain::with_tolerance(&p, t),
            None => FloatDomain::new(&p),
        }),
    }
}

fn backend_name(cfg: &RunConfig) -> &'static str {
    match cfg.backend {
        Backend::Exact => "exact",
        Backend::Float => "float",
    }
}

/// Wraps a report with the schema version and parameters.
fn json_report(cfg: &RunConfig, command: &str, pass: bool, report: impl Serialize) -> Result<Outcome> {
    let params = params(cfg).ok().map(|p| ParamSummary::from(&p));
    let value = json!({
        "schema": 1,
        "command": command,
        "backend": backend_name(cfg),
        "seed": cfg.seed,
        "params": params,
        "pass": pass,
        "report": report,
    });
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&value).expect("reports serialize") + "\n",
        Format::Csv => flatten_csv(&value),
    };
    Ok(Outcome { pass, body })
}

/// `path,value` lines for every scalar leaf.
fn flatten_csv(v: &Value) -> String {
    fn walk(v: &Value, path: &str, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    walk(x, &join(path, k), out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(x, &join(path, &i.to_string()), out);
                }
            }
            Value::String(s) => out.push_str(&format!("{path},\"{}\"\n", s.replace('"', "\"\""))),
            other => out.push_str(&format!("{path},{other}\n")),
        }
    }
    fn join(a: &str, b: &str) -> String {
        if a.is_empty() {
            b.to_string()
        } else {
            format!("{a}.{b}")
        }
    }
    let mut out = String::from("key,value\n");
    walk(v, "", &mut out);
    out
}

fn normal_form<D: Domain + Spell>(cfg: &RunConfig, d: D, expr: &str) -> Result<Outcome> {
    let p = parse_expression(expr, &d)?;
    let sys = ReductionSystem::new(d);
    let nf = sys.normal_form(&p)?;
    let text = format_poly(&nf, sys.domain());
    match cfg.format {
        None => Ok(Outcome { pass: true, body: text + "\n" }),
        Some(_) => json_report(cfg, "normal-form", true, json!({ "input": expr, "normal_form": text })),
    }
}

fn confluence<D: Domain + Spell>(cfg: &RunConfig, d: D) -> Result<Outcome> {
    let report = ReductionSystem::new(d).check_confluence()?;
    json_report(cfg, "confluence", report.pass, &report)
}

fn basis_product<D: Domain>(cfg: &RunConfig, d: D, range: i64) -> Result<Outcome> {
    let cocycle = cocycle_check(&d, range);
    let sys = ReductionSystem::new(d);
    let law = product_law_check(&sys, range)?;
    let pass = law.pass && cocycle;
    json_report(cfg, "basis-product", pass, json!({ "product_law": law, "cocycle": cocycle }))
}

fn casimir<D: Domain + Spell>(cfg: &RunConfig, d: D) -> Result<Outcome> {
    let sys = ReductionSystem::new(d);
    let d = sys.domain();
    let one = crate::poly::NcPoly::constant(d.one());
    let corrected = sys.normal_form(&casimir_expression(d, CasimirVariant::Corrected)?)?;
    let printed = sys.normal_form(&casimir_expression(d, CasimirVariant::Printed)?)?;
    let lambda = sys.normal_form(&lambda_reconstruction(d)?)?;
    let l = crate::poly::NcPoly::letter(d, Letter::L);
    let tol = d.tolerance();
    let corrected_ok = corrected.max_abs_diff(&one) <= tol;
    let lambda_ok = lambda.max_abs_diff(&l) <= tol;
    // the 1/(4 hbar^4) normalization is expected not to reduce to 1
    let printed_differs = printed.max_abs_diff(&one) > tol;
    let pass = corrected_ok && lambda_ok && printed_differs;
    json_report(
        cfg,
        "casimir",
        pass,
        json!({
            "casimir": format_poly(&corrected, d),
            "casimir_is_one": corrected_ok,
            "printed_normalization": format_poly(&printed, d),
            "printed_normalization_is_one": !printed_differs,
            "lambda_reconstruction": format_poly(&lambda, d),
            "lambda_reconstruction_is_L": lambda_ok,
        }),
    )
}

fn matrix_json(m: &crate::linalg::CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    json!(rows)
}

fn rep(cfg: &RunConfig, family: FamilyArg, n: usize, p: i64, check: bool) -> Result<Outcome> {
    let rep = match family {
        FamilyArg::Torus => {
            lattice_params(cfg, n, p)?.require_admissible()?;
            torus_rep(n, p, cfg.mu.value())?
        }
        FamilyArg::Sphere => sphere_rep(n, cfg.theta.value())?,
    };
    let name = "rep";
    if !check {
        return json_report(
            cfg,
            name,
            true,
            json!({
                "spec": rep.spec,
                "W": matrix_json(&rep.w),
                "L": rep.lambda.as_ref().map(matrix_json),
            }),
        );
    }
    let tol = cfg.tol.unwrap_or(1e-12);
    let relations = relation_residuals_with(&rep, tol);
    let mut pass = relations.pass;
    let mut report = json!({ "spec": rep.spec, "relations": relations });
    if family == FamilyArg::Torus {
        let cas = casimir_residuals(&rep);
        let (_, lam) = lambda_reconstruct(&rep)?;
        pass &= cas.pass && lam < tol;
        report["casimir"] = json!(cas);
        report["lambda_reconstruction_residual"] = json!(lam);
    }
    json_report(cfg, name, pass, report)
}

fn scaling(cfg: &RunConfig, family: FamilyArg, n: usize, p: i64, ladder: &[f64]) -> Result<Outcome> {
    let table: ScalingTable = match family {
        FamilyArg::Torus => scaling_torus(n, p, ladder)?,
        FamilyArg::Sphere => scaling_sphere(n, cfg.theta.value(), ladder)?,
    };
    let in_order = (1.9..=2.1).contains(&table.order);
    let pass = match family {
        FamilyArg::Torus => {
            in_order
                && table.summary.iter().all(|s| s.max_abs_err <= s.bound_or_deviation)
                && table.lambda_drift.unwrap_or(0.0) < 1e-12
        }
        FamilyArg::Sphere => in_order,
    };
    if cfg.format == Some(Format::Csv) {
        return Ok(Outcome { pass, body: table.to_csv() });
    }
    json_report(cfg, "scaling", pass, &table)
}

fn bridge_outcome(cfg: &RunConfig, r: BridgeReport) -> Result<Outcome> {
    json_report(cfg, "phi", r.pass, &r)
}

fn phi(cfg: &RunConfig, check: PhiCheck, n: usize, p: i64, range: i64) -> Result<Outcome> {
    let params = lattice_params(cfg, n, p)?;
    let pair = clock_shift(n, p)?;
    match check {
        PhiCheck::Residuals => {
            let r = phi_relation_residuals(&pair, &params)?;
            json_report(cfg, "phi", r.pass, &r)
        }
        PhiCheck::Intertwine => bridge_outcome(cfg, intertwine_check(&pair, &params)?),
        PhiCheck::Roundtrip => bridge_outcome(cfg, phi_inverse_roundtrip(&pair, &params)?),
        PhiCheck::Independence => {
            let d = FloatDomain::new(&params);
            bridge_outcome(cfg, independence_evidence(&d, &pair, &index_box(-range..=range, 0..=2))?)
        }
    }
}

fn spectrum(cfg: &RunConfig, n: usize, p: i64, phases: usize) -> Result<Outcome> {
    let params = lattice_params(cfg, n, p)?;
    let pair = clock_shift(n, p)?;
    match spectral_check(&params, &pair, phases) {
        Ok(r) => json_report(cfg, "spectrum", r.pass, &r),
        Err(Error::SpectralViolation { phase, min_eig, bound }) => json_report(
            cfg,
            "spectrum",
            false,
            json!({ "violation": { "phase": phase, "min_eigenvalue": min_eig, "bound": bound } }),
        ),
        Err(e) => Err(e),
    }
}

const MODULE_POINTS: usize = 200;

fn module(cfg: &RunConfig, check: ModuleCheckArg, m: i64, n: i64) -> Result<Outcome> {
    let mp = ModuleParams::new(m, n, params(cfg)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let phi = ModuleElement::random_seed(&mp, &mut rng);
    let points = sample_points(n, MODULE_POINTS, cfg.seed.wrapping_add(1));
    let checks: Vec<ModuleCheck> = match check {
        ModuleCheckArg::Relations => relation_checks(&phi, &points)?,
        ModuleCheckArg::Leibniz => {
            let mut out = Vec::new();
            for a in Letter::TORUS {
                for j in [1, 2] {
                    out.push(leibniz_residual(&phi, a, j, DerivationVariant::Corrected, &points)?);
                }
            }
            out
        }
        ModuleCheckArg::Curvature => {
            let r = curvature_check(&phi, &points)?;
            return json_report(cfg, "module", r.pass, &r);
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    if cfg.format == Some(Format::Csv) {
        let mut body = String::from("check,x,k,residual\n");
        for c in &checks {
            for s in &c.samples {
                body.push_str(&format!("\"{}\",{},{},{}\n", c.name, s.x, s.k, s.residual));
            }
        }
        return Ok(Outcome { pass, body });
    }
    json_report(cfg, "module", pass, &checks)
}

fn poisson(cfg: &RunConfig) -> Result<Outcome> {
    type P = CommutativePoly3;
    let c = P::torus_sphere_level_set();
    let r = P::x().pow(2).add(&P::y().pow(2)).sub(&P::mu());
    let two_r = P::constant(2).mul(&r);
    let cases: [(&str, P, P, P); 6] = [
        ("{x,y} = z", P::x(), P::y(), P::z()),
        ("{y,z} = 2x(x^2+y^2-mu)", P::y(), P::z(), two_r.mul(&P::x())),
        ("{z,x} = 2y(x^2+y^2-mu)", P::z(), P::x(), two_r.mul(&P::y())),
        ("{C,x} = 0", c.clone(), P::x(), P::zero()),
        ("{C,y} = 0", c.clone(), P::y(), P::zero()),
        ("{C,z} = 0", c.clone(), P::z(), P::zero()),
    ];
    let rows: Vec<Value> = cases
        .iter()
        .map(|(name, f, g, expect)| {
            let got = poisson_bracket(f, g, &c);
            json!({ "identity": name, "bracket": got.to_string(), "pass": got.sub(expect).is_zero() })
        })
        .collect();
    let pass = rows.iter().all(|r| r["pass"] == json!(true));
    json_report(cfg, "poisson", pass, json!({ "casimir": c.to_string(), "identities": rows }))
}
