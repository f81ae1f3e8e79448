use std::collections::BTreeMap;
use std::fs;

use sonin_core::convolution::{gfd_apply, gfd_regularized_apply, gfi, gfi_apply, Grid, SampledFunction, Spacing};
use sonin_core::series::{kernel_coeffs, solve_sonin_triangular, Generator, DEFAULT_ORDER as SERIES_ORDER};
use sonin_core::verify::{check_laplace_pair, check_sonin, reduction_lattice, LaplaceCheckConfig};
use sonin_core::{kernels::from_series_pair_with, PairSpec, SeriesEvalConfig, Side, SoninPair, VerificationReport};

use crate::output::{Artifact, Cell, Table};
use crate::{CliError, ConstructArgs, GridArgs, OperatorArgs, PairArgs};

pub struct Outcome {
    pub artifact: Artifact,
    pub passed: bool,
}

impl Outcome {
    fn ok(artifact: Artifact) -> Self {
        Self { artifact, passed: true }
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(CliError::usage(format!("--grid must be start:stop:count[:spacing], got {s:?}")));
    }
    let num = |name: &str, v: &str| {
        v.trim().parse::<f64>().map_err(|_| CliError::usage(format!("--grid {name} {v:?} is not a number")))
    };
    let start = num("start", parts[0])?;
    let stop = num("stop", parts[1])?;
    let count = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::usage(format!("--grid count {:?} is not a non-negative integer", parts[2])))?;
    let spacing = match parts.get(3) {
        Some(sp) => sp.parse::<Spacing>().map_err(|e| CliError::usage(format!("--grid spacing: {e}")))?,
        None => Spacing::Sqrt,
    };
    Ok(Grid::new(start, stop, count, spacing)?)
}

fn grid_points(args: &GridArgs) -> Result<Vec<f64>, CliError> {
    Ok(parse_grid(&args.grid)?.points().to_vec())
}

/// Parameter map from the individual flags, or the JSON spec when given.
pub fn pair_spec(args: &PairArgs) -> Result<PairSpec, CliError> {
    if let Some(spec) = &args.spec {
        if args.family.is_some() {
            return Err(CliError::usage("--spec and --family are mutually exclusive"));
        }
        let text = if spec.trim_start().starts_with('{') {
            spec.clone()
        } else {
            fs::read_to_string(spec).map_err(|e| CliError::usage(format!("cannot read --spec file {spec:?}: {e}")))?
        };
        return serde_json::from_str(&text).map_err(|e| CliError::usage(format!("invalid pair spec: {e}")));
    }
    let family = args.family.as_deref().ok_or_else(|| CliError::usage("either --family or --spec is required"))?;
    let flags = [
        ("alpha", args.alpha),
        ("alpha1", args.alpha1),
        ("alpha2", args.alpha2),
        ("beta", args.beta),
        ("gamma", args.gamma),
        ("gamma1", args.gamma1),
        ("gamma2", args.gamma2),
        ("lambda", args.lambda),
        ("lambda1", args.lambda1),
        ("lambda2", args.lambda2),
        ("rho", args.rho),
        ("order", args.terms.map(|t| t as f64)),
    ];
    let params: BTreeMap<String, f64> = flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect();
    Ok(PairSpec::from_params(family, &params)?)
}

fn build_pair(args: &PairArgs, cfg: &SeriesEvalConfig) -> Result<SoninPair, CliError> {
    Ok(pair_spec(args)?.build(cfg)?)
}

fn report_artifact(
    command: &'static str,
    spec: Option<&PairSpec>,
    report: &VerificationReport,
    axis: &'static str,
) -> Artifact {
    let mut table = Table::new("rows", &[axis, "residual"]);
    for (x, r) in report.points.iter().zip(&report.residuals) {
        table.push(vec![Cell::Num(*x), Cell::Num(*r)]);
    }
    let mut a = Artifact::new(command, table);
    if let Some(spec) = spec {
        a = a.with("family", Cell::Text(spec.family().to_string()));
    }
    a.with("check_name", Cell::Text(report.check_name.clone()))
        .with("max_abs_residual", Cell::Num(report.max_abs_residual))
        .with("tolerance", Cell::Num(report.tolerance))
        .with("passed", Cell::Bool(report.passed))
}

pub fn eval(pair: &PairArgs, grid: &GridArgs, cfg: &SeriesEvalConfig) -> Result<Outcome, CliError> {
    let p = build_pair(pair, cfg)?;
    let mut table = Table::new("rows", &["x", "kappa", "k"]);
    for x in grid_points(grid)? {
        table.push(vec![Cell::Num(x), Cell::Num(p.eval(Side::Kappa, x)?), Cell::Num(p.eval(Side::K, x)?)]);
    }
    let family = p.spec().map(|s| s.family().to_string()).unwrap_or_default();
    Ok(Outcome::ok(Artifact::new("eval", table).with("family", Cell::Text(family))))
}

pub fn pair_verify(
    pair: &PairArgs,
    grid: &GridArgs,
    order: usize,
    tol: f64,
    cfg: &SeriesEvalConfig,
) -> Result<Outcome, CliError> {
    let p = build_pair(pair, cfg)?;
    let report = check_sonin(&p, &grid_points(grid)?, order, tol)?;
    Ok(Outcome { passed: report.passed, artifact: report_artifact("pair-verify", p.spec(), &report, "x") })
}

pub fn laplace_verify(
    pair: &PairArgs,
    p_values: &[f64],
    tol: f64,
    cfg: &SeriesEvalConfig,
) -> Result<Outcome, CliError> {
    let p = build_pair(pair, cfg)?;
    let laplace = LaplaceCheckConfig::new(p_values.to_vec())?;
    let report = check_laplace_pair(&p, &laplace, tol)?;
    Ok(Outcome { passed: report.passed, artifact: report_artifact("laplace-verify", p.spec(), &report, "p") })
}

fn test_function(name: &str) -> Result<SampledFunction, CliError> {
    Ok(match name {
        "one" => SampledFunction::one(),
        "linear" => SampledFunction::linear(),
        "square" => SampledFunction::square(),
        "expneg" => SampledFunction::exp_neg(),
        path => read_samples(path)?,
    })
}

/// Two numeric columns (x, f(x)) separated by commas or whitespace; a
/// non-numeric first line is taken as a header, `#` starts a comment.
fn read_samples(path: &str) -> Result<SampledFunction, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::usage(format!("--f {path:?} is neither one|linear|square|expneg nor a readable file: {e}"))
    })?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|s| s.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => {
                xs.push(v[0]);
                ys.push(v[1]);
            }
            None if xs.is_empty() && i == 0 => continue,
            _ => return Err(CliError::usage(format!("{path}:{}: expected two numbers per line, got {line:?}", i + 1))),
        }
    }
    Ok(SampledFunction::from_samples(xs, ys)?)
}

pub fn gfi_command(
    pair: &PairArgs,
    op: &OperatorArgs,
    order: usize,
    cfg: &SeriesEvalConfig,
) -> Result<Outcome, CliError> {
    let p = build_pair(pair, cfg)?;
    let f = test_function(&op.f)?;
    let mut table = Table::new("rows", &["x", "value"]);
    for x in grid_points(&op.grid)? {
        table.push(vec![Cell::Num(x), Cell::Num(gfi_apply(&p, &f, x, order)?)]);
    }
    Ok(Outcome::ok(Artifact::new("gfi", table).with("f", Cell::Text(op.f.clone()))))
}

/// GFD of f, or with `--of-gfi` the GFD of κ * f (which should return f).
pub fn gfd_command(
    pair: &PairArgs,
    op: &OperatorArgs,
    regularized: bool,
    of_gfi: bool,
    order: usize,
    cfg: &SeriesEvalConfig,
) -> Result<Outcome, CliError> {
    let p = build_pair(pair, cfg)?;
    let f = test_function(&op.f)?;
    let operand = if of_gfi { gfi(&p, &f, order)? } else { f };
    let mut table = Table::new("rows", &["x", "value"]);
    for x in grid_points(&op.grid)? {
        let v = if regularized {
            gfd_regularized_apply(&p, &operand, x, order)?
        } else {
            gfd_apply(&p, &operand, x, order)?
        };
        table.push(vec![Cell::Num(x), Cell::Num(v)]);
    }
    Ok(Outcome::ok(
        Artifact::new("gfd", table)
            .with("f", Cell::Text(op.f.clone()))
            .with("regularized", Cell::Bool(regularized))
            .with("of_gfi", Cell::Bool(of_gfi)),
    ))
}

const SYSTEM_TOL: f64 = 1e-10;

pub fn construct(
    args: &ConstructArgs,
    grid: &GridArgs,
    quad_order: usize,
    tol: f64,
    cfg: &SeriesEvalConfig,
) -> Result<Outcome, CliError> {
    let generator = match (args.generator.as_str(), args.gamma) {
        ("exp", None) => Generator::Exp,
        ("exp", Some(_)) => return Err(CliError::usage("--gamma is not a parameter of the exp generator")),
        ("binomial", Some(gamma)) => Generator::Binomial { gamma },
        ("exp-binomial", Some(gamma)) => Generator::ExpBinomial { gamma },
        ("binomial" | "exp-binomial", None) => {
            return Err(CliError::usage(format!("generator {} needs --gamma", args.generator)))
        }
        (other, _) => {
            return Err(CliError::usage(format!("unknown generator {other:?}; expected exp, binomial or exp-binomial")))
        }
    };
    let order = args.order.unwrap_or(SERIES_ORDER);
    let a = kernel_coeffs(&generator.coeffs(order), args.alpha, args.beta);
    let coeffs = solve_sonin_triangular(&a, args.alpha, args.beta)?;
    let residuals = coeffs.triangular_residuals();
    let mut table = Table::new("rows", &["n", "a", "b", "residual"]);
    for (n, r) in residuals.iter().enumerate() {
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Num(coeffs.a().coeffs()[n]),
            Cell::Num(coeffs.b().coeffs()[n]),
            Cell::Num(*r),
        ]);
    }
    let system_ok = residuals.iter().all(|&r| r <= SYSTEM_TOL);
    let pair = from_series_pair_with(&coeffs, args.lambda, cfg)?;
    let report = check_sonin(&pair, &grid_points(grid)?, quad_order, tol)?;
    let mut verify = Table::new("verification", &["x", "residual"]);
    for (x, r) in report.points.iter().zip(&report.residuals) {
        verify.push(vec![Cell::Num(*x), Cell::Num(*r)]);
    }
    let mut artifact = Artifact::new("construct", table)
        .with("generator", Cell::Text(generator.name().to_string()))
        .with("order", Cell::Int(order as i64))
        .with("radius", Cell::Num(coeffs.radius()))
        .with("system_tolerance", Cell::Num(SYSTEM_TOL))
        .with("max_abs_residual", Cell::Num(report.max_abs_residual))
        .with("tolerance", Cell::Num(tol))
        .with("passed", Cell::Bool(system_ok && report.passed));
    artifact.extra.push(verify);
    Ok(Outcome { passed: system_ok && report.passed, artifact })
}

pub fn reductions(draws: usize, seed: u64, tol: f64) -> Result<Outcome, CliError> {
    let report = reduction_lattice(draws, seed, tol)?;
    let mut table = Table::new("rows", &["draw", "relative_error"]);
    for (i, r) in report.residuals.iter().enumerate() {
        table.push(vec![Cell::Int(i as i64), Cell::Num(*r)]);
    }
    let artifact = Artifact::new("reductions", table)
        .with("seed", Cell::Int(seed as i64))
        .with("max_abs_residual", Cell::Num(report.max_abs_residual))
        .with("tolerance", Cell::Num(report.tolerance))
        .with("passed", Cell::Bool(report.passed));
    Ok(Outcome { passed: report.passed, artifact })
}
