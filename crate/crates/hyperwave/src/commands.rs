use std::collections::BTreeMap;
use std::time::Instant;

use hyperwave_core::chaos::{chaos_coefficient, chaos_moment_sum, mean_chaos2};
use hyperwave_core::dmt::{dmt_estimate, dmt_variance_report, PotentialSpec, UnitWave};
use hyperwave_core::greens::{laplace_fourier_residual, laplace_green_residual};
use hyperwave_core::intermit::{
    coefficient_growth_diagnostic, published_white_noise_constant, white_noise_constant_comparison, ExponentPrediction,
};
use hyperwave_core::mc::stream;
use hyperwave_core::pathmc::{mean_coeff_from_ilt, IltConfig};
use hyperwave_core::varopt::{
    functional_eval, gaussian_ansatz, solve_m, white_noise_m_closed, white_noise_sup_exact, GridFunction, GridSpec,
};
use hyperwave_core::wick::{hu_meyer, hu_meyer_residual, GaussianVectorSpec, SymmetricTensor};
use hyperwave_core::{CovarianceModel, Dimension, Point};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{
    AsymptoticsArgs, Command, Common, DmtArgs, GreenCheckArgs, HumeyerArgs, MomentArgs, MomentMethod, SolveMode,
    VarsolveArgs,
};
use crate::error::CliError;
use crate::record::{RunRecord, Table};
use crate::runner::RayonRunner;
use crate::table::read_potential_file;

/// Spatial-side tolerance in d = 1 and Fourier-side tolerance.
pub const GREEN_TOL_SPACE: f64 = 1e-8;
pub const GREEN_TOL_FOURIER: f64 = 1e-10;
pub const HUMEYER_TOL: f64 = 1e-10;

/// What a command produced. `passed` is false only for a failed check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: RunRecord,
    pub table: Option<Table>,
    pub passed: bool,
}

fn params<T: Serialize>(args: &T) -> Result<BTreeMap<String, Value>, CliError> {
    match serde_json::to_value(args)? {
        Value::Object(map) => Ok(map.into_iter().collect()),
        _ => Ok(BTreeMap::new()),
    }
}

fn parse_model(s: &str) -> Result<CovarianceModel, CliError> {
    Ok(s.parse::<CovarianceModel>()?)
}

fn dimension(d: usize) -> Result<Dimension, CliError> {
    Ok(Dimension::new(d)?)
}

pub fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::GreenCheck(a) => &a.common,
        Command::Moment(a) => &a.common,
        Command::Dmt(a) => &a.common,
        Command::Varsolve(a) => &a.common,
        Command::Asymptotics(a) => &a.common,
        Command::Humeyer(a) => &a.common,
    }
}

/// Runs a parsed command. The caller prints the record and writes the table.
pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut out = match cmd {
        Command::GreenCheck(a) => green_check(a)?,
        Command::Moment(a) => moment(a)?,
        Command::Dmt(a) => dmt(a)?,
        Command::Varsolve(a) => varsolve(a)?,
        Command::Asymptotics(a) => asymptotics(a)?,
        Command::Humeyer(a) => humeyer(a)?,
    };
    out.record.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(out)
}

pub fn green_check(a: &GreenCheckArgs) -> Result<Outcome, CliError> {
    let mut rec = RunRecord::new(
        "green-check",
        "∫₀^∞ e^{−λt} G(t,x) dt = ½ ∫₀^∞ e^{−λ²t/2} p_t(x) dt",
        a.common.seed,
    );
    rec.params = params(a)?;
    let (check, side, tol) = match a.k {
        Some(k) => (laplace_fourier_residual(a.lambda, k)?, "fourier", GREEN_TOL_FOURIER),
        None => {
            let dim = dimension(a.d)?;
            let side = if a.d == 1 { "space" } else { "fourier" };
            let tol = if a.d == 1 { GREEN_TOL_SPACE } else { GREEN_TOL_FOURIER };
            (laplace_green_residual(dim, a.lambda, &[a.x, 0.0, 0.0])?, side, tol)
        }
    };
    let passed = check.residual < tol;
    rec.result = json!({
        "lhs": check.lhs,
        "rhs": check.rhs,
        "exact": check.exact,
        "residual": check.residual,
        "side": side,
        "threshold": tol,
        "pass": passed,
    });
    Ok(Outcome {
        record: rec,
        table: None,
        passed,
    })
}

pub fn moment(a: &MomentArgs) -> Result<Outcome, CliError> {
    let model = parse_model(&a.model)?;
    let mut rec = RunRecord::new(
        "moment",
        "E u^p(t,x) = Σ_n t^{(4−α)n} Σ_{l₁+⋯+l_p=2n} E ∏ S_{l_j}(g_{l_j})",
        a.common.seed,
    );
    rec.params = params(a)?;
    let power = 4.0 - model.alpha();
    if let Some(order) = a.order {
        if a.p != 1 {
            return Err(CliError::Usage("--order is defined for p = 1".into()));
        }
        let (value, note) = match order {
            0 => (1.0, "u0 term"),
            l if l % 2 == 1 => (0.0, "odd chaos has mean zero"),
            2 => (mean_chaos2(&model, a.t)?, "quadrature"),
            l => return Err(CliError::Usage(format!("single-chaos mean of order {l} is not implemented"))),
        };
        rec.result = json!({ "order": order, "t": a.t, "value": value, "method": note, "exact": order % 2 == 1 || order == 0 });
        return Ok(Outcome {
            record: rec,
            table: None,
            passed: true,
        });
    }
    match a.method {
        MomentMethod::Quadrature => {
            let c = chaos_coefficient(&model, a.p, a.n)?;
            let at_t = chaos_moment_sum(&model, a.p, a.n, a.t)?;
            rec.result = json!({
                "p": a.p,
                "n": a.n,
                "coefficient": c.value,
                "t": a.t,
                "term_at_t": at_t,
                "scaling_factor": a.t.powf(power * a.n as f64),
                "method": c.method.name(),
                "error": c.error,
            });
        }
        MomentMethod::IltMc => {
            if a.p != 1 {
                return Err(CliError::Usage("ilt_mc estimates the mean (p = 1) only".into()));
            }
            let runner = RayonRunner::new(a.common.threads)?;
            let cfg = IltConfig {
                eps0: a.eps0,
                ..IltConfig::default()
            };
            let est = mean_coeff_from_ilt(&model, a.n as u32, a.reps, a.common.seed, &cfg, &runner)?;
            rec.stderr = Some(est.stderr);
            rec.reps = Some(a.reps);
            rec.result = json!({
                "p": a.p,
                "n": a.n,
                "coefficient": est.value,
                "stderr": est.stderr,
                "t": a.t,
                "term_at_t": est.value * a.t.powf(power * a.n as f64),
                "method": "ilt_mc",
                "reliable": est.reliable,
                "bias_note": est.bias_note,
            });
        }
    }
    Ok(Outcome {
        record: rec,
        table: None,
        passed: true,
    })
}

fn parse_point(s: &str, d: usize) -> Result<Point, CliError> {
    let coords: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad point '{s}'")))?;
    if coords.len() > d {
        return Err(CliError::Usage(format!("point '{s}' has more than {d} coordinates")));
    }
    let mut p = [0.0; 3];
    p[..coords.len()].copy_from_slice(&coords);
    Ok(p)
}

fn parse_potential(s: &str, d: usize) -> Result<PotentialSpec, CliError> {
    if let Some(path) = s.strip_prefix("table:") {
        let table = read_potential_file(path)?;
        if table.dim() != d {
            return Err(CliError::Usage(format!("table has {} position columns, expected {d}", table.dim())));
        }
        return Ok(PotentialSpec::Table(table));
    }
    Ok(PotentialSpec::parse(s)?)
}

pub fn dmt(a: &DmtArgs) -> Result<Outcome, CliError> {
    let dim = dimension(a.d)?;
    let x = parse_point(&a.x, a.d)?;
    let f = parse_potential(&a.potential, a.d)?;
    let runner = RayonRunner::new(a.common.threads)?;
    let mut rec = RunRecord::new(
        "dmt",
        "u(t,x) = E[e^t u₀(t−τ_N, X_{τ_N}) ∏_k (τ_k−τ_{k−1}) f(X_{τ_k})]",
        a.common.seed,
    );
    rec.params = params(a)?;
    rec.reps = Some(a.reps);
    let (est, table) = if a.report {
        if x != [0.0; 3] {
            return Err(CliError::Usage("--report evaluates at the origin".into()));
        }
        let rep = dmt_variance_report(dim, &f, a.t, a.reps, a.common.seed, &runner)?;
        let mut table = Table::new(&["jumps", "count", "contribution", "variance_share", "relative_stderr", "flagged"]);
        for s in &rep.strata {
            table.push([
                s.jumps.to_string(),
                s.count.to_string(),
                s.contribution.to_string(),
                s.variance_share.to_string(),
                s.relative_stderr.to_string(),
                s.flagged.to_string(),
            ]);
        }
        (rep.estimate, Some(table))
    } else {
        (dmt_estimate(dim, &f, &UnitWave, a.t, x, a.reps, a.common.seed, &runner)?, None)
    };
    let reference = match f {
        PotentialSpec::Const(c) if c >= 0.0 => Some((c.sqrt() * a.t).cosh()),
        PotentialSpec::Const(c) => Some(((-c).sqrt() * a.t).cos()),
        _ => None,
    };
    rec.stderr = Some(est.stderr);
    rec.result = json!({
        "value": est.value,
        "stderr": est.stderr,
        "reliable": est.reliable,
        "top_share": est.top_share,
        "reference": reference,
        "z_score": reference.map(|r| est.z_score(r)),
    });
    Ok(Outcome {
        record: rec,
        table,
        passed: true,
    })
}

fn grid_for(model: &CovarianceModel, l: Option<f64>, h: Option<f64>) -> Result<GridSpec, CliError> {
    let dim = model.dim();
    let base = GridSpec::default_for(dim)?;
    Ok(GridSpec::new(dim, l.unwrap_or(base.extent), h.unwrap_or(base.spacing))?)
}

fn maximizer_table(g: &GridFunction) -> Table {
    let d = g.spec().dim.get();
    let mut table = Table::new(if d == 1 { &["x", "g"] } else { &["x", "y", "g"] });
    for (x, v) in g.rows() {
        table.push(x.iter().map(|c| c.to_string()).chain([v.to_string()]));
    }
    table
}

pub fn varsolve(a: &VarsolveArgs) -> Result<Outcome, CliError> {
    let model = parse_model(&a.model)?;
    let spec = grid_for(&model, a.grid_l, a.grid_h)?;
    let mut rec = RunRecord::new(
        "varsolve",
        "M = sup_{‖g‖₂=1} (∫∫ γ(x−y) g²(x) g²(y) dx dy)^{1/2} − ∫ |∇g|²",
        a.common.seed,
    );
    rec.params = params(a)?;
    let white = matches!(model, CovarianceModel::WhiteNoise1D);
    let references = json!({
        "published_white_noise_m": if white { Some(white_noise_m_closed()) } else { None },
        "white_noise_sup_exact": if white { Some(white_noise_sup_exact()) } else { None },
    });
    let (result, table) = match a.mode {
        SolveMode::GaussianAnsatz => {
            let ga = gaussian_ansatz(&model)?;
            let g = GridFunction::gaussian(spec, ga.sigma)?;
            let on_grid = functional_eval(&model, &g)?;
            (
                json!({
                    "mode": "gaussian-ansatz",
                    "m_estimate": ga.value,
                    "sigma": ga.sigma,
                    "on_grid": on_grid,
                    "references": references,
                }),
                maximizer_table(&g),
            )
        }
        SolveMode::Full => {
            let runner = RayonRunner::new(a.common.threads)?;
            let s = solve_m(&model, spec, a.iterations, a.restarts, a.common.seed, &runner)?;
            (
                json!({
                    "mode": "full",
                    "m_estimate": s.m_estimate,
                    "restart_values": s.restart_values,
                    "converged": s.converged,
                    "steps": s.history.len() - 1,
                    "gaussian_ansatz": gaussian_ansatz(&model)?.value,
                    "references": references,
                }),
                maximizer_table(&s.maximizer),
            )
        }
    };
    rec.result = result;
    Ok(Outcome {
        record: rec,
        table: Some(table),
        passed: true,
    })
}

/// Model whose variational constant enters the exponents for a given `α`.
fn model_for_alpha(alpha: f64) -> Result<CovarianceModel, CliError> {
    if alpha == 1.0 {
        Ok(CovarianceModel::white())
    } else if alpha > 0.0 && alpha < 1.0 {
        Ok(CovarianceModel::riesz(Dimension::ONE, alpha, 1.0)?)
    } else {
        Err(CliError::Usage(
            "solving for M needs alpha = 1 (white noise) or 0 < alpha < 1 (Riesz, d = 1)".into(),
        ))
    }
}

pub fn asymptotics(a: &AsymptoticsArgs) -> Result<Outcome, CliError> {
    let mut rec = RunRecord::new(
        "asymptotics",
        "lim t^{−(4−α)/(3−α)} log E u^p = ((3−α)/2) p^{(4−α)/(3−α)} (2√M/(4−α))^{(4−α)/(3−α)}",
        a.common.seed,
    );
    rec.params = params(a)?;
    let (m, source) = match a.m.as_str() {
        "published" => {
            if a.alpha != 1.0 {
                return Err(CliError::Usage("the published constant is for alpha = 1".into()));
            }
            (white_noise_m_closed(), "published")
        }
        "solve" => {
            let model = model_for_alpha(a.alpha)?;
            let runner = RayonRunner::new(a.common.threads)?;
            let spec = GridSpec::default_for(Dimension::ONE)?;
            (solve_m(&model, spec, 2000, a.restarts, a.common.seed, &runner)?.m_estimate, "solved")
        }
        v => (
            v.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--m expects a number, 'published' or 'solve', got '{v}'")))?,
            "given",
        ),
    };
    let pred = ExponentPrediction::new(a.p, a.alpha, m, a.t)?;
    let mut result = json!({
        "m": m,
        "m_source": source,
        "p": a.p,
        "alpha": a.alpha,
        "t": a.t,
        "long_time_rate": pred.long_time_rate,
        "high_moment_rate": pred.high_moment_rate,
        "skorohod_rate": pred.skorohod_rate,
    });
    let mut table = None;
    if a.alpha == 1.0 {
        let cmp = white_noise_constant_comparison(m)?;
        let with_published = white_noise_constant_comparison(white_noise_m_closed())?;
        result["white_noise"] = json!({
            "published_constant": published_white_noise_constant(),
            "formula_with_m": cmp.formula,
            "formula_with_published_m": with_published.formula,
            "ratio": cmp.ratio,
            "discrepancy": cmp.discrepancy,
        });
        let c1 = chaos_coefficient(&CovarianceModel::white(), a.p as usize, 1)?;
        let diag = coefficient_growth_diagnostic(&[(1, c1.value)], a.p, a.alpha, m)?;
        let mut t = Table::new(&["n", "diagnostic", "target"]);
        for (n, v) in diag.rows {
            t.push([n.to_string(), v.to_string(), diag.target.to_string()]);
        }
        table = Some(t);
    }
    rec.result = result;
    Ok(Outcome {
        record: rec,
        table,
        passed: true,
    })
}

pub fn humeyer(a: &HumeyerArgs) -> Result<Outcome, CliError> {
    let mut rec = RunRecord::new(
        "humeyer",
        "S_n(f) = Σ_k n!/(2^k k! (n−2k)!) I_{n−2k}(Tr^k f)",
        a.common.seed,
    );
    rec.params = params(a)?;
    if a.triples == 0 {
        return Err(CliError::Usage("--triples must be at least 1".into()));
    }
    let runner = RayonRunner::new(a.common.threads)?;
    use hyperwave_core::Replicator;
    let residuals: Vec<Result<f64, CliError>> = runner.map(a.triples, |i| {
        let mut rng = stream(a.common.seed, i);
        let spec = GaussianVectorSpec::random(a.m, &mut rng);
        let f = SymmetricTensor::random(a.n, a.m, &mut rng);
        Ok(hu_meyer_residual(&f, &spec, a.samples, &mut rng)?)
    });
    let mut worst: f64 = 0.0;
    for r in residuals {
        worst = worst.max(r?);
    }
    let coefficients: Vec<f64> = hu_meyer(
        &SymmetricTensor::random(a.n, a.m, &mut stream(a.common.seed, u64::MAX)),
        &GaussianVectorSpec::identity(a.m),
    )?
    .iter()
    .map(|t| t.coefficient)
    .collect();
    let passed = worst < HUMEYER_TOL;
    let mut table = Table::new(&["k", "coefficient"]);
    for (k, c) in coefficients.iter().enumerate() {
        table.push([k.to_string(), c.to_string()]);
    }
    rec.result = json!({
        "n": a.n,
        "m": a.m,
        "coefficients": coefficients,
        "max_residual": worst,
        "threshold": HUMEYER_TOL,
        "pass": passed,
    });
    Ok(Outcome {
        record: rec,
        table: Some(table),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;
    use crate::cli::Cli;
    use crate::error::{EXIT_NUMERICAL, EXIT_USAGE};

    fn exec(args: &[&str]) -> Result<Outcome, CliError> {
        let argv = std::iter::once("hyperwave").chain(args.iter().copied());
        run(&Cli::try_parse_from(argv).unwrap().command)
    }

    fn result(args: &[&str]) -> Value {
        let out = exec(args).unwrap();
        assert!(out.passed);
        out.record.result
    }

    fn num(v: &Value, key: &str) -> f64 {
        v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
    }

    #[test]
    fn green_check_examples() {
        let r = result(&["green-check", "--d", "1", "--lambda", "1", "--x", "0"]);
        assert!((num(&r, "lhs") - 0.5).abs() < 1e-8);
        let r = result(&["green-check", "--d", "1", "--lambda", "2", "--x", "1"]);
        assert!((num(&r, "lhs") - (-2.0f64).exp() / 4.0).abs() < 1e-8);
        let r = result(&["green-check", "--lambda", "1", "--k", "1"]);
        assert!((num(&r, "lhs") - 0.5).abs() < 1e-10);
        for d in ["2", "3"] {
            assert_eq!(result(&["green-check", "--d", d, "--x", "0.4"])["side"], "fourier");
        }
    }

    #[test]
    fn moment_examples() {
        let r = result(&["moment", "--model", "white1d", "--p", "1", "--n", "1", "--method", "quadrature"]);
        assert!((num(&r, "coefficient") - 1.0 / 12.0).abs() < 1e-9);
        let r = result(&["moment", "--p", "1", "--n", "1", "--method", "ilt_mc", "--reps", "2000", "--seed", "5"]);
        let z = (num(&r, "coefficient") - 1.0 / 12.0).abs() / num(&r, "stderr");
        assert!(z < 3.0, "{r}");
        let r = result(&["moment", "--order", "5"]);
        assert_eq!(num(&r, "value"), 0.0);
        assert_eq!(r["exact"], true);
        let r = result(&["moment", "--order", "2", "--t", "2"]);
        assert!((num(&r, "value") - 8.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn dmt_examples() {
        let r = result(&["dmt", "--d", "1", "--potential", "const:1", "--reps", "20000"]);
        assert!((num(&r, "reference") - 1f64.cosh()).abs() < 1e-15);
        assert!(num(&r, "z_score") < 3.0, "{r}");
        let r = result(&["dmt", "--d", "2", "--potential", "const:0", "--reps", "20000"]);
        assert_eq!(num(&r, "reference"), 1.0);
        assert!(num(&r, "z_score") < 3.0, "{r}");
        let r = result(&["dmt", "--d", "3", "--potential", "const:-1", "--reps", "20000", "--seed", "3"]);
        assert!((num(&r, "reference") - 1f64.cos()).abs() < 1e-15);
        assert!(num(&r, "z_score") < 3.0, "{r}");
        let out = exec(&["dmt", "--potential", "const:1", "--reps", "2000", "--report"]).unwrap();
        let table = out.table.unwrap();
        assert_eq!(table.header[0], "jumps");
        assert!(table.rows.len() >= 3);
    }

    #[test]
    fn dmt_table_dimension_must_match() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        std::fs::write(&path, "0,0,1\n0,1,1\n1,0,1\n1,1,1\n").unwrap();
        let pot = format!("table:{}", path.display());
        let err = exec(&["dmt", "--d", "1", "--potential", &pot, "--reps", "10"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(exec(&["dmt", "--d", "2", "--potential", &pot, "--reps", "10"]).is_err());
    }

    #[test]
    fn varsolve_modes() {
        let out = exec(&["varsolve", "--mode", "gaussian-ansatz"]).unwrap();
        assert!((num(&out.record.result, "m_estimate") - 0.322595).abs() < 1e-6);
        assert_eq!(out.table.unwrap().rows.len(), 801);
        let r = result(&["varsolve", "--restarts", "2"]);
        assert!((num(&r, "m_estimate") - 0.327593).abs() < 2e-4);
        assert_eq!(r["converged"], true);
        let r = result(&["varsolve", "--model", "riesz:d=1,alpha=0.5", "--restarts", "3"]);
        let vals: Vec<f64> = r["restart_values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-3, "{vals:?}");
    }

    #[test]
    fn asymptotics_examples() {
        let r = result(&["asymptotics", "--p", "1", "--alpha", "1", "--m", "published"]);
        let w = &r["white_noise"];
        assert!((num(w, "published_constant") - 0.5 * 0.75f64.powf(0.25)).abs() < 1e-15);
        assert!((num(w, "formula_with_published_m") - 0.21298).abs() < 1e-5);
        assert_eq!(w["discrepancy"], true);
        let r = result(&["asymptotics", "--p", "2", "--alpha", "1"]);
        assert!((num(&r, "skorohod_rate") - 0.42596).abs() < 1e-5);
        let r = result(&["asymptotics", "--alpha", "1", "--m", "solve"]);
        assert!((num(&r["white_noise"], "formula_with_m") - 2f64.sqrt() / 6.0).abs() < 1e-4);
        assert!(exec(&["asymptotics", "--alpha", "0.5", "--m", "published"]).is_err());
        assert!(exec(&["asymptotics", "--m", "abc"]).is_err());
    }

    #[test]
    fn humeyer_examples() {
        let r = result(&["humeyer", "--n", "4", "--m", "3"]);
        assert_eq!(r["coefficients"], json!([1.0, 6.0, 3.0]));
        let r = result(&["humeyer", "--n", "1", "--m", "2"]);
        assert_eq!(r["coefficients"], json!([1.0]));
        let r = result(&["humeyer", "--n", "2", "--m", "4", "--triples", "3"]);
        assert!(num(&r, "max_residual") < 1e-10);
    }

    #[test]
    fn results_reproduce_across_thread_counts() {
        let base = ["dmt", "--d", "2", "--potential", "gauss:a=1,s=0.5", "--reps", "3000", "--seed", "4"];
        let with = |threads: &str| {
            let mut args = base.to_vec();
            args.extend(["--threads", threads]);
            let mut rec = exec(&args).unwrap().record;
            rec.runtime_ms = 0;
            rec
        };
        assert_eq!(with("1"), with("1"));
        assert_eq!(with("1"), with("3"));
    }

    #[test]
    fn error_classes() {
        assert_eq!(exec(&["green-check", "--d", "4"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(exec(&["moment", "--method", "ilt_mc", "--p", "2"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(exec(&["moment", "--model", "nonsense"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(exec(&["varsolve", "--grid-h", "0.0001"]).unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(exec(&["humeyer", "--triples", "0"]).unwrap_err().exit_code(), EXIT_USAGE);
        let numerical = CliError::Core(hyperwave_core::Error::Empty);
        assert_eq!(numerical.exit_code(), EXIT_NUMERICAL);
    }
}
