use std::path::{Path, PathBuf};
use std::sync::Arc;

use bk_core::bertrand::relative_stdev;
use bk_core::parallel::{map_grid, uniform_grid};
use bk_core::spacelike::DEFAULT_KAPPA_TOL;
use bk_core::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_BREACH, EXIT_OK, EXIT_VALIDATION};
use crate::output::{write_json, Table};

/// Contract thresholds for reparametrized curves.
pub const REPARAM_UNIT_TOL: f64 = 1e-6;
pub const REPARAM_NULL_TOL: f64 = 1e-8;

/// Prefix selecting one of the bundled curves instead of a file.
pub const FAMILY_PREFIX: &str = "family:";

/// Stdout summary and exit code of a finished command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: Value,
    pub exit: i32,
}

impl Outcome {
    fn new(summary: Value, passed: bool, fail_code: i32) -> Self {
        Outcome {
            summary,
            exit: if passed { EXIT_OK } else { fail_code },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Theorem {
    /// Spacelike helix source, timelike result.
    #[value(name = "2.1")]
    Spacelike,
    /// Null helix source, spacelike result.
    #[value(name = "3.1")]
    NullHelix,
}

impl Theorem {
    fn label(self) -> &'static str {
        match self {
            Theorem::Spacelike => "2.1",
            Theorem::NullHelix => "3.1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Arclength,
    PseudoArc,
}

pub fn load_curve(source: &str) -> Result<CurveDef, CliError> {
    if let Some(name) = source.strip_prefix(FAMILY_PREFIX) {
        return families::by_name(name).ok_or_else(|| {
            let known: Vec<&str> = families::ALL.iter().map(|(n, _)| *n).collect();
            CliError::usage(format!("unknown family '{name}' (known: {})", known.join(", ")))
        });
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file = CurveFile::from_json(&text).map_err(|e| CliError::parse(path.display(), e))?;
    Ok(CurveDef::from_file(&file)?)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn push_vec(row: &mut Vec<f64>, v: &Vec4) {
    row.extend_from_slice(&v.0);
}

fn vec_columns(prefix: &str) -> [String; 4] {
    std::array::from_fn(|i| format!("{prefix}{}", i + 1))
}

pub fn validate(curve: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let def = load_curve(curve)?;
    let report = validate_declared(&def, cfg.sample_count, cfg.causal_tol)?;
    let passed = report.passed;
    let summary = json!({ "command": "validate", "report": report });
    Ok(Outcome::new(summary, passed, EXIT_VALIDATION))
}

pub fn frame(curve: &str, reparam: bool, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let def = load_curve(curve)?;
    let name = def.name().to_string();
    let c: Arc<dyn Curve> = if reparam {
        Arc::new(arclength_reparam(Arc::new(def), cfg.quadrature_panels, cfg.causal_tol)?.0)
    } else {
        Arc::new(def)
    };
    let (lo, hi) = c.domain();
    let grid = uniform_grid(lo, hi, cfg.sample_count);
    let tol = FrameTolerances {
        frame: cfg.frame_tol,
        kappa: DEFAULT_KAPPA_TOL,
    };
    let rows = map_grid(&grid, |s| frenet_residuals(c.as_ref(), s, &tol))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut header = vec!["s", "kappa_g", "tau_g", "delta", "r1", "r2", "r3"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    for p in ["gamma_x", "t_x", "n_x", "e_x"] {
        header.extend(vec_columns(p));
    }
    let mut table = Table::new(header);
    for (app, res) in &rows {
        let mut row = vec![app.s, app.kappa_g, app.tau_g, app.delta, res.r1, res.r2, res.r3];
        for v in app.frame() {
            push_vec(&mut row, &v);
        }
        table.push(row);
    }
    let artifact = table.write(&cfg.output_dir, "frame", cfg.format)?;

    let kg: Vec<f64> = rows.iter().map(|(a, _)| a.kappa_g).collect();
    let tg: Vec<f64> = rows.iter().map(|(a, _)| a.tau_g).collect();
    let max_r = [
        max_of(rows.iter().map(|(_, r)| r.r1)),
        max_of(rows.iter().map(|(_, r)| r.r2)),
        max_of(rows.iter().map(|(_, r)| r.r3)),
    ];
    let gram = max_of(rows.iter().map(|(a, _)| a.gram_residual()));
    let passed = max_of(max_r) <= cfg.frame_tol && gram <= cfg.frame_tol;
    let summary = json!({
        "command": "frame",
        "curve": name,
        "samples": grid.len(),
        "kappa_g": { "mean": mean(&kg), "rel_stdev": relative_stdev(&kg) },
        "tau_g": { "mean": mean(&tg), "rel_stdev": relative_stdev(&tg) },
        "max_residual": { "r1": max_r[0], "r2": max_r[1], "r3": max_r[2] },
        "max_gram_residual": gram,
        "tolerance": cfg.frame_tol,
        "passed": passed,
        "artifacts": [artifact],
    });
    Ok(Outcome::new(summary, passed, EXIT_BREACH))
}

fn null_source(def: CurveDef, reparam: bool, cfg: &RunConfig) -> Result<Arc<dyn Curve>, CliError> {
    Ok(if reparam {
        Arc::new(pseudo_arc_reparam(Arc::new(def), cfg.quadrature_panels, cfg.causal_tol)?.0)
    } else {
        Arc::new(def)
    })
}

pub fn cartan(curve: &str, reparam: bool, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let def = load_curve(curve)?;
    let name = def.name().to_string();
    let c = null_source(def, reparam, cfg)?;
    let (lo, hi) = c.domain();
    let grid = uniform_grid(lo, hi, cfg.sample_count);
    let rows = map_grid(&grid, |t| {
        let f = cartan_apparatus(c.as_ref(), t, cfg.frame_tol)?;
        let eq3 = cartan_curvatures_eq3(c.as_ref(), t, cfg.causal_tol)?;
        Ok::<_, GeomError>((f, eq3))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new([
        "t",
        "k1_frame",
        "k1_eq3",
        "k2_frame",
        "k2_eq3",
        "gram_residual",
        "r_l",
        "r_w1",
        "r_w2",
        "r_n",
        "r_n_position_term",
    ]);
    for (f, e) in &rows {
        let r = &f.residuals;
        table.push(vec![f.t, f.k1, e.k1, f.k2, e.k2, f.gram_residual, r.l, r.w1, r.w2, r.n, r.n_position_term]);
    }
    let artifact = table.write(&cfg.output_dir, "cartan", cfg.format)?;

    let k1: Vec<f64> = rows.iter().map(|(f, _)| f.k1).collect();
    let k2: Vec<f64> = rows.iter().map(|(f, _)| f.k2).collect();
    let k1_route = max_of(rows.iter().map(|(f, e)| (f.k1 - e.k1).abs()));
    let k2_route = max_of(rows.iter().map(|(f, e)| (f.k2.abs() - e.k2.abs()).abs()));
    let residual = max_of(rows.iter().map(|(f, _)| f.residuals.max()));
    let gram = max_of(rows.iter().map(|(f, _)| f.gram_residual));
    let passed = [residual, gram, k1_route, k2_route].iter().all(|v| *v <= cfg.frame_tol);
    let summary = json!({
        "command": "cartan",
        "curve": name,
        "samples": grid.len(),
        "k1": { "mean": mean(&k1), "rel_stdev": relative_stdev(&k1) },
        "k2": { "mean": mean(&k2), "rel_stdev": relative_stdev(&k2) },
        "max_frame_residual": residual,
        "max_n_position_term": max_of(rows.iter().map(|(f, _)| f.residuals.n_position_term)),
        "max_gram_residual": gram,
        "max_k1_route_difference": k1_route,
        "max_k2_route_difference": k2_route,
        "tolerance": cfg.frame_tol,
        "passed": passed,
        "artifacts": [artifact],
    });
    Ok(Outcome::new(summary, passed, EXIT_BREACH))
}

pub fn sphere_test(curve: &str, reparam: bool, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let def = load_curve(curve)?;
    let name = def.name().to_string();
    let c = null_source(def, reparam, cfg)?;
    let tol = SphereTolerances {
        null: cfg.causal_tol,
        ..SphereTolerances::default()
    };
    let report = pseudo_spherical_test(c.as_ref(), cfg.sample_count, &tol)?;
    let artifact = write_json(&cfg.output_dir, "sphere_test.json", &report)?;
    let summary = json!({
        "command": "sphere-test",
        "curve": name,
        "verdict": report.verdict,
        "indeterminate": report.indeterminate,
        "report": report,
        "artifacts": [artifact],
    });
    Ok(Outcome::new(summary, true, EXIT_OK))
}

pub fn reparam(curve: &str, kind: Kind, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let def = load_curve(curve)?;
    let name = def.name().to_string();
    let source: Arc<dyn Curve> = Arc::new(def);
    let (curve, map) = match kind {
        Kind::Arclength => arclength_reparam(source.clone(), cfg.quadrature_panels, cfg.causal_tol)?,
        Kind::PseudoArc => pseudo_arc_reparam(source.clone(), cfg.quadrature_panels, cfg.causal_tol)?,
    };
    let (lo, hi) = source.domain();
    let grid = uniform_grid(lo, hi, cfg.sample_count);
    let rows = map_grid(&grid, |t| Ok::<_, GeomError>((t, map.forward(t)?, source.position(t)?)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let new_param = match kind {
        Kind::Arclength => "s",
        Kind::PseudoArc => "u",
    };
    let mut header = vec!["t".to_string(), new_param.to_string()];
    header.extend(vec_columns("x"));
    let mut table = Table::new(header);
    for (t, s, x) in &rows {
        let mut row = vec![*t, *s];
        push_vec(&mut row, x);
        table.push(row);
    }
    let artifact = table.write(&cfg.output_dir, "reparam", cfg.format)?;

    // check the contract on a grid of the new parameter
    let (slo, shi) = curve.domain();
    let sgrid = uniform_grid(slo, shi, cfg.sample_count);
    let jets = map_grid(&sgrid, |s| curve.jet(s, 2)).into_iter().collect::<Result<Vec<_>>>()?;
    let (unit, null_residual) = match kind {
        Kind::Arclength => (max_of(jets.iter().map(|j| (j[1].norm_sq() - 1.0).abs())), None),
        Kind::PseudoArc => (
            max_of(jets.iter().map(|j| (j[2].norm_sq() - 1.0).abs())),
            Some(max_of(jets.iter().map(|j| j[1].norm_sq().abs()))),
        ),
    };
    let passed = unit <= REPARAM_UNIT_TOL && null_residual.map_or(true, |v| v <= REPARAM_NULL_TOL);
    let summary = json!({
        "command": "reparam",
        "curve": name,
        "kind": map.kind(),
        "panels": cfg.quadrature_panels,
        "total": map.total(),
        "quadrature_error_estimate": map.quadrature_error_estimate(),
        "max_unit_residual": unit,
        "max_null_residual": null_residual,
        "passed": passed,
        "artifacts": [artifact],
    });
    Ok(Outcome::new(summary, passed, EXIT_BREACH))
}

pub struct ConstructArgs {
    pub theorem: Theorem,
    pub a: f64,
    pub theta: f64,
    pub c: [f64; 4],
}

pub fn construct(curve: &str, args: &ConstructArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let def = load_curve(curve)?;
    let name = def.name().to_string();
    let p = BertrandParams::new(args.a, args.theta, Vec4(args.c))?;
    let source: Arc<dyn Curve> = Arc::new(def);
    let con = match args.theorem {
        Theorem::Spacelike => construct_from_spacelike(source, p, cfg.sample_count)?,
        Theorem::NullHelix => construct_from_null_helix(source, p, cfg.sample_count)?,
    };
    let mut header = vec!["t".to_string()];
    header.extend(vec_columns("x"));
    let mut table = Table::new(header);
    for (t, x) in con.curve.params().iter().zip(con.curve.points()) {
        let mut row = vec![*t];
        push_vec(&mut row, x);
        table.push(row);
    }
    let curve_artifact = table.write(&cfg.output_dir, "curve", cfg.format)?;
    let report = verify_construction(&con, cfg.sample_count, cfg.causal_tol)?;
    let report_artifact = write_json(&cfg.output_dir, "bertrand_report.json", &report)?;

    let passed = report.fit_residual <= cfg.fit_tol && report.speed_sq_max_deviation <= cfg.frame_tol;
    let summary = json!({
        "command": "construct",
        "curve": name,
        "theorem": args.theorem.label(),
        "params": con.params,
        "source_invariants": con.invariants,
        "character": report.character,
        "speed_sq": report.speed_sq,
        "speed_sq_predicted": report.speed_sq_predicted,
        "speed_sq_max_deviation": report.speed_sq_max_deviation,
        "kappa_rel_stdev": report.kappa_rel_stdev,
        "tau_rel_stdev": report.tau_rel_stdev,
        "alpha_fit": report.alpha_fit,
        "beta_fit": report.beta_fit,
        "fit_residual": report.fit_residual,
        "paper_identity_value": report.paper_identity_value,
        "paper_identity_value_negated": report.paper_identity_value_negated,
        "fit_tolerance": cfg.fit_tol,
        "passed": passed,
        "artifacts": [curve_artifact, report_artifact],
    });
    Ok(Outcome::new(summary, passed, EXIT_BREACH))
}

/// Reads a `t,x1,x2,x3,x4` table with a header row.
pub fn read_curve_csv(path: &Path) -> Result<(Vec<f64>, Vec<Vec4>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let header = reader.headers().map_err(|e| CliError::parse(path.display(), e))?.clone();
    let expected = ["t", "x1", "x2", "x3", "x4"];
    if header.iter().ne(expected) {
        return Err(CliError::parse(
            path.display(),
            format!("expected header {}, found {}", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path.display(), e))?;
        let mut vals = [0.0; 5];
        for (j, field) in rec.iter().enumerate() {
            vals[j] = field
                .parse()
                .map_err(|e| CliError::parse(format!("{} row {} column {}", path.display(), i + 2, j + 1), e))?;
        }
        ts.push(vals[0]);
        xs.push(Vec4::new(vals[1], vals[2], vals[3], vals[4]));
    }
    Ok((ts, xs))
}

pub fn verify(csv_path: &Path, degree: usize, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (ts, xs) = read_curve_csv(csv_path)?;
    let rows = ts.len();
    let curve = NumericCurve::from_samples(ts, xs, degree)?;
    let report = verify_bertrand(&curve, cfg.sample_count, cfg.causal_tol, None)?;
    let artifact = write_json(&cfg.output_dir, "verify_report.json", &report)?;
    let passed = report.fit_residual <= cfg.fit_tol;
    let summary = json!({
        "command": "verify",
        "rows": rows,
        "interpolant_degree": degree,
        "character": report.character,
        "kappa_rel_stdev": report.kappa_rel_stdev,
        "tau_rel_stdev": report.tau_rel_stdev,
        "alpha_fit": report.alpha_fit,
        "beta_fit": report.beta_fit,
        "fit_residual": report.fit_residual,
        "degenerate_fit": report.degenerate_fit,
        "fit_tolerance": cfg.fit_tol,
        "passed": passed,
        "artifacts": [artifact],
    });
    Ok(Outcome::new(summary, passed, EXIT_BREACH))
}

/// Both constructions on the bundled helices with `a = θ = 1`.
pub fn demo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let runs = [
        ("theorem_2_1", "spacelike_helix", Theorem::Spacelike),
        ("theorem_3_1", "null_helix", Theorem::NullHelix),
    ];
    let mut summaries = serde_json::Map::new();
    let mut artifacts = Vec::new();
    let mut passed = true;
    for (dir, family, theorem) in runs {
        let sub = cfg.with_output_dir(cfg.output_dir.join(dir));
        let args = ConstructArgs {
            theorem,
            a: 1.0,
            theta: 1.0,
            c: [0.0; 4],
        };
        let out = construct(&format!("{FAMILY_PREFIX}{family}"), &args, &sub)?;
        passed &= out.exit == EXIT_OK;
        for a in out.summary["artifacts"].as_array().into_iter().flatten() {
            let rel: PathBuf = Path::new(dir).join(a.as_str().unwrap_or_default());
            artifacts.push(rel.to_string_lossy().replace('\\', "/"));
        }
        summaries.insert(dir.to_string(), out.summary);
    }
    let summary = json!({
        "command": "demo",
        "runs": summaries,
        "passed": passed,
        "artifacts": artifacts,
    });
    write_json(&cfg.output_dir, "demo_summary.json", &summary)?;
    Ok(Outcome::new(summary, passed, EXIT_BREACH))
}
