use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hinged_plate::fem::{
    assemble_bilinear, assemble_load, energy_value, Density, EnergyVariant, LoadSpec, Mesh, Operator,
    ReinforcementMask,
};
use hinged_plate::io::write_csv;
use hinged_plate::optimize::{
    best_obstacle, best_reinforcement, classify_regime, gap_profile, placement_bound_report,
    worst_gap_force, Force, ForceClass, ObstacleFamily, ObstacleRegion, Regime, ScanOutcome, Variant,
};
use hinged_plate::series::{
    empty_contact_margin, gap_threshold_m, green_value, sine_mode_response, uniform_load_profile_max, SeriesState,
};
use hinged_plate::vi::{solve_densityweighted, solve_linear, solve_obstacle, BoxConstraints, SolverSettings, VISolution};
use hinged_plate::obstacle::ObstacleSpec;
use hinged_plate::{Error, MaterialParams, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{LoadConfig, ObstacleConfig, Problem, ReinforcementConfig, RunConfig};

#[derive(Debug)]
pub enum RunError {
    Invalid(Vec<String>),
    Core(Error),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => 2,
            RunError::Core(Error::IterationLimit { .. } | Error::Singular(_)) => 3,
            RunError::Core(_) => 2,
            RunError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Invalid(v) => write!(f, "invalid configuration: {}", v.join("; ")),
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    problem: &'static str,
    status: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    mesh: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerances: Option<Value>,
    files: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn create(&mut self, name: &str) -> std::io::Result<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> std::io::Result<()> {
        let mut w = self.create(name)?;
        write_csv(&mut w, header, rows)?;
        w.flush()
    }
}

struct Computed {
    result: Value,
    tolerances: Value,
}

/// Runs `config`, writing `summary.json` and the data files into `out`.
/// The summary is written on failure too, with the error recorded.
pub fn run(config: &RunConfig, out: &Path) -> Result<PathBuf, RunError> {
    fs::create_dir_all(out)?;
    let mut output = Output {
        dir: out.to_path_buf(),
        files: Vec::new(),
    };
    let diagnostics = config.validate();
    let mut summary = Summary {
        schema_version: config.schema_version,
        problem: config.problem.kind(),
        status: "ok",
        config,
        mesh: None,
        series: None,
        result: None,
        tolerances: None,
        files: Vec::new(),
        diagnostics: Vec::new(),
        error: None,
    };
    let outcome = if diagnostics.is_empty() {
        execute(config, &mut output, &mut summary)
    } else {
        summary.diagnostics = diagnostics.clone();
        Err(RunError::Invalid(diagnostics))
    };
    match &outcome {
        Ok(c) => {
            summary.result = Some(c.result.clone());
            summary.tolerances = Some(c.tolerances.clone());
        }
        Err(e) => {
            summary.status = if matches!(e, RunError::Invalid(_)) { "invalid" } else { "error" };
            summary.error = Some(e.to_string());
        }
    }
    summary.files = output.files.clone();
    let path = out.join("summary.json");
    let mut w = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, &summary).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    outcome.map(|_| path)
}

fn execute(config: &RunConfig, out: &mut Output, summary: &mut Summary<'_>) -> Result<Computed, RunError> {
    let params = config.material;
    let mesh = Mesh::new(config.mesh.nx, config.mesh.ny, &params)?;
    let state = SeriesState::new(params, config.series.m_max)?;
    summary.mesh = Some(json!({
        "nx": mesh.nx, "ny": mesh.ny, "hx": mesh.hx(), "hy": mesh.hy(),
        "nodes": mesh.n_nodes(), "dofs": mesh.n_dofs(),
    }));
    summary.series = Some(json!({ "m_max": state.m_max, "tail_bound": state.tail_bound }));
    let settings = config.solver;
    match &config.problem {
        Problem::GreenEval { source, points, grid } => green_eval(&state, *source, points, *grid, out),
        Problem::Solve { load, reinforcement } => linear(&mesh, &params, load, reinforcement.as_ref(), out),
        Problem::ViSolve {
            load,
            obstacles,
            reinforcement,
        } => vi_solve(&mesh, &params, &state, load, obstacles, reinforcement.as_ref(), &settings, out),
        Problem::GapScan { forces, obstacles } => gap_scan(&mesh, &params, &state, forces, obstacles, &settings, out),
        Problem::OptimizeReinforcement {
            family,
            forces,
            variant,
            obstacles,
        } => {
            let constraints = family_constraints(obstacles, &mesh)?;
            let o = best_reinforcement(&mesh, &params, family, forces, &constraints, *variant, &settings)?;
            out.csv(
                "candidates.csv",
                &["index", "area", "target_area", "feasible", "value"],
                o.candidates.iter().enumerate().map(|(k, c)| {
                    vec![k as f64, c.area, c.target_area, f64::from(u8::from(c.feasible)), c.value.unwrap_or(f64::NAN)]
                }),
            )?;
            out.csv(
                "mask.csv",
                &["x", "y", "inside"],
                (0..mesh.n_elements()).map(|e| {
                    let c = mesh.element_center(e);
                    vec![c.x, c.y, f64::from(u8::from(o.best.region.contains(e)))]
                }),
            )?;
            let bounds = match variant {
                Variant::E2 => Some(placement_bound_report(&o.best, &mesh, &state)?),
                Variant::E1 => None,
            };
            Ok(Computed {
                result: json!({
                    "value": o.value,
                    "argopt": o.index,
                    "best": o.candidates[o.index].params,
                    "candidates": o.candidates,
                    "placement_bounds": bounds,
                }),
                tolerances: json!({ "kkt_tol": settings.tol }),
            })
        }
        Problem::OptimizeObstacle { candidates, forces } => {
            let forces = forces.clone().unwrap_or_else(|| ForceClass::default_antisym(&params));
            let o = best_obstacle(candidates, &forces, &mesh, &params, &settings)?;
            out.csv(
                "candidates.csv",
                &["index", "gamma", "value"],
                candidates
                    .iter()
                    .zip(&o.values)
                    .enumerate()
                    .map(|(k, (c, v))| vec![k as f64, c.level().unwrap_or(f64::NAN), *v]),
            )?;
            let max_kkt = o.scans.iter().fold(0.0f64, |m, s| m.max(s.max_kkt));
            Ok(Computed {
                result: json!({
                    "value": o.value,
                    "argopt": o.index,
                    "best": o.best,
                    "candidates": candidates.iter().zip(&o.values)
                        .map(|(c, v)| json!({ "params": c, "value": v })).collect::<Vec<_>>(),
                }),
                tolerances: json!({ "kkt_tol": settings.tol, "max_kkt": max_kkt }),
            })
        }
        Problem::Regime {
            gamma,
            gamma_over_m,
            forces,
            scan,
        } => regime(&mesh, &params, &state, *gamma, *gamma_over_m, forces, *scan, &settings, out),
    }
}

fn load_spec(load: &LoadConfig, mesh: &Mesh) -> Result<LoadSpec, Error> {
    Ok(match load {
        LoadConfig::Constant { value } => LoadSpec::from_density(Density::constant(mesh, *value)),
        LoadConfig::SineMode { m, amplitude } => {
            let mf = *m as f64;
            LoadSpec::from_density(Density::from_fn(mesh, |p| amplitude * (mf * p.x).sin()))
        }
        LoadConfig::Random { seed, amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let vals: Vec<f64> = (0..mesh.n_elements())
                .map(|_| amplitude * rng.gen_range(-1.0..=1.0))
                .collect();
            LoadSpec::from_density(Density::per_element(mesh, &vals)?)
        }
        LoadConfig::Dirac { x, y, weight } => LoadSpec::dirac(Point::new(*x, *y), *weight),
        LoadConfig::Antisym { xi, eta } => Force::Antisym { xi: *xi, eta: *eta }.load(mesh)?,
    })
}

fn family_constraints(family: &Option<ObstacleFamily>, mesh: &Mesh) -> Result<BoxConstraints, Error> {
    family.as_ref().map_or(Ok(BoxConstraints::none()), |f| f.to_constraints(mesh))
}

fn write_field(out: &mut Output, field: &hinged_plate::fem::DofField) -> std::io::Result<Value> {
    let mut w = out.create("field.csv")?;
    field.write_csv(&mut w)?;
    w.flush()?;
    let gap = gap_profile(field);
    let mut w = out.create("gap.csv")?;
    gap.write_csv(&mut w)?;
    w.flush()?;
    Ok(json!({
        "max_abs_u": field.max_abs_nodal(),
        "maximal_gap": gap.maximal_gap,
        "gap_argmax_x": gap.argmax_x,
    }))
}

fn green_eval(
    state: &SeriesState,
    source: [f64; 2],
    points: &[[f64; 2]],
    grid: Option<[usize; 2]>,
    out: &mut Output,
) -> Result<Computed, RunError> {
    let l = state.params.half_width;
    let p = Point::new(source[0], source[1]);
    let mut qs: Vec<Point> = points.iter().map(|q| Point::new(q[0], q[1])).collect();
    if let Some([gx, gy]) = grid {
        for i in 0..=gx {
            for j in 0..=gy {
                qs.push(Point::new(PI * i as f64 / gx as f64, l * (2.0 * j as f64 - gy as f64) / gy as f64));
            }
        }
    }
    let rows = qs
        .iter()
        .map(|q| Ok(vec![q.x, q.y, green_value(p, *q, state)?]))
        .collect::<Result<Vec<_>, Error>>()?;
    let max = rows.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r[2]));
    out.csv("green.csv", &["x", "y", "value"], rows)?;
    Ok(Computed {
        result: json!({ "source": source, "points": qs.len(), "max_value": max }),
        tolerances: json!({ "series_tail": state.tail_bound }),
    })
}

fn reinforced_operator(
    mesh: &Mesh,
    params: &MaterialParams,
    r: Option<&ReinforcementConfig>,
) -> Result<(Operator, Option<ReinforcementMask>, Option<Variant>), Error> {
    match r {
        None => Ok((assemble_bilinear(mesh, params, None)?, None, None)),
        Some(r) => {
            let mask = r.mask(mesh)?;
            let op = match r.variant {
                Variant::E1 => Operator::reinforced(mesh, params, &mask)?,
                Variant::E2 => assemble_bilinear(mesh, params, None)?,
            };
            Ok((op, Some(mask), Some(r.variant)))
        }
    }
}

fn energy_variant<'a>(mask: &'a Option<ReinforcementMask>, variant: Option<Variant>) -> EnergyVariant<'a> {
    match (mask, variant) {
        (Some(m), Some(Variant::E1)) => EnergyVariant::E1(m),
        (Some(m), Some(Variant::E2)) => EnergyVariant::E2(m),
        _ => EnergyVariant::Base,
    }
}

fn linear(
    mesh: &Mesh,
    params: &MaterialParams,
    load: &LoadConfig,
    r: Option<&ReinforcementConfig>,
    out: &mut Output,
) -> Result<Computed, RunError> {
    let spec = load_spec(load, mesh)?;
    let (op, mask, variant) = reinforced_operator(mesh, params, r)?;
    let weight = mask.as_ref().filter(|_| variant == Some(Variant::E2));
    let f = assemble_load(mesh, &spec, weight)?;
    let u = solve_linear(&op, &f)?;
    let mut result = write_field(out, &u)?;
    result["energy"] = json!(energy_value(&u, params, &spec, energy_variant(&mask, variant))?);
    let mut tolerances = json!({ "linear_residual_max": 1e-10 });
    if let (LoadConfig::SineMode { m, amplitude }, None) = (load, r) {
        let mut err = 0.0f64;
        for k in 0..mesh.n_nodes() {
            let exact = amplitude * sine_mode_response(*m, mesh.node_point(k), params)?;
            err = err.max((u.node_value(k) - exact).abs());
        }
        tolerances["series_nodal_error"] = json!(err);
    }
    Ok(Computed { result, tolerances })
}

#[allow(clippy::too_many_arguments)]
fn vi_solve(
    mesh: &Mesh,
    params: &MaterialParams,
    state: &SeriesState,
    load: &LoadConfig,
    obstacles: &ObstacleConfig,
    r: Option<&ReinforcementConfig>,
    settings: &SolverSettings,
    out: &mut Output,
) -> Result<Computed, RunError> {
    let mut certificate = Value::Null;
    let constraints = match obstacles {
        ObstacleConfig::None => BoxConstraints::none(),
        ObstacleConfig::Constant { region, lower, upper } => {
            BoxConstraints::on_nodes(mesh, region.nodes(mesh), |_| *lower, |_| *upper)?
        }
        ObstacleConfig::ProfileMargin { region, factor } => {
            let (zmax, at) = uniform_load_profile_max(state, mesh.nx, mesh.ny)?;
            let level = factor * zmax;
            let nodes = region.nodes(mesh);
            let spec = ObstacleSpec::symmetric_constant(nodes.iter().map(|&k| mesh.node_point(k)).collect(), level)?;
            certificate = json!({
                "z_max": zmax, "z_argmax": [at.x, at.y], "level": level,
                "empty_contact_margin": empty_contact_margin(&spec, state)?,
            });
            BoxConstraints::on_nodes(mesh, nodes, |_| -level, |_| level)?
        }
    };
    let spec = load_spec(load, mesh)?;
    let (op, mask, variant) = reinforced_operator(mesh, params, r)?;
    let sol: VISolution = match (&mask, variant) {
        (Some(m), Some(Variant::E2)) => solve_densityweighted(&op, &spec, m, &constraints, settings)?,
        _ => solve_obstacle(&op, &assemble_load(mesh, &spec, None)?, &constraints, settings)?,
    };
    let mut result = write_field(out, &sol.field)?;
    out.csv(
        "contact.csv",
        &["x", "y", "side"],
        sol.lower_contact
            .iter()
            .map(|&k| (k, -1.0))
            .chain(sol.upper_contact.iter().map(|&k| (k, 1.0)))
            .map(|(k, s)| {
                let p = mesh.node_point(k);
                vec![p.x, p.y, s]
            }),
    )?;
    result["solution"] = serde_json::to_value(sol.summary()).map_err(std::io::Error::from)?;
    result["contact_free"] = json!(sol.contact_free());
    result["empty_contact_certificate"] = certificate;
    Ok(Computed {
        result,
        tolerances: json!({ "kkt_tol": settings.tol, "kkt": sol.kkt, "kkt_residual": sol.kkt_residual }),
    })
}

fn force_row(f: &Force) -> [f64; 3] {
    match f {
        Force::Antisym { xi, eta } | Force::EvenPair { xi, eta } => [*xi, *eta, 1.0],
        Force::Delta { x, y, sign } => [*x, *y, *sign],
        Force::BangBang { signs, .. } => {
            let code = signs.iter().enumerate().filter(|(_, s)| **s < 0).map(|(k, _)| 1u64 << k).sum::<u64>();
            [f64::NAN, f64::NAN, code as f64]
        }
    }
}

fn write_scan(out: &mut Output, s: &ScanOutcome) -> std::io::Result<()> {
    out.csv(
        "scan.csv",
        &["index", "x", "y", "sign", "value", "contact_free"],
        s.forces.iter().zip(&s.values).zip(&s.contact_free).enumerate().map(|(k, ((f, v), c))| {
            let [x, y, sign] = force_row(f);
            vec![k as f64, x, y, sign, *v, f64::from(u8::from(*c))]
        }),
    )
}

fn scan_json(s: &ScanOutcome) -> Value {
    json!({ "value": s.value, "argopt": s.index, "argmax": s.argmax, "members": s.forces.len(), "max_kkt": s.max_kkt })
}

fn gap_scan(
    mesh: &Mesh,
    params: &MaterialParams,
    state: &SeriesState,
    forces: &Option<ForceClass>,
    obstacles: &Option<ObstacleFamily>,
    settings: &SolverSettings,
    out: &mut Output,
) -> Result<Computed, RunError> {
    let forces = forces.clone().unwrap_or_else(|| ForceClass::default_antisym(params));
    let constraints = family_constraints(obstacles, mesh)?;
    let s = worst_gap_force(mesh, params, &constraints, &forces, settings)?;
    write_scan(out, &s)?;
    let op = assemble_bilinear(mesh, params, None)?;
    let best = solve_obstacle(&op, &assemble_load(mesh, &s.argmax.load(mesh)?, None)?, &constraints, settings)?;
    let mut w = out.create("gap.csv")?;
    gap_profile(&best.field).write_csv(&mut w)?;
    w.flush()?;
    let mut result = scan_json(&s);
    let mut tolerances = json!({ "kkt_tol": settings.tol, "max_kkt": s.max_kkt });
    if obstacles.is_none() && matches!(forces, ForceClass::AntisymDelta { .. }) {
        let m = gap_threshold_m(params, state.m_max.max(1000))?;
        result["m_scan"] = json!(s.value / 2.0);
        result["m_series"] = json!(m.value);
        tolerances["m_series_tail"] = json!(m.tail_bound);
    }
    Ok(Computed { result, tolerances })
}

#[allow(clippy::too_many_arguments)]
fn regime(
    mesh: &Mesh,
    params: &MaterialParams,
    state: &SeriesState,
    gamma: Option<f64>,
    gamma_over_m: Option<f64>,
    forces: &Option<ForceClass>,
    scan: bool,
    settings: &SolverSettings,
    out: &mut Output,
) -> Result<Computed, RunError> {
    let m = gap_threshold_m(params, state.m_max.max(1000))?;
    let gamma = gamma.unwrap_or_else(|| gamma_over_m.unwrap_or(1.0) * m.value);
    let family = ObstacleFamily::ConstantLevel {
        gamma,
        region: ObstacleRegion::LongEdges,
    };
    let constraints = family.to_constraints(mesh)?;
    let report = classify_regime(gamma, params, &constraints, mesh, state.m_max.max(1000))?;
    let mut result = json!({ "case": report.case, "gamma": gamma, "m": report.m, "two_gamma": 2.0 * gamma });
    let mut tolerances = json!({ "m_tail": report.m_tail, "kkt_tol": settings.tol, "ceiling_rel_tol": 1e-9 });
    if scan {
        let forces = forces.clone().unwrap_or_else(|| ForceClass::default_antisym(params));
        let s = worst_gap_force(mesh, params, &constraints, &forces, settings)?;
        write_scan(out, &s)?;
        let attains = (s.value - 2.0 * gamma).abs() <= 1e-9 * 2.0 * gamma;
        let below = s.value < 2.0 * gamma;
        result["scanned_gap"] = json!(s.value);
        result["scan"] = scan_json(&s);
        result["attains_ceiling"] = json!(attains);
        result["consistent"] = json!(match report.case {
            Regime::I => below,
            Regime::II => attains,
        });
        tolerances["max_kkt"] = json!(s.max_kkt);
    }
    Ok(Computed { result, tolerances })
}
