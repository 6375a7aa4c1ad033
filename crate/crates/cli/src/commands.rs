//! The subcommands. Each writes its primary output either to a file or to
//! `stdout`, and reports failures as [`CliError`].

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tad_core::geometry::{build_frame, critical_alpha, da_circle};
use tad_core::sextic::{branch_residual, build_geometry, build_sextic, find_roots, SexticCoefficients};
use tad_core::{par, simulator, solver, Scenario};

use crate::error::CliError;
use crate::format::{num, to_json};
use crate::record::{method_name, region_name, regime_name, SimulationRecord, SolutionRecord};
use crate::scenario_file::ScenarioFile;

/// `|p(z)|` relative to the magnitude of its terms.
fn relative_residual(c: &SexticCoefficients, z: num_complex::Complex64) -> f64 {
    let scale: f64 = c.c.iter().enumerate().map(|(k, ck)| ck.norm() * z.norm().powi(k as i32)).sum();
    c.eval(z).norm() / scale
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// Writes to `path` when given, else to `stdout`.
fn emit(contents: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, contents.as_bytes()),
        None => stdout.write_all(contents.as_bytes()).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

pub fn solve_record(scenario: &Scenario) -> Result<SolutionRecord, CliError> {
    let sol = solver::solve(scenario).map_err(|e| CliError::core("solving", e))?;
    Ok(SolutionRecord::new(scenario, &sol, "solve"))
}

pub fn solve(path: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(path)?;
    let record = solve_record(&file.scenario()?)?;
    emit(&to_json(&record), out.or(file.output.solution.as_deref()), stdout)
}

pub fn simulate(path: &Path, dir: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(path)?;
    let scenario = file.scenario()?;
    let (policies, cfg, _) = file.simulation()?;
    let (traj, outcome) = simulator::run(&scenario, &policies, &cfg).map_err(|e| CliError::core("simulating", e))?;

    let dir = dir
        .map(Path::to_path_buf)
        .or_else(|| file.output.directory.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let mut csv = csv::Writer::from_writer(Vec::new());
    let header = ["t", "x_T", "y_T", "x_A", "y_A", "x_D", "y_D", "R", "r", "theta"];
    csv.write_record(header).expect("in-memory write");
    for k in 0..traj.len() {
        let row = [
            traj.times[k],
            traj.target[k].x,
            traj.target[k].y,
            traj.attacker[k].x,
            traj.attacker[k].y,
            traj.defender[k].x,
            traj.defender[k].y,
            traj.target_range[k],
            traj.defender_range[k],
            traj.theta[k],
        ];
        csv.write_record(row.map(num)).expect("in-memory write");
    }
    let table = csv.into_inner().expect("in-memory flush");
    write_file(&dir.join("trajectory.csv"), &table)?;

    let record = SimulationRecord::new(&scenario, &policies, &cfg, outcome, traj.len(), traj.pn_initial_heading);
    let json = to_json(&record);
    write_file(&dir.join("outcome.json"), json.as_bytes())?;
    emit(&json, None, stdout)
}

pub fn critical_alpha_value(scenario: &Scenario) -> Result<f64, CliError> {
    let frame = build_frame(scenario).map_err(|e| CliError::core("building frame", e))?;
    Ok(critical_alpha(frame.to_frame(scenario.target), frame.half_separation, scenario.gamma))
}

pub fn critical_alpha_cmd(path: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(path)?;
    let v = critical_alpha_value(&file.scenario()?)?;
    emit(&format!("{}\n", num(v)), None, stdout)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "gamma")]
    Gamma,
    #[value(name = "target_x")]
    TargetX,
    #[value(name = "target_y")]
    TargetY,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Gamma => "gamma",
            SweepParam::TargetX => "target_x",
            SweepParam::TargetY => "target_y",
        }
    }

    fn apply(self, base: &Scenario, v: f64) -> Scenario {
        let mut s = *base;
        match self {
            SweepParam::Alpha => s.alpha = v,
            SweepParam::Gamma => s.gamma = v,
            SweepParam::TargetX => s.target.x = v,
            SweepParam::TargetY => s.target.y = v,
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::validation("validating sweep", "--from and --to must be finite"));
        }
        if self.steps == 0 {
            return Err(CliError::validation("validating sweep", "--steps must be at least 1"));
        }
        if self.steps == 1 {
            return Ok(vec![self.from]);
        }
        let n = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| self.from + (self.to - self.from) * (i as f64 / n))
            .collect())
    }
}

/// Scalar fields of one sweep row; numeric fields are empty when the point failed.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub param: &'static str,
    pub value: String,
    pub status: &'static str,
    pub region: &'static str,
    pub regime: &'static str,
    pub phi_star: String,
    pub intercept_x: String,
    pub intercept_y: String,
    pub intercept_frame_x: String,
    pub intercept_frame_y: String,
    pub j_star: String,
    pub critical_alpha: String,
    pub escape_infeasible: String,
    pub t_f: String,
    pub method: &'static str,
    pub error: String,
}

pub fn sweep_rows(base: &Scenario, spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    let values = spec.values()?;
    Ok(par::map_indexed(values.len(), |i| {
        let v = values[i];
        let mut row = SweepRow {
            index: i,
            param: spec.param.name(),
            value: num(v),
            status: "ok",
            region: "",
            regime: "",
            phi_star: String::new(),
            intercept_x: String::new(),
            intercept_y: String::new(),
            intercept_frame_x: String::new(),
            intercept_frame_y: String::new(),
            j_star: String::new(),
            critical_alpha: String::new(),
            escape_infeasible: String::new(),
            t_f: String::new(),
            method: "",
            error: String::new(),
        };
        match solver::solve(&spec.param.apply(base, v)) {
            Ok(sol) => {
                row.region = region_name(sol.region);
                row.regime = regime_name(sol.regime);
                row.phi_star = num(sol.phi_star);
                row.intercept_x = num(sol.intercept_world.x);
                row.intercept_y = num(sol.intercept_world.y);
                row.intercept_frame_x = num(sol.intercept_frame.x);
                row.intercept_frame_y = num(sol.intercept_frame.y);
                row.j_star = num(sol.j_star);
                row.critical_alpha = num(sol.critical_alpha);
                row.escape_infeasible = sol.escape_infeasible.to_string();
                row.t_f = num(sol.t_f);
                row.method = method_name(&sol);
            }
            Err(e) => {
                row.status = if e.is_validation() {
                    "validation_error"
                } else {
                    "numerical_error"
                };
                row.error = e.to_string();
            }
        }
        row
    }))
}

pub fn sweep(path: &Path, spec: &SweepSpec, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(path)?;
    let base = file.scenario()?;
    let rows = sweep_rows(&base, spec)?;
    let mut csv = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv.serialize(row).expect("in-memory write");
    }
    let table = String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("UTF-8 fields");
    emit(&table, out.or(file.output.table.as_deref()), stdout)
}

/// One row per polynomial root: (re, im, modulus, angle, polynomial residual, branch residual).
pub fn root_table(scenario: &Scenario) -> Result<Vec<[f64; 6]>, CliError> {
    scenario.validate().map_err(|e| CliError::core("validating scenario", e))?;
    let frame = build_frame(scenario).map_err(|e| CliError::core("building frame", e))?;
    let circle = da_circle(frame.half_separation, scenario.gamma).map_err(|e| CliError::core("building circle", e))?;
    let geom = build_geometry(frame.to_frame(scenario.target), frame.half_separation, scenario.alpha, &circle)
        .map_err(|e| CliError::core("building geometry", e))?;
    let coeffs = build_sextic(&geom).map_err(|e| CliError::core("building polynomial", e))?;
    let roots = find_roots(&coeffs).map_err(|e| CliError::core("rooting polynomial", e))?;
    let mut rows: Vec<[f64; 6]> = roots
        .iter()
        .map(|z| {
            let angle = if z.im == 0.0 && z.re < 0.0 {
                std::f64::consts::PI
            } else {
                z.arg()
            };
            [
                z.re,
                z.im,
                z.norm(),
                angle,
                relative_residual(&coeffs, *z),
                branch_residual(&geom, angle).unwrap_or(f64::NAN),
            ]
        })
        .collect();
    rows.sort_by(|a, b| a[3].total_cmp(&b[3]).then(a[2].total_cmp(&b[2])));
    Ok(rows)
}

pub fn roots(path: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = ScenarioFile::load(path)?;
    let rows = root_table(&file.scenario()?)?;
    let mut out = String::from("re,im,modulus,angle,poly_residual,branch_residual\n");
    for r in rows {
        out.push_str(&r.map(num).join(","));
        out.push('\n');
    }
    emit(&out, None, stdout)
}
