//! Command orchestration and result files.
//!
//! Every command stages its outputs in memory and writes them only after
//! all computation succeeded, each file via write-to-temp-then-rename. A
//! failing command therefore leaves no partial results behind.

mod manifest;
pub mod tables;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::Config;
use crate::domain::SystemInstance;
use crate::error::{Error, EXIT_OK, EXIT_PARTIAL, EXIT_SOLVER};
use crate::lp::{check_solution, emit_mps, parse_mps, LinearProgram, ResidualReport};
use crate::model::{build_baseline_model, build_opportunity_model, SimultaneousUse};
use crate::scenario::{
    baseline_policy, bisect_minimum_viable, minimum_viable_capacity, opportunity_policy,
    run_baseline, run_opportunity, split_ldes_power, sweep_boundary_curve, BaselineResult,
    BoundaryCurvePoint, InvestmentPlan, ScenarioOptions,
};

pub use manifest::{file_digest, sha256_hex, InputDigest, RunManifest, StageTime};
use tables::*;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("records serialize");
    v.push(b'\n');
    v
}

/// Command-line settings that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub solver: Option<String>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub tol: Option<f64>,
}

/// One command run: configuration, staged outputs and stage timings.
pub struct RunContext {
    pub config_path: Option<PathBuf>,
    pub config: Option<Config>,
    pub out_dir: PathBuf,
    command: String,
    started_at: String,
    stages: Vec<StageTime>,
    staged: Vec<(PathBuf, Vec<u8>)>,
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct CommandReport {
    pub exit_code: i32,
    /// Human-readable summary lines.
    pub summary: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl RunContext {
    pub fn new(
        command: &str,
        config_path: Option<&Path>,
        out_dir: &Path,
        overrides: &Overrides,
    ) -> Result<RunContext, Error> {
        let config = match config_path {
            Some(p) => {
                let mut c = Config::load(p)?;
                if let Some(s) = &overrides.solver {
                    c.solver.backend = s.clone();
                }
                if let Some(s) = overrides.seed {
                    c.solver.seed = s;
                }
                if let Some(w) = overrides.workers {
                    c.sweep.workers = w;
                }
                if let Some(t) = overrides.tol {
                    c.solver.feasibility_tol = t;
                    c.solver.optimality_tol = t;
                }
                Some(c)
            }
            None => None,
        };
        Ok(RunContext {
            config_path: config_path.map(Path::to_path_buf),
            config,
            out_dir: out_dir.to_path_buf(),
            command: command.into(),
            started_at: chrono::Utc::now().to_rfc3339(),
            stages: Vec::new(),
            staged: Vec::new(),
        })
    }

    fn config(&self) -> Result<&Config, Error> {
        self.config
            .as_ref()
            .ok_or_else(|| Error::Usage("this command needs --config".into()))
    }

    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&Self) -> Result<T, Error>) -> Result<T, Error> {
        let t0 = Instant::now();
        let out = f(self)?;
        self.stages.push(StageTime {
            stage: stage.into(),
            wall_time_s: t0.elapsed().as_secs_f64(),
        });
        Ok(out)
    }

    fn stage(&mut self, name: &str, bytes: Vec<u8>) {
        self.staged.push((self.out_dir.join(name), bytes));
    }

    fn load_instance(&mut self) -> Result<SystemInstance, Error> {
        self.timed("load", |ctx| Ok(ctx.config()?.instance()?))
    }

    fn options(&self) -> Result<ScenarioOptions, Error> {
        Ok(self.config()?.scenario_options())
    }

    /// Writes staged files and the manifest.
    fn commit(mut self, exit_code: i32, summary: Vec<String>) -> Result<CommandReport, Error> {
        let (config_path, config_sha256, inputs, solver) = match (&self.config_path, &self.config) {
            (Some(p), Some(c)) => {
                let digest = file_digest(p).map_err(|e| Error::io(p, e))?;
                let inputs = c
                    .input_source()
                    .files()
                    .into_iter()
                    .map(|f| {
                        Ok(InputDigest {
                            sha256: file_digest(&f).map_err(|e| Error::io(&f, e))?,
                            path: f.display().to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                (p.display().to_string(), digest, inputs, c.solver.clone())
            }
            _ => (String::new(), String::new(), Vec::new(), Default::default()),
        };
        let t0 = Instant::now();
        let mut outputs = Vec::new();
        for (path, bytes) in &self.staged {
            atomic_write(path, bytes)?;
            outputs.push(path.clone());
        }
        self.stages.push(StageTime {
            stage: "write".into(),
            wall_time_s: t0.elapsed().as_secs_f64(),
        });
        let manifest = RunManifest {
            command: self.command.clone(),
            engine_version: ENGINE_VERSION.into(),
            config_path,
            config_sha256,
            inputs,
            solver,
            started_at: self.started_at.clone(),
            finished_at: chrono::Utc::now().to_rfc3339(),
            stages: std::mem::take(&mut self.stages),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        };
        let path = self.out_dir.join("manifest.json");
        atomic_write(&path, &json(&manifest))?;
        outputs.push(path);
        Ok(CommandReport {
            exit_code,
            summary,
            outputs,
        })
    }
}

#[derive(Serialize)]
struct BaselineRecord<'a> {
    status: &'static str,
    objective: f64,
    q_star: f64,
    horizon_hours: usize,
    num_variables: usize,
    num_constraints: usize,
    breakdown: Vec<CostRow>,
    simultaneous_use: &'a [SimultaneousUse],
}

fn baseline_record<'a>(instance: &SystemInstance, b: &'a BaselineResult) -> BaselineRecord<'a> {
    BaselineRecord {
        status: "optimal",
        objective: b.q_star,
        q_star: b.q_star,
        horizon_hours: instance.horizon_hours,
        num_variables: b.model.lp.num_variables(),
        num_constraints: b.model.lp.num_constraints(),
        breakdown: cost_rows(&b.breakdown),
        simultaneous_use: &b.simultaneous_use,
    }
}

#[derive(Serialize)]
struct PointRecord<'a> {
    status: &'static str,
    ldes_power_mw: f64,
    ldes_power_gw: f64,
    q_star: f64,
    boundary_cost_usd_per_mw: f64,
    boundary_cost_usd_per_kw: f64,
    budget_overrun: f64,
    viable: bool,
    net_cost_reduction: f64,
    system_cost: f64,
    plan: &'a InvestmentPlan,
    breakdown: Vec<CostRow>,
}

fn point_record(p: &BoundaryCurvePoint) -> PointRecord<'_> {
    PointRecord {
        status: "optimal",
        ldes_power_mw: p.ldes_power_mw,
        ldes_power_gw: p.ldes_power_mw / 1000.0,
        q_star: p.q_star,
        boundary_cost_usd_per_mw: p.boundary_cost_per_mw,
        boundary_cost_usd_per_kw: p.boundary_cost_per_kw(),
        budget_overrun: p.budget_overrun,
        viable: p.viable,
        net_cost_reduction: p.net_cost_reduction,
        system_cost: p.system_cost,
        plan: &p.plan,
        breakdown: cost_rows(&p.breakdown),
    }
}

fn baseline_stage(ctx: &mut RunContext, instance: &SystemInstance) -> Result<BaselineResult, Error> {
    let options = ctx.options()?;
    ctx.timed("baseline_solve", |_| Ok(run_baseline(instance, &options)?))
}

pub fn cmd_baseline(mut ctx: RunContext) -> Result<CommandReport, Error> {
    let instance = ctx.load_instance()?;
    let b = baseline_stage(&mut ctx, &instance)?;
    ctx.stage("baseline_result.json", json(&baseline_record(&instance, &b)));
    ctx.stage("cost_breakdown.csv", to_csv(&cost_rows(&b.breakdown), COST_HEADER));
    ctx.stage("dispatch.csv", to_csv(&dispatch_rows(&b.dispatch), DISPATCH_HEADER));
    ctx.stage("solution.csv", to_csv(&solution_rows(&b.model.lp, &b.primal), SOLUTION_HEADER));
    let summary = vec![format!("baseline q* = {} $", b.q_star)];
    ctx.commit(EXIT_OK, summary)
}

pub fn cmd_opportunity(mut ctx: RunContext, ldes_power_mw: f64) -> Result<CommandReport, Error> {
    let instance = ctx.load_instance()?;
    let q_star = baseline_stage(&mut ctx, &instance)?.q_star;
    let options = ctx.options()?;
    let p = ctx.timed("opportunity_solve", |_| {
        Ok(run_opportunity(&instance, q_star, ldes_power_mw, &options)?)
    })?;
    ctx.stage("opportunity_result.json", json(&point_record(&p)));
    ctx.stage("cost_breakdown.csv", to_csv(&cost_rows(&p.breakdown), COST_HEADER));
    ctx.stage("solution.csv", to_csv(&solution_rows(&p.model.lp, &p.primal), SOLUTION_HEADER));
    let summary = vec![
        format!("baseline q* = {} $", q_star),
        format!(
            "LDES {} MW ({} GW): boundary cost {} $/MW-yr ({} $/kW-yr), q_over {}, viable {}",
            p.ldes_power_mw,
            p.ldes_power_mw / 1000.0,
            p.boundary_cost_per_mw,
            p.boundary_cost_per_kw(),
            p.budget_overrun,
            p.viable
        ),
    ];
    ctx.commit(EXIT_OK, summary)
}

#[derive(Serialize)]
struct SweepSummary {
    q_star: f64,
    points: usize,
    failed: usize,
    min_viable_capacity_mw: Option<f64>,
    bisected_min_viable_mw: Option<f64>,
}

pub fn cmd_sweep(mut ctx: RunContext, capacities: Option<Vec<f64>>) -> Result<CommandReport, Error> {
    let capacities = match capacities {
        Some(c) => c,
        None => ctx.config()?.sweep.capacities_mw.clone(),
    };
    if capacities.is_empty() {
        return Err(Error::Usage("no sweep capacities given (use --capacities or [sweep] capacities_mw)".into()));
    }
    crate::scenario::validate_capacities(&capacities)?;
    let instance = ctx.load_instance()?;
    let baseline = baseline_stage(&mut ctx, &instance)?;
    let q_star = baseline.q_star;
    let options = ctx.options()?;
    let points = ctx.timed("sweep", |_| {
        Ok(sweep_boundary_curve(&instance, q_star, &capacities, &options)?)
    })?;
    let sweep_cfg = ctx.config()?.sweep.clone();
    let min_viable = minimum_viable_capacity(&points);
    let bisected = match (sweep_cfg.bisect, min_viable) {
        (true, Some(hi)) => {
            let lo = points
                .iter()
                .filter(|p| p.ldes_power_mw < hi)
                .map(|p| p.ldes_power_mw)
                .fold(0.0, f64::max);
            let tol = sweep_cfg.bisection_tol_mw;
            Some(ctx.timed("bisection", |_| {
                Ok(bisect_minimum_viable(&instance, q_star, lo, hi, tol, &options)?)
            })?)
        }
        _ => None,
    };
    let failed = points.iter().filter(|p| p.outcome.is_err()).count();

    ctx.stage("baseline_result.json", json(&baseline_record(&instance, &baseline)));
    ctx.stage("baseline_cost_breakdown.csv", to_csv(&cost_rows(&baseline.breakdown), COST_HEADER));
    ctx.stage("boundary_curve.csv", to_csv(&curve_rows(&points), CURVE_HEADER));
    ctx.stage("investment_mix.csv", to_csv(&investment_rows(&points), INVESTMENT_HEADER));
    ctx.stage("cost_reduction.csv", to_csv(&cost_reduction_rows(&points), COST_REDUCTION_HEADER));
    ctx.stage("decomposition.csv", to_csv(&decomposition_rows(&points), DECOMPOSITION_HEADER));
    ctx.stage(
        "soc.csv",
        to_csv(&soc_rows(&instance, &points, &sweep_cfg.soc_points_mw), SOC_HEADER),
    );
    for (i, p) in points.iter().enumerate() {
        let name = format!("points/point_{i:03}.json");
        let bytes = match &p.outcome {
            Ok(b) => json(&point_record(b)),
            Err(e) => json(&serde_json::json!({
                "status": "failed",
                "ldes_power_mw": p.ldes_power_mw,
                "error": e.to_string(),
            })),
        };
        ctx.stage(&name, bytes);
    }
    ctx.stage(
        "sweep_summary.json",
        json(&SweepSummary {
            q_star,
            points: points.len(),
            failed,
            min_viable_capacity_mw: min_viable,
            bisected_min_viable_mw: bisected,
        }),
    );

    let mut summary = vec![format!("baseline q* = {q_star} $")];
    for r in curve_rows(&points) {
        summary.push(match (r.boundary_cost_usd_per_mw, r.boundary_cost_usd_per_kw) {
            (Some(mw), Some(kw)) => format!(
                "{} GW: {} $/MW-yr = {} $/kW-yr, viable {}",
                r.capacity_gw, mw, kw, r.viable
            ),
            _ => format!("{} GW: {}", r.capacity_gw, r.status),
        });
    }
    if let Some(m) = min_viable {
        summary.push(format!("minimum viable LDES capacity among sweep points: {m} MW"));
    }
    ctx.commit(sweep_exit_code(failed, points.len()), summary)
}

/// Exit status of a sweep: success, partial failure, or total failure.
pub fn sweep_exit_code(failed: usize, total: usize) -> i32 {
    match failed {
        0 => EXIT_OK,
        n if n == total => EXIT_SOLVER,
        _ => EXIT_PARTIAL,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitMode {
    Baseline,
    Opportunity,
}

pub fn cmd_emit_model(
    mut ctx: RunContext,
    mode: EmitMode,
    ldes_power_mw: Option<f64>,
) -> Result<CommandReport, Error> {
    let instance = ctx.load_instance()?;
    let model = match mode {
        EmitMode::Baseline => build_baseline_model(&instance, &baseline_policy(&instance))?,
        EmitMode::Opportunity => {
            let mw = ldes_power_mw.ok_or_else(|| {
                Error::Usage("opportunity mode needs --ldes-power-mw".into())
            })?;
            let split = split_ldes_power(&instance, mw);
            let cfg = ctx.config()?;
            let mut policy = opportunity_policy(&instance, &split);
            policy.overrun_penalty = cfg.policy.overrun_penalty;
            policy.boundary_cost_floor = cfg.policy.boundary_cost_floor;
            // Fail on a zero build before paying for the baseline solve.
            build_opportunity_model(&instance, &policy, 0.0)?;
            let q_star = baseline_stage(&mut ctx, &instance)?.q_star;
            build_opportunity_model(&instance, &policy, q_star)?
        }
    };
    let mps = emit_mps(&model.lp)?;
    ctx.stage("model.mps", mps.into_bytes());
    ctx.stage("registry.csv", to_csv(&registry_rows(&model), REGISTRY_HEADER));
    let summary = vec![format!(
        "{} variables, {} constraints",
        model.lp.num_variables(),
        model.lp.num_constraints()
    )];
    ctx.commit(EXIT_OK, summary)
}

/// Verifies a solution file against a model: an MPS file when given,
/// otherwise the baseline model rebuilt from the config.
pub fn cmd_check(
    mut ctx: RunContext,
    solution: &Path,
    model: Option<&Path>,
) -> Result<CommandReport, Error> {
    let lp: LinearProgram = match model {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_mps(&text)?
        }
        None => {
            let instance = ctx.load_instance()?;
            build_baseline_model(&instance, &baseline_policy(&instance))?.lp
        }
    };
    let bytes = fs::read(solution).map_err(|e| Error::io(solution, e))?;
    let rows: Vec<SolutionRow> = from_csv(&bytes).map_err(|e| Error::io(solution, e))?;
    let mut x = vec![f64::NAN; lp.num_variables()];
    for r in &rows {
        let v = lp.find_variable(&r.name).ok_or_else(|| {
            Error::Usage(format!("solution names unknown variable `{}`", r.name))
        })?;
        x[v.0] = r.value;
    }
    if let Some(missing) = x.iter().position(|v| v.is_nan()) {
        return Err(Error::Usage(format!(
            "solution has no value for `{}`",
            lp.variables()[missing].name
        )));
    }
    let tol = ctx
        .config
        .as_ref()
        .map_or(1e-6, |c| c.solver.feasibility_tol.max(1e-9));
    let report: ResidualReport = check_solution(&lp, &x, None, tol);
    ctx.stage("check_report.json", json(&report));
    let summary = vec![format!(
        "objective {}, max bound violation {:e}, max row violation {:e}",
        report.objective_recomputed,
        report.max_bound_violation,
        report.max_constraint_violation()
    )];
    let passes = report.passes();
    let out = ctx.commit(EXIT_OK, summary)?;
    if passes {
        Ok(out)
    } else {
        Err(Error::CheckFailed(format!(
            "solution violates the model: {} bounds, {} rows over tolerance {tol:e}",
            report.bound_violations.len(),
            report.row_violations.len()
        )))
    }
}
