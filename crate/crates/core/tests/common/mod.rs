//! Test-only helpers: an independent dense simplex and random instances.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ldes_boundary::domain::{
    AssetStatus, DurationClass, GeneratorKind, GeneratorSpec, Profile, StorageSpec, SystemInstance,
};
use ldes_boundary::lp::{LinearProgram, Relation, Sense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum Oracle {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl Oracle {
    pub fn objective(&self) -> f64 {
        match self {
            Oracle::Optimal { objective, .. } => *objective,
            other => panic!("oracle did not find an optimum: {other:?}"),
        }
    }
}

/// How an original variable maps onto nonnegative standard-form columns.
enum Map {
    /// x = lo + y
    Shift(usize, f64),
    /// x = hi - y
    Mirror(usize, f64),
    /// x = y+ - y-
    Split(usize, usize),
}

/// Solves `lp` with a dense two-phase tableau simplex using Bland's rule.
///
/// Slow and simple on purpose: it shares no code with the library solver.
pub fn dense_simplex(lp: &LinearProgram) -> Oracle {
    let n = lp.num_variables();
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    // rows of (coefs over standard columns, relation, rhs)
    let mut extra: Vec<(Vec<(usize, f64)>, Relation, f64)> = Vec::new();
    for v in lp.variables() {
        if v.lower.is_finite() {
            maps.push(Map::Shift(ncols, v.lower));
            if v.upper.is_finite() {
                extra.push((vec![(ncols, 1.0)], Relation::Le, v.upper - v.lower));
            }
            ncols += 1;
        } else if v.upper.is_finite() {
            maps.push(Map::Mirror(ncols, v.upper));
            ncols += 1;
        } else {
            maps.push(Map::Split(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    // Objective over standard columns (minimization).
    let mut obj = vec![0.0; ncols];
    let mut obj_const = lp.objective_constant * sign;
    for (j, m) in maps.iter().enumerate() {
        let c = lp.costs()[j] * sign;
        match *m {
            Map::Shift(k, lo) => {
                obj[k] += c;
                obj_const += c * lo;
            }
            Map::Mirror(k, hi) => {
                obj[k] -= c;
                obj_const += c * hi;
            }
            Map::Split(a, b) => {
                obj[a] += c;
                obj[b] -= c;
            }
        }
    }
    let mut rows: Vec<(Vec<(usize, f64)>, Relation, f64)> = Vec::new();
    for c in lp.constraints() {
        let mut coefs = Vec::new();
        let mut rhs = c.rhs;
        for (v, a) in &c.terms {
            match maps[v.0] {
                Map::Shift(k, lo) => {
                    coefs.push((k, *a));
                    rhs -= a * lo;
                }
                Map::Mirror(k, hi) => {
                    coefs.push((k, -*a));
                    rhs -= a * hi;
                }
                Map::Split(p, q) => {
                    coefs.push((p, *a));
                    coefs.push((q, -*a));
                }
            }
        }
        rows.push((coefs, c.relation, rhs));
    }
    rows.extend(extra);

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let total = ncols + n_slack + m; // structural, slack, artificial
    let width = total + 1;
    let mut t = vec![vec![0.0; width]; m];
    let mut basis = vec![0usize; m];
    let mut s = ncols;
    for (i, (coefs, rel, rhs)) in rows.iter().enumerate() {
        for (k, a) in coefs {
            t[i][*k] += a;
        }
        match rel {
            Relation::Le => {
                t[i][s] = 1.0;
                s += 1;
            }
            Relation::Ge => {
                t[i][s] = -1.0;
                s += 1;
            }
            Relation::Eq => {}
        }
        t[i][total] = *rhs;
        if *rhs < 0.0 {
            for v in t[i].iter_mut() {
                *v = -*v;
            }
        }
        t[i][ncols + n_slack + i] = 1.0;
        basis[i] = ncols + n_slack + i;
    }

    let eps = 1e-9;
    // Phase 1: minimize the sum of artificials.
    let mut c1 = vec![0.0; total];
    for c in c1.iter_mut().skip(ncols + n_slack) {
        *c = 1.0;
    }
    if run(&mut t, &mut basis, &c1, total, eps) == Step::Unbounded {
        unreachable!("phase one is bounded");
    }
    let infeas: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= ncols + n_slack)
        .map(|(i, _)| t[i][total])
        .sum();
    let scale = 1.0 + rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
    if infeas > 1e-7 * scale {
        return Oracle::Infeasible;
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= ncols + n_slack {
            if let Some(j) = (0..ncols + n_slack).find(|&j| t[i][j].abs() > eps) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }
    // Phase 2 with artificials barred from entering.
    let mut c2 = vec![0.0; total];
    c2[..ncols].copy_from_slice(&obj);
    for c in c2.iter_mut().skip(ncols + n_slack) {
        *c = f64::NAN;
    }
    if run(&mut t, &mut basis, &c2, total, eps) == Step::Unbounded {
        return Oracle::Unbounded;
    }
    let mut y = vec![0.0; total];
    for (i, &b) in basis.iter().enumerate() {
        y[b] = t[i][total];
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            Map::Shift(k, lo) => lo + y[k],
            Map::Mirror(k, hi) => hi - y[k],
            Map::Split(a, b) => y[a] - y[b],
        })
        .collect();
    let objective = lp.objective_value(&x);
    let _ = obj_const;
    Oracle::Optimal { x, objective }
}

#[derive(PartialEq)]
enum Step {
    Optimal,
    Unbounded,
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let row = t[r].clone();
    for (i, ti) in t.iter_mut().enumerate() {
        if i != r {
            let f = ti[c];
            if f != 0.0 {
                for (a, b) in ti.iter_mut().zip(&row) {
                    *a -= f * b;
                }
            }
        }
    }
    basis[r] = c;
}

/// Primal simplex on the tableau. `cost[j]` NaN marks a column that may not enter.
fn run(t: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], total: usize, eps: f64) -> Step {
    for _ in 0..100_000 {
        // Reduced costs: c_j - c_B B^-1 A_j.
        let entering = (0..total).find(|&j| {
            if cost[j].is_nan() || basis.contains(&j) {
                return false;
            }
            let mut d = cost[j];
            for (i, &b) in basis.iter().enumerate() {
                let cb = if cost[b].is_nan() { 0.0 } else { cost[b] };
                d -= cb * t[i][j];
            }
            d < -eps
        });
        let Some(j) = entering else {
            return Step::Optimal;
        };
        let mut best: Option<(f64, usize, usize)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j] > eps {
                let ratio = row[total] / row[j];
                let cand = (ratio, basis[i], i);
                best = match best {
                    None => Some(cand),
                    Some(b) if ratio < b.0 - eps || (ratio <= b.0 + eps && cand.1 < b.1) => Some(cand),
                    keep => keep,
                };
            }
        }
        let Some((_, _, r)) = best else {
            return Step::Unbounded;
        };
        pivot(t, basis, r, j);
    }
    panic!("dense simplex did not terminate");
}

/// Random small but valid instance: up to 5 generators, 2 storages, 24 hours.
pub fn random_instance(seed: u64) -> SystemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hours = rng.gen_range(2..=24usize);
    let demand: Vec<f64> = (0..hours).map(|_| rng.gen_range(5.0..50.0f64).round()).collect();
    let reserve: Vec<f64> = demand.iter().map(|d| (d * 0.1).round()).collect();
    let mut generators = Vec::new();
    let n_gen = rng.gen_range(1..=5usize);
    for i in 0..n_gen {
        let renewable = rng.gen_bool(0.4);
        let candidate = rng.gen_bool(0.35);
        let provider = rng.gen_bool(0.5);
        let availability = if renewable {
            Profile::hourly((0..hours).map(|_| rng.gen_range(0.0..1.0f64)).collect())
        } else {
            Profile::Constant(1.0)
        };
        let firm_fixed = !renewable && !candidate;
        let retire_max = if firm_fixed { rng.gen_range(0.0..0.5f64) } else { 0.0 };
        generators.push(GeneratorSpec {
            id: format!("g{i}"),
            technology: if renewable { "wind".into() } else { "thermal".into() },
            region: "r".into(),
            kind: if renewable { GeneratorKind::Renewable } else { GeneratorKind::Firm },
            status: if candidate { AssetStatus::Candidate } else { AssetStatus::Fixed },
            is_gas: firm_fixed && rng.gen_bool(0.5),
            provides_reserve: provider,
            capacity_mw: if candidate { 0.0 } else { rng.gen_range(10.0..60.0f64).round() },
            invest_cost_per_mw_yr: if candidate { rng.gen_range(1.0..30.0f64).round() } else { 0.0 },
            fom_cost_per_mw_yr: rng.gen_range(0.0..5.0f64).round(),
            gen_cost_per_mwh: Profile::Constant(if renewable { 0.0 } else { rng.gen_range(5.0..60.0f64).round() }),
            reserve_cost_per_mw: Profile::Constant(rng.gen_range(0.0..5.0f64).round()),
            availability,
            reserve_factor: if provider { rng.gen_range(0.1..0.6f64) } else { 0.0 },
            ramp_up_factor: rng.gen_range(0.3..1.0f64),
            ramp_down_factor: rng.gen_range(0.3..1.0f64),
            invest_limit_mw: if candidate { rng.gen_range(10.0..80.0f64).round() } else { 0.0 },
            retire_min_frac: 0.0,
            retire_max_frac: retire_max,
        });
    }
    let mut storages = Vec::new();
    for i in 0..rng.gen_range(0..=2usize) {
        let candidate = rng.gen_bool(0.5);
        let long = rng.gen_bool(0.5);
        let duration = if long { rng.gen_range(8.0..24.0f64).round() } else { 4.0 };
        let power = if candidate { 0.0 } else { rng.gen_range(5.0..20.0f64).round() };
        storages.push(StorageSpec {
            id: format!("s{i}"),
            technology: if long { "ldes".into() } else { "battery".into() },
            duration_class: if long { DurationClass::Long } else { DurationClass::Short },
            status: if candidate { AssetStatus::Candidate } else { AssetStatus::Fixed },
            power_mw: power,
            duration_h: duration,
            rte: rng.gen_range(0.4..0.95f64),
            soc_min_mwh: 0.0,
            soc_max_mwh: power * duration,
            fom_cost_per_mw_yr: rng.gen_range(0.0..3.0f64).round(),
            invest_cost_energy_per_mwh_yr: if candidate { rng.gen_range(0.0..3.0f64).round() } else { 0.0 },
            invest_cost_power_per_mw_yr: if candidate { rng.gen_range(0.0..3.0f64).round() } else { 0.0 },
            invest_limit_power_mw: if candidate { 30.0 } else { 0.0 },
            invest_limit_energy_mwh: if candidate { 30.0 * duration } else { 0.0 },
        });
    }
    SystemInstance {
        horizon_hours: hours,
        demand_mwh: demand,
        reserve_req_mw: reserve,
        imbalance_cost: 1000.0,
        reserve_short_cost: 500.0,
        generators,
        storages,
    }
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

pub fn unit(id: &str, tech: &str, cap: f64, cost: f64) -> GeneratorSpec {
    GeneratorSpec {
        gen_cost_per_mwh: Profile::Constant(cost),
        region: "ca".into(),
        ..GeneratorSpec::firm(id, tech, cap)
    }
}

/// Adds a 10-hour long-duration candidate when the instance has none.
pub fn with_ldes(mut inst: SystemInstance) -> SystemInstance {
    if !inst.storages.iter().any(|s| s.is_long() && s.is_candidate()) {
        inst.storages.push(StorageSpec {
            id: "ldes".into(),
            technology: "ldes".into(),
            duration_class: DurationClass::Long,
            status: AssetStatus::Candidate,
            power_mw: 0.0,
            duration_h: 10.0,
            rte: 0.5,
            soc_min_mwh: 0.0,
            soc_max_mwh: 0.0,
            fom_cost_per_mw_yr: 0.0,
            invest_cost_energy_per_mwh_yr: 0.0,
            invest_cost_power_per_mw_yr: 0.0,
            invest_limit_power_mw: 100.0,
            invest_limit_energy_mwh: 1000.0,
        });
    }
    inst
}

pub fn sse(values: &[f64], labels: &[usize]) -> f64 {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (v, l) in values.iter().zip(labels) {
        groups.entry(*l).or_default().push(*v);
    }
    groups
        .values()
        .map(|g| {
            let m = g.iter().sum::<f64>() / g.len() as f64;
            g.iter().map(|v| (v - m).powi(2)).sum::<f64>()
        })
        .sum()
}

/// Minimum SSE over every assignment of values to at most k labels.
pub fn brute_force_sse(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(sse(values, &labels));
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

pub fn synthetic_fleet(seed: u64, n: usize) -> Vec<GeneratorSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let techs = ["gas", "coal", "hydro"];
    let regions = ["north", "south"];
    (0..n)
        .map(|i| {
            let tech = techs[rng.gen_range(0..techs.len())];
            let mut g = unit(&format!("u{i}"), tech, rng.gen_range(1..400) as f64 * 0.25, rng.gen_range(5.0..90.0));
            g.region = regions[rng.gen_range(0..regions.len())].into();
            g.ramp_up_factor = rng.gen_range(0.2..1.0);
            g
        })
        .collect()
}
