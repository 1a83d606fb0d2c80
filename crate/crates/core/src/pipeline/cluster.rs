use std::collections::BTreeMap;
use std::sync::Arc;

use crate::domain::{GeneratorSpec, Profile};

/// Optimal one-dimensional k-means.
///
/// Returns a cluster index per input value, with clusters numbered in
/// increasing centroid order. Equal values always share a cluster, so the
/// number of clusters is `min(k, number of distinct values)`. The partition
/// minimizes the within-cluster sum of squared distances exactly (dynamic
/// programming over the sorted distinct values), so there is no seeding and
/// no dependence on a random state.
pub fn kmeans_1d(values: &[f64], k: usize) -> Vec<usize> {
    assert!(k >= 1, "k must be at least 1");
    if values.is_empty() {
        return Vec::new();
    }
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut weight = vec![0.0; distinct.len()];
    for v in values {
        let i = distinct.binary_search_by(|d| d.total_cmp(v)).unwrap();
        weight[i] += 1.0;
    }
    let m = distinct.len();
    let k = k.min(m);

    // Prefix sums of w, w*v, w*v^2 for O(1) segment costs.
    let mut sw = vec![0.0; m + 1];
    let mut swv = vec![0.0; m + 1];
    let mut swv2 = vec![0.0; m + 1];
    for i in 0..m {
        sw[i + 1] = sw[i] + weight[i];
        swv[i + 1] = swv[i] + weight[i] * distinct[i];
        swv2[i + 1] = swv2[i] + weight[i] * distinct[i] * distinct[i];
    }
    // Cost of one cluster holding distinct[a..b].
    let seg = |a: usize, b: usize| -> f64 {
        let w = sw[b] - sw[a];
        let s = swv[b] - swv[a];
        ((swv2[b] - swv2[a]) - s * s / w).max(0.0)
    };

    // best[c][j]: c+1 clusters over distinct[0..j]; cut[c][j]: start of the last one.
    let mut best = vec![vec![f64::INFINITY; m + 1]; k];
    let mut cut = vec![vec![0usize; m + 1]; k];
    for j in 1..=m {
        best[0][j] = seg(0, j);
    }
    for c in 1..k {
        for j in (c + 1)..=m {
            for i in c..j {
                let cand = best[c - 1][i] + seg(i, j);
                if cand < best[c][j] {
                    best[c][j] = cand;
                    cut[c][j] = i;
                }
            }
        }
    }
    let mut label_of_distinct = vec![0usize; m];
    let mut j = m;
    for c in (0..k).rev() {
        let i = if c == 0 { 0 } else { cut[c][j] };
        for l in &mut label_of_distinct[i..j] {
            *l = c;
        }
        j = i;
    }
    values
        .iter()
        .map(|v| label_of_distinct[distinct.binary_search_by(|d| d.total_cmp(v)).unwrap()])
        .collect()
}

/// Units that may be merged into one representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct GroupKey {
    technology: String,
    region: String,
    kind: String,
    status: String,
    is_gas: bool,
    provides_reserve: bool,
}

fn key(g: &GeneratorSpec) -> GroupKey {
    GroupKey {
        technology: g.technology.clone(),
        region: g.region.clone(),
        kind: format!("{:?}", g.kind),
        status: format!("{:?}", g.status),
        is_gas: g.is_gas,
        provides_reserve: g.provides_reserve,
    }
}

fn weighted_profile(members: &[&GeneratorSpec], weights: &[f64], get: impl Fn(&GeneratorSpec) -> &Profile) -> Profile {
    let first = get(members[0]);
    if members.iter().all(|m| get(m) == first) {
        return first.clone();
    }
    let len = members.iter().filter_map(|m| get(m).explicit_len()).max();
    match len {
        None => Profile::Constant(members.iter().zip(weights).map(|(m, w)| w * get(m).at(0)).sum()),
        Some(t) => {
            let series: Vec<f64> = (0..t)
                .map(|h| members.iter().zip(weights).map(|(m, w)| w * get(m).at(h)).sum())
                .collect();
            Profile::Hourly(Arc::from(series))
        }
    }
}

/// Merges a cluster into one generator: capacities and investment limits
/// add up, everything else is a capacity-weighted mean (plain mean when the
/// cluster has no capacity).
fn representative(id: String, members: &[&GeneratorSpec]) -> GeneratorSpec {
    let total: f64 = members.iter().map(|m| m.capacity_mw).sum();
    let weights: Vec<f64> = if total > 0.0 {
        members.iter().map(|m| m.capacity_mw / total).collect()
    } else {
        vec![1.0 / members.len() as f64; members.len()]
    };
    let mean = |f: &dyn Fn(&GeneratorSpec) -> f64| -> f64 {
        members.iter().zip(&weights).map(|(m, w)| w * f(m)).sum()
    };
    let head = members[0];
    GeneratorSpec {
        id,
        technology: head.technology.clone(),
        region: head.region.clone(),
        kind: head.kind,
        status: head.status,
        is_gas: head.is_gas,
        provides_reserve: head.provides_reserve,
        capacity_mw: total,
        invest_cost_per_mw_yr: mean(&|m| m.invest_cost_per_mw_yr),
        fom_cost_per_mw_yr: mean(&|m| m.fom_cost_per_mw_yr),
        gen_cost_per_mwh: weighted_profile(members, &weights, |m| &m.gen_cost_per_mwh),
        reserve_cost_per_mw: weighted_profile(members, &weights, |m| &m.reserve_cost_per_mw),
        availability: weighted_profile(members, &weights, |m| &m.availability),
        reserve_factor: mean(&|m| m.reserve_factor),
        ramp_up_factor: mean(&|m| m.ramp_up_factor),
        ramp_down_factor: mean(&|m| m.ramp_down_factor),
        invest_limit_mw: members.iter().map(|m| m.invest_limit_mw).sum(),
        retire_min_frac: mean(&|m| m.retire_min_frac),
        retire_max_frac: mean(&|m| m.retire_max_frac),
    }
}

/// Reduces each group of similar generators to at most `k_per_group`
/// representatives by k-means on the time-averaged generation cost.
///
/// Groups are keyed by technology, region, kind, status and the gas and
/// reserve flags. A cluster with a single member is passed through
/// unchanged; merged clusters get ids like `{technology}-{region}-gas-res-c{n}`
/// (flag parts only when set), numbered by increasing cost. Output is ordered by group, then cluster.
pub fn cluster_generators(generators: &[GeneratorSpec], k_per_group: usize) -> Vec<GeneratorSpec> {
    assert!(k_per_group >= 1, "k_per_group must be at least 1");
    let mut groups: BTreeMap<GroupKey, Vec<&GeneratorSpec>> = BTreeMap::new();
    for g in generators {
        groups.entry(key(g)).or_default().push(g);
    }
    let mut out = Vec::new();
    for (key, members) in groups {
        let costs: Vec<f64> = members.iter().map(|m| m.gen_cost_per_mwh.mean()).collect();
        let labels = kmeans_1d(&costs, k_per_group);
        let n_clusters = labels.iter().max().map_or(0, |m| m + 1);
        let gas = if key.is_gas { "-gas" } else { "" };
        let status = if key.status == "Candidate" { "-cand" } else { "" };
        let res = if key.provides_reserve { "-res" } else { "" };
        for c in 0..n_clusters {
            let cluster: Vec<&GeneratorSpec> = members
                .iter()
                .zip(&labels)
                .filter(|(_, l)| **l == c)
                .map(|(m, _)| *m)
                .collect();
            if cluster.len() == 1 {
                out.push(cluster[0].clone());
                continue;
            }
            let region = if key.region.is_empty() { String::new() } else { format!("-{}", key.region) };
            let id = format!("{}{region}{gas}{res}{status}-c{}", key.technology, c + 1);
            out.push(representative(id, &cluster));
        }
    }
    out
}
