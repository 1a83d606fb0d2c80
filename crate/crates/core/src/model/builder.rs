use crate::domain::{
    classify_assets, validate_instance, validate_overrides, IndexSets, PolicyOverrides,
    SystemInstance,
};
use crate::lp::{LinearProgram, Relation, RowId, Sense, VarId};

use super::catalog::{GeneratorVars, StorageVars, VariableCatalog};
use super::cost::{CostCategory, CostModel};
use super::registry::{ConstraintFamily as F, ConstraintRegistry};
use super::ModelError;

const INF: f64 = f64::INFINITY;

/// Incrementally assembles a capacity-expansion LP.
///
/// `new` creates every variable (with the bounds that encode simple limits),
/// after which the `add_*_block` functions append rows. Names are short
/// positional codes so that the program fits fixed MPS; the readable
/// description of each column and row is kept as its label.
pub struct ModelBuilder<'a> {
    pub instance: &'a SystemInstance,
    pub overrides: &'a PolicyOverrides,
    pub sets: IndexSets,
    pub lp: LinearProgram,
    pub catalog: VariableCatalog,
    pub registry: ConstraintRegistry,
    pub cost: CostModel,
    fix_unset_ldes: bool,
}

fn tech(technology: &str, id: &str) -> String {
    if technology.is_empty() {
        id.to_owned()
    } else {
        technology.to_owned()
    }
}

impl<'a> ModelBuilder<'a> {
    /// Validates the inputs and creates all decision variables.
    ///
    /// With `fix_unset_ldes`, long-duration candidates that have no entry in
    /// `overrides.ldes_fixed_power_mw` are held at zero instead of being left
    /// to their investment limits.
    pub fn new(
        instance: &'a SystemInstance,
        overrides: &'a PolicyOverrides,
        name: &str,
        sense: Sense,
        fix_unset_ldes: bool,
    ) -> Result<Self, ModelError> {
        let report = validate_instance(instance);
        if !report.is_valid() {
            return Err(ModelError::InvalidInstance(report));
        }
        let report = validate_overrides(instance, overrides);
        if !report.is_valid() {
            return Err(ModelError::InvalidOverrides(report));
        }
        let mut b = ModelBuilder {
            instance,
            overrides,
            sets: classify_assets(instance),
            lp: LinearProgram::new(name, sense),
            catalog: VariableCatalog::default(),
            registry: ConstraintRegistry::default(),
            cost: CostModel::default(),
            fix_unset_ldes,
        };
        b.create_generator_vars()?;
        b.create_storage_vars()?;
        b.create_system_vars()?;
        b.collect_costs();
        Ok(b)
    }

    pub fn hours(&self) -> usize {
        self.instance.horizon_hours
    }

    pub(crate) fn var(
        &mut self,
        label: String,
        lower: f64,
        upper: f64,
        family: Option<F>,
    ) -> Result<VarId, ModelError> {
        let name = format!("C{:07}", self.lp.num_variables());
        let v = self.lp.add_labeled_variable(name, label, lower, upper)?;
        if let Some(f) = family {
            self.registry.record_bound(v, f);
        }
        Ok(v)
    }

    pub(crate) fn row(
        &mut self,
        family: F,
        label: String,
        terms: Vec<(VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Result<RowId, ModelError> {
        let name = format!("R{:07}", self.lp.num_constraints());
        let r = self.lp.add_labeled_constraint(name, label, terms, relation, rhs)?;
        self.registry.record_row(r, family);
        Ok(r)
    }

    fn create_generator_vars(&mut self) -> Result<(), ModelError> {
        let inst = self.instance;
        let t_max = inst.horizon_hours;
        for g in &inst.generators {
            let mut gv = GeneratorVars::default();
            let renewable_fixed = g.is_renewable() && g.is_fixed();
            for t in 0..t_max {
                let label = format!("p[{},{}]", g.id, t + 1);
                let v = if renewable_fixed && !g.provides_reserve {
                    let cap = g.capacity_mw * g.availability.at(t);
                    self.var(label, 0.0, cap, Some(F::OutputCapRenewableFixed))?
                } else {
                    self.var(label, 0.0, INF, None)?
                };
                gv.output.push(v);
            }
            if g.provides_reserve {
                let mut r = Vec::with_capacity(t_max);
                for t in 0..t_max {
                    let label = format!("r_up[{},{}]", g.id, t + 1);
                    let v = if renewable_fixed {
                        let cap = g.capacity_mw * g.availability.at(t) * g.reserve_factor;
                        self.var(label, 0.0, cap, Some(F::ReserveCapRenewableFixed))?
                    } else {
                        self.var(label, 0.0, INF, None)?
                    };
                    r.push(v);
                }
                gv.reserve = Some(r);
            }
            if g.is_firm() && g.is_fixed() {
                gv.remaining = Some(self.var(format!("p_rem[{}]", g.id), 0.0, INF, None)?);
                let (lo, hi) = self.overrides.retirement_window(g);
                gv.retired = Some(self.var(
                    format!("x_ret[{}]", g.id),
                    lo * g.capacity_mw,
                    hi * g.capacity_mw,
                    Some(F::RetirementWindow),
                )?);
            }
            if g.is_candidate() {
                let limit = self.overrides.invest_limit(g);
                gv.invested = Some(self.var(
                    format!("x_inv[{}]", g.id),
                    0.0,
                    limit,
                    Some(F::GenerationInvestLimit),
                )?);
            }
            self.catalog.generators.push(gv);
        }
        Ok(())
    }

    fn create_storage_vars(&mut self) -> Result<(), ModelError> {
        let inst = self.instance;
        let t_max = inst.horizon_hours;
        for h in &inst.storages {
            let (ch_hi, ch_family) = if h.is_fixed() {
                (h.power_mw, Some(F::ChargeCapFixed))
            } else {
                (INF, None)
            };
            let (v_hi, v_family) = if h.is_fixed() {
                (h.soc_max_mwh, F::SocLimitsFixed)
            } else {
                (INF, F::SocLimitsCandidate)
            };
            let mut charge = Vec::with_capacity(t_max);
            let mut discharge = Vec::with_capacity(t_max);
            let mut reserve = Vec::with_capacity(t_max);
            let mut soc = Vec::with_capacity(t_max);
            for t in 0..t_max {
                charge.push(self.var(format!("p_ch[{},{}]", h.id, t + 1), 0.0, ch_hi, ch_family)?);
            }
            for t in 0..t_max {
                discharge.push(self.var(format!("p_dis[{},{}]", h.id, t + 1), 0.0, INF, None)?);
            }
            for t in 0..t_max {
                reserve.push(self.var(format!("r_st[{},{}]", h.id, t + 1), 0.0, INF, None)?);
            }
            for t in 0..t_max {
                soc.push(self.var(
                    format!("v[{},{}]", h.id, t + 1),
                    h.soc_min_mwh,
                    v_hi,
                    Some(v_family),
                )?);
            }
            let soc_initial =
                self.var(format!("v_ini[{}]", h.id), h.soc_min_mwh, v_hi, Some(v_family))?;
            let (mut energy_invest, mut power_invest) = (None, None);
            if h.is_candidate() {
                let fixed = self.overrides.ldes_fixed_power_mw.get(&h.id).copied().or(
                    if h.is_long() && self.fix_unset_ldes {
                        Some(0.0)
                    } else {
                        None
                    },
                );
                let (p_lo, p_hi, e_lo, e_hi) = match fixed {
                    Some(x) if h.is_long() => (x, x, x * h.duration_h, x * h.duration_h),
                    _ => (
                        0.0,
                        self.overrides.storage_power_limit(h),
                        0.0,
                        self.overrides.storage_energy_limit(h),
                    ),
                };
                energy_invest = Some(self.var(
                    format!("x_e[{}]", h.id),
                    e_lo,
                    e_hi,
                    Some(F::StorageEnergyInvestLimit),
                )?);
                power_invest = Some(self.var(
                    format!("x_p[{}]", h.id),
                    p_lo,
                    p_hi,
                    Some(F::StoragePowerInvestLimit),
                )?);
            }
            self.catalog.storages.push(StorageVars {
                charge,
                discharge,
                reserve,
                soc,
                soc_initial,
                energy_invest,
                power_invest,
            });
        }
        Ok(())
    }

    fn create_system_vars(&mut self) -> Result<(), ModelError> {
        for t in 0..self.hours() {
            let v = self.var(format!("imb_neg[{}]", t + 1), 0.0, INF, Some(F::ImbalanceNonNegative))?;
            self.catalog.imbalance_neg.push(v);
        }
        for t in 0..self.hours() {
            let v = self.var(format!("imb_pos[{}]", t + 1), 0.0, INF, Some(F::ImbalanceNonNegative))?;
            self.catalog.imbalance_pos.push(v);
        }
        for t in 0..self.hours() {
            let v = self.var(
                format!("r_short[{}]", t + 1),
                0.0,
                INF,
                Some(F::ReserveShortageNonNegative),
            )?;
            self.catalog.reserve_shortage.push(v);
        }
        Ok(())
    }

    fn collect_costs(&mut self) {
        let inst = self.instance;
        let cost = &mut self.cost;
        for (g, gv) in inst.generators.iter().zip(&self.catalog.generators) {
            let tname = tech(&g.technology, &g.id);
            for (t, &p) in gv.output.iter().enumerate() {
                cost.add(CostCategory::Generation(tname.clone()), p, g.gen_cost_per_mwh.at(t));
            }
            if let Some(r) = &gv.reserve {
                for (t, &v) in r.iter().enumerate() {
                    cost.add(CostCategory::Reserve(tname.clone()), v, g.reserve_cost_per_mw.at(t));
                }
            }
            if let Some(x) = gv.invested {
                cost.add(CostCategory::Investment(tname.clone()), x, g.invest_cost_per_mw_yr);
                cost.add(CostCategory::FixedOmNew(tname.clone()), x, g.fom_cost_per_mw_yr);
            } else if let Some(rem) = gv.remaining {
                cost.add(CostCategory::FixedOmExisting(tname), rem, g.fom_cost_per_mw_yr);
            } else {
                cost.add_constant(
                    CostCategory::FixedOmExisting(tname),
                    g.fom_cost_per_mw_yr * g.capacity_mw,
                );
            }
        }
        for t in 0..inst.horizon_hours {
            cost.add(CostCategory::Imbalance, self.catalog.imbalance_neg[t], inst.imbalance_cost);
            cost.add(CostCategory::Imbalance, self.catalog.imbalance_pos[t], inst.imbalance_cost);
            cost.add(
                CostCategory::ReserveShortage,
                self.catalog.reserve_shortage[t],
                inst.reserve_short_cost,
            );
        }
        for (h, hv) in inst.storages.iter().zip(&self.catalog.storages) {
            let tname = tech(&h.technology, &h.id);
            cost.add_constant(
                CostCategory::StorageFixedOm(tname.clone()),
                h.fom_cost_per_mw_yr * h.power_mw,
            );
            if let (Some(xe), Some(xp)) = (hv.energy_invest, hv.power_invest) {
                cost.add(CostCategory::StorageFixedOm(tname.clone()), xp, h.fom_cost_per_mw_yr);
                // Long-duration build-out is priced by the opportunity model, not here.
                if !h.is_long() {
                    cost.add(
                        CostCategory::StorageInvestEnergy(tname.clone()),
                        xe,
                        h.invest_cost_energy_per_mwh_yr,
                    );
                    cost.add(
                        CostCategory::StorageInvestPower(tname),
                        xp,
                        h.invest_cost_power_per_mw_yr,
                    );
                }
            }
        }
    }
}

/// Supply meets demand every hour, up to priced imbalance.
pub fn add_balance_block(b: &mut ModelBuilder<'_>) -> Result<Vec<RowId>, ModelError> {
    let mut rows = Vec::with_capacity(b.hours());
    for t in 0..b.hours() {
        let mut terms = Vec::new();
        for gv in &b.catalog.generators {
            terms.push((gv.output[t], 1.0));
        }
        for hv in &b.catalog.storages {
            terms.push((hv.charge[t], -1.0));
            terms.push((hv.discharge[t], 1.0));
        }
        terms.push((b.catalog.imbalance_neg[t], 1.0));
        terms.push((b.catalog.imbalance_pos[t], -1.0));
        let rhs = b.instance.demand_mwh[t];
        rows.push(b.row(F::PowerBalance, format!("balance[{}]", t + 1), terms, Relation::Eq, rhs)?);
    }
    Ok(rows)
}

/// Up-reserve from providers and storage covers the requirement, up to priced shortage.
pub fn add_reserve_block(b: &mut ModelBuilder<'_>) -> Result<Vec<RowId>, ModelError> {
    let mut rows = Vec::with_capacity(b.hours());
    for t in 0..b.hours() {
        let mut terms = Vec::new();
        for gv in &b.catalog.generators {
            if let Some(r) = &gv.reserve {
                terms.push((r[t], 1.0));
            }
        }
        for hv in &b.catalog.storages {
            terms.push((hv.reserve[t], 1.0));
        }
        terms.push((b.catalog.reserve_shortage[t], 1.0));
        let rhs = b.instance.reserve_req_mw[t];
        rows.push(b.row(F::ReserveMargin, format!("reserve[{}]", t + 1), terms, Relation::Ge, rhs)?);
    }
    Ok(rows)
}

/// State-of-charge dynamics, power and energy limits of every storage.
pub fn add_storage_block(b: &mut ModelBuilder<'_>) -> Result<Vec<RowId>, ModelError> {
    let mut rows = Vec::new();
    let t_max = b.hours();
    for (i, hv) in b.catalog.storages.clone().iter().enumerate() {
        let h = &b.instance.storages[i];
        let id = &h.id;
        for t in 0..t_max {
            let prev = if t == 0 { hv.soc_initial } else { hv.soc[t - 1] };
            let terms = vec![
                (hv.soc[t], 1.0),
                (prev, -1.0),
                (hv.charge[t], -h.rte),
                (hv.discharge[t], 1.0),
            ];
            let family = if t == 0 { F::SocFirstHour } else { F::SocRecursion };
            rows.push(b.row(family, format!("soc[{id},{}]", t + 1), terms, Relation::Eq, 0.0)?);
        }
        rows.push(b.row(
            F::SocCyclic,
            format!("soc_cyclic[{id}]"),
            vec![(hv.soc_initial, 1.0), (hv.soc[t_max - 1], -1.0)],
            Relation::Eq,
            0.0,
        )?);
        match (hv.energy_invest, hv.power_invest) {
            (Some(xe), Some(xp)) => {
                for t in 0..t_max {
                    rows.push(b.row(
                        F::ChargeCapCandidate,
                        format!("ch_cap[{id},{}]", t + 1),
                        vec![(hv.charge[t], 1.0), (xp, -1.0)],
                        Relation::Le,
                        h.power_mw,
                    )?);
                }
                for t in 0..t_max {
                    rows.push(b.row(
                        F::DischargeReserveCapCandidate,
                        format!("dis_cap[{id},{}]", t + 1),
                        vec![(hv.discharge[t], 1.0), (hv.reserve[t], 1.0), (xp, -1.0)],
                        Relation::Le,
                        h.power_mw,
                    )?);
                }
                for t in 0..t_max {
                    rows.push(b.row(
                        F::SocLimitsCandidate,
                        format!("soc_cap[{id},{}]", t + 1),
                        vec![(hv.soc[t], 1.0), (xe, -1.0)],
                        Relation::Le,
                        h.soc_max_mwh,
                    )?);
                }
                rows.push(b.row(
                    F::SocLimitsCandidate,
                    format!("soc_cap_ini[{id}]"),
                    vec![(hv.soc_initial, 1.0), (xe, -1.0)],
                    Relation::Le,
                    h.soc_max_mwh,
                )?);
                rows.push(b.row(
                    F::StorageDuration,
                    format!("duration[{id}]"),
                    vec![(xe, 1.0), (xp, -h.duration_h)],
                    Relation::Eq,
                    0.0,
                )?);
            }
            _ => {
                for t in 0..t_max {
                    rows.push(b.row(
                        F::DischargeReserveCapFixed,
                        format!("dis_cap[{id},{}]", t + 1),
                        vec![(hv.discharge[t], 1.0), (hv.reserve[t], 1.0)],
                        Relation::Le,
                        h.power_mw,
                    )?);
                }
            }
        }
        for t in 0..t_max {
            rows.push(b.row(
                F::SocReserveHeadroom,
                format!("soc_headroom[{id},{}]", t + 1),
                vec![(hv.soc[t], 1.0), (hv.reserve[t], -1.0)],
                Relation::Ge,
                h.soc_min_mwh,
            )?);
        }
    }
    Ok(rows)
}

/// Output, reserve and ramp limits of generators, plus the retirement balance.
pub fn add_generator_block(b: &mut ModelBuilder<'_>) -> Result<Vec<RowId>, ModelError> {
    let mut rows = Vec::new();
    let t_max = b.hours();
    for (i, gv) in b.catalog.generators.clone().iter().enumerate() {
        let g = &b.instance.generators[i];
        let id = &g.id;
        let with_reserve = |t: usize, mut terms: Vec<(VarId, f64)>| {
            if let Some(r) = &gv.reserve {
                terms.push((r[t], 1.0));
            }
            terms
        };
        // Capacity the unit can use: remaining capacity (fixed firm) or new build (candidate).
        let capacity_var = gv.remaining.or(gv.invested);
        match (g.is_firm(), capacity_var) {
            (true, Some(cap)) => {
                let (out_f, res_f) = if g.is_fixed() {
                    (F::OutputCapFirmFixed, F::ReserveCapFirmFixed)
                } else {
                    (F::OutputCapFirmCandidate, F::ReserveCapFirmCandidate)
                };
                for t in 0..t_max {
                    let terms = with_reserve(t, vec![(gv.output[t], 1.0), (cap, -1.0)]);
                    rows.push(b.row(out_f, format!("gen_cap[{id},{}]", t + 1), terms, Relation::Le, 0.0)?);
                }
                if let Some(r) = &gv.reserve {
                    for t in 0..t_max {
                        rows.push(b.row(
                            res_f,
                            format!("res_cap[{id},{}]", t + 1),
                            vec![(r[t], 1.0), (cap, -g.reserve_factor)],
                            Relation::Le,
                            0.0,
                        )?);
                    }
                }
                let (up_f, down_f) = if g.is_fixed() {
                    (F::RampUpFixed, F::RampDownFixed)
                } else {
                    (F::RampUpCandidate, F::RampDownCandidate)
                };
                for t in 1..t_max {
                    rows.push(b.row(
                        up_f,
                        format!("ramp_up[{id},{}]", t + 1),
                        vec![(gv.output[t], 1.0), (gv.output[t - 1], -1.0), (cap, -g.ramp_up_factor)],
                        Relation::Le,
                        0.0,
                    )?);
                }
                for t in 1..t_max {
                    rows.push(b.row(
                        down_f,
                        format!("ramp_down[{id},{}]", t + 1),
                        vec![(gv.output[t - 1], 1.0), (gv.output[t], -1.0), (cap, -g.ramp_down_factor)],
                        Relation::Le,
                        0.0,
                    )?);
                }
            }
            (false, Some(cap)) => {
                let family = if gv.reserve.is_some() {
                    F::OutputCapRenewableCandidateProvider
                } else {
                    F::OutputCapRenewableCandidate
                };
                for t in 0..t_max {
                    let f_t = g.availability.at(t);
                    let terms = with_reserve(t, vec![(gv.output[t], 1.0), (cap, -f_t)]);
                    rows.push(b.row(family, format!("gen_cap[{id},{}]", t + 1), terms, Relation::Le, 0.0)?);
                }
                if let Some(r) = &gv.reserve {
                    for t in 0..t_max {
                        let f_t = g.availability.at(t);
                        rows.push(b.row(
                            F::ReserveCapRenewableCandidate,
                            format!("res_cap[{id},{}]", t + 1),
                            vec![(r[t], 1.0), (cap, -f_t * g.reserve_factor)],
                            Relation::Le,
                            0.0,
                        )?);
                    }
                }
            }
            (_, None) => {
                // Fixed renewable: plain output caps are bounds; providers share the cap with reserve.
                if gv.reserve.is_some() {
                    for t in 0..t_max {
                        let terms = with_reserve(t, vec![(gv.output[t], 1.0)]);
                        let rhs = g.capacity_mw * g.availability.at(t);
                        rows.push(b.row(
                            F::OutputCapRenewableFixedProvider,
                            format!("gen_cap[{id},{}]", t + 1),
                            terms,
                            Relation::Le,
                            rhs,
                        )?);
                    }
                }
            }
        }
        if let (Some(rem), Some(ret)) = (gv.remaining, gv.retired) {
            rows.push(b.row(
                F::RemainingCapacity,
                format!("remaining[{id}]"),
                vec![(rem, 1.0), (ret, 1.0)],
                Relation::Eq,
                g.capacity_mw,
            )?);
        }
    }
    Ok(rows)
}
