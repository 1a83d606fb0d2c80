use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lp::{RowId, VarId};

/// The physical or economic rule a row (or a variable bound) encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    PowerBalance,
    ImbalanceNonNegative,
    ReserveMargin,
    ReserveShortageNonNegative,
    SocFirstHour,
    SocRecursion,
    SocCyclic,
    SocLimitsFixed,
    SocLimitsCandidate,
    ChargeCapFixed,
    DischargeReserveCapFixed,
    ChargeCapCandidate,
    DischargeReserveCapCandidate,
    SocReserveHeadroom,
    StorageDuration,
    StoragePowerInvestLimit,
    StorageEnergyInvestLimit,
    StorageNonNegative,
    OutputCapFirmFixed,
    OutputCapRenewableFixed,
    OutputCapRenewableFixedProvider,
    ReserveCapFirmFixed,
    ReserveCapRenewableFixed,
    OutputCapFirmCandidate,
    OutputCapRenewableCandidate,
    OutputCapRenewableCandidateProvider,
    ReserveCapFirmCandidate,
    ReserveCapRenewableCandidate,
    GenerationInvestLimit,
    RampUpFixed,
    RampDownFixed,
    RampUpCandidate,
    RampDownCandidate,
    RemainingCapacity,
    RetirementWindow,
    OpportunityBudget,
}

impl ConstraintFamily {
    pub fn tag(self) -> &'static str {
        use ConstraintFamily::*;
        match self {
            PowerBalance => "power_balance",
            ImbalanceNonNegative => "imbalance_nonnegative",
            ReserveMargin => "reserve_margin",
            ReserveShortageNonNegative => "reserve_shortage_nonnegative",
            SocFirstHour => "soc_first_hour",
            SocRecursion => "soc_recursion",
            SocCyclic => "soc_cyclic",
            SocLimitsFixed => "soc_limits_fixed",
            SocLimitsCandidate => "soc_limits_candidate",
            ChargeCapFixed => "charge_cap_fixed",
            DischargeReserveCapFixed => "discharge_reserve_cap_fixed",
            ChargeCapCandidate => "charge_cap_candidate",
            DischargeReserveCapCandidate => "discharge_reserve_cap_candidate",
            SocReserveHeadroom => "soc_reserve_headroom",
            StorageDuration => "storage_duration",
            StoragePowerInvestLimit => "storage_power_invest_limit",
            StorageEnergyInvestLimit => "storage_energy_invest_limit",
            StorageNonNegative => "storage_nonnegative",
            OutputCapFirmFixed => "output_cap_firm_fixed",
            OutputCapRenewableFixed => "output_cap_renewable_fixed",
            OutputCapRenewableFixedProvider => "output_cap_renewable_fixed_provider",
            ReserveCapFirmFixed => "reserve_cap_firm_fixed",
            ReserveCapRenewableFixed => "reserve_cap_renewable_fixed",
            OutputCapFirmCandidate => "output_cap_firm_candidate",
            OutputCapRenewableCandidate => "output_cap_renewable_candidate",
            OutputCapRenewableCandidateProvider => "output_cap_renewable_candidate_provider",
            ReserveCapFirmCandidate => "reserve_cap_firm_candidate",
            ReserveCapRenewableCandidate => "reserve_cap_renewable_candidate",
            GenerationInvestLimit => "generation_invest_limit",
            RampUpFixed => "ramp_up_fixed",
            RampDownFixed => "ramp_down_fixed",
            RampUpCandidate => "ramp_up_candidate",
            RampDownCandidate => "ramp_down_candidate",
            RemainingCapacity => "remaining_capacity",
            RetirementWindow => "retirement_window",
            OpportunityBudget => "opportunity_budget",
        }
    }
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Family of every row, plus the families encoded as variable bounds.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConstraintRegistry {
    rows: Vec<ConstraintFamily>,
    bounds: Vec<(VarId, ConstraintFamily)>,
}

impl ConstraintRegistry {
    pub(crate) fn record_row(&mut self, row: RowId, family: ConstraintFamily) {
        debug_assert_eq!(row.0, self.rows.len());
        self.rows.push(family);
    }

    pub(crate) fn record_bound(&mut self, var: VarId, family: ConstraintFamily) {
        self.bounds.push((var, family));
    }

    pub fn row_family(&self, row: RowId) -> Option<ConstraintFamily> {
        self.rows.get(row.0).copied()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row_families(&self) -> &[ConstraintFamily] {
        &self.rows
    }

    pub fn bound_families(&self) -> &[(VarId, ConstraintFamily)] {
        &self.bounds
    }

    /// Rows grouped by family.
    pub fn row_counts(&self) -> BTreeMap<ConstraintFamily, usize> {
        let mut out = BTreeMap::new();
        for f in &self.rows {
            *out.entry(*f).or_insert(0) += 1;
        }
        out
    }

    pub fn rows_of(&self, family: ConstraintFamily) -> impl Iterator<Item = RowId> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter(move |(_, f)| **f == family)
            .map(|(i, _)| RowId(i))
    }
}
