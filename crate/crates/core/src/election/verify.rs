use super::{
    distance_unchecked, flip_budget, hamming, norm::approx_le, tally_and_decide, ElectionError,
    Instance, Norm, Objective, OutcomeReport,
};

#[derive(Clone, Debug, PartialEq)]
pub enum CertificationFailure {
    BudgetViolation { used: f64, budget: f64 },
    OutcomeMismatch {
        objective: Objective,
        target_score: f64,
        best_rival_score: f64,
    },
    NonBinary { coord: usize, value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// `||witness - c_1||_p`.
    pub budget_used: f64,
    pub budget_slack: f64,
    pub outcome: OutcomeReport,
    pub failures: Vec<CertificationFailure>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes budget feasibility and the election outcome for a claimed
/// perceived target position, sharing nothing with any solver.
pub fn verify_witness(instance: &Instance, witness: &[f64]) -> Result<Certificate, ElectionError> {
    let outcome = tally_and_decide(instance, witness)?;
    let c1 = instance.target();
    let budget = instance.budget();
    let mut failures = Vec::new();
    let used = distance_unchecked(witness, c1, instance.norm());
    let within = if instance.is_binary() {
        for (coord, &value) in witness.iter().enumerate() {
            if value != 0.0 && value != 1.0 {
                failures.push(CertificationFailure::NonBinary { coord, value });
            }
        }
        match instance.norm() {
            Norm::L(p) => hamming(witness, c1) <= flip_budget(budget, p),
            Norm::Inf => approx_le(used, budget),
        }
    } else {
        approx_le(used, budget)
    };
    if !within {
        failures.push(CertificationFailure::BudgetViolation { used, budget });
    }
    if !outcome.success {
        failures.push(CertificationFailure::OutcomeMismatch {
            objective: instance.objective(),
            target_score: outcome.target_score(),
            best_rival_score: outcome.best_rival().1,
        });
    }
    Ok(Certificate { budget_used: used, budget_slack: budget - used, outcome, failures })
}
