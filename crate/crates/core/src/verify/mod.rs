//! The check catalogue: every identity and inequality of the calculus as a
//! named, seeded, reproducible check producing a [`Report`].

mod approx_checks;
pub mod catalogue;
mod functions;
mod ito_checks;
mod kernel_checks;
mod mc_checks;
pub mod random;
mod report;

pub use approx_checks::{cadlag_moment_at, loglog_slope, run_theorem1, CADLAG_SLOPE_MIN, THEOREM1_FRACTION};
pub use functions::FunctionSpec;
pub use ito_checks::{
    ito_anchor, ito_summaries, prop5_summaries, run_ito_formula, run_prop5, ItoSummary, ItoTerms, ITO_TOL,
};
pub use kernel_checks::{run_kernel_identity, EXACT_TOL, KERNEL_CHECKS};
pub use mc_checks::{
    burkholder_ratio, pathwise_gap, run_burkholder, BurkholderRatio, CHARLIER_TOL, PATHWISE_PATHS, PROP1_TOL, PROP3_TOL, Z_TOL,
};
pub use report::{digest, Detail, Report, StatKind};

use crate::{ChaosError, Result};

/// Inputs shared by every check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub seed: u64,
    /// Monte Carlo paths; pathwise checks use at most [`PATHWISE_PATHS`].
    pub samples: usize,
    /// Cells of the uniform catalogue grid.
    pub grid_cells: usize,
    pub degree_cap: usize,
    /// Dyadic depths of the approximation check.
    pub depths: Vec<u32>,
    /// Random instances per exact identity.
    pub instances: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            samples: 100_000,
            grid_cells: 8,
            degree_cap: crate::chaos::DEFAULT_DEGREE_CAP,
            depths: (1..=6).collect(),
            instances: 100,
        }
    }
}

impl CheckConfig {
    /// Canonical text of the inputs, digested into every report.
    pub fn describe(&self, id: &str) -> String {
        format!(
            "check={id};seed={};samples={};grid_cells={};degree_cap={};depths={:?};instances={}",
            self.seed, self.samples, self.grid_cells, self.degree_cap, self.depths, self.instances
        )
    }
}

/// Catalogue entry: check id and the statement it tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckInfo {
    pub id: &'static str,
    pub statement: &'static str,
}

pub const CHECKS: [CheckInfo; 20] = [
    CheckInfo { id: "duality", statement: "E[F δ(u)] = E∫ D_sF u_s ds" },
    CheckInfo { id: "covariance", statement: "E[δ(u)δ(v)] = E∫u v ds + E∫∫ D_r u_s D_s v_r dr ds" },
    CheckInfo { id: "commutation", statement: "D_t δ(u) = u_t + δ(D_t u)" },
    CheckInfo { id: "ibp", statement: "δ(Fu) = F δ(u) − ⟨DF, u⟩ − δ(DF·u)" },
    CheckInfo { id: "chain_rule", statement: "D(FG) = F DG + G DF + DF DG" },
    CheckInfo { id: "r2", statement: "D_t E(F|F_A) = E(D_t F|F_A) 1_A(t)" },
    CheckInfo { id: "r3", statement: "E(X_t − X_s | F_[s,t]^c) = 0" },
    CheckInfo { id: "meyer", statement: "E δ(u)² ≤ ‖u‖²_{1,2}" },
    CheckInfo { id: "clark_ocone", statement: "G = E(G|F_[s,t]^c) + δ(^(p,t)(DG) 1_[s,t])" },
    CheckInfo { id: "prop3_grid", statement: "δ(u 1_[0,t]) = δ(E(w_·|F_[·,t]^c) 1_[0,t]) on the kernel grid" },
    CheckInfo { id: "isometry", statement: "E I_n(f)² = n! ‖f‖² (Monte Carlo)" },
    CheckInfo { id: "charlier_consistency", statement: "I_n(1_B^⊗n) = n! C_n(λ(B), Ñ(B)); recurrence = series" },
    CheckInfo { id: "prop1_equivalence", statement: "δ(u 1_[0,t]) = Itô integral for F_(·,t]^c-predictable u (pathwise)" },
    CheckInfo { id: "prop3_pathwise", statement: "X_t = ∫_0^t E(w_s|F_[s,t]^c) dÑ_s (pathwise)" },
    CheckInfo { id: "ito_formula", statement: "f(Y_t) change of variables, both second-order variants (pathwise)" },
    CheckInfo { id: "prop5", statement: "f(M_t M'_t) for martingale × backward martingale (pathwise)" },
    CheckInfo { id: "corollary1", statement: "f(Ñ_t(Ñ_1 − Ñ_t)) change of variables (pathwise)" },
    CheckInfo { id: "burkholder", statement: "E|Y_t|^p vs E(∫ ĥ² dN)^{p/2}, p ∈ {1, 2, 4}" },
    CheckInfo { id: "cadlag_moment", statement: "E|(X_{t+h}−X_t)(X_t−X_{t−h})|² = O(h²)" },
    CheckInfo { id: "theorem1", statement: "V(X − Y^π) → 0 along dyadic π" },
];

/// Look up a check by id.
pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

/// Run one catalogued check.
pub fn run_check(id: &str, cfg: &CheckConfig) -> Result<Report> {
    let report = match id {
        _ if KERNEL_CHECKS.contains(&id) => run_kernel_identity(id, cfg)?,
        "isometry" => mc_checks::isometry(cfg)?,
        "charlier_consistency" => mc_checks::charlier_consistency(cfg)?,
        "prop1_equivalence" => mc_checks::prop1_equivalence(cfg)?,
        "prop3_pathwise" => mc_checks::prop3_pathwise(cfg)?,
        "ito_formula" => ito_checks::ito_formula(cfg)?,
        "prop5" => ito_checks::prop5(cfg)?,
        "corollary1" => ito_checks::corollary1(cfg)?,
        "burkholder" => mc_checks::burkholder(cfg)?,
        "cadlag_moment" => approx_checks::cadlag_moment(cfg)?,
        "theorem1" => approx_checks::theorem1(cfg)?,
        other => return Err(ChaosError::UnknownCheck(other.to_string())),
    };
    Ok(report.with_inputs(&cfg.describe(id)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_ids_are_unique_and_dispatchable() {
        let mut ids: Vec<&str> = CHECKS.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), CHECKS.len());
        assert!(matches!(run_check("nope", &CheckConfig::default()), Err(ChaosError::UnknownCheck(_))));
    }

    #[test]
    fn digest_depends_on_inputs() {
        let cfg = CheckConfig { instances: 2, ..CheckConfig::default() };
        let a = run_check("r2", &cfg).unwrap();
        let b = run_check("r2", &CheckConfig { seed: 8, ..cfg.clone() }).unwrap();
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a, run_check("r2", &cfg).unwrap());
    }
}
