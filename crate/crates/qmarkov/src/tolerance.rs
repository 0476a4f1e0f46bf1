use serde::{Deserialize, Serialize};

/// Numerical cutoffs shared by every rank, eigenvalue, and validation decision.
///
/// `tau_rank` drives support and rank decisions (relative to the largest
/// eigenvalue or R-diagonal magnitude), `tau_eig` bounds the eigenvalue-1
/// cluster of a channel's matrix representation, and the remaining slacks
/// guard input validation. `iter_cap` bounds the iteration oracles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub tau_rank: f64,
    pub tau_eig: f64,
    pub tau_tp: f64,
    pub tau_herm: f64,
    pub tau_psd: f64,
    pub tau_trace: f64,
    pub iter_cap: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tau_rank: 1e-8,
            tau_eig: 1e-8,
            tau_tp: 1e-9,
            tau_herm: 1e-9,
            tau_psd: 1e-9,
            tau_trace: 1e-9,
            iter_cap: 1_000_000,
        }
    }
}

impl ToleranceConfig {
    /// Override the rank and eigenvalue-cluster cutoffs together.
    pub fn with_rank_cutoff(mut self, cutoff: f64) -> Self {
        assert!(cutoff > 0.0, "rank cutoff must be positive");
        self.tau_rank = cutoff;
        self.tau_eig = cutoff;
        self
    }
}
