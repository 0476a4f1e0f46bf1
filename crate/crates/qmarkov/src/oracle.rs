//! Brute-force references: channel power iteration, direct long-run
//! averaging, and accumulated-absorption sweeps. These deliberately avoid the
//! spectral machinery so the two routes can check each other.

use crate::channel::{Channel, DensityOperator};
use crate::error::QmcError;
use crate::mat::CMatrix;
use crate::spaces::Subspace;
use crate::tolerance::ToleranceConfig;

/// Trace record of an absorption sweep.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    /// `tr(P_G E~^k(rho))` for `k = 1, 2, ...`.
    pub values: Vec<f64>,
    pub steps: usize,
    pub converged: bool,
    pub final_value: f64,
}

/// `E^k(rho)` by direct repeated application.
pub fn power_iterate(
    channel: &Channel,
    rho: &DensityOperator,
    k: u64,
) -> Result<DensityOperator, QmcError> {
    check_dims(channel, rho)?;
    let mut cur = rho.matrix().clone();
    for _ in 0..k {
        cur = channel.apply_matrix(&cur);
    }
    Ok(DensityOperator::from_psd_unchecked(cur))
}

/// The running average `(1/N) sum_{k=1..N} E^k(rho)`, the definition the
/// spectral asymptotic average must agree with.
pub fn cesaro_average(
    channel: &Channel,
    rho: &DensityOperator,
    n_terms: u64,
) -> Result<DensityOperator, QmcError> {
    assert!(n_terms >= 1, "the average needs at least one term");
    check_dims(channel, rho)?;
    let n = channel.dim();
    let mut cur = rho.matrix().clone();
    let mut acc = CMatrix::zeros(n, n);
    for _ in 0..n_terms {
        cur = channel.apply_matrix(&cur);
        acc += &cur;
    }
    Ok(DensityOperator::from_psd_unchecked(
        acc.scale(1.0 / n_terms as f64),
    ))
}

/// Iterate the chain absorbed into `g`, recording the accumulated mass
/// `tr(P_G E~^k(rho))`. Stops once successive values differ by less than
/// `conv_tol` for `plateau_window` consecutive steps, or at `iter_cap`.
pub fn absorption_sweep(
    channel: &Channel,
    rho: &DensityOperator,
    g: &Subspace,
    conv_tol: f64,
    plateau_window: usize,
    tol: &ToleranceConfig,
) -> Result<IterationTrace, QmcError> {
    check_dims(channel, rho)?;
    assert!(plateau_window >= 1, "plateau window must be positive");
    let absorbed = channel.absorbing_into(g, tol)?;
    let p = g.projector();
    let mut cur = rho.matrix().clone();
    let mut values = Vec::new();
    let mut previous = (p * &cur).trace().re;
    let mut run = 0usize;
    let mut converged = false;
    while (values.len() as u64) < tol.iter_cap {
        cur = absorbed.apply_matrix(&cur);
        let value = (p * &cur).trace().re;
        values.push(value);
        if (value - previous).abs() < conv_tol {
            run += 1;
            if run >= plateau_window {
                converged = true;
                break;
            }
        } else {
            run = 0;
        }
        previous = value;
    }
    let final_value = values.last().copied().unwrap_or(0.0);
    Ok(IterationTrace {
        steps: values.len(),
        values,
        converged,
        final_value,
    })
}

fn check_dims(channel: &Channel, rho: &DensityOperator) -> Result<(), QmcError> {
    if rho.dim() != channel.dim() {
        return Err(QmcError::dims(format!(
            "state dimension {} does not match channel dimension {}",
            rho.dim(),
            channel.dim()
        )));
    }
    Ok(())
}
