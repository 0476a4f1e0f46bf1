//! Reachability, repeated reachability, and persistence probabilities.
//!
//! All three reduce to one projector trace against a long-run average state:
//! reachability absorbs the target first, the other two project onto
//! satisfaction subspaces carved out of the recurrent subspace.

use crate::bscc::contains_bscc;
use crate::channel::{Channel, DensityOperator};
use crate::error::QmcError;
use crate::spaces::Subspace;
use crate::spectral::{asymptotic_average, AsymptoticAverage};
use crate::tolerance::ToleranceConfig;

/// Slack for clamping computed probabilities into `[0, 1]`; anything further
/// out is reported as an error instead of silently clipped.
const PROBABILITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisKind {
    Reach,
    RepeatedReach,
    Persistence,
}

/// Outcome of a probability analysis, with the satisfaction subspace that
/// witnessed it where one exists.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub kind: AnalysisKind,
    pub probability: f64,
    pub witness: Option<Subspace>,
    /// For persistence and repeated reachability: how much of the target
    /// survived intersection with the recurrent subspace.
    pub effective_target_dim: Option<usize>,
}

fn clamp_probability(raw: f64) -> Result<f64, QmcError> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&raw) {
        return Err(QmcError::ProbabilityOutOfRange { value: raw });
    }
    Ok(raw.clamp(0.0, 1.0))
}

fn check_inputs(
    channel: &Channel,
    rho: &DensityOperator,
    g: &Subspace,
) -> Result<(), QmcError> {
    if rho.dim() != channel.dim() || g.ambient_dim() != channel.dim() {
        return Err(QmcError::dims(format!(
            "channel dimension {} vs state {} vs subspace {}",
            channel.dim(),
            rho.dim(),
            g.ambient_dim()
        )));
    }
    if !channel.is_trace_preserving() {
        return Err(QmcError::NotTracePreserving { deviation: f64::NAN });
    }
    if (rho.trace() - 1.0).abs() > PROBABILITY_SLACK {
        return Err(QmcError::InvalidTrace { trace: rho.trace() });
    }
    Ok(())
}

/// Probability of ever hitting `g` from `rho`: absorb the chain into `g`,
/// take the long-run average, and read off the mass inside `g`.
pub fn reach_probability(
    channel: &Channel,
    rho: &DensityOperator,
    g: &Subspace,
    tol: &ToleranceConfig,
) -> Result<AnalysisReport, QmcError> {
    check_inputs(channel, rho, g)?;
    let absorbed = channel.absorbing_into(g, tol)?;
    let avg = asymptotic_average(&absorbed, tol)?;
    let limit = avg.apply(rho)?;
    let raw = (g.projector() * limit.matrix()).trace().re;
    Ok(AnalysisReport {
        kind: AnalysisKind::Reach,
        probability: clamp_probability(raw)?,
        witness: None,
        effective_target_dim: None,
    })
}

/// The satisfaction subspaces of `g`: `x` collects everything whose long-run
/// average meets `g` infinitely often (repeated reachability with certainty),
/// `y` the part that eventually stays inside `g` forever (persistence with
/// certainty). Both live inside the recurrent subspace; `g` itself is
/// intersected with it first, since no transient direction can be visited
/// forever.
pub fn satisfaction_subspaces(
    channel: &Channel,
    g: &Subspace,
    tol: &ToleranceConfig,
) -> Result<(Subspace, Subspace), QmcError> {
    if g.ambient_dim() != channel.dim() {
        return Err(QmcError::dims(format!(
            "subspace ambient dimension {} does not match channel dimension {}",
            g.ambient_dim(),
            channel.dim()
        )));
    }
    let avg = asymptotic_average(channel, tol)?;
    let recurrent = avg.image_of(&Subspace::full(channel.dim()), tol)?;
    let (x, y, _) = satisfaction_in_recurrent(&avg, &recurrent, g, tol)?;
    Ok((x, y))
}

fn satisfaction_in_recurrent(
    avg: &AsymptoticAverage,
    recurrent: &Subspace,
    g: &Subspace,
    tol: &ToleranceConfig,
) -> Result<(Subspace, Subspace, Subspace), QmcError> {
    let g_rec = g.intersect(recurrent, tol)?;
    let x = avg.image_of(&g_rec, tol)?;
    let g_rest = g_rec.ortho_complement_in(recurrent, tol)?;
    let y = avg
        .image_of(&g_rest, tol)?
        .ortho_complement_in(recurrent, tol)?;
    Ok((x, y, g_rec))
}

/// Probability of eventually staying inside `g` forever.
pub fn persistence_probability(
    channel: &Channel,
    rho: &DensityOperator,
    g: &Subspace,
    tol: &ToleranceConfig,
) -> Result<AnalysisReport, QmcError> {
    check_inputs(channel, rho, g)?;
    let avg = asymptotic_average(channel, tol)?;
    let recurrent = avg.image_of(&Subspace::full(channel.dim()), tol)?;
    let (_, y, g_rec) = satisfaction_in_recurrent(&avg, &recurrent, g, tol)?;
    let limit = avg.apply(rho)?;
    let raw = (y.projector() * limit.matrix()).trace().re;
    Ok(AnalysisReport {
        kind: AnalysisKind::Persistence,
        probability: clamp_probability(raw)?,
        witness: Some(y),
        effective_target_dim: Some(g_rec.dim()),
    })
}

/// Probability of visiting `g` infinitely often: the complement, inside the
/// recurrent subspace, of persisting in the unvisited part.
pub fn repeated_reachability_probability(
    channel: &Channel,
    rho: &DensityOperator,
    g: &Subspace,
    tol: &ToleranceConfig,
) -> Result<AnalysisReport, QmcError> {
    check_inputs(channel, rho, g)?;
    let avg = asymptotic_average(channel, tol)?;
    let recurrent = avg.image_of(&Subspace::full(channel.dim()), tol)?;
    let (x, _, g_rec) = satisfaction_in_recurrent(&avg, &recurrent, g, tol)?;
    let rest = x.ortho_complement_in(&recurrent, tol)?;
    let limit = avg.apply(rho)?;
    let raw = 1.0 - (rest.projector() * limit.matrix()).trace().re;
    Ok(AnalysisReport {
        kind: AnalysisKind::RepeatedReach,
        probability: clamp_probability(raw)?,
        witness: Some(x),
        effective_target_dim: Some(g_rec.dim()),
    })
}

/// Check whether repeated measurement of "outside `x`" drains all mass:
/// returns whether the complement of `x` holds no BSCC (so the drain is
/// certain from every start), together with the residual mass the
/// measure-and-discard chain retains from `rho` in the limit.
pub fn absorption_limit_check(
    channel: &Channel,
    rho: &DensityOperator,
    x: &Subspace,
    tol: &ToleranceConfig,
) -> Result<(bool, f64), QmcError> {
    if rho.dim() != channel.dim() || x.ambient_dim() != channel.dim() {
        return Err(QmcError::dims(format!(
            "channel dimension {} vs state {} vs subspace {}",
            channel.dim(),
            rho.dim(),
            x.ambient_dim()
        )));
    }
    let outside = x.complement(tol);
    let drains_everywhere = !contains_bscc(channel, &outside, tol)?;
    let discard = channel.restricted_to(&outside, tol)?;
    let avg = asymptotic_average(&discard, tol)?;
    let residual = avg.apply(rho)?.trace().max(0.0);
    Ok((drains_everywhere, residual))
}
