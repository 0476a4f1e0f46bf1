//! Bottom strongly connected component (BSCC) checking and the decomposition
//! of the state space into BSCCs plus the largest transient subspace.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{positive_part_split_with_cutoff, Channel};
use crate::error::QmcError;
use crate::spaces::{image, Subspace};
use crate::spectral::{asymptotic_average, fixed_point_basis};
use crate::tolerance::ToleranceConfig;

/// Result of decomposing the state space under a channel.
///
/// `bsccs` are mutually orthogonal invariant subspaces on which the channel
/// restricts to a chain with a unique, full-support fixed state; `transient`
/// is the orthogonal complement of their span, where all mass eventually
/// drains away. BSCCs are sorted by dimension, then by a canonical projector
/// fingerprint, so equal decompositions report in one order.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub bsccs: Vec<Subspace>,
    pub transient: Subspace,
}

impl Decomposition {
    pub fn bscc_dimensions(&self) -> Vec<usize> {
        self.bsccs.iter().map(|b| b.dim()).collect()
    }
}

/// Decide whether `x` is a BSCC of the channel: invariant, and the restricted
/// chain has exactly one fixed state, whose support is all of `x`.
pub fn check_bscc(
    channel: &Channel,
    x: &Subspace,
    tol: &ToleranceConfig,
) -> Result<bool, QmcError> {
    if x.is_zero() {
        return Err(QmcError::ZeroSubspace);
    }
    if !x.contains(&image(channel, x, tol)?, tol) {
        return Ok(false);
    }
    let restricted = channel.restricted_to(x, tol)?;
    let basis = fixed_point_basis(&restricted, tol);
    match basis.elements.as_slice() {
        [single] => {
            let support = Subspace::support(single.matrix(), tol)?;
            Ok(support.approx_eq(x, tol))
        }
        _ => Ok(false),
    }
}

/// Split the support of a fixed-point state into BSCCs.
///
/// `x` must be invariant and equal to the support of some fixed state of the
/// channel (the recurrent subspace or any invariant chunk of it). The fixed
/// basis of the restricted chain is shuffled by `seed` before picking the
/// pair to separate, so distinct seeds can surface distinct but equally valid
/// BSCC families; the dimension multiset is seed-independent.
pub fn decompose_fixed_support(
    channel: &Channel,
    x: &Subspace,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Vec<Subspace>, QmcError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    split_recursively(channel, x, &mut rng, tol, 0, &mut out)?;
    Ok(out)
}

fn split_recursively(
    channel: &Channel,
    x: &Subspace,
    rng: &mut ChaCha8Rng,
    tol: &ToleranceConfig,
    depth: usize,
    out: &mut Vec<Subspace>,
) -> Result<(), QmcError> {
    if depth > channel.dim() {
        return Err(QmcError::DecompositionDepthExceeded { depth });
    }
    let restricted = channel.restricted_to(x, tol)?;
    let mut elements = fixed_point_basis(&restricted, tol).elements;
    match elements.len() {
        0 => Err(QmcError::NoFixedPoint),
        1 => {
            out.push(Subspace::support(elements[0].matrix(), tol)?);
            Ok(())
        }
        _ => {
            elements.shuffle(rng);
            let delta = elements[0].matrix() - elements[1].matrix();
            let mut sub = split_support(&delta, x, tol, tol.tau_rank)?;
            if sub.is_none() {
                // Rounding can smear the split across all of x; retry once
                // with a coarser eigenvalue cutoff before giving up.
                sub = split_support(&delta, x, tol, tol.tau_rank * 10.0)?;
            }
            let s = sub.ok_or(QmcError::SplitDidNotShrink)?;
            let rest = s.ortho_complement_in(x, tol)?;
            split_recursively(channel, &s, rng, tol, depth + 1, out)?;
            split_recursively(channel, &rest, rng, tol, depth + 1, out)
        }
    }
}

/// Support of the positive part of `delta`, provided it is a proper nonzero
/// subspace of `x`; `None` signals a failed (non-shrinking) split.
fn split_support(
    delta: &crate::mat::CMatrix,
    x: &Subspace,
    tol: &ToleranceConfig,
    cutoff: f64,
) -> Result<Option<Subspace>, QmcError> {
    let (plus, _) = positive_part_split_with_cutoff(delta, tol, cutoff)?;
    let Some(plus) = plus else {
        return Ok(None);
    };
    let support = Subspace::support(plus.matrix(), tol)?;
    if support.is_zero() || support.dim() >= x.dim() {
        return Ok(None);
    }
    Ok(Some(support))
}

/// Decompose the whole state space: BSCCs of the recurrent subspace plus the
/// largest transient subspace (the recurrent subspace's complement).
pub fn decompose_state_space(
    channel: &Channel,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Decomposition, QmcError> {
    let avg = asymptotic_average(channel, tol)?;
    let recurrent = avg.image_of(&Subspace::full(channel.dim()), tol)?;
    let mut bsccs = decompose_fixed_support(channel, &recurrent, seed, tol)?;
    sort_canonically(&mut bsccs);
    let transient = recurrent.complement(tol);
    Ok(Decomposition { bsccs, transient })
}

fn sort_canonically(bsccs: &mut [Subspace]) {
    bsccs.sort_by_cached_key(|b| {
        let mut key: Vec<(usize, i64, i64)> = vec![(b.dim(), 0, 0)];
        for z in b.projector().iter() {
            key.push((0, round_digit(z.re), round_digit(z.im)));
        }
        key
    });
}

fn round_digit(x: f64) -> i64 {
    (x * 1e12).round() as i64
}

/// Whether `x` lies in the transient subspace (orthogonal to every BSCC).
pub fn is_transient(
    channel: &Channel,
    x: &Subspace,
    tol: &ToleranceConfig,
) -> Result<bool, QmcError> {
    let avg = asymptotic_average(channel, tol)?;
    let recurrent = avg.image_of(&Subspace::full(channel.dim()), tol)?;
    Ok(recurrent.complement(tol).contains(x, tol))
}

/// Whether the invariant-closed compression of the channel onto `y` still
/// carries a fixed state, i.e. `y` contains some BSCC.
pub fn contains_bscc(
    channel: &Channel,
    y: &Subspace,
    tol: &ToleranceConfig,
) -> Result<bool, QmcError> {
    if y.is_zero() {
        return Ok(false);
    }
    let compressed = channel.compressed_to(y, tol)?;
    Ok(!fixed_point_basis(&compressed, tol).elements.is_empty())
}
