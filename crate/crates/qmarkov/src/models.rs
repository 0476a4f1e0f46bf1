//! Built-in models: a five-level chain with two recurrent blocks and a
//! decaying level, and Hadamard walks on a cycle with optional absorbing
//! boundaries.

use crate::channel::Channel;
use crate::error::QmcError;
use crate::mat::{c64, CMatrix};
use crate::spaces::Subspace;
use crate::tolerance::ToleranceConfig;

/// A five-dimensional chain whose recurrent part splits into two
/// two-dimensional blocks, `span{|0>, |1>}` and `span{|2>, |3>}`, while `|4>`
/// decays into everything. The fixed space also couples the blocks, so the
/// decomposition into blocks is not unique; this makes the model a good
/// stress case for BSCC splitting.
pub fn five_level() -> Channel {
    let h = 0.5;
    let mut e1 = CMatrix::zeros(5, 5);
    e1[(1, 0)] = c64(h, 0.0);
    e1[(1, 1)] = c64(h, 0.0);
    e1[(3, 2)] = c64(h, 0.0);
    e1[(3, 3)] = c64(h, 0.0);
    let mut e2 = CMatrix::zeros(5, 5);
    e2[(1, 0)] = c64(h, 0.0);
    e2[(1, 1)] = c64(-h, 0.0);
    e2[(3, 2)] = c64(h, 0.0);
    e2[(3, 3)] = c64(-h, 0.0);
    let mut e3 = CMatrix::zeros(5, 5);
    e3[(0, 0)] = c64(h, 0.0);
    e3[(0, 1)] = c64(h, 0.0);
    e3[(2, 2)] = c64(h, 0.0);
    e3[(2, 3)] = c64(h, 0.0);
    let mut e4 = CMatrix::zeros(5, 5);
    e4[(0, 0)] = c64(h, 0.0);
    e4[(0, 1)] = c64(-h, 0.0);
    e4[(2, 2)] = c64(h, 0.0);
    e4[(2, 3)] = c64(-h, 0.0);
    let mut e5 = CMatrix::zeros(5, 5);
    e5[(0, 4)] = c64(0.1, 0.0);
    e5[(1, 4)] = c64(0.1, 0.0);
    e5[(2, 4)] = c64(0.1, 0.0);
    e5[(3, 4)] = c64(0.4, 0.0);
    e5[(4, 4)] = c64(0.9, 0.0);
    Channel::new(
        vec![e1, e2, e3, e4, e5],
        &ToleranceConfig::default(),
    )
    .expect("the five-level Kraus family is trace-preserving by construction")
}

fn walk_index(position: usize, coin: usize) -> usize {
    2 * position + coin
}

/// The coined Hadamard walk on an `n`-cycle as a single unitary Kraus
/// operator. States are indexed `2 * position + coin`; the coin flips by the
/// Hadamard, then coin 0 steps right and coin 1 steps left.
pub fn hadamard_walk(positions: usize, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
    if positions < 2 {
        return Err(QmcError::InvalidModel(format!(
            "a walk needs at least 2 positions, got {positions}"
        )));
    }
    let dim = 2 * positions;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMatrix::zeros(dim, dim);
    for p in 0..positions {
        let right = (p + 1) % positions;
        let left = (p + positions - 1) % positions;
        // Column for |p, 0>: coin goes to (|0> + |1>)/sqrt(2), then shifts.
        u[(walk_index(right, 0), walk_index(p, 0))] = c64(r, 0.0);
        u[(walk_index(left, 1), walk_index(p, 0))] = c64(r, 0.0);
        // Column for |p, 1>: coin goes to (|0> - |1>)/sqrt(2), then shifts.
        u[(walk_index(right, 0), walk_index(p, 1))] = c64(r, 0.0);
        u[(walk_index(left, 1), walk_index(p, 1))] = c64(-r, 0.0);
    }
    Channel::new(vec![u], tol)
}

/// The Hadamard walk with the listed boundary positions made absorbing:
/// Kraus operators `{P_B, U (I - P_B)}` where `B` spans both coin states at
/// every boundary position.
pub fn hadamard_walk_absorbing(
    positions: usize,
    boundary: &[usize],
    tol: &ToleranceConfig,
) -> Result<Channel, QmcError> {
    let walk = hadamard_walk(positions, tol)?;
    let b = walk_position_subspace(positions, boundary)?;
    walk.absorbing_into(&b, tol)
}

/// The subspace spanned by both coin states at each of the given positions.
pub fn walk_position_subspace(
    positions: usize,
    marked: &[usize],
) -> Result<Subspace, QmcError> {
    if let Some(&bad) = marked.iter().find(|&&p| p >= positions) {
        return Err(QmcError::InvalidModel(format!(
            "boundary position {bad} is outside the {positions}-cycle"
        )));
    }
    let indices: Vec<usize> = marked
        .iter()
        .flat_map(|&p| [walk_index(p, 0), walk_index(p, 1)])
        .collect();
    Ok(Subspace::from_basis_indices(2 * positions, &indices))
}
