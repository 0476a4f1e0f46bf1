//! Fixed-point structure of a channel: density-operator bases of the fixed
//! space and the asymptotic average as an eigenvalue-1 spectral projector.

use crate::channel::{positive_part_split, Channel, DensityOperator};
use crate::error::QmcError;
use crate::mat::{self, CMatrix, CVector};
use crate::spaces::Subspace;
use crate::tolerance::ToleranceConfig;

/// Largest tolerated defect in `m_infty^2 - m_infty` before the projector is
/// declared numerically defective. Looser than `tau_eig` so it only fires on
/// genuine breakdown, not on accumulated rounding in large products.
const PROJECTOR_DEFECT_GUARD: f64 = 1e-6;

/// Density operators spanning the fixed space of a channel.
///
/// For a trace-nonincreasing channel the fixed space is closed under the
/// adjoint, so it admits a basis of genuine states; `elements` holds one
/// unit-trace state per complex dimension of the fixed space.
#[derive(Debug, Clone)]
pub struct FixedPointBasis {
    pub elements: Vec<DensityOperator>,
    pub dimension_of_fixed_space: usize,
}

/// Compute a density-operator basis of `{A : E(A) = A}`.
///
/// Pipeline: null space of `M - I` on vectorized operators, split each basis
/// element into Hermitian and anti-Hermitian parts, split those into positive
/// and negative parts, normalize to unit trace, then keep the earliest
/// maximal linearly independent subset.
pub fn fixed_point_basis(channel: &Channel, tol: &ToleranceConfig) -> FixedPointBasis {
    let n = channel.dim();
    let m = channel.matrix_representation();
    let shifted = m - CMatrix::identity(n * n, n * n);
    // Trace-preserving maps have operator scale one, so the eigenvalue-1
    // cutoff is anchored there; a residual of pure noise is all null space.
    let cutoff = tol.tau_eig * mat::max_abs(&shifted).max(1.0);
    let null = mat::null_space(&shifted, cutoff);
    let dimension_of_fixed_space = null.ncols();

    let mut candidates: Vec<DensityOperator> = Vec::new();
    for col in null.column_iter() {
        let f = mat::unvec_row_major(&col.into_owned(), n, n);
        let scale = mat::max_abs(&f);
        let herm = mat::hermitize(&f);
        let skew = (&f - f.adjoint()) * mat::c64(0.0, -0.5);
        for part in [herm, skew] {
            // A part this small against the unit-norm null vector is rounding
            // noise, not a genuine component of the fixed space.
            if mat::max_abs(&part) <= tol.tau_rank * scale {
                continue;
            }
            let (plus, minus) =
                positive_part_split(&part, tol).expect("part is Hermitian by construction");
            for side in [plus, minus].into_iter().flatten() {
                if let Some(unit) = side.unit_trace() {
                    let residual =
                        mat::max_abs(&(channel.apply_matrix(unit.matrix()) - unit.matrix()));
                    if residual <= tol.tau_eig * n as f64 {
                        candidates.push(unit);
                    }
                }
            }
        }
    }

    FixedPointBasis {
        elements: prune_to_independent(candidates, tol.tau_rank),
        dimension_of_fixed_space,
    }
}

/// Earliest-index maximal linearly independent subset, decided by modified
/// Gram-Schmidt over the vectorized candidates.
fn prune_to_independent(candidates: Vec<DensityOperator>, cutoff: f64) -> Vec<DensityOperator> {
    let mut kept: Vec<DensityOperator> = Vec::new();
    let mut ortho: Vec<CVector> = Vec::new();
    for cand in candidates {
        let mut v = mat::vec_row_major(cand.matrix());
        let original = v.norm();
        if original == 0.0 {
            continue;
        }
        for q in &ortho {
            let coeff = q.dotc(&v);
            v -= q * coeff;
        }
        if v.norm() > cutoff * original {
            let unit = v.unscale(v.norm());
            ortho.push(unit);
            kept.push(cand);
        }
    }
    kept
}

/// The asymptotic average `E_inf` of a channel, realized as the spectral
/// projector onto the eigenvalue-1 eigenspace of the matrix representation.
///
/// With `R` and `L` orthonormal bases of the right and left eigenspaces,
/// the projector is `R (L'R)^{-1} L'`; it absorbs powers of the channel,
/// so applying it yields the limit of long-run time averages.
#[derive(Debug, Clone)]
pub struct AsymptoticAverage {
    m_infty: CMatrix,
    dim: usize,
    fixed_dimension: usize,
}

/// Build the asymptotic average of a channel.
pub fn asymptotic_average(
    channel: &Channel,
    tol: &ToleranceConfig,
) -> Result<AsymptoticAverage, QmcError> {
    let n = channel.dim();
    let m = channel.matrix_representation();
    let id = CMatrix::identity(n * n, n * n);
    let shifted = m - &id;
    let cutoff = tol.tau_eig * mat::max_abs(&shifted).max(1.0);
    let right = mat::null_space(&shifted, cutoff);
    let left = mat::null_space(&(m.adjoint() - &id), cutoff);
    let k = right.ncols();
    if k != left.ncols() {
        return Err(QmcError::DefectiveSpectralProjector {
            residual: (k as f64 - left.ncols() as f64).abs(),
        });
    }
    if k == 0 {
        return Ok(AsymptoticAverage {
            m_infty: CMatrix::zeros(n * n, n * n),
            dim: n,
            fixed_dimension: 0,
        });
    }
    let gram = left.adjoint() * &right;
    let solved = gram
        .lu()
        .solve(&left.adjoint())
        .ok_or(QmcError::DefectiveSpectralProjector { residual: f64::INFINITY })?;
    let m_infty = &right * solved;
    let defect = mat::max_abs(&(&m_infty * &m_infty - &m_infty));
    if defect > PROJECTOR_DEFECT_GUARD {
        return Err(QmcError::DefectiveSpectralProjector { residual: defect });
    }
    Ok(AsymptoticAverage {
        m_infty,
        dim: n,
        fixed_dimension: k,
    })
}

impl AsymptoticAverage {
    /// The projector acting on row-major vectorized operators.
    pub fn matrix(&self) -> &CMatrix {
        &self.m_infty
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension of the fixed space the projector maps onto.
    pub fn fixed_dimension(&self) -> usize {
        self.fixed_dimension
    }

    /// The long-run average state `E_inf(rho)`, a fixed point of the channel.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, QmcError> {
        if rho.dim() != self.dim {
            return Err(QmcError::dims(format!(
                "state dimension {} does not match average dimension {}",
                rho.dim(),
                self.dim
            )));
        }
        Ok(DensityOperator::from_psd_unchecked(
            self.apply_matrix(rho.matrix()),
        ))
    }

    /// The raw linear action on an arbitrary matrix.
    pub fn apply_matrix(&self, a: &CMatrix) -> CMatrix {
        assert_eq!(a.shape(), (self.dim, self.dim), "operand dimension mismatch");
        mat::unvec_row_major(&(&self.m_infty * mat::vec_row_major(a)), self.dim, self.dim)
    }

    /// `E_inf(g)`: the support of the average of the normalized projector
    /// state of `g`. Zero input maps to the zero subspace.
    pub fn image_of(&self, g: &Subspace, tol: &ToleranceConfig) -> Result<Subspace, QmcError> {
        if g.ambient_dim() != self.dim {
            return Err(QmcError::dims(format!(
                "subspace ambient dimension {} does not match average dimension {}",
                g.ambient_dim(),
                self.dim
            )));
        }
        if g.is_zero() {
            return Ok(Subspace::zero(self.dim));
        }
        let state = g.projector().scale(1.0 / g.dim() as f64);
        Subspace::support(&self.apply_matrix(&state), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c64, max_abs};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn amplitude_damping(gamma: f64) -> Channel {
        let e0 = CMatrix::from_row_slice(
            2,
            2,
            &[
                c64(1.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64((1.0 - gamma).sqrt(), 0.0),
            ],
        );
        let e1 = CMatrix::from_row_slice(
            2,
            2,
            &[
                c64(0.0, 0.0),
                c64(gamma.sqrt(), 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
            ],
        );
        Channel::new(vec![e0, e1], &tol()).unwrap()
    }

    #[test]
    fn damping_has_unique_fixed_state() {
        let ch = amplitude_damping(0.3);
        let basis = fixed_point_basis(&ch, &tol());
        assert_eq!(basis.dimension_of_fixed_space, 1);
        assert_eq!(basis.elements.len(), 1);
        let rho = &basis.elements[0];
        assert!((rho.trace() - 1.0).abs() < 1e-10);
        let moved = ch.apply(rho).unwrap();
        assert!(max_abs(&(moved.matrix() - rho.matrix())) < 1e-9);
        // The damped qubit relaxes onto |0><0|.
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unitary_channel_fixes_every_commutant_element() {
        // Z rotation: fixed space is the diagonal, complex dimension 2.
        let z = CMatrix::from_row_slice(
            2,
            2,
            &[
                c64(1.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.6, 0.8),
            ],
        );
        let ch = Channel::new(vec![z], &tol()).unwrap();
        let basis = fixed_point_basis(&ch, &tol());
        assert_eq!(basis.dimension_of_fixed_space, 2);
        assert_eq!(basis.elements.len(), 2);
        for rho in &basis.elements {
            let moved = ch.apply(rho).unwrap();
            assert!(max_abs(&(moved.matrix() - rho.matrix())) < 1e-9);
        }
    }

    #[test]
    fn average_is_an_idempotent_that_absorbs_the_channel() {
        let ch = amplitude_damping(0.5);
        let avg = asymptotic_average(&ch, &tol()).unwrap();
        let p = avg.matrix();
        let m = ch.matrix_representation();
        assert!(max_abs(&(p * p - p)) < 1e-10);
        assert!(max_abs(&(m * p - p)) < 1e-10);
        assert!(max_abs(&(p * m - p)) < 1e-10);
    }

    #[test]
    fn average_of_damping_lands_on_the_sink() {
        let ch = amplitude_damping(0.25);
        let avg = asymptotic_average(&ch, &tol()).unwrap();
        let rho = DensityOperator::basis_state(2, 1);
        let limit = avg.apply(&rho).unwrap();
        assert!((limit.matrix()[(0, 0)].re - 1.0).abs() < 1e-9);
        assert!((limit.trace() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn average_image_of_zero_subspace_is_zero() {
        let ch = amplitude_damping(0.25);
        let avg = asymptotic_average(&ch, &tol()).unwrap();
        let img = avg.image_of(&Subspace::zero(2), &tol()).unwrap();
        assert!(img.is_zero());
    }

    #[test]
    fn average_of_fixed_point_free_subchannel_is_zero() {
        // Strictly contractive sub-channel: E(rho) = 0.5 rho.
        let e = CMatrix::identity(2, 2).scale(0.5f64.sqrt());
        let ch = Channel::sub_channel(vec![e], &tol()).unwrap();
        let avg = asymptotic_average(&ch, &tol()).unwrap();
        assert_eq!(avg.fixed_dimension(), 0);
        assert!(max_abs(avg.matrix()) == 0.0);
    }
}
