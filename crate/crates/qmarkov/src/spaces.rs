//! Subspaces of the state space: orthonormal bases with cached projectors,
//! supports of states, and images under channels.

use crate::channel::{Channel, DensityOperator};
use crate::error::QmcError;
use crate::mat::{self, CMatrix};
use crate::tolerance::ToleranceConfig;

/// A subspace of `C^n`, stored as an orthonormal basis plus its projector.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: CMatrix,
    projector: CMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self::from_orthonormal(ambient, CMatrix::zeros(ambient, 0))
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_orthonormal(ambient, CMatrix::identity(ambient, ambient))
    }

    /// Canonicalize an arbitrary spanning set (columns) into an orthonormal
    /// basis; dependent and numerically negligible columns are dropped.
    pub fn from_spanning(vectors: &CMatrix, tol: &ToleranceConfig) -> Self {
        let basis = mat::column_span_basis(vectors, tol.tau_rank);
        Self::from_orthonormal(vectors.nrows(), basis)
    }

    /// Span of the listed computational basis vectors.
    pub fn from_basis_indices(ambient: usize, indices: &[usize]) -> Self {
        let mut basis = CMatrix::zeros(ambient, indices.len());
        for (col, &k) in indices.iter().enumerate() {
            assert!(k < ambient, "basis index out of range");
            basis[(k, col)] = mat::c64(1.0, 0.0);
        }
        Self::from_orthonormal(ambient, basis)
    }

    pub(crate) fn from_orthonormal(ambient: usize, basis: CMatrix) -> Self {
        debug_assert_eq!(basis.nrows(), ambient);
        let projector = &basis * basis.adjoint();
        Self {
            ambient,
            basis,
            projector,
        }
    }

    /// Support of a positive semidefinite matrix: the span of eigenvectors
    /// with eigenvalue above `tau_rank` relative to the largest one.
    pub fn support(rho: &CMatrix, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        let (values, vectors) = mat::hermitian_eig(rho, tol)?;
        let ambient = rho.nrows();
        if ambient == 0 {
            return Ok(Self::zero(0));
        }
        let top = values[0];
        let bottom = values[ambient - 1];
        if bottom < -tol.tau_psd * top.abs().max(1.0) {
            return Err(QmcError::NotPositiveSemidefinite {
                min_eigenvalue: bottom,
            });
        }
        let threshold = tol.tau_rank * top.max(0.0);
        let rank = values.iter().take_while(|&&l| l > threshold).count();
        Ok(Self::from_orthonormal(
            ambient,
            vectors.columns(0, rank).into_owned(),
        ))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orthonormal basis, one column per dimension.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// The orthogonal projector onto the subspace.
    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    /// Smallest subspace containing both operands.
    pub fn join(&self, other: &Self, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        self.check_ambient(other)?;
        let mut stacked = CMatrix::zeros(self.ambient, self.dim() + other.dim());
        stacked.columns_mut(0, self.dim()).copy_from(&self.basis);
        stacked
            .columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Ok(Self::from_spanning(&stacked, tol))
    }

    /// Largest subspace contained in both operands, computed through
    /// complements: `(self^perp v other^perp)^perp`.
    pub fn intersect(&self, other: &Self, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        self.check_ambient(other)?;
        let joined = self.complement(tol).join(&other.complement(tol), tol)?;
        Ok(joined.complement(tol))
    }

    /// Orthogonal complement within the full ambient space. Pivots of the
    /// projector residual are judged on the absolute scale: `I - P` has
    /// singular values 0 and 1, so anything below `tau_rank` is noise even
    /// when the whole residual is noise.
    pub fn complement(&self, tol: &ToleranceConfig) -> Self {
        let residual = CMatrix::identity(self.ambient, self.ambient) - &self.projector;
        let basis = mat::column_span_basis_anchored(&residual, tol.tau_rank);
        Self::from_orthonormal(self.ambient, basis)
    }

    /// Orthogonal complement of `self` within `within`; requires containment.
    pub fn ortho_complement_in(
        &self,
        within: &Self,
        tol: &ToleranceConfig,
    ) -> Result<Self, QmcError> {
        self.check_ambient(within)?;
        if !within.contains(self, tol) {
            return Err(QmcError::NotContained);
        }
        self.complement(tol).intersect(within, tol)
    }

    /// Whether every basis vector of `other` lies in `self` within `tau_rank`.
    pub fn contains(&self, other: &Self, tol: &ToleranceConfig) -> bool {
        assert_eq!(
            self.ambient, other.ambient,
            "subspaces live in different ambient spaces"
        );
        let residual = other.basis() - &self.projector * other.basis();
        residual
            .column_iter()
            .all(|col| col.norm() <= tol.tau_rank * (self.ambient as f64).sqrt())
    }

    /// Mutual containment within `tau_rank`.
    pub fn approx_eq(&self, other: &Self, tol: &ToleranceConfig) -> bool {
        self.contains(other, tol) && other.contains(self, tol)
    }

    fn check_ambient(&self, other: &Self) -> Result<(), QmcError> {
        if self.ambient != other.ambient {
            return Err(QmcError::dims(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// Image of a subspace under a channel: the span of `E_i |psi>` over all
/// Kraus operators and basis vectors.
pub fn image(channel: &Channel, x: &Subspace, tol: &ToleranceConfig) -> Result<Subspace, QmcError> {
    if x.ambient_dim() != channel.dim() {
        return Err(QmcError::dims(format!(
            "subspace ambient dimension {} does not match channel dimension {}",
            x.ambient_dim(),
            channel.dim()
        )));
    }
    let k = channel.kraus().len();
    let mut stacked = CMatrix::zeros(channel.dim(), k * x.dim());
    for (i, e) in channel.kraus().iter().enumerate() {
        stacked
            .columns_mut(i * x.dim(), x.dim())
            .copy_from(&(e * x.basis()));
    }
    Ok(Subspace::from_spanning(&stacked, tol))
}

/// Subspace reachable from `rho`: the join of the supports of all iterates
/// `E^k(rho)`. The chain saturates after at most `n - 1` growth rounds.
pub fn reachable_space(
    channel: &Channel,
    rho: &DensityOperator,
    tol: &ToleranceConfig,
) -> Result<Subspace, QmcError> {
    if rho.dim() != channel.dim() {
        return Err(QmcError::dims(format!(
            "state dimension {} does not match channel dimension {}",
            rho.dim(),
            channel.dim()
        )));
    }
    let mut x = Subspace::support(rho.matrix(), tol)?;
    for _ in 0..channel.dim().saturating_sub(1) {
        let next = x.join(&image(channel, &x, tol)?, tol)?;
        if next.dim() == x.dim() {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
