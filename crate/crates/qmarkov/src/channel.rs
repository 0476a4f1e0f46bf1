//! Density operators and Kraus-form super-operators, together with the
//! vectorized matrix representation every spectral computation consumes.

use crate::error::QmcError;
use crate::mat::{self, c64, CMatrix, CVector};
use crate::spaces::Subspace;
use crate::tolerance::ToleranceConfig;

/// A partial density operator: Hermitian, positive semidefinite, `0 < tr <= 1`.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: CMatrix,
}

impl DensityOperator {
    /// Validate and wrap a matrix as a density operator.
    pub fn new(mat: CMatrix, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        if !mat.is_square() {
            return Err(QmcError::dims(format!(
                "density operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let scale = mat::max_abs(&mat).max(1.0);
        let deviation = mat::hermitian_deviation(&mat);
        if deviation > tol.tau_herm * scale {
            return Err(QmcError::NotHermitian { deviation });
        }
        let eigenvalues = mat::hermitize(&mat).symmetric_eigenvalues();
        let min_eigenvalue = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tol.tau_psd * scale {
            return Err(QmcError::NotPositiveSemidefinite { min_eigenvalue });
        }
        let trace = mat.trace();
        if trace.im.abs() > tol.tau_trace
            || trace.re <= tol.tau_trace
            || trace.re > 1.0 + tol.tau_trace
        {
            return Err(QmcError::InvalidTrace { trace: trace.re });
        }
        Ok(Self {
            mat: mat::hermitize(&mat),
        })
    }

    /// Wrap a matrix that is positive semidefinite by construction (channel
    /// outputs, spectral projections, positive parts). Hermitizes to scrub
    /// rounding noise but performs no eigenvalue or trace validation.
    pub(crate) fn from_psd_unchecked(mat: CMatrix) -> Self {
        Self {
            mat: mat::hermitize(&mat),
        }
    }

    /// The pure state `|psi><psi|`; the vector is normalized first.
    pub fn pure(psi: &CVector, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        let norm = psi.norm();
        if norm <= tol.tau_trace {
            return Err(QmcError::InvalidTrace { trace: 0.0 });
        }
        let unit = psi.unscale(norm);
        Ok(Self::from_psd_unchecked(&unit * unit.adjoint()))
    }

    /// The computational basis state `|k><k|` in dimension `n`.
    pub fn basis_state(n: usize, k: usize) -> Self {
        assert!(k < n, "basis index out of range");
        let mut mat = CMatrix::zeros(n, n);
        mat[(k, k)] = c64(1.0, 0.0);
        Self { mat }
    }

    /// The maximally mixed state `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self {
            mat: CMatrix::identity(n, n).scale(1.0 / n as f64),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Rescale to unit trace; `None` when the trace is numerically zero.
    pub fn unit_trace(&self) -> Option<Self> {
        let tr = self.trace();
        if tr.abs() < f64::EPSILON * self.dim() as f64 {
            return None;
        }
        Some(Self {
            mat: self.mat.scale(1.0 / tr),
        })
    }
}

/// A super-operator in Kraus form with its cached matrix representation.
///
/// `apply` computes `sum_i E_i rho E_i'`; the representation acts on
/// row-major vectorized operators as `sum_i E_i kron conj(E_i)`.
#[derive(Debug, Clone)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    dim: usize,
    rep: CMatrix,
    trace_preserving: bool,
}

impl Channel {
    /// Build a trace-preserving channel (`sum_i E_i'E_i = I` within `tau_tp`).
    pub fn new(kraus: Vec<CMatrix>, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        let dim = Self::common_dim(&kraus)?;
        let deviation = mat::max_abs(&(Self::kraus_sum(&kraus) - CMatrix::identity(dim, dim)));
        if deviation > tol.tau_tp {
            return Err(QmcError::NotTracePreserving { deviation });
        }
        Ok(Self::build(kraus, dim, true))
    }

    /// Build a trace-nonincreasing channel (`sum_i E_i'E_i <= I` within
    /// `tau_tp`), as produced by restrictions and compressions.
    pub fn sub_channel(kraus: Vec<CMatrix>, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        let dim = Self::common_dim(&kraus)?;
        let sum = Self::kraus_sum(&kraus);
        let top = mat::hermitize(&sum)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if top > 1.0 + tol.tau_tp {
            return Err(QmcError::TraceBoundExceeded { excess: top - 1.0 });
        }
        Ok(Self::build(kraus, dim, false))
    }

    /// The channel `rho -> P rho P` projecting onto a subspace.
    pub fn from_projector(space: &Subspace, tol: &ToleranceConfig) -> Result<Self, QmcError> {
        Self::sub_channel(vec![space.projector().clone()], tol)
    }

    fn common_dim(kraus: &[CMatrix]) -> Result<usize, QmcError> {
        let first = kraus.first().ok_or(QmcError::EmptyKraus)?;
        if !first.is_square() {
            return Err(QmcError::dims("Kraus operators must be square"));
        }
        let dim = first.nrows();
        if kraus.iter().any(|e| e.shape() != (dim, dim)) {
            return Err(QmcError::dims("all Kraus operators must share one shape"));
        }
        Ok(dim)
    }

    fn kraus_sum(kraus: &[CMatrix]) -> CMatrix {
        let dim = kraus[0].nrows();
        kraus
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, e| acc + e.adjoint() * e)
    }

    fn build(kraus: Vec<CMatrix>, dim: usize, trace_preserving: bool) -> Self {
        let rep = kraus
            .iter()
            .fold(CMatrix::zeros(dim * dim, dim * dim), |acc, e| {
                acc + e.kronecker(&e.conjugate())
            });
        Self {
            kraus,
            dim,
            rep,
            trace_preserving,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// The cached `n^2 x n^2` matrix acting on row-major vectorizations.
    pub fn matrix_representation(&self) -> &CMatrix {
        &self.rep
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `sum_i E_i rho E_i'` on a validated state.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, QmcError> {
        if rho.dim() != self.dim {
            return Err(QmcError::dims(format!(
                "state dimension {} does not match channel dimension {}",
                rho.dim(),
                self.dim
            )));
        }
        Ok(DensityOperator::from_psd_unchecked(
            self.apply_matrix(rho.matrix()),
        ))
    }

    /// The raw linear action `sum_i E_i A E_i'` on an arbitrary matrix.
    pub fn apply_matrix(&self, a: &CMatrix) -> CMatrix {
        assert_eq!(a.shape(), (self.dim, self.dim), "operand dimension mismatch");
        self.kraus
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, e| {
                acc + e * a * e.adjoint()
            })
    }

    /// The adjoint action `sum_i E_i' A E_i` (Heisenberg picture).
    pub fn apply_dual_matrix(&self, a: &CMatrix) -> CMatrix {
        assert_eq!(a.shape(), (self.dim, self.dim), "operand dimension mismatch");
        self.kraus
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, e| {
                acc + e.adjoint() * a * e
            })
    }

    /// Composition `self . inner` with Kraus products and multiplied
    /// matrix representations.
    pub fn compose(&self, inner: &Channel, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
        if self.dim != inner.dim {
            return Err(QmcError::dims(format!(
                "cannot compose channels of dimensions {} and {}",
                self.dim, inner.dim
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for outer in &self.kraus {
            for e in &inner.kraus {
                kraus.push(outer * e);
            }
        }
        if self.trace_preserving && inner.trace_preserving {
            Channel::new(kraus, tol)
        } else {
            Channel::sub_channel(kraus, tol)
        }
    }

    /// The restriction `P_X . self` with Kraus operators `{P_X E_i}`: evolve,
    /// then measure membership in `x` and keep the inside outcome.
    pub fn restricted_to(&self, x: &Subspace, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
        self.check_space(x)?;
        let p = x.projector();
        let kraus = self.kraus.iter().map(|e| p * e).collect();
        Channel::sub_channel(kraus, tol)
    }

    /// The absorbing chain `{P_G} U {E_i (I - P_G)}`: mass inside `g` is
    /// frozen, the remainder keeps evolving.
    pub fn absorbing_into(&self, g: &Subspace, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
        self.check_space(g)?;
        let p = g.projector();
        let q = CMatrix::identity(self.dim, self.dim) - p;
        let mut kraus = vec![p.clone()];
        kraus.extend(self.kraus.iter().map(|e| e * &q));
        if self.trace_preserving {
            Channel::new(kraus, tol)
        } else {
            Channel::sub_channel(kraus, tol)
        }
    }

    /// The two-sided compression `rho -> P_Y E(P_Y rho P_Y) P_Y`.
    pub fn compressed_to(&self, y: &Subspace, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
        self.check_space(y)?;
        let p = y.projector();
        let kraus = self.kraus.iter().map(|e| p * e * p).collect();
        Channel::sub_channel(kraus, tol)
    }

    fn check_space(&self, space: &Subspace) -> Result<(), QmcError> {
        if space.ambient_dim() != self.dim {
            return Err(QmcError::dims(format!(
                "subspace ambient dimension {} does not match channel dimension {}",
                space.ambient_dim(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// Split a Hermitian matrix into positive and negative parts with orthogonal
/// supports: `a = plus - minus`. Eigenvalues within `tau_rank * |lambda|_max`
/// of zero are dropped; an absent side comes back as `None`.
pub fn positive_part_split(
    a: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<(Option<DensityOperator>, Option<DensityOperator>), QmcError> {
    positive_part_split_with_cutoff(a, tol, tol.tau_rank)
}

pub(crate) fn positive_part_split_with_cutoff(
    a: &CMatrix,
    tol: &ToleranceConfig,
    cutoff: f64,
) -> Result<(Option<DensityOperator>, Option<DensityOperator>), QmcError> {
    let (values, vectors) = mat::hermitian_eig(a, tol)?;
    let top = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let threshold = cutoff * top;
    let n = a.nrows();
    let mut plus = CMatrix::zeros(n, n);
    let mut minus = CMatrix::zeros(n, n);
    let mut has_plus = false;
    let mut has_minus = false;
    for (k, &l) in values.iter().enumerate() {
        if l.abs() <= threshold {
            continue;
        }
        let v = vectors.column(k);
        let outer = (v * v.adjoint()).scale(l.abs());
        if l > 0.0 {
            plus += outer;
            has_plus = true;
        } else {
            minus += outer;
            has_minus = true;
        }
    }
    Ok((
        has_plus.then(|| DensityOperator::from_psd_unchecked(plus)),
        has_minus.then(|| DensityOperator::from_psd_unchecked(minus)),
    ))
}
