//! Seeded generators shared by the integration suites. Everything is
//! deterministic: same seed, same channels, same verdicts.
#![allow(dead_code)]

use qmarkov::mat::{c64, hermitian_eig, C64, CMatrix, CVector};
use qmarkov::{Channel, DensityOperator, Subspace, ToleranceConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// One standard complex Gaussian via Box-Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let u: f64 = rng.random::<f64>().max(1e-300);
    let v: f64 = rng.random();
    let r = (-2.0 * u.ln()).sqrt() / 2f64.sqrt();
    let theta = std::f64::consts::TAU * v;
    c64(r * theta.cos(), r * theta.sin())
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / c64(norm, 0.0);
        }
    }
}

pub fn random_pure_state(rng: &mut ChaCha8Rng, n: usize) -> DensityOperator {
    DensityOperator::pure(&random_unit_vector(rng, n), &tol()).expect("unit vector")
}

/// Full-rank mixed state: normalized Gram matrix of a Gaussian square.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityOperator {
    let g = gaussian_matrix(rng, n, n);
    let gram = &g * g.adjoint();
    let trace = gram.trace().re;
    DensityOperator::new(gram / c64(trace, 0.0), &tol()).expect("Gram matrices are PSD")
}

/// Span of `dim` Gaussian vectors; full column rank with probability one.
pub fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize, dim: usize) -> Subspace {
    Subspace::from_spanning(&gaussian_matrix(rng, ambient, dim), &tol())
}

/// Mixing strength of the depolarizing floor in [`random_channel`].
const DEPOLARIZING_FLOOR: f64 = 0.3;

/// Generic trace-preserving channel: a scaled Gaussian contraction `E1`,
/// its defect square root `E2 = ((1-p)I - E1'E1)^(1/2)`, and a depolarizing
/// floor of weight `p`. The floor caps the subdominant spectral radius at
/// `1 - p`, so finite-iteration oracles converge within the budgets the
/// suites pin (the Cesaro tail is at most `2(1-p)/(pN)` in trace norm for
/// every draw, not just for lucky ones).
pub fn random_channel(rng: &mut ChaCha8Rng, n: usize) -> Channel {
    let t = tol();
    let p = DEPOLARIZING_FLOOR;
    let a = gaussian_matrix(rng, n, n);
    let gram = a.adjoint() * &a;
    let (evals, _) = hermitian_eig(&gram, &t).expect("Gram is Hermitian");
    let top = evals[0].max(1e-12).sqrt();
    let e1 = a * c64((1.0 - p).sqrt() / (1.25 * top), 0.0);
    let defect = CMatrix::identity(n, n) * c64(1.0 - p, 0.0) - e1.adjoint() * &e1;
    let (vals, vecs) = hermitian_eig(&defect, &t).expect("defect is Hermitian");
    let mut root = CMatrix::zeros(n, n);
    for (i, &val) in vals.iter().enumerate() {
        let col = vecs.column(i).into_owned();
        root += &col * col.adjoint() * c64(val.max(0.0).sqrt(), 0.0);
    }
    let mut kraus = vec![e1, root];
    let hop = (p / n as f64).sqrt();
    for i in 0..n {
        for j in 0..n {
            let mut k = CMatrix::zeros(n, n);
            k[(i, j)] = c64(hop, 0.0);
            kraus.push(k);
        }
    }
    Channel::new(kraus, &t).expect("completion is trace-preserving")
}

/// Shared fleet of small random channels, regenerated identically wherever
/// the same seed is used.
pub fn random_channels(seed: u64, count: usize, max_dim: usize) -> Vec<Channel> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(2..=max_dim);
            random_channel(&mut r, n)
        })
        .collect()
}

/// Random unit vector inside a given subspace.
pub fn random_vector_in(rng: &mut ChaCha8Rng, space: &Subspace) -> CVector {
    loop {
        let coeffs = CVector::from_fn(space.dim(), |_, _| gaussian(rng));
        let v = space.basis() * &coeffs;
        let norm = v.norm();
        if norm > 1e-6 {
            return v / c64(norm, 0.0);
        }
    }
}

pub fn span(ambient: usize, indices: &[usize]) -> Subspace {
    Subspace::from_basis_indices(ambient, indices)
}

pub fn column_matrix(v: &CVector) -> CMatrix {
    CMatrix::from_fn(v.len(), 1, |i, _| v[i])
}
