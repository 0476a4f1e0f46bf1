//! Wall-clock smoke runs on growing walk models. Records timings only;
//! asymptotic growth is not asserted because constant factors at these
//! sizes swamp any exponent estimate.

use std::time::Instant;

use qmarkov::models::{hadamard_walk, walk_position_subspace};
use qmarkov::{decompose_state_space, reach_probability, DensityOperator, ToleranceConfig};

#[test]
fn walk_analyses_finish_quickly_at_small_sizes() {
    let t = ToleranceConfig::default();
    for n in [2usize, 4, 8] {
        let dim = 2 * n;
        let built = Instant::now();
        let walk = hadamard_walk(n, &t).unwrap();
        let build_time = built.elapsed();

        let decomposed = Instant::now();
        let d = decompose_state_space(&walk, 0, &t).unwrap();
        let decompose_time = decomposed.elapsed();

        let reached = Instant::now();
        let boundary = walk_position_subspace(n, &[0]).unwrap();
        let rho = DensityOperator::basis_state(dim, 2);
        let p = reach_probability(&walk, &rho, &boundary, &t)
            .unwrap()
            .probability;
        let reach_time = reached.elapsed();

        println!(
            "walk n={n} (dim {dim}): build {build_time:?}, decompose {decompose_time:?} \
             ({} BSCCs), reach {reach_time:?} (p={p:.6})",
            d.bsccs.len()
        );
        assert!((p - 1.0).abs() <= 1e-6);
    }
}
