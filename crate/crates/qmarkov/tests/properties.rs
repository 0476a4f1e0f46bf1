//! Cross-route invariants: the matrix representation against direct
//! application, iteration oracles against spectral results, long-run laws
//! of BSCCs, and randomized algebraic checks at the matrix layer.

mod common;

use common::{
    column_matrix, gaussian_matrix, random_channel, random_density, random_vector_in, rng, tol,
};
use proptest::prelude::*;
use qmarkov::format::ModelFile;
use qmarkov::mat::{
    c64, hermitian_eig, max_abs, trace_distance, unvec_row_major, vec_row_major, CMatrix,
};
use qmarkov::models::{five_level, hadamard_walk, walk_position_subspace};
use qmarkov::{
    absorption_sweep, asymptotic_average, cesaro_average, decompose_state_space, positive_part_split,
    power_iterate, reach_probability, DensityOperator, Subspace,
};

#[test]
fn matrix_representation_acts_like_apply() {
    let ch = five_level();
    let m = ch.matrix_representation();
    assert_eq!(m.nrows(), 25);
    assert_eq!(m.ncols(), 25);
    let mut r = rng(21);
    for _ in 0..10 {
        let rho = random_density(&mut r, 5);
        let via_matrix = unvec_row_major(&(m * vec_row_major(rho.matrix())), 5, 5);
        let direct = ch.apply_matrix(rho.matrix());
        assert!(max_abs(&(via_matrix - direct)) <= 1e-10);
    }
}

#[test]
fn absorption_traces_are_monotone() {
    let t = tol();
    let mut r = rng(22);
    let mut cases = vec![(five_level(), DensityOperator::basis_state(5, 1), Subspace::from_basis_indices(5, &[0]))];
    let ch = random_channel(&mut r, 3);
    let rho = random_density(&mut r, 3);
    let g = Subspace::from_spanning(&gaussian_matrix(&mut r, 3, 1), &t);
    cases.push((ch, rho, g));
    for (ch, rho, g) in &cases {
        let trace = absorption_sweep(ch, rho, g, 1e-12, 50, &t).unwrap();
        for pair in trace.values.windows(2) {
            assert!(pair[1] + 1e-12 >= pair[0], "absorbed mass decreased: {pair:?}");
        }
    }
}

#[test]
fn cesaro_preserves_trace_and_positivity() {
    let t = tol();
    let mut r = rng(23);
    for n in [2usize, 3, 4] {
        let ch = random_channel(&mut r, n);
        let rho = random_density(&mut r, n);
        let avg = cesaro_average(&ch, &rho, 500).unwrap();
        assert!((avg.trace() - rho.trace()).abs() <= 1e-9);
        let (values, _) = hermitian_eig(avg.matrix(), &t).unwrap();
        assert!(values[n - 1] >= -1e-9, "negative eigenvalue {}", values[n - 1]);
    }
}

#[test]
fn power_iteration_composes() {
    let mut r = rng(24);
    let ch = random_channel(&mut r, 3);
    let rho = random_density(&mut r, 3);
    let whole = power_iterate(&ch, &rho, 13).unwrap();
    let first = power_iterate(&ch, &rho, 5).unwrap();
    let split = power_iterate(&ch, &first, 8).unwrap();
    assert!(max_abs(&(whole.matrix() - split.matrix())) <= 1e-10);
}

/// Spectral reachability against the absorption oracle on the bundled
/// models, at a tolerance ten times tighter than the random-channel gate.
#[test]
fn reach_agrees_with_sweep_on_models() {
    let t = tol();
    let ch = five_level();
    let g = Subspace::from_basis_indices(5, &[0]);
    for k in [1usize, 2, 4] {
        let rho = DensityOperator::basis_state(5, k);
        let spectral = reach_probability(&ch, &rho, &g, &t).unwrap().probability;
        let sweep = absorption_sweep(&ch, &rho, &g, 1e-12, 50, &t).unwrap();
        assert!(sweep.converged);
        assert!(
            (spectral - sweep.final_value).abs() <= 1e-6,
            "five-level |{k}>: {spectral} vs {}",
            sweep.final_value
        );
    }

    let walk = hadamard_walk(4, &t).unwrap();
    let boundary = walk_position_subspace(4, &[0]).unwrap();
    let rho = DensityOperator::basis_state(8, 2);
    let spectral = reach_probability(&walk, &rho, &boundary, &t).unwrap().probability;
    let sweep = absorption_sweep(&walk, &rho, &boundary, 1e-12, 50, &t).unwrap();
    assert!(sweep.converged);
    assert!((spectral - sweep.final_value).abs() <= 1e-6);
}

/// The long-run mass inside each decomposition component equals the mass the
/// asymptotic average assigns to it.
#[test]
fn bscc_mass_limit_matches_average() {
    let t = tol();
    let ch = five_level();
    let d = decompose_state_space(&ch, 0, &t).unwrap();
    let avg = asymptotic_average(&ch, &t).unwrap();
    let mut r = rng(25);
    for _ in 0..5 {
        let rho = random_density(&mut r, 5);
        let settled = power_iterate(&ch, &rho, 2000).unwrap();
        let limit = avg.apply(&rho).unwrap();
        for b in &d.bsccs {
            let iterated = (b.projector() * settled.matrix()).trace().re;
            let spectral = (b.projector() * limit.matrix()).trace().re;
            assert!(
                (iterated - spectral).abs() <= 1e-4,
                "component mass {iterated} vs {spectral}"
            );
        }
    }
}

/// Window heuristic for repeated visits: a state inside a BSCC keeps putting
/// mass on any subspace that is not orthogonal to the component. The theory
/// promises infinitely many visits with no density bound; every length-5
/// window within the first 15 steps is a stricter, empirically safe stand-in.
#[test]
fn bscc_sees_target_infinitely_often() {
    let t = tol();
    let ch = five_level();
    let d = decompose_state_space(&ch, 0, &t).unwrap();
    let mut r = rng(26);
    for b in &d.bsccs {
        let inside = column_matrix(&random_vector_in(&mut r, b));
        let outside = gaussian_matrix(&mut r, 5, 1) * c64(0.2, 0.0);
        let x = Subspace::from_spanning(&(inside + outside), &t);
        let psi = random_vector_in(&mut r, b);
        let mut cur = &psi * psi.adjoint();
        let hits: Vec<bool> = (0..15)
            .map(|_| {
                cur = ch.apply_matrix(&cur);
                (x.projector() * &cur).trace().re > t.tau_rank
            })
            .collect();
        for window in hits.windows(5) {
            assert!(window.iter().any(|&h| h), "a 5-step window saw no mass in the target");
        }
    }
}

/// The bundled model file is the built-in five-level chain, entry for entry.
#[test]
fn bundled_five_level_fixture_matches_builtin() {
    let t = tol();
    let text = include_str!("../models/five_level.json");
    let parsed = ModelFile::from_json(text).unwrap().to_channel(&t).unwrap();
    let builtin = five_level();
    assert_eq!(parsed.dim(), builtin.dim());
    assert_eq!(parsed.kraus().len(), builtin.kraus().len());
    for (a, b) in parsed.kraus().iter().zip(builtin.kraus()) {
        assert!(max_abs(&(a - b)) <= 1e-12);
    }
}

fn complex_entries(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

fn matrix_from(entries: &[(f64, f64)], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |r, c| {
        let (re, im) = entries[r * cols + c];
        c64(re, im)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vec_unvec_round_trips((rows, cols, entries) in (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), complex_entries(r * c))))
    {
        let m = matrix_from(&entries, rows, cols);
        let back = unvec_row_major(&vec_row_major(&m), rows, cols);
        prop_assert!(max_abs(&(back - m)) == 0.0);
    }

    #[test]
    fn positive_split_reconstructs_hermitian(entries in (1usize..5)
        .prop_flat_map(|n| complex_entries(n * n)))
    {
        let n = (entries.len() as f64).sqrt() as usize;
        let raw = matrix_from(&entries, n, n);
        let h = (&raw + raw.adjoint()) * c64(0.5, 0.0);
        let (plus, minus) = positive_part_split(&h, &tol()).unwrap();
        let mut rebuilt = CMatrix::zeros(n, n);
        if let Some(p) = &plus { rebuilt += p.matrix(); }
        if let Some(m) = &minus { rebuilt -= m.matrix(); }
        prop_assert!(max_abs(&(rebuilt - &h)) <= 1e-10 * max_abs(&h).max(1.0));
        for part in [plus, minus].into_iter().flatten() {
            let (values, _) = hermitian_eig(part.matrix(), &tol()).unwrap();
            prop_assert!(values[n - 1] >= -1e-10);
        }
    }

    #[test]
    fn trace_distance_is_a_symmetric_gauge(entries in (1usize..5)
        .prop_flat_map(|n| complex_entries(2 * n * n)))
    {
        let n = ((entries.len() / 2) as f64).sqrt() as usize;
        let a_raw = matrix_from(&entries[..n * n], n, n);
        let b_raw = matrix_from(&entries[n * n..], n, n);
        let a = (&a_raw + a_raw.adjoint()) * c64(0.5, 0.0);
        let b = (&b_raw + b_raw.adjoint()) * c64(0.5, 0.0);
        prop_assert!(trace_distance(&a, &b) >= 0.0);
        prop_assert!((trace_distance(&a, &b) - trace_distance(&b, &a)).abs() <= 1e-12);
        prop_assert!(trace_distance(&a, &a) <= 1e-12);
    }

    #[test]
    fn subspace_lattice_laws_hold(entries in (2usize..5)
        .prop_flat_map(|n| (Just(n), complex_entries(2 * n * n))))
    {
        let (n, entries) = entries;
        let t = tol();
        let a = Subspace::from_spanning(&matrix_from(&entries[..n * n], n, n).columns(0, n - 1).into_owned(), &t);
        let b = Subspace::from_spanning(&matrix_from(&entries[n * n..], n, n).columns(0, 1).into_owned(), &t);
        let joined = a.join(&b, &t).unwrap();
        prop_assert!(joined.contains(&a, &t) && joined.contains(&b, &t));
        let met = a.intersect(&b, &t).unwrap();
        prop_assert!(a.contains(&met, &t) && b.contains(&met, &t));
        prop_assert_eq!(a.complement(&t).dim(), n - a.dim());
        let p = a.projector();
        prop_assert!(max_abs(&(p * p - p)) <= 1e-12);
    }
}
