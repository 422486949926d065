use std::collections::BTreeMap;

use ergochan::catalog::{
    a_triangle_row, f_ratio, f_recursion, lookup, parity_fock_channel, parity_iterate_expected,
    pauli_decomposition_expected, pauli_xy_channel, shift_channel, CatalogEntry, ENTRY_NAMES, PARITY_FOCK,
    PAULI_XY, SHIFT,
};
use ergochan::channel::VerifyOptions;
use ergochan::ergodic::{decompose, fixed_space, reconstruct_iterate, stable_eigenvalues};
use ergochan::linalg::{eigenvalues, hs_inner, operator_norm};
use ergochan::{random, Channel, Complex64, DecompositionOptions, Error, Exact, Matrix, Side};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn builders_pass_verification() {
    for p in [0.0, 0.2, 0.5, 1.0] {
        assert!(pauli_xy_channel::<f64>(p).unwrap().verify(&VerifyOptions::default()).unwrap().all_ok());
    }
    for d in [2, 3, 8] {
        assert!(shift_channel::<f64>(0.4, d).unwrap().verify(&VerifyOptions::default()).unwrap().all_ok());
        let parity = parity_fock_channel::<f64>(0.4, d).unwrap();
        assert!(parity.verify(&VerifyOptions::default()).unwrap().all_ok());
        assert_eq!(parity.kraus_sum(), Matrix::identity(d));
    }
}

#[test]
fn parameter_violations_are_domain_errors() {
    assert!(matches!(pauli_xy_channel::<f64>(1.5), Err(Error::Domain(_))));
    assert!(matches!(pauli_xy_channel::<f64>(f64::NAN), Err(Error::Domain(_))));
    assert!(matches!(shift_channel::<f64>(0.0, 4), Err(Error::Domain(_))));
    assert!(matches!(shift_channel::<f64>(0.5, 1), Err(Error::Domain(_))));
    assert!(matches!(parity_fock_channel::<f64>(1.0, 4), Err(Error::Domain(_))));
    assert!(matches!(parity_fock_channel::<f64>(0.5, 1), Err(Error::Domain(_))));
}

#[test]
fn lookup_routes_names_and_rejects_unknowns() {
    let mut params = BTreeMap::new();
    params.insert("p".to_owned(), 0.5);
    let ch: Channel = lookup(PAULI_XY, &params).unwrap();
    assert_eq!((ch.dim(), ch.kraus().len()), (2, 2));
    assert!(matches!(lookup::<f64>("amplitude-damping", &params), Err(Error::Domain(_))));
    // shift needs a dimension
    assert!(lookup::<f64>(SHIFT, &params).is_err());
    params.insert("dim".to_owned(), 5.0);
    assert_eq!(lookup::<f64>(SHIFT, &params).unwrap().dim(), 5);
    params.insert("dim".to_owned(), 2.5);
    assert!(lookup::<f64>(PARITY_FOCK, &params).is_err());
    assert_eq!(ENTRY_NAMES.len(), 3);
}

#[test]
fn pauli_edge_fixed_spaces_are_two_dimensional() {
    let rot = Matrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
    let f0 = fixed_space(&pauli_xy_channel::<f64>(0.0).unwrap().superoperator(Side::Forward), 1e-8).unwrap();
    assert_eq!(f0.dim(), 2);
    assert!(f0.distance_to_span(&[Matrix::identity(2), rot]) <= 1e-12);
    let entry = CatalogEntry::new(PAULI_XY, &[("p", 1.0)]);
    assert_eq!(entry.expected().unwrap().fixed_space_dim, Some(2));
}

#[test]
fn pauli_expected_matches_computed() {
    for p in [0.1, 0.25, 0.6, 0.9] {
        let l = pauli_xy_channel::<f64>(p).unwrap().superoperator(Side::Forward);
        let dec = decompose(&l, &DecompositionOptions::default()).unwrap();
        let expected = pauli_decomposition_expected::<f64>(p).unwrap();
        assert_eq!(dec.lambdas.len(), 2);
        for (lambda, proj) in expected.lambdas.iter().zip(&expected.projectors) {
            let k = dec.lambdas.iter().position(|z| (z - lambda).norm() <= 1e-10).unwrap();
            assert!(operator_norm(&(&dec.projectors[k] - proj)).unwrap() <= 1e-8);
        }
        assert!(dec.stable.max_abs_diff(&expected.stable) <= 1e-12);
        assert!((operator_norm(&dec.stable).unwrap() - (1.0 - 2.0 * p).abs()).abs() <= 1e-12);
        // each stable pair is an eigenpair of L
        for (mu, b) in &expected.stable_pairs {
            let lb = l.apply(b).unwrap();
            assert!(lb.max_abs_diff(&b.scale(*mu)) <= 1e-14);
        }
        let mut stable = stable_eigenvalues(&dec).unwrap();
        stable.sort_by(|a, b| a.re.total_cmp(&b.re));
        let lo = (2.0 * p - 1.0).min(1.0 - 2.0 * p);
        assert!((stable[0] - Complex64::new(lo, 0.0)).norm() <= 1e-10);
        assert!((stable[1] - Complex64::new(-lo, 0.0)).norm() <= 1e-10);
    }
}

#[test]
fn pauli_basis_is_hs_orthonormal() {
    let basis = ergochan::catalog::pauli_basis::<f64>();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((hs_inner(a, b).unwrap() - Complex64::new(expected, 0.0)).norm() <= 1e-15);
        }
    }
}

#[test]
fn parity_spectrum_counts_gap_parities() {
    let (p, d) = (0.3, 8);
    let l = parity_fock_channel::<f64>(p, d).unwrap().superoperator(Side::Forward);
    let vals = eigenvalues(l.matrix()).unwrap();
    let ones = vals.iter().filter(|z| (*z - Complex64::new(1.0, 0.0)).norm() <= 1e-12).count();
    let neg = vals.iter().filter(|z| (*z - Complex64::new(2.0 * p - 1.0, 0.0)).norm() <= 1e-12).count();
    assert_eq!((ones, neg), (32, 32));
}

#[test]
fn parity_d2_is_a_phase_flip() {
    let ch = parity_fock_channel::<f64>(0.3, 2).unwrap();
    let l = ch.superoperator(Side::Forward);
    let dec = decompose(&l, &DecompositionOptions::default()).unwrap();
    assert_eq!(dec.lambdas.len(), 1);
    assert_eq!(dec.ranks, vec![2]);
    let f = fixed_space(&l, 1e-8).unwrap();
    let diag = [
        Matrix::diag(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
        Matrix::diag(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
    ];
    assert!(f.distance_to_span(&diag) <= 1e-12);
}

#[test]
fn parity_oracle_conventions() {
    let x: Matrix = random::matrix(&mut random::rng(11), 5, 5);
    assert_eq!(parity_iterate_expected(0.3, 5, 0, &x).unwrap(), x);
    let half = parity_iterate_expected(0.5, 5, 1, &x).unwrap();
    for j in 0..5 {
        for k in 0..5 {
            if (j + k) % 2 == 1 {
                assert_eq!(half[(j, k)], Complex64::new(0.0, 0.0));
            } else {
                assert_eq!(half[(j, k)], x[(j, k)]);
            }
        }
    }
    assert!(matches!(parity_iterate_expected(0.3, 4, 1, &x), Err(Error::Dimension(_))));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn parity_three_way_agreement(seed in any::<u64>(), d in 2usize..=10, p in 0.05f64..0.95, n in 1usize..=100) {
        let ch = parity_fock_channel::<f64>(p, d).unwrap();
        let dec = decompose(&ch.superoperator(Side::Forward), &DecompositionOptions::default()).unwrap();
        let x: Matrix = random::matrix(&mut random::rng(seed), d, d);
        let oracle = parity_iterate_expected(p, d, n, &x).unwrap();
        let recon = reconstruct_iterate(&dec, n, &x).unwrap();
        let direct = ch.iterate(Side::Forward, &x, n).unwrap();
        prop_assert!(oracle.max_abs_diff(&recon) <= 1e-9);
        prop_assert!(oracle.max_abs_diff(&direct) <= 1e-9);
    }
}

#[test]
fn a_triangle_rows() {
    let row = |i| a_triangle_row(i).into_iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
    assert_eq!(row(1), "1");
    assert_eq!(row(2), "1 0");
    assert_eq!(row(3), "1 1 1");
    assert_eq!(row(4), "1 2 2 0");
    assert_eq!(row(5), "1 3 4 2 1");
    // large rows stay exact
    assert!(a_triangle_row(64).iter().all(|a| *a >= BigUint::from(0u8)));
}

#[test]
fn f_recursion_low_orders() {
    for p in [0.2, 0.5, 0.8] {
        assert_eq!(f_recursion(2, p), 1.0);
        let pe = Exact::from_float(p).unwrap();
        let one = Exact::from_integer(1.into());
        assert_eq!(f_recursion(3, pe.clone()), &one - &pe + &pe * &pe);
    }
}

#[test]
fn f_ratio_exceeds_one_exactly() {
    let one = Exact::from_integer(1.into());
    for p in [0.05, 0.2, 0.5, 0.8, 0.95] {
        let pe = Exact::from_float(p).unwrap();
        for i in 2..=40 {
            assert!(f_ratio(i, pe.clone()) > one, "p={p} i={i}");
        }
    }
}

#[test]
fn telescoping_identity_holds_exactly() {
    // f^(i+1)/p^i − f^(i)/p^(i−1) = ((1−p)/p)^i, checked in exact arithmetic
    let one = Exact::from_integer(1.into());
    for p in [0.2, 0.5, 0.8, 0.37] {
        let pe = Exact::from_float(p).unwrap();
        let q = (&one - &pe) / &pe;
        let mut power = one.clone();
        for i in 1..=30 {
            power = &power * &q;
            if i >= 2 {
                assert_eq!(f_ratio(i + 1, pe.clone()) - f_ratio(i, pe.clone()), power, "p={p} i={i}");
            }
        }
    }
}

#[test]
fn shift_fixed_space_is_empty() {
    for (p, d) in [(0.5, 16), (0.3, 6), (0.9, 3)] {
        let ch = shift_channel::<f64>(p, d).unwrap();
        assert!(fixed_space(&ch.superoperator(Side::Forward), 1e-8).unwrap().is_empty());
        assert!(fixed_space(&ch.superoperator(Side::Adjoint), 1e-8).unwrap().is_empty());
    }
}
