//! The same pipeline instantiated at `f32`.

use ergochan::catalog::{parity_fock_channel, pauli_xy_channel};
use ergochan::channel::VerifyOptions;
use ergochan::ergodic::{decompose, fixed_space, reconstruct_iterate};
use ergochan::{Channel32, DecompositionOptions, Matrix32, Side};

#[test]
fn pauli_channel_in_f32() {
    let ch: Channel32 = pauli_xy_channel(0.3).unwrap();
    let rep = ch.verify(&VerifyOptions::default()).unwrap();
    assert!(rep.all_ok(), "{rep:?}");
    assert_eq!(rep.tol, 1e-4);

    let l = ch.superoperator(Side::Forward);
    assert_eq!(fixed_space(&l, 1e-4).unwrap().dim(), 1);

    let opts = DecompositionOptions {
        peripheral_tol: 1e-4,
        cluster_tol: 1e-3,
        algebra_tol: 1e-4,
        cesaro_n: 1000,
        cesaro_floor: 1e-4,
        ..DecompositionOptions::default()
    };
    let dec = decompose(&l, &opts).unwrap();
    assert_eq!(dec.lambdas.len(), 2);
    assert!((dec.stable_radius - 0.4).abs() < 1e-5);
}

#[test]
fn parity_iterates_in_f32() {
    let ch: Channel32 = parity_fock_channel(0.3, 4).unwrap();
    let opts = DecompositionOptions {
        peripheral_tol: 1e-4,
        cluster_tol: 1e-3,
        algebra_tol: 1e-4,
        cesaro_n: 0,
        ..DecompositionOptions::default()
    };
    let dec = decompose(&ch.superoperator(Side::Forward), &opts).unwrap();
    let x = Matrix32::identity(4);
    let direct = ch.iterate(Side::Forward, &x, 10).unwrap();
    let recon = reconstruct_iterate(&dec, 10, &x).unwrap();
    assert!(direct.max_abs_diff(&recon) < 1e-5);
}
