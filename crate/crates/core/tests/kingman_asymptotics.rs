//! Large-generation behaviour of the Kingman model. The finite-n tolerances
//! here are empirical; the limit theorems come without rates.

use condlab_core::analysis::{default_fit_grid, fit_gamma_shape, DEFAULT_PLATEAU_X};
use condlab_core::kingman::ModelParams;

#[test]
fn empirical_tolerance_scaled_weights_approach_constant() {
    let p = ModelParams::standard();
    let u = p.weight_sequence(10_000).unwrap();
    let c = p.weight_asymptotic_constant(&u).unwrap().value;
    assert!((c - 1.5).abs() < 1e-12);
    let dev = |n: usize| (u.scaled(n, 2.0) - c).abs() / c;
    println!("u_n n^2 deviation: n=1e3 {:.5}, n=1e4 {:.5}", dev(1000), dev(10_000));
    assert!(dev(10_000) < 0.05);
    assert!(dev(10_000) < dev(1000));
}

#[test]
fn empirical_tolerance_wave_matches_gamma_limit() {
    let p = ModelParams::standard();
    let n = 10_000;
    let u = p.weight_sequence(n).unwrap();
    let prof = p.wave_profile_with(&u, n, &[0.5, 1.0, 2.0, 4.0]).unwrap();
    println!("{:?}\n{:?}", prof.masses, prof.limits);
    assert!(prof.max_relative_error() < 0.05, "{:?}", prof.relative_errors());
    assert!((prof.limits[1] - 0.5 * (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-14);

    let plateau = p.interval_mass(&u, n, 50.0 / n as f64).unwrap();
    assert!((plateau - 0.5).abs() < 0.02 * 0.5, "{plateau}");

    let xs = default_fit_grid();
    let fit_prof = p.wave_profile_with(&u, n, &xs).unwrap();
    let plateau = p.interval_mass(&u, n, DEFAULT_PLATEAU_X / n as f64).unwrap();
    let fit = fit_gamma_shape(&xs, &fit_prof.masses, plateau).unwrap();
    println!("fitted shape {} ks {}", fit.shape, fit.ks_distance);
    assert!((fit.shape - 2.0).abs() < 0.15);
}
