//! Reference values computed independently and frozen here.

use approx::assert_abs_diff_eq;

use discord_core::channels::{evolve_coeffs, kraus_bf, kraus_gad};
use discord_core::linalg::von_neumann_entropy;
use discord_core::measures::{
    concurrence, concurrence_xxx_analytic, gqd1_bds, gqd1_numeric, mutual_information, qd_bds, qd_numeric,
};
use discord_core::optimize::OptimizerConfig;
use discord_core::states::{bds_to_density, thermal_xxx, BellDiagonalCoeffs};
use discord_core::sweep::{run_sweep, sudden_death_temperature, Axis, Channel, SweepConfig};
use discord_core::Error;

const WERNER_C: f64 = -0.9305533251033541;

fn thermal_4_1() -> discord_core::states::ThermalState {
    thermal_xxx(4.0, 1.0).unwrap()
}

#[test]
fn thermal_state_at_unit_alpha() {
    let s = thermal_4_1();
    assert_eq!(s.alpha, 1.0);
    assert_abs_diff_eq!(s.partition_function, 21.189175246702035, epsilon = 1e-12);
    for c in s.coeffs.as_array() {
        assert_abs_diff_eq!(c, WERNER_C, epsilon = 1e-14);
    }
    let singlet = (3.0f64).exp() / s.partition_function;
    assert_abs_diff_eq!(s.coeffs.bell_eigenvalues()[0], singlet, epsilon = 1e-14);
}

#[test]
fn concurrence_at_unit_alpha() {
    let s = thermal_4_1();
    assert_abs_diff_eq!(concurrence(&s.rho).unwrap(), 0.8958299876550314, epsilon = 1e-12);
    assert_abs_diff_eq!(concurrence_xxx_analytic(1.0), 0.8958299876550314, epsilon = 1e-12);
}

#[test]
fn discord_reference_values() {
    let c = BellDiagonalCoeffs::new(0.5, 0.3, 0.1).unwrap();
    assert_abs_diff_eq!(qd_bds(&c).unwrap(), 0.14239777082354, epsilon = 1e-12);

    let s = thermal_4_1();
    assert_abs_diff_eq!(qd_bds(&s.coeffs).unwrap(), 0.8398107021008986, epsilon = 1e-12);
    assert_abs_diff_eq!(mutual_information(&s.rho).unwrap(), 1.6222584730354728, epsilon = 1e-12);
    assert_abs_diff_eq!(
        von_neumann_entropy(&s.rho).unwrap(),
        0.3777415269645273,
        epsilon = 1e-12
    );
    let numeric = qd_numeric(&s.rho, &OptimizerConfig::default()).unwrap();
    assert_abs_diff_eq!(numeric, 0.8398107021008986, epsilon = 1e-9);
}

#[test]
fn bit_flip_evolution_at_half() {
    let e = evolve_coeffs(&thermal_4_1().coeffs, &kraus_bf(0.5).unwrap()).unwrap();
    assert_abs_diff_eq!(e.c1, WERNER_C, epsilon = 1e-14);
    assert_abs_diff_eq!(e.c2, -0.23263833127583855, epsilon = 1e-14);
    assert_abs_diff_eq!(e.c3, -0.23263833127583855, epsilon = 1e-14);
    assert_abs_diff_eq!(gqd1_bds(&e).unwrap(), 0.23263833127583855, epsilon = 1e-14);
    let numeric = gqd1_numeric(&bds_to_density(&e).unwrap(), &OptimizerConfig::default()).unwrap();
    assert!((0.23263833127583855 - 1e-9..=0.23263833127583855 + 1e-3).contains(&numeric));
}

#[test]
fn gad_evolution_at_half() {
    let e = evolve_coeffs(&thermal_4_1().coeffs, &kraus_gad(0.5, 0.5).unwrap()).unwrap();
    assert_abs_diff_eq!(e.c1, WERNER_C * 0.5, epsilon = 1e-14);
    assert_abs_diff_eq!(e.c2, WERNER_C * 0.5, epsilon = 1e-14);
    assert_abs_diff_eq!(e.c3, WERNER_C * 0.25, epsilon = 1e-14);
    assert!(matches!(
        evolve_coeffs(&thermal_4_1().coeffs, &kraus_gad(0.3, 0.5).unwrap()),
        Err(Error::UnsupportedParameters(_))
    ));
}

#[test]
fn sudden_death_temperatures() {
    for (j, tc) in [
        (0.5, 0.45511961331341866),
        (1.0, 0.9102392266268373),
        (2.0, 1.8204784532536746),
        (4.0, 3.6409569065073493),
    ] {
        assert_abs_diff_eq!(sudden_death_temperature(j, &Channel::None).unwrap(), tc, epsilon = 1e-6);
    }
    let noisy = sudden_death_temperature(1.0, &Channel::BitFlip { p: 0.5 }).unwrap();
    assert!(noisy < 0.910239, "{noisy}");
    assert!(sudden_death_temperature(-1.0, &Channel::None).is_err());
}

#[test]
fn sweep_rows_at_reference_point() {
    let cfg = SweepConfig::default();
    let records = run_sweep(&cfg).unwrap();
    assert_eq!(records.len(), 4779);
    let row = records
        .iter()
        .find(|r| r.j == 4.0 && (r.t - 1.0).abs() < 1e-12)
        .unwrap();
    assert_abs_diff_eq!(row.qd.unwrap(), qd_bds(&thermal_4_1().coeffs).unwrap(), epsilon = 1e-15);
    assert_abs_diff_eq!(row.concurrence.unwrap(), 0.8958299876550314, epsilon = 1e-12);

    let bf = SweepConfig {
        j_axis: Axis::points(vec![4.0]).unwrap(),
        t_axis: Axis::points(vec![1.0]).unwrap(),
        channel: Channel::BitFlip { p: 0.5 },
        ..SweepConfig::default()
    };
    let row = &run_sweep(&bf).unwrap()[0];
    assert_abs_diff_eq!(row.c2, -0.23263833127583855, epsilon = 1e-14);
    assert_abs_diff_eq!(row.gqd1.unwrap(), 0.23263833127583855, epsilon = 1e-14);
}
