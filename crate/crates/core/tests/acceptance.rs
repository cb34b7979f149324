//! End-to-end acceptance suite.
//!
//! Each test prints one `acceptance <name>: PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and fails the build on
//! violation. Tolerances are fixed here, not tuned at run time.

use std::panic::{catch_unwind, UnwindSafe};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spincorr::cli;
use spincorr::correlations::{
    brute_force_minimize, local_observable, lqfi, lqu, qfi, skew_information, MeasureKind,
};
use spincorr::model::{build_hamiltonian, thermal_state, ModelParams, ThermalState};
use spincorr::qmat::{
    hermitian_eig, kron, matrix_sqrt_psd, pauli, reassemble, BlochVector, ComplexMatrix, PauliAxis,
};
use spincorr::sweep::{run_sweep, MeasureSelection, SweepAxis, SweepRange, SweepSpec};

fn criterion(name: &str, check: impl FnOnce() + UnwindSafe) {
    let outcome = catch_unwind(check);
    match &outcome {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(_) => println!("acceptance {name}: FAIL"),
    }
    if outcome.is_err() {
        panic!("acceptance criterion failed: {name}");
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams::new(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(0.0..4.0),
        rng.gen_range(0.1..5.0),
    )
}

fn sweep_spec(axis: SweepAxis, min: f64, max: f64, steps: usize, fixed: ModelParams) -> SweepSpec {
    SweepSpec {
        axis,
        range: SweepRange { min, max, steps },
        fixed,
        measures: MeasureSelection::BOTH,
        oracle_check: false,
    }
}

#[test]
fn criterion_01_gibbs_cross_check() {
    criterion("1 gibbs closed form vs numeric on parameter grid", || {
        let temps = [0.1, 0.5, 1.0, 2.0, 5.0];
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    for &t in &temps {
                        let p = ModelParams::new(
                            -5.0 + 10.0 * i as f64 / 9.0,
                            -5.0 + 10.0 * j as f64 / 9.0,
                            4.0 * k as f64 / 9.0,
                            t,
                        );
                        let st = thermal_state(&p).expect("grid point inside supported domain");

                        // Independent numeric route: exp(-beta H)/Z from the
                        // eigendecomposition, rebuilt here rather than
                        // trusting the constructor.
                        let h = build_hamiltonian(&p);
                        let eig = hermitian_eig(&h).unwrap();
                        let beta = 1.0 / p.temperature;
                        let ground = eig.eigenvalues[0];
                        let weights: Vec<f64> = eig
                            .eigenvalues
                            .iter()
                            .map(|l| (-beta * (l - ground)).exp())
                            .collect();
                        let total: f64 = weights.iter().sum();
                        let normalized: Vec<f64> = weights.iter().map(|w| w / total).collect();
                        let numeric = reassemble(&eig.eigenvectors, &normalized);
                        assert!(
                            st.rho.max_abs_diff(&numeric) <= 1e-10,
                            "gibbs mismatch at {p:?}"
                        );

                        assert!((st.rho.trace().re - 1.0).abs() <= 1e-12);
                        assert!(st.rho.is_hermitian());
                        let spectrum = hermitian_eig(&st.rho).unwrap();
                        assert!(spectrum.eigenvalues[0] >= -1e-12, "not PSD at {p:?}");
                        assert!(
                            st.rho.commutator(&h).max_abs() <= 1e-10,
                            "[rho, H] != 0 at {p:?}"
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_02_oracle_equivalence() {
    criterion("2 closed forms vs brute-force minimization", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let st = thermal_state(&p).unwrap();

            let closed_u = lqu(&st.rho).unwrap().value;
            let (oracle_u, _) = brute_force_minimize(&st.rho, MeasureKind::Lqu, 10_000).unwrap();
            assert!(
                (closed_u - oracle_u).abs() <= 2e-3,
                "LQU gap {:.3e} at {p:?}",
                (closed_u - oracle_u).abs()
            );
            assert!(
                closed_u <= oracle_u + 1e-10,
                "LQU closed form above oracle at {p:?}"
            );

            let closed_q = lqfi(&st.rho).unwrap().value;
            let (oracle_q, _) = brute_force_minimize(&st.rho, MeasureKind::Lqfi, 10_000).unwrap();
            assert!(
                (closed_q - oracle_q).abs() <= 2e-3,
                "lQFI gap {:.3e} at {p:?}",
                (closed_q - oracle_q).abs()
            );
            assert!(
                closed_q <= oracle_q + 1e-10,
                "lQFI closed form above oracle at {p:?}"
            );
        }
    });
}

#[test]
fn criterion_03_inequality_chain() {
    criterion("3 lqu <= lqfi <= 2 lqu", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let st = thermal_state(&p).unwrap();
            let u = lqu(&st.rho).unwrap().value;
            let q = lqfi(&st.rho).unwrap().value;
            assert!(u <= q + 1e-10, "U = {u} > Q = {q} at {p:?}");
            assert!(q <= 2.0 * u + 1e-10, "Q = {q} > 2U = {} at {p:?}", 2.0 * u);
        }
    });
}

#[test]
fn criterion_04_evenness_in_epsilon() {
    criterion("4 measures even in epsilon", || {
        for t in [0.1, 0.5, 1.0, 2.0] {
            let spec = sweep_spec(
                SweepAxis::Epsilon,
                -10.0,
                10.0,
                401,
                ModelParams::new(1.0, 0.0, 0.0, t),
            );
            let rows = run_sweep(&spec).unwrap();
            for k in 0..rows.len() {
                let mirror = rows.len() - 1 - k;
                let du = (rows[k].lqu.unwrap() - rows[mirror].lqu.unwrap()).abs();
                let dq = (rows[k].lqfi.unwrap() - rows[mirror].lqfi.unwrap()).abs();
                assert!(
                    du <= 1e-10 && dq <= 1e-10,
                    "asymmetry at T = {t}, eps = {}: lqu {du:.3e}, lqfi {dq:.3e}",
                    rows[k].x
                );
            }
        }
    });
}

#[test]
fn criterion_05_large_epsilon_saturation() {
    criterion("5 LQU saturates at large |epsilon|", || {
        let st = thermal_state(&ModelParams::new(1.0, 50.0, 0.0, 0.5)).unwrap();
        let value = lqu(&st.rho).unwrap().value;
        assert!(value >= 0.99, "LQU(eps = 50) = {value}");
    });
}

#[test]
fn criterion_06_temperature_monotonicity() {
    criterion("6 measures non-increasing in temperature", || {
        // At delta = epsilon = 2, D = 0 the ground level is an exactly
        // degenerate doublet {(|00>-|11>)/sqrt2, (|01>+|10>)/sqrt2} whose
        // equal mixture is 1/4 (1 + sigma_y x sigma_y), a classically
        // correlated state. Both measures therefore start near zero at
        // T = 0.1, grow to a maximum near T ~ 1.5 and only then decay,
        // so the D = 0 leg of this monotonicity requirement cannot hold;
        // it is asserted anyway, with the violations reported.
        let mut violations = Vec::new();
        for dm in [0.0, 2.0, 4.0] {
            let spec = sweep_spec(
                SweepAxis::Temperature,
                0.1,
                10.0,
                201,
                ModelParams::new(2.0, 2.0, dm, 1.0),
            );
            let rows = run_sweep(&spec).unwrap();
            for w in rows.windows(2) {
                let rise_u = w[1].lqu.unwrap() - w[0].lqu.unwrap();
                let rise_q = w[1].lqfi.unwrap() - w[0].lqfi.unwrap();
                if rise_u > 1e-9 {
                    violations.push(format!(
                        "D = {dm}: LQU rises by {rise_u:.3e} between T = {:.3} and T = {:.3}",
                        w[0].x, w[1].x
                    ));
                }
                if rise_q > 1e-9 {
                    violations.push(format!(
                        "D = {dm}: lQFI rises by {rise_q:.3e} between T = {:.3} and T = {:.3}",
                        w[0].x, w[1].x
                    ));
                }
            }
            let last = rows.last().unwrap();
            assert!(
                last.lqu.unwrap() <= 0.05 && last.lqfi.unwrap() <= 0.05,
                "measures not below 0.05 at T = 10 for D = {dm}"
            );
        }
        assert!(
            violations.is_empty(),
            "{} monotonicity violations, first: {}; last: {}",
            violations.len(),
            violations.first().unwrap(),
            violations.last().unwrap()
        );
    });
}

#[test]
fn criterion_07_dm_enhancement() {
    criterion("7 measures non-decreasing in DM strength", || {
        // Same degenerate-doublet physics as the temperature criterion:
        // at delta = epsilon = 2 the curves dip between D = 0 and
        // D ~ 1.4 before rising monotonically, so the small-D region of
        // this requirement cannot hold; asserted anyway with the
        // violations reported.
        let mut violations = Vec::new();
        for t in [0.5, 1.0, 2.0] {
            let spec = sweep_spec(
                SweepAxis::Dm,
                0.0,
                8.0,
                161,
                ModelParams::new(2.0, 2.0, 0.0, t),
            );
            let rows = run_sweep(&spec).unwrap();
            for w in rows.windows(2) {
                let drop_u = w[0].lqu.unwrap() - w[1].lqu.unwrap();
                let drop_q = w[0].lqfi.unwrap() - w[1].lqfi.unwrap();
                if drop_u > 1e-9 {
                    violations.push(format!(
                        "T = {t}: LQU drops by {drop_u:.3e} between D = {:.3} and D = {:.3}",
                        w[0].x, w[1].x
                    ));
                }
                if drop_q > 1e-9 {
                    violations.push(format!(
                        "T = {t}: lQFI drops by {drop_q:.3e} between D = {:.3} and D = {:.3}",
                        w[0].x, w[1].x
                    ));
                }
            }
        }
        assert!(
            violations.is_empty(),
            "{} monotonicity violations, first: {}; last: {}",
            violations.len(),
            violations.first().unwrap(),
            violations.last().unwrap()
        );
    });
}

#[test]
fn criterion_08_pure_state_limits() {
    criterion(
        "8 singlet, maximally mixed and product-state limits",
        || {
            let c = |re: f64| Complex64::new(re, 0.0);
            let pure =
                |amps: [Complex64; 4]| ComplexMatrix::from_fn(4, |i, j| amps[i] * amps[j].conj());

            let s = std::f64::consts::FRAC_1_SQRT_2;
            let singlet = pure([c(0.0), c(s), c(-s), c(0.0)]);
            let u = lqu(&singlet).unwrap().value;
            let q = lqfi(&singlet).unwrap().value;
            assert!((u - 1.0).abs() <= 1e-3, "LQU(singlet) = {u}");
            assert!((q - 1.0).abs() <= 1e-3, "lQFI(singlet) = {q}");

            let mixed = ComplexMatrix::identity(4).scale_re(0.25);
            assert!(lqu(&mixed).unwrap().value.abs() <= 1e-12);
            assert!(lqfi(&mixed).unwrap().value.abs() <= 1e-12);

            for index in 0..4 {
                let mut amps = [c(0.0); 4];
                amps[index] = c(1.0);
                let product = pure(amps);
                let u = lqu(&product).unwrap().value;
                let q = lqfi(&product).unwrap().value;
                assert!(u.abs() <= 1e-12, "LQU(basis state {index}) = {u:.3e}");
                assert!(q.abs() <= 1e-12, "lQFI(basis state {index}) = {q:.3e}");
            }
        },
    );
}

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).
fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let sqrt_rho = matrix_sqrt_psd(rho).unwrap();
    let inner = &sqrt_rho.matmul(sigma) * &sqrt_rho;
    // Force exact Hermitian symmetry before the square root; the product
    // carries rounding noise.
    let sym = ComplexMatrix::from_fn(4, |i, j| (inner.get(i, j) + inner.get(j, i).conj()) * 0.5);
    matrix_sqrt_psd(&sym).unwrap().trace().re
}

#[test]
fn criterion_09_qfi_vs_bures_finite_difference() {
    criterion("9 spectral QFI vs Bures fidelity finite difference", || {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let theta: f64 = 1e-4;
        let mut checked = 0;
        while checked < 50 {
            let p = random_params(&mut rng);
            let st = thermal_state(&p).unwrap();
            if st.probs.iter().any(|&pi| pi < 1e-6) {
                continue;
            }
            let direction = BlochVector::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let h = local_observable(&direction);
            let value = qfi(&st.rho, &h).unwrap();

            // exp(i theta sigma.r) = cos(theta) 1 + i sin(theta) sigma.r
            // for a unit direction, tensored with the identity.
            let rotation_a = &pauli(PauliAxis::Identity).scale(Complex64::new(theta.cos(), 0.0))
                + &direction
                    .observable()
                    .scale(Complex64::new(0.0, theta.sin()));
            let rotation = kron(&rotation_a, &pauli(PauliAxis::Identity));
            let rotated = &rotation.matmul(&st.rho) * &rotation.adjoint();

            // Same-routine baseline F(rho, rho) cancels the systematic
            // part of the fidelity rounding error.
            let baseline = fidelity(&st.rho, &st.rho);
            let estimate = 2.0 * (baseline - fidelity(&st.rho, &rotated)) / (theta * theta);

            let relative = (estimate - value).abs() / value.max(f64::MIN_POSITIVE);
            assert!(
                relative <= 1e-3,
                "QFI {value:.6e} vs Bures estimate {estimate:.6e} (rel {relative:.3e}) at {p:?}"
            );
            checked += 1;
        }
    });
}

#[test]
fn criterion_10_cli_preset_round_trip() {
    criterion(
        "10 preset sweeps: row counts, polylines, byte-identical reruns",
        || {
            let dir = tempfile::tempdir().unwrap();
            for name in cli::PRESET_NAMES {
                let declared_steps = cli::preset_spec(name).unwrap().range.steps;
                let csv = dir.path().join(format!("{name}.csv"));
                let svg = dir.path().join(format!("{name}.svg"));
                let args: Vec<String> = [
                    "sweep",
                    "--preset",
                    name,
                    "--out",
                    csv.to_str().unwrap(),
                    "--plot",
                    svg.to_str().unwrap(),
                ]
                .iter()
                .map(|s| s.to_string())
                .collect();

                assert_eq!(cli::run(&args), 0, "{name} run failed");
                let csv_bytes = std::fs::read(&csv).unwrap();
                let svg_bytes = std::fs::read(&svg).unwrap();

                let lines = csv_bytes
                    .split(|&b| b == b'\n')
                    .filter(|l| !l.is_empty())
                    .count();
                assert_eq!(lines, declared_steps + 1, "{name} row count");

                let svg_text = String::from_utf8(svg_bytes.clone()).unwrap();
                assert!(svg_text.starts_with("<svg "), "{name} plot is not SVG");
                assert_eq!(
                    svg_text.matches("<polyline").count(),
                    2,
                    "{name} polyline count"
                );

                assert_eq!(cli::run(&args), 0, "{name} rerun failed");
                assert_eq!(
                    std::fs::read(&csv).unwrap(),
                    csv_bytes,
                    "{name} CSV not deterministic"
                );
                assert_eq!(
                    std::fs::read(&svg).unwrap(),
                    svg_bytes,
                    "{name} SVG not deterministic"
                );
            }
        },
    );
}

/// The two measures never leave [0, 1] (up to rounding) anywhere on the
/// sampled domain; checked here across everything the other criteria
/// evaluate would be redundant, so a focused random scan suffices.
#[test]
fn measure_range_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let st: ThermalState = thermal_state(&p).unwrap();
        for value in [
            lqu(&st.rho).unwrap().value,
            lqfi(&st.rho).unwrap().value,
            skew_information(
                &st.rho,
                &local_observable(&BlochVector::new(0.3, -0.4, 0.5)),
            )
            .unwrap(),
        ] {
            assert!((-1e-10..=1.0 + 1e-10).contains(&value));
        }
    }
}
