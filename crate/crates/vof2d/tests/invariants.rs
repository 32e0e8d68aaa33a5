mod common;

use caprise_core::SlipSpec;
use caprise_vof2d::*;
use common::*;
use proptest::prelude::*;

fn check_step(sim: &Simulation, report: &StepReport) {
    let s = &sim.state;
    for i in 0..s.grid.nx as isize {
        for j in 0..s.grid.ny as isize {
            let a = s.alpha[(i, j)];
            assert!((0.0..=1.0).contains(&a), "alpha {a} at ({i},{j})");
        }
    }
    assert!(report.volume_imbalance <= 1e-10, "{report:?}");
    assert!(report.clipped_fraction <= 1e-10, "{report:?}");
    assert!(report.divergence_ratio <= 10.0 * sim.setup.pressure_tol, "{report:?}");
}

#[test]
fn rising_column_invariants() {
    for slip in [navier_r5(), SlipSpec::Numerical] {
        let setup = CaseSetup2D::new(omega_one(slip), 8, 1.0);
        let mut sim = Simulation::new(setup).unwrap();
        for _ in 0..300 {
            let report = sim.step(f64::INFINITY).unwrap();
            check_step(&sim, &report);
        }
        assert!(apex_height(&sim.state).unwrap() > 0.0101);
    }
}

#[test]
fn static_meniscus_stays_quiet() {
    let setup = static_meniscus(16);
    let bound = 1e-3 * setup.case.fluid.sigma / setup.case.fluid.mu_l;
    let mut sim = Simulation::new(setup).unwrap();
    let v0 = sim.state.liquid_volume();
    for _ in 0..100 {
        let report = sim.step(f64::INFINITY).unwrap();
        check_step(&sim, &report);
        assert!(report.max_speed <= bound, "{} > {bound}", report.max_speed);
    }
    assert!(((sim.state.liquid_volume() - v0) / v0).abs() < 1e-12);
}

#[test]
fn runs_are_deterministic() {
    let mut setup = CaseSetup2D::new(omega_one(navier_r5()), 4, 0.05);
    setup.dt_out = Some(0.005);
    let a = run(&setup).unwrap();
    let b = run(&setup).unwrap();
    assert_eq!(a.trajectory, b.trajectory);
    assert_eq!(a.n_steps, b.n_steps);
    let times: Vec<f64> = a.trajectory.samples.iter().map(|s| s.t).collect();
    assert_eq!(times.len(), 11);
    assert_eq!(times[0], 0.0);
    assert_eq!(*times.last().unwrap(), 0.05);
    assert_eq!(a.trajectory.meta.model, "vof2d");
    let h_inf = a.trajectory.meta.h_inf.unwrap();
    assert!((h_inf - 0.0191605).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Solenoidal fields from a random stream function that vanishes on the
    /// boundary move no liquid across it, so volume is conserved and the
    /// fractions stay bounded.
    #[test]
    fn solenoidal_advection_conserves_volume(
        psi in proptest::collection::vec(-1.0f64..1.0, 7 * 63),
        cfl in 0.05f64..0.45,
        steps in 1usize..6,
    ) {
        let setup = CaseSetup2D::new(omega_one(navier_r5()), 8, 1.0);
        let mut state = init_case(&setup).unwrap();
        let grid = state.grid;
        let (nx, ny) = (grid.nx as isize, grid.ny as isize);
        let stream = |i: isize, j: isize| {
            if i <= 0 || j <= 0 || i >= nx || j >= ny {
                0.0
            } else {
                psi[(i - 1 + 7 * (j - 1)) as usize]
            }
        };
        for i in 0..=nx {
            for j in 0..ny {
                state.u[(i, j)] = stream(i, j + 1) - stream(i, j);
            }
        }
        for i in 0..nx {
            for j in 0..=ny {
                state.v[(i, j)] = -(stream(i + 1, j) - stream(i, j));
            }
        }
        let dt = cfl * grid.h / state.max_speed().max(1e-300);
        let v0 = state.liquid_volume();
        for _ in 0..steps {
            let report = advect_alpha(&mut state, &setup, dt).unwrap();
            prop_assert!(report.boundary_inflow.abs() < 1e-18);
            prop_assert!(report.clipped_abs / v0 < 1e-10);
            state.step_count += 1;
        }
        prop_assert!(((state.liquid_volume() - v0) / v0).abs() < 1e-12);
        for i in 0..nx {
            for j in 0..ny {
                prop_assert!((0.0..=1.0).contains(&state.alpha[(i, j)]));
            }
        }
    }
}
