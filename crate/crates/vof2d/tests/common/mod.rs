#![allow(dead_code)]

use caprise_core::study::synth_params;
use caprise_core::{CaseSpec, SlipSpec};
use caprise_vof2d::{BottomBoundary, CaseSetup2D};

pub fn omega_one(slip: SlipSpec) -> CaseSpec {
    let (fluid, geometry) = synth_params(1.0, 0.04).unwrap();
    CaseSpec {
        label: "omega_1".into(),
        fluid,
        geometry,
        slip,
        omega_nominal: 1.0,
    }
}

pub fn navier_r5() -> SlipSpec {
    SlipSpec::navier(0.005 / 5.0).unwrap()
}

/// Gravity off and a closed bottom: the initial arc is an equilibrium.
pub fn static_meniscus(nx: usize) -> CaseSetup2D {
    let mut setup = CaseSetup2D::new(omega_one(navier_r5()), nx, 1.0);
    setup.gravity = false;
    setup.bottom = BottomBoundary::Wall;
    setup
}
