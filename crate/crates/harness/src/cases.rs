//! Case registry of the five-Ω study.

use caprise_core::study::{synth_params, HALF_WIDTH, OMEGA_STUDY};
use caprise_core::{CaseSpec, Result, SlipSpec};
use serde::{Deserialize, Serialize};

pub const SUITE_NAME: &str = "omega-study";

/// Wall treatment of a registry entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlipVariant {
    /// Navier slip with L = R/5, the study default.
    NavierR5,
    /// Navier slip with L = R/50.
    NavierR50,
    Numerical,
}

impl SlipVariant {
    pub const ALL: [SlipVariant; 3] = [
        SlipVariant::NavierR5,
        SlipVariant::NavierR50,
        SlipVariant::Numerical,
    ];

    pub fn slip(&self, half_width: f64) -> SlipSpec {
        match self {
            SlipVariant::NavierR5 => SlipSpec::Navier {
                slip_length: half_width / 5.0,
            },
            SlipVariant::NavierR50 => SlipSpec::Navier {
                slip_length: half_width / 50.0,
            },
            SlipVariant::Numerical => SlipSpec::Numerical,
        }
    }

    fn suffix(&self) -> &'static str {
        match self {
            SlipVariant::NavierR5 => "",
            SlipVariant::NavierR50 => "_r50",
            SlipVariant::Numerical => "_numslip",
        }
    }
}

/// `omega_0.1`, `omega_100`, ...
pub fn omega_label(omega: f64) -> String {
    format!("omega_{omega}")
}

pub fn case_for(omega: f64, sigma: f64, slip: SlipSpec, label: impl Into<String>) -> Result<CaseSpec> {
    let (fluid, geometry) = synth_params(omega, sigma)?;
    let case = CaseSpec {
        label: label.into(),
        fluid,
        geometry,
        slip,
        omega_nominal: omega,
    };
    case.validate()?;
    Ok(case)
}

/// The five study cases with one wall treatment.
pub fn suite_variant(variant: SlipVariant) -> Vec<CaseSpec> {
    OMEGA_STUDY
        .iter()
        .map(|&(omega, sigma)| {
            let label = format!("{}{}", omega_label(omega), variant.suffix());
            case_for(omega, sigma, variant.slip(HALF_WIDTH), label)
                .expect("study parameters are valid")
        })
        .collect()
}

/// The five study cases with Navier slip L = R/5.
pub fn omega_suite() -> Vec<CaseSpec> {
    suite_variant(SlipVariant::NavierR5)
}

/// Every registered case: the base suite followed by the R/50 and numerical
/// slip variants.
pub fn registry() -> Vec<CaseSpec> {
    SlipVariant::ALL.iter().flat_map(|&v| suite_variant(v)).collect()
}

pub fn find_case(label: &str) -> Option<CaseSpec> {
    registry().into_iter().find(|c| c.label == label)
}

/// Slip as used by the reduced-order model: numerical slip maps to L = 0.
pub fn ode_slip_length(slip: &SlipSpec) -> f64 {
    slip.slip_length().unwrap_or(0.0)
}

/// `navier:<L>` or `numerical`.
pub fn slip_tag(slip: &SlipSpec) -> String {
    match slip {
        SlipSpec::Numerical => "numerical".into(),
        SlipSpec::Navier { slip_length } => format!("navier:{slip_length}"),
    }
}
