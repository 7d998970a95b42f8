//! Controller synthesis: filtered PID, model-reference (MRC) and internal
//! model control (IMC), plus the energy-oriented MRC retune.

mod imc;
mod mrc;
mod pid;
mod retune;

use std::fmt;
use std::str::FromStr;

pub use imc::{imc_controller, imc_filter, ImcParams};
pub use mrc::{model_matching_controller, mrc_controller, mrc_reference_model, MrcParams};
pub use pid::{pid_controller, PidParams};
pub use retune::{
    mrc_energy_retune, retune_grid, GridRange, RetuneCandidate, RetuneConfig, RetuneOutcome,
};

use crate::error::{Error, Result};
use crate::ratpoly::TransferFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControllerTag {
    Pid,
    Mrc,
    MrcR,
    Imc,
}

impl ControllerTag {
    pub fn name(self) -> &'static str {
        match self {
            ControllerTag::Pid => "PID",
            ControllerTag::Mrc => "MRC",
            ControllerTag::MrcR => "MRC_R",
            ControllerTag::Imc => "IMC",
        }
    }
}

impl fmt::Display for ControllerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControllerTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "PID" => Ok(ControllerTag::Pid),
            "MRC" => Ok(ControllerTag::Mrc),
            "MRC_R" | "MRC-R" => Ok(ControllerTag::MrcR),
            "IMC" => Ok(ControllerTag::Imc),
            other => Err(Error::InvalidParameter(format!("unknown controller kind `{other}`"))),
        }
    }
}

/// Parameters tagged by controller family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControllerParams {
    Pid(PidParams),
    Mrc(MrcParams),
    /// Energy-retuned MRC; same synthesis as `Mrc`.
    MrcR(MrcParams),
    Imc(ImcParams),
}

impl ControllerParams {
    pub fn tag(&self) -> ControllerTag {
        match self {
            ControllerParams::Pid(_) => ControllerTag::Pid,
            ControllerParams::Mrc(_) => ControllerTag::Mrc,
            ControllerParams::MrcR(_) => ControllerTag::MrcR,
            ControllerParams::Imc(_) => ControllerTag::Imc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ControllerParams::Pid(p) => p.validate(),
            ControllerParams::Mrc(p) | ControllerParams::MrcR(p) => p.validate(),
            ControllerParams::Imc(p) => p.validate(),
        }
    }
}

/// A named controller: `name` keys files and config sections, `label` is
/// the display name in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerSpec {
    pub name: String,
    pub label: String,
    pub params: ControllerParams,
}

impl ControllerSpec {
    pub fn new(name: &str, label: &str, params: ControllerParams) -> Self {
        ControllerSpec { name: name.to_string(), label: label.to_string(), params }
    }

    pub fn tag(&self) -> ControllerTag {
        self.params.tag()
    }

    pub fn synthesize(&self, plant: &TransferFunction) -> Result<TransferFunction> {
        match &self.params {
            ControllerParams::Pid(p) => pid_controller(p),
            ControllerParams::Mrc(p) | ControllerParams::MrcR(p) => mrc_controller(plant, p),
            ControllerParams::Imc(p) => imc_controller(plant, p),
        }
    }
}

/// Nominal MRC design.
pub const MRC_NOMINAL: MrcParams = MrcParams { zeta: 0.9, wn: 5.5, tauf: 0.1 };
/// Energy-retuned MRC design.
pub const MRC_RETUNED: MrcParams = MrcParams { zeta: 0.9, wn: 3.36, tauf: 0.09 };
pub const IMC_DEFAULT: ImcParams = ImcParams { lambda: 0.2, order: 3 };
pub const PID_PSO: PidParams = PidParams { kp: 108.842, ki: 63.386, kd: 0.067, tf: 670.8282 };
pub const PID_DEA: PidParams = PidParams { kp: 108.909, ki: 63.386, kd: 0.0, tf: 571.4064 };
pub const PID_WOA: PidParams = PidParams { kp: 122.659, ki: 0.0, kd: 0.023, tf: 3.5256 };

/// The six controllers of the standard comparison, in report order.
pub fn default_controllers() -> Vec<ControllerSpec> {
    vec![
        ControllerSpec::new("mrc", "MRC", ControllerParams::Mrc(MRC_NOMINAL)),
        ControllerSpec::new("mrc_r", "MRC-R*", ControllerParams::MrcR(MRC_RETUNED)),
        ControllerSpec::new("imc", "IMC*", ControllerParams::Imc(IMC_DEFAULT)),
        ControllerSpec::new("pid_pso", "PID-PSO", ControllerParams::Pid(PID_PSO)),
        ControllerSpec::new("pid_dea", "PID-DEA", ControllerParams::Pid(PID_DEA)),
        ControllerSpec::new("pid_woa", "PID-WOA", ControllerParams::Pid(PID_WOA)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::{surge_plant, PlantParams};

    #[test]
    fn defaults_synthesize() {
        let g = surge_plant(&PlantParams::default()).unwrap();
        let specs = default_controllers();
        assert_eq!(specs.len(), 6);
        for spec in &specs {
            let c = spec.synthesize(&g).unwrap();
            assert!(c.is_proper(), "{}", spec.name);
        }
    }

    #[test]
    fn tag_round_trip() {
        for tag in [ControllerTag::Pid, ControllerTag::Mrc, ControllerTag::MrcR, ControllerTag::Imc] {
            assert_eq!(tag.name().parse::<ControllerTag>().unwrap(), tag);
        }
    }
}
