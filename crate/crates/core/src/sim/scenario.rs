use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    Nominal,
    Noise,
    Wave,
    NoiseWave,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] =
        [ScenarioKind::Nominal, ScenarioKind::Noise, ScenarioKind::Wave, ScenarioKind::NoiseWave];

    pub fn wave_active(self) -> bool {
        matches!(self, ScenarioKind::Wave | ScenarioKind::NoiseWave)
    }

    pub fn noise_active(self) -> bool {
        matches!(self, ScenarioKind::Noise | ScenarioKind::NoiseWave)
    }

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Nominal => "nominal",
            ScenarioKind::Noise => "noise",
            ScenarioKind::Wave => "wave",
            ScenarioKind::NoiseWave => "noise_wave",
        }
    }

    /// Heading used in reports.
    pub fn title(self) -> &'static str {
        match self {
            ScenarioKind::Nominal => "NOMINAL",
            ScenarioKind::Noise => "NOISE",
            ScenarioKind::Wave => "WAVE",
            ScenarioKind::NoiseWave => "NOISE+WAVE",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nominal" => Ok(ScenarioKind::Nominal),
            "noise" => Ok(ScenarioKind::Noise),
            "wave" => Ok(ScenarioKind::Wave),
            "noise_wave" | "noise+wave" => Ok(ScenarioKind::NoiseWave),
            other => Err(Error::InvalidParameter(format!("unknown scenario `{other}`"))),
        }
    }
}

/// One evaluation scenario: step reference plus optional wave forcing at the
/// actuator and white measurement noise.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// m/s
    pub ref_amplitude: f64,
    /// s
    pub horizon: f64,
    /// s
    pub dt: f64,
    /// N
    pub wave_amplitude: f64,
    /// Hz
    pub wave_freq: f64,
    /// m/s
    pub noise_sigma: f64,
    pub seed: u64,
    /// Plant output at t = 0 (held as an equilibrium of the integrator).
    pub initial_output: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            kind: ScenarioKind::Nominal,
            ref_amplitude: 2.0,
            horizon: 50.0,
            dt: 0.005,
            wave_amplitude: 8.0,
            wave_freq: 0.03,
            noise_sigma: 0.12,
            seed: 42,
            initial_output: 0.0,
        }
    }
}

impl ScenarioConfig {
    pub fn with_kind(&self, kind: ScenarioKind) -> Self {
        ScenarioConfig { kind, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let finite = [
            self.ref_amplitude,
            self.horizon,
            self.dt,
            self.wave_amplitude,
            self.wave_freq,
            self.noise_sigma,
            self.initial_output,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return fail("scenario parameters must be finite".into());
        }
        if !(self.dt > 0.0) {
            return fail(format!("sim.dt must be > 0 (got {})", self.dt));
        }
        if self.horizon < self.dt {
            return fail(format!("sim.horizon must be >= sim.dt (got {})", self.horizon));
        }
        if self.wave_amplitude < 0.0 {
            return fail(format!("wave.amplitude must be ≥ 0 (got {})", self.wave_amplitude));
        }
        if self.wave_freq < 0.0 {
            return fail(format!("wave.frequency must be ≥ 0 (got {})", self.wave_freq));
        }
        if self.noise_sigma < 0.0 {
            return fail(format!("noise.sigma must be ≥ 0 (got {})", self.noise_sigma));
        }
        Ok(())
    }

    /// `floor(horizon / dt) + 1`.
    pub fn n_samples(&self) -> usize {
        (self.horizon / self.dt + 1e-9).floor() as usize + 1
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples()).map(|k| k as f64 * self.dt).collect()
    }
}

pub fn gen_reference(cfg: &ScenarioConfig) -> Vec<f64> {
    vec![cfg.ref_amplitude; cfg.n_samples()]
}

/// `A_w sin(2 pi f_w t)` when the scenario carries wave forcing.
pub fn gen_wave(cfg: &ScenarioConfig) -> Vec<f64> {
    if !cfg.kind.wave_active() {
        return vec![0.0; cfg.n_samples()];
    }
    cfg.times()
        .into_iter()
        .map(|t| cfg.wave_amplitude * (2.0 * PI * cfg.wave_freq * t).sin())
        .collect()
}

/// Zero-mean white Gaussian samples (ChaCha8 + Box-Muller), one per step.
pub fn gen_noise(cfg: &ScenarioConfig) -> Vec<f64> {
    let n = cfg.n_samples();
    if !cfg.kind.noise_active() || cfg.noise_sigma == 0.0 {
        return vec![0.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(n + 1);
    while out.len() < n {
        let (z0, z1) = box_muller(&mut rng);
        out.push(cfg.noise_sigma * z0);
        out.push(cfg.noise_sigma * z1);
    }
    out.truncate(n);
    out
}

fn box_muller<R: Rng>(rng: &mut R) -> (f64, f64) {
    // u1 in (0, 1] keeps the log finite
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Exogenous signals of one scenario, shared by every controller evaluated on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub t: Vec<f64>,
    pub reference: Vec<f64>,
    pub disturbance: Vec<f64>,
    pub noise: Vec<f64>,
}

impl Realization {
    pub fn generate(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Realization {
            t: cfg.times(),
            reference: gen_reference(cfg),
            disturbance: gen_wave(cfg),
            noise: gen_noise(cfg),
        })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}
