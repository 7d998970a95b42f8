//! Flat `section.key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Unset keys keep their
//! defaults. Controllers live under `controller.<name>.<field>`: naming one
//! of the six built-in controllers edits it, any other name adds a new one
//! (its `kind` and every parameter must then be given). `controllers = a, b`
//! selects and orders the controllers that take part in a run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::controllers::{
    default_controllers, ControllerParams, ControllerSpec, ControllerTag, ImcParams, MrcParams,
    PidParams, RetuneConfig,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::plant::PlantParams;
use crate::sim::{ScenarioConfig, ScenarioKind};
use crate::tuning::{CostWeights, OptimizerConfig, SearchSpace};

/// Which artifacts a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitSet {
    pub csv: bool,
    pub markdown: bool,
    pub plotdata: bool,
}

impl Default for EmitSet {
    fn default() -> Self {
        EmitSet { csv: true, markdown: true, plotdata: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub plant: PlantParams,
    pub controllers: Vec<ControllerSpec>,
    /// One entry per scenario kind; all share step size, horizon and seed.
    pub scenarios: Vec<ScenarioConfig>,
    pub weights: CostWeights,
    pub output_dir: PathBuf,
    pub emit: EmitSet,
    pub tune: OptimizerConfig,
    pub search: SearchSpace,
    pub retune: RetuneConfig,
    pub execution: Execution,
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = ScenarioConfig::default();
        RunConfig {
            plant: PlantParams::default(),
            controllers: default_controllers(),
            scenarios: ScenarioKind::ALL.iter().map(|&k| base.with_kind(k)).collect(),
            weights: CostWeights::default(),
            output_dir: PathBuf::from("out"),
            emit: EmitSet::default(),
            tune: OptimizerConfig::default(),
            search: SearchSpace::pid_default(),
            retune: RetuneConfig::default(),
            execution: Execution::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.plant.validate()?;
        if self.controllers.is_empty() {
            return Err(Error::Invariant("at least one controller is required".into()));
        }
        if self.scenarios.is_empty() {
            return Err(Error::Invariant("at least one scenario is required".into()));
        }
        let first = &self.scenarios[0];
        for s in &self.scenarios {
            s.validate()?;
            if s.dt != first.dt || s.horizon != first.horizon {
                return Err(Error::Invariant("all scenarios must share sim.dt and sim.horizon".into()));
            }
        }
        for (i, c) in self.controllers.iter().enumerate() {
            if !valid_name(&c.name) {
                return Err(Error::Invariant(format!("controller name `{}` must be [A-Za-z0-9_-]+", c.name)));
            }
            if self.controllers[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::Invariant(format!("controller `{}` is defined twice", c.name)));
            }
            c.params
                .validate()
                .map_err(|e| Error::Invariant(format!("controller.{}: {e}", c.name)))?;
        }
        self.weights.validate()?;
        self.search.validate()?;
        self.tune.validate()?;
        self.retune.wn.validate("retune.wn")?;
        self.retune.tauf.validate("retune.tauf")?;
        if !(self.retune.os_cap >= 0.0) {
            return Err(Error::Invariant("retune.os_cap must be ≥ 0".into()));
        }
        Ok(())
    }

    /// Shared scenario settings (the first scenario's).
    pub fn base_scenario(&self) -> ScenarioConfig {
        self.scenarios.first().cloned().unwrap_or_default()
    }

    pub fn controller(&self, name: &str) -> Option<&ControllerSpec> {
        self.controllers.iter().find(|c| c.name == name)
    }

    pub fn set_seed(&mut self, seed: u64) {
        for s in &mut self.scenarios {
            s.seed = seed;
        }
        self.tune.seed = seed;
    }

    pub fn set_dt(&mut self, dt: f64) {
        for s in &mut self.scenarios {
            s.dt = dt;
        }
    }

    pub fn set_execution(&mut self, execution: Execution) {
        self.execution = execution;
        self.tune.execution = execution;
        self.retune.execution = execution;
    }

    /// Serializes every setting so that re-parsing gives an equal config.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let base = self.base_scenario();
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("plant.thruster_num", list(&self.plant.thruster_num));
        kv("plant.thruster_den", list(&self.plant.thruster_den));
        kv("plant.mass", self.plant.mass.to_string());
        kv("sim.horizon", base.horizon.to_string());
        kv("sim.dt", base.dt.to_string());
        kv("sim.reference", base.ref_amplitude.to_string());
        kv("sim.seed", base.seed.to_string());
        kv("sim.initial_output", base.initial_output.to_string());
        kv("wave.amplitude", base.wave_amplitude.to_string());
        kv("wave.frequency", base.wave_freq.to_string());
        kv("noise.sigma", base.noise_sigma.to_string());
        kv("scenarios", self.scenarios.iter().map(|s| s.kind.name()).collect::<Vec<_>>().join(", "));
        let w = &self.weights;
        for (k, v) in [("wt", w.wt), ("wi", w.wi), ("wu", w.wu), ("wd", w.wd), ("rho", w.rho), ("os_ref", w.os_ref)] {
            kv(&format!("weights.{k}"), v.to_string());
        }
        kv("output.dir", self.output_dir.display().to_string());
        let mut emit = Vec::new();
        if self.emit.csv {
            emit.push("csv");
        }
        if self.emit.markdown {
            emit.push("markdown");
        }
        if self.emit.plotdata {
            emit.push("plotdata");
        }
        kv("output.emit", emit.join(", "));
        let execution = match self.execution {
            Execution::Sequential => "sequential",
            Execution::Parallel => "parallel",
        };
        kv("run.execution", execution.into());
        let t = &self.tune;
        kv("tune.population", t.population.to_string());
        kv("tune.iterations", t.iterations.to_string());
        kv("tune.seed", t.seed.to_string());
        for (k, v) in [
            ("w_start", t.w_start),
            ("w_end", t.w_end),
            ("c1", t.c1),
            ("c2", t.c2),
            ("vmax_frac", t.vmax_frac),
            ("de_f", t.de_f),
            ("de_cr", t.de_cr),
            ("woa_b", t.woa_b),
        ] {
            kv(&format!("tune.{k}"), v.to_string());
        }
        kv("tune.lower", list(&self.search.lower));
        kv("tune.upper", list(&self.search.upper));
        let r = &self.retune;
        for (k, v) in [
            ("zeta", r.zeta),
            ("wn_min", r.wn.start),
            ("wn_max", r.wn.stop),
            ("wn_step", r.wn.step),
            ("tauf_min", r.tauf.start),
            ("tauf_max", r.tauf.stop),
            ("tauf_step", r.tauf.step),
            ("os_cap", r.os_cap),
        ] {
            kv(&format!("retune.{k}"), v.to_string());
        }
        kv("controllers", self.controllers.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", "));
        for c in &self.controllers {
            out.push('\n');
            out.push_str(&controller_block(c));
        }
        out
    }
}

/// `controller.<name>.*` lines for one controller.
pub fn controller_block(c: &ControllerSpec) -> String {
    let mut out = String::new();
    let p = format!("controller.{}", c.name);
    let _ = writeln!(out, "{p}.kind = {}", c.tag());
    let _ = writeln!(out, "{p}.label = {}", c.label);
    let fields: Vec<(&str, String)> = match &c.params {
        ControllerParams::Pid(g) => vec![
            ("kp", g.kp.to_string()),
            ("ki", g.ki.to_string()),
            ("kd", g.kd.to_string()),
            ("tf", g.tf.to_string()),
        ],
        ControllerParams::Mrc(m) | ControllerParams::MrcR(m) => {
            vec![("zeta", m.zeta.to_string()), ("wn", m.wn.to_string()), ("tauf", m.tauf.to_string())]
        }
        ControllerParams::Imc(i) => vec![("lambda", i.lambda.to_string()), ("order", i.order.to_string())],
    };
    for (k, v) in fields {
        let _ = writeln!(out, "{p}.{k} = {v}");
    }
    out
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Config { line: self.line, message: message.into() }
    }

    fn f64(&self) -> Result<f64> {
        parse_f64(self.value).ok_or_else(|| self.err(format!("malformed number `{}` for `{}`", self.value, self.key)))
    }

    fn u64(&self) -> Result<u64> {
        self.value
            .parse::<u64>()
            .map_err(|_| self.err(format!("malformed integer `{}` for `{}`", self.value, self.key)))
    }

    fn usize(&self) -> Result<usize> {
        self.value
            .parse::<usize>()
            .map_err(|_| self.err(format!("malformed integer `{}` for `{}`", self.value, self.key)))
    }

    fn list(&self) -> Vec<&str> {
        self.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
    }

    fn f64_list(&self) -> Result<Vec<f64>> {
        self.list()
            .into_iter()
            .map(|s| parse_f64(s).ok_or_else(|| self.err(format!("malformed number `{s}` for `{}`", self.key))))
            .collect()
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

#[derive(Default)]
struct PendingController<'a> {
    first_line: usize,
    kind: Option<(ControllerTag, usize)>,
    label: Option<String>,
    fields: BTreeMap<&'a str, (f64, usize)>,
}

const PID_FIELDS: [&str; 4] = ["kp", "ki", "kd", "tf"];
const MRC_FIELDS: [&str; 3] = ["zeta", "wn", "tauf"];
const IMC_FIELDS: [&str; 2] = ["lambda", "order"];

fn family_fields(tag: ControllerTag) -> &'static [&'static str] {
    match tag {
        ControllerTag::Pid => &PID_FIELDS,
        ControllerTag::Mrc | ControllerTag::MrcR => &MRC_FIELDS,
        ControllerTag::Imc => &IMC_FIELDS,
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut base = ScenarioConfig::default();
    let mut kinds: Vec<ScenarioKind> = ScenarioKind::ALL.to_vec();
    let mut selection: Option<(Vec<String>, usize)> = None;
    let mut pending: Vec<(String, PendingController)> = Vec::new();
    let mut execution: Option<Execution> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Config { line, message: format!("expected `key = value`, found `{content}`") })?;
        let e = Entry { line, key: key.trim(), value: value.trim() };
        match e.key {
            "plant.thruster_num" => cfg.plant.thruster_num = e.f64_list()?,
            "plant.thruster_den" => cfg.plant.thruster_den = e.f64_list()?,
            "plant.mass" => cfg.plant.mass = e.f64()?,
            "sim.horizon" => base.horizon = e.f64()?,
            "sim.dt" => base.dt = e.f64()?,
            "sim.reference" => base.ref_amplitude = e.f64()?,
            "sim.seed" => base.seed = e.u64()?,
            "sim.initial_output" => base.initial_output = e.f64()?,
            "wave.amplitude" => base.wave_amplitude = e.f64()?,
            "wave.frequency" => base.wave_freq = e.f64()?,
            "noise.sigma" => base.noise_sigma = e.f64()?,
            "scenarios" => {
                kinds = e
                    .list()
                    .into_iter()
                    .map(|s| s.parse::<ScenarioKind>().map_err(|err| e.err(err.to_string())))
                    .collect::<Result<_>>()?;
            }
            "weights.wt" => cfg.weights.wt = e.f64()?,
            "weights.wi" => cfg.weights.wi = e.f64()?,
            "weights.wu" => cfg.weights.wu = e.f64()?,
            "weights.wd" => cfg.weights.wd = e.f64()?,
            "weights.rho" => cfg.weights.rho = e.f64()?,
            "weights.os_ref" => cfg.weights.os_ref = e.f64()?,
            "output.dir" => cfg.output_dir = PathBuf::from(e.value),
            "output.emit" => {
                let mut emit = EmitSet { csv: false, markdown: false, plotdata: false };
                for item in e.list() {
                    match item {
                        "csv" => emit.csv = true,
                        "markdown" => emit.markdown = true,
                        "plotdata" => emit.plotdata = true,
                        other => return Err(e.err(format!("unknown output kind `{other}`"))),
                    }
                }
                cfg.emit = emit;
            }
            "run.execution" => {
                execution = Some(match e.value {
                    "parallel" => Execution::Parallel,
                    "sequential" => Execution::Sequential,
                    other => return Err(e.err(format!("run.execution must be parallel or sequential, got `{other}`"))),
                });
            }
            "tune.population" => cfg.tune.population = e.usize()?,
            "tune.iterations" => cfg.tune.iterations = e.usize()?,
            "tune.seed" => cfg.tune.seed = e.u64()?,
            "tune.w_start" => cfg.tune.w_start = e.f64()?,
            "tune.w_end" => cfg.tune.w_end = e.f64()?,
            "tune.c1" => cfg.tune.c1 = e.f64()?,
            "tune.c2" => cfg.tune.c2 = e.f64()?,
            "tune.vmax_frac" => cfg.tune.vmax_frac = e.f64()?,
            "tune.de_f" => cfg.tune.de_f = e.f64()?,
            "tune.de_cr" => cfg.tune.de_cr = e.f64()?,
            "tune.woa_b" => cfg.tune.woa_b = e.f64()?,
            "tune.lower" => cfg.search.lower = e.f64_list()?,
            "tune.upper" => cfg.search.upper = e.f64_list()?,
            "retune.zeta" => cfg.retune.zeta = e.f64()?,
            "retune.wn_min" => cfg.retune.wn.start = e.f64()?,
            "retune.wn_max" => cfg.retune.wn.stop = e.f64()?,
            "retune.wn_step" => cfg.retune.wn.step = e.f64()?,
            "retune.tauf_min" => cfg.retune.tauf.start = e.f64()?,
            "retune.tauf_max" => cfg.retune.tauf.stop = e.f64()?,
            "retune.tauf_step" => cfg.retune.tauf.step = e.f64()?,
            "retune.os_cap" => cfg.retune.os_cap = e.f64()?,
            "controllers" => selection = Some((e.list().into_iter().map(str::to_owned).collect(), line)),
            key => {
                let Some((name, field)) = key.strip_prefix("controller.").and_then(|rest| rest.rsplit_once('.'))
                else {
                    return Err(Error::UnknownKey(key.to_string()));
                };
                if !valid_name(name) {
                    return Err(e.err(format!("controller name `{name}` must be [A-Za-z0-9_-]+")));
                }
                let idx = match pending.iter().position(|(n, _)| n == name) {
                    Some(i) => i,
                    None => {
                        pending.push((name.to_string(), PendingController { first_line: line, ..Default::default() }));
                        pending.len() - 1
                    }
                };
                let p = &mut pending[idx].1;
                match field {
                    "kind" => {
                        let tag = e.value.parse::<ControllerTag>().map_err(|err| e.err(err.to_string()))?;
                        p.kind = Some((tag, line));
                    }
                    "label" => p.label = Some(e.value.to_string()),
                    "order" => {
                        p.fields.insert("order", (e.usize()? as f64, line));
                    }
                    f if PID_FIELDS.contains(&f) || MRC_FIELDS.contains(&f) || IMC_FIELDS.contains(&f) => {
                        let field = PID_FIELDS
                            .iter()
                            .chain(&MRC_FIELDS)
                            .chain(&IMC_FIELDS)
                            .find(|k| **k == f)
                            .expect("matched above");
                        p.fields.insert(field, (e.f64()?, line));
                    }
                    _ => return Err(Error::UnknownKey(key.to_string())),
                }
            }
        }
    }

    cfg.scenarios = kinds.into_iter().map(|k| base.with_kind(k)).collect();
    for (name, p) in pending {
        apply_controller(&mut cfg.controllers, &name, p)?;
    }
    if let Some((names, line)) = selection {
        let mut chosen = Vec::with_capacity(names.len());
        for n in names {
            let spec = cfg
                .controllers
                .iter()
                .find(|c| c.name == n)
                .ok_or_else(|| Error::Config { line, message: format!("unknown controller `{n}` in `controllers`") })?;
            chosen.push(spec.clone());
        }
        cfg.controllers = chosen;
    }
    if let Some(execution) = execution {
        cfg.set_execution(execution);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_controller(list: &mut Vec<ControllerSpec>, name: &str, p: PendingController) -> Result<()> {
    let existing = list.iter().position(|c| c.name == name);
    let base = existing.map(|i| list[i].clone());
    let tag = match (p.kind, &base) {
        (Some((tag, _)), _) => tag,
        (None, Some(b)) => b.tag(),
        (None, None) => {
            return Err(Error::Config {
                line: p.first_line,
                message: format!("controller.{name}.kind is required for a new controller"),
            })
        }
    };
    let allowed = family_fields(tag);
    for (field, (_, line)) in &p.fields {
        if !allowed.contains(field) {
            return Err(Error::Config {
                line: *line,
                message: format!("controller.{name}.{field} does not apply to a {tag} controller"),
            });
        }
    }
    // start from the existing parameters only within the same family
    let inherited: BTreeMap<&str, f64> = match base.as_ref().map(|b| b.params) {
        Some(ControllerParams::Pid(g)) if tag == ControllerTag::Pid => {
            PID_FIELDS.iter().copied().zip(g.theta()).collect()
        }
        Some(ControllerParams::Mrc(m) | ControllerParams::MrcR(m))
            if matches!(tag, ControllerTag::Mrc | ControllerTag::MrcR) =>
        {
            MRC_FIELDS.iter().copied().zip([m.zeta, m.wn, m.tauf]).collect()
        }
        Some(ControllerParams::Imc(i)) if tag == ControllerTag::Imc => {
            IMC_FIELDS.iter().copied().zip([i.lambda, i.order as f64]).collect()
        }
        _ => BTreeMap::new(),
    };
    let get = |field: &str| -> Result<f64> {
        p.fields
            .get(field)
            .map(|(v, _)| *v)
            .or_else(|| inherited.get(field).copied())
            .ok_or_else(|| Error::Invariant(format!("controller.{name}.{field} is required")))
    };
    let params = match tag {
        ControllerTag::Pid => ControllerParams::Pid(PidParams::new(get("kp")?, get("ki")?, get("kd")?, get("tf")?)),
        ControllerTag::Mrc => ControllerParams::Mrc(MrcParams::new(get("zeta")?, get("wn")?, get("tauf")?)),
        ControllerTag::MrcR => ControllerParams::MrcR(MrcParams::new(get("zeta")?, get("wn")?, get("tauf")?)),
        ControllerTag::Imc => ControllerParams::Imc(ImcParams::new(get("lambda")?, get("order")? as usize)),
    };
    let label = p.label.or_else(|| base.as_ref().map(|b| b.label.clone())).unwrap_or_else(|| name.to_string());
    let spec = ControllerSpec::new(name, &label, params);
    match existing {
        Some(i) => list[i] = spec,
        None => list.push(spec),
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Table of the six standard controllers, shipped as a config fragment.
pub const CONTROLLERS_FIXTURE: &str = include_str!("../../fixtures/controllers.conf");
