//! Command-line driver: a JSON run spec plus flag overrides.
//!
//! Every command writes to `output.path` when given, otherwise to stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circuits::{
    circuit_spectrum, foucault_system, gamma_grid, gamma_sweep, pt_circuit_system, CircuitParams,
};
use crate::error::{Error, Result};
use crate::evolution::{integrate_schrodinger, integrate_second_order, IntegratorConfig, Metadata};
use crate::export::{sweep_csv, trajectory_csv, trajectory_json, write_file, OutputFormat, SCHEMA_VERSION};
use crate::linalg::{biorthogonal, eig2, Complex, ComplexVector2};
use crate::models::{build_hermitian, build_pt_dimer, EffectiveHamiltonian, HermitianEqualDiagonal, PTDimerParams};
use crate::phases::{
    biorthogonal_dynamic_phase, extract_phases, extract_precession, return_period, total_phase, PhaseReport,
};
use crate::phases::BlochInitialState;
use crate::selfcheck::run_checks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Evolve,
    Phases,
    Sweep,
    Circuit,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Hermitian { h: f64, f: f64, g: f64 },
    PtDimer { a: f64, g: f64, s: f64 },
    Circuit {
        inductance: f64,
        capacitance: f64,
        gyrator_conductance: f64,
        #[serde(default)]
        resistance: Option<f64>,
    },
}

/// Bloch angles are taken relative to the eigenbasis of the model for
/// `phases`, and relative to the site basis for `evolve`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Bloch { theta0: f64, phi0: f64 },
    Vector { re: [f64; 2], im: [f64; 2] },
    Voltages { v: [f64; 2], dv: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub gamma_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub spec_version: u32,
    pub command: Command,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub initial_state: Option<InitialState>,
    #[serde(default)]
    pub integrator: Option<IntegratorConfig>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    pub output: OutputSpec,
}

impl RunSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        if spec.spec_version != SCHEMA_VERSION {
            return Err(Error::Spec(format!("unsupported spec_version {}", spec.spec_version)));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run spec serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Hermitian,
    PtDimer,
    Circuit,
}

#[derive(Debug, Parser)]
#[command(name = "geophase", version, about = "Geometric phases of two-level systems and gyrator circuits")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run spec; flags override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long)]
    pub inductance: Option<f64>,
    #[arg(long)]
    pub capacitance: Option<f64>,
    #[arg(long)]
    pub gyrator: Option<f64>,
    #[arg(long)]
    pub resistance: Option<f64>,
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub phi0: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub gamma_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

fn default_model(kind: ModelKind) -> ModelSpec {
    match kind {
        ModelKind::Hermitian => ModelSpec::Hermitian { h: 0.0, f: 0.5, g: 0.5 },
        ModelKind::PtDimer => ModelSpec::PtDimer { a: 0.0, g: 1.0, s: 0.5 },
        // ω₀ = 20, coupling 0.4: well inside the precession scale separation.
        ModelKind::Circuit => ModelSpec::Circuit {
            inductance: 0.0025,
            capacitance: 1.0,
            gyrator_conductance: 0.4,
            resistance: None,
        },
    }
}

fn kind_of(m: &ModelSpec) -> ModelKind {
    match m {
        ModelSpec::Hermitian { .. } => ModelKind::Hermitian,
        ModelSpec::PtDimer { .. } => ModelKind::PtDimer,
        ModelSpec::Circuit { .. } => ModelKind::Circuit,
    }
}

fn set(slot: &mut f64, v: Option<f64>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn reject(flags: &[(&str, bool)], model: &str) -> Result<()> {
    match flags.iter().find(|(_, given)| *given) {
        Some((name, _)) => Err(Error::Spec(format!("flag --{name} does not apply to model {model}"))),
        None => Ok(()),
    }
}

impl Cli {
    /// Folds the spec file (if any) and the flag overrides into one spec.
    pub fn resolve(&self, base: Option<RunSpec>) -> Result<RunSpec> {
        let mut spec = base.unwrap_or(RunSpec {
            spec_version: SCHEMA_VERSION,
            command: self.command,
            model: None,
            initial_state: None,
            integrator: None,
            sweep: None,
            output: OutputSpec {
                path: None,
                format: match self.command {
                    Command::Evolve | Command::Sweep => OutputFormat::Csv,
                    _ => OutputFormat::Json,
                },
            },
        });
        spec.command = self.command;

        let kind = self
            .model
            .or(spec.model.as_ref().map(kind_of))
            .unwrap_or(match self.command {
                Command::Sweep | Command::Circuit => ModelKind::Circuit,
                _ => ModelKind::Hermitian,
            });
        let mut model = match spec.model {
            Some(m) if kind_of(&m) == kind => m,
            _ => default_model(kind),
        };
        match &mut model {
            ModelSpec::Hermitian { h, f, g } => {
                reject(&[("a", self.a.is_some()), ("s", self.s.is_some())], "hermitian")?;
                set(h, self.h);
                set(f, self.f);
                set(g, self.g);
            }
            ModelSpec::PtDimer { a, g, s } => {
                reject(&[("h", self.h.is_some()), ("f", self.f.is_some())], "pt-dimer")?;
                set(a, self.a);
                set(g, self.g);
                set(s, self.s);
            }
            ModelSpec::Circuit {
                inductance,
                capacitance,
                gyrator_conductance,
                resistance,
            } => {
                reject(
                    &[
                        ("h", self.h.is_some()),
                        ("f", self.f.is_some()),
                        ("g", self.g.is_some()),
                        ("a", self.a.is_some()),
                        ("s", self.s.is_some()),
                    ],
                    "circuit",
                )?;
                set(inductance, self.inductance);
                set(capacitance, self.capacitance);
                set(gyrator_conductance, self.gyrator);
                if self.resistance.is_some() {
                    *resistance = self.resistance;
                }
            }
        }
        if kind != ModelKind::Circuit {
            let circuit_flags = [
                ("inductance", self.inductance.is_some()),
                ("capacitance", self.capacitance.is_some()),
                ("gyrator", self.gyrator.is_some()),
                ("resistance", self.resistance.is_some()),
            ];
            reject(&circuit_flags, "without a circuit")?;
        }
        spec.model = Some(model);

        if self.theta0.is_some() || self.phi0.is_some() {
            let (mut theta0, mut phi0) = match spec.initial_state {
                Some(InitialState::Bloch { theta0, phi0 }) => (theta0, phi0),
                _ => (0.0, 0.0),
            };
            set(&mut theta0, self.theta0);
            set(&mut phi0, self.phi0);
            spec.initial_state = Some(InitialState::Bloch { theta0, phi0 });
        }

        if self.step.is_some() || self.duration.is_some() || self.stride.is_some() {
            let mut cfg = spec.integrator.unwrap_or(IntegratorConfig {
                step: 1e-3,
                duration: 10.0,
                record_stride: 1,
            });
            set(&mut cfg.step, self.step);
            set(&mut cfg.duration, self.duration);
            if let Some(k) = self.stride {
                cfg.record_stride = k;
            }
            spec.integrator = Some(cfg);
        }

        if self.gamma_max.is_some() || self.steps.is_some() {
            let mut sw = spec.sweep.unwrap_or(SweepSpec { gamma_max: 2.0, steps: 81 });
            set(&mut sw.gamma_max, self.gamma_max);
            if let Some(n) = self.steps {
                sw.steps = n;
            }
            spec.sweep = Some(sw);
        }

        if let Some(p) = &self.output {
            spec.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            spec.output.format = match f {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
        }
        Ok(spec)
    }
}

fn hamiltonian(model: &ModelSpec) -> Result<EffectiveHamiltonian> {
    match *model {
        ModelSpec::Hermitian { h, f, g } => {
            if ![h, f, g].iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite("hermitian parameters"));
            }
            Ok(build_hermitian(HermitianEqualDiagonal { h, f, g }))
        }
        ModelSpec::PtDimer { a, g, s } => Ok(build_pt_dimer(PTDimerParams::new(a, g, s)?)),
        ModelSpec::Circuit { .. } => Err(Error::Spec("this command needs a hermitian or pt_dimer model".into())),
    }
}

fn circuit(model: &ModelSpec) -> Result<CircuitParams> {
    match *model {
        ModelSpec::Circuit {
            inductance,
            capacitance,
            gyrator_conductance,
            resistance,
        } => CircuitParams::new(inductance, capacitance, gyrator_conductance, resistance),
        _ => Err(Error::Spec("this command needs a circuit model".into())),
    }
}

fn circuit_system_of(p: &CircuitParams) -> Result<crate::decomplexify::SecondOrderSystem> {
    if p.resistance.is_some() {
        pt_circuit_system(p)
    } else {
        foucault_system(p)
    }
}

fn bloch(state: Option<InitialState>) -> Result<BlochInitialState> {
    match state {
        None => BlochInitialState::new(0.0, 0.0),
        Some(InitialState::Bloch { theta0, phi0 }) => BlochInitialState::new(theta0, phi0),
        Some(_) => Err(Error::Spec("this command needs a bloch initial state".into())),
    }
}

fn integrator(spec: &RunSpec, omega_max: f64) -> Result<IntegratorConfig> {
    match spec.integrator {
        Some(cfg) => {
            cfg.validate()?;
            Ok(cfg)
        }
        None => IntegratorConfig::with_default_step(omega_max, 10.0, 1),
    }
}

fn model_params(model: &ModelSpec) -> Metadata {
    let meta = Metadata::with_source("geophase");
    match *model {
        ModelSpec::Hermitian { h, f, g } => meta.param("h", h).param("f", f).param("g", g),
        ModelSpec::PtDimer { a, g, s } => meta.param("a", a).param("g", g).param("s", s),
        ModelSpec::Circuit {
            inductance,
            capacitance,
            gyrator_conductance,
            resistance,
        } => {
            let m = meta
                .param("inductance", inductance)
                .param("capacitance", capacitance)
                .param("gyrator_conductance", gyrator_conductance);
            match resistance {
                Some(r) => m.param("resistance", r),
                None => m,
            }
        }
    }
}

fn evolve(spec: &RunSpec, model: &ModelSpec) -> Result<String> {
    let traj = match model {
        ModelSpec::Circuit { .. } => {
            let p = circuit(model)?;
            let sys = circuit_system_of(&p)?;
            let (v, dv) = match spec.initial_state {
                None => ([1.0, 0.0], [0.0, 0.0]),
                Some(InitialState::Voltages { v, dv }) => (v, dv),
                Some(_) => return Err(Error::Spec("circuit evolution needs a voltages initial state".into())),
            };
            let scale = p.omega0() + p.coupling() + p.rate();
            let cfg = integrator(spec, scale)?;
            integrate_second_order(&sys, &Vector2::from(v), &Vector2::from(dv), &cfg)?
        }
        _ => {
            let h = hamiltonian(model)?.operator();
            let psi0 = match spec.initial_state {
                Some(InitialState::Vector { re, im }) => {
                    ComplexVector2::new(Complex::new(re[0], im[0]), Complex::new(re[1], im[1]))
                }
                Some(InitialState::Voltages { .. }) => {
                    return Err(Error::Spec("voltages initial state needs a circuit model".into()))
                }
                other => {
                    let [c1, c2] = bloch(other)?.coefficients();
                    ComplexVector2::new(c1, c2)
                }
            };
            let cfg = integrator(spec, h.norm().max(1e-3))?;
            integrate_schrodinger(&h, &psi0, &cfg)?
        }
    };
    let traj = traj.with_metadata(model_params(model));
    match spec.output.format {
        OutputFormat::Csv => Ok(trajectory_csv(&traj)),
        OutputFormat::Json => trajectory_json(&traj),
    }
}

fn report_json(r: &PhaseReport) -> serde_json::Value {
    json!({
        "period": r.period,
        "total": r.total,
        "dynamic": r.dynamic,
        "geometric": r.geometric,
        "hannay": r.hannay,
    })
}

fn phases(spec: &RunSpec, model: &ModelSpec) -> Result<serde_json::Value> {
    let eh = hamiltonian(model)?;
    let init = bloch(spec.initial_state)?;
    let op = eh.operator();
    match model {
        ModelSpec::Hermitian { .. } => {
            let eig = eig2(&op)?;
            let (l1, l2) = (eig.eigenvalue1.re, eig.eigenvalue2.re);
            let analytic = PhaseReport::analytic(l1, l2, &init)?;
            let period = analytic.period;
            let requested = spec.integrator.map_or(period / 2000.0, |c| c.step);
            let n = (period / requested).ceil().max(1.0) as usize;
            let cfg = IntegratorConfig::new(period / n as f64, period, 1)?;
            let psi0 = init.state_in(&eig.eigenvectors());
            let extracted = extract_phases(&integrate_schrodinger(&op, &psi0, &cfg)?, &op)?;
            let mut out = report_json(&analytic);
            out["eigenvalues"] = json!([l1, l2]);
            out["extracted"] = report_json(&extracted);
            out["extracted"]["step"] = json!(cfg.step);
            Ok(out)
        }
        _ => {
            let basis = biorthogonal(&op)?;
            let [k1, k2] = basis.eigenvalues;
            let dynamic = biorthogonal_dynamic_phase(&eh, &init)?;
            let total = total_phase(k1.re, k2.re)?;
            Ok(json!({
                "eigenvalues": [k1.re, k2.re],
                "period": return_period(k1.re, k2.re)?,
                "total": total,
                "dynamic": dynamic,
                "geometric": total - dynamic,
            }))
        }
    }
}

fn sweep(spec: &RunSpec, model: &ModelSpec) -> Result<String> {
    let base = circuit(model)?;
    let sw = spec.sweep.unwrap_or(SweepSpec { gamma_max: 2.0, steps: 81 });
    if !(sw.gamma_max > 0.0 && sw.gamma_max.is_finite()) || sw.steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "sweep needs gamma_max > 0 and steps >= 2, got {} and {}",
            sw.gamma_max, sw.steps
        )));
    }
    let points = gamma_sweep(&base, &gamma_grid(sw.gamma_max, sw.steps))?;
    let omega0 = base.omega0();
    match spec.output.format {
        OutputFormat::Csv => Ok(sweep_csv(&points, omega0)),
        OutputFormat::Json => {
            let rows: Vec<_> = points
                .iter()
                .map(|p| {
                    let m = p.normalized(omega0);
                    json!({
                        "gamma": p.gamma,
                        "re": m.map(|z| z.re),
                        "im": m.map(|z| z.im),
                        "classification": p.classification.label(),
                    })
                })
                .collect();
            finish_json(json!({ "command": "sweep", "omega0": omega0, "points": rows }))
        }
    }
}

fn circuit_report(spec: &RunSpec, model: &ModelSpec) -> Result<serde_json::Value> {
    let p = circuit(model)?;
    let point = circuit_spectrum(&p)?;
    let mut out = json!({
        "omega0": p.omega0(),
        "coupling": p.coupling(),
        "rate": p.rate(),
        "gamma": point.gamma,
        "classification": point.classification.label(),
        "modes_re": point.mode_values.map(|z| z.re),
        "modes_im": point.mode_values.map(|z| z.im),
    });
    let (v, dv) = match spec.initial_state {
        None => ([1.0, 0.0], [0.0, 0.0]),
        Some(InitialState::Voltages { v, dv }) => (v, dv),
        Some(_) => return Err(Error::Spec("circuit needs a voltages initial state".into())),
    };
    let cfg = integrator(spec, p.omega0() + p.coupling() + p.rate())?;
    let traj = integrate_second_order(&circuit_system_of(&p)?, &Vector2::from(v), &Vector2::from(dv), &cfg)?;
    let prec = extract_precession(&traj)?;
    out["precession"] = json!({
        "rate": prec.rate,
        "carrier": prec.carrier,
        "duration": cfg.duration,
        "angle": prec.angle_at(cfg.duration),
    });
    Ok(out)
}

fn finish_json(mut v: serde_json::Value) -> Result<String> {
    v["spec_version"] = json!(SCHEMA_VERSION);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Spec(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn check(out: &mut dyn Write) -> Result<String> {
    let results = run_checks();
    let mut failed = 0;
    let mut text = String::new();
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("{mark} {}: {}\n", r.name, r.detail));
        failed += usize::from(!r.passed);
    }
    let _ = out.write_all(text.as_bytes());
    if failed > 0 {
        return Err(Error::CheckFailed(failed));
    }
    Ok(text)
}

/// Executes a resolved spec; the artifact goes to the output path or `out`.
pub fn run(spec: &RunSpec, out: &mut dyn Write) -> Result<()> {
    if spec.spec_version != SCHEMA_VERSION {
        return Err(Error::Spec(format!("unsupported spec_version {}", spec.spec_version)));
    }
    let text = if spec.command == Command::Check {
        let text = check(out)?;
        if spec.output.path.is_none() {
            return Ok(());
        }
        text
    } else {
        let model = spec
            .model
            .ok_or_else(|| Error::Spec("missing model block".into()))?;
        match spec.command {
            Command::Evolve => evolve(spec, &model)?,
            Command::Sweep => sweep(spec, &model)?,
            Command::Phases => {
                let mut v = phases(spec, &model)?;
                v["command"] = json!("phases");
                finish_json(v)?
            }
            Command::Circuit => {
                let mut v = circuit_report(spec, &model)?;
                v["command"] = json!("circuit");
                finish_json(v)?
            }
            Command::Check => unreachable!(),
        }
    };
    match &spec.output.path {
        Some(path) => write_file(path, &text),
        None => out.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = (|| {
        let base = match &cli.spec {
            Some(path) => {
                let text = crate::export::read_file(path)?;
                Some(RunSpec::from_json(&text).map_err(|e| match e {
                    Error::Spec(m) => Error::Spec(format!("{}: {m}", path.display())),
                    other => other,
                })?)
            }
            None => None,
        };
        let spec = cli.resolve(base)?;
        run(&spec, out)
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
