//! Experiment configuration: a TOML document describing a model, an initial
//! state, a Trotter plan, a time grid and the observables to record.

use std::path::{Path, PathBuf};

use digiq::compiler::{CompileOptions, HeisenbergVariant};
use digiq::observables::SiteOp;
use digiq::pauli::{
    heisenberg_chain, hubbard_2site, jordan_wigner, tim_chain, xy_chain, xyz_chain, Pauli, HUBBARD_PRINTED_ORDER,
};
use digiq::statevector::MAX_STATE_QUBITS;
use digiq::{GateSet, Growth, PauliHamiltonian, Schedule, SimError, StateVector, TrotterPlan};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Heisenberg,
    Xyz,
    Xy,
    Tim,
    Hubbard2,
    PauliFile,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeAxis {
    /// Columns are labelled `t`; times in units of `1/J`.
    #[default]
    T,
    /// Columns are labelled `delta`; `t = δ / (max |coupling|)`.
    Delta,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrotterConfig {
    #[serde(default = "default_order")]
    pub order: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<String>,
}

fn default_order() -> u8 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub axis: TimeAxis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObservableConfig {
    /// `⟨s_z⟩` of one site.
    Magnetization { site: usize },
    /// `Σ_i ⟨s_z^(i)⟩`.
    TotalMagnetization {},
    /// Occupation probability of a basis state.
    Probability { state: String },
    /// Spin correlation `⟨s_v^(i)(t) s_w^(j)⟩`.
    Correlation {
        v: String,
        w: String,
        i: usize,
        j: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        route: Option<String>,
    },
    /// `|⟨ψ_exact(t)|ψ_digital(t)⟩|` under its own Trotter schedule.
    Fidelity {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<u8>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        growth: Option<String>,
    },
    /// Eigenvalues of `H` weighted by the initial state, from the series
    /// `⟨ψ|e^{-iHθ}|ψ⟩`.
    Spectrum {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dtheta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        output: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub n_qubits: usize,
    #[serde(default)]
    pub couplings: Vec<f64>,
    #[serde(default)]
    pub field: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli_file: Option<PathBuf>,
    /// Inline alternative to `pauli_file`, one `coef LETTERS` term per entry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pauli_terms: Vec<String>,
    pub initial_state: String,
    #[serde(default = "default_gateset")]
    pub gateset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heisenberg_variant: Option<String>,
    #[serde(default)]
    pub exact_columns: bool,
    #[serde(default)]
    pub trotter: TrotterConfig,
    pub time: TimeConfig,
    pub observables: Vec<ObservableConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
}

fn default_gateset() -> String {
    "S1".into()
}

/// Command-line overrides of the Trotter and gate-set fields.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub gateset: Option<String>,
    pub order: Option<u8>,
    pub steps: Option<usize>,
    pub eps: Option<f64>,
    pub growth: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Ancilla,
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumOutput {
    Peaks,
    Series,
}

/// A validated observable.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    Magnetization(usize),
    TotalMagnetization,
    Probability(String),
    Correlation { v: SiteOp, w: SiteOp, route: Route },
    Fidelity { name: String, plan: TrotterPlan },
    Spectrum { points: usize, dtheta: Option<f64>, output: SpectrumOutput },
}

impl Observable {
    /// Column stem, e.g. `mz1`, `p100`, `sx3sx1`.
    pub fn name(&self) -> String {
        match self {
            Observable::Magnetization(site) => format!("mz{site}"),
            Observable::TotalMagnetization => "mz".into(),
            Observable::Probability(bits) => format!("p{bits}"),
            Observable::Correlation { v, w, .. } => format!(
                "s{}{}s{}{}",
                v.pauli.as_char().to_ascii_lowercase(),
                v.qubit,
                w.pauli.as_char().to_ascii_lowercase(),
                w.qubit
            ),
            Observable::Fidelity { name, .. } => name.clone(),
            Observable::Spectrum { .. } => "spectrum".into(),
        }
    }
}

/// Everything a run needs, resolved from an [`ExperimentConfig`].
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub hamiltonian: PauliHamiltonian,
    pub initial_state: StateVector,
    /// Product-state symbols of the initial state.
    pub initial_symbols: String,
    pub gateset: GateSet,
    pub compile: CompileOptions,
    pub plan: TrotterPlan,
    pub axis: TimeAxis,
    /// Grid values as printed in the first column.
    pub grid: Vec<f64>,
    /// Evolution times for each grid value.
    pub times: Vec<f64>,
    pub observables: Vec<Observable>,
    pub exact_columns: bool,
}

fn invalid(path: impl Into<String>, reason: impl Into<String>) -> CliError {
    CliError::Validation(format!("{}: {}", path.into(), reason.into()))
}

fn at(path: &str) -> impl Fn(SimError) -> CliError + '_ {
    move |e| match e {
        SimError::Resource(msg) => CliError::Resource(format!("{path}: {msg}")),
        SimError::Input(msg) => invalid(path, msg),
    }
}

fn parse_pauli(path: &str, s: &str) -> Result<Pauli, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "x" => Ok(Pauli::X),
        "y" => Ok(Pauli::Y),
        "z" => Ok(Pauli::Z),
        other => Err(invalid(path, format!("unknown axis {other:?}; expected x, y or z"))),
    }
}

fn check_site(path: &str, site: usize, n: usize) -> Result<(), CliError> {
    if site == 0 || site > n {
        return Err(invalid(path, format!("site {site} outside 1..={n}")));
    }
    Ok(())
}

fn plan_from(
    path: &str,
    order: u8,
    steps: Option<usize>,
    eps: Option<f64>,
    growth: Option<&str>,
) -> Result<TrotterPlan, CliError> {
    let schedule = match (steps, eps) {
        (Some(n), None) => Schedule::FixedN(n),
        (None, Some(eps)) => {
            let growth: Growth = growth.unwrap_or("quadratic").parse().map_err(at(&format!("{path}.growth")))?;
            Schedule::FixedEps { eps, growth }
        }
        (Some(_), Some(_)) => return Err(invalid(path, "set either steps or eps, not both")),
        (None, None) => return Err(invalid(path, "set either steps or eps")),
    };
    TrotterPlan::new(order, schedule).map_err(at(path))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {}", e.message())))
    }

    /// Reads a config file. A relative `pauli_file` is resolved against the
    /// config's directory.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        if let (Some(file), Some(dir)) = (&config.pauli_file, path.parent()) {
            if file.is_relative() {
                config.pauli_file = Some(dir.join(file));
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(g) = &o.gateset {
            self.gateset = g.clone();
        }
        if let Some(order) = o.order {
            self.trotter.order = order;
        }
        if let Some(n) = o.steps {
            self.trotter.steps = Some(n);
            self.trotter.eps = None;
        }
        if let Some(eps) = o.eps {
            self.trotter.eps = Some(eps);
            self.trotter.steps = None;
        }
        if let Some(growth) = &o.growth {
            self.trotter.growth = Some(growth.clone());
        }
    }

    fn hamiltonian(&self) -> Result<PauliHamiltonian, CliError> {
        let n = self.n_qubits;
        let c = &self.couplings;
        let need = |k: usize, what: &str| -> Result<(), CliError> {
            if c.len() != k {
                return Err(invalid("couplings", format!("{what} expects {k} values, got {}", c.len())));
            }
            Ok(())
        };
        let h = match self.model {
            ModelKind::Heisenberg => {
                need(n.saturating_sub(1), "one J per bond")?;
                heisenberg_chain(n, c, self.field)
            }
            ModelKind::Xyz => {
                need(3, "[Jxx, Jyy, Jzz]")?;
                xyz_chain(n, c[0], c[1], c[2])
            }
            ModelKind::Xy => {
                need(2, "[Jxx, Jyy]")?;
                xy_chain(n, c[0], c[1])
            }
            ModelKind::Tim => {
                need(1, "[Jzz]")?;
                tim_chain(n, &vec![self.field / 2.0; n], c[0])
            }
            ModelKind::Hubbard2 => {
                if n != 4 {
                    return Err(invalid("n_qubits", "hubbard2 maps onto 4 qubits"));
                }
                need(2, "[V, U]")?;
                jordan_wigner(&hubbard_2site(c[0], c[1]), &HUBBARD_PRINTED_ORDER)
            }
            ModelKind::PauliFile => {
                let (field, text) = match (&self.pauli_file, self.pauli_terms.is_empty()) {
                    (Some(file), true) => (
                        "pauli_file",
                        std::fs::read_to_string(file)
                            .map_err(|e| invalid("pauli_file", format!("{}: {e}", file.display())))?,
                    ),
                    (None, false) => ("pauli_terms", self.pauli_terms.join("\n")),
                    _ => {
                        return Err(invalid(
                            "pauli_file",
                            "model pauli-file needs exactly one of pauli_file and pauli_terms",
                        ))
                    }
                };
                let h = PauliHamiltonian::parse_text(&text).map_err(at(field))?;
                if h.n_qubits() != n {
                    return Err(invalid("n_qubits", format!("{field} describes {} qubits", h.n_qubits())));
                }
                Ok(h)
            }
        };
        h.map_err(at("model"))
    }

    fn initial_symbols(&self) -> Result<String, CliError> {
        let n = self.n_qubits;
        let symbols = match self.initial_state.trim() {
            "all-up" => "0".repeat(n),
            "all-down" => "1".repeat(n),
            s => s.to_string(),
        };
        if symbols.chars().count() != n {
            return Err(invalid(
                "initial_state",
                format!("{symbols:?} has {} symbols, expected {n}", symbols.chars().count()),
            ));
        }
        Ok(symbols)
    }

    /// Checks every field and cross-reference, resolving the config into an
    /// executable [`Experiment`].
    pub fn validate(&self) -> Result<Experiment, CliError> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(invalid("n_qubits", "must be at least 1"));
        }
        if n > MAX_STATE_QUBITS {
            return Err(CliError::Resource(format!("n_qubits: {n} exceeds the {MAX_STATE_QUBITS}-qubit limit")));
        }
        if !self.field.is_finite() || self.couplings.iter().any(|c| !c.is_finite()) {
            return Err(invalid("couplings", "values must be finite"));
        }
        let hamiltonian = self.hamiltonian()?;
        let initial_symbols = self.initial_symbols()?;
        let initial_state = StateVector::product_state(&initial_symbols).map_err(at("initial_state"))?;
        let gateset: GateSet = self.gateset.parse().map_err(at("gateset"))?;
        let mut compile = CompileOptions::default();
        if let Some(v) = &self.heisenberg_variant {
            let variant: HeisenbergVariant = v.parse().map_err(at("heisenberg_variant"))?;
            if variant.gate_set() != gateset {
                return Err(invalid(
                    "heisenberg_variant",
                    format!("{variant} compiles to {}, not {gateset}", variant.gate_set()),
                ));
            }
            compile.heisenberg_variant = Some(variant);
        }
        let t = &self.trotter;
        let plan = plan_from("trotter", t.order, t.steps, t.eps, t.growth.as_deref())?;

        let time = &self.time;
        if !(time.max.is_finite() && time.max >= 0.0) {
            return Err(invalid("time.max", "must be finite and non-negative"));
        }
        if time.points == 0 {
            return Err(invalid("time.points", "must be at least 1"));
        }
        let grid: Vec<f64> = if time.points == 1 {
            vec![time.max]
        } else {
            (0..time.points).map(|k| time.max * k as f64 / (time.points - 1) as f64).collect()
        };
        let times = match time.axis {
            TimeAxis::T => grid.clone(),
            TimeAxis::Delta => {
                let scale = hamiltonian.coupling_scale();
                if scale == 0.0 {
                    return Err(invalid("time.axis", "delta axis needs a nonzero coupling"));
                }
                grid.iter().map(|d| d / scale).collect()
            }
        };

        if self.observables.is_empty() {
            return Err(invalid("observables", "at least one observable is required"));
        }
        let mut observables = Vec::with_capacity(self.observables.len());
        for (k, obs) in self.observables.iter().enumerate() {
            let path = format!("observables[{k}]");
            let o = match obs {
                ObservableConfig::Magnetization { site } => {
                    check_site(&format!("{path}.site"), *site, n)?;
                    Observable::Magnetization(*site)
                }
                ObservableConfig::TotalMagnetization {} => Observable::TotalMagnetization,
                ObservableConfig::Probability { state } => {
                    digiq::statevector::parse_bits(n, state).map_err(at(&format!("{path}.state")))?;
                    Observable::Probability(state.clone())
                }
                ObservableConfig::Correlation { v, w, i, j, route } => {
                    check_site(&format!("{path}.i"), *i, n)?;
                    check_site(&format!("{path}.j"), *j, n)?;
                    let route = match route.as_deref().unwrap_or("ancilla") {
                        "ancilla" => Route::Ancilla,
                        "direct" => Route::Direct,
                        other => {
                            return Err(invalid(
                                format!("{path}.route"),
                                format!("unknown route {other:?}; expected ancilla or direct"),
                            ))
                        }
                    };
                    Observable::Correlation {
                        v: SiteOp::new(parse_pauli(&format!("{path}.v"), v)?, *i),
                        w: SiteOp::new(parse_pauli(&format!("{path}.w"), w)?, *j),
                        route,
                    }
                }
                ObservableConfig::Fidelity { name, order, steps, eps, growth } => {
                    let plan = plan_from(&path, order.unwrap_or(t.order), *steps, *eps, growth.as_deref())?;
                    let name = name.clone().unwrap_or_else(|| match plan.schedule() {
                        Schedule::FixedN(n) => format!("fid_fixed{n}"),
                        Schedule::FixedEps { growth, .. } => format!("fid_{growth}"),
                    });
                    Observable::Fidelity { name, plan }
                }
                ObservableConfig::Spectrum { points, dtheta, output } => {
                    if self.observables.len() != 1 {
                        return Err(invalid(path, "a spectrum must be the only observable"));
                    }
                    let points = points.unwrap_or(digiq::observables::DEFAULT_SPECTRUM_POINTS);
                    if points < 2 || !points.is_power_of_two() {
                        return Err(invalid(format!("{path}.points"), "must be a power of two ≥ 2"));
                    }
                    if let Some(d) = dtheta {
                        if !(*d > 0.0 && d.is_finite()) {
                            return Err(invalid(format!("{path}.dtheta"), "must be positive"));
                        }
                    }
                    let output = match output.as_deref().unwrap_or("peaks") {
                        "peaks" => SpectrumOutput::Peaks,
                        "series" => SpectrumOutput::Series,
                        other => {
                            return Err(invalid(
                                format!("{path}.output"),
                                format!("unknown output {other:?}; expected peaks or series"),
                            ))
                        }
                    };
                    Observable::Spectrum { points, dtheta: *dtheta, output }
                }
            };
            if observables.iter().any(|p: &Observable| p.name() == o.name()) {
                return Err(invalid(path, format!("duplicate column {:?}", o.name())));
            }
            observables.push(o);
        }

        Ok(Experiment {
            hamiltonian,
            initial_state,
            initial_symbols,
            gateset,
            compile,
            plan,
            axis: time.axis,
            grid,
            times,
            observables,
            exact_columns: self.exact_columns,
        })
    }
}
