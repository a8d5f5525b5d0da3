//! Ready-made configurations for the reference figures.

use std::f64::consts::PI;

use crate::config::{ExperimentConfig, ModelKind, ObservableConfig, TimeAxis, TimeConfig, TrotterConfig};
use crate::error::CliError;

pub const PRESET_IDS: [&str; 7] = ["fig2", "fig4a", "fig4b", "fig4c", "fig6a", "fig6b", "fig6c"];

fn fixed(order: u8, n: usize) -> TrotterConfig {
    TrotterConfig { order, steps: Some(n), eps: None, growth: None }
}

fn base(model: ModelKind, n_qubits: usize, couplings: Vec<f64>, field: f64, state: &str) -> ExperimentConfig {
    ExperimentConfig {
        model,
        n_qubits,
        couplings,
        field,
        pauli_file: None,
        pauli_terms: Vec::new(),
        initial_state: state.into(),
        gateset: "S1".into(),
        heisenberg_variant: None,
        exact_columns: true,
        trotter: fixed(1, 5),
        time: TimeConfig { max: PI, points: 101, axis: TimeAxis::T },
        observables: Vec::new(),
        assumptions: Vec::new(),
    }
}

fn fidelity(steps: Option<usize>, eps: Option<f64>, growth: Option<&str>) -> ObservableConfig {
    ObservableConfig::Fidelity { name: None, order: None, steps, eps, growth: growth.map(String::from) }
}

/// Three-spin Heisenberg chain in a field with bond 2-3 listed first, so
/// each Trotter step applies `U^{23}` before `U^{12}`: the step is the
/// operator product `U^{12} U^{23}`.
fn heisenberg3(j: f64, bg: f64, state: &str) -> ExperimentConfig {
    let mut c = base(ModelKind::PauliFile, 3, Vec::new(), 0.0, state);
    let f = bg / 2.0;
    c.pauli_terms =
        [(f, "ZII"), (f, "IZI"), (f, "IIZ"), (j, "IXX"), (j, "IYY"), (j, "IZZ"), (j, "XXI"), (j, "YYI"), (j, "ZZI")]
            .iter()
            .map(|(c, p)| format!("{c} {p}"))
            .collect();
    c
}

/// The configuration behind figure preset `id`.
pub fn figure_preset(id: &str) -> Result<ExperimentConfig, CliError> {
    let c = match id {
        "fig2" => {
            let mut c = base(ModelKind::PauliFile, 2, Vec::new(), 0.0, "00");
            c.pauli_terms = vec!["1 ZZ".into(), "1 XI".into(), "1 IX".into()];
            c.exact_columns = false;
            c.time = TimeConfig { max: 45.0, points: 181, axis: TimeAxis::Delta };
            c.observables = vec![
                fidelity(Some(5), None, None),
                fidelity(None, Some(0.1), Some("linear")),
                fidelity(None, Some(0.1), Some("quadratic")),
            ];
            c.assumptions = vec!["unit couplings, so delta = t".into()];
            c
        }
        "fig4a" => {
            let mut c = base(ModelKind::Heisenberg, 2, vec![1.0], 0.0, "0+");
            c.heisenberg_variant = Some("3cnot".into());
            c.trotter = fixed(1, 1);
            c.observables =
                vec![ObservableConfig::Magnetization { site: 1 }, ObservableConfig::Magnetization { site: 2 }];
            c.assumptions = vec!["time window 0 <= Jt <= pi".into()];
            c
        }
        "fig4b" => {
            let mut c = heisenberg3(1.0, 20.0, "100");
            c.observables = vec![ObservableConfig::Probability { state: "100".into() }];
            c.assumptions = vec![
                "time window 0 <= Jt <= pi".into(),
                "n = 5 Trotter steps, bond 2-3 applied before bond 1-2".into(),
            ];
            c
        }
        "fig4c" => {
            let mut c = base(ModelKind::Tim, 2, vec![1.0], 2.0, "00");
            c.observables = vec![ObservableConfig::TotalMagnetization {}];
            c.assumptions = vec![
                "initial state 00 (both spins up) is not fixed by the model definition".into(),
                "time window 0 <= Jt <= pi".into(),
                "n = 5 Trotter steps".into(),
            ];
            c
        }
        "fig6a" | "fig6b" | "fig6c" => {
            let k = match id {
                "fig6a" => 1,
                "fig6b" => 2,
                _ => 3,
            };
            let mut c = heisenberg3(1.0, 20.0, "111");
            c.time = TimeConfig { max: 0.5, points: 51, axis: TimeAxis::T };
            c.observables =
                vec![ObservableConfig::Correlation { v: "x".into(), w: "x".into(), i: k, j: 1, route: None }];
            c.assumptions = vec![
                "time window 0 <= Jt <= 0.5 (about 1.6 field precession periods)".into(),
                "n = 5 Trotter steps, bond 2-3 applied before bond 1-2".into(),
                "exact columns use the exact propagator".into(),
            ];
            c
        }
        other => {
            return Err(CliError::Validation(format!("unknown preset {other:?}; valid ids: {}", PRESET_IDS.join(", "))))
        }
    };
    Ok(c)
}
