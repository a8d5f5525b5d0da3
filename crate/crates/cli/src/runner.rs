//! Executes a validated experiment into a CSV table.

use digiq::observables::{
    correlation_ancilla, correlation_direct, magnetization, spectrum_from_series, total_magnetization,
    unitary_expectation_series, CorrelationSpec, Evolution, SpectrumSpec,
};
use digiq::trotter::{exact_propagator, trotterize_with};
use digiq::{Circuit, StateVector, TrotterPlan};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig, Observable, Route, SpectrumOutput, TimeAxis};
use crate::error::CliError;

/// A CSV table with `#` comment lines above the header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Validates `config` and runs it.
pub fn run(config: &ExperimentConfig) -> Result<Table, CliError> {
    let exp = config.validate()?;
    let mut comments = vec![format!("digiq {}", env!("CARGO_PKG_VERSION")), "config:".to_string()];
    comments.extend(config.to_toml().lines().map(|l| format!("  {l}")));
    comments.extend(config.assumptions.iter().map(|a| format!("assumption: {a}")));
    let mut table = match exp.observables.first() {
        Some(Observable::Spectrum { points, dtheta, output }) => spectrum(&exp, *points, *dtheta, *output)?,
        _ => time_series(&exp)?,
    };
    comments.append(&mut table.comments);
    table.comments = comments;
    Ok(table)
}

/// The compiled propagator for the configured plan at time `t`.
pub fn evolution_circuit(exp: &Experiment, plan: &TrotterPlan, t: f64) -> Result<(Circuit, usize), CliError> {
    let r = trotterize_with(&exp.hamiltonian, t, plan, exp.gateset, &exp.compile)?;
    Ok((r.circuit, r.n_steps_used))
}

/// States at one grid point.
struct Point {
    digital: Option<StateVector>,
    exact: Option<StateVector>,
    steps: usize,
    fidelity_steps: Vec<usize>,
    fidelities: Vec<f64>,
}

fn state_value(obs: &Observable, psi: &StateVector) -> Result<f64, CliError> {
    Ok(match obs {
        Observable::Magnetization(site) => magnetization(psi, *site)?,
        Observable::TotalMagnetization => total_magnetization(psi),
        Observable::Probability(bits) => psi.probability(bits)?,
        _ => unreachable!("not a state observable"),
    })
}

fn is_state_observable(o: &Observable) -> bool {
    matches!(o, Observable::Magnetization(_) | Observable::TotalMagnetization | Observable::Probability(_))
}

fn steps_line(label: &str, steps: impl Iterator<Item = usize>) -> String {
    let s: Vec<String> = steps.map(|n| n.to_string()).collect();
    format!("n_steps_used{label}: {}", s.join(" "))
}

fn time_series(exp: &Experiment) -> Result<Table, CliError> {
    let fidelity_plans: Vec<(&str, TrotterPlan)> = exp
        .observables
        .iter()
        .filter_map(|o| match o {
            Observable::Fidelity { name, plan } => Some((name.as_str(), *plan)),
            _ => None,
        })
        .collect();
    let has_state = exp.observables.iter().any(is_state_observable);
    let has_correlation = exp.observables.iter().any(|o| matches!(o, Observable::Correlation { .. }));
    let need_digital = has_state || has_correlation;
    let need_exact = !fidelity_plans.is_empty() || (has_state && exp.exact_columns);

    let points: Vec<Point> = exp
        .times
        .par_iter()
        .map(|&t| -> Result<Point, CliError> {
            let exact = if need_exact {
                let u = exact_propagator(&exp.hamiltonian, t)?;
                Some(StateVector::from_amplitudes(u.matvec(exp.initial_state.amplitudes()))?)
            } else {
                None
            };
            let (digital, steps) = if need_digital {
                let (circuit, steps) = evolution_circuit(exp, &exp.plan, t)?;
                let mut psi = exp.initial_state.clone();
                psi.apply_circuit(&circuit)?;
                (Some(psi), steps)
            } else {
                (None, 0)
            };
            let mut fidelities = Vec::with_capacity(fidelity_plans.len());
            let mut fidelity_steps = Vec::with_capacity(fidelity_plans.len());
            for (_, plan) in &fidelity_plans {
                let (circuit, steps) = evolution_circuit(exp, plan, t)?;
                let mut psi = exp.initial_state.clone();
                psi.apply_circuit(&circuit)?;
                let ex = exact.as_ref().expect("exact state computed for fidelities");
                fidelities.push(ex.inner_product(&psi)?.norm().min(1.0));
                fidelity_steps.push(steps);
            }
            Ok(Point { digital, exact, steps, fidelity_steps, fidelities })
        })
        .collect::<Result<_, _>>()?;

    let mut columns = vec![match exp.axis {
        TimeAxis::T => "t".to_string(),
        TimeAxis::Delta => "delta".to_string(),
    }];
    let mut data: Vec<Vec<f64>> = vec![exp.grid.clone()];
    let mut comments = Vec::new();
    if need_digital {
        comments.push(format!("gateset: {}, order: {}", exp.gateset, exp.plan.order()));
        comments.push(steps_line("", points.iter().map(|p| p.steps)));
    }
    let mut fidelity_index = 0;
    for obs in &exp.observables {
        let name = obs.name();
        match obs {
            Observable::Correlation { v, w, route } => {
                let spec = CorrelationSpec {
                    v: *v,
                    w: *w,
                    initial_state: exp.initial_symbols.clone(),
                    hamiltonian: exp.hamiltonian.clone(),
                    times: exp.times.clone(),
                    evolution: Evolution::Trotter { plan: exp.plan, set: exp.gateset, opts: exp.compile },
                };
                let digital = match route {
                    Route::Ancilla => correlation_ancilla(&spec)?,
                    Route::Direct => correlation_direct(&spec)?,
                };
                push_complex(&mut columns, &mut data, &name, "", &digital);
                if exp.exact_columns {
                    let exact = correlation_direct(&CorrelationSpec { evolution: Evolution::Exact, ..spec })?;
                    push_complex(&mut columns, &mut data, &name, "_exact", &exact);
                }
            }
            Observable::Fidelity { .. } => {
                columns.push(name.clone());
                data.push(points.iter().map(|p| p.fidelities[fidelity_index]).collect());
                comments
                    .push(steps_line(&format!("[{name}]"), points.iter().map(|p| p.fidelity_steps[fidelity_index])));
                fidelity_index += 1;
            }
            _ => {
                columns.push(name.clone());
                data.push(
                    points
                        .iter()
                        .map(|p| state_value(obs, p.digital.as_ref().expect("digital state")))
                        .collect::<Result<_, _>>()?,
                );
                if exp.exact_columns {
                    columns.push(format!("{name}_exact"));
                    data.push(
                        points
                            .iter()
                            .map(|p| state_value(obs, p.exact.as_ref().expect("exact state")))
                            .collect::<Result<_, _>>()?,
                    );
                }
            }
        }
    }
    if has_correlation {
        comments.push("correlations are spin correlations <s_v(t) s_w> = C/4".to_string());
    }
    let rows = (0..exp.grid.len()).map(|r| data.iter().map(|c| c[r]).collect()).collect();
    Ok(Table { comments, columns, rows })
}

fn push_complex(columns: &mut Vec<String>, data: &mut Vec<Vec<f64>>, name: &str, suffix: &str, values: &[Complex64]) {
    columns.push(format!("{name}_re{suffix}"));
    data.push(values.iter().map(|c| c.re / 4.0).collect());
    columns.push(format!("{name}_im{suffix}"));
    data.push(values.iter().map(|c| c.im / 4.0).collect());
}

fn spectrum(exp: &Experiment, points: usize, dtheta: Option<f64>, output: SpectrumOutput) -> Result<Table, CliError> {
    let evolution = Evolution::Trotter { plan: exp.plan, set: exp.gateset, opts: exp.compile };
    let mut spec = SpectrumSpec::with_default_grid(exp.hamiltonian.clone(), exp.initial_state.clone(), evolution)?;
    spec.m = points;
    if let Some(d) = dtheta {
        spec.dtheta = d;
    }
    let (_, steps) = evolution_circuit(exp, &exp.plan, spec.dtheta)?;
    let series = unitary_expectation_series(&spec)?;
    let comments = vec![
        format!("gateset: {}, order: {}", exp.gateset, exp.plan.order()),
        format!("n_steps_used per controlled step: {steps}"),
        format!("points: {}, dtheta: {}", spec.m, spec.dtheta),
    ];
    let (columns, rows) = match output {
        SpectrumOutput::Series => (
            vec!["theta".into(), "re".into(), "im".into()],
            series.iter().enumerate().map(|(k, c)| vec![k as f64 * spec.dtheta, c.re, c.im]).collect(),
        ),
        SpectrumOutput::Peaks => (
            vec!["q".into(), "weight".into()],
            spectrum_from_series(&series, spec.dtheta)?.iter().map(|p| vec![p.q, p.weight]).collect(),
        ),
    };
    Ok(Table { comments, columns, rows })
}
