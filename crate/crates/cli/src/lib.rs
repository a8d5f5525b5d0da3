//! Command-line runner for digiq: config-driven experiments, figure presets,
//! the identity verification suite and CSV output.
//!
//! A config is a TOML document:
//!
//! ```toml
//! model = "heisenberg"          # heisenberg, xyz, xy, tim, hubbard2, pauli-file
//! n_qubits = 3
//! couplings = [1.0, 1.0]        # J per bond; [Jxx, Jyy, Jzz]; [Jxx, Jyy]; [Jzz]; [V, U]
//! field = 20.0                  # Bg: (Bg/2) σz per site, or (Bg/2) σx for tim
//! initial_state = "100"         # symbols 0 1 + -, or all-up / all-down
//! gateset = "S1"
//! exact_columns = true          # add `<name>_exact` columns
//!
//! [trotter]
//! order = 1
//! steps = 5                     # or eps = 0.1 with growth = "linear" | "quadratic"
//!
//! [time]
//! max = 3.14159
//! points = 101
//! axis = "t"                    # or "delta"
//!
//! [[observables]]
//! kind = "probability"
//! state = "100"
//! ```
//!
//! Observable kinds: `magnetization` (`site`), `total-magnetization`,
//! `probability` (`state`), `correlation` (`v`, `w`, `i`, `j`, `route`),
//! `fidelity` (`steps` or `eps`/`growth`, `order`, `name`) and `spectrum`
//! (`points`, `dtheta`, `output = "peaks" | "series"`).

pub mod config;
pub mod error;
pub mod presets;
pub mod runner;
pub mod verify;

pub use config::{Experiment, ExperimentConfig, Overrides};
pub use error::CliError;
pub use presets::{figure_preset, PRESET_IDS};
pub use runner::{run, Table};
pub use verify::{verify_suite, verify_suite_with, Check};
