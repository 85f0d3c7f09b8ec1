//! Scenario files and the files written for a solved scenario.

pub mod emit;
pub mod scenario_file;
pub mod svg;

pub use emit::{atoms_csv, auto_window, emit, events_json, field_csvs, fmt_num, fronts_csv, EmitConfig};
pub use scenario_file::{parse_scenario, Outputs, ScenarioFile};
