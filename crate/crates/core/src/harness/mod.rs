//! Presets, configuration loading, the replication driver and CSV output.

pub mod config;
pub mod experiment;
pub mod output;
pub mod presets;

pub use config::{load_config, ConfigSource, ExperimentConfig};
pub use experiment::{run_experiment, simulate, ExperimentResults};
pub use output::{format_g12, summary_text, write_outputs};
pub use presets::Preset;
