//! Experiment harness for the ppsm2m optimizers: campaign configuration,
//! run records, summaries and plots.

pub mod campaign;
pub mod config;
pub mod error;
pub mod plot;
pub mod record;
pub mod sections;
pub mod summary;
pub mod svg;

pub use campaign::run_campaign;
pub use config::CampaignConfig;
pub use error::{ConfigError, FormatError};
pub use record::StoredRun;
pub use summary::Summary;

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "PPSM2M_OUTPUT";

/// Version string with the source revision the binary was built from.
pub fn version() -> String {
    format!("{} ({})", env!("CARGO_PKG_VERSION"), env!("PPSM2M_GIT_DESCRIBE"))
}
