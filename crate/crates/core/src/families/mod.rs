//! Concrete model families and the runtime registry that maps names
//! (as they appear on the command line or in scenario files) to instances.

pub mod exponential;
pub mod normal;
pub mod weibull;

pub use exponential::{exp_h_factor, Exponential};
pub use normal::Normal;
pub use weibull::{KMatrixConvention, Weibull};

use crate::error::{Error, Result};
use crate::model::ModelFamily;

/// Canonical names accepted by [`create_family`].
pub fn family_names() -> &'static [&'static str] {
    &["exponential", "normal", "weibull"]
}

/// Look up a family by name. Accepts the usual aliases.
pub fn create_family(name: &str) -> Result<Box<dyn ModelFamily>> {
    create_family_with(name, KMatrixConvention::default())
}

/// Look up a family by name, choosing the Weibull K-matrix convention.
pub fn create_family_with(name: &str, weibull_k: KMatrixConvention) -> Result<Box<dyn ModelFamily>> {
    match name.trim().to_ascii_lowercase().as_str() {
        "exp" | "exponential" => Ok(Box::new(Exponential)),
        "normal" | "gaussian" => Ok(Box::new(Normal)),
        "weibull" => Ok(Box::new(Weibull::new(weibull_k))),
        other => Err(Error::InvalidInput(format!(
            "unknown family '{other}' (expected one of: {})",
            family_names().join(", ")
        ))),
    }
}
