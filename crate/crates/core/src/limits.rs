use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Brute-force guards shared by every exhaustive scan in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest admissible total number of settings; strategy scans visit
    /// `2^total` assignments.
    pub max_total_settings: usize,
    /// Largest symmetry orbit that `equivalent`/`canonical_form` will walk.
    pub max_orbit: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_total_settings: 30,
            max_orbit: 100_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_total_settings(&self, total: usize) -> Result<()> {
        if total > self.max_total_settings {
            return Err(Error::ResourceLimit {
                what: "total setting count",
                actual: total as u128,
                limit: self.max_total_settings as u128,
            });
        }
        // Strategy indices are u64.
        if total >= 64 {
            return Err(Error::ResourceLimit {
                what: "total setting count",
                actual: total as u128,
                limit: 63,
            });
        }
        Ok(())
    }

    pub(crate) fn check_orbit(&self, orbit: u128) -> Result<()> {
        if orbit > self.max_orbit {
            return Err(Error::ResourceLimit {
                what: "symmetry orbit size",
                actual: orbit,
                limit: self.max_orbit,
            });
        }
        Ok(())
    }
}
