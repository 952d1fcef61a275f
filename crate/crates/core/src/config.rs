//! Runtime configuration shared by the CLI and the FFI layer.

use std::path::PathBuf;

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "SPECIALLOCUS_CACHE";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub precision_bits: u32,
    /// Largest level for which Φ_m is built.
    pub m_max: u64,
    /// Prime search cap for split-prime searches.
    pub search_cap: u64,
    /// Largest group order enumerated by the group module.
    pub enumeration_budget: u64,
    pub cache_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 256,
            m_max: 20,
            search_cap: 1_000_000,
            enumeration_budget: 10_000,
            cache_dir: PathBuf::from("./cache"),
        }
    }
}

impl Config {
    /// Defaults, with the cache directory taken from the environment when set.
    pub fn from_env() -> Config {
        let mut c = Config::default();
        if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
            c.cache_dir = PathBuf::from(dir);
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits == 0 || self.m_max == 0 || self.search_cap == 0 || self.enumeration_budget == 0 {
            return Err(Error::InvalidInput("configuration values must be positive".into()));
        }
        Ok(())
    }
}
