//! Size limits for graph construction and dense matrix work.

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "FQFLATS_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of flats in either part of an incidence graph.
    pub max_flats: u64,
    /// Maximum number of entries of a dense Gram matrix.
    pub max_gram_entries: u64,
    /// Maximum order of a dense eigenproblem.
    pub max_eigen_dim: u64,
    /// Maximum number of ordered pairs scanned by the decomposition check.
    pub max_pair_scan: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_flats: 20_000,
            max_gram_entries: 400_000_000,
            max_eigen_dim: 2_000,
            max_pair_scan: 2_000_000,
        }
    }
}

impl Budget {
    /// Parse `key=value` pairs separated by commas, e.g.
    /// `max_flats=5000,max_eigen_dim=800`. A bare integer sets `max_flats`.
    pub fn parse(spec: &str) -> Result<Budget> {
        let mut b = Budget::default();
        let bad = || Error::Parse(format!("bad budget specification {spec:?}"));
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').unwrap_or(("max_flats", item));
            let value: u64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "max_flats" => b.max_flats = value,
                "max_gram_entries" => b.max_gram_entries = value,
                "max_eigen_dim" => b.max_eigen_dim = value,
                "max_pair_scan" => b.max_pair_scan = value,
                _ => return Err(bad()),
            }
        }
        Ok(b)
    }

    /// Defaults, overridden by `FQFLATS_BUDGET` when set.
    pub fn from_env() -> Result<Budget> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Budget::parse(&s),
            Err(_) => Ok(Budget::default()),
        }
    }
}
