//! Size limits for the expensive code paths.
//!
//! `DUALBENT_GUARD_OVERRIDE=<k>` multiplies every limit by `2^k`. Raising
//! limits is at your own risk: time and memory grow accordingly.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const OVERRIDE_VAR: &str = "DUALBENT_GUARD_OVERRIDE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Quadratic-cost Walsh transform.
    pub naive_walsh: u64,
    /// Butterfly transforms and everything built on them.
    pub fast_walsh: u64,
    /// Pairwise difference counting and direct scheme tensors.
    pub brute_force: u64,
    /// Balanced assignments enumerated by the definitional partition check.
    pub partition_assignments: u64,
    /// Assignments times points for the definitional partition check.
    pub partition_work: u64,
    /// Explicit Hadamard matrices.
    pub materialize: u64,
    /// Fusions sampled for amorphy evidence.
    pub fusion_samples: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            naive_walsh: 1 << 16,
            fast_walsh: 1 << 21,
            brute_force: 1 << 12,
            partition_assignments: 1_000_000,
            partition_work: 1 << 28,
            materialize: 1 << 8,
            fusion_samples: 20,
        }
    }
}

impl Guards {
    pub fn with_override(shift: u32) -> Self {
        let d = Guards::default();
        let up = |v: u64| v.checked_shl(shift).filter(|&x| x >> shift == v).unwrap_or(u64::MAX);
        Guards {
            naive_walsh: up(d.naive_walsh),
            fast_walsh: up(d.fast_walsh),
            brute_force: up(d.brute_force),
            partition_assignments: up(d.partition_assignments),
            partition_work: up(d.partition_work),
            materialize: up(d.materialize),
            fusion_samples: d.fusion_samples,
        }
    }

    pub fn from_env() -> Self {
        match std::env::var(OVERRIDE_VAR).ok().and_then(|v| v.trim().parse::<u32>().ok()) {
            Some(k) => Self::with_override(k.min(63)),
            None => Self::default(),
        }
    }

    /// Process-wide limits, read from the environment once.
    pub fn get() -> &'static Guards {
        static G: OnceLock<Guards> = OnceLock::new();
        G.get_or_init(Guards::from_env)
    }

    pub fn shift(&self) -> u32 {
        (self.naive_walsh / Guards::default().naive_walsh).trailing_zeros()
    }
}

pub fn ensure(what: &'static str, size: u64, limit: u64) -> Result<()> {
    if size > limit {
        return Err(Error::Guard { what, size: size as u128, limit: limit as u128 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_scales_limits() {
        let g = Guards::with_override(2);
        assert_eq!(g.fast_walsh, 1 << 23);
        assert_eq!(g.shift(), 2);
        assert_eq!(Guards::default().shift(), 0);
        assert!(ensure("x", 5, 4).is_err());
    }
}
