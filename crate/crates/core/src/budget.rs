//! Memory budget for dense function tables.

use crate::error::{Error, Result};

/// Default cap on the bytes a dense table may occupy.
pub const DEFAULT_LIMIT_MB: u64 = 256;

/// Environment variable overriding [`DEFAULT_LIMIT_MB`].
pub const LIMIT_ENV: &str = "NOF_LIMIT_MB";

const BYTES_PER_ENTRY: u128 = std::mem::size_of::<u32>() as u128;

/// The configured limit in bytes.
pub fn limit_bytes() -> u64 {
    let mb = std::env::var(LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_LIMIT_MB);
    mb.saturating_mul(1 << 20)
}

/// `side^dims` if the table fits in `limit_bytes`.
pub fn checked_entries(side: usize, dims: usize, limit_bytes: u64) -> Result<usize> {
    let mut entries: u128 = 1;
    for _ in 0..dims {
        entries = entries.saturating_mul(side as u128);
        if entries.saturating_mul(BYTES_PER_ENTRY) > limit_bytes as u128 {
            // report the true size where it is representable
            let full = (side as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
            return Err(Error::BudgetExceeded {
                entries: full,
                bytes: full.saturating_mul(BYTES_PER_ENTRY),
                limit_bytes,
            });
        }
    }
    Ok(entries as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_fit() {
        assert_eq!(checked_entries(4, 3, 1 << 20).unwrap(), 64);
    }

    #[test]
    fn huge_tables_are_rejected_with_limit() {
        let err = checked_entries(1 << 20, 4, 1 << 20).unwrap_err();
        match err {
            Error::BudgetExceeded { limit_bytes, .. } => assert_eq!(limit_bytes, 1 << 20),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("NOF_LIMIT_MB"));
    }
}
