/// Resource limits for every exhaustive enumeration in the crate.
///
/// Exceeding a limit is a hard [`crate::Error::CapExceeded`] error, never a
/// silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest endomorphism-space dimension enumerated for `Aut(M)`.
    pub aut_dim: usize,
    /// Largest number of candidates walked by any single enumeration.
    pub enumeration: u64,
    /// Largest cochain space dimension materialized for Hochschild cochains.
    pub tensor: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            aut_dim: 12,
            enumeration: 1_000_000,
            tensor: 1 << 16,
        }
    }
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
