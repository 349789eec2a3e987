use thiserror::Error;

/// Errors raised by the exact-arithmetic and enumeration layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation needed a Laurent coefficient below the certified window.
    #[error("precision insufficient: needed exponent {needed}, window floor is {floor}")]
    Precision { needed: i64, floor: i64 },

    /// An enumeration would exceed the configured evaluation budget.
    #[error("enumeration budget exceeded: {requested} evaluations requested, budget {budget}")]
    Budget { requested: u128, budget: u128 },

    /// Invalid field construction (non-prime p, reducible modulus, ...).
    #[error("invalid field: {0}")]
    Field(String),

    /// Malformed text input, with the 1-based line number.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An input violates an operation's precondition or a lemma hypothesis.
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Evaluation budget shared by every enumerating operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(1_000_000_000)
    }
}

impl Budget {
    pub fn check(&self, requested: u128) -> Result<()> {
        if requested > self.0 {
            Err(Error::Budget { requested, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` as u128, saturating at `u128::MAX` (only used for budget checks).
pub(crate) fn pow_saturating(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
