use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed line in the `.cs` text format.
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },

    /// A rule that parses but violates the collage-system invariants.
    /// `rule` is the 1-based variable number.
    #[error("rule X{rule}: {reason}")]
    Validation { rule: usize, reason: String },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("operation needs {needed} units but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("input is empty")]
    EmptyInput,

    #[error("q must be at least 2, got {0}")]
    InvalidQ(usize),

    #[error("affix length {0} exceeds the supported maximum of {max}", max = crate::affixes::MAX_AFFIX_LEN)]
    AffixTooLong(usize),
}

impl Error {
    pub(crate) fn validation(rule: usize, reason: impl Into<String>) -> Self {
        Error::Validation {
            rule,
            reason: reason.into(),
        }
    }

    pub(crate) fn syntax(line: usize, reason: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            reason: reason.into(),
        }
    }
}
