//! Collage systems: rules, validation, and per-variable metrics.
//!
//! A collage system is an ordered list of assignments `X_1 .. X_n`, where
//! every rule only refers to variables with a smaller index. The last
//! variable derives the represented text. Lengths are tracked exactly and
//! may be astronomically larger than `n`; nothing in this module ever
//! expands a variable.

mod text;

use std::fmt;

pub use text::{escape_byte, escape_bytes, parse, serialize, unescape};

use crate::error::{Error, Result};

/// Largest derived length accepted for any variable.
pub const MAX_LENGTH: u64 = i64::MAX as u64;

/// A variable of a collage system, stored as a 0-based index.
///
/// Displayed with its 1-based name (`X1`, `X2`, ...) to match the text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Variable from its 1-based name, so `Var::named(9)` is `X9`.
    pub fn named(number: usize) -> Var {
        assert!(number >= 1, "variable numbers start at 1");
        Var((number - 1) as u32)
    }

    pub fn from_index(index: usize) -> Var {
        Var(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based name.
    #[inline]
    pub fn number(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Terminal(u8),
    Concat(Var, Var),
    Repeat { base: Var, power: u64 },
    /// Drops the first `cut` symbols of `base`.
    PrefTrunc { base: Var, cut: u64 },
    /// Drops the last `cut` symbols of `base`.
    SufTrunc { base: Var, cut: u64 },
}

impl Rule {
    pub fn is_truncation(&self) -> bool {
        matches!(self, Rule::PrefTrunc { .. } | Rule::SufTrunc { .. })
    }

    /// Variables this rule refers to, left to right.
    pub fn operands(&self) -> impl Iterator<Item = Var> {
        let (a, b) = match *self {
            Rule::Terminal(_) => (None, None),
            Rule::Concat(l, r) => (Some(l), Some(r)),
            Rule::Repeat { base, .. } | Rule::PrefTrunc { base, .. } | Rule::SufTrunc { base, .. } => {
                (Some(base), None)
            }
        };
        a.into_iter().chain(b)
    }
}

/// Structural class, ordered from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    /// Regular, and every concatenation outside the top-level sequence part
    /// has an operand of length 1 (LZ78/LZW shape).
    Simple,
    /// Terminals and concatenations only (a straight-line program).
    Regular,
    /// No truncations.
    TruncationFree,
    General,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Simple => "simple",
            Class::Regular => "regular",
            Class::TruncationFree => "truncation-free",
            Class::General => "general",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lengths, heights and class of every variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableMetrics {
    pub lengths: Vec<u64>,
    pub heights: Vec<u32>,
    pub class: Class,
}

/// A validated collage system. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollageSystem {
    rules: Vec<Rule>,
    lengths: Vec<u64>,
    heights: Vec<u32>,
    /// Index of the first rule of the top-level sequence part, if the system
    /// records one. Rules from here to the root only chain phrases together.
    sequence_start: Option<usize>,
}

impl CollageSystem {
    /// Validates `rules` and derives lengths and heights in one pass.
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        Self::build(rules, None)
    }

    /// Like [`CollageSystem::new`], additionally marking rules
    /// `sequence_start..n` as the top-level sequence part (the phrase chain an
    /// LZ-style encoder emits). Only [`CollageSystem::class`] looks at it.
    pub fn with_sequence_part(rules: Vec<Rule>, sequence_start: usize) -> Result<Self> {
        if sequence_start >= rules.len() {
            return Err(Error::validation(
                sequence_start + 1,
                "sequence part starts past the root",
            ));
        }
        Self::build(rules, Some(sequence_start))
    }

    fn build(rules: Vec<Rule>, sequence_start: Option<usize>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut lengths: Vec<u64> = Vec::with_capacity(rules.len());
        let mut heights: Vec<u32> = Vec::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            let id = i + 1;
            for operand in rule.operands() {
                if operand.index() >= i {
                    return Err(Error::validation(
                        id,
                        format!("refers to {operand}, which is not defined before it"),
                    ));
                }
            }
            let (len, child_height) = match *rule {
                Rule::Terminal(_) => (Some(1), 0),
                Rule::Concat(l, r) => (
                    lengths[l.index()].checked_add(lengths[r.index()]),
                    heights[l.index()].max(heights[r.index()]),
                ),
                Rule::Repeat { base, power } => {
                    if power < 2 {
                        return Err(Error::validation(id, format!("power {power} is below 2")));
                    }
                    (lengths[base.index()].checked_mul(power), heights[base.index()])
                }
                Rule::PrefTrunc { base, cut } | Rule::SufTrunc { base, cut } => {
                    let base_len = lengths[base.index()];
                    if cut == 0 || cut >= base_len {
                        return Err(Error::validation(
                            id,
                            format!("cut {cut} outside 1..{base_len} for {base}"),
                        ));
                    }
                    (Some(base_len - cut), heights[base.index()])
                }
            };
            let len = match len {
                Some(len) if len <= MAX_LENGTH => len,
                _ => return Err(Error::Overflow("variable length")),
            };
            lengths.push(len);
            heights.push(child_height + 1);
        }
        Ok(CollageSystem {
            rules,
            lengths,
            heights,
            sequence_start,
        })
    }

    /// Number of rules `n`.
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// Always false for a validated system; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    #[inline]
    pub fn rule(&self, var: Var) -> Rule {
        self.rules[var.index()]
    }

    pub fn root(&self) -> Var {
        Var::from_index(self.rules.len() - 1)
    }

    pub fn vars(&self) -> impl DoubleEndedIterator<Item = Var> + ExactSizeIterator {
        (0..self.rules.len()).map(Var::from_index)
    }

    /// `|val(var)|`.
    #[inline]
    pub fn length(&self, var: Var) -> u64 {
        self.lengths[var.index()]
    }

    #[inline]
    pub fn height(&self, var: Var) -> u32 {
        self.heights[var.index()]
    }

    /// Length of the derived text `|val(X_n)|`.
    pub fn text_len(&self) -> u64 {
        self.length(self.root())
    }

    /// Height of the system, i.e. of its root.
    pub fn system_height(&self) -> u32 {
        self.height(self.root())
    }

    pub fn sequence_start(&self) -> Option<usize> {
        self.sequence_start
    }

    pub fn metrics(&self) -> VariableMetrics {
        VariableMetrics {
            lengths: self.lengths.clone(),
            heights: self.heights.clone(),
            class: self.class(),
        }
    }

    /// Most specific class the system belongs to.
    pub fn class(&self) -> Class {
        let mut class = Class::Simple;
        let dictionary_end = self.sequence_start.unwrap_or(self.rules.len());
        for (i, rule) in self.rules.iter().enumerate() {
            let needed = match *rule {
                Rule::Terminal(_) => Class::Simple,
                Rule::Concat(l, r) => {
                    if i >= dictionary_end || self.length(l) == 1 || self.length(r) == 1 {
                        Class::Simple
                    } else {
                        Class::Regular
                    }
                }
                Rule::Repeat { .. } => Class::TruncationFree,
                Rule::PrefTrunc { .. } | Rule::SufTrunc { .. } => Class::General,
            };
            class = class.max(needed);
        }
        class
    }

    pub fn is_truncation_free(&self) -> bool {
        self.class() <= Class::TruncationFree
    }
}
