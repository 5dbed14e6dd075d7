//! Prefix and suffix truncation paths.
//!
//! For `X_i = pretrunc(X_s, k)` the prefix truncation path runs from `X_s`
//! down to the leaf holding the first surviving symbol, `val(X_s)[k]`
//! (0-based). Each step records the variable on the path together with how
//! much of its prefix (`cut_prefix`) and suffix (`cut_suffix`) lies outside
//! the region that survives in `X_i`. Suffix paths are the mirror image and
//! lead to the last surviving symbol.

use std::fmt;

use crate::grammar::{CollageSystem, Rule, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathStep {
    pub var: Var,
    pub cut_prefix: u64,
    pub cut_suffix: u64,
}

impl PathStep {
    pub fn new(var: Var, cut_prefix: u64, cut_suffix: u64) -> Self {
        PathStep {
            var,
            cut_prefix,
            cut_suffix,
        }
    }

    /// Number of symbols of `val(var)` that survive along this path.
    pub fn width(&self, cs: &CollageSystem) -> u64 {
        cs.length(self.var) - self.cut_prefix - self.cut_suffix
    }
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.var, self.cut_prefix, self.cut_suffix)
    }
}

/// Which end of the base a truncation removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Prefix,
    Suffix,
}

/// Prefix truncation path of `var`, or `None` if `var` is not a prefix truncation.
pub fn tr_pre_path(cs: &CollageSystem, var: Var) -> Option<Vec<PathStep>> {
    match cs.rule(var) {
        Rule::PrefTrunc { base, cut } => Some(walk(cs, PathStep::new(base, cut, 0), Side::Prefix)),
        _ => None,
    }
}

/// Suffix truncation path of `var`, or `None` if `var` is not a suffix truncation.
pub fn tr_suf_path(cs: &CollageSystem, var: Var) -> Option<Vec<PathStep>> {
    match cs.rule(var) {
        Rule::SufTrunc { base, cut } => Some(walk(cs, PathStep::new(base, 0, cut), Side::Suffix)),
        _ => None,
    }
}

/// The truncation path of any truncation variable.
pub fn truncation_path(cs: &CollageSystem, var: Var) -> Option<(Side, Vec<PathStep>)> {
    tr_pre_path(cs, var)
        .map(|p| (Side::Prefix, p))
        .or_else(|| tr_suf_path(cs, var).map(|p| (Side::Suffix, p)))
}

fn walk(cs: &CollageSystem, start: PathStep, side: Side) -> Vec<PathStep> {
    let mut path = Vec::with_capacity(cs.height(start.var) as usize);
    let mut cur = Some(start);
    while let Some(step) = cur {
        path.push(step);
        cur = match side {
            Side::Prefix => next_prefix_step(cs, step),
            Side::Suffix => next_suffix_step(cs, step),
        };
    }
    path
}

/// One step toward the symbol at offset `cut_prefix`.
fn next_prefix_step(cs: &CollageSystem, step: PathStep) -> Option<PathStep> {
    let PathStep {
        var,
        cut_prefix: pre,
        cut_suffix: suf,
    } = step;
    let next = match cs.rule(var) {
        Rule::Terminal(_) => return None,
        Rule::Concat(l, r) => {
            let (left_len, right_len) = (cs.length(l), cs.length(r));
            if pre < left_len {
                PathStep::new(l, pre, suf.saturating_sub(right_len))
            } else {
                PathStep::new(r, pre - left_len, suf)
            }
        }
        Rule::Repeat { base, .. } => {
            let unit = cs.length(base);
            let copy_end = (pre / unit + 1) * unit;
            let kept_end = cs.length(var) - suf;
            PathStep::new(base, pre % unit, copy_end.saturating_sub(kept_end))
        }
        Rule::PrefTrunc { base, cut } => PathStep::new(base, pre + cut, suf),
        Rule::SufTrunc { base, cut } => PathStep::new(base, pre, suf + cut),
    };
    Some(next)
}

/// One step toward the symbol at offset `|var| - cut_suffix - 1`.
fn next_suffix_step(cs: &CollageSystem, step: PathStep) -> Option<PathStep> {
    let PathStep {
        var,
        cut_prefix: pre,
        cut_suffix: suf,
    } = step;
    let next = match cs.rule(var) {
        Rule::Terminal(_) => return None,
        Rule::Concat(l, r) => {
            let (left_len, right_len) = (cs.length(l), cs.length(r));
            if suf < right_len {
                PathStep::new(r, pre.saturating_sub(left_len), suf)
            } else {
                PathStep::new(l, pre, suf - right_len)
            }
        }
        Rule::Repeat { base, .. } => {
            let unit = cs.length(base);
            // Copies counted from the right end.
            let copy_start_from_right = (suf / unit + 1) * unit;
            let kept_from_right = cs.length(var) - pre;
            PathStep::new(base, copy_start_from_right.saturating_sub(kept_from_right), suf % unit)
        }
        Rule::PrefTrunc { base, cut } => PathStep::new(base, pre + cut, suf),
        Rule::SufTrunc { base, cut } => PathStep::new(base, pre, suf + cut),
    };
    Some(next)
}

/// Length of the leading run of steps that actually cut into their variable
/// on the truncated side (`cut_prefix > 0` for prefix paths, `cut_suffix > 0`
/// for suffix paths). Only these steps are truncated by the path's owner.
pub fn cut_len(path: &[PathStep], side: Side) -> usize {
    path.iter()
        .take_while(|s| match side {
            Side::Prefix => s.cut_prefix > 0,
            Side::Suffix => s.cut_suffix > 0,
        })
        .count()
}

/// Eagerly materialized paths of every truncation variable.
#[derive(Debug, Clone, Default)]
pub struct TruncationPaths {
    paths: Vec<Option<TruncationPath>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationPath {
    pub side: Side,
    pub steps: Vec<PathStep>,
    /// Number of leading steps in the cut segment, see [`cut_len`].
    pub cut_len: usize,
}

impl TruncationPath {
    pub fn cut_steps(&self) -> &[PathStep] {
        &self.steps[..self.cut_len]
    }
}

impl TruncationPaths {
    pub fn compute(cs: &CollageSystem) -> Self {
        let paths = cs
            .vars()
            .map(|v| {
                truncation_path(cs, v).map(|(side, steps)| TruncationPath {
                    side,
                    cut_len: cut_len(&steps, side),
                    steps,
                })
            })
            .collect();
        TruncationPaths { paths }
    }

    pub fn get(&self, var: Var) -> Option<&TruncationPath> {
        self.paths[var.index()].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &TruncationPath)> {
        self.paths
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_ref().map(|p| (Var::from_index(i), p)))
    }
}
