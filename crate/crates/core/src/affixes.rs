//! Length-`d` prefixes and suffixes of every variable.
//!
//! Computed bottom-up in one pass. Under truncation the two tables depend on
//! each other: the prefix of a prefix truncation is stitched together from
//! the suffix and prefix of the children of the node where the wanted
//! window first straddles a child boundary on the truncation path.

use crate::error::{Error, Result};
use crate::grammar::{CollageSystem, Rule, Var};
use crate::paths::{tr_pre_path, tr_suf_path};

/// Largest supported affix length.
pub const MAX_AFFIX_LEN: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixTables {
    d: usize,
    prefixes: Vec<Vec<u8>>,
    suffixes: Vec<Vec<u8>>,
}

impl AffixTables {
    pub fn d(&self) -> usize {
        self.d
    }

    /// `pre(val(var), d)`.
    #[inline]
    pub fn prefix(&self, var: Var) -> &[u8] {
        &self.prefixes[var.index()]
    }

    /// `suf(val(var), d)`.
    #[inline]
    pub fn suffix(&self, var: Var) -> &[u8] {
        &self.suffixes[var.index()]
    }
}

fn head(s: &[u8], k: u64) -> &[u8] {
    &s[..(k as usize).min(s.len())]
}

fn tail(s: &[u8], k: u64) -> &[u8] {
    &s[s.len() - (k as usize).min(s.len())..]
}

pub fn compute_affixes(cs: &CollageSystem, d: usize) -> Result<AffixTables> {
    if d == 0 || d > MAX_AFFIX_LEN {
        return Err(Error::AffixTooLong(d));
    }
    let dl = d as u64;
    let mut pre: Vec<Vec<u8>> = Vec::with_capacity(cs.len());
    let mut suf: Vec<Vec<u8>> = Vec::with_capacity(cs.len());

    for var in cs.vars() {
        let len = cs.length(var);
        let (p, s) = match cs.rule(var) {
            Rule::Terminal(b) => (vec![b], vec![b]),
            Rule::Concat(l, r) => {
                let (ll, rl) = (cs.length(l), cs.length(r));
                let mut p = pre[l.index()].clone();
                if ll < dl {
                    p.extend_from_slice(head(&pre[r.index()], dl - ll));
                }
                let s = if rl < dl {
                    let mut s = tail(&suf[l.index()], dl - rl).to_vec();
                    s.extend_from_slice(&suf[r.index()]);
                    s
                } else {
                    suf[r.index()].clone()
                };
                (p, s)
            }
            Rule::Repeat { base, .. } => {
                let unit = cs.length(base);
                if unit >= dl {
                    (pre[base.index()].clone(), suf[base.index()].clone())
                } else {
                    // The whole base is known, so both ends are periodic.
                    let period = &pre[base.index()];
                    let m = len.min(dl) as usize;
                    let u = unit as usize;
                    let p = (0..m).map(|j| period[j % u]).collect();
                    let shift = u - m % u;
                    let s = (0..m).map(|j| period[(j + shift) % u]).collect();
                    (p, s)
                }
            }
            Rule::SufTrunc { base, .. } => {
                let p = head(&pre[base.index()], len).to_vec();
                let s = if len <= dl {
                    p.clone()
                } else {
                    suffix_of_suffix_truncation(cs, var, dl, &pre, &suf)
                };
                (p, s)
            }
            Rule::PrefTrunc { base, .. } => {
                let s = tail(&suf[base.index()], len).to_vec();
                let p = if len <= dl {
                    s.clone()
                } else {
                    prefix_of_prefix_truncation(cs, var, dl, &pre, &suf)
                };
                (p, s)
            }
        };
        debug_assert_eq!(p.len() as u64, len.min(dl));
        debug_assert_eq!(s.len() as u64, len.min(dl));
        pre.push(p);
        suf.push(s);
    }
    Ok(AffixTables {
        d,
        prefixes: pre,
        suffixes: suf,
    })
}

/// `pre(val(var), d)` for `var = pretrunc(X_s, k)` with `|var| > d`.
fn prefix_of_prefix_truncation(cs: &CollageSystem, var: Var, d: u64, pre: &[Vec<u8>], suf: &[Vec<u8>]) -> Vec<u8> {
    let path = tr_pre_path(cs, var).expect("prefix truncation");
    for step in path {
        // The wanted window is val(step.var)[start, start + d).
        let start = step.cut_prefix;
        match cs.rule(step.var) {
            Rule::Concat(l, r) => {
                let ll = cs.length(l);
                if start < ll && start + d > ll {
                    let mut out = tail(&suf[l.index()], ll - start).to_vec();
                    out.extend_from_slice(head(&pre[r.index()], d - (ll - start)));
                    return out;
                }
            }
            Rule::Repeat { base, .. } => {
                let unit = cs.length(base);
                let offset = start % unit;
                if offset + d > unit {
                    let mut out = tail(&suf[base.index()], unit - offset).to_vec();
                    let mut remaining = d - (unit - offset);
                    while remaining > 0 {
                        let chunk = remaining.min(unit);
                        out.extend_from_slice(head(&pre[base.index()], chunk));
                        remaining -= chunk;
                    }
                    return out;
                }
            }
            Rule::Terminal(b) => {
                debug_assert_eq!(d, 1);
                return vec![b];
            }
            Rule::PrefTrunc { .. } | Rule::SufTrunc { .. } => {}
        }
    }
    unreachable!("truncation paths end at a terminal")
}

/// `suf(val(var), d)` for `var = suftrunc(X_s, k)` with `|var| > d`.
fn suffix_of_suffix_truncation(cs: &CollageSystem, var: Var, d: u64, pre: &[Vec<u8>], suf: &[Vec<u8>]) -> Vec<u8> {
    let path = tr_suf_path(cs, var).expect("suffix truncation");
    for step in path {
        // The wanted window is val(step.var)[end - d, end).
        let end = cs.length(step.var) - step.cut_suffix;
        match cs.rule(step.var) {
            Rule::Concat(l, r) => {
                let ll = cs.length(l);
                if end > ll && end - d < ll {
                    let start = end - d;
                    let mut out = tail(&suf[l.index()], ll - start).to_vec();
                    out.extend_from_slice(head(&pre[r.index()], end - ll));
                    return out;
                }
            }
            Rule::Repeat { base, .. } => {
                let unit = cs.length(base);
                let offset = step.cut_suffix % unit;
                if offset + d > unit {
                    // Chunks are collected right to left, then reversed.
                    let mut chunks: Vec<&[u8]> = vec![head(&pre[base.index()], unit - offset)];
                    let mut remaining = d - (unit - offset);
                    while remaining > 0 {
                        let chunk = remaining.min(unit);
                        chunks.push(tail(&suf[base.index()], chunk));
                        remaining -= chunk;
                    }
                    return chunks.into_iter().rev().flatten().copied().collect();
                }
            }
            Rule::Terminal(b) => {
                debug_assert_eq!(d, 1);
                return vec![b];
            }
            Rule::PrefTrunc { .. } | Rule::SufTrunc { .. } => {}
        }
    }
    unreachable!("truncation paths end at a terminal")
}
