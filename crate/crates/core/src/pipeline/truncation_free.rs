//! Fast path for systems without truncations.
//!
//! Every node of the derivation tree survives, so the number of occurrences
//! of a variable is a plain top-down product, and affixes follow from the
//! concatenation and repetition cases alone. Kept apart from the general
//! machinery so the two can be checked against each other.

use crate::error::{Error, Result};
use crate::grammar::{CollageSystem, Rule, Var};
use crate::par::Exec;
use crate::weights::Segment;

/// Occurrences of every variable in the derivation tree of the root.
pub fn occurrences(cs: &CollageSystem) -> Result<Vec<u128>> {
    let overflow = || Error::Overflow("occurrence count");
    let mut occ = vec![0u128; cs.len()];
    occ[cs.len() - 1] = 1;
    for var in cs.vars().rev() {
        let here = occ[var.index()];
        match cs.rule(var) {
            Rule::Terminal(_) => {}
            Rule::Concat(l, r) => {
                for child in [l, r] {
                    occ[child.index()] = occ[child.index()].checked_add(here).ok_or_else(overflow)?;
                }
            }
            Rule::Repeat { base, power } => {
                let add = here.checked_mul(power as u128).ok_or_else(overflow)?;
                occ[base.index()] = occ[base.index()].checked_add(add).ok_or_else(overflow)?;
            }
            Rule::PrefTrunc { .. } | Rule::SufTrunc { .. } => {
                panic!("fast path called on a system with truncations")
            }
        }
    }
    Ok(occ)
}

/// `pre(val(X_i), d)` and `suf(val(X_i), d)` for every variable.
pub fn affixes(cs: &CollageSystem, d: usize) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
    let mut pre: Vec<Vec<u8>> = Vec::with_capacity(cs.len());
    let mut suf: Vec<Vec<u8>> = Vec::with_capacity(cs.len());
    for var in cs.vars() {
        let (p, s) = match cs.rule(var) {
            Rule::Terminal(b) => (vec![b], vec![b]),
            Rule::Concat(l, r) => {
                let mut p = pre[l.index()].clone();
                p.extend_from_slice(&pre[r.index()]);
                p.truncate(d);
                let mut s = suf[l.index()].clone();
                s.extend_from_slice(&suf[r.index()]);
                let s = s.split_off(s.len().saturating_sub(d));
                (p, s)
            }
            Rule::Repeat { base, power } => {
                // y whole copies fit in d; one more supplies the remainder.
                let unit = cs.length(base) as usize;
                let copies = ((d / unit.max(1)) as u64 + 1).min(power) as usize;
                let p: Vec<u8> = pre[base.index()].repeat(copies).into_iter().take(d).collect();
                let s_full = suf[base.index()].repeat(copies);
                let s = s_full[s_full.len().saturating_sub(d)..].to_vec();
                (p, s)
            }
            Rule::PrefTrunc { .. } | Rule::SufTrunc { .. } => {
                panic!("fast path called on a system with truncations")
            }
        };
        pre.push(p);
        suf.push(s);
    }
    (pre, suf)
}

/// Segments of every concatenation and repetition of length at least `q`.
pub fn segments(cs: &CollageSystem, q: usize, exec: Exec) -> Result<Vec<Segment>> {
    let occ = occurrences(cs)?;
    let (pre, suf) = affixes(cs, q - 1);
    let vars: Vec<Var> = cs
        .vars()
        .filter(|&v| cs.length(v) >= q as u64 && matches!(cs.rule(v), Rule::Concat(..) | Rule::Repeat { .. }))
        .collect();
    exec.map(&vars, |&var| -> Result<Segment> {
        let count = occ[var.index()];
        let overflow = || Error::Overflow("segment weight");
        match cs.rule(var) {
            Rule::Concat(l, r) => {
                let text = [suf[l.index()].as_slice(), &pre[r.index()]].concat();
                let mut seg = Segment::empty(var, text);
                let last = seg.text.len() - q;
                seg.add_range(0, last, count)?;
                Ok(seg)
            }
            Rule::Repeat { base, power } => {
                let unit = cs.length(base);
                if unit >= q as u64 {
                    let text = [suf[base.index()].as_slice(), &pre[base.index()]].concat();
                    let mut seg = Segment::empty(var, text);
                    let amount = count.checked_mul(power as u128 - 1).ok_or_else(overflow)?;
                    seg.add_range(0, q - 2, amount)?;
                    Ok(seg)
                } else {
                    // t = val(X_s) pre(val(X_s)^(p-1), q-1), split at y.
                    let unit = unit as usize;
                    let body = &pre[base.index()];
                    let tail_len = ((power - 1) as u128).saturating_mul(unit as u128).min(q as u128 - 1) as usize;
                    let mut text = body.clone();
                    text.extend((0..tail_len).map(|j| body[j % unit]));
                    let mut seg = Segment::empty(var, text);
                    let y = unit - (q - 1) % unit;
                    let ceil = q.div_ceil(unit) as u128;
                    let p = power as u128;
                    let high = count.checked_mul(p + 1 - ceil).ok_or_else(overflow)?;
                    let low = count.checked_mul(p - ceil).ok_or_else(overflow)?;
                    seg.add_range(0, y - 1, high)?;
                    seg.add_range(y, unit - 1, low)?;
                    Ok(seg)
                }
            }
            _ => unreachable!(),
        }
    })
    .into_iter()
    .collect()
}
