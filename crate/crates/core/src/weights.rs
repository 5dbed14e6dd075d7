//! Boundary strings and weight arrays.
//!
//! Every occurrence of a q-gram in the text is charged to the lowest node of
//! the truncated derivation tree that covers it. That node is a
//! concatenation or a repetition, and the q-gram crosses one of its child
//! boundaries (for a repetition of a base shorter than `q`, every window
//! does). The segment `t_i` of such a variable holds every window that can
//! be charged to it; its weight array says how often each window is.

use crate::affixes::AffixTables;
use crate::error::{Error, Result};
use crate::grammar::{CollageSystem, Rule, Var};
use crate::occurrence::{AnchorIndex, OccurrenceTable};
use crate::par::Exec;

/// Boundary string of one variable with its weights in differential form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub var: Var,
    pub text: Vec<u8>,
    /// `deltas[j] = w[j] - w[j-1]`; one longer than `text` so a range
    /// update ending at the last position has somewhere to close.
    pub deltas: Vec<i128>,
}

const OVERFLOW: Error = Error::Overflow("segment weight");

impl Segment {
    pub fn empty(var: Var, text: Vec<u8>) -> Self {
        let deltas = vec![0; text.len() + 1];
        Segment { var, text, deltas }
    }

    /// Adds `amount` to the weights of positions `lo..=hi`.
    pub fn add_range(&mut self, lo: usize, hi: usize, amount: u128) -> Result<()> {
        if amount == 0 || lo > hi {
            return Ok(());
        }
        let amount = i128::try_from(amount).map_err(|_| OVERFLOW)?;
        self.deltas[lo] = self.deltas[lo].checked_add(amount).ok_or(OVERFLOW)?;
        self.deltas[hi + 1] = self.deltas[hi + 1].checked_sub(amount).ok_or(OVERFLOW)?;
        Ok(())
    }

    /// Prefix sums of the deltas.
    pub fn weights(&self) -> Result<Vec<u128>> {
        let mut acc: i128 = 0;
        let mut out = Vec::with_capacity(self.text.len());
        for &d in &self.deltas[..self.text.len()] {
            acc = acc.checked_add(d).ok_or(OVERFLOW)?;
            out.push(u128::try_from(acc).map_err(|_| Error::Overflow("negative segment weight"))?);
        }
        Ok(out)
    }

    /// Charges `count` occurrences of `var` whose first `cut_prefix` and
    /// last `cut_suffix` symbols are gone.
    pub fn add_occurrence(&mut self, cs: &CollageSystem, q: usize, cut_prefix: u64, cut_suffix: u64, count: u128) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let q = q as i128;
        let a = cut_prefix as i128;
        let end = cs.length(self.var) as i128 - cut_suffix as i128;
        if end - a < q {
            return Ok(());
        }
        match cs.rule(self.var) {
            Rule::Concat(l, _) => {
                let b = cs.length(l) as i128;
                let offset = b - b.min(q - 1);
                let lo = a.max(b - q + 1);
                let hi = (end - q).min(b - 1);
                if lo <= hi {
                    self.add_range((lo - offset) as usize, (hi - offset) as usize, count)?;
                }
            }
            Rule::Repeat { base, power } => {
                let unit = cs.length(base) as i128;
                let p = power as i128;
                if unit >= q {
                    // Boundaries m * unit strictly inside (a, end).
                    let m_lo = (a / unit + 1).max(1);
                    let m_hi = ((end - 1) / unit).min(p - 1);
                    if m_lo > m_hi {
                        return Ok(());
                    }
                    let mut clipped = |m: i128| -> Result<()> {
                        let origin = m * unit - (q - 1);
                        let lo = a.max(origin);
                        let hi = (end - q).min(m * unit - 1);
                        if lo <= hi {
                            self.add_range((lo - origin) as usize, (hi - origin) as usize, count)?;
                        }
                        Ok(())
                    };
                    clipped(m_lo)?;
                    if m_hi > m_lo {
                        clipped(m_hi)?;
                    }
                    let interior = m_hi - m_lo - 1;
                    if interior > 0 {
                        let amount = count.checked_mul(interior as u128).ok_or(OVERFLOW)?;
                        self.add_range(0, (q - 2) as usize, amount)?;
                    }
                } else {
                    // All windows are charged here; window s reads t[s mod unit..].
                    let windows = end - q - a + 1;
                    let full = windows / unit;
                    let extra = windows % unit;
                    if full > 0 {
                        let amount = count.checked_mul(full as u128).ok_or(OVERFLOW)?;
                        self.add_range(0, (unit - 1) as usize, amount)?;
                    }
                    if extra > 0 {
                        let start = a % unit;
                        let stop = start + extra - 1;
                        if stop < unit {
                            self.add_range(start as usize, stop as usize, count)?;
                        } else {
                            self.add_range(start as usize, (unit - 1) as usize, count)?;
                            self.add_range(0, (stop - unit) as usize, count)?;
                        }
                    }
                }
            }
            _ => unreachable!("segments exist only for concatenations and repetitions"),
        }
        Ok(())
    }
}

/// Boundary string of `var`, or `None` if nothing can be charged to it.
pub fn segment_text(cs: &CollageSystem, q: usize, affixes: &AffixTables, var: Var) -> Option<Vec<u8>> {
    if cs.length(var) < q as u64 {
        return None;
    }
    match cs.rule(var) {
        Rule::Concat(l, r) => Some([affixes.suffix(l), affixes.prefix(r)].concat()),
        Rule::Repeat { base, .. } => {
            let unit = cs.length(base);
            if unit >= q as u64 {
                Some([affixes.suffix(base), affixes.prefix(base)].concat())
            } else {
                let period = affixes.prefix(base);
                let len = cs.length(var).min(unit + q as u64 - 1) as usize;
                Some((0..len).map(|j| period[j % period.len()]).collect())
            }
        }
        _ => None,
    }
}

/// Segments of every concatenation and repetition of length at least `q`,
/// in variable order, carrying the weight of complete and truncated
/// occurrences.
pub fn build_segments(
    cs: &CollageSystem,
    q: usize,
    affixes: &AffixTables,
    occ: &OccurrenceTable,
    anchors: &AnchorIndex,
) -> Result<Vec<Segment>> {
    build_segments_with(cs, q, affixes, occ, anchors, Exec::default())
}

pub fn build_segments_with(
    cs: &CollageSystem,
    q: usize,
    affixes: &AffixTables,
    occ: &OccurrenceTable,
    anchors: &AnchorIndex,
    exec: Exec,
) -> Result<Vec<Segment>> {
    debug_assert!(q >= 2 && affixes.d() == q - 1);
    let vars: Vec<Var> = cs.vars().collect();
    let base = exec.map(&vars, |&var| -> Result<Option<Segment>> {
        let Some(text) = segment_text(cs, q, affixes, var) else { return Ok(None) };
        let mut seg = Segment::empty(var, text);
        seg.add_occurrence(cs, q, 0, 0, occ.get(var).complete)?;
        Ok(Some(seg))
    });
    let mut slot = vec![usize::MAX; cs.len()];
    let mut segments = Vec::new();
    for seg in base {
        if let Some(seg) = seg? {
            slot[seg.var.index()] = segments.len();
            segments.push(seg);
        }
    }

    // Truncated occurrences, merged in a fixed order.
    for (truncator, path) in anchors.paths.iter() {
        let weights = &occ.step_weights[truncator.index()];
        for (step, &count) in path.cut_steps().iter().zip(weights) {
            let k = slot[step.var.index()];
            if k != usize::MAX {
                segments[k].add_occurrence(cs, q, step.cut_prefix, step.cut_suffix, count)?;
            }
        }
    }
    Ok(segments)
}

/// The pair `(z, w)` of the weighted q-gram problem.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedText {
    pub text: Vec<u8>,
    pub weights: Vec<u128>,
}

impl WeightedText {
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }
}

/// Concatenates the segments of length at least `q`.
pub fn assemble(segments: &[Segment], q: usize) -> Result<WeightedText> {
    let mut out = WeightedText::default();
    for seg in segments.iter().filter(|s| s.text.len() >= q) {
        out.text.extend_from_slice(&seg.text);
        out.weights.extend(seg.weights()?);
    }
    Ok(out)
}
