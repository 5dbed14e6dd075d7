//! Brute-force reference implementations.
//!
//! Everything here works on explicit strings and explicit derivation trees,
//! and deliberately shares no code with the compressed-domain algorithms it
//! is used to check.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grammar::{CollageSystem, Rule, Var};
use crate::occurrence::OccurrenceClasses;
use crate::wfreq::FrequencyReport;

/// Default node budget for explicit derivation trees.
pub const DEFAULT_MAX_NODES: usize = 1_000_000;

/// Computes `val(root)` by the five-case recursion, refusing to produce
/// more than `max_bytes` bytes.
pub fn expand(cs: &CollageSystem, max_bytes: u64) -> Result<Vec<u8>> {
    expand_var(cs, cs.root(), max_bytes)
}

/// Computes `val(var)`, refusing to produce more than `max_bytes` bytes.
pub fn expand_var(cs: &CollageSystem, var: Var, max_bytes: u64) -> Result<Vec<u8>> {
    let len = cs.length(var);
    if len > max_bytes {
        return Err(Error::BudgetExceeded {
            needed: len as u128,
            budget: max_bytes,
        });
    }
    let mut out = Vec::with_capacity(len as usize);
    // Work items are half-open slices of val(var) still to be emitted.
    let mut stack = vec![(var, 0u64, len)];
    while let Some((v, lo, hi)) = stack.pop() {
        if lo >= hi {
            continue;
        }
        match cs.rule(v) {
            Rule::Terminal(b) => out.push(b),
            Rule::Concat(l, r) => {
                let split = cs.length(l);
                if hi > split {
                    stack.push((r, lo.saturating_sub(split), hi - split));
                }
                if lo < split {
                    stack.push((l, lo, hi.min(split)));
                }
            }
            Rule::Repeat { base, .. } => {
                let unit = cs.length(base);
                let first = lo / unit;
                let last = (hi - 1) / unit;
                for copy in (first..=last).rev() {
                    let start = copy * unit;
                    stack.push((base, lo.max(start) - start, hi.min(start + unit) - start));
                }
            }
            Rule::PrefTrunc { base, cut } => stack.push((base, lo + cut, hi + cut)),
            Rule::SufTrunc { base, .. } => stack.push((base, lo, hi)),
        }
    }
    debug_assert_eq!(out.len() as u64, len);
    Ok(out)
}

/// Counts every length-`q` substring of `text` by direct scanning.
/// Returns an empty report for `q == 0` or `|text| < q`.
pub fn count_qgrams(text: &[u8], q: usize) -> FrequencyReport {
    let mut counts: BTreeMap<Vec<u8>, u128> = BTreeMap::new();
    if q > 0 && text.len() >= q {
        for window in text.windows(q) {
            match counts.get_mut(window) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(window.to_vec(), 1);
                }
            }
        }
    }
    FrequencyReport::from_counts(q, counts)
}

/// Label of an explicit derivation-tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Var(Var),
    Symbol(u8),
    /// `▷`: cancels a symbol to its right.
    CancelRight,
    /// `◁`: cancels a symbol to its left.
    CancelLeft,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub label: Label,
    pub children: Vec<usize>,
    pub depth: u32,
    /// Half-open range of symbol leaves below this node, in leaf order.
    pub leaves: (usize, usize),
}

/// An explicit derivation tree with the cancellation rules applied.
#[derive(Debug, Clone)]
pub struct DerivationTree {
    /// Nodes in pre-order; index 0 is the root.
    pub nodes: Vec<TreeNode>,
    /// Symbol leaves in left-to-right order.
    pub symbols: Vec<u8>,
    /// For each symbol leaf, the depth of the truncation node that cancelled
    /// it, or `None` if it survives in the truncated derivation tree.
    pub cancelled_at: Vec<Option<u32>>,
}

impl DerivationTree {
    /// Builds the derivation tree of the root and applies the cancellation
    /// rules innermost truncation first.
    pub fn build(cs: &CollageSystem, max_nodes: usize) -> Result<Self> {
        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut symbols = Vec::new();
        // (label, parent, depth); children are pushed in reverse so they pop in order.
        let mut stack: Vec<(Label, Option<usize>, u32)> = vec![(Label::Var(cs.root()), None, 0)];
        let mut open: Vec<usize> = Vec::new();
        while let Some((label, parent, depth)) = stack.pop() {
            if nodes.len() >= max_nodes {
                return Err(Error::BudgetExceeded {
                    needed: max_nodes as u128 + 1,
                    budget: max_nodes as u64,
                });
            }
            // Close finished ancestors so leaf ranges are exact.
            while let Some(&top) = open.last() {
                if nodes[top].depth >= depth {
                    nodes[top].leaves.1 = symbols.len();
                    open.pop();
                } else {
                    break;
                }
            }
            let id = nodes.len();
            if let Some(p) = parent {
                nodes[p].children.push(id);
            }
            nodes.push(TreeNode {
                label,
                children: Vec::new(),
                depth,
                leaves: (symbols.len(), symbols.len()),
            });
            let child_depth = depth + 1;
            let mut push = |l: Label| stack.push((l, Some(id), child_depth));
            match label {
                Label::Symbol(b) => {
                    symbols.push(b);
                    nodes[id].leaves.1 = symbols.len();
                    continue;
                }
                Label::CancelLeft | Label::CancelRight => continue,
                Label::Var(v) => match cs.rule(v) {
                    Rule::Terminal(b) => push(Label::Symbol(b)),
                    Rule::Concat(l, r) => {
                        push(Label::Var(r));
                        push(Label::Var(l));
                    }
                    Rule::Repeat { base, power } => {
                        if power as usize > max_nodes {
                            return Err(Error::BudgetExceeded {
                                needed: power as u128,
                                budget: max_nodes as u64,
                            });
                        }
                        for _ in 0..power {
                            push(Label::Var(base));
                        }
                    }
                    Rule::PrefTrunc { base, cut } => {
                        push(Label::Var(base));
                        for _ in 0..cut.min(max_nodes as u64 + 1) {
                            push(Label::CancelRight);
                        }
                    }
                    Rule::SufTrunc { base, cut } => {
                        for _ in 0..cut.min(max_nodes as u64 + 1) {
                            push(Label::CancelLeft);
                        }
                        push(Label::Var(base));
                    }
                },
            }
            open.push(id);
        }
        for id in open {
            nodes[id].leaves.1 = symbols.len();
        }

        let mut cancelled_at = vec![None; symbols.len()];
        // Reverse pre-order visits every node after all of its descendants.
        for node in nodes.iter().rev() {
            let Label::Var(v) = node.label else { continue };
            let (lo, hi) = node.leaves;
            match cs.rule(v) {
                Rule::PrefTrunc { cut, .. } => {
                    cancel(&mut cancelled_at, (lo..hi).collect::<Vec<_>>(), cut, node.depth)
                }
                Rule::SufTrunc { cut, .. } => {
                    cancel(&mut cancelled_at, (lo..hi).rev().collect::<Vec<_>>(), cut, node.depth)
                }
                _ => {}
            }
        }
        Ok(DerivationTree {
            nodes,
            symbols,
            cancelled_at,
        })
    }

    /// Leaf labels after cancellation; equals `val(root)`.
    pub fn surviving_text(&self) -> Vec<u8> {
        self.symbols
            .iter()
            .zip(&self.cancelled_at)
            .filter(|(_, c)| c.is_none())
            .map(|(&b, _)| b)
            .collect()
    }

    /// Classifies the subtree rooted at `node`. Returns `None` for nodes that
    /// are not variable-labelled.
    pub fn classify(&self, node: usize) -> Option<SubtreeState> {
        let n = &self.nodes[node];
        if !matches!(n.label, Label::Var(_)) {
            return None;
        }
        // Leaves of val(X) are those not cancelled inside this subtree.
        let local: Vec<usize> = (n.leaves.0..n.leaves.1)
            .filter(|&leaf| self.cancelled_at[leaf].is_none_or(|d| d < n.depth))
            .collect();
        let alive = |leaf: usize| self.cancelled_at[leaf].is_none();
        let survivors = local.iter().filter(|&&l| alive(l)).count();
        let state = if survivors == local.len() {
            SubtreeState::Complete
        } else if survivors == 0 {
            SubtreeState::Dead
        } else {
            match (alive(local[0]), alive(*local.last().unwrap())) {
                (false, true) => SubtreeState::PrefixCut,
                (true, false) => SubtreeState::SuffixCut,
                (false, false) => SubtreeState::BothCut,
                (true, true) => unreachable!("surviving leaves of a subtree are contiguous"),
            }
        };
        Some(state)
    }
}

fn cancel(cancelled_at: &mut [Option<u32>], order: Vec<usize>, cut: u64, depth: u32) {
    let mut remaining = cut;
    for leaf in order {
        if remaining == 0 {
            break;
        }
        if cancelled_at[leaf].is_none() {
            cancelled_at[leaf] = Some(depth);
            remaining -= 1;
        }
    }
    debug_assert_eq!(remaining, 0, "truncation longer than its base");
}

/// How a variable-labelled subtree fares in the truncated derivation tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtreeState {
    Complete,
    PrefixCut,
    SuffixCut,
    BothCut,
    Dead,
}

/// Occurrence classes of every variable, by explicit tree walk.
pub fn tree_stats(cs: &CollageSystem, max_nodes: usize) -> Result<Vec<OccurrenceClasses>> {
    let tree = DerivationTree::build(cs, max_nodes)?;
    let mut stats = vec![OccurrenceClasses::default(); cs.len()];
    for id in 0..tree.nodes.len() {
        let Label::Var(v) = tree.nodes[id].label else { continue };
        let s = &mut stats[v.index()];
        s.all += 1;
        match tree.classify(id).unwrap() {
            SubtreeState::Complete => s.complete += 1,
            SubtreeState::PrefixCut => s.prefix_cut += 1,
            SubtreeState::SuffixCut => s.suffix_cut += 1,
            SubtreeState::BothCut => s.both_cut += 1,
            SubtreeState::Dead => s.dead += 1,
        }
    }
    Ok(stats)
}

/// `pre(val(var), d)` and `suf(val(var), d)` by expansion.
pub fn affixes_of(cs: &CollageSystem, var: Var, d: usize, max_bytes: u64) -> Result<(Vec<u8>, Vec<u8>)> {
    let text = expand_var(cs, var, max_bytes)?;
    let k = d.min(text.len());
    Ok((text[..k].to_vec(), text[text.len() - k..].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::tests::cabcaabc;

    fn report(pairs: &[(&str, u128)]) -> BTreeMap<Vec<u8>, u128> {
        pairs.iter().map(|(k, v)| (k.as_bytes().to_vec(), *v)).collect()
    }

    #[test]
    fn expands_running_example() {
        assert_eq!(expand(&cabcaabc(), 1 << 20).unwrap(), b"cabcaabc");
        assert_eq!(expand_var(&cabcaabc(), Var::named(7), 100).unwrap(), b"abcabca");
        assert_eq!(expand_var(&cabcaabc(), Var::named(8), 100).unwrap(), b"abcabcaabc");
    }

    #[test]
    fn expands_repeat() {
        let cs = CollageSystem::new(vec![Rule::Terminal(b'a'), Rule::Repeat { base: Var::named(1), power: 5 }]).unwrap();
        assert_eq!(expand(&cs, 10).unwrap(), b"aaaaa");
    }

    #[test]
    fn expansion_budget() {
        assert_eq!(
            expand(&cabcaabc(), 4),
            Err(Error::BudgetExceeded { needed: 8, budget: 4 })
        );
    }

    #[test]
    fn naive_qgram_counts() {
        assert_eq!(
            count_qgrams(b"cabcaabc", 2).counts(),
            &report(&[("ca", 2), ("ab", 2), ("bc", 2), ("aa", 1)])
        );
        assert_eq!(
            count_qgrams(b"cabcaabc", 3).counts(),
            &report(&[("abc", 2), ("cab", 1), ("bca", 1), ("caa", 1), ("aab", 1)])
        );
        assert!(count_qgrams(b"abc", 5).is_empty());
        assert_eq!(count_qgrams(b"abcd", 2).total(), 3);
    }

    #[test]
    fn tree_leaves_after_cancellation_spell_the_text() {
        let tree = DerivationTree::build(&cabcaabc(), 1000).unwrap();
        assert_eq!(tree.symbols, b"abcabcabcabc");
        assert_eq!(tree.surviving_text(), b"cabcaabc");
        // 9 symbol leaves under X7 plus 2 marks, 3 under X5, 2 marks under X9.
        let marks = tree
            .nodes
            .iter()
            .filter(|n| matches!(n.label, Label::CancelLeft | Label::CancelRight))
            .count();
        assert_eq!(marks, 4);
    }

    #[test]
    fn running_example_classes() {
        let stats = tree_stats(&cabcaabc(), 1000).unwrap();
        let x5 = stats[Var::named(5).index()];
        assert_eq!(
            x5,
            OccurrenceClasses { all: 4, complete: 2, prefix_cut: 1, suffix_cut: 1, both_cut: 0, dead: 0 }
        );
        let x4 = stats[Var::named(4).index()];
        assert_eq!(
            x4,
            OccurrenceClasses { all: 4, complete: 2, prefix_cut: 0, suffix_cut: 1, both_cut: 0, dead: 1 }
        );
        let x9 = stats[Var::named(9).index()];
        assert_eq!(x9, OccurrenceClasses { all: 1, complete: 1, ..Default::default() });
        let x1 = stats[Var::named(1).index()];
        assert_eq!(x1, OccurrenceClasses { all: 4, complete: 3, dead: 1, ..Default::default() });
        for s in &stats {
            assert!(s.is_consistent());
        }
    }

    #[test]
    fn node_budget() {
        let cs = CollageSystem::new(vec![
            Rule::Terminal(b'a'),
            Rule::Repeat { base: Var::named(1), power: 1_000_000_000_000 },
        ])
        .unwrap();
        assert!(matches!(tree_stats(&cs, 1000), Err(Error::BudgetExceeded { .. })));
    }
}
