//! Occurrence classes of every variable in the truncated derivation tree.
//!
//! A node of the truncated derivation tree either survives whole, loses a
//! proper prefix, a proper suffix, both, or disappears entirely. Each
//! truncation variable is responsible for the nodes on the cut segment of
//! its truncation path: those are exactly the nodes whose first (or last)
//! surviving leaf it decides. How many of its own occurrences leave such a
//! node with exactly the cuts recorded on the path is the truncator's
//! occurrence count corrected by the opposite-side truncators anchored on
//! it (see [`compute_occurrence_classes`]).

use crate::error::{Error, Result};
use crate::grammar::{CollageSystem, Rule, Var};
use crate::paths::{Side, TruncationPaths};

/// The six per-variable counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OccurrenceClasses {
    /// Every node labelled with the variable.
    pub all: u128,
    /// Nodes whose leaves all survive.
    pub complete: u128,
    /// Nodes that lose a proper non-empty prefix and nothing else.
    pub prefix_cut: u128,
    pub suffix_cut: u128,
    pub both_cut: u128,
    /// Nodes with no surviving leaf.
    pub dead: u128,
}

impl OccurrenceClasses {
    pub fn is_consistent(&self) -> bool {
        let parts = [self.complete, self.prefix_cut, self.suffix_cut, self.both_cut, self.dead];
        parts.iter().try_fold(0u128, |acc, &x| acc.checked_add(x)) == Some(self.all)
    }
}

/// `truncator` cuts `cut` symbols from the anchored variable on step `step`
/// of its truncation path, while `opposite_cut` symbols are missing on the
/// other side at that step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Anchor {
    pub truncator: Var,
    pub cut: u64,
    pub opposite_cut: u64,
    pub step: usize,
}

/// `trPreAnc` and `trSufAnc` of every variable, plus the paths they came from.
#[derive(Debug, Clone)]
pub struct AnchorIndex {
    /// Prefix truncators anchored at each variable, by ascending cut.
    pub prefix: Vec<Vec<Anchor>>,
    /// Suffix truncators anchored at each variable, by ascending cut.
    pub suffix: Vec<Vec<Anchor>>,
    pub paths: TruncationPaths,
}

impl AnchorIndex {
    pub fn total(&self) -> usize {
        self.prefix.iter().chain(&self.suffix).map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }
}

pub fn compute_anchors(cs: &CollageSystem) -> AnchorIndex {
    let paths = TruncationPaths::compute(cs);
    let mut prefix = vec![Vec::new(); cs.len()];
    let mut suffix = vec![Vec::new(); cs.len()];
    for (truncator, path) in paths.iter() {
        for (step, s) in path.cut_steps().iter().enumerate() {
            let (lists, cut, opposite_cut) = match path.side {
                Side::Prefix => (&mut prefix, s.cut_prefix, s.cut_suffix),
                Side::Suffix => (&mut suffix, s.cut_suffix, s.cut_prefix),
            };
            lists[s.var.index()].push(Anchor {
                truncator,
                cut,
                opposite_cut,
                step,
            });
        }
    }
    for list in prefix.iter_mut().chain(suffix.iter_mut()) {
        list.sort_by_key(|a| (a.cut, a.truncator));
    }
    let index = AnchorIndex { prefix, suffix, paths };
    // Unreachable variables may be taller than the root.
    let h = cs.vars().map(|v| cs.height(v)).max().unwrap_or(1);
    debug_assert!(
        index.total() as u128 <= 2 * cs.len() as u128 * h as u128,
        "anchor count above 2nh"
    );
    index
}

/// Counters for every variable, plus the multiplicity of every cut step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceTable {
    pub classes: Vec<OccurrenceClasses>,
    /// `step_weights[j][x]`: number of nodes of the variable on step `x` of
    /// truncator `X_j`'s cut segment that are cut exactly as the step says.
    /// Empty for variables that are not truncations.
    pub step_weights: Vec<Vec<u128>>,
}

impl OccurrenceTable {
    pub fn get(&self, var: Var) -> &OccurrenceClasses {
        &self.classes[var.index()]
    }
}

const OVERFLOW: Error = Error::Overflow("occurrence count");

fn add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or(OVERFLOW)
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(OVERFLOW)
}

/// Top-down pass from the root.
///
/// For a prefix truncation `Y`, the nodes on step `x` of its cut segment
/// keep exactly the cuts of the step in every complete occurrence of `Y`,
/// and in every occurrence of `Y` that only loses a suffix short enough to
/// stay clear of the step's surviving region. The latter are the
/// suffix-only steps of outer suffix truncators anchored at `Y` with
/// `cut <= |Y| - width`. Anchors are sorted by cut, so the sum is a running
/// prefix. Suffix truncations mirror this.
pub fn compute_occurrence_classes(cs: &CollageSystem, anchors: &AnchorIndex) -> Result<OccurrenceTable> {
    let n = cs.len();
    let mut classes = vec![OccurrenceClasses::default(); n];
    let mut step_weights: Vec<Vec<u128>> = vec![Vec::new(); n];
    classes[n - 1].all = 1;

    for var in cs.vars().rev() {
        let i = var.index();
        let c = classes[i];
        let cut_total = [c.dead, c.both_cut, c.prefix_cut, c.suffix_cut]
            .into_iter()
            .try_fold(0u128, add)?;
        let complete = c.all.checked_sub(cut_total).ok_or(Error::Overflow("negative occurrence count"))?;
        classes[i].complete = complete;

        match cs.rule(var) {
            Rule::Terminal(_) => {}
            Rule::Concat(l, r) => {
                for child in [l, r] {
                    let k = &mut classes[child.index()];
                    k.all = add(k.all, c.all)?;
                    k.dead = add(k.dead, c.dead)?;
                }
            }
            Rule::Repeat { base, power } => {
                let k = &mut classes[base.index()];
                k.all = add(k.all, mul(c.all, power as u128)?)?;
                k.dead = add(k.dead, mul(c.dead, power as u128)?)?;
            }
            Rule::PrefTrunc { base, .. } | Rule::SufTrunc { base, .. } => {
                let k = &mut classes[base.index()];
                k.all = add(k.all, c.all)?;
                k.dead = add(k.dead, c.dead)?;
                step_weights[i] = distribute_truncation(cs, anchors, var, &mut classes, &step_weights)?;
            }
        }
    }
    Ok(OccurrenceTable { classes, step_weights })
}

/// Walks the cut segment of truncator `var`, updating the classes of the
/// nodes on it and of the children it kills. Returns the step multiplicities.
fn distribute_truncation(
    cs: &CollageSystem,
    anchors: &AnchorIndex,
    var: Var,
    classes: &mut [OccurrenceClasses],
    step_weights: &[Vec<u128>],
) -> Result<Vec<u128>> {
    let path = anchors.paths.get(var).expect("truncation variable has a path");
    let side = path.side;
    let own = classes[var.index()];
    // Outer truncators of the opposite side that leave this side intact.
    let opposite = match side {
        Side::Prefix => &anchors.suffix[var.index()],
        Side::Suffix => &anchors.prefix[var.index()],
    };
    let mut cuts = Vec::new();
    let mut running = Vec::new();
    let mut sum = 0u128;
    for a in opposite.iter().filter(|a| a.opposite_cut == 0) {
        sum = add(sum, step_weights[a.truncator.index()][a.step])?;
        cuts.push(a.cut);
        running.push(sum);
    }
    // Occurrences of `var` in which its own cut is the whole story on this side.
    let dead_mass = match side {
        Side::Prefix => add(own.complete, own.suffix_cut)?,
        Side::Suffix => add(own.complete, own.prefix_cut)?,
    };

    let len = cs.length(var);
    let mut weights = Vec::with_capacity(path.cut_len);
    for step in path.cut_steps() {
        let room = len - step.width(cs);
        let covered = cuts.partition_point(|&c| c <= room);
        let m = match covered {
            0 => own.complete,
            k => add(own.complete, running[k - 1])?,
        };
        weights.push(m);

        let (near, far) = match side {
            Side::Prefix => (step.cut_prefix, step.cut_suffix),
            Side::Suffix => (step.cut_suffix, step.cut_prefix),
        };
        let node = &mut classes[step.var.index()];
        match (side, far) {
            (_, f) if f > 0 => node.both_cut = add(node.both_cut, m)?,
            (Side::Prefix, _) => node.prefix_cut = add(node.prefix_cut, m)?,
            (Side::Suffix, _) => node.suffix_cut = add(node.suffix_cut, m)?,
        }

        match cs.rule(step.var) {
            Rule::Concat(l, r) => {
                let victim = match side {
                    Side::Prefix => l,
                    Side::Suffix => r,
                };
                if near >= cs.length(victim) {
                    let k = &mut classes[victim.index()];
                    k.dead = add(k.dead, dead_mass)?;
                }
            }
            Rule::Repeat { base, .. } => {
                let copies = near / cs.length(base);
                if copies > 0 {
                    let k = &mut classes[base.index()];
                    k.dead = add(k.dead, mul(copies as u128, dead_mass)?)?;
                }
            }
            _ => {}
        }
    }
    Ok(weights)
}

/// Occurrence classes without a prepared anchor index.
pub fn occurrence_classes(cs: &CollageSystem) -> Result<OccurrenceTable> {
    compute_occurrence_classes(cs, &compute_anchors(cs))
}
