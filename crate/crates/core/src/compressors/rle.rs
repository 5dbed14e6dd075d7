use crate::grammar::{CollageSystem, Rule, Var};

/// Rewrites every concatenation that derives a run `X X ... X` of one
/// variable into `rep X p`, then drops rules the root no longer reaches.
///
/// The derived text is unchanged and the rule count never grows. Runs are
/// found bottom-up: a variable is a run of `(base, count)` if it is a
/// concatenation of two runs of the same base, or a repetition of a run.
pub fn rle_lift(cs: &CollageSystem) -> CollageSystem {
    let mut runs: Vec<(Var, u64)> = Vec::with_capacity(cs.len());
    let mut rules = Vec::with_capacity(cs.len());
    for var in cs.vars() {
        let rule = cs.rule(var);
        let run = match rule {
            Rule::Concat(l, r) => {
                let (lb, lc) = runs[l.index()];
                let (rb, rc) = runs[r.index()];
                if lb == rb {
                    (lb, lc + rc)
                } else {
                    (var, 1)
                }
            }
            Rule::Repeat { base, power } => {
                let (b, c) = runs[base.index()];
                (b, c * power)
            }
            _ => (var, 1),
        };
        let lifted = match (rule, run) {
            (Rule::Concat(..) | Rule::Repeat { .. }, (base, power)) if power >= 2 => Rule::Repeat { base, power },
            _ => rule,
        };
        runs.push(run);
        rules.push(lifted);
    }
    prune(rules, cs.sequence_start())
}

/// Keeps the rules reachable from the root, renumbered in order.
fn prune(rules: Vec<Rule>, sequence_start: Option<usize>) -> CollageSystem {
    let n = rules.len();
    let mut reachable = vec![false; n];
    reachable[n - 1] = true;
    for i in (0..n).rev() {
        if reachable[i] {
            for v in rules[i].operands() {
                reachable[v.index()] = true;
            }
        }
    }
    let mut new_index = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for i in 0..n {
        if !reachable[i] {
            continue;
        }
        let map = |v: Var| Var::from_index(new_index[v.index()]);
        let rule = match rules[i] {
            Rule::Terminal(b) => Rule::Terminal(b),
            Rule::Concat(l, r) => Rule::Concat(map(l), map(r)),
            Rule::Repeat { base, power } => Rule::Repeat { base: map(base), power },
            Rule::PrefTrunc { base, cut } => Rule::PrefTrunc { base: map(base), cut },
            Rule::SufTrunc { base, cut } => Rule::SufTrunc { base: map(base), cut },
        };
        new_index[i] = kept.len();
        kept.push(rule);
    }
    let start = sequence_start.and_then(|s| new_index[s..].iter().copied().find(|&k| k != usize::MAX));
    let cs = match start {
        Some(s) => CollageSystem::with_sequence_part(kept, s),
        None => CollageSystem::new(kept),
    };
    cs.expect("lifting preserves validity")
}
