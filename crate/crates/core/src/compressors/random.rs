use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grammar::{CollageSystem, Rule, Var};

/// Knobs of [`random_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomConfig {
    /// Upper bound on the number of rules; the actual count is drawn from
    /// `1..=rules`, skewed toward the top.
    pub rules: usize,
    /// Symbols are drawn from the first `alphabet` letters (raw bytes above 26).
    pub alphabet: usize,
    /// Cap on the length of every variable.
    pub max_len: u64,
    /// Cap on the node count of every explicit derivation tree, cancel marks included.
    pub max_tree: u64,
    pub max_power: u64,
    pub terminal_weight: u32,
    pub concat_weight: u32,
    pub repeat_weight: u32,
    pub truncation_weight: u32,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            rules: 30,
            alphabet: 3,
            max_len: 5000,
            max_tree: 100_000,
            max_power: 7,
            terminal_weight: 1,
            concat_weight: 5,
            repeat_weight: 2,
            truncation_weight: 4,
        }
    }
}

/// A reproducible random collage system.
///
/// Operands lean toward recently defined variables so that truncations end
/// up nested inside each other and inside repetitions; the root leans
/// toward the longest variable so the derived text is not trivially short.
pub fn random_system(config: &RandomConfig, seed: u64) -> CollageSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = config.rules.max(1);
    let n = rng.gen_range(1..=top).max(rng.gen_range(1..=top));
    let alphabet = config.alphabet.clamp(1, 256);
    let symbol = |k: usize| if alphabet <= 26 { b'a' + k as u8 } else { k as u8 };

    let mut rules: Vec<Rule> = Vec::with_capacity(n);
    let mut lengths: Vec<u64> = Vec::with_capacity(n);
    let mut trees: Vec<u64> = Vec::with_capacity(n);
    let weights = [
        config.terminal_weight,
        config.concat_weight,
        config.repeat_weight,
        config.truncation_weight,
    ];
    let total: u32 = weights.iter().sum();

    for i in 0..n {
        let mut chosen = None;
        for _attempt in 0..8 {
            if i == 0 || total == 0 {
                break;
            }
            let mut roll = rng.gen_range(0..total);
            let kind = weights
                .iter()
                .position(|&w| {
                    if roll < w {
                        true
                    } else {
                        roll -= w;
                        false
                    }
                })
                .unwrap();
            let root = i + 1 == n;
            let longest = (0..i).max_by_key(|&k| (lengths[k], k)).unwrap();
            let pick = |rng: &mut ChaCha8Rng| {
                if root && rng.gen_bool(0.7) {
                    return longest;
                }
                (0..3).map(|_| rng.gen_range(0..i)).max().unwrap()
            };
            let candidate = match kind {
                0 => None,
                1 => {
                    let (l, r) = (pick(&mut rng), pick(&mut rng));
                    Some((
                        Rule::Concat(Var::from_index(l), Var::from_index(r)),
                        lengths[l].saturating_add(lengths[r]),
                        trees[l].saturating_add(trees[r]).saturating_add(1),
                    ))
                }
                2 => {
                    let b = pick(&mut rng);
                    let p = rng.gen_range(2..=config.max_power.max(2));
                    Some((
                        Rule::Repeat { base: Var::from_index(b), power: p },
                        lengths[b].saturating_mul(p),
                        trees[b].saturating_mul(p).saturating_add(1),
                    ))
                }
                _ => {
                    let b = pick(&mut rng);
                    if lengths[b] < 2 {
                        continue;
                    }
                    let cut = rng.gen_range(1..lengths[b]);
                    let base = Var::from_index(b);
                    let rule = if rng.gen_bool(0.5) {
                        Rule::PrefTrunc { base, cut }
                    } else {
                        Rule::SufTrunc { base, cut }
                    };
                    Some((rule, lengths[b] - cut, trees[b].saturating_add(cut).saturating_add(1)))
                }
            };
            match candidate {
                None => break,
                Some((rule, len, tree)) if len <= config.max_len && tree <= config.max_tree => {
                    chosen = Some((rule, len, tree));
                    break;
                }
                Some(_) => {}
            }
        }
        let (rule, len, tree) = chosen.unwrap_or_else(|| (Rule::Terminal(symbol(rng.gen_range(0..alphabet))), 1, 2));
        rules.push(rule);
        lengths.push(len);
        trees.push(tree);
    }
    CollageSystem::new(rules).expect("generator respects the rule invariants")
}
