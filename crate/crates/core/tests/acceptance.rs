//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::time::{Duration, Instant};

use collagram::affixes::compute_affixes;
use collagram::compressors::{lz78_encode, random_system, RandomConfig};
use collagram::grammar::{Class, CollageSystem, Rule, Var};
use collagram::occurrence::{compute_anchors, compute_occurrence_classes, occurrence_classes, OccurrenceClasses};
use collagram::oracle::{count_qgrams, expand, tree_stats, DEFAULT_MAX_NODES};
use collagram::paths::{tr_pre_path, PathStep};
use collagram::pipeline::{general_path, general_weighted_text, qgram_frequencies, qgram_frequencies_with, truncation_free_path};
use collagram::weights::{segment_text, Segment};
use collagram::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: u64 = 1000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Duration, ok: bool, detail: &str) -> Outcome {
    let detail = format!("{detail}; {:.3} ms (limit {:.0} ms)", ms(elapsed), ms(limit));
    check(ok && elapsed < limit, detail)
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn x(i: usize) -> Var {
    Var::named(i)
}

/// The nine-rule system deriving `cabcaabc`.
fn cabcaabc() -> CollageSystem {
    use Rule::*;
    CollageSystem::new(vec![
        Terminal(b'a'),
        Terminal(b'b'),
        Terminal(b'c'),
        Concat(x(1), x(2)),
        Concat(x(4), x(3)),
        Repeat { base: x(5), power: 3 },
        SufTrunc { base: x(6), cut: 2 },
        Concat(x(7), x(5)),
        PrefTrunc { base: x(8), cut: 2 },
    ])
    .unwrap()
}

fn corpus_config(seed: u64) -> RandomConfig {
    RandomConfig {
        rules: 40,
        alphabet: 1 + (seed % 4) as usize,
        max_len: 5000,
        max_tree: DEFAULT_MAX_NODES as u64,
        truncation_weight: [0, 2, 4, 6][(seed / 4 % 4) as usize],
        ..Default::default()
    }
}

fn corpus() -> Vec<CollageSystem> {
    (0..CORPUS).map(|seed| random_system(&corpus_config(seed), seed)).collect()
}

fn c1_occurrence_example() -> Outcome {
    let cs = cabcaabc();
    let start = Instant::now();
    let table = occurrence_classes(&cs).unwrap();
    let elapsed = start.elapsed();
    let want = OccurrenceClasses { all: 4, complete: 2, prefix_cut: 1, suffix_cut: 1, both_cut: 0, dead: 0 };
    let got = *table.get(x(5));
    within(elapsed, Duration::from_millis(1), got == want, &format!("X5 {got:?}"))
}

fn c2_path_example() -> Outcome {
    let cs = cabcaabc();
    let start = Instant::now();
    let path = tr_pre_path(&cs, x(9)).unwrap();
    let elapsed = start.elapsed();
    let want: Vec<PathStep> =
        [(8, 2, 0), (7, 2, 0), (6, 2, 2), (5, 2, 0), (3, 0, 0)].iter().map(|&(v, p, s)| PathStep::new(x(v), p, s)).collect();
    let shown: Vec<String> = path.iter().map(|s| s.to_string()).collect();
    within(elapsed, Duration::from_millis(1), path == want, &shown.join(" "))
}

fn c3_weight_example() -> Outcome {
    use Rule::*;
    let cs = CollageSystem::new(vec![
        Terminal(b'a'),
        Terminal(b'b'),
        Concat(x(1), x(2)),
        Concat(x(3), x(1)),
        Repeat { base: x(4), power: 9 },
    ])
    .unwrap();
    let start = Instant::now();
    let affixes = compute_affixes(&cs, 4).unwrap();
    let text = segment_text(&cs, 5, &affixes, x(5)).unwrap();
    let mut seg = Segment::empty(x(5), text);
    seg.add_occurrence(&cs, 5, 4, 5, 1).unwrap();
    let w = seg.weights().unwrap();
    let elapsed = start.elapsed();
    let ok = seg.text == b"abaabaa" && w == [4, 5, 5, 0, 0, 0, 0];
    within(elapsed, Duration::from_millis(1), ok, &format!("t={} w={w:?}", String::from_utf8_lossy(&seg.text)))
}

/// Criteria 4, 8, 9 and 10 share one sweep over the corpus.
struct Sweep {
    mismatches: Vec<String>,
    size_violations: Vec<String>,
    conservation_violations: Vec<String>,
    path_disagreements: Vec<String>,
    truncation_free: usize,
    comparisons: usize,
    elapsed: Duration,
}

fn sweep(corpus: &[CollageSystem]) -> Sweep {
    let mut s = Sweep {
        mismatches: vec![],
        size_violations: vec![],
        conservation_violations: vec![],
        path_disagreements: vec![],
        truncation_free: 0,
        comparisons: 0,
        elapsed: Duration::ZERO,
    };
    let start = Instant::now();
    for (seed, cs) in corpus.iter().enumerate() {
        let text = expand(cs, u64::MAX).unwrap();
        let free = cs.is_truncation_free();
        s.truncation_free += usize::from(free);
        for q in 2..=8 {
            let report = qgram_frequencies(cs, q).unwrap();
            s.comparisons += 1;
            if report != count_qgrams(&text, q) {
                s.mismatches.push(format!("seed {seed} q {q}"));
            }
            let expected_total = (text.len() + 1).saturating_sub(q) as u128;
            if report.total() != expected_total {
                s.conservation_violations.push(format!("seed {seed} q {q}"));
            }
            let z = general_weighted_text(cs, q, Exec::default()).unwrap();
            if z.len() > 2 * (q - 1) * cs.len() {
                s.size_violations.push(format!("seed {seed} q {q}: |z|={}", z.len()));
            }
            if free {
                let fast = truncation_free_path(cs, q, Exec::default()).unwrap();
                let general = general_path(cs, q, Exec::default()).unwrap();
                if fast != general {
                    s.path_disagreements.push(format!("seed {seed} q {q}"));
                }
            }
        }
    }
    s.elapsed = start.elapsed();
    s
}

fn summarize(failures: &[String], what: &str) -> String {
    match failures {
        [] => what.to_string(),
        [first, ..] => format!("{} failures, first at {first}", failures.len()),
    }
}

fn c5_occurrence_oracle(corpus: &[CollageSystem]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut vars = 0;
    for (seed, cs) in corpus.iter().enumerate() {
        let anchors = compute_anchors(cs);
        let got = compute_occurrence_classes(cs, &anchors).unwrap();
        let want = tree_stats(cs, DEFAULT_MAX_NODES).unwrap();
        vars += cs.len();
        if got.classes != want {
            bad.push(format!("seed {seed}"));
        }
    }
    let elapsed = start.elapsed();
    let detail = summarize(&bad, &format!("{} systems, {vars} variables, six counters each", corpus.len()));
    within(elapsed, Duration::from_secs(60), bad.is_empty(), &detail)
}

fn c6_affix_oracle(corpus: &[CollageSystem]) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0usize;
    for (seed, cs) in corpus.iter().enumerate() {
        let texts: Vec<Vec<u8>> = cs.vars().map(|v| collagram::oracle::expand_var(cs, v, u64::MAX).unwrap()).collect();
        for d in 1..=8 {
            let t = compute_affixes(cs, d).unwrap();
            for v in cs.vars() {
                let full = &texts[v.index()];
                let k = d.min(full.len());
                checked += 1;
                if t.prefix(v) != &full[..k] || t.suffix(v) != &full[full.len() - k..] {
                    bad.push(format!("seed {seed} d {d} {v}"));
                }
            }
        }
    }
    check(bad.is_empty(), summarize(&bad, &format!("{checked} (variable, d) pairs byte-exact")))
}

fn c7_beyond_expansion() -> Outcome {
    use Rule::*;
    let n = 1_000_000_000_000u64;
    let huge = CollageSystem::new(vec![Terminal(b'a'), Repeat { base: x(1), power: n }]).unwrap();
    let start = Instant::now();
    let report = qgram_frequencies(&huge, 2).unwrap();
    let elapsed = start.elapsed();
    let first = report.len() == 1 && report.get(b"aa") == n as u128 - 1;

    let nested = CollageSystem::new(vec![
        Terminal(b'a'),
        Repeat { base: x(1), power: 1000 },
        Repeat { base: x(2), power: 1000 },
    ])
    .unwrap();
    let report2 = qgram_frequencies(&nested, 3).unwrap();
    let second = report2.len() == 1 && report2.get(b"aaa") == 1_000_000 - 2;
    within(
        elapsed,
        Duration::from_millis(10),
        first && second,
        &format!("aa={} aaa={}", report.get(b"aa"), report2.get(b"aaa")),
    )
}

/// Truncation-free family whose text grows linearly with `n`.
fn linear_family(n: usize, seed: u64) -> CollageSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rules: Vec<Rule> = (0..4).map(|k| Rule::Terminal(b'a' + k)).collect();
    for _ in 0..12 {
        let i = rules.len();
        rules.push(Rule::Concat(Var::from_index(rng.gen_range(0..i)), Var::from_index(rng.gen_range(0..i))));
    }
    let small = rules.len();
    let mut last = Var::from_index(small - 1);
    while rules.len() + 2 <= n {
        rules.push(Rule::Repeat { base: Var::from_index(rng.gen_range(0..small)), power: rng.gen_range(2..6) });
        let rep = Var::from_index(rules.len() - 1);
        rules.push(Rule::Concat(last, rep));
        last = Var::from_index(rules.len() - 1);
    }
    CollageSystem::new(rules).unwrap()
}

fn c11_scaling() -> Outcome {
    let sizes = [1000, 2000, 4000];
    let mut times = Vec::new();
    for &n in &sizes {
        let cs = linear_family(n, 11);
        let best = (0..7)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(qgram_frequencies_with(&cs, 4, Exec::Sequential).unwrap());
                start.elapsed()
            })
            .min()
            .unwrap();
        times.push(best);
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    let shown: Vec<String> = sizes.iter().zip(&times).map(|(n, t)| format!("n={n}: {:.3} ms", ms(*t))).collect();
    check(
        ratios.iter().all(|&r| r <= 3.0),
        format!("{}; ratios {:.2?}", shown.join(", "), ratios),
    )
}

fn c12_lz78_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let len = rng.gen_range(1..=4096);
        let sigma = rng.gen_range(1..=256u32);
        let text: Vec<u8> = (0..len).map(|_| rng.gen_range(0..sigma) as u8).collect();
        let cs = lz78_encode(&text).unwrap();
        if expand(&cs, u64::MAX).unwrap() != text || cs.class() != Class::Simple {
            bad.push(format!("text {i}"));
        }
    }
    check(bad.is_empty(), summarize(&bad, "1000 texts round-trip, all simple"))
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    results.push((1, "occurrence classes of X5 in the cabcaabc system", c1_occurrence_example()));
    results.push((2, "prefix truncation path of X9", c2_path_example()));
    results.push((3, "truncated repetition weights (p=9, aba, cuts 4/5, q=5)", c3_weight_example()));

    let corpus = corpus();
    let s = sweep(&corpus);
    results.push((
        4,
        "pipeline equals naive counting on the random corpus",
        within(
            s.elapsed,
            Duration::from_secs(60),
            s.mismatches.is_empty(),
            &summarize(&s.mismatches, &format!("{} systems, {} (system, q) reports", corpus.len(), s.comparisons)),
        ),
    ));
    results.push((5, "occurrence classes equal the explicit tree walk", c5_occurrence_oracle(&corpus)));
    results.push((6, "affixes equal expanded prefixes and suffixes", c6_affix_oracle(&corpus)));
    results.push((7, "texts beyond expansion (a^10^12, nested a^10^6)", c7_beyond_expansion()));
    results.push((
        8,
        "|z| <= 2(q-1)n",
        check(s.size_violations.is_empty(), summarize(&s.size_violations, "every instance")),
    ));
    results.push((
        9,
        "counts sum to max(0, |T|-q+1)",
        check(s.conservation_violations.is_empty(), summarize(&s.conservation_violations, "every instance")),
    ));
    let free_ok = s.path_disagreements.is_empty() && s.truncation_free > 0;
    results.push((
        10,
        "fast path equals general path without truncations",
        check(
            free_ok,
            summarize(&s.path_disagreements, &format!("{} truncation-free systems", s.truncation_free)),
        ),
    ));
    results.push((11, "near-linear scaling in n (q=4)", c11_scaling()));
    results.push((12, "LZ78 round trip and simple class", c12_lz78_round_trip()));

    let mut failed = 0;
    for (id, name, outcome) in &results {
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2}  {name}: {}", outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
