use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grammar::{CollageSystem, Rule, Var};

/// LZ78 factorization as a simple collage system.
///
/// Each new phrase is its longest previously seen phrase extended by one
/// symbol, so every dictionary rule is `cat X_prev X_symbol` with a
/// single-symbol right operand. A one-symbol phrase is the terminal rule
/// itself. The phrase sequence is joined by a balanced tree of
/// concatenations, which the system records as its sequence part.
pub fn lz78_encode(text: &[u8]) -> Result<CollageSystem> {
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rules: Vec<Rule> = Vec::new();
    let mut terminals: [Option<Var>; 256] = [None; 256];
    // Trie edges (phrase, next symbol) -> phrase; phrase 0 is the empty phrase.
    let mut trie: HashMap<(usize, u8), usize> = HashMap::new();
    let mut phrase_var: Vec<Option<Var>> = vec![None];
    let mut sequence: Vec<Var> = Vec::new();

    let mut i = 0;
    while i < text.len() {
        let mut node = 0;
        while i < text.len() {
            match trie.get(&(node, text[i])) {
                Some(&child) => {
                    node = child;
                    i += 1;
                }
                None => break,
            }
        }
        if i == text.len() {
            // The input ended inside a known phrase.
            sequence.push(phrase_var[node].expect("non-empty phrase"));
            break;
        }
        let b = text[i];
        i += 1;
        let symbol = *terminals[b as usize].get_or_insert_with(|| {
            rules.push(Rule::Terminal(b));
            Var::from_index(rules.len() - 1)
        });
        let var = match phrase_var[node] {
            None => symbol,
            Some(prev) => {
                rules.push(Rule::Concat(prev, symbol));
                Var::from_index(rules.len() - 1)
            }
        };
        trie.insert((node, b), phrase_var.len());
        phrase_var.push(Some(var));
        sequence.push(var);
    }

    let sequence_start = rules.len();
    while sequence.len() > 1 {
        let mut next = Vec::with_capacity(sequence.len().div_ceil(2));
        for pair in sequence.chunks(2) {
            match *pair {
                [l, r] => {
                    rules.push(Rule::Concat(l, r));
                    next.push(Var::from_index(rules.len() - 1));
                }
                [single] => next.push(single),
                _ => unreachable!(),
            }
        }
        sequence = next;
    }
    if sequence_start == rules.len() {
        // One phrase: it is the last rule created, hence already the root.
        debug_assert_eq!(sequence[0].index(), rules.len() - 1);
        CollageSystem::new(rules)
    } else {
        CollageSystem::with_sequence_part(rules, sequence_start)
    }
}
