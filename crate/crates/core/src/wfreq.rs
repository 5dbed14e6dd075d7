//! Weighted q-gram frequencies on an explicit string.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::grammar::escape_bytes;
use crate::par::Exec;

/// Exact count of every q-gram, in lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyReport {
    q: usize,
    counts: BTreeMap<Vec<u8>, u128>,
}

impl FrequencyReport {
    /// Builds a report, dropping zero counts.
    pub fn from_counts(q: usize, mut counts: BTreeMap<Vec<u8>, u128>) -> Self {
        counts.retain(|_, c| *c > 0);
        FrequencyReport { q, counts }
    }

    pub fn empty(q: usize) -> Self {
        FrequencyReport { q, counts: BTreeMap::new() }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn counts(&self) -> &BTreeMap<Vec<u8>, u128> {
        &self.counts
    }

    pub fn get(&self, qgram: &[u8]) -> u128 {
        self.counts.get(qgram).copied().unwrap_or(0)
    }

    /// Number of distinct q-grams.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum of all counts.
    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u128)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// One line per q-gram: escaped q-gram, TAB, decimal count.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (gram, count) in self.iter() {
            writeln!(out, "{}\t{count}", escape_bytes(gram))?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("escaped output is ASCII")
    }
}

/// Suffix array by prefix doubling.
pub fn suffix_array(text: &[u8]) -> Vec<usize> {
    suffix_array_with(text, Exec::default())
}

pub fn suffix_array_with(text: &[u8], exec: Exec) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    if n <= 1 {
        return sa;
    }
    let mut rank: Vec<usize> = text.iter().map(|&b| b as usize + 1).collect();
    let mut next = vec![0usize; n];
    let mut k = 1;
    loop {
        // Rank 0 marks "past the end", which sorts first.
        let key = |&i: &usize| (rank[i], if i + k < n { rank[i + k] } else { 0 });
        exec.sort_unstable_by_key(&mut sa, key);
        next[sa[0]] = 1;
        for w in 1..n {
            let step = usize::from(key(&sa[w - 1]) != key(&sa[w]));
            next[sa[w]] = next[sa[w - 1]] + step;
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1]] == n || k >= n {
            break;
        }
        k *= 2;
    }
    sa
}

/// `lcp[r]` is the longest common prefix of the suffixes at ranks `r - 1`
/// and `r`; `lcp[0] = 0`.
pub fn lcp_array(text: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut rank = vec![0; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }
    let mut lcp = vec![0; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

/// For every q-gram of `text`, the sum of `weights[j]` over its starting
/// positions `j`. Q-grams with a zero total are left out.
pub fn weighted_frequencies(text: &[u8], weights: &[u128], q: usize) -> FrequencyReport {
    weighted_frequencies_with(text, weights, q, Exec::default())
}

pub fn weighted_frequencies_with(text: &[u8], weights: &[u128], q: usize, exec: Exec) -> FrequencyReport {
    assert_eq!(text.len(), weights.len(), "one weight per position");
    let mut counts = BTreeMap::new();
    if q == 0 || text.len() < q {
        return FrequencyReport::empty(q);
    }
    let sa = suffix_array_with(text, exec);
    let lcp = lcp_array(text, &sa);
    let last_start = text.len() - q;
    // Suffixes sharing a q-long prefix are contiguous in the suffix array.
    let mut group: Option<(usize, u128)> = None;
    for (r, &start) in sa.iter().enumerate() {
        let joins = r > 0 && lcp[r] >= q;
        if !joins {
            if let Some((first, total)) = group.take() {
                if total > 0 {
                    counts.insert(text[first..first + q].to_vec(), total);
                }
            }
        }
        if start <= last_start {
            group.get_or_insert((start, 0)).1 += weights[start];
        }
    }
    if let Some((first, total)) = group {
        if total > 0 {
            counts.insert(text[first..first + q].to_vec(), total);
        }
    }
    FrequencyReport::from_counts(q, counts)
}
