//! All q-gram frequencies of a compressed text.

pub mod truncation_free;

use crate::affixes::{compute_affixes, MAX_AFFIX_LEN};
use crate::error::{Error, Result};
use crate::grammar::CollageSystem;
use crate::occurrence::{compute_anchors, compute_occurrence_classes};
use crate::par::Exec;
use crate::weights::{assemble, build_segments_with, WeightedText};
use crate::wfreq::{weighted_frequencies_with, FrequencyReport};

/// Exact frequency of every q-gram of `val(root)`, without expanding it.
pub fn qgram_frequencies(cs: &CollageSystem, q: usize) -> Result<FrequencyReport> {
    qgram_frequencies_with(cs, q, Exec::default())
}

/// Dispatches on the class: truncation-free systems take the fast path.
pub fn qgram_frequencies_with(cs: &CollageSystem, q: usize, exec: Exec) -> Result<FrequencyReport> {
    if cs.is_truncation_free() {
        truncation_free_path(cs, q, exec)
    } else {
        general_path(cs, q, exec)
    }
}

fn check_q(q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidQ(q));
    }
    if q - 1 > MAX_AFFIX_LEN {
        return Err(Error::AffixTooLong(q - 1));
    }
    Ok(())
}

/// The general path, valid for every system.
pub fn general_path(cs: &CollageSystem, q: usize, exec: Exec) -> Result<FrequencyReport> {
    let z = general_weighted_text(cs, q, exec)?;
    Ok(weighted_frequencies_with(&z.text, &z.weights, q, exec))
}

/// The pair `(z, w)` built by the general path.
pub fn general_weighted_text(cs: &CollageSystem, q: usize, exec: Exec) -> Result<WeightedText> {
    check_q(q)?;
    if cs.text_len() < q as u64 {
        return Ok(WeightedText::default());
    }
    let affixes = compute_affixes(cs, q - 1)?;
    let anchors = compute_anchors(cs);
    let occ = compute_occurrence_classes(cs, &anchors)?;
    let segments = build_segments_with(cs, q, &affixes, &occ, &anchors, exec)?;
    assemble(&segments, q)
}

/// The fast path for systems without truncations.
pub fn truncation_free_path(cs: &CollageSystem, q: usize, exec: Exec) -> Result<FrequencyReport> {
    let z = truncation_free_weighted_text(cs, q, exec)?;
    Ok(weighted_frequencies_with(&z.text, &z.weights, q, exec))
}

pub fn truncation_free_weighted_text(cs: &CollageSystem, q: usize, exec: Exec) -> Result<WeightedText> {
    check_q(q)?;
    if cs.text_len() < q as u64 {
        return Ok(WeightedText::default());
    }
    let segments = truncation_free::segments(cs, q, exec)?;
    assemble(&segments, q)
}
