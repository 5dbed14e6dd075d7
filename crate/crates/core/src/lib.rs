//! Exact q-gram frequencies of texts given as collage systems.
//!
//! A collage system is a grammar whose rules concatenate, repeat and
//! truncate previously defined variables. [`qgram_frequencies`] counts every
//! length-`q` substring of the derived text in time that depends on the
//! number of rules rather than on the text length, so texts far too large
//! to expand are fine:
//!
//! ```
//! use collagram::{parse, qgram_frequencies};
//!
//! let cs = parse(b"X1 = term a\nX2 = rep X1 1000000000000\n").unwrap();
//! let report = qgram_frequencies(&cs, 2).unwrap();
//! assert_eq!(report.get(b"aa"), 999_999_999_999);
//! ```
//!
//! [`oracle`] holds brute-force counterparts of every stage for testing.

pub mod affixes;
pub mod compressors;
pub mod error;
pub mod grammar;
pub mod occurrence;
pub mod oracle;
pub mod par;
pub mod paths;
pub mod pipeline;
pub mod weights;
pub mod wfreq;

pub use error::{Error, Result};
pub use grammar::{parse, serialize, Class, CollageSystem, Rule, Var};
pub use occurrence::OccurrenceClasses;
pub use par::Exec;
pub use pipeline::{qgram_frequencies, qgram_frequencies_with};
pub use wfreq::FrequencyReport;
