//! Producers of collage systems: an LZ78 encoder, a run-length lifter and a
//! seeded random generator for tests.

mod lz78;
mod random;
mod rle;

pub use lz78::lz78_encode;
pub use random::{random_system, RandomConfig};
pub use rle::rle_lift;
