//! Truncated noncommutative power series and their continuous endomorphisms.

mod accum;
mod endo;
mod series;
mod word;

pub(crate) use accum::{Accumulator, Scaled};
pub use endo::Endomorphism;
pub use series::Series;
pub use word::{count_words_up_to, words_of_degree, Word, MAX_DEGREE, MAX_VARS};

/// Default truncation level.
pub const DEFAULT_TRUNC: usize = 12;

/// Display name for generator `i` when no alphabet is supplied.
pub fn default_var_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        _ => format!("x{}", i + 1),
    }
}
