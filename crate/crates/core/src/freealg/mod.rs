//! Free algebra on three letters: packed words and truncated noncommutative
//! series with left/right derivatives.

mod series;
mod truncation;
mod word;

pub use series::{Delta, NCSeries, Side};
pub use truncation::Truncation;
pub use word::{Word, MAX_WORD_LEN, PERMUTATIONS};
