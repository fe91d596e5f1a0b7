//! Exact combinatorics for representations of combinatorial categories:
//! word orders and poset ideals, ordered automata, rational Hilbert series,
//! hom-set models of `OI_d`, `FI_d`, `OS`, `FS`, `FA`, and degree-truncated
//! Gröbner computations for submodules of principal projectives.

pub mod category;
pub mod error;
pub mod grobner;
pub mod lang;
pub mod limits;
pub mod poly;
pub mod poset;
pub mod series;
pub mod word;

pub use error::{Error, Result};
pub use limits::Limits;
pub use word::{Alphabet, Letter, Word};
