//! Free groups, their automorphisms, semidirect products, chain
//! presentations and the Baumslag–Solitar demonstration.

pub mod automorphism;
pub mod bass;
pub mod compressed;
pub mod dyadic;
pub mod folding;
pub mod presentation;
pub mod semidirect;
pub mod word;

pub use automorphism::{example1_monodromy, FreeAutomorphism};
pub use semidirect::{MonodromyAction, SdLetter, SemidirectElement};
pub use word::{FreeWord, Reducer, WordError, DEFAULT_LETTER_CAP};
