//! Stack sorting, stack words, and exact enumeration of `t`-stack sortable
//! permutations.
//!
//! - [`perm`]: permutations, descents, pattern containment, enumeration.
//! - [`machine`]: the stack-sorting map `s` and the greedy machine of
//!   `t` stacks in series.
//! - [`words`]: stack words, forbidden factors, encoding and decoding, the
//!   projection `v(w)` and the `A`-placement enumerator.
//! - [`enumerate`]: exact big-integer counts and bounds, brute-force oracles.
//! - [`asymptotics`]: growth rate of the 3-stack bound.
//! - [`verify`]: the exhaustive property suite.

pub mod asymptotics;
pub mod enumerate;
pub mod error;
pub mod machine;
pub mod perm;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use machine::{is_t_stack_sortable, iterate_sort, run_series_machine, stack_sort, SeriesRun};
pub use perm::{all_permutations, parse_permutation, Permutation, DEFAULT_ENUMERATION_LIMIT};
pub use words::{decode, encode, validate_word, StackWord};
