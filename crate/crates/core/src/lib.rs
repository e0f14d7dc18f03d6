//! Finite set-theoretic solutions of the Yang-Baxter equation and their
//! reflections.
//!
//! The crate covers:
//!
//! * [`solution`]: finite solutions `(X, r)` stored as `σ`/`τ` tables, with
//!   axiom flags and a JSON file format;
//! * [`reflection`]: deciding and enumerating reflections `k` with
//!   `r k₂ r k₂ = k₂ r k₂ r`, plus the commutation-relation criteria;
//! * [`group`]: the permutation group generated by the `σ` rows and the
//!   maps equivariant under it;
//! * [`ring`] and [`brace`]: nilpotent rings, finite (skew) braces, their
//!   solutions, and reflection constructors built from them;
//! * [`factor`]: exact group factorizations and central-element reflections;
//! * [`poly`] and [`param`]: exact bivariate rational polynomials and the
//!   parameter-dependent Yang-Baxter and reflection equations;
//! * [`cli`]: the `ybe` command-line front end.
//!
//! Elements are 0-based inside the library. Every textual format (one-line
//! notation, solution files) is 1-based.

pub mod brace;
pub mod cli;
pub mod error;
pub mod factor;
pub mod group;
pub mod param;
pub mod poly;
pub mod presets;
pub mod reflection;
pub mod ring;
pub mod solution;

pub use error::{Error, Result};
pub use solution::{FiniteSolution, MapOnX};
