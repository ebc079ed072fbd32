//! Exact-arithmetic workbench for square-zero extensions and their torsor
//! descriptions, over finite rings and finite ringed spaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`finalg`]: finite commutative rings given by operation tables, ring
//!   homomorphisms, ideals, quotients, products and fiber products.
//! * [`modalg`]: finite modules, restriction of scalars and the induced module
//!   structure on a square-zero kernel.
//! * [`exal`]: square-zero extensions, their morphisms and exhaustive
//!   classification.
//! * [`grouptor`]: the abelian group object `A ⊕ M → A` in rings over `A` and
//!   the category of `M`-torsors.
//! * [`equivfun`]: the functor from extensions to torsors, its inverse and an
//!   exhaustive equivalence check.
//! * [`finspace`], [`sheafspace`], [`cotors`]: the ringed-space analogues
//!   (finite spaces, sheaves of finite rings, first order thickenings and
//!   cotorsors).
//!
//! Everything is exhaustive and deterministic; searches are bounded by a
//! [`Limits`] budget.

pub mod builtin;
pub mod cotors;
pub mod equivfun;
mod error;
pub mod exal;
pub mod finalg;
pub mod finspace;
pub mod grouptor;
pub mod json;
mod limits;
pub mod modalg;
pub mod report;
pub mod samples;
mod search;
pub mod sheafspace;

pub use error::{Error, Result};
pub use limits::{Budget, Limits};
pub use report::{Check, Report, Verdict};
