//! Differential geometry on finite groups with exact rational arithmetic.
//!
//! Calculi are left-covariant digraphs on a finite group, tensors carry their
//! coefficients on the left in the basis of left-invariant Maurer-Cartan forms
//! and vector fields, and every computation is exact.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod action;
pub mod braid;
pub mod calculus;
pub mod connection;
pub mod dual;
pub mod error;
pub mod function;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod tensor;
pub mod twosided;

pub use calculus::DifferentialCalculus;
pub use error::{Error, Result};
pub use function::GroupFunction;
pub use group::FiniteGroup;
pub use linalg::{Rational, RationalMatrix};
pub use tensor::{Slot, Tensor};
