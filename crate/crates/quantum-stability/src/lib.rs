//! Quantum cohomology central charges, mutation flows and quasi-convergent
//! paths of stability conditions for projective spaces ℙ^{n-1}.
//!
//! The crate is `no_std` with `alloc`. It is organised by role:
//!
//! * [`khomology`]: exact cohomology and K-theory calculus (cup products,
//!   Chern characters, Todd and Gamma classes, Euler pairing, mutations).
//! * [`quantum`]: the small quantum product, the Euler multiplication
//!   operator, its eigenvalues, idempotents and the grading operator.
//! * [`connection`]: the canonical fundamental solution of the quantum
//!   differential equation, numerical flat frames, central charges and
//!   their small-radius asymptotics.
//! * [`mutationflow`]: integration rays, crossing detection and the induced
//!   mutations of exceptional collections.
//! * [`stability`]: algebraic stability conditions built from exceptional
//!   collections.
//! * [`pathsim`]: quasi-convergent paths of stability conditions and the
//!   limit semiorthogonal decomposition.
//!
//! ```
//! use quantum_stability::khomology::{chern_character, euler_form};
//!
//! let o = chern_character(3, 0);
//! let o1 = chern_character(3, 1);
//! assert_eq!(euler_form(&o, &o1).unwrap(), 3.into());
//! ```
#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod connection;
mod constants;
mod error;
mod exact;
pub mod khomology;
mod mp;
pub mod mutationflow;
pub mod pathsim;
pub mod quantum;
pub mod stability;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64;
