//! Exact and numerical kernels for strict Lie 2-algebras and surface holonomy.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`rational`] and [`matrix`]: exact rational scalars and dense matrices with
//!   echelon-form based kernels, images, sections and solves.
//! - [`lie`] and [`cochain`]: Lie algebras given by structure constants, their
//!   modules, Chevalley–Eilenberg cochains, cohomology and connecting maps.
//! - [`crossed`]: crossed modules, strict Lie 2-algebras, skeletal models,
//!   outer actions and the splice construction of abelian representatives.
//! - [`linf`]: 2-term L∞-algebras and their identity suite.
//! - [`forms`]: L∞-valued differential forms with polynomial coefficients and
//!   the Maurer–Cartan equations.
//! - [`numeric`] and [`loopspace`]: sampled loops and surfaces, transport,
//!   the loop-space connection form and surface holonomy.
//! - [`hochschild`] and [`simplicial`]: Hochschild chains, shuffle products,
//!   the holonomy chain, finite simplicial sets and higher Hochschild chains.
//! - [`fixtures`]: standard examples and seeded random generators shared by the
//!   test suites and the command line self test.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cochain;
pub mod crossed;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod hochschild;
pub mod lie;
pub mod linf;
pub mod loopspace;
pub mod matrix;
pub mod numeric;
pub mod rational;
pub mod simplicial;

pub use error::{Error, Result};
pub use matrix::QMatrix;
pub use rational::Q;
