//! Tsallis pseudo-coherent states: construction, normalization, overlaps,
//! moments and momentum distributions, each available both from Lauricella
//! and Kummer closed forms and from adaptive-quadrature oracles.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod limits;
pub mod moments;
pub mod momentum;
pub mod quadrature;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use states::Method;
