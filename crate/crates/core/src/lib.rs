//! Interval-valued functions, their integrals, convexity checks and
//! Hermite–Hadamard-type inclusion chains.

pub mod catalog;
pub mod cli;
pub mod convexity;
pub mod error;
pub mod expr;
pub mod family;
pub mod function;
pub mod hh;
pub mod integration;
pub mod interval;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use interval::Interval;
