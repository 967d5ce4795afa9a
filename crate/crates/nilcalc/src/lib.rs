//! Grid numerics, spec-file ingestion and the `nilcalc` command line.

pub use nilcalc_core as core;

pub mod bessel;
pub mod bumps;
pub mod cli;
pub mod convolution;
pub mod decay;
pub mod error;
pub mod fd;
pub mod grid;
pub mod heat;
pub mod kernels;
pub mod parse;
pub mod schrodinger;
pub mod sobolev;
pub mod spec_io;
pub mod verify;

pub use error::{NumError, NumResult};
pub use grid::{GridFunction, GridSpec};
