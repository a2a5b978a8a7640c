#![no_std]
extern crate alloc;

pub mod chain;
pub mod compensated;
pub mod continuum;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod planar;
pub mod poly;
pub mod quadratic;
pub mod region;
pub mod spectral;

pub use error::{Error, Result};
