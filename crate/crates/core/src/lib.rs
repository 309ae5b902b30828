//! Colored PROPs over the rationals: profiles, skeletal bimodules, graph
//! terms, endomorphism PROPs, algebra transfer and the operad bridge.

pub mod bimodule;
pub mod algebra;
pub mod chain;
pub mod endo;
pub mod error;
pub mod format;
pub mod graph;
pub mod matrix;
pub mod operad;
pub mod profile;
pub mod rational;
pub mod samples;

pub use bimodule::{ColoredBimodule, Component};
pub use chain::{ChainComplex, ChainMap, MapClass};
pub use error::{Error, FormatError, Result};
pub use matrix::Matrix;
pub use profile::{Color, OrbitKey, Palette, Permutation, Profile, Side};
pub use rational::Q;
