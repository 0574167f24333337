//! Highly regular graphs from adorned Coxeter diagrams.

pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod graph;
pub mod group;
pub mod iso;
pub mod linrep;
pub mod numring;
pub mod predict;
pub mod products;
pub mod quotient;
pub mod skeleton;
pub mod spectral;

pub use error::{Error, Result};
