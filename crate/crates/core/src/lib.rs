pub mod artifact;
pub mod cli;
pub mod cost;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod graph;
pub mod group;
pub mod layers;
pub mod schedule;
pub mod sim;
pub mod words;

pub use error::{Error, Result};
