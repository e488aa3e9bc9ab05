//! Focus-focus model neighborhoods, their fiberwise addition law, the
//! immersed addition graph, and a numerical verification suite.

pub mod error;
pub mod graph;
pub mod group;
pub mod model;
pub mod neighborhood;
pub mod verify;

pub use error::{Error, Result};
