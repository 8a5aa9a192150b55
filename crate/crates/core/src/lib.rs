pub mod bench;
pub mod commands;
pub mod cone;
pub mod error;
pub mod extraction;
pub mod hierarchy;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod sdp;
pub mod support;
pub mod upperbound;

pub use error::{Error, Result};
