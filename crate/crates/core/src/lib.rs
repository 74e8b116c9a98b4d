pub mod compare;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod pipeline;
pub mod quadrature;
pub mod radial;
pub mod rearrange;

pub use error::{Error, Result};
