pub mod arrangement;
pub mod cech;
pub mod cli;
pub mod diagonal;
pub mod error;
pub mod fan;
pub mod io;
pub mod lattice;
pub mod morita;
pub mod pipeline;
pub mod properties;
pub mod rational;
pub mod resolution;

pub use error::{Error, ErrorKind, Result};
