pub mod annotate;
pub mod error;
pub mod kg;
pub mod nlp;
pub mod overview;
pub mod taxonomy;

pub use error::{Error, Result};
