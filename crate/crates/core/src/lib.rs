pub mod error;
pub mod funcfield;
pub mod gf;
pub mod gsdecoder;
pub(crate) mod linalg;
pub mod polmat;
pub mod upoly;

pub use error::{Error, Result};
