pub mod algebra;
pub mod certify;
pub mod construct;
pub mod dyadic;
pub mod enumeration;
pub mod error;
pub mod heights;
pub mod modp;
pub mod par;
pub mod poly;
pub mod polyenum;
pub mod realroots;
pub mod report;
pub mod rigor;

pub use error::{Error, Result};
