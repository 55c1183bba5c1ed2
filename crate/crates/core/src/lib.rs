pub mod arith;
pub mod error;
pub mod identities;
pub mod mellin;
pub mod numkernel;
pub mod specfun;
pub mod zetafn;

pub use error::{Error, Result};
pub use numkernel::PrecisionContext;
