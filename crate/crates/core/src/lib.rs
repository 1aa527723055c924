//! Soft-decision decoding of Reed-Solomon codes by order statistics with
//! algebraic matching, and successive-cancellation decoding of polar codes
//! with Reed-Solomon kernels built on top of it.

pub mod channel;
pub mod cli;
pub mod construct;
pub mod error;
pub mod gf;
pub mod ops;
pub mod osd;
pub mod polar;
pub mod rs;
pub mod sim;

pub use error::{Error, Result};
pub use gf::{FieldTable, Symbol};
pub use ops::OpCounter;
pub use rs::{CodeKind, RsCode, SystematicMatrix};
