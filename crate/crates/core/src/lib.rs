#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod chordfun;
pub mod config;
pub mod curve;
pub mod electro;
pub mod error;
pub mod leakywire;
pub mod quad;
pub mod roots;
pub mod search;
pub mod specfun;

pub use error::{Error, Result};
