pub mod check;
pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod finite_field;
pub mod gdd;
pub mod gh_aux;
pub mod incidence;
pub mod int_linalg;
pub mod intro;
pub mod latin;
pub mod report;
pub mod scheme;
pub mod twin;

pub use error::{Error, Result};
