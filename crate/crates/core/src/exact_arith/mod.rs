//! Exact rationals and cyclotomic numbers.

mod cyclotomic;
mod poly;
mod rational;

pub use cyclotomic::{CycloField, Cyclotomic, CyclotomicRepr};
pub use poly::cyclotomic_polynomial;
pub use rational::{format_rational, parse_rational, ratio, rational, Rational};
