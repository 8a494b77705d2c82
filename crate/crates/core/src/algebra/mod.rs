//! Arithmetic in F_b, F_b[x] and truncated F_b((x^{-1})).

mod field;
mod poly;
mod series;
mod text;

pub use field::Field;
pub use poly::{Deg, Poly};
pub use series::{BaseFraction, Series, EXACT_DIVISION_CAP};

