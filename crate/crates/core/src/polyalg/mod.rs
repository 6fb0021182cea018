//! Exact dense polynomial and rational-function arithmetic.
//!
//! Coefficient rings are pluggable through [`Coefficient`]: ℚ itself and
//! polynomial rings over it. Bivariate objects in `(z, w)` are `Poly`s in `z`
//! whose coefficients are `Poly`s in `w`.

mod poly;
mod ratfun;
mod rational;

pub use poly::{Coefficient, Poly, Render, WPoly};
pub use ratfun::{rat_equal, RatFun};
pub use rational::{exact_string, format_sci, int, parse_rational, parse_rational_list, rat, to_f64, Rational};
