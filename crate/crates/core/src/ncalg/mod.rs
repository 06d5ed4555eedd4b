//! Exact noncommutative series algebra.
//!
//! Series are truncated at a fixed total degree and carry coefficients from
//! any [`Coeff`] ring: exact rationals, multivariate polynomials over the
//! rationals (for symbolic scheme parameters) or `f64` for numeric checks of
//! schemes whose coefficients are irrational.

pub mod analysis;
mod coeff;
mod json;
mod lie;
mod poly;
mod rational;
mod series;
mod word;

pub use coeff::Coeff;
pub use json::{coeff_from_json, coeff_to_json, CoeffJson};
pub use lie::{lie_project, lie_project_approx, Bracket, LieCombination};
pub use poly::{Monomial, Poly};
pub use rational::{format_rational, parse_rational, rational_from_f64, rational_to_f64, Rational};
pub use series::{
    product_log, series_exp, series_log, series_mul, stage_exp, stage_product, NcSeries, StageGenerator,
};
pub use word::{is_lyndon, lyndon_words, standard_factorization, Word};
