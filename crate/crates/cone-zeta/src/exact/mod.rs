//! Exact symbolic arithmetic: Laurent polynomials in the Lefschetz symbol
//! `L`, sums of geometric-series terms in `T = L^-s`, univariate rational
//! functions over `Q`, and rational functions in the topological variable
//! `s` with factored linear denominators.

mod laurent;
mod motivic;
mod qpoly;
mod ratfun_s;

pub(crate) use laurent::rational_pow;
pub use laurent::LaurentPoly;
pub use motivic::{mr_equal, mr_series, mr_specialize, MotivicRational, MotivicTerm};
pub use qpoly::{QPoly, RationalFunctionT};
pub use ratfun_s::RationalFunctionS;
