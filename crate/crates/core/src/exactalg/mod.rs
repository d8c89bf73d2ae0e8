//! Exact arithmetic: rationals, coupling polynomials, sparse multivariate
//! polynomials, rational sections with pair-difference denominators, and the
//! symmetric-group action on all of them.
//!
//! Everything here is immutable value arithmetic over arbitrary-precision
//! rationals; nothing rounds.

mod multipoly;
mod perm;
mod section;
mod text;
mod unipoly;

pub use multipoly::{poly_arith, Monomial, MultiPoly, PolyOp};
pub use perm::Permutation;
pub use section::RationalSection;
pub use unipoly::{CouplingPoly, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    let s = s.trim();
    let bad = || crate::Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Converts a finite double to the exact rational it represents.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
