//! Canonical text form used in JSON reports.
//!
//! ```text
//! N=2: 1*c^0*x1^1*x2^0 + -3/2*c^1*x1^0*x2^2 / (x1-x2)^2
//! ```
//!
//! Terms are sorted by exponent vector, then by coupling power; every
//! exponent is explicit; coordinates are 1-based. An empty numerator prints
//! as `0` and an empty denominator as `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::{parse_rational, CouplingPoly, Monomial, MultiPoly, RationalSection};
use crate::{Error, Result};

fn write_terms(f: &mut fmt::Formatter<'_>, p: &MultiPoly) -> fmt::Result {
    let mut first = true;
    for (m, c) in p.terms() {
        for (k, coeff) in c.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{coeff}*c^{k}")?;
            for (i, e) in m.exps().iter().enumerate() {
                write!(f, "*x{}^{e}", i + 1)?;
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}: ", self.arity())?;
        write_terms(f, self)
    }
}

impl fmt::Display for RationalSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}: ", self.arity())?;
        write_terms(f, self.numerator())?;
        f.write_str(" / ")?;
        if self.denominator().is_empty() {
            return f.write_str("1");
        }
        for (k, (&(i, j), d)) in self.denominator().iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "(x{}-x{})^{d}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_power(s: &str, base: &str) -> Result<u32> {
    let rest = s
        .strip_prefix(base)
        .and_then(|r| r.strip_prefix('^'))
        .ok_or_else(|| perr(format!("expected `{base}^e`, got `{s}`")))?;
    rest.parse()
        .map_err(|_| perr(format!("bad exponent in `{s}`")))
}

fn parse_header(s: &str) -> Result<(usize, &str)> {
    let rest = s
        .trim()
        .strip_prefix("N=")
        .ok_or_else(|| perr("missing `N=` header"))?;
    let (n, body) = rest
        .split_once(':')
        .ok_or_else(|| perr("missing `:` after N"))?;
    let n: usize = n.trim().parse().map_err(|_| perr("bad N"))?;
    if n == 0 {
        return Err(perr("N must be positive"));
    }
    Ok((n, body.trim()))
}

fn parse_terms(n: usize, body: &str) -> Result<MultiPoly> {
    let body = body.trim();
    if body == "0" {
        return Ok(MultiPoly::zero(n));
    }
    let mut terms = Vec::new();
    for term in body.split(" + ") {
        let mut factors = term.trim().split('*');
        let coeff = parse_rational(factors.next().ok_or_else(|| perr("empty term"))?)?;
        let cpow = parse_power(factors.next().ok_or_else(|| perr("missing c^k"))?, "c")? as usize;
        let mut exps = Vec::with_capacity(n);
        for i in 0..n {
            let tok = factors
                .next()
                .ok_or_else(|| perr(format!("missing x{}", i + 1)))?;
            exps.push(parse_power(tok, &format!("x{}", i + 1))?);
        }
        if factors.next().is_some() {
            return Err(perr(format!("too many factors in `{term}`")));
        }
        terms.push((Monomial(exps), CouplingPoly::monomial(coeff, cpow)));
    }
    Ok(MultiPoly::from_terms(n, terms))
}

fn parse_coordinate(s: &str, n: usize) -> Result<usize> {
    let i: usize = s
        .strip_prefix('x')
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(format!("bad coordinate `{s}`")))?;
    if i == 0 || i > n {
        return Err(perr(format!("coordinate `{s}` out of range")));
    }
    Ok(i - 1)
}

impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = parse_header(s)?;
        parse_terms(n, body)
    }
}

impl FromStr for RationalSection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = parse_header(s)?;
        let (num, den) = body
            .rsplit_once(" / ")
            .ok_or_else(|| perr("missing ` / `"))?;
        let num = parse_terms(n, num)?;
        let mut pairs = BTreeMap::new();
        if den.trim() != "1" {
            for factor in den.trim().split('*') {
                let (pair, d) = factor
                    .strip_prefix('(')
                    .and_then(|r| r.split_once(")^"))
                    .ok_or_else(|| perr(format!("bad factor `{factor}`")))?;
                let (a, b) = pair
                    .split_once('-')
                    .ok_or_else(|| perr(format!("bad pair `{pair}`")))?;
                let (i, j) = (parse_coordinate(a, n)?, parse_coordinate(b, n)?);
                if i >= j {
                    return Err(perr(format!("pair `{pair}` not in canonical order")));
                }
                let d: u32 = d
                    .parse()
                    .map_err(|_| perr(format!("bad power in `{factor}`")))?;
                pairs.insert((i, j), d);
            }
        }
        Ok(RationalSection::from_raw_parts(num, pairs))
    }
}
