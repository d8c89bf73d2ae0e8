use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{CouplingPoly, MultiPoly, Permutation, Rational};
use crate::{Error, Result};

/// A polynomial divided by a product of pair differences,
/// `num / Π_{i<j} (x_i - x_j)^{d_ij}`.
///
/// Pairs are always stored with `i < j`; orientation signs live in the
/// numerator. After reduction no `(x_i - x_j)` with `d_ij > 0` divides the
/// numerator, which makes the representation unique and structural equality
/// the same as equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSection {
    num: MultiPoly,
    den: BTreeMap<(usize, usize), u32>,
}

impl RationalSection {
    pub fn zero(arity: usize) -> Self {
        Self::from_poly(MultiPoly::zero(arity))
    }

    pub fn one(arity: usize) -> Self {
        Self::from_poly(MultiPoly::one(arity))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        Self {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `num / Π (x_i - x_j)^{d}` for arbitrary (possibly unordered) pairs; reduced.
    pub fn new(num: MultiPoly, pairs: impl IntoIterator<Item = ((usize, usize), u32)>) -> Self {
        let mut num = num;
        let mut den = BTreeMap::new();
        for ((i, j), d) in pairs {
            assert_ne!(i, j, "pair difference of a coordinate with itself");
            if d == 0 {
                continue;
            }
            let key = if i < j { (i, j) } else { (j, i) };
            if i > j && d % 2 == 1 {
                num = -num;
            }
            *den.entry(key).or_insert(0) += d;
        }
        Self { num, den }.reduced()
    }

    /// `1 / (x_i - x_j)`.
    pub fn inverse_difference(arity: usize, i: usize, j: usize) -> Self {
        Self::new(MultiPoly::one(arity), [((i, j), 1)])
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    /// Denominator exponents keyed by `(i, j)` with `i < j`; only positive entries.
    pub fn denominator(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn into_poly(self) -> Result<MultiPoly> {
        if self.is_polynomial() {
            Ok(self.num)
        } else {
            Err(Error::NotPolynomial)
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.den
            .iter()
            .all(|(&(i, j), &d)| d > 0 && !self.num.vanishes_on_diagonal(i, j))
            && (!self.num.is_zero() || self.den.is_empty())
    }

    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        for (&(i, j), d) in self.den.iter_mut() {
            while *d > 0 && self.num.vanishes_on_diagonal(i, j) {
                let (q, rem) = self.num.div_rem_difference(i, j);
                debug_assert!(rem.is_zero());
                self.num = q;
                *d -= 1;
            }
        }
        self.den.retain(|_, d| *d > 0);
        self
    }

    /// Reduces an arbitrary representation (idempotent on reduced input).
    pub fn reduce(&self) -> Self {
        self.clone().reduced()
    }

    /// Numerator over a given larger denominator.
    fn lift(&self, den: &BTreeMap<(usize, usize), u32>) -> MultiPoly {
        let n = self.arity();
        let mut num = self.num.clone();
        for (&(i, j), &d) in den {
            let have = self.den.get(&(i, j)).copied().unwrap_or(0);
            debug_assert!(have <= d);
            if d > have {
                num = &num * &MultiPoly::difference(n, i, j).pow(d - have);
            }
        }
        num
    }

    /// Sum of many sections with a single reduction at the end.
    pub fn sum<'a>(arity: usize, items: impl IntoIterator<Item = &'a RationalSection>) -> Self {
        let items: Vec<&RationalSection> = items.into_iter().filter(|s| !s.is_zero()).collect();
        let mut den: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for s in &items {
            assert_eq!(s.arity(), arity, "arity mismatch");
            for (&k, &d) in &s.den {
                let e = den.entry(k).or_insert(0);
                *e = (*e).max(d);
            }
        }
        let mut num = MultiPoly::zero(arity);
        for s in &items {
            num = &num + &s.lift(&den);
        }
        Self { num, den }.reduced()
    }

    pub fn scale(&self, c: &CouplingPoly) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .reduced()
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&CouplingPoly::constant(r.clone()))
    }

    /// Multiplies by `(x_i - x_j)^{-power}`.
    pub fn div_difference(&self, i: usize, j: usize, power: u32) -> Self {
        let mut pairs: Vec<_> = self.den.iter().map(|(&k, &d)| (k, d)).collect();
        pairs.push(((i, j), power));
        Self::new(self.num.clone(), pairs)
    }

    /// Exact `∂_k` by the quotient rule.
    pub fn partial(&self, k: usize) -> Self {
        let n = self.arity();
        let involved: Vec<((usize, usize), u32)> = self
            .den
            .iter()
            .filter(|(&(i, j), _)| i == k || j == k)
            .map(|(&p, &d)| (p, d))
            .collect();
        if involved.is_empty() {
            return Self {
                num: self.num.partial(k),
                den: self.den.clone(),
            };
        }
        let factors: Vec<MultiPoly> = involved
            .iter()
            .map(|&((i, j), _)| MultiPoly::difference(n, i, j))
            .collect();
        let product_except = |skip: Option<usize>| {
            factors
                .iter()
                .enumerate()
                .filter(|&(q, _)| Some(q) != skip)
                .fold(MultiPoly::one(n), |acc, (_, f)| &acc * f)
        };
        let mut num = &self.num.partial(k) * &product_except(None);
        for (q, &((i, _), d)) in involved.iter().enumerate() {
            // ∂_k (x_i - x_j) = +1 if k == i, -1 if k == j
            let sign = if i == k { 1 } else { -1 };
            let coeff = Rational::from_integer((sign * d as i64).into());
            num = &num - &(&self.num * &product_except(Some(q))).scale_rational(&coeff);
        }
        let mut den = self.den.clone();
        for &(p, _) in &involved {
            *den.get_mut(&p).expect("present") += 1;
        }
        Self { num, den }.reduced()
    }

    /// `σ·f = f(x_{σ(1)}, ..., x_{σ(N)})`.
    pub fn permute(&self, sigma: &Permutation) -> Self {
        let mut num = self.num.permute(sigma);
        let mut den = BTreeMap::new();
        let mut odd = false;
        for (&(i, j), &d) in &self.den {
            let (a, b) = (sigma.apply(i), sigma.apply(j));
            if a > b {
                odd ^= d % 2 == 1;
                den.insert((b, a), d);
            } else {
                den.insert((a, b), d);
            }
        }
        if odd {
            num = -num;
        }
        Self { num, den }
    }

    /// Exact value at a point with the coupling set to `coupling`.
    pub fn evaluate(&self, point: &[Rational], coupling: &Rational) -> Result<Rational> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: point.len(),
            });
        }
        let mut den = Rational::from_integer(1.into());
        for (&(i, j), &d) in &self.den {
            let diff = &point[i] - &point[j];
            if diff.is_zero() {
                return Err(Error::Pole { i, j });
            }
            for _ in 0..d {
                den *= &diff;
            }
        }
        Ok(self.num.eval(point, coupling) / den)
    }

    /// Specializes the formal coupling to a rational value.
    pub fn specialize(&self, coupling: &Rational) -> Self {
        Self {
            num: self.num.specialize(coupling),
            den: self.den.clone(),
        }
        .reduced()
    }

    /// The coefficient of `c^power`, as a section over the same denominator.
    pub fn coupling_component(&self, power: usize) -> Self {
        Self {
            num: self.num.coupling_component(power),
            den: self.den.clone(),
        }
        .reduced()
    }

    pub fn coupling_degree(&self) -> Option<usize> {
        self.num.coupling_degree()
    }

    pub(crate) fn from_raw_parts(num: MultiPoly, den: BTreeMap<(usize, usize), u32>) -> Self {
        Self { num, den }.reduced()
    }
}

impl From<MultiPoly> for RationalSection {
    fn from(p: MultiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RationalSection {
    type Output = RationalSection;

    fn add(self, rhs: &RationalSection) -> RationalSection {
        RationalSection::sum(self.arity(), [self, rhs])
    }
}

impl Sub for &RationalSection {
    type Output = RationalSection;

    fn sub(self, rhs: &RationalSection) -> RationalSection {
        self + &(-rhs)
    }
}

impl Neg for &RationalSection {
    type Output = RationalSection;

    fn neg(self) -> RationalSection {
        RationalSection {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalSection {
    type Output = RationalSection;

    fn mul(self, rhs: &RationalSection) -> RationalSection {
        let mut den = self.den.clone();
        for (&k, &d) in &rhs.den {
            *den.entry(k).or_insert(0) += d;
        }
        RationalSection {
            num: &self.num * &rhs.num,
            den,
        }
        .reduced()
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RationalSection {
            type Output = RationalSection;
            fn $m(self, rhs: RationalSection) -> RationalSection {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for RationalSection {
    type Output = RationalSection;

    fn neg(self) -> RationalSection {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn x(n: usize, i: usize) -> RationalSection {
        MultiPoly::var(n, i).into()
    }

    fn inv(n: usize, i: usize, j: usize) -> RationalSection {
        RationalSection::inverse_difference(n, i, j)
    }

    #[test]
    fn derivative_of_square() {
        let f: RationalSection = MultiPoly::monomial(&[2, 0]).into();
        let want: RationalSection = MultiPoly::var(2, 0).scale_rational(&rat(2, 1)).into();
        assert_eq!(f.partial(0), want);
    }

    #[test]
    fn quotient_rule_on_inverse_difference() {
        // ∂1 1/(x1-x2) = -1/(x1-x2)^2
        let got = inv(2, 0, 1).partial(0);
        let want = RationalSection::new(MultiPoly::rational(2, rat(-1, 1)), [((0, 1), 2)]);
        assert_eq!(got, want);
    }

    #[test]
    fn quotient_rule_with_numerator() {
        // ∂1 [x2/(x1-x2)] = -x2/(x1-x2)^2
        let f = &x(2, 1) * &inv(2, 0, 1);
        let want = RationalSection::new(-MultiPoly::var(2, 1), [((0, 1), 2)]);
        assert_eq!(f.partial(0), want);
    }

    #[test]
    fn swap_acts_on_coordinates_and_differences() {
        let s = Permutation::transposition(2, 0, 1);
        assert_eq!(x(2, 0).permute(&s), x(2, 1));
        assert_eq!(inv(2, 0, 1).permute(&s), -inv(2, 0, 1));
    }

    #[test]
    fn fusion_on_a_monomial() {
        let n = 3;
        let f: RationalSection = MultiPoly::monomial(&[1, 2, 3]).into();
        let s = |i, j| Permutation::transposition(n, i, j);
        let lhs = f.permute(&s(1, 2)).permute(&s(0, 1));
        let rhs = f.permute(&s(0, 1)).permute(&s(0, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_and_poles() {
        let f = &x(2, 0) * &inv(2, 0, 1);
        assert_eq!(
            f.evaluate(&[rat(1, 1), rat(3, 1)], &rat(0, 1)).unwrap(),
            rat(-1, 2)
        );
        assert_eq!(
            f.evaluate(&[rat(2, 1), rat(2, 1)], &rat(0, 1)),
            Err(Error::Pole { i: 0, j: 1 })
        );
        // 1 + c x2/(x1-x2) at (0,1), c = 2
        let g = &RationalSection::one(2) + &(&x(2, 1) * &inv(2, 0, 1)).scale(&CouplingPoly::var());
        assert_eq!(
            g.evaluate(&[rat(0, 1), rat(1, 1)], &rat(2, 1)).unwrap(),
            rat(-1, 1)
        );
    }

    #[test]
    fn reduction_cancels_common_factors() {
        let num = &MultiPoly::difference(3, 0, 2) * &MultiPoly::var(3, 1);
        let s = RationalSection::new(num, [((2, 0), 2)]);
        // (x1-x3) x2 / (x3-x1)^2 = x2/(x1-x3)
        let want = RationalSection::new(MultiPoly::var(3, 1), [((0, 2), 1)]);
        assert_eq!(s, want);
        assert!(s.is_reduced());
        assert!((&s - &s).is_zero());
        assert!((&s - &s).denominator().is_empty());
    }

    #[test]
    fn partial_fraction_identity() {
        // 1/((x1-x2)(x2-x3)) + 1/((x2-x3)(x3-x1)) + 1/((x3-x1)(x1-x2)) = 0
        let n = 3;
        let t = |a, b, c, d| &inv(n, a, b) * &inv(n, c, d);
        let total = RationalSection::sum(n, [&t(0, 1, 1, 2), &t(1, 2, 2, 0), &t(2, 0, 0, 1)]);
        assert!(total.is_zero());
    }

    #[test]
    fn non_polynomial_detection() {
        assert_eq!(inv(2, 0, 1).into_poly(), Err(Error::NotPolynomial));
    }
}
