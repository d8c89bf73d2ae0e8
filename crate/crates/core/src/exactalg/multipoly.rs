use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{CouplingPoly, Permutation, Rational};
use crate::{Error, Result};

/// Exponent vector of a monomial `x_1^{e_1} ... x_N^{e_N}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponents after `x_i ↦ x_{σ(i)}`: the exponent of `x_i` moves to slot `σ(i)`.
    pub fn permuted(&self, sigma: &Permutation) -> Monomial {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[sigma.apply(i)] = e;
        }
        Monomial(out)
    }

    /// All monomials in `arity` variables with total degree `<= max_degree`,
    /// ordered by degree then lexicographically.
    pub fn up_to_degree(arity: usize, max_degree: u32) -> Vec<Monomial> {
        fn rec(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if slot + 1 == cur.len() {
                cur[slot] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[slot] = e;
                rec(slot + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut cur = vec![0; arity];
            rec(0, d, &mut cur, &mut out);
        }
        out
    }
}

/// Sparse polynomial in `x_1..x_N` with [`CouplingPoly`] coefficients.
///
/// No stored coefficient is zero, and every key has length `arity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, CouplingPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Checked ring operation; fails on arity mismatch.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch {
            left: a.arity,
            right: b.arity,
        });
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Mul => a * b,
    })
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, CouplingPoly::one())
    }

    pub fn constant(arity: usize, c: CouplingPoly) -> Self {
        Self::term(Monomial::one(arity), c)
    }

    pub fn rational(arity: usize, value: Rational) -> Self {
        Self::constant(arity, CouplingPoly::constant(value))
    }

    /// The coordinate `x_i` (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        Self::term(Monomial::var(arity, i), CouplingPoly::one())
    }

    /// `x_i - x_j`.
    pub fn difference(arity: usize, i: usize, j: usize) -> Self {
        &Self::var(arity, i) - &Self::var(arity, j)
    }

    pub fn term(m: Monomial, c: CouplingPoly) -> Self {
        let arity = m.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { arity, terms }
    }

    pub fn monomial(exps: &[u32]) -> Self {
        Self::term(Monomial(exps.to_vec()), CouplingPoly::one())
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Monomial, CouplingPoly)>,
    ) -> Self {
        let mut out = Self::zero(arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity");
            out.add_term(m, c);
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CouplingPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest power of the coupling appearing in any coefficient.
    pub fn coupling_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(CouplingPoly::degree).max()
    }

    pub fn coeff(&self, m: &Monomial) -> CouplingPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: CouplingPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &CouplingPoly) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Self {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&CouplingPoly::constant(r.clone()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one(self.arity);
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Exact `∂_k`.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[k] -= 1;
            out.add_term(d, c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// `f(x_{σ(1)}, ..., x_{σ(N)})`.
    pub fn permute(&self, sigma: &Permutation) -> Self {
        assert_eq!(sigma.len(), self.arity, "permutation degree");
        Self {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permuted(sigma), c.clone()))
                .collect(),
        }
    }

    /// Image of `x_i ↦ x_j` (the restriction to the hyperplane `x_i = x_j`).
    pub fn identify(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            e.0[j] += e.0[i];
            e.0[i] = 0;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Whether `x_i - x_j` divides this polynomial exactly.
    pub fn vanishes_on_diagonal(&self, i: usize, j: usize) -> bool {
        self.identify(i, j).is_zero()
    }

    /// Quotient and remainder of division by `x_i - x_j`, treating the
    /// polynomial as univariate in `x_i` (synthetic division). The remainder
    /// is free of `x_i`.
    pub fn div_rem_difference(&self, i: usize, j: usize) -> (Self, Self) {
        // group by the power of x_i, highest first
        let mut by_power: BTreeMap<u32, Vec<(Monomial, CouplingPoly)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = std::mem::take(&mut rest.0[i]);
            by_power.entry(e).or_default().push((rest, c.clone()));
        }
        let Some(&top) = by_power.keys().next_back() else {
            return (Self::zero(self.arity), Self::zero(self.arity));
        };
        let mut quotient = Self::zero(self.arity);
        // carry = B_e, the coefficient of x_i^e in the quotient, as a poly free of x_i
        let mut carry = Self::zero(self.arity);
        for e in (1..=top).rev() {
            let mut a_e = Self::from_terms(self.arity, by_power.remove(&e).unwrap_or_default());
            a_e = &a_e + &carry.shift(j, 1);
            for (m, c) in &a_e.terms {
                let mut t = m.clone();
                t.0[i] = e - 1;
                quotient.add_term(t, c.clone());
            }
            carry = a_e;
        }
        let a0 = Self::from_terms(self.arity, by_power.remove(&0).unwrap_or_default());
        let remainder = &a0 + &carry.shift(j, 1);
        (quotient, remainder)
    }

    /// Multiplies by `x_k^by`.
    pub fn shift(&self, k: usize, by: u32) -> Self {
        Self {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut t = m.clone();
                    t.0[k] += by;
                    (t, c.clone())
                })
                .collect(),
        }
    }

    /// Simultaneous substitution `x_k ↦ images[k]` (every image has the same arity).
    pub fn substitute(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.arity, "one image per variable");
        let arity = images.first().map_or(self.arity, MultiPoly::arity);
        let mut powers: Vec<Vec<MultiPoly>> =
            images.iter().map(|g| vec![Self::one(g.arity)]).collect();
        let mut out = Self::zero(arity);
        for (m, c) in &self.terms {
            let mut t = Self::constant(arity, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().expect("nonempty") * &images[k];
                    powers[k].push(next);
                }
                if e > 0 {
                    t = &t * &powers[k][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact value at a rational point with a rational coupling.
    pub fn eval(&self, point: &[Rational], coupling: &Rational) -> Rational {
        assert_eq!(point.len(), self.arity, "point dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.eval(coupling);
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v *= x;
                }
            }
            acc += v;
        }
        acc
    }

    /// Specializes the coupling to a rational value.
    pub fn specialize(&self, coupling: &Rational) -> Self {
        Self::from_terms(
            self.arity,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), CouplingPoly::constant(c.eval(coupling)))),
        )
    }

    /// The part of each coefficient multiplying `c^power`.
    pub fn coupling_component(&self, power: usize) -> Self {
        Self::from_terms(
            self.arity,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), CouplingPoly::constant(c.coeff(power)))),
        )
    }

    pub fn is_constant_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.degree() == 0 && c.is_one())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = MultiPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}
