use std::collections::BTreeMap;

use num_integer::binomial;

use super::{DunklContext, Symmetry};
use crate::exactalg::{rat, Monomial, Permutation, RationalSection};

/// Operator `Σ a_{α,w}(x) ∂^α w` in normal form: coefficient left, derivatives
/// in the middle, permutation rightmost.
///
/// Composition moves permutations right with `w a = (w·a) w` and
/// `w ∂_i = ∂_{w(i)} w`, and derivatives right with the Leibniz rule.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionOperator {
    n: usize,
    terms: BTreeMap<(Monomial, Permutation), RationalSection>,
}

impl ReflectionOperator {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    fn single(n: usize, deriv: Monomial, w: Permutation, coeff: RationalSection) -> Self {
        let mut op = Self::zero(n);
        op.add_term(deriv, w, coeff);
        op
    }

    pub fn identity(n: usize) -> Self {
        Self::single(
            n,
            Monomial::one(n),
            Permutation::identity(n),
            RationalSection::one(n),
        )
    }

    pub fn partial(n: usize, k: usize) -> Self {
        Self::single(
            n,
            Monomial::var(n, k),
            Permutation::identity(n),
            RationalSection::one(n),
        )
    }

    pub fn multiplication(coeff: RationalSection) -> Self {
        let n = coeff.arity();
        Self::single(n, Monomial::one(n), Permutation::identity(n), coeff)
    }

    pub fn reflection(w: Permutation) -> Self {
        let n = w.len();
        Self::single(n, Monomial::one(n), w, RationalSection::one(n))
    }

    /// `∇_k` in normal form.
    pub fn dunkl(ctx: &DunklContext, k: usize) -> Self {
        let n = ctx.n();
        let mut op = Self::partial(n, k);
        for i in (0..n).filter(|&i| i != k) {
            let coeff = RationalSection::inverse_difference(n, i, k).scale(&-ctx.coupling());
            op.add_term(Monomial::one(n), Permutation::transposition(n, i, k), coeff);
        }
        op
    }

    /// `Σ_i ∇_i²` in normal form.
    pub fn sum_of_squares(ctx: &DunklContext) -> Self {
        (0..ctx.n()).fold(Self::zero(ctx.n()), |acc, i| {
            let d = Self::dunkl(ctx, i);
            acc.add(&d.compose(&d))
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Permutation, &RationalSection)> {
        self.terms.iter().map(|((d, w), a)| (d, w, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, deriv: Monomial, w: Permutation, coeff: RationalSection) {
        if coeff.is_zero() {
            return;
        }
        let key = (deriv, w);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((d, w), a) in &other.terms {
            out.add_term(d.clone(), w.clone(), a.clone());
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for ((alpha, w), a) in &self.terms {
            for ((beta, v), b) in &other.terms {
                let moved = b.permute(w);
                let beta_w = beta.permuted(w);
                let wv = w.compose(v);
                for (gamma, weight) in sub_indices(alpha) {
                    let mut db = moved.clone();
                    for (i, &g) in gamma.exps().iter().enumerate() {
                        for _ in 0..g {
                            db = db.partial(i);
                        }
                    }
                    if db.is_zero() {
                        continue;
                    }
                    let rest = Monomial(
                        alpha
                            .exps()
                            .iter()
                            .zip(gamma.exps())
                            .zip(beta_w.exps())
                            .map(|((a, g), b)| a - g + b)
                            .collect(),
                    );
                    let coeff = (a * &db).scale_rational(&rat(weight, 1));
                    out.add_term(rest, wv.clone(), coeff);
                }
            }
        }
        out
    }

    /// Replaces every rightmost permutation by its value on functions of the
    /// given symmetry type, leaving a pure differential operator.
    pub fn restrict(&self, sym: Symmetry) -> Self {
        let mut out = Self::zero(self.n);
        let id = Permutation::identity(self.n);
        for ((d, w), a) in &self.terms {
            out.add_term(
                d.clone(),
                id.clone(),
                a.scale_rational(&rat(sym.character(w), 1)),
            );
        }
        out
    }

    pub fn apply(&self, f: &RationalSection) -> RationalSection {
        let parts: Vec<RationalSection> = self
            .terms
            .iter()
            .map(|((d, w), a)| {
                let mut g = f.permute(w);
                for (i, &e) in d.exps().iter().enumerate() {
                    for _ in 0..e {
                        g = g.partial(i);
                    }
                }
                a * &g
            })
            .collect();
        RationalSection::sum(self.n, &parts)
    }
}

/// All `γ ≤ α` with the multinomial Leibniz weight `Π binom(α_i, γ_i)`.
fn sub_indices(alpha: &Monomial) -> Vec<(Monomial, i64)> {
    let mut out = vec![(Vec::new(), 1i64)];
    for &a in alpha.exps() {
        out = out
            .into_iter()
            .flat_map(|(prefix, w)| {
                (0..=a).map(move |g| {
                    let mut p = prefix.clone();
                    p.push(g);
                    (p, w * binomial(a as i64, g as i64))
                })
            })
            .collect();
    }
    out.into_iter().map(|(g, w)| (Monomial(g), w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dunkl::{apply_dunkl, sum_of_squares};
    use crate::exactalg::MultiPoly;

    #[test]
    fn normal_form_agrees_with_direct_application() {
        let ctx = DunklContext::new(3, 3).unwrap();
        let op = ReflectionOperator::sum_of_squares(&ctx);
        for f in ctx.spanning_set() {
            assert_eq!(op.apply(&f), sum_of_squares(&ctx, &f));
        }
        let d1 = ReflectionOperator::dunkl(&ctx, 1);
        let f: RationalSection = MultiPoly::monomial(&[1, 2, 0]).into();
        assert_eq!(d1.apply(&f), apply_dunkl(&ctx, 1, &f));
    }

    #[test]
    fn normal_form_of_sum_of_squares_has_no_three_cycles_or_first_order_exchange() {
        let ctx = DunklContext::new(3, 1).unwrap();
        let op = ReflectionOperator::sum_of_squares(&ctx);
        for (d, w, _) in op.terms() {
            // identity with second derivatives, transpositions with no derivatives
            if w.is_identity() {
                assert!(d.degree() == 2 || d.degree() == 0);
            } else {
                assert_eq!(w.sign(), -1);
                assert_eq!(d.degree(), 0);
            }
        }
    }

    #[test]
    fn reflection_commutes_past_derivative() {
        let n = 3;
        let w = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let lhs =
            ReflectionOperator::reflection(w.clone()).compose(&ReflectionOperator::partial(n, 0));
        let rhs =
            ReflectionOperator::partial(n, w.apply(0)).compose(&ReflectionOperator::reflection(w));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_weights() {
        let w: Vec<i64> = sub_indices(&Monomial(vec![2, 1]))
            .into_iter()
            .map(|(_, w)| w)
            .collect();
        assert_eq!(w, vec![1, 1, 2, 2, 1, 1]);
        assert!(ReflectionOperator::identity(2)
            .compose(&ReflectionOperator::zero(2))
            .is_zero());
    }
}
