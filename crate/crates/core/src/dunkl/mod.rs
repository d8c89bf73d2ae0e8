//! Dunkl operators `∇_k = ∂_k - c Σ_{i≠k} (x_i - x_k)^{-1} P_{ik}`, the
//! Calogero Hamiltonian, and exact checks of the operator identities they
//! satisfy.
//!
//! The coupling is carried as a [`CouplingPoly`]; the default context uses
//! the formal variable `c`, so one run certifies an identity for every
//! coupling at once. A numeric coupling is just a constant polynomial.

mod opalg;
mod suite;

pub use opalg::ReflectionOperator;
pub use suite::{
    run_all, run_intertwining, run_permutation_relations, run_restriction, run_sum_of_squares,
    run_zero_curvature, Suite, SuiteReport,
};

use serde::{Deserialize, Serialize};

use crate::exactalg::{rat, CouplingPoly, Monomial, MultiPoly, Permutation, RationalSection};
use crate::{Error, Result};

/// Particle count, size of the test spanning set, and coupling.
#[derive(Clone, Debug, PartialEq)]
pub struct DunklContext {
    n: usize,
    basis_degree: u32,
    coupling: CouplingPoly,
}

impl DunklContext {
    /// Context with the formal coupling `c`.
    pub fn new(n: usize, basis_degree: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "N must be at least 2, got {n}"
            )));
        }
        if basis_degree < 1 {
            return Err(Error::InvalidArgument(
                "basis degree must be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            basis_degree,
            coupling: CouplingPoly::var(),
        })
    }

    /// Default spanning-set degree: 6 for `N ≤ 3`, 4 for larger `N`.
    pub fn with_default_degree(n: usize) -> Result<Self> {
        Self::new(n, if n <= 3 { 6 } else { 4 })
    }

    pub fn with_coupling(mut self, coupling: CouplingPoly) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_degree(&self) -> u32 {
        self.basis_degree
    }

    pub fn coupling(&self) -> &CouplingPoly {
        &self.coupling
    }

    /// True when the coupling is the formal variable `c`.
    pub fn is_formal(&self) -> bool {
        self.coupling == CouplingPoly::var()
    }

    /// All monomials of total degree `≤ basis_degree`.
    pub fn spanning_set(&self) -> Vec<RationalSection> {
        Monomial::up_to_degree(self.n, self.basis_degree)
            .into_iter()
            .map(|m| MultiPoly::term(m, CouplingPoly::one()).into())
            .collect()
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n {
            Err(Error::IndexOutOfRange {
                index: k,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }
}

/// `Σ_{i≠k} (x_i - x_k)^{-1} P_{ik} f`: the exchange part of `∇_k` without
/// the coupling.
pub fn exchange_part(n: usize, k: usize, f: &RationalSection) -> RationalSection {
    let terms: Vec<RationalSection> = (0..n)
        .filter(|&i| i != k)
        .map(|i| {
            f.permute(&Permutation::transposition(n, i, k))
                .div_difference(i, k, 1)
        })
        .collect();
    RationalSection::sum(n, &terms)
}

/// `∇_k f`.
pub fn apply_dunkl(ctx: &DunklContext, k: usize, f: &RationalSection) -> RationalSection {
    assert!(k < ctx.n, "coordinate index out of range");
    let exchange = exchange_part(ctx.n, k, f).scale(&ctx.coupling);
    &f.partial(k) - &exchange
}

/// `(∇_j ∇_k - ∇_k ∇_j) f`.
pub fn commutator_dunkl(
    ctx: &DunklContext,
    j: usize,
    k: usize,
    f: &RationalSection,
) -> Result<RationalSection> {
    ctx.check_index(j)?;
    ctx.check_index(k)?;
    if j == k {
        return Err(Error::InvalidArgument("commutator needs j ≠ k".into()));
    }
    let jk = apply_dunkl(ctx, j, &apply_dunkl(ctx, k, f));
    let kj = apply_dunkl(ctx, k, &apply_dunkl(ctx, j, f));
    Ok(&jk - &kj)
}

/// The coupling-graded pieces of the commutator, computed independently of
/// [`commutator_dunkl`]. Writing `∇_k = ∂_k - c A_k`:
///
/// `[∇_j, ∇_k] = c·(-[∂_j, A_k] + [∂_k, A_j]) + c²·[A_j, A_k]`.
///
/// Returns `(first, second)` so that the commutator equals
/// `c·first + c²·second`.
pub fn commutator_graded(
    n: usize,
    j: usize,
    k: usize,
    f: &RationalSection,
) -> (RationalSection, RationalSection) {
    let a = |m: usize, g: &RationalSection| exchange_part(n, m, g);
    let d_a = |d: usize, m: usize| &a(m, f).partial(d) - &a(m, &f.partial(d));
    let first = &d_a(k, j) - &d_a(j, k);
    let second = &a(j, &a(k, f)) - &a(k, &a(j, f));
    (first, second)
}

/// Residual of the intertwining relations.
///
/// With `l == k`: `(P_{jk} ∇_k - ∇_j P_{jk}) f`; with `l == j`:
/// `(P_{jk} ∇_j - ∇_k P_{jk}) f`; otherwise `(P_{jk} ∇_l - ∇_l P_{jk}) f`.
pub fn verify_intertwining(
    ctx: &DunklContext,
    j: usize,
    l: usize,
    k: usize,
    f: &RationalSection,
) -> Result<RationalSection> {
    for idx in [j, l, k] {
        ctx.check_index(idx)?;
    }
    if j == k {
        return Err(Error::InvalidArgument("P_jk needs j ≠ k".into()));
    }
    let p = Permutation::transposition(ctx.n, j, k);
    let (left_index, right_index) = if l == k {
        (k, j)
    } else if l == j {
        (j, k)
    } else {
        (l, l)
    };
    let lhs = apply_dunkl(ctx, left_index, f).permute(&p);
    let rhs = apply_dunkl(ctx, right_index, &f.permute(&p));
    Ok(&lhs - &rhs)
}

/// `Δ f = Σ_i ∂_i² f`.
pub fn laplacian(f: &RationalSection) -> RationalSection {
    let n = f.arity();
    let parts: Vec<RationalSection> = (0..n).map(|i| f.partial(i).partial(i)).collect();
    RationalSection::sum(n, &parts)
}

/// `V₂ = Σ_{i<j} (x_i - x_j)^{-2}`.
pub fn pair_potential(n: usize) -> RationalSection {
    let parts: Vec<RationalSection> = pairs(n)
        .map(|(i, j)| RationalSection::new(MultiPoly::one(n), [((i, j), 2)]))
        .collect();
    RationalSection::sum(n, &parts)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// `Σ_i ∇_i² f`.
pub fn sum_of_squares(ctx: &DunklContext, f: &RationalSection) -> RationalSection {
    let parts: Vec<RationalSection> = (0..ctx.n)
        .map(|i| apply_dunkl(ctx, i, &apply_dunkl(ctx, i, f)))
        .collect();
    RationalSection::sum(ctx.n, &parts)
}

/// The local form of `Σ_i ∇_i²` applied to `f`:
///
/// `Δf - c Σ_{i≠j} (x_i - x_j)^{-2} P_{ij} f - c² Σ_{i≠j} (x_i - x_j)^{-2} f`.
///
/// The first-order exchange terms and the three-index products cancel in the
/// sum over `i`; what is left has these signs (`∂_i (x_i - x_j)^{-1}` is
/// negative and `(a_{ij} P_{ij})² = -a_{ij}²`).
pub fn sum_of_squares_local(ctx: &DunklContext, f: &RationalSection) -> RationalSection {
    sum_of_squares_rhs_with_signs(ctx, f, -1, -1)
}

/// The same local form with both coupling terms taken with a `+` sign; kept
/// to show exactly how far that variant is from `Σ_i ∇_i²`.
pub fn sum_of_squares_rhs_plus_signs(ctx: &DunklContext, f: &RationalSection) -> RationalSection {
    sum_of_squares_rhs_with_signs(ctx, f, 1, 1)
}

fn sum_of_squares_rhs_with_signs(
    ctx: &DunklContext,
    f: &RationalSection,
    s1: i64,
    s2: i64,
) -> RationalSection {
    let n = ctx.n;
    let c = &ctx.coupling;
    let c1 = c.scale(&rat(2 * s1, 1));
    let c2 = (c * c).scale(&rat(2 * s2, 1));
    // Σ_{i≠j} = 2 Σ_{i<j}; both summands are symmetric in (i, j)
    let mut parts = vec![laplacian(f)];
    for (i, j) in pairs(n) {
        let swapped = f.permute(&Permutation::transposition(n, i, j));
        parts.push(swapped.div_difference(i, j, 2).scale(&c1));
        parts.push(f.div_difference(i, j, 2).scale(&c2));
    }
    RationalSection::sum(n, &parts)
}

/// `Σ_i ∇_i² f - (local form) f`; identically zero.
pub fn sum_of_squares_residual(ctx: &DunklContext, f: &RationalSection) -> RationalSection {
    &sum_of_squares(ctx, f) - &sum_of_squares_local(ctx, f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    /// Value a rightmost permutation `w` takes on functions of this type.
    pub fn character(self, w: &Permutation) -> i64 {
        match self {
            Symmetry::Symmetric => 1,
            Symmetry::Antisymmetric => w.sign() as i64,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
        }
    }

    /// The Calogero coupling `g = c(c ± 1)` produced by restricting `Σ∇²`.
    pub fn calogero_coupling(self, c: &CouplingPoly) -> CouplingPoly {
        let shift = match self {
            Symmetry::Symmetric => CouplingPoly::one(),
            Symmetry::Antisymmetric => -CouplingPoly::one(),
        };
        c * &(c + &shift)
    }
}

/// Checks `P_{i,i+1} f = ±f` for all adjacent transpositions.
pub fn has_symmetry(f: &RationalSection, sym: Symmetry) -> bool {
    let n = f.arity();
    (0..n.saturating_sub(1)).all(|i| {
        let g = f.permute(&Permutation::transposition(n, i, i + 1));
        match sym {
            Symmetry::Symmetric => g == *f,
            Symmetry::Antisymmetric => g == -f,
        }
    })
}

/// `Σ_i ∇_i²` brought to normal form (all permutations rightmost), each
/// permutation replaced by its value on `sym`-type functions, then applied
/// to `f`.
pub fn restricted_projection(
    ctx: &DunklContext,
    f: &RationalSection,
    sym: Symmetry,
) -> Result<RationalSection> {
    if f.arity() != ctx.n {
        return Err(Error::ArityMismatch {
            left: ctx.n,
            right: f.arity(),
        });
    }
    if !has_symmetry(f, sym) {
        return Err(Error::SymmetryMismatch {
            expected: sym.name(),
        });
    }
    Ok(ReflectionOperator::sum_of_squares(ctx)
        .restrict(sym)
        .apply(f))
}

/// `Res(Σ∇²) f - Δf + 2 c(c±1) V₂ f`; identically zero on functions of the
/// declared symmetry.
pub fn restriction_residual(
    ctx: &DunklContext,
    f: &RationalSection,
    sym: Symmetry,
) -> Result<RationalSection> {
    let projected = restricted_projection(ctx, f, sym)?;
    let g = sym.calogero_coupling(&ctx.coupling).scale(&rat(2, 1));
    let potential = (&pair_potential(ctx.n) * f).scale(&g);
    Ok(RationalSection::sum(
        ctx.n,
        [&projected, &-laplacian(f), &potential],
    ))
}

/// `H_c f = -½ Δf + g Σ_{i<j} (x_i - x_j)^{-2} f`.
pub fn calogero_apply(
    ctx: &DunklContext,
    f: &RationalSection,
    g: &CouplingPoly,
) -> RationalSection {
    let kinetic = laplacian(f).scale_rational(&rat(-1, 2));
    let potential = (&pair_potential(ctx.n) * f).scale(g);
    &kinetic + &potential
}

/// Monomial symmetric polynomials `m_λ` for every partition `λ` with at most
/// `n` parts and `|λ| ≤ max_degree`.
pub fn symmetric_basis(n: usize, max_degree: u32) -> Vec<RationalSection> {
    let all = Permutation::all(n);
    Monomial::up_to_degree(n, max_degree)
        .into_iter()
        .filter(|m| m.exps().windows(2).all(|w| w[0] >= w[1]))
        .map(|m| {
            let orbit: std::collections::BTreeSet<Monomial> =
                all.iter().map(|s| m.permuted(s)).collect();
            MultiPoly::from_terms(n, orbit.into_iter().map(|t| (t, CouplingPoly::one()))).into()
        })
        .collect()
}

/// Antisymmetrized monomials `Σ_σ sgn(σ) σ·x^e` for strictly decreasing `e`
/// with `|e| ≤ max_degree`.
pub fn antisymmetric_basis(n: usize, max_degree: u32) -> Vec<RationalSection> {
    let all = Permutation::all(n);
    Monomial::up_to_degree(n, max_degree)
        .into_iter()
        .filter(|m| m.exps().windows(2).all(|w| w[0] > w[1]))
        .map(|m| {
            MultiPoly::from_terms(
                n,
                all.iter().map(|s| {
                    (
                        m.permuted(s),
                        CouplingPoly::constant(rat(s.sign() as i64, 1)),
                    )
                }),
            )
            .into()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rational;

    fn ctx(n: usize) -> DunklContext {
        DunklContext::new(n, 6).unwrap()
    }

    fn mono(e: &[u32]) -> RationalSection {
        MultiPoly::monomial(e).into()
    }

    fn c() -> CouplingPoly {
        CouplingPoly::var()
    }

    fn over_diff(num: MultiPoly, i: usize, j: usize, d: u32) -> RationalSection {
        RationalSection::new(num, [((i, j), d)])
    }

    #[test]
    fn dunkl_on_constant() {
        // ∇₁·1 = c/(x1 - x2)
        let got = apply_dunkl(&ctx(2), 0, &RationalSection::one(2));
        assert_eq!(got, over_diff(MultiPoly::constant(2, c()), 0, 1, 1));
    }

    #[test]
    fn dunkl_on_coordinate() {
        // ∇₁·x1 = 1 + c x2/(x1 - x2)
        let got = apply_dunkl(&ctx(2), 0, &mono(&[1, 0]));
        let want = &RationalSection::one(2) + &over_diff(MultiPoly::var(2, 1).scale(&c()), 0, 1, 1);
        assert_eq!(got, want);
    }

    #[test]
    fn free_limit_is_the_partial_derivative() {
        let free = ctx(2).with_coupling(CouplingPoly::zero());
        for f in free.spanning_set() {
            assert_eq!(apply_dunkl(&free, 0, &f), f.partial(0));
            assert!(commutator_dunkl(&free, 0, 1, &f).unwrap().is_zero());
            assert!(verify_intertwining(&free, 0, 1, 1, &f).unwrap().is_zero());
        }
        assert_eq!(
            sum_of_squares(&free, &mono(&[2, 0])),
            RationalSection::from_poly(MultiPoly::rational(2, crate::exactalg::rat(2, 1)))
        );
    }

    #[test]
    fn zero_curvature_examples() {
        assert!(commutator_dunkl(&ctx(3), 0, 1, &mono(&[2, 1, 0]))
            .unwrap()
            .is_zero());
        assert!(commutator_dunkl(&ctx(2), 0, 1, &mono(&[5, 0]))
            .unwrap()
            .is_zero());
        assert!(commutator_dunkl(&ctx(2), 0, 0, &mono(&[1, 0])).is_err());
    }

    #[test]
    fn graded_pieces_recombine_to_the_commutator() {
        let ctx = ctx(3);
        let f = mono(&[2, 0, 1]);
        let (first, second) = commutator_graded(3, 0, 2, &f);
        assert!(first.is_zero() && second.is_zero());
        // the individual exchange terms are not zero, only their combination
        let a = exchange_part(3, 0, &exchange_part(3, 2, &f));
        assert!(!a.is_zero());
        let total = commutator_dunkl(&ctx, 0, 2, &f).unwrap();
        assert_eq!(total, (&first.scale(&c()) + &second.scale(&(&c() * &c()))));
    }

    #[test]
    fn intertwining_examples() {
        let ctx = ctx(3);
        assert!(verify_intertwining(&ctx, 0, 1, 1, &mono(&[0, 3, 0]))
            .unwrap()
            .is_zero());
        assert!(verify_intertwining(&ctx, 0, 2, 1, &mono(&[1, 0, 1]))
            .unwrap()
            .is_zero());
        assert!(verify_intertwining(&ctx, 0, 0, 1, &mono(&[2, 1, 1]))
            .unwrap()
            .is_zero());
        // a wrong pairing is not zero: P_12 ∇_2 ≠ ∇_2 P_12
        let p = Permutation::transposition(3, 0, 1);
        let f = mono(&[0, 3, 0]);
        let wrong = &apply_dunkl(&ctx, 1, &f).permute(&p) - &apply_dunkl(&ctx, 1, &f.permute(&p));
        assert!(!wrong.is_zero());
    }

    #[test]
    fn sum_of_squares_on_constant() {
        // Σ∇²·1 = -2c(c+1)/(x1-x2)^2 for N = 2 (direct two-step expansion)
        let got = sum_of_squares(&ctx(2), &RationalSection::one(2));
        let coeff = (&c() * &(&c() + &CouplingPoly::one())).scale(&crate::exactalg::rat(-2, 1));
        assert_eq!(got, over_diff(MultiPoly::constant(2, coeff), 0, 1, 2));
    }

    #[test]
    fn sum_of_squares_matches_local_form() {
        for f in [mono(&[1, 0]), &mono(&[1, 0]) - &mono(&[0, 1])] {
            assert!(sum_of_squares_residual(&ctx(2), &f).is_zero());
        }
        assert!(sum_of_squares_residual(&ctx(3), &mono(&[1, 1, 1])).is_zero());
    }

    #[test]
    fn plus_sign_variant_misses_by_twice_the_coupling_terms() {
        let ctx = ctx(2);
        let f = &mono(&[1, 0]) - &mono(&[0, 1]);
        let miss = &sum_of_squares(&ctx, &f) - &sum_of_squares_rhs_plus_signs(&ctx, &f);
        // f antisymmetric: miss = -2c·2V₂·(-f) - 2c²·2V₂·f = 4c(1-c)/(x1-x2)
        let coeff = (&c() * &(&CouplingPoly::one() - &c())).scale(&crate::exactalg::rat(4, 1));
        assert_eq!(miss, over_diff(MultiPoly::constant(2, coeff), 0, 1, 1));
    }

    #[test]
    fn restriction_on_symmetric_constant() {
        let ctx = ctx(2);
        let got =
            restricted_projection(&ctx, &RationalSection::one(2), Symmetry::Symmetric).unwrap();
        let g = Symmetry::Symmetric.calogero_coupling(&c());
        assert_eq!(g, CouplingPoly::from_ints(&[0, 1, 1]));
        assert_eq!(
            got,
            over_diff(
                MultiPoly::constant(2, g.scale(&crate::exactalg::rat(-2, 1))),
                0,
                1,
                2
            )
        );
        // and equals -2 H_c with g = c(c+1)
        let h = calogero_apply(&ctx, &RationalSection::one(2), &g);
        assert_eq!(got, h.scale_rational(&crate::exactalg::rat(-2, 1)));
    }

    #[test]
    fn restriction_on_antisymmetric_difference() {
        let ctx = ctx(2);
        let f = &mono(&[1, 0]) - &mono(&[0, 1]);
        let got = restricted_projection(&ctx, &f, Symmetry::Antisymmetric).unwrap();
        // -2c(c-1)/(x1-x2)
        let coeff = CouplingPoly::from_ints(&[0, -1, 1]).scale(&crate::exactalg::rat(-2, 1));
        assert_eq!(got, over_diff(MultiPoly::constant(2, coeff), 0, 1, 1));
        assert!(restriction_residual(&ctx, &f, Symmetry::Antisymmetric)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn restriction_rejects_wrong_symmetry() {
        let err = restricted_projection(&ctx(2), &mono(&[1, 0]), Symmetry::Symmetric).unwrap_err();
        assert_eq!(
            err,
            Error::SymmetryMismatch {
                expected: "symmetric"
            }
        );
    }

    #[test]
    fn free_restriction_is_laplacian() {
        let free = ctx(3).with_coupling(CouplingPoly::zero());
        for f in symmetric_basis(3, 4) {
            assert_eq!(
                restricted_projection(&free, &f, Symmetry::Symmetric).unwrap(),
                laplacian(&f)
            );
        }
    }

    #[test]
    fn calogero_examples() {
        let ctx2 = ctx(2);
        let got = calogero_apply(&ctx2, &mono(&[2, 0]), &CouplingPoly::zero());
        assert_eq!(
            got,
            RationalSection::from_poly(MultiPoly::rational(2, crate::exactalg::rat(-1, 1)))
        );
        let got = calogero_apply(&ctx2, &RationalSection::one(2), &CouplingPoly::one());
        assert_eq!(got, over_diff(MultiPoly::one(2), 0, 1, 2));
        let g = CouplingPoly::from_ints(&[0, -1, 1]);
        let got = calogero_apply(&ctx(3), &RationalSection::one(3), &g);
        assert_eq!(got, pair_potential(3).scale(&g));
        let at = [
            Rational::from_integer(0.into()),
            crate::exactalg::rat(1, 1),
            crate::exactalg::rat(3, 1),
        ];
        // c = 2: g = 2, V₂ = 1 + 1/9 + 1/4
        let v = got.evaluate(&at, &crate::exactalg::rat(2, 1)).unwrap();
        assert_eq!(
            v,
            crate::exactalg::rat(2, 1)
                * (crate::exactalg::rat(1, 1)
                    + crate::exactalg::rat(1, 9)
                    + crate::exactalg::rat(1, 4))
        );
    }

    #[test]
    fn bases_have_declared_symmetry() {
        let sym = symmetric_basis(3, 6);
        let anti = antisymmetric_basis(3, 6);
        // partitions of 0..=6 into at most 3 parts: 1+1+2+3+4+5+7
        assert_eq!(sym.len(), 23);
        // strict partitions with 3 parts (allowing a zero part) of size <= 6
        assert_eq!(anti.len(), 7);
        assert!(sym.iter().all(|f| has_symmetry(f, Symmetry::Symmetric)));
        assert!(anti
            .iter()
            .all(|f| has_symmetry(f, Symmetry::Antisymmetric)));
    }
}
