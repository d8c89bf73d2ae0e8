//! Normal-ordering calculus for coordinate exchanges.
//!
//! An exchange `P_{jk}` can be written as a product of shift exponentials
//! `e^{a x_j ∂_k}` and sign flips `(-1)^{x_k ∂_k}`, as a dilation
//! `(-1)^{v ∂_v}` in the relative coordinate `v = x_k - x_j`, or in normal
//! order (coordinates left of derivatives) as the finite Taylor series
//!
//! ```text
//! P_{jk} f = Σ_n (x_j - x_k)^n / n! (∂_k - ∂_j)^n f
//! ```
//!
//! which is exact once `n` reaches the degree of `f`. On polynomials every
//! exponential operator here is an exact substitution.

use std::fmt;

use num_integer::binomial;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{
    format_rational, parse_rational, rat, CouplingPoly, Monomial, MultiPoly, Permutation, Rational,
    RationalSection, UniPoly,
};
use crate::{Error, Result};

/// One exponential factor, acting on functions by substitution.
#[derive(Clone, Debug, PartialEq)]
pub enum ShiftAtom {
    /// `e^{α x_source ∂_target}`: `x_target ↦ x_target + α x_source`.
    Shift {
        target: usize,
        source: usize,
        alpha: Rational,
    },
    /// `(-1)^{x_k ∂_k}`: `x_k ↦ -x_k`.
    SignFlip { k: usize },
    /// `q^{x_k ∂_k}`: `x_k ↦ q x_k`.
    Scale { k: usize, q: Rational },
    /// `q^{½ (x_k - x_j)(∂_k - ∂_j)}`: dilates `v = x_k - x_j` by `q` keeping
    /// `u = x_j + x_k` fixed.
    PairDilation { j: usize, k: usize, q: Rational },
}

impl ShiftAtom {
    fn images(&self, n: usize) -> Vec<MultiPoly> {
        let x = |i| MultiPoly::var(n, i);
        let mut images: Vec<MultiPoly> = (0..n).map(x).collect();
        match self {
            ShiftAtom::Shift {
                target,
                source,
                alpha,
            } => {
                images[*target] = &x(*target) + &x(*source).scale_rational(alpha);
            }
            ShiftAtom::SignFlip { k } => images[*k] = -x(*k),
            ShiftAtom::Scale { k, q } => images[*k] = x(*k).scale_rational(q),
            ShiftAtom::PairDilation { j, k, q } => {
                // x_k = (u + v)/2, x_j = (u - v)/2 with v ↦ q v
                let half = rat(1, 2);
                let plus = (Rational::one() + q) * &half;
                let minus = (Rational::one() - q) * &half;
                images[*k] = &x(*k).scale_rational(&plus) + &x(*j).scale_rational(&minus);
                images[*j] = &x(*j).scale_rational(&plus) + &x(*k).scale_rational(&minus);
            }
        }
        images
    }

    fn indices(&self) -> Vec<usize> {
        match self {
            ShiftAtom::Shift { target, source, .. } => vec![*target, *source],
            ShiftAtom::SignFlip { k } | ShiftAtom::Scale { k, .. } => vec![*k],
            ShiftAtom::PairDilation { j, k, .. } => vec![*j, *k],
        }
    }
}

impl fmt::Display for ShiftAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftAtom::Shift {
                target,
                source,
                alpha,
            } => {
                write!(
                    f,
                    "exp({} x{} d{})",
                    format_rational(alpha),
                    source + 1,
                    target + 1
                )
            }
            ShiftAtom::SignFlip { k } => write!(f, "(-1)^(x{0} d{0})", k + 1),
            ShiftAtom::Scale { k, q } => write!(f, "({})^(x{1} d{1})", format_rational(q), k + 1),
            ShiftAtom::PairDilation { j, k, q } => write!(
                f,
                "({})^(1/2 (x{2}-x{1})(d{2}-d{1}))",
                format_rational(q),
                j + 1,
                k + 1
            ),
        }
    }
}

/// Operator product of atoms. Atoms are listed left to right as written; on
/// a function the rightmost atom acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftWord {
    atoms: Vec<ShiftAtom>,
}

impl ShiftWord {
    pub fn new(atoms: Vec<ShiftAtom>) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> &[ShiftAtom] {
        &self.atoms
    }

    /// `(A_1 A_2 ... A_m) f = A_1(A_2(...(A_m f)))`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let n = f.arity();
        for atom in &self.atoms {
            assert!(
                atom.indices().iter().all(|&i| i < n),
                "atom index out of range"
            );
        }
        self.atoms
            .iter()
            .rev()
            .fold(f.clone(), |g, atom| g.substitute(&atom.images(n)))
    }
}

impl fmt::Display for ShiftWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Applies a word to a section, which must be a polynomial.
pub fn apply_shift_word(word: &ShiftWord, f: &RationalSection) -> Result<MultiPoly> {
    let poly = f.clone().into_poly()?;
    for atom in &word.atoms {
        if let Some(&bad) = atom.indices().iter().find(|&&i| i >= poly.arity()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                n: poly.arity(),
            });
        }
    }
    Ok(word.apply(&poly))
}

/// A named product-of-exponentials candidate for the exchange `P_{jk}`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub name: &'static str,
    pub word: ShiftWord,
}

/// The exponential realizations of `P_{jk}` under test:
///
/// * `flip_k_shears`: `(-1)^{x_k∂_k} e^{x_j∂_k} e^{-x_k∂_j} e^{x_j∂_k}`
/// * `shears_flip_k`: `e^{x_k∂_j} e^{-x_j∂_k} e^{x_k∂_j} (-1)^{x_k∂_k}`
/// * `relative_reflection`: `(-1)^{½(x_k-x_j)(∂_k-∂_j)}`
/// * `flip_j_shears`: `(-1)^{x_j∂_j} e^{-x_j∂_k} e^{x_k∂_j} e^{-x_j∂_k}`
pub fn swap_realizations(j: usize, k: usize) -> Vec<Realization> {
    let shift = |target, source, a: i64| ShiftAtom::Shift {
        target,
        source,
        alpha: rat(a, 1),
    };
    vec![
        Realization {
            name: "flip_k_shears",
            word: ShiftWord::new(vec![
                ShiftAtom::SignFlip { k },
                shift(k, j, 1),
                shift(j, k, -1),
                shift(k, j, 1),
            ]),
        },
        Realization {
            name: "shears_flip_k",
            word: ShiftWord::new(vec![
                shift(j, k, 1),
                shift(k, j, -1),
                shift(j, k, 1),
                ShiftAtom::SignFlip { k },
            ]),
        },
        Realization {
            name: "relative_reflection",
            word: ShiftWord::new(vec![ShiftAtom::PairDilation {
                j,
                k,
                q: rat(-1, 1),
            }]),
        },
        Realization {
            name: "flip_j_shears",
            word: ShiftWord::new(vec![
                ShiftAtom::SignFlip { k: j },
                shift(k, j, -1),
                shift(j, k, 1),
                shift(k, j, -1),
            ]),
        },
    ]
}

/// `Σ_{n=0}^{M} (-2v)^n / n! · f^{(n)}(v)`; equals `f(-v)` once `M ≥ deg f`.
pub fn sign_flip_series(f: &UniPoly, order: usize) -> UniPoly {
    let mut out = UniPoly::zero();
    let mut deriv = f.clone();
    let mut factor = Rational::one();
    for n in 0..=order {
        if deriv.is_zero() {
            break;
        }
        out = &out + &(&deriv * &UniPoly::monomial(factor.clone(), n));
        deriv = deriv.derivative();
        factor *= rat(-2, (n + 1) as i64);
    }
    out
}

/// `Σ_{n=0}^{M} (x_j - x_k)^n / n! · (∂_k - ∂_j)^n f`.
pub fn permutation_series(j: usize, k: usize, f: &MultiPoly, order: usize) -> MultiPoly {
    lever_series(MultiPoly::difference(f.arity(), j, k), j, k, f, order)
}

/// The same series with the lever `(x_k - x_j)` in place of `(x_j - x_k)`.
/// This is `e^{(x_k - x_j)(∂_k - ∂_j)}`, which sends `x_k - x_j` to
/// `3(x_k - x_j)` rather than exchanging the coordinates.
pub fn opposite_lever_series(j: usize, k: usize, f: &MultiPoly, order: usize) -> MultiPoly {
    lever_series(MultiPoly::difference(f.arity(), k, j), j, k, f, order)
}

fn lever_series(lever: MultiPoly, j: usize, k: usize, f: &MultiPoly, order: usize) -> MultiPoly {
    let n_vars = f.arity();
    let mut out = MultiPoly::zero(n_vars);
    let mut deriv = f.clone();
    let mut weight = MultiPoly::one(n_vars);
    for n in 0..=order {
        if deriv.is_zero() {
            break;
        }
        out = &out + &(&weight * &deriv);
        deriv = &deriv.partial(k) - &deriv.partial(j);
        weight = (&weight * &lever).scale_rational(&rat(1, (n + 1) as i64));
    }
    out
}

/// `q^{x_k ∂_k} f = f(.., q x_k, ..)`.
pub fn scaling_apply(q: &Rational, k: usize, f: &MultiPoly) -> MultiPoly {
    ShiftWord::new(vec![ShiftAtom::Scale { k, q: q.clone() }]).apply(f)
}

/// One normal-ordered symbol term `coefficient · x^xExponents · p^pExponents`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SymbolTerm {
    pub x_exponents: Vec<u32>,
    pub p_exponents: Vec<u32>,
    #[serde(with = "rational_string")]
    pub coefficient: Rational,
}

mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Normal-ordered symbol of `P_{jk}` truncated at order `M`:
/// `Σ_{n≤M} (x_j - x_k)^n (p_k - p_j)^n / n!`, expanded into monomials.
///
/// Quantization ([`quantize`]) maps `p_m ↦ ∂_m` with coordinates to the left.
pub fn symbol_of_permutation(
    n_vars: usize,
    j: usize,
    k: usize,
    order: usize,
) -> Result<Vec<SymbolTerm>> {
    if j == k || j >= n_vars || k >= n_vars {
        return Err(Error::InvalidArgument(format!(
            "symbol needs distinct indices below {n_vars}, got ({}, {})",
            j + 1,
            k + 1
        )));
    }
    let mut out = Vec::new();
    let mut inv_fact = Rational::one();
    for n in 0..=order {
        if n > 0 {
            inv_fact *= rat(1, n as i64);
        }
        for a in 0..=n {
            // (x_j - x_k)^n = Σ_a C(n,a) x_j^a (-x_k)^{n-a}
            for b in 0..=n {
                // (p_k - p_j)^n = Σ_b C(n,b) p_k^b (-p_j)^{n-b}
                let sign = if (n - a + n - b) % 2 == 0 { 1 } else { -1 };
                let c = sign * binomial(n as i64, a as i64) * binomial(n as i64, b as i64);
                let mut xe = vec![0; n_vars];
                xe[j] = a as u32;
                xe[k] = (n - a) as u32;
                let mut pe = vec![0; n_vars];
                pe[k] = b as u32;
                pe[j] = (n - b) as u32;
                out.push(SymbolTerm {
                    x_exponents: xe,
                    p_exponents: pe,
                    coefficient: rat(c, 1) * &inv_fact,
                });
            }
        }
    }
    Ok(out)
}

/// Applies a normal-ordered symbol: `Σ coefficient · x^a ∂^b f`.
pub fn quantize(symbol: &[SymbolTerm], f: &MultiPoly) -> MultiPoly {
    let n = f.arity();
    let mut out = MultiPoly::zero(n);
    for term in symbol {
        let mut g = f.clone();
        for (i, &e) in term.p_exponents.iter().enumerate() {
            for _ in 0..e {
                g = g.partial(i);
            }
        }
        if g.is_zero() {
            continue;
        }
        let x = MultiPoly::term(
            Monomial(term.x_exponents.clone()),
            CouplingPoly::constant(term.coefficient.clone()),
        );
        out = &out + &(&x * &g);
    }
    out
}

/// Per-realization outcome of the exchange-equivalence suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealizationReport {
    pub name: String,
    pub word: String,
    pub case_count: usize,
    pub mismatches: usize,
    pub matches_swap: bool,
}

/// A named property of the normal-ordering calculus checked over the basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyReport {
    pub property: String,
    pub case_count: usize,
    pub failures: Vec<String>,
    /// Whether the property is expected to hold; `false` marks deliberate
    /// negative controls (a wrong-sign series must fail).
    pub expected: bool,
}

impl PropertyReport {
    /// Holds exactly when expected, fails somewhere when not.
    pub fn as_expected(&self) -> bool {
        self.failures.is_empty() == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SymbolSuiteReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub degree: u32,
    pub realizations: Vec<RealizationReport>,
    pub properties: Vec<PropertyReport>,
}

impl SymbolSuiteReport {
    pub fn passed(&self) -> bool {
        self.realizations.iter().all(|r| r.matches_swap)
            && self.properties.iter().all(PropertyReport::as_expected)
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn check_property<F>(name: &str, expected: bool, basis: &[MultiPoly], check: F) -> PropertyReport
where
    F: Fn(&MultiPoly) -> (usize, Vec<String>) + Sync + Send,
{
    let results: Vec<(usize, Vec<String>)> = basis.par_iter().map(check).collect();
    PropertyReport {
        property: name.to_string(),
        case_count: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
        expected,
    }
}

/// Checks every exchange realization, the truncated series, the symbol
/// round trip and the dilation group law on all monomials of degree
/// `≤ degree` in `n` variables, for every pair `j < k`.
pub fn run_symbol_suite(n: usize, degree: u32) -> SymbolSuiteReport {
    let basis: Vec<MultiPoly> = Monomial::up_to_degree(n, degree)
        .into_iter()
        .map(|m| MultiPoly::term(m, CouplingPoly::one()))
        .collect();
    let pairs = pairs(n);
    let swap = |j, k, f: &MultiPoly| f.permute(&Permutation::transposition(n, j, k));

    let names: Vec<&'static str> = swap_realizations(0, 1).iter().map(|r| r.name).collect();
    let realizations = names
        .iter()
        .enumerate()
        .map(|(idx, name)| {
            let mismatches: usize = basis
                .par_iter()
                .map(|f| {
                    pairs
                        .iter()
                        .filter(|&&(j, k)| {
                            swap_realizations(j, k)[idx].word.apply(f) != swap(j, k, f)
                        })
                        .count()
                })
                .sum();
            let case_count = basis.len() * pairs.len();
            RealizationReport {
                name: name.to_string(),
                word: swap_realizations(0, 1)[idx].word.to_string(),
                case_count,
                mismatches,
                matches_swap: mismatches == 0,
            }
        })
        .collect();

    let label = |j: usize, k: usize, f: &MultiPoly| format!("({},{}) on [{f}]", j + 1, k + 1);
    let mut properties = Vec::new();
    properties.push(check_property(
        "series_exact_at_degree",
        true,
        &basis,
        |f| {
            let m = f.total_degree() as usize;
            let fails = pairs
                .iter()
                .filter(|&&(j, k)| permutation_series(j, k, f, m) != swap(j, k, f))
                .map(|&(j, k)| label(j, k, f))
                .collect();
            (pairs.len(), fails)
        },
    ));
    // a monomial of degree d that is moved by the swap needs all d + 1 terms
    properties.push(check_property(
        "series_truncated_below_degree_differs",
        true,
        &basis,
        |f| {
            let (j, k) = (0, 1);
            let d = f
                .terms()
                .map(|(m, _)| m.exps()[j] + m.exps()[k])
                .max()
                .unwrap_or(0) as usize;
            if d == 0 || swap(j, k, f) == *f {
                return (0, Vec::new());
            }
            let fails = if permutation_series(j, k, f, d - 1) == swap(j, k, f) {
                vec![label(j, k, f)]
            } else {
                Vec::new()
            };
            (1, fails)
        },
    ));
    properties.push(check_property("series_involution", true, &basis, |f| {
        let m = f.total_degree() as usize;
        let fails = pairs
            .iter()
            .filter(|&&(j, k)| permutation_series(j, k, &permutation_series(j, k, f, m), m) != *f)
            .map(|&(j, k)| label(j, k, f))
            .collect();
        (pairs.len(), fails)
    }));
    properties.push(check_property(
        "symbol_quantization_roundtrip",
        true,
        &basis,
        |f| {
            let m = f.total_degree() as usize;
            let fails = pairs
                .iter()
                .filter(|&&(j, k)| {
                    let sym = symbol_of_permutation(n, j, k, m).expect("valid pair");
                    quantize(&sym, f) != swap(j, k, f)
                })
                .map(|&(j, k)| label(j, k, f))
                .collect();
            (pairs.len(), fails)
        },
    ));
    properties.push(check_property("dilation_group_law", true, &basis, |f| {
        let (q1, q2) = (rat(-3, 2), rat(5, 7));
        let mut fails = Vec::new();
        for k in 0..n {
            let lhs = scaling_apply(&q1, k, &scaling_apply(&q2, k, f));
            if lhs != scaling_apply(&(&q1 * &q2), k, f) {
                fails.push(format!("x{} on [{f}]", k + 1));
            }
        }
        (n, fails)
    }));
    // negative control: the opposite-lever Taylor step is not the exchange
    properties.push(check_property(
        "opposite_lever_series_is_swap",
        false,
        &basis,
        |f| {
            let m = f.total_degree() as usize;
            let fails = pairs
                .iter()
                .filter(|&&(j, k)| opposite_lever_series(j, k, f, m) != swap(j, k, f))
                .map(|&(j, k)| label(j, k, f))
                .collect();
            (pairs.len(), fails)
        },
    ));

    SymbolSuiteReport {
        n,
        degree,
        realizations,
        properties,
    }
}

/// Univariate helper: `f(-v)` computed directly.
pub fn reflect_univariate(f: &UniPoly) -> UniPoly {
    UniPoly::from_coeffs(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect(),
    )
}

impl Default for ShiftWord {
    fn default() -> Self {
        Self::new(Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> MultiPoly {
        MultiPoly::monomial(e)
    }

    #[test]
    fn sign_flip_word_on_even_power() {
        let w = ShiftWord::new(vec![ShiftAtom::SignFlip { k: 0 }]);
        assert_eq!(w.apply(&mono(&[2, 1])), mono(&[2, 1]));
    }

    #[test]
    fn shift_word_translates() {
        let w = ShiftWord::new(vec![ShiftAtom::Shift {
            target: 0,
            source: 1,
            alpha: rat(1, 1),
        }]);
        assert_eq!(w.apply(&mono(&[1, 0])), &mono(&[1, 0]) + &mono(&[0, 1]));
    }

    #[test]
    fn first_realization_swaps() {
        let r = &swap_realizations(0, 1)[0];
        assert_eq!(r.word.apply(&mono(&[1, 2])), mono(&[2, 1]));
    }

    #[test]
    fn word_rejects_non_polynomial() {
        let w = ShiftWord::default();
        let s = RationalSection::inverse_difference(2, 0, 1);
        assert_eq!(apply_shift_word(&w, &s), Err(Error::NotPolynomial));
    }

    #[test]
    fn sign_flip_series_examples() {
        let v = UniPoly::from_ints(&[0, 1]);
        assert_eq!(sign_flip_series(&v, 1), UniPoly::from_ints(&[0, -1]));
        let v3 = UniPoly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(sign_flip_series(&v3, 3), UniPoly::from_ints(&[0, 0, 0, -1]));
        // truncated below the degree: v² - 4v² = -3v², not f(-v)
        let v2 = UniPoly::from_ints(&[0, 0, 1]);
        assert_eq!(sign_flip_series(&v2, 1), UniPoly::from_ints(&[0, 0, -3]));
        assert_ne!(sign_flip_series(&v2, 1), reflect_univariate(&v2));
    }

    #[test]
    fn permutation_series_examples() {
        let sym = &mono(&[1, 0]) + &mono(&[0, 1]);
        for m in 0..3 {
            assert_eq!(permutation_series(0, 1, &sym, m), sym);
        }
        assert_eq!(permutation_series(0, 1, &mono(&[1, 0]), 1), mono(&[0, 1]));
        assert_eq!(permutation_series(0, 1, &mono(&[2, 1]), 3), mono(&[1, 2]));
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(scaling_apply(&rat(-1, 1), 0, &mono(&[3])), -mono(&[3]));
        assert_eq!(
            scaling_apply(&rat(2, 1), 0, &mono(&[2])),
            mono(&[2]).scale_rational(&rat(4, 1))
        );
        let f = &mono(&[1, 2]) + &mono(&[3, 0]);
        assert_eq!(scaling_apply(&rat(1, 1), 1, &f), f);
    }

    #[test]
    fn symbol_low_orders() {
        let s0 = symbol_of_permutation(2, 0, 1, 0).unwrap();
        assert_eq!(
            s0,
            vec![SymbolTerm {
                x_exponents: vec![0, 0],
                p_exponents: vec![0, 0],
                coefficient: rat(1, 1)
            }]
        );
        // order one adds (x1 - x2)(p2 - p1) expanded into four terms
        let s1 = symbol_of_permutation(2, 0, 1, 1).unwrap();
        assert_eq!(s1.len(), 5);
        let find = |xe: [u32; 2], pe: [u32; 2]| {
            s1.iter()
                .find(|t| t.x_exponents == xe && t.p_exponents == pe)
                .map(|t| t.coefficient.clone())
        };
        assert_eq!(find([1, 0], [0, 1]), Some(rat(1, 1)));
        assert_eq!(find([1, 0], [1, 0]), Some(rat(-1, 1)));
        assert_eq!(find([0, 1], [0, 1]), Some(rat(-1, 1)));
        assert_eq!(find([0, 1], [1, 0]), Some(rat(1, 1)));
        assert!(symbol_of_permutation(2, 1, 1, 1).is_err());
    }

    #[test]
    fn symbol_json_shape() {
        let s = symbol_of_permutation(2, 0, 1, 1).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v[2]["coefficient"], "-1");
        let back: Vec<SymbolTerm> = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn small_suite_passes() {
        let r = run_symbol_suite(3, 4);
        assert!(r.passed(), "{r:#?}");
        assert!(r.realizations.iter().all(|x| x.matches_swap));
    }
}
