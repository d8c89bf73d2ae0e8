//! The Dunkl eigenproblem `∇_k ψ = i p_k ψ` as a flat `N!`-component system.
//!
//! Writing `Ψ_σ(x) = ψ(x_{σ(1)}, …, x_{σ(N)})`, the chain rule turns the
//! nonlocal equations into the local system `∂_k Ψ = Ω_k Ψ` with
//!
//! ```text
//! Ω_k[σ,τ] = i p_{σ⁻¹(k)} [σ=τ] + κ Σ_{m≠σ⁻¹(k)} [τ = σ∘s_{m,σ⁻¹(k)}] / (x_{σ(m)} - x_k)
//! ```
//!
//! where `κ` is the exchange weight (the coupling `c` unless overridden).
//! Commutativity of the Dunkl operators is equivalent to flatness of `Ω`,
//! which [`verify_flatness`] checks in exact arithmetic.

mod path;
mod solve;

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactalg::{format_rational, rat, rational_to_f64, Permutation, Rational};
use crate::{Error, Result};

pub use path::ChamberPath;
pub use solve::{
    holonomy_deviation, max_abs_diff, plane_wave_map, transport_dyson, transport_ode, Method,
    PlaneWaveReport, StepStats, TransportReport, TransportResult,
};

/// Default cap on the particle number (`5! = 120` components).
pub const DEFAULT_PARTICLE_CAP: usize = 5;

pub type ExactComplex = Complex<Rational>;

/// Momenta `p_1..p_N`, the real eigenvalues of the Dunkl system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Momentum(pub Vec<Rational>);

impl Momentum {
    pub fn new(p: Vec<Rational>) -> Self {
        Self(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pairwise distinct entries.
    pub fn is_generic(&self) -> bool {
        let mut v = self.0.clone();
        v.sort();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// `(σp)_i = p_{σ(i)}`.
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        Self(
            (0..self.len())
                .map(|i| self.0[sigma.apply(i)].clone())
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

/// One nonzero entry of `Ω_k`: either the diagonal `i·momentum` or an
/// exchange term `weight / (x_a - x_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Diagonal {
        momentum: Rational,
    },
    Pole {
        weight: Rational,
        a: usize,
        b: usize,
    },
}

impl Entry {
    fn eval_exact(&self, x: &[Rational]) -> Result<ExactComplex> {
        Ok(match self {
            Entry::Diagonal { momentum } => Complex::new(Rational::zero(), momentum.clone()),
            Entry::Pole { weight, a, b } => {
                let d = &x[*a] - &x[*b];
                if d.is_zero() {
                    return Err(Error::Pole {
                        i: *a.min(b),
                        j: *a.max(b),
                    });
                }
                Complex::new(weight / d, Rational::zero())
            }
        })
    }

    /// `∂_j` of the entry at `x`; the diagonal part is constant.
    fn partial_exact(&self, j: usize, x: &[Rational]) -> Option<ExactComplex> {
        match self {
            Entry::Diagonal { .. } => None,
            Entry::Pole { weight, a, b } => {
                let sign = if j == *a {
                    -1
                } else if j == *b {
                    1
                } else {
                    return None;
                };
                let d = &x[*a] - &x[*b];
                Some(Complex::new(
                    weight * rat(sign, 1) / (&d * &d),
                    Rational::zero(),
                ))
            }
        }
    }

    fn eval(&self, x: &[f64]) -> Complex<f64> {
        match self {
            Entry::Diagonal { momentum } => Complex::new(0.0, rational_to_f64(momentum)),
            Entry::Pole { weight, a, b } => {
                Complex::new(rational_to_f64(weight) / (x[*a] - x[*b]), 0.0)
            }
        }
    }
}

/// The matrices `Ω_1..Ω_N` with symbolic entries, rows stored sparsely.
/// Components are indexed by [`Permutation::rank`].
#[derive(Clone, Debug)]
pub struct ConnectionMatrix {
    n: usize,
    p: Momentum,
    c: Rational,
    weight: Rational,
    perms: Vec<Permutation>,
    /// `rows[k][σ]` lists `(τ, entry)`.
    rows: Vec<Vec<Vec<(usize, Entry)>>>,
}

/// Builds `Ω` with exchange weight `c`.
pub fn build_local_system(n: usize, p: &Momentum, c: &Rational) -> Result<ConnectionMatrix> {
    build_local_system_with(n, p, c, None, DEFAULT_PARTICLE_CAP)
}

/// As [`build_local_system`], optionally overriding the exchange weight and
/// the particle cap.
pub fn build_local_system_with(
    n: usize,
    p: &Momentum,
    c: &Rational,
    weight: Option<&Rational>,
    cap: usize,
) -> Result<ConnectionMatrix> {
    if n > cap {
        return Err(Error::TooManyParticles { n, cap });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two particles, got {n}"
        )));
    }
    if p.len() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: p.len(),
        });
    }
    let weight = weight.cloned().unwrap_or_else(|| c.clone());
    let perms = Permutation::all(n);
    let rows = (0..n)
        .map(|k| {
            perms
                .iter()
                .map(|sigma| {
                    let pos = sigma.inverse().apply(k);
                    let mut row = vec![(
                        sigma.rank(),
                        Entry::Diagonal {
                            momentum: p.0[pos].clone(),
                        },
                    )];
                    for m in (0..n).filter(|&m| m != pos) {
                        let tau = sigma.compose(&Permutation::transposition(n, m, pos));
                        row.push((
                            tau.rank(),
                            Entry::Pole {
                                weight: weight.clone(),
                                a: sigma.apply(m),
                                b: k,
                            },
                        ));
                    }
                    row
                })
                .collect()
        })
        .collect();
    Ok(ConnectionMatrix {
        n,
        p: p.clone(),
        c: c.clone(),
        weight,
        perms,
        rows,
    })
}

type SparseRow = BTreeMap<usize, ExactComplex>;

impl ConnectionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of components, `N!`.
    pub fn dim(&self) -> usize {
        self.perms.len()
    }

    pub fn momentum(&self) -> &Momentum {
        &self.p
    }

    pub fn coupling(&self) -> &Rational {
        &self.c
    }

    pub fn exchange_weight(&self) -> &Rational {
        &self.weight
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    /// Nonzero entries of row `σ` of `Ω_k`.
    pub fn row(&self, k: usize, sigma: usize) -> &[(usize, Entry)] {
        &self.rows[k][sigma]
    }

    /// `Ω_k(x)` as a dense complex matrix.
    pub fn eval(&self, k: usize, x: &[f64]) -> nalgebra::DMatrix<Complex<f64>> {
        let mut m = nalgebra::DMatrix::zeros(self.dim(), self.dim());
        for (s, row) in self.rows[k].iter().enumerate() {
            for (t, e) in row {
                m[(s, *t)] += e.eval(x);
            }
        }
        m
    }

    /// `Σ_k v_k Ω_k(x)`, the connection along velocity `v`.
    pub fn eval_along(&self, x: &[f64], v: &[f64]) -> nalgebra::DMatrix<Complex<f64>> {
        let mut m = nalgebra::DMatrix::zeros(self.dim(), self.dim());
        for (k, &vk) in v.iter().enumerate() {
            if vk == 0.0 {
                continue;
            }
            for (s, row) in self.rows[k].iter().enumerate() {
                for (t, e) in row {
                    m[(s, *t)] += e.eval(x) * vk;
                }
            }
        }
        m
    }

    fn eval_exact(&self, k: usize, x: &[Rational]) -> Result<Vec<SparseRow>> {
        self.rows[k]
            .iter()
            .map(|row| {
                let mut out = SparseRow::new();
                for (t, e) in row {
                    accumulate(&mut out, *t, e.eval_exact(x)?);
                }
                Ok(out)
            })
            .collect()
    }

    fn partial_exact(&self, k: usize, j: usize, x: &[Rational]) -> Vec<SparseRow> {
        self.rows[k]
            .iter()
            .map(|row| {
                let mut out = SparseRow::new();
                for (t, e) in row {
                    if let Some(v) = e.partial_exact(j, x) {
                        accumulate(&mut out, *t, v);
                    }
                }
                out
            })
            .collect()
    }

    /// `∂_jΩ_k - ∂_kΩ_j + Ω_jΩ_k - Ω_kΩ_j` at `x`, exactly.
    pub fn curvature(&self, j: usize, k: usize, x: &[Rational]) -> Result<Vec<SparseRow>> {
        if x.len() != self.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        let oj = self.eval_exact(j, x)?;
        let ok = self.eval_exact(k, x)?;
        let djk = self.partial_exact(k, j, x);
        let dkj = self.partial_exact(j, k, x);
        let jk = sparse_mul(&oj, &ok);
        let kj = sparse_mul(&ok, &oj);
        let mut out = djk;
        for (s, row) in out.iter_mut().enumerate() {
            for (t, v) in &dkj[s] {
                accumulate(row, *t, -v.clone());
            }
            for (t, v) in &jk[s] {
                accumulate(row, *t, v.clone());
            }
            for (t, v) in &kj[s] {
                accumulate(row, *t, -v.clone());
            }
        }
        Ok(out)
    }
}

fn accumulate(row: &mut SparseRow, col: usize, v: ExactComplex) {
    let entry = row.entry(col).or_insert_with(ExactComplex::zero);
    *entry = &*entry + &v;
    if entry.is_zero() {
        row.remove(&col);
    }
}

fn sparse_mul(a: &[SparseRow], b: &[SparseRow]) -> Vec<SparseRow> {
    a.iter()
        .map(|row| {
            let mut out = SparseRow::new();
            for (mid, x) in row {
                for (col, y) in &b[*mid] {
                    accumulate(&mut out, *col, x * y);
                }
            }
            out
        })
        .collect()
}

/// Exact flatness check at the given points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlatnessReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub point_count: usize,
    pub case_count: usize,
    /// `(point index, j, k, number of nonzero entries)` for each failure.
    pub failures: Vec<(usize, usize, usize, usize)>,
}

impl FlatnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_flatness(
    omega: &ConnectionMatrix,
    points: &[Vec<Rational>],
) -> Result<FlatnessReport> {
    let n = omega.n();
    let mut failures = Vec::new();
    let mut case_count = 0;
    for (idx, x) in points.iter().enumerate() {
        for j in 0..n {
            for k in j + 1..n {
                case_count += 1;
                let r = omega.curvature(j, k, x)?;
                let nonzero: usize = r.iter().map(BTreeMap::len).sum();
                if nonzero > 0 {
                    failures.push((idx, j + 1, k + 1, nonzero));
                }
            }
        }
    }
    Ok(FlatnessReport {
        n,
        point_count: points.len(),
        case_count,
        failures,
    })
}

/// Which regular action of `σ` on component labels conjugates the systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    /// `τ ↦ σ∘τ`
    Left,
    /// `τ ↦ τ∘σ`
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivarianceReport {
    pub action: Action,
    pub residual: f64,
    pub point_count: usize,
}

/// Searches for a permutation matrix `R` from the left or right regular
/// action of `σ` with `Ω_k(x; σp) R = R Ω_k(x; p)` for all `k` at every point.
pub fn equivariance_check(
    base: &ConnectionMatrix,
    permuted: &ConnectionMatrix,
    sigma: &Permutation,
    points: &[Vec<Rational>],
) -> Result<EquivarianceReport> {
    if base.n() != permuted.n() || sigma.len() != base.n() {
        return Err(Error::ArityMismatch {
            left: base.n(),
            right: sigma.len(),
        });
    }
    for action in [Action::Left, Action::Right] {
        // label τ of the base system corresponds to label map[τ] of the permuted one
        let map: Vec<usize> = base
            .permutations()
            .iter()
            .map(|tau| match action {
                Action::Left => sigma.compose(tau).rank(),
                Action::Right => tau.compose(sigma).rank(),
            })
            .collect();
        let mut residual = Rational::zero();
        for x in points {
            for k in 0..base.n() {
                let a = base.eval_exact(k, x)?;
                let b = permuted.eval_exact(k, x)?;
                for (s, row) in a.iter().enumerate() {
                    let mut diff: SparseRow = b[map[s]].clone();
                    for (t, v) in row {
                        accumulate(&mut diff, map[*t], -v.clone());
                    }
                    for v in diff.values() {
                        let size = v.re.abs().max(v.im.abs());
                        if size > residual {
                            residual = size;
                        }
                    }
                }
            }
        }
        let report = EquivarianceReport {
            action,
            residual: rational_to_f64(&residual),
            point_count: points.len(),
        };
        if residual.is_zero() {
            return Ok(report);
        }
    }
    Err(Error::NoEquivariance)
}

/// A point `x_1 < … < x_N` with small random rational gaps.
pub fn random_chamber_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    let mut x = rat(rng.random_range(-10..=10), rng.random_range(1..=4));
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x.clone());
        x = &x + rat(rng.random_range(1..=12), rng.random_range(1..=6));
    }
    out
}

/// A random rational in `[-bound, bound]` with denominator at most `den`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, den: i64) -> Rational {
    let d = rng.random_range(1..=den);
    rat(rng.random_range(-bound * d..=bound * d), d)
}
