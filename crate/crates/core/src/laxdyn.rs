//! Lax matrix and classical dynamics of the Calogero model
//!
//! ```text
//! H = Σ (p_i²/2 + ω² x_i²/2) + Σ_{i<j} g² / (x_i - x_j)²
//! ```
//!
//! At `ω = 0, g² = 1` the traces `I_j = tr P^j` of the Lax matrix
//! `P_ij = p_i δ_ij + i(1 - δ_ij)/(x_i - x_j)` are conserved.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::{Rational, UniPoly};
use crate::{Error, Result};

/// Number of trace integrals tracked along trajectories.
pub const TRACKED_TRACES: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub g2: f64,
    pub omega: f64,
}

impl PhasePoint {
    /// Unit coupling, no trap.
    pub fn unit_coupling(x: Vec<f64>, p: Vec<f64>) -> Self {
        Self {
            x,
            p,
            g2: 1.0,
            omega: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.p.len() {
            return Err(Error::ArityMismatch {
                left: self.x.len(),
                right: self.p.len(),
            });
        }
        if self.x.is_empty() {
            return Err(Error::InvalidArgument("no particles".into()));
        }
        if !(self.g2 >= 0.0) || !(self.omega >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need g² ≥ 0 and ω ≥ 0, got g² = {}, ω = {}",
                self.g2, self.omega
            )));
        }
        if let Some(i) = first_disorder(&self.x) {
            return Err(Error::InvalidArgument(format!(
                "coordinates must increase strictly, x{} ≥ x{}",
                i + 1,
                i + 2
            )));
        }
        Ok(())
    }

    pub fn energy(&self) -> f64 {
        let kinetic: f64 = self
            .p
            .iter()
            .zip(&self.x)
            .map(|(p, x)| 0.5 * p * p + 0.5 * self.omega * self.omega * x * x)
            .sum();
        let mut pair = 0.0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let d = self.x[i] - self.x[j];
                pair += self.g2 / (d * d);
            }
        }
        kinetic + pair
    }
}

fn first_disorder(x: &[f64]) -> Option<usize> {
    x.windows(2).position(|w| !(w[0] < w[1]))
}

/// `P_kk = p_k`, `P_jk = i/(x_j - x_k)`.
pub fn build_lax(s: &PhasePoint) -> Result<DMatrix<Complex64>> {
    let n = s.n();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            m[(j, k)] = if j == k {
                Complex64::new(s.p[j], 0.0)
            } else {
                let d = s.x[j] - s.x[k];
                if d == 0.0 {
                    return Err(Error::Pole {
                        i: j.min(k),
                        j: j.max(k),
                    });
                }
                Complex64::new(0.0, 1.0 / d)
            };
        }
    }
    Ok(m)
}

/// `I_j = tr P^j` for `j = 1..=jmax` (real parts; the imaginary parts of
/// traces of a Hermitian matrix vanish).
pub fn trace_integrals(s: &PhasePoint, jmax: usize) -> Result<Vec<f64>> {
    let lax = build_lax(s)?;
    let mut power = lax.clone();
    let mut out = Vec::with_capacity(jmax);
    for j in 1..=jmax {
        if j > 1 {
            power = &power * &lax;
        }
        out.push(power.trace().re);
    }
    Ok(out)
}

/// The three sums of the explicit `tr P³` formula; the last enters as
/// `-i · triple`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicTraceParts {
    pub kinetic: f64,
    pub pair: f64,
    pub triple: f64,
}

impl CubicTraceParts {
    pub fn total(&self) -> Complex64 {
        Complex64::new(self.kinetic + self.pair, -self.triple)
    }
}

/// `Σ p_i³ + 3 Σ_{i≠j} p_i/(x_i - x_j)² - i Σ_{i,j,k distinct} 1/((x_i - x_j)(x_j - x_k)(x_k - x_i))`.
pub fn trace_p3_parts(s: &PhasePoint) -> CubicTraceParts {
    let n = s.n();
    let x = &s.x;
    let kinetic = s.p.iter().map(|p| p * p * p).sum();
    let mut pair = 0.0;
    let mut triple = 0.0;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let d = x[i] - x[j];
            pair += 3.0 * s.p[i] / (d * d);
            for k in (0..n).filter(|&k| k != i && k != j) {
                triple += 1.0 / ((x[i] - x[j]) * (x[j] - x[k]) * (x[k] - x[i]));
            }
        }
    }
    CubicTraceParts {
        kinetic,
        pair,
        triple,
    }
}

pub fn trace_p3_explicit(s: &PhasePoint) -> f64 {
    trace_p3_parts(s).total().re
}

fn force(s: &PhasePoint, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut f = -s.omega * s.omega * x[i];
            for j in (0..n).filter(|&j| j != i) {
                let d = x[i] - x[j];
                f += 2.0 * s.g2 / (d * d * d);
            }
            f
        })
        .collect()
}

/// One trajectory sample: time, state, energy and `I_1..I_4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub energy: f64,
    pub traces: Vec<f64>,
}

/// Largest relative deviation `|Q(t) - Q(0)| / max(|Q(0)|, 1)` seen along
/// the run, checked at every step.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DriftSummary {
    pub energy: f64,
    pub traces: Vec<f64>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub drift: DriftSummary,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory has its initial sample")
    }

    /// CSV with columns `t, x1..xN, p1..pN, H, I1..I4`.
    pub fn to_csv(&self) -> String {
        let n = self.samples[0].x.len();
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=n).map(|i| format!("p{i}")));
        header.push("H".into());
        header.extend((1..=TRACKED_TRACES).map(|i| format!("I{i}")));
        let mut out = header.join(",");
        out.push('\n');
        for s in &self.samples {
            let row: Vec<String> = std::iter::once(s.t)
                .chain(s.x.iter().copied())
                .chain(s.p.iter().copied())
                .chain(std::iter::once(s.energy))
                .chain(s.traces.iter().copied())
                .map(|v| format!("{v:e}"))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn relative(value: f64, start: f64) -> f64 {
    (value - start).abs() / start.abs().max(1.0)
}

/// Classical RK4 over `[0, T]` with step `dt`, keeping every
/// `sample_every`-th state (plus the final one).
pub fn integrate(
    s: &PhasePoint,
    duration: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    s.validate()?;
    if !(dt > 0.0) || !(duration >= 0.0) || sample_every == 0 {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0, T ≥ 0 and a positive sampling stride, got dt = {dt}, T = {duration}"
        )));
    }
    let n = s.n();
    let steps = (duration / dt).round() as usize;
    let sample = |t: f64, state: &PhasePoint| -> Result<Sample> {
        Ok(Sample {
            t,
            x: state.x.clone(),
            p: state.p.clone(),
            energy: state.energy(),
            traces: trace_integrals(state, TRACKED_TRACES)?,
        })
    };
    let mut state = s.clone();
    let first = sample(0.0, &state)?;
    let mut drift = DriftSummary {
        energy: 0.0,
        traces: vec![0.0; TRACKED_TRACES],
        steps,
    };
    let mut samples = vec![first.clone()];
    let shifted = |base: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, k)| b + h * k).collect()
    };
    for step in 1..=steps {
        let (x, p) = (&state.x, &state.p);
        let k1x = p.clone();
        let k1p = force(s, x);
        let k2x = shifted(p, &k1p, dt / 2.0);
        let k2p = force(s, &shifted(x, &k1x, dt / 2.0));
        let k3x = shifted(p, &k2p, dt / 2.0);
        let k3p = force(s, &shifted(x, &k2x, dt / 2.0));
        let k4x = shifted(p, &k3p, dt);
        let k4p = force(s, &shifted(x, &k3x, dt));
        let combine = |base: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| base[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
                .collect()
        };
        let next_x = combine(x, &k1x, &k2x, &k3x, &k4x);
        let next_p = combine(p, &k1p, &k2p, &k3p, &k4p);
        let t = step as f64 * dt;
        if let Some(i) = first_disorder(&next_x) {
            return Err(Error::Collision { t, i });
        }
        state.x = next_x;
        state.p = next_p;
        let now = sample(t, &state)?;
        drift.energy = drift.energy.max(relative(now.energy, first.energy));
        for (d, (a, b)) in drift
            .traces
            .iter_mut()
            .zip(now.traces.iter().zip(&first.traces))
        {
            *d = d.max(relative(*a, *b));
        }
        if step % sample_every == 0 || step == steps {
            samples.push(now);
        }
    }
    Ok(Trajectory { samples, drift })
}

/// `J_ij = δ_ij - w_i w_j` with `w = (1, …, 1)`.
pub fn noether_matrix(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::zero()
                    } else {
                        -Rational::one()
                    }
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(λ - A)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &[Vec<Rational>]) -> UniPoly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = if i == j {
                    coeffs[n - k + 1].clone()
                } else {
                    Rational::zero()
                };
                for l in 0..n {
                    acc += &a[i][l] * &m[l][j];
                }
                next[i][j] = acc;
            }
        }
        m = next;
        let mut tr = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / Rational::from_integer((k as i64).into());
    }
    UniPoly::from_coeffs(coeffs)
}

/// Integer roots of a monic integer polynomial with algebraic multiplicity,
/// in decreasing order. Irrational or complex roots are not reported.
pub fn integer_roots(poly: &UniPoly) -> Vec<(i64, usize)> {
    let mut p = poly.clone();
    let mut out = Vec::new();
    let mut zero_mult = 0;
    while !p.is_zero() && p.coeff(0).is_zero() && p.degree().unwrap_or(0) > 0 {
        p = UniPoly::from_coeffs(p.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    let c0 = p.coeff(0).abs().to_integer().to_i64().unwrap_or(0);
    let mut candidates: Vec<i64> = (1..=c0)
        .filter(|d| c0 % d == 0)
        .flat_map(|d| [d, -d])
        .collect();
    if zero_mult > 0 {
        out.push((0, zero_mult));
    }
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    for r in candidates {
        let root = Rational::from_integer(r.into());
        let mut mult = 0;
        while p.degree().unwrap_or(0) > 0 && p.eval(&root).is_zero() {
            p = deflate(&p, &root);
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    out.sort_unstable_by_key(|r| std::cmp::Reverse(r.0));
    out
}

/// `p(λ) / (λ - r)` for a root `r`, by synthetic division.
fn deflate(p: &UniPoly, r: &Rational) -> UniPoly {
    let c = p.coeffs();
    let mut q = vec![Rational::zero(); c.len() - 1];
    let mut carry = Rational::zero();
    for i in (1..c.len()).rev() {
        carry = &c[i] + &carry * r;
        q[i - 1] = carry.clone();
    }
    UniPoly::from_coeffs(q)
}

/// Spectrum of the Noether matrix as `(eigenvalue, multiplicity)`, computed
/// exactly from its characteristic polynomial.
pub fn noether_spectrum(n: usize) -> Result<Vec<(i64, usize)>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need N ≥ 2, got {n}")));
    }
    Ok(integer_roots(&characteristic_polynomial(&noether_matrix(
        n,
    ))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_particle_lax() {
        let s = PhasePoint::unit_coupling(vec![0.0, 1.0], vec![1.0, -1.0]);
        let lax = build_lax(&s).unwrap();
        assert_eq!(lax[(0, 0)], c(1.0, 0.0));
        assert_eq!(lax[(0, 1)], c(0.0, -1.0));
        assert_eq!(lax[(1, 0)], c(0.0, 1.0));
        assert_eq!(lax[(1, 1)], c(-1.0, 0.0));
        assert_eq!(&lax * &lax, DMatrix::identity(2, 2) * c(2.0, 0.0));
        assert_eq!(trace_integrals(&s, 3).unwrap(), vec![0.0, 4.0, 0.0]);
        assert_eq!(trace_p3_explicit(&s), 0.0);
    }

    #[test]
    fn lax_is_hermitian_and_rejects_collisions() {
        let s = PhasePoint::unit_coupling(vec![-1.0, 0.5, 2.0], vec![0.3, 1.0, -2.0]);
        let lax = build_lax(&s).unwrap();
        assert_eq!(lax.adjoint(), lax);
        let bad = PhasePoint::unit_coupling(vec![0.0, 0.0], vec![0.0, 0.0]);
        assert_eq!(build_lax(&bad), Err(Error::Pole { i: 0, j: 1 }));
    }

    #[test]
    fn cubic_trace_matches_matrix() {
        let s = PhasePoint::unit_coupling(vec![0.0, 1.0, 3.0], vec![1.0, 0.0, -1.0]);
        let m = trace_integrals(&s, 3).unwrap()[2];
        assert!((trace_p3_explicit(&s) - m).abs() < 1e-12);
        assert!(trace_p3_parts(&s).triple.abs() < 1e-12);
    }

    #[test]
    fn cubic_trace_homogeneity() {
        let s = PhasePoint::unit_coupling(vec![0.0, 1.0, 3.0], vec![1.0, 0.5, -1.0]);
        let mut t = s.clone();
        t.x.iter_mut().for_each(|v| *v *= 2.0);
        let (a, b) = (trace_p3_parts(&s), trace_p3_parts(&t));
        assert_eq!(a.kinetic, b.kinetic);
        assert!((b.pair - a.pair / 4.0).abs() < 1e-15);
        // the triple sum cancels to rounding at both scales
        assert!(b.triple.abs() <= 1e-15 && a.triple.abs() <= 1e-15);
    }

    #[test]
    fn free_flight() {
        let s = PhasePoint {
            x: vec![0.0, 1.0],
            p: vec![-0.5, 2.0],
            g2: 0.0,
            omega: 0.0,
        };
        let tr = integrate(&s, 1.0, 1e-3, 100).unwrap();
        let last = tr.last();
        assert!((last.t - 1.0).abs() < 1e-12);
        assert!((last.x[0] + 0.5).abs() < 1e-12 && (last.x[1] - 3.0).abs() < 1e-12);
        assert_eq!(tr.samples.len(), 11);
    }

    #[test]
    fn collision_aborts() {
        let s = PhasePoint {
            x: vec![0.0, 1.0],
            p: vec![1.0, -1.0],
            g2: 0.0,
            omega: 0.0,
        };
        assert!(matches!(
            integrate(&s, 1.0, 1e-2, 1),
            Err(Error::Collision { i: 0, .. })
        ));
    }

    #[test]
    fn conserved_traces_short_run() {
        let s = PhasePoint::unit_coupling(vec![0.0, 1.0, 3.0], vec![1.0, 0.0, -1.0]);
        let tr = integrate(&s, 1.0, 1e-3, 1000).unwrap();
        assert!(tr.drift.energy < 1e-9);
        assert!(tr.drift.traces.iter().all(|&d| d < 1e-9), "{:?}", tr.drift);
    }

    #[test]
    fn trapped_energy_is_conserved() {
        let s = PhasePoint {
            x: vec![-1.0, 0.0, 1.5],
            p: vec![0.2, 0.0, -0.4],
            g2: 0.7,
            omega: 1.3,
        };
        let tr = integrate(&s, 2.0, 1e-3, 100).unwrap();
        assert!(tr.drift.energy < 1e-9);
    }

    #[test]
    fn csv_layout() {
        let s = PhasePoint::unit_coupling(vec![0.0, 1.0], vec![0.0, 0.0]);
        let csv = integrate(&s, 0.01, 1e-3, 5).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x1,x2,p1,p2,H,I1,I2,I3,I4"));
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn noether_examples() {
        assert_eq!(noether_spectrum(2).unwrap(), vec![(1, 1), (-1, 1)]);
        assert_eq!(noether_spectrum(3).unwrap(), vec![(1, 2), (-2, 1)]);
        // J w = (1 - N) w for w = (1, …, 1)
        let j = noether_matrix(5);
        for row in &j {
            assert_eq!(row.iter().sum::<Rational>(), rat(-4, 1));
        }
    }

    #[test]
    fn charpoly_of_small_matrix() {
        // [[2, 1], [0, 3]] has det(λ - A) = λ² - 5λ + 6
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(0, 1), rat(3, 1)]];
        assert_eq!(
            characteristic_polynomial(&a),
            UniPoly::from_ints(&[6, -5, 1])
        );
        assert_eq!(
            integer_roots(&UniPoly::from_ints(&[0, 0, -4, 1])),
            vec![(4, 1), (0, 2)]
        );
    }
}
