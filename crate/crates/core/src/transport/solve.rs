//! Path-ordered transport `dW/dt = A(t) W`, `A = Σ_k ẋ_k Ω_k(x(t))`.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::path::min_gap;
use super::{ChamberPath, ConnectionMatrix};
use crate::exactalg::format_rational;
use crate::{Error, Result};

type CMatrix = DMatrix<Complex<f64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ode,
    Dyson,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted local error estimate (ODE) or norm of the last
    /// series term (Dyson).
    pub max_error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportResult {
    pub matrix: CMatrix,
    pub method: Method,
    pub step_stats: StepStats,
}

/// Induced ∞-norm (largest absolute row sum) of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let d = a - b;
    d.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `‖W - I‖∞`.
pub fn holonomy_deviation(w: &CMatrix) -> f64 {
    max_abs_diff(w, &CMatrix::identity(w.nrows(), w.ncols()))
}

fn check_dims(omega: &ConnectionMatrix, path: &ChamberPath) -> Result<()> {
    path.validate()?;
    if path.n != omega.n() {
        return Err(Error::ArityMismatch {
            left: omega.n(),
            right: path.n,
        });
    }
    Ok(())
}

fn point_on(a: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(v).map(|(a, v)| a + t * v).collect()
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 7] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MIN_STEP: f64 = 1e-14;

/// Adaptive Dormand–Prince transport. Each segment is parametrized by
/// `t ∈ [0, 1]`; the step is capped at half the distance to the nearest wall.
pub fn transport_ode(
    omega: &ConnectionMatrix,
    path: &ChamberPath,
    tol: f64,
) -> Result<TransportResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_dims(omega, path)?;
    let dim = omega.dim();
    let mut w = CMatrix::identity(dim, dim);
    let mut stats = StepStats::default();
    for (segment, (a, b)) in path.segments().enumerate() {
        let v: Vec<f64> = b.iter().zip(a).map(|(b, a)| b - a).collect();
        let speed = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if speed == 0.0 {
            continue;
        }
        let field = |t: f64| omega.eval_along(&point_on(a, &v, t), &v);
        let h_cap =
            |t: f64| 0.5 * min_gap(&point_on(a, &v, t)) / (std::f64::consts::SQRT_2 * speed);
        let mut t = 0.0;
        let mut h = h_cap(0.0).min(0.05);
        while t < 1.0 {
            h = h.min(h_cap(t)).min(1.0 - t);
            if h < MIN_STEP {
                return Err(Error::StepUnderflow { segment, t });
            }
            let mut k: Vec<CMatrix> = Vec::with_capacity(7);
            for i in 0..7 {
                let mut y = w.clone();
                for (j, aij) in A[i].iter().enumerate() {
                    if *aij != 0.0 {
                        y += &k[j] * Complex::new(h * aij, 0.0);
                    }
                }
                k.push(field(t + C[i] * h) * y);
            }
            let mut next = w.clone();
            let mut err = CMatrix::zeros(dim, dim);
            for i in 0..7 {
                next += &k[i] * Complex::new(h * B5[i], 0.0);
                err += &k[i] * Complex::new(h * (B5[i] - B4[i]), 0.0);
            }
            let scale = 1.0f64.max(next.iter().map(|z| z.norm()).fold(0.0, f64::max));
            let e = err.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
            if e <= tol {
                t += h;
                w = next;
                stats.steps += 1;
                stats.max_error_estimate = stats.max_error_estimate.max(e);
            } else {
                stats.rejected += 1;
            }
            let factor = if e == 0.0 {
                5.0
            } else {
                0.9 * (tol / e).powf(0.2)
            };
            h *= factor.clamp(0.2, 5.0);
        }
    }
    Ok(TransportResult {
        matrix: w,
        method: Method::Ode,
        step_stats: stats,
    })
}

/// Truncated time-ordered series `Σ_{m≤M} ∫_{t_1>…>t_m} A(t_1)…A(t_m)`.
///
/// Each iterated integral is accumulated on `2S + 1` nodes per segment:
/// Simpson's rule to the even nodes and the three-point partial rule
/// `h/12 (5f_0 + 8f_1 - f_2)` to the odd ones.
pub fn transport_dyson(
    omega: &ConnectionMatrix,
    path: &ChamberPath,
    order: usize,
    steps: usize,
) -> Result<TransportResult> {
    if order == 0 || steps == 0 {
        return Err(Error::InvalidArgument(
            "Dyson order and step count must be positive".into(),
        ));
    }
    check_dims(omega, path)?;
    let dim = omega.dim();
    let nodes = 2 * steps;
    let h = 1.0 / nodes as f64;
    let fields: Vec<Vec<CMatrix>> = path
        .segments()
        .map(|(a, b)| {
            let v: Vec<f64> = b.iter().zip(a).map(|(b, a)| b - a).collect();
            (0..=nodes)
                .map(|i| omega.eval_along(&point_on(a, &v, i as f64 * h), &v))
                .collect()
        })
        .collect();
    let identity = CMatrix::identity(dim, dim);
    let mut prev: Vec<Vec<CMatrix>> = fields
        .iter()
        .map(|_| vec![identity.clone(); nodes + 1])
        .collect();
    let mut total = identity.clone();
    let mut last_norm = 0.0;
    for _ in 0..order {
        let mut start = CMatrix::zeros(dim, dim);
        let mut cur = Vec::with_capacity(fields.len());
        for (field, term) in fields.iter().zip(&prev) {
            let f: Vec<CMatrix> = field.iter().zip(term).map(|(a, t)| a * t).collect();
            let mut vals = vec![start.clone(); nodes + 1];
            for i in (0..nodes).step_by(2) {
                let base = vals[i].clone();
                vals[i + 1] = &base
                    + (&f[i] * Complex::new(5.0, 0.0) + &f[i + 1] * Complex::new(8.0, 0.0)
                        - &f[i + 2])
                        * Complex::new(h / 12.0, 0.0);
                vals[i + 2] = &base
                    + (&f[i] + &f[i + 1] * Complex::new(4.0, 0.0) + &f[i + 2])
                        * Complex::new(h / 3.0, 0.0);
            }
            start = vals[nodes].clone();
            cur.push(vals);
        }
        last_norm = max_abs_diff(&start, &CMatrix::zeros(dim, dim));
        total += start;
        prev = cur;
    }
    Ok(TransportResult {
        matrix: total,
        method: Method::Dyson,
        step_stats: StepStats {
            steps: steps * fields.len(),
            rejected: 0,
            max_error_estimate: last_norm,
        },
    })
}

/// Machine-readable transport summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransportReport {
    pub method: Method,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: Vec<String>,
    pub c: String,
    pub exchange_weight: String,
    /// Row-major `[re, im]` pairs.
    pub matrix: Vec<[f64; 2]>,
    pub holonomy_deviation: Option<f64>,
    pub step_stats: StepStats,
}

impl TransportReport {
    pub fn new(omega: &ConnectionMatrix, path: &ChamberPath, result: &TransportResult) -> Self {
        Self {
            method: result.method,
            n: omega.n(),
            p: omega.momentum().to_strings(),
            c: format_rational(omega.coupling()),
            exchange_weight: format_rational(omega.exchange_weight()),
            matrix: flatten(&result.matrix),
            holonomy_deviation: path.is_closed().then(|| holonomy_deviation(&result.matrix)),
            step_stats: result.step_stats.clone(),
        }
    }
}

pub(crate) fn flatten(m: &CMatrix) -> Vec<[f64; 2]> {
    m.row_iter()
        .flat_map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
        .collect()
}

/// Frames transported along the ray `λ x⁰`, with the free phase stripped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlaneWaveReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: Vec<String>,
    pub c: String,
    pub generic_momentum: bool,
    pub lambdas: Vec<f64>,
    /// `D(λ)⁻¹ W(λ) D(1)` as row-major `[re, im]` pairs.
    pub frames: Vec<Vec<[f64; 2]>>,
    /// `‖F(λ_{i+1}) - F(λ_i)‖∞`.
    pub differences: Vec<f64>,
    /// First index from which the differences never increase.
    pub monotone_from: Option<usize>,
}

/// Transports outward along `λ x⁰` for `λ = 1, 2, 4, …, λ_max`.
pub fn plane_wave_map(
    omega: &ConnectionMatrix,
    x0: &[f64],
    lambda_max: f64,
    tol: f64,
    margin: f64,
) -> Result<PlaneWaveReport> {
    if !(lambda_max >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "λ_max must be at least 1, got {lambda_max}"
        )));
    }
    ChamberPath::with_margin(vec![x0.to_vec()], margin)?;
    let mut lambdas = vec![1.0];
    while *lambdas.last().unwrap() < lambda_max {
        lambdas.push((lambdas.last().unwrap() * 2.0).min(lambda_max));
    }
    let p = omega.momentum().to_f64();
    let phase = |lambda: f64| -> Vec<Complex<f64>> {
        omega
            .permutations()
            .iter()
            .map(|sigma| {
                let inv = sigma.inverse();
                let s: f64 = (0..omega.n())
                    .map(|k| p[inv.apply(k)] * lambda * x0[k])
                    .sum();
                Complex::new(0.0, s).exp()
            })
            .collect()
    };
    let at = |lambda: f64| x0.iter().map(|v| v * lambda).collect::<Vec<f64>>();
    let d1 = phase(1.0);
    let dim = omega.dim();
    let mut w = CMatrix::identity(dim, dim);
    let mut frames = Vec::new();
    let mut raw: Vec<CMatrix> = Vec::new();
    for (i, &lambda) in lambdas.iter().enumerate() {
        if i > 0 {
            let seg = ChamberPath::with_margin(vec![at(lambdas[i - 1]), at(lambda)], margin)?;
            w = transport_ode(omega, &seg, tol)?.matrix * w;
        }
        let dl = phase(lambda);
        let frame = CMatrix::from_fn(dim, dim, |r, c| w[(r, c)] * d1[c] / dl[r]);
        frames.push(flatten(&frame));
        raw.push(frame);
    }
    let differences: Vec<f64> = raw.windows(2).map(|f| max_abs_diff(&f[1], &f[0])).collect();
    let monotone_from =
        (0..differences.len()).find(|&i| differences[i..].windows(2).all(|d| d[1] <= d[0]));
    Ok(PlaneWaveReport {
        n: omega.n(),
        p: omega.momentum().to_strings(),
        c: format_rational(omega.coupling()),
        generic_momentum: omega.momentum().is_generic(),
        lambdas,
        frames,
        differences,
        monotone_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, Rational};
    use crate::transport::{build_local_system, Momentum};
    use num_traits::Zero;

    fn mom(v: &[i64]) -> Momentum {
        Momentum(v.iter().map(|&a| rat(a, 1)).collect())
    }

    fn triangle() -> ChamberPath {
        ChamberPath::new(vec![
            vec![0.0, 1.0, 3.0],
            vec![0.5, 2.0, 3.5],
            vec![-0.5, 1.5, 4.0],
            vec![0.0, 1.0, 3.0],
        ])
        .unwrap()
    }

    #[test]
    fn zero_length_path_is_identity() {
        let om = build_local_system(3, &mom(&[1, 2, 5]), &rat(1, 1)).unwrap();
        let p = ChamberPath::new(vec![vec![0.0, 1.0, 3.0]]).unwrap();
        let w = transport_ode(&om, &p, 1e-10).unwrap().matrix;
        assert_eq!(w, CMatrix::identity(6, 6));
    }

    #[test]
    fn free_segment_is_diagonal_exponential() {
        let om = build_local_system(2, &mom(&[1, 3]), &Rational::zero()).unwrap();
        let (a, b) = ([0.0, 1.0], [0.5, 2.5]);
        let p = ChamberPath::new(vec![a.to_vec(), b.to_vec()]).unwrap();
        let w = transport_ode(&om, &p, 1e-10).unwrap().matrix;
        // σ = e: p_1 Δx_1 + p_2 Δx_2; σ = s: p_2 Δx_1 + p_1 Δx_2
        let expect = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex::new(0.0, 1.0 * 0.5 + 3.0 * 1.5).exp(),
            Complex::new(0.0, 3.0 * 0.5 + 1.0 * 1.5).exp(),
        ]));
        assert!(max_abs_diff(&w, &expect) < 1e-9);
    }

    #[test]
    fn closed_triangle_has_trivial_holonomy() {
        let om = build_local_system(3, &mom(&[1, 2, 5]), &rat(1, 1)).unwrap();
        let w = transport_ode(&om, &triangle(), 1e-10).unwrap().matrix;
        assert!(holonomy_deviation(&w) < 1e-8, "{}", holonomy_deviation(&w));
    }

    #[test]
    fn nonflat_weight_mismatch_has_holonomy() {
        // a control: changing c along half the loop must leave a visible holonomy
        let om1 = build_local_system(3, &mom(&[1, 2, 5]), &rat(1, 1)).unwrap();
        let om2 = build_local_system(3, &mom(&[1, 2, 5]), &rat(2, 1)).unwrap();
        let t = triangle();
        let first = ChamberPath::new(t.waypoints[..3].to_vec()).unwrap();
        let back = ChamberPath::new(t.waypoints[2..].to_vec()).unwrap();
        let w = transport_ode(&om2, &back, 1e-10).unwrap().matrix
            * transport_ode(&om1, &first, 1e-10).unwrap().matrix;
        assert!(holonomy_deviation(&w) > 1e-3);
    }

    #[test]
    fn reversal_and_composition() {
        let om = build_local_system(3, &mom(&[1, -2, 3]), &rat(1, 2)).unwrap();
        let p1 = ChamberPath::new(vec![vec![0.0, 1.0, 3.0], vec![0.2, 1.5, 2.5]]).unwrap();
        let p2 = ChamberPath::new(vec![vec![0.2, 1.5, 2.5], vec![-1.0, 0.5, 2.0]]).unwrap();
        let w1 = transport_ode(&om, &p1, 1e-10).unwrap().matrix;
        let w2 = transport_ode(&om, &p2, 1e-10).unwrap().matrix;
        let w12 = transport_ode(&om, &p1.concat(&p2).unwrap(), 1e-10)
            .unwrap()
            .matrix;
        assert!(max_abs_diff(&w12, &(&w2 * &w1)) < 1e-8);
        let back = transport_ode(&om, &p1.reversed(), 1e-10).unwrap().matrix;
        assert!(holonomy_deviation(&(back * w1)) < 1e-8);
    }

    #[test]
    fn transported_frame_solves_the_system() {
        let om = build_local_system(3, &mom(&[1, 2, 5]), &rat(1, 1)).unwrap();
        let (a, b) = (vec![0.0, 1.0, 3.0], vec![0.4, 1.3, 3.6]);
        let v: Vec<f64> = b.iter().zip(&a).map(|(b, a)| b - a).collect();
        let frame = |t: f64| {
            let p = ChamberPath::new(vec![a.clone(), point_on(&a, &v, t)]).unwrap();
            transport_ode(&om, &p, 1e-12).unwrap().matrix
        };
        let t = 0.5;
        let mut prev = f64::INFINITY;
        for h in [1e-2, 5e-3] {
            let fd = (frame(t + h) - frame(t - h)) / Complex::new(2.0 * h, 0.0);
            let exact = om.eval_along(&point_on(&a, &v, t), &v) * frame(t);
            let err = max_abs_diff(&fd, &exact);
            assert!(err < 1e-2, "{err}");
            assert!(err < prev);
            prev = err;
        }
    }

    #[test]
    fn dyson_first_order_on_free_system() {
        let om = build_local_system(2, &mom(&[1, 3]), &Rational::zero()).unwrap();
        let p = ChamberPath::new(vec![vec![0.0, 1.0], vec![0.01, 1.0]]).unwrap();
        let w = transport_dyson(&om, &p, 1, 10).unwrap().matrix;
        assert!((w[(0, 0)] - Complex::new(1.0, 0.01)).norm() < 1e-14);
        assert!((w[(1, 1)] - Complex::new(1.0, 0.03)).norm() < 1e-14);
    }

    #[test]
    fn dyson_agrees_with_ode() {
        let p = Momentum(vec![rat(1, 2), rat(-1, 3), rat(1, 5)]);
        let om = build_local_system(3, &p, &rat(1, 1)).unwrap();
        let path = ChamberPath::new(vec![
            vec![0.0, 1.0, 3.0],
            vec![0.1, 1.2, 2.9],
            vec![0.2, 1.1, 3.1],
        ])
        .unwrap();
        let ode = transport_ode(&om, &path, 1e-10).unwrap().matrix;
        for (order, bound) in [(2, 1e-2), (8, 1e-6)] {
            let dyson = transport_dyson(&om, &path, order, 100).unwrap().matrix;
            let d = max_abs_diff(&ode, &dyson);
            assert!(d < bound);
        }
    }

    #[test]
    fn free_plane_wave_frames_are_constant() {
        let om = build_local_system(2, &mom(&[1, 3]), &Rational::zero()).unwrap();
        let r = plane_wave_map(&om, &[0.0, 1.0], 8.0, 1e-10, 1e-6).unwrap();
        assert_eq!(r.lambdas, vec![1.0, 2.0, 4.0, 8.0]);
        assert!(r.differences.iter().all(|&d| d < 1e-8));
        assert!(r.generic_momentum);
        let degenerate = build_local_system(2, &mom(&[2, 2]), &rat(1, 1)).unwrap();
        assert!(
            !plane_wave_map(&degenerate, &[0.0, 1.0], 2.0, 1e-8, 1e-6)
                .unwrap()
                .generic_momentum
        );
    }

    #[test]
    fn report_shape() {
        let om = build_local_system(3, &mom(&[1, 2, 5]), &rat(1, 1)).unwrap();
        let res = transport_ode(&om, &triangle(), 1e-10).unwrap();
        let v = serde_json::to_value(TransportReport::new(&om, &triangle(), &res)).unwrap();
        assert_eq!(v["matrix"].as_array().unwrap().len(), 36);
        assert_eq!(v["method"], "ode");
        assert!(v["holonomyDeviation"].as_f64().unwrap() < 1e-8);
        assert!(v["stepStats"]["steps"].as_u64().unwrap() > 0);
    }
}
