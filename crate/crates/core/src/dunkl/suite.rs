//! Exhaustive identity suites over the graded spanning set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    antisymmetric_basis, commutator_dunkl, commutator_graded, restriction_residual,
    sum_of_squares_residual, symmetric_basis, verify_intertwining, DunklContext, Symmetry,
};
use crate::exactalg::{Permutation, RationalSection};

/// Outcome of one suite. `failures` holds serialized nonzero residuals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub identity: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub degree: u32,
    pub case_count: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Zerocurv,
    Intertwining,
    Sumsq,
    Permrel,
    Restriction,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Zerocurv,
        Suite::Intertwining,
        Suite::Sumsq,
        Suite::Permrel,
        Suite::Restriction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Zerocurv => "zerocurv",
            Suite::Intertwining => "intertwining",
            Suite::Sumsq => "sumsq",
            Suite::Permrel => "permrel",
            Suite::Restriction => "restriction",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn run(self, ctx: &DunklContext) -> Vec<SuiteReport> {
        match self {
            Suite::Zerocurv => vec![run_zero_curvature(ctx)],
            Suite::Intertwining => vec![run_intertwining(ctx)],
            Suite::Sumsq => vec![run_sum_of_squares(ctx)],
            Suite::Permrel => vec![run_permutation_relations(ctx)],
            Suite::Restriction => vec![
                run_restriction(ctx, Symmetry::Symmetric),
                run_restriction(ctx, Symmetry::Antisymmetric),
            ],
        }
    }
}

pub fn run_all(ctx: &DunklContext) -> Vec<SuiteReport> {
    Suite::ALL.into_iter().flat_map(|s| s.run(ctx)).collect()
}

/// Runs `check` on every basis element in parallel; failures keep basis order.
fn collect<F>(
    identity: &str,
    ctx: &DunklContext,
    basis: &[RationalSection],
    check: F,
) -> SuiteReport
where
    F: Fn(&RationalSection) -> (usize, Vec<String>) + Sync + Send,
{
    let results: Vec<(usize, Vec<String>)> = basis.par_iter().map(check).collect();
    SuiteReport {
        identity: identity.to_string(),
        n: ctx.n(),
        degree: ctx.basis_degree(),
        case_count: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn failure(label: String, f: &RationalSection, residual: &RationalSection) -> String {
    format!("{label} on [{f}]: {residual}")
}

pub fn run_zero_curvature(ctx: &DunklContext) -> SuiteReport {
    let n = ctx.n();
    let pairs = pairs(n);
    collect("zero_curvature", ctx, &ctx.spanning_set(), |f| {
        let mut fails = Vec::new();
        for &(j, k) in &pairs {
            let r = commutator_dunkl(ctx, j, k, f).expect("valid indices");
            if !r.is_zero() {
                fails.push(failure(format!("[∇{},∇{}]", j + 1, k + 1), f, &r));
            }
            let (first, second) = commutator_graded(n, j, k, f);
            for (grade, piece) in [(1, first), (2, second)] {
                if !piece.is_zero() {
                    fails.push(failure(
                        format!("[∇{},∇{}] c^{grade} part", j + 1, k + 1),
                        f,
                        &piece,
                    ));
                }
            }
        }
        (pairs.len(), fails)
    })
}

pub fn run_intertwining(ctx: &DunklContext) -> SuiteReport {
    let n = ctx.n();
    let pairs = pairs(n);
    collect("intertwining", ctx, &ctx.spanning_set(), |f| {
        let mut fails = Vec::new();
        let mut count = 0;
        for &(j, k) in &pairs {
            for l in 0..n {
                count += 1;
                let r = verify_intertwining(ctx, j, l, k, f).expect("valid indices");
                if !r.is_zero() {
                    fails.push(failure(format!("P{}{} vs ∇{}", j + 1, k + 1, l + 1), f, &r));
                }
            }
        }
        (count, fails)
    })
}

pub fn run_sum_of_squares(ctx: &DunklContext) -> SuiteReport {
    collect("sum_of_squares", ctx, &ctx.spanning_set(), |f| {
        let r = sum_of_squares_residual(ctx, f);
        let mut fails = Vec::new();
        if !r.is_zero() {
            fails.push(failure("Σ∇² - local form".into(), f, &r));
        }
        for grade in 0..=2 {
            let piece = r.coupling_component(grade);
            if !piece.is_zero() {
                fails.push(failure(
                    format!("Σ∇² - local form, c^{grade} part"),
                    f,
                    &piece,
                ));
            }
        }
        (1, fails)
    })
}

/// Involution, symmetry, disjoint commutation and fusion of transpositions,
/// checked as successive actions on every basis element.
pub fn run_permutation_relations(ctx: &DunklContext) -> SuiteReport {
    let n = ctx.n();
    let s = |i, j| Permutation::transposition(n, i, j);
    collect("permutation_relations", ctx, &ctx.spanning_set(), |f| {
        let mut fails = Vec::new();
        let mut count = 0;
        let mut check = |label: String, lhs: RationalSection, rhs: RationalSection| {
            count += 1;
            if lhs != rhs {
                fails.push(failure(label, f, &(&lhs - &rhs)));
            }
        };
        for i in 0..n {
            for k in (0..n).filter(|&k| k != i) {
                check(
                    format!("P{0}{1} = P{1}{0}", i + 1, k + 1),
                    f.permute(&s(i, k)),
                    f.permute(&s(k, i)),
                );
                check(
                    format!("P{0}{1}² = 1", i + 1, k + 1),
                    f.permute(&s(i, k)).permute(&s(i, k)),
                    f.clone(),
                );
                for l in (0..n).filter(|&l| l != i && l != k) {
                    // P_ik P_kl = P_il P_ik = P_kl P_il (rightmost acts first)
                    let a = f.permute(&s(k, l)).permute(&s(i, k));
                    let b = f.permute(&s(i, k)).permute(&s(i, l));
                    let c = f.permute(&s(i, l)).permute(&s(k, l));
                    check(
                        format!("fusion ({},{},{}) first", i + 1, k + 1, l + 1),
                        a.clone(),
                        b.clone(),
                    );
                    check(
                        format!("fusion ({},{},{}) second", i + 1, k + 1, l + 1),
                        b,
                        c,
                    );
                    for m in (0..n).filter(|&m| m != i && m != k && m != l) {
                        let lhs = f.permute(&s(l, m)).permute(&s(i, k));
                        let rhs = f.permute(&s(i, k)).permute(&s(l, m));
                        check(
                            format!("P{}{} P{}{} commute", i + 1, k + 1, l + 1, m + 1),
                            lhs,
                            rhs,
                        );
                    }
                }
            }
        }
        (count, fails)
    })
}

pub fn run_restriction(ctx: &DunklContext, sym: Symmetry) -> SuiteReport {
    let basis = match sym {
        Symmetry::Symmetric => symmetric_basis(ctx.n(), ctx.basis_degree()),
        Symmetry::Antisymmetric => antisymmetric_basis(ctx.n(), ctx.basis_degree()),
    };
    let name = match sym {
        Symmetry::Symmetric => "restriction_symmetric",
        Symmetry::Antisymmetric => "restriction_antisymmetric",
    };
    collect(name, ctx, &basis, |f| {
        let r = restriction_residual(ctx, f, sym).expect("basis has the declared symmetry");
        let fails = if r.is_zero() {
            Vec::new()
        } else {
            vec![failure("Res(Σ∇²) - Δ + 2g V₂".into(), f, &r)]
        };
        (1, fails)
    })
}
