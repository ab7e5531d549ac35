//! Verification of the optimal delta-Casorati inequalities, their equality
//! cases, and the quadratic-form machinery behind them.
//!
//! The inequality under test bounds the normalized scalar curvature rho by a
//! delta-Casorati term plus a constant that depends only on the ambient
//! geometry: (n+9)/n for the compact space, -(n+9)/(2n) for the noncompact
//! one. The quadratic polynomial P ties the bound to a constrained quadratic
//! minimization over shape-operator components whose critical points are the
//! equality-case shape operators diag(a, ..., a, n(n-1)a/r).

use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{SpaceKind, SpaceSpec};
use crate::delta::{
    delta_c_generalized, delta_c_normalized, delta_hat_c_generalized, delta_hat_c_normalized,
};
use crate::error::{Error, Result};
use crate::hypersurface::{
    ambient_constant, casorati_of_hyperplane, scalar_curvature_closed_form, summarize,
    ShapeOperator,
};

/// Which form of the inequality to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InequalityVariant {
    /// Generalized form with 0 < r < n(n-1).
    LowerR(f64),
    /// Generalized hat form with r > n(n-1).
    UpperR(f64),
    /// Normalized corollary form (r marker n(n-1)/2).
    Normalized,
    /// Normalized hat corollary form (r marker 2n(n-1)).
    NormalizedHat,
}

/// Outcome of one inequality evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityCheck {
    pub kind: SpaceKind,
    pub n: usize,
    pub r: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub pass: bool,
    pub equality_flagged: bool,
}

pub const GAP_TOL: f64 = 1e-9;
pub const EQUALITY_TOL: f64 = 1e-9;

/// Constant term of the bound: (n+9)/n compact, -(n+9)/(2n) noncompact.
pub fn bound_constant(spec: &SpaceSpec) -> f64 {
    let n = spec.n as f64;
    match spec.kind {
        SpaceKind::Compact => (n + 9.0) / n,
        SpaceKind::Noncompact => -(n + 9.0) / (2.0 * n),
    }
}

/// Evaluates one inequality: lhs = rho, rhs = delta term + constant.
pub fn check_inequality(
    spec: &SpaceSpec,
    h: &ShapeOperator,
    variant: InequalityVariant,
) -> Result<InequalityCheck> {
    if h.n != spec.n {
        return Err(Error::InvalidInput(format!(
            "shape operator has n = {}, space has n = {}",
            h.n, spec.n
        )));
    }
    let n = spec.n as f64;
    let nn1 = n * (n - 1.0);
    let constant = bound_constant(spec);
    let (delta_term, r) = match variant {
        InequalityVariant::LowerR(r) => (delta_c_generalized(h, r)? / nn1, Some(r)),
        InequalityVariant::UpperR(r) => (delta_hat_c_generalized(h, r)? / nn1, Some(r)),
        InequalityVariant::Normalized => (delta_c_normalized(h)?, None),
        InequalityVariant::NormalizedHat => (delta_hat_c_normalized(h)?, None),
    };
    let lhs = summarize(spec, h).rho;
    let rhs = delta_term + constant;
    let gap = rhs - lhs;
    Ok(InequalityCheck {
        kind: spec.kind,
        n: spec.n,
        r,
        lhs,
        rhs,
        gap,
        pass: gap >= -GAP_TOL,
        equality_flagged: gap.abs() <= EQUALITY_TOL,
    })
}

/// The equality-case shape operator diag(a, ..., a, n(n-1)a/r).
pub fn equality_shape_operator(n: usize, r: f64, a: f64) -> Result<ShapeOperator> {
    if r <= 0.0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let mut entries = vec![a; n];
    entries[n - 1] = n as f64 * (n as f64 - 1.0) * a / r;
    Ok(ShapeOperator::diagonal(&entries))
}

/// Eigenvalue multiplicity structure of a shape operator.
#[derive(Debug, Clone, Serialize)]
pub struct EigenStructure {
    /// (eigenvalue, multiplicity) groups in ascending order.
    pub groups: Vec<(f64, usize)>,
    pub quasi_umbilical: bool,
}

/// True iff h has an eigenvalue of multiplicity >= n-1 within `tol`
/// (codimension-1 specialization of invariant quasi-umbilicity).
pub fn quasi_umbilical_check(h: &ShapeOperator, tol: f64) -> EigenStructure {
    let mut eig: Vec<f64> = h.h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let scale = eig.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for v in eig {
        match groups.last_mut() {
            Some((rep, count)) if (v - *rep).abs() <= tol * scale => *count += 1,
            _ => groups.push((v, 1)),
        }
    }
    let quasi_umbilical = groups.iter().any(|(_, c)| *c >= h.n - 1);
    EigenStructure {
        groups,
        quasi_umbilical,
    }
}

/// The quadratic polynomial of the proof, for a hyperplane L = u^perp:
/// P = rC + ((n-1)(n+r)(n^2-n-r)/(rn)) C(L) - 2 tau + constant.
pub fn p_polynomial(
    spec: &SpaceSpec,
    h: &ShapeOperator,
    r: f64,
    u: &DVector<f64>,
) -> Result<f64> {
    let n = spec.n as f64;
    if !(r > 0.0 && r < n * n - n) {
        return Err(Error::InvalidParameter(format!(
            "r = {r} outside (0, {})",
            n * n - n
        )));
    }
    let c = h.norm_sq() / n;
    let cl = casorati_of_hyperplane(h, u)?;
    let coef = (n - 1.0) * (n + r) * (n * n - n - r) / (r * n);
    let two_tau = 2.0 * scalar_curvature_closed_form(spec, h);
    Ok(r * c + coef * cl - two_tau + ambient_constant(spec))
}

/// Residual check of the critical system of P: off-diagonal entries vanish
/// and the diagonal satisfies the two homogeneous trace relations.
pub fn p_critical_system_check(n: usize, r: f64, h: &ShapeOperator, tol: f64) -> bool {
    p_critical_system_residual(n, r, h) <= tol
}

/// Largest residual over all equations of the critical system.
pub fn p_critical_system_residual(n: usize, r: f64, h: &ShapeOperator) -> f64 {
    let nf = n as f64;
    let trace: f64 = h.h.trace();
    let mut worst = 0.0f64;
    for i in 0..n - 1 {
        let res = 2.0 * (nf + r) * (nf - 1.0) / r * h.h[(i, i)] - 2.0 * trace;
        worst = worst.max(res.abs());
    }
    let res = 2.0 * r / nf * h.h[(n - 1, n - 1)] - 2.0 * (trace - h.h[(n - 1, n - 1)]);
    worst = worst.max(res.abs());
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(2.0 * h.h[(i, j)].abs());
            }
        }
    }
    worst
}

/// Spectrum report of the proof's Hessian blocks over the n^2 independent
/// shape-operator coordinates: H1 on diagonal entries, H2 on off-diagonal
/// pairs below index n, H3 on the h_in / h_ni coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct HessianSpectrum {
    pub n: usize,
    pub r: f64,
    pub h1_eigenvalues: Vec<f64>,
    pub h1_expected: Vec<f64>,
    pub max_deviation: f64,
    pub h2_value: f64,
    pub h3_value: f64,
}

/// Builds H1 explicitly.
pub fn hessian_h1(n: usize, r: f64) -> DMatrix<f64> {
    let nf = n as f64;
    let diag_small = 2.0 * (nf + r) * (nf - 1.0) / r - 2.0;
    let mut h1 = DMatrix::from_element(n, n, -2.0);
    for i in 0..n - 1 {
        h1[(i, i)] = diag_small;
    }
    h1[(n - 1, n - 1)] = 2.0 * r / nf;
    h1
}

/// Computes the H1 spectrum and compares it with the closed-form eigenvalue
/// list: 0, 2(n^3-n^2+r^2)/(rn), and 2(n+r)(n-1)/r with multiplicity n-2.
pub fn p_hessian_spectrum(n: usize, r: f64) -> Result<HessianSpectrum> {
    let nf = n as f64;
    if !(r > 0.0 && r < nf * nf - nf) {
        return Err(Error::InvalidParameter(format!(
            "r = {r} outside (0, {})",
            nf * nf - nf
        )));
    }
    let h1 = hessian_h1(n, r);
    let mut computed: Vec<f64> = h1.symmetric_eigen().eigenvalues.iter().copied().collect();
    computed.sort_by(f64::total_cmp);

    let lam22 = 2.0 * (nf * nf * nf - nf * nf + r * r) / (r * nf);
    let lam33 = 2.0 * (nf + r) * (nf - 1.0) / r;
    let mut expected = vec![0.0, lam22];
    expected.extend(std::iter::repeat(lam33).take(n - 2));
    expected.sort_by(f64::total_cmp);

    let max_deviation = computed
        .iter()
        .zip(expected.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    Ok(HessianSpectrum {
        n,
        r,
        h1_eigenvalues: computed,
        h1_expected: expected,
        max_deviation,
        h2_value: lam33,
        h3_value: 2.0 * (nf + r) / nf,
    })
}

/// Verifies in exact rational arithmetic that trace(H1) equals the sum of the
/// closed-form eigenvalues.
pub fn hessian_trace_identity_exact(n: i64, r: Rational64) -> bool {
    let n_rat = Rational64::from_integer(n);
    let one = Rational64::from_integer(1);
    let two = Rational64::from_integer(2);
    let diag_small = two * (n_rat + r) * (n_rat - one) / r - two;
    let trace = Rational64::from_integer(n - 1) * diag_small + two * r / n_rat;
    let lam22 = two * (n_rat * n_rat * n_rat - n_rat * n_rat + r * r) / (r * n_rat);
    let lam33 = two * (n_rat + r) * (n_rat - one) / r;
    let claimed = lam22 + Rational64::from_integer(n - 2) * lam33;
    trace == claimed
}

/// Aggregated results of a random sweep at one r value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub min_gap: f64,
    pub mean_gap: f64,
    pub equality_hits: u64,
    pub failures: u64,
}

/// Full sweep result across an r grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub kind: SpaceKind,
    pub n: usize,
    pub rows: Vec<SweepRow>,
    pub samples_per_r: usize,
    pub seed: u64,
    pub entry_scale: f64,
    pub min_gap: f64,
    pub all_pass: bool,
}

fn sample_seed(seed: u64, r_index: usize, sample: usize) -> u64 {
    // splitmix-style mixing keeps per-sample streams independent of thread
    // scheduling.
    let mut z = seed
        .wrapping_add((r_index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add((sample as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs check_inequality over seeded random shape operators for every r in
/// the grid. The variant follows the regime of each r. Deterministic per
/// seed regardless of thread count.
pub fn random_sweep(
    spec: &SpaceSpec,
    r_grid: &[f64],
    sample_count: usize,
    seed: u64,
    entry_scale: f64,
) -> Result<SweepReport> {
    let n = spec.n as f64;
    let nn1 = n * (n - 1.0);
    let mut rows = Vec::with_capacity(r_grid.len());
    for (ri, &r) in r_grid.iter().enumerate() {
        if r <= 0.0 || (r - nn1).abs() < f64::EPSILON * nn1 {
            return Err(Error::InvalidParameter(format!(
                "r = {r} is not in either admissible regime for n = {}",
                spec.n
            )));
        }
        let variant = if r < nn1 {
            InequalityVariant::LowerR(r)
        } else {
            InequalityVariant::UpperR(r)
        };
        let gaps: Vec<f64> = (0..sample_count)
            .into_par_iter()
            .map(|si| {
                let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, ri, si));
                let h = ShapeOperator::random(spec.n, entry_scale, &mut rng);
                check_inequality(spec, &h, variant).map(|c| c.gap)
            })
            .collect::<Result<_>>()?;
        let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let mean_gap = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;
        let equality_hits = gaps.iter().filter(|g| g.abs() <= EQUALITY_TOL).count() as u64;
        let failures = gaps.iter().filter(|g| **g < -GAP_TOL).count() as u64;
        rows.push(SweepRow {
            r,
            min_gap,
            mean_gap,
            equality_hits,
            failures,
        });
    }
    let min_gap = rows
        .iter()
        .map(|row| row.min_gap)
        .fold(f64::INFINITY, f64::min);
    let all_pass = rows.iter().all(|row| row.failures == 0);
    Ok(SweepReport {
        kind: spec.kind,
        n: spec.n,
        rows,
        samples_per_r: sample_count,
        seed,
        entry_scale,
        min_gap,
        all_pass,
    })
}

/// 8-point log-spaced r grid inside (0, n(n-1)), endpoints excluded by a
/// relative margin of 1e-3.
pub fn auto_r_grid_lower(n: usize) -> Vec<f64> {
    let nn1 = n as f64 * (n as f64 - 1.0);
    log_spaced(nn1 * 1e-3, nn1 * (1.0 - 1e-3), 8)
}

/// 8-point log-spaced r grid in (n(n-1), 1000 n(n-1)], start excluded by a
/// relative margin of 1e-3.
pub fn auto_r_grid_upper(n: usize) -> Vec<f64> {
    let nn1 = n as f64 * (n as f64 - 1.0);
    log_spaced(nn1 * (1.0 + 1e-3), nn1 * 1e3, 8)
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
