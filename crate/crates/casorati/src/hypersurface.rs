//! Intrinsic invariants of a real hypersurface from its shape operator.
//!
//! Codimension is fixed at 1, so the second fundamental form against the unit
//! normal is a single symmetric n x n matrix and the normal connection is flat
//! by dimension count.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::ambient::{curvature_scalar4, SpaceKind, SpaceSpec};
use crate::error::{Error, Result};
use crate::structure::{AdaptedFrame, StructureBasis};

/// Symmetric matrix of second-fundamental-form components h_ij.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeOperator {
    pub n: usize,
    pub h: DMatrix<f64>,
}

impl ShapeOperator {
    pub fn new(h: DMatrix<f64>) -> Result<Self> {
        let n = h.nrows();
        if n == 0 || h.ncols() != n {
            return Err(Error::InvalidInput("shape operator must be square".into()));
        }
        let asym = (&h - h.transpose())
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()));
        if asym > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "shape operator must be symmetric, |h - h^T| = {asym}"
            )));
        }
        Ok(ShapeOperator { n, h })
    }

    pub fn zeros(n: usize) -> Self {
        ShapeOperator {
            n,
            h: DMatrix::zeros(n, n),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        ShapeOperator {
            n: entries.len(),
            h: DMatrix::from_diagonal(&DVector::from_column_slice(entries)),
        }
    }

    /// Seeded random symmetric matrix with entries uniform in
    /// [-entry_scale, entry_scale].
    pub fn random(n: usize, entry_scale: f64, rng: &mut impl Rng) -> Self {
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-entry_scale..entry_scale);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        ShapeOperator { n, h }
    }

    pub fn trace(&self) -> f64 {
        self.h.trace()
    }

    pub fn norm_sq(&self) -> f64 {
        self.h.iter().map(|v| v * v).sum()
    }
}

/// Closed-form invariants of the hypersurface at the model point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GeometricSummary {
    /// Scalar curvature.
    pub tau: f64,
    /// Normalized scalar curvature 2 tau / (n(n-1)).
    pub rho: f64,
    /// Squared mean curvature (trace h)^2 / n^2.
    pub mean_h2: f64,
    /// Squared norm of the second fundamental form.
    pub norm_h2: f64,
    /// Casorati curvature |h|^2 / n.
    pub casorati: f64,
}

/// The constant term of the doubled scalar curvature identity:
/// (n+9)(n-1) for the compact space, -(n+9)(n-1)/2 for the noncompact one.
pub fn ambient_constant(spec: &SpaceSpec) -> f64 {
    let n = spec.n as f64;
    match spec.kind {
        SpaceKind::Compact => (n + 9.0) * (n - 1.0),
        SpaceKind::Noncompact => -(n + 9.0) * (n - 1.0) / 2.0,
    }
}

/// Scalar curvature by brute force through the Gauss equation:
/// tau = sum_{i<j} [ R(e_i,e_j,e_j,e_i) + h_ii h_jj - h_ij^2 ].
pub fn scalar_curvature_gauss(
    spec: &SpaceSpec,
    basis: &StructureBasis,
    frame: &AdaptedFrame,
    h: &ShapeOperator,
) -> Result<f64> {
    if h.n != spec.n {
        return Err(Error::InvalidInput(format!(
            "shape operator has n = {}, space has n = {}",
            h.n, spec.n
        )));
    }
    if frame.n() != spec.n {
        return Err(Error::InvalidInput(format!(
            "frame has {} vectors, expected {}",
            frame.n(),
            spec.n
        )));
    }
    let mut tau = 0.0;
    for i in 0..spec.n {
        for j in (i + 1)..spec.n {
            let ambient = curvature_scalar4(
                spec,
                basis,
                &frame.tangent[i],
                &frame.tangent[j],
                &frame.tangent[j],
                &frame.tangent[i],
            )?;
            tau += ambient + h.h[(i, i)] * h.h[(j, j)] - h.h[(i, j)] * h.h[(i, j)];
        }
    }
    Ok(tau)
}

/// Scalar curvature from the trace identity
/// 2 tau = constant + n^2 |H|^2 - n C, with no curvature-tensor evaluation.
pub fn scalar_curvature_closed_form(spec: &SpaceSpec, h: &ShapeOperator) -> f64 {
    let n = spec.n as f64;
    let trace = h.trace();
    let two_tau = ambient_constant(spec) + trace * trace - h.norm_sq();
    debug_assert_eq!(n as usize, h.n);
    two_tau / 2.0
}

/// All closed-form invariants at once.
pub fn summarize(spec: &SpaceSpec, h: &ShapeOperator) -> GeometricSummary {
    let n = spec.n as f64;
    let tau = scalar_curvature_closed_form(spec, h);
    let trace = h.trace();
    let norm_h2 = h.norm_sq();
    GeometricSummary {
        tau,
        rho: 2.0 * tau / (n * (n - 1.0)),
        mean_h2: trace * trace / (n * n),
        norm_h2,
        casorati: norm_h2 / n,
    }
}

/// Casorati curvature of the hyperplane L = u^perp:
/// C(L) = |P h P|_F^2 / (n-1) with P = Id - u u^T.
pub fn casorati_of_hyperplane(h: &ShapeOperator, u: &DVector<f64>) -> Result<f64> {
    if u.len() != h.n {
        return Err(Error::InvalidInput(format!(
            "hyperplane normal has dimension {}, expected {}",
            u.len(),
            h.n
        )));
    }
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "hyperplane normal must be a unit vector, |u| = {}",
            u.norm()
        )));
    }
    // |PhP|^2 = |h|^2 - 2 u^T h^2 u + (u^T h u)^2.
    let hu = &h.h * u;
    let uhu = u.dot(&hu);
    let val = h.norm_sq() - 2.0 * hu.dot(&hu) + uhu * uhu;
    Ok(val / (h.n as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::SpaceKind;
    use crate::structure::{adapted_frame, build_structure_basis, random_unit_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(kind: SpaceKind, m: usize, seed: u64) -> (SpaceSpec, StructureBasis, AdaptedFrame) {
        let basis = build_structure_basis(m).unwrap();
        let spec = SpaceSpec::new(kind, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_unit_vector(4 * m, &mut rng);
        let frame = adapted_frame(&basis, &e, seed).unwrap();
        (spec, basis, frame)
    }

    #[test]
    fn gauss_tau_known_values() {
        let (spec, basis, frame) = setup(SpaceKind::Compact, 3, 1);
        let zero = ShapeOperator::zeros(11);
        let tau0 = scalar_curvature_gauss(&spec, &basis, &frame, &zero).unwrap();
        assert!((tau0 - 100.0).abs() <= 1e-9);

        let id = ShapeOperator::new(DMatrix::identity(11, 11)).unwrap();
        let tau_id = scalar_curvature_gauss(&spec, &basis, &frame, &id).unwrap();
        assert!((tau_id - 155.0).abs() <= 1e-9);

        let (spec, basis, frame) = setup(SpaceKind::Noncompact, 3, 2);
        let tau_nc = scalar_curvature_gauss(&spec, &basis, &frame, &zero).unwrap();
        assert!((tau_nc - (-50.0)).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_known_values() {
        let spec = SpaceSpec::new(SpaceKind::Compact, 3).unwrap();
        assert!((scalar_curvature_closed_form(&spec, &ShapeOperator::zeros(11)) - 100.0).abs() <= 1e-12);

        let mut entries = vec![1.0; 11];
        entries[10] = 11.0 / 3.0;
        let h = ShapeOperator::diagonal(&entries);
        let tau = scalar_curvature_closed_form(&spec, &h);
        assert!((tau - 545.0 / 3.0).abs() <= 1e-9);

        let nc = SpaceSpec::new(SpaceKind::Noncompact, 3).unwrap();
        assert!((scalar_curvature_closed_form(&nc, &ShapeOperator::zeros(11)) + 50.0).abs() <= 1e-12);
    }

    #[test]
    fn gauss_matches_closed_form_on_random_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for kind in [SpaceKind::Compact, SpaceKind::Noncompact] {
            for m in [1usize, 2] {
                let (spec, basis, frame) = setup(kind, m, 3 + m as u64);
                for _ in 0..50 {
                    let h = ShapeOperator::random(spec.n, 2.0, &mut rng);
                    let brute = scalar_curvature_gauss(&spec, &basis, &frame, &h).unwrap();
                    let closed = scalar_curvature_closed_form(&spec, &h);
                    let tol = 1e-9 * brute.abs().max(1.0);
                    assert!((brute - closed).abs() <= tol, "{brute} vs {closed}");
                }
            }
        }
    }

    #[test]
    fn summarize_known_values() {
        let spec = SpaceSpec::new(SpaceKind::Compact, 3).unwrap();
        let s = summarize(&spec, &ShapeOperator::zeros(11));
        assert_eq!(s.tau, 100.0);
        assert!((s.rho - 20.0 / 11.0).abs() <= 1e-12);
        assert_eq!(s.mean_h2, 0.0);
        assert_eq!(s.norm_h2, 0.0);
        assert_eq!(s.casorati, 0.0);

        let id = ShapeOperator::new(DMatrix::identity(11, 11)).unwrap();
        let s = summarize(&spec, &id);
        assert!((s.casorati - 1.0).abs() <= 1e-12);
        assert!((s.mean_h2 - 1.0).abs() <= 1e-12);

        let h = ShapeOperator::diagonal(&[1.0, 2.0, 3.0]);
        assert!((h.norm_sq() - 14.0).abs() <= 1e-12);
        assert!((h.norm_sq() / 3.0 - 14.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn hyperplane_casorati_examples() {
        let h = ShapeOperator::diagonal(&[1.0, 2.0, 3.0]);
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        assert!((casorati_of_hyperplane(&h, &e3).unwrap() - 2.5).abs() <= 1e-12);

        let id = ShapeOperator::new(DMatrix::identity(5, 5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unit_vector(5, &mut rng);
        assert!((casorati_of_hyperplane(&id, &u).unwrap() - 1.0).abs() <= 1e-12);

        let h = ShapeOperator::diagonal(&[0.0, 0.0, 5.0]);
        assert!(casorati_of_hyperplane(&h, &e3).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn hyperplane_casorati_matches_basis_completion() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let n = 5;
            let h = ShapeOperator::random(n, 2.0, &mut rng);
            let u = random_unit_vector(n, &mut rng);
            let via_projector = casorati_of_hyperplane(&h, &u).unwrap();

            // Explicit orthonormal completion of u, then sum h_ij^2 over the
            // completed directions.
            let basis_vecs = crate::structure::random_tangent_frame(&u, 77);
            let mut acc = 0.0;
            for a in &basis_vecs {
                for b in &basis_vecs {
                    let hab = a.dot(&(&h.h * b));
                    acc += hab * hab;
                }
            }
            let via_completion = acc / (n as f64 - 1.0);
            assert!((via_projector - via_completion).abs() <= 1e-10);
        }
    }

    #[test]
    fn casorati_scales_quadratically() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = ShapeOperator::random(4, 2.0, &mut rng);
        let scaled = ShapeOperator::new(&h.h * 3.0).unwrap();
        let u = random_unit_vector(4, &mut rng);
        let c = casorati_of_hyperplane(&h, &u).unwrap();
        let cs = casorati_of_hyperplane(&scaled, &u).unwrap();
        assert!((cs - 9.0 * c).abs() <= 1e-12 * cs.abs().max(1.0));
    }

    #[test]
    fn rejects_asymmetric_and_non_unit() {
        let mut a = DMatrix::zeros(3, 3);
        a[(0, 1)] = 1.0;
        assert!(ShapeOperator::new(a).is_err());

        let h = ShapeOperator::diagonal(&[1.0, 2.0, 3.0]);
        let u = DVector::from_vec(vec![2.0, 0.0, 0.0]);
        assert!(casorati_of_hyperplane(&h, &u).is_err());
    }
}
