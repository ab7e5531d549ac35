//! Ambient curvature of the two model geometries at the model point.
//!
//! Both curvature tensors share one bracket built from the metric, the
//! Kaehler structure J and the quaternionic structures J1, J2, J3; they differ
//! only by the overall prefactor: +1 for the compact two-plane Grassmannian
//! and -1/2 for its noncompact dual.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{AdaptedFrame, StructureBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// G_2(C^{m+2}); curvature prefactor +1.
    Compact,
    /// SU_{2,m}/S(U_2 U_m); curvature prefactor -1/2.
    Noncompact,
}

/// Which ambient geometry, with its fixed curvature prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub m: usize,
    pub n: usize,
    pub scale: f64,
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        let scale = match kind {
            SpaceKind::Compact => 1.0,
            SpaceKind::Noncompact => -0.5,
        };
        Ok(SpaceSpec {
            kind,
            m,
            n: 4 * m - 1,
            scale,
        })
    }
}

/// Evaluates the ambient curvature R(X,Y)Z by direct summation of the bracket
/// terms, scaled by the space prefactor.
pub fn curvature_vector(
    spec: &SpaceSpec,
    basis: &StructureBasis,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<DVector<f64>> {
    if spec.m != basis.m {
        return Err(Error::InvalidInput(format!(
            "space has m = {}, basis has m = {}",
            spec.m, basis.m
        )));
    }
    let dim = basis.dim;
    if x.len() != dim || y.len() != dim || z.len() != dim {
        return Err(Error::InvalidInput(format!(
            "vectors must have dimension {dim}"
        )));
    }

    let jx = &basis.j * x;
    let jy = &basis.j * y;
    let jz = &basis.j * z;

    // Constant-curvature and Kaehler lines of the bracket.
    let mut out = y.dot(z) * x - x.dot(z) * y;
    out += jy.dot(z) * &jx - jx.dot(z) * &jy - 2.0 * jx.dot(y) * &jz;

    for ja in [&basis.j1, &basis.j2, &basis.j3] {
        let jax = ja * x;
        let jay = ja * y;
        let jaz = ja * z;
        out += jay.dot(z) * &jax - jax.dot(z) * &jay - 2.0 * jax.dot(y) * &jaz;
        // J_alpha J terms; J commutes with every J_alpha.
        let jajx = ja * &jx;
        let jajy = ja * &jy;
        out += jajy.dot(z) * &jajx - jajx.dot(z) * &jajy;
    }

    Ok(spec.scale * out)
}

/// R(X,Y,Z,W) = <R(X,Y)Z, W>.
pub fn curvature_scalar4(
    spec: &SpaceSpec,
    basis: &StructureBasis,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
) -> Result<f64> {
    Ok(curvature_vector(spec, basis, x, y, z)?.dot(w))
}

/// The double sum over tangent frame pairs, sum_{i<j} R(e_i,e_j,e_j,e_i).
///
/// At h = 0 twice this sum is the hypersurface's scalar curvature doubled,
/// (n(n-1) + 9(n-1)) * scale.
pub fn ambient_frame_sum(
    spec: &SpaceSpec,
    basis: &StructureBasis,
    frame: &[DVector<f64>],
) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..frame.len() {
        for j in (i + 1)..frame.len() {
            total += curvature_scalar4(spec, basis, &frame[i], &frame[j], &frame[j], &frame[i])?;
        }
    }
    Ok(total)
}

/// Convenience overload taking an adapted frame.
pub fn ambient_frame_sum_adapted(
    spec: &SpaceSpec,
    basis: &StructureBasis,
    frame: &AdaptedFrame,
) -> Result<f64> {
    ambient_frame_sum(spec, basis, &frame.tangent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{adapted_frame, build_structure_basis, random_unit_vector};
    use nalgebra::DVector;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_vec(dim: usize, rng: &mut impl Rng) -> DVector<f64> {
        DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn vanishes_when_x_equals_y() {
        let basis = build_structure_basis(2).unwrap();
        let spec = SpaceSpec::new(SpaceKind::Compact, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = rand_vec(8, &mut rng);
        let z = rand_vec(8, &mut rng);
        let r = curvature_vector(&spec, &basis, &x, &x, &z).unwrap();
        assert!(r.norm() <= 1e-12);
    }

    #[test]
    fn noncompact_is_minus_half_compact() {
        let basis = build_structure_basis(2).unwrap();
        let cp = SpaceSpec::new(SpaceKind::Compact, 2).unwrap();
        let nc = SpaceSpec::new(SpaceKind::Noncompact, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let (x, y, z) = (rand_vec(8, &mut rng), rand_vec(8, &mut rng), rand_vec(8, &mut rng));
            let rc = curvature_vector(&cp, &basis, &x, &y, &z).unwrap();
            let rn = curvature_vector(&nc, &basis, &x, &y, &z).unwrap();
            assert!((rn - rc * -0.5).norm() <= 1e-12);
        }
    }

    #[test]
    fn antisymmetry_pair_symmetry_bianchi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [SpaceKind::Compact, SpaceKind::Noncompact] {
            for m in [1usize, 2] {
                let basis = build_structure_basis(m).unwrap();
                let spec = SpaceSpec::new(kind, m).unwrap();
                let dim = 4 * m;
                for _ in 0..25 {
                    let x = rand_vec(dim, &mut rng);
                    let y = rand_vec(dim, &mut rng);
                    let z = rand_vec(dim, &mut rng);
                    let w = rand_vec(dim, &mut rng);
                    let r = |a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>, d: &DVector<f64>| {
                        curvature_scalar4(&spec, &basis, a, b, c, d).unwrap()
                    };
                    assert!((r(&x, &y, &z, &w) + r(&y, &x, &z, &w)).abs() <= 1e-10);
                    assert!((r(&x, &y, &z, &w) + r(&x, &y, &w, &z)).abs() <= 1e-10);
                    assert!((r(&x, &y, &z, &w) - r(&z, &w, &x, &y)).abs() <= 1e-10);
                    let bianchi = curvature_vector(&spec, &basis, &x, &y, &z).unwrap()
                        + curvature_vector(&spec, &basis, &y, &z, &x).unwrap()
                        + curvature_vector(&spec, &basis, &z, &x, &y).unwrap();
                    assert!(bianchi.norm() <= 1e-10);
                }
            }
        }
    }

    // Independent term-by-term evaluation of the bracket, written against the
    // displayed formula rather than sharing code with curvature_vector.
    fn curvature_oracle(
        spec: &SpaceSpec,
        basis: &StructureBasis,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
        w: &DVector<f64>,
    ) -> f64 {
        let g = |a: &DVector<f64>, b: &DVector<f64>| a.dot(b);
        let mut s = g(y, z) * g(x, w) - g(x, z) * g(y, w);
        let j = &basis.j;
        s += g(&(j * y), z) * g(&(j * x), w) - g(&(j * x), z) * g(&(j * y), w)
            - 2.0 * g(&(j * x), y) * g(&(j * z), w);
        for ja in [&basis.j1, &basis.j2, &basis.j3] {
            s += g(&(ja * y), z) * g(&(ja * x), w) - g(&(ja * x), z) * g(&(ja * y), w)
                - 2.0 * g(&(ja * x), y) * g(&(ja * z), w);
            s += g(&(ja * (j * y)), z) * g(&(ja * (j * x)), w)
                - g(&(ja * (j * x)), z) * g(&(ja * (j * y)), w);
        }
        spec.scale * s
    }

    #[test]
    fn agrees_with_term_by_term_oracle() {
        let basis = build_structure_basis(1).unwrap();
        let spec = SpaceSpec::new(SpaceKind::Compact, 1).unwrap();
        let mut e1 = DVector::zeros(4);
        e1[0] = 1.0;
        let je1 = &basis.j * &e1;
        let direct = curvature_scalar4(&spec, &basis, &e1, &je1, &je1, &e1).unwrap();
        let oracle = curvature_oracle(&spec, &basis, &e1, &je1, &je1, &e1);
        assert!((direct - oracle).abs() <= 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let x = rand_vec(4, &mut rng);
            let y = rand_vec(4, &mut rng);
            let z = rand_vec(4, &mut rng);
            let w = rand_vec(4, &mut rng);
            let d = curvature_scalar4(&spec, &basis, &x, &y, &z, &w).unwrap();
            assert!((d - curvature_oracle(&spec, &basis, &x, &y, &z, &w)).abs() <= 1e-12);
        }
    }

    #[test]
    fn frame_sum_compact_values() {
        // (n(n-1) + 9(n-1)) / 2: 24/2 at n = 3, 200/2 at n = 11.
        for (m, expect) in [(1usize, 12.0), (3, 100.0)] {
            let basis = build_structure_basis(m).unwrap();
            let spec = SpaceSpec::new(SpaceKind::Compact, m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let e = random_unit_vector(4 * m, &mut rng);
            let frame = adapted_frame(&basis, &e, 10).unwrap();
            let s = ambient_frame_sum_adapted(&spec, &basis, &frame).unwrap();
            assert!((s - expect).abs() <= 1e-9, "m = {m}: sum = {s}");
        }
    }

    #[test]
    fn frame_sum_noncompact_is_scaled() {
        let basis = build_structure_basis(3).unwrap();
        let spec = SpaceSpec::new(SpaceKind::Noncompact, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = random_unit_vector(12, &mut rng);
        let frame = adapted_frame(&basis, &e, 11).unwrap();
        let s = ambient_frame_sum_adapted(&spec, &basis, &frame).unwrap();
        assert!((s - (-50.0)).abs() <= 1e-9, "sum = {s}");
    }

    #[test]
    fn frame_sum_is_frame_independent() {
        use crate::structure::random_tangent_frame;
        let basis = build_structure_basis(2).unwrap();
        let spec = SpaceSpec::new(SpaceKind::Compact, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let e = random_unit_vector(8, &mut rng);
        let adapted = adapted_frame(&basis, &e, 12).unwrap();
        let random = random_tangent_frame(&e, 13);
        let a = ambient_frame_sum_adapted(&spec, &basis, &adapted).unwrap();
        let b = ambient_frame_sum(&spec, &basis, &random).unwrap();
        assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let basis = build_structure_basis(2).unwrap();
        let spec = SpaceSpec::new(SpaceKind::Compact, 1).unwrap();
        let v = DVector::zeros(8);
        assert!(curvature_vector(&spec, &basis, &v, &v, &v).is_err());
    }
}
