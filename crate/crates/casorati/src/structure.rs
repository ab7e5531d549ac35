//! The Kaehler / quaternionic-Kaehler operator algebra on the model tangent
//! space R^{4m}, and the adapted orthonormal frame of a real hypersurface.
//!
//! The model identifies R^{4m} with H^m. The three local almost complex
//! structures J1, J2, J3 act by left quaternion multiplication by i, j, k and
//! the Kaehler structure J by right multiplication by i. Left and right
//! multiplications commute and the quaternion table gives the J1 J2 = J3
//! relations exactly, with matrix entries in {-1, 0, 1}.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{CheckRecord, VerificationReport};

/// The four structure operators on R^{4m}, as orthogonal matrices.
#[derive(Debug, Clone)]
pub struct StructureBasis {
    pub m: usize,
    pub dim: usize,
    pub j: DMatrix<f64>,
    pub j1: DMatrix<f64>,
    pub j2: DMatrix<f64>,
    pub j3: DMatrix<f64>,
}

/// Builds a 4m x 4m block-diagonal matrix from a per-quaternion 4x4 action.
fn block_diag(m: usize, block: [[f64; 4]; 4]) -> DMatrix<f64> {
    let dim = 4 * m;
    let mut a = DMatrix::zeros(dim, dim);
    for b in 0..m {
        for r in 0..4 {
            for c in 0..4 {
                a[(4 * b + r, 4 * b + c)] = block[r][c];
            }
        }
    }
    a
}

/// Constructs the structure operators for quaternionic dimension `m`.
///
/// Coordinates group in quadruples (w, x, y, z) representing w + xi + yj + zk.
pub fn build_structure_basis(m: usize) -> Result<StructureBasis> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "quaternionic dimension m must be >= 1".into(),
        ));
    }
    // Left multiplication by i: (w,x,y,z) -> (-x, w, -z, y).
    let li = [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ];
    // Left multiplication by j: (w,x,y,z) -> (-y, z, w, -x).
    let lj = [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ];
    // Left multiplication by k: (w,x,y,z) -> (-z, -y, x, w).
    let lk = [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ];
    // Right multiplication by i: (w,x,y,z) -> (-x, w, z, -y).
    let ri = [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ];
    Ok(StructureBasis {
        m,
        dim: 4 * m,
        j: block_diag(m, ri),
        j1: block_diag(m, li),
        j2: block_diag(m, lj),
        j3: block_diag(m, lk),
    })
}

fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Checks every operator identity of the structure basis and reports the worst
/// violation per identity. Pass iff every violation is <= `tol`.
pub fn verify_structure(basis: &StructureBasis, tol: f64) -> VerificationReport {
    let params = serde_json::json!({ "m": basis.m, "tol": tol });
    let id = DMatrix::<f64>::identity(basis.dim, basis.dim);
    let ops = [
        ("J", &basis.j),
        ("J1", &basis.j1),
        ("J2", &basis.j2),
        ("J3", &basis.j3),
    ];
    let mut records = Vec::new();
    let mut push = |name: String, violation: f64| {
        records.push(CheckRecord::new(name, params.clone(), violation, 1, tol));
    };

    for (name, op) in &ops {
        push(format!("{name}^2 = -Id"), max_abs(&(*op * *op + &id)));
        push(
            format!("{name}^T {name} = Id"),
            max_abs(&(op.transpose() * *op - &id)),
        );
    }
    let triples = [
        ("J1 J2 = J3", &basis.j1, &basis.j2, &basis.j3),
        ("J2 J3 = J1", &basis.j2, &basis.j3, &basis.j1),
        ("J3 J1 = J2", &basis.j3, &basis.j1, &basis.j2),
    ];
    for (name, a, b, c) in triples {
        push(name.to_string(), max_abs(&(a * b - c)));
        push(
            format!("{name} (anticommuted)"),
            max_abs(&(b * a + c)),
        );
    }
    for (name, op) in &ops[1..] {
        push(
            format!("{name} J = J {name}"),
            max_abs(&(*op * &basis.j - &basis.j * *op)),
        );
    }

    // Independence of J from span{J1,J2,J3}: the Frobenius Gram matrix of the
    // four operators must have rank 4.
    let mut gram = DMatrix::zeros(4, 4);
    for (a, (_, oa)) in ops.iter().enumerate() {
        for (b, (_, ob)) in ops.iter().enumerate() {
            gram[(a, b)] = (oa.transpose() * *ob).trace() / basis.dim as f64;
        }
    }
    let rank = gram
        .singular_values()
        .iter()
        .filter(|s| **s > 0.5)
        .count();
    records.push(CheckRecord::new(
        "rank{J,J1,J2,J3} = 4",
        params,
        (4 - rank) as f64,
        1,
        tol,
    ));

    VerificationReport::from_records(records, 0, 0.0)
}

/// The proof's ordered orthonormal tangent frame of a real hypersurface with
/// unit normal `e`: (e_1..e_{m-1}, J1 e_i.., J2 e_i.., J3 e_i.., xi_1, xi_2,
/// xi_3) with xi_alpha = -J_alpha e.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub normal: DVector<f64>,
    pub tangent: Vec<DVector<f64>>,
    pub xi: DVector<f64>,
    pub xi_alpha: [DVector<f64>; 3],
}

impl AdaptedFrame {
    pub fn n(&self) -> usize {
        self.tangent.len()
    }
}

const GS_RESIDUAL_MIN: f64 = 1e-10;
const GS_MAX_ATTEMPTS: usize = 64;

/// Builds the adapted frame for `e` over `basis`, deterministic per `seed`.
///
/// The base vectors e_1..e_{m-1} come from a quaternionic Gram-Schmidt: each
/// seeded random draw is projected orthogonal to the quaternionic span of `e`
/// and of every previously accepted base vector, then normalized.
pub fn adapted_frame(basis: &StructureBasis, e: &DVector<f64>, seed: u64) -> Result<AdaptedFrame> {
    if e.len() != basis.dim {
        return Err(Error::InvalidInput(format!(
            "normal has dimension {}, expected {}",
            e.len(),
            basis.dim
        )));
    }
    if (e.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "normal must be a unit vector, |e| = {}",
            e.norm()
        )));
    }
    let xi = -(&basis.j * e);
    let xi_alpha = [
        -(&basis.j1 * e),
        -(&basis.j2 * e),
        -(&basis.j3 * e),
    ];

    // Quaternionic spans: each accepted vector v contributes {v, J1 v, J2 v,
    // J3 v} to the set further draws are projected against.
    let mut span: Vec<DVector<f64>> = vec![
        e.clone(),
        xi_alpha[0].clone(),
        xi_alpha[1].clone(),
        xi_alpha[2].clone(),
    ];
    let mut base: Vec<DVector<f64>> = Vec::with_capacity(basis.m - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while base.len() < basis.m - 1 {
        let mut accepted = false;
        for _ in 0..GS_MAX_ATTEMPTS {
            let mut v = DVector::from_fn(basis.dim, |_, _| rng.gen_range(-1.0..1.0));
            for w in &span {
                let c = v.dot(w);
                v -= w * c;
            }
            let norm = v.norm();
            if norm >= GS_RESIDUAL_MIN {
                let v = v / norm;
                span.push(&basis.j1 * &v);
                span.push(&basis.j2 * &v);
                span.push(&basis.j3 * &v);
                span.push(v.clone());
                base.push(v);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::DegenerateFrame(format!(
                "no independent direction after {GS_MAX_ATTEMPTS} draws (found {} of {})",
                base.len(),
                basis.m - 1
            )));
        }
    }

    let mut tangent = Vec::with_capacity(basis.dim - 1);
    tangent.extend(base.iter().cloned());
    for jalpha in [&basis.j1, &basis.j2, &basis.j3] {
        for v in &base {
            tangent.push(jalpha * v);
        }
    }
    tangent.extend(xi_alpha.iter().cloned());

    Ok(AdaptedFrame {
        normal: e.clone(),
        tangent,
        xi,
        xi_alpha,
    })
}

/// Draws a seeded random unit vector in R^dim.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 1e-3 {
            return v / norm;
        }
    }
}

/// Completes a seeded random orthonormal basis of the orthogonal complement
/// of `e` (plain Gram-Schmidt, no quaternionic structure).
pub fn random_tangent_frame(
    e: &DVector<f64>,
    seed: u64,
) -> Vec<DVector<f64>> {
    let dim = e.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut span = vec![e.clone()];
    let mut frame = Vec::with_capacity(dim - 1);
    while frame.len() < dim - 1 {
        let mut v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        for w in &span {
            let c = v.dot(w);
            v -= w * c;
        }
        let norm = v.norm();
        if norm >= GS_RESIDUAL_MIN {
            let v = v / norm;
            span.push(v.clone());
            frame.push(v);
        }
    }
    frame
}
