//! A single decorated hyperbolic triangle: Gram matrix, Minkowski lift, edge
//! lines, face vector, generalised angles, tilts and support function.
//!
//! The intrinsic data (vertex types, weights, signed edge lengths) determines
//! the Gram matrix of the three vertex cycles; realising it in the (2,1)-space
//! recovers all extrinsic quantities. Validity of a triangle is exactly the
//! (2,1) signature of its Gram matrix, which is independent of the weights
//! (reweighting is a diagonal congruence).

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::minkcore::{mdot, tau_prime, MinkVector, VertexType, DEFAULT_TOL};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TriError {
    /// The Gram matrix does not have signature (2,1) within tolerance.
    #[error("invalid decorated triangle: {0}")]
    InvalidTriangle(&'static str),
    /// A linear solve failed (near-singular system).
    #[error("degenerate linear system in triangle lift")]
    DegenerateSystem,
    /// The support function is undefined where ⟨X, F⟩ ≥ 0.
    #[error("support undefined: <X,F> = {0} is not negative")]
    SupportUndefined(f64),
    /// Weights must be strictly positive.
    #[error("non-positive weight {0}")]
    BadWeight(f64),
}

/// Intrinsic description of one decorated triangle.
///
/// `lengths[k]` is the signed generalised length of the edge opposite
/// corner `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedTriangle {
    pub types: [VertexType; 3],
    pub weights: [f64; 3],
    pub lengths: [f64; 3],
}

impl DecoratedTriangle {
    pub fn new(
        types: [VertexType; 3],
        weights: [f64; 3],
        lengths: [f64; 3],
    ) -> Result<Self, TriError> {
        for &w in &weights {
            if !(w > 0.0 && w.is_finite()) {
                return Err(TriError::BadWeight(w));
            }
        }
        if lengths.iter().any(|l| !l.is_finite()) {
            return Err(TriError::InvalidTriangle("non-finite edge length"));
        }
        Ok(Self {
            types,
            weights,
            lengths,
        })
    }

    /// Same triangle with different weights (validity is weight-independent).
    pub fn with_weights(&self, weights: [f64; 3]) -> Result<Self, TriError> {
        Self::new(self.types, weights, self.lengths)
    }

    /// Gram matrix of the vertex cycles: `G_kk = ε_k/ω_k²`,
    /// `G_ij = −τ′_{ε_i ε_j}(ℓ_k)/(ω_i ω_j)`.
    pub fn gram_matrix(&self) -> Matrix3<f64> {
        let mut g = Matrix3::zeros();
        for i in 0..3 {
            g[(i, i)] = f64::from(self.types[i].eps()) / (self.weights[i] * self.weights[i]);
        }
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let v = -tau_prime(self.types[i].eps() * self.types[j].eps(), self.lengths[k])
                / (self.weights[i] * self.weights[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
        g
    }

    /// Realise the Gram matrix in the (2,1)-space.
    pub fn lift(&self, tol: f64) -> Result<TriangleLift, TriError> {
        lift_triangle(self, tol)
    }

    /// Tilts `t_n = ⟨F, L_n⟩` along the three edge lines.
    pub fn tilts(&self, tol: f64) -> Result<[f64; 3], TriError> {
        let lift = self.lift(tol)?;
        Ok(lift.tilts())
    }

    /// The matrix `M` with `tilts = M · ω` for every admissible weight vector.
    ///
    /// `M_{nk} = R_{nk}/τ′_{ε_k}(d_k)` where `R` is the Gram matrix of the
    /// edge lines (unit diagonal, `−ρ′_{ε}(θ)` off-diagonal) and `d_k` the
    /// foot distances, both computed from the weight-independent centre
    /// configuration.
    pub fn tilt_coefficients(&self, tol: f64) -> Result<Matrix3<f64>, TriError> {
        let unit = self.with_weights([1.0, 1.0, 1.0])?;
        let lift = unit.lift(tol)?;
        let mut m = Matrix3::zeros();
        for k in 0..3 {
            // the dual-basis scale tau'_{eps_k}(d_k) at unit weights
            let scale = -mdot(lift.cycles[k], lift.lines[k]);
            for n in 0..3 {
                let r_nk = if n == k {
                    1.0
                } else {
                    mdot(lift.lines[n], lift.lines[k])
                };
                m[(n, k)] = r_nk / scale;
            }
        }
        Ok(m)
    }

    /// Generalised angles at the three corners: interior angle (cone),
    /// horocyclic arc length (cusp) or distance between the incident edge
    /// lines (flare).
    pub fn angles(&self, tol: f64) -> Result<[f64; 3], TriError> {
        Ok(self.lift(tol)?.angles)
    }
}

/// Extrinsic realisation of a decorated triangle.
///
/// Invariants: pairwise products of `cycles` reproduce the Gram matrix;
/// `lines[k]` is unit spacelike with `⟨L_k, C_m⟩ = 0` for `m ≠ k` and
/// `⟨L_k, C_k⟩ < 0`; `⟨C_i, F⟩ = −1`; the cycle columns are positively
/// oriented.
#[derive(Debug, Clone)]
pub struct TriangleLift {
    pub cycles: [MinkVector; 3],
    pub lines: [MinkVector; 3],
    pub face_vector: MinkVector,
    pub angles: [f64; 3],
    pub feet: [f64; 3],
}

impl TriangleLift {
    pub fn tilts(&self) -> [f64; 3] {
        [
            mdot(self.face_vector, self.lines[0]),
            mdot(self.face_vector, self.lines[1]),
            mdot(self.face_vector, self.lines[2]),
        ]
    }
}

fn vec3(v: MinkVector) -> Vector3<f64> {
    Vector3::new(v.t, v.a, v.b)
}

fn det3(c: &[MinkVector; 3]) -> f64 {
    Matrix3::from_columns(&[vec3(c[0]), vec3(c[1]), vec3(c[2])]).determinant()
}

/// Solve `⟨C_i, F⟩ = −1` for the face vector of a cycle triple.
pub fn face_vector_of(cycles: &[MinkVector; 3]) -> Result<MinkVector, TriError> {
    let a = Matrix3::from_rows(&[
        nalgebra::RowVector3::new(-cycles[0].t, cycles[0].a, cycles[0].b),
        nalgebra::RowVector3::new(-cycles[1].t, cycles[1].a, cycles[1].b),
        nalgebra::RowVector3::new(-cycles[2].t, cycles[2].a, cycles[2].b),
    ]);
    let rhs = Vector3::new(-1.0, -1.0, -1.0);
    let f = a.lu().solve(&rhs).ok_or(TriError::DegenerateSystem)?;
    Ok(MinkVector::new(f[0], f[1], f[2]))
}

/// Jacobi eigendecomposition of a symmetric 3×3 matrix.
///
/// Returns eigenvalues and the matrix whose columns are the corresponding
/// orthonormal eigenvectors. Cyclic Jacobi sweeps handle repeated
/// eigenvalues reliably, which the decorated-triangle Gram matrices hit for
/// every symmetric decoration.
fn jacobi_eigen3(g: &Matrix3<f64>) -> ([f64; 3], Matrix3<f64>) {
    let mut a = *g;
    let mut v = Matrix3::identity();
    for _ in 0..64 {
        let off = a[(0, 1)].abs() + a[(0, 2)].abs() + a[(1, 2)].abs();
        if off < 1e-300 || off < 1e-16 * (a[(0, 0)].abs() + a[(1, 1)].abs() + a[(2, 2)].abs()) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq.abs() < 1e-300 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            v *= rot;
        }
    }
    ([a[(0, 0)], a[(1, 1)], a[(2, 2)]], v)
}

/// Check that a 3×3 Gram matrix has signature (2,1) within `tol·‖G‖`.
pub fn gram_signature_ok(g: &Matrix3<f64>, tol: f64) -> bool {
    let scale = g.norm();
    if !(scale.is_finite() && scale > 0.0) {
        return false;
    }
    let (eig, _) = jacobi_eigen3(g);
    let mut ev = eig;
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev[0] < -tol * scale && ev[1] > tol * scale && ev[2] > tol * scale
}

fn lift_triangle(tri: &DecoratedTriangle, tol: f64) -> Result<TriangleLift, TriError> {
    let g = tri.gram_matrix();
    let scale = g.norm();
    let (eigenvalues, eigenvectors) = jacobi_eigen3(&g);
    // order eigenvalues ascending; expect exactly one negative
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());
    let ev = [
        eigenvalues[idx[0]],
        eigenvalues[idx[1]],
        eigenvalues[idx[2]],
    ];
    if !(ev[0] < -tol * scale && ev[1] > tol * scale && ev[2] > tol * scale) {
        return Err(TriError::InvalidTriangle("Gram signature is not (2,1)"));
    }
    let s = [(-ev[0]).sqrt(), ev[1].sqrt(), ev[2].sqrt()];
    // cycle i = i-th row of the scaled eigenvector matrix, timelike axis first
    let mut cycles = [MinkVector::new(0.0, 0.0, 0.0); 3];
    for i in 0..3 {
        cycles[i] = MinkVector::new(
            s[0] * eigenvectors[(i, idx[0])],
            s[1] * eigenvectors[(i, idx[1])],
            s[2] * eigenvectors[(i, idx[2])],
        );
    }
    // time orientation: causal cycles (cones, cusps) point to the future
    let causal: Vec<usize> = (0..3).filter(|&k| tri.types[k].eps() <= 0).collect();
    if let Some(&k0) = causal.first() {
        if cycles[k0].t < 0.0 {
            for c in &mut cycles {
                c.t = -c.t;
            }
        }
        if causal.iter().any(|&k| cycles[k].t <= 0.0) {
            return Err(TriError::InvalidTriangle("inconsistent time orientation"));
        }
    } else if cycles.iter().map(|c| c.t).sum::<f64>() < 0.0 {
        for c in &mut cycles {
            c.t = -c.t;
        }
    }
    // spatial orientation: positively oriented cycle basis
    if det3(&cycles) < 0.0 {
        for c in &mut cycles {
            c.a = -c.a;
        }
    }
    // edge lines
    let mut lines = [MinkVector::new(0.0, 0.0, 0.0); 3];
    for k in 0..3 {
        let (m, n) = ((k + 1) % 3, (k + 2) % 3);
        let u = MinkVector::mink_cross(cycles[m], cycles[n]);
        let n2 = u.norm2();
        if n2 <= 0.0 {
            return Err(TriError::InvalidTriangle("edge subspace is not spacelike"));
        }
        let mut u = u.scale(1.0 / n2.sqrt());
        if mdot(u, cycles[k]) > 0.0 {
            u = -u;
        }
        lines[k] = u;
    }
    let face_vector = face_vector_of(&cycles)?;
    // foot distances from the dual-basis scale factor
    let mut feet = [0.0; 3];
    for k in 0..3 {
        let y = -mdot(cycles[k], lines[k]) * tri.weights[k];
        feet[k] = match tri.types[k] {
            VertexType::Cone => y.asinh(),
            VertexType::Cusp => {
                if y <= 0.0 {
                    return Err(TriError::InvalidTriangle("non-positive cusp foot product"));
                }
                (2.0 * y).ln()
            }
            VertexType::Flare => {
                if y < 1.0 - DEFAULT_TOL {
                    return Err(TriError::InvalidTriangle("flare axis crosses opposite edge"));
                }
                y.max(1.0).acosh()
            }
        };
    }
    // generalised angles
    let mut angles = [0.0; 3];
    for k in 0..3 {
        let (m, n) = ((k + 1) % 3, (k + 2) % 3);
        let p = mdot(lines[m], lines[n]);
        angles[k] = match tri.types[k] {
            VertexType::Cone => (-p).clamp(-1.0, 1.0).acos(),
            VertexType::Flare => (-p).max(1.0).acosh(),
            VertexType::Cusp => cusp_arc(cycles[k], lines[m], lines[n])?,
        };
    }
    Ok(TriangleLift {
        cycles,
        lines,
        face_vector,
        angles,
        feet,
    })
}

/// Arc length of the horocycle `h` cut out between two lines through its
/// ideal centre.
///
/// The horocycle is parametrised by arc length as `x(s) = p₀ + s·u + s²/2·h`
/// with `p₀` on the cycle and `u` a unit tangent; line crossings are linear
/// in `s` because `⟨h, L⟩ = 0`.
fn cusp_arc(h: MinkVector, l1: MinkVector, l2: MinkVector) -> Result<f64, TriError> {
    let q = MinkVector::new(1.0, 0.0, 0.0);
    let hq = mdot(h, q);
    if hq >= 0.0 {
        return Err(TriError::InvalidTriangle("cusp cycle is not future-pointing"));
    }
    let beta = -1.0 / hq;
    let alpha = (1.0 - beta * beta) / 2.0;
    let p0 = h.scale(alpha) + q.scale(beta);
    let u = MinkVector::mink_cross(h, p0);
    let un = u.norm2();
    if un <= 0.0 {
        return Err(TriError::DegenerateSystem);
    }
    let u = u.scale(1.0 / un.sqrt());
    let d1 = mdot(u, l1);
    let d2 = mdot(u, l2);
    if d1 == 0.0 || d2 == 0.0 {
        return Err(TriError::DegenerateSystem);
    }
    let s1 = -mdot(p0, l1) / d1;
    let s2 = -mdot(p0, l2) / d2;
    Ok((s1 - s2).abs())
}

/// Evaluate the support function of a lifted triangle at a point `x` of the
/// hyperboloid: `H = 1/⟨x, F⟩²`, defined where `⟨x, F⟩ < 0`.
pub fn support_value(lift: &TriangleLift, x: MinkVector, tol: f64) -> Result<f64, TriError> {
    let s = mdot(x, lift.face_vector);
    if s >= -tol {
        return Err(TriError::SupportUndefined(s));
    }
    Ok(1.0 / (s * s))
}

/// Angle at corner `k` from the hyperbolic cosine law (valid for cone
/// corners). Used as an independent cross-check of the lift-based angles.
pub fn cosine_law_angle(tri: &DecoratedTriangle, k: usize) -> f64 {
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let (ei, ej) = (tri.types[i].eps(), tri.types[j].eps());
    let num = -tau_prime(ej * ei, tri.lengths[k])
        + crate::minkcore::tau(ei, tri.lengths[j]) * crate::minkcore::tau(ej, tri.lengths[i]);
    let den = tau_prime(ei, tri.lengths[j]) * tau_prime(ej, tri.lengths[i]);
    (num / den).clamp(-1.0, 1.0).acos()
}

/// Cusp arc at corner `k` from edge data alone: `2ω_k·e^{(ℓ_k−ℓ_m−ℓ_n)/2}`,
/// valid when all three corners are cusps. Test oracle for the lift route.
pub fn ideal_arc_formula(tri: &DecoratedTriangle, k: usize) -> f64 {
    let (m, n) = ((k + 1) % 3, (k + 2) % 3);
    2.0 * tri.weights[k]
        * (0.5 * (tri.lengths[k] - tri.lengths[m] - tri.lengths[n])).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn tri444(w: f64) -> DecoratedTriangle {
        let l = (1.0 + SQRT_2).acosh();
        DecoratedTriangle::new(
            [VertexType::Cone; 3],
            [w; 3],
            [l; 3],
        )
        .unwrap()
    }

    fn ideal() -> DecoratedTriangle {
        DecoratedTriangle::new([VertexType::Cusp; 3], [1.0; 3], [0.0; 3]).unwrap()
    }

    #[test]
    fn gram_ideal_triangle() {
        let g = ideal().gram_matrix();
        for i in 0..3 {
            assert_eq!(g[(i, i)], 0.0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(g[(i, j)], -0.5);
                }
            }
        }
    }

    #[test]
    fn gram_tri444() {
        let tri = tri444(0.2f64.cosh());
        let g = tri.gram_matrix();
        let w2 = 0.2f64.cosh().powi(2);
        assert!((g[(0, 0)] + 1.0 / w2).abs() < 1e-12);
        assert!((g[(0, 1)] + (1.0 + SQRT_2) / w2).abs() < 1e-12);
    }

    #[test]
    fn lift_reproduces_gram() {
        let tri = tri444(1.02);
        let g = tri.gram_matrix();
        let lift = tri.lift(DEFAULT_TOL).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (mdot(lift.cycles[i], lift.cycles[j]) - g[(i, j)]).abs() < 1e-10,
                    "entry ({i},{j})"
                );
            }
        }
        // line and face-vector invariants
        for k in 0..3 {
            assert!((lift.lines[k].norm2() - 1.0).abs() < 1e-10);
            assert!(mdot(lift.lines[k], lift.cycles[k]) < 0.0);
            for m in 0..3 {
                if m != k {
                    assert!(mdot(lift.lines[k], lift.cycles[m]).abs() < 1e-10);
                }
            }
            assert!((mdot(lift.cycles[k], lift.face_vector) + 1.0).abs() < 1e-10);
        }
        // positive orientation of the cycle basis
        let c = lift.cycles;
        let det = Matrix3::new(
            c[0].t, c[1].t, c[2].t, c[0].a, c[1].a, c[2].a, c[0].b, c[1].b, c[2].b,
        )
        .determinant();
        assert!(det > 0.0);
    }

    #[test]
    fn angles_tri444_are_pi_over_4() {
        let lift = tri444(1.02).lift(DEFAULT_TOL).unwrap();
        for k in 0..3 {
            assert!((lift.angles[k] - FRAC_PI_4).abs() < 1e-9);
        }
    }

    #[test]
    fn cosine_law_agrees_with_lift() {
        let tri = DecoratedTriangle::new(
            [VertexType::Cone, VertexType::Cone, VertexType::Cusp],
            [1.3, 1.2, 0.8],
            [0.9, 1.4, 1.2],
        )
        .unwrap();
        let lift = tri.lift(DEFAULT_TOL).unwrap();
        for k in 0..2 {
            let via_law = cosine_law_angle(&tri, k);
            assert!(
                (lift.angles[k] - via_law).abs() < 1e-9,
                "corner {k}: {} vs {via_law}",
                lift.angles[k]
            );
        }
    }

    #[test]
    fn ideal_triangle_lift() {
        let lift = ideal().lift(DEFAULT_TOL).unwrap();
        assert!(lift.face_vector.norm2() < 0.0);
        // horocyclic arcs: lift route against the edge-data formula
        for k in 0..3 {
            assert!((lift.angles[k] - 2.0).abs() < 1e-9);
            assert!((lift.angles[k] - ideal_arc_formula(&ideal(), k)).abs() < 1e-9);
        }
    }

    #[test]
    fn right_angle_detection() {
        // isosceles right-angled cone triangle: legs a, hypotenuse c with
        // cosh c = cosh^2 a
        let a = 0.8f64;
        let c = (a.cosh() * a.cosh()).acosh();
        let tri = DecoratedTriangle::new(
            [VertexType::Cone; 3],
            [1.05; 3],
            [c, a, a],
        )
        .unwrap();
        let lift = tri.lift(DEFAULT_TOL).unwrap();
        assert!((lift.angles[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(mdot(lift.lines[1], lift.lines[2]).abs() < 1e-9);
    }

    #[test]
    fn equilateral_symmetry() {
        let lift = tri444(1.3).lift(DEFAULT_TOL).unwrap();
        let t = lift.tilts();
        assert!((t[0] - t[1]).abs() < 1e-10 && (t[1] - t[2]).abs() < 1e-10);
        assert!((lift.feet[0] - lift.feet[1]).abs() < 1e-10);
    }

    #[test]
    fn tilts_of_tri444_negative_and_equal() {
        let t = tri444(1.02).tilts(DEFAULT_TOL).unwrap();
        for k in 0..3 {
            assert!(t[k] < 0.0);
            assert!((t[k] - t[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn tilt_matrix_route_matches_face_route() {
        let tri = DecoratedTriangle::new(
            [VertexType::Cone, VertexType::Cusp, VertexType::Flare],
            [1.4, 0.9, 1.1],
            [1.6, 1.7, 1.8],
        )
        .unwrap();
        let t1 = tri.tilts(DEFAULT_TOL).unwrap();
        let m = tri.tilt_coefficients(DEFAULT_TOL).unwrap();
        let w = Vector3::new(tri.weights[0], tri.weights[1], tri.weights[2]);
        let t2 = m * w;
        for k in 0..3 {
            assert!((t1[k] - t2[k]).abs() < 1e-9, "{} vs {}", t1[k], t2[k]);
        }
        // homogeneity: doubling the weights doubles the tilts
        let tri2 = tri.with_weights([2.8, 1.8, 2.2]).unwrap();
        let t3 = tri2.tilts(DEFAULT_TOL).unwrap();
        for k in 0..3 {
            assert!((t3[k] - 2.0 * t1[k]).abs() < 1e-9);
        }
        // diagonal entries are positive
        for k in 0..3 {
            assert!(m[(k, k)] > 0.0);
        }
    }

    #[test]
    fn isosceles_leg_tilts_negative() {
        // isosceles cone triangle with a small decoration: tilts along the
        // equal legs are negative
        let base = 1.0f64;
        let leg = 1.2f64;
        let tri = DecoratedTriangle::new(
            [VertexType::Cone; 3],
            [1.05; 3],
            [base, leg, leg],
        )
        .unwrap();
        let t = tri.tilts(DEFAULT_TOL).unwrap();
        assert!(t[1] < 0.0 && t[2] < 0.0);
        assert!((t[1] - t[2]).abs() < 1e-10);
    }

    #[test]
    fn dual_basis_identity() {
        let tri = tri444(1.02);
        let lift = tri.lift(DEFAULT_TOL).unwrap();
        for k in 0..3 {
            let scale = -tri.weights[k] / tau_prime(tri.types[k].eps(), lift.feet[k]);
            for m in 0..3 {
                let v = mdot(lift.cycles[k].scale(scale), lift.lines[m]);
                let want = if k == m { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn support_basics() {
        let lift = tri444(1.02).lift(DEFAULT_TOL).unwrap();
        let f = lift.face_vector;
        let x = {
            let n = (-f.norm2()).sqrt();
            let v = f.scale(1.0 / n);
            if v.t > 0.0 {
                v
            } else {
                -v
            }
        };
        // at the face-vector direction, <X,F> = -sqrt(-|F|^2)
        let h = support_value(&lift, x, DEFAULT_TOL).unwrap();
        assert!((h + 1.0 / f.norm2()).abs() < 1e-10);
        let away = -x;
        assert!(matches!(
            support_value(&lift, away, DEFAULT_TOL),
            Err(TriError::SupportUndefined(_))
        ));
    }

    #[test]
    fn support_scales_inverse_square() {
        let tri = tri444(1.02);
        let lift = tri.lift(DEFAULT_TOL).unwrap();
        let x = MinkVector::new(1.0, 0.0, 0.0);
        // the lift of the s-scaled triangle is the 1/s-scaled lift, so H
        // picks up 1/s^2
        for s in [0.5, 2.0, 10.0] {
            let tri_s = tri
                .with_weights([1.02 * s, 1.02 * s, 1.02 * s])
                .unwrap();
            let lift_s = tri_s.lift(DEFAULT_TOL).unwrap();
            let h = support_value(&lift, x, DEFAULT_TOL).unwrap();
            let hs = support_value(&lift_s, x, DEFAULT_TOL).unwrap();
            assert!((hs - h / (s * s)).abs() < 1e-9 * h.max(1.0));
        }
    }

    #[test]
    fn invalid_triangle_rejected() {
        // degenerate: zero-length all-cone triangle
        let tri = DecoratedTriangle::new([VertexType::Cone; 3], [1.1; 3], [0.0; 3]).unwrap();
        assert!(matches!(
            tri.lift(DEFAULT_TOL),
            Err(TriError::InvalidTriangle(_))
        ));
        assert!(DecoratedTriangle::new([VertexType::Cone; 3], [-1.0, 1.0, 1.0], [1.0; 3]).is_err());
    }

    #[test]
    fn validity_is_weight_independent() {
        let tri = tri444(1.02);
        assert!(tri.lift(DEFAULT_TOL).is_ok());
        // the same shape with fan-style tiny abstract weights stays valid
        let small = tri.with_weights([0.01, 0.02, 0.97]).unwrap();
        assert!(small.lift(DEFAULT_TOL).is_ok());
    }

    #[test]
    fn all_type_combinations_lift() {
        use VertexType::*;
        for t0 in [Cone, Cusp, Flare] {
            for t1 in [Cone, Cusp, Flare] {
                for t2 in [Cone, Cusp, Flare] {
                    let w = |t: VertexType| match t {
                        Cone => 1.05,
                        Cusp => 1.0,
                        Flare => 0.9,
                    };
                    let tri = DecoratedTriangle::new(
                        [t0, t1, t2],
                        [w(t0), w(t1), w(t2)],
                        [1.6, 1.7, 1.8],
                    )
                    .unwrap();
                    let lift = tri.lift(DEFAULT_TOL).unwrap();
                    let g = tri.gram_matrix();
                    for i in 0..3 {
                        for j in 0..3 {
                            assert!(
                                (mdot(lift.cycles[i], lift.cycles[j]) - g[(i, j)]).abs() < 1e-10,
                                "types {t0:?}{t1:?}{t2:?} entry ({i},{j})"
                            );
                        }
                    }
                }
            }
        }
    }
}
