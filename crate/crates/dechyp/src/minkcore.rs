//! The signature-(2,1) inner-product space underlying all cycle geometry.
//!
//! Hyperbolic cycles (circles, horocycles, hypercycles), points and lines are
//! represented by vectors `(t, a, b)` carrying the bilinear form
//! `⟨X,Y⟩ = −t_X t_Y + a_X a_Y + b_X b_Y`. The norm of a cycle vector encodes
//! its type and radius, pairwise products encode generalised distances, and
//! unit spacelike vectors represent hyperbolic lines.

use thiserror::Error;

/// Default tolerance for all classification and sign decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors produced by the cycle-geometry primitives.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum MinkError {
    /// A cycle weight must be strictly positive.
    #[error("weight must be positive (got {0})")]
    NonPositiveWeight(f64),
    /// The centre vector does not have the norm required by its vertex type.
    #[error("centre norm {got} is off the required value {want} for type {vtype:?}")]
    BadCenterNorm { got: f64, want: f64, vtype: VertexType },
    /// The probe vector is not a normalised point of the hyperboloid.
    #[error("expected a point with |x|^2 = -1 and t > 0 (norm {0})")]
    BadPointNorm(f64),
    /// The two cycles span no hyperbolic line (nested discs).
    #[error("no radical line: |C1 - C2|^2 = {0} is not positive")]
    NoRadicalLine(f64),
    /// Two disjoint axes/centres admit no orthogeodesic at this product value.
    #[error("no orthogeodesic: product {0} below the arcosh domain")]
    NoOrthogeodesic(f64),
    /// The cusp-cusp inversion needs a positive product.
    #[error("non-positive product {0} for a cusp-cusp edge")]
    NonPositiveProduct(f64),
    /// Input contained NaN or infinity.
    #[error("non-finite input")]
    NonFinite,
}

/// A vector in the inner-product space of signature (−,+,+).
///
/// The same type carries cycles, points, lines and face vectors; the role is
/// determined by context and by the norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkVector {
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

impl MinkVector {
    pub const fn new(t: f64, a: f64, b: f64) -> Self {
        Self { t, a, b }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.a.is_finite() && self.b.is_finite()
    }

    /// Squared norm `⟨X,X⟩`.
    pub fn norm2(&self) -> f64 {
        mdot(*self, *self)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.t * s, self.a * s, self.b * s)
    }

    /// The vector orthogonal to both arguments, `J (x × y)`.
    ///
    /// Satisfies `⟨x, cross(x,y)⟩ = ⟨y, cross(x,y)⟩ = 0`.
    pub fn mink_cross(x: MinkVector, y: MinkVector) -> MinkVector {
        MinkVector::new(
            -(x.a * y.b - x.b * y.a),
            x.b * y.t - x.t * y.b,
            x.t * y.a - x.a * y.t,
        )
    }
}

impl std::ops::Add for MinkVector {
    type Output = MinkVector;
    fn add(self, o: MinkVector) -> MinkVector {
        MinkVector::new(self.t + o.t, self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for MinkVector {
    type Output = MinkVector;
    fn sub(self, o: MinkVector) -> MinkVector {
        MinkVector::new(self.t - o.t, self.a - o.a, self.b - o.b)
    }
}

impl std::ops::Neg for MinkVector {
    type Output = MinkVector;
    fn neg(self) -> MinkVector {
        self.scale(-1.0)
    }
}

/// The bilinear form `−t_X t_Y + a_X a_Y + b_X b_Y`.
pub fn mdot(x: MinkVector, y: MinkVector) -> f64 {
    -x.t * y.t + x.a * y.a + x.b * y.b
}

/// Vertex type: cone point (−1), cusp (0) or flare (+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexType {
    Cone,
    Cusp,
    Flare,
}

impl VertexType {
    pub fn eps(self) -> i8 {
        match self {
            VertexType::Cone => -1,
            VertexType::Cusp => 0,
            VertexType::Flare => 1,
        }
    }

    pub fn from_eps(e: i8) -> Option<Self> {
        match e {
            -1 => Some(VertexType::Cone),
            0 => Some(VertexType::Cusp),
            1 => Some(VertexType::Flare),
            _ => None,
        }
    }
}

/// Length-modifier `τ_ε`: cosh, ½eˣ or sinh for ε = −1, 0, +1.
pub fn tau(eps: i8, x: f64) -> f64 {
    match eps {
        -1 => x.cosh(),
        0 => 0.5 * x.exp(),
        _ => x.sinh(),
    }
}

/// Derivative `τ′_ε`: sinh, ½eˣ or cosh. Also defined for type products.
pub fn tau_prime(eps: i8, x: f64) -> f64 {
    match eps {
        -1 => x.sinh(),
        0 => 0.5 * x.exp(),
        _ => x.cosh(),
    }
}

/// Derivative `ρ′_ε` of the angle-modifier: cos, 1 or cosh.
pub fn rho_prime(eps: i8, x: f64) -> f64 {
    match eps {
        -1 => x.cos(),
        0 => 1.0,
        _ => x.cosh(),
    }
}

/// Classification of a vector in the cycle role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleClass {
    Point,
    Circle,
    Horocycle,
    Hypercycle,
    Invalid,
}

/// Classify a cycle vector by its norm and time component.
pub fn classify_cycle(c: MinkVector, tol: f64) -> CycleClass {
    let n2 = c.norm2();
    if n2 > tol {
        CycleClass::Hypercycle
    } else if n2 >= -tol {
        if c.t > tol {
            CycleClass::Horocycle
        } else {
            CycleClass::Invalid
        }
    } else if n2 > -1.0 + tol {
        if c.t > 0.0 {
            CycleClass::Circle
        } else {
            CycleClass::Invalid
        }
    } else if n2 >= -1.0 - tol {
        if c.t > 0.0 {
            CycleClass::Point
        } else {
            CycleClass::Invalid
        }
    } else {
        CycleClass::Invalid
    }
}

/// The cycle of weight `ω = τ_ε(r)` about a normalised centre: `C = centre/ω`.
///
/// The centre must satisfy `|c|² = −1, t > 0` (cone), `|c|² = 0, t > 0` (cusp;
/// the scale of the vector fixes the auxiliary-radius gauge) or `|c|² = +1`
/// (flare).
pub fn cycle_from_weight(
    center: MinkVector,
    vtype: VertexType,
    omega: f64,
) -> Result<MinkVector, MinkError> {
    if !(center.is_finite() && omega.is_finite()) {
        return Err(MinkError::NonFinite);
    }
    if omega <= 0.0 {
        return Err(MinkError::NonPositiveWeight(omega));
    }
    let n2 = center.norm2();
    let want = f64::from(vtype.eps());
    let norm_ok = (n2 - want).abs() <= 1e-9;
    let time_ok = match vtype {
        VertexType::Cone | VertexType::Cusp => center.t > 0.0,
        VertexType::Flare => true,
    };
    if !(norm_ok && time_ok) {
        return Err(MinkError::BadCenterNorm {
            got: n2,
            want,
            vtype,
        });
    }
    Ok(center.scale(1.0 / omega))
}

/// The product `−⟨C_u, C_v⟩` of two cycles whose (auxiliary) centres are at
/// generalised distance `l`: `τ′_{ε_u ε_v}(l) / (ω_u ω_v)`.
pub fn pair_product(eu: VertexType, wu: f64, ev: VertexType, wv: f64, l: f64) -> f64 {
    tau_prime(eu.eps() * ev.eps(), l) / (wu * wv)
}

/// Inverse of [`pair_product`]: recover the generalised distance from the
/// product value `q`.
pub fn length_from_product(
    eu: VertexType,
    wu: f64,
    ev: VertexType,
    wv: f64,
    q: f64,
) -> Result<f64, MinkError> {
    let x = q * wu * wv;
    match eu.eps() * ev.eps() {
        -1 => Ok(x.asinh()),
        0 => {
            if x <= 0.0 {
                Err(MinkError::NonPositiveProduct(q))
            } else {
                Ok((2.0 * x).ln())
            }
        }
        _ => {
            if x < 1.0 - DEFAULT_TOL {
                Err(MinkError::NoOrthogeodesic(q))
            } else {
                Ok(x.max(1.0).acosh())
            }
        }
    }
}

/// Modified tangent distance from a cycle to a point of the hyperboloid,
/// evaluated as `−⟨C, x⟩`.
pub fn tangent_distance(c: MinkVector, x: MinkVector) -> Result<f64, MinkError> {
    let n2 = x.norm2();
    if (n2 + 1.0).abs() > 1e-9 * n2.abs().max(1.0) || x.t <= 0.0 {
        return Err(MinkError::BadPointNorm(n2));
    }
    Ok(-mdot(c, x))
}

/// The radical line of two cycles: the unit spacelike normalisation of
/// `C1 − C2`. Points on it have equal modified tangent distance to both.
pub fn radical_line(c1: MinkVector, c2: MinkVector, tol: f64) -> Result<MinkVector, MinkError> {
    let d = c1 - c2;
    let n2 = d.norm2();
    if n2 <= tol {
        return Err(MinkError::NoRadicalLine(n2));
    }
    Ok(d.scale(1.0 / n2.sqrt()))
}

/// Relative position of two cycles (as curves).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairPosition {
    Intersecting,
    Tangent,
    Disjoint,
}

/// Decide whether two cycles intersect, touch or are disjoint.
///
/// The Gramian is evaluated in the ambient Möbius-geometric form, which on
/// normalised cycle vectors is the (2,1)-form shifted by one:
/// `(|C1|²+1)(|C2|²+1) − (⟨C1,C2⟩+1)²`.
pub fn pair_position(c1: MinkVector, c2: MinkVector, tol: f64) -> PairPosition {
    let g = (c1.norm2() + 1.0) * (c2.norm2() + 1.0) - (mdot(c1, c2) + 1.0).powi(2);
    if g > tol {
        PairPosition::Intersecting
    } else if g >= -tol {
        PairPosition::Tangent
    } else {
        PairPosition::Disjoint
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: MinkVector = MinkVector::new(1.0, 0.0, 0.0);

    fn point_at(d: f64, phi: f64) -> MinkVector {
        MinkVector::new(d.cosh(), d.sinh() * phi.cos(), d.sinh() * phi.sin())
    }

    fn line_at(m: f64, phi: f64) -> MinkVector {
        MinkVector::new(m.sinh(), m.cosh() * phi.cos(), m.cosh() * phi.sin())
    }

    #[test]
    fn mdot_basics() {
        assert_eq!(mdot(P, P), -1.0);
        assert_eq!(
            mdot(MinkVector::new(0.0, 1.0, 0.0), MinkVector::new(0.0, 0.0, 1.0)),
            0.0
        );
        assert_eq!(mdot(MinkVector::new(1.0, 1.0, 0.0), P), -1.0);
    }

    #[test]
    fn modifiers() {
        assert_eq!(tau(0, 0.0), 0.5);
        assert_eq!(tau_prime(1, 0.0), 1.0);
        assert!(rho_prime(-1, std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn classify_table() {
        assert_eq!(classify_cycle(P, DEFAULT_TOL), CycleClass::Point);
        assert_eq!(
            classify_cycle(MinkVector::new(1.0, 1.0, 0.0), DEFAULT_TOL),
            CycleClass::Horocycle
        );
        assert_eq!(
            classify_cycle(MinkVector::new(0.5, 1.0, 0.0), DEFAULT_TOL),
            CycleClass::Hypercycle
        );
        assert_eq!(
            classify_cycle(MinkVector::new(0.7, 0.0, 0.0), DEFAULT_TOL),
            CycleClass::Circle
        );
        assert_eq!(
            classify_cycle(MinkVector::new(-1.0, 0.0, 0.0), DEFAULT_TOL),
            CycleClass::Invalid
        );
        assert_eq!(
            classify_cycle(MinkVector::new(2.0, 0.0, 0.0), DEFAULT_TOL),
            CycleClass::Invalid
        );
        // tolerance bands around the class boundaries
        let near_point = MinkVector::new((1.0 + 0.5e-9f64).sqrt(), 0.0, 0.0);
        assert_eq!(classify_cycle(near_point, DEFAULT_TOL), CycleClass::Point);
        let near_horo = MinkVector::new(1.0, (1.0 - 0.5e-9f64).sqrt(), 0.0);
        assert_eq!(classify_cycle(near_horo, DEFAULT_TOL), CycleClass::Horocycle);
        assert_eq!(
            classify_cycle(MinkVector::new(1.0, (1.0 - 5e-9f64).sqrt(), 0.0), DEFAULT_TOL),
            CycleClass::Circle
        );
    }

    #[test]
    fn cycle_norm_identity() {
        // |C|^2 = eps / omega^2 for cones and flares
        let w = 1.0f64.cosh();
        let c = cycle_from_weight(P, VertexType::Cone, w).unwrap();
        assert!((c.norm2() + 1.0 / (w * w)).abs() < 1e-12);
        let w = 1.0f64.sinh();
        let g = cycle_from_weight(MinkVector::new(0.0, 1.0, 0.0), VertexType::Flare, w).unwrap();
        assert!((g.norm2() - 1.0 / (w * w)).abs() < 1e-12);
        assert_eq!(
            cycle_from_weight(P, VertexType::Cone, 1.0).unwrap(),
            P
        );
    }

    #[test]
    fn cycle_from_weight_errors() {
        assert!(matches!(
            cycle_from_weight(P, VertexType::Cone, -1.0),
            Err(MinkError::NonPositiveWeight(_))
        ));
        assert!(matches!(
            cycle_from_weight(MinkVector::new(1.1, 0.0, 0.0), VertexType::Cone, 1.0),
            Err(MinkError::BadCenterNorm { .. })
        ));
    }

    #[test]
    fn product_examples() {
        assert!((pair_product(VertexType::Cone, 1.0, VertexType::Cone, 1.0, 0.0) - 1.0) < 1e-15);
        assert_eq!(pair_product(VertexType::Cusp, 1.0, VertexType::Cusp, 1.0, 0.0), 0.5);
        let q = pair_product(
            VertexType::Cone,
            0.5f64.cosh(),
            VertexType::Flare,
            0.7f64.sinh(),
            1.2,
        );
        let want = 1.2f64.sinh() / (0.5f64.cosh() * 0.7f64.sinh());
        assert!((q - want).abs() < 1e-12);
    }

    #[test]
    fn length_product_round_trip() {
        let cases = [
            (VertexType::Cone, 1.3, VertexType::Flare, 0.8, -0.7),
            (VertexType::Cusp, 0.9, VertexType::Cone, 1.5, 1.1),
            (VertexType::Cone, 1.2, VertexType::Cone, 1.1, 0.9),
        ];
        for (eu, wu, ev, wv, l) in cases {
            let q = pair_product(eu, wu, ev, wv, l);
            let back = length_from_product(eu, wu, ev, wv, q).unwrap();
            let want = if eu.eps() * ev.eps() == 1 { l.abs() } else { l };
            assert!((back - want).abs() < 1e-12, "{back} vs {want}");
        }
        assert!(
            (length_from_product(VertexType::Cusp, 1.0, VertexType::Cusp, 1.0, 0.5).unwrap())
                .abs()
                < 1e-15
        );
        assert!(matches!(
            length_from_product(VertexType::Flare, 1.0, VertexType::Flare, 1.0, 0.9),
            Err(MinkError::NoOrthogeodesic(_))
        ));
    }

    #[test]
    fn tangent_distance_point_pair() {
        let d = 1.0;
        let x = point_at(d, 0.0);
        assert!((tangent_distance(P, x).unwrap() - d.cosh()).abs() < 1e-12);
        // horocycle example
        let h = MinkVector::new(1.0, 1.0, 0.0);
        assert_eq!(tangent_distance(h, P).unwrap(), 1.0);
        // centre of a weighted point cycle
        let w = 1.7;
        let c = P.scale(1.0 / w);
        assert!((tangent_distance(c, P).unwrap() - 1.0 / w).abs() < 1e-12);
        assert!(tangent_distance(P, MinkVector::new(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn radical_line_properties() {
        let c1 = P;
        let c2 = point_at(1.0, 0.0);
        let l = radical_line(c1, c2, DEFAULT_TOL).unwrap();
        assert!((l.norm2() - 1.0).abs() < 1e-12);
        // equal-norm cycles sit symmetrically about their radical line
        assert!((mdot(l, c1).abs() - mdot(l, c2).abs()).abs() < 1e-12);
        assert!(matches!(
            radical_line(c1, c1, DEFAULT_TOL),
            Err(MinkError::NoRadicalLine(_))
        ));
        // equal tangent distance at sampled points of the line
        let e_t = {
            let c = mdot(P, l);
            let v = P - l.scale(c);
            let n = (-v.norm2()).sqrt();
            let v = v.scale(1.0 / n);
            if v.t > 0.0 {
                v
            } else {
                -v
            }
        };
        let e_s = MinkVector::mink_cross(l, e_t);
        let e_s = e_s.scale(1.0 / e_s.norm2().sqrt());
        for i in -4..=4 {
            let s = 0.3 * f64::from(i);
            let x = e_t.scale(s.cosh()) + e_s.scale(s.sinh());
            let t1 = tangent_distance(c1, x).unwrap();
            let t2 = tangent_distance(c2, x).unwrap();
            assert!((t1 - t2).abs() < 1e-10, "sweep at {s}: {t1} vs {t2}");
        }
    }

    #[test]
    fn pair_position_cases() {
        // two points at positive distance: disjoint
        assert_eq!(
            pair_position(P, point_at(0.8, 0.3), DEFAULT_TOL),
            PairPosition::Disjoint
        );
        // concentric circles: disjoint
        let c1 = P.scale(1.0 / 1.1f64.cosh());
        let c2 = P.scale(1.0 / 0.4f64.cosh());
        assert_eq!(pair_position(c1, c2, DEFAULT_TOL), PairPosition::Disjoint);
        // externally tangent equal circles: centre distance 2r
        let r = 0.6f64;
        let c1 = P.scale(1.0 / r.cosh());
        let c2 = point_at(2.0 * r, 0.0).scale(1.0 / r.cosh());
        assert_eq!(pair_position(c1, c2, 1e-9), PairPosition::Tangent);
        // overlapping circles
        let c2 = point_at(1.2 * r, 0.0).scale(1.0 / r.cosh());
        assert_eq!(pair_position(c1, c2, DEFAULT_TOL), PairPosition::Intersecting);
    }

    #[test]
    fn lines_are_equidistant_loci() {
        // a line vector built from two cycles agrees with tangent-distance equality
        let l = line_at(0.4, 1.1);
        assert!((l.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mdot_is_bilinear_and_symmetric() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for _ in 0..200 {
            let x = MinkVector::new(next(), next(), next());
            let y = MinkVector::new(next(), next(), next());
            let z = MinkVector::new(next(), next(), next());
            let (a, b) = (next(), next());
            assert!((mdot(x, y) - mdot(y, x)).abs() < 1e-14);
            let lhs = mdot(x.scale(a) + y.scale(b), z);
            let rhs = a * mdot(x, z) + b * mdot(y, z);
            assert!((lhs - rhs).abs() < 1e-12 * (lhs.abs() + rhs.abs() + 1.0));
        }
    }
}
