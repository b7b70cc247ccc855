//! Desk-scale verification of the convex-hull picture: the real Möbius
//! group action on cycle vectors, bounded orbit generation, and the support
//! inequality `⟨C, F⟩ ≤ −1` of Delaunay face vectors against orbit cycles.
//!
//! The module verifies rather than constructs: group generators, seed cycles
//! and face triples arrive via an input file, and the check certifies "no
//! violation found up to the given word-length depth".

use serde::Deserialize;
use thiserror::Error;

use crate::dectri::{face_vector_of, TriError};
use crate::minkcore::{mdot, MinkVector};

pub const ORBIT_FORMAT: &str = "dechyp-orbit-v1";

#[derive(Error, Debug)]
pub enum HullError {
    #[error("group element determinant {0} is not 1")]
    BadDeterminant(f64),
    #[error("face {0}: singular defining system")]
    SingularFace(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format {0:?} (expected {ORBIT_FORMAT:?})")]
    FormatVersion(String),
}

/// An element of the real Möbius group, as a 2×2 matrix of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub m: [[f64; 2]; 2],
}

impl GroupElement {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self, HullError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() || (det - 1.0).abs() > 1e-12 {
            return Err(HullError::BadDeterminant(det));
        }
        Ok(Self { m })
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self {
            m: [[d, -b], [-c, a]],
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let a = self.m;
        let b = other.m;
        Self {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

/// The linear action `X ↦ g X gᵀ` on the (t,a,b) chart of the symmetric
/// 2×2 matrices. Preserves the bilinear form and the future time direction,
/// and is a group homomorphism in `g`.
pub fn sym2_action(g: &GroupElement, c: MinkVector) -> MinkVector {
    let [[p, q], [r, s]] = g.m;
    let tp_b = c.t + c.b;
    let tm_b = c.t - c.b;
    let x11 = p * p * tp_b + 2.0 * p * q * c.a + q * q * tm_b;
    let x22 = r * r * tp_b + 2.0 * r * s * c.a + s * s * tm_b;
    let x12 = p * r * tp_b + (q * r + p * s) * c.a + q * s * tm_b;
    MinkVector::new((x11 + x22) / 2.0, x12, (x11 - x22) / 2.0)
}

/// Deduplicated orbit of seed vectors under a generator set.
#[derive(Debug, Clone)]
pub struct OrbitStore {
    pub vectors: Vec<MinkVector>,
    pub depth: usize,
}

fn dedup_key(v: MinkVector) -> (i64, i64, i64) {
    let r = |x: f64| (x / 1e-9).round() as i64;
    (r(v.t), r(v.a), r(v.b))
}

/// Breadth-first closure of the seeds under the generators and their
/// inverses, up to the given word length.
pub fn orbit_generate(
    gens: &[GroupElement],
    seeds: &[MinkVector],
    depth: usize,
) -> OrbitStore {
    let mut all: Vec<GroupElement> = gens.to_vec();
    all.extend(gens.iter().map(GroupElement::inverse));
    let mut seen = std::collections::HashSet::new();
    let mut vectors = Vec::new();
    let mut frontier = Vec::new();
    for &s in seeds {
        if seen.insert(dedup_key(s)) {
            vectors.push(s);
            frontier.push(s);
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for &v in &frontier {
            for g in &all {
                let w = sym2_action(g, v);
                if seen.insert(dedup_key(w)) {
                    vectors.push(w);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    OrbitStore { vectors, depth }
}

/// One face's verification outcome.
#[derive(Debug, Clone)]
pub struct FaceCheck {
    pub face: usize,
    pub face_vector: MinkVector,
    pub norm2: f64,
    pub elliptic: bool,
    /// Largest `⟨C, F⟩ + 1` over the orbit (non-positive when the face
    /// supports the hull).
    pub worst_excess: f64,
    pub violations: Vec<(usize, f64)>,
}

/// Result of [`hull_support_verify`].
#[derive(Debug, Clone)]
pub struct HullReport {
    pub faces: Vec<FaceCheck>,
    pub orbit_size: usize,
    pub depth: usize,
}

impl HullReport {
    pub fn total_violations(&self) -> usize {
        self.faces.iter().map(|f| f.violations.len()).sum::<usize>()
            + self.faces.iter().filter(|f| !f.elliptic).count()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }
}

/// Check every face triple against every orbit cycle: the face vector must
/// be elliptic and satisfy `⟨C, F⟩ ≤ −1 + tol` for all orbit cycles `C`.
pub fn hull_support_verify(
    faces: &[[MinkVector; 3]],
    orbit: &OrbitStore,
    tol: f64,
) -> Result<HullReport, HullError> {
    let mut checks = Vec::with_capacity(faces.len());
    for (i, trip) in faces.iter().enumerate() {
        let f = face_vector_of(trip).map_err(|e| match e {
            TriError::DegenerateSystem => HullError::SingularFace(i),
            _ => HullError::SingularFace(i),
        })?;
        let norm2 = f.norm2();
        let elliptic = norm2 < -tol;
        let mut worst = f64::NEG_INFINITY;
        let mut violations = Vec::new();
        for (j, &c) in orbit.vectors.iter().enumerate() {
            let excess = mdot(c, f) + 1.0;
            worst = worst.max(excess);
            if excess > tol {
                violations.push((j, excess));
            }
        }
        checks.push(FaceCheck {
            face: i,
            face_vector: f,
            norm2,
            elliptic,
            worst_excess: worst,
            violations,
        });
    }
    Ok(HullReport {
        faces: checks,
        orbit_size: orbit.vectors.len(),
        depth: orbit.depth,
    })
}

/// File carrying group data, seed cycles and face triples.
#[derive(Debug, Clone)]
pub struct OrbitFile {
    pub generators: Vec<GroupElement>,
    pub seeds: Vec<MinkVector>,
    pub depth: usize,
    pub faces: Vec<[MinkVector; 3]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitFileRaw {
    format: String,
    generators: Vec<[[f64; 2]; 2]>,
    seeds: Vec<[f64; 3]>,
    depth: usize,
    faces: Vec<[[f64; 3]; 3]>,
}

fn to_vec(v: [f64; 3]) -> Result<MinkVector, HullError> {
    let m = MinkVector::new(v[0], v[1], v[2]);
    if !m.is_finite() {
        return Err(HullError::Parse("non-finite vector".into()));
    }
    Ok(m)
}

impl OrbitFile {
    pub fn parse(text: &str) -> Result<Self, HullError> {
        let raw: OrbitFileRaw =
            serde_json::from_str(text).map_err(|e| HullError::Parse(e.to_string()))?;
        if raw.format != ORBIT_FORMAT {
            return Err(HullError::FormatVersion(raw.format));
        }
        let generators = raw
            .generators
            .into_iter()
            .map(GroupElement::new)
            .collect::<Result<Vec<_>, _>>()?;
        let seeds = raw
            .seeds
            .into_iter()
            .map(to_vec)
            .collect::<Result<Vec<_>, _>>()?;
        let faces = raw
            .faces
            .into_iter()
            .map(|f| Ok([to_vec(f[0])?, to_vec(f[1])?, to_vec(f[2])?]))
            .collect::<Result<Vec<_>, HullError>>()?;
        Ok(Self {
            generators,
            seeds,
            depth: raw.depth,
            faces,
        })
    }
}
