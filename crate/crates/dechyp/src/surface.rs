//! Decorated finite-type hyperbolic surfaces as half-edge complexes.
//!
//! A surface is a closed oriented triangulated complex; punctures and flares
//! are vertices carrying their type. Loops and multi-edges are first class
//! (one-vertex tori need them). Half-edge `3t + k` is the edge of triangle
//! `t` opposite corner `k`; the gluing is an involution that reverses
//! orientation.

use serde::Deserialize;
use thiserror::Error;

use crate::dectri::{DecoratedTriangle, TriError};
use crate::minkcore::{tau, VertexType};

pub const SURFACE_FORMAT: &str = "dechyp-surface-v1";

#[derive(Error, Debug)]
pub enum SurfaceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format {0:?} (expected {SURFACE_FORMAT:?})")]
    FormatVersion(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error(transparent)]
    Triangle(#[from] TriError),
}

/// One decorated vertex of the surface.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexRec {
    /// Identifier from the surface file; kept for reporting and signatures.
    pub id: u32,
    pub vtype: VertexType,
    pub weight: f64,
}

/// Per-edge record: the two glued half-edges and the signed generalised
/// length shared by them.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRec {
    pub halves: (usize, usize),
    pub length: f64,
}

/// Half-edge triangulated decorated surface.
#[derive(Debug, Clone)]
pub struct DecoratedSurface {
    verts: Vec<VertexRec>,
    tris: Vec<[usize; 3]>,
    opp: Vec<usize>,
    edge_of: Vec<usize>,
    edges: Vec<EdgeRec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    format: String,
    vertices: Vec<VertexEntry>,
    triangles: Vec<TriEntry>,
    gluing: Vec<[[usize; 2]; 2]>,
    lengths: Vec<LengthEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: u32,
    #[serde(rename = "type")]
    vtype: i8,
    weight: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriEntry {
    corners: [u32; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthEntry {
    pair: usize,
    value: f64,
}

/// Classification of one edge against the local Delaunay condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Strict,
    Flat,
    Violating,
}

/// Per-edge tilt sum and class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeStatus {
    pub edge: usize,
    pub tilt_sum: f64,
    pub class: EdgeClass,
}

/// One properness inequality `ω_u < τ_{ε_u}(ℓ)·ω_v` for a cone target `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropernessCheck {
    pub edge: usize,
    pub from: u32,
    pub to: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Outcome of [`DecoratedSurface::validate`].
///
/// Properness is checked edge-wise only (edge lengths upper-bound the true
/// surface distances), so `properness` is a necessary relaxation of the full
/// constraint system.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub weights_positive: bool,
    /// Cone vertices with `ω ≤ 1` are valid abstract weights but cannot be
    /// realised by an actual circle decoration.
    pub unrealizable_cones: Vec<u32>,
    pub triangle_errors: Vec<(usize, TriError)>,
    /// Angle sum per vertex: cone angle, total cusp arc, or flare boundary
    /// length depending on the type.
    pub vertex_angles: Vec<f64>,
    pub properness: Vec<PropernessCheck>,
    pub euler_characteristic: i64,
}

impl ValidationReport {
    /// Everything holds, including realizability of cone decorations.
    pub fn passed_strict(&self) -> bool {
        self.passed_for_flips() && self.unrealizable_cones.is_empty()
    }

    /// The requirements of the flip algorithm: positive weights, valid
    /// triangles, edge-relaxed properness.
    pub fn passed_for_flips(&self) -> bool {
        self.weights_positive
            && self.triangle_errors.is_empty()
            && self.properness.iter().all(|p| p.ok)
    }
}

impl DecoratedSurface {
    /// Parse and link a surface from its v1 text format.
    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        let file: SurfaceFile =
            serde_json::from_str(text).map_err(|e| SurfaceError::Parse(e.to_string()))?;
        if file.format != SURFACE_FORMAT {
            return Err(SurfaceError::FormatVersion(file.format));
        }
        let mut verts = Vec::with_capacity(file.vertices.len());
        let mut id_to_index = std::collections::HashMap::new();
        for v in &file.vertices {
            let vtype = VertexType::from_eps(v.vtype).ok_or_else(|| {
                SurfaceError::Parse(format!("vertex {}: type {} not in {{-1,0,1}}", v.id, v.vtype))
            })?;
            if !v.weight.is_finite() {
                return Err(SurfaceError::Parse(format!(
                    "vertex {}: non-finite weight",
                    v.id
                )));
            }
            if id_to_index.insert(v.id, verts.len()).is_some() {
                return Err(SurfaceError::Parse(format!("duplicate vertex id {}", v.id)));
            }
            verts.push(VertexRec {
                id: v.id,
                vtype,
                weight: v.weight,
            });
        }
        let mut tris = Vec::with_capacity(file.triangles.len());
        for (t, tri) in file.triangles.iter().enumerate() {
            let mut corners = [0usize; 3];
            for (k, c) in tri.corners.iter().enumerate() {
                corners[k] = *id_to_index.get(c).ok_or_else(|| {
                    SurfaceError::Parse(format!("triangle {t}: unknown vertex id {c}"))
                })?;
            }
            tris.push(corners);
        }
        let nh = 3 * tris.len();
        let mut opp = vec![usize::MAX; nh];
        let mut edge_of = vec![usize::MAX; nh];
        let mut edges = Vec::with_capacity(file.gluing.len());
        for (e, pair) in file.gluing.iter().enumerate() {
            let mut hs = [0usize; 2];
            for (s, [t, k]) in pair.iter().enumerate() {
                if *t >= tris.len() || *k >= 3 {
                    return Err(SurfaceError::Topology(format!(
                        "gluing {e}: half-edge ({t},{k}) out of range"
                    )));
                }
                hs[s] = 3 * t + k;
            }
            let (h1, h2) = (hs[0], hs[1]);
            if h1 == h2 {
                return Err(SurfaceError::Topology(format!(
                    "gluing {e}: half-edge glued to itself"
                )));
            }
            for h in [h1, h2] {
                if opp[h] != usize::MAX {
                    return Err(SurfaceError::Topology(format!(
                        "gluing {e}: half-edge {h} glued twice"
                    )));
                }
            }
            opp[h1] = h2;
            opp[h2] = h1;
            edge_of[h1] = e;
            edge_of[h2] = e;
            edges.push(EdgeRec {
                halves: (h1, h2),
                length: f64::NAN,
            });
        }
        if let Some(h) = opp.iter().position(|&o| o == usize::MAX) {
            return Err(SurfaceError::Topology(format!(
                "half-edge ({},{}) is not glued (surface must be closed)",
                h / 3,
                h % 3
            )));
        }
        for le in &file.lengths {
            if le.pair >= edges.len() {
                return Err(SurfaceError::Parse(format!(
                    "length entry references unknown pair {}",
                    le.pair
                )));
            }
            if !le.value.is_finite() {
                return Err(SurfaceError::Parse(format!(
                    "length for pair {} is not finite",
                    le.pair
                )));
            }
            if !edges[le.pair].length.is_nan() {
                return Err(SurfaceError::Parse(format!(
                    "duplicate length for pair {}",
                    le.pair
                )));
            }
            edges[le.pair].length = le.value;
        }
        if let Some(e) = edges.iter().position(|e| e.length.is_nan()) {
            return Err(SurfaceError::Parse(format!("pair {e} has no length")));
        }
        let s = Self {
            verts,
            tris,
            opp,
            edge_of,
            edges,
        };
        // gluing must reverse orientation: endpoints match crosswise
        for h1 in 0..nh {
            let h2 = s.opp[h1];
            if s.opp[h2] != h1 {
                return Err(SurfaceError::Topology("gluing is not an involution".into()));
            }
            let (t1, k1) = (h1 / 3, h1 % 3);
            let (t2, k2) = (h2 / 3, h2 % 3);
            if s.tris[t1][(k1 + 1) % 3] != s.tris[t2][(k2 + 2) % 3]
                || s.tris[t1][(k1 + 2) % 3] != s.tris[t2][(k2 + 1) % 3]
            {
                return Err(SurfaceError::Topology(format!(
                    "gluing of ({t1},{k1}) and ({t2},{k2}) does not match vertices crosswise"
                )));
            }
        }
        Ok(s)
    }

    pub fn num_vertices(&self) -> usize {
        self.verts.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.tris.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.verts.len() as i64 - self.edges.len() as i64 + self.tris.len() as i64
    }

    pub fn vertex(&self, v: usize) -> &VertexRec {
        &self.verts[v]
    }

    pub fn vertices(&self) -> &[VertexRec] {
        &self.verts
    }

    pub fn triangle_corners(&self, t: usize) -> [usize; 3] {
        self.tris[t]
    }

    pub fn edge(&self, e: usize) -> &EdgeRec {
        &self.edges[e]
    }

    pub fn edge_of_half(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    pub fn opposite(&self, h: usize) -> usize {
        self.opp[h]
    }

    /// Vertex indices at the two ends of an edge.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let h = self.edges[e].halves.0;
        let (t, k) = (h / 3, h % 3);
        (self.tris[t][(k + 1) % 3], self.tris[t][(k + 2) % 3])
    }

    /// The decoration stored in the surface file.
    pub fn stored_weights(&self) -> Vec<f64> {
        self.verts.iter().map(|v| v.weight).collect()
    }

    /// The decorated triangle induced at face `t` under the weight vector
    /// `w` (indexed by vertex).
    pub fn triangle_data(&self, t: usize, w: &[f64]) -> Result<DecoratedTriangle, TriError> {
        let c = self.tris[t];
        DecoratedTriangle::new(
            [
                self.verts[c[0]].vtype,
                self.verts[c[1]].vtype,
                self.verts[c[2]].vtype,
            ],
            [w[c[0]], w[c[1]], w[c[2]]],
            [
                self.edges[self.edge_of[3 * t]].length,
                self.edges[self.edge_of[3 * t + 1]].length,
                self.edges[self.edge_of[3 * t + 2]].length,
            ],
        )
    }

    /// Sum of the two tilts of edge `e` in its incident triangles.
    ///
    /// Triangle validity is judged at the structural default tolerance; the
    /// classification tolerance of [`Self::delaunay_report`] only thresholds
    /// the sum.
    pub fn edge_tilt_sum(&self, e: usize, w: &[f64]) -> Result<f64, TriError> {
        let (h1, h2) = self.edges[e].halves;
        let mut sum = 0.0;
        for h in [h1, h2] {
            let (t, k) = (h / 3, h % 3);
            let tilts = self.triangle_data(t, w)?.tilts(crate::minkcore::DEFAULT_TOL)?;
            sum += tilts[k];
        }
        Ok(sum)
    }

    /// Classify every edge against the local Delaunay condition.
    pub fn delaunay_report(&self, w: &[f64], tol: f64) -> Result<Vec<EdgeStatus>, TriError> {
        (0..self.edges.len())
            .map(|e| {
                let s = self.edge_tilt_sum(e, w)?;
                let class = if s > tol {
                    EdgeClass::Violating
                } else if s >= -tol {
                    EdgeClass::Flat
                } else {
                    EdgeClass::Strict
                };
                Ok(EdgeStatus {
                    edge: e,
                    tilt_sum: s,
                    class,
                })
            })
            .collect()
    }

    /// Validate the surface under the weight vector `w`.
    pub fn validate(&self, w: &[f64], tol: f64) -> ValidationReport {
        let weights_positive = w.iter().all(|x| x.is_finite() && *x > 0.0);
        let mut unrealizable_cones = Vec::new();
        for (v, rec) in self.verts.iter().enumerate() {
            if rec.vtype == VertexType::Cone && w[v] <= 1.0 {
                unrealizable_cones.push(rec.id);
            }
        }
        let mut triangle_errors = Vec::new();
        let mut vertex_angles = vec![0.0; self.verts.len()];
        if weights_positive {
            for t in 0..self.tris.len() {
                match self.triangle_data(t, w).and_then(|tri| tri.lift(tol)) {
                    Ok(lift) => {
                        for k in 0..3 {
                            vertex_angles[self.tris[t][k]] += lift.angles[k];
                        }
                    }
                    Err(e) => triangle_errors.push((t, e)),
                }
            }
        }
        let mut properness = Vec::new();
        if weights_positive {
            for (e, rec) in self.edges.iter().enumerate() {
                let (u, v) = self.edge_endpoints(e);
                for (x, y) in [(u, v), (v, u)] {
                    if self.verts[y].vtype == VertexType::Cone {
                        let lhs = w[x];
                        let rhs = tau(self.verts[x].vtype.eps(), rec.length) * w[y];
                        properness.push(PropernessCheck {
                            edge: e,
                            from: self.verts[x].id,
                            to: self.verts[y].id,
                            lhs,
                            rhs,
                            ok: lhs < rhs,
                        });
                    }
                }
            }
        }
        ValidationReport {
            weights_positive,
            unrealizable_cones,
            triangle_errors,
            vertex_angles,
            properness,
            euler_characteristic: self.euler_characteristic(),
        }
    }

    /// Shift the auxiliary-centre gauge at a cusp vertex: every incident
    /// half-edge adds `delta` to its edge length (loops add it twice) and the
    /// weight is multiplied by `e^delta`. All pairwise cycle products are
    /// unchanged.
    pub fn shift_cusp_gauge(&mut self, v: usize, delta: f64) -> Result<(), SurfaceError> {
        if self.verts[v].vtype != VertexType::Cusp {
            return Err(SurfaceError::Topology(format!(
                "vertex {} is not a cusp",
                self.verts[v].id
            )));
        }
        for t in 0..self.tris.len() {
            for k in 0..3 {
                // half-edge 3t+k is opposite corner k; it is incident to v
                // once per endpoint corner equal to v
                let h = 3 * t + k;
                for c in [(k + 1) % 3, (k + 2) % 3] {
                    if self.tris[t][c] == v {
                        let e = self.edge_of[h];
                        // each geometric edge has two half-edges; apply the
                        // shift only from its first half to avoid doubling
                        if self.edges[e].halves.0 == h {
                            self.edges[e].length += delta;
                        }
                    }
                }
            }
        }
        self.verts[v].weight *= delta.exp();
        Ok(())
    }

    pub(crate) fn set_edge_length(&mut self, e: usize, l: f64) {
        self.edges[e].length = l;
    }

    pub(crate) fn rewire(
        &mut self,
        t: usize,
        t2: usize,
        corners_t: [usize; 3],
        corners_t2: [usize; 3],
    ) {
        self.tris[t] = corners_t;
        self.tris[t2] = corners_t2;
    }

    pub(crate) fn glue(&mut self, ha: usize, hb: usize, e: usize) {
        self.opp[ha] = hb;
        self.opp[hb] = ha;
        self.edge_of[ha] = e;
        self.edge_of[hb] = e;
        self.edges[e].halves = (ha, hb);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TRI444: &str = include_str!("../tests/fixtures/tri444.json");
    pub(crate) const CUSP_TORUS: &str = include_str!("../tests/fixtures/cusp_torus.json");
    pub(crate) const FLARE_TORUS: &str = include_str!("../tests/fixtures/flare_torus.json");

    #[test]
    fn parse_tri444() {
        let s = DecoratedSurface::parse(TRI444).unwrap();
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.num_triangles(), 2);
        assert_eq!(s.num_edges(), 3);
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn parse_cusp_torus() {
        let s = DecoratedSurface::parse(CUSP_TORUS).unwrap();
        assert_eq!(s.num_vertices(), 1);
        assert_eq!(s.num_triangles(), 2);
        assert_eq!(s.num_edges(), 3);
        assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn reject_self_glued_half_edge() {
        let text = r#"{
            "format": "dechyp-surface-v1",
            "vertices": [{"id": 0, "type": 0, "weight": 1.0}],
            "triangles": [{"corners": [0,0,0]}, {"corners": [0,0,0]}],
            "gluing": [[[0,0],[0,0]], [[0,1],[1,1]], [[0,2],[1,2]], [[1,0],[1,0]]],
            "lengths": [{"pair":0,"value":0.0},{"pair":1,"value":0.0},{"pair":2,"value":0.0},{"pair":3,"value":0.0}]
        }"#;
        assert!(matches!(
            DecoratedSurface::parse(text),
            Err(SurfaceError::Topology(_))
        ));
    }

    #[test]
    fn reject_unknown_field_and_bad_format() {
        let bad = CUSP_TORUS.replacen("dechyp-surface-v1", "dechyp-surface-v2", 1);
        assert!(matches!(
            DecoratedSurface::parse(&bad),
            Err(SurfaceError::FormatVersion(_))
        ));
        let extra = CUSP_TORUS.replacen("\"format\"", "\"extra\": 1, \"format\"", 1);
        assert!(matches!(
            DecoratedSurface::parse(&extra),
            Err(SurfaceError::Parse(_))
        ));
    }

    #[test]
    fn reject_dangling_gluing() {
        let text = r#"{
            "format": "dechyp-surface-v1",
            "vertices": [{"id": 0, "type": 0, "weight": 1.0}],
            "triangles": [{"corners": [0,0,0]}, {"corners": [0,0,0]}],
            "gluing": [[[0,0],[1,0]], [[0,1],[1,1]]],
            "lengths": [{"pair":0,"value":0.0},{"pair":1,"value":0.0}]
        }"#;
        assert!(matches!(
            DecoratedSurface::parse(text),
            Err(SurfaceError::Topology(_))
        ));
    }

    #[test]
    fn tri444_validates_with_right_cone_angles() {
        let s = DecoratedSurface::parse(TRI444).unwrap();
        let w = s.stored_weights();
        let report = s.validate(&w, 1e-9);
        assert!(report.passed_strict(), "{report:?}");
        for v in 0..3 {
            assert!(
                (report.vertex_angles[v] - std::f64::consts::FRAC_PI_2).abs() < 1e-9,
                "cone angle at {v}: {}",
                report.vertex_angles[v]
            );
        }
    }

    #[test]
    fn flare_torus_validation_has_no_properness_rows() {
        let s = DecoratedSurface::parse(FLARE_TORUS).unwrap();
        let report = s.validate(&s.stored_weights(), 1e-9);
        assert!(report.passed_strict());
        assert!(report.properness.is_empty());
    }

    #[test]
    fn cone_weight_at_most_one_is_flagged() {
        let s = DecoratedSurface::parse(TRI444).unwrap();
        let mut w = s.stored_weights();
        w[0] = 1.0;
        let report = s.validate(&w, 1e-9);
        assert_eq!(report.unrealizable_cones, vec![0]);
        assert!(!report.passed_strict());
        assert!(report.passed_for_flips());
    }

    #[test]
    fn tilt_sums_tri444_strict_at_center() {
        let s = DecoratedSurface::parse(TRI444).unwrap();
        let w = s.stored_weights();
        let report = s.delaunay_report(&w, 1e-9).unwrap();
        for st in &report {
            assert_eq!(st.class, EdgeClass::Strict);
        }
    }

    #[test]
    fn flare_torus_diagonal_flat_for_scaled_weights() {
        let s = DecoratedSurface::parse(FLARE_TORUS).unwrap();
        for scale in [0.2, 1.0, 3.7] {
            let w = vec![scale];
            let report = s.delaunay_report(&w, 1e-9).unwrap();
            assert_eq!(report[1].class, EdgeClass::Flat, "{report:?}");
            assert_eq!(report[0].class, EdgeClass::Strict);
            assert_eq!(report[2].class, EdgeClass::Strict);
        }
    }

    #[test]
    fn tilt_sum_scales_linearly() {
        let s = DecoratedSurface::parse(TRI444).unwrap();
        let w = s.stored_weights();
        let w2: Vec<f64> = w.iter().map(|x| 3.0 * x).collect();
        for e in 0..3 {
            let a = s.edge_tilt_sum(e, &w).unwrap();
            let b = s.edge_tilt_sum(e, &w2).unwrap();
            assert!((b - 3.0 * a).abs() < 1e-9);
        }
    }

    #[test]
    fn infinite_tolerance_makes_everything_flat() {
        let s = DecoratedSurface::parse(TRI444).unwrap();
        let report = s
            .delaunay_report(&s.stored_weights(), f64::INFINITY)
            .unwrap();
        assert!(report.iter().all(|e| e.class == EdgeClass::Flat));
    }

    #[test]
    fn cusp_gauge_invariance() {
        let s = DecoratedSurface::parse(CUSP_TORUS).unwrap();
        let base: Vec<f64> = s
            .delaunay_report(&s.stored_weights(), 1e-9)
            .unwrap()
            .iter()
            .map(|e| e.tilt_sum)
            .collect();
        for delta in [-1.0, 0.3, 2.0] {
            let mut shifted = s.clone();
            shifted.shift_cusp_gauge(0, delta).unwrap();
            let w = shifted.stored_weights();
            let sums: Vec<f64> = shifted
                .delaunay_report(&w, 1e-9)
                .unwrap()
                .iter()
                .map(|e| e.tilt_sum)
                .collect();
            for (a, b) in base.iter().zip(&sums) {
                assert!((a - b).abs() < 1e-12, "delta {delta}: {a} vs {b}");
            }
        }
    }
}
