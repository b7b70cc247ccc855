//! Geometric edge flips, the terminating flip algorithm, tessellation
//! fingerprints and the Voronoi dual.
//!
//! A flip lays out the two triangles of an edge in a common chart (the
//! second apex is the root of a quadratic constraint system), replaces the
//! diagonal combinatorially and recomputes its length from the cycle
//! product. The driver flips strictly violating edges in FIFO order until no
//! violation remains; the logged support values certify the monotonicity
//! that makes this terminate.

use std::collections::VecDeque;

use thiserror::Error;

use crate::dectri::{face_vector_of, TriError};
use crate::minkcore::{length_from_product, mdot, MinkError, MinkVector};
use crate::surface::{DecoratedSurface, EdgeClass, SurfaceError};

#[derive(Error, Debug)]
pub enum FlipError {
    #[error("edge {edge}: no real apex root (discriminant {discriminant:.3e})")]
    DegenerateQuad { edge: usize, discriminant: f64 },
    #[error("edge {edge} is not flippable: {reason}")]
    NotFlippable { edge: usize, reason: &'static str },
    #[error("flip limit exceeded after {flips} flips (max {max_flips}); max |edge length| {max_edge_length:.6} vs decoration bound {length_bound:.6}")]
    MaxFlipsExceeded {
        flips: usize,
        max_flips: usize,
        max_edge_length: f64,
        length_bound: f64,
    },
    #[error("improper decoration detected at edge {edge}: {reason}")]
    ImproperDecoration { edge: usize, reason: String },
    #[error("surface is not converged: edge {edge} has tilt sum {tilt_sum:.3e}")]
    NotConverged { edge: usize, tilt_sum: f64 },
    #[error(transparent)]
    Triangle(#[from] TriError),
    #[error(transparent)]
    Mink(#[from] MinkError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// The two triangles of an interior edge laid out in one chart.
///
/// `cycles = [C1, C2, C3, C4]` with `C2, C3` on the diagonal, `C1` the left
/// apex and `C4` the right apex; `⟨L, C1⟩ < 0 < ⟨L, C4⟩`.
#[derive(Debug, Clone)]
pub struct QuadLift {
    pub cycles: [MinkVector; 4],
    pub line: MinkVector,
    pub f_left: MinkVector,
    pub f_right: MinkVector,
}

/// One record of the flip log.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipLogEntry {
    pub edge: usize,
    pub tilt_sum: f64,
    pub old_length: f64,
    pub new_length: f64,
    pub support_before: f64,
    pub support_after: f64,
}

/// Why the driver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxFlips,
}

/// Audit trail of one [`flip_to_delaunay`] run.
#[derive(Debug, Clone)]
pub struct FlipResult {
    pub surface: DecoratedSurface,
    pub flips: usize,
    pub log: Vec<FlipLogEntry>,
    pub reason: Termination,
}

/// Canonical fingerprint of the tessellation obtained by merging triangles
/// across flat edges.
///
/// Each merged face is the cyclically-minimal sequence of
/// `(boundary vertex id, boundary edge length in units of 1e-6)` along its
/// counterclockwise boundary; faces are sorted. Invariant under relabelling
/// of triangles and half-edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TessellationSignature {
    pub faces: Vec<Vec<(u32, i64)>>,
}

impl std::fmt::Display for TessellationSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for face in &self.faces {
            write!(f, "[")?;
            for (v, l) in face {
                write!(f, "({v},{l})")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// One 0-cell of the Voronoi dual: a merged Delaunay face with its face
/// vector and, when elliptic, the centre of the defining immersed disc in
/// the face's own chart.
#[derive(Debug, Clone)]
pub struct DualCell {
    pub face: usize,
    pub triangles: Vec<usize>,
    pub face_vector: MinkVector,
    pub norm2: f64,
    pub center: Option<MinkVector>,
}

/// Dual 1-cell: adjacency of two merged faces across a strictly Delaunay
/// edge (a segment of the radical line of the edge's endpoint cycles).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub surface_edge: usize,
    pub cells: (usize, usize),
}

/// Combinatorial dual complex of a converged surface.
#[derive(Debug, Clone)]
pub struct DualComplex {
    pub cells: Vec<DualCell>,
    pub edges: Vec<DualEdge>,
    /// Dual 2-cells are the surface vertices.
    pub num_faces: usize,
}

/// Lay out the quadrilateral of edge `e` in the chart of its left triangle.
pub fn layout_quad(
    s: &DecoratedSurface,
    e: usize,
    w: &[f64],
    tol: f64,
) -> Result<QuadLift, FlipError> {
    let (h1, h2) = s.edge(e).halves;
    let (t, k) = (h1 / 3, h1 % 3);
    let (t2, k2) = (h2 / 3, h2 % 3);
    let left = s.triangle_data(t, w)?.lift(tol)?;
    let c1 = left.cycles[k];
    let c2 = left.cycles[(k + 1) % 3];
    let c3 = left.cycles[(k + 2) % 3];
    let line = left.lines[k];
    let right = s.triangle_data(t2, w)?;
    let g2 = right.gram_matrix();
    // right apex k2; corner k2+1 sits at C3's vertex, corner k2+2 at C2's
    let q42 = g2[(k2, (k2 + 2) % 3)];
    let q43 = g2[(k2, (k2 + 1) % 3)];
    let q44 = g2[(k2, k2)];
    let a11 = mdot(c2, c2);
    let a12 = mdot(c2, c3);
    let a22 = mdot(c3, c3);
    let det = a11 * a22 - a12 * a12;
    if det.abs() < 1e-14 * (a11.abs() + a12.abs() + a22.abs()).max(1.0) {
        return Err(FlipError::DegenerateQuad {
            edge: e,
            discriminant: det,
        });
    }
    let beta = (q42 * a22 - q43 * a12) / det;
    let gamma = (a11 * q43 - a12 * q42) / det;
    let alpha2 = q44 - (beta * q42 + gamma * q43);
    if alpha2 < -tol * q44.abs().max(1.0) {
        return Err(FlipError::DegenerateQuad {
            edge: e,
            discriminant: alpha2,
        });
    }
    let alpha = alpha2.max(0.0).sqrt();
    let c4 = line.scale(alpha) + c2.scale(beta) + c3.scale(gamma);
    let f_right = face_vector_of(&[c2, c3, c4]).map_err(FlipError::Triangle)?;
    Ok(QuadLift {
        cycles: [c1, c2, c3, c4],
        line,
        f_left: left.face_vector,
        f_right,
    })
}

fn normalize_timelike_future(v: MinkVector) -> Option<MinkVector> {
    let n2 = v.norm2();
    if n2 >= 0.0 {
        return None;
    }
    let v = v.scale(1.0 / (-n2).sqrt());
    Some(if v.t > 0.0 { v } else { -v })
}

/// The crossing of the diagonal with the radical line of its endpoint
/// cycles. Lies on the open diagonal for any properly decorated quad; used
/// as the canonical probe point for support logging.
pub fn quad_midpoint(q: &QuadLift) -> Result<MinkVector, FlipError> {
    let d = q.cycles[1] - q.cycles[2];
    let x = MinkVector::mink_cross(d, q.line);
    normalize_timelike_future(x).ok_or(FlipError::NotFlippable {
        edge: usize::MAX,
        reason: "diagonal cycles are nested (no radical line crossing)",
    })
}

fn det_cols(a: MinkVector, b: MinkVector, c: MinkVector) -> f64 {
    nalgebra::Matrix3::new(a.t, b.t, c.t, a.a, b.a, c.a, a.b, b.b, c.b).determinant()
}

/// Outcome data of one flip.
#[derive(Debug, Clone, Copy)]
pub struct FlipInfo {
    pub new_length: f64,
    pub support_before: f64,
    pub support_after: f64,
    pub neighbor_edges: [usize; 4],
}

/// Flip edge `e` in place.
///
/// The post-flip triangles must be positively oriented (strict convexity of
/// the quad) and valid decorated triangles; under a fully proper decoration
/// this always holds for violating edges, so a failure is reported as an
/// improper decoration by the driver.
pub fn flip_edge(
    s: &mut DecoratedSurface,
    e: usize,
    w: &[f64],
    tol: f64,
) -> Result<FlipInfo, FlipError> {
    let (h1, h2) = s.edge(e).halves;
    let (t, k) = (h1 / 3, h1 % 3);
    let (t2, k2) = (h2 / 3, h2 % 3);
    if t == t2 {
        return Err(FlipError::NotFlippable {
            edge: e,
            reason: "both sides of the edge lie in the same triangle",
        });
    }
    let quad = layout_quad(s, e, w, tol)?;
    let [c1, c2, c3, c4] = quad.cycles;
    for trip in [[c1, c2, c4], [c1, c4, c3]] {
        if det_cols(trip[0], trip[1], trip[2]) <= 0.0 {
            return Err(FlipError::NotFlippable {
                edge: e,
                reason: "quadrilateral is not strictly convex",
            });
        }
    }
    // new diagonal length from the cycle product
    let corners_t = s.triangle_corners(t);
    let corners_t2 = s.triangle_corners(t2);
    let va = corners_t[k];
    let vb = corners_t[(k + 1) % 3];
    let vc = corners_t[(k + 2) % 3];
    let vd = corners_t2[k2];
    let new_length = length_from_product(
        s.vertex(va).vtype,
        w[va],
        s.vertex(vd).vtype,
        w[vd],
        -mdot(c1, c4),
    )?;
    // intrinsic validity of the post-flip triangles (a,b,d) and (a,d,c):
    // Gram signature and generalised-vertex integrity
    let out_lengths = |h: usize| s.edge(s.edge_of_half(h)).length;
    let len_bd = out_lengths(3 * t2 + (k2 + 1) % 3);
    let len_ab = out_lengths(3 * t + (k + 2) % 3);
    let len_dc = out_lengths(3 * t2 + (k2 + 2) % 3);
    let len_ca = out_lengths(3 * t + (k + 1) % 3);
    let vt = |v: usize| s.vertex(v).vtype;
    for (tys, ws, ls) in [
        (
            [vt(va), vt(vb), vt(vd)],
            [w[va], w[vb], w[vd]],
            [len_bd, new_length, len_ab],
        ),
        (
            [vt(va), vt(vd), vt(vc)],
            [w[va], w[vd], w[vc]],
            [len_dc, len_ca, new_length],
        ),
    ] {
        let valid = crate::dectri::DecoratedTriangle::new(tys, ws, ls)
            .and_then(|tri| tri.lift(tol))
            .is_ok();
        if !valid {
            return Err(FlipError::NotFlippable {
                edge: e,
                reason: "a post-flip triangle is not a valid decorated triangle",
            });
        }
    }
    // support at the canonical diagonal point, before and after
    let x = quad_midpoint(&quad).map_err(|err| match err {
        FlipError::NotFlippable { reason, .. } => FlipError::NotFlippable { edge: e, reason },
        other => other,
    })?;
    let sb = mdot(x, quad.f_left);
    if sb >= -tol {
        return Err(FlipError::NotFlippable {
            edge: e,
            reason: "support undefined at the diagonal midpoint",
        });
    }
    let support_before = 1.0 / (sb * sb);
    let l_new = {
        let u = MinkVector::mink_cross(c1, c4);
        let n2 = u.norm2();
        if n2 <= 0.0 {
            return Err(FlipError::NotFlippable {
                edge: e,
                reason: "new diagonal subspace is not spacelike",
            });
        }
        u.scale(1.0 / n2.sqrt())
    };
    let side_x = mdot(x, l_new);
    let side_c2 = mdot(c2, l_new);
    let trip_after = if side_x * side_c2 > 0.0 {
        [c1, c2, c4]
    } else {
        [c1, c4, c3]
    };
    let f_after = face_vector_of(&trip_after).map_err(FlipError::Triangle)?;
    let sa = mdot(x, f_after);
    let support_after = 1.0 / (sa * sa);
    // combinatorial rewiring: (a,b,c)+(d,c,b) -> (a,b,d)+(a,d,c)
    let out_ca = 3 * t + (k + 1) % 3;
    let out_ab = 3 * t + (k + 2) % 3;
    let out_bd = 3 * t2 + (k2 + 1) % 3;
    let out_dc = 3 * t2 + (k2 + 2) % 3;
    let opp_ca = s.opposite(out_ca);
    let opp_ab = s.opposite(out_ab);
    let opp_bd = s.opposite(out_bd);
    let opp_dc = s.opposite(out_dc);
    let e_ca = s.edge_of_half(out_ca);
    let e_ab = s.edge_of_half(out_ab);
    let e_bd = s.edge_of_half(out_bd);
    let e_dc = s.edge_of_half(out_dc);
    let remap = |h: usize| -> usize {
        if h == out_ca {
            3 * t2 + 1
        } else if h == out_ab {
            3 * t + 2
        } else if h == out_bd {
            3 * t
        } else if h == out_dc {
            3 * t2
        } else {
            h
        }
    };
    s.rewire(t, t2, [va, vb, vd], [va, vd, vc]);
    s.glue(3 * t + 1, 3 * t2 + 2, e);
    s.set_edge_length(e, new_length);
    s.glue(3 * t + 2, remap(opp_ab), e_ab);
    s.glue(3 * t, remap(opp_bd), e_bd);
    s.glue(3 * t2, remap(opp_dc), e_dc);
    s.glue(3 * t2 + 1, remap(opp_ca), e_ca);
    Ok(FlipInfo {
        new_length,
        support_before,
        support_after,
        neighbor_edges: [e_ca, e_ab, e_bd, e_dc],
    })
}

/// Run the flip algorithm: repeatedly flip edges whose tilt sum exceeds
/// `tol`, in FIFO order seeded by edge index, re-checking each edge when it
/// is popped. Flat edges are never flipped; they are resolved by merging in
/// [`tessellation_signature`].
pub fn flip_to_delaunay(
    s: &DecoratedSurface,
    w: &[f64],
    tol: f64,
    max_flips: usize,
) -> Result<FlipResult, FlipError> {
    let report = s.validate(w, tol);
    if !report.passed_for_flips() {
        let reason = if !report.weights_positive {
            "non-positive weight".to_string()
        } else if let Some((t, err)) = report.triangle_errors.first() {
            format!("triangle {t}: {err}")
        } else {
            let p = report.properness.iter().find(|p| !p.ok).unwrap();
            format!(
                "edge {}: weight {} at vertex {} is not below tau(l)*{} at cone {}",
                p.edge, p.lhs, p.from, p.rhs, p.to
            )
        };
        return Err(FlipError::ImproperDecoration {
            edge: usize::MAX,
            reason,
        });
    }
    let mut work = s.clone();
    let mut queue: VecDeque<usize> = (0..work.num_edges()).collect();
    let mut flips = 0usize;
    let mut log = Vec::new();
    while let Some(e) = queue.pop_front() {
        let sum = work.edge_tilt_sum(e, w)?;
        if sum <= tol {
            continue;
        }
        if flips >= max_flips {
            return Err(max_flips_diagnostic(&work, w, flips, max_flips, &log));
        }
        let old_length = work.edge(e).length;
        let info = match flip_edge(&mut work, e, w, tol) {
            Ok(info) => info,
            Err(FlipError::NotFlippable { edge, reason }) => {
                return Err(FlipError::ImproperDecoration {
                    edge,
                    reason: reason.to_string(),
                });
            }
            Err(other) => return Err(other),
        };
        flips += 1;
        log.push(FlipLogEntry {
            edge: e,
            tilt_sum: sum,
            old_length,
            new_length: info.new_length,
            support_before: info.support_before,
            support_after: info.support_after,
        });
        for ne in info.neighbor_edges {
            queue.push_back(ne);
        }
    }
    Ok(FlipResult {
        surface: work,
        flips,
        log,
        reason: Termination::Converged,
    })
}

fn max_flips_diagnostic(
    s: &DecoratedSurface,
    w: &[f64],
    flips: usize,
    max_flips: usize,
    log: &[FlipLogEntry],
) -> FlipError {
    let max_edge_length = (0..s.num_edges())
        .map(|e| s.edge(e).length.abs())
        .fold(0.0, f64::max);
    let h_max = log
        .iter()
        .map(|l| l.support_before.max(l.support_after))
        .fold(1.0, f64::max);
    // bound on Delaunay edge lengths: r_u + r_v + 2 arcosh(H^max)
    let radius = |v: usize| -> f64 {
        let rec = s.vertex(v);
        match rec.vtype.eps() {
            -1 => w[v].max(1.0).acosh(),
            0 => (2.0 * w[v]).ln(),
            _ => w[v].asinh(),
        }
    };
    let mut length_bound = 0.0f64;
    for e in 0..s.num_edges() {
        let (u, v) = s.edge_endpoints(e);
        length_bound = length_bound.max(radius(u) + radius(v) + 2.0 * h_max.acosh());
    }
    FlipError::MaxFlipsExceeded {
        flips,
        max_flips,
        max_edge_length,
        length_bound,
    }
}

fn require_converged(s: &DecoratedSurface, w: &[f64], tol: f64) -> Result<Vec<EdgeClass>, FlipError> {
    let report = s.delaunay_report(w, tol)?;
    if let Some(bad) = report.iter().find(|e| e.class == EdgeClass::Violating) {
        return Err(FlipError::NotConverged {
            edge: bad.edge,
            tilt_sum: bad.tilt_sum,
        });
    }
    Ok(report.iter().map(|e| e.class).collect())
}

/// Union of triangles across flat edges; returns (face id per triangle,
/// number of faces, member triangles per face).
fn merge_faces(s: &DecoratedSurface, classes: &[EdgeClass]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let nt = s.num_triangles();
    let mut parent: Vec<usize> = (0..nt).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in 0..s.num_edges() {
        if classes[e] == EdgeClass::Flat {
            let (h1, h2) = s.edge(e).halves;
            let a = find(&mut parent, h1 / 3);
            let b = find(&mut parent, h2 / 3);
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut face_of = vec![usize::MAX; nt];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for t in 0..nt {
        let root = find(&mut parent, t);
        if face_of[root] == usize::MAX {
            face_of[root] = members.len();
            members.push(Vec::new());
        }
        face_of[t] = face_of[root];
        members[face_of[t]].push(t);
    }
    (face_of, members)
}

/// Canonical fingerprint of the tessellation of a converged surface.
pub fn tessellation_signature(
    s: &DecoratedSurface,
    w: &[f64],
    tol: f64,
) -> Result<TessellationSignature, FlipError> {
    let classes = require_converged(s, w, tol)?;
    let nt = s.num_triangles();
    let next_boundary = |mut h: usize| -> usize {
        // next boundary arc counterclockwise around the merged face
        let (t, k) = (h / 3, h % 3);
        h = 3 * t + (k + 1) % 3;
        while classes[s.edge_of_half(h)] == EdgeClass::Flat {
            let o = s.opposite(h);
            let (t2, k2) = (o / 3, o % 3);
            h = 3 * t2 + (k2 + 1) % 3;
        }
        h
    };
    let mut visited = vec![false; 3 * nt];
    let mut faces = Vec::new();
    for h0 in 0..3 * nt {
        if visited[h0] || classes[s.edge_of_half(h0)] == EdgeClass::Flat {
            continue;
        }
        let mut seq = Vec::new();
        let mut h = h0;
        loop {
            visited[h] = true;
            let (t, k) = (h / 3, h % 3);
            let start_vertex = s.vertex(s.triangle_corners(t)[(k + 1) % 3]).id;
            let len = s.edge(s.edge_of_half(h)).length;
            seq.push((start_vertex, (len * 1e6).round() as i64));
            h = next_boundary(h);
            if h == h0 {
                break;
            }
        }
        faces.push(minimal_rotation(&seq));
    }
    faces.sort();
    Ok(TessellationSignature { faces })
}

fn minimal_rotation(seq: &[(u32, i64)]) -> Vec<(u32, i64)> {
    let n = seq.len();
    let mut best: Option<Vec<(u32, i64)>> = None;
    for start in 0..n {
        let rot: Vec<(u32, i64)> = (0..n).map(|i| seq[(start + i) % n]).collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap()
}

/// Extract the Voronoi dual of a converged surface: one 0-cell per merged
/// Delaunay face, one 1-cell per strict edge.
pub fn voronoi_dual(
    s: &DecoratedSurface,
    w: &[f64],
    tol: f64,
) -> Result<DualComplex, FlipError> {
    let classes = require_converged(s, w, tol)?;
    let (face_of, members) = merge_faces(s, &classes);
    let mut cells = Vec::with_capacity(members.len());
    for (face, tri_list) in members.iter().enumerate() {
        let rep = tri_list[0];
        let lift = s.triangle_data(rep, w)?.lift(tol)?;
        let f = lift.face_vector;
        let n2 = f.norm2();
        let center = if n2 < -tol {
            normalize_timelike_future(f)
        } else {
            None
        };
        cells.push(DualCell {
            face,
            triangles: tri_list.clone(),
            face_vector: f,
            norm2: n2,
            center,
        });
    }
    let mut edges = Vec::new();
    for e in 0..s.num_edges() {
        if classes[e] == EdgeClass::Strict {
            let (h1, h2) = s.edge(e).halves;
            edges.push(DualEdge {
                surface_edge: e,
                cells: (face_of[h1 / 3], face_of[h2 / 3]),
            });
        }
    }
    Ok(DualComplex {
        cells,
        edges,
        num_faces: s.num_vertices(),
    })
}
