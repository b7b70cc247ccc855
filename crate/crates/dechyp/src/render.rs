//! SVG rendering of developed tessellations in the Poincaré disc.
//!
//! The converged surface is developed by a breadth-first walk from a seed
//! face: each neighbour is placed in the common chart by solving for its
//! apex cycle, so adjacent copies share their common edge's cycle vectors
//! exactly. Points project to the disc by `(t,a,b) ↦ (a,b)/(1+t)`; geodesics
//! render as circular arcs orthogonal to the unit circle.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::dectri::face_vector_of;
use crate::flipper::FlipError;
use crate::minkcore::{mdot, MinkVector, VertexType};
use crate::surface::{DecoratedSurface, EdgeClass};

/// One developed copy of a triangle.
#[derive(Debug, Clone)]
struct Placed {
    tri: usize,
    cycles: [MinkVector; 3],
    /// placed neighbour instance per corner-opposite edge, when known
    neighbor: [Option<usize>; 3],
}

/// A developed patch of the universal cover.
#[derive(Debug)]
pub struct RenderScene {
    placed: Vec<Placed>,
    classes: Vec<EdgeClass>,
}

fn normalize_timelike(v: MinkVector) -> Option<MinkVector> {
    let n2 = v.norm2();
    if n2 >= 0.0 {
        return None;
    }
    let v = v.scale(1.0 / (-n2).sqrt());
    Some(if v.t > 0.0 { v } else { -v })
}

fn normalize_spacelike(v: MinkVector) -> Option<MinkVector> {
    let n2 = v.norm2();
    if n2 <= 0.0 {
        return None;
    }
    Some(v.scale(1.0 / n2.sqrt()))
}

fn line_through(c1: MinkVector, c2: MinkVector, inside: MinkVector) -> Option<MinkVector> {
    let mut l = normalize_spacelike(MinkVector::mink_cross(c1, c2))?;
    if mdot(l, inside) > 0.0 {
        l = -l;
    }
    Some(l)
}

/// Disc projection of a point of the hyperboloid.
fn project_point(p: MinkVector) -> (f64, f64) {
    (p.a / (1.0 + p.t), p.b / (1.0 + p.t))
}

/// Disc boundary point of a null direction.
fn project_ideal(p: MinkVector) -> (f64, f64) {
    let n = (p.a * p.a + p.b * p.b).sqrt();
    (p.a / n, p.b / n)
}

/// Drawable endpoint of an edge at a corner: cone centre, cusp ideal point,
/// or the foot of the edge on the flare axis.
fn corner_anchor(
    vtype: VertexType,
    weight: f64,
    cycle: MinkVector,
    edge_line: MinkVector,
) -> Option<(f64, f64)> {
    match vtype {
        VertexType::Cone => normalize_timelike(cycle.scale(weight)).map(project_point),
        VertexType::Cusp => Some(project_ideal(cycle)),
        VertexType::Flare => {
            let axis = normalize_spacelike(cycle.scale(weight))?;
            normalize_timelike(MinkVector::mink_cross(edge_line, axis)).map(project_point)
        }
    }
}

fn develop(
    s: &DecoratedSurface,
    w: &[f64],
    depth: usize,
    tol: f64,
) -> Result<RenderScene, FlipError> {
    let report = s.delaunay_report(w, tol)?;
    if let Some(bad) = report.iter().find(|e| e.class == EdgeClass::Violating) {
        return Err(FlipError::NotConverged {
            edge: bad.edge,
            tilt_sum: bad.tilt_sum,
        });
    }
    let classes: Vec<EdgeClass> = report.iter().map(|e| e.class).collect();
    let seed_lift = s.triangle_data(0, w)?.lift(tol)?;
    let mut placed = vec![Placed {
        tri: 0,
        cycles: seed_lift.cycles,
        neighbor: [None; 3],
    }];
    type PlacementKey = (usize, [(i64, i64, i64); 3]);
    let mut seen: HashSet<PlacementKey> = HashSet::new();
    let key = |tri: usize, cycles: &[MinkVector; 3]| {
        let r = |x: f64| (x / 1e-7).round() as i64;
        (
            tri,
            [
                (r(cycles[0].t), r(cycles[0].a), r(cycles[0].b)),
                (r(cycles[1].t), r(cycles[1].a), r(cycles[1].b)),
                (r(cycles[2].t), r(cycles[2].a), r(cycles[2].b)),
            ],
        )
    };
    seen.insert(key(0, &placed[0].cycles));
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &pi in &frontier {
            for k in 0..3 {
                if placed[pi].neighbor[k].is_some() {
                    continue;
                }
                let inst = placed[pi].clone();
                let t = inst.tri;
                let h = 3 * t + k;
                let h2 = s.opposite(h);
                let (t2, k2) = (h2 / 3, h2 % 3);
                let c1 = inst.cycles[k];
                let c2 = inst.cycles[(k + 1) % 3];
                let c3 = inst.cycles[(k + 2) % 3];
                let Some(line) = line_through(c2, c3, c1) else {
                    continue;
                };
                let g2 = s.triangle_data(t2, w)?.gram_matrix();
                let q42 = g2[(k2, (k2 + 2) % 3)];
                let q43 = g2[(k2, (k2 + 1) % 3)];
                let q44 = g2[(k2, k2)];
                let a11 = mdot(c2, c2);
                let a12 = mdot(c2, c3);
                let a22 = mdot(c3, c3);
                let det = a11 * a22 - a12 * a12;
                if det.abs() < 1e-13 {
                    continue;
                }
                let beta = (q42 * a22 - q43 * a12) / det;
                let gamma = (a11 * q43 - a12 * q42) / det;
                let alpha2 = q44 - (beta * q42 + gamma * q43);
                if alpha2 < 0.0 {
                    continue;
                }
                let c4 = line.scale(alpha2.sqrt()) + c2.scale(beta) + c3.scale(gamma);
                let mut cycles = [MinkVector::new(0.0, 0.0, 0.0); 3];
                cycles[k2] = c4;
                cycles[(k2 + 1) % 3] = c3;
                cycles[(k2 + 2) % 3] = c2;
                if !seen.insert(key(t2, &cycles)) {
                    continue;
                }
                let ni = placed.len();
                placed.push(Placed {
                    tri: t2,
                    cycles,
                    neighbor: [None; 3],
                });
                placed[ni].neighbor[k2] = Some(pi);
                placed[pi].neighbor[k] = Some(ni);
                next.push(ni);
            }
        }
        frontier = next;
    }
    Ok(RenderScene { placed, classes })
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

/// SVG path for the geodesic between two disc points: a circular arc
/// orthogonal to the unit circle, or a straight segment when the geodesic
/// passes through the origin.
fn geodesic_path(p: (f64, f64), q: (f64, f64)) -> String {
    let det = 2.0 * (p.0 * q.1 - p.1 * q.0);
    if det.abs() < 1e-9 {
        return format!(
            "M {} {} L {} {}",
            fmt6(p.0),
            fmt6(p.1),
            fmt6(q.0),
            fmt6(q.1)
        );
    }
    let bp = p.0 * p.0 + p.1 * p.1 + 1.0;
    let bq = q.0 * q.0 + q.1 * q.1 + 1.0;
    let mx = (bp * q.1 - bq * p.1) / det;
    let my = (bq * p.0 - bp * q.0) / det;
    let r = ((p.0 - mx).powi(2) + (p.1 - my).powi(2)).sqrt();
    let cross = (p.0 - mx) * (q.1 - my) - (p.1 - my) * (q.0 - mx);
    let sweep = if cross > 0.0 { 1 } else { 0 };
    format!(
        "M {} {} A {} {} 0 0 {} {} {}",
        fmt6(p.0),
        fmt6(p.1),
        fmt6(r),
        fmt6(r),
        sweep,
        fmt6(q.0),
        fmt6(q.1)
    )
}

/// Euclidean circle of a cycle in the disc, as (cx, cy, r).
fn cycle_circle(c: MinkVector) -> Option<(f64, f64, f64)> {
    let denom = 1.0 + c.t;
    if denom.abs() < 1e-9 {
        return None;
    }
    let r2 = (c.norm2() + 1.0) / (denom * denom);
    if r2 <= 0.0 {
        return None;
    }
    Some((c.a / denom, c.b / denom, r2.sqrt()))
}

/// Render the developed tessellation of a converged decorated surface.
///
/// Delaunay edges are drawn solid, dual edges dashed, decoration cycles as
/// light circles. The output is deterministic for fixed inputs.
pub fn render_svg(
    s: &DecoratedSurface,
    w: &[f64],
    depth: usize,
    tol: f64,
) -> Result<String, FlipError> {
    assert!(depth >= 1, "render depth must be at least 1");
    let scene = develop(s, w, depth, tol)?;
    let mut out = String::new();
    out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n");
    out.push_str("<rect x=\"-1.05\" y=\"-1.05\" width=\"2.1\" height=\"2.1\" fill=\"white\"/>\n");
    out.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"#f5f5fa\" stroke=\"none\"/>\n",
    );
    // Delaunay edges
    let mut edge_paths: Vec<String> = Vec::new();
    let mut circle_elems: Vec<String> = Vec::new();
    let mut seen_paths = HashSet::new();
    let mut seen_circles = HashSet::new();
    for inst in &scene.placed {
        let corners = s.triangle_corners(inst.tri);
        for k in 0..3 {
            // edge opposite corner k joins corners k+1 and k+2
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let ci = inst.cycles[i];
            let cj = inst.cycles[j];
            let Some(line) = line_through(ci, cj, inst.cycles[k]) else {
                continue;
            };
            let vi = s.vertex(corners[i]);
            let vj = s.vertex(corners[j]);
            let (Some(pa), Some(pb)) = (
                corner_anchor(vi.vtype, w[corners[i]], ci, line),
                corner_anchor(vj.vtype, w[corners[j]], cj, line),
            ) else {
                continue;
            };
            let path = geodesic_path(pa, pb);
            if seen_paths.insert(path.clone()) {
                edge_paths.push(path);
            }
        }
        for (k, &corner) in corners.iter().enumerate() {
            let _ = corner;
            if let Some((cx, cy, r)) = cycle_circle(inst.cycles[k]) {
                let elem = format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#b0b8d0\" stroke-width=\"0.004\"/>",
                    fmt6(cx),
                    fmt6(cy),
                    fmt6(r)
                );
                if seen_circles.insert(elem.clone()) {
                    circle_elems.push(elem);
                }
            }
        }
    }
    for elem in &circle_elems {
        out.push_str(elem);
        out.push('\n');
    }
    for path in &edge_paths {
        let _ = writeln!(
            out,
            "<path d=\"{path}\" fill=\"none\" stroke=\"#202030\" stroke-width=\"0.006\"/>"
        );
    }
    // dual edges between face centres across strict edges
    let mut centers: Vec<Option<(f64, f64)>> = Vec::with_capacity(scene.placed.len());
    for inst in &scene.placed {
        let center = face_vector_of(&inst.cycles)
            .ok()
            .and_then(normalize_timelike)
            .map(project_point);
        centers.push(center);
    }
    for (pi, inst) in scene.placed.iter().enumerate() {
        for k in 0..3 {
            let Some(ni) = inst.neighbor[k] else { continue };
            if ni <= pi {
                continue;
            }
            let e = s.edge_of_half(3 * inst.tri + k);
            if scene.classes[e] != EdgeClass::Strict {
                continue;
            }
            if let (Some(a), Some(b)) = (centers[pi], centers[ni]) {
                let _ = writeln!(
                    out,
                    "<path d=\"{}\" fill=\"none\" stroke=\"#a03030\" stroke-width=\"0.005\" stroke-dasharray=\"0.02 0.015\"/>",
                    geodesic_path(a, b)
                );
            }
        }
    }
    out.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.008\"/>\n",
    );
    out.push_str("</svg>\n");
    Ok(out)
}
