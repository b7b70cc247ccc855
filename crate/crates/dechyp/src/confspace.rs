//! The configuration space of decorations: per-tessellation polyhedral cones
//! in weight space and secondary-fan sampling over the weight simplex.
//!
//! Tilt sums are linear in the weight vector, so each converged
//! triangulation carries a cone `{ω : A·ω ≤ 0}`. Sampling the barycentric
//! grid of the simplex and fingerprinting the resulting tessellations
//! recovers the fan decomposition up to scaling.

use std::collections::BTreeMap;

use crate::flipper::{
    flip_to_delaunay, tessellation_signature, FlipError, TessellationSignature,
};
use crate::surface::{DecoratedSurface, EdgeClass};

/// Linear inequality system of one tessellation: row `e` gives the
/// coefficients of `edge_tilt_sum(e, ·)` in the global vertex weights.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub rows: Vec<Vec<f64>>,
    pub edges: Vec<usize>,
}

impl ConeSpec {
    /// Evaluate all rows at a weight vector.
    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(w).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Largest violation of `A·ω ≤ 0`.
    pub fn max_violation(&self, w: &[f64]) -> f64 {
        self.apply(w).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Entry of a [`FanReport`]: one observed tessellation.
#[derive(Debug, Clone)]
pub struct FanGroup {
    pub signature: TessellationSignature,
    pub samples: usize,
    /// Samples whose flat edges all have identically vanishing tilt rows
    /// (interior of a maximal cone).
    pub interior_samples: usize,
    pub bary_min: Vec<f64>,
    pub bary_max: Vec<f64>,
    /// Worst violation of this group's cone inequalities over its samples.
    pub max_cone_violation: f64,
}

/// Sampled decomposition of the configuration space.
#[derive(Debug, Clone)]
pub struct FanReport {
    pub resolution: usize,
    pub total_samples: usize,
    pub proper_samples: usize,
    pub skipped_improper: usize,
    pub failed_runs: usize,
    pub groups: Vec<FanGroup>,
}

impl FanReport {
    pub fn distinct(&self) -> usize {
        self.groups.len()
    }

    /// Tessellations observed at an interior sample of their cone.
    pub fn distinct_maximal(&self) -> usize {
        self.groups.iter().filter(|g| g.interior_samples > 0).count()
    }
}

/// Flat rows whose coefficients are all below this bound are treated as
/// identically zero (flat for every weight vector).
const ZERO_ROW_TOL: f64 = 1e-8;

/// Assemble the tilt-coefficient row of one edge.
fn edge_row(s: &DecoratedSurface, e: usize, w: &[f64], tol: f64) -> Result<Vec<f64>, FlipError> {
    let mut row = vec![0.0; s.num_vertices()];
    let (h1, h2) = s.edge(e).halves;
    for h in [h1, h2] {
        let (t, k) = (h / 3, h % 3);
        let tri = s.triangle_data(t, w)?;
        let m = tri.tilt_coefficients(tol)?;
        let corners = s.triangle_corners(t);
        for j in 0..3 {
            row[corners[j]] += m[(k, j)];
        }
    }
    Ok(row)
}

/// The polyhedral cone of the tessellation computed at `w0`.
///
/// Requires the surface to be converged at `w0`; every row then satisfies
/// `row·w0 ≤ tol`.
pub fn delaunay_cone(
    s: &DecoratedSurface,
    w0: &[f64],
    tol: f64,
) -> Result<ConeSpec, FlipError> {
    let report = s.delaunay_report(w0, tol)?;
    if let Some(bad) = report.iter().find(|e| e.class == EdgeClass::Violating) {
        return Err(FlipError::NotConverged {
            edge: bad.edge,
            tilt_sum: bad.tilt_sum,
        });
    }
    let mut rows = Vec::with_capacity(s.num_edges());
    let mut edges = Vec::with_capacity(s.num_edges());
    for e in 0..s.num_edges() {
        rows.push(edge_row(s, e, w0, tol)?);
        edges.push(e);
    }
    Ok(ConeSpec { rows, edges })
}

/// Iterate the positive barycentric grid `{k/resolution}` over the standard
/// simplex, run the flip algorithm on the surviving proper samples and group
/// the outcomes by tessellation signature.
pub fn fan_sample(
    s: &DecoratedSurface,
    resolution: usize,
    tol: f64,
    max_flips: usize,
) -> Result<FanReport, FlipError> {
    assert!(resolution >= 2, "resolution must be at least 2");
    let nv = s.num_vertices();
    struct Accum {
        samples: usize,
        interior: usize,
        bary_min: Vec<f64>,
        bary_max: Vec<f64>,
        cone: ConeSpec,
        max_violation: f64,
    }
    let mut groups: BTreeMap<TessellationSignature, Accum> = BTreeMap::new();
    let mut total = 0usize;
    let mut proper = 0usize;
    let mut skipped = 0usize;
    let mut failed = 0usize;
    let mut grid = vec![0usize; nv];
    iterate_compositions(resolution, nv, &mut grid, &mut |parts| {
        total += 1;
        let w: Vec<f64> = parts.iter().map(|&k| k as f64 / resolution as f64).collect();
        if !s.validate(&w, tol).passed_for_flips() {
            skipped += 1;
            return Ok(());
        }
        proper += 1;
        let run = match flip_to_delaunay(s, &w, tol, max_flips) {
            Ok(run) => run,
            Err(FlipError::ImproperDecoration { .. }) | Err(FlipError::DegenerateQuad { .. }) => {
                failed += 1;
                return Ok(());
            }
            Err(other) => return Err(other),
        };
        let sig = tessellation_signature(&run.surface, &w, tol)?;
        let classes = run.surface.delaunay_report(&w, tol)?;
        let mut interior = true;
        for st in &classes {
            if st.class == EdgeClass::Flat {
                let row = edge_row(&run.surface, st.edge, &w, tol)?;
                if row.iter().any(|a| a.abs() > ZERO_ROW_TOL) {
                    interior = false;
                    break;
                }
            }
        }
        match groups.get_mut(&sig) {
            Some(acc) => {
                acc.samples += 1;
                acc.interior += usize::from(interior);
                for v in 0..nv {
                    acc.bary_min[v] = acc.bary_min[v].min(w[v]);
                    acc.bary_max[v] = acc.bary_max[v].max(w[v]);
                }
                acc.max_violation = acc.max_violation.max(acc.cone.max_violation(&w));
            }
            None => {
                let cone = delaunay_cone(&run.surface, &w, tol)?;
                let max_violation = cone.max_violation(&w);
                groups.insert(
                    sig,
                    Accum {
                        samples: 1,
                        interior: usize::from(interior),
                        bary_min: w.clone(),
                        bary_max: w.clone(),
                        cone,
                        max_violation,
                    },
                );
            }
        }
        Ok(())
    })?;
    let groups = groups
        .into_iter()
        .map(|(signature, acc)| FanGroup {
            signature,
            samples: acc.samples,
            interior_samples: acc.interior,
            bary_min: acc.bary_min,
            bary_max: acc.bary_max,
            max_cone_violation: acc.max_violation,
        })
        .collect();
    Ok(FanReport {
        resolution,
        total_samples: total,
        proper_samples: proper,
        skipped_improper: skipped,
        failed_runs: failed,
        groups,
    })
}

/// Enumerate compositions of `total` into `parts` strictly positive summands
/// in lexicographic order.
fn iterate_compositions<F>(
    total: usize,
    parts: usize,
    buf: &mut Vec<usize>,
    f: &mut F,
) -> Result<(), FlipError>
where
    F: FnMut(&[usize]) -> Result<(), FlipError>,
{
    fn rec<F>(
        total: usize,
        idx: usize,
        parts: usize,
        buf: &mut Vec<usize>,
        f: &mut F,
    ) -> Result<(), FlipError>
    where
        F: FnMut(&[usize]) -> Result<(), FlipError>,
    {
        if idx + 1 == parts {
            buf[idx] = total;
            return f(buf);
        }
        let remaining_parts = parts - idx - 1;
        for k in 1..=(total - remaining_parts) {
            buf[idx] = k;
            rec(total - k, idx + 1, parts, buf, f)?;
        }
        Ok(())
    }
    assert!(total >= parts, "resolution too small for the vertex count");
    rec(total, 0, parts, buf, f)
}

/// Render a ternary plot of a fan report (three-vertex surfaces only) as an
/// SVG document; sample points are coloured by signature group.
pub fn ternary_svg(report: &FanReport, samples: &[(Vec<f64>, usize)]) -> String {
    // barycentric corners: w0 top, w1 bottom left, w2 bottom right
    const TOP: (f64, f64) = (0.5, 0.08);
    const BL: (f64, f64) = (0.06, 0.92);
    const BR: (f64, f64) = (0.94, 0.92);
    let to_xy = |w: &[f64]| -> (f64, f64) {
        (
            w[0] * TOP.0 + w[1] * BL.0 + w[2] * BR.0,
            w[0] * TOP.1 + w[1] * BL.1 + w[2] * BR.1,
        )
    };
    let palette = [
        "#1b6ca8", "#c23b22", "#3d9140", "#8e44ad", "#e0a800", "#16a2b8", "#666666", "#a0522d",
    ];
    let mut out = String::new();
    out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1.4 1\">\n");
    out.push_str("<rect x=\"0\" y=\"0\" width=\"1.4\" height=\"1\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<polygon points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.003\"/>\n",
        TOP.0, TOP.1, BL.0, BL.1, BR.0, BR.1
    ));
    for (w, group) in samples {
        let (x, y) = to_xy(w);
        out.push_str(&format!(
            "<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"0.005\" fill=\"{}\"/>\n",
            palette[group % palette.len()]
        ));
    }
    for (i, g) in report.groups.iter().enumerate() {
        out.push_str(&format!(
            "<text x=\"1.0\" y=\"{:.3}\" font-size=\"0.028\" fill=\"{}\">group {} ({} samples)</text>\n",
            0.06 + 0.04 * i as f64,
            palette[i % palette.len()],
            i,
            g.samples
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Re-run the sampling to recover per-sample group assignments for plotting.
pub fn fan_sample_points(
    s: &DecoratedSurface,
    resolution: usize,
    tol: f64,
    max_flips: usize,
    report: &FanReport,
) -> Result<Vec<(Vec<f64>, usize)>, FlipError> {
    let nv = s.num_vertices();
    let mut out = Vec::new();
    let mut grid = vec![0usize; nv];
    iterate_compositions(resolution, nv, &mut grid, &mut |parts| {
        let w: Vec<f64> = parts.iter().map(|&k| k as f64 / resolution as f64).collect();
        if !s.validate(&w, tol).passed_for_flips() {
            return Ok(());
        }
        let run = match flip_to_delaunay(s, &w, tol, max_flips) {
            Ok(run) => run,
            Err(_) => return Ok(()),
        };
        let sig = tessellation_signature(&run.surface, &w, tol)?;
        if let Some(idx) = report.groups.iter().position(|g| g.signature == sig) {
            out.push((w, idx));
        }
        Ok(())
    })?;
    Ok(out)
}
