//! Command-line interface: validation, Delaunay flips, dual extraction, fan
//! sampling, hull verification and SVG rendering.
//!
//! Exit codes: 0 success, 2 validation failure, 3 non-convergence, 64 usage
//! error, 66 file error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dechyp::confspace::{self, fan_sample, fan_sample_points, FanReport};
use dechyp::flipper::{self, FlipError};
use dechyp::hull::{hull_support_verify, orbit_generate, OrbitFile};
use dechyp::render::render_svg;
use dechyp::surface::{DecoratedSurface, EdgeClass};

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_FILE: u8 = 66;

#[derive(Parser)]
#[command(
    name = "dechyp",
    about = "Weighted Delaunay tessellations of decorated hyperbolic surfaces",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance for classification and convergence decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Flip budget for the Delaunay driver.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_flips: usize,
    /// Barycentric grid resolution for fan sampling.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Reserved for sampling strategies; echoed into reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Development depth (BFS layers) for rendering.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Write the main output (SVG or converged surface) to this path.
    #[arg(short, global = true)]
    o: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a surface file and report structural and metric validity.
    Validate { file: PathBuf },
    /// Classify every edge against the local Delaunay condition.
    Check { file: PathBuf },
    /// Run the flip algorithm and report the converged tessellation.
    Delaunay { file: PathBuf },
    /// Extract the Voronoi dual of the converged tessellation.
    Dual { file: PathBuf },
    /// Sample the decoration simplex and report the secondary fan.
    Fan { file: PathBuf },
    /// Render the developed tessellation as SVG.
    Render { file: PathBuf },
    /// Verify hull support inequalities for an orbit file.
    HullVerify { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::File(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FILE)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(CliError::NonConvergence(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NONCONVERGENCE)
        }
    }
}

enum CliError {
    File(String),
    Validation(String),
    NonConvergence(String),
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn load_surface(path: &PathBuf) -> Result<DecoratedSurface, CliError> {
    let text = read_file(path)?;
    DecoratedSurface::parse(&text)
        .map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn flip_error(e: FlipError) -> CliError {
    match e {
        FlipError::MaxFlipsExceeded { .. } | FlipError::NotConverged { .. } => {
            CliError::NonConvergence(e.to_string())
        }
        other => CliError::Validation(other.to_string()),
    }
}

fn write_output(cli: &Cli, default_stdout: String) -> Result<(), CliError> {
    match &cli.o {
        Some(path) => std::fs::write(path, default_stdout)
            .map_err(|e| CliError::File(format!("{}: {e}", path.display()))),
        None => {
            print!("{default_stdout}");
            Ok(())
        }
    }
}

fn header(kind: &str, file: &std::path::Path, cli: &Cli) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "report: {kind}");
    let _ = writeln!(out, "file: {}", file.display());
    let _ = writeln!(out, "tol: {:e}", cli.tol);
    let _ = writeln!(out, "seed: {}", cli.seed);
    out
}

fn class_name(c: EdgeClass) -> &'static str {
    match c {
        EdgeClass::Strict => "strict",
        EdgeClass::Flat => "flat",
        EdgeClass::Violating => "violating",
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Validate { file } => {
            let s = load_surface(file)?;
            let w = s.stored_weights();
            let report = s.validate(&w, cli.tol);
            let mut out = header("validate", file, cli);
            let _ = writeln!(out, "vertices: {}", s.num_vertices());
            let _ = writeln!(out, "edges: {}", s.num_edges());
            let _ = writeln!(out, "triangles: {}", s.num_triangles());
            let _ = writeln!(out, "euler: {}", report.euler_characteristic);
            let _ = writeln!(out, "weights-positive: {}", report.weights_positive);
            let _ = writeln!(
                out,
                "triangles-valid: {}",
                report.triangle_errors.is_empty()
            );
            for (t, err) in &report.triangle_errors {
                let _ = writeln!(out, "triangle-error: {t} {err}");
            }
            for (v, angle) in report.vertex_angles.iter().enumerate() {
                let rec = s.vertex(v);
                let kind = match rec.vtype.eps() {
                    -1 => "cone-angle",
                    0 => "cusp-arc-total",
                    _ => "flare-boundary-length",
                };
                let _ = writeln!(out, "vertex: {}", rec.id);
                let _ = writeln!(out, "  type: {}", rec.vtype.eps());
                let _ = writeln!(out, "  weight: {:.12}", rec.weight);
                let _ = writeln!(out, "  {kind}: {angle:.12}");
            }
            for p in &report.properness {
                let _ = writeln!(
                    out,
                    "properness (edge relaxation): edge {} from {} to {} lhs {:.12} rhs {:.12} ok {}",
                    p.edge, p.from, p.to, p.lhs, p.rhs, p.ok
                );
            }
            for id in &report.unrealizable_cones {
                let _ = writeln!(out, "unrealizable-cone-weight: vertex {id} (needs w > 1)");
            }
            let passed = report.passed_strict();
            let _ = writeln!(out, "passed: {passed}");
            write_output(cli, out)?;
            Ok(if passed { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Check { file } => {
            let s = load_surface(file)?;
            let w = s.stored_weights();
            let report = s
                .delaunay_report(&w, cli.tol)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let mut out = header("check", file, cli);
            for st in &report {
                let _ = writeln!(
                    out,
                    "edge: {} tilt-sum: {:.12e} class: {}",
                    st.edge,
                    st.tilt_sum,
                    class_name(st.class)
                );
            }
            write_output(cli, out)?;
            Ok(EXIT_OK)
        }
        Command::Delaunay { file } => {
            let s = load_surface(file)?;
            let w = s.stored_weights();
            let run = flipper::flip_to_delaunay(&s, &w, cli.tol, cli.max_flips)
                .map_err(flip_error)?;
            let mut out = header("delaunay", file, cli);
            let _ = writeln!(out, "converged: true");
            let _ = writeln!(out, "flips: {}", run.flips);
            for l in &run.log {
                let _ = writeln!(
                    out,
                    "flip: edge {} tilt-sum {:.12e} old-length {:.12} new-length {:.12} support-before {:.12} support-after {:.12}",
                    l.edge, l.tilt_sum, l.old_length, l.new_length, l.support_before, l.support_after
                );
            }
            let report = run
                .surface
                .delaunay_report(&w, cli.tol)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            for st in &report {
                let _ = writeln!(
                    out,
                    "edge: {} length: {:.12} tilt-sum: {:.12e} class: {}",
                    st.edge,
                    run.surface.edge(st.edge).length,
                    st.tilt_sum,
                    class_name(st.class)
                );
            }
            let sig = flipper::tessellation_signature(&run.surface, &w, cli.tol)
                .map_err(flip_error)?;
            let _ = writeln!(out, "signature: {sig}");
            write_output(cli, out)?;
            Ok(EXIT_OK)
        }
        Command::Dual { file } => {
            let s = load_surface(file)?;
            let w = s.stored_weights();
            let run = flipper::flip_to_delaunay(&s, &w, cli.tol, cli.max_flips)
                .map_err(flip_error)?;
            let dual = flipper::voronoi_dual(&run.surface, &w, cli.tol).map_err(flip_error)?;
            let mut out = header("dual", file, cli);
            let _ = writeln!(out, "flips: {}", run.flips);
            let _ = writeln!(out, "dual-cells: {}", dual.cells.len());
            let _ = writeln!(out, "dual-edges: {}", dual.edges.len());
            let _ = writeln!(out, "dual-faces: {}", dual.num_faces);
            for c in &dual.cells {
                let _ = writeln!(out, "cell: {}", c.face);
                let _ = writeln!(out, "  triangles: {:?}", c.triangles);
                let _ = writeln!(
                    out,
                    "  face-vector: ({:.12}, {:.12}, {:.12})",
                    c.face_vector.t, c.face_vector.a, c.face_vector.b
                );
                let _ = writeln!(out, "  norm2: {:.12}", c.norm2);
                match &c.center {
                    Some(p) => {
                        let _ = writeln!(
                            out,
                            "  center: ({:.12}, {:.12}, {:.12})",
                            p.t, p.a, p.b
                        );
                    }
                    None => {
                        let _ = writeln!(out, "  center: none");
                    }
                }
            }
            for e in &dual.edges {
                let _ = writeln!(
                    out,
                    "dual-edge: surface-edge {} cells {} {}",
                    e.surface_edge, e.cells.0, e.cells.1
                );
            }
            write_output(cli, out)?;
            Ok(EXIT_OK)
        }
        Command::Fan { file } => {
            let s = load_surface(file)?;
            if cli.samples < s.num_vertices().max(2) {
                return Err(CliError::Validation(format!(
                    "--samples {} is too small for {} vertices",
                    cli.samples,
                    s.num_vertices()
                )));
            }
            let report = fan_sample(&s, cli.samples, cli.tol, cli.max_flips)
                .map_err(flip_error)?;
            // ternary SVG for three-vertex surfaces when -o is given
            if cli.o.is_some() && s.num_vertices() == 3 {
                let pts = fan_sample_points(&s, cli.samples, cli.tol, cli.max_flips, &report)
                    .map_err(flip_error)?;
                let svg = confspace::ternary_svg(&report, &pts);
                write_output(cli, svg)?;
                print!("{}", fan_report_text(&report, file, cli));
                return Ok(EXIT_OK);
            }
            write_output(cli, fan_report_text(&report, file, cli))?;
            Ok(EXIT_OK)
        }
        Command::Render { file } => {
            let s = load_surface(file)?;
            let w = s.stored_weights();
            let run = flipper::flip_to_delaunay(&s, &w, cli.tol, cli.max_flips)
                .map_err(flip_error)?;
            let svg = render_svg(&run.surface, &w, cli.depth, cli.tol).map_err(flip_error)?;
            write_output(cli, svg)?;
            Ok(EXIT_OK)
        }
        Command::HullVerify { file } => {
            let text = read_file(file)?;
            let orbit_file = OrbitFile::parse(&text)
                .map_err(|e| CliError::File(format!("{}: {e}", file.display())))?;
            let orbit = orbit_generate(&orbit_file.generators, &orbit_file.seeds, orbit_file.depth);
            let report = hull_support_verify(&orbit_file.faces, &orbit, cli.tol)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let mut out = header("hull-verify", file, cli);
            let _ = writeln!(out, "orbit-size: {}", report.orbit_size);
            let _ = writeln!(out, "depth: {}", report.depth);
            let _ = writeln!(
                out,
                "certified: no violation found up to depth {}",
                report.depth
            );
            for f in &report.faces {
                let _ = writeln!(out, "face: {}", f.face);
                let _ = writeln!(out, "  norm2: {:.12}", f.norm2);
                let _ = writeln!(out, "  elliptic: {}", f.elliptic);
                let _ = writeln!(out, "  worst-excess: {:.6e}", f.worst_excess);
                let _ = writeln!(out, "  violations: {}", f.violations.len());
                for (orbit_idx, excess) in &f.violations {
                    let _ = writeln!(out, "  violation: orbit {orbit_idx} excess {excess:.6e}");
                }
            }
            let passed = report.passed();
            let _ = writeln!(out, "passed: {passed}");
            write_output(cli, out)?;
            Ok(if passed { EXIT_OK } else { EXIT_VALIDATION })
        }
    }
}

fn fan_report_text(report: &FanReport, file: &std::path::Path, cli: &Cli) -> String {
    let mut out = header("fan", file, cli);
    let _ = writeln!(out, "resolution: {}", report.resolution);
    let _ = writeln!(out, "total-samples: {}", report.total_samples);
    let _ = writeln!(out, "proper-samples: {}", report.proper_samples);
    let _ = writeln!(out, "skipped-improper: {}", report.skipped_improper);
    let _ = writeln!(out, "failed-runs: {}", report.failed_runs);
    let _ = writeln!(out, "distinct-tessellations: {}", report.distinct());
    let _ = writeln!(
        out,
        "distinct-maximal-tessellations: {}",
        report.distinct_maximal()
    );
    for (i, g) in report.groups.iter().enumerate() {
        let _ = writeln!(out, "group: {i}");
        let _ = writeln!(out, "  signature: {}", g.signature);
        let _ = writeln!(out, "  samples: {}", g.samples);
        let _ = writeln!(out, "  interior-samples: {}", g.interior_samples);
        let fmt_vec = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:.6}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "  bary-min: {}", fmt_vec(&g.bary_min));
        let _ = writeln!(out, "  bary-max: {}", fmt_vec(&g.bary_max));
        let _ = writeln!(out, "  cone-max-violation: {:.6e}", g.max_cone_violation);
    }
    out
}
