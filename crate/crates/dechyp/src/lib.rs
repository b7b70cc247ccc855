//! Weighted Delaunay tessellations of decorated hyperbolic surfaces.
//!
//! A decorated hyperbolic surface of finite type carries a cycle (circle,
//! horocycle or hypercycle) about each cone point, cusp or flare. This crate
//! computes the induced canonical tessellation via the flip algorithm,
//! extracts the dual Voronoi decomposition, explores the polyhedral-cone
//! decomposition of the decoration space, verifies convex-hull support
//! properties of group orbits, and renders developed tessellations in the
//! Poincaré disc.
//!
//! Modules follow the pipeline:
//! - [`minkcore`]: the signature-(2,1) vector model of cycles and lines;
//! - [`dectri`]: one decorated triangle (Gram matrix, lift, tilts, support);
//! - [`surface`]: half-edge surfaces, file format, validation;
//! - [`flipper`]: flips, the flip algorithm, fingerprints, Voronoi dual;
//! - [`confspace`]: decoration-space cones and secondary-fan sampling;
//! - [`hull`]: group orbits and hull support verification;
//! - [`render`]: SVG output.
//!
//! ```
//! use dechyp::DecoratedSurface;
//! use dechyp::flipper::{flip_edge, flip_to_delaunay, tessellation_signature};
//!
//! // a one-cusp torus from two ideal triangles
//! let surface = DecoratedSurface::parse(r#"{
//!     "format": "dechyp-surface-v1",
//!     "vertices": [{"id": 0, "type": 0, "weight": 1.0}],
//!     "triangles": [{"corners": [0, 0, 0]}, {"corners": [0, 0, 0]}],
//!     "gluing": [[[0, 0], [1, 0]], [[0, 1], [1, 1]], [[0, 2], [1, 2]]],
//!     "lengths": [{"pair": 0, "value": 0.0},
//!                 {"pair": 1, "value": 0.0},
//!                 {"pair": 2, "value": 0.0}]
//! }"#).unwrap();
//!
//! // perturb by one flip, then recover the canonical tessellation
//! let weights = surface.stored_weights();
//! let mut start = surface.clone();
//! flip_edge(&mut start, 0, &weights, 1e-9).unwrap();
//! let run = flip_to_delaunay(&start, &weights, 1e-9, 1_000_000).unwrap();
//! assert_eq!(run.flips, 1);
//! let sig = tessellation_signature(&run.surface, &weights, 1e-9).unwrap();
//! assert_eq!(sig, tessellation_signature(&surface, &weights, 1e-9).unwrap());
//! ```

pub mod confspace;
pub mod dectri;
pub mod flipper;
pub mod hull;
pub mod minkcore;
pub mod render;
pub mod surface;

pub use dectri::{DecoratedTriangle, TriangleLift};
pub use flipper::{FlipResult, TessellationSignature};
pub use minkcore::{mdot, MinkVector, VertexType, DEFAULT_TOL};
pub use surface::DecoratedSurface;
