//! Curves, curved polygonal meshes, benchmark mesh generators and measures.

mod curve;
mod generate;
mod io;
mod measures;
mod mesh;
mod voronoi;

pub use curve::{CurveKind, EdgeParam, ParametrizedCurve};
pub use generate::{generate_benchmark_mesh, BenchmarkDomain, MeshFamily, MeshSpec};
pub use io::{load_mesh, save_mesh};
pub use measures::{arc_length, element_measures, point_in_region, ElementMeasures};
pub use mesh::{CurvedMesh, Edge, EdgeGeometry, Element, OrientedEdge};

/// 2-vector used for points, tangents and displacements.
pub type Vec2 = nalgebra::Vector2<f64>;
