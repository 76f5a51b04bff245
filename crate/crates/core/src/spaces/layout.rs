//! Degrees of freedom: vertex values, interior edge-node values and
//! interior moments, two components each.
//!
//! Scalar "nodes" are numbered globally as vertices, then edge interior
//! nodes (edge by edge, in the edge's own direction), then element moment
//! slots; dof = 2·node + component.

use super::trace::trace_nodes;
use crate::error::Result;
use crate::geometry::{CurvedMesh, Vec2};
use crate::poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Vertex(usize),
    /// Interior node `q` of an edge, counted in the edge's own direction.
    EdgeInterior {
        edge: usize,
        q: usize,
    },
    Moment {
        element: usize,
        alpha: usize,
    },
}

#[derive(Debug, Clone)]
pub struct DofLayout {
    pub k: usize,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_elements: usize,
    /// Per element: global node of every local node, in local order
    /// (vertices, edge interiors by loop edge in traversal order, moments).
    pub element_nodes: Vec<Vec<usize>>,
}

impl DofLayout {
    pub fn new(mesh: &CurvedMesh, k: usize) -> Self {
        let nv = mesh.vertices.len();
        let ne = mesh.edges.len();
        let per_edge = k - 1;
        let nm = poly::count_signed(k as isize - 2);
        let element_nodes = mesh
            .elements
            .iter()
            .enumerate()
            .map(|(id, el)| {
                let mut nodes: Vec<usize> = el.vertices.clone();
                for oe in &el.edges {
                    for q in 0..per_edge {
                        let qq = if oe.reversed { per_edge - 1 - q } else { q };
                        nodes.push(nv + oe.edge * per_edge + qq);
                    }
                }
                for a in 0..nm {
                    nodes.push(nv + ne * per_edge + id * nm + a);
                }
                nodes
            })
            .collect();
        DofLayout {
            k,
            num_vertices: nv,
            num_edges: ne,
            num_elements: mesh.elements.len(),
            element_nodes,
        }
    }

    pub fn moments_per_element(&self) -> usize {
        poly::count_signed(self.k as isize - 2)
    }

    pub fn num_skeleton_nodes(&self) -> usize {
        self.num_vertices + self.num_edges * (self.k - 1)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_skeleton_nodes() + self.num_elements * self.moments_per_element()
    }

    pub fn num_dofs(&self) -> usize {
        2 * self.num_nodes()
    }

    /// Global dof indices of element `e`, in local order.
    pub fn element_dofs(&self, e: usize) -> Vec<usize> {
        self.element_nodes[e]
            .iter()
            .flat_map(|&n| [2 * n, 2 * n + 1])
            .collect()
    }

    pub fn node_kind(&self, node: usize) -> NodeKind {
        let per_edge = self.k - 1;
        if node < self.num_vertices {
            NodeKind::Vertex(node)
        } else if node < self.num_skeleton_nodes() {
            let r = node - self.num_vertices;
            NodeKind::EdgeInterior {
                edge: r / per_edge,
                q: r % per_edge,
            }
        } else {
            let r = node - self.num_skeleton_nodes();
            let nm = self.moments_per_element();
            NodeKind::Moment {
                element: r / nm,
                alpha: r % nm,
            }
        }
    }

    /// Global node index of interior node `q` of `edge`.
    pub fn edge_node(&self, edge: usize, q: usize) -> usize {
        self.num_vertices + edge * (self.k - 1) + q
    }

    /// Physical positions of all skeleton nodes.
    pub fn skeleton_points(&self, mesh: &CurvedMesh) -> Result<Vec<Vec2>> {
        let s = trace_nodes(self.k)?;
        let mut pts = mesh.vertices.clone();
        for e in 0..self.num_edges {
            let p = mesh.edge_param(e);
            for &sq in &s[1..self.k] {
                pts.push(p.point(sq));
            }
        }
        Ok(pts)
    }

    /// All skeleton nodes on the given edges (vertices and interior nodes), sorted.
    pub fn nodes_on_edges(&self, mesh: &CurvedMesh, edges: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &e in edges {
            out.extend_from_slice(&mesh.edges[e].vertices);
            for q in 0..self.k - 1 {
                out.push(self.edge_node(e, q));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_benchmark_mesh, BenchmarkDomain, MeshFamily, MeshSpec};

    #[test]
    fn counts_and_shared_edges() {
        let mesh = generate_benchmark_mesh(&MeshSpec {
            domain: BenchmarkDomain::Rectangle {
                width: 2.0,
                height: 1.0,
            },
            family: MeshFamily::Quad,
            elements: 2,
            seed: 0,
        })
        .unwrap();
        for k in 1..=3 {
            let l = DofLayout::new(&mesh, k);
            let nm = poly::count_signed(k as isize - 2);
            for e in 0..2 {
                assert_eq!(l.element_dofs(e).len(), 2 * (4 + 4 * (k - 1) + nm));
            }
            // shared edge: same global nodes, opposite local order
            let shared = (0..mesh.edges.len())
                .find(|&e| !mesh.is_boundary_edge(e))
                .unwrap();
            let pts = l.skeleton_points(&mesh).unwrap();
            let coords = |el: usize| -> Vec<Vec2> {
                let pos = mesh.elements[el]
                    .edges
                    .iter()
                    .position(|o| o.edge == shared)
                    .unwrap();
                let start = 4 + pos * (k - 1);
                l.element_nodes[el][start..start + k - 1]
                    .iter()
                    .map(|&n| pts[n])
                    .collect()
            };
            let mut b = coords(1);
            b.reverse();
            assert_eq!(coords(0), b);
        }
    }
}
