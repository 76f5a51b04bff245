use std::collections::BTreeMap;

use super::measures::element_measures;
use super::{EdgeParam, ParametrizedCurve, Vec2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeGeometry {
    Straight,
    /// Restriction of `curves[curve]` to `[ta, tb]`; `ta` maps to the first vertex.
    Curved {
        curve: usize,
        ta: f64,
        tb: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub geometry: EdgeGeometry,
}

impl Edge {
    pub fn is_curved(&self) -> bool {
        matches!(self.geometry, EdgeGeometry::Curved { .. })
    }
}

/// Edge reference inside an element loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedEdge {
    pub edge: usize,
    /// True when the loop traverses the edge from its second vertex to its first.
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// Counterclockwise loop.
    pub edges: Vec<OrientedEdge>,
    /// `vertices[i]` is the start of `edges[i]`.
    pub vertices: Vec<usize>,
    pub centroid: Vec2,
    pub diameter: f64,
    pub area: f64,
}

/// Conforming mesh of polygons whose boundary edges may be curved.
///
/// Immutable once built; all invariants are checked by [`CurvedMesh::new`].
#[derive(Debug, Clone)]
pub struct CurvedMesh {
    pub vertices: Vec<Vec2>,
    pub curves: Vec<ParametrizedCurve>,
    pub edges: Vec<Edge>,
    pub elements: Vec<Element>,
    /// Named boundary edge groups.
    pub groups: BTreeMap<String, Vec<usize>>,
    edge_elements: Vec<Vec<usize>>,
}

fn segments_cross(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> bool {
    let orient = |p: Vec2, q: Vec2, r: Vec2| (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

impl CurvedMesh {
    /// Builds and validates a mesh. Each element is given as a list of edge
    /// ids in loop order; orientation is inferred from connectivity and the
    /// loop is flipped if needed so that every element is counterclockwise.
    pub fn new(
        vertices: Vec<Vec2>,
        curves: Vec<ParametrizedCurve>,
        edges: Vec<Edge>,
        element_loops: Vec<Vec<usize>>,
        groups: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self> {
        let mut mesh = CurvedMesh {
            vertices,
            curves,
            edges,
            elements: Vec::new(),
            groups,
            edge_elements: Vec::new(),
        };
        for (id, e) in mesh.edges.iter().enumerate() {
            mesh.validate_edge(id, e)?;
        }
        let mut elements = Vec::with_capacity(element_loops.len());
        for (id, lp) in element_loops.iter().enumerate() {
            elements.push(mesh.build_element(id, lp)?);
        }
        mesh.elements = elements;
        mesh.edge_elements = vec![Vec::new(); mesh.edges.len()];
        for (eid, el) in mesh.elements.iter().enumerate() {
            for oe in &el.edges {
                mesh.edge_elements[oe.edge].push(eid);
            }
        }
        for (id, owners) in mesh.edge_elements.iter().enumerate() {
            match owners.len() {
                1 => {}
                2 => {
                    if mesh.edges[id].is_curved() {
                        return Err(Error::InvalidEdge {
                            edge: id,
                            reason: "interior edges must be straight".into(),
                        });
                    }
                    let dir = |el: usize| {
                        mesh.elements[el]
                            .edges
                            .iter()
                            .find(|o| o.edge == id)
                            .unwrap()
                            .reversed
                    };
                    if dir(owners[0]) == dir(owners[1]) {
                        return Err(Error::InvalidEdge {
                            edge: id,
                            reason: "shared edge traversed in the same direction by both elements"
                                .into(),
                        });
                    }
                }
                0 => {
                    return Err(Error::InvalidEdge {
                        edge: id,
                        reason: "edge not used by any element".into(),
                    })
                }
                n => {
                    return Err(Error::InvalidEdge {
                        edge: id,
                        reason: format!("edge shared by {n} elements"),
                    })
                }
            }
        }
        for (name, ids) in &mesh.groups {
            for &id in ids {
                if id >= mesh.edges.len() {
                    return Err(Error::InvalidMesh(format!(
                        "group {name} references unknown edge {id}"
                    )));
                }
                if mesh.edge_elements[id].len() != 1 {
                    return Err(Error::InvalidMesh(format!(
                        "group {name} contains interior edge {id}"
                    )));
                }
            }
        }
        Ok(mesh)
    }

    fn validate_edge(&self, id: usize, e: &Edge) -> Result<()> {
        let bad = |reason: String| Error::InvalidEdge { edge: id, reason };
        let [a, b] = e.vertices;
        if a >= self.vertices.len() || b >= self.vertices.len() {
            return Err(bad("unknown vertex".into()));
        }
        let chord = (self.vertices[b] - self.vertices[a]).norm();
        if !(chord > 0.0) {
            return Err(bad("zero-length chord".into()));
        }
        if let EdgeGeometry::Curved { curve, ta, tb } = e.geometry {
            let c = self
                .curves
                .get(curve)
                .ok_or_else(|| bad(format!("unknown curve {curve}")))?;
            if c.is_circle() && (tb - ta).abs() >= std::f64::consts::PI * 2.0 {
                return Err(bad("arc spans a full turn".into()));
            }
            let (pa, _) = c.eval(ta)?;
            let (pb, _) = c.eval(tb)?;
            let h = self.edge_param(id).length();
            let tol = 1e-12 * h.max(1e-300)
                + 1e-15 * self.vertices[a].norm().max(self.vertices[b].norm());
            if (pa - self.vertices[a]).norm() > tol || (pb - self.vertices[b]).norm() > tol {
                return Err(bad("curve endpoints do not match the edge vertices".into()));
            }
            if h < chord * (1.0 - 1e-12) {
                return Err(bad("curved length shorter than chord".into()));
            }
        }
        Ok(())
    }

    fn build_element(&self, id: usize, lp: &[usize]) -> Result<Element> {
        let bad = |reason: String| Error::InvalidElement {
            element: id,
            reason,
        };
        if lp.len() < 2 {
            return Err(bad("fewer than two edges".into()));
        }
        for &e in lp {
            if e >= self.edges.len() {
                return Err(bad(format!("unknown edge {e}")));
            }
        }
        let e0 = &self.edges[lp[0]];
        let e1 = &self.edges[lp[1]];
        // first edge orientation: its end must be a vertex of the second edge
        let first_rev = !(e1.vertices.contains(&e0.vertices[1]));
        let mut edges = Vec::with_capacity(lp.len());
        let mut vertices = Vec::with_capacity(lp.len());
        let mut cur = if first_rev {
            e0.vertices[0]
        } else {
            e0.vertices[1]
        };
        let start = if first_rev {
            e0.vertices[1]
        } else {
            e0.vertices[0]
        };
        edges.push(OrientedEdge {
            edge: lp[0],
            reversed: first_rev,
        });
        vertices.push(start);
        for &eid in &lp[1..] {
            let e = &self.edges[eid];
            let reversed = if e.vertices[0] == cur {
                false
            } else if e.vertices[1] == cur {
                true
            } else {
                return Err(bad(format!("edge loop is open at edge {eid}")));
            };
            vertices.push(cur);
            cur = if reversed {
                e.vertices[0]
            } else {
                e.vertices[1]
            };
            edges.push(OrientedEdge {
                edge: eid,
                reversed,
            });
        }
        if cur != start {
            return Err(bad("edge loop is not closed".into()));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(bad("edge loop visits a vertex twice".into()));
        }
        let mut el = Element {
            edges,
            vertices,
            centroid: Vec2::zeros(),
            diameter: 0.0,
            area: 0.0,
        };
        let boundary = self.boundary_of(&el);
        let signed = boundary_signed_area(&boundary);
        if signed < 0.0 {
            el.edges.reverse();
            for oe in el.edges.iter_mut() {
                oe.reversed = !oe.reversed;
            }
            el.vertices = el
                .edges
                .iter()
                .map(|oe| {
                    let e = &self.edges[oe.edge];
                    if oe.reversed {
                        e.vertices[1]
                    } else {
                        e.vertices[0]
                    }
                })
                .collect();
        }
        let n = el.vertices.len();
        if n >= 4 {
            let p: Vec<Vec2> = el.vertices.iter().map(|&v| self.vertices[v]).collect();
            for i in 0..n {
                for j in i + 2..n {
                    if i == 0 && j == n - 1 {
                        continue;
                    }
                    if segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]) {
                        return Err(bad("self-intersecting edge loop".into()));
                    }
                }
            }
        }
        let boundary = self.boundary_of(&el);
        let m = element_measures(&boundary).map_err(|e| bad(e.to_string()))?;
        el.centroid = m.centroid;
        el.diameter = m.diameter;
        el.area = m.area;
        Ok(el)
    }

    /// Parametrization of an edge in its own direction (first to second vertex).
    pub fn edge_param(&self, id: usize) -> EdgeParam {
        let e = &self.edges[id];
        match e.geometry {
            EdgeGeometry::Straight => EdgeParam::Line {
                p0: self.vertices[e.vertices[0]],
                p1: self.vertices[e.vertices[1]],
            },
            EdgeGeometry::Curved { curve, ta, tb } => self.curves[curve].restrict(ta, tb),
        }
    }

    pub fn oriented_param(&self, oe: OrientedEdge) -> EdgeParam {
        let p = self.edge_param(oe.edge);
        if oe.reversed {
            p.reversed()
        } else {
            p
        }
    }

    fn boundary_of(&self, el: &Element) -> Vec<EdgeParam> {
        el.edges.iter().map(|&oe| self.oriented_param(oe)).collect()
    }

    /// Counterclockwise boundary of element `id`.
    pub fn element_boundary(&self, id: usize) -> Vec<EdgeParam> {
        self.boundary_of(&self.elements[id])
    }

    pub fn edge_elements(&self, edge: usize) -> &[usize] {
        &self.edge_elements[edge]
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        self.edge_elements[edge].len() == 1
    }

    pub fn group(&self, name: &str) -> Result<&[usize]> {
        self.groups
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::BoundaryCondition(format!("unknown boundary group '{name}'")))
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Mean element diameter.
    pub fn mean_h(&self) -> f64 {
        self.elements.iter().map(|e| e.diameter).sum::<f64>() / self.elements.len() as f64
    }

    pub fn total_area(&self) -> f64 {
        self.elements.iter().map(|e| e.area).sum()
    }

    pub fn has_curved_edges(&self) -> bool {
        self.edges.iter().any(|e| e.is_curved())
    }

    /// Copy with every curved edge replaced by its chord (vertices unchanged).
    pub fn rectified(&self) -> Result<CurvedMesh> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                vertices: e.vertices,
                geometry: EdgeGeometry::Straight,
            })
            .collect();
        let loops = self
            .elements
            .iter()
            .map(|el| el.edges.iter().map(|oe| oe.edge).collect())
            .collect();
        CurvedMesh::new(
            self.vertices.clone(),
            self.curves.clone(),
            edges,
            loops,
            self.groups.clone(),
        )
    }
}

/// Signed area of a loop of edge parametrizations (via `½∮ x dy − y dx`).
fn boundary_signed_area(boundary: &[EdgeParam]) -> f64 {
    let mut a = 0.0;
    for e in boundary {
        let nseg = if e.is_curved() { 32 } else { 1 };
        for j in 0..nseg {
            let p = e.point(j as f64 / nseg as f64);
            let q = e.point((j + 1) as f64 / nseg as f64);
            a += 0.5 * (p.x * q.y - q.x * p.y);
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_squares() -> (Vec<Vec2>, Vec<Edge>) {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(2.0, 1.0),
        ];
        let s = |a, b| Edge {
            vertices: [a, b],
            geometry: EdgeGeometry::Straight,
        };
        let e = vec![
            s(0, 1),
            s(1, 2),
            s(1, 4),
            s(2, 5),
            s(4, 3),
            s(5, 4),
            s(3, 0),
        ];
        (v, e)
    }

    #[test]
    fn build_and_orient() {
        let (v, e) = two_squares();
        // second element given clockwise on purpose
        let m = CurvedMesh::new(
            v,
            vec![],
            e,
            vec![vec![0, 2, 4, 6], vec![2, 1, 3, 5]],
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(m.num_elements(), 2);
        assert!((m.elements[1].area - 1.0).abs() < 1e-14);
        assert!((m.elements[1].centroid - Vec2::new(1.5, 0.5)).norm() < 1e-14);
        assert_eq!(m.edge_elements(2).len(), 2);
        assert!(m.is_boundary_edge(0));
    }

    #[test]
    fn open_loop_names_element() {
        let (v, e) = two_squares();
        let err = CurvedMesh::new(
            v,
            vec![],
            e,
            vec![vec![0, 2, 4, 6], vec![1, 3, 6]],
            BTreeMap::new(),
        )
        .unwrap_err();
        match err {
            Error::InvalidElement { element, .. } => assert_eq!(element, 1),
            other => panic!("unexpected {other}"),
        }
    }
}
