//! Line-oriented text format `curvem-mesh v1`.
//!
//! ```text
//! # curvem-mesh v1
//! vertex <id> <x> <y>
//! curve <id> circle <cx> <cy> <r>
//! curve <id> segment <x0> <y0> <x1> <y1>
//! edge <id> <v0> <v1> [on <curve-id> <ta> <tb>]
//! element <id> <edge-id> <edge-id> ...
//! bgroup <name> <edge-id> ...
//! ```
//! Ids are arbitrary non-negative integers; `#` starts a comment.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use super::{CurvedMesh, Edge, EdgeGeometry, ParametrizedCurve, Vec2};
use crate::error::{Error, Result};

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a mesh (coordinates with 17 significant digits).
pub fn save_mesh(mesh: &CurvedMesh) -> String {
    let mut s = String::new();
    s.push_str("# curvem-mesh v1\n");
    for (i, v) in mesh.vertices.iter().enumerate() {
        let _ = writeln!(s, "vertex {i} {} {}", fmt_f(v.x), fmt_f(v.y));
    }
    for (i, c) in mesh.curves.iter().enumerate() {
        match c.kind {
            super::CurveKind::Circle { center, radius } => {
                let _ = writeln!(
                    s,
                    "curve {i} circle {} {} {}",
                    fmt_f(center.x),
                    fmt_f(center.y),
                    fmt_f(radius)
                );
            }
            super::CurveKind::Segment { p0, p1 } => {
                let _ = writeln!(
                    s,
                    "curve {i} segment {} {} {} {}",
                    fmt_f(p0.x),
                    fmt_f(p0.y),
                    fmt_f(p1.x),
                    fmt_f(p1.y)
                );
            }
        }
    }
    for (i, e) in mesh.edges.iter().enumerate() {
        let [a, b] = e.vertices;
        match e.geometry {
            EdgeGeometry::Straight => {
                let _ = writeln!(s, "edge {i} {a} {b}");
            }
            EdgeGeometry::Curved { curve, ta, tb } => {
                let _ = writeln!(s, "edge {i} {a} {b} on {curve} {} {}", fmt_f(ta), fmt_f(tb));
            }
        }
    }
    for (i, el) in mesh.elements.iter().enumerate() {
        let ids: Vec<String> = el.edges.iter().map(|oe| oe.edge.to_string()).collect();
        let _ = writeln!(s, "element {i} {}", ids.join(" "));
    }
    for (name, ids) in &mesh.groups {
        let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "bgroup {name} {}", ids.join(" "));
    }
    s
}

struct Cursor<'a> {
    line: usize,
    toks: std::str::SplitWhitespace<'a>,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str> {
        self.toks
            .next()
            .ok_or_else(|| self.err(format!("missing {what}")))
    }

    fn float(&mut self, what: &str) -> Result<f64> {
        let w = self.word(what)?;
        w.parse()
            .map_err(|_| self.err(format!("invalid number '{w}' for {what}")))
    }

    fn id(&mut self, what: &str) -> Result<usize> {
        let w = self.word(what)?;
        w.parse()
            .map_err(|_| self.err(format!("invalid id '{w}' for {what}")))
    }

    fn rest_ids(&mut self, what: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for w in self.toks.by_ref() {
            out.push(w.parse().map_err(|_| Error::Parse {
                line: self.line,
                message: format!("invalid id '{w}' in {what}"),
            })?);
        }
        Ok(out)
    }

    fn done(&mut self) -> Result<()> {
        match self.toks.next() {
            None => Ok(()),
            Some(w) => Err(self.err(format!("unexpected token '{w}'"))),
        }
    }
}

fn insert_unique(
    map: &mut HashMap<usize, usize>,
    id: usize,
    index: usize,
    c: &Cursor,
    kind: &str,
) -> Result<()> {
    if map.insert(id, index).is_some() {
        return Err(c.err(format!("duplicate {kind} id {id}")));
    }
    Ok(())
}

/// `(id, v0, v1, Some((curve, t0, t1)))` as read, before id resolution.
type RawEdge = (usize, usize, usize, Option<(usize, f64, f64)>);

/// Parses and validates a mesh. Errors carry the offending line number, or
/// the element/edge id for invariant violations.
pub fn load_mesh(text: &str) -> Result<CurvedMesh> {
    let mut vmap = HashMap::new();
    let mut cmap = HashMap::new();
    let mut emap = HashMap::new();
    let mut vertices = Vec::new();
    let mut curves = Vec::new();
    let mut raw_edges: Vec<RawEdge> = Vec::new();
    let mut raw_elements: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut raw_groups: Vec<(usize, String, Vec<usize>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut c = Cursor {
            line: lineno + 1,
            toks: line.split_whitespace(),
        };
        let Some(kw) = c.toks.next() else { continue };
        match kw {
            "vertex" => {
                let id = c.id("vertex id")?;
                let x = c.float("x")?;
                let y = c.float("y")?;
                c.done()?;
                insert_unique(&mut vmap, id, vertices.len(), &c, "vertex")?;
                vertices.push(Vec2::new(x, y));
            }
            "curve" => {
                let id = c.id("curve id")?;
                let kind = c.word("curve kind")?;
                let curve = match kind {
                    "circle" => {
                        let cx = c.float("cx")?;
                        let cy = c.float("cy")?;
                        let r = c.float("radius")?;
                        ParametrizedCurve::circle(Vec2::new(cx, cy), r)
                            .map_err(|e| c.err(e.to_string()))?
                    }
                    "segment" => {
                        let x0 = c.float("x0")?;
                        let y0 = c.float("y0")?;
                        let x1 = c.float("x1")?;
                        let y1 = c.float("y1")?;
                        ParametrizedCurve::segment(Vec2::new(x0, y0), Vec2::new(x1, y1))
                            .map_err(|e| c.err(e.to_string()))?
                    }
                    other => return Err(c.err(format!("unknown curve kind '{other}'"))),
                };
                c.done()?;
                insert_unique(&mut cmap, id, curves.len(), &c, "curve")?;
                curves.push(curve);
            }
            "edge" => {
                let id = c.id("edge id")?;
                let v0 = c.id("v0")?;
                let v1 = c.id("v1")?;
                let on = match c.toks.next() {
                    None => None,
                    Some("on") => {
                        let cid = c.id("curve id")?;
                        let ta = c.float("ta")?;
                        let tb = c.float("tb")?;
                        c.done()?;
                        Some((cid, ta, tb))
                    }
                    Some(w) => return Err(c.err(format!("expected 'on', found '{w}'"))),
                };
                insert_unique(&mut emap, id, raw_edges.len(), &c, "edge")?;
                raw_edges.push((c.line, v0, v1, on));
            }
            "element" => {
                let _id = c.id("element id")?;
                let ids = c.rest_ids("element")?;
                raw_elements.push((c.line, ids));
            }
            "bgroup" => {
                let name = c.word("group name")?.to_string();
                let ids = c.rest_ids("bgroup")?;
                raw_groups.push((c.line, name, ids));
            }
            other => return Err(c.err(format!("unknown directive '{other}'"))),
        }
    }

    let mut edges = Vec::with_capacity(raw_edges.len());
    for (line, v0, v1, on) in raw_edges {
        let lookup = |m: &HashMap<usize, usize>, id: usize, what: &str| {
            m.get(&id).copied().ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown {what} id {id}"),
            })
        };
        let a = lookup(&vmap, v0, "vertex")?;
        let b = lookup(&vmap, v1, "vertex")?;
        let geometry = match on {
            None => EdgeGeometry::Straight,
            Some((cid, ta, tb)) => EdgeGeometry::Curved {
                curve: lookup(&cmap, cid, "curve")?,
                ta,
                tb,
            },
        };
        edges.push(Edge {
            vertices: [a, b],
            geometry,
        });
    }
    let resolve = |line: usize, ids: Vec<usize>| -> Result<Vec<usize>> {
        ids.into_iter()
            .map(|id| {
                emap.get(&id).copied().ok_or(Error::Parse {
                    line,
                    message: format!("unknown edge id {id}"),
                })
            })
            .collect()
    };
    let mut loops = Vec::with_capacity(raw_elements.len());
    for (line, ids) in raw_elements {
        loops.push(resolve(line, ids)?);
    }
    let mut groups = BTreeMap::new();
    for (line, name, ids) in raw_groups {
        groups
            .entry(name)
            .or_insert_with(Vec::new)
            .extend(resolve(line, ids)?);
    }
    CurvedMesh::new(vertices, curves, edges, loops, groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "\
# unit square split in two
vertex 10 0 0
vertex 11 1 0
vertex 12 1 1
vertex 13 0 1
edge 0 10 11
edge 1 11 12
edge 2 12 13
edge 3 13 10
element 0 0 1 2 3
bgroup all 0 1 2 3
";

    #[test]
    fn parse_square() {
        let m = load_mesh(SQUARE).unwrap();
        assert_eq!(m.num_elements(), 1);
        assert!((m.elements[0].area - 1.0).abs() < 1e-14);
        assert_eq!(m.group("all").unwrap().len(), 4);
    }

    #[test]
    fn unknown_curve_is_parse_error() {
        let text = "vertex 0 1 0\nvertex 1 0 1\nvertex 2 0 0\nedge 0 0 1 on 7 0 1.5707963267948966\nedge 1 1 2\nedge 2 2 0\nelement 0 0 1 2\n";
        match load_mesh(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("curve"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_number_reports_line() {
        let text = "vertex 0 1 0\nvertex 1 zero 1\n";
        assert!(matches!(load_mesh(text), Err(Error::Parse { line: 2, .. })));
    }
}
