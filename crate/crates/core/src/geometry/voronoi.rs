//! Clipped Voronoi cells with exact circular boundary pieces, and Lloyd
//! relaxation. Used by the `voro` and `rhex` mesh families.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::measures::element_measures;
use super::{EdgeParam, Vec2};
use crate::error::{Error, Result};

/// Boundary circle of a clip domain.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ClipCircle {
    pub center: Vec2,
    pub radius: f64,
    /// Keep the inside of the circle (true) or the outside (false, a hole).
    pub inside: bool,
}

/// Straight boundary line `normal · x ≤ offset` (normal points outward).
#[derive(Debug, Clone, Copy)]
pub(crate) struct ClipLine {
    pub normal: Vec2,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct ClipDomain {
    pub lo: Vec2,
    pub hi: Vec2,
    pub lines: Vec<ClipLine>,
    pub circles: Vec<ClipCircle>,
}

impl ClipDomain {
    pub fn contains(&self, p: Vec2) -> bool {
        self.lines.iter().all(|l| l.normal.dot(&p) <= l.offset)
            && self
                .circles
                .iter()
                .all(|c| ((p - c.center).norm() <= c.radius) == c.inside)
    }

    /// Distance from `p` to the nearest boundary piece (lines and circles).
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        let mut d = f64::INFINITY;
        for l in &self.lines {
            d = d.min((l.offset - l.normal.dot(&p)).abs());
        }
        for c in &self.circles {
            d = d.min(((p - c.center).norm() - c.radius).abs());
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum CellEdge {
    Line,
    /// Arc on `circles[circle]` from angle `ta` to `tb`.
    Arc {
        circle: usize,
        ta: f64,
        tb: f64,
    },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct CellNode {
    pub p: Vec2,
    /// Edge leaving this node towards the next one.
    pub edge: CellEdge,
}

/// Counterclockwise loop of nodes; each node owns its outgoing edge.
#[derive(Debug, Clone)]
pub(crate) struct CurvedCell {
    pub nodes: Vec<CellNode>,
}

impl CurvedCell {
    pub fn params(&self, circles: &[ClipCircle]) -> Vec<EdgeParam> {
        let n = self.nodes.len();
        (0..n)
            .map(|i| {
                let a = self.nodes[i];
                let b = self.nodes[(i + 1) % n];
                match a.edge {
                    CellEdge::Line => EdgeParam::Line { p0: a.p, p1: b.p },
                    CellEdge::Arc { circle, ta, tb } => EdgeParam::Arc {
                        center: circles[circle].center,
                        radius: circles[circle].radius,
                        ta,
                        tb,
                    },
                }
            })
            .collect()
    }
}

fn clip_halfplane(poly: &[Vec2], normal: Vec2, offset: f64) -> Vec<Vec2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let da = normal.dot(&a) - offset;
        let db = normal.dot(&b) - offset;
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a + t * (b - a));
        }
    }
    out
}

fn angle_of(c: &ClipCircle, p: Vec2) -> f64 {
    let d = p - c.center;
    d.y.atan2(d.x)
}

fn on_circle(c: &ClipCircle, theta: f64) -> Vec2 {
    c.center + c.radius * Vec2::new(theta.cos(), theta.sin())
}

/// Clips a curved cell against one circle. Returns `None` if nothing is kept.
pub(crate) fn clip_circle(
    cell: &CurvedCell,
    circles: &[ClipCircle],
    which: usize,
) -> Result<Option<CurvedCell>> {
    let c = circles[which];
    let keep = |p: Vec2| ((p - c.center).norm() <= c.radius) == c.inside;
    // refine: split straight edges at their crossings with the circle
    let mut nodes: Vec<(CellNode, bool)> = Vec::new(); // (node, node is on the circle)
    let n = cell.nodes.len();
    for i in 0..n {
        let a = cell.nodes[i];
        let b = cell.nodes[(i + 1) % n];
        nodes.push((
            a,
            ((a.p - c.center).norm() - c.radius).abs() <= 1e-12 * c.radius,
        ));
        if let CellEdge::Line = a.edge {
            let d = b.p - a.p;
            let f = a.p - c.center;
            let qa = d.dot(&d);
            let qb = 2.0 * f.dot(&d);
            let qc = f.dot(&f) - c.radius * c.radius;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc > 0.0 {
                let sq = disc.sqrt();
                let mut ts = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
                ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                for t in ts {
                    if t > 1e-12 && t < 1.0 - 1e-12 {
                        let theta = angle_of(&c, a.p + t * d);
                        nodes.push((
                            CellNode {
                                p: on_circle(&c, theta),
                                edge: CellEdge::Line,
                            },
                            true,
                        ));
                    }
                }
            }
        }
    }
    let m = nodes.len();
    let mid_kept: Vec<bool> = (0..m)
        .map(|i| {
            let a = nodes[i].0;
            let b = nodes[(i + 1) % m].0;
            let mid = match a.edge {
                CellEdge::Line => 0.5 * (a.p + b.p),
                CellEdge::Arc { circle, ta, tb } => on_circle(&circles[circle], 0.5 * (ta + tb)),
            };
            keep(mid)
        })
        .collect();
    if mid_kept.iter().all(|&k| k) {
        if !c.inside {
            let poly: Vec<EdgeParam> = cell.params(circles);
            if super::measures::point_in_region(&poly, c.center) {
                return Err(Error::MeshGeneration(
                    "a cell contains a whole hole; use more elements".into(),
                ));
            }
        }
        return Ok(Some(cell.clone()));
    }
    if mid_kept.iter().all(|&k| !k) {
        return Ok(None);
    }
    let start = (0..m)
        .find(|&i| mid_kept[i] && !mid_kept[(i + m - 1) % m])
        .unwrap();
    let mut out = Vec::new();
    let mut i = start;
    let mut steps = 0;
    while steps < m {
        if mid_kept[i] {
            out.push(nodes[i].0);
            i = (i + 1) % m;
            steps += 1;
        } else {
            // exit at node i: walk to the next re-entry node j
            let mut j = i;
            while !mid_kept[j] {
                j = (j + 1) % m;
                steps += 1;
            }
            let x = nodes[i].0.p;
            let y = nodes[j].0.p;
            let tx = angle_of(&c, x);
            let mut ty = angle_of(&c, y);
            if c.inside {
                while ty <= tx {
                    ty += 2.0 * PI;
                }
            } else {
                while ty >= tx {
                    ty -= 2.0 * PI;
                }
            }
            out.push(CellNode {
                p: on_circle(&c, tx),
                edge: CellEdge::Arc {
                    circle: which,
                    ta: tx,
                    tb: ty,
                },
            });
            i = j;
            if i == start {
                break;
            }
        }
        if i == start {
            break;
        }
    }
    // snap re-entry points onto the circle
    let k = out.len();
    for idx in 0..k {
        if let CellEdge::Arc { tb, .. } = out[idx].edge {
            let nxt = (idx + 1) % k;
            out[nxt].p = on_circle(&c, tb);
        }
    }
    if out.len() < 2 {
        return Ok(None);
    }
    Ok(Some(CurvedCell { nodes: out }))
}

/// Seeds bucketed on a uniform grid for neighbour queries.
struct SeedGrid {
    lo: Vec2,
    cell: f64,
    nx: i64,
    ny: i64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SeedGrid {
    fn new(seeds: &[Vec2], lo: Vec2, hi: Vec2) -> Self {
        let area = (hi.x - lo.x) * (hi.y - lo.y);
        let cell = (area / seeds.len().max(1) as f64).sqrt().max(1e-12);
        let nx = ((hi.x - lo.x) / cell).ceil() as i64 + 1;
        let ny = ((hi.y - lo.y) / cell).ceil() as i64 + 1;
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, s) in seeds.iter().enumerate() {
            buckets.entry(Self::key(lo, cell, *s)).or_default().push(i);
        }
        SeedGrid {
            lo,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    fn key(lo: Vec2, cell: f64, p: Vec2) -> (i64, i64) {
        (
            ((p.x - lo.x) / cell).floor() as i64,
            ((p.y - lo.y) / cell).floor() as i64,
        )
    }

    fn ring(&self, center: (i64, i64), r: i64, out: &mut Vec<usize>) {
        out.clear();
        for dx in -r..=r {
            for dy in -r..=r {
                if dx.abs() != r && dy.abs() != r {
                    continue;
                }
                if let Some(b) = self.buckets.get(&(center.0 + dx, center.1 + dy)) {
                    out.extend_from_slice(b);
                }
            }
        }
    }
}

/// Voronoi cell of `seeds[i]` clipped to the straight part of the domain.
fn straight_cell(i: usize, seeds: &[Vec2], grid: &SeedGrid, domain: &ClipDomain) -> Vec<Vec2> {
    let pad = 1e-9 * (domain.hi - domain.lo).norm();
    let (lo, hi) = (
        domain.lo - Vec2::new(pad, pad),
        domain.hi + Vec2::new(pad, pad),
    );
    let mut poly = vec![lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)];
    for l in &domain.lines {
        poly = clip_halfplane(&poly, l.normal, l.offset);
    }
    let s = seeds[i];
    let center = SeedGrid::key(grid.lo, grid.cell, s);
    let mut cand = Vec::new();
    let max_r = grid.nx.max(grid.ny) + 1;
    for r in 0..=max_r {
        grid.ring(center, r, &mut cand);
        cand.sort_by(|&a, &b| {
            (seeds[a] - s)
                .norm_squared()
                .partial_cmp(&(seeds[b] - s).norm_squared())
                .unwrap()
        });
        for &j in &cand {
            if j == i {
                continue;
            }
            let d = seeds[j] - s;
            let mid = 0.5 * (seeds[j] + s);
            poly = clip_halfplane(&poly, d, d.dot(&mid));
        }
        let reach = poly.iter().map(|p| (p - s).norm()).fold(0.0, f64::max);
        if (r as f64) * grid.cell > 2.0 * reach + grid.cell {
            break;
        }
    }
    poly
}

/// Clipped Voronoi cells of `seeds` (cells fully outside the domain are `None`).
pub(crate) fn voronoi_cells(
    seeds: &[Vec2],
    domain: &ClipDomain,
) -> Result<Vec<Option<CurvedCell>>> {
    let grid = SeedGrid::new(seeds, domain.lo, domain.hi);
    let mut cells = Vec::with_capacity(seeds.len());
    for i in 0..seeds.len() {
        let poly = straight_cell(i, seeds, &grid, domain);
        if poly.len() < 3 {
            cells.push(None);
            continue;
        }
        let mut cell = Some(CurvedCell {
            nodes: poly
                .into_iter()
                .map(|p| CellNode {
                    p,
                    edge: CellEdge::Line,
                })
                .collect(),
        });
        for ci in 0..domain.circles.len() {
            if let Some(c) = cell {
                cell = clip_circle(&c, &domain.circles, ci)?;
            }
        }
        cells.push(cell);
    }
    Ok(cells)
}

/// Lloyd iterations: each seed moves to the centroid of its clipped cell.
pub(crate) fn lloyd(seeds: &mut [Vec2], domain: &ClipDomain, iterations: usize) -> Result<()> {
    for _ in 0..iterations {
        let cells = voronoi_cells(seeds, domain)?;
        for (s, cell) in seeds.iter_mut().zip(cells) {
            if let Some(cell) = cell {
                if let Ok(m) = element_measures(&cell.params(&domain.circles)) {
                    *s = m.centroid;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> ClipDomain {
        ClipDomain {
            lo: Vec2::new(-1.0, -1.0),
            hi: Vec2::new(1.0, 1.0),
            lines: vec![],
            circles: vec![ClipCircle {
                center: Vec2::zeros(),
                radius: 1.0,
                inside: true,
            }],
        }
    }

    #[test]
    fn square_clipped_by_unit_circle() {
        let d = disk();
        let sq2 = CurvedCell {
            nodes: [(-0.8, -0.8), (0.8, -0.8), (0.8, 0.8), (-0.8, 0.8)]
                .iter()
                .map(|&(x, y)| CellNode {
                    p: Vec2::new(x, y),
                    edge: CellEdge::Line,
                })
                .collect(),
        };
        let cut = clip_circle(&sq2, &d.circles, 0).unwrap().unwrap();
        let m = element_measures(&cut.params(&d.circles)).unwrap();
        // area of square [-0.8,0.8]^2 ∩ unit disk
        let a = 0.8f64;
        let seg = (a / 1.0f64).acos() - a * (1.0 - a * a).sqrt(); // circular segment beyond x = a
        let expect = PI - 4.0 * seg;
        assert!((m.area - expect).abs() < 1e-12, "{} vs {}", m.area, expect);
        assert!(m.centroid.norm() < 1e-12);
    }

    #[test]
    fn voronoi_tiles_disk() {
        let mut seeds = Vec::new();
        for i in 0..7 {
            for j in 0..7 {
                let p = Vec2::new(-0.9 + 0.3 * i as f64, -0.9 + 0.3 * j as f64);
                if p.norm() < 0.95 {
                    seeds.push(p + Vec2::new(0.01 * j as f64, 0.013 * i as f64));
                }
            }
        }
        let d = disk();
        let cells = voronoi_cells(&seeds, &d).unwrap();
        let total: f64 = cells
            .iter()
            .flatten()
            .map(|c| element_measures(&c.params(&d.circles)).unwrap().area)
            .sum();
        assert!((total - PI).abs() < 1e-10, "{total}");
    }
}
