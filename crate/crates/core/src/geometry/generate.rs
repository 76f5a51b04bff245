//! Benchmark mesh generators: structured quadrilateral blocks and clipped
//! Voronoi / hexagonal-lattice polygon meshes on disk, quarter-annulus,
//! quarter-plate-with-hole and rectangle domains.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::voronoi::{
    lloyd, voronoi_cells, CellEdge, ClipCircle, ClipDomain, ClipLine, CurvedCell,
};
use super::{CurvedMesh, Edge, EdgeGeometry, ParametrizedCurve, Vec2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BenchmarkDomain {
    /// Disk centred at the origin. Boundary group: `outer`.
    Disk { radius: f64 },
    /// First-quadrant annulus. Groups: `inner`, `outer`, `bottom` (y = 0), `left` (x = 0).
    QuarterAnnulus { r_inner: f64, r_outer: f64 },
    /// `[0,L]×[0,H]` minus the quarter disk of radius `r` at the origin.
    /// Groups: `hole`, `bottom`, `right`, `top`, `left`.
    QuarterPlateWithHole {
        length: f64,
        height: f64,
        radius: f64,
    },
    /// `[0,W]×[0,H]`. Groups: `bottom`, `right`, `top`, `left`.
    Rectangle { width: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFamily {
    /// Structured quadrilaterals (O-grid on the disk).
    Quad,
    /// Voronoi cells of a hexagonal seed lattice.
    RHex,
    /// Lloyd-relaxed Voronoi cells of random seeds.
    Voro,
}

impl std::fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeshFamily::Quad => "quad",
            MeshFamily::RHex => "rhex",
            MeshFamily::Voro => "voro",
        })
    }
}

impl std::str::FromStr for MeshFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quad" => Ok(MeshFamily::Quad),
            "rhex" => Ok(MeshFamily::RHex),
            "voro" => Ok(MeshFamily::Voro),
            _ => Err(Error::Config(format!(
                "unknown mesh family '{s}' (quad, rhex, voro)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    pub domain: BenchmarkDomain,
    pub family: MeshFamily,
    /// Target element count; generators get as close as their topology allows.
    pub elements: usize,
    pub seed: u64,
}

const LLOYD_ITERATIONS: usize = 40;

impl BenchmarkDomain {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            BenchmarkDomain::Disk { radius } => radius > 0.0,
            BenchmarkDomain::QuarterAnnulus { r_inner, r_outer } => {
                r_inner > 0.0 && r_outer > r_inner
            }
            BenchmarkDomain::QuarterPlateWithHole {
                length,
                height,
                radius,
            } => radius > 0.0 && length > radius && height > radius,
            BenchmarkDomain::Rectangle { width, height } => width > 0.0 && height > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MeshGeneration(format!(
                "invalid domain dimensions {self:?}"
            )))
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            BenchmarkDomain::Disk { radius } => PI * radius * radius,
            BenchmarkDomain::QuarterAnnulus { r_inner, r_outer } => {
                FRAC_PI_4 * (r_outer * r_outer - r_inner * r_inner)
            }
            BenchmarkDomain::QuarterPlateWithHole {
                length,
                height,
                radius,
            } => length * height - FRAC_PI_4 * radius * radius,
            BenchmarkDomain::Rectangle { width, height } => width * height,
        }
    }

    fn clip_domain(&self) -> ClipDomain {
        let line = |nx: f64, ny: f64, off: f64| ClipLine {
            normal: Vec2::new(nx, ny),
            offset: off,
        };
        let circ = |r: f64, inside: bool| ClipCircle {
            center: Vec2::zeros(),
            radius: r,
            inside,
        };
        match *self {
            BenchmarkDomain::Disk { radius } => ClipDomain {
                lo: Vec2::new(-radius, -radius),
                hi: Vec2::new(radius, radius),
                lines: vec![],
                circles: vec![circ(radius, true)],
            },
            BenchmarkDomain::QuarterAnnulus { r_inner, r_outer } => ClipDomain {
                lo: Vec2::zeros(),
                hi: Vec2::new(r_outer, r_outer),
                lines: vec![line(0.0, -1.0, 0.0), line(-1.0, 0.0, 0.0)],
                circles: vec![circ(r_inner, false), circ(r_outer, true)],
            },
            BenchmarkDomain::QuarterPlateWithHole {
                length,
                height,
                radius,
            } => ClipDomain {
                lo: Vec2::zeros(),
                hi: Vec2::new(length, height),
                lines: vec![
                    line(0.0, -1.0, 0.0),
                    line(1.0, 0.0, length),
                    line(0.0, 1.0, height),
                    line(-1.0, 0.0, 0.0),
                ],
                circles: vec![circ(radius, false)],
            },
            BenchmarkDomain::Rectangle { width, height } => ClipDomain {
                lo: Vec2::zeros(),
                hi: Vec2::new(width, height),
                lines: vec![
                    line(0.0, -1.0, 0.0),
                    line(1.0, 0.0, width),
                    line(0.0, 1.0, height),
                    line(-1.0, 0.0, 0.0),
                ],
                circles: vec![],
            },
        }
    }

    /// Names of the clip lines / circles, in `clip_domain` order.
    fn group_names(&self) -> (Vec<&'static str>, Vec<&'static str>) {
        match self {
            BenchmarkDomain::Disk { .. } => (vec![], vec!["outer"]),
            BenchmarkDomain::QuarterAnnulus { .. } => {
                (vec!["bottom", "left"], vec!["inner", "outer"])
            }
            BenchmarkDomain::QuarterPlateWithHole { .. } => {
                (vec!["bottom", "right", "top", "left"], vec!["hole"])
            }
            BenchmarkDomain::Rectangle { .. } => (vec!["bottom", "right", "top", "left"], vec![]),
        }
    }

    fn scale(&self) -> f64 {
        let c = self.clip_domain();
        (c.hi - c.lo).norm()
    }
}

/// Incremental mesh assembly with tolerance-based vertex merging.
struct MeshBuilder {
    vertices: Vec<Vec2>,
    curves: Vec<ParametrizedCurve>,
    edges: Vec<Edge>,
    lines: HashMap<(usize, usize), usize>,
    loops: Vec<Vec<usize>>,
    tol: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl MeshBuilder {
    fn new(curves: Vec<ParametrizedCurve>, tol: f64) -> Self {
        MeshBuilder {
            vertices: Vec::new(),
            curves,
            edges: Vec::new(),
            lines: HashMap::new(),
            loops: Vec::new(),
            tol,
            buckets: HashMap::new(),
        }
    }

    fn key(&self, p: Vec2) -> (i64, i64) {
        (
            (p.x / (4.0 * self.tol)).floor() as i64,
            (p.y / (4.0 * self.tol)).floor() as i64,
        )
    }

    fn vertex(&mut self, p: Vec2) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for &v in b {
                        if (self.vertices[v] - p).norm() <= self.tol {
                            return v;
                        }
                    }
                }
            }
        }
        self.vertices.push(p);
        let id = self.vertices.len() - 1;
        self.buckets.entry((kx, ky)).or_default().push(id);
        id
    }

    fn line(&mut self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&e) = self.lines.get(&key) {
            return e;
        }
        self.edges.push(Edge {
            vertices: [a, b],
            geometry: EdgeGeometry::Straight,
        });
        let id = self.edges.len() - 1;
        self.lines.insert(key, id);
        id
    }

    fn arc(&mut self, a: usize, b: usize, curve: usize, ta: f64, tb: f64) -> usize {
        self.edges.push(Edge {
            vertices: [a, b],
            geometry: EdgeGeometry::Curved { curve, ta, tb },
        });
        self.edges.len() - 1
    }

    /// Adds an element from its vertex loop, with optional arc data per side.
    fn element(&mut self, verts: &[usize], arcs: &[Option<(usize, f64, f64)>]) {
        let n = verts.len();
        let lp = (0..n)
            .map(|i| match arcs.get(i).copied().flatten() {
                Some((c, ta, tb)) => self.arc(verts[i], verts[(i + 1) % n], c, ta, tb),
                None => self.line(verts[i], verts[(i + 1) % n]),
            })
            .collect();
        self.loops.push(lp);
    }

    fn finish(self, domain: &BenchmarkDomain) -> Result<CurvedMesh> {
        let mut owners = vec![0usize; self.edges.len()];
        for lp in &self.loops {
            for &e in lp {
                owners[e] += 1;
            }
        }
        let clip = domain.clip_domain();
        let (line_names, circle_names) = domain.group_names();
        let tol = 1e-8 * domain.scale();
        let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for name in line_names.iter().chain(circle_names.iter()) {
            groups.insert(name.to_string(), Vec::new());
        }
        for (id, e) in self.edges.iter().enumerate() {
            if owners[id] != 1 {
                continue;
            }
            let name = match e.geometry {
                EdgeGeometry::Curved { curve, .. } => Some(circle_names[curve]),
                EdgeGeometry::Straight => {
                    let [a, b] = e.vertices.map(|v| self.vertices[v]);
                    clip.lines
                        .iter()
                        .position(|l| {
                            (l.normal.dot(&a) - l.offset).abs() < tol
                                && (l.normal.dot(&b) - l.offset).abs() < tol
                        })
                        .map(|i| line_names[i])
                }
            };
            let name = name.ok_or_else(|| {
                Error::MeshGeneration(format!(
                    "boundary edge {id} does not lie on the domain boundary"
                ))
            })?;
            groups.get_mut(name).unwrap().push(id);
        }
        CurvedMesh::new(self.vertices, self.curves, self.edges, self.loops, groups)
    }
}

fn domain_curves(domain: &BenchmarkDomain) -> Result<Vec<ParametrizedCurve>> {
    domain
        .clip_domain()
        .circles
        .iter()
        .map(|c| ParametrizedCurve::circle(c.center, c.radius))
        .collect()
}

/// Point on circle `c` of the domain at angle `t`, with exact zeros on the axes.
fn circle_point(r: f64, t: f64) -> Vec2 {
    let snap = |v: f64| if v.abs() < 1e-15 * r { 0.0 } else { v };
    Vec2::new(snap(r * t.cos()), snap(r * t.sin()))
}

/// Generates a benchmark mesh. Deterministic for a given `MeshSpec` (including seed).
pub fn generate_benchmark_mesh(spec: &MeshSpec) -> Result<CurvedMesh> {
    spec.domain.validate()?;
    if spec.elements == 0 {
        return Err(Error::MeshGeneration(
            "element count must be positive".into(),
        ));
    }
    match spec.family {
        MeshFamily::Quad => match spec.domain {
            BenchmarkDomain::Disk { radius } => disk_ogrid(radius, spec.elements),
            BenchmarkDomain::QuarterAnnulus { r_inner, r_outer } => {
                quarter_annulus_grid(r_inner, r_outer, spec.elements)
            }
            BenchmarkDomain::QuarterPlateWithHole {
                length,
                height,
                radius,
            } => plate_two_blocks(length, height, radius, spec.elements),
            BenchmarkDomain::Rectangle { width, height } => {
                rectangle_grid(width, height, spec.elements)
            }
        },
        MeshFamily::RHex => {
            let seeds = hex_seeds(&spec.domain, spec.elements);
            polygon_mesh(&spec.domain, seeds, 0)
        }
        MeshFamily::Voro => {
            let seeds = random_seeds(&spec.domain, spec.elements, spec.seed)?;
            polygon_mesh(&spec.domain, seeds, LLOYD_ITERATIONS)
        }
    }
}

fn disk_ogrid(radius: f64, target: usize) -> Result<CurvedMesh> {
    if target < 5 {
        return Err(Error::MeshGeneration(format!(
            "disk quad mesh needs at least 5 elements, got {target}"
        )));
    }
    let n = ((target as f64 / 3.0).sqrt().round() as usize).max(1);
    let m = ((n as f64 / 2.0).round() as usize).max(1);
    let a = 0.5 * radius;
    let domain = BenchmarkDomain::Disk { radius };
    let mut b = MeshBuilder::new(domain_curves(&domain)?, 1e-10 * radius);
    // central square
    let mut grid = vec![vec![0usize; n + 1]; n + 1];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let x = -a + 2.0 * a * i as f64 / n as f64;
            let y = -a + 2.0 * a * j as f64 / n as f64;
            *v = b.vertex(Vec2::new(x, y));
        }
    }
    for i in 0..n {
        for j in 0..n {
            b.element(
                &[
                    grid[i][j],
                    grid[i + 1][j],
                    grid[i + 1][j + 1],
                    grid[i][j + 1],
                ],
                &[],
            );
        }
    }
    // four outer blocks, obtained by rotating the block right of the square
    for blk in 0..4 {
        let rot = blk as f64 * FRAC_PI_2;
        let (c, s) = (rot.cos(), rot.sin());
        let rotate = |p: Vec2| Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y);
        let angle = |i: usize| -FRAC_PI_4 + FRAC_PI_2 * i as f64 / n as f64 + rot;
        let mut ids = vec![vec![0usize; m + 1]; n + 1];
        for (i, col) in ids.iter_mut().enumerate() {
            let inner = rotate(Vec2::new(a, -a + 2.0 * a * i as f64 / n as f64));
            let outer = circle_point(radius, angle(i));
            for (j, v) in col.iter_mut().enumerate() {
                let p = if j == m {
                    outer
                } else {
                    inner + (j as f64 / m as f64) * (outer - inner)
                };
                *v = b.vertex(p);
            }
        }
        for i in 0..n {
            for j in 0..m {
                let arcs = if j + 1 == m {
                    vec![None, None, Some((0, angle(i + 1), angle(i))), None]
                } else {
                    vec![]
                };
                b.element(
                    &[ids[i][j], ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]],
                    &arcs,
                );
            }
        }
    }
    b.finish(&domain)
}

/// Factor pair `(rows, cols)` of `n` with `cols/rows` closest to `aspect`.
/// Perfect squares are always split evenly.
fn factor_pair(n: usize, aspect: f64) -> (usize, usize) {
    let r = (n as f64).sqrt().round() as usize;
    if r * r == n {
        return (r, r);
    }
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| (d, n / d))
        .min_by(|x, y| {
            let f = |p: &(usize, usize)| ((p.1 as f64 / p.0 as f64) / aspect).ln().abs();
            f(x).partial_cmp(&f(y)).unwrap()
        })
        .unwrap()
}

fn quarter_annulus_grid(ri: f64, ro: f64, target: usize) -> Result<CurvedMesh> {
    let aspect = FRAC_PI_2 * 0.5 * (ri + ro) / (ro - ri);
    let (nr, nt) = factor_pair(target, aspect);
    let domain = BenchmarkDomain::QuarterAnnulus {
        r_inner: ri,
        r_outer: ro,
    };
    let mut b = MeshBuilder::new(domain_curves(&domain)?, 1e-10 * ro);
    let theta = |i: usize| FRAC_PI_2 * i as f64 / nt as f64;
    let mut ids = vec![vec![0usize; nr + 1]; nt + 1];
    for (i, col) in ids.iter_mut().enumerate() {
        for (j, v) in col.iter_mut().enumerate() {
            let r = ri + (ro - ri) * j as f64 / nr as f64;
            *v = b.vertex(circle_point(r, theta(i)));
        }
    }
    for i in 0..nt {
        for j in 0..nr {
            let mut arcs = vec![None; 4];
            if j == 0 {
                arcs[0] = Some((0, theta(i), theta(i + 1)));
            }
            if j + 1 == nr {
                arcs[2] = Some((1, theta(i + 1), theta(i)));
            }
            b.element(
                &[ids[i][j], ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]],
                &arcs,
            );
        }
    }
    b.finish(&domain)
}

fn plate_two_blocks(l: f64, h: f64, r: f64, target: usize) -> Result<CurvedMesh> {
    if target < 2 {
        return Err(Error::MeshGeneration(
            "plate quad mesh needs at least 2 elements".into(),
        ));
    }
    let tc = h.atan2(l);
    let tangential = 0.5 * (FRAC_PI_2 * r + l + h);
    let radial = 0.5 * ((l - r) + (h - r));
    let nr = ((target as f64 * radial / tangential).sqrt().round() as usize).max(1);
    let nt = ((target as f64 / nr as f64).round() as usize).max(2);
    let na = ((nt as f64 * tc / FRAC_PI_2).round() as usize).clamp(1, nt - 1);
    let nb = nt - na;
    let domain = BenchmarkDomain::QuarterPlateWithHole {
        length: l,
        height: h,
        radius: r,
    };
    let mut b = MeshBuilder::new(domain_curves(&domain)?, 1e-10 * l.max(h));
    // global tangential index i in 0..=nt; block A is i <= na
    let angle = |i: usize| {
        if i <= na {
            tc * i as f64 / na as f64
        } else {
            tc + (FRAC_PI_2 - tc) * (i - na) as f64 / nb as f64
        }
    };
    let outer = |i: usize| {
        if i <= na {
            Vec2::new(l, h * i as f64 / na as f64)
        } else {
            Vec2::new(l * (1.0 - (i - na) as f64 / nb as f64), h)
        }
    };
    let mut ids = vec![vec![0usize; nr + 1]; nt + 1];
    for (i, col) in ids.iter_mut().enumerate() {
        let p0 = circle_point(r, angle(i));
        let p1 = outer(i);
        for (j, v) in col.iter_mut().enumerate() {
            let mut p = p0 + (j as f64 / nr as f64) * (p1 - p0);
            if i == 0 {
                p.y = 0.0;
            }
            if i == nt {
                p.x = 0.0;
            }
            *v = b.vertex(p);
        }
    }
    for i in 0..nt {
        for j in 0..nr {
            let arcs = if j == 0 {
                vec![Some((0, angle(i), angle(i + 1)))]
            } else {
                vec![]
            };
            b.element(
                &[ids[i][j], ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]],
                &arcs,
            );
        }
    }
    b.finish(&domain)
}

fn rectangle_grid(w: f64, h: f64, target: usize) -> Result<CurvedMesh> {
    let (ny, nx) = factor_pair(target, w / h);
    let domain = BenchmarkDomain::Rectangle {
        width: w,
        height: h,
    };
    let mut b = MeshBuilder::new(Vec::new(), 1e-10 * w.max(h));
    let mut ids = vec![vec![0usize; ny + 1]; nx + 1];
    for (i, col) in ids.iter_mut().enumerate() {
        for (j, v) in col.iter_mut().enumerate() {
            *v = b.vertex(Vec2::new(
                w * i as f64 / nx as f64,
                h * j as f64 / ny as f64,
            ));
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            b.element(
                &[ids[i][j], ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]],
                &[],
            );
        }
    }
    b.finish(&domain)
}

fn hex_seeds(domain: &BenchmarkDomain, target: usize) -> Vec<Vec2> {
    let clip = domain.clip_domain();
    let d = (domain.area() / (target as f64 * 3f64.sqrt() / 2.0)).sqrt();
    let dy = d * 3f64.sqrt() / 2.0;
    let mut seeds = Vec::new();
    let rows = ((clip.hi.y - clip.lo.y) / dy).ceil() as i64 + 1;
    let cols = ((clip.hi.x - clip.lo.x) / d).ceil() as i64 + 1;
    for r in 0..=rows {
        for c in 0..=cols {
            let shift = if r % 2 == 0 { 0.25 } else { 0.75 };
            let p = Vec2::new(
                clip.lo.x + (c as f64 + shift) * d,
                clip.lo.y + (r as f64 + 0.5) * dy,
            );
            if clip.contains(p) && clip.boundary_distance(p) > 0.25 * d {
                seeds.push(p);
            }
        }
    }
    seeds
}

fn random_seeds(domain: &BenchmarkDomain, target: usize, seed: u64) -> Result<Vec<Vec2>> {
    let clip = domain.clip_domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seeds = Vec::with_capacity(target);
    let mut tries = 0usize;
    while seeds.len() < target {
        tries += 1;
        if tries > 1000 * target + 1000 {
            return Err(Error::MeshGeneration(
                "could not place seeds inside the domain".into(),
            ));
        }
        let p = Vec2::new(
            rng.gen_range(clip.lo.x..clip.hi.x),
            rng.gen_range(clip.lo.y..clip.hi.y),
        );
        if clip.contains(p) {
            seeds.push(p);
        }
    }
    Ok(seeds)
}

fn polygon_mesh(
    domain: &BenchmarkDomain,
    mut seeds: Vec<Vec2>,
    iterations: usize,
) -> Result<CurvedMesh> {
    if seeds.len() < 2 {
        return Err(Error::MeshGeneration(
            "too few elements for a polygonal mesh".into(),
        ));
    }
    let clip = domain.clip_domain();
    lloyd(&mut seeds, &clip, iterations)?;
    let cells: Vec<CurvedCell> = voronoi_cells(&seeds, &clip)?
        .into_iter()
        .flatten()
        .collect();
    let h = (domain.area() / cells.len() as f64).sqrt();
    let mut b = MeshBuilder::new(domain_curves(domain)?, 1e-9 * domain.scale());
    // vertex constraints: which circle / line a vertex must stay on
    let constraint = |p: Vec2| -> Option<usize> {
        let tol = 1e-9 * domain.scale();
        let mut found = None;
        let mut count = 0;
        for (i, c) in clip.circles.iter().enumerate() {
            if ((p - c.center).norm() - c.radius).abs() < tol {
                found = Some(1000 + i);
                count += 1;
            }
        }
        for (i, l) in clip.lines.iter().enumerate() {
            if (l.normal.dot(&p) - l.offset).abs() < tol {
                found = Some(i);
                count += 1;
            }
        }
        if count > 1 {
            Some(usize::MAX)
        } else {
            found
        }
    };
    let mut loops: Vec<Vec<(usize, CellEdge)>> = cells
        .iter()
        .map(|c| c.nodes.iter().map(|n| (b.vertex(n.p), n.edge)).collect())
        .collect();
    // collapse short straight edges, keeping the more constrained endpoint
    let mut alias: Vec<usize> = (0..b.vertices.len()).collect();
    let find = |alias: &Vec<usize>, mut v: usize| {
        while alias[v] != v {
            v = alias[v];
        }
        v
    };
    let min_len = 0.1 * h;
    for lp in &loops {
        let n = lp.len();
        for i in 0..n {
            if lp[i].1 != CellEdge::Line {
                continue;
            }
            let (u, v) = (find(&alias, lp[i].0), find(&alias, lp[(i + 1) % n].0));
            if u == v || (b.vertices[u] - b.vertices[v]).norm() >= min_len {
                continue;
            }
            let (cu, cv) = (constraint(b.vertices[u]), constraint(b.vertices[v]));
            match (cu, cv) {
                (None, _) => alias[u] = v,
                (Some(_), None) => alias[v] = u,
                _ => {}
            }
        }
    }
    for lp in loops.iter_mut() {
        for node in lp.iter_mut() {
            node.0 = find(&alias, node.0);
        }
        let n = lp.len();
        let keep: Vec<bool> = (0..n).map(|i| lp[i].0 != lp[(i + 1) % n].0).collect();
        let mut it = keep.iter();
        lp.retain(|_| *it.next().unwrap());
    }
    for lp in loops.iter().filter(|lp| lp.len() >= 2) {
        let verts: Vec<usize> = lp.iter().map(|n| n.0).collect();
        let arcs: Vec<Option<(usize, f64, f64)>> = lp
            .iter()
            .map(|n| match n.1 {
                CellEdge::Arc { circle, ta, tb } => Some((circle, ta, tb)),
                CellEdge::Line => None,
            })
            .collect();
        if verts.len() == 2 && arcs.iter().all(|a| a.is_none()) {
            continue;
        }
        b.element(&verts, &arcs);
    }
    // drop vertices that were merged away
    compact(b)?.finish(domain)
}

/// Removes unreferenced vertices and renumbers.
fn compact(mut b: MeshBuilder) -> Result<MeshBuilder> {
    let mut used = vec![false; b.vertices.len()];
    for e in &b.edges {
        used[e.vertices[0]] = true;
        used[e.vertices[1]] = true;
    }
    let mut map = vec![usize::MAX; b.vertices.len()];
    let mut verts = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            map[i] = verts.len();
            verts.push(b.vertices[i]);
        }
    }
    // edges that were only used by loops that got dropped stay harmless only if unreferenced
    let mut referenced = vec![false; b.edges.len()];
    for lp in &b.loops {
        for &e in lp {
            referenced[e] = true;
        }
    }
    let mut emap = vec![usize::MAX; b.edges.len()];
    let mut edges = Vec::new();
    for (i, e) in b.edges.iter().enumerate() {
        if referenced[i] {
            emap[i] = edges.len();
            edges.push(Edge {
                vertices: [map[e.vertices[0]], map[e.vertices[1]]],
                geometry: e.geometry,
            });
        }
    }
    for lp in b.loops.iter_mut() {
        for e in lp.iter_mut() {
            *e = emap[*e];
        }
    }
    b.vertices = verts;
    b.edges = edges;
    b.lines.clear();
    b.buckets.clear();
    Ok(b)
}
