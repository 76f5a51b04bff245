//! Discrete error measures and convergence slopes.

use log::warn;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{EdgeParam, Vec2};
use crate::spaces::Discretization;

/// Relative error, or the absolute one when the reference norm vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeError {
    pub value: f64,
    /// True when `value` is absolute because the exact field is zero.
    pub absolute: bool,
}

fn ratio(num: f64, den: f64) -> RelativeError {
    if den > 1e-300 {
        RelativeError {
            value: num / den,
            absolute: false,
        }
    } else {
        warn!("exact field vanishes; reporting absolute error");
        RelativeError {
            value: num,
            absolute: true,
        }
    }
}

/// `max_N |u(x_N) − u_h(x_N)| / max_N |u(x_N)|` over vertex and edge nodes.
pub fn error_displacement_skeleton(
    disc: &Discretization,
    u_h: &[f64],
    exact: impl Fn(Vec2) -> Vec2,
) -> Result<RelativeError> {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (node, p) in disc
        .layout
        .skeleton_points(&disc.mesh)?
        .into_iter()
        .enumerate()
    {
        let u = exact(p);
        num = num.max((u - Vec2::new(u_h[2 * node], u_h[2 * node + 1])).norm());
        den = den.max(u.norm());
    }
    Ok(ratio(num, den))
}

/// Tensor norm squared of an engineering-Voigt strain.
fn strain_norm2(e: [f64; 3]) -> f64 {
    e[0] * e[0] + e[1] * e[1] + 0.5 * e[2] * e[2]
}

/// `‖ε(u) − Π^ε u_h‖ / ‖ε(u)‖` in L² over the domain.
pub fn error_strain_l2(
    disc: &Discretization,
    u_h: &[f64],
    exact_strain: impl Fn(Vec2) -> [f64; 3] + Sync,
    exec: Execution,
) -> Result<RelativeError> {
    let parts = exec.try_map(disc.mesh.num_elements(), |e| -> Result<(f64, f64)> {
        let ops = &disc.operators[e];
        let local = disc.local(e, u_h);
        let rule = disc.accurate_rule(e)?;
        let (mut num, mut den) = (0.0, 0.0);
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let ex = exact_strain(*p);
            let eh = ops.strain_at(*p, &local);
            num += w * strain_norm2([ex[0] - eh[0], ex[1] - eh[1], ex[2] - eh[2]]);
            den += w * strain_norm2(ex);
        }
        Ok((num, den))
    })?;
    let (num, den) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ratio(num.sqrt(), den.sqrt()))
}

/// Parameter of the point of `param` closest to `x`, with the distance.
fn locate_on_edge(param: &EdgeParam, x: Vec2) -> (f64, f64) {
    match *param {
        EdgeParam::Line { p0, p1 } => {
            let d = p1 - p0;
            let s = ((x - p0).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
            (s, (param.point(s) - x).norm())
        }
        EdgeParam::Arc { center, ta, tb, .. } => {
            let v = x - center;
            let mut t = v.y.atan2(v.x);
            let mid = 0.5 * (ta + tb);
            while t - mid > std::f64::consts::PI {
                t -= 2.0 * std::f64::consts::PI;
            }
            while mid - t > std::f64::consts::PI {
                t += 2.0 * std::f64::consts::PI;
            }
            let s = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
            (s, (param.point(s) - x).norm())
        }
    }
}

/// Trace of `u_h` at the point of boundary group `group` closest to `x`.
pub fn boundary_displacement(
    disc: &Discretization,
    u_h: &[f64],
    group: &str,
    x: Vec2,
) -> Result<Vec2> {
    let mut best: Option<(f64, usize, f64)> = None;
    for &edge in disc.mesh.group(group)? {
        let (s, d) = locate_on_edge(&disc.mesh.edge_param(edge), x);
        if best.is_none_or(|b| d < b.0) {
            best = Some((d, edge, s));
        }
    }
    let (_, edge, s) =
        best.ok_or_else(|| Error::Analysis(format!("boundary group '{group}' is empty")))?;
    let e = disc.mesh.edge_elements(edge)[0];
    let el = &disc.mesh.elements[e];
    let local = el.edges.iter().position(|o| o.edge == edge).unwrap();
    let table = &disc.operators[e].edges[local];
    let s = if el.edges[local].reversed { 1.0 - s } else { s };
    let dofs = disc.layout.element_dofs(e);
    let values: Vec<Vec2> = table
        .local_nodes
        .iter()
        .map(|&ln| Vec2::new(u_h[dofs[2 * ln]], u_h[dofs[2 * ln + 1]]))
        .collect();
    Ok(table.trace.eval(&values, s))
}

/// Element containing `x` (first match).
pub fn locate_element(disc: &Discretization, x: Vec2) -> Option<usize> {
    let mesh = &disc.mesh;
    (0..mesh.num_elements())
        .find(|&e| crate::geometry::point_in_region(&mesh.element_boundary(e), x))
}

/// Least-squares slope of `log(err)` against `log(h)` over the last `n` points.
pub fn convergence_slope(h: &[f64], err: &[f64], n: usize) -> f64 {
    let m = h.len().min(err.len());
    let start = m.saturating_sub(n);
    let pts: Vec<(f64, f64)> = (start..m)
        .filter(|&i| err[i] > 0.0)
        .map(|i| (h[i].ln(), err[i].ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let c = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / c;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / c;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_benchmark_mesh, BenchmarkDomain, MeshFamily, MeshSpec};
    use crate::spaces::{QuadratureMode, SpaceConfig, Variant};

    fn disc(k: usize) -> Discretization {
        let m = generate_benchmark_mesh(&MeshSpec {
            domain: BenchmarkDomain::Disk { radius: 1.0 },
            family: MeshFamily::Quad,
            elements: 12,
            seed: 1,
        })
        .unwrap();
        Discretization::new(
            &m,
            SpaceConfig::new(k, Variant::Cv, QuadratureMode::Minimal),
            Execution::Sequential,
        )
        .unwrap()
    }

    #[test]
    fn slope_of_exact_power_law() {
        let h = [0.4, 0.2, 0.1, 0.05];
        let e: Vec<f64> = h.iter().map(|x: &f64| 3.0 * x.powi(3)).collect();
        assert!((convergence_slope(&h, &e, 3) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn interpolant_has_zero_skeleton_error_and_zero_field_unit_strain_error() {
        let d = disc(2);
        let f = |p: Vec2| Vec2::new(p.x * p.y, p.x * p.x);
        let u = d.interpolate(f).unwrap();
        assert!(error_displacement_skeleton(&d, &u, f).unwrap().value < 1e-15);
        let zero = vec![0.0; d.num_dofs()];
        let e =
            error_strain_l2(&d, &zero, |p| [p.y, 0.0, 3.0 * p.x], Execution::Sequential).unwrap();
        assert!((e.value - 1.0).abs() < 1e-14 && !e.absolute);
    }

    #[test]
    fn boundary_trace_reproduces_rigid_motion() {
        let d = disc(3);
        let f = |p: Vec2| Vec2::new(-p.y + 0.3, p.x);
        let u = d.interpolate(f).unwrap();
        for t in [0.1f64, 1.0, 2.5, 4.0] {
            let x = Vec2::new(t.cos(), t.sin());
            let v = boundary_displacement(&d, &u, "outer", x).unwrap();
            assert!((v - f(x)).norm() < 1e-13);
        }
        assert!(locate_element(&d, Vec2::new(0.1, 0.2)).is_some());
    }
}
