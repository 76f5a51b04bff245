//! CSV rendering of driver results.

use std::fmt::Write;

use super::examples::{ConvergenceTable, CylinderResult, ErrorReport, PlateResult};

/// `mesh,N,h,dofs,e_u,e_eps,slope_u,slope_eps` (slopes repeated per row).
pub fn errors_csv(table: &ConvergenceTable) -> String {
    let mut s = String::from("mesh,N,h,dofs,e_u,e_eps,slope_u,slope_eps\n");
    for r in &table.reports {
        writeln!(
            s,
            "{},{},{:.6e},{},{:.6e},{:.6e},{:.4},{:.4}",
            r.mesh, r.elements, r.h, r.dofs, r.e_u, r.e_eps, table.slope_u, table.slope_eps
        )
        .unwrap();
    }
    s
}

/// Same columns as [`errors_csv`] for a list without slopes.
pub fn reports_csv(reports: &[ErrorReport]) -> String {
    let mut s = String::from("mesh,N,h,dofs,e_u,e_eps,slope_u,slope_eps\n");
    for r in reports {
        writeln!(
            s,
            "{},{},{:.6e},{},{:.6e},{:.6e},,",
            r.mesh, r.elements, r.h, r.dofs, r.e_u, r.e_eps
        )
        .unwrap();
    }
    s
}

/// `step,time,point,ux,uy` rows; `ux` carries the radial displacement, `uy` is 0.
pub fn cylinder_history_csv(result: &CylinderResult) -> String {
    let mut s = String::from("step,time,point,ux,uy\n");
    for h in &result.history {
        writeln!(s, "{},{},A,{:.10e},0", h.step, h.time, h.ur_a).unwrap();
        writeln!(s, "{},{},B,{:.10e},0", h.step, h.time, h.ur_b).unwrap();
    }
    s
}

/// `r,sigma_rr` at the final time.
pub fn sigma_rho_csv(profile: &[(f64, f64)]) -> String {
    let mut s = String::from("r,sigma_rr\n");
    for (r, v) in profile {
        writeln!(s, "{r:.6},{v:.10e}").unwrap();
    }
    s
}

/// `step,reaction` (plus imposed displacement and Newton iterations).
pub fn plate_history_csv(result: &PlateResult) -> String {
    let mut s = String::from("step,reaction,displacement,iterations\n");
    for h in &result.history {
        writeln!(
            s,
            "{},{:.10e},{:.6e},{}",
            h.step, h.reaction, h.displacement, h.iterations
        )
        .unwrap();
    }
    s
}
