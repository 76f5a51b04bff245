//! One-dimensional Gauss rules, boundary moment integration and element
//! quadrature on curved polygons.

mod cache;
mod compress;
mod gauss;
mod moments;
mod rules;

pub use cache::RuleCache;
pub use compress::{compress_rule, nnls, CompressedRule};
pub use gauss::{gauss_rule_1d, integrate_adaptive, GaussKind, Rule1d};
pub use moments::{boundary_moments, boundary_moments_scaled, MomentTable};
pub use rules::{
    edge_rule, element_rule, points_inside, EdgeRule, QuadratureRule, RuleDomain,
    ARC_DEGREE_INCREMENT, MAX_ARC_PIECE,
};
