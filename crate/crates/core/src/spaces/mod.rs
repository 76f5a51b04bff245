//! Virtual element spaces on curved polygons: dof layout, edge traces and
//! element projectors.

mod discretization;
mod layout;
mod monomials;
mod operators;
mod rigid;
mod trace;

pub use discretization::Discretization;
pub use layout::{DofLayout, NodeKind};
pub use monomials::ScaledMonomialBasis;
pub use operators::{sym_basis, EdgeTable, VemElementOperators};
pub use rigid::{rigid_map_from_endpoints, RigidMap};
pub use trace::{lagrange, trace_nodes, EdgeTrace};

use crate::error::{Error, Result};

/// Edge space used on every edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Polygonal geometry (curved edges replaced by chords), polynomial traces.
    Straight,
    /// Mapped polynomials in the curve parameter.
    Co,
    /// Rigid map plus parameter-polynomial bubble; contains rigid motions.
    Cv,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" | "straight" => Ok(Variant::Straight),
            "co" => Ok(Variant::Co),
            "cv" => Ok(Variant::Cv),
            _ => Err(Error::Config(format!("unknown variant '{s}' (s, co, cv)"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Straight => "s",
            Variant::Co => "co",
            Variant::Cv => "cv",
        })
    }
}

/// Quadrature strength for volume and edge integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QuadratureMode {
    /// Volume exactness 2k−2, k+1 Gauss–Lobatto points per edge.
    #[default]
    Minimal,
    /// Volume exactness 2k, k+2 Gauss–Lobatto points per edge.
    Higher,
    /// Volume exactness 2k+4, k+7 points per edge: integrates the curved
    /// boundary terms to round-off on typical meshes.
    Reference,
}

impl std::str::FromStr for QuadratureMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(QuadratureMode::Minimal),
            "higher" => Ok(QuadratureMode::Higher),
            "reference" => Ok(QuadratureMode::Reference),
            _ => Err(Error::Config(format!(
                "unknown quadrature mode '{s}' (minimal, higher, reference)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceConfig {
    pub k: usize,
    pub variant: Variant,
    pub quadrature: QuadratureMode,
}

impl SpaceConfig {
    pub fn new(k: usize, variant: Variant, quadrature: QuadratureMode) -> Self {
        SpaceConfig {
            k,
            variant,
            quadrature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config(
                "polynomial order k must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Exactness degree of element volume rules.
    pub fn n_vol(&self) -> usize {
        match self.quadrature {
            QuadratureMode::Minimal => 2 * self.k - 2,
            QuadratureMode::Higher => 2 * self.k,
            QuadratureMode::Reference => 2 * self.k + 4,
        }
    }

    /// Gauss–Lobatto points per edge.
    pub fn n_edge(&self) -> usize {
        match self.quadrature {
            QuadratureMode::Minimal => self.k + 1,
            QuadratureMode::Higher => self.k + 2,
            QuadratureMode::Reference => self.k + 7,
        }
    }
}

#[cfg(test)]
mod tests;
