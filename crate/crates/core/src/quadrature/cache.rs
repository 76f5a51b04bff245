//! Thread-safe per-element rule cache.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::rules::{element_rule, QuadratureRule, RuleDomain};
use crate::error::Result;
use crate::geometry::CurvedMesh;

#[derive(Debug, Default)]
pub struct RuleCache {
    rules: RwLock<HashMap<(usize, usize), Arc<QuadratureRule>>>,
}

impl RuleCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Element rule of exactness `n` for element `id`, built on first use.
    pub fn element(&self, mesh: &CurvedMesh, id: usize, n: usize) -> Result<Arc<QuadratureRule>> {
        if let Some(r) = self
            .rules
            .read()
            .expect("rule cache poisoned")
            .get(&(id, n))
        {
            return Ok(r.clone());
        }
        let mut rule = element_rule(&mesh.element_boundary(id), mesh.elements[id].centroid, n)?;
        rule.domain = RuleDomain::Element(id);
        let rule = Arc::new(rule);
        self.rules
            .write()
            .expect("rule cache poisoned")
            .insert((id, n), rule.clone());
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.rules.read().expect("rule cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
