use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ELEMENTS: usize = 250_000;
pub const DEFAULT_MAX_SIMPLICES: usize = 5_000_000;
pub const DEFAULT_VERTEX_BUDGET: usize = 64;

/// Resource limits shared by every construction in the crate.
///
/// Exceeding a cap aborts the construction with [`Error::Resource`]; nothing
/// is ever silently truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of elements in any constructed poset.
    pub max_elements: usize,
    /// Maximum number of simplices in any constructed complex.
    pub max_simplices: usize,
    /// Maximum number of graph vertices handed to the exact coloring solver.
    pub vertex_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_simplices: DEFAULT_MAX_SIMPLICES,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        if self.max_elements == 0 || self.max_simplices == 0 || self.vertex_budget == 0 {
            return Err(Error::param("resource caps must be positive"));
        }
        Ok(())
    }

    pub(crate) fn check_elements(&self, count: usize) -> Result<()> {
        if count > self.max_elements {
            return Err(Error::Resource {
                what: "poset elements",
                count,
                cap: self.max_elements,
            });
        }
        Ok(())
    }

    pub(crate) fn check_simplices(&self, count: usize) -> Result<()> {
        if count > self.max_simplices {
            return Err(Error::Resource {
                what: "simplices",
                count,
                cap: self.max_simplices,
            });
        }
        Ok(())
    }

    /// Parses overrides of the form `max_elements=100,max_simplices=1000,vertex_budget=40`.
    /// Unknown keys are rejected.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::param(format!("bad cap override `{part}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("bad cap value in `{part}`")))?;
            match key.trim() {
                "max_elements" => self.max_elements = value,
                "max_simplices" => self.max_simplices = value,
                "vertex_budget" => self.vertex_budget = value,
                other => return Err(Error::param(format!("unknown cap `{other}`"))),
            }
        }
        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let caps = Caps::default()
            .with_overrides("max_elements=10, vertex_budget=5")
            .unwrap();
        assert_eq!(caps.max_elements, 10);
        assert_eq!(caps.vertex_budget, 5);
        assert_eq!(caps.max_simplices, DEFAULT_MAX_SIMPLICES);
    }

    #[test]
    fn overrides_reject_garbage() {
        assert!(Caps::default().with_overrides("max_elements").is_err());
        assert!(Caps::default().with_overrides("bogus=3").is_err());
        assert!(Caps::default().with_overrides("max_elements=0").is_err());
    }
}
