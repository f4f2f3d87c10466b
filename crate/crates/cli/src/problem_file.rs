//! TOML problem files.
//!
//! ```toml
//! base = ["t", "x", "y"]
//! fields = ["v", "w"]
//! params = ["a", "b", "beta"]
//! order = 2
//! lagrangian = "w^2 + 1/2*v_x^2"
//! constraints = ["w = v_t"]
//!
//! [vector_fields.galilei]
//! xi = { t = "0", x = "0", y = "0" }
//! Xi = { v = "y" }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use jetvar::dsl::parse_lagrangian;
use jetvar::kernel::{DiffPoly, JetSpace};
use jetvar::symmetry::ProjVectorField;
use jetvar::variational::LagrangianProblem;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpecFile {
    pub base: Vec<String>,
    pub fields: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    pub lagrangian: String,
    pub order: usize,
    #[serde(default)]
    pub vector_fields: BTreeMap<String, VectorFieldSpec>,
    #[serde(default)]
    pub constraints: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFieldSpec {
    #[serde(default)]
    pub xi: BTreeMap<String, String>,
    #[serde(default, rename = "Xi")]
    pub big_xi: BTreeMap<String, String>,
}

/// A parsed problem file.
#[derive(Debug, Clone)]
pub struct LoadedProblem {
    pub problem: LagrangianProblem,
    pub vector_fields: BTreeMap<String, ProjVectorField>,
    /// `(field, expr)` in file order.
    pub constraints: Vec<(usize, DiffPoly)>,
}

impl ProblemSpecFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(format!("problem file: {e}")))
    }

    pub fn load(&self) -> Result<LoadedProblem, CliError> {
        let space = JetSpace::new(&self.base, &self.fields, &self.params, self.order)?;
        let density = parse_lagrangian(&self.lagrangian, &space)?;
        let problem = LagrangianProblem::new(space.clone(), density, self.order)?;

        let mut vector_fields = BTreeMap::new();
        for (name, spec) in &self.vector_fields {
            vector_fields.insert(name.clone(), spec.build(&space, name)?);
        }

        // constraints act on the field equations, which reach twice the order
        let deep = space.prolonged(2 * self.order);
        let mut constraints = Vec::new();
        for c in &self.constraints {
            let (lhs, rhs) = c
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("constraint `{c}` is not of the form `field = expr`")))?;
            let lhs = lhs.trim();
            let field = space
                .field_index(lhs)
                .ok_or_else(|| CliError::Parse(format!("constraint `{c}`: `{lhs}` is not a field")))?;
            constraints.push((field, parse_lagrangian(rhs, &deep)?));
        }
        Ok(LoadedProblem {
            problem,
            vector_fields,
            constraints,
        })
    }
}

impl VectorFieldSpec {
    fn build(&self, space: &JetSpace, name: &str) -> Result<ProjVectorField, CliError> {
        let mut xi = vec![DiffPoly::zero(); space.n()];
        for (coord, expr) in &self.xi {
            let i = space
                .base_index(coord)
                .ok_or_else(|| CliError::Parse(format!("vector field `{name}`: unknown coordinate `{coord}`")))?;
            xi[i] = parse_lagrangian(expr, space)?;
        }
        let mut big_xi = vec![DiffPoly::zero(); space.m()];
        for (field, expr) in &self.big_xi {
            let s = space
                .field_index(field)
                .ok_or_else(|| CliError::Parse(format!("vector field `{name}`: unknown field `{field}`")))?;
            big_xi[s] = parse_lagrangian(expr, space)?;
        }
        Ok(ProjVectorField::new(space, xi, big_xi)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L4: &str = r#"
base = ["t", "x", "y"]
fields = ["v", "w"]
params = ["a", "b", "beta"]
order = 2
lagrangian = "w^2 + 1/2*v_x^2 + a*w_t*v_xx - 1/2*a*v_tt*v_xx - 1/2*b*v_xx^2 + 1/3*v_x^3 + 1/2*beta*v_y^2"

[vector_fields.shift]
Xi = { v = "1" }
"#;

    #[test]
    fn loads_problem_and_fields() {
        let loaded = ProblemSpecFile::parse(L4).unwrap().load().unwrap();
        assert_eq!(loaded.problem.order(), 2);
        assert!(loaded.vector_fields["shift"].is_vertical());
        assert!(loaded.constraints.is_empty());
    }

    #[test]
    fn rejects_unknown_keys_and_symbols() {
        assert!(matches!(ProblemSpecFile::parse("colour = 1"), Err(CliError::Parse(_))));
        let bad = L4.replace("1/2*beta", "1/2*q");
        assert!(matches!(ProblemSpecFile::parse(&bad).unwrap().load(), Err(CliError::Engine(e)) if e.is_parse_error()));
    }

    #[test]
    fn declared_order_bounds_jet_depth() {
        let bad = L4.replace("order = 2", "order = 1");
        let err = ProblemSpecFile::parse(&bad).unwrap().load().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn constraints_need_a_field_on_the_left() {
        let with = format!("constraints = [\"w = v_t\"]\n{L4}");
        let loaded = ProblemSpecFile::parse(&with).unwrap().load().unwrap();
        assert_eq!(loaded.constraints.len(), 1);
        let bad = format!("constraints = [\"v_t = w\"]\n{L4}");
        assert!(ProblemSpecFile::parse(&bad).unwrap().load().is_err());
    }
}
