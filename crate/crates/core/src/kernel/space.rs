use std::collections::HashSet;

use crate::error::{Error, Result};

/// Coordinates of a jet prolongation `J^s Y` of a fibered manifold `Y → X`:
/// `n` base coordinates, `m` fiber coordinates and the symbolic parameters
/// that may appear in coefficients.
///
/// Indices into these lists are 0-based throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpace {
    base: Vec<String>,
    fields: Vec<String>,
    params: Vec<String>,
    order: usize,
}

impl JetSpace {
    pub fn new<S: AsRef<str>>(base: &[S], fields: &[S], params: &[S], order: usize) -> Result<Self> {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>();
        let (base, fields, params) = (own(base), own(fields), own(params));
        if base.is_empty() {
            return Err(Error::InvalidSpace("at least one base coordinate is required".into()));
        }
        if fields.is_empty() {
            return Err(Error::InvalidSpace("at least one field is required".into()));
        }
        if base.len() > u8::MAX as usize {
            return Err(Error::InvalidSpace("too many base coordinates".into()));
        }
        let mut seen = HashSet::new();
        for name in base.iter().chain(&fields).chain(&params) {
            if !is_identifier(name) {
                return Err(Error::InvalidSpace(format!("`{name}` is not a valid identifier")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidSpace(format!("name `{name}` declared twice")));
            }
        }
        Ok(JetSpace {
            base,
            fields,
            params,
            order,
        })
    }

    /// Number of base coordinates `n`.
    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Number of fields `m`.
    pub fn m(&self) -> usize {
        self.fields.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The same coordinates on a (possibly) higher prolongation. Never lowers the order.
    pub fn prolonged(&self, order: usize) -> JetSpace {
        JetSpace {
            order: self.order.max(order),
            ..self.clone()
        }
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn field_names(&self) -> &[String] {
        &self.fields
    }

    pub fn param_names(&self) -> &[String] {
        &self.params
    }

    pub fn base_name(&self, i: usize) -> &str {
        &self.base[i]
    }

    pub fn field_name(&self, sigma: usize) -> &str {
        &self.fields[sigma]
    }

    pub fn param_name(&self, p: usize) -> &str {
        &self.params[p]
    }

    pub fn base_index(&self, name: &str) -> Option<usize> {
        self.base.iter().position(|b| b == name)
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}
