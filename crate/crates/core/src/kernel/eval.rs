use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use super::{DiffPoly, JetSpace, MultiIndex, Var};
use crate::error::{Error, Result};

/// A polynomial section `x ↦ (y^σ(x))`, one base-only polynomial per field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    components: Vec<DiffPoly>,
}

impl Section {
    pub fn new(space: &JetSpace, components: Vec<DiffPoly>) -> Result<Self> {
        if components.len() != space.m() {
            return Err(Error::InvalidProblem(format!(
                "section has {} components, expected {}",
                components.len(),
                space.m()
            )));
        }
        if let Some(c) = components.iter().find(|c| !c.jet_variables().is_empty()) {
            return Err(Error::InvalidProblem(format!(
                "section components may depend on base coordinates only, got {c:?}"
            )));
        }
        Ok(Section { components })
    }

    pub fn components(&self) -> &[DiffPoly] {
        &self.components
    }

    /// `∂_J y^σ` as a polynomial in the base coordinates.
    pub fn derivative(&self, field: usize, index: &MultiIndex) -> DiffPoly {
        // On base-only polynomials the total derivative is the partial one.
        self.components[field].total_derivative_multi(index)
    }
}

/// Evaluates `f` on the jet prolongation of `section` at `point`, exactly.
///
/// `params` is keyed by parameter name and must bind every parameter that
/// occurs in `f`.
pub fn poly_eval(
    space: &JetSpace,
    f: &DiffPoly,
    section: &Section,
    point: &[BigRational],
    params: &BTreeMap<String, BigRational>,
) -> Result<BigRational> {
    if point.len() != space.n() {
        return Err(Error::InvalidProblem(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            space.n()
        )));
    }
    let at_point = |p: &DiffPoly| -> BigRational {
        p.eval_exact(&mut |v| match v {
            Var::Base(i) => point[*i].clone(),
            Var::Jet { .. } => unreachable!("section components are base-only"),
        }, &|_| unreachable!("sections carry no parameters"))
        .expect("base-only evaluation cannot fail")
    };
    let mut cache: HashMap<Var, BigRational> = HashMap::new();
    f.eval_exact(
        &mut |v| {
            cache
                .entry(v.clone())
                .or_insert_with(|| match v {
                    Var::Base(i) => point[*i].clone(),
                    Var::Jet { field, index } => at_point(&section.derivative(*field, index)),
                })
                .clone()
        },
        &|p| {
            let name = space.param_name(p);
            params
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnboundParameter(name.to_string()))
        },
    )
    .map_err(|e| match e {
        Error::DivisionByZero(_) => Error::DivisionByZero(format!("{f:?}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn space() -> JetSpace {
        JetSpace::new(&["t", "x", "y"], &["v"], &["a"], 2).unwrap()
    }

    fn q(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn evaluates_first_derivative() {
        let s = space();
        let section = Section::new(&s, vec![DiffPoly::base(1).pow(2)]).unwrap();
        let f = DiffPoly::jet(0, MultiIndex::single(1));
        let val = poly_eval(&s, &f, &section, &[q(0), q(1), q(0)], &BTreeMap::new()).unwrap();
        assert_eq!(val, q(2));
    }

    #[test]
    fn evaluates_product_of_jets() {
        let s = space();
        let section = Section::new(&s, vec![DiffPoly::base(1).pow(3)]).unwrap();
        let f = DiffPoly::jet(0, MultiIndex::single(1)) * DiffPoly::jet(0, MultiIndex::from_indices(&[1, 1]));
        let val = poly_eval(&s, &f, &section, &[q(0), q(1), q(0)], &BTreeMap::new()).unwrap();
        assert_eq!(val, q(18));
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let s = space();
        let section = Section::new(&s, vec![DiffPoly::base(0)]).unwrap();
        let f = DiffPoly::param(0) * DiffPoly::field(0);
        let err = poly_eval(&s, &f, &section, &[q(1), q(1), q(1)], &BTreeMap::new()).unwrap_err();
        assert_eq!(err, Error::UnboundParameter("a".into()));
    }

    #[test]
    fn rejects_sections_with_jets() {
        let s = space();
        assert!(Section::new(&s, vec![DiffPoly::field(0)]).is_err());
    }
}
