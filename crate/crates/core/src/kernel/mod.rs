//! Jet spaces, multi-indices and exact differential polynomials.

mod eval;
mod multi_index;
mod poly;
mod space;

pub use eval::{poly_eval, Section};
pub use multi_index::MultiIndex;
pub use poly::{rat, Coefficient, DiffPoly, Monomial, Var};
pub use space::JetSpace;

/// `d_i f`. Free-function form of [`DiffPoly::total_derivative`].
pub fn total_derivative(f: &DiffPoly, i: usize) -> DiffPoly {
    f.total_derivative(i)
}

/// `∂f/∂y^σ_J`.
pub fn jet_partial(f: &DiffPoly, field: usize, index: &MultiIndex) -> DiffPoly {
    f.jet_partial(field, index)
}

/// Replaces every `y^σ_J` in `f` by `d_J g`; errors name the field.
pub fn substitute_field(space: &JetSpace, f: &DiffPoly, field: usize, g: &DiffPoly) -> crate::Result<DiffPoly> {
    f.substitute_field(field, g).map_err(|e| match e {
        crate::Error::RecursiveSubstitution(_) => {
            crate::Error::RecursiveSubstitution(space.field_name(field).to_string())
        }
        other => other,
    })
}
