//! Projectable vector fields, their jet prolongations, Lie derivatives of
//! forms, the first variation formula and Noether currents.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{FrameVector, JetForm};
use crate::kernel::{rat, DiffPoly, JetSpace, MultiIndex};
use crate::variational::{euler_lagrange_density, lepage_full, poincare_cartan, LagrangianProblem};

/// `Ξ = ξ^i(x) ∂_i + Ξ^σ(x, y) ∂_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjVectorField {
    xi: Vec<DiffPoly>,
    big_xi: Vec<DiffPoly>,
}

impl ProjVectorField {
    pub fn new(space: &JetSpace, xi: Vec<DiffPoly>, big_xi: Vec<DiffPoly>) -> Result<Self> {
        if xi.len() != space.n() || big_xi.len() != space.m() {
            return Err(Error::InvalidVectorField(format!(
                "expected {} base and {} fiber components, got {} and {}",
                space.n(),
                space.m(),
                xi.len(),
                big_xi.len()
            )));
        }
        for (i, c) in xi.iter().enumerate() {
            if !c.jet_variables().is_empty() {
                return Err(Error::InvalidVectorField(format!(
                    "ξ^{} depends on fiber coordinates; the field would not be projectable",
                    space.base_name(i)
                )));
            }
        }
        for (s, c) in big_xi.iter().enumerate() {
            if c.order() > 0 {
                return Err(Error::InvalidVectorField(format!(
                    "Ξ^{} depends on derivatives; only point transformations are supported",
                    space.field_name(s)
                )));
            }
        }
        Ok(ProjVectorField { xi, big_xi })
    }

    pub fn zero(space: &JetSpace) -> Self {
        ProjVectorField {
            xi: vec![DiffPoly::zero(); space.n()],
            big_xi: vec![DiffPoly::zero(); space.m()],
        }
    }

    /// `∂/∂x^i`.
    pub fn translation(space: &JetSpace, i: usize) -> Self {
        let mut out = Self::zero(space);
        out.xi[i] = DiffPoly::one();
        out
    }

    /// `∂/∂y^σ`.
    pub fn field_shift(space: &JetSpace, field: usize) -> Self {
        let mut out = Self::zero(space);
        out.big_xi[field] = DiffPoly::one();
        out
    }

    /// The dilation `x^i ∂_i` of the base.
    pub fn base_scaling(space: &JetSpace) -> Self {
        let mut out = Self::zero(space);
        for i in 0..space.n() {
            out.xi[i] = DiffPoly::base(i);
        }
        out
    }

    pub fn xi(&self) -> &[DiffPoly] {
        &self.xi
    }

    pub fn big_xi(&self) -> &[DiffPoly] {
        &self.big_xi
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().chain(&self.big_xi).all(DiffPoly::is_zero)
    }

    pub fn is_vertical(&self) -> bool {
        self.xi.iter().all(DiffPoly::is_zero)
    }
}

/// `J^r Ξ`: the components `Ξ^σ_J` for `|J| ≤ r` together with the vertical
/// (characteristic) parts `V^σ_J = Ξ^σ_J − y^σ_{Ji} ξ^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    base: ProjVectorField,
    order: usize,
    components: BTreeMap<(usize, MultiIndex), DiffPoly>,
    vertical: BTreeMap<(usize, MultiIndex), DiffPoly>,
}

/// Prolongs `Ξ` with `Ξ^σ_{Ji} = d_i Ξ^σ_J − y^σ_{Jk} d_i ξ^k`.
pub fn prolong(field: &ProjVectorField, order: usize) -> ProlongedField {
    let n = field.n();
    let mut components = BTreeMap::new();
    for (s, c) in field.big_xi.iter().enumerate() {
        components.insert((s, MultiIndex::empty()), c.clone());
    }
    for level in 1..=order {
        for s in 0..field.big_xi.len() {
            for idx in MultiIndex::all_of_order(n, level) {
                let (parent, i) = idx.split_last().expect("level ≥ 1");
                let mut c = components[&(s, parent.clone())].total_derivative(i);
                for (k, xk) in field.xi.iter().enumerate() {
                    let dxk = xk.total_derivative(i);
                    if !dxk.is_zero() {
                        c -= &(&DiffPoly::jet(s, parent.with(k)) * &dxk);
                    }
                }
                components.insert((s, idx), c);
            }
        }
    }
    let vertical = components
        .iter()
        .map(|((s, idx), c)| {
            let mut v = c.clone();
            for (i, xi) in field.xi.iter().enumerate() {
                if !xi.is_zero() {
                    v -= &(&DiffPoly::jet(*s, idx.with(i)) * xi);
                }
            }
            ((*s, idx.clone()), v)
        })
        .collect();
    ProlongedField {
        base: field.clone(),
        order,
        components,
        vertical,
    }
}

impl ProlongedField {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base(&self) -> &ProjVectorField {
        &self.base
    }

    /// `Ξ^σ_J`.
    pub fn component(&self, field: usize, index: &MultiIndex) -> Option<&DiffPoly> {
        self.components.get(&(field, index.clone()))
    }

    /// `V^σ_J = Ξ^σ_J − y^σ_{Ji} ξ^i`.
    pub fn vertical(&self, field: usize, index: &MultiIndex) -> Option<&DiffPoly> {
        self.vertical.get(&(field, index.clone()))
    }

    pub fn components(&self) -> &BTreeMap<(usize, MultiIndex), DiffPoly> {
        &self.components
    }

    /// `J^rΞ = ξ^i d_i + V^σ_J ∂/∂y^σ_J` in the contact-adapted frame.
    pub fn frame_vector(&self) -> FrameVector {
        FrameVector {
            horizontal: self.base.xi.clone(),
            vertical: self.vertical.clone(),
            order: self.order,
        }
    }

    /// The vertical part `Ξ_V` alone.
    pub fn vertical_frame(&self) -> FrameVector {
        FrameVector {
            horizontal: vec![DiffPoly::zero(); self.base.n()],
            vertical: self.vertical.clone(),
            order: self.order,
        }
    }

    /// The horizontal part `Ξ_H = ξ^i d_i`.
    pub fn horizontal_frame(&self) -> FrameVector {
        FrameVector {
            horizontal: self.base.xi.clone(),
            vertical: BTreeMap::new(),
            order: usize::MAX,
        }
    }
}

/// Prolongation order needed to take the Lie derivative of `rho`: its
/// differential contains contact factors one order higher than `rho` itself.
pub fn required_order(rho: &JetForm) -> usize {
    rho.exterior_d().order().max(rho.order())
}

/// `L_{J^rΞ} ρ = J^rΞ ⌟ dρ + d(J^rΞ ⌟ ρ)`.
pub fn lie_derivative(rho: &JetForm, field: &ProjVectorField, order: usize) -> Result<JetForm> {
    let needed = required_order(rho);
    if order < needed {
        return Err(Error::OrderMismatch(format!(
            "prolongation of order {order} is too low for a form needing order {needed}"
        )));
    }
    let x = prolong(field, order).frame_vector();
    Ok(&rho.exterior_d().interior_product(&x)? + &rho.interior_product(&x)?.exterior_d())
}

/// The three pieces of the first variation formula
/// `L_{JΞ}λ = Ξ_V ⌟ E_λ + d_H(J Ξ_V ⌟ (θ_λ − λ) + Ξ_H ⌟ λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstVariation {
    pub lhs: DiffPoly,
    pub source_term: DiffPoly,
    pub current: JetForm,
}

impl FirstVariation {
    /// Checks `lhs ds = source_term ds + d_H current` exactly.
    pub fn holds(&self) -> bool {
        let n = self.current.n();
        let rhs = &JetForm::horizontal(n, self.source_term.clone(), &[]) + &self.current.horizontal_d();
        JetForm::horizontal(n, self.lhs.clone(), &[]) == rhs
    }
}

pub fn first_variation(problem: &LagrangianProblem, field: &ProjVectorField) -> Result<FirstVariation> {
    let r = problem.order();
    if r > 2 {
        return Err(Error::UnsupportedOrder(r));
    }
    let lambda = problem.lagrangian_form();
    let theta = poincare_cartan(problem)?;
    let jx = prolong(field, r.max(1));
    let lhs = lie_derivative(&lambda, field, required_order(&lambda))?
        .horizontal_part()
        .density();
    let el = euler_lagrange_density(problem.space().m(), problem.density());
    let source_term: DiffPoly = el
        .iter()
        .map(|(s, e)| e * jx.vertical(*s, &MultiIndex::empty()).expect("order-0 component"))
        .sum();
    let current = &(&theta - &lambda).interior_product(&jx.vertical_frame())?.horizontal_part()
        + &lambda.interior_product(&jx.horizontal_frame())?;
    Ok(FirstVariation {
        lhs,
        source_term,
        current,
    })
}

/// Result of [`improved_current`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprovedCurrent {
    /// `J Ξ ⌟ ρ_λ`.
    pub candidate: JetForm,
    /// `h(L_{JΞ} ρ_λ)`.
    pub obstruction: JetForm,
    /// A potential with `d_H ψ = obstruction` (one representative; any
    /// `d_H`-closed form may be added).
    pub psi: JetForm,
    /// `candidate − ψ`.
    pub conserved: JetForm,
    /// `Ξ_V ⌟ p_1 dρ_λ` as a density.
    pub source_term: DiffPoly,
}

pub fn improved_current(problem: &LagrangianProblem, field: &ProjVectorField) -> Result<ImprovedCurrent> {
    let r = problem.order();
    if r > 2 {
        return Err(Error::UnsupportedOrder(r));
    }
    let n = problem.n();
    let rho = lepage_full(problem)?;
    let order = required_order(&rho);
    let jx = prolong(field, order);
    let candidate = rho.interior_product(&jx.frame_vector())?;
    let obstruction = lie_derivative(&rho, field, order)?.horizontal_part();
    let report = rho.exterior_d().contact_component(1).classify_source();
    let source_term: DiffPoly = report
        .components
        .iter()
        .map(|(s, e)| e * jx.vertical(*s, &MultiIndex::empty()).expect("order-0 component"))
        .sum();

    let psi = if obstruction.is_zero() {
        JetForm::zero(n, n - 1)
    } else {
        let e = euler_lagrange_density(problem.space().m(), &obstruction.density());
        if e.values().any(|c| !c.is_zero()) {
            return Err(Error::NotExact);
        }
        divergence_potential(&obstruction)?
    };
    let conserved = &candidate - &psi;
    Ok(ImprovedCurrent {
        candidate,
        obstruction,
        psi,
        conserved,
        source_term,
    })
}

/// Reconstructs `ψ` with `d_H ψ = ω` for a horizontal `n`-form whose
/// density is a null Lagrangian with no explicit base dependence.
///
/// Each homogeneous component `D_d` (degree `d` in the jet coordinates)
/// satisfies `d·D_d = Σ y^σ_J ∂D_d/∂y^σ_J`; integrating the right side by
/// parts leaves `Σ y^σ ε_σ(D_d) = 0` plus a divergence, whose potential is
/// returned. Constants `c` become `c x^0 ds_0`.
pub fn divergence_potential(omega: &JetForm) -> Result<JetForm> {
    let n = omega.n();
    if omega.degree() != n || omega.max_contact_degree().unwrap_or(0) > 0 {
        return Err(Error::DegreeError {
            degree: omega.degree(),
            expected: format!("horizontal {n}"),
        });
    }
    let density = omega.density();
    if density.is_zero() {
        return Ok(JetForm::zero(n, n - 1));
    }
    let m = density
        .jet_variables()
        .iter()
        .map(|(s, _)| s + 1)
        .max()
        .unwrap_or(0);
    if euler_lagrange_density(m, &density).values().any(|e| !e.is_zero()) {
        return Err(Error::NotNull);
    }
    if density.has_explicit_base() {
        return Err(Error::ReconstructionFailure(
            "densities with explicit base dependence are not supported".into(),
        ));
    }
    let mut components = vec![DiffPoly::zero(); n];
    for (degree, part) in density.split_by_jet_degree() {
        if degree == 0 {
            components[0] += &(&part * &DiffPoly::base(0));
            continue;
        }
        let weight = rat(1, degree as i64);
        for (s, idx) in part.jet_variables() {
            // y_{K∪i} F = d_i(y_K F) − y_K d_i F, repeated down to |K| = 0
            let mut f = part.jet_partial(s, &idx).scale(&weight);
            let mut j = idx;
            while let Some((k, i)) = j.split_last() {
                components[i] += &(&DiffPoly::jet(s, k.clone()) * &f);
                f = -f.total_derivative(i);
                j = k;
            }
        }
    }
    let mut psi = JetForm::zero(n, n - 1);
    for (i, c) in components.into_iter().enumerate() {
        psi = &psi + &JetForm::horizontal(n, c, &[i]);
    }
    if psi.horizontal_d() != *omega {
        return Err(Error::ReconstructionFailure(
            "recombination d_H ψ differs from the input".into(),
        ));
    }
    Ok(psi)
}

/// The Noether–Bessel-Hagen current `ε = J Ξ ⌟ ρ_λ − ψ`, returned only after
/// certifying `d_H h(ε) = −Ξ_V ⌟ p_1 dρ_λ`.
pub fn noether_bessel_hagen_residual(problem: &LagrangianProblem, field: &ProjVectorField) -> Result<JetForm> {
    let ic = improved_current(problem, field)?;
    let n = problem.n();
    let lhs = ic.conserved.horizontal_part().horizontal_d();
    let rhs = JetForm::horizontal(n, -&ic.source_term, &[]);
    if lhs != rhs {
        return Err(Error::ReconstructionFailure(
            "conserved current does not satisfy d_H ε = −Ξ_V ⌟ p_1 dρ".into(),
        ));
    }
    Ok(ic.conserved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    const N: usize = 3;
    const T: usize = 0;
    const X: usize = 1;
    const Y: usize = 2;
    const V: usize = 0;
    const W: usize = 1;

    fn jet(field: usize, idx: &[usize]) -> DiffPoly {
        DiffPoly::jet(field, MultiIndex::from_indices(idx))
    }

    fn space() -> JetSpace {
        JetSpace::new(&["t", "x", "y"], &["v", "w"], &["a", "b", "beta"], 2).unwrap()
    }

    fn unconstrained() -> LagrangianProblem {
        let (a, b, beta) = (DiffPoly::param(0), DiffPoly::param(1), DiffPoly::param(2));
        let l = jet(W, &[]).pow(2)
            + jet(V, &[X]).pow(2).scale(&rat(1, 2))
            + &a * &(jet(W, &[T]) * jet(V, &[X, X]))
            - (&a * &(jet(V, &[T, T]) * jet(V, &[X, X]))).scale(&rat(1, 2))
            - (&b * &jet(V, &[X, X]).pow(2)).scale(&rat(1, 2))
            + jet(V, &[X]).pow(3).scale(&rat(1, 3))
            + (&beta * &jet(V, &[Y]).pow(2)).scale(&rat(1, 2));
        LagrangianProblem::new(space(), l, 2).unwrap()
    }

    #[test]
    fn field_shift_prolongs_trivially() {
        let p = prolong(&ProjVectorField::field_shift(&space(), V), 2);
        assert_eq!(p.component(V, &MultiIndex::empty()), Some(&DiffPoly::one()));
        for (key, c) in p.components() {
            if !key.1.is_empty() {
                assert!(c.is_zero(), "{key:?}");
            }
        }
    }

    #[test]
    fn translation_characteristic() {
        let p = prolong(&ProjVectorField::translation(&space(), X), 2);
        assert_eq!(p.vertical(V, &MultiIndex::empty()), Some(&-jet(V, &[X])));
        assert_eq!(p.vertical(V, &MultiIndex::single(T)), Some(&-jet(V, &[T, X])));
    }

    #[test]
    fn time_scaling_component() {
        let sp = space();
        let mut xi = vec![DiffPoly::zero(); 3];
        xi[T] = DiffPoly::base(T);
        let f = ProjVectorField::new(&sp, xi, vec![jet(V, &[]), DiffPoly::zero()]).unwrap();
        let p = prolong(&f, 1);
        assert!(p.component(V, &MultiIndex::single(T)).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_projectable_fields() {
        let sp = space();
        let bad = vec![jet(V, &[]), DiffPoly::zero(), DiffPoly::zero()];
        assert!(ProjVectorField::new(&sp, bad, vec![DiffPoly::zero(); 2]).is_err());
        let bad2 = vec![jet(V, &[X]), DiffPoly::zero()];
        assert!(ProjVectorField::new(&sp, vec![DiffPoly::zero(); 3], bad2).is_err());
    }

    #[test]
    fn lie_derivative_of_volume_is_divergence() {
        let sp = space();
        let xi = vec![DiffPoly::base(T).pow(2), DiffPoly::base(Y), DiffPoly::base(X) * DiffPoly::base(Y)];
        let f = ProjVectorField::new(&sp, xi.clone(), vec![DiffPoly::zero(); 2]).unwrap();
        let lie = lie_derivative(&JetForm::volume(N), &f, 1).unwrap();
        let div: DiffPoly = (0..N).map(|i| xi[i].total_derivative(i)).sum();
        assert_eq!(lie, JetForm::horizontal(N, div, &[]));
    }

    #[test]
    fn lie_derivative_needs_enough_order() {
        let rho = JetForm::horizontal(N, jet(V, &[X, X]), &[]);
        let f = ProjVectorField::translation(&space(), T);
        assert!(matches!(lie_derivative(&rho, &f, 1), Err(Error::OrderMismatch(_))));
    }

    #[test]
    fn first_variation_for_translations() {
        let p = unconstrained();
        for i in 0..N {
            let fv = first_variation(&p, &ProjVectorField::translation(p.space(), i)).unwrap();
            assert!(fv.holds(), "translation {i}");
            assert!(fv.lhs.is_zero());
        }
    }

    #[test]
    fn first_variation_of_simple_shift() {
        let sp = JetSpace::new(&["t", "x"], &["v"], &[], 1).unwrap();
        let p = LagrangianProblem::new(sp.clone(), jet(V, &[X]).pow(2).scale(&rat(1, 2)), 1).unwrap();
        let fv = first_variation(&p, &ProjVectorField::field_shift(&sp, V)).unwrap();
        assert_eq!(fv.source_term, -jet(V, &[X, X]));
        assert_eq!(fv.current, JetForm::horizontal(2, jet(V, &[X]), &[X]));
        assert!(fv.holds());
    }

    #[test]
    fn potential_of_simple_divergences() {
        let sq = (jet(V, &[X]) * jet(V, &[X, X])).scale(&rat(2, 1));
        let psi = divergence_potential(&JetForm::horizontal(N, sq, &[])).unwrap();
        assert_eq!(psi, JetForm::horizontal(N, jet(V, &[X]).pow(2), &[X]));
        let mixed = jet(V, &[T]) * jet(V, &[X, X]) + jet(V, &[X]) * jet(V, &[T, X]);
        let omega = JetForm::horizontal(N, mixed, &[]);
        assert_eq!(divergence_potential(&omega).unwrap().horizontal_d(), omega);
        assert!(divergence_potential(&JetForm::zero(N, N)).unwrap().is_zero());
    }

    #[test]
    fn potential_failure_paths() {
        let not_null = JetForm::horizontal(N, jet(V, &[X]).pow(2), &[]);
        assert_eq!(divergence_potential(&not_null), Err(Error::NotNull));
        let explicit = JetForm::horizontal(N, DiffPoly::base(T) * jet(V, &[X]), &[]);
        assert!(matches!(divergence_potential(&explicit), Err(Error::ReconstructionFailure(_))));
    }

    #[test]
    fn potential_of_constant() {
        let omega = JetForm::horizontal(N, DiffPoly::integer(3), &[]);
        assert_eq!(divergence_potential(&omega).unwrap().horizontal_d(), omega);
    }

    #[test]
    fn y_translation_needs_no_correction() {
        let p = unconstrained();
        let ic = improved_current(&p, &ProjVectorField::translation(p.space(), Y)).unwrap();
        assert!(ic.obstruction.is_zero());
        assert!(ic.psi.is_zero());
    }

    #[test]
    fn shear_in_y_gives_divergence_obstruction() {
        // Ξ = y ∂_v changes L by β v_y, a total divergence
        let p = unconstrained();
        let f = ProjVectorField::new(
            p.space(),
            vec![DiffPoly::zero(); 3],
            vec![DiffPoly::base(Y), DiffPoly::zero()],
        )
        .unwrap();
        let ic = improved_current(&p, &f).unwrap();
        let beta = DiffPoly::param(2);
        assert_eq!(ic.obstruction, JetForm::horizontal(N, &beta * &jet(V, &[Y]), &[]));
        assert_eq!(ic.psi, JetForm::horizontal(N, &beta * &jet(V, &[]), &[Y]));
        noether_bessel_hagen_residual(&p, &f).unwrap();
    }

    #[test]
    fn non_symmetries_are_not_exact() {
        let p = unconstrained();
        let f = ProjVectorField::new(p.space(), vec![DiffPoly::zero(); 3], vec![jet(V, &[]), DiffPoly::zero()]).unwrap();
        assert_eq!(improved_current(&p, &f), Err(Error::NotExact));
    }

    #[test]
    fn zero_field_gives_zero_current() {
        let p = unconstrained();
        let z = ProjVectorField::zero(p.space());
        let ic = improved_current(&p, &z).unwrap();
        assert!(ic.candidate.is_zero() && ic.obstruction.is_zero());
        assert!(noether_bessel_hagen_residual(&p, &z).unwrap().is_zero());
    }

    #[test]
    fn noether_current_of_time_translation() {
        let p = unconstrained();
        let eps = noether_bessel_hagen_residual(&p, &ProjVectorField::translation(p.space(), T)).unwrap();
        assert!(!eps.is_zero());
    }
}
