//! Euler–Lagrange expressions, the interior Euler operator, Poincaré–Cartan
//! forms and "full" (Krupka–Betounes type) Lepage equivalents for
//! Lagrangians of order at most two.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::forms::{Basis, FrameVector, JetForm, SourceFormReport};
use crate::kernel::{rat, DiffPoly, JetSpace, MultiIndex, Var};

/// A Lagrangian density `L` of declared order `r` over a jet space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianProblem {
    space: JetSpace,
    density: DiffPoly,
    order: usize,
}

impl LagrangianProblem {
    pub fn new(space: JetSpace, density: DiffPoly, order: usize) -> Result<Self> {
        if density.order() > order {
            return Err(Error::InvalidProblem(format!(
                "density has order {} but order {order} was declared",
                density.order()
            )));
        }
        for v in density.variables() {
            let ok = match &v {
                Var::Base(i) => *i < space.n(),
                Var::Jet { field, index } => *field < space.m() && index.max_index().is_none_or(|i| i < space.n()),
            };
            if !ok {
                return Err(Error::InvalidProblem(format!("coordinate {v:?} is not in the jet space")));
            }
        }
        if let Some(&p) = density.params_used().iter().find(|&&p| p >= space.param_names().len()) {
            return Err(Error::InvalidProblem(format!("parameter #{p} is not declared")));
        }
        Ok(LagrangianProblem {
            space: space.prolonged(order),
            density,
            order,
        })
    }

    /// Uses the order of the density itself as the declared order.
    pub fn from_density(space: JetSpace, density: DiffPoly) -> Result<Self> {
        let r = density.order();
        Self::new(space, density, r)
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn density(&self) -> &DiffPoly {
        &self.density
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    /// `λ = L ds`.
    pub fn lagrangian_form(&self) -> JetForm {
        JetForm::horizontal(self.n(), self.density.clone(), &[])
    }

    /// A problem with the same space and declared order but another density.
    pub fn with_density(&self, density: DiffPoly) -> Result<Self> {
        let order = self.order.max(density.order());
        LagrangianProblem::new(self.space.clone(), density, order)
    }
}

/// `ε_σ(L) = Σ_J (-1)^{|J|} d_J ∂L/∂y^σ_J`, summed over sorted multi-indices.
pub fn euler_lagrange(problem: &LagrangianProblem) -> BTreeMap<usize, DiffPoly> {
    euler_lagrange_density(problem.space().m(), problem.density())
}

/// [`euler_lagrange`] for a bare density over `m` fields.
pub fn euler_lagrange_density(m: usize, density: &DiffPoly) -> BTreeMap<usize, DiffPoly> {
    let mut out: BTreeMap<usize, DiffPoly> = (0..m).map(|s| (s, DiffPoly::zero())).collect();
    for (field, index) in density.jet_variables() {
        let mut term = density.jet_partial(field, &index).total_derivative_multi(&index);
        if index.len() % 2 == 1 {
            term = -term;
        }
        *out.entry(field).or_default() += &term;
    }
    out
}

/// Interior Euler operator on an `(n+k)`-form:
/// `I(ρ) = (1/k) ω^σ ∧ Σ_J (-1)^{|J|} d_J(∂/∂y^σ_J ⌟ p_k ρ)`.
pub fn interior_euler(rho: &JetForm, k: usize) -> Result<JetForm> {
    let n = rho.n();
    if k == 0 || rho.degree() != n + k {
        return Err(Error::DegreeError {
            degree: rho.degree(),
            expected: if k == 0 { "contact (k ≥ 1)".into() } else { format!("({n}+{k})") },
        });
    }
    let pk = rho.contact_component(k);
    let mut slots: Vec<(usize, MultiIndex)> = pk
        .terms()
        .flat_map(|(w, _)| {
            w.iter().filter_map(|b| match b {
                Basis::Omega { field, index } => Some((*field, index.clone())),
                Basis::Dx(_) => None,
            })
        })
        .collect();
    slots.sort();
    slots.dedup();

    let mut per_field: BTreeMap<usize, JetForm> = BTreeMap::new();
    for (field, index) in slots {
        let x = FrameVector::jet_coordinate(n, field, index.clone());
        let mut eta = pk.interior_product(&x)?.total_derivative_multi(&index);
        if index.len() % 2 == 1 {
            eta = -&eta;
        }
        let acc = per_field
            .entry(field)
            .or_insert_with(|| JetForm::zero(n, n + k - 1));
        *acc = &*acc + &eta;
    }
    let mut out = JetForm::zero(n, n + k);
    for (field, s) in per_field {
        out = &out + &JetForm::omega(n, field, MultiIndex::empty()).wedge(&s);
    }
    Ok(out.scale_rational(&rat(1, k as i64)))
}

/// Canonical momenta of a Lagrangian of order ≤ 2.
///
/// `p2` is stored for `i ≤ j` only and holds the symmetric momentum
/// `P^{ij}_σ`, which is `∂L/∂y^σ_{ij}` on the diagonal and half of it off
/// the diagonal (one coordinate `y^σ_{ij}` stands for both `(i,j)` and
/// `(j,i)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Momenta {
    pub p1: BTreeMap<(usize, usize), DiffPoly>,
    pub p2: BTreeMap<(usize, (usize, usize)), DiffPoly>,
    pub f1: BTreeMap<(usize, usize), DiffPoly>,
}

impl Momenta {
    pub fn compute(problem: &LagrangianProblem) -> Momenta {
        let (n, m) = (problem.n(), problem.space().m());
        let l = problem.density();
        let mut p1 = BTreeMap::new();
        let mut p2 = BTreeMap::new();
        for s in 0..m {
            for i in 0..n {
                p1.insert((s, i), l.jet_partial(s, &MultiIndex::single(i)));
                for j in i..n {
                    let d = l.jet_partial(s, &MultiIndex::from_indices(&[i, j]));
                    let d = if i == j { d } else { d.scale(&rat(1, 2)) };
                    p2.insert((s, (i, j)), d);
                }
            }
        }
        let mut out = Momenta {
            p1,
            p2,
            f1: BTreeMap::new(),
        };
        for s in 0..m {
            for i in 0..n {
                let mut f = out.p1[&(s, i)].clone();
                for k in 0..n {
                    f -= &out.p2(s, i, k).total_derivative(k);
                }
                out.f1.insert((s, i), f);
            }
        }
        out
    }

    /// `p^i_σ = ∂L/∂y^σ_i`.
    pub fn p1(&self, field: usize, i: usize) -> DiffPoly {
        self.p1.get(&(field, i)).cloned().unwrap_or_default()
    }

    /// Symmetric `P^{ij}_σ`.
    pub fn p2(&self, field: usize, i: usize, j: usize) -> DiffPoly {
        let key = (field, (i.min(j), i.max(j)));
        self.p2.get(&key).cloned().unwrap_or_default()
    }

    /// `f^i_σ = p^i_σ − d_k P^{ik}_σ`.
    pub fn f1(&self, field: usize, i: usize) -> DiffPoly {
        self.f1.get(&(field, i)).cloned().unwrap_or_default()
    }
}

/// `θ_λ = L ds + f^i_σ ω^σ ∧ ds_i + P^{ij}_σ ω^σ_j ∧ ds_i`.
pub fn poincare_cartan(problem: &LagrangianProblem) -> Result<JetForm> {
    if problem.order() > 2 {
        return Err(Error::UnsupportedOrder(problem.order()));
    }
    let n = problem.n();
    let mom = Momenta::compute(problem);
    let mut ds = DsCache::new(n);
    let mut theta = problem.lagrangian_form();
    for s in 0..problem.space().m() {
        for i in 0..n {
            let f = mom.f1(s, i);
            if !f.is_zero() {
                theta = &theta + &JetForm::omega(n, s, MultiIndex::empty()).wedge(ds.get(&[i])).scale(&f);
            }
            for j in 0..n {
                let p = mom.p2(s, i, j);
                if !p.is_zero() {
                    theta = &theta + &JetForm::omega(n, s, MultiIndex::single(j)).wedge(ds.get(&[i])).scale(&p);
                }
            }
        }
    }
    Ok(theta)
}

/// The "full" Lepage equivalent.
///
/// For `r ≤ 1` this is the Krupka–Betounes form
/// `L ds + Σ_q (1/q!) ∂^q L/∂y^{σ_1}_{i_1}⋯∂y^{σ_q}_{i_q} ω^{σ_1}∧⋯∧ω^{σ_q}∧ds_{i_1⋯i_q}`.
/// For `r = 2` the first-order derivative chains end in a symmetric
/// second-order momentum paired with `ω^{σ_q}_j`, and the `f^i_σ` terms are
/// extended the same way.
pub fn lepage_full(problem: &LagrangianProblem) -> Result<JetForm> {
    match problem.order() {
        0 | 1 => Ok(krupka_betounes(problem)),
        2 => Ok(second_order_equivalent(problem)),
        r => Err(Error::UnsupportedOrder(r)),
    }
}

fn krupka_betounes(problem: &LagrangianProblem) -> JetForm {
    let n = problem.n();
    let mut ds = DsCache::new(n);
    let mut out = problem.lagrangian_form();
    let mut chains = Vec::new();
    first_order_chains(problem.density(), n, &mut Vec::new(), &mut chains);
    for (slots, coeff) in chains {
        out = &out + &contact_chain(n, &slots, None, coeff, &mut ds);
    }
    out
}

fn second_order_equivalent(problem: &LagrangianProblem) -> JetForm {
    let parts = lepage_summations(problem);
    &(&(&problem.lagrangian_form() + &parts.momentum_sum) + &parts.f_terms) + &parts.f_sum
}

/// The pieces of the second-order full equivalent `L ds + momentum_sum +
/// f_terms + f_sum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LepageSummations {
    /// `Σ_q (1/q!) ∂^{q-1}P^{i_q j}_{σ_q}/∂y^{σ_1}_{i_1}⋯ ω^{σ_1}∧⋯∧ω^{σ_q}_j∧ds_{i_1⋯i_q}`;
    /// its `q = 1` slice is the `P^{ij}_σ ω^σ_j ∧ ds_i` part of `θ_λ`.
    pub momentum_sum: JetForm,
    /// `f^i_σ ω^σ ∧ ds_i`.
    pub f_terms: JetForm,
    /// `Σ_{q≥1} (1/(q+1)!) ∂^q f^{i_{q+1}}_{σ_{q+1}}/∂y^{σ_1}_{i_1}⋯ ω^{σ_1}∧⋯∧ω^{σ_{q+1}}∧ds_{i_1⋯i_{q+1}}`.
    pub f_sum: JetForm,
}

/// Builds the summations of the second-order full equivalent separately.
/// Meaningful for densities of order ≤ 2.
pub fn lepage_summations(problem: &LagrangianProblem) -> LepageSummations {
    let n = problem.n();
    let m = problem.space().m();
    let mom = Momenta::compute(problem);
    let mut ds = DsCache::new(n);
    let mut momentum_sum = JetForm::zero(n, n);
    let mut f_terms = JetForm::zero(n, n);
    let mut f_sum = JetForm::zero(n, n);

    for s in 0..m {
        for iq in 0..n {
            for j in 0..n {
                let p = mom.p2(s, iq, j);
                if p.is_zero() {
                    continue;
                }
                let mut chains = vec![(Vec::new(), p.clone())];
                first_order_chains(&p, n, &mut Vec::new(), &mut chains);
                for (slots, coeff) in chains {
                    if slots.iter().any(|&(_, i)| i == iq) {
                        continue;
                    }
                    let tail = (s, iq, MultiIndex::single(j));
                    momentum_sum = &momentum_sum + &contact_chain(n, &slots, Some(tail), coeff, &mut ds);
                }
            }
        }
    }

    for s in 0..m {
        for i in 0..n {
            let f = mom.f1(s, i);
            if f.is_zero() {
                continue;
            }
            let mut chains = vec![(Vec::new(), f.clone())];
            first_order_chains(&f, n, &mut Vec::new(), &mut chains);
            for (slots, coeff) in chains {
                if slots.len() + 1 > n || slots.iter().any(|&(sig, ii)| sig == s || ii == i) {
                    continue;
                }
                let tail = (s, i, MultiIndex::empty());
                let term = contact_chain(n, &slots, Some(tail), coeff, &mut ds);
                if slots.is_empty() {
                    f_terms = &f_terms + &term;
                } else {
                    f_sum = &f_sum + &term;
                }
            }
        }
    }
    LepageSummations {
        momentum_sum,
        f_terms,
        f_sum,
    }
}

/// Collects every ordered chain `((σ_1,i_1),…,(σ_q,i_q))` with `q ≥ 1` of
/// distinct fields and distinct indices together with the derivative
/// `∂^q g/∂y^{σ_1}_{i_1}⋯∂y^{σ_q}_{i_q}`, when nonzero. Chains that repeat a
/// field or an index would multiply `ω^σ ∧ ω^σ` or `ds_{⋯i⋯i⋯}` and vanish.
fn first_order_chains(
    g: &DiffPoly,
    n: usize,
    prefix: &mut Vec<(usize, usize)>,
    out: &mut Vec<(Vec<(usize, usize)>, DiffPoly)>,
) {
    if prefix.len() == n {
        return;
    }
    let candidates: Vec<(usize, usize)> = g
        .jet_variables()
        .into_iter()
        .filter(|(_, idx)| idx.len() == 1)
        .map(|(s, idx)| (s, idx.max_index().expect("first-order index")))
        .filter(|&(s, i)| prefix.iter().all(|&(ps, pi)| ps != s && pi != i))
        .collect();
    for (s, i) in candidates {
        let d = g.jet_partial(s, &MultiIndex::single(i));
        if d.is_zero() {
            continue;
        }
        prefix.push((s, i));
        out.push((prefix.clone(), d.clone()));
        first_order_chains(&d, n, prefix, out);
        prefix.pop();
    }
}

/// `(1/q!) c ω^{σ_1}∧⋯∧ω^{σ_{q-1}}∧ω^{σ_q}_{J}∧ds_{i_1⋯i_q}` where the last
/// slot is either the chain's own last entry (with `J = ∅`) or `tail`.
fn contact_chain(
    n: usize,
    slots: &[(usize, usize)],
    tail: Option<(usize, usize, MultiIndex)>,
    coeff: DiffPoly,
    ds: &mut DsCache,
) -> JetForm {
    let mut word = Vec::new();
    let mut indices = Vec::new();
    for &(s, i) in slots {
        word.push(Basis::omega(s, MultiIndex::empty()));
        indices.push(i);
    }
    if let Some((s, i, j)) = tail {
        word.push(Basis::omega(s, j));
        indices.push(i);
    }
    let q = indices.len();
    let form = JetForm::from_word(n, coeff, word).wedge(ds.get(&indices));
    form.scale_rational(&BigRational::new(BigInt::one(), factorial(q)))
}

fn factorial(q: usize) -> BigInt {
    (1..=q).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

struct DsCache {
    n: usize,
    cache: HashMap<Vec<usize>, JetForm>,
}

impl DsCache {
    fn new(n: usize) -> Self {
        DsCache {
            n,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, indices: &[usize]) -> &JetForm {
        let n = self.n;
        self.cache
            .entry(indices.to_vec())
            .or_insert_with(|| JetForm::ds(n, indices))
    }
}

/// Tests the Lepage property: `p_1 dρ` must be generated by the `ω^σ`.
pub fn is_lepage(rho: &JetForm) -> (bool, SourceFormReport) {
    if rho.degree() != rho.n() {
        let report = SourceFormReport {
            is_source: false,
            components: BTreeMap::new(),
            residue: rho.clone(),
        };
        return (false, report);
    }
    let report = rho.exterior_d().contact_component(1).classify_source();
    (report.is_source, report)
}

/// Splits a 1-contact form `p_1 ρ` of degree `n − s + 1` (`s ≥ 1`) as
/// `source + d_H(boundary)` with `source` generated by the `ω^σ`.
///
/// Only contact factors `ω^σ_L` with `|L| ≤ 1` are handled. The boundary is
/// `Σ_σ ω^σ ∧ h_σ` with `h_σ = −(1/(s+1)) Σ_i d_i ⌟ (∂/∂y^σ_i ⌟ p_1 ρ)`.
/// Inputs whose `|L| = 1` part is not of that integration-by-parts shape
/// are rejected.
pub fn lower_residual_k1(rho: &JetForm) -> Result<(JetForm, JetForm)> {
    let n = rho.n();
    let deg = rho.degree();
    if deg == 0 || deg > n {
        return Err(Error::DegreeError {
            degree: deg,
            expected: format!("(n−s+1) with 1 ≤ s ≤ n, n = {n}"),
        });
    }
    let s = n + 1 - deg;
    let p1 = rho.contact_component(1);
    let mut first_order: Vec<(usize, usize)> = Vec::new();
    for (w, _) in p1.terms() {
        for b in w {
            if let Basis::Omega { field, index } = b {
                match index.len() {
                    0 => {}
                    1 => first_order.push((*field, index.max_index().expect("nonempty"))),
                    l => {
                        return Err(Error::UnsupportedShape(format!(
                            "contact factor of order {l}; only |L| ≤ 1 is reconstructed"
                        )))
                    }
                }
            }
        }
    }
    first_order.sort_unstable();
    first_order.dedup();
    if first_order.is_empty() {
        return Ok((p1, JetForm::zero(n, deg - 1)));
    }
    if deg == 1 {
        return Err(Error::UnsupportedShape("a 1-form with ω^σ_i factors has no boundary".into()));
    }
    let mut boundary = JetForm::zero(n, deg - 1);
    let mut fields: Vec<usize> = first_order.iter().map(|&(f, _)| f).collect();
    fields.dedup();
    for field in fields {
        let mut acc = JetForm::zero(n, deg.saturating_sub(2));
        for &(f, i) in first_order.iter().filter(|&&(f, _)| f == field) {
            let eta = p1.interior_product(&FrameVector::jet_coordinate(n, f, MultiIndex::single(i)))?;
            acc = &acc + &eta.interior_product(&FrameVector::total(n, i))?;
        }
        let h = acc.scale_rational(&rat(-1, (s + 1) as i64));
        boundary = &boundary + &JetForm::omega(n, field, MultiIndex::empty()).wedge(&h);
    }
    let source = &p1 - &boundary.horizontal_d();
    let generated = source.terms().all(|(w, _)| {
        w.iter().all(|b| match b {
            Basis::Omega { index, .. } => index.is_empty(),
            Basis::Dx(_) => true,
        })
    });
    if !generated {
        return Err(Error::UnsupportedShape(
            "the first-order contact part is not a horizontal differential plus a source".into(),
        ));
    }
    Ok((source, boundary))
}
