//! Two-field Lagrangians for (2+1)-dimensional Boussinesq-type equations.
//!
//! Coordinates are `(t, x, y)`, fields `v, w` and, for the constrained
//! cases, a Lagrange multiplier `gamma`; parameters are `a, b, beta`.
//! Reference data (momenta, displayed equations, final PDEs) is kept as
//! source text in the input syntax and parsed on demand.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::dsl::{parse_lagrangian, pretty_print};
use crate::error::{Error, Result};
use crate::forms::JetForm;
use crate::kernel::{rat, DiffPoly, JetSpace, MultiIndex};
use crate::symmetry::{first_variation, prolong, ProjVectorField};
use crate::variational::{
    euler_lagrange, lepage_full, poincare_cartan, LagrangianProblem, Momenta,
};

pub const T: usize = 0;
pub const X: usize = 1;
pub const Y: usize = 2;
pub const V: usize = 0;
pub const W: usize = 1;
pub const GAMMA: usize = 2;

/// Jet order used to parse reference data (the PDEs reach sixth order).
const REFERENCE_ORDER: usize = 6;

const COMMON: &str =
    "1/2*v_x^2 + a*w_t*v_xx - 1/2*a*v_tt*v_xx - 1/2*b*v_xx^2 + 1/3*v_x^3 + 1/2*beta*v_y^2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    L1Constrained,
    L2HalfConstraint,
    L3PlusConstraint,
    L4Unconstrained,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [
        CaseId::L1Constrained,
        CaseId::L2HalfConstraint,
        CaseId::L3PlusConstraint,
        CaseId::L4Unconstrained,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::L1Constrained => "L1_constrained",
            CaseId::L2HalfConstraint => "L2_half_constraint",
            CaseId::L3PlusConstraint => "L3_plus_constraint",
            CaseId::L4Unconstrained => "L4_unconstrained",
        }
    }

    fn data(self) -> &'static CaseData {
        match self {
            CaseId::L1Constrained => &L1,
            CaseId::L2HalfConstraint => &L2,
            CaseId::L3PlusConstraint => &L3,
            CaseId::L4Unconstrained => &L4,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    }
}

struct CaseData {
    w_term: &'static str,
    multiplier: Option<&'static str>,
    constraint: Option<&'static str>,
    /// Displayed v- and w-equations.
    displayed: [&'static str; 2],
    expected_pde: &'static str,
    /// `(label, field, kind, i, j, expected)`; kind is `f` for `f^i_σ` and
    /// `p` for `P^{ij}_σ`. Lists of zero momenta share one label.
    momenta: &'static [MomentumRow],
    lepage_excess: Option<&'static str>,
}

/// `(field, kind, i, j)` of one momentum.
type Slot = (usize, char, usize, usize);
type MomentumRow = (&'static str, &'static [Slot], &'static str);

const L1_MOMENTA: &[MomentumRow] = &[
    ("f^t_v", &[(V, 'f', T, 0)], "-gamma + 1/2*a*v_txx"),
    ("f^t_w", &[(W, 'f', T, 0)], "a*v_xx"),
    ("f^x_v", &[(V, 'f', X, 0)], "v_x + v_x^2 - a*w_tx + 1/2*a*v_ttx + b*v_xxx"),
    ("f^y_v", &[(V, 'f', Y, 0)], "beta*v_y"),
    ("f^x_w", &[(W, 'f', X, 0)], "0"),
    ("f^y_w", &[(W, 'f', Y, 0)], "0"),
    ("p^tt_v", &[(V, 'p', T, T)], "-1/2*a*v_xx"),
    ("p^xx_v", &[(V, 'p', X, X)], "a*w_t - 1/2*a*v_tt - b*v_xx"),
    (
        "p^tx_v, p^ty_v, p^xy_v, p^yy_v",
        &[(V, 'p', T, X), (V, 'p', T, Y), (V, 'p', X, Y), (V, 'p', Y, Y)],
        "0",
    ),
    (
        "p^.._w",
        &[
            (W, 'p', T, T),
            (W, 'p', T, X),
            (W, 'p', T, Y),
            (W, 'p', X, X),
            (W, 'p', X, Y),
            (W, 'p', Y, Y),
        ],
        "0",
    ),
];

// With gamma = 0 the same momenta apply to the unconstrained density.
const L4_MOMENTA: &[MomentumRow] = &[
    ("f^t_v", &[(V, 'f', T, 0)], "1/2*a*v_txx"),
    ("f^t_w", &[(W, 'f', T, 0)], "a*v_xx"),
    ("f^x_v", &[(V, 'f', X, 0)], "v_x + v_x^2 - a*w_tx + 1/2*a*v_ttx + b*v_xxx"),
    ("f^y_v", &[(V, 'f', Y, 0)], "beta*v_y"),
    ("p^tt_v", &[(V, 'p', T, T)], "-1/2*a*v_xx"),
    ("p^xx_v", &[(V, 'p', X, X)], "a*w_t - 1/2*a*v_tt - b*v_xx"),
];

static L1: CaseData = CaseData {
    w_term: "w^2",
    multiplier: Some("gamma*(w - v_t)"),
    constraint: Some("v_t"),
    displayed: [
        "v_xx + 2*v_x*v_xx - a*w_txx + b*v_xxxx + beta*v_yy + a*v_ttxx - gamma_t",
        "2*w - a*v_txx + gamma",
    ],
    expected_pde: "v_xx + 2*v_x*v_xx + a*v_ttxx + b*v_xxxx + beta*v_yy + 2*v_tt",
    momenta: L1_MOMENTA,
    lepage_excess: Some("1/2*a"),
};

static L2: CaseData = CaseData {
    w_term: "w^2",
    multiplier: Some("gamma*(w - 1/2*v_t)"),
    constraint: Some("1/2*v_t"),
    displayed: [
        "v_xx + 2*v_x*v_xx - a*w_txx + b*v_xxxx + beta*v_yy + a*v_ttxx - 1/2*gamma_t",
        "2*w - a*v_txx + gamma",
    ],
    expected_pde: "v_xx + 2*v_x*v_xx + b*v_xxxx + beta*v_yy + v_tt",
    momenta: &[],
    lepage_excess: None,
};

static L3: CaseData = CaseData {
    w_term: "1/2*w^2",
    multiplier: Some("gamma*(w + v_t)"),
    constraint: Some("-v_t"),
    displayed: [
        "v_xx - a*w_txx + a*v_ttxx + b*v_xxxx + 2*v_x*v_xx + beta*v_yy + gamma_t",
        "w - a*v_txx + gamma",
    ],
    expected_pde: "v_xx + a*v_ttxx + b*v_xxxx + 2*v_x*v_xx + beta*v_yy - v_tt",
    momenta: &[],
    lepage_excess: None,
};

static L4: CaseData = CaseData {
    w_term: "w^2",
    multiplier: None,
    constraint: None,
    displayed: [
        "v_xx + 2*v_x*v_xx + a*v_ttxx - a*w_txx + b*v_xxxx + beta*v_yy",
        "w - 1/2*a*v_txx",
    ],
    expected_pde: "v_xx + 2*v_x*v_xx - 1/2*a^2*v_ttxxxx + b*v_xxxx + beta*v_yy + a*v_ttxx",
    momenta: L4_MOMENTA,
    lepage_excess: Some("1/2*a"),
};

/// One of the four Boussinesq fixtures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoussinesqCase {
    pub id: CaseId,
    pub problem: LagrangianProblem,
    /// `w = expr`, present exactly when `gamma` is a field.
    pub constraint: Option<(usize, DiffPoly)>,
    pub expected_pde: DiffPoly,
}

/// Jet space of a fixture, deep enough to hold every derived expression.
pub fn case_space(id: CaseId) -> JetSpace {
    let fields: &[&str] = if id.data().multiplier.is_some() {
        &["v", "w", "gamma"]
    } else {
        &["v", "w"]
    };
    JetSpace::new(&["t", "x", "y"], fields, &["a", "b", "beta"], REFERENCE_ORDER).expect("fixed names")
}

/// The density of a fixture as source text.
pub fn density_source(id: CaseId) -> String {
    let d = id.data();
    let mut s = format!("{} + {COMMON}", d.w_term);
    if let Some(m) = d.multiplier {
        s.push_str(" + ");
        s.push_str(m);
    }
    s
}

pub fn load(id: CaseId) -> BoussinesqCase {
    let space = case_space(id);
    let parse = |s: &str| parse_lagrangian(s, &space).expect("reference data parses");
    let density = parse(&density_source(id));
    let problem = LagrangianProblem::new(space.clone(), density, 2).expect("order-2 fixture");
    BoussinesqCase {
        id,
        constraint: id.data().constraint.map(|c| (W, parse(c))),
        expected_pde: parse(id.data().expected_pde),
        problem,
    }
}

/// The displayed v- and w-equations of a fixture.
pub fn displayed_equations(id: CaseId) -> [DiffPoly; 2] {
    let space = case_space(id);
    id.data()
        .displayed
        .map(|s| parse_lagrangian(s, &space).expect("reference data parses"))
}

/// Solves `eq = 0` for the field `sigma`, which must enter linearly,
/// undifferentiated and with a constant coefficient.
pub fn solve_linear(eq: &DiffPoly, sigma: usize) -> Result<DiffPoly> {
    let coeff = eq.jet_partial(sigma, &MultiIndex::empty());
    let c = coeff
        .as_coefficient()
        .ok_or_else(|| Error::EliminationFailure(format!("field #{sigma} does not enter with a constant coefficient")))?;
    let rest = eq - &(&coeff * &DiffPoly::field(sigma));
    if rest.mentions_field(sigma) {
        return Err(Error::EliminationFailure(format!(
            "field #{sigma} does not enter linearly and undifferentiated"
        )));
    }
    let inv = c.inverse().expect("nonzero coefficient");
    Ok(-rest.mul_coefficient(&inv))
}

/// Eliminates the auxiliary fields from the v-equation and returns the
/// resulting PDE in `v`, normalized as `−ε_v` after substitution.
///
/// With a multiplier: `gamma` is solved from `ε_w`, substituted into `ε_v`,
/// then `w` is replaced by the solution of `ε_gamma = 0` (the constraint).
/// Without one, `w` is solved from `ε_w`.
pub fn derive_pde(case: &BoussinesqCase) -> Result<DiffPoly> {
    derive_pde_for(&case.problem, case.constraint.is_some())
}

fn derive_pde_for(problem: &LagrangianProblem, constrained: bool) -> Result<DiffPoly> {
    let el = euler_lagrange(problem);
    let mut ev = el[&V].clone();
    if constrained {
        let gamma = solve_linear(&el[&W], GAMMA)?;
        ev = ev.substitute_field(GAMMA, &gamma)?;
        let w = solve_linear(&el[&GAMMA], W)?;
        ev = ev.substitute_field(W, &w)?;
    } else {
        let w = solve_linear(&el[&W], W)?;
        ev = ev.substitute_field(W, &w)?;
    }
    Ok(-ev)
}

/// [`derive_pde`] after adding `divergence` to the density.
pub fn derive_pde_with_divergence(case: &BoussinesqCase, divergence: &DiffPoly) -> Result<DiffPoly> {
    let p = case.problem.with_density(case.problem.density() + divergence)?;
    derive_pde_for(&p, case.constraint.is_some())
}

/// [`derive_pde`] followed by substituting the given parameter values.
pub fn derive_pde_specialized(case: &BoussinesqCase, params: &BTreeMap<String, BigRational>) -> Result<DiffPoly> {
    let space = case.problem.space();
    let mut values = BTreeMap::new();
    for (name, v) in params {
        let p = space
            .param_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        values.insert(p, v.clone());
    }
    derive_pde(case)?.substitute_params(&values)
}

/// Whether `a = c · b` for some nonzero rational `c`.
pub fn equal_up_to_unit(a: &DiffPoly, b: &DiffPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    a.proportionality(b).is_some()
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportItem {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Per-item comparison of a fixture against its reference data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureReport {
    pub case: CaseId,
    pub items: Vec<ReportItem>,
}

impl FixtureReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, name: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

/// Recomputes momenta, the full equivalent and its Euler–Lagrange form and
/// compares them with the reference data of the fixture.
pub fn verify_lepage_fixture(case: &BoussinesqCase) -> Result<FixtureReport> {
    let problem = &case.problem;
    let space = problem.space();
    let n = problem.n();
    let show = |f: &DiffPoly| pretty_print(space, f);
    let parse = |s: &str| parse_lagrangian(s, space).expect("reference data parses");
    let mut items = Vec::new();

    let mom = Momenta::compute(problem);
    for (label, slots, expected) in case.id.data().momenta {
        let expected = parse(expected);
        let mut actual = Vec::new();
        let mut pass = true;
        for &(field, kind, i, j) in slots.iter() {
            let got = if kind == 'f' { mom.f1(field, i) } else { mom.p2(field, i, j) };
            pass &= got == expected;
            actual.push(show(&got));
        }
        actual.dedup();
        items.push(ReportItem {
            name: format!("momentum {label}"),
            expected: show(&expected),
            actual: actual.join(", "),
            pass,
        });
    }

    let rho = lepage_full(problem)?;
    let theta = poincare_cartan(problem)?;
    if let Some(coeff) = case.id.data().lepage_excess {
        let expected = lepage_excess_form(n, &parse(coeff));
        let actual = &rho - &theta;
        items.push(ReportItem {
            name: "rho3 - theta".into(),
            expected: format!("{} w^w ^ w^v_x ^ ds_tx", show(&parse(coeff))),
            actual: describe_form(space, &actual),
            pass: actual == expected,
        });
    }

    let report = rho.exterior_d().contact_component(1).classify_source();
    items.push(ReportItem {
        name: "p1 d rho3 is a source form".into(),
        expected: "true".into(),
        actual: report.is_source.to_string(),
        pass: report.is_source,
    });
    let el = euler_lagrange(problem);
    let matches = el
        .iter()
        .all(|(s, c)| report.components.get(s).cloned().unwrap_or_default() == *c);
    items.push(ReportItem {
        name: "p1 d rho3 = E(lambda)".into(),
        expected: "true".into(),
        actual: matches.to_string(),
        pass: matches,
    });

    let displayed = displayed_equations(case.id);
    for (k, (field, label)) in [(V, "v"), (W, "w")].into_iter().enumerate() {
        let got = report.components.get(&field).cloned().unwrap_or_default();
        items.push(ReportItem {
            name: format!("{label}-equation (up to unit factor)"),
            expected: show(&displayed[k]),
            actual: show(&got),
            pass: equal_up_to_unit(&got, &displayed[k]),
        });
    }
    if let Some((field, expr)) = &case.constraint {
        let got = report.components.get(&GAMMA).cloned().unwrap_or_default();
        let expected = &DiffPoly::field(*field) - expr;
        items.push(ReportItem {
            name: "constraint (up to unit factor)".into(),
            expected: format!("{} = {}", space.field_name(*field), show(expr)),
            actual: show(&got),
            pass: equal_up_to_unit(&got, &expected),
        });
    }

    Ok(FixtureReport { case: case.id, items })
}

/// `c ω^w ∧ ω^v_x ∧ ds_tx`.
pub fn lepage_excess_form(n: usize, c: &DiffPoly) -> JetForm {
    JetForm::omega(n, W, MultiIndex::empty())
        .wedge(&JetForm::omega(n, V, MultiIndex::single(X)))
        .wedge(&JetForm::ds(n, &[T, X]))
        .scale(c)
}

fn describe_form(space: &JetSpace, rho: &JetForm) -> String {
    if rho.is_zero() {
        return "0".into();
    }
    rho.terms()
        .map(|(w, c)| {
            let word: Vec<String> = w
                .iter()
                .map(|b| match b {
                    crate::forms::Basis::Dx(i) => format!("d{}", space.base_name(*i)),
                    crate::forms::Basis::Omega { field, index } => {
                        let mut s = format!("w^{}", space.field_name(*field));
                        if !index.is_empty() {
                            s.push('_');
                            for i in index.entries() {
                                s.push_str(space.base_name(i));
                            }
                        }
                        s
                    }
                })
                .collect();
            format!("({}) {}", pretty_print(space, c), word.join(" ^ "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The identity chain of the worked symmetry example on the unconstrained
/// fixture, for one projectable vector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionChain {
    /// `J Ξ ⌟ (ρ_3 − θ_λ)` computed by the engine.
    pub excess_contraction: JetForm,
    /// `½a ξ^y ω^w∧ω^v_x + ½a[(Ξ^w − w_j ξ^j) ω^v_x − (Ξ^v_x − v_{jx} ξ^j) ω^w] ∧ ds_tx`,
    /// assembled term by term from the prolonged components.
    pub printed: JetForm,
    /// `J Ξ_V ⌟ (θ_λ − λ) + Ξ_H ⌟ λ`.
    pub first_current: JetForm,
    /// `h(J Ξ ⌟ ρ_3)`.
    pub lepage_current: JetForm,
}

impl ObstructionChain {
    /// The printed two-form equals the engine's contraction and the two
    /// currents have the same horizontal differential.
    pub fn holds(&self) -> bool {
        self.excess_contraction == self.printed
            && self.first_current.horizontal_d() == self.lepage_current.horizontal_d()
    }
}

pub fn obstruction_chain(field: &ProjVectorField) -> Result<ObstructionChain> {
    let case = load(CaseId::L4Unconstrained);
    let problem = &case.problem;
    let n = problem.n();
    let rho = lepage_full(problem)?;
    let theta = poincare_cartan(problem)?;
    let jx = prolong(field, 2);

    let excess_contraction = (&rho - &theta).interior_product(&jx.frame_vector())?;

    let half_a = DiffPoly::param(0).scale(&rat(1, 2));
    let xi = field.xi();
    let comp = |s: usize, idx: &[usize]| {
        jx.component(s, &MultiIndex::from_indices(idx))
            .cloned()
            .expect("prolonged to order 2")
    };
    let mut vw = comp(W, &[]);
    let mut vvx = comp(V, &[X]);
    for (j, xj) in xi.iter().enumerate().take(n) {
        vw -= &(&DiffPoly::jet(W, MultiIndex::single(j)) * xj);
        vvx -= &(&DiffPoly::jet(V, MultiIndex::from_indices(&[j, X])) * xj);
    }
    let omega_w = JetForm::omega(n, W, MultiIndex::empty());
    let omega_vx = JetForm::omega(n, V, MultiIndex::single(X));
    let bracket = &omega_vx.scale(&vw) - &omega_w.scale(&vvx);
    let printed = &omega_w.wedge(&omega_vx).scale(&(&half_a * &xi[Y]))
        + &bracket.wedge(&JetForm::ds(n, &[T, X])).scale(&half_a);

    let first_current = first_variation(problem, field)?.current;
    let lepage_current = rho.interior_product(&jx.frame_vector())?.horizontal_part();
    Ok(ObstructionChain {
        excess_contraction,
        printed,
        first_current,
        lepage_current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(id: CaseId, s: &str) -> DiffPoly {
        parse_lagrangian(s, &case_space(id)).unwrap()
    }

    #[test]
    fn case_ids_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.as_str().parse::<CaseId>().unwrap(), id);
        }
        assert!("L5".parse::<CaseId>().is_err());
    }

    #[test]
    fn fixtures_have_order_two() {
        for id in CaseId::ALL {
            let c = load(id);
            assert_eq!(c.problem.order(), 2);
            assert_eq!(c.constraint.is_some(), c.problem.space().m() == 3);
        }
    }

    #[test]
    fn solve_linear_rejects_nonlinear_equations() {
        let id = CaseId::L1Constrained;
        assert!(solve_linear(&parse(id, "gamma^2 + v"), GAMMA).is_err());
        assert!(solve_linear(&parse(id, "gamma_t + v"), GAMMA).is_err());
        assert!(solve_linear(&parse(id, "v*gamma + v"), GAMMA).is_err());
        assert_eq!(solve_linear(&parse(id, "2*w - a*v_txx"), W).unwrap(), parse(id, "1/2*a*v_txx"));
    }

    // Independent check: substitute the constraint into the density first
    // (w := v_t and gamma drops out), then take the single E-L expression.
    fn reduced_density_pde(id: CaseId) -> DiffPoly {
        let case = load(id);
        let (_, w) = case.constraint.clone().unwrap();
        let reduced = case
            .problem
            .density()
            .substitute_field(GAMMA, &DiffPoly::zero())
            .unwrap()
            .substitute_field(W, &w)
            .unwrap();
        let space = case.problem.space().clone();
        let p = LagrangianProblem::from_density(space, reduced).unwrap();
        euler_lagrange(&p)[&V].clone()
    }

    #[test]
    fn constrained_pdes_match_the_reduced_lagrangian() {
        for id in [CaseId::L1Constrained, CaseId::L2HalfConstraint, CaseId::L3PlusConstraint] {
            let derived = derive_pde(&load(id)).unwrap();
            assert!(equal_up_to_unit(&derived, &reduced_density_pde(id)), "{id}");
        }
    }

    #[test]
    fn derived_pdes() {
        let frozen = [
            (CaseId::L1Constrained, "v_xx + 2*v_x*v_xx - a*v_ttxx + b*v_xxxx + beta*v_yy + 2*v_tt"),
            (CaseId::L2HalfConstraint, "v_xx + 2*v_x*v_xx + b*v_xxxx + beta*v_yy + 1/2*v_tt"),
            (CaseId::L3PlusConstraint, "v_xx + 2*v_x*v_xx + 3*a*v_ttxx + b*v_xxxx + beta*v_yy + v_tt"),
            (
                CaseId::L4Unconstrained,
                "v_xx + 2*v_x*v_xx - 1/2*a^2*v_ttxxxx + b*v_xxxx + beta*v_yy + a*v_ttxx",
            ),
        ];
        for (id, src) in frozen {
            let derived = derive_pde(&load(id)).unwrap();
            assert_eq!(derived, parse(id, src), "{id}");
        }
    }

    #[test]
    fn reference_mismatches_are_detected() {
        // Cases whose reference PDE differs from the derivation.
        for id in [CaseId::L1Constrained, CaseId::L2HalfConstraint, CaseId::L3PlusConstraint] {
            let c = load(id);
            assert!(!equal_up_to_unit(&derive_pde(&c).unwrap(), &c.expected_pde), "{id}");
        }
        let c = load(CaseId::L4Unconstrained);
        assert!(equal_up_to_unit(&derive_pde(&c).unwrap(), &c.expected_pde));
    }

    #[test]
    fn kp_reduction() {
        let c = load(CaseId::L4Unconstrained);
        let params = BTreeMap::from([("a".to_string(), rat(0, 1))]);
        let got = derive_pde_specialized(&c, &params).unwrap();
        assert_eq!(got, parse(c.id, "v_xx + 2*v_x*v_xx + b*v_xxxx + beta*v_yy"));
    }

    #[test]
    fn specialization_rejects_unknown_params() {
        let c = load(CaseId::L4Unconstrained);
        let params = BTreeMap::from([("q".to_string(), rat(0, 1))]);
        assert!(derive_pde_specialized(&c, &params).is_err());
    }

    #[test]
    fn fixture_reports() {
        for id in CaseId::ALL {
            let report = verify_lepage_fixture(&load(id)).unwrap();
            for item in &report.items {
                assert!(item.pass, "{id}: {item:?}");
            }
        }
    }

    #[test]
    fn obstruction_chain_for_a_generic_field() {
        let space = case_space(CaseId::L4Unconstrained);
        let p = |s: &str| parse_lagrangian(s, &space).unwrap();
        let f = ProjVectorField::new(
            &space,
            vec![p("t*x"), p("y^2 + 1"), p("x - 2*t")],
            vec![p("v*y + w*t"), p("x*w - v")],
        )
        .unwrap();
        let chain = obstruction_chain(&f).unwrap();
        assert!(chain.holds());
        assert!(chain.excess_contraction.horizontal_part().is_zero());
    }
}
