//! Acceptance checks. Each check recomputes one criterion from scratch and
//! returns a verdict with enough detail to diagnose a failure.

#[path = "../../core/tests/support/mod.rs"]
pub mod support;

use std::collections::BTreeMap;
use std::path::PathBuf;

use jetvar::dsl::{parse_lagrangian, pretty_print};
use jetvar::forms::JetForm;
use jetvar::kernel::{rat, DiffPoly, JetSpace};
use jetvar::models::{self, lepage_excess_form, load, verify_lepage_fixture, BoussinesqCase, CaseId, GAMMA, T, V, W, X, Y};
use jetvar::symmetry::{
    divergence_potential, first_variation, improved_current, lie_derivative, required_order, ProjVectorField,
};
use jetvar::variational::{euler_lagrange_density, lepage_full, poincare_cartan, LagrangianProblem, Momenta};
use jetvar::Error;
use rand::Rng;

use support::*;

/// Relative tolerance of the floating-point cross-check.
pub const NUMERIC_TOLERANCE: f64 = 1e-6;
/// Randomized cases per algebraic identity.
pub const PROPERTY_CASES: u64 = 100;
/// Random null Lagrangians whose full equivalent must be closed.
pub const NULL_LAGRANGIANS: u64 = 10;
/// Random expressions for the parser round trip.
pub const ROUND_TRIPS: u64 = 200;

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    /// One line per failed (or notable) sub-check.
    pub details: Vec<String>,
}

impl Verdict {
    fn new(id: u8, title: &'static str) -> Self {
        Verdict {
            id,
            title,
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.pass = false;
            self.details.push(what());
        }
    }

    fn note(&mut self, what: String) {
        self.details.push(what);
    }

    pub fn line(&self) -> String {
        format!(
            "AC{:<2} {} {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title
        )
    }
}

fn show(case: &BoussinesqCase, f: &DiffPoly) -> String {
    pretty_print(case.problem.space(), f)
}

fn fixture_items(v: &mut Verdict, ids: &[CaseId], keep: impl Fn(&str) -> bool) -> usize {
    let mut seen = 0;
    for &id in ids {
        let report = match verify_lepage_fixture(&load(id)) {
            Ok(r) => r,
            Err(e) => {
                v.check(false, || format!("{id}: {e}"));
                continue;
            }
        };
        for item in report.items.iter().filter(|i| keep(&i.name)) {
            seen += 1;
            v.check(item.pass, || {
                format!("{id} / {}: expected {}, got {}", item.name, item.expected, item.actual)
            });
        }
    }
    seen
}

pub fn momenta_golden() -> Verdict {
    let mut v = Verdict::new(1, "momenta of the first constrained fixture");
    let seen = fixture_items(&mut v, &[CaseId::L1Constrained], |n| n.starts_with("momentum "));
    v.check(seen == 10, || format!("{seen} momentum items, expected 10"));
    // the multiplier carries no momenta
    let case = load(CaseId::L1Constrained);
    let m = Momenta::compute(&case.problem);
    for i in [T, X, Y] {
        v.check(m.f1(GAMMA, i).is_zero(), || format!("f^{i}_gamma is nonzero"));
    }
    v
}

pub fn lepage_golden() -> Verdict {
    let mut v = Verdict::new(2, "full equivalent minus Cartan form is a/2 w^w ^ w^v_x ^ ds_tx");
    for id in [CaseId::L1Constrained, CaseId::L4Unconstrained] {
        let case = load(id);
        let half_a = DiffPoly::param(0).scale(&rat(1, 2));
        let want = lepage_excess_form(case.problem.n(), &half_a);
        match (lepage_full(&case.problem), poincare_cartan(&case.problem)) {
            (Ok(rho), Ok(theta)) => {
                let got = &rho - &theta;
                v.check(got == want, || format!("{id}: difference {got:?}"));
            }
            _ => v.check(false, || format!("{id}: forms not computable")),
        }
    }
    fixture_items(&mut v, &[CaseId::L1Constrained, CaseId::L4Unconstrained], |n| n == "rho3 - theta");
    v
}

pub fn euler_lagrange_golden() -> Verdict {
    let mut v = Verdict::new(3, "p1 d(full equivalent) matches the displayed field equations");
    fixture_items(&mut v, &CaseId::ALL, |n| {
        n.starts_with("p1 d rho3") || n.ends_with("(up to unit factor)")
    });
    for id in CaseId::ALL {
        let case = load(id);
        let Ok(rho) = lepage_full(&case.problem) else { continue };
        let report = rho.exterior_d().contact_component(1).classify_source();
        let displayed = models::displayed_equations(id);
        for (k, name) in [(V, "v"), (W, "w")] {
            let got = report.components.get(&k).cloned().unwrap_or_default();
            if let Some(c) = got.proportionality(&displayed[k]) {
                if c != rat(1, 1) {
                    v.note(format!("{id}: E_{name} = {c} x displayed"));
                }
            }
        }
    }
    v
}

pub fn pde_derivations() -> Verdict {
    let mut v = Verdict::new(4, "eliminated equations equal the reference PDEs up to a unit factor");
    for id in CaseId::ALL {
        let case = load(id);
        let derived = match models::derive_pde(&case) {
            Ok(d) => d,
            Err(e) => {
                v.check(false, || format!("{id}: {e}"));
                continue;
            }
        };
        v.check(models::equal_up_to_unit(&derived, &case.expected_pde), || {
            format!(
                "{id}: derived {} = 0, reference {} = 0, difference {}",
                show(&case, &derived),
                show(&case, &case.expected_pde),
                show(&case, &(&derived - &case.expected_pde))
            )
        });
    }
    let case = load(CaseId::L4Unconstrained);
    let params = BTreeMap::from([("a".to_string(), rat(0, 1))]);
    let got = models::derive_pde_specialized(&case, &params).unwrap();
    let want = parse_lagrangian("v_xx + 2*v_x*v_xx + b*v_xxxx + beta*v_yy", case.problem.space()).unwrap();
    v.check(models::equal_up_to_unit(&got, &want), || {
        format!("a = 0: derived {}", show(&case, &got))
    });
    v
}

pub fn property_suite() -> Verdict {
    let mut v = Verdict::new(5, "bicomplex identities on random forms and Lagrangians");
    let s3 = space(3);
    let s4 = space(4);
    for seed in 0..PROPERTY_CASES {
        let mut r = rng(seed);
        let degree = r.gen_range(0..=4);
        let order = r.gen_range(0..=2);
        let f = random_form(&mut r, &s3, degree, order, 3);
        v.check(f.exterior_d().exterior_d().is_zero(), || format!("d^2 != 0 (seed {seed})"));
        v.check(f.horizontal_d().horizontal_d().is_zero(), || format!("d_H^2 != 0 (seed {seed})"));
        v.check((&f.horizontal_d().vertical_d() + &f.vertical_d().horizontal_d()).is_zero(), || {
            format!("d_H d_V + d_V d_H != 0 (seed {seed})")
        });
        v.check(f.vertical_d().vertical_d().is_zero(), || format!("d_V^2 != 0 (seed {seed})"));
        v.check(&f.horizontal_d() + &f.vertical_d() == f.exterior_d(), || {
            format!("d_H + d_V != d (seed {seed})")
        });
        let sum = (0..=f.degree()).fold(JetForm::zero(f.n(), f.degree()), |acc, k| &acc + &f.contact_component(k));
        v.check(sum == f, || format!("sum of contact components differs (seed {seed})"));

        let l = random_poly(&mut r, &s4, 2, 4, 3, true, true);
        let div = random_divergence(&mut r, &s4, 2);
        v.check(
            euler_lagrange_density(s4.m(), &(&l + &div)) == euler_lagrange_density(s4.m(), &l),
            || format!("E(L + div) != E(L) (seed {seed})"),
        );

        let degree = r.gen_range(1..=4);
        let rho = random_form(&mut r, &s3, degree, 1, 3);
        let field = random_projectable_field(&mut r, &s3);
        let order = required_order(&rho);
        let lie = lie_derivative(&rho, &field, order).unwrap();
        for k in 0..=degree {
            let rhs = lie_derivative(&rho.contact_component(k), &field, order).unwrap();
            v.check(lie.contact_component(k) == rhs, || format!("p_{k} L != L p_{k} (seed {seed})"));
        }

        let (p, q) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let alpha = random_form(&mut r, &s3, p, 1, 2);
        let beta = random_form(&mut r, &s3, q, 1, 2);
        let x = random_frame_vector(&mut r, &s3, 1);
        let lhs = alpha.wedge(&beta).interior_product(&x).unwrap();
        let first = alpha.interior_product(&x).unwrap().wedge(&beta);
        let second = alpha.wedge(&beta.interior_product(&x).unwrap());
        let rhs = if p % 2 == 0 { &first + &second } else { &first - &second };
        v.check(lhs == rhs, || format!("interior product antiderivation (seed {seed})"));
    }
    v
}

pub fn null_lagrangian_closure() -> Verdict {
    let mut v = Verdict::new(6, "full equivalents of first-order null Lagrangians are closed");
    let s = space(2);
    let mut r = rng(2024);
    for k in 0..NULL_LAGRANGIANS {
        let l = random_first_order_null(&mut r, &s);
        let p = LagrangianProblem::new(s.clone(), l.clone(), 1).unwrap();
        let d = lepage_full(&p).unwrap().exterior_d();
        v.check(d.is_zero(), || format!("#{k}: d rho != 0 for L = {}", pretty_print(&s, &l)));
    }
    v
}

pub fn numeric_oracle() -> Verdict {
    let mut v = Verdict::new(7, "Euler-Lagrange expressions agree with finite-difference variations");
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for id in CaseId::ALL {
        let case = load(id);
        let p = &case.problem;
        for _ in 0..3 {
            let section: Vec<_> = (0..p.space().m()).map(|_| random_base_poly(&mut r, 3, 4, 10)).collect();
            let center: Vec<f64> = (0..3).map(|_| r.gen_range(-8..=8) as f64 / 8.0).collect();
            let params: Vec<f64> = (0..3).map(|_| r.gen_range(0.5..2.0)).collect();
            for c in variational_derivative_check(p, &section, &center, &params) {
                let e = c.relative_error();
                worst = worst.max(e);
                v.check(e < NUMERIC_TOLERANCE, || format!("{id}: {c:?}"));
            }
        }
    }
    v.note(format!("largest relative error {worst:.2e}"));
    v
}

fn canonical_fields(space: &JetSpace) -> Vec<(&'static str, ProjVectorField)> {
    vec![
        ("translate t", ProjVectorField::translation(space, T)),
        ("translate x", ProjVectorField::translation(space, X)),
        ("translate y", ProjVectorField::translation(space, Y)),
        ("shift v", ProjVectorField::field_shift(space, V)),
        ("shift w", ProjVectorField::field_shift(space, W)),
        ("scale", ProjVectorField::base_scaling(space)),
    ]
}

pub fn first_variation_identity() -> Verdict {
    let mut v = Verdict::new(8, "first variation formula and the obstruction two-form");
    for id in CaseId::ALL {
        let case = load(id);
        for (name, field) in canonical_fields(case.problem.space()) {
            let ok = first_variation(&case.problem, &field).map(|fv| fv.holds()).unwrap_or(false);
            v.check(ok, || format!("{id} / {name}: first variation fails"));
        }
    }
    let case = load(CaseId::L4Unconstrained);
    for (name, field) in canonical_fields(case.problem.space()) {
        match models::obstruction_chain(&field) {
            Ok(chain) => v.check(chain.holds(), || format!("{name}: obstruction chain fails")),
            Err(e) => v.check(false, || format!("{name}: {e}")),
        }
    }
    v
}

pub fn divergence_recombination() -> Verdict {
    let mut v = Verdict::new(9, "divergence potentials recombine exactly; failures raise");
    let s = space(4);
    let n = s.n();
    let mut r = rng(9);
    for k in 0..20 {
        let div = random_divergence(&mut r, &s, 3);
        let omega = JetForm::horizontal(n, div, &[]);
        match divergence_potential(&omega) {
            Ok(psi) => v.check(psi.horizontal_d() == omega, || format!("#{k}: d_H psi != input")),
            Err(e) => v.check(false, || format!("#{k}: {e}")),
        }
    }
    let constant = JetForm::horizontal(n, DiffPoly::constant(rat(3, 2)), &[]);
    let ok = divergence_potential(&constant).map(|psi| psi.horizontal_d() == constant).unwrap_or(false);
    v.check(ok, || "constant density does not recombine".into());
    let p = |src: &str| parse_lagrangian(src, &s).unwrap();
    let not_null = JetForm::horizontal(n, p("v_x^2 + w*v_t"), &[]);
    v.check(matches!(divergence_potential(&not_null), Err(Error::NotNull)), || {
        "non-null density accepted".into()
    });
    let explicit = JetForm::horizontal(n, p("t*v_t + v"), &[]);
    v.check(
        matches!(divergence_potential(&explicit), Err(Error::ReconstructionFailure(_))),
        || "explicit base dependence accepted".into(),
    );
    // potentials returned inside Noether currents
    let case = load(CaseId::L4Unconstrained);
    let space = case.problem.space();
    let galilei = ProjVectorField::new(
        space,
        vec![DiffPoly::zero(); 3],
        vec![parse_lagrangian("y", space).unwrap(), DiffPoly::zero()],
    )
    .unwrap();
    let ok = improved_current(&case.problem, &galilei)
        .map(|ic| !ic.psi.is_zero() && ic.psi.horizontal_d() == ic.obstruction)
        .unwrap_or(false);
    v.check(ok, || "Noether potential does not recombine".into());
    v
}

pub fn snapshot_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/tests/snapshots")
}

pub fn cli_end_to_end() -> Verdict {
    let mut v = Verdict::new(10, "derive --case exits 0 for every fixture; stable JSON; parser round trip");
    for id in CaseId::ALL {
        let args = ["jetvar", "derive", "--case", id.as_str(), "--format", "json"];
        let first = jetvar_cli::execute(args);
        let second = jetvar_cli::execute(args);
        v.check(first.exit_code == 0, || {
            format!("{id}: exit code {} ({})", first.exit_code, first.stderr.trim())
        });
        v.check(first.stdout == second.stdout, || format!("{id}: JSON differs between runs"));
        let snapshot = std::fs::read_to_string(snapshot_dir().join(format!("derive_{id}.json"))).unwrap_or_default();
        v.check(first.stdout == snapshot, || format!("{id}: JSON differs from the snapshot"));
        let schema = serde_json::from_str::<serde_json::Value>(&first.stdout)
            .map(|j| j["schema"] == 1)
            .unwrap_or(false);
        v.check(schema, || format!("{id}: missing \"schema\": 1"));
    }
    let s = space(4);
    let mut r = rng(10);
    for k in 0..ROUND_TRIPS {
        let terms = r.gen_range(1..=6);
        let f = random_poly(&mut r, &s, 4, terms, 4, true, true);
        let back = parse_lagrangian(&pretty_print(&s, &f), &s);
        v.check(back.as_ref().ok() == Some(&f), || format!("round trip #{k}: {}", pretty_print(&s, &f)));
    }
    v
}
