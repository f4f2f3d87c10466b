//! Random generators and a floating-point oracle shared by the integration
//! tests (and by the acceptance target of the command-line crate).

#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use jetvar::forms::{Basis, FrameVector, JetForm};
use jetvar::kernel::{rat, DiffPoly, JetSpace, MultiIndex, Var};
use jetvar::symmetry::ProjVectorField;
use jetvar::variational::{euler_lagrange, LagrangianProblem};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(t, x, y)`, fields `v, w`, parameters `a, b`.
pub fn space(order: usize) -> JetSpace {
    JetSpace::new(&["t", "x", "y"], &["v", "w"], &["a", "b"], order).unwrap()
}

pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-6..=6);
    }
    rat(n, rng.gen_range(1..=4))
}

/// All jet coordinates of order at most `order`.
pub fn jet_coordinates(space: &JetSpace, order: usize) -> Vec<(usize, MultiIndex)> {
    let mut out = Vec::new();
    for sigma in 0..space.m() {
        for k in 0..=order {
            for j in MultiIndex::all_of_order(space.n(), k) {
                out.push((sigma, j));
            }
        }
    }
    out
}

/// A random differential polynomial of jet order at most `order`.
///
/// With `explicit` the terms may also contain base coordinates; with
/// `params` they may carry parameter factors.
pub fn random_poly(
    rng: &mut impl Rng,
    space: &JetSpace,
    order: usize,
    terms: usize,
    max_degree: usize,
    explicit: bool,
    params: bool,
) -> DiffPoly {
    let jets = jet_coordinates(space, order);
    let mut out = DiffPoly::zero();
    for _ in 0..terms {
        let mut t = DiffPoly::constant(random_rational(rng));
        for _ in 0..rng.gen_range(0..=max_degree) {
            let factor = if explicit && rng.gen_bool(0.25) {
                DiffPoly::base(rng.gen_range(0..space.n()))
            } else {
                let (s, j) = jets.choose(rng).unwrap().clone();
                DiffPoly::jet(s, j)
            };
            t = &t * &factor;
        }
        if params && !space.param_names().is_empty() && rng.gen_bool(0.3) {
            t = &t * &DiffPoly::param(rng.gen_range(0..space.param_names().len()));
        }
        out += &t;
    }
    out
}

/// A random form of the given degree with coefficients of jet order at most
/// `order` and contact factors `ω^σ_J` with `|J| ≤ order`.
pub fn random_form(rng: &mut impl Rng, space: &JetSpace, degree: usize, order: usize, terms: usize) -> JetForm {
    let n = space.n();
    let mut pool: Vec<Basis> = (0..n).map(Basis::Dx).collect();
    for (s, j) in jet_coordinates(space, order) {
        pool.push(Basis::omega(s, j));
    }
    let mut out = JetForm::zero(n, degree);
    for _ in 0..terms {
        let word: Vec<Basis> = pool.choose_multiple(rng, degree).cloned().collect();
        let f = random_poly(rng, space, order, 2, 2, true, true);
        out = &out + &JetForm::from_word(n, f, word);
    }
    out
}

/// `Σ_i d_i P^i` with each `P^i` of jet order at most `order − 1`, so the
/// result has order at most `order`.
pub fn random_divergence(rng: &mut impl Rng, space: &JetSpace, order: usize) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for i in 0..space.n() {
        let p = random_poly(rng, space, order.saturating_sub(1), 2, 2, false, true);
        out += &p.total_derivative(i);
    }
    out
}

/// A first-order null Lagrangian that is not identically zero.
pub fn random_first_order_null(rng: &mut impl Rng, space: &JetSpace) -> DiffPoly {
    loop {
        let d = random_divergence(rng, space, 1);
        if !d.is_zero() {
            return d;
        }
    }
}

/// A frame vector with random components up to vertical order `order`.
pub fn random_frame_vector(rng: &mut impl Rng, space: &JetSpace, order: usize) -> FrameVector {
    let horizontal = (0..space.n())
        .map(|_| random_poly(rng, space, 1, 1, 1, true, false))
        .collect();
    let mut vertical = BTreeMap::new();
    for key in jet_coordinates(space, order) {
        if rng.gen_bool(0.6) {
            vertical.insert(key, random_poly(rng, space, 1, 1, 1, true, false));
        }
    }
    FrameVector {
        horizontal,
        vertical,
        order: usize::MAX,
    }
}

/// `ξ^i(x) ∂_i + Ξ^σ(x, y) ∂_σ` with low-degree polynomial components.
pub fn random_projectable_field(rng: &mut impl Rng, space: &JetSpace) -> ProjVectorField {
    let xi = (0..space.n())
        .map(|_| {
            let mut p = DiffPoly::zero();
            for _ in 0..2 {
                let mut t = DiffPoly::constant(random_rational(rng));
                for _ in 0..rng.gen_range(0..=2) {
                    t = &t * &DiffPoly::base(rng.gen_range(0..space.n()));
                }
                p += &t;
            }
            p
        })
        .collect();
    let big_xi = (0..space.m())
        .map(|_| {
            let mut p = DiffPoly::zero();
            for _ in 0..2 {
                let mut t = DiffPoly::constant(random_rational(rng));
                for _ in 0..rng.gen_range(0..=2) {
                    t = &t * &if rng.gen_bool(0.5) {
                        DiffPoly::base(rng.gen_range(0..space.n()))
                    } else {
                        DiffPoly::field(rng.gen_range(0..space.m()))
                    };
                }
                p += &t;
            }
            p
        })
        .collect();
    ProjVectorField::new(space, xi, big_xi).unwrap()
}

/// A polynomial in the base coordinates of degree at most `degree`.
pub fn random_base_poly(rng: &mut impl Rng, n: usize, degree: usize, terms: usize) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for _ in 0..terms {
        let mut t = DiffPoly::constant(random_rational(rng));
        for _ in 0..rng.gen_range(0..=degree) {
            t = &t * &DiffPoly::base(rng.gen_range(0..n));
        }
        out += &t;
    }
    out
}

/// Floating-point evaluation of jets of a polynomial section.
pub struct NumericSection {
    components: Vec<DiffPoly>,
    derivatives: RefCell<HashMap<(usize, MultiIndex), DiffPoly>>,
}

impl NumericSection {
    pub fn new(components: Vec<DiffPoly>) -> Self {
        NumericSection {
            components,
            derivatives: RefCell::new(HashMap::new()),
        }
    }

    pub fn jet(&self, field: usize, index: &MultiIndex, x: &[f64]) -> f64 {
        let mut cache = self.derivatives.borrow_mut();
        let d = cache
            .entry((field, index.clone()))
            .or_insert_with(|| self.components[field].total_derivative_multi(index));
        eval_base(d, x)
    }
}

pub fn eval_base(f: &DiffPoly, x: &[f64]) -> f64 {
    f.eval_f64(
        &|v| match v {
            Var::Base(i) => x[*i],
            Var::Jet { .. } => panic!("base-only polynomial expected"),
        },
        &|_| panic!("no parameters expected"),
    )
}

/// `f` evaluated on the prolongation of `section` at `x`.
pub fn eval_on_section(f: &DiffPoly, section: &NumericSection, x: &[f64], params: &[f64]) -> f64 {
    f.eval_f64(
        &|v| match v {
            Var::Base(i) => x[*i],
            Var::Jet { field, index } => section.jet(*field, index, x),
        },
        &|p| params[p],
    )
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Tensor-product quadrature nodes `(point, weight)` on the box `[lo, hi]`.
pub fn box_quadrature(lo: &[f64], hi: &[f64], per_dim: usize) -> Vec<(Vec<f64>, f64)> {
    let rule = gauss_legendre(per_dim);
    let mut nodes = vec![(Vec::new(), 1.0)];
    for d in 0..lo.len() {
        let (mid, half) = ((lo[d] + hi[d]) / 2.0, (hi[d] - lo[d]) / 2.0);
        let mut next = Vec::new();
        for (p, w) in &nodes {
            for (x, wx) in &rule {
                let mut q: Vec<f64> = p.clone();
                q.push(mid + half * x);
                next.push((q, w * wx * half));
            }
        }
        nodes = next;
    }
    nodes
}

/// Result of one finite-difference check of the variational derivative.
#[derive(Clone, Debug)]
pub struct VariationCheck {
    pub field: usize,
    /// `d/dε S[u + ε η e_σ]` by a five-point central difference.
    pub finite_difference: f64,
    /// `∫ ε_σ(j u) η` by quadrature.
    pub symbolic: f64,
    /// `∫ |L(j u)|`; rounding in the difference quotient is proportional
    /// to it, so it floors the denominator of the relative error.
    pub action_scale: f64,
}

impl VariationCheck {
    pub fn relative_error(&self) -> f64 {
        let scale = self
            .finite_difference
            .abs()
            .max(self.symbolic.abs())
            .max(1e-4 * self.action_scale)
            .max(1e-300);
        (self.finite_difference - self.symbolic).abs() / scale
    }
}

/// Compares the symbolic Euler–Lagrange expressions of `problem` with
/// finite-difference variations of the action on the box of half-width
/// 0.5 around `center`, along the bump `η = Π (4(x−lo)(hi−x))^3` (peak 1).
///
/// Sections are polynomial, so the quadrature (10 nodes per dimension) is
/// exact up to rounding for the fixtures at hand.
pub fn variational_derivative_check(
    problem: &LagrangianProblem,
    section: &[DiffPoly],
    center: &[f64],
    params: &[f64],
) -> Vec<VariationCheck> {
    let n = problem.n();
    let lo: Vec<f64> = center.iter().map(|c| c - 0.5).collect();
    let hi: Vec<f64> = center.iter().map(|c| c + 0.5).collect();
    let bump = |x: &[f64]| -> f64 { (0..n).map(|i| (4.0 * (x[i] - lo[i]) * (hi[i] - x[i])).powi(3)).product() };
    // η as a polynomial in s = x − center, for its derivatives; expanding
    // around the center keeps the monomial coefficients small
    let mut eta = DiffPoly::one();
    for i in 0..n {
        let s = DiffPoly::base(i);
        eta = &eta * &(&DiffPoly::one() - &(&s * &s).scale(&rat(4, 1))).pow(3);
    }
    let eta_section = NumericSection::new(vec![eta]);
    let shifted = |x: &[f64]| -> Vec<f64> { x.iter().zip(center).map(|(a, c)| a - c).collect() };
    let base = NumericSection::new(section.to_vec());
    let el = euler_lagrange(problem);
    let nodes = box_quadrature(&lo, &hi, 10);
    let density = problem.density();

    let action_scale: f64 = nodes
        .iter()
        .map(|(x, w)| w * eval_on_section(density, &base, x, params).abs())
        .sum();
    let mut out = Vec::new();
    for field in 0..problem.space().m() {
        let action = |eps: f64| -> f64 {
            nodes
                .iter()
                .map(|(x, w)| {
                    let value = density.eval_f64(
                        &|v| match v {
                            Var::Base(i) => x[*i],
                            Var::Jet { field: s, index } => {
                                let mut y = base.jet(*s, index, x);
                                if *s == field {
                                    y += eps * eta_section.jet(0, index, &shifted(x));
                                }
                                y
                            }
                        },
                        &|p| params[p],
                    );
                    w * value
                })
                .sum()
        };
        let h = 1e-2;
        let finite_difference =
            (-action(2.0 * h) + 8.0 * action(h) - 8.0 * action(-h) + action(-2.0 * h)) / (12.0 * h);
        let symbolic = nodes
            .iter()
            .map(|(x, w)| w * eval_on_section(&el[&field], &base, x, params) * bump(x))
            .sum();
        out.push(VariationCheck {
            field,
            finite_difference,
            symbolic,
            action_scale,
        });
    }
    out
}

/// `∂/∂x^i (f ∘ j u)` at `x` by Richardson-extrapolated central differences.
pub fn numeric_total_derivative(f: &DiffPoly, section: &NumericSection, x: &[f64], i: usize, params: &[f64]) -> f64 {
    let g = |h: f64| {
        let mut p = x.to_vec();
        p[i] += h;
        eval_on_section(f, section, &p, params)
    };
    let d = |h: f64| (g(h) - g(-h)) / (2.0 * h);
    let h = 1e-3;
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}
