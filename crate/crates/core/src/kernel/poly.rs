//! Differential polynomials: polynomials in base coordinates `x^i` and jet
//! coordinates `y^σ_J` whose coefficients are exact rationals times Laurent
//! monomials in the symbolic parameters.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::MultiIndex;
use crate::error::{Error, Result};

/// A coordinate function on `J^s Y`.
///
/// The derived order (`Base` before `Jet`, jets by field, then `|J|`, then
/// `J`) is the canonical variable order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Base(usize),
    Jet { field: usize, index: MultiIndex },
}

impl Var {
    pub fn jet(field: usize, index: MultiIndex) -> Var {
        Var::Jet { field, index }
    }

    /// Jet order of the coordinate (0 for base coordinates and fields).
    pub fn order(&self) -> usize {
        match self {
            Var::Base(_) => 0,
            Var::Jet { index, .. } => index.len(),
        }
    }
}

/// Exact coefficient: a nonzero rational times a monomial in the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub rational: BigRational,
    /// `(param, exponent)` pairs sorted by param, no zero exponents.
    pub params: Vec<(usize, i32)>,
}

impl Coefficient {
    pub fn rational(r: BigRational) -> Self {
        Coefficient {
            rational: r,
            params: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Coefficient> {
        if self.rational.is_zero() {
            return None;
        }
        Some(Coefficient {
            rational: self.rational.recip(),
            params: self.params.iter().map(|&(p, e)| (p, -e)).collect(),
        })
    }
}

/// A monomial: product of coordinate powers and parameter powers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    vars: Vec<(Var, u32)>,
    params: Vec<(usize, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            vars: vec![(v, 1)],
            params: Vec::new(),
        }
    }

    pub fn param(p: usize, exp: i32) -> Self {
        Monomial {
            vars: Vec::new(),
            params: if exp == 0 { Vec::new() } else { vec![(p, exp)] },
        }
    }

    pub fn vars(&self) -> &[(Var, u32)] {
        &self.vars
    }

    pub fn params(&self) -> &[(usize, i32)] {
        &self.params
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Sum of the exponents of jet coordinates.
    pub fn jet_degree(&self) -> u32 {
        self.vars
            .iter()
            .filter(|(v, _)| matches!(v, Var::Jet { .. }))
            .map(|&(_, e)| e)
            .sum()
    }

    /// Total polynomial degree in coordinates (base and jet).
    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent_of(&self, v: &Var) -> u32 {
        self.vars
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|k| self.vars[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            vars: merge(&self.vars, &other.vars, |a, b| Some(a + b)),
            params: merge(&self.params, &other.params, |a, b| {
                let s = a + b;
                (s != 0).then_some(s)
            }),
        }
    }

    /// Divides out one power of `v`. `None` if `v` does not occur.
    fn divide_var(&self, v: &Var) -> Option<Monomial> {
        let k = self.vars.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let mut vars = self.vars.clone();
        if vars[k].1 == 1 {
            vars.remove(k);
        } else {
            vars[k].1 -= 1;
        }
        Some(Monomial {
            vars,
            params: self.params.clone(),
        })
    }

    fn without_params(&self) -> Monomial {
        Monomial {
            vars: self.vars.clone(),
            params: Vec::new(),
        }
    }
}

fn merge<K: Ord + Clone, E: Copy>(
    a: &[(K, E)],
    b: &[(K, E)],
    combine: impl Fn(E, E) -> Option<E>,
) -> Vec<(K, E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                if let Some(e) = combine(a[i].1, b[j].1) {
                    out.push((a[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A differential polynomial in canonical form.
///
/// Zero is the empty map and no stored coefficient is zero, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        DiffPoly::term(c, Monomial::one())
    }

    pub fn integer(n: i64) -> Self {
        DiffPoly::constant(BigRational::from_integer(n.into()))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn from_coefficient(c: &Coefficient) -> Self {
        DiffPoly::term(
            c.rational.clone(),
            Monomial {
                vars: Vec::new(),
                params: c.params.clone(),
            },
        )
    }

    pub fn var(v: Var) -> Self {
        DiffPoly::term(BigRational::one(), Monomial::var(v))
    }

    pub fn base(i: usize) -> Self {
        DiffPoly::var(Var::Base(i))
    }

    pub fn jet(field: usize, index: MultiIndex) -> Self {
        DiffPoly::var(Var::jet(field, index))
    }

    /// The field coordinate `y^σ` itself.
    pub fn field(field: usize) -> Self {
        DiffPoly::jet(field, MultiIndex::empty())
    }

    pub fn param(p: usize) -> Self {
        DiffPoly::term(BigRational::one(), Monomial::param(p, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// True when no coordinate occurs (parameters may).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    /// The coefficient if the polynomial is a single constant term.
    pub fn as_coefficient(&self) -> Option<Coefficient> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        m.is_constant().then(|| Coefficient {
            rational: c.clone(),
            params: m.params.clone(),
        })
    }

    /// The rational value if the polynomial is a parameter-free constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let c = self.as_coefficient()?;
        c.params.is_empty().then_some(c.rational)
    }

    /// Highest jet order `|J|` of any jet coordinate that occurs.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.vars.iter().map(|(v, _)| v.order()))
            .max()
            .unwrap_or(0)
    }

    /// Highest jet order of coordinates of field `sigma`, if it occurs at all.
    pub fn field_order(&self, sigma: usize) -> Option<usize> {
        self.variables()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet { field, index } if field == sigma => Some(index.len()),
                _ => None,
            })
            .max()
    }

    pub fn mentions_field(&self, sigma: usize) -> bool {
        self.field_order(sigma).is_some()
    }

    pub fn has_explicit_base(&self) -> bool {
        self.variables().iter().any(|v| matches!(v, Var::Base(_)))
    }

    /// All coordinates that occur, in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.vars.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Jet coordinates `(σ, J)` that occur, in canonical order.
    pub fn jet_variables(&self) -> Vec<(usize, MultiIndex)> {
        self.variables()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet { field, index } => Some((field, index)),
                Var::Base(_) => None,
            })
            .collect()
    }

    pub fn params_used(&self) -> Vec<usize> {
        let mut ps: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.params.iter().map(|&(p, _)| p))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_coefficient(&self, c: &Coefficient) -> DiffPoly {
        self * &DiffPoly::from_coefficient(c)
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Ordinary partial derivative with respect to one coordinate.
    pub fn partial(&self, v: &Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e == 0 {
                continue;
            }
            let reduced = m.divide_var(v).expect("exponent checked");
            out.add_term(reduced, c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// `∂f/∂y^σ_J` for the canonical coordinate `y^σ_J`.
    pub fn jet_partial(&self, field: usize, index: &MultiIndex) -> DiffPoly {
        self.partial(&Var::jet(field, index.clone()))
    }

    /// Total derivative `d_i = ∂/∂x^i + Σ y^σ_{Ji} ∂/∂y^σ_J`.
    pub fn total_derivative(&self, i: usize) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in &m.vars {
                let lifted = match v {
                    Var::Base(j) if *j == i => None,
                    Var::Base(_) => continue,
                    Var::Jet { field, index } => Some(Var::jet(*field, index.with(i))),
                };
                let mut reduced = m.divide_var(v).expect("factor of m");
                if let Some(w) = lifted {
                    reduced = reduced.mul(&Monomial::var(w));
                }
                out.add_term(reduced, c * BigRational::from_integer((*e).into()));
            }
        }
        out
    }

    /// `d_J f = d_{j_1} ⋯ d_{j_k} f`.
    pub fn total_derivative_multi(&self, index: &MultiIndex) -> DiffPoly {
        index
            .entries()
            .fold(self.clone(), |acc, i| acc.total_derivative(i))
    }

    /// Replaces every `y^σ_J` by `d_J g`.
    pub fn substitute_field(&self, field: usize, g: &DiffPoly) -> Result<DiffPoly> {
        if g.mentions_field(field) {
            return Err(Error::RecursiveSubstitution(format!("#{field}")));
        }
        let mut derivatives: HashMap<MultiIndex, DiffPoly> = HashMap::new();
        derivatives.insert(MultiIndex::empty(), g.clone());
        fn derivative<'a>(
            cache: &'a mut HashMap<MultiIndex, DiffPoly>,
            j: &MultiIndex,
        ) -> &'a DiffPoly {
            if !cache.contains_key(j) {
                let (parent, i) = j.split_last().expect("empty index is seeded");
                let d = derivative(cache, &parent).total_derivative(i);
                cache.insert(j.clone(), d);
            }
            &cache[j]
        }

        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = Monomial {
                vars: Vec::new(),
                params: m.params.clone(),
            };
            let mut factor = DiffPoly::one();
            for (v, e) in &m.vars {
                match v {
                    Var::Jet { field: f, index } if *f == field => {
                        factor = &factor * &derivative(&mut derivatives, index).pow(*e);
                    }
                    _ => rest.vars.push((v.clone(), *e)),
                }
            }
            out += &(&factor * &DiffPoly::term(c.clone(), rest));
        }
        Ok(out)
    }

    /// Replaces parameters by rational values; unassigned parameters stay symbolic.
    pub fn substitute_params(&self, values: &BTreeMap<usize, BigRational>) -> Result<DiffPoly> {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut params = Vec::new();
            for &(p, e) in &m.params {
                match values.get(&p) {
                    Some(val) => {
                        if val.is_zero() && e < 0 {
                            return Err(Error::DivisionByZero(format!("parameter #{p}")));
                        }
                        c *= pow_rational(val, e);
                    }
                    None => params.push((p, e)),
                }
            }
            out.add_term(
                Monomial {
                    vars: m.vars.clone(),
                    params,
                },
                c,
            );
        }
        Ok(out)
    }

    /// Splits into components homogeneous in the jet coordinates, keyed by degree.
    pub fn split_by_jet_degree(&self) -> BTreeMap<u32, DiffPoly> {
        let mut out: BTreeMap<u32, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.jet_degree())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Collects terms by their coordinate part; each value is the (parameter-
    /// dependent) coefficient polynomial.
    pub fn coefficients_by_vars(&self) -> BTreeMap<Monomial, DiffPoly> {
        let mut out: BTreeMap<Monomial, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.without_params()).or_default().add_term(
                Monomial {
                    vars: Vec::new(),
                    params: m.params.clone(),
                },
                c.clone(),
            );
        }
        out
    }

    /// If `other = c · self` for a nonzero rational `c`, returns `c`.
    pub fn proportionality(&self, other: &DiffPoly) -> Option<BigRational> {
        let (m, a) = self.terms.iter().next()?;
        let b = other.terms.get(m)?;
        let c = b / a;
        (self.scale(&c) == *other).then_some(c)
    }

    /// Evaluates numerically. `var_value` supplies coordinate values and
    /// `param_value` parameter values.
    pub fn eval_f64(&self, var_value: &impl Fn(&Var) -> f64, param_value: &impl Fn(usize) -> f64) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, e) in &m.vars {
                t *= var_value(v).powi(*e as i32);
            }
            for &(p, e) in &m.params {
                t *= param_value(p).powi(e);
            }
            total += t;
        }
        total
    }

    /// Exact evaluation with rational values for every coordinate and parameter.
    pub fn eval_exact(
        &self,
        var_value: &mut impl FnMut(&Var) -> BigRational,
        param_value: &impl Fn(usize) -> Result<BigRational>,
    ) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.vars {
                t *= pow_rational(&var_value(v), *e as i32);
            }
            for &(p, e) in &m.params {
                let val = param_value(p)?;
                if val.is_zero() && e < 0 {
                    return Err(Error::DivisionByZero(format!("parameter #{p}")));
                }
                t *= pow_rational(&val, e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Leading (first canonical) coefficient sign, for normalizing output.
    pub fn leading_is_negative(&self) -> bool {
        self.terms
            .values()
            .next()
            .map(|c| c.is_negative())
            .unwrap_or(false)
    }
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for &(p, e) in &m.params {
                write!(f, "*p{p}^{e}")?;
            }
            for (v, e) in &m.vars {
                match v {
                    Var::Base(i) => write!(f, "*x{i}")?,
                    Var::Jet { field, index } => {
                        write!(f, "*y{field}_")?;
                        for i in index.entries() {
                            write!(f, "{i}")?;
                        }
                    }
                }
                if *e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: &DiffPoly) -> DiffPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl std::iter::Sum for DiffPoly {
    fn sum<I: Iterator<Item = DiffPoly>>(iter: I) -> DiffPoly {
        let mut acc = DiffPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}
