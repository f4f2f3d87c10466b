//! Exterior forms on jet prolongations, stored over the contact basis
//! `{dx^i, ω^σ_J}`.
//!
//! Because the basis is adapted to the contact structure, the contact
//! decomposition `p_k` is a term filter and `d = d_H + d_V` splits by
//! whether a differential produces a `dx` or an `ω` factor.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::kernel::{DiffPoly, MultiIndex};

/// A basis one-form. The derived order (all `Dx` first, then `Omega` by
/// field, `|J|`, `J`) fixes the sign of every stored wedge word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Dx(usize),
    Omega { field: usize, index: MultiIndex },
}

impl Basis {
    pub fn omega(field: usize, index: MultiIndex) -> Basis {
        Basis::Omega { field, index }
    }

    pub fn is_contact(&self) -> bool {
        matches!(self, Basis::Omega { .. })
    }
}

/// Sorts a word into canonical order. Returns the permutation sign, or
/// `None` if a factor repeats (the wedge vanishes).
fn canonicalize(word: &mut [Basis]) -> Option<bool> {
    let mut negative = false;
    // insertion sort; words are short
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            word.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

/// An exterior form of fixed degree on `J^s Y` over `n` base coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct JetForm {
    n: usize,
    degree: usize,
    terms: BTreeMap<Vec<Basis>, DiffPoly>,
}

impl JetForm {
    pub fn zero(n: usize, degree: usize) -> JetForm {
        JetForm {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(n: usize, f: DiffPoly) -> JetForm {
        JetForm::from_word(n, f, vec![])
    }

    /// `f · b_1 ∧ ⋯ ∧ b_k` with the word brought into canonical order.
    pub fn from_word(n: usize, f: DiffPoly, mut word: Vec<Basis>) -> JetForm {
        let degree = word.len();
        let mut out = JetForm::zero(n, degree);
        if let Some(neg) = canonicalize(&mut word) {
            out.add_term(word, if neg { -f } else { f });
        }
        out
    }

    pub fn dx(n: usize, i: usize) -> JetForm {
        JetForm::from_word(n, DiffPoly::one(), vec![Basis::Dx(i)])
    }

    pub fn omega(n: usize, field: usize, index: MultiIndex) -> JetForm {
        JetForm::from_word(n, DiffPoly::one(), vec![Basis::omega(field, index)])
    }

    /// `dy^σ_J = ω^σ_J + y^σ_{Ji} dx^i`.
    pub fn dy(n: usize, field: usize, index: MultiIndex) -> JetForm {
        let mut out = JetForm::omega(n, field, index.clone());
        for i in 0..n {
            out = &out + &JetForm::dx(n, i).scale(&DiffPoly::jet(field, index.with(i)));
        }
        out
    }

    /// `ds = dx^1 ∧ ⋯ ∧ dx^n`.
    pub fn volume(n: usize) -> JetForm {
        JetForm::from_word(n, DiffPoly::one(), (0..n).map(Basis::Dx).collect())
    }

    /// `ds_{i_1⋯i_q} = ∂_{i_q} ⌟ ⋯ ⌟ ∂_{i_1} ⌟ ds`.
    pub fn ds(n: usize, indices: &[usize]) -> JetForm {
        indices.iter().fold(JetForm::volume(n), |acc, &i| {
            acc.interior_product(&FrameVector::total(n, i))
                .expect("horizontal frame vectors contract any form")
        })
    }

    /// `f ds_I`.
    pub fn horizontal(n: usize, f: DiffPoly, indices: &[usize]) -> JetForm {
        JetForm::ds(n, indices).scale(&f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Basis>, &DiffPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a word (brought to canonical order first).
    pub fn coefficient(&self, word: &[Basis]) -> DiffPoly {
        let mut w = word.to_vec();
        match canonicalize(&mut w) {
            Some(neg) => {
                let c = self.terms.get(&w).cloned().unwrap_or_default();
                if neg {
                    -c
                } else {
                    c
                }
            }
            None => DiffPoly::zero(),
        }
    }

    /// The density `L` of a horizontal `n`-form `L ds` (other terms ignored).
    pub fn density(&self) -> DiffPoly {
        self.coefficient(&(0..self.n).map(Basis::Dx).collect::<Vec<_>>())
    }

    /// Highest jet order appearing in a coefficient or a contact factor.
    pub fn order(&self) -> usize {
        self.terms
            .iter()
            .map(|(w, c)| {
                let wo = w
                    .iter()
                    .map(|b| match b {
                        Basis::Omega { index, .. } => index.len(),
                        Basis::Dx(_) => 0,
                    })
                    .max()
                    .unwrap_or(0);
                wo.max(c.order())
            })
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, word: Vec<Basis>, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(word.len(), self.degree);
        if word.iter().filter(|b| !b.is_contact()).count() > self.n {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &JetForm) {
        assert_eq!(self.n, other.n, "forms over different base dimensions");
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn scale(&self, f: &DiffPoly) -> JetForm {
        let mut out = JetForm::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * f);
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> JetForm {
        self.map_coefficients(|c| Ok(c.scale(r))).expect("infallible")
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coefficients(&self, mut f: impl FnMut(&DiffPoly) -> Result<DiffPoly>) -> Result<JetForm> {
        let mut out = JetForm::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &JetForm) -> JetForm {
        assert_eq!(self.n, other.n, "forms over different base dimensions");
        let mut out = JetForm::zero(self.n, self.degree + other.degree);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w: Vec<Basis> = wa.iter().chain(wb).cloned().collect();
                if let Some(neg) = canonicalize(&mut w) {
                    let c = ca * cb;
                    out.add_term(w, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Sub-sum of the terms with exactly `k` contact factors.
    pub fn contact_component(&self, k: usize) -> JetForm {
        let mut out = JetForm::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            if contact_degree(w) == k {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Horizontal part `h = p_0`.
    pub fn horizontal_part(&self) -> JetForm {
        self.contact_component(0)
    }

    /// Largest contact degree among the terms.
    pub fn max_contact_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| contact_degree(w)).max()
    }

    /// Strongly contact: degree `q > n` and `p_{q-n} ρ = 0`.
    pub fn is_strongly_contact(&self) -> bool {
        self.degree > self.n && self.contact_component(self.degree - self.n).is_zero()
    }

    /// Exterior differential.
    pub fn exterior_d(&self) -> JetForm {
        &self.horizontal_d() + &self.vertical_d()
    }

    /// Horizontal differential: the part of `d` that adds a `dx` factor,
    /// via `d_H f = (d_i f) dx^i` and `d_H ω^σ_J = dx^i ∧ ω^σ_{Ji}`.
    pub fn horizontal_d(&self) -> JetForm {
        let mut out = JetForm::zero(self.n, self.degree + 1);
        for (w, c) in &self.terms {
            for i in 0..self.n {
                let dc = c.total_derivative(i);
                if !dc.is_zero() {
                    let mut word = vec![Basis::Dx(i)];
                    word.extend(w.iter().cloned());
                    out.add_word(word, dc);
                }
            }
            // d(b_1 ∧ ⋯ ∧ b_k) = Σ_m (-1)^m b_1 ∧ ⋯ ∧ db_m ∧ ⋯ ; only ω's contribute.
            for (m, b) in w.iter().enumerate() {
                if let Basis::Omega { field, index } = b {
                    for i in 0..self.n {
                        let mut word = w[..m].to_vec();
                        word.push(Basis::Dx(i));
                        word.push(Basis::omega(*field, index.with(i)));
                        word.extend(w[m + 1..].iter().cloned());
                        let c = if m % 2 == 1 { -c } else { c.clone() };
                        out.add_word(word, c);
                    }
                }
            }
        }
        out
    }

    /// Vertical differential: `d_V f = Σ ∂f/∂y^σ_J ω^σ_J`, basis forms are `d_V`-closed.
    pub fn vertical_d(&self) -> JetForm {
        let mut out = JetForm::zero(self.n, self.degree + 1);
        for (w, c) in &self.terms {
            for (field, index) in c.jet_variables() {
                let dc = c.jet_partial(field, &index);
                let mut word = vec![Basis::omega(field, index)];
                word.extend(w.iter().cloned());
                out.add_word(word, dc);
            }
        }
        out
    }

    /// Lie derivative along the total derivative `d_i`: coefficients go to
    /// `d_i f`, `ω^σ_J` to `ω^σ_{Ji}`, and `dx^j` to zero.
    pub fn total_derivative(&self, i: usize) -> JetForm {
        let mut out = JetForm::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.total_derivative(i));
            for (m, b) in w.iter().enumerate() {
                if let Basis::Omega { field, index } = b {
                    let mut word = w.clone();
                    word[m] = Basis::omega(*field, index.with(i));
                    out.add_word(word, c.clone());
                }
            }
        }
        out
    }

    /// `d_J` acting on forms as iterated [`JetForm::total_derivative`].
    pub fn total_derivative_multi(&self, index: &MultiIndex) -> JetForm {
        index.entries().fold(self.clone(), |acc, i| acc.total_derivative(i))
    }

    fn add_word(&mut self, mut word: Vec<Basis>, c: DiffPoly) {
        if let Some(neg) = canonicalize(&mut word) {
            self.add_term(word, if neg { -c } else { c });
        }
    }

    /// Contraction `X ⌟ ρ` with a vector given in the frame `(d_i, ∂/∂y^σ_J)`.
    pub fn interior_product(&self, x: &FrameVector) -> Result<JetForm> {
        if self.degree == 0 {
            return Ok(JetForm::zero(self.n, 0));
        }
        let mut out = JetForm::zero(self.n, self.degree - 1);
        for (w, c) in &self.terms {
            for (m, b) in w.iter().enumerate() {
                let pairing = x.pair(b)?;
                if pairing.is_zero() {
                    continue;
                }
                let mut word = w.clone();
                word.remove(m);
                let coeff = &pairing * c;
                out.add_term(word, if m % 2 == 1 { -coeff } else { coeff });
            }
        }
        Ok(out)
    }

    /// Splits `p_k ρ` (with `k = deg ρ − n`) into its `ω^σ`-generated source
    /// part and the rest.
    pub fn classify_source(&self) -> SourceFormReport {
        if self.degree <= self.n {
            return SourceFormReport {
                is_source: false,
                components: BTreeMap::new(),
                residue: self.clone(),
            };
        }
        let k = self.degree - self.n;
        let pk = self.contact_component(k);
        let mut residue = JetForm::zero(self.n, self.degree);
        let mut components = BTreeMap::new();
        for (w, c) in &pk.terms {
            let generated = w.iter().all(|b| match b {
                Basis::Omega { index, .. } => index.is_empty(),
                Basis::Dx(_) => true,
            });
            if !generated {
                residue.add_term(w.clone(), c.clone());
            } else if k == 1 {
                // stored word is ds ∧ ω^σ = (-1)^n ω^σ ∧ ds
                if let Some(Basis::Omega { field, .. }) = w.last() {
                    let sign = if self.n % 2 == 1 { -c } else { c.clone() };
                    components.insert(*field, sign);
                }
            }
        }
        SourceFormReport {
            is_source: residue.is_zero(),
            components,
            residue,
        }
    }

    /// `Σ_σ E_σ ω^σ ∧ ds`.
    pub fn source_form(n: usize, components: &BTreeMap<usize, DiffPoly>) -> JetForm {
        let mut out = JetForm::zero(n, n + 1);
        for (&field, e) in components {
            out = &out + &JetForm::omega(n, field, MultiIndex::empty()).wedge(&JetForm::volume(n)).scale(e);
        }
        out
    }
}

fn contact_degree(word: &[Basis]) -> usize {
    word.iter().filter(|b| b.is_contact()).count()
}

impl fmt::Debug for JetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0[{}-form]", self.degree);
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c:?}]")?;
            for b in w {
                match b {
                    Basis::Dx(i) => write!(f, "^dx{i}")?,
                    Basis::Omega { field, index } => write!(f, "^w{field}{index:?}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &JetForm {
    type Output = JetForm;
    fn add(self, rhs: &JetForm) -> JetForm {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &JetForm {
    type Output = JetForm;
    fn sub(self, rhs: &JetForm) -> JetForm {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &JetForm {
    type Output = JetForm;
    fn neg(self) -> JetForm {
        self.scale(&DiffPoly::integer(-1))
    }
}

/// Classification of an `(n+k)`-form by its `k`-contact component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFormReport {
    /// `p_k ρ` is generated by the `ω^σ` alone.
    pub is_source: bool,
    /// For `k = 1`: `ε_σ` with `p_1 ρ ⊇ Σ ε_σ ω^σ ∧ ds`.
    pub components: BTreeMap<usize, DiffPoly>,
    /// Terms of `p_k ρ` involving some `ω^σ_J` with `|J| ≥ 1`.
    pub residue: JetForm,
}

/// A vector field on a jet space written in the frame dual to the contact
/// basis: `X = Σ h^i d_i + Σ V^σ_J ∂/∂y^σ_J`.
///
/// `order` is the highest `|J|` for which vertical components are known;
/// components at or below it that are absent are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameVector {
    pub horizontal: Vec<DiffPoly>,
    pub vertical: BTreeMap<(usize, MultiIndex), DiffPoly>,
    pub order: usize,
}

impl FrameVector {
    /// The total derivative `d_i` as a frame vector.
    pub fn total(n: usize, i: usize) -> FrameVector {
        let mut horizontal = vec![DiffPoly::zero(); n];
        horizontal[i] = DiffPoly::one();
        FrameVector {
            horizontal,
            vertical: BTreeMap::new(),
            order: usize::MAX,
        }
    }

    /// `∂/∂y^σ_J`.
    pub fn jet_coordinate(n: usize, field: usize, index: MultiIndex) -> FrameVector {
        let mut vertical = BTreeMap::new();
        vertical.insert((field, index), DiffPoly::one());
        FrameVector {
            horizontal: vec![DiffPoly::zero(); n],
            vertical,
            order: usize::MAX,
        }
    }

    fn pair(&self, b: &Basis) -> Result<DiffPoly> {
        match b {
            Basis::Dx(i) => Ok(self.horizontal[*i].clone()),
            Basis::Omega { field, index } => {
                if index.len() > self.order {
                    return Err(Error::OrderMismatch(format!(
                        "vector field known to order {} contracted with ω of order {}",
                        self.order,
                        index.len()
                    )));
                }
                Ok(self
                    .vertical
                    .get(&(*field, index.clone()))
                    .cloned()
                    .unwrap_or_default())
            }
        }
    }
}
