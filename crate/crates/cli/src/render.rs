//! Plain-text, LaTeX and JSON emitters.
//!
//! Terms are ordered by total jet degree, then lexicographically by their
//! plain-text monomial, in every format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use jetvar::dsl::{jet_name, pretty_print, var_name};
use jetvar::forms::{Basis, JetForm};
use jetvar::kernel::{DiffPoly, JetSpace, Monomial, Var};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value as Json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Clone, Debug)]
pub enum Value {
    Poly(DiffPoly),
    /// A polynomial read as the equation `p = 0`.
    Equation(DiffPoly),
    Form(JetForm),
    Bool(bool),
    Text(String),
}

#[derive(Clone, Debug)]
pub struct Item {
    pub name: String,
    pub value: Value,
}

/// The output of one command.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, value: Value) {
        self.items.push(Item {
            name: name.into(),
            value,
        });
    }

    pub fn render(&self, space: &JetSpace, format: Format) -> String {
        match format {
            Format::Plain => {
                let mut out = String::new();
                for item in &self.items {
                    let _ = writeln!(out, "{}: {}", item.name, plain_value(space, &item.value));
                }
                out
            }
            Format::Latex => {
                let mut out = String::from("\\begin{align*}\n");
                let lines: Vec<String> = self
                    .items
                    .iter()
                    .map(|item| format!("  \\text{{{}}} &: {}", latex_escape(&item.name), latex_value(space, &item.value)))
                    .collect();
                out.push_str(&lines.join(" \\\\\n"));
                out.push_str("\n\\end{align*}\n");
                out
            }
            Format::Json => {
                let results: Vec<Json> = self
                    .items
                    .iter()
                    .map(|item| {
                        json!({
                            "name": item.name,
                            "kind": kind(&item.value),
                            "value": json_value(space, &item.value),
                        })
                    })
                    .collect();
                let doc = json!({ "schema": 1, "command": self.command, "results": results });
                let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Poly(_) => "poly",
        Value::Equation(_) => "equation",
        Value::Form(_) => "form",
        Value::Bool(_) => "bool",
        Value::Text(_) => "text",
    }
}

/// Terms of `f` in output order.
pub fn ordered_terms(space: &JetSpace, f: &DiffPoly) -> Vec<(Monomial, BigRational)> {
    let mut terms: Vec<(u32, String, Monomial, BigRational)> = f
        .terms()
        .map(|(m, c)| (m.jet_degree(), monomial_plain(space, m), m.clone(), c.clone()))
        .collect();
    terms.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    terms.into_iter().map(|(_, _, m, c)| (m, c)).collect()
}

fn monomial_plain(space: &JetSpace, m: &Monomial) -> String {
    let mut parts: Vec<String> = m
        .vars()
        .iter()
        .map(|(v, e)| if *e == 1 { var_name(space, v) } else { format!("{}^{e}", var_name(space, v)) })
        .collect();
    parts.extend(m.params().iter().map(|(p, e)| format!("{}^{e}", space.param_name(*p))));
    parts.join("*")
}

/// `f` in the input syntax; parses back to `f`.
pub fn plain_poly(space: &JetSpace, f: &DiffPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in ordered_terms(space, f).into_iter().enumerate() {
        let term = pretty_print(space, &DiffPoly::term(c, m));
        match (k, term.strip_prefix('-')) {
            (0, _) => out.push_str(&term),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
    }
    out
}

/// `(sign, omega factors, ds indices)` for a stored basis word: the
/// `dx` factors are rewritten as `± ds_I` and moved to the right.
fn split_word(n: usize, word: &[Basis]) -> (bool, Vec<(usize, jetvar::kernel::MultiIndex)>, Vec<usize>) {
    let dx: Vec<usize> = word
        .iter()
        .filter_map(|b| match b {
            Basis::Dx(i) => Some(*i),
            _ => None,
        })
        .collect();
    let omegas: Vec<_> = word
        .iter()
        .filter_map(|b| match b {
            Basis::Omega { field, index } => Some((*field, index.clone())),
            _ => None,
        })
        .collect();
    let complement: Vec<usize> = (0..n).filter(|i| !dx.contains(i)).collect();
    // dx_A = s · ds_I, read off from the stored form of ds_I
    let ds = JetForm::ds(n, &complement);
    let (_, c) = ds.terms().next().expect("ds_I is nonzero");
    let mut negative = c.as_rational().expect("unit coefficient").is_negative();
    // dx_A ∧ ω_B = (−1)^{|A||B|} ω_B ∧ dx_A
    if (dx.len() * omegas.len()) % 2 == 1 {
        negative = !negative;
    }
    (negative, omegas, complement)
}

fn ds_name(space: &JetSpace, indices: &[usize]) -> String {
    if indices.is_empty() {
        "ds".into()
    } else {
        let s: String = indices.iter().map(|i| space.base_name(*i)).collect();
        format!("ds_{s}")
    }
}

fn omega_plain(space: &JetSpace, field: usize, index: &jetvar::kernel::MultiIndex) -> String {
    let name = jet_name(space, field, index);
    format!("ω^{name}")
}

/// Coefficient, contact factors `(field, index)` and `ds` indices of one term.
type FormWord = (DiffPoly, Vec<(usize, jetvar::kernel::MultiIndex)>, Vec<usize>);

fn form_words(space: &JetSpace, rho: &JetForm) -> Vec<FormWord> {
    let n = rho.n();
    let mut out: Vec<_> = rho
        .terms()
        .map(|(w, c)| {
            let (neg, omegas, ds) = split_word(n, w);
            (if neg { -c } else { c.clone() }, omegas, ds)
        })
        .collect();
    // contact degree first, then the basis names
    out.sort_by_key(|(_, om, ds)| {
        (
            om.len(),
            om.iter().map(|(f, i)| jet_name(space, *f, i)).collect::<Vec<_>>(),
            ds.clone(),
        )
    });
    out
}

pub fn plain_form(space: &JetSpace, rho: &JetForm) -> String {
    if rho.is_zero() {
        return "0".into();
    }
    let n = rho.n();
    form_words(space, rho)
        .into_iter()
        .map(|(c, om, ds)| {
            let mut factors: Vec<String> = om.iter().map(|(f, i)| omega_plain(space, *f, i)).collect();
            if ds.len() < n || factors.is_empty() {
                factors.push(ds_name(space, &ds));
            }
            format!("({}) {}", plain_poly(space, &c), factors.join(" ∧ "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn plain_value(space: &JetSpace, v: &Value) -> String {
    match v {
        Value::Poly(p) => plain_poly(space, p),
        Value::Equation(p) => format!("{} = 0", plain_poly(space, p)),
        Value::Form(f) => plain_form(space, f),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::Text(t) => t.clone(),
    }
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu", "nu",
    "xi", "pi", "rho", "sigma", "tau", "phi", "chi", "psi", "omega", "Gamma", "Delta", "Theta", "Lambda", "Xi",
    "Pi", "Sigma", "Phi", "Psi", "Omega",
];

fn latex_symbol(name: &str) -> String {
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else if name.chars().count() == 1 {
        name.to_string()
    } else {
        format!("\\mathrm{{{name}}}")
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}")
        .replace('_', "\\_")
        .replace('^', "\\^{}")
        .replace('{', "\\{")
        .replace('}', "\\}")
        .replace('&', "\\&")
        .replace('%', "\\%")
        .replace('#', "\\#")
}

fn latex_var(space: &JetSpace, v: &Var) -> String {
    match v {
        Var::Base(i) => latex_symbol(space.base_name(*i)),
        Var::Jet { field, index } => {
            let f = latex_symbol(space.field_name(*field));
            if index.is_empty() {
                f
            } else {
                let s: String = index.entries().map(|i| space.base_name(i)).collect();
                format!("{f}_{{{s}}}")
            }
        }
    }
}

fn latex_power(base: String, e: i64) -> String {
    if e == 1 {
        base
    } else if base.contains('_') {
        format!("\\left({base}\\right)^{{{e}}}")
    } else {
        format!("{base}^{{{e}}}")
    }
}

pub fn latex_poly(space: &JetSpace, f: &DiffPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in ordered_terms(space, f).into_iter().enumerate() {
        let negative = c.is_negative();
        if negative {
            out.push_str(if k == 0 { "-" } else { " - " });
        } else if k > 0 {
            out.push_str(" + ");
        }
        let c = c.abs();
        let mut factors: Vec<String> = m
            .params()
            .iter()
            .map(|(p, e)| latex_power(latex_symbol(space.param_name(*p)), *e as i64))
            .collect();
        factors.extend(m.vars().iter().map(|(v, e)| latex_power(latex_var(space, v), *e as i64)));
        let coeff = if c.is_integer() {
            if c.is_one() && !factors.is_empty() {
                String::new()
            } else {
                c.numer().to_string()
            }
        } else {
            format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
        };
        let mut parts = Vec::new();
        if !coeff.is_empty() {
            parts.push(coeff);
        }
        parts.extend(factors);
        out.push_str(&parts.join(" \\, "));
    }
    out
}

pub fn latex_form(space: &JetSpace, rho: &JetForm) -> String {
    if rho.is_zero() {
        return "0".into();
    }
    let n = rho.n();
    form_words(space, rho)
        .into_iter()
        .map(|(c, om, ds)| {
            let mut factors: Vec<String> = om
                .iter()
                .map(|(f, i)| {
                    let name = latex_symbol(space.field_name(*f));
                    if i.is_empty() {
                        format!("\\omega^{{{name}}}")
                    } else {
                        let s: String = i.entries().map(|j| space.base_name(j)).collect();
                        format!("\\omega^{{{name}}}_{{{s}}}")
                    }
                })
                .collect();
            if ds.len() < n || factors.is_empty() {
                if ds.is_empty() {
                    factors.push("ds".into());
                } else {
                    let s: String = ds.iter().map(|i| space.base_name(*i)).collect();
                    factors.push(format!("ds_{{{s}}}"));
                }
            }
            format!("\\left({}\\right) {}", latex_poly(space, &c), factors.join(" \\wedge "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn latex_value(space: &JetSpace, v: &Value) -> String {
    match v {
        Value::Poly(p) => latex_poly(space, p),
        Value::Equation(p) => format!("{} = 0", latex_poly(space, p)),
        Value::Form(f) => latex_form(space, f),
        Value::Bool(b) => format!("\\text{{{}}}", if *b { "yes" } else { "no" }),
        Value::Text(t) => format!("\\text{{{}}}", latex_escape(t)),
    }
}

pub fn json_poly(space: &JetSpace, f: &DiffPoly) -> Json {
    let terms: Vec<Json> = ordered_terms(space, f)
        .into_iter()
        .map(|(m, c)| {
            let params: serde_json::Map<String, Json> = m
                .params()
                .iter()
                .map(|(p, e)| (space.param_name(*p).to_string(), json!(e)))
                .collect();
            let monomial: Vec<Json> = m
                .vars()
                .iter()
                .map(|(v, e)| match v {
                    Var::Base(i) => json!({ "base": space.base_name(*i), "power": e }),
                    Var::Jet { field, index } => {
                        let s: String = index.entries().map(|i| space.base_name(i)).collect();
                        json!({ "field": space.field_name(*field), "index": s, "power": e })
                    }
                })
                .collect();
            json!({ "coeff": c.to_string(), "params": params, "monomial": monomial })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn json_form(space: &JetSpace, rho: &JetForm) -> Json {
    let n = rho.n();
    let terms: Vec<Json> = form_words(space, rho)
        .into_iter()
        .map(|(c, om, ds)| {
            let mut basis: Vec<String> = om.iter().map(|(f, i)| omega_plain(space, *f, i)).collect();
            if ds.len() < n || basis.is_empty() {
                basis.push(ds_name(space, &ds));
            }
            json!({ "basis": basis, "coefficient": json_poly(space, &c) })
        })
        .collect();
    json!({ "degree": rho.degree(), "terms": terms })
}

fn json_value(space: &JetSpace, v: &Value) -> Json {
    match v {
        Value::Poly(p) | Value::Equation(p) => json_poly(space, p),
        Value::Form(f) => json_form(space, f),
        Value::Bool(b) => json!(b),
        Value::Text(t) => json!(t),
    }
}

/// Substitutes parameter values into every polynomial and form of a report.
pub fn specialize(report: &mut Report, values: &BTreeMap<usize, BigRational>) -> jetvar::Result<()> {
    if values.is_empty() {
        return Ok(());
    }
    for item in &mut report.items {
        match &mut item.value {
            Value::Poly(p) | Value::Equation(p) => *p = p.substitute_params(values)?,
            Value::Form(f) => *f = f.map_coefficients(|c| c.substitute_params(values))?,
            Value::Bool(_) | Value::Text(_) => {}
        }
    }
    Ok(())
}
