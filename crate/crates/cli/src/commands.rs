use std::collections::BTreeMap;
use std::path::PathBuf;

use jetvar::forms::JetForm;
use jetvar::kernel::{DiffPoly, JetSpace};
use jetvar::models::{self, CaseId};
use jetvar::symmetry::{first_variation, noether_bessel_hagen_residual, ProjVectorField};
use jetvar::variational::{
    euler_lagrange, interior_euler, is_lepage, lepage_full, poincare_cartan, LagrangianProblem,
};
use num_rational::BigRational;

use crate::problem_file::ProblemSpecFile;
use crate::render::{specialize, Format, Report, Value};
use crate::CliError;

/// Flags shared by every command.
#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// TOML problem file.
    #[arg(long, conflicts_with = "case")]
    pub spec: Option<PathBuf>,
    /// Built-in fixture id, e.g. `L4_unconstrained`.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Parameter values substituted into the output, e.g. `a=1,b=-1/2`.
    #[arg(long)]
    pub params: Option<String>,
    /// Order in which per-field results are listed, e.g. `w,v`.
    #[arg(long)]
    pub field_order: Option<String>,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Problem data resolved from `--spec` or `--case`.
pub struct Input {
    pub problem: LagrangianProblem,
    pub vector_fields: BTreeMap<String, ProjVectorField>,
    pub constraints: Vec<(usize, DiffPoly)>,
    pub case: Option<CaseId>,
}

impl Common {
    pub fn input(&self) -> Result<Input, CliError> {
        match (&self.spec, &self.case) {
            (Some(path), None) => {
                let loaded = ProblemSpecFile::read(path)?.load()?;
                Ok(Input {
                    problem: loaded.problem,
                    vector_fields: loaded.vector_fields,
                    constraints: loaded.constraints,
                    case: None,
                })
            }
            (None, Some(id)) => {
                let id: CaseId = id
                    .parse()
                    .map_err(|_| CliError::Parse(format!("unknown case `{id}`")))?;
                let case = models::load(id);
                Ok(Input {
                    problem: case.problem,
                    vector_fields: BTreeMap::new(),
                    constraints: Vec::new(),
                    case: Some(id),
                })
            }
            _ => Err(CliError::Parse("exactly one of --spec or --case is required".into())),
        }
    }

    pub fn param_values(&self, space: &JetSpace) -> Result<BTreeMap<usize, BigRational>, CliError> {
        let mut out = BTreeMap::new();
        let Some(src) = &self.params else {
            return Ok(out);
        };
        for pair in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("--params: expected `name=value`, got `{pair}`")))?;
            let p = space
                .param_index(name.trim())
                .ok_or_else(|| CliError::Parse(format!("--params: unknown parameter `{}`", name.trim())))?;
            let v: BigRational = value
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("--params: `{}` is not a rational", value.trim())))?;
            out.insert(p, v);
        }
        Ok(out)
    }

    /// Fields in output order: those named by `--field-order` first.
    pub fn field_sequence(&self, space: &JetSpace) -> Result<Vec<usize>, CliError> {
        let mut seq = Vec::new();
        if let Some(src) = &self.field_order {
            for name in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let s = space
                    .field_index(name)
                    .ok_or_else(|| CliError::Parse(format!("--field-order: unknown field `{name}`")))?;
                if seq.contains(&s) {
                    return Err(CliError::Parse(format!("--field-order: `{name}` listed twice")));
                }
                seq.push(s);
            }
        }
        let rest: Vec<usize> = (0..space.m()).filter(|s| !seq.contains(s)).collect();
        seq.extend(rest);
        Ok(seq)
    }

    /// Renders `report`; with `--out` it is written to the file and the
    /// returned stdout text is empty.
    pub fn emit(&self, space: &JetSpace, report: &Report) -> Result<String, CliError> {
        let text = report.render(space, self.format);
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                Ok(String::new())
            }
            None => Ok(text),
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// `derive` disagreed with the reference equation.
    Mismatch(String),
}

/// Rendered output and status of a command.
pub type Done = (Status, String);

fn finish(common: &Common, space: &JetSpace, mut report: Report) -> Result<Done, CliError> {
    specialize(&mut report, &common.param_values(space)?)?;
    Ok((Status::Ok, common.emit(space, &report)?))
}

fn push_fields(report: &mut Report, space: &JetSpace, order: &[usize], prefix: &str, values: &BTreeMap<usize, DiffPoly>) {
    for &s in order {
        let v = values.get(&s).cloned().unwrap_or_default();
        report.push(format!("{prefix}_{}", space.field_name(s)), Value::Poly(v));
    }
}

pub fn el(common: &Common) -> Result<Done, CliError> {
    let input = common.input()?;
    let space = input.problem.space();
    let mut report = Report::new("el");
    let el = euler_lagrange(&input.problem);
    push_fields(&mut report, space, &common.field_sequence(space)?, "E", &el);
    finish(common, space, report)
}

pub fn pc(common: &Common) -> Result<Done, CliError> {
    let input = common.input()?;
    let mut report = Report::new("pc");
    report.push("theta", Value::Form(poincare_cartan(&input.problem)?));
    finish(common, input.problem.space(), report)
}

pub fn kb(common: &Common) -> Result<Done, CliError> {
    let input = common.input()?;
    let mut report = Report::new("kb");
    let rho = lepage_full(&input.problem)?;
    let theta = poincare_cartan(&input.problem)?;
    report.push("rho", Value::Form(rho.clone()));
    report.push("rho - theta", Value::Form(&rho - &theta));
    finish(common, input.problem.space(), report)
}

/// Evaluates a form expression: `lagrangian`, `pc`, `kb`, or one of them
/// wrapped in `d(…)`, `dh(…)`, `dv(…)`.
pub fn eval_form(problem: &LagrangianProblem, expr: &str) -> Result<JetForm, CliError> {
    let e: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    for (op, apply) in [
        ("d(", JetForm::exterior_d as fn(&JetForm) -> JetForm),
        ("dh(", JetForm::horizontal_d),
        ("dv(", JetForm::vertical_d),
    ] {
        if let Some(inner) = e.strip_prefix(op).and_then(|r| r.strip_suffix(')')) {
            return Ok(apply(&eval_form(problem, inner)?));
        }
    }
    match e.as_str() {
        "lagrangian" | "lambda" => Ok(problem.lagrangian_form()),
        "pc" | "theta" => Ok(poincare_cartan(problem)?),
        "kb" | "full" | "rho" => Ok(lepage_full(problem)?),
        _ => Err(CliError::Parse(format!(
            "--form: cannot read `{expr}` (expected lagrangian, pc, kb, or d(..), dh(..), dv(..) of one)"
        ))),
    }
}

pub fn lepage_check(common: &Common, form: &str) -> Result<Done, CliError> {
    let input = common.input()?;
    let space = input.problem.space();
    let rho = eval_form(&input.problem, form)?;
    let (ok, report_src) = is_lepage(&rho);
    let mut report = Report::new("lepage-check");
    report.push("form", Value::Text(form.to_string()));
    report.push("lepage", Value::Bool(ok));
    if ok {
        push_fields(&mut report, space, &common.field_sequence(space)?, "E", &report_src.components);
    } else if !report_src.residue.is_zero() {
        report.push("residue", Value::Form(report_src.residue));
    }
    finish(common, space, report)
}

fn builtin_field(space: &JetSpace, name: &str) -> Option<ProjVectorField> {
    if name == "scale" {
        return Some(ProjVectorField::base_scaling(space));
    }
    if let Some(c) = name.strip_prefix("translate_") {
        return space.base_index(c).map(|i| ProjVectorField::translation(space, i));
    }
    if let Some(f) = name.strip_prefix("shift_") {
        return space.field_index(f).map(|s| ProjVectorField::field_shift(space, s));
    }
    None
}

pub fn noether(common: &Common, field: &str) -> Result<Done, CliError> {
    let input = common.input()?;
    let space = input.problem.space();
    let vf = match input.vector_fields.get(field) {
        Some(v) => v.clone(),
        None => builtin_field(space, field).ok_or_else(|| {
            CliError::Parse(format!(
                "unknown vector field `{field}` (define it in the problem file or use translate_<x>, shift_<y>, scale)"
            ))
        })?,
    };
    let fv = first_variation(&input.problem, &vf)?;
    let ic = jetvar::symmetry::improved_current(&input.problem, &vf)?;
    let current = noether_bessel_hagen_residual(&input.problem, &vf)?;
    let mut report = Report::new("noether");
    report.push("field", Value::Text(field.to_string()));
    let holds = fv.holds();
    report.push("first variation current", Value::Form(fv.current));
    report.push("first variation holds", Value::Bool(holds));
    report.push("candidate", Value::Form(ic.candidate));
    report.push("obstruction", Value::Form(ic.obstruction));
    report.push("psi", Value::Form(ic.psi));
    report.push("current", Value::Form(current));
    report.push("source", Value::Poly(ic.source_term));
    finish(common, space, report)
}

pub fn derive(common: &Common) -> Result<Done, CliError> {
    let input = common.input()?;
    let space = input.problem.space().clone();
    let params = common.param_values(&space)?;
    let mut report = Report::new("derive");

    let Some(id) = input.case else {
        // problem file: substitute the constraints into the field equations
        let mut eqs = euler_lagrange(&input.problem);
        for (field, expr) in &input.constraints {
            for e in eqs.values_mut() {
                *e = e.substitute_field(*field, expr)?;
            }
        }
        for s in common.field_sequence(&space)? {
            let e = eqs[&s].substitute_params(&params)?;
            if !e.is_zero() {
                report.push(format!("E_{}", space.field_name(s)), Value::Equation(e));
            }
        }
        return Ok((Status::Ok, common.emit(&space, &report)?));
    };

    let case = models::load(id);
    let derived = models::derive_pde(&case)?.substitute_params(&params)?;
    let expected = case.expected_pde.substitute_params(&params)?;
    let matches = models::equal_up_to_unit(&derived, &expected);
    report.push("case", Value::Text(id.to_string()));
    report.push("derived", Value::Equation(derived.clone()));
    report.push("expected", Value::Equation(expected.clone()));
    report.push("match", Value::Bool(matches));
    if !matches {
        report.push("derived - expected", Value::Poly(&derived - &expected));
    }
    let text = common.emit(&space, &report)?;
    if matches {
        Ok((Status::Ok, text))
    } else {
        Ok((
            Status::Mismatch(format!("{id}: derived equation differs from the reference equation")),
            text,
        ))
    }
}

pub fn decompose(common: &Common, form: &str, k: Option<usize>) -> Result<Done, CliError> {
    let input = common.input()?;
    let space = input.problem.space();
    let n = input.problem.n();
    let rho = eval_form(&input.problem, form)?;
    let mut report = Report::new("decompose");
    report.push("form", Value::Text(form.to_string()));
    report.push("degree", Value::Text(rho.degree().to_string()));
    let explicit = k.is_some();
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=rho.degree()).collect(),
    };
    for k in ks {
        let part = rho.contact_component(k);
        if k == 1 && rho.degree() == n + 1 {
            let src = part.classify_source();
            report.push("p1 source form", Value::Bool(src.is_source));
            push_fields(&mut report, space, &common.field_sequence(space)?, "E", &src.components);
            if !src.residue.is_zero() {
                report.push("p1 residue", Value::Form(src.residue));
            }
        } else if explicit || !part.is_zero() {
            report.push(format!("p{k}"), Value::Form(part.clone()));
        }
        if k >= 1 && rho.degree() == n + k {
            report.push(format!("interior euler (k={k})"), Value::Form(interior_euler(&rho, k)?));
        }
    }
    finish(common, space, report)
}
