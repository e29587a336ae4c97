//! Structure spec files.
//!
//! Matrices are lists of rows; the columns of `adapted_frame` are the frame
//! fields. Entries are expression strings or integers. Structure constant
//! indices are 1-based over the frame `X1..Xn, Y1..Yn` (or the given labels).

use std::collections::BTreeSet;
use std::path::Path;

use bipara_core::exactalg::{parse_poly, AlgebraError, MultiPoly, PolyMatrix, Rational, Vars};
use bipara_core::geometry::{adapted_labels, StructureConstants};
use bipara_core::structure::StructureError;
use bipara_core::{BilinearField, BiparaStructure, EndoField, Frame, FrameContext};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Expr {
    Int(i64),
    Text(String),
}

impl Expr {
    fn text(&self) -> String {
        match self {
            Expr::Int(v) => v.to_string(),
            Expr::Text(s) => s.clone(),
        }
    }
}

pub type Matrix = Vec<Vec<Expr>>;

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    ConstantFrame,
    PolynomialChart,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<Expr>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub backend: BackendName,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(rename = "F")]
    pub f: Matrix,
    #[serde(rename = "P")]
    pub p: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<BracketEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adapted_frame: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Matrix>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_points: Option<Vec<Vec<Expr>>>,
}

/// A validated spec with its geometric objects.
#[derive(Clone, Debug)]
pub struct Loaded {
    /// The spec with every expression in canonical form.
    pub spec: StructureSpec,
    pub structure: BiparaStructure,
    pub metric: Option<BilinearField>,
    pub omega: Option<BilinearField>,
    pub h: Option<BilinearField>,
    pub seed_points: Vec<Vec<Rational>>,
}

fn parse_error(path: &str, err: AlgebraError) -> CliError {
    CliError::input(format!("{path}: {err}"))
}

fn parse_entry(path: &str, e: &Expr, vars: &Vars) -> Result<MultiPoly, CliError> {
    parse_poly(&e.text(), vars).map_err(|err| parse_error(path, err))
}

fn parse_matrix(name: &str, m: &Matrix, dim: usize, vars: &Vars) -> Result<PolyMatrix, CliError> {
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        let cols = m.first().map_or(0, Vec::len);
        return Err(CliError::input(format!(
            "{name}: expected a {dim}x{dim} matrix, got {}x{cols}",
            m.len()
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (r, row) in m.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            entries.push(parse_entry(&format!("{name}[{r}][{c}]"), e, vars)?);
        }
    }
    Ok(PolyMatrix::new(dim, dim, vars, entries))
}

fn print_matrix(m: &PolyMatrix) -> Matrix {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| Expr::Text(m.get(r, c).to_string())).collect())
        .collect()
}

fn constant_entry(path: &str, e: &Expr) -> Result<Rational, CliError> {
    parse_entry(path, e, &Vars::empty())?
        .constant_value()
        .ok_or_else(|| CliError::input(format!("{path}: expected a constant")))
}

fn structure_error(err: StructureError) -> CliError {
    match err {
        StructureError::Algebra(e) => CliError::input(e.to_string()),
        other => CliError::math(other),
    }
}

fn context(spec: &StructureSpec) -> Result<FrameContext, CliError> {
    let dim = 2 * spec.n;
    match spec.backend {
        BackendName::PolynomialChart => {
            if spec.structure_constants.is_some() || spec.labels.is_some() {
                return Err(CliError::input(
                    "structure_constants and labels apply to the constant_frame backend only",
                ));
            }
            let vars = spec
                .variables
                .as_ref()
                .ok_or_else(|| CliError::input("variables: required for the polynomial_chart backend"))?;
            if vars.len() != dim {
                return Err(CliError::input(format!(
                    "variables: expected {dim} names, got {}",
                    vars.len()
                )));
            }
            FrameContext::chart(vars).map_err(|e| CliError::input(format!("variables: {e}")))
        }
        BackendName::ConstantFrame => {
            if spec.variables.is_some() || spec.seed_points.is_some() {
                return Err(CliError::input(
                    "variables and seed_points apply to the polynomial_chart backend only",
                ));
            }
            let labels = spec.labels.clone().unwrap_or_else(|| adapted_labels(spec.n));
            if labels.len() != dim {
                return Err(CliError::input(format!(
                    "labels: expected {dim} names, got {}",
                    labels.len()
                )));
            }
            let mut constants = StructureConstants::abelian(dim);
            let mut seen = BTreeSet::new();
            for (k, entry) in spec.structure_constants.iter().flatten().enumerate() {
                let path = format!("structure_constants[{k}]");
                if entry.i < 1 || entry.j > dim || entry.i >= entry.j {
                    return Err(CliError::input(format!(
                        "{path}: need 1 <= i < j <= {dim}, got i = {}, j = {}",
                        entry.i, entry.j
                    )));
                }
                if !seen.insert((entry.i, entry.j)) {
                    return Err(CliError::input(format!(
                        "{path}: duplicate pair ({}, {})",
                        entry.i, entry.j
                    )));
                }
                if entry.coeffs.len() != dim {
                    return Err(CliError::input(format!(
                        "{path}.coeffs: expected {dim} entries, got {}",
                        entry.coeffs.len()
                    )));
                }
                let coeffs = entry
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(c, e)| constant_entry(&format!("{path}.coeffs[{c}]"), e))
                    .collect::<Result<Vec<_>, _>>()?;
                constants.set(entry.i - 1, entry.j - 1, &coeffs);
            }
            FrameContext::lie_algebra(&labels, constants).map_err(CliError::math)
        }
    }
}

fn bilinear(
    name: &str,
    m: &Option<Matrix>,
    ctx: &FrameContext,
) -> Result<(Option<BilinearField>, Option<Matrix>), CliError> {
    let Some(m) = m else { return Ok((None, None)) };
    let pm = parse_matrix(name, m, ctx.dim(), ctx.vars())?;
    let printed = print_matrix(&pm);
    let field = BilinearField::new(ctx, pm).map_err(|e| CliError::math(format!("{name}: {e}")))?;
    Ok((Some(field), Some(printed)))
}

/// Parses and validates a spec document.
pub fn parse_spec(text: &str) -> Result<Loaded, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: StructureSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        let at = format!("line {} column {}", inner.line(), inner.column());
        if path == "." {
            CliError::input(format!("{at}: {inner}"))
        } else {
            CliError::input(format!("{at}, at `{path}`: {inner}"))
        }
    })?;
    if spec.n == 0 {
        return Err(CliError::input("n: must be positive"));
    }
    let ctx = context(&spec)?;
    let dim = ctx.dim();
    let vars = ctx.vars().clone();
    let f = parse_matrix("F", &spec.f, dim, &vars)?;
    let p = parse_matrix("P", &spec.p, dim, &vars)?;
    let frame = spec
        .adapted_frame
        .as_ref()
        .map(|m| parse_matrix("adapted_frame", m, dim, &vars))
        .transpose()?;
    let mut seed_points = Vec::new();
    for (k, point) in spec.seed_points.iter().flatten().enumerate() {
        if point.len() != dim {
            return Err(CliError::input(format!(
                "seed_points[{k}]: expected {dim} coordinates, got {}",
                point.len()
            )));
        }
        let coords = point
            .iter()
            .enumerate()
            .map(|(c, e)| constant_entry(&format!("seed_points[{k}][{c}]"), e))
            .collect::<Result<Vec<_>, _>>()?;
        seed_points.push(coords);
    }
    let (metric, metric_m) = bilinear("metric", &spec.metric, &ctx)?;
    let (omega, omega_m) = bilinear("omega", &spec.omega, &ctx)?;
    let (h, h_m) = bilinear("H", &spec.h, &ctx)?;

    let mut canonical = spec.clone();
    canonical.f = print_matrix(&f);
    canonical.p = print_matrix(&p);
    canonical.adapted_frame = frame.as_ref().map(print_matrix);
    canonical.metric = metric_m;
    canonical.omega = omega_m;
    canonical.h = h_m;
    if let Some(entries) = canonical.structure_constants.as_mut() {
        entries.sort_by_key(|e| (e.i, e.j));
        for e in entries {
            e.coeffs = e
                .coeffs
                .iter()
                .map(|c| Expr::Text(parse_poly(&c.text(), &Vars::empty()).expect("checked").to_string()))
                .collect();
        }
    }
    canonical.seed_points = spec.seed_points.as_ref().map(|_| {
        seed_points
            .iter()
            .map(|pt| {
                pt.iter()
                    .map(|v| Expr::Text(bipara_core::exactalg::format_rational(v)))
                    .collect()
            })
            .collect()
    });

    let f = EndoField::new(&ctx, f).map_err(|e| CliError::math(format!("F: {e}")))?;
    let p = EndoField::new(&ctx, p).map_err(|e| CliError::math(format!("P: {e}")))?;
    let mut structure = BiparaStructure::new(f, p).map_err(structure_error)?;
    if let Some(m) = frame {
        let frame = Frame::new(&ctx, m).map_err(|e| CliError::math(format!("adapted_frame: {e}")))?;
        structure = structure.with_adapted_frame(frame).map_err(structure_error)?;
    }
    if let Some(g) = &metric {
        if !g.is_symmetric() {
            return Err(CliError::math("metric is not symmetric"));
        }
    }
    Ok(Loaded {
        spec: canonical,
        structure,
        metric,
        omega,
        h,
        seed_points,
    })
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_spec(path: &Path) -> Result<Loaded, CliError> {
    parse_spec(&read_text(path)?).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        CliError::Math(m) => CliError::Math(format!("{}: {m}", path.display())),
    })
}
