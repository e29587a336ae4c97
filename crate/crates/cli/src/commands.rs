use std::path::Path;

use bipara_core::connections::{
    covariant_derivative_of_endo, distribution_preservation_check, parallel_check, trace_condition_check,
    CurvatureTensor, TorsionTensor,
};
use bipara_core::diagnostics::{
    equivalence_check, first_prolongation, flatness_verdict, fp_torsion_check, identity_suite, integrability_verdict,
    invariant_count, orthogonal_alternation_kernel, trace_form, transpose_invariance, FnBracket, NijenhuisTensor,
};
use bipara_core::exactalg::{int, parse_poly, MultiPoly, PolyMatrix, QMatrix};
use bipara_core::metrics::{
    bilagrangian_assembly, classify_metric, classify_metric_at, solve_hypersymplectic_metric, special_metric_predicates,
};
use bipara_core::structure::classify_triple;
use bipara_core::{
    BiparaStructure, ChristoffelTable, ConnectionLaw, DifferenceTensor, FrameContext, PolyMap, VectorField, Verdict,
    Witness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::spec::{load_spec, read_text, Expr, Loaded};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Canonical,
    WellAdapted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TensorName {
    #[value(name = "F")]
    F,
    #[value(name = "P")]
    P,
    #[value(name = "FP")]
    Fp,
}

fn law(s: &BiparaStructure, kind: Kind) -> ConnectionLaw {
    match kind {
        Kind::Canonical => ConnectionLaw::canonical(s),
        Kind::WellAdapted => ConnectionLaw::well_adapted(s),
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Canonical => "canonical",
        Kind::WellAdapted => "well_adapted",
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// `{value, components}` with one polynomial string per nonzero component.
fn field_entry(v: &VectorField) -> Value {
    let ctx = v.context();
    let comps: Map<String, Value> = v
        .components()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (ctx.label(i).to_string(), Value::String(c.to_string())))
        .collect();
    json!({ "value": v.to_string(), "components": comps })
}

fn basis(ctx: &FrameContext) -> Vec<VectorField> {
    (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect()
}

fn pair_table(
    ctx: &FrameContext,
    name: &str,
    skew: bool,
    f: impl Fn(&VectorField, &VectorField) -> VectorField,
) -> Map<String, Value> {
    let e = basis(ctx);
    let mut out = Map::new();
    for i in 0..e.len() {
        for j in 0..e.len() {
            if skew && j <= i {
                continue;
            }
            let key = format!("{name}({},{})", ctx.label(i), ctx.label(j));
            out.insert(key, field_entry(&f(&e[i], &e[j])));
        }
    }
    out
}

fn connection_table(law: &ConnectionLaw) -> Map<String, Value> {
    let ctx = law.context().clone();
    let e = basis(&ctx);
    let mut out = Map::new();
    for i in 0..e.len() {
        for j in 0..e.len() {
            let key = format!("nabla_{} {}", ctx.label(i), ctx.label(j));
            out.insert(key, field_entry(&law.nabla(&e[i], &e[j])));
        }
    }
    out
}

fn christoffel_table(t: &ChristoffelTable) -> Map<String, Value> {
    let n = t.n();
    let mut out = Map::new();
    for h in 0..n {
        for a in 0..n {
            for i in 0..n {
                let idx = format!("^{}_({},{})", i + 1, h + 1, a + 1);
                out.insert(format!("Gamma{idx}"), Value::String(t.gamma(h, a, i).to_string()));
                out.insert(
                    format!("Gammabar{idx}"),
                    Value::String(t.gamma_bar(h, a, i).to_string()),
                );
            }
        }
    }
    out
}

fn christoffels(s: &BiparaStructure, kind: Kind) -> Result<ChristoffelTable, CliError> {
    if s.adapted_frame().is_none() {
        return Err(CliError::math(
            "Christoffel symbols are taken on an adapted frame; the spec has no adapted_frame",
        ));
    }
    match kind {
        Kind::Canonical => ChristoffelTable::canonical(s),
        Kind::WellAdapted => ChristoffelTable::well_adapted(s),
    }
    .map_err(CliError::math)
}

fn torsion_table(law: &ConnectionLaw) -> Map<String, Value> {
    let t = TorsionTensor::new(law);
    let name = if law.kind() == bipara_core::ConnectionKind::WellAdapted {
        "T'"
    } else {
        "T"
    };
    pair_table(law.context(), name, true, |x, y| t.eval(x, y))
}

fn curvature_table(law: &ConnectionLaw) -> Map<String, Value> {
    let ctx = law.context().clone();
    let r = CurvatureTensor::new(law);
    let d = ctx.dim();
    let mut out = Map::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                let key = format!("R({},{}){}", ctx.label(i), ctx.label(j), ctx.label(k));
                out.insert(key, field_entry(&r.component(i, j, k)));
            }
        }
    }
    out
}

fn difference_table(s: &BiparaStructure) -> Map<String, Value> {
    let a = DifferenceTensor::new(s);
    pair_table(s.context(), "A", false, |x, y| a.eval(x, y))
}

fn nijenhuis_table(s: &BiparaStructure, which: TensorName) -> (Map<String, Value>, Verdict) {
    match which {
        TensorName::F | TensorName::P => {
            let (e, name) = if which == TensorName::F {
                (s.f(), "F")
            } else {
                (s.p(), "P")
            };
            let n = NijenhuisTensor::new(e, name);
            let table = pair_table(s.context(), &format!("N_{name}"), true, |x, y| n.eval(x, y));
            (table, Verdict::from_witness(format!("N_{name} = 0"), n.witness()))
        }
        TensorName::Fp => {
            let b = FnBracket::new(s);
            let table = pair_table(s.context(), "[F,P]", true, |x, y| b.eval(x, y));
            (table, Verdict::from_witness("[F,P] = 0", b.witness()))
        }
    }
}

fn print_matrix(m: &PolyMatrix) -> Value {
    (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| Value::String(m.get(r, c).to_string())).collect()))
        .collect()
}

fn document(command: &str, fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), Value::String(command.into()));
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    map.entry("warnings").or_insert_with(|| Value::Array(Vec::new()));
    Value::Object(map)
}

fn verdict_list(vs: &[Verdict]) -> Value {
    to_value(&vs)
}

pub fn validate(spec: &Path) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let s = &loaded.structure;
    Ok(document(
        "validate",
        vec![
            ("valid", Value::Bool(true)),
            ("dim", json!(s.dim())),
            ("triple_kind", to_value(&classify_triple(s.f(), s.p()))),
            ("adapted_frame", Value::Bool(s.adapted_frame().is_some())),
            ("spec", to_value(&loaded.spec)),
        ],
    ))
}

pub fn connection(spec: &Path, kind: Kind, with_christoffels: bool) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let s = &loaded.structure;
    let l = law(s, kind);
    let mut tensors = Map::new();
    tensors.insert("connection".into(), Value::Object(connection_table(&l)));
    if with_christoffels {
        tensors.insert(
            "christoffels".into(),
            Value::Object(christoffel_table(&christoffels(s, kind)?)),
        );
    }
    let mut verdicts: Vec<Verdict> = [(s.f(), "F"), (s.p(), "P"), (s.j(), "J")]
        .into_iter()
        .map(|(e, name)| parallel_check(&l, e, name))
        .collect();
    let pres = distribution_preservation_check(&l, s);
    verdicts.extend([pres.v1, pres.v2, pres.v3]);
    Ok(document(
        "connection",
        vec![
            ("kind", json!(kind_name(kind))),
            ("tensors", Value::Object(tensors)),
            ("verdicts", verdict_list(&verdicts)),
        ],
    ))
}

pub fn torsion(spec: &Path, kind: Kind) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let l = law(&loaded.structure, kind);
    let t = TorsionTensor::new(&l);
    Ok(document(
        "torsion",
        vec![
            ("kind", json!(kind_name(kind))),
            ("tensors", json!({ "torsion": torsion_table(&l) })),
            ("verdicts", verdict_list(&[Verdict::from_witness("T = 0", t.witness())])),
        ],
    ))
}

pub fn curvature(spec: &Path, kind: Kind) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let l = law(&loaded.structure, kind);
    let r = CurvatureTensor::new(&l);
    Ok(document(
        "curvature",
        vec![
            ("kind", json!(kind_name(kind))),
            ("tensors", json!({ "curvature": curvature_table(&l) })),
            ("verdicts", verdict_list(&[Verdict::from_witness("R = 0", r.witness())])),
        ],
    ))
}

fn difference_verdicts(s: &BiparaStructure) -> Vec<Verdict> {
    let a = DifferenceTensor::new(s);
    let canonical = ConnectionLaw::canonical(s);
    let well = ConnectionLaw::well_adapted(s);
    let ctx = s.context().clone();
    let e = basis(&ctx);
    let pairs: Vec<(usize, usize)> = (0..e.len()).flat_map(|i| (0..e.len()).map(move |j| (i, j))).collect();
    let label = |i: usize, j: usize| format!("({},{})", ctx.label(i), ctx.label(j));
    vec![
        Verdict::from_witness("A = 0", a.witness()),
        Verdict::search("A from torsion = A from brackets", pairs.clone(), |(i, j)| {
            Witness::from_field(
                format!("A{}", label(i, j)),
                &(&a.eval(&e[i], &e[j]) - &a.eval_brackets(&e[i], &e[j])),
            )
        }),
        Verdict::search("nabla - nabla' = A", pairs, |(i, j)| {
            let diff = &canonical.nabla(&e[i], &e[j]) - &well.nabla(&e[i], &e[j]);
            Witness::from_field(
                format!("(nabla - nabla' - A){}", label(i, j)),
                &(&diff - &a.eval(&e[i], &e[j])),
            )
        }),
    ]
}

pub fn difference(spec: &Path) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let s = &loaded.structure;
    Ok(document(
        "difference",
        vec![
            ("tensors", json!({ "difference": difference_table(s) })),
            ("verdicts", verdict_list(&difference_verdicts(s))),
        ],
    ))
}

pub fn nijenhuis(spec: &Path, which: TensorName) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let (table, verdict) = nijenhuis_table(&loaded.structure, which);
    Ok(document(
        "nijenhuis",
        vec![
            ("tensors", json!({ "nijenhuis": table })),
            ("verdicts", verdict_list(&[verdict])),
        ],
    ))
}

fn metric_section(loaded: &Loaded) -> Result<Option<Value>, CliError> {
    let Some(g) = &loaded.metric else { return Ok(None) };
    let s = &loaded.structure;
    let class = classify_metric(s, g).map_err(CliError::math)?;
    let special = special_metric_predicates(s, g, None).map_err(CliError::math)?;
    let points = loaded
        .seed_points
        .iter()
        .map(|pt| classify_metric_at(s, g, pt).map(|c| to_value(&c)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::math)?;
    let mut out = json!({ "class": class, "special": special });
    if !points.is_empty() {
        out["at_seed_points"] = Value::Array(points);
    }
    Ok(Some(out))
}

fn classification(loaded: &Loaded) -> Result<Vec<(&'static str, Value)>, CliError> {
    let s = &loaded.structure;
    let integrability = integrability_verdict(s).map_err(CliError::math)?;
    let flatness = flatness_verdict(s);
    let mut fields = vec![
        ("triple_kind", to_value(&classify_triple(s.f(), s.p()))),
        ("integrable", Value::Bool(integrability.verdict.holds)),
        ("flat", Value::Bool(flatness.verdict.holds)),
    ];
    let witness = integrability
        .verdict
        .witness
        .as_ref()
        .or(flatness.verdict.witness.as_ref());
    if let Some(w) = witness {
        fields.push(("witness", Value::String(w.to_string())));
    }
    fields.push(("integrability", to_value(&integrability)));
    fields.push(("flatness", to_value(&flatness)));
    if let Some(m) = metric_section(loaded)? {
        fields.push(("metric", m));
    }
    Ok(fields)
}

pub fn classify(spec: &Path) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    Ok(document("classify", classification(&loaded)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    #[serde(default)]
    matrix: Option<Vec<Vec<Expr>>>,
    #[serde(default)]
    forward: Option<Vec<Expr>>,
    #[serde(default)]
    inverse: Option<Vec<Expr>>,
}

fn expr_text(e: &Expr) -> String {
    match e {
        Expr::Int(v) => v.to_string(),
        Expr::Text(s) => s.clone(),
    }
}

fn parse_list(name: &str, items: &[Expr], ctx: &FrameContext) -> Result<Vec<MultiPoly>, CliError> {
    items
        .iter()
        .enumerate()
        .map(|(k, e)| {
            parse_poly(&expr_text(e), ctx.vars()).map_err(|err| CliError::input(format!("{name}[{k}]: {err}")))
        })
        .collect()
}

fn load_map(path: &Path, a: &FrameContext, b: &FrameContext) -> Result<PolyMap, CliError> {
    let text = read_text(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let m: MapSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        CliError::input(format!(
            "{}: line {} column {}, at `{}`: {inner}",
            path.display(),
            inner.line(),
            inner.column(),
            e.path()
        ))
    })?;
    let d = a.dim();
    match (m.matrix, m.forward, m.inverse) {
        (Some(rows), None, None) => {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(CliError::input(format!("matrix: expected {d}x{d}")));
            }
            let mut q = QMatrix::zeros(d, d);
            for (r, row) in rows.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    let v = bipara_core::exactalg::parse_rational(&expr_text(e))
                        .map_err(|err| CliError::input(format!("matrix[{r}][{c}]: {err}")))?;
                    q.set(r, c, v);
                }
            }
            PolyMap::linear(a, b, &q).map_err(CliError::math)
        }
        (None, Some(fwd), Some(inv)) => {
            let fwd = parse_list("forward", &fwd, a)?;
            let inv = parse_list("inverse", &inv, b)?;
            PolyMap::chart(a, b, fwd, inv).map_err(CliError::math)
        }
        _ => Err(CliError::input(format!(
            "{}: give either `matrix` or both `forward` and `inverse`",
            path.display()
        ))),
    }
}

pub fn equivalent(a: &Path, b: &Path, map: &Path) -> Result<Value, CliError> {
    let la = load_spec(a)?;
    let lb = load_spec(b)?;
    let m = load_map(map, la.structure.context(), lb.structure.context())?;
    let report = equivalence_check(&la.structure, &lb.structure, &m).map_err(CliError::math)?;
    Ok(document(
        "equivalent",
        vec![
            ("equivalent", Value::Bool(report.verdict.holds)),
            ("report", to_value(&report)),
        ],
    ))
}

pub fn prolongation(n: usize) -> Result<Value, CliError> {
    Ok(document(
        "prolongation",
        vec![
            ("n", json!(n)),
            ("first_prolongation_dim", json!(first_prolongation(n))),
            ("transpose_invariant", json!(transpose_invariance(n))),
            (
                "orthogonal_alternation_kernel_dim",
                json!(orthogonal_alternation_kernel(n, &trace_form)),
            ),
        ],
    ))
}

pub fn invariants(n: usize, r: usize) -> Result<Value, CliError> {
    let count = invariant_count(n, r);
    let warnings = to_value(&count.warnings);
    Ok(document(
        "invariants",
        vec![("count", to_value(&count)), ("warnings", warnings)],
    ))
}

fn bilagrangian_value(loaded: &Loaded) -> Result<Value, CliError> {
    let (Some(omega), Some(h)) = (&loaded.omega, &loaded.h) else {
        return Err(CliError::math(
            "bi-Lagrangian assembly needs `omega` and `H` in the spec",
        ));
    };
    let out = bilagrangian_assembly(omega, loaded.structure.f(), h).map_err(CliError::math)?;
    let mut v = to_value(&out);
    v["G"] = print_matrix(out.big_g.matrix());
    v["J"] = print_matrix(out.j.matrix());
    v["P"] = print_matrix(out.p.matrix());
    v["g"] = print_matrix(out.g.matrix());
    Ok(v)
}

pub fn bilagrangian(spec: &Path) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let v = bilagrangian_value(&loaded)?;
    Ok(document("bilagrangian", vec![("result", v)]))
}

fn random_field(ctx: &FrameContext, rng: &mut ChaCha8Rng) -> VectorField {
    let vars = ctx.vars();
    let comps = (0..ctx.dim())
        .map(|_| {
            let mut p = ctx.constant(int(rng.random_range(-2..=2)));
            for k in 0..vars.len() {
                p += &MultiPoly::var(vars, k).scale(&int(rng.random_range(-1..=1)));
            }
            p
        })
        .collect();
    VectorField::new(ctx, comps).expect("components match the context")
}

/// Identities checked on random fields rather than frame pairs.
fn random_checks(s: &BiparaStructure, seed: u64) -> Vec<Verdict> {
    let ctx = s.context().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(VectorField, VectorField)> = (0..4)
        .map(|_| (random_field(&ctx, &mut rng), random_field(&ctx, &mut rng)))
        .collect();
    let canonical = ConnectionLaw::canonical(s);
    let well = ConnectionLaw::well_adapted(s);
    let t = TorsionTensor::new(&canonical);
    let a = DifferenceTensor::new(s);
    let pr = s.projectors();
    let mut out = vec![
        Verdict::search(
            "random: T(F+ X, F- Y) = 0",
            samples.iter().enumerate(),
            |(k, (x, y))| {
                Witness::from_field(
                    format!("T(F+ X{k}, F- Y{k})"),
                    &t.eval(&pr.f_plus.apply(x), &pr.f_minus.apply(y)),
                )
            },
        ),
        Verdict::search(
            "random: nabla - nabla' = A",
            samples.iter().enumerate(),
            |(k, (x, y))| {
                let d = &(&canonical.nabla(x, y) - &well.nabla(x, y)) - &a.eval(x, y);
                Witness::from_field(format!("(nabla - nabla' - A)(X{k}, Y{k})"), &d)
            },
        ),
    ];
    for (l, tag) in [(&canonical, "nabla"), (&well, "nabla'")] {
        for (e, name) in [(s.f(), "F"), (s.p(), "P")] {
            out.push(Verdict::search(
                format!("random: {tag} {name} = 0"),
                samples.iter().enumerate(),
                |(k, (x, y))| {
                    Witness::from_field(
                        format!("({tag}_X{k} {name})(Y{k})"),
                        &covariant_derivative_of_endo(l, e, x, y),
                    )
                },
            ));
        }
    }
    out
}

pub fn report(spec: &Path, seed: u64) -> Result<Value, CliError> {
    let loaded = load_spec(spec)?;
    let s = &loaded.structure;
    let canonical = ConnectionLaw::canonical(s);
    let well = ConnectionLaw::well_adapted(s);
    let mut warnings: Vec<String> = Vec::new();

    let mut verdicts = identity_suite(s).map_err(CliError::math)?;
    verdicts.push(fp_torsion_check(s).into_verdict());
    verdicts.extend(difference_verdicts(s));
    if s.adapted_frame().is_some() {
        for (l, tag) in [(&canonical, "canonical"), (&well, "well_adapted")] {
            let mut v = trace_condition_check(s, l).map_err(CliError::math)?;
            v.name = format!("{tag}: {}", v.name);
            verdicts.push(v);
        }
    } else {
        warnings.push("no adapted_frame: Christoffel and trace checks skipped".into());
    }
    verdicts.extend(random_checks(s, seed));

    let mut tensors = Map::new();
    tensors.insert(
        "connection_canonical".into(),
        Value::Object(connection_table(&canonical)),
    );
    tensors.insert("connection_well_adapted".into(), Value::Object(connection_table(&well)));
    tensors.insert("torsion_canonical".into(), Value::Object(torsion_table(&canonical)));
    tensors.insert("torsion_well_adapted".into(), Value::Object(torsion_table(&well)));
    tensors.insert("curvature_canonical".into(), Value::Object(curvature_table(&canonical)));
    tensors.insert("curvature_well_adapted".into(), Value::Object(curvature_table(&well)));
    tensors.insert("difference".into(), Value::Object(difference_table(s)));
    for (which, key) in [
        (TensorName::F, "nijenhuis_F"),
        (TensorName::P, "nijenhuis_P"),
        (TensorName::Fp, "fn_bracket"),
    ] {
        tensors.insert(key.into(), Value::Object(nijenhuis_table(s, which).0));
    }
    if s.adapted_frame().is_some() {
        for kind in [Kind::Canonical, Kind::WellAdapted] {
            let t = christoffels(s, kind)?;
            tensors.insert(
                format!("christoffels_{}", kind_name(kind)),
                Value::Object(christoffel_table(&t)),
            );
        }
    }

    let mut fields = vec![
        ("spec", to_value(&loaded.spec)),
        ("seed", json!(seed)),
        ("verdicts", verdict_list(&verdicts)),
        ("tensors", Value::Object(tensors)),
    ];
    let class: Map<String, Value> = classification(&loaded)?
        .into_iter()
        .map(|(k, v)| (k.into(), v))
        .collect();
    fields.push(("classification", Value::Object(class)));
    if s.dim() % 4 == 0 {
        let hs = match solve_hypersymplectic_metric(s, seed) {
            Ok(g) => {
                let c = classify_metric(s, &g).map_err(CliError::math)?;
                json!({ "found": true, "metric": print_matrix(g.matrix()), "signature": c.signature })
            }
            Err(e) => json!({ "found": false, "reason": e.to_string() }),
        };
        fields.push(("hypersymplectic", hs));
    }
    if loaded.omega.is_some() && loaded.h.is_some() {
        match bilagrangian_value(&loaded) {
            Ok(v) => fields.push(("bilagrangian", v)),
            Err(e) => warnings.push(format!("bi-Lagrangian assembly: {e}")),
        }
    }
    fields.push(("warnings", to_value(&warnings)));
    Ok(document("report", fields))
}
