use serde::Serialize;

use super::{DiagnosticsError, FnBracket, NijenhuisTensor, Verdict, Witness};
use crate::connections::{
    distribution_preservation_check, parallel_check, trace_condition_check, ChristoffelTable, ConnectionLaw,
    CurvatureTensor, DifferenceTensor, TorsionTensor,
};
use crate::geometry::{EndoField, FrameContext, PolyMap, VectorField};
use crate::structure::BiparaStructure;

fn basis(ctx: &FrameContext) -> Vec<VectorField> {
    (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect()
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (0..d).map(move |j| (i, j)))
}

/// Direct involutivity of `T±_F` and `T±_P`: the bracket of two sections of
/// one eigendistribution has no component in the other.
pub fn involutivity_check(s: &BiparaStructure) -> Verdict {
    let ctx = s.context().clone();
    let b = basis(&ctx);
    let pr = s.projectors();
    let cases = [
        ("F+", &pr.f_plus, &pr.f_minus),
        ("F-", &pr.f_minus, &pr.f_plus),
        ("P+", &pr.p_plus, &pr.p_minus),
        ("P-", &pr.p_minus, &pr.p_plus),
    ];
    Verdict::search(
        "eigendistributions involutive",
        cases.iter().flat_map(|c| pairs(ctx.dim()).map(move |ij| (c, ij))),
        |((tag, inside, outside), (i, j))| {
            let v = outside.apply(&inside.apply(&b[i]).bracket(&inside.apply(&b[j])));
            Witness::from_field(format!("[{tag}{},{tag}{}] off {tag}", ctx.label(i), ctx.label(j)), &v)
        },
    )
}

/// The three equivalent integrability conditions, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityReport {
    pub nijenhuis: Verdict,
    pub involutive: Verdict,
    pub fn_bracket: Verdict,
    pub torsion_free: Verdict,
    pub verdict: Verdict,
}

pub fn integrability_verdict(s: &BiparaStructure) -> Result<IntegrabilityReport, DiagnosticsError> {
    let nf = NijenhuisTensor::new(s.f(), "F");
    let np = NijenhuisTensor::new(s.p(), "P");
    let nijenhuis = Verdict::from_witness("N_F = 0 and N_P = 0", nf.witness().or_else(|| np.witness()));
    let involutive = involutivity_check(s);
    let fn_bracket = Verdict::from_witness("[F,P] = 0", FnBracket::new(s).witness());
    let torsion_free = Verdict::from_witness(
        "canonical torsion = 0",
        TorsionTensor::new(&ConnectionLaw::canonical(s)).witness(),
    );
    let all = [&nijenhuis, &involutive, &fn_bracket, &torsion_free];
    if all.iter().any(|v| v.holds != nijenhuis.holds) {
        let detail = all.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        return Err(DiagnosticsError::Inconsistent {
            check: "integrability",
            detail,
        });
    }
    let verdict = Verdict {
        name: "integrable".into(),
        holds: torsion_free.holds,
        witness: torsion_free.witness.clone(),
    };
    Ok(IntegrabilityReport {
        nijenhuis,
        involutive,
        fn_bracket,
        torsion_free,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessReport {
    pub torsion: Verdict,
    pub curvature: Verdict,
    pub verdict: Verdict,
}

/// Flat iff the canonical connection has `T = 0` and `R = 0`.
pub fn flatness_verdict(s: &BiparaStructure) -> FlatnessReport {
    let law = ConnectionLaw::canonical(s);
    let torsion = Verdict::from_witness("T = 0", TorsionTensor::new(&law).witness());
    let curvature = Verdict::from_witness("R = 0", CurvatureTensor::new(&law).witness());
    let verdict = Verdict::from_witness("flat", torsion.witness.clone().or_else(|| curvature.witness.clone()));
    FlatnessReport {
        torsion,
        curvature,
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub brackets: Verdict,
    pub f: Verdict,
    pub p: Verdict,
    /// Present when the map intertwines both tensors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connections: Option<Verdict>,
    pub verdict: Verdict,
}

fn endo_witness(name: &str, ctx: &FrameContext, lhs: &EndoField, rhs: &EndoField) -> Verdict {
    let diff = lhs.sub(rhs);
    Verdict::search(name.to_string(), 0..ctx.dim(), |i| {
        Witness::from_field(
            format!("{name}({})", ctx.label(i)),
            &diff.apply(&VectorField::basis(ctx, i)),
        )
    })
}

/// Whether `map` is a diffeomorphism between the two structures, i.e.
/// `φ∗F = F'φ∗` and `φ∗P = P'φ∗`. When it is, the direct image of the
/// canonical connection of `a` must be the canonical connection of `b`.
pub fn equivalence_check(
    a: &BiparaStructure,
    b: &BiparaStructure,
    map: &PolyMap,
) -> Result<EquivalenceReport, DiagnosticsError> {
    if map.source() != a.context() || map.target() != b.context() {
        return Err(crate::geometry::GeometryError::ContextMismatch.into());
    }
    let ctx = b.context();
    let brackets = if map.is_bracket_preserving() {
        Verdict::pass("map preserves brackets")
    } else {
        Verdict::fail_because("map preserves brackets", "map is not a Lie algebra homomorphism")
    };
    let f = endo_witness("phi_*F - F'phi_*", ctx, &map.push_endo(a.f()), b.f());
    let p = endo_witness("phi_*P - P'phi_*", ctx, &map.push_endo(a.p()), b.p());
    let mut connections = None;
    if brackets.holds && f.holds && p.holds {
        let pushed = ConnectionLaw::canonical(a).pushforward(map)?;
        let target = ConnectionLaw::canonical(b);
        let e = basis(ctx);
        let v = Verdict::search("direct image of canonical connection", pairs(ctx.dim()), |(i, j)| {
            Witness::from_field(
                format!("phi_*nabla_{0} {1} - nabla'_{0} {1}", ctx.label(i), ctx.label(j)),
                &(&pushed.nabla(&e[i], &e[j]) - &target.nabla(&e[i], &e[j])),
            )
        });
        if !v.holds {
            return Err(DiagnosticsError::Inconsistent {
                check: "equivalence",
                detail: v.to_string(),
            });
        }
        connections = Some(v);
    }
    let verdict = Verdict::from_witness("equivalent", [&brackets, &f, &p].iter().find_map(|v| v.witness.clone()));
    Ok(EquivalenceReport {
        brackets,
        f,
        p,
        connections,
        verdict,
    })
}

/// `S` commutes with `F` and `P` iff its matrix in the adapted frame is
/// `diag(A, A)`. Both sides are evaluated and must agree.
pub fn commutant_check(s: &BiparaStructure, endo: &EndoField) -> Result<Verdict, DiagnosticsError> {
    let frame = s.adapted_frame().ok_or(DiagnosticsError::MissingAdaptedFrame)?;
    if endo.context() != s.context() {
        return Err(crate::geometry::GeometryError::ContextMismatch.into());
    }
    let ctx = s.context();
    let commutes_f = endo_witness("SF - FS", ctx, &endo.compose(s.f()), &s.f().compose(endo));
    let commutes_p = endo_witness("SP - PS", ctx, &endo.compose(s.p()), &s.p().compose(endo));
    let m = frame.endo_matrix(endo);
    let n = s.n();
    let block_ok = (0..n).all(|r| {
        (0..n).all(|c| m.get(r, c) == m.get(r + n, c + n) && m.get(r + n, c).is_zero() && m.get(r, c + n).is_zero())
    });
    let commutes = commutes_f.holds && commutes_p.holds;
    if commutes != block_ok {
        return Err(DiagnosticsError::Inconsistent {
            check: "commutant",
            detail: format!("commutation {commutes}, block form {block_ok}"),
        });
    }
    Ok(Verdict {
        name: "S in adjoint algebra".into(),
        holds: commutes,
        witness: commutes_f.witness.or(commutes_p.witness),
    })
}

/// Runs every identity that must hold for any valid structure, plus the
/// integrability and flatness verdicts, and returns one verdict per check.
pub fn identity_suite(s: &BiparaStructure) -> Result<Vec<Verdict>, DiagnosticsError> {
    let ctx = s.context().clone();
    let e = basis(&ctx);
    let d = ctx.dim();
    let canonical = ConnectionLaw::canonical(s);
    let well = ConnectionLaw::well_adapted(s);
    let mut out = Vec::new();
    for (law, tag) in [(&canonical, "canonical"), (&well, "well_adapted")] {
        for (endo, name) in [(s.f(), "F"), (s.p(), "P"), (s.j(), "J")] {
            let mut v = parallel_check(law, endo, name);
            v.name = format!("{tag}: {}", v.name);
            out.push(v);
        }
        let pres = distribution_preservation_check(law, s);
        let parallel = out[out.len() - 3].holds && out[out.len() - 2].holds;
        if pres.holds() != parallel {
            return Err(DiagnosticsError::Inconsistent {
                check: "distribution preservation",
                detail: format!("{}; {}; {}", pres.v1, pres.v2, pres.v3),
            });
        }
        out.push(Verdict {
            name: format!("{tag}: preserves V1, V2, V3"),
            holds: pres.holds(),
            witness: [pres.v1, pres.v2, pres.v3].into_iter().find_map(|v| v.witness),
        });
    }
    let torsion = TorsionTensor::new(&canonical);
    let pr = s.projectors();
    out.push(Verdict::search("canonical: T(V1,V2) = 0", pairs(d), |(i, j)| {
        Witness::from_field(
            format!("T(F+{},F-{})", ctx.label(i), ctx.label(j)),
            &torsion.eval(&pr.f_plus.apply(&e[i]), &pr.f_minus.apply(&e[j])),
        )
    }));
    let a = DifferenceTensor::new(s);
    out.push(Verdict::search("A: bracket form = torsion form", pairs(d), |(i, j)| {
        Witness::from_field(
            format!("A({},{}) difference", ctx.label(i), ctx.label(j)),
            &(&a.eval(&e[i], &e[j]) - &a.eval_brackets(&e[i], &e[j])),
        )
    }));
    out.push(Verdict::search("well_adapted = canonical - A", pairs(d), |(i, j)| {
        let lhs = well.nabla(&e[i], &e[j]);
        let rhs = &canonical.nabla(&e[i], &e[j]) - &a.eval(&e[i], &e[j]);
        Witness::from_field(
            format!("nabla'_{} {} residual", ctx.label(i), ctx.label(j)),
            &(&lhs - &rhs),
        )
    }));
    if let Some(frame) = s.adapted_frame() {
        let fields = frame.fields();
        let labels = crate::geometry::adapted_labels(s.n());
        for (table, law, tag) in [
            (ChristoffelTable::canonical(s)?, &canonical, "canonical"),
            (ChristoffelTable::well_adapted(s)?, &well, "well_adapted"),
        ] {
            out.push(Verdict::search(
                format!("{tag}: Christoffel table reconstructs law"),
                pairs(fields.len()),
                |(i, j)| {
                    Witness::from_field(
                        format!("nabla_{} {} residual", labels[i], labels[j]),
                        &(&table.reconstruct(&fields[i], &fields[j]) - &law.nabla(&fields[i], &fields[j])),
                    )
                },
            ));
        }
        let mut tc = trace_condition_check(s, &well)?;
        tc.name = "well_adapted: trace condition".into();
        out.push(tc);
    }
    out.push(super::fp_torsion_check(s).into_verdict());
    let integ = integrability_verdict(s)?;
    if integ.verdict.holds {
        out.push(Verdict::from_witness("integrable implies A = 0", a.witness()));
    }
    out.push(integ.verdict);
    out.push(flatness_verdict(s).verdict);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::QMatrix;
    use crate::structure::{fixtures, generate_random_structure, random_unipotent_map, RandomParams};

    #[test]
    fn integrability_on_fixtures() {
        assert!(integrability_verdict(&fixtures::flat(2)).unwrap().verdict.holds);
        let heis = integrability_verdict(&fixtures::heis()).unwrap();
        assert!(!heis.verdict.holds);
        assert_eq!(heis.verdict.witness.unwrap().to_string(), "T(X1,X2) = -Y1");
        assert!(!integrability_verdict(&fixtures::aff()).unwrap().verdict.holds);
    }

    #[test]
    fn flatness_on_fixtures() {
        assert!(flatness_verdict(&fixtures::flat(1)).verdict.holds);
        let heis = flatness_verdict(&fixtures::heis());
        assert!(!heis.verdict.holds);
        assert!(!heis.torsion.holds);
        assert!(heis.curvature.holds);
    }

    #[test]
    fn conjugate_is_equivalent() {
        let map = random_unipotent_map(2, 2, 11);
        let flat = fixtures::flat(2);
        let pushed = flat.pushforward(&map).unwrap();
        let r = equivalence_check(&flat, &pushed, &map).unwrap();
        assert!(r.verdict.holds);
        assert!(r.connections.unwrap().holds);
        let id = PolyMap::identity(flat.context());
        assert!(equivalence_check(&flat, &flat, &id).unwrap().verdict.holds);
    }

    #[test]
    fn heis_is_not_flat_abelian() {
        let heis = fixtures::heis();
        let flat = fixtures::flat_abelian(2);
        for m in [
            QMatrix::identity(4),
            QMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]),
        ] {
            let map = PolyMap::linear(heis.context(), flat.context(), &m).unwrap();
            let r = equivalence_check(&heis, &flat, &map).unwrap();
            assert!(!r.verdict.holds);
            assert!(!r.brackets.holds);
        }
    }

    #[test]
    fn context_mismatch() {
        let flat = fixtures::flat(1);
        let map = PolyMap::identity(fixtures::flat(2).context());
        assert!(equivalence_check(&flat, &flat, &map).is_err());
    }

    #[test]
    fn commutant() {
        let s = fixtures::heis();
        let ctx = s.context();
        assert!(commutant_check(&s, &EndoField::identity(ctx)).unwrap().holds);
        assert!(!commutant_check(&s, s.f()).unwrap().holds);
        let q = QMatrix::from_i64(&[&[2, 3, 0, 0], &[-1, 5, 0, 0], &[0, 0, 2, 3], &[0, 0, -1, 5]]);
        let e = EndoField::from_constant(ctx, &q).unwrap();
        assert!(commutant_check(&s, &e).unwrap().holds);
    }

    #[test]
    fn suite_passes_on_random_structures() {
        for (seed, twisted) in [(1, false), (2, true), (5, true)] {
            let s = generate_random_structure(&RandomParams {
                n: 1,
                degree: 1,
                seed,
                twisted,
                ..Default::default()
            });
            let expect_integrable = !twisted;
            let v = identity_suite(&s).unwrap();
            for x in &v[..v.len() - 2] {
                assert!(x.holds, "{x}");
            }
            if expect_integrable {
                assert!(v[v.len() - 2].holds);
            }
        }
    }
}
