use num_traits::Zero;

use super::{difference_torsion_form, torsion_of, ConnectionError, ConnectionLaw};
use crate::diagnostics::{Verdict, Witness};
use crate::exactalg::{rat, MultiPoly};
use crate::geometry::{adapted_labels, EndoField, FrameContext, VectorField};
use crate::structure::BiparaStructure;

fn basis(ctx: &FrameContext) -> Vec<VectorField> {
    (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect()
}

/// `T(X,Y) = ∇_X Y - ∇_Y X - [X,Y]`.
#[derive(Clone, Debug)]
pub struct TorsionTensor {
    law: ConnectionLaw,
    symbol: &'static str,
}

impl TorsionTensor {
    pub fn new(law: &ConnectionLaw) -> Self {
        let symbol = match law.kind() {
            super::ConnectionKind::WellAdapted => "T'",
            _ => "T",
        };
        TorsionTensor {
            law: law.clone(),
            symbol,
        }
    }

    pub fn law(&self) -> &ConnectionLaw {
        &self.law
    }

    pub fn eval(&self, x: &VectorField, y: &VectorField) -> VectorField {
        torsion_of(&|a, b| self.law.nabla(a, b), x, y)
    }

    /// `T(E_i, E_j)` on the context frame.
    pub fn component(&self, i: usize, j: usize) -> VectorField {
        let ctx = self.law.context();
        self.eval(&VectorField::basis(ctx, i), &VectorField::basis(ctx, j))
    }

    pub fn witness(&self) -> Option<Witness> {
        let ctx = self.law.context();
        let d = ctx.dim();
        (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).find_map(|(i, j)| {
            Witness::from_field(
                format!("{}({},{})", self.symbol, ctx.label(i), ctx.label(j)),
                &self.component(i, j),
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.witness().is_none()
    }
}

/// `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_{[X,Y]} Z`.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    law: ConnectionLaw,
}

impl CurvatureTensor {
    pub fn new(law: &ConnectionLaw) -> Self {
        CurvatureTensor { law: law.clone() }
    }

    pub fn eval(&self, x: &VectorField, y: &VectorField, z: &VectorField) -> VectorField {
        let l = &self.law;
        &(&l.nabla(x, &l.nabla(y, z)) - &l.nabla(y, &l.nabla(x, z))) - &l.nabla(&x.bracket(y), z)
    }

    /// `R(E_i,E_j)E_k` from the Christoffel symbols:
    /// `E_i(Γ^l_jk) - E_j(Γ^l_ik) + Γ^m_jk Γ^l_im - Γ^m_ik Γ^l_jm - c^m_ij Γ^l_mk`.
    pub fn component(&self, i: usize, j: usize, k: usize) -> VectorField {
        let ctx = self.law.context();
        let t = self.law.table();
        let d = ctx.dim();
        let ei = VectorField::basis(ctx, i);
        let ej = VectorField::basis(ctx, j);
        let mut out: Vec<MultiPoly> = (0..d)
            .map(|l| &ei.derive(t.get(j, k, l)) - &ej.derive(t.get(i, k, l)))
            .collect();
        for m in 0..d {
            let (gjk, gik) = (t.get(j, k, m), t.get(i, k, m));
            for (l, o) in out.iter_mut().enumerate() {
                if !gjk.is_zero() && !t.get(i, m, l).is_zero() {
                    *o += &(gjk * t.get(i, m, l));
                }
                if !gik.is_zero() && !t.get(j, m, l).is_zero() {
                    *o -= &(gik * t.get(j, m, l));
                }
            }
        }
        if let Some(c) = ctx.structure_constants() {
            for m in 0..d {
                let cm = c.get(i, j, m);
                if cm.is_zero() {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    *o -= &t.get(m, k, l).scale(cm);
                }
            }
        }
        VectorField::new(ctx, out).expect("context components")
    }

    pub fn witness(&self) -> Option<Witness> {
        let ctx = self.law.context();
        let d = ctx.dim();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let name = format!("R({},{}){}", ctx.label(i), ctx.label(j), ctx.label(k));
                    if let Some(w) = Witness::from_field(name, &self.component(i, j, k)) {
                        return Some(w);
                    }
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.witness().is_none()
    }
}

/// `A = ∇ - ∇'` expressed through the canonical torsion.
#[derive(Clone, Debug)]
pub struct DifferenceTensor {
    canonical: ConnectionLaw,
}

impl DifferenceTensor {
    pub fn new(s: &BiparaStructure) -> Self {
        DifferenceTensor {
            canonical: ConnectionLaw::canonical(s),
        }
    }

    pub fn structure(&self) -> &BiparaStructure {
        self.canonical.structure()
    }

    /// `(1/3)(F⁺T(F⁺X,F⁺Y) + PF⁺T(F⁺X,PF⁻Y) + PF⁻T(F⁻X,PF⁺Y) + F⁻T(F⁻X,F⁻Y))`.
    pub fn eval(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let law = &self.canonical;
        difference_torsion_form(law.structure(), &|a, b| torsion_of(&|u, v| law.nabla(u, v), a, b), x, y)
    }

    /// The same tensor written with brackets only.
    pub fn eval_brackets(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let s = self.structure();
        let pr = s.projectors();
        let (f, p) = (s.f(), s.p());
        let (fp, fm) = (&pr.f_plus, &pr.f_minus);
        let fx = f.apply(x);
        let (xp, xm) = (fp.apply(x), fm.apply(x));
        let (yp, ym) = (fp.apply(y), fm.apply(y));
        let (pxp, pxm) = (p.apply(&xp), p.apply(&xm));
        let (pyp, pym) = (p.apply(&yp), p.apply(&ym));
        let pfm = |v: &VectorField| p.apply(&fm.apply(v));
        let pfp = |v: &VectorField| p.apply(&fp.apply(v));
        let terms = [
            pfm(&fx.bracket(&pyp)),
            pfm(&pxp.bracket(&yp)),
            -&fp.apply(&fx.bracket(&yp)),
            fp.apply(&pxm.bracket(&pyp)),
            fm.apply(&fx.bracket(&ym)),
            fm.apply(&pxp.bracket(&pym)),
            -&pfp(&fx.bracket(&pym)),
            pfp(&pxm.bracket(&ym)),
        ];
        let mut acc = VectorField::zero(s.context());
        for t in &terms {
            acc = &acc + t;
        }
        acc.scale(&rat(1, 3))
    }

    pub fn component(&self, i: usize, j: usize) -> VectorField {
        let ctx = self.structure().context();
        self.eval(&VectorField::basis(ctx, i), &VectorField::basis(ctx, j))
    }

    pub fn witness(&self) -> Option<Witness> {
        let ctx = self.structure().context().clone();
        let d = ctx.dim();
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).find_map(|(i, j)| {
            Witness::from_field(format!("A({},{})", ctx.label(i), ctx.label(j)), &self.component(i, j))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.witness().is_none()
    }
}

/// `(∇_X e)(Y) = ∇_X(eY) - e(∇_X Y)`.
pub fn covariant_derivative_of_endo(
    law: &ConnectionLaw,
    e: &EndoField,
    x: &VectorField,
    y: &VectorField,
) -> VectorField {
    &law.nabla(x, &e.apply(y)) - &e.apply(&law.nabla(x, y))
}

/// `∇e ≡ 0`, checked on all frame pairs.
pub fn parallel_check(law: &ConnectionLaw, e: &EndoField, name: &str) -> Verdict {
    let ctx = law.context().clone();
    let b = basis(&ctx);
    let d = ctx.dim();
    Verdict::search(
        format!("nabla {name} = 0"),
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))),
        |(i, j)| {
            Witness::from_field(
                format!("(nabla_{} {name})({})", ctx.label(i), ctx.label(j)),
                &covariant_derivative_of_endo(law, e, &b[i], &b[j]),
            )
        },
    )
}

/// Whether `∇` maps sections of `T⁺_F`, `T⁻_F`, `T⁺_P` into themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub v1: Verdict,
    pub v2: Verdict,
    pub v3: Verdict,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.v1.holds && self.v2.holds && self.v3.holds
    }
}

pub fn distribution_preservation_check(law: &ConnectionLaw, s: &BiparaStructure) -> PreservationReport {
    let ctx = law.context().clone();
    let b = basis(&ctx);
    let d = ctx.dim();
    let pr = s.projectors();
    let pairs = || (0..d).flat_map(|i| (0..d).map(move |j| (i, j)));
    let check = |name: &str, inside: &EndoField, outside: &EndoField, tag: &str| {
        Verdict::search(format!("nabla preserves {name}"), pairs(), |(i, j)| {
            let v = outside.apply(&law.nabla(&b[i], &inside.apply(&b[j])));
            Witness::from_field(format!("{tag}(nabla_{} {name}({}))", ctx.label(i), ctx.label(j)), &v)
        })
    };
    PreservationReport {
        v1: check("V1", &pr.f_plus, &pr.f_minus, "F-"),
        v2: check("V2", &pr.f_minus, &pr.f_plus, "F+"),
        v3: check("V3", &pr.p_plus, &pr.p_minus, "P-"),
    }
}

/// `ω_b(T'(X_h,X_a)) + η_b(T'(X_h,Y_a)) = 0` and
/// `ω_b(T'(Y_h,X_a)) + η_b(T'(Y_h,Y_a)) = 0` for all `a, b, h`.
pub fn trace_condition_check(s: &BiparaStructure, law: &ConnectionLaw) -> Result<Verdict, ConnectionError> {
    let frame = s.adapted_frame().ok_or(ConnectionError::MissingAdaptedFrame)?;
    if law.context() != s.context() {
        return Err(crate::geometry::GeometryError::ContextMismatch.into());
    }
    let n = s.n();
    let fields = frame.fields();
    let labels = adapted_labels(n);
    let torsion = TorsionTensor::new(law);
    let mut items = Vec::new();
    for first in 0..2 * n {
        for a in 0..n {
            items.push((first, a));
        }
    }
    Ok(Verdict::search("trace condition", items, |(first, a)| {
        let tx = torsion.eval(&fields[first], &fields[a]);
        let ty = torsion.eval(&fields[first], &fields[n + a]);
        let cx = frame.coefficients(&tx);
        let cy = frame.coefficients(&ty);
        (0..n).find_map(|b| {
            let v = &cx[b] + &cy[n + b];
            Witness::scalar(
                format!(
                    "omega{b1}(T({h},{xa})) + eta{b1}(T({h},{ya}))",
                    b1 = b + 1,
                    h = labels[first],
                    xa = labels[a],
                    ya = labels[n + a]
                ),
                &v,
            )
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::structure::fixtures;

    #[test]
    fn fixture_torsions() {
        let flat = ConnectionLaw::canonical(&fixtures::flat(2));
        assert!(TorsionTensor::new(&flat).is_zero());
        assert!(CurvatureTensor::new(&flat).is_zero());
        let heis = ConnectionLaw::canonical(&fixtures::heis());
        let w = TorsionTensor::new(&heis).witness().unwrap();
        assert_eq!(w.to_string(), "T(X1,X2) = -Y1");
        assert!(CurvatureTensor::new(&heis).is_zero());
        let aff = ConnectionLaw::canonical(&fixtures::aff());
        assert_eq!(TorsionTensor::new(&aff).component(0, 1).to_string(), "-X1");
        let wa = ConnectionLaw::well_adapted(&fixtures::aff());
        assert_eq!(TorsionTensor::new(&wa).component(0, 1).to_string(), "-1/3*X1");
    }

    #[test]
    fn difference_forms_agree_on_fixtures() {
        for s in [fixtures::flat(1), fixtures::heis(), fixtures::aff()] {
            let a = DifferenceTensor::new(&s);
            let ctx = s.context().clone();
            for x in basis(&ctx) {
                for y in basis(&ctx) {
                    assert_eq!(a.eval(&x, &y), a.eval_brackets(&x, &y));
                }
            }
        }
        assert!(DifferenceTensor::new(&fixtures::heis()).is_zero());
        let a = DifferenceTensor::new(&fixtures::aff());
        assert_eq!(a.component(0, 1).to_string(), "-1/3*X1");
    }

    #[test]
    fn trace_condition_on_aff() {
        let s = fixtures::aff();
        assert!(
            trace_condition_check(&s, &ConnectionLaw::well_adapted(&s))
                .unwrap()
                .holds
        );
        let v = trace_condition_check(&s, &ConnectionLaw::canonical(&s)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().coefficient.constant_value(), Some(int(-1)));
    }

    #[test]
    fn curvature_formula_matches_nested_derivatives() {
        let s = crate::structure::generate_random_structure(&crate::structure::RandomParams {
            n: 2,
            degree: 1,
            seed: 3,
            twisted: true,
            ..Default::default()
        });
        let law = ConnectionLaw::canonical(&s);
        let r = CurvatureTensor::new(&law);
        let ctx = s.context().clone();
        let b = basis(&ctx);
        for (i, j, k) in [(0, 1, 2), (1, 3, 0), (2, 3, 3)] {
            assert_eq!(r.component(i, j, k), r.eval(&b[i], &b[j], &b[k]));
        }
    }
}
