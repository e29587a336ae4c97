use num_traits::Zero;
use serde::Serialize;

use super::{classify_metric, metric_sign, signature_at, MetricError, Sign};
use crate::diagnostics::Verdict;
use crate::exactalg::{rational_sqrt, QMatrix, Rational};
use crate::geometry::{BilinearField, EndoField};
use crate::structure::{structure_failures, BiparaStructure};

/// Output of the bi-Lagrangian construction: `G`, the almost complex `J`
/// with `ω = G(J·,·)`, `P = J∘F`, the para-Kähler metric `g = ω(F·,·)`,
/// and the five verdicts.
#[derive(Clone, Debug)]
pub struct BiLagrangian {
    pub big_g: BilinearField,
    pub j: EndoField,
    pub p: EndoField,
    pub g: BilinearField,
    pub structure: Option<BiparaStructure>,
    /// `ω = c·G(J·,·)` for this `c`.
    pub scale: Rational,
    /// Whether `G` was rebuilt on `T⁻_F` to make `J² = -Id`.
    pub adjusted: bool,
    pub verdicts: Vec<Verdict>,
}

#[derive(Serialize)]
struct Summary<'a> {
    adjusted: bool,
    scale: String,
    verdicts: &'a [Verdict],
}

impl Serialize for BiLagrangian {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Summary {
            adjusted: self.adjusted,
            scale: crate::exactalg::format_rational(&self.scale),
            verdicts: &self.verdicts,
        }
        .serialize(s)
    }
}

fn constant(m: &crate::exactalg::PolyMatrix) -> Result<QMatrix, MetricError> {
    m.to_constant().ok_or(MetricError::NonConstant)
}

fn stack_columns(cols: &[Vec<Rational>], d: usize) -> QMatrix {
    let mut m = QMatrix::zeros(d, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    m
}

/// `K = G⁻¹Ωᵀ` solves `ω(X,Y) = G(KX,Y)`. Returns `(J, c)` if `-K² = c²·Id`.
fn normalized_k(omega: &QMatrix, g: &QMatrix) -> Option<(QMatrix, Rational)> {
    let k = g.inverse()?.mul(&omega.transpose());
    let minus_k2 = k.mul(&k).scale(&Rational::from_integer((-1).into()));
    let lambda = minus_k2.get(0, 0).clone();
    let d = omega.rows();
    if lambda.is_zero() || minus_k2 != QMatrix::identity(d).scale(&lambda) {
        return None;
    }
    let c = rational_sqrt(&lambda)?;
    Some((k.scale(&(Rational::from_integer(1.into()) / &c)), c))
}

/// Keeps `G` on `T⁺_F` and replaces it on `T⁻_F` by the transport of the
/// `T⁺_F` block through `ω`, which makes `G⁻¹Ωᵀ` square to `-Id`.
fn transported_metric(omega: &QMatrix, g: &QMatrix, f: &QMatrix) -> Result<QMatrix, MetricError> {
    let d = f.rows();
    let id = QMatrix::identity(d);
    let plus = f.sub(&id).nullspace();
    let minus = f.add(&id).nullspace();
    if plus.len() != minus.len() {
        return Err(MetricError::UnbalancedSplitting);
    }
    let n = plus.len();
    let b = stack_columns(&[plus, minus].concat(), d);
    let g_ad = b.transpose().mul(g).mul(&b);
    let w_ad = b.transpose().mul(omega).mul(&b);
    let block = |m: &QMatrix, r0: usize, c0: usize| {
        let mut out = QMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, m.get(r0 + r, c0 + c).clone());
            }
        }
        out
    };
    let g1 = block(&g_ad, 0, 0);
    let a = block(&w_ad, 0, n);
    let g2 = a
        .transpose()
        .mul(&g1.inverse().ok_or(MetricError::Degenerate("G"))?)
        .mul(&a);
    let mut new = QMatrix::zeros(d, d);
    for r in 0..n {
        for c in 0..n {
            new.set(r, c, g1.get(r, c).clone());
            new.set(n + r, n + c, g2.get(r, c).clone());
        }
    }
    let b_inv = b.inverse().ok_or(MetricError::UnbalancedSplitting)?;
    Ok(b_inv.transpose().mul(&new).mul(&b_inv))
}

fn check(name: &str, ok: bool, reason: impl FnOnce() -> String) -> Verdict {
    if ok {
        Verdict::pass(name)
    } else {
        Verdict::fail_because(name, reason())
    }
}

pub fn bilagrangian_assembly(
    omega: &BilinearField,
    f: &EndoField,
    h: &BilinearField,
) -> Result<BiLagrangian, MetricError> {
    let ctx = omega.context().clone();
    if f.context() != &ctx || h.context() != &ctx {
        return Err(MetricError::ContextMismatch);
    }
    let w = constant(omega.matrix())?;
    let fq = constant(f.matrix())?;
    let hq = constant(h.matrix())?;
    if !omega.is_antisymmetric() {
        return Err(MetricError::NotAntisymmetric("omega"));
    }
    if w.det().is_zero() {
        return Err(MetricError::Degenerate("omega"));
    }
    if !f.square().is_identity() {
        return Err(MetricError::UnbalancedSplitting);
    }
    if fq.transpose().mul(&w).mul(&fq) != w.scale(&Rational::from_integer((-1).into())) {
        return Err(MetricError::NotLagrangian);
    }
    if !h.is_symmetric() {
        return Err(MetricError::NotSymmetric("H"));
    }
    if !signature_at(h, &ctx.base_point())?.is_positive_definite() {
        return Err(MetricError::NotPositiveDefinite("H"));
    }
    let mut gq = hq.add(&fq.transpose().mul(&hq).mul(&fq));
    let mut adjusted = false;
    let (jq, scale) = match normalized_k(&w, &gq) {
        Some(found) => found,
        None => {
            gq = transported_metric(&w, &gq, &fq)?;
            adjusted = true;
            normalized_k(&w, &gq).expect("transported metric makes K a complex structure")
        }
    };
    let big_g = BilinearField::from_constant(&ctx, &gq)?;
    let j = EndoField::from_constant(&ctx, &jq)?;
    let p = j.compose(f);
    let g = BilinearField::from_constant(&ctx, &fq.transpose().mul(&w))?;

    let failures = structure_failures(f, &p);
    let structure = if failures.is_empty() {
        Some(BiparaStructure::new(f.clone(), p.clone())?)
    } else {
        None
    };
    let v1 = check(
        "(1) (F, P = J F) is an almost biparacomplex structure",
        failures.is_empty(),
        || failures.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
    );
    let g_sig = signature_at(&g, &ctx.base_point())?;
    let v2 = check(
        "(2) (J, g) is Norden",
        g.is_symmetric() && g_sig.is_nondegenerate() && metric_sign(&g, &j) == Some(Sign::Minus),
        || "g(J.,J.) != -g".into(),
    );
    let big_sig = signature_at(&big_g, &ctx.base_point())?;
    let v3 = check(
        "(3) (F, G) is Riemannian almost product",
        big_sig.is_positive_definite() && metric_sign(&big_g, f) == Some(Sign::Plus),
        || format!("G(F.,F.) = G and G positive definite fail, signature {big_sig}"),
    );
    let signs = |metric: &BilinearField| -> Option<(Sign, Sign)> {
        let s = structure.as_ref()?;
        classify_metric(s, metric).ok()?.signs()
    };
    let gs = signs(&g);
    let v4 = check("(4) (F, P, g) is (-,+)", gs == Some((Sign::Minus, Sign::Plus)), || {
        format!("signs {gs:?}")
    });
    let bs = signs(&big_g);
    let v5 = check("(5) (F, P, G) is (+,+)", bs == Some((Sign::Plus, Sign::Plus)), || {
        format!("signs {bs:?}")
    });
    Ok(BiLagrangian {
        big_g,
        j,
        p,
        g,
        structure,
        scale,
        adjusted,
        verdicts: vec![v1, v2, v3, v4, v5],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::geometry::FrameContext;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64(rows)
    }

    #[test]
    fn plane_model() {
        let ctx = FrameContext::coordinates(1);
        let omega = BilinearField::from_constant(&ctx, &q(&[&[0, 1], &[-1, 0]])).unwrap();
        let f = EndoField::from_constant(&ctx, &q(&[&[1, 0], &[0, -1]])).unwrap();
        let h = BilinearField::from_constant(&ctx, &QMatrix::identity(2)).unwrap();
        let out = bilagrangian_assembly(&omega, &f, &h).unwrap();
        assert_eq!(
            out.big_g.matrix().to_constant().unwrap(),
            QMatrix::identity(2).scale(&int(2))
        );
        assert_eq!(out.j.square(), EndoField::identity(&ctx).scale(&int(-1)));
        assert!(!out.adjusted);
        for v in &out.verdicts {
            assert!(v.holds, "{v}");
        }
    }

    #[test]
    fn four_dimensional_model_with_skewed_h() {
        let ctx = FrameContext::coordinates(2);
        let omega = BilinearField::from_constant(
            &ctx,
            &q(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]),
        )
        .unwrap();
        let f = EndoField::from_constant(&ctx, &crate::structure::diag_plus_minus(2)).unwrap();
        let h = BilinearField::from_constant(&ctx, &q(&[&[3, 1, 1, 0], &[1, 2, 0, 0], &[1, 0, 2, 0], &[0, 0, 0, 1]]))
            .unwrap();
        let out = bilagrangian_assembly(&omega, &f, &h).unwrap();
        assert!(out.adjusted);
        for v in &out.verdicts {
            assert!(v.holds, "{v}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let ctx = FrameContext::coordinates(1);
        let f = EndoField::from_constant(&ctx, &q(&[&[1, 0], &[0, -1]])).unwrap();
        let h = BilinearField::from_constant(&ctx, &QMatrix::identity(2)).unwrap();
        let zero = BilinearField::from_constant(&ctx, &QMatrix::zeros(2, 2)).unwrap();
        assert_eq!(
            bilagrangian_assembly(&zero, &f, &h).unwrap_err(),
            MetricError::Degenerate("omega")
        );
        let omega = BilinearField::from_constant(&ctx, &q(&[&[0, 1], &[-1, 0]])).unwrap();
        let ctx4 = FrameContext::coordinates(2);
        let omega4 = BilinearField::from_constant(
            &ctx4,
            &q(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]),
        )
        .unwrap();
        let f4 = EndoField::from_constant(
            &ctx4,
            &q(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]),
        )
        .unwrap();
        let h4 = BilinearField::from_constant(&ctx4, &QMatrix::identity(4)).unwrap();
        assert_eq!(
            bilagrangian_assembly(&omega4, &f4, &h4).unwrap_err(),
            MetricError::NotLagrangian
        );
        let neg = BilinearField::from_constant(&ctx, &QMatrix::identity(2).scale(&int(-1))).unwrap();
        assert_eq!(
            bilagrangian_assembly(&omega, &f, &neg).unwrap_err(),
            MetricError::NotPositiveDefinite("H")
        );
    }
}
