//! Pseudo-Riemannian metrics adapted to a structure.

mod bilagrangian;
mod hypersymplectic;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::connections::{parallel_check, ConnectionLaw, TorsionTensor};
use crate::diagnostics::{Verdict, Witness};
use crate::exactalg::{mat_signature, AlgebraError, Rational, Signature};
use crate::geometry::{BilinearField, EndoField, FrameContext, GeometryError, VectorField};
use crate::structure::{BiparaStructure, StructureError};

pub use bilagrangian::{bilagrangian_assembly, BiLagrangian};
pub use hypersymplectic::{hypersymplectic_solutions, solve_hypersymplectic_metric};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("{0} is not symmetric")]
    NotSymmetric(&'static str),
    #[error("{0} is not antisymmetric")]
    NotAntisymmetric(&'static str),
    #[error("{0} is degenerate at the evaluation point")]
    Degenerate(&'static str),
    #[error("{0} is not positive definite at the evaluation point")]
    NotPositiveDefinite(&'static str),
    #[error("eigendistributions of F are not Lagrangian: omega(F.,F.) != -omega")]
    NotLagrangian,
    #[error("F does not split into equal-rank eigendistributions")]
    UnbalancedSplitting,
    #[error("constant-coefficient input required")]
    NonConstant,
    #[error("no nondegenerate solution found")]
    NoSolution,
    #[error("metric and structure live on different contexts")]
    ContextMismatch,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// `Some(ε)` iff `g(e·, e·) = ε g` identically.
pub fn metric_sign(g: &BilinearField, e: &EndoField) -> Option<Sign> {
    let pulled = g.pullback(e);
    if pulled == *g {
        Some(Sign::Plus)
    } else if pulled == g.scale(&Rational::from_integer((-1).into())) {
        Some(Sign::Minus)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricClass {
    pub eps1: Option<Sign>,
    pub eps2: Option<Sign>,
    /// Sign of `g(J·, J·)`, tested directly.
    pub eps_j: Option<Sign>,
    pub signature: Signature,
    /// For `(+,-)`, `(-,+)` and `(-,-)`: the metric must be neutral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neutral: Option<bool>,
}

impl MetricClass {
    pub fn signs(&self) -> Option<(Sign, Sign)> {
        Some((self.eps1?, self.eps2?))
    }
}

fn check_context(s: &BiparaStructure, g: &BilinearField) -> Result<(), MetricError> {
    if g.context() != s.context() {
        return Err(MetricError::ContextMismatch);
    }
    Ok(())
}

/// Signature of `g` at `point`.
pub fn signature_at(g: &BilinearField, point: &[Rational]) -> Result<Signature, MetricError> {
    Ok(mat_signature(&crate::exactalg::PolyMatrix::from_constant(
        g.matrix().vars(),
        &g.matrix().eval(point),
    ))?)
}

pub fn classify_metric(s: &BiparaStructure, g: &BilinearField) -> Result<MetricClass, MetricError> {
    classify_metric_at(s, g, &s.context().base_point())
}

pub fn classify_metric_at(
    s: &BiparaStructure,
    g: &BilinearField,
    point: &[Rational],
) -> Result<MetricClass, MetricError> {
    check_context(s, g)?;
    if !g.is_symmetric() {
        return Err(MetricError::NotSymmetric("metric"));
    }
    let signature = signature_at(g, point)?;
    if !signature.is_nondegenerate() {
        return Err(MetricError::Degenerate("metric"));
    }
    let eps1 = metric_sign(g, s.f());
    let eps2 = metric_sign(g, s.p());
    let eps_j = metric_sign(g, s.j());
    let neutral = match (eps1, eps2) {
        (Some(Sign::Plus), Some(Sign::Plus)) | (None, _) | (_, None) => None,
        _ => Some(signature.is_neutral()),
    };
    Ok(MetricClass {
        eps1,
        eps2,
        eps_j,
        signature,
        neutral,
    })
}

/// `G(X,Y) = H(X,Y) + H(FX,FY)`.
pub fn build_orthogonal_metric(s: &BiparaStructure, h: &BilinearField) -> Result<BilinearField, MetricError> {
    check_context(s, h)?;
    if !h.is_symmetric() {
        return Err(MetricError::NotSymmetric("H"));
    }
    if !signature_at(h, &s.context().base_point())?.is_positive_definite() {
        return Err(MetricError::NotPositiveDefinite("H"));
    }
    Ok(h.add(&h.pullback(s.f())))
}

fn basis(ctx: &FrameContext) -> Vec<VectorField> {
    (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect()
}

/// `(∇_X g)(Y,Z) = X(g(Y,Z)) - g(∇_X Y, Z) - g(Y, ∇_X Z)`.
pub fn metric_parallel_check(law: &ConnectionLaw, g: &BilinearField) -> Verdict {
    let ctx = law.context().clone();
    let e = basis(&ctx);
    let d = ctx.dim();
    let triples = (0..d).flat_map(|i| (0..d).flat_map(move |j| (j..d).map(move |k| (i, j, k))));
    Verdict::search("nabla g = 0", triples, |(i, j, k)| {
        let mut v = e[i].derive(&g.eval(&e[j], &e[k]));
        v -= &g.eval(&law.nabla(&e[i], &e[j]), &e[k]);
        v -= &g.eval(&e[j], &law.nabla(&e[i], &e[k]));
        Witness::scalar(
            format!("(nabla_{} g)({},{})", ctx.label(i), ctx.label(j), ctx.label(k)),
            &v,
        )
    })
}

/// `g(T(X,Y),Z)` is totally antisymmetric.
pub fn torsion_form_skew_check(law: &ConnectionLaw, g: &BilinearField) -> Verdict {
    let ctx = law.context().clone();
    let e = basis(&ctx);
    let d = ctx.dim();
    let t = TorsionTensor::new(law);
    let triples = (0..d).flat_map(|i| (i + 1..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))));
    Verdict::search("g(T(X,Y),Z) totally skew", triples, |(i, j, k)| {
        let a = g.eval(&t.eval(&e[i], &e[j]), &e[k]);
        let b = g.eval(&t.eval(&e[i], &e[k]), &e[j]);
        Witness::scalar(
            format!(
                "g(T({x},{y}),{z}) + g(T({x},{z}),{y})",
                x = ctx.label(i),
                y = ctx.label(j),
                z = ctx.label(k)
            ),
            &(&a + &b),
        )
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialMetrics {
    pub hypersymplectic: Verdict,
    pub paraquaternionic_hermitian: Verdict,
    pub norden: Verdict,
    pub riemannian_product: Verdict,
    pub hpkt: Verdict,
}

fn sign_verdict(name: &str, actual: Option<Sign>, wanted: Sign, what: &str) -> Verdict {
    if actual == Some(wanted) {
        Verdict::pass(name)
    } else {
        let got = actual.map_or("no sign", Sign::as_str);
        Verdict::fail_because(name, format!("{what} has sign {got}, need {wanted}"))
    }
}

fn all_of(name: &str, parts: &[&Verdict]) -> Verdict {
    Verdict::from_witness(name, parts.iter().find_map(|v| v.witness.clone()))
}

/// The named metric classes, with HPKT tested for `law` (canonical by
/// default).
pub fn special_metric_predicates(
    s: &BiparaStructure,
    g: &BilinearField,
    law: Option<&ConnectionLaw>,
) -> Result<SpecialMetrics, MetricError> {
    let class = classify_metric(s, g)?;
    let neutral = if class.signature.is_neutral() {
        Verdict::pass("neutral")
    } else {
        Verdict::fail_because("neutral", format!("signature {}", class.signature))
    };
    let e1m = sign_verdict("g(F.,F.) = -g", class.eps1, Sign::Minus, "g(F.,F.)");
    let e2m = sign_verdict("g(P.,P.) = -g", class.eps2, Sign::Minus, "g(P.,P.)");
    let e1p = sign_verdict("g(F.,F.) = g", class.eps1, Sign::Plus, "g(F.,F.)");
    let ejp = sign_verdict("g(J.,J.) = g", class.eps_j, Sign::Plus, "g(J.,J.)");
    let hypersymplectic = if !s.dim().is_multiple_of(4) {
        Verdict::fail_because("hypersymplectic", "dimension not divisible by 4")
    } else {
        all_of("hypersymplectic", &[&ejp, &e1m, &neutral])
    };
    let paraquaternionic_hermitian = all_of("paraquaternionic Hermitian", &[&e1m, &e2m]);
    let norden = all_of(
        "Norden",
        &[&sign_verdict("g(J.,J.) = -g", class.eps_j, Sign::Minus, "g(J.,J.)")],
    );
    let pd = if class.signature.is_positive_definite() {
        Verdict::pass("positive definite")
    } else {
        Verdict::fail_because("positive definite", format!("signature {}", class.signature))
    };
    let riemannian_product = all_of("Riemannian almost product", &[&e1p, &pd]);
    let canonical;
    let law = match law {
        Some(l) => l,
        None => {
            canonical = ConnectionLaw::canonical(s);
            &canonical
        }
    };
    let hpkt = all_of(
        "HPKT",
        &[
            &e1m,
            &e2m,
            &metric_parallel_check(law, g),
            &parallel_check(law, s.f(), "F"),
            &parallel_check(law, s.p(), "P"),
            &parallel_check(law, s.j(), "J"),
            &torsion_form_skew_check(law, g),
        ],
    );
    Ok(SpecialMetrics {
        hypersymplectic,
        paraquaternionic_hermitian,
        norden,
        riemannian_product,
        hpkt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::QMatrix;
    use crate::structure::fixtures;

    fn bil(s: &BiparaStructure, rows: &[&[i64]]) -> BilinearField {
        BilinearField::from_constant(s.context(), &QMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn flat_examples() {
        let s = fixtures::flat(2);
        let c = classify_metric(
            &s,
            &bil(&s, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        )
        .unwrap();
        assert_eq!(c.signs(), Some((Sign::Plus, Sign::Plus)));
        assert_eq!(c.signature, Signature::new(4, 0, 0));
        let c = classify_metric(
            &s,
            &bil(&s, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
        )
        .unwrap();
        assert_eq!(c.signs(), Some((Sign::Minus, Sign::Plus)));
        assert_eq!(c.signature, Signature::new(2, 2, 0));
        assert_eq!(c.neutral, Some(true));
        let c = classify_metric(
            &s,
            &bil(&s, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
        )
        .unwrap();
        assert_eq!(c.signs(), Some((Sign::Plus, Sign::Minus)));
        assert_eq!(c.eps_j, Some(Sign::Minus));
        assert_eq!(c.signature, Signature::new(2, 2, 0));
    }

    #[test]
    fn degenerate_and_asymmetric() {
        let s = fixtures::flat(1);
        assert_eq!(
            classify_metric(&s, &bil(&s, &[&[1, 0], &[0, 0]])),
            Err(MetricError::Degenerate("metric"))
        );
        assert_eq!(
            classify_metric(&s, &bil(&s, &[&[1, 1], &[0, 1]])),
            Err(MetricError::NotSymmetric("metric"))
        );
    }

    #[test]
    fn orthogonal_metric() {
        let s = fixtures::flat(2);
        let id = bil(&s, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(
            build_orthogonal_metric(&s, &id).unwrap(),
            id.scale(&Rational::from_integer(2.into()))
        );
        let h = bil(&s, &[&[1, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(
            build_orthogonal_metric(&s, &h),
            Err(MetricError::NotPositiveDefinite("H"))
        );
        let h = bil(&s, &[&[2, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 2, 0], &[0, 0, 0, 1]]);
        let g = build_orthogonal_metric(&s, &h).unwrap();
        assert_eq!(classify_metric(&s, &g).unwrap().eps1, Some(Sign::Plus));
        let pr = s.projectors();
        for x in basis(s.context()) {
            for y in basis(s.context()) {
                assert!(g.eval(&pr.f_plus.apply(&x), &pr.f_minus.apply(&y)).is_zero());
            }
        }
    }

    #[test]
    fn euclidean_is_not_hypersymplectic() {
        let s = fixtures::flat(2);
        let id = bil(&s, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let sp = special_metric_predicates(&s, &id, None).unwrap();
        assert!(!sp.hypersymplectic.holds);
        assert!(sp.riemannian_product.holds);
        assert!(!sp.hpkt.holds);
        let one = fixtures::flat(1);
        let sp = special_metric_predicates(&one, &bil(&one, &[&[1, 0], &[0, 1]]), None).unwrap();
        assert_eq!(
            sp.hypersymplectic.witness.unwrap().expression,
            "dimension not divisible by 4"
        );
    }

    #[test]
    fn heis_torsion_form() {
        let s = fixtures::heis();
        let g = bil(&s, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let law = ConnectionLaw::canonical(&s);
        assert!(metric_parallel_check(&law, &g).holds);
        // g(T(X1,X2),Y1) = -1 but g(T(X1,Y1),X2) = 0.
        assert!(!torsion_form_skew_check(&law, &g).holds);
    }
}
