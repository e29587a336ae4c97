//! Linear connections adapted to a structure: the canonical connection, the
//! well-adapted connection, custom laws given by Christoffel symbols, and
//! direct images under maps.

mod christoffel;
mod tensors;

use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{rat, MultiPoly};
use crate::geometry::{FrameContext, GeometryError, PolyMap, VectorField};
use crate::structure::{BiparaStructure, StructureError};

pub use christoffel::ChristoffelTable;
pub use tensors::{
    covariant_derivative_of_endo, distribution_preservation_check, parallel_check, trace_condition_check,
    CurvatureTensor, DifferenceTensor, PreservationReport, TorsionTensor,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionKind {
    Canonical,
    WellAdapted,
    Custom,
}

impl ConnectionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConnectionKind::Canonical => "canonical",
            ConnectionKind::WellAdapted => "well_adapted",
            ConnectionKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("no adapted frame attached")]
    MissingAdaptedFrame,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("expected {expected} Christoffel symbols, got {got}")]
    WrongTableSize { expected: usize, got: usize },
}

/// Christoffel symbols on the context frame: `Γ^k_ij` is the `k`-th
/// component of `∇_{E_i} E_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameTable {
    dim: usize,
    gamma: Vec<MultiPoly>,
}

impl FrameTable {
    pub fn zeros(ctx: &FrameContext) -> Self {
        let d = ctx.dim();
        FrameTable {
            dim: d,
            gamma: vec![ctx.zero(); d * d * d],
        }
    }

    pub fn from_fn(ctx: &FrameContext, mut f: impl FnMut(usize, usize) -> VectorField) -> Self {
        let d = ctx.dim();
        let mut gamma = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                gamma.extend(f(i, j).components().iter().cloned());
            }
        }
        FrameTable { dim: d, gamma }
    }

    /// From `Γ^k_ij` listed with `k` fastest, then `j`, then `i`.
    pub fn from_flat(ctx: &FrameContext, gamma: Vec<MultiPoly>) -> Result<Self, ConnectionError> {
        let d = ctx.dim();
        if gamma.len() != d * d * d {
            return Err(ConnectionError::WrongTableSize {
                expected: d * d * d,
                got: gamma.len(),
            });
        }
        let v = VectorField::new(ctx, gamma)?;
        Ok(FrameTable {
            dim: d,
            gamma: v.components().to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &MultiPoly {
        &self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: MultiPoly) {
        self.gamma[(i * self.dim + j) * self.dim + k] = value;
    }

    /// Components of `∇_{E_i} E_j`.
    pub fn column(&self, i: usize, j: usize) -> &[MultiPoly] {
        let s = (i * self.dim + j) * self.dim;
        &self.gamma[s..s + self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(MultiPoly::is_zero)
    }
}

#[derive(Debug)]
enum Rule {
    Canonical,
    WellAdapted,
    Table,
    DirectImage { source: ConnectionLaw, map: PolyMap },
}

#[derive(Debug)]
struct LawInner {
    structure: BiparaStructure,
    kind: ConnectionKind,
    rule: Rule,
    table: OnceLock<FrameTable>,
}

/// A derivation law `(X, Y) ↦ ∇_X Y`.
///
/// [`evaluate`](Self::evaluate) applies the defining rule to the given
/// fields; [`nabla`](Self::nabla) expands through the Christoffel symbols on
/// the context frame, computed once on first use.
#[derive(Clone, Debug)]
pub struct ConnectionLaw(Arc<LawInner>);

impl ConnectionLaw {
    fn build(structure: &BiparaStructure, kind: ConnectionKind, rule: Rule) -> Self {
        ConnectionLaw(Arc::new(LawInner {
            structure: structure.clone(),
            kind,
            rule,
            table: OnceLock::new(),
        }))
    }

    pub fn canonical(s: &BiparaStructure) -> Self {
        Self::build(s, ConnectionKind::Canonical, Rule::Canonical)
    }

    /// The well-adapted connection `∇' = ∇ - A`.
    pub fn well_adapted(s: &BiparaStructure) -> Self {
        Self::build(s, ConnectionKind::WellAdapted, Rule::WellAdapted)
    }

    pub fn from_frame_table(s: &BiparaStructure, table: FrameTable) -> Result<Self, ConnectionError> {
        if table.dim() != s.dim() {
            return Err(ConnectionError::WrongTableSize {
                expected: s.dim(),
                got: table.dim(),
            });
        }
        let law = Self::build(s, ConnectionKind::Custom, Rule::Table);
        law.0.table.set(table).expect("fresh cell");
        Ok(law)
    }

    /// Custom law whose value on frame pairs is `rule(E_i, E_j)`, extended
    /// as a connection.
    pub fn from_frame_rule(s: &BiparaStructure, rule: impl Fn(&VectorField, &VectorField) -> VectorField) -> Self {
        let ctx = s.context();
        let basis: Vec<VectorField> = (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect();
        let table = FrameTable::from_fn(ctx, |i, j| rule(&basis[i], &basis[j]));
        Self::from_frame_table(s, table).expect("table built from the context")
    }

    /// Direct image `∇'_{X'} Y' = φ·∇_{φ⁻¹X'} φ⁻¹Y'` on the pushed structure.
    pub fn pushforward(&self, map: &PolyMap) -> Result<Self, ConnectionError> {
        if map.source() != self.context() {
            return Err(GeometryError::ContextMismatch.into());
        }
        if !map.is_bracket_preserving() {
            return Err(GeometryError::NotBracketPreserving.into());
        }
        let s = self.structure().pushforward(map)?;
        Ok(Self::build(
            &s,
            self.kind(),
            Rule::DirectImage {
                source: self.clone(),
                map: map.clone(),
            },
        ))
    }

    pub fn structure(&self) -> &BiparaStructure {
        &self.0.structure
    }

    pub fn kind(&self) -> ConnectionKind {
        self.0.kind
    }

    pub fn context(&self) -> &FrameContext {
        self.0.structure.context()
    }

    /// Applies the defining rule directly.
    pub fn evaluate(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let s = &self.0.structure;
        match &self.0.rule {
            Rule::Canonical => canonical_rule(s, x, y),
            Rule::WellAdapted => {
                let a = difference_torsion_form(s, &|u, v| torsion_of(&|p, q| canonical_rule(s, p, q), u, v), x, y);
                &canonical_rule(s, x, y) - &a
            }
            Rule::Table => self.nabla(x, y),
            Rule::DirectImage { source, map } => {
                let back = map.inverse_map();
                map.push_vector(&source.nabla(&back.push_vector(x), &back.push_vector(y)))
            }
        }
    }

    /// Christoffel symbols on the context frame.
    pub fn table(&self) -> &FrameTable {
        self.0.table.get_or_init(|| self.compute_table())
    }

    fn compute_table(&self) -> FrameTable {
        let s = &self.0.structure;
        let ctx = s.context();
        let basis: Vec<VectorField> = (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect();
        match &self.0.rule {
            Rule::WellAdapted => {
                let canonical = ConnectionLaw::canonical(s);
                let a = DifferenceTensor::new(s);
                FrameTable::from_fn(ctx, |i, j| {
                    &canonical.nabla(&basis[i], &basis[j]) - &a.eval(&basis[i], &basis[j])
                })
            }
            Rule::Table => unreachable!("table laws are built with their table"),
            _ => FrameTable::from_fn(ctx, |i, j| self.evaluate(&basis[i], &basis[j])),
        }
    }

    /// `∇_X Y = X(Y^k) E_k + X^i Y^j Γ^k_ij E_k`.
    pub fn nabla(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let ctx = self.context();
        assert!(x.context() == ctx && y.context() == ctx, "context mismatch");
        let t = self.table();
        let d = ctx.dim();
        let mut out: Vec<MultiPoly> = y.components().iter().map(|yk| x.derive(yk)).collect();
        for (i, xi) in x.components().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.components().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let col = t.column(i, j);
                if col.iter().all(MultiPoly::is_zero) {
                    continue;
                }
                let f = xi * yj;
                for k in 0..d {
                    if !col[k].is_zero() {
                        out[k] += &(&f * &col[k]);
                    }
                }
            }
        }
        VectorField::new(ctx, out).expect("components from the context")
    }
}

/// `∇_X Y = F⁺([F⁻X, F⁺Y] + P[F⁺X, PF⁺Y]) + F⁻([F⁺X, F⁻Y] + P[F⁻X, PF⁻Y])`.
pub(crate) fn canonical_rule(s: &BiparaStructure, x: &VectorField, y: &VectorField) -> VectorField {
    let pr = s.projectors();
    let p = s.p();
    let (xp, xm) = (pr.f_plus.apply(x), pr.f_minus.apply(x));
    let (yp, ym) = (pr.f_plus.apply(y), pr.f_minus.apply(y));
    let a = &xm.bracket(&yp) + &p.apply(&xp.bracket(&p.apply(&yp)));
    let b = &xp.bracket(&ym) + &p.apply(&xm.bracket(&p.apply(&ym)));
    &pr.f_plus.apply(&a) + &pr.f_minus.apply(&b)
}

pub(crate) fn torsion_of(
    nabla: &dyn Fn(&VectorField, &VectorField) -> VectorField,
    x: &VectorField,
    y: &VectorField,
) -> VectorField {
    &(&nabla(x, y) - &nabla(y, x)) - &x.bracket(y)
}

/// `A(X,Y) = (1/3)(F⁺T(F⁺X,F⁺Y) + PF⁺T(F⁺X,PF⁻Y) + PF⁻T(F⁻X,PF⁺Y) + F⁻T(F⁻X,F⁻Y))`.
pub(crate) fn difference_torsion_form(
    s: &BiparaStructure,
    torsion: &dyn Fn(&VectorField, &VectorField) -> VectorField,
    x: &VectorField,
    y: &VectorField,
) -> VectorField {
    let pr = s.projectors();
    let p = s.p();
    let (xp, xm) = (pr.f_plus.apply(x), pr.f_minus.apply(x));
    let (yp, ym) = (pr.f_plus.apply(y), pr.f_minus.apply(y));
    let t1 = pr.f_plus.apply(&torsion(&xp, &yp));
    let t2 = p.apply(&pr.f_plus.apply(&torsion(&xp, &p.apply(&ym))));
    let t3 = p.apply(&pr.f_minus.apply(&torsion(&xm, &p.apply(&yp))));
    let t4 = pr.f_minus.apply(&torsion(&xm, &ym));
    (&(&t1 + &t2) + &(&t3 + &t4)).scale(&rat(1, 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, rat};
    use crate::structure::fixtures;

    #[test]
    fn flat_chart_has_zero_symbols() {
        let law = ConnectionLaw::canonical(&fixtures::flat(2));
        assert!(law.table().is_zero());
        assert!(ConnectionLaw::well_adapted(&fixtures::flat(2)).table().is_zero());
    }

    #[test]
    fn heis_and_aff_frame_values() {
        for s in [fixtures::heis(), fixtures::aff()] {
            let ctx = s.context().clone();
            let law = ConnectionLaw::canonical(&s);
            let x1 = VectorField::basis(&ctx, 0);
            let x2 = VectorField::basis(&ctx, 1);
            assert!(law.evaluate(&x1, &x2).is_zero());
            assert!(law.evaluate(&x2, &x1).is_zero());
        }
        let s = fixtures::aff();
        let ctx = s.context().clone();
        let x1 = VectorField::basis(&ctx, 0);
        let x2 = VectorField::basis(&ctx, 1);
        let wa = ConnectionLaw::well_adapted(&s);
        assert_eq!(wa.evaluate(&x1, &x2), x1.scale(&rat(1, 3)));
        assert_eq!(wa.nabla(&x1, &x2), x1.scale(&rat(1, 3)));
        assert_eq!(wa.nabla(&x2, &x1), x1.scale(&rat(-1, 3)));
    }

    #[test]
    fn table_expansion_matches_rule_on_polynomial_fields() {
        let s = crate::structure::generate_random_structure(&crate::structure::RandomParams {
            n: 1,
            degree: 2,
            seed: 7,
            ..Default::default()
        });
        let ctx = s.context().clone();
        let v = ctx.vars().clone();
        let x = VectorField::new(
            &ctx,
            vec![parse_poly("x1*y1", &v).unwrap(), parse_poly("2 - y1^2", &v).unwrap()],
        )
        .unwrap();
        let y = VectorField::new(
            &ctx,
            vec![parse_poly("x1^3", &v).unwrap(), parse_poly("y1", &v).unwrap()],
        )
        .unwrap();
        for law in [ConnectionLaw::canonical(&s), ConnectionLaw::well_adapted(&s)] {
            assert_eq!(law.evaluate(&x, &y), law.nabla(&x, &y));
        }
    }

    #[test]
    fn bad_table_size() {
        let s = fixtures::flat(1);
        let err = FrameTable::from_flat(s.context(), vec![s.context().zero(); 3]).unwrap_err();
        assert_eq!(err, ConnectionError::WrongTableSize { expected: 8, got: 3 });
    }
}
