use crate::connections::{ConnectionLaw, TorsionTensor};
use crate::geometry::{EndoField, FrameContext, VectorField};
use crate::structure::BiparaStructure;

use super::{Verdict, Witness};

fn basis(ctx: &FrameContext) -> Vec<VectorField> {
    (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect()
}

fn first_pair_witness(
    ctx: &FrameContext,
    symbol: &str,
    eval: impl Fn(&VectorField, &VectorField) -> VectorField,
) -> Option<Witness> {
    let b = basis(ctx);
    let d = ctx.dim();
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).find_map(|(i, j)| {
        Witness::from_field(
            format!("{symbol}({},{})", ctx.label(i), ctx.label(j)),
            &eval(&b[i], &b[j]),
        )
    })
}

/// `N_e(X,Y) = [eX,eY] - e[eX,Y] - e[X,eY] + e²[X,Y]`.
#[derive(Clone, Debug)]
pub struct NijenhuisTensor {
    e: EndoField,
    e2: EndoField,
    symbol: String,
}

impl NijenhuisTensor {
    pub fn new(e: &EndoField, name: &str) -> Self {
        NijenhuisTensor {
            e: e.clone(),
            e2: e.square(),
            symbol: format!("N_{name}"),
        }
    }

    pub fn eval(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let e = &self.e;
        let (ex, ey) = (e.apply(x), e.apply(y));
        let mut v = ex.bracket(&ey);
        v = &v - &e.apply(&ex.bracket(y));
        v = &v - &e.apply(&x.bracket(&ey));
        &v + &self.e2.apply(&x.bracket(y))
    }

    pub fn witness(&self) -> Option<Witness> {
        first_pair_witness(self.e.context(), &self.symbol, |x, y| self.eval(x, y))
    }

    pub fn is_zero(&self) -> bool {
        self.witness().is_none()
    }
}

/// The Frölicher–Nijenhuis bracket `[F,P]` of the two structure tensors.
#[derive(Clone, Debug)]
pub struct FnBracket {
    s: BiparaStructure,
}

impl FnBracket {
    pub fn new(s: &BiparaStructure) -> Self {
        FnBracket { s: s.clone() }
    }

    /// `[FX,PY] + [PX,FY] - F[PX,Y] - F[X,PY] - P[FX,Y] - P[X,FY]`.
    pub fn eval(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let (f, p) = (self.s.f(), self.s.p());
        let (fx, fy, px, py) = (f.apply(x), f.apply(y), p.apply(x), p.apply(y));
        let mut v = &fx.bracket(&py) + &px.bracket(&fy);
        v = &v - &f.apply(&(&px.bracket(y) + &x.bracket(&py)));
        &v - &p.apply(&(&fx.bracket(y) + &x.bracket(&fy)))
    }

    /// The eight-term form, without using `FP + PF = 0`.
    pub fn eval_full(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let (f, p) = (self.s.f(), self.s.p());
        let pf = p.compose(f);
        let fp = f.compose(p);
        let xy = x.bracket(y);
        let mut v = self.eval(x, y);
        v = &v + &pf.apply(&xy);
        &v + &fp.apply(&xy)
    }

    pub fn witness(&self) -> Option<Witness> {
        first_pair_witness(self.s.context(), "[F,P]", |x, y| self.eval(x, y))
    }

    pub fn is_zero(&self) -> bool {
        self.witness().is_none()
    }
}

/// The three identities relating `[F,P]` to the canonical torsion:
/// `2PT` on `T⁺_F`, `-2PT` on `T⁻_F`, `2F⁻[X,PY] - 2F⁺[PX,Y]` on
/// `X ∈ T⁺_F`, `Y ∈ T⁻_F`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FpTorsionReport {
    pub plus: Verdict,
    pub minus: Verdict,
    pub mixed: Verdict,
}

impl FpTorsionReport {
    pub fn holds(&self) -> bool {
        self.plus.holds && self.minus.holds && self.mixed.holds
    }

    pub fn into_verdict(self) -> Verdict {
        let holds = self.holds();
        Verdict {
            name: "[F,P] and torsion identities".into(),
            holds,
            witness: [self.plus, self.minus, self.mixed].into_iter().find_map(|v| v.witness),
        }
    }
}

pub fn fp_torsion_check(s: &BiparaStructure) -> FpTorsionReport {
    let ctx = s.context().clone();
    let b = basis(&ctx);
    let d = ctx.dim();
    let fnb = FnBracket::new(s);
    let torsion = TorsionTensor::new(&ConnectionLaw::canonical(s));
    let p = s.p();
    let pr = s.projectors();
    let plus: Vec<_> = b.iter().map(|v| pr.f_plus.apply(v)).collect();
    let minus: Vec<_> = b.iter().map(|v| pr.f_minus.apply(v)).collect();
    let pairs = || (0..d).flat_map(|i| (0..d).map(move |j| (i, j)));
    let two = crate::exactalg::int(2);
    let check = |name: &str,
                 tag: (&str, &str),
                 xs: &[VectorField],
                 ys: &[VectorField],
                 rhs: &dyn Fn(&VectorField, &VectorField) -> VectorField| {
        Verdict::search(name.to_string(), pairs(), |(i, j)| {
            let diff = &fnb.eval(&xs[i], &ys[j]) - &rhs(&xs[i], &ys[j]);
            Witness::from_field(
                format!("[F,P]({}{},{}{}) - rhs", tag.0, ctx.label(i), tag.1, ctx.label(j)),
                &diff,
            )
        })
    };
    FpTorsionReport {
        plus: check("[F,P] = 2PT on T+_F", ("F+", "F+"), &plus, &plus, &|x, y| {
            p.apply(&torsion.eval(x, y)).scale(&two)
        }),
        minus: check("[F,P] = -2PT on T-_F", ("F-", "F-"), &minus, &minus, &|x, y| {
            p.apply(&torsion.eval(x, y)).scale(&-two.clone())
        }),
        mixed: check(
            "[F,P] = 2F-[X,PY] - 2F+[PX,Y] on T+_F x T-_F",
            ("F+", "F-"),
            &plus,
            &minus,
            &|x, y| {
                let a = pr.f_minus.apply(&x.bracket(&p.apply(y)));
                let c = pr.f_plus.apply(&p.apply(x).bracket(y));
                (&a - &c).scale(&two)
            },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::fixtures;

    #[test]
    fn heis_values() {
        let s = fixtures::heis();
        assert_eq!(
            NijenhuisTensor::new(s.f(), "F").witness().unwrap().to_string(),
            "N_F(X1,X2) = 4*Y1"
        );
        assert_eq!(
            NijenhuisTensor::new(s.p(), "P").witness().unwrap().to_string(),
            "N_P(X1,X2) = Y1"
        );
        assert_eq!(
            FnBracket::new(&s).witness().unwrap().to_string(),
            "[F,P](X1,X2) = -2*X1"
        );
    }

    #[test]
    fn aff_bracket() {
        let s = fixtures::aff();
        let b = basis(s.context());
        assert_eq!(FnBracket::new(&s).eval(&b[0], &b[1]).to_string(), "-2*Y1");
    }

    #[test]
    fn flat_is_clean() {
        let s = fixtures::flat(2);
        assert!(NijenhuisTensor::new(s.f(), "F").is_zero());
        assert!(NijenhuisTensor::new(s.p(), "P").is_zero());
        assert!(FnBracket::new(&s).is_zero());
    }

    #[test]
    fn reduced_and_full_forms_agree() {
        for s in [fixtures::heis(), fixtures::aff(), fixtures::flat(1)] {
            let fnb = FnBracket::new(&s);
            let b = basis(s.context());
            for x in &b {
                for y in &b {
                    assert_eq!(fnb.eval(x, y), fnb.eval_full(x, y));
                }
            }
        }
    }

    #[test]
    fn fp_torsion_on_fixtures() {
        for s in [fixtures::heis(), fixtures::aff(), fixtures::flat(2)] {
            let r = fp_torsion_check(&s);
            assert!(r.holds(), "{r:?}");
        }
    }
}
