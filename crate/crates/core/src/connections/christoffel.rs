use super::ConnectionError;
use crate::exactalg::{int, rat, MultiPoly};
use crate::geometry::{Frame, VectorField};
use crate::structure::BiparaStructure;

/// Christoffel symbols on an adapted frame `{X_i, Y_i = P X_i}`.
///
/// `gamma(h, a, i)` is the `X_i` coefficient of `∇_{X_h} X_a` and
/// `gamma_bar(h, a, i)` the `X_i` coefficient of `∇_{Y_h} X_a`. Derivatives
/// of `Y_a` follow from `∇ Y_a = P ∇ X_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChristoffelTable {
    n: usize,
    frame: Frame,
    gamma: Vec<MultiPoly>,
    gamma_bar: Vec<MultiPoly>,
}

struct Brackets {
    n: usize,
    frame: Frame,
    fields: Vec<VectorField>,
}

impl Brackets {
    fn new(s: &BiparaStructure) -> Result<Self, ConnectionError> {
        let frame = s.adapted_frame().ok_or(ConnectionError::MissingAdaptedFrame)?.clone();
        Ok(Brackets {
            n: s.n(),
            fields: frame.fields(),
            frame,
        })
    }

    fn x(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    fn y(&self, i: usize) -> &VectorField {
        &self.fields[self.n + i]
    }

    fn omega(&self, b: usize, v: &VectorField) -> MultiPoly {
        self.frame.dual_pairing(b, v)
    }

    fn eta(&self, b: usize, v: &VectorField) -> MultiPoly {
        self.frame.dual_pairing(self.n + b, v)
    }
}

impl ChristoffelTable {
    fn from_fn(
        br: Brackets,
        mut gamma: impl FnMut(&Brackets, usize, usize, usize) -> MultiPoly,
        mut gamma_bar: impl FnMut(&Brackets, usize, usize, usize) -> MultiPoly,
    ) -> Self {
        let n = br.n;
        let mut g = Vec::with_capacity(n * n * n);
        let mut gb = Vec::with_capacity(n * n * n);
        for h in 0..n {
            for a in 0..n {
                for i in 0..n {
                    g.push(gamma(&br, h, a, i));
                    gb.push(gamma_bar(&br, h, a, i));
                }
            }
        }
        ChristoffelTable {
            n,
            frame: br.frame,
            gamma: g,
            gamma_bar: gb,
        }
    }

    /// `Γ^i_{ha} = η_i([X_h, Y_a])`, `Γ̄^i_{ha} = ω_i([Y_h, X_a])`.
    pub fn canonical(s: &BiparaStructure) -> Result<Self, ConnectionError> {
        let br = Brackets::new(s)?;
        Ok(Self::from_fn(
            br,
            |b, h, a, i| b.eta(i, &b.x(h).bracket(b.y(a))),
            |b, h, a, i| b.omega(i, &b.y(h).bracket(b.x(a))),
        ))
    }

    /// With `Γ'^b_{ah}` the `X_b` coefficient of `∇'_{X_a} X_h`:
    ///
    /// `Γ'^b_{ah} = (ω_b([X_a,X_h]) + 2η_b([X_a,Y_h]) + η_b([X_h,Y_a]))/3`,
    /// `Γ̄'^b_{ah} = (ω_b([Y_h,X_a]) + 2ω_b([Y_a,X_h]) + η_b([Y_a,Y_h]))/3`.
    pub fn well_adapted(s: &BiparaStructure) -> Result<Self, ConnectionError> {
        let br = Brackets::new(s)?;
        let third = rat(1, 3);
        let two = int(2);
        Ok(Self::from_fn(
            br,
            |b, a, h, k| {
                let mut v = b.omega(k, &b.x(a).bracket(b.x(h)));
                v += &b.eta(k, &b.x(a).bracket(b.y(h))).scale(&two);
                v += &b.eta(k, &b.x(h).bracket(b.y(a)));
                v.scale(&third)
            },
            |b, a, h, k| {
                let mut v = b.omega(k, &b.y(h).bracket(b.x(a)));
                v += &b.omega(k, &b.y(a).bracket(b.x(h))).scale(&two);
                v += &b.eta(k, &b.y(a).bracket(b.y(h)));
                v.scale(&third)
            },
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn gamma(&self, h: usize, a: usize, i: usize) -> &MultiPoly {
        &self.gamma[(h * self.n + a) * self.n + i]
    }

    pub fn gamma_bar(&self, h: usize, a: usize, i: usize) -> &MultiPoly {
        &self.gamma_bar[(h * self.n + a) * self.n + i]
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().chain(&self.gamma_bar).all(MultiPoly::is_zero)
    }

    /// Coefficients of `∇_{V_dir} V_arg` on the adapted frame, where frame
    /// index `< n` is an `X` and `≥ n` a `Y`.
    pub fn frame_coefficients(&self, dir: usize, arg: usize) -> Vec<MultiPoly> {
        let n = self.n;
        let ctx = self.frame.context();
        let mut out = vec![ctx.zero(); 2 * n];
        let (a, shift) = if arg < n { (arg, 0) } else { (arg - n, n) };
        for i in 0..n {
            let g = if dir < n {
                self.gamma(dir, a, i)
            } else {
                self.gamma_bar(dir - n, a, i)
            };
            out[i + shift] = g.clone();
        }
        out
    }

    /// `∇_X Y` for arbitrary fields, expanded through the table.
    pub fn reconstruct(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let xc = self.frame.coefficients(x);
        let yc = self.frame.coefficients(y);
        let mut out: Vec<MultiPoly> = yc.iter().map(|c| x.derive(c)).collect();
        for (arg, c) in yc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dir, a) in xc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let f = c * a;
                for (k, g) in self.frame_coefficients(dir, arg).iter().enumerate() {
                    if !g.is_zero() {
                        out[k] += &(&f * g);
                    }
                }
            }
        }
        self.frame.combine(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::ConnectionLaw;
    use crate::structure::fixtures;

    #[test]
    fn fixture_tables() {
        assert!(ChristoffelTable::canonical(&fixtures::flat(2)).unwrap().is_zero());
        assert!(ChristoffelTable::canonical(&fixtures::heis()).unwrap().is_zero());
        assert!(ChristoffelTable::canonical(&fixtures::aff()).unwrap().is_zero());
        assert!(ChristoffelTable::well_adapted(&fixtures::heis()).unwrap().is_zero());
        let t = ChristoffelTable::well_adapted(&fixtures::aff()).unwrap();
        assert_eq!(t.gamma(0, 1, 0).constant_value(), Some(rat(1, 3)));
        assert_eq!(t.gamma(1, 0, 0).constant_value(), Some(rat(-1, 3)));
        assert!((0..2).all(|h| (0..2).all(|a| (0..2).all(|i| t.gamma_bar(h, a, i).is_zero()))));
    }

    #[test]
    fn reconstruction_matches_laws_on_frame_pairs() {
        for s in [fixtures::flat(1), fixtures::heis(), fixtures::aff()] {
            let frame = s.adapted_frame().unwrap().clone();
            let fields = frame.fields();
            for (table, law) in [
                (ChristoffelTable::canonical(&s).unwrap(), ConnectionLaw::canonical(&s)),
                (
                    ChristoffelTable::well_adapted(&s).unwrap(),
                    ConnectionLaw::well_adapted(&s),
                ),
            ] {
                for x in &fields {
                    for y in &fields {
                        assert_eq!(table.reconstruct(x, y), law.evaluate(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn missing_frame() {
        let s = fixtures::flat(1);
        let bare = crate::structure::BiparaStructure::new(s.f().clone(), s.p().clone()).unwrap();
        assert_eq!(
            ChristoffelTable::canonical(&bare),
            Err(ConnectionError::MissingAdaptedFrame)
        );
    }
}
