use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{format_rational, Rational};
use super::AlgebraError;

pub type Exponent = u16;

/// Exponent vector of a monomial. Ordered graded-lexicographically: total
/// degree first, then the exponent of the earliest variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[Exponent; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered variable names shared by every polynomial of one ring.
#[derive(Clone, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// The ring of constants.
    pub fn empty() -> Self {
        Vars(Arc::from(Vec::<String>::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

/// Multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty
/// term map and structural equality is polynomial equality.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::one(vars.len()), value);
        }
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The coordinate function of variable `index`.
    pub fn var(vars: &Vars, index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        let mut exps = Monomial::one(vars.len());
        exps.0[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, Rational::one());
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = MultiPoly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent vector length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Value of a degree-zero polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Re-expresses a polynomial of the constant ring in `vars`.
    fn coerced(&self, vars: &Vars) -> Cow<'_, MultiPoly> {
        if self.vars == *vars {
            return Cow::Borrowed(self);
        }
        assert!(
            self.vars.is_empty(),
            "polynomials over different variable lists: {:?} vs {:?}",
            self.vars.names(),
            vars.names()
        );
        Cow::Owned(MultiPoly::constant(
            vars,
            self.constant_value().unwrap_or_else(Rational::zero),
        ))
    }

    fn common_vars(&self, other: &MultiPoly) -> Vars {
        if self.vars == other.vars || other.vars.is_empty() {
            self.vars.clone()
        } else {
            other.vars.clone()
        }
    }

    pub fn scale(&self, factor: &Rational) -> MultiPoly {
        if factor.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[index] = e - 1;
            out.add_term(dm, c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<MultiPoly, AlgebraError> {
        let index = self
            .vars
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.derivative(index))
    }

    /// Evaluates at a rational point (one coordinate per variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        total
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, subs: &[MultiPoly], target: &Vars) -> MultiPoly {
        assert_eq!(subs.len(), self.vars.len(), "substitution arity mismatch");
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![MultiPoly::one(target), s.coerced(target).into_owned()])
            .collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out += &term;
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(format_rational(&mag));
            }
            for (name, &e) in self.vars.names().iter().zip(m.0.iter()) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let vars = self.common_vars(rhs);
        let mut out = self.coerced(&vars).into_owned();
        out += &*rhs.coerced(&vars);
        out
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        if self.vars != rhs.vars && self.vars.is_empty() {
            *self = self.coerced(&rhs.vars).into_owned();
        }
        let rhs = rhs.coerced(&self.vars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let vars = self.common_vars(rhs);
        let mut out = self.coerced(&vars).into_owned();
        out -= &*rhs.coerced(&vars);
        out
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        if self.vars != rhs.vars && self.vars.is_empty() {
            *self = self.coerced(&rhs.vars).into_owned();
        }
        let rhs = rhs.coerced(&self.vars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let vars = self.common_vars(rhs);
        let a = self.coerced(&vars);
        let b = rhs.coerced(&vars);
        if a.is_zero() || b.is_zero() {
            return MultiPoly::zero(&vars);
        }
        if let Some(c) = a.constant_value() {
            return b.scale(&c);
        }
        if let Some(c) = b.constant_value() {
            return a.scale(&c);
        }
        let mut out = MultiPoly::zero(&vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn vars() -> Vars {
        Vars::new(&["x1", "x2", "y1", "y2"])
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::from_exponents(&[2, 0]);
        let b = Monomial::from_exponents(&[0, 3]);
        let c = Monomial::from_exponents(&[1, 1]);
        assert!(b > a);
        assert!(a > c);
    }

    #[test]
    fn derivative_power_rule() {
        let v = vars();
        let x1 = MultiPoly::var(&v, 0);
        let y1 = MultiPoly::var(&v, 2);
        let p = &(&x1 * &x1) * &y1;
        assert_eq!(p.derivative(0), (&x1 * &y1).scale(&int(2)));
        assert!(MultiPoly::constant(&v, int(5)).derivative(2).is_zero());
        let q = &(&x1 * &x1).scale(&rat(3, 2)) - &x1;
        assert_eq!(
            q.derivative_by_name("x1").unwrap(),
            &x1.scale(&int(3)) - &MultiPoly::one(&v)
        );
        assert!(q.derivative_by_name("z").is_err());
    }

    #[test]
    fn display_is_canonical() {
        let v = vars();
        let x1 = MultiPoly::var(&v, 0);
        let y1 = MultiPoly::var(&v, 2);
        let p = &(&(&(&x1 * &x1) * &y1).scale(&rat(3, 2)) - &x1) + &MultiPoly::constant(&v, int(5));
        assert_eq!(p.to_string(), "3/2*x1^2*y1 - x1 + 5");
        assert_eq!((-&x1).to_string(), "-x1");
        assert_eq!(MultiPoly::zero(&v).to_string(), "0");
    }

    #[test]
    fn compose_substitutes() {
        let v = Vars::new(&["x", "y"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        // (x + y^2) with x -> x, y -> y + x
        let p = &x + &(&y * &y);
        let shifted = &y + &x;
        let q = p.compose(&[x.clone(), shifted.clone()], &v);
        assert_eq!(q, &x + &(&shifted * &shifted));
    }

    #[test]
    fn constants_mix_with_any_ring() {
        let v = vars();
        let c = MultiPoly::constant(&Vars::empty(), int(3));
        let x1 = MultiPoly::var(&v, 0);
        let s = &c + &x1;
        assert_eq!(s.vars(), &v);
        assert_eq!(s.eval(&[int(1), int(0), int(0), int(0)]), int(4));
    }
}
