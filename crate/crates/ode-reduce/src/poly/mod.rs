//! Bivariate polynomials in `x` and `y` over the exact rationals.
//!
//! `BiPoly` is a sparse term map from exponent pairs to nonzero rational
//! coefficients; all operations are pure and exact. The zero polynomial is
//! the empty map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

mod divide;
mod gcd;
pub mod univar;

pub use divide::{div_rem, exact_div, reduce_modulo};
pub use gcd::{content_y, gcd_bipoly, primitive_y};
pub use univar::eval_at_x;

/// One of the two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Graded monomial orders on exponent pairs. Total degree compares first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Ties broken by higher y exponent.
    TdegYx,
    /// Ties broken by higher x exponent.
    TdegXy,
}

impl MonomialOrder {
    pub fn cmp(&self, a: (u32, u32), b: (u32, u32)) -> Ordering {
        let ta = a.0 + a.1;
        let tb = b.0 + b.1;
        ta.cmp(&tb).then_with(|| match self {
            MonomialOrder::TdegYx => a.1.cmp(&b.1),
            MonomialOrder::TdegXy => a.0.cmp(&b.0),
        })
    }
}

/// `a` divides `b` componentwise.
pub fn monomial_divides(a: (u32, u32), b: (u32, u32)) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    BothZero,
    ZeroInput,
    ZeroDivisor,
    ConstantModulus,
    NotUnivariate,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::BothZero => write!(f, "gcd of two zero polynomials"),
            PolyError::ZeroInput => write!(f, "zero polynomial not allowed here"),
            PolyError::ZeroDivisor => write!(f, "division by the zero polynomial"),
            PolyError::ConstantModulus => write!(f, "modulus must be nonconstant"),
            PolyError::NotUnivariate => write!(f, "polynomial depends on the wrong variable"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Sparse bivariate polynomial. Keys are `(x_exp, y_exp)`; stored
/// coefficients are never zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        BiPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        BiPoly::constant(Rat::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        BiPoly::monomial(
            match v {
                Var::X => (1, 0),
                Var::Y => (0, 1),
            },
            Rat::one(),
        )
    }

    pub fn monomial(exps: (u32, u32), c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        BiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut p = BiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.get(&(0, 0)).cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, m: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Degree in x; 0 for the zero polynomial.
    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Degree in y; 0 for the zero polynomial.
    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_deg(&self) -> u32 {
        self.terms.keys().map(|k| k.0 + k.1).max().unwrap_or(0)
    }

    pub fn deg(&self, v: Var) -> u32 {
        match v {
            Var::X => self.deg_x(),
            Var::Y => self.deg_y(),
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.deg(v) > 0
    }

    pub fn is_x_only(&self) -> bool {
        !self.depends_on(Var::Y)
    }

    /// Leading monomial and coefficient under the given order.
    pub fn leading(&self, order: MonomialOrder) -> Option<((u32, u32), Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(*a.0, *b.0))
            .map(|(m, c)| (*m, c.clone()))
    }

    /// Coefficient of `y^j` as an x-only polynomial.
    pub fn y_coeff(&self, j: u32) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.1 == j)
                .map(|(m, c)| ((m.0, 0), c.clone())),
        )
    }

    /// All y-coefficients, index = y power, length `deg_y + 1`.
    pub fn y_coeffs(&self) -> Vec<BiPoly> {
        let d = self.deg_y();
        let mut out = vec![BiPoly::zero(); d as usize + 1];
        for (m, c) in &self.terms {
            out[m.1 as usize].add_term((m.0, 0), c.clone());
        }
        out
    }

    /// Rebuild from y-coefficients (inverse of `y_coeffs`).
    pub fn from_y_coeffs(coeffs: &[BiPoly]) -> BiPoly {
        let mut p = BiPoly::zero();
        for (j, cj) in coeffs.iter().enumerate() {
            for (m, c) in &cj.terms {
                p.add_term((m.0, m.1 + j as u32), c.clone());
            }
        }
        p
    }

    /// Leading y-coefficient (coefficient of `y^{deg_y}`).
    pub fn lc_y(&self) -> BiPoly {
        self.y_coeff(self.deg_y())
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, i: u32, j: u32, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| ((m.0 + i, m.1 + j), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derive(&self, v: Var) -> BiPoly {
        let mut p = BiPoly::zero();
        for (m, c) in &self.terms {
            match v {
                Var::X => {
                    if m.0 > 0 {
                        p.add_term((m.0 - 1, m.1), c * Rat::from_integer(BigInt::from(m.0)));
                    }
                }
                Var::Y => {
                    if m.1 > 0 {
                        p.add_term((m.0, m.1 - 1), c * Rat::from_integer(BigInt::from(m.1)));
                    }
                }
            }
        }
        p
    }

    pub fn eval(&self, x0: &Rat, y0: &Rat) -> Rat {
        // Horner in y over Horner in x per coefficient.
        let mut acc = Rat::zero();
        for cj in self.y_coeffs().iter().rev() {
            let mut cx = Rat::zero();
            let coeffs = cj.x_coeff_vec();
            for c in coeffs.iter().rev() {
                cx = cx * x0 + c;
            }
            acc = acc * y0 + cx;
        }
        acc
    }

    /// Dense x-coefficient vector of an x-only polynomial (empty if zero).
    fn x_coeff_vec(&self) -> Vec<Rat> {
        if self.is_zero() {
            return vec![];
        }
        let mut v = vec![Rat::zero(); self.deg_x() as usize + 1];
        for (m, c) in &self.terms {
            v[m.0 as usize] = c.clone();
        }
        v
    }

    /// Substitute `x := x0`, leaving a polynomial in y.
    pub fn subst_x(&self, x0: &Rat) -> BiPoly {
        let mut p = BiPoly::zero();
        let mut pows = vec![Rat::one()];
        for (m, c) in &self.terms {
            while pows.len() <= m.0 as usize {
                let last = pows.last().unwrap() * x0;
                pows.push(last);
            }
            p.add_term((0, m.1), c * &pows[m.0 as usize]);
        }
        p
    }

    /// Substitute `x := x + a` (shift of the x variable).
    pub fn shift_x(&self, a: &Rat) -> BiPoly {
        if a.is_zero() {
            return self.clone();
        }
        let mut out = BiPoly::zero();
        // Precompute binomial rows lazily per exponent.
        let max_i = self.deg_x() as usize;
        let mut apows = vec![Rat::one()];
        for _ in 0..max_i {
            let last = apows.last().unwrap() * a;
            apows.push(last);
        }
        for (m, c) in &self.terms {
            let n = m.0 as usize;
            let mut binom = BigInt::one();
            for k in 0..=n {
                // C(n, k) built incrementally.
                if k > 0 {
                    binom = &binom * BigInt::from(n - k + 1) / BigInt::from(k);
                }
                let coeff = c * Rat::from_integer(binom.clone()) * &apows[n - k];
                out.add_term((k as u32, m.1), coeff);
            }
        }
        out
    }

    pub fn swap_vars(&self) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| ((m.1, m.0), c.clone()))
                .collect(),
        }
    }

    /// Splits into `(scalar, primitive)` with `self = scalar * primitive`,
    /// where `primitive` has coprime integer coefficients and positive
    /// leading coefficient under TdegYx.
    pub fn int_normalized(&self) -> (Rat, BiPoly) {
        if self.is_zero() {
            return (Rat::one(), BiPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * &den_lcm / c.denom();
            num_gcd = num_gcd.gcd(&n);
        }
        let mut scalar = Rat::new(num_gcd, den_lcm);
        let lead = self.leading(MonomialOrder::TdegYx).unwrap().1;
        if lead.is_negative() {
            scalar = -scalar;
        }
        let inv = scalar.recip();
        (scalar.clone(), self.scale(&inv))
    }

    /// Primitive, sign-normalized representative (drops the scalar).
    pub fn normalized(&self) -> BiPoly {
        self.int_normalized().1
    }

    /// Deterministic total order on polynomials, used to sort factor lists.
    pub fn cmp_canonical(&self, other: &BiPoly) -> Ordering {
        self.total_deg()
            .cmp(&other.total_deg())
            .then_with(|| self.deg_y().cmp(&other.deg_y()))
            .then_with(|| self.num_terms().cmp(&other.num_terms()))
            .then_with(|| {
                let mut a: Vec<_> = self.terms.iter().collect();
                let mut b: Vec<_> = other.terms.iter().collect();
                a.sort_by(|u, v| MonomialOrder::TdegYx.cmp(*v.0, *u.0));
                b.sort_by(|u, v| MonomialOrder::TdegYx.cmp(*v.0, *u.0));
                for ((ma, ca), (mb, cb)) in a.iter().zip(b.iter()) {
                    let o = MonomialOrder::TdegYx
                        .cmp(**ma, **mb)
                        .reverse()
                        .then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term((ma.0 + mb.0, ma.1 + mb.1), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ms: Vec<_> = self.terms.iter().collect();
        ms.sort_by(|a, b| MonomialOrder::TdegYx.cmp(*b.0, *a.0));
        for (idx, (m, c)) in ms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || **m == (0, 0) {
                parts.push(abs.to_string());
            }
            if m.0 > 0 {
                parts.push(if m.0 == 1 {
                    "x".into()
                } else {
                    format!("x^{}", m.0)
                });
            }
            if m.1 > 0 {
                parts.push(if m.1 == 1 {
                    "y".into()
                } else {
                    format!("y^{}", m.1)
                });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn x() -> BiPoly {
        BiPoly::var(Var::X)
    }
    fn y() -> BiPoly {
        BiPoly::var(Var::Y)
    }

    #[test]
    fn add_cancels_opposites() {
        let a = &x() + &y();
        let b = &x() - &y();
        let s = &a + &b;
        assert_eq!(s, x().scale(&rat_int(2)));
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let a = &x() + &y();
        assert!((&a * &BiPoly::zero()).is_zero());
    }

    #[test]
    fn mul_expands_and_matches_spot_evaluation() {
        // (y+x+1)(y^2+x-1) checked at x=2, y=3: 6 * 10 = 60.
        let a = &(&y() + &x()) + &BiPoly::one();
        let b = &(&y() * &y()) + &(&x() - &BiPoly::one());
        let p = &a * &b;
        assert_eq!(p.eval(&rat_int(2), &rat_int(3)), rat_int(60));
        assert_eq!(
            a.eval(&rat_int(2), &rat_int(3)) * b.eval(&rat_int(2), &rat_int(3)),
            rat_int(60)
        );
    }

    #[test]
    fn derive_power_rule() {
        // d/dy (x*y^3) = 3*x*y^2
        let p = BiPoly::monomial((1, 3), rat_int(1));
        assert_eq!(p.derive(Var::Y), BiPoly::monomial((1, 2), rat_int(3)));
        assert!(BiPoly::int(5).derive(Var::X).is_zero());
    }

    #[test]
    fn derive_chain_rule_via_expansion() {
        // d/dy (xy-2)^2 = 2x(xy-2)
        let q = &(&x() * &y()) - &BiPoly::int(2);
        let p = &q * &q;
        let expect = q.mul_monomial(1, 0, &rat_int(2));
        assert_eq!(p.derive(Var::Y), expect);
    }

    #[test]
    fn int_normalized_sign_and_content() {
        let p = BiPoly::from_terms([((1, 0), rat(-4, 3)), ((0, 1), rat(-2, 3))]);
        let (s, prim) = p.int_normalized();
        // Leading under TdegYx is the y term; normalized leading coeff positive.
        assert_eq!(prim.coeff(0, 1), rat_int(1));
        assert_eq!(prim.coeff(1, 0), rat_int(2));
        assert_eq!(prim.scale(&s), p);
    }

    #[test]
    fn monomial_order_tiebreaks() {
        assert_eq!(
            MonomialOrder::TdegYx.cmp((0, 2), (1, 1)),
            Ordering::Greater
        );
        assert_eq!(MonomialOrder::TdegXy.cmp((0, 2), (1, 1)), Ordering::Less);
        assert_eq!(MonomialOrder::TdegYx.cmp((3, 0), (1, 1)), Ordering::Greater);
    }

    #[test]
    fn shift_x_round_trip() {
        let p = BiPoly::from_terms([((2, 1), rat_int(3)), ((1, 0), rat_int(-1)), ((0, 0), rat_int(7))]);
        let q = p.shift_x(&rat_int(5)).shift_x(&rat_int(-5));
        assert_eq!(p, q);
        // (x+1)^2 at x -> x+1 shift of x^2
        let sq = BiPoly::monomial((2, 0), rat_int(1)).shift_x(&rat_int(1));
        assert_eq!(sq.coeff(1, 0), rat_int(2));
        assert_eq!(sq.coeff(0, 0), rat_int(1));
    }
}
