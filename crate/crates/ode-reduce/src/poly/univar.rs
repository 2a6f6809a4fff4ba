//! Univariate views of `BiPoly` values and the rational-coefficient
//! Euclidean toolbox built on them.

use num_traits::{One, Zero};

use super::{BiPoly, PolyError, Var};
use crate::rat::Rat;

/// Dense coefficient vector (ascending powers) when `p` involves only `var`.
pub fn coeffs(p: &BiPoly, var: Var) -> Option<Vec<Rat>> {
    let other = match var {
        Var::X => Var::Y,
        Var::Y => Var::X,
    };
    if p.depends_on(other) {
        return None;
    }
    if p.is_zero() {
        return Some(vec![]);
    }
    let mut v = vec![Rat::zero(); p.deg(var) as usize + 1];
    for (m, c) in p.terms() {
        let e = match var {
            Var::X => m.0,
            Var::Y => m.1,
        };
        v[e as usize] = c.clone();
    }
    Some(v)
}

pub fn from_coeffs(c: &[Rat], var: Var) -> BiPoly {
    BiPoly::from_terms(c.iter().enumerate().map(|(i, r)| {
        let m = match var {
            Var::X => (i as u32, 0),
            Var::Y => (0, i as u32),
        };
        (m, r.clone())
    }))
}

fn trim(v: &mut Vec<Rat>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub fn deg(v: &[Rat]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    if s.is_zero() {
        return vec![];
    }
    a.iter().map(|c| c * s).collect()
}

/// Division with remainder over the rationals; divisor must be nonzero.
pub fn div_rem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!b.is_empty(), "univariate division by zero");
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut rem = a.to_vec();
    trim(&mut rem);
    if db == 0 {
        return (scale(&rem, &lb.recip()), vec![]);
    }
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![Rat::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let factor = rem.last().unwrap() / &lb;
        q[da - db] = factor.clone();
        for (i, cb) in b.iter().enumerate() {
            let delta = cb * &factor;
            rem[da - db + i] -= delta;
        }
        trim(&mut rem);
    }
    trim(&mut q);
    (q, rem)
}

/// Monic gcd over the rationals; gcd of two zero polynomials is zero.
pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut u = a.to_vec();
    let mut v = b.to_vec();
    trim(&mut u);
    trim(&mut v);
    while !v.is_empty() {
        let (_, r) = div_rem(&u, &v);
        u = v;
        v = r;
        // Monic normalization keeps coefficient growth in check.
        if let Some(lc) = v.last().cloned() {
            v = scale(&v, &lc.recip());
        }
    }
    if let Some(lc) = u.last().cloned() {
        u = scale(&u, &lc.recip());
    }
    u
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0 = vec![Rat::one()];
    let mut s1: Vec<Rat> = vec![];
    let mut t0: Vec<Rat> = vec![];
    let mut t1 = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        let t = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if let Some(lc) = r0.last().cloned() {
        let inv = lc.recip();
        r0 = scale(&r0, &inv);
        s0 = scale(&s0, &inv);
        t0 = scale(&t0, &inv);
    }
    (r0, s0, t0)
}

/// Inverse of `a` modulo `m` when they are coprime.
pub fn invert_mod(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    let (g, s, _) = ext_gcd(a, m);
    if deg(&g) == Some(0) {
        let (_, r) = div_rem(&s, m);
        Some(r)
    } else {
        None
    }
}

/// Reduces `p` modulo a nonconstant univariate polynomial in x; the result
/// has x-degree below the modulus. For modulus `x - a` this is substitution.
pub fn eval_at_x(p: &BiPoly, modulus: &BiPoly) -> Result<BiPoly, PolyError> {
    let m = coeffs(modulus, Var::X).ok_or(PolyError::NotUnivariate)?;
    if deg(&m).map_or(true, |d| d == 0) {
        return Err(PolyError::ConstantModulus);
    }
    let d = m.len() - 1;
    // Powers of x reduced mod m, computed incrementally.
    let max_i = p.deg_x() as usize;
    let mut pows: Vec<Vec<Rat>> = Vec::with_capacity(max_i + 1);
    pows.push(vec![Rat::one()]);
    for _ in 0..max_i {
        let mut next = vec![Rat::zero()];
        next.extend(pows.last().unwrap().iter().cloned());
        if next.len() > d {
            let (_, r) = div_rem(&next, &m);
            next = r;
        }
        pows.push(next);
    }
    let mut out = BiPoly::zero();
    for (mono, c) in p.terms() {
        let red = &pows[mono.0 as usize];
        for (i, rc) in red.iter().enumerate() {
            if !rc.is_zero() {
                out = &out + &BiPoly::monomial((i as u32, mono.1), c * rc);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn xp(c: &[i64]) -> Vec<Rat> {
        c.iter().map(|&n| rat_int(n)).collect()
    }

    #[test]
    fn div_rem_basic() {
        // (x^2 + 3x + 2) / (x + 1) = (x + 2), r = 0
        let (q, r) = div_rem(&xp(&[2, 3, 1]), &xp(&[1, 1]));
        assert_eq!(q, xp(&[2, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = xp(&[-1, 0, 1]); // x^2 - 1
        let b = xp(&[1, 1]); // x + 1
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(g, xp(&[1, 1]));
        let lhs = add(&mul(&s, &a), &mul(&t, &b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn invert_mod_field() {
        // inverse of x modulo x^2 + 1 is -x
        let inv = invert_mod(&xp(&[0, 1]), &xp(&[1, 0, 1])).unwrap();
        assert_eq!(inv, xp(&[0, -1]));
        assert!(invert_mod(&xp(&[1, 1]), &xp(&[1, 2, 1])).is_none());
    }

    #[test]
    fn eval_at_x_substitution() {
        use crate::poly::Var;
        // x*y + 2 mod (x - 1) -> y + 2
        let p = &BiPoly::monomial((1, 1), rat_int(1)) + &BiPoly::int(2);
        let m = &BiPoly::var(Var::X) - &BiPoly::one();
        let r = eval_at_x(&p, &m).unwrap();
        assert_eq!(r, &BiPoly::var(Var::Y) + &BiPoly::int(2));
    }

    #[test]
    fn eval_at_x_quadratic_modulus() {
        use crate::poly::Var;
        // x^2*y mod (x^2 + 1) -> -y
        let p = BiPoly::monomial((2, 1), rat_int(1));
        let m = &BiPoly::monomial((2, 0), rat_int(1)) + &BiPoly::one();
        let r = eval_at_x(&p, &m).unwrap();
        assert_eq!(r, BiPoly::monomial((0, 1), rat_int(-1)));
        // constant modulus rejected
        assert!(eval_at_x(&p, &BiPoly::int(3)).is_err());
        let _ = Var::X;
    }
}
