//! Bivariate gcd over the rationals.
//!
//! The main route evaluates both inputs at interpolation nodes in x, takes
//! univariate y-gcds, imposes the leading coefficient, and interpolates back;
//! exact trial division makes the result unconditional. A primitive
//! pseudo-remainder sequence remains as a fallback for degenerate cases.

use num_traits::{One, Zero};

use super::{exact_div, univar, BiPoly, PolyError, Var};
use crate::rat::{rat_int, Rat};

/// Gcd of the y-coefficients of `p`, an x-only polynomial (primitive,
/// sign-normalized).
pub fn content_y(p: &BiPoly) -> BiPoly {
    let mut acc: Vec<Rat> = vec![];
    for cj in p.y_coeffs() {
        if cj.is_zero() {
            continue;
        }
        let c = univar::coeffs(&cj, Var::X).unwrap();
        acc = univar::gcd(&acc, &c);
        if univar::deg(&acc) == Some(0) {
            break;
        }
    }
    univar::from_coeffs(&acc, Var::X).normalized()
}

/// Splits `p` into `(content, primitive)` with respect to y:
/// `p = content * primitive`, content x-only.
pub fn primitive_y(p: &BiPoly) -> (BiPoly, BiPoly) {
    if p.is_zero() {
        return (BiPoly::one(), BiPoly::zero());
    }
    let cont = content_y(p);
    if cont.is_one() {
        return (cont, p.clone());
    }
    let prim = exact_div(p, &cont).expect("content divides");
    (cont, prim)
}

fn gcd_univar(a: &BiPoly, b: &BiPoly, var: Var) -> BiPoly {
    let ca = univar::coeffs(a, var).unwrap();
    let cb = univar::coeffs(b, var).unwrap();
    let g = univar::gcd(&ca, &cb);
    univar::from_coeffs(&g, var).normalized()
}

/// Pseudo-remainder of `a` by `b` in the variable y.
fn prem_y(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let db = b.deg_y();
    let lb = b.lc_y();
    let mut r = a.clone();
    let mut steps = a.deg_y() as i64 - db as i64 + 1;
    while !r.is_zero() && r.deg_y() >= db {
        let lr = r.y_coeff(r.deg_y());
        let shift = r.deg_y() - db;
        let lead = BiPoly::from_terms(lr.terms().map(|(m, c)| ((m.0, shift), c.clone())));
        r = &(&lb * &r) - &(&lead * b);
        steps -= 1;
    }
    while steps > 0 {
        r = &lb * &r;
        steps -= 1;
    }
    r
}

/// Primitive PRS fallback for small inputs where interpolation is overkill.
fn gcd_prs(pa: &BiPoly, pb: &BiPoly) -> BiPoly {
    let mut u = pa.clone();
    let mut v = pb.clone();
    if u.deg_y() < v.deg_y() {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let r = prem_y(&u, &v);
        if r.is_zero() {
            break;
        }
        let (_, rp) = primitive_y(&r);
        u = v;
        v = rp.normalized();
        if v.deg_y() == 0 {
            v = BiPoly::one();
            break;
        }
    }
    v.normalized()
}

fn newton_interp(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &xs[i] - &xs[i - level];
            dd[i] = num / den;
        }
    }
    let mut acc: Vec<Rat> = vec![];
    let mut basis: Vec<Rat> = vec![Rat::one()];
    for (i, c) in dd.iter().enumerate() {
        if acc.len() < basis.len() {
            acc.resize(basis.len(), Rat::zero());
        }
        for (k, b) in basis.iter().enumerate() {
            acc[k] += c * b;
        }
        if i + 1 < n {
            // basis *= (x - xs[i])
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xs[i];
            }
            basis = next;
        }
    }
    while acc.last().map_or(false, |c| c.is_zero()) {
        acc.pop();
    }
    acc
}

/// Interpolation gcd of two y-primitive polynomials that both depend on y.
/// Trial division certifies the result; `None` means the node sample was
/// too unlucky and the caller should retry or fall back.
fn gcd_interpolate(pa: &BiPoly, pb: &BiPoly, extra_nodes: u32) -> Option<BiPoly> {
    let la = pa.lc_y();
    let lb = pb.lc_y();
    let gamma = if la.is_constant() || lb.is_constant() {
        BiPoly::one()
    } else {
        gcd_univar(&la, &lb, Var::X)
    };
    let needed = (gamma.deg_x() + pa.deg_x().min(pb.deg_x()) + 1 + extra_nodes) as usize;
    let mut delta_min = pa.deg_y().min(pb.deg_y()) as usize;
    let mut nodes: Vec<(Rat, Vec<Rat>)> = Vec::new();
    let mut k: i64 = 0;
    let mut tried = 0u32;
    while nodes.len() < needed {
        let x0 = rat_int(k);
        k = if k > 0 { -k } else { -k + 1 };
        tried += 1;
        if tried > 6 * needed as u32 + 64 {
            return None;
        }
        if la.eval(&x0, &Rat::zero()).is_zero() || lb.eval(&x0, &Rat::zero()).is_zero() {
            continue;
        }
        let u = univar::coeffs(&pa.subst_x(&x0), Var::Y).unwrap();
        let v = univar::coeffs(&pb.subst_x(&x0), Var::Y).unwrap();
        let g0 = univar::gcd(&u, &v);
        let d = univar::deg(&g0).unwrap_or(0);
        if d == 0 {
            return Some(BiPoly::one());
        }
        if d > delta_min {
            continue; // unlucky node
        }
        if d < delta_min {
            delta_min = d;
            nodes.clear();
        }
        let scale = gamma.eval(&x0, &Rat::zero());
        nodes.push((x0, univar::scale(&g0, &scale)));
    }
    let xs: Vec<Rat> = nodes.iter().map(|(x, _)| x.clone()).collect();
    let mut cand = BiPoly::zero();
    for j in 0..=delta_min {
        let ys: Vec<Rat> = nodes
            .iter()
            .map(|(_, g)| g.get(j).cloned().unwrap_or_else(Rat::zero))
            .collect();
        let cj = newton_interp(&xs, &ys);
        for (e, c) in cj.iter().enumerate() {
            if !c.is_zero() {
                cand = &cand + &BiPoly::monomial((e as u32, j as u32), c.clone());
            }
        }
    }
    if cand.is_zero() {
        return None;
    }
    let (_, cand) = primitive_y(&cand);
    let cand = cand.normalized();
    if exact_div(pa, &cand).is_some() && exact_div(pb, &cand).is_some() {
        Some(cand)
    } else {
        None
    }
}

/// Primitive greatest common divisor, sign-normalized (positive leading
/// coefficient under TdegYx). `gcd(p, 0)` is the normalization of `p`.
pub fn gcd_bipoly(a: &BiPoly, b: &BiPoly) -> Result<BiPoly, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    if a.is_zero() {
        return Ok(b.normalized());
    }
    if b.is_zero() {
        return Ok(a.normalized());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(BiPoly::one());
    }
    let ax = a.is_x_only();
    let bx = b.is_x_only();
    if ax && bx {
        return Ok(gcd_univar(a, b, Var::X));
    }
    let ay = !a.depends_on(Var::X);
    let by = !b.depends_on(Var::X);
    if ay && by {
        return Ok(gcd_univar(a, b, Var::Y));
    }
    // An x-only side meets the other only through its x-content.
    if ax {
        let c = content_y(b);
        if c.is_constant() {
            return Ok(BiPoly::one());
        }
        return Ok(gcd_univar(a, &c, Var::X));
    }
    if bx {
        let c = content_y(a);
        if c.is_constant() {
            return Ok(BiPoly::one());
        }
        return Ok(gcd_univar(b, &c, Var::X));
    }
    let (ca, pa) = primitive_y(a);
    let (cb, pb) = primitive_y(b);
    let cg = if ca.is_constant() || cb.is_constant() {
        BiPoly::one()
    } else {
        gcd_univar(&ca, &cb, Var::X)
    };
    let g = if pa.deg_y() == 0 || pb.deg_y() == 0 {
        BiPoly::one()
    } else if pa == pb {
        pa.normalized()
    } else {
        let mut found = None;
        for extra in [0u32, 4, 12] {
            if let Some(g) = gcd_interpolate(&pa, &pb, extra) {
                found = Some(g);
                break;
            }
        }
        found.unwrap_or_else(|| gcd_prs(&pa, &pb))
    };
    Ok((&cg * &g).normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn x() -> BiPoly {
        BiPoly::var(Var::X)
    }
    fn y() -> BiPoly {
        BiPoly::var(Var::Y)
    }

    #[test]
    fn gcd_of_constructed_products() {
        // gcd((xy-2)^2(y+x+1), (xy-2)(y+x+1)^2) = (xy-2)(y+x+1)
        let p = &(&x() * &y()) - &BiPoly::int(2);
        let q = &(&y() + &x()) + &BiPoly::one();
        let a = &(&p * &p) * &q;
        let b = &p * &(&q * &q);
        let g = gcd_bipoly(&a, &b).unwrap();
        assert_eq!(g, (&p * &q).normalized());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = &x() + &y();
        let b = &x() - &y();
        assert_eq!(gcd_bipoly(&a, &b).unwrap(), BiPoly::one());
    }

    #[test]
    fn gcd_expand_round_trip() {
        // gcd((y+x+1)^4, (y+x+1)^3) = (y+x+1)^3
        let q = &(&y() + &x()) + &BiPoly::one();
        let g = gcd_bipoly(&q.pow(4), &q.pow(3)).unwrap();
        assert_eq!(g, q.pow(3));
    }

    #[test]
    fn gcd_zero_rules() {
        let a = x().scale(&rat_int(-3));
        let g = gcd_bipoly(&a, &BiPoly::zero()).unwrap();
        assert_eq!(g, x());
        assert!(gcd_bipoly(&BiPoly::zero(), &BiPoly::zero()).is_err());
    }

    #[test]
    fn gcd_with_x_content() {
        // gcd(x^2*(y+1), x*(y+1)^2) = x*(y+1)
        let f = &y() + &BiPoly::one();
        let a = &BiPoly::monomial((2, 0), rat_int(1)) * &f;
        let b = &x() * &(&f * &f);
        let g = gcd_bipoly(&a, &b).unwrap();
        assert_eq!(g, (&x() * &f).normalized());
        assert!(g.leading(MonomialOrder::TdegYx).unwrap().1 > rat_int(0));
    }

    #[test]
    fn gcd_larger_shared_part() {
        let p1 = &(&x() * &y()) - &BiPoly::int(2);
        let p2 = &(&y() + &x()) + &BiPoly::one();
        let p3 = &(&y() + &(&x() * &x())) - &BiPoly::one();
        let shared = &p2.pow(3) * &p1.pow(2);
        let a = &shared * &p3.pow(2);
        let b = &(&shared * &p1.pow(2)) * &p2;
        let g = gcd_bipoly(&a, &b).unwrap();
        assert_eq!(g, shared.normalized());
    }
}
