//! Bivariate factorization: evaluate at a lucky x-point, factor the
//! univariate image, Hensel-lift with respect to (x - x0) in a truncated
//! power-series ring, and recombine with exact trial division.

use num_traits::Zero;

use super::zassenhaus::{combinations, factor_squarefree_z};
use crate::poly::{exact_div, primitive_y, univar, BiPoly, Var};
use crate::rat::Rat;

/// Drops all terms with x-exponent >= k.
fn trunc_x(p: &BiPoly, k: u32) -> BiPoly {
    BiPoly::from_terms(
        p.terms()
            .filter(|(m, _)| m.0 < k)
            .map(|(m, c)| (*m, c.clone())),
    )
}

fn mul_trunc(a: &BiPoly, b: &BiPoly, k: u32) -> BiPoly {
    // Truncating the full product is fine at these sizes.
    trunc_x(&(a * b), k)
}

/// Inverse of an x-only polynomial with nonzero constant term, as a power
/// series mod x^k.
fn series_inv_x(a: &BiPoly, k: u32) -> BiPoly {
    let coeffs = univar::coeffs(a, Var::X).expect("x-only");
    let a0 = coeffs[0].clone();
    assert!(!a0.is_zero(), "series inverse needs a unit");
    let a0inv = a0.recip();
    let mut b = vec![Rat::zero(); k as usize];
    b[0] = a0inv.clone();
    for n in 1..k as usize {
        let mut s = Rat::zero();
        for i in 1..=n.min(coeffs.len() - 1) {
            s += &coeffs[i] * &b[n - i];
        }
        b[n] = -s * &a0inv;
    }
    univar::from_coeffs(&b, Var::X)
}

/// Division by a y-monic polynomial, coefficients truncated mod x^k.
fn divrem_y_monic_trunc(a: &BiPoly, b: &BiPoly, k: u32) -> (BiPoly, BiPoly) {
    debug_assert!(b.lc_y().is_one());
    let db = b.deg_y();
    let mut rem = trunc_x(a, k);
    let mut q = BiPoly::zero();
    while !rem.is_zero() && rem.deg_y() >= db {
        let dr = rem.deg_y();
        let lead = rem.y_coeff(dr);
        let shift = BiPoly::from_terms(lead.terms().map(|(m, c)| ((m.0, dr - db), c.clone())));
        q = &q + &shift;
        rem = trunc_x(&(&rem - &(&shift * b)), k);
    }
    (q, rem)
}

/// One quadratic Hensel step in the (x)-adic ring, from precision `prec` to
/// `min(2*prec, cap)`. All inputs are y-monic except the Bezout pair.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &BiPoly,
    g: &BiPoly,
    h: &BiPoly,
    s: &BiPoly,
    t: &BiPoly,
    prec: u32,
    cap: u32,
) -> (BiPoly, BiPoly, BiPoly, BiPoly, u32) {
    let k = (2 * prec).min(cap);
    let e = trunc_x(&(f - &mul_trunc(g, h, k)), k);
    let (q, r) = divrem_y_monic_trunc(&mul_trunc(s, &e, k), h, k);
    let gs = trunc_x(&(&(g + &mul_trunc(t, &e, k)) + &mul_trunc(&q, g, k)), k);
    let hs = trunc_x(&(h + &r), k);
    let b = trunc_x(
        &(&(&mul_trunc(s, &gs, k) + &mul_trunc(t, &hs, k)) - &BiPoly::one()),
        k,
    );
    let (c, d) = divrem_y_monic_trunc(&mul_trunc(s, &b, k), &hs, k);
    let ss = trunc_x(&(s - &d), k);
    let ts = trunc_x(&(&(t - &mul_trunc(t, &b, k)) - &mul_trunc(&c, &gs, k)), k);
    (gs, hs, ss, ts, k)
}

/// Lifts the coprime y-monic pair (g0, h0), images of `fm` mod x, to
/// precision x^cap.
fn lift_pair(fm: &BiPoly, g0: &BiPoly, h0: &BiPoly, cap: u32) -> (BiPoly, BiPoly) {
    let gy = univar::coeffs(g0, Var::Y).expect("univariate image");
    let hy = univar::coeffs(h0, Var::Y).expect("univariate image");
    let (gcd, s0, t0) = univar::ext_gcd(&gy, &hy);
    debug_assert_eq!(univar::deg(&gcd), Some(0));
    let mut g = g0.clone();
    let mut h = h0.clone();
    let mut s = univar::from_coeffs(&s0, Var::Y);
    let mut t = univar::from_coeffs(&t0, Var::Y);
    let mut prec = 1u32;
    while prec < cap {
        let (gs, hs, ss, ts, k) = hensel_step(fm, &g, &h, &s, &t, prec, cap);
        g = gs;
        h = hs;
        s = ss;
        t = ts;
        prec = k;
    }
    (g, h)
}

/// Lifts every y-monic univariate factor against `fm` (y-monic mod x^cap).
fn lift_all(fm: &BiPoly, images: &[BiPoly], cap: u32) -> Vec<BiPoly> {
    if images.len() == 1 {
        return vec![fm.clone()];
    }
    let mid = images.len() / 2;
    let mut g0 = BiPoly::one();
    for p in &images[..mid] {
        g0 = &g0 * p;
    }
    let mut h0 = BiPoly::one();
    for p in &images[mid..] {
        h0 = &h0 * p;
    }
    let (g, h) = lift_pair(fm, &g0, &h0, cap);
    let mut out = lift_all(&g, &images[..mid], cap);
    out.extend(lift_all(&h, &images[mid..], cap));
    out
}

fn univariate_in_y_irreducibles(p: &BiPoly) -> Vec<BiPoly> {
    let c = univar::coeffs(p, Var::Y).expect("y-univariate");
    let (_, prim) = univar::from_coeffs(&c, Var::Y).int_normalized();
    let ints: Vec<_> = univar::coeffs(&prim, Var::Y)
        .unwrap()
        .iter()
        .map(|r| r.numer().clone())
        .collect();
    factor_squarefree_z(&ints)
        .into_iter()
        .map(|f| {
            univar::from_coeffs(
                &f.iter().map(|c| Rat::from_integer(c.clone())).collect::<Vec<_>>(),
                Var::Y,
            )
        })
        .collect()
}

/// Irreducible factors of a squarefree polynomial that is primitive with
/// respect to y (no x-only content) and depends on y.
pub fn factor_bivariate_squarefree(f: &BiPoly) -> Vec<BiPoly> {
    debug_assert!(f.depends_on(Var::Y));
    let f = f.normalized();
    if f.deg_y() >= 1 && !f.depends_on(Var::X) {
        return univariate_in_y_irreducibles(&f);
    }
    let lc = f.lc_y();
    // Lucky point: degree in y preserved and squarefree image.
    let mut candidates = vec![Rat::zero()];
    for n in 1i64.. {
        candidates.push(Rat::from_integer(n.into()));
        candidates.push(Rat::from_integer((-n).into()));
        if candidates.len() > 200 {
            break;
        }
    }
    let mut chosen = None;
    for x0 in &candidates {
        if lc.eval(x0, &Rat::zero()).is_zero() {
            continue;
        }
        let img = f.subst_x(x0);
        let iy = univar::coeffs(&img, Var::Y).unwrap();
        let dimg = univar::gcd(&iy, &{
            let d = img.derive(Var::Y);
            univar::coeffs(&d, Var::Y).unwrap()
        });
        if univar::deg(&dimg) == Some(0) {
            chosen = Some((x0.clone(), img));
            break;
        }
    }
    let (x0, img) = chosen.expect("no lucky evaluation point found");
    let images = univariate_in_y_irreducibles(&img);
    if images.len() == 1 {
        return vec![f];
    }
    let monic_images: Vec<BiPoly> = images
        .iter()
        .map(|g| {
            let c = univar::coeffs(g, Var::Y).unwrap();
            let lcinv = c.last().unwrap().recip();
            univar::from_coeffs(&univar::scale(&c, &lcinv), Var::Y)
        })
        .collect();

    let cap = f.deg_x() + lc.deg_x() + 1;
    let shifted = f.shift_x(&x0);
    let lc_sh = shifted.lc_y();
    let fm = mul_trunc(&shifted, &series_inv_x(&lc_sh, cap), cap);
    let lifted = lift_all(&fm, &monic_images, cap);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut out = Vec::new();
    let mut f_cur = f.clone();
    let mut card = 1usize;
    'outer: while 2 * card <= remaining.len() {
        for combo in combinations(remaining.len(), card) {
            let subset: Vec<usize> = combo.iter().map(|&i| remaining[i]).collect();
            let lc_cur = f_cur.shift_x(&x0).lc_y();
            let mut h = trunc_x(&lc_cur, cap);
            for &i in &subset {
                h = mul_trunc(&h, &lifted[i], cap);
            }
            let cand = primitive_y(&h.shift_x(&(-x0.clone()))).1.normalized();
            if cand.is_constant() {
                continue;
            }
            if let Some(q) = exact_div(&f_cur, &cand) {
                out.push(cand);
                f_cur = q.normalized();
                remaining.retain(|i| !subset.contains(i));
                continue 'outer;
            }
        }
        card += 1;
    }
    if !f_cur.is_constant() {
        out.push(f_cur.normalized());
    }
    out.sort_by(|a, b| a.cmp_canonical(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn x() -> BiPoly {
        BiPoly::var(Var::X)
    }
    fn y() -> BiPoly {
        BiPoly::var(Var::Y)
    }

    #[test]
    fn splits_product_of_two_lines() {
        // x^2 - y^2 = (x-y)(x+y); primitive wrt y, squarefree.
        let f = &(&x() * &x()) - &(&y() * &y());
        let fs = factor_bivariate_squarefree(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(&x() - &y()).normalized()));
        assert!(fs.contains(&(&x() + &y()).normalized()));
    }

    #[test]
    fn splits_mixed_degree_factors() {
        // (xy - 2)(y + x^2 - 1)
        let a = &(&x() * &y()) - &BiPoly::int(2);
        let b = &(&y() + &(&x() * &x())) - &BiPoly::one();
        let f = &a * &b;
        let fs = factor_bivariate_squarefree(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a.normalized()));
        assert!(fs.contains(&b.normalized()));
    }

    #[test]
    fn keeps_irreducible_quadratic() {
        // y^2 + x^2 + 1 has no factor of y-degree 1 over Q.
        let f = &(&(&y() * &y()) + &(&x() * &x())) + &BiPoly::one();
        let fs = factor_bivariate_squarefree(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0], f.normalized());
    }

    #[test]
    fn three_factors_with_shared_image_degrees() {
        // (y + x)(y - x)(y + x + 1): distinct lines, needs clean lifting.
        let f = &(&(&y() + &x()) * &(&y() - &x())) * &(&(&y() + &x()) + &BiPoly::one());
        let fs = factor_bivariate_squarefree(&f);
        assert_eq!(fs.len(), 3);
        let _ = rat_int(0);
    }
}
