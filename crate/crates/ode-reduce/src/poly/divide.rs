//! Multivariate division with remainder and exact divisibility tests.

use super::{monomial_divides, BiPoly, MonomialOrder, PolyError};

/// Divides `f` by the ordered divisor list: `f = sum q_i * d_i + r`, where no
/// term of `r` is divisible by any divisor's leading monomial under `order`.
/// Divisors are tried in list order at every step, so the result is
/// deterministic.
pub fn reduce_modulo(
    f: &BiPoly,
    divisors: &[BiPoly],
    order: MonomialOrder,
) -> Result<(Vec<BiPoly>, BiPoly), PolyError> {
    if divisors.iter().any(|d| d.is_zero()) {
        return Err(PolyError::ZeroDivisor);
    }
    let leads: Vec<_> = divisors
        .iter()
        .map(|d| d.leading(order).unwrap())
        .collect();
    let mut quotients = vec![BiPoly::zero(); divisors.len()];
    let mut rem = BiPoly::zero();
    let mut work = f.clone();
    while let Some((m, c)) = work.leading(order) {
        let mut reduced = false;
        for (k, (lm, lc)) in leads.iter().enumerate() {
            if monomial_divides(*lm, m) {
                let shift = (m.0 - lm.0, m.1 - lm.1);
                let factor = &c / lc;
                quotients[k] = &quotients[k] + &BiPoly::monomial(shift, factor.clone());
                work = &work - &divisors[k].mul_monomial(shift.0, shift.1, &factor);
                reduced = true;
                break;
            }
        }
        if !reduced {
            rem = &rem + &BiPoly::monomial(m, c.clone());
            work = &work - &BiPoly::monomial(m, c);
        }
    }
    Ok((quotients, rem))
}

/// Exact quotient `a / b` when `b` divides `a`, `None` otherwise.
pub fn exact_div(a: &BiPoly, b: &BiPoly) -> Option<BiPoly> {
    assert!(!b.is_zero(), "exact_div by zero");
    if a.is_zero() {
        return Some(BiPoly::zero());
    }
    // Quick degree pruning before running the division.
    if a.deg_x() < b.deg_x() || a.deg_y() < b.deg_y() || a.total_deg() < b.total_deg() {
        return None;
    }
    let (q, r) = reduce_modulo(a, std::slice::from_ref(b), MonomialOrder::TdegYx).unwrap();
    if r.is_zero() {
        Some(q.into_iter().next().unwrap())
    } else {
        None
    }
}

/// Single-divisor division with remainder under TdegYx.
pub fn div_rem(a: &BiPoly, b: &BiPoly) -> Result<(BiPoly, BiPoly), PolyError> {
    let (q, r) = reduce_modulo(a, std::slice::from_ref(b), MonomialOrder::TdegYx)?;
    Ok((q.into_iter().next().unwrap(), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;
    use crate::rat::rat_int;

    fn x() -> BiPoly {
        BiPoly::var(Var::X)
    }
    fn y() -> BiPoly {
        BiPoly::var(Var::Y)
    }

    #[test]
    fn reduce_single_divisor_exact() {
        // x^2*y / [x] -> q = x*y, r = 0
        let f = BiPoly::monomial((2, 1), rat_int(1));
        let (q, r) = reduce_modulo(&f, &[x()], MonomialOrder::TdegYx).unwrap();
        assert!(r.is_zero());
        assert_eq!(q[0], BiPoly::monomial((1, 1), rat_int(1)));
    }

    #[test]
    fn reduce_order_dependent_remainder() {
        // x^2 + y^2 by [x + y] under TdegXy: divisor leading term is x,
        // so every x-bearing term is eliminated and r = 2y^2.
        let f = &(&x() * &x()) + &(&y() * &y());
        let d = &x() + &y();
        let (_, r) = reduce_modulo(&f, &[d], MonomialOrder::TdegXy).unwrap();
        assert_eq!(r, BiPoly::monomial((0, 2), rat_int(2)));
    }

    #[test]
    fn exact_div_square_by_base() {
        let q = &(&x() * &y()) - &BiPoly::int(2);
        let sq = &q * &q;
        assert_eq!(exact_div(&sq, &q), Some(q.clone()));
    }

    #[test]
    fn exact_div_rejects_non_divisor() {
        // (x^2 + y) / (x + 1) leaves a remainder.
        let a = &(&x() * &x()) + &y();
        let b = &x() + &BiPoly::one();
        assert_eq!(exact_div(&a, &b), None);
        let (_, r) = div_rem(&a, &b).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn zero_divisor_is_error() {
        assert!(reduce_modulo(&x(), &[BiPoly::zero()], MonomialOrder::TdegYx).is_err());
    }
}
