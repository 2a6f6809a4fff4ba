//! Exact rational scalars used as polynomial coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact k-th root of a rational, if one exists.
pub fn nth_root(r: &Rat, k: u32) -> Option<Rat> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(r.clone());
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    if r.is_negative() && k % 2 == 0 {
        return None;
    }
    let num = int_nth_root(&r.numer().abs(), k)?;
    let den = int_nth_root(r.denom(), k)?;
    let mut root = Rat::new(num, den);
    if r.is_negative() {
        root = -root;
    }
    Some(root)
}

fn int_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_zero() || n.is_one() {
        return Some(n.clone());
    }
    let root = n.nth_root(k);
    if root.pow(k) == *n {
        Some(root)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_root_exact_cases() {
        assert_eq!(nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(nth_root(&rat(-8, 1), 3), Some(rat_int(-2)));
        assert_eq!(nth_root(&rat(2, 1), 2), None);
        assert_eq!(nth_root(&rat(-4, 1), 2), None);
        assert_eq!(nth_root(&rat(16, 1), 4), Some(rat_int(2)));
    }
}
