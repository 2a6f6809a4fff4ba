//! Fixture generation: apply a rational substitution to a reduced-form ODE,
//! cancel the common factor, and keep the expected answers alongside the
//! resulting rational ODE.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{exact_div, gcd_bipoly, primitive_y, BiPoly, PolyError, Var};
use crate::rat::Rat;
use crate::reduce::{InputODE, ReducedODE};

/// A generated test case: the base reduced form, the transformation, the
/// resulting ODE after cancellation, and the canceled factor split into its
/// y-dependent and x-only parts.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub base: ReducedODE,
    pub a: BiPoly,
    pub b: BiPoly,
    pub ode: InputODE,
    /// Full gcd removed from the raw transformed fraction.
    pub canceled: BiPoly,
    /// Its y-dependent part (the canceled factor proper).
    pub expected_c: BiPoly,
}

/// Applies `y -> A/B` to `t y' = sum f_i y^i` and cancels the common factor.
pub fn forward_transform(base: &ReducedODE, a: &BiPoly, b: &BiPoly) -> Result<Fixture, PolyError> {
    let n = base.n() as u32;
    assert!(n >= 2, "reduced form must have degree at least 2");
    let g = gcd_bipoly(a, b)?;
    assert!(g.is_one(), "transformation must be in lowest terms");
    let bn2 = b.pow(n - 2);
    let w_y = &(b * &a.derive(Var::Y)) - &(a * &b.derive(Var::Y));
    let n_raw = &(&base.t * &w_y) * &bn2;
    if n_raw.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let w_x = &(b * &a.derive(Var::X)) - &(a * &b.derive(Var::X));
    let mut m_raw = -&(&(&base.t * &w_x) * &bn2);
    for (i, fi) in base.coeffs.iter().enumerate() {
        m_raw = &m_raw + &(fi * &(&a.pow(i as u32) * &b.pow(n - i as u32)));
    }
    let canceled = gcd_bipoly(&m_raw, &n_raw)?;
    let m = exact_div(&m_raw, &canceled).expect("gcd divides");
    let n_poly = exact_div(&n_raw, &canceled).expect("gcd divides");
    let (_, expected_c) = primitive_y(&canceled);
    Ok(Fixture {
        base: base.clone(),
        a: a.clone(),
        b: b.clone(),
        ode: InputODE::new(m, n_poly)?,
        canceled: canceled.normalized(),
        expected_c: expected_c.normalized(),
    })
}

/// Size limits for random fixtures.
#[derive(Clone, Debug)]
pub struct FixtureLimits {
    pub max_deg_y_a: u32,
    pub max_n: u32,
    pub coeff_height: i64,
    /// Force `f_0 = 0` plus a repeated factor in A so a nontrivial factor
    /// cancels.
    pub force_cancellation: bool,
}

impl Default for FixtureLimits {
    fn default() -> Self {
        FixtureLimits {
            max_deg_y_a: 4,
            max_n: 5,
            coeff_height: 5,
            force_cancellation: false,
        }
    }
}

fn random_coeff(rng: &mut ChaCha8Rng, height: i64, nonzero: bool) -> Rat {
    loop {
        let v = rng.gen_range(-height..=height);
        if v != 0 || !nonzero {
            return crate::rat::rat_int(v);
        }
    }
}

/// A random small irreducible-ish building block depending on y: either
/// linear in y with an x-linear companion, or y + (x-quadratic).
fn random_block(rng: &mut ChaCha8Rng, height: i64) -> BiPoly {
    let x = BiPoly::var(Var::X);
    let y = BiPoly::var(Var::Y);
    match rng.gen_range(0..4u8) {
        0 => {
            // y*x + const
            &(&y * &x) + &BiPoly::constant(random_coeff(rng, height, true))
        }
        1 => {
            // y + a*x + b
            let a = random_coeff(rng, height, true);
            let b = random_coeff(rng, height, false);
            &(&y + &x.scale(&a)) + &BiPoly::constant(b)
        }
        2 => {
            // y + a*x^2 + b
            let a = random_coeff(rng, height, true);
            let b = random_coeff(rng, height, true);
            &(&y + &(&x * &x).scale(&a)) + &BiPoly::constant(b)
        }
        _ => {
            // x*y + a*y + b*x + c  (kept irreducible by retry on factoring)
            let a = random_coeff(rng, height, false);
            let b = random_coeff(rng, height, false);
            let c = random_coeff(rng, height, true);
            &(&(&(&x * &y) + &y.scale(&a)) + &x.scale(&b)) + &BiPoly::constant(c)
        }
    }
}

fn random_xpoly(rng: &mut ChaCha8Rng, deg: u32, height: i64) -> BiPoly {
    let mut p = BiPoly::zero();
    for e in 0..=deg {
        p = &p + &BiPoly::monomial((e, 0), random_coeff(rng, height, false));
    }
    p
}

/// Reproducible random fixture. Rejection-samples until the transformation
/// is in lowest terms and (when cancellation is forced) the canceled factor
/// is a nontrivial divisor of a power of A.
pub fn random_fixture(seed: u64, limits: &FixtureLimits) -> Fixture {
    assert!(limits.max_deg_y_a >= 1, "degenerate numerator bound");
    assert!(limits.max_n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=limits.max_n);
        // Base coefficients: f_0 = 0 when cancellation is forced; top
        // coefficient nonzero.
        let mut coeffs: Vec<BiPoly> = Vec::new();
        for i in 0..=n {
            let dead = (i == 0 && limits.force_cancellation) || rng.gen_bool(0.4);
            if dead && i != n {
                coeffs.push(BiPoly::zero());
            } else {
                let d = rng.gen_range(0..=1);
                coeffs.push(random_xpoly(&mut rng, d, limits.coeff_height));
            }
        }
        if coeffs[n as usize].is_zero() {
            coeffs[n as usize] = BiPoly::one();
        }
        let t = if rng.gen_bool(0.5) {
            BiPoly::var(Var::X)
        } else {
            BiPoly::one()
        };
        let base = ReducedODE::new(t, coeffs);
        if base.n() as u32 != n {
            continue;
        }
        // A: one or two blocks; with forced cancellation the first block is
        // squared so its first power cancels.
        let block_a = random_block(&mut rng, limits.coeff_height);
        let exp_a = if limits.force_cancellation { 2 } else { 1 };
        let mut a = block_a.pow(exp_a);
        if a.deg_y() < limits.max_deg_y_a && rng.gen_bool(0.3) {
            a = &a * &random_block(&mut rng, limits.coeff_height);
        }
        if a.deg_y() > limits.max_deg_y_a {
            continue;
        }
        // B: one or two blocks distinct from A's.
        let mut b = random_block(&mut rng, limits.coeff_height);
        if rng.gen_bool(0.4) {
            b = &b * &random_block(&mut rng, limits.coeff_height);
        }
        let Ok(g) = gcd_bipoly(&a, &b) else { continue };
        if !g.is_one() {
            continue;
        }
        let Ok(fx) = forward_transform(&base, &a, &b) else {
            continue;
        };
        if limits.force_cancellation {
            // The canceled factor must be nontrivial and divide a power
            // of A; otherwise resample.
            if fx.expected_c.is_constant() {
                continue;
            }
            if exact_div(&a, &fx.expected_c).is_none()
                && exact_div(&a.pow(2), &fx.expected_c).is_none()
            {
                continue;
            }
        }
        return fx;
    }
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
    fn identity_map_passes_through() {
        // y' = y under A = y, B = 1: M = y, N = 1.
        let base = ReducedODE::new(BiPoly::one(), vec![BiPoly::zero(), BiPoly::one()]);
        // n = 1 is too small for the transform contract; use y' = y^3.
        let base3 = ReducedODE::new(
            BiPoly::one(),
            vec![
                BiPoly::zero(),
                BiPoly::zero(),
                BiPoly::zero(),
                BiPoly::one(),
            ],
        );
        let fx = forward_transform(&base3, &y(), &BiPoly::one()).unwrap();
        assert_eq!(fx.ode.m, BiPoly::monomial((0, 3), rat_int(1)));
        assert_eq!(fx.ode.n, BiPoly::one());
        let _ = base;
    }

    #[test]
    fn degenerate_y_independent_rejected() {
        let base = ReducedODE::new(
            BiPoly::one(),
            vec![BiPoly::zero(), BiPoly::zero(), BiPoly::zero(), BiPoly::one()],
        );
        assert!(forward_transform(&base, &x(), &BiPoly::one()).is_err());
    }

    #[test]
    fn forced_cancellation_produces_nontrivial_factor() {
        let limits = FixtureLimits {
            force_cancellation: true,
            ..FixtureLimits::default()
        };
        let fx = random_fixture(1, &limits);
        assert!(!fx.expected_c.is_constant());
        assert!(exact_div(&fx.a, &fx.expected_c).is_some()
            || exact_div(&fx.a.pow(2), &fx.expected_c).is_some());
    }

    #[test]
    fn fixtures_deterministic_per_seed() {
        let limits = FixtureLimits::default();
        let f1 = random_fixture(7, &limits);
        let f2 = random_fixture(7, &limits);
        assert_eq!(f1.ode, f2.ode);
        assert_eq!(f1.a, f2.a);
    }
}
