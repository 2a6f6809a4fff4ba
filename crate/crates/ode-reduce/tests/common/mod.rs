//! Shared fixtures for the integration suites: concrete base ODEs and
//! transformations with known reductions.

#![allow(dead_code)]

use ode_reduce::forward::{forward_transform, Fixture};
use ode_reduce::poly::{BiPoly, Var};
use ode_reduce::rat::rat_int;
use ode_reduce::reduce::ReducedODE;

pub fn x() -> BiPoly {
    BiPoly::var(Var::X)
}

pub fn y() -> BiPoly {
    BiPoly::var(Var::Y)
}

pub fn one() -> BiPoly {
    BiPoly::one()
}

/// x y' = x y^3 - (x+1) y^2
pub fn cubic_base() -> ReducedODE {
    ReducedODE::new(
        x(),
        vec![
            BiPoly::zero(),
            BiPoly::zero(),
            -&(&x() + &one()),
            x(),
        ],
    )
}

/// x y' = y^4 - (x^2+1) y^2
pub fn quartic_base() -> ReducedODE {
    ReducedODE::new(
        x(),
        vec![
            BiPoly::zero(),
            BiPoly::zero(),
            -&(&(&x() * &x()) + &one()),
            BiPoly::zero(),
            one(),
        ],
    )
}

/// x y' = y^5 - (x^2+1) y^2
pub fn quintic_base() -> ReducedODE {
    ReducedODE::new(
        x(),
        vec![
            BiPoly::zero(),
            BiPoly::zero(),
            -&(&(&x() * &x()) + &one()),
            BiPoly::zero(),
            BiPoly::zero(),
            one(),
        ],
    )
}

/// y' = y^2 - (x^2+1) y
pub fn quadratic_base() -> ReducedODE {
    ReducedODE::new(
        one(),
        vec![
            BiPoly::zero(),
            -&(&(&x() * &x()) + &one()),
            one(),
        ],
    )
}

/// A = (y+x+1)^2 (y^2+x-1), B = (xy-2)^2 (y+x^2-1)^2: linear canceled factor.
pub fn wide_transform() -> (BiPoly, BiPoly) {
    let a = &(&(&y() + &x()) + &one()).pow(2) * &(&(&(&y() * &y()) + &x()) - &one());
    let b = &(&(&x() * &y()) - &BiPoly::int(2)).pow(2)
        * &(&(&(&y() + &(&x() * &x())) - &one())).pow(2);
    (a, b)
}

/// A = (y+x+1)^4, B = (xy-2)^3 (y+x^2-1): cubic canceled factor.
pub fn quartic_power_transform() -> (BiPoly, BiPoly) {
    let a = (&(&y() + &x()) + &one()).pow(4);
    let b = &(&(&x() * &y()) - &BiPoly::int(2)).pow(3)
        * &(&(&y() + &(&x() * &x())) - &one());
    (a, b)
}

/// A = (x y^2 + (x+1) y + 3x^2 + x - 1)^3, B = (yx+x-1)^2 (y+x+1)^2.
pub fn cube_transform() -> (BiPoly, BiPoly) {
    let p = &(&(&(&x() * &(&y() * &y())) + &(&(&x() + &one()) * &y()))
        + &(&x() * &x()).scale(&rat_int(3)))
        + &(&x() - &one());
    let a = p.pow(3);
    let b = &(&(&(&y() * &x()) + &x()) - &one()).pow(2) * &(&(&y() + &x()) + &one()).pow(2);
    (a, b)
}

/// A = (y+x+1)^3 (yx+2)^2, B = (x^2+y+1)^4 (yx+3x-1).
pub fn mixed_transform() -> (BiPoly, BiPoly) {
    let a = &(&(&y() + &x()) + &one()).pow(3) * &(&(&y() * &x()) + &BiPoly::int(2)).pow(2);
    let b = &(&(&(&x() * &x()) + &y()) + &one()).pow(4)
        * &(&(&(&y() * &x()) + &x().scale(&rat_int(3))) - &one());
    (a, b)
}

pub fn fixture_cubic_wide() -> Fixture {
    let (a, b) = wide_transform();
    forward_transform(&cubic_base(), &a, &b).unwrap()
}

pub fn fixture_cubic_quartic_power() -> Fixture {
    let (a, b) = quartic_power_transform();
    forward_transform(&cubic_base(), &a, &b).unwrap()
}

pub fn fixture_quartic_cube() -> Fixture {
    let (a, b) = cube_transform();
    forward_transform(&quartic_base(), &a, &b).unwrap()
}

pub fn fixture_quintic_mixed() -> Fixture {
    let (a, b) = mixed_transform();
    forward_transform(&quintic_base(), &a, &b).unwrap()
}

pub fn fixture_quadratic_mixed() -> Fixture {
    let (a, b) = mixed_transform();
    forward_transform(&quadratic_base(), &a, &b).unwrap()
}
