//! Square-free decomposition and irreducible factorization over the
//! rationals, split into x-only and y-dependent parts.

mod bivariate;
pub mod zassenhaus;



use crate::poly::{exact_div, gcd_bipoly, primitive_y, univar, BiPoly, PolyError, Var};
use crate::rat::Rat;

pub use bivariate::factor_bivariate_squarefree;

/// Complete factorization of a bivariate polynomial over the rationals.
/// The product `content * prod(units_x) * prod(factors_y)` reconstructs the
/// input exactly; every listed factor is irreducible, primitive and
/// sign-normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    pub content: Rat,
    pub units_x: Vec<(BiPoly, u32)>,
    pub factors_y: Vec<(BiPoly, u32)>,
}

impl FactorSet {
    /// Rebuilds the factored polynomial.
    pub fn product(&self) -> BiPoly {
        let mut p = BiPoly::constant(self.content.clone());
        for (f, m) in self.units_x.iter().chain(self.factors_y.iter()) {
            p = &p * &f.pow(*m);
        }
        p
    }

    /// Product of all x-only factors with multiplicity (without content).
    pub fn t0(&self) -> BiPoly {
        let mut p = BiPoly::one();
        for (f, m) in &self.units_x {
            p = &p * &f.pow(*m);
        }
        p
    }

    /// Largest multiplicity among y-dependent factors (0 if none).
    pub fn max_mult_y(&self) -> u32 {
        self.factors_y.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }
}

/// Yun decomposition with respect to one variable. Requires every factor of
/// `p` to depend on `v` (for `v = y` that means `p` has trivial x-content).
fn yun(p: &BiPoly, v: Var) -> Vec<(BiPoly, u32)> {
    let mut out = Vec::new();
    let dp = p.derive(v);
    let mut g = gcd_bipoly(p, &dp).expect("nonzero");
    let mut w = exact_div(p, &g).expect("gcd divides");
    let mut mult = 1u32;
    while !w.is_constant() {
        let w_next = gcd_bipoly(&w, &g).expect("nonzero");
        let part = exact_div(&w, &w_next).expect("gcd divides");
        if !part.is_constant() {
            out.push((part.normalized(), mult));
        }
        g = exact_div(&g, &w_next).expect("gcd divides");
        w = w_next;
        mult += 1;
    }
    out
}

/// Square-free decomposition: pairwise-coprime square-free parts with
/// multiplicities whose product reconstructs the input up to content.
pub fn squarefree_decompose(p: &BiPoly) -> Result<Vec<(BiPoly, u32)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let (_, prim) = p.int_normalized();
    if prim.is_constant() {
        return Ok(vec![]);
    }
    let (cx, pp) = primitive_y(&prim);
    let mut parts = Vec::new();
    if !cx.is_constant() {
        parts.extend(yun(&cx, Var::X));
    }
    if !pp.is_constant() {
        if pp.depends_on(Var::Y) {
            parts.extend(yun(&pp, Var::Y));
        } else {
            parts.extend(yun(&pp, Var::X));
        }
    }
    parts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp_canonical(&b.0)));
    Ok(parts)
}

/// Complete irreducible factorization split into x-only and y-dependent
/// factors.
pub fn factorize(p: &BiPoly) -> Result<FactorSet, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let (content, prim) = p.int_normalized();
    let mut units_x: Vec<(BiPoly, u32)> = Vec::new();
    let mut factors_y: Vec<(BiPoly, u32)> = Vec::new();
    if !prim.is_constant() {
        let (cx, pp) = primitive_y(&prim);
        if !cx.is_constant() {
            for (part, mult) in yun(&cx, Var::X) {
                for f in factor_x_only_squarefree(&part) {
                    units_x.push((f, mult));
                }
            }
        }
        if !pp.is_constant() {
            if pp.depends_on(Var::Y) {
                for (part, mult) in yun(&pp, Var::Y) {
                    for f in factor_bivariate_squarefree(&part) {
                        factors_y.push((f, mult));
                    }
                }
            } else {
                // Whole primitive part is x-only (input had deg_y = 0).
                for (part, mult) in yun(&pp, Var::X) {
                    for f in factor_x_only_squarefree(&part) {
                        units_x.push((f, mult));
                    }
                }
            }
        }
    }
    units_x.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    factors_y.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    Ok(FactorSet {
        content,
        units_x,
        factors_y,
    })
}

fn factor_x_only_squarefree(p: &BiPoly) -> Vec<BiPoly> {
    let coeffs = univar::coeffs(p, Var::X).expect("x-only");
    if univar::deg(&coeffs).map_or(true, |d| d == 0) {
        return vec![];
    }
    let ints: Vec<_> = coeffs.iter().map(|r| r.numer().clone()).collect();
    zassenhaus::factor_squarefree_z(&ints)
        .into_iter()
        .map(|f| {
            univar::from_coeffs(
                &f.iter()
                    .map(|c| Rat::from_integer(c.clone()))
                    .collect::<Vec<_>>(),
                Var::X,
            )
        })
        .collect()
}

/// Rational roots with multiplicities of a nonconstant x-only polynomial.
/// Irrational and complex roots stay inside their irreducible factors and
/// are not reported.
pub fn roots_rational(u: &BiPoly) -> Result<Vec<(Rat, u32)>, PolyError> {
    if u.depends_on(Var::Y) {
        return Err(PolyError::NotUnivariate);
    }
    if u.is_constant() {
        return Err(PolyError::ConstantModulus);
    }
    let fs = factorize(u)?;
    let mut roots = Vec::new();
    for (f, m) in &fs.units_x {
        if f.deg_x() == 1 {
            let a = f.coeff(1, 0);
            let b = f.coeff(0, 0);
            roots.push((-b / a, *m));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
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
    fn squarefree_splits_constructed_powers() {
        // (y+x+1)^3 (yx+2)^2
        let a = &(&y() + &x()) + &BiPoly::one();
        let b = &(&y() * &x()) + &BiPoly::int(2);
        let p = &a.pow(3) * &b.pow(2);
        let parts = squarefree_decompose(&p).unwrap();
        assert_eq!(parts, vec![(a.normalized(), 3), (b.normalized(), 2)]);
    }

    #[test]
    fn squarefree_single_part() {
        let p = &x() + &y();
        assert_eq!(squarefree_decompose(&p).unwrap(), vec![(p.clone(), 1)]);
        assert!(squarefree_decompose(&BiPoly::zero()).is_err());
    }

    #[test]
    fn squarefree_mixed_multiplicities() {
        // (x^2+y+1)^4 (yx+3x-1)
        let a = &(&(&x() * &x()) + &y()) + &BiPoly::one();
        let b = &(&(&y() * &x()) + &x().scale(&rat_int(3))) - &BiPoly::one();
        let p = &a.pow(4) * &b;
        let parts = squarefree_decompose(&p).unwrap();
        assert_eq!(parts, vec![(a.normalized(), 4), (b.normalized(), 1)]);
    }

    #[test]
    fn factorize_known_product() {
        // 3x(xy-2)^2(y+x^2-1): content 3, x-only [x], y-dependent with mults
        let p1 = &(&x() * &y()) - &BiPoly::int(2);
        let p2 = &(&y() + &(&x() * &x())) - &BiPoly::one();
        let input = &(&x().scale(&rat_int(3)) * &p1.pow(2)) * &p2;
        let fs = factorize(&input).unwrap();
        assert_eq!(fs.content, rat_int(3));
        assert_eq!(fs.units_x, vec![(x(), 1)]);
        assert_eq!(fs.factors_y.len(), 2);
        assert!(fs.factors_y.contains(&(p1.normalized(), 2)));
        assert!(fs.factors_y.contains(&(p2.normalized(), 1)));
        assert_eq!(fs.product(), input);
    }

    #[test]
    fn factorize_difference_of_squares() {
        let p = &(&x() * &x()) - &(&y() * &y());
        let fs = factorize(&p).unwrap();
        assert!(fs.units_x.is_empty());
        assert_eq!(fs.factors_y.len(), 2);
        assert_eq!(fs.product(), p);
    }

    #[test]
    fn factorize_x_only_input() {
        // 2x^2(x-1): content 2, units x^2 and (x-1)
        let p = (&(&x() * &x()) * &(&x() - &BiPoly::one())).scale(&rat_int(2));
        let fs = factorize(&p).unwrap();
        assert_eq!(fs.content, rat_int(2));
        assert!(fs.factors_y.is_empty());
        assert!(fs.units_x.contains(&(x(), 2)));
        assert_eq!(fs.product(), p);
    }

    #[test]
    fn rational_roots_with_multiplicities() {
        // x^2(x-1) -> [(0,2),(1,1)]
        let u = &(&x() * &x()) * &(&x() - &BiPoly::one());
        assert_eq!(
            roots_rational(&u).unwrap(),
            vec![(rat_int(0), 2), (rat_int(1), 1)]
        );
        // x^2+1 -> no rational roots
        let v = &(&x() * &x()) + &BiPoly::one();
        assert!(roots_rational(&v).unwrap().is_empty());
        // 2x-3 -> 3/2
        let w = &x().scale(&rat_int(2)) - &BiPoly::int(3);
        assert_eq!(roots_rational(&w).unwrap(), vec![(rat(3, 2), 1)]);
    }
}
