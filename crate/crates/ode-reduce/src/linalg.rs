//! Exact linear algebra over the rationals and over the rational-function
//! field in x.
//!
//! Systems coming out of the coefficient-matching stages are large but very
//! sparse, so elimination works on sparse integer rows with fraction-free
//! cross-multiplication, per-row content removal, and sparsity-aware pivot
//! selection (fewest nonzeros, then smallest coefficient bit-size).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{exact_div, gcd_bipoly, BiPoly};
use crate::rat::Rat;

/// A linear system over named unknowns with exact rational coefficients.
/// Rows may carry a right-hand-side constant; all-zero rhs means homogeneous.
#[derive(Clone, Debug, Default)]
pub struct LinSystem {
    pub unknowns: Vec<String>,
    rows: Vec<Vec<(usize, Rat)>>,
    rhs: Vec<Rat>,
}

impl LinSystem {
    pub fn new(unknowns: Vec<String>) -> Self {
        LinSystem {
            unknowns,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds one equation `sum coeffs = rhs`. Column indices must be in range.
    pub fn add_row(&mut self, coeffs: Vec<(usize, Rat)>, rhs: Rat) {
        debug_assert!(coeffs.iter().all(|(c, _)| *c < self.unknowns.len()));
        let mut merged: BTreeMap<usize, Rat> = BTreeMap::new();
        for (c, v) in coeffs {
            if !v.is_zero() {
                let e = merged.entry(c).or_insert_with(Rat::zero);
                *e += v;
            }
        }
        merged.retain(|_, v| !v.is_zero());
        self.rows.push(merged.into_iter().collect());
        self.rhs.push(rhs);
    }

    /// Value of row `r` under a dense assignment, minus its right-hand side.
    pub fn residual(&self, r: usize, assignment: &[Rat]) -> Rat {
        let mut acc = -self.rhs[r].clone();
        for (c, v) in &self.rows[r] {
            acc += v * &assignment[*c];
        }
        acc
    }
}

/// Solution of a linear system: nullspace basis plus, for inhomogeneous
/// systems, one particular solution (`None` when inconsistent).
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub basis: Vec<Vec<Rat>>,
    pub particular: Option<Vec<Rat>>,
}

impl SolutionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

// Sparse integer row: sorted (col, coeff) pairs; the rhs lives in a virtual
// column behind the unknowns.
type IRow = Vec<(usize, BigInt)>;

fn row_content(r: &IRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, v) in r {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

fn normalize_row(mut r: IRow) -> IRow {
    let g = row_content(&r);
    if !g.is_zero() && !g.is_one() {
        for (_, v) in r.iter_mut() {
            *v = &*v / &g;
        }
    }
    r
}

/// dst*p - src*c as a sparse merge; result content-normalized.
fn eliminate(dst: &IRow, src: &IRow, p: &BigInt, c: &BigInt) -> IRow {
    let mut out: IRow = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push((dst[i].0, &dst[i].1 * p));
            i += 1;
        } else if i >= dst.len() || src[j].0 < dst[i].0 {
            out.push((src[j].0, -(&src[j].1 * c)));
            j += 1;
        } else {
            let v = &dst[i].1 * p - &src[j].1 * c;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize_row(out)
}

fn bitsize(v: &BigInt) -> u64 {
    v.abs().bits()
}

/// Exact nullspace (and particular solution when a right-hand side is
/// present) by fraction-free elimination.
pub fn nullspace(sys: &LinSystem) -> SolutionSpace {
    let ncols = sys.unknowns.len();
    let rhs_col = ncols;
    let homogeneous = sys.rhs.iter().all(|r| r.is_zero());

    // Clear each row to primitive integers, rhs folded into the last column.
    let mut rows: Vec<IRow> = Vec::new();
    for (r, coeffs) in sys.rows.iter().enumerate() {
        let mut den = BigInt::one();
        for (_, v) in coeffs {
            den = den.lcm(v.denom());
        }
        den = den.lcm(sys.rhs[r].denom());
        let mut row: IRow = coeffs
            .iter()
            .map(|(c, v)| (*c, v.numer() * &den / v.denom()))
            .collect();
        let rv = sys.rhs[r].numer() * &den / sys.rhs[r].denom();
        if !rv.is_zero() {
            row.push((rhs_col, rv));
        }
        if !row.is_empty() {
            rows.push(normalize_row(row));
        }
    }
    rows.sort();
    rows.dedup();

    let mut processed: Vec<(IRow, usize)> = Vec::new(); // (row, pivot col)
    let mut inconsistent = false;
    loop {
        let mut occur = vec![0usize; ncols];
        for row in &rows {
            for (c, _) in row {
                if *c < ncols {
                    occur[*c] += 1;
                }
            }
        }
        // Pivot row: fewest unknown entries, then smallest max bit-size.
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in rows.iter().enumerate() {
            let nnz = row.iter().filter(|(c, _)| *c < ncols).count();
            if nnz == 0 {
                continue;
            }
            let bits = row.iter().map(|(_, v)| bitsize(v)).max().unwrap_or(0);
            let cand = (i, nnz, bits);
            best = match best {
                None => Some(cand),
                Some(b) if (cand.1, cand.2, cand.0) < (b.1, b.2, b.0) => Some(cand),
                b => b,
            };
        }
        let Some((pi, _, _)) = best else { break };
        let pivot_row = rows.swap_remove(pi);
        // Pivot column: rarest, then smallest coefficient, then lowest index.
        let pivot_col = pivot_row
            .iter()
            .filter(|(c, _)| *c < ncols)
            .min_by_key(|(c, v)| (occur[*c], bitsize(v), *c))
            .map(|(c, _)| *c)
            .unwrap();
        let p = pivot_row
            .iter()
            .find(|(c, _)| *c == pivot_col)
            .unwrap()
            .1
            .clone();
        for row in rows.iter_mut() {
            if let Some(pos) = row.iter().position(|(c, _)| *c == pivot_col) {
                let c = row[pos].1.clone();
                *row = eliminate(row, &pivot_row, &p, &c);
            }
        }
        rows.retain(|r| {
            if r.is_empty() {
                return false;
            }
            if r.iter().all(|(c, _)| *c == rhs_col) {
                inconsistent = true;
                return false;
            }
            true
        });
        processed.push((pivot_row, pivot_col));
    }

    let pivot_cols: Vec<usize> = processed.iter().map(|(_, c)| *c).collect();
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();

    // Back-substitution resolves pivots in reverse elimination order.
    let solve_with = |free_vals: &[Rat], rhs_scale: &Rat| -> Vec<Rat> {
        let mut val = vec![Rat::zero(); ncols + 1];
        for (c, v) in free_cols.iter().zip(free_vals.iter()) {
            val[*c] = v.clone();
        }
        val[rhs_col] = -rhs_scale.clone(); // rhs moved to the left side
        for (row, pc) in processed.iter().rev() {
            let mut acc = Rat::zero();
            let mut pv = Rat::zero();
            for (c, v) in row {
                if c == pc {
                    pv = Rat::from_integer(v.clone());
                } else {
                    acc += Rat::from_integer(v.clone()) * &val[*c];
                }
            }
            val[*pc] = -acc / pv;
        }
        val.truncate(ncols);
        val
    };

    let mut basis = Vec::new();
    for k in 0..free_cols.len() {
        let mut fv = vec![Rat::zero(); free_cols.len()];
        fv[k] = Rat::one();
        basis.push(solve_with(&fv, &Rat::zero()));
    }
    let particular = if homogeneous || inconsistent {
        None
    } else {
        let fv = vec![Rat::zero(); free_cols.len()];
        Some(solve_with(&fv, &Rat::one()))
    };
    SolutionSpace { basis, particular }
}

// ---------------------------------------------------------------------------
// Rational functions of x and solving over them
// ---------------------------------------------------------------------------

/// A ratio of x-only polynomials in lowest terms, denominator primitive with
/// positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: BiPoly::zero(),
            den: BiPoly::one(),
        }
    }

    pub fn from_poly(p: BiPoly) -> Self {
        RatFn {
            num: p,
            den: BiPoly::one(),
        }
    }

    pub fn new(num: BiPoly, den: BiPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = gcd_bipoly(&num, &den).unwrap();
        let n = exact_div(&num, &g).unwrap();
        let d = exact_div(&den, &g).unwrap();
        let (sd, dn) = d.int_normalized();
        RatFn {
            num: n.scale(&sd.recip()),
            den: dn,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &RatFn) -> RatFn {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn mul_poly(&self, p: &BiPoly) -> RatFn {
        RatFn::new(&self.num * p, self.den.clone())
    }
}

impl std::fmt::Display for RatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Solves `sum_i c_i * column_i = target` for rational functions `c_i(x)`,
/// where columns and target are vectors of x-only polynomials. Returns
/// `None` when the system is inconsistent; free coefficients of an
/// underdetermined system are set to zero.
///
/// Elimination is fraction-free over the polynomial ring, so no denominator
/// degree bound has to be guessed and the answer is exact.
pub fn solve_over_rf(columns: &[Vec<BiPoly>], target: &[BiPoly]) -> Option<Vec<RatFn>> {
    let nvars = columns.len();
    let nrows = target.len();
    assert!(columns.iter().all(|c| c.len() == nrows), "ragged columns");
    let mut mat: Vec<Vec<BiPoly>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<BiPoly> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut prev = BiPoly::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..nvars {
        let pivot = (next_row..nrows)
            .filter(|&r| !mat[r][col].is_zero())
            .min_by_key(|&r| mat[r][col].deg_x());
        let Some(pr) = pivot else { continue };
        mat.swap(next_row, pr);
        let pv = mat[next_row][col].clone();
        for r in next_row + 1..nrows {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..=nvars {
                let t = &(&pv * &mat[r][c]) - &(&factor * &mat[next_row][c]);
                mat[r][c] = exact_div(&t, &prev).expect("fraction-free step divides");
            }
        }
        prev = pv;
        pivots.push((next_row, col));
        next_row += 1;
    }
    for r in next_row..nrows {
        if (0..nvars).all(|c| mat[r][c].is_zero()) && !mat[r][nvars].is_zero() {
            return None;
        }
    }
    let mut sol = vec![RatFn::zero(); nvars];
    for (r, c) in pivots.iter().rev() {
        let mut acc = RatFn::from_poly(mat[*r][nvars].clone());
        for cc in c + 1..nvars {
            if !mat[*r][cc].is_zero() {
                acc = acc.sub(&sol[cc].mul_poly(&mat[*r][cc]));
            }
        }
        sol[*c] = acc.div(&RatFn::from_poly(mat[*r][*c].clone()));
    }
    // Verify against the original rows; rejects inconsistent systems whose
    // defect hides above the pivot rows.
    for r in 0..nrows {
        let mut acc = RatFn::zero();
        for (c, col) in columns.iter().enumerate() {
            acc = acc.add(&sol[c].mul_poly(&col[r]));
        }
        if !acc.sub(&RatFn::from_poly(target[r].clone())).is_zero() {
            return None;
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;
    use crate::rat::rat_int;

    fn x() -> BiPoly {
        BiPoly::var(Var::X)
    }

    #[test]
    fn nullspace_single_relation() {
        let mut sys = LinSystem::new(vec!["u".into(), "v".into()]);
        sys.add_row(vec![(0, rat_int(1)), (1, rat_int(1))], rat_int(0));
        let ns = nullspace(&sys);
        assert_eq!(ns.dim(), 1);
        let v = &ns.basis[0];
        assert_eq!(v[0], -v[1].clone());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn nullspace_trivial_only() {
        let mut sys = LinSystem::new(vec!["u".into(), "v".into()]);
        sys.add_row(vec![(0, rat_int(1))], rat_int(0));
        sys.add_row(vec![(1, rat_int(1))], rat_int(0));
        assert_eq!(nullspace(&sys).dim(), 0);
    }

    #[test]
    fn nullspace_vectors_satisfy_rows() {
        let mut sys = LinSystem::new((0..5).map(|i| format!("u{i}")).collect());
        sys.add_row(
            vec![(0, rat_int(2)), (1, rat_int(-3)), (4, rat_int(1))],
            rat_int(0),
        );
        sys.add_row(
            vec![(1, rat_int(1)), (2, rat_int(5)), (3, rat_int(-2))],
            rat_int(0),
        );
        let ns = nullspace(&sys);
        assert_eq!(ns.dim(), 3);
        for b in &ns.basis {
            for r in 0..sys.num_rows() {
                assert!(sys.residual(r, b).is_zero());
            }
        }
    }

    #[test]
    fn particular_solution_inhomogeneous() {
        let mut sys = LinSystem::new(vec!["u".into(), "v".into()]);
        sys.add_row(vec![(0, rat_int(1)), (1, rat_int(1))], rat_int(3));
        sys.add_row(vec![(0, rat_int(1)), (1, rat_int(-1))], rat_int(1));
        let ns = nullspace(&sys);
        assert_eq!(ns.dim(), 0);
        let p = ns.particular.unwrap();
        assert_eq!(p, vec![rat_int(2), rat_int(1)]);
    }

    #[test]
    fn inconsistent_detected() {
        let mut sys = LinSystem::new(vec!["u".into()]);
        sys.add_row(vec![(0, rat_int(1))], rat_int(1));
        sys.add_row(vec![(0, rat_int(1))], rat_int(2));
        assert!(nullspace(&sys).particular.is_none());
    }

    #[test]
    fn solve_rf_unit_columns() {
        let cols = vec![
            vec![BiPoly::one(), BiPoly::zero()],
            vec![BiPoly::zero(), BiPoly::one()],
        ];
        let target = vec![BiPoly::zero(), &x() + &BiPoly::one()];
        let sol = solve_over_rf(&cols, &target).unwrap();
        assert!(sol[0].is_zero());
        assert_eq!(sol[1].num, &x() + &BiPoly::one());
        assert!(sol[1].is_polynomial());
    }

    #[test]
    fn solve_rf_polynomial_quotient() {
        // c * x = x^2 + x  ->  c = x + 1
        let cols = vec![vec![x()]];
        let target = vec![&(&x() * &x()) + &x()];
        let sol = solve_over_rf(&cols, &target).unwrap();
        assert_eq!(sol[0].num, &x() + &BiPoly::one());
    }

    #[test]
    fn solve_rf_rational_coefficient() {
        // c * x^2 = x  ->  c = 1/x
        let cols = vec![vec![&x() * &x()]];
        let target = vec![x()];
        let sol = solve_over_rf(&cols, &target).unwrap();
        assert_eq!(sol[0].num, BiPoly::one());
        assert_eq!(sol[0].den, x());
    }

    #[test]
    fn solve_rf_inconsistent() {
        let cols = vec![vec![BiPoly::zero()]];
        let target = vec![BiPoly::one()];
        assert!(solve_over_rf(&cols, &target).is_none());
    }
}
