//! Small multivariate polynomials over the rationals and a capped Buchberger
//! solver for tiny zero-dimensional systems (the parameter-elimination and
//! quadratic-condition stages only ever see a handful of unknowns).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::factor::roots_rational;
use crate::poly::{univar, BiPoly, Var};
use crate::rat::Rat;

/// Sparse polynomial in `nvars` unknowns; monomials are exponent vectors.
/// The BTreeMap key order is lexicographic, so the last entry is the lex
/// leading term (variable 0 strongest).
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    fn add_term(&mut self, m: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m: Vec<u32> = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn total_deg(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn deg_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.uses_var(v)).collect()
    }

    /// Lex leading (monomial, coefficient).
    fn lead(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Substitutes an arbitrary polynomial for variable `v`.
    pub fn substitute(&self, v: usize, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        // Cache powers of the replacement.
        let mut pows: Vec<MPoly> = vec![MPoly::constant(self.nvars, Rat::one())];
        for (m, c) in &self.terms {
            let e = m[v] as usize;
            while pows.len() <= e {
                let next = pows.last().unwrap().mul(value);
                pows.push(next);
            }
            let mut rest = m.clone();
            rest[v] = 0;
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(rest, c.clone());
            out = out.add(&t.mul(&pows[e]));
        }
        out
    }

    pub fn substitute_value(&self, v: usize, value: &Rat) -> MPoly {
        self.substitute(v, &MPoly::constant(self.nvars, value.clone()))
    }

    /// Evaluates under a full assignment.
    pub fn eval(&self, vals: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &vals[v];
                }
            }
            acc += t;
        }
        acc
    }

    /// Owned (monomial, coefficient) pairs in key order.
    pub fn terms_vec(&self) -> Vec<(Vec<u32>, Rat)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// Dense coefficients when the polynomial uses only variable `v`.
    pub fn as_univariate(&self, v: usize) -> Option<Vec<Rat>> {
        let used = self.vars_used();
        if !(used.is_empty() || used == [v]) {
            return None;
        }
        let d = self.deg_in(v) as usize;
        let mut out = vec![Rat::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m[v] as usize] = c.clone();
        }
        Some(out)
    }

    fn monic(&self) -> MPoly {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| {
                        if e == 1 {
                            format!("p{v}")
                        } else {
                            format!("p{v}^{e}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Full normal form of `p` with respect to `basis` under lex order.
fn reduce_full(p: &MPoly, basis: &[MPoly], steps: &mut usize, cap: usize) -> Option<MPoly> {
    let mut rem = MPoly::zero(p.nvars);
    let mut work = p.clone();
    'outer: while let Some((m, c)) = work.lead().map(|(m, c)| (m.clone(), c.clone())) {
        *steps += 1;
        if *steps > cap {
            return None;
        }
        for b in basis {
            let (bm, bc) = b.lead().unwrap();
            if bm.iter().zip(m.iter()).all(|(a, b)| a <= b) {
                let shift: Vec<u32> = m.iter().zip(bm.iter()).map(|(a, b)| a - b).collect();
                let mut t = MPoly::zero(p.nvars);
                t.terms.insert(shift, &c / bc);
                work = work.sub(&t.mul(b));
                continue 'outer;
            }
        }
        let mut t = MPoly::zero(p.nvars);
        t.terms.insert(m.clone(), c.clone());
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    Some(rem)
}

fn s_poly(a: &MPoly, b: &MPoly) -> MPoly {
    let (ma, ca) = a.lead().unwrap();
    let (mb, cb) = b.lead().unwrap();
    let lcm: Vec<u32> = ma.iter().zip(mb.iter()).map(|(x, y)| *x.max(y)).collect();
    let mut ta = MPoly::zero(a.nvars);
    ta.terms.insert(
        lcm.iter().zip(ma.iter()).map(|(l, e)| l - e).collect(),
        Rat::one() / ca,
    );
    let mut tb = MPoly::zero(b.nvars);
    tb.terms.insert(
        lcm.iter().zip(mb.iter()).map(|(l, e)| l - e).collect(),
        Rat::one() / cb,
    );
    ta.mul(a).sub(&tb.mul(b))
}

/// Buchberger with a global reduction-step cap; `None` when the cap trips.
pub fn groebner_lex(eqs: &[MPoly], cap: usize) -> Option<Vec<MPoly>> {
    let nvars = eqs.first().map(|p| p.nvars).unwrap_or(0);
    let mut basis: Vec<MPoly> = eqs
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    basis.dedup_by(|a, b| a == b);
    let mut steps = 0usize;
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (0..i).map(move |j| (j, i)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        let s = s_poly(&basis[i], &basis[j]);
        let r = reduce_full(&s, &basis, &mut steps, cap)?;
        if !r.is_zero() {
            let r = r.monic();
            let k = basis.len();
            pairs.extend((0..k).map(|i| (i, k)));
            basis.push(r);
        }
    }
    // Minimize: keep one generator per necessary leading monomial.
    let mut minimal: Vec<MPoly> = Vec::new();
    'keep: for (i, p) in basis.iter().enumerate() {
        let mi = p.lead().unwrap().0;
        for (j, q) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let mj = q.lead().unwrap().0;
            let divides = mj.iter().zip(mi.iter()).all(|(a, b)| a <= b);
            if divides && (mj != mi || j < i) {
                continue 'keep;
            }
        }
        minimal.push(p.clone());
    }
    // Reduce tails against the other minimal generators; leading terms are
    // safe by construction, so nothing vanishes here.
    let mut reduced: Vec<MPoly> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = reduce_full(&minimal[i], &others, &mut steps, cap.saturating_mul(2))?;
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
    reduced.dedup();
    let _ = nvars;
    Some(reduced)
}

/// Outcome of the small-system solver.
#[derive(Clone, Debug)]
pub enum PolySolve {
    Solutions {
        solutions: Vec<Vec<Rat>>,
        /// Some solutions exist only over extensions of the rationals.
        non_rational: bool,
        /// A free variable was met; solutions come from trial values and the
        /// list may be incomplete.
        parametric: bool,
    },
    Inconclusive,
}

const DEFAULT_REDUCTION_CAP: usize = 2000;
const MAX_UNKNOWNS: usize = 12;
const TRIAL_VALUES: [i64; 5] = [0, 1, -1, 2, -2];

/// All rational solutions of a tiny polynomial system, by lex Groebner basis
/// and back-substitution of rational roots.
pub fn solve_poly_system_small(eqs: &[MPoly]) -> PolySolve {
    solve_poly_system_capped(eqs, DEFAULT_REDUCTION_CAP)
}

pub fn solve_poly_system_capped(eqs: &[MPoly], cap: usize) -> PolySolve {
    let Some(first) = eqs.first() else {
        return PolySolve::Solutions {
            solutions: vec![],
            non_rational: false,
            parametric: true,
        };
    };
    let nvars = first.nvars;
    if nvars > MAX_UNKNOWNS {
        return PolySolve::Inconclusive;
    }
    let mut non_rational = false;
    let mut parametric = false;
    let mut solutions = Vec::new();
    let mut budget = cap;
    if solve_rec(
        eqs.to_vec(),
        nvars,
        &mut vec![None; nvars],
        &mut solutions,
        &mut non_rational,
        &mut parametric,
        &mut budget,
    )
    .is_none()
    {
        return PolySolve::Inconclusive;
    }
    solutions.sort();
    solutions.dedup();
    PolySolve::Solutions {
        solutions,
        non_rational,
        parametric,
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_rec(
    eqs: Vec<MPoly>,
    nvars: usize,
    fixed: &mut Vec<Option<Rat>>,
    out: &mut Vec<Vec<Rat>>,
    non_rational: &mut bool,
    parametric: &mut bool,
    budget: &mut usize,
) -> Option<()> {
    let live: Vec<MPoly> = eqs.into_iter().filter(|p| !p.is_zero()).collect();
    if live.iter().any(|p| p.as_constant().map_or(false, |c| !c.is_zero())) {
        return Some(()); // contradictory constant: no solutions on this branch
    }
    let unfixed: Vec<usize> = (0..nvars).filter(|v| fixed[*v].is_none()).collect();
    if unfixed.is_empty() {
        if live.is_empty() {
            out.push(fixed.iter().map(|v| v.clone().unwrap()).collect());
        }
        return Some(());
    }
    if live.is_empty() {
        // Remaining variables are entirely free.
        *parametric = true;
        for &val in TRIAL_VALUES.iter().take(1) {
            let v = unfixed[0];
            fixed[v] = Some(crate::rat::rat_int(val));
            solve_rec(vec![], nvars, fixed, out, non_rational, parametric, budget)?;
            fixed[v] = None;
        }
        return Some(());
    }
    let gb = groebner_lex(&live, *budget)?;
    if gb.iter().any(|p| p.is_constant() && !p.is_zero()) {
        return Some(()); // ideal is the whole ring: no solutions
    }
    // Solve for the lex-last unfixed variable that has its own univariate
    // member in the basis.
    let mut target: Option<(usize, Vec<Rat>)> = None;
    for &v in unfixed.iter().rev() {
        let mut uni: Option<Vec<Rat>> = None;
        for p in &gb {
            if let Some(c) = p.as_univariate(v) {
                if univar::deg(&c).map_or(false, |d| d > 0) {
                    uni = Some(match uni {
                        None => c,
                        Some(prev) => univar::gcd(&prev, &c),
                    });
                }
            }
        }
        if let Some(u) = uni {
            if univar::deg(&u).map_or(false, |d| d > 0) {
                target = Some((v, u));
                break;
            }
        }
    }
    match target {
        Some((v, u)) => {
            let upoly = univar::from_coeffs(&u, Var::X);
            let roots = roots_rational(&upoly).ok()?;
            let root_mult: u32 = roots.iter().map(|(_, m)| m).sum();
            if (root_mult as usize) < u.len() - 1 {
                *non_rational = true;
            }
            for (root, _) in roots {
                let sub: Vec<MPoly> = gb.iter().map(|p| p.substitute_value(v, &root)).collect();
                fixed[v] = Some(root.clone());
                solve_rec(sub, nvars, fixed, out, non_rational, parametric, budget)?;
                fixed[v] = None;
            }
            Some(())
        }
        None => {
            // Positive-dimensional in the unfixed variables: probe trial
            // values for the lex-last one; callers verify whatever comes out.
            *parametric = true;
            let v = *unfixed.last().unwrap();
            for &val in TRIAL_VALUES.iter() {
                let r = crate::rat::rat_int(val);
                let sub: Vec<MPoly> = gb.iter().map(|p| p.substitute_value(v, &r)).collect();
                fixed[v] = Some(r);
                solve_rec(sub, nvars, fixed, out, non_rational, parametric, budget)?;
                fixed[v] = None;
            }
            Some(())
        }
    }
}

/// Convenience: a `BiPoly`-shaped univariate in x from dense rationals.
pub fn univariate_to_bipoly(c: &[Rat]) -> BiPoly {
    univar::from_coeffs(c, Var::X)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn vars2() -> (MPoly, MPoly) {
        (MPoly::var(2, 0), MPoly::var(2, 1))
    }

    #[test]
    fn solves_squared_and_shifted() {
        // {a^2, b-1} -> [(0, 1)]
        let (a, b) = vars2();
        let eqs = vec![a.mul(&a), b.sub(&MPoly::constant(2, rat_int(1)))];
        match solve_poly_system_small(&eqs) {
            PolySolve::Solutions {
                solutions,
                non_rational,
                parametric,
            } => {
                assert_eq!(solutions, vec![vec![rat_int(0), rat_int(1)]]);
                assert!(!non_rational);
                assert!(!parametric);
            }
            _ => panic!("inconclusive"),
        }
    }

    #[test]
    fn solves_symmetric_quadratic() {
        // {ab-2, a+b-3} -> {(1,2),(2,1)}
        let (a, b) = vars2();
        let eqs = vec![
            a.mul(&b).sub(&MPoly::constant(2, rat_int(2))),
            a.add(&b).sub(&MPoly::constant(2, rat_int(3))),
        ];
        match solve_poly_system_small(&eqs) {
            PolySolve::Solutions { solutions, .. } => {
                assert_eq!(
                    solutions,
                    vec![
                        vec![rat_int(1), rat_int(2)],
                        vec![rat_int(2), rat_int(1)],
                    ]
                );
            }
            _ => panic!("inconclusive"),
        }
    }

    #[test]
    fn flags_non_rational_components() {
        // {a^2 + 1} -> no rational points
        let a = MPoly::var(1, 0);
        let eqs = vec![a.mul(&a).add(&MPoly::constant(1, rat_int(1)))];
        match solve_poly_system_small(&eqs) {
            PolySolve::Solutions {
                solutions,
                non_rational,
                ..
            } => {
                assert!(solutions.is_empty());
                assert!(non_rational);
            }
            _ => panic!("inconclusive"),
        }
    }

    #[test]
    fn agrees_with_linear_solving() {
        // {a + 2b - 5, a - b + 1} -> a=1, b=2
        let (a, b) = vars2();
        let eqs = vec![
            a.add(&b.scale(&rat_int(2))).sub(&MPoly::constant(2, rat_int(5))),
            a.sub(&b).add(&MPoly::constant(2, rat_int(1))),
        ];
        match solve_poly_system_small(&eqs) {
            PolySolve::Solutions { solutions, .. } => {
                assert_eq!(solutions, vec![vec![rat_int(1), rat_int(2)]]);
            }
            _ => panic!("inconclusive"),
        }
    }

    #[test]
    fn substitution_and_eval_consistent() {
        let (a, b) = vars2();
        // p = a^2 b - 3
        let p = a.mul(&a).mul(&b).sub(&MPoly::constant(2, rat_int(3)));
        let q = p.substitute_value(0, &rat_int(2));
        assert_eq!(q.eval(&[rat_int(0), rat_int(1)]), rat_int(1));
        assert_eq!(p.eval(&[rat_int(2), rat_int(1)]), rat_int(1));
    }
}
