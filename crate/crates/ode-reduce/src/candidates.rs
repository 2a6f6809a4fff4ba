//! Candidate enumeration for the reduction search: admissible degree
//! profiles `(n, deg_y A, deg_y B)` for a given canceled-factor degree,
//! denominator candidates built from factors of N, and t candidates refined
//! by the coincidence check at roots of the x-only part.

use crate::factor::FactorSet;
use crate::poly::{eval_at_x, univar, BiPoly, Var};

/// Which side carries the larger y-degree in the degree test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    ADominant,
    BDominant,
}

/// One admissible tuple from the degree test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub n: u32,
    pub a_y: u32,
    pub b_y: u32,
    pub cany: u32,
    pub branch: Branch,
}

fn div_ceil(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// Enumerates the degree profiles for augmented degrees
/// `inew = deg_y M + cany`, `jnew = deg_y N + cany`, in loop order: n
/// ascending, then the dominant degree, then the secondary degree.
///
/// The dominant-degree loop runs one step past `jnew` so that profiles with
/// `deg_y B = 0` (where the first branch needs `index2 = jnew + 1`) are not
/// skipped.
pub fn degree_profiles(
    deg_y_m: u32,
    deg_y_n: u32,
    cany: u32,
    degree_a: u32,
    max_mult: u32,
) -> Vec<DegreeProfile> {
    let inew = deg_y_m + cany;
    let jnew = deg_y_n + cany;
    let mut out = Vec::new();
    for n in 3..=max_mult + 2 {
        let lower = div_ceil(inew, n).max(div_ceil(jnew + 1, n));
        for index2 in lower..=jnew + 1 {
            for index3 in 0..index2 {
                // First branch: A carries the top degree (a_y = index2).
                if index2 + index3 + (n - 2) * index3 == jnew + 1
                    && inew == n * index2
                    && index2 > cany
                    && index2 <= degree_a
                {
                    out.push(DegreeProfile {
                        n,
                        a_y: index2,
                        b_y: index3,
                        cany,
                        branch: Branch::ADominant,
                    });
                }
                // Second branch: B carries the top degree (b_y = index2).
                if index2 + index3 + (n - 2) * index2 == jnew + 1
                    && (inew == n * index2 || inew <= jnew + 1)
                    && index2 > cany
                    && index3 <= degree_a
                {
                    out.push(DegreeProfile {
                        n,
                        a_y: index3,
                        b_y: index2,
                        cany,
                        branch: Branch::BDominant,
                    });
                }
            }
        }
    }
    out
}

/// Power-case exponents to try for a profile: `k = d/(d - cany)` must be an
/// integer at least 2, tested on the dominant degree and, in the second
/// branch, also on the secondary one.
pub fn power_case_applicable(profile: &DegreeProfile) -> Vec<u32> {
    let k_of = |d: u32| -> Option<u32> {
        if d <= profile.cany {
            return None;
        }
        let step = d - profile.cany;
        if d % step == 0 && d / step >= 2 {
            Some(d / step)
        } else {
            None
        }
    };
    let mut ks = Vec::new();
    match profile.branch {
        Branch::ADominant => {
            if let Some(k) = k_of(profile.a_y) {
                ks.push(k);
            }
        }
        Branch::BDominant => {
            if let Some(k) = k_of(profile.b_y) {
                ks.push(k);
            }
            if let Some(k) = k_of(profile.a_y) {
                if !ks.contains(&k) {
                    ks.push(k);
                }
            }
        }
    }
    ks
}

/// A denominator candidate: a product of y-dependent irreducible factors of
/// N with chosen exponents.
#[derive(Clone, Debug)]
pub struct CandidateB {
    pub poly: BiPoly,
    pub provenance: Vec<(usize, u32)>,
}

/// All multisets of y-dependent factors of N whose exponents satisfy the
/// multiplicity bound `(n-2)·e <= mult` and whose y-degrees add up to the
/// profile's target, in lexicographic provenance order.
pub fn build_b_candidates(fs: &FactorSet, profile: &DegreeProfile) -> Vec<CandidateB> {
    let target = profile.b_y;
    if target == 0 {
        return vec![CandidateB {
            poly: BiPoly::one(),
            provenance: vec![],
        }];
    }
    let n = profile.n;
    let mut out = Vec::new();
    let mut exps = vec![0u32; fs.factors_y.len()];
    fn rec(
        fs: &FactorSet,
        n: u32,
        idx: usize,
        remaining: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<CandidateB>,
    ) {
        if remaining == 0 {
            let mut poly = BiPoly::one();
            let mut provenance = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    poly = &poly * &fs.factors_y[i].0.pow(e);
                    provenance.push((i, e));
                }
            }
            out.push(CandidateB { poly, provenance });
            return;
        }
        if idx >= fs.factors_y.len() {
            return;
        }
        let (f, mult) = &fs.factors_y[idx];
        let dy = f.deg_y();
        let max_by_mult = if n == 2 { u32::MAX } else { mult / (n - 2) };
        let max_by_deg = remaining / dy;
        for e in 0..=max_by_mult.min(max_by_deg) {
            exps[idx] = e;
            rec(fs, n, idx + 1, remaining - e * dy, exps, out);
            exps[idx] = 0;
        }
    }
    rec(fs, n, 0, target, &mut exps, &mut out);
    out
}

/// A candidate for the x-only multiplier t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateT {
    pub poly: BiPoly,
}

/// Does `b mod q` divide `m mod q` in the quotient ring by the irreducible
/// x-only polynomial q?
fn divides_in_quotient(b: &BiPoly, m: &BiPoly, q: &BiPoly) -> bool {
    let qb = eval_at_x(b, q).expect("irreducible modulus");
    let qm = eval_at_x(m, q).expect("irreducible modulus");
    if qb.is_zero() {
        return qm.is_zero();
    }
    if qm.is_zero() {
        return true;
    }
    let qc = univar::coeffs(q, Var::X).unwrap();
    let mut rem = qm;
    let db = qb.deg_y();
    if db == 0 {
        // Nonzero constant in y: a unit of the quotient field.
        return true;
    }
    let lead = univar::coeffs(&qb.y_coeff(db), Var::X).unwrap();
    let Some(lead_inv) = univar::invert_mod(&lead, &qc) else {
        return false;
    };
    let lead_inv = univar::from_coeffs(&lead_inv, Var::X);
    while !rem.is_zero() && rem.deg_y() >= db {
        let dr = rem.deg_y();
        let factor = eval_at_x(&(&rem.y_coeff(dr) * &lead_inv), q).unwrap();
        let shifted = BiPoly::from_terms(factor.terms().map(|(mo, c)| ((mo.0, dr - db), c.clone())));
        let delta = eval_at_x(&(&shifted * &qb), q).unwrap();
        rem = &rem - &delta;
        rem = eval_at_x(&rem, q).unwrap();
    }
    rem.is_zero()
}

/// Candidate list for t: starts with t0 (the full x-only part of N); for
/// every irreducible x-only factor q^k of t0 where `B mod q` divides
/// `M mod q`, the quotients `t0/q^m` for `1 <= m <= k` are added.
pub fn build_t_candidates(
    t0_factors: &[(BiPoly, u32)],
    b: &BiPoly,
    m: &BiPoly,
) -> Vec<CandidateT> {
    let mut t0 = BiPoly::one();
    for (q, k) in t0_factors {
        t0 = &t0 * &q.pow(*k);
    }
    let mut out = vec![CandidateT { poly: t0.clone() }];
    for (q, k) in t0_factors {
        if divides_in_quotient(b, m, q) {
            for strip in 1..=*k {
                let mut t = BiPoly::one();
                for (q2, k2) in t0_factors {
                    let e = if q2 == q { k2 - strip } else { *k2 };
                    t = &t * &q2.pow(e);
                }
                let cand = CandidateT { poly: t };
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factorize;
    use crate::rat::rat_int;

    fn x() -> BiPoly {
        BiPoly::var(Var::X)
    }
    fn y() -> BiPoly {
        BiPoly::var(Var::Y)
    }

    #[test]
    fn profiles_unique_at_zero_cancel_degree() {
        let ps = degree_profiles(20, 13, 0, 9, 5);
        assert_eq!(
            ps,
            vec![DegreeProfile {
                n: 4,
                a_y: 5,
                b_y: 3,
                cany: 0,
                branch: Branch::ADominant
            }]
        );
    }

    #[test]
    fn profiles_four_way_split() {
        let ps = degree_profiles(20, 13, 4, 9, 5);
        let tuples: Vec<(u32, u32, u32, Branch)> =
            ps.iter().map(|p| (p.n, p.a_y, p.b_y, p.branch)).collect();
        assert_eq!(
            tuples,
            vec![
                (3, 2, 8, Branch::BDominant),
                (3, 8, 5, Branch::ADominant),
                (4, 0, 6, Branch::BDominant),
                (4, 6, 4, Branch::ADominant),
            ]
        );
    }

    #[test]
    fn profiles_forced_small_case() {
        // deg_y M = 4, deg_y N = 0 forces n=4, a_y=1, b_y=0.
        let ps = degree_profiles(4, 0, 0, 1, 2);
        assert_eq!(
            ps,
            vec![DegreeProfile {
                n: 4,
                a_y: 1,
                b_y: 0,
                cany: 0,
                branch: Branch::ADominant
            }]
        );
    }

    #[test]
    fn profiles_satisfy_branch_equations() {
        for (dm, dn, cany, bound, mm) in
            [(20u32, 13u32, 4u32, 9u32, 5u32), (11, 9, 1, 4, 3), (25, 20, 3, 7, 15)]
        {
            for p in degree_profiles(dm, dn, cany, bound, mm) {
                let inew = dm + cany;
                let jnew = dn + cany;
                match p.branch {
                    Branch::ADominant => {
                        assert_eq!(p.a_y + p.b_y - 1 + (p.n - 2) * p.b_y, jnew);
                        assert_eq!(inew, p.n * p.a_y);
                        assert!(p.a_y > cany && p.a_y <= bound);
                    }
                    Branch::BDominant => {
                        assert_eq!(p.b_y + p.a_y - 1 + (p.n - 2) * p.b_y, jnew);
                        assert!(inew == p.n * p.b_y || inew <= jnew + 1);
                        assert!(p.b_y > cany && p.a_y <= bound && p.a_y < p.b_y);
                    }
                }
            }
        }
    }

    #[test]
    fn power_case_divisibility_rules() {
        let mk = |a_y, cany, branch| DegreeProfile {
            n: 4,
            a_y,
            b_y: 4,
            cany,
            branch,
        };
        assert_eq!(power_case_applicable(&mk(6, 4, Branch::ADominant)), vec![3]);
        assert!(power_case_applicable(&mk(5, 0, Branch::ADominant)).is_empty());
        assert!(power_case_applicable(&mk(4, 1, Branch::ADominant)).is_empty());
        // Second branch also probes the dominant degree b_y = 4.
        assert_eq!(
            power_case_applicable(&mk(3, 2, Branch::BDominant)),
            vec![2, 3]
        );
    }

    #[test]
    fn b_candidates_respect_multiplicity_bound() {
        // N-like product: (xy-2)^2 (y+x^2-1)^2
        let p1 = &(&x() * &y()) - &BiPoly::int(2);
        let p2 = &(&y() + &(&x() * &x())) - &BiPoly::one();
        let n_poly = &p1.pow(2) * &p2.pow(2);
        let fs = factorize(&n_poly).unwrap();
        let profile = DegreeProfile {
            n: 3,
            a_y: 5,
            b_y: 4,
            cany: 0,
            branch: Branch::ADominant,
        };
        let cands = build_b_candidates(&fs, &profile);
        let target = (&p1.pow(2) * &p2.pow(2)).normalized();
        assert!(cands.iter().any(|c| c.poly == target));
        for c in &cands {
            assert_eq!(c.poly.deg_y(), 4);
            for (i, e) in &c.provenance {
                assert!((profile.n - 2) * e <= fs.factors_y[*i].1);
            }
        }
    }

    #[test]
    fn b_candidates_excluded_by_multiplicity() {
        // One linear factor with multiplicity 1 cannot give b_y = 2 at n = 4.
        let p = &(&x() * &y()) - &BiPoly::one();
        let fs = factorize(&p).unwrap();
        let profile = DegreeProfile {
            n: 4,
            a_y: 3,
            b_y: 2,
            cany: 0,
            branch: Branch::ADominant,
        };
        assert!(build_b_candidates(&fs, &profile).is_empty());
        // Degree-zero target is the empty product.
        let p0 = DegreeProfile {
            n: 4,
            a_y: 3,
            b_y: 0,
            cany: 0,
            branch: Branch::ADominant,
        };
        let c0 = build_b_candidates(&fs, &p0);
        assert_eq!(c0.len(), 1);
        assert!(c0[0].poly.is_one());
    }

    #[test]
    fn t_candidates_without_coincidence() {
        // B(0,y) = y does not divide M(0,y) = y + 1, so t0 = x stays alone.
        let b = &x() + &y();
        let m = &y() + &BiPoly::one();
        let t0f = vec![(x(), 1u32)];
        let cands = build_t_candidates(&t0f, &b, &m);
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].poly, x());
        let _ = rat_int(0);
    }

    #[test]
    fn t_candidates_with_passing_factor() {
        // B = y + x: at x = 1, B(1,y) = y + 1 divides M(1,y) = y^2 - 1... M
        // chosen so the check holds at x-1 but not at x.
        let b = &y() + &x();
        let m = &(&y() * &y()) - &BiPoly::monomial((2, 0), rat_int(1));
        // q = x - 1: B -> y+1, M -> y^2-1 = (y+1)(y-1): divides.
        // q = x: B -> y, M -> y^2: divides too (both pass here).
        let t0f = vec![(x(), 1u32), (&x() - &BiPoly::one(), 1u32)];
        let cands = build_t_candidates(&t0f, &b, &m);
        let polys: Vec<&BiPoly> = cands.iter().map(|c| &c.poly).collect();
        let t0 = &x() * &(&x() - &BiPoly::one());
        assert_eq!(*polys[0], t0);
        assert!(polys.contains(&&(&x() - &BiPoly::one())));
        assert!(polys.contains(&&x()));
    }

    #[test]
    fn t_candidates_trivial() {
        let cands = build_t_candidates(&[], &BiPoly::one(), &BiPoly::one());
        assert_eq!(cands.len(), 1);
        assert!(cands[0].poly.is_one());
    }
}
