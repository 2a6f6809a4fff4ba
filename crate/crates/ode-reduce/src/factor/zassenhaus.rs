//! Univariate factorization over the rationals: factor modulo a good small
//! prime (Berlekamp), Hensel-lift to a Mignotte-sized modulus, then recombine
//! with exact trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

// ---------------------------------------------------------------------------
// Arithmetic on dense integer polynomials (ascending coefficients)
// ---------------------------------------------------------------------------

pub type ZPoly = Vec<BigInt>;

pub fn ztrim(v: &mut ZPoly) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    ztrim(&mut out);
    out
}

pub fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    ztrim(&mut out);
    out
}

pub fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    ztrim(&mut out);
    out
}

/// Exact division over Z; `None` if it does not divide.
pub fn zdivexact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    if b.is_empty() {
        return None;
    }
    let mut rem = a.to_vec();
    ztrim(&mut rem);
    if rem.is_empty() {
        return Some(vec![]);
    }
    if rem.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let (factor, r) = rem.last().unwrap().div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        q[da - db] = factor.clone();
        for (i, cb) in b.iter().enumerate() {
            let delta = cb * &factor;
            rem[da - db + i] -= delta;
        }
        ztrim(&mut rem);
    }
    if rem.is_empty() {
        ztrim(&mut q);
        Some(q)
    } else {
        None
    }
}

/// Content (gcd of coefficients) with the sign of the leading coefficient.
pub fn zcontent(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    if a.last().map_or(false, |c| c.is_negative()) {
        g = -g;
    }
    g
}

pub fn zprimitive(a: &[BigInt]) -> ZPoly {
    let mut v = a.to_vec();
    ztrim(&mut v);
    if v.is_empty() {
        return v;
    }
    let c = zcontent(&v);
    v.iter().map(|x| x / &c).collect()
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a small prime (u64 coefficients)
// ---------------------------------------------------------------------------

type PPoly = Vec<u64>;

fn ptrim(v: &mut PPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pinv(a: u64, p: u64) -> u64 {
    // Fermat inverse; p prime, a != 0.
    let mut result: u64 = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ca * cb) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn psub(a: &[u64], b: &[u64], p: u64) -> PPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c % p;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c % p) % p;
    }
    ptrim(&mut out);
    out
}

fn pscale(a: &[u64], s: u64, p: u64) -> PPoly {
    let mut out: PPoly = a.iter().map(|&c| c * s % p).collect();
    ptrim(&mut out);
    out
}

fn pmonic(a: &[u64], p: u64) -> PPoly {
    match a.last() {
        None => vec![],
        Some(&lc) => pscale(a, pinv(lc, p), p),
    }
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (PPoly, PPoly) {
    let db = b.len() - 1;
    let lbinv = pinv(*b.last().unwrap(), p);
    let mut rem = a.to_vec();
    ptrim(&mut rem);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![0u64; rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let factor = rem[da] * lbinv % p;
        q[da - db] = factor;
        for (i, &cb) in b.iter().enumerate() {
            rem[da - db + i] = (rem[da - db + i] + p - cb * factor % p) % p;
        }
        ptrim(&mut rem);
    }
    ptrim(&mut q);
    (q, rem)
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> PPoly {
    let mut u = a.to_vec();
    let mut v = b.to_vec();
    ptrim(&mut u);
    ptrim(&mut v);
    while !v.is_empty() {
        let (_, r) = pdivrem(&u, &v, p);
        u = v;
        v = r;
    }
    pmonic(&u, p)
}

fn pderive(a: &[u64], p: u64) -> PPoly {
    let mut out: PPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * (i as u64 % p) % p)
        .collect();
    ptrim(&mut out);
    out
}

fn pext_gcd(a: &[u64], b: &[u64], p: u64) -> (PPoly, PPoly, PPoly) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    ptrim(&mut r0);
    ptrim(&mut r1);
    let mut s0: PPoly = vec![1];
    let mut s1: PPoly = vec![];
    let mut t0: PPoly = vec![];
    let mut t1: PPoly = vec![1];
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if let Some(&lc) = r0.last() {
        let inv = pinv(lc, p);
        r0 = pscale(&r0, inv, p);
        s0 = pscale(&s0, inv, p);
        t0 = pscale(&t0, inv, p);
    }
    (r0, s0, t0)
}

// ---------------------------------------------------------------------------
// Berlekamp factorization of a monic squarefree polynomial mod p
// ---------------------------------------------------------------------------

fn ppow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> PPoly {
    let mut result: PPoly = vec![1];
    let mut b = pdivrem(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = pdivrem(&pmul(&result, &b, p), modulus, p).1;
        }
        e >>= 1;
        if e > 0 {
            b = pdivrem(&pmul(&b, &b, p), modulus, p).1;
        }
    }
    result
}

fn berlekamp(f: &[u64], p: u64) -> Vec<PPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Rows of Q: x^{p*i} mod f for i in 0..n.
    let xp = ppow_mod(&[0, 1], p, f, p);
    let mut rows: Vec<PPoly> = Vec::with_capacity(n);
    let mut cur: PPoly = vec![1];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = pdivrem(&pmul(&cur, &xp, p), f, p).1;
    }
    // Nullspace of (Q - I)^T: vectors v with v*Q = v.
    let mut mat = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            mat[j][i] = rows[i][j];
        }
    }
    for i in 0..n {
        mat[i][i] = (mat[i][i] + p - 1) % p;
    }
    let basis = nullspace_mod_p(&mut mat, n, p);
    let r = basis.len();
    if r == 1 {
        return vec![f.to_vec()];
    }
    let mut factors: Vec<PPoly> = vec![f.to_vec()];
    for v in basis.iter() {
        if factors.len() == r {
            break;
        }
        let mut vp: PPoly = v.clone();
        ptrim(&mut vp);
        if vp.len() <= 1 {
            continue; // constant basis vector
        }
        let mut next: Vec<PPoly> = Vec::new();
        for u in factors.into_iter() {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut rem_factor = u;
            for s in 0..p {
                if rem_factor.len() <= 1 {
                    break;
                }
                let mut shifted = vp.clone();
                shifted[0] = (shifted[0] + p - s % p) % p;
                ptrim(&mut shifted);
                if shifted.is_empty() {
                    continue;
                }
                let g = pgcd(&rem_factor, &shifted, p);
                if g.len() > 1 && g.len() < rem_factor.len() {
                    rem_factor = pdivrem(&rem_factor, &g, p).0;
                    next.push(g);
                }
            }
            if rem_factor.len() > 1 {
                next.push(rem_factor);
            }
        }
        factors = next;
    }
    factors.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    factors
}

fn nullspace_mod_p(mat: &mut [Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        let mut piv = None;
        for r in row..n {
            if mat[r][col] != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        mat.swap(row, piv);
        let inv = pinv(mat[row][col], p);
        for j in 0..n {
            mat[row][j] = mat[row][j] * inv % p;
        }
        for r in 0..n {
            if r != row && mat[r][col] != 0 {
                let factor = mat[r][col];
                for j in 0..n {
                    mat[r][j] = (mat[r][j] + p - mat[row][j] * factor % p) % p;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut basis = Vec::new();
    for col in 0..n {
        if pivot_of_col[col].is_some() {
            continue;
        }
        let mut v = vec![0u64; n];
        v[col] = 1;
        for (c, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[c] = (p - mat[*r][col] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Hensel lifting from mod p to mod p^k
// ---------------------------------------------------------------------------

fn mreduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut out);
    out
}

fn mmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    mreduce(&zmul(a, b), m)
}

/// Division by a monic divisor with all arithmetic mod m.
fn mdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(b.last().map_or(false, |c| c.is_one()));
    let db = b.len() - 1;
    let mut rem = mreduce(a, m);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let factor = rem[da].clone();
        q[da - db] = factor.clone();
        for (i, cb) in b.iter().enumerate() {
            let delta = (cb * &factor).mod_floor(m);
            rem[da - db + i] = (&rem[da - db + i] - delta).mod_floor(m);
        }
        ztrim(&mut rem);
    }
    ztrim(&mut q);
    (q, rem)
}

fn big_inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    // Extended Euclid on integers.
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    assert!(r0.is_one(), "inverse of non-unit");
    t0.mod_floor(m)
}

/// One quadratic Hensel step: factorization and Bezout data go from mod m to
/// mod m^2. Both g and h must be monic.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = mreduce(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = mdivrem_monic(&mmul(s, &e, &m2), h, &m2);
    let gs = mreduce(&zadd(&zadd(g, &mmul(t, &e, &m2)), &mmul(&q, g, &m2)), &m2);
    let hs = mreduce(&zadd(h, &r), &m2);
    let mut one = vec![BigInt::one()];
    ztrim(&mut one);
    let b = mreduce(
        &zsub(&zadd(&mmul(s, &gs, &m2), &mmul(t, &hs, &m2)), &one),
        &m2,
    );
    let (c, d) = mdivrem_monic(&mmul(s, &b, &m2), &hs, &m2);
    let ss = mreduce(&zsub(s, &d), &m2);
    let ts = mreduce(
        &zsub(&zsub(t, &mmul(t, &b, &m2)), &mmul(&c, &gs, &m2)),
        &m2,
    );
    (gs, hs, ss, ts)
}

fn u64s_to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts the coprime monic factor pair (g0, h0) of the monic image of f from
/// mod p to mod p^k (target modulus returned alongside).
fn lift_pair(
    fm: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    p: u64,
    target: &BigInt,
) -> (ZPoly, ZPoly) {
    let (_, s0, t0) = pext_gcd(g0, h0, p);
    let mut g = u64s_to_z(g0);
    let mut h = u64s_to_z(h0);
    let mut s = u64s_to_z(&s0);
    let mut t = u64s_to_z(&t0);
    let mut m = BigInt::from(p);
    while &m < target {
        let (gs, hs, ss, ts) = hensel_step(fm, &g, &h, &s, &t, &m);
        g = gs;
        h = hs;
        s = ss;
        t = ts;
        m = &m * &m;
    }
    (mreduce(&g, target), mreduce(&h, target))
}

/// Lifts all monic factors of f mod p to monic factors mod `target`
/// (a power of p), splitting the list in halves for pair lifting.
fn lift_all(f_monic: &[BigInt], fac_p: &[PPoly], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if fac_p.len() == 1 {
        return vec![mreduce(f_monic, target)];
    }
    let mid = fac_p.len() / 2;
    let mut g0: PPoly = vec![1];
    for f in &fac_p[..mid] {
        g0 = pmul(&g0, f, p);
    }
    let mut h0: PPoly = vec![1];
    for f in &fac_p[mid..] {
        h0 = pmul(&h0, f, p);
    }
    let (g, h) = lift_pair(f_monic, &g0, &h0, p, target);
    let mut out = lift_all(&g, &fac_p[..mid], p, target);
    out.extend(lift_all(&h, &fac_p[mid..], p, target));
    out
}

// ---------------------------------------------------------------------------
// The driver: factor a primitive squarefree integer polynomial
// ---------------------------------------------------------------------------

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> PPoly {
    let pb = BigInt::from(p);
    let mut out: PPoly = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    ptrim(&mut out);
    out
}

fn balanced(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut out: ZPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    ztrim(&mut out);
    out
}

/// All irreducible factors (primitive, positive leading coefficient) of a
/// primitive squarefree polynomial over Z with degree >= 1.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let mut f = f.to_vec();
    ztrim(&mut f);
    assert!(f.len() >= 2, "constant input");
    if f.len() == 2 {
        return vec![zprimitive(&f)];
    }
    // Prime with degree preserved and squarefree image.
    let mut p = 3u64;
    let (p, fp) = loop {
        if is_prime_u64(p) {
            let lc_ok = !(f.last().unwrap().mod_floor(&BigInt::from(p))).is_zero();
            if lc_ok {
                let fp = reduce_mod_p(&f, p);
                let g = pgcd(&fp, &pderive(&fp, p), p);
                if g.len() == 1 {
                    break (p, fp);
                }
            }
        }
        p += 2;
    };
    let fac_p = berlekamp(&pmonic(&fp, p), p);
    if fac_p.len() == 1 {
        return vec![zprimitive(&f)];
    }
    // Mignotte-style bound: factors of f have coefficients bounded by
    // 2^n * sqrt(n+1) * H(f); lift past twice that times |lc|.
    let n = f.len() - 1;
    let height = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt =
        (BigInt::one() << (n + 1)) * BigInt::from(n as u64 + 1) * height * f.last().unwrap().abs();
    let mut target = BigInt::from(p);
    while target <= BigInt::from(2) * &bound {
        target = &target * p;
    }
    let lc_inv = big_inv_mod(f.last().unwrap(), &target);
    let f_monic = mreduce(&zmul(&f, &[lc_inv]), &target);
    let lifted = lift_all(&f_monic, &fac_p, p, &target);

    // Subset recombination with exact trial division.
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut out: Vec<ZPoly> = Vec::new();
    let mut f_cur = zprimitive(&f);
    let mut card = 1usize;
    'outer: while 2 * card <= remaining.len() {
        let combos = combinations(remaining.len(), card);
        for combo in combos {
            let subset: Vec<usize> = combo.iter().map(|&i| remaining[i]).collect();
            let mut h = vec![f_cur.last().unwrap().clone()];
            for &i in &subset {
                h = mmul(&h, &lifted[i], &target);
            }
            let h = zprimitive(&balanced(&h, &target));
            if h.len() <= 1 {
                continue;
            }
            if let Some(q) = zdivexact(&f_cur, &h) {
                out.push(normalize_sign(h));
                f_cur = zprimitive(&q);
                remaining.retain(|i| !subset.contains(i));
                continue 'outer;
            }
        }
        card += 1;
    }
    if f_cur.len() > 1 {
        out.push(normalize_sign(f_cur));
    }
    out.sort();
    out
}

fn normalize_sign(mut f: ZPoly) -> ZPoly {
    if f.last().map_or(false, |c| c.is_negative()) {
        for c in f.iter_mut() {
            *c = -c.clone();
        }
    }
    f
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == pos - 1 + n - k {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        idx[pos - 1] += 1;
        for j in pos..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        c.iter().map(|&n| BigInt::from(n)).collect()
    }

    #[test]
    fn factors_quadratic_product() {
        // (x-1)(x-2) = x^2 - 3x + 2
        let f = zp(&[2, -3, 1]);
        let fa = factor_squarefree_z(&f);
        assert_eq!(fa.len(), 2);
        assert!(fa.contains(&zp(&[-1, 1])));
        assert!(fa.contains(&zp(&[-2, 1])));
    }

    #[test]
    fn keeps_irreducible_whole() {
        let f = zp(&[1, 0, 1]); // x^2 + 1
        assert_eq!(factor_squarefree_z(&f), vec![zp(&[1, 0, 1])]);
        let f = zp(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(factor_squarefree_z(&f), vec![zp(&[-2, 0, 1])]);
    }

    #[test]
    fn nonmonic_and_many_factors() {
        // (2x+1)(3x-1)(x^2+x+1)
        let f = zmul(&zmul(&zp(&[1, 2]), &zp(&[-1, 3])), &zp(&[1, 1, 1]));
        let fa = factor_squarefree_z(&f);
        assert_eq!(fa.len(), 3);
        assert!(fa.contains(&zp(&[1, 2])));
        assert!(fa.contains(&zp(&[-1, 3])));
        assert!(fa.contains(&zp(&[1, 1, 1])));
    }

    #[test]
    fn cyclotomic_like_degree_six() {
        // (x^2+1)(x^2-x+1)(x^2+x+1) -- three quadratics needing recombination
        let f = zmul(&zmul(&zp(&[1, 0, 1]), &zp(&[1, -1, 1])), &zp(&[1, 1, 1]));
        let fa = factor_squarefree_z(&f);
        assert_eq!(fa.len(), 3);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // minimal polynomial of sqrt(2)+sqrt(3): x^4 - 10x^2 + 1 is
        // irreducible over Q but splits mod every prime.
        let f = zp(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree_z(&f), vec![zp(&[1, 0, -10, 0, 1])]);
    }
}
