//! Dense modular gcd: images in Z_p[x] by evaluation and Newton interpolation, lifted over
//! several word-sized primes and confirmed by exact division over Z.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Exp = Vec<i64>;
/// Sparse polynomial over Z_p, keys in lex order (x_0 most significant).
type ModPoly = BTreeMap<Exp, u64>;
/// Dense univariate polynomial over Z_p, lowest degree first, no trailing zeros.
type Uni = Vec<u64>;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn trim(u: &mut Uni) {
    while u.last() == Some(&0) {
        u.pop();
    }
}

fn uni_eval(u: &Uni, x: u64, p: u64) -> u64 {
    u.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

fn uni_monic(u: &Uni, p: u64) -> Uni {
    match u.last() {
        None => Vec::new(),
        Some(&l) => {
            let i = inv_mod(l, p);
            u.iter().map(|&c| mul_mod(c, i, p)).collect()
        }
    }
}

fn uni_divrem(a: &Uni, b: &Uni, p: u64) -> (Uni, Uni) {
    let mut r = a.clone();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let f = mul_mod(*r.last().unwrap(), inv, p);
        let off = r.len() - b.len();
        q[off] = f;
        for (i, &c) in b.iter().enumerate() {
            r[off + i] = sub_mod(r[off + i], mul_mod(f, c, p), p);
        }
        trim(&mut r);
    }
    (q, r)
}

fn uni_gcd(a: &Uni, b: &Uni, p: u64) -> Uni {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = uni_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    uni_monic(&a, p)
}

fn uni_mul(a: &Uni, b: &Uni, p: u64) -> Uni {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    out
}

fn add_term(m: &mut ModPoly, e: Exp, c: u64, p: u64) {
    if c == 0 {
        return;
    }
    use std::collections::btree_map::Entry;
    match m.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = add_mod(*o.get(), c, p);
            if s == 0 {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn monic(a: &ModPoly, p: u64) -> ModPoly {
    match a.last_key_value() {
        None => ModPoly::new(),
        Some((_, &l)) => {
            let i = inv_mod(l, p);
            a.iter().map(|(e, &c)| (e.clone(), mul_mod(c, i, p))).collect()
        }
    }
}

fn scale(a: &ModPoly, s: u64, p: u64) -> ModPoly {
    a.iter().map(|(e, &c)| (e.clone(), mul_mod(c, s, p))).filter(|(_, c)| *c != 0).collect()
}

/// Whether b divides a over Z_p.
fn divides(a: &ModPoly, b: &ModPoly, p: u64) -> bool {
    let Some((lb_e, &lb_c)) = b.last_key_value() else {
        return false;
    };
    let inv = inv_mod(lb_c, p);
    let mut r = a.clone();
    while let Some((le, &lc)) = r.last_key_value() {
        let d: Exp = le.iter().zip(lb_e).map(|(x, y)| x - y).collect();
        if d.iter().any(|&x| x < 0) {
            return false;
        }
        let f = mul_mod(lc, inv, p);
        for (e, &c) in b {
            let shifted: Exp = e.iter().zip(&d).map(|(x, y)| x + y).collect();
            add_term(&mut r, shifted, p - mul_mod(f, c, p), p);
        }
    }
    true
}

fn uses_var(a: &ModPoly, v: usize) -> bool {
    a.keys().any(|e| e[v] != 0)
}

/// a as a polynomial in the other variables with coefficients in Z_p[x_v].
fn split(a: &ModPoly, v: usize) -> BTreeMap<Exp, Uni> {
    let mut out: BTreeMap<Exp, Uni> = BTreeMap::new();
    for (e, &c) in a {
        let d = e[v] as usize;
        let mut k = e.clone();
        k[v] = 0;
        let u = out.entry(k).or_default();
        if u.len() <= d {
            u.resize(d + 1, 0);
        }
        u[d] = c;
    }
    out
}

fn join(s: &BTreeMap<Exp, Uni>, v: usize) -> ModPoly {
    let mut out = ModPoly::new();
    for (k, u) in s {
        for (d, &c) in u.iter().enumerate() {
            if c != 0 {
                let mut e = k.clone();
                e[v] = d as i64;
                out.insert(e, c);
            }
        }
    }
    out
}

fn eval_var(a: &ModPoly, v: usize, x: u64, p: u64) -> ModPoly {
    let mut out = ModPoly::new();
    for (e, &c) in a {
        let mut k = e.clone();
        k[v] = 0;
        add_term(&mut out, k, mul_mod(c, pow_mod(x, e[v] as u64, p), p), p);
    }
    out
}

/// Monic gcd over Z_p of polynomials in x_0..=x_top.
fn pgcd(a: &ModPoly, b: &ModPoly, top: usize, p: u64) -> Option<ModPoly> {
    if a.is_empty() {
        return Some(monic(b, p));
    }
    if b.is_empty() {
        return Some(monic(a, p));
    }
    let arity = a.keys().next().unwrap().len();
    let v = (0..=top).rev().find(|&v| uses_var(a, v) || uses_var(b, v));
    let Some(v) = v else {
        return Some(ModPoly::from([(vec![0; arity], 1)]));
    };
    if v == 0 {
        let ua = split(a, 0).into_values().next().unwrap_or_default();
        let ub = split(b, 0).into_values().next().unwrap_or_default();
        return Some(join(&BTreeMap::from([(vec![0; arity], uni_gcd(&ua, &ub, p))]), 0));
    }
    let sa = split(a, v);
    let sb = split(b, v);
    let content = |s: &BTreeMap<Exp, Uni>| s.values().fold(Uni::new(), |g, u| if g.len() == 1 { g } else { uni_gcd(&g, u, p) });
    let ca = content(&sa);
    let cb = content(&sb);
    let c = uni_gcd(&ca, &cb, p);
    let prim = |s: &BTreeMap<Exp, Uni>, ct: &Uni| -> BTreeMap<Exp, Uni> {
        s.iter().map(|(k, u)| (k.clone(), uni_divrem(u, ct, p).0)).collect()
    };
    let pa = prim(&sa, &ca);
    let pb = prim(&sb, &cb);
    let lca = pa.last_key_value().unwrap().1.clone();
    let lcb = pb.last_key_value().unwrap().1.clone();
    let g = uni_gcd(&lca, &lcb, p);
    let deg = |s: &BTreeMap<Exp, Uni>| s.values().map(|u| u.len().saturating_sub(1)).max().unwrap_or(0);
    let bound = deg(&pa).min(deg(&pb)) + g.len().saturating_sub(1);
    let fa = join(&pa, v);
    let fb = join(&pb, v);
    let mut h: Option<(BTreeMap<Exp, Uni>, Exp)> = None;
    let mut q: Uni = vec![1];
    let mut alpha = 0u64;
    while q.len() <= 2 * bound + 24 {
        let mut stable = false;
        alpha += 1;
        if alpha >= p {
            return None;
        }
        let ga = uni_eval(&g, alpha, p);
        if uni_eval(&lca, alpha, p) == 0 || uni_eval(&lcb, alpha, p) == 0 || ga == 0 {
            continue;
        }
        let img = pgcd(&eval_var(&fa, v, alpha, p), &eval_var(&fb, v, alpha, p), v.saturating_sub(1), p)?;
        let lead = img.last_key_value().unwrap().0.clone();
        if lead.iter().all(|&x| x == 0) {
            return Some(join(&BTreeMap::from([(vec![0; arity], c)]), v));
        }
        let img = scale(&img, ga, p);
        match &mut h {
            Some((_, hl)) if lead > *hl => continue,
            Some((hs, hl)) if lead == *hl => {
                // Newton step: H += (img - H(alpha)) q / q(alpha)
                let qa_inv = inv_mod(uni_eval(&q, alpha, p), p);
                let keys: Vec<Exp> = hs.keys().cloned().chain(img.keys().cloned()).collect();
                stable = true;
                for k in keys {
                    let cur = hs.get(&k).map_or(0, |u| uni_eval(u, alpha, p));
                    let want = img.get(&k).copied().unwrap_or(0);
                    let delta = mul_mod(sub_mod(want, cur, p), qa_inv, p);
                    if delta == 0 {
                        continue;
                    }
                    stable = false;
                    let u = hs.entry(k).or_default();
                    let add: Uni = q.iter().map(|&x| mul_mod(x, delta, p)).collect();
                    if u.len() < add.len() {
                        u.resize(add.len(), 0);
                    }
                    for (i, x) in add.into_iter().enumerate() {
                        u[i] = add_mod(u[i], x, p);
                    }
                    trim(u);
                }
                hs.retain(|_, u| !u.is_empty());
            }
            _ => {
                q = vec![1];
                h = Some((img.iter().map(|(k, &x)| (k.clone(), vec![x])).collect(), lead));
            }
        }
        q = uni_mul(&q, &vec![p - alpha % p, 1], p);
        if stable || q.len() > bound + 1 {
            let (hs, _) = h.as_ref().unwrap();
            let ct = content(hs);
            let cand = join(&prim(hs, &ct), v);
            if divides(&fa, &cand, p) && divides(&fb, &cand, p) {
                let cpoly = join(&BTreeMap::from([(vec![0; arity], c.clone())]), v);
                return Some(monic(&mul(&cand, &cpoly, p), p));
            }
        }
    }
    None
}

fn mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let mut out = ModPoly::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            let e: Exp = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_term(&mut out, e, mul_mod(ca, cb, p), p);
        }
    }
    out
}

/// Integer polynomial, keys in lex order.
pub(crate) type IntPoly = BTreeMap<Exp, BigInt>;

fn reduce(a: &IntPoly, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    a.iter()
        .filter_map(|(e, c)| {
            let r = c.mod_floor(&pb).to_u64().unwrap();
            (r != 0).then(|| (e.clone(), r))
        })
        .collect()
}

fn int_divides(a: &IntPoly, b: &IntPoly) -> bool {
    let Some((lb_e, lb_c)) = b.last_key_value() else {
        return false;
    };
    let mut r = a.clone();
    while let Some((le, lc)) = r.last_key_value() {
        let d: Exp = le.iter().zip(lb_e).map(|(x, y)| x - y).collect();
        if d.iter().any(|&x| x < 0) {
            return false;
        }
        let (q, rem) = lc.div_rem(lb_c);
        if !rem.is_zero() {
            return false;
        }
        for (e, c) in b {
            let shifted: Exp = e.iter().zip(&d).map(|(x, y)| x + y).collect();
            let entry = r.entry(shifted).or_insert_with(BigInt::zero);
            *entry -= &q * c;
            if entry.is_zero() {
                let key: Exp = e.iter().zip(&d).map(|(x, y)| x + y).collect();
                r.remove(&key);
            }
        }
    }
    true
}

/// Gcd of primitive integer polynomials with nonnegative exponents, primitive with positive
/// lex-leading coefficient. None if the prime supply runs out without a verified answer.
pub(crate) fn modular_gcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let arity = a.keys().next()?.len();
    let lca = a.last_key_value()?.1.clone();
    let lcb = b.last_key_value()?.1.clone();
    let g = lca.gcd(&lcb);
    let mut modulus = BigInt::one();
    let mut acc: Option<(IntPoly, Exp)> = None;
    let mut prime = (1u64 << 61) - 1;
    for _ in 0..40 {
        while !is_prime(prime) || (&lca % prime).is_zero() || (&lcb % prime).is_zero() {
            prime -= 2;
        }
        let p = prime;
        prime -= 2;
        let top = arity.saturating_sub(1);
        let img = pgcd(&reduce(a, p), &reduce(b, p), top, p)?;
        let lead = img.last_key_value()?.0.clone();
        if lead.iter().all(|&x| x == 0) {
            return Some(IntPoly::from([(vec![0; arity], BigInt::one())]));
        }
        let gp = (&g % p + p).to_u64().unwrap() % p;
        let img = scale(&img, gp, p);
        let pb = BigInt::from(p);
        match &mut acc {
            Some((_, l)) if lead > *l => continue,
            Some((h, l)) if lead == *l => {
                // CRT: x = h mod M, x = c mod p
                let m_inv = {
                    let m_mod = (&modulus % p).to_u64().unwrap();
                    BigInt::from(inv_mod(m_mod, p))
                };
                let keys: Vec<Exp> = h.keys().cloned().chain(img.keys().cloned()).collect();
                for k in keys {
                    let hk = h.get(&k).cloned().unwrap_or_else(BigInt::zero);
                    let ck = BigInt::from(img.get(&k).copied().unwrap_or(0));
                    let t = ((ck - &hk) * &m_inv).mod_floor(&pb);
                    let v = hk + &modulus * t;
                    if v.is_zero() {
                        h.remove(&k);
                    } else {
                        h.insert(k, v);
                    }
                }
                modulus *= &pb;
            }
            _ => {
                modulus = pb.clone();
                acc = Some((img.iter().map(|(k, &x)| (k.clone(), BigInt::from(x))).collect(), lead));
            }
        }
        let (h, _) = acc.as_ref().unwrap();
        let half = &modulus / 2;
        let sym: IntPoly = h
            .iter()
            .map(|(k, x)| (k.clone(), if x > &half { x - &modulus } else { x.clone() }))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        let cont = sym.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if cont.is_zero() {
            continue;
        }
        let mut cand: IntPoly = sym.into_iter().map(|(k, x)| (k, x / &cont)).collect();
        if cand.last_key_value().unwrap().1.is_negative() {
            cand = cand.into_iter().map(|(k, x)| (k, -x)).collect();
        }
        if int_divides(a, &cand) && int_divides(b, &cand) {
            return Some(cand);
        }
    }
    None
}

/// True only when the gcd is certainly constant: for every variable shared by a and b, some
/// specialization of the others mod p keeps the leading coefficient of a and leaves coprime
/// univariate images.
pub(crate) fn coprime_by_specialization(a: &IntPoly, b: &IntPoly) -> bool {
    let Some(arity) = a.keys().next().map(Vec::len) else {
        return false;
    };
    let p = (1u64 << 61) - 1;
    let (ma, mb) = (reduce(a, p), reduce(b, p));
    let points = |attempt: u64| -> Vec<u64> { (0..arity as u64).map(|u| pow_mod(3 + attempt, 7 + 11 * u, p)).collect() };
    'var: for v in 0..arity {
        if !uses_var(&ma, v) || !uses_var(&mb, v) {
            continue;
        }
        for attempt in 0..3 {
            let pt = points(attempt);
            let spec = |m: &ModPoly| -> Uni {
                let mut out = Uni::new();
                for (e, &c) in m {
                    let mut t = c;
                    for (u, &k) in e.iter().enumerate() {
                        if u != v && k != 0 {
                            t = mul_mod(t, pow_mod(pt[u], k as u64, p), p);
                        }
                    }
                    let d = e[v] as usize;
                    if out.len() <= d {
                        out.resize(d + 1, 0);
                    }
                    out[d] = add_mod(out[d], t, p);
                }
                out
            };
            let sa = spec(&ma);
            let top = ma.keys().map(|e| e[v]).max().unwrap_or(0) as usize;
            if sa.len() <= top || sa[top] == 0 {
                continue;
            }
            if uni_gcd(&sa, &spec(&mb), p).len() == 1 {
                continue 'var;
            }
            return false;
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[i64], i64)]) -> IntPoly {
        terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))).collect()
    }

    fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut out = IntPoly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Exp = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    #[test]
    fn primes() {
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1 << 61) - 3));
        assert!(is_prime(97));
    }

    #[test]
    fn trivariate_common_factor() {
        // g = 3 x0 x2 - 2 x1^2 + 5, f = x0^2 + x1 x2 + 1, h = x1 - 7 x2^3
        let g = poly(&[(&[1, 0, 1], 3), (&[0, 2, 0], -2), (&[0, 0, 0], 5)]);
        let f = poly(&[(&[2, 0, 0], 1), (&[0, 1, 1], 1), (&[0, 0, 0], 1)]);
        let h = poly(&[(&[0, 1, 0], 1), (&[0, 0, 3], -7)]);
        let a = int_mul(&g, &f);
        let b = int_mul(&g, &h);
        assert_eq!(modular_gcd(&a, &b).unwrap(), g);
        let one = poly(&[(&[0, 0, 0], 1)]);
        assert_eq!(modular_gcd(&f, &h).unwrap(), one);
    }

    #[test]
    fn content_in_the_last_variable() {
        // gcd is (x2 + 1)(x0 - x1)
        let c = poly(&[(&[0, 0, 1], 1), (&[0, 0, 0], 1)]);
        let d = poly(&[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]);
        let g = int_mul(&c, &d);
        let a = int_mul(&g, &poly(&[(&[1, 0, 0], 2), (&[0, 0, 2], 1)]));
        let b = int_mul(&g, &poly(&[(&[0, 1, 1], 1), (&[0, 0, 0], -3)]));
        assert_eq!(modular_gcd(&a, &b).unwrap(), g);
    }
}
