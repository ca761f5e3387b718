//! Dense univariate polynomials over `Rational`, ascending degree.
//! Only what cyclotomic reduction and inversion need.

use super::Rational;

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

pub(crate) fn is_zero(p: &[Rational]) -> bool {
    p.iter().all(Rational::is_zero)
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Division with remainder; `d` must be nonzero after trimming.
pub(crate) fn div_rem(a: &[Rational], d: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut d = d.to_vec();
    trim(&mut d);
    assert!(!d.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let lead_inv = d.last().unwrap().inv().expect("nonzero leading coefficient");
    let mut q = vec![Rational::zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() && !r.is_empty() {
        let shift = r.len() - d.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, di) in d.iter().enumerate() {
            let t = &c * di;
            r[shift + i] -= &t;
        }
        q[shift] = c;
        // leading term cancels exactly
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[Rational], d: &[Rational]) -> Vec<Rational> {
    div_rem(a, d).1
}

/// Returns `s` with `s * a ≡ gcd(a, m) (mod m)`, together with the monic gcd.
pub(crate) fn inverse_mod(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    // extended Euclid tracking only the coefficient of `a`
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m);
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    trim(&mut r0);
    while !is_zero(&r1) {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let lead = r0.last().cloned().unwrap_or_else(Rational::one);
    let lead_inv = lead.inv().expect("gcd has nonzero leading coefficient");
    let g: Vec<Rational> = r0.iter().map(|c| c * &lead_inv).collect();
    let s: Vec<Rational> = s0.iter().map(|c| c * &lead_inv).collect();
    (rem(&s, m), g)
}
