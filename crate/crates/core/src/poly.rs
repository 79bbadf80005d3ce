//! Univariate polynomial helpers over a [`FiniteField`], plus deterministic
//! root extraction for the low degrees the curve classifier needs.
//!
//! Polynomials are dense coefficient vectors, least significant first, with
//! no trailing zeros. Root extraction enumerates small fields outright; over
//! large fields it isolates the product of rational linear factors with
//! gcd(x^|K| - x, f) and then splits it using quadratic-character probes
//! (x + a) for a walking a fixed enumeration of the field, so the output is
//! reproducible.

use crate::field::FiniteField;

pub fn trim<F: FiniteField>(f: &mut Vec<F::Elem>, fld: &F) {
    while let Some(&last) = f.last() {
        if fld.is_zero(last) {
            f.pop();
        } else {
            break;
        }
    }
}

/// Degree, or None for the zero polynomial.
pub fn degree<T>(f: &[T]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn eval<F: FiniteField>(f: &[F::Elem], x: F::Elem, fld: &F) -> F::Elem {
    let mut acc = fld.zero();
    for &c in f.iter().rev() {
        acc = fld.add(fld.mul(acc, x), c);
    }
    acc
}

pub fn add<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let mut out = vec![fld.zero(); a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = fld.add(out[i], c);
    }
    trim(&mut out, fld);
    out
}

pub fn sub<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let mut out = vec![fld.zero(); a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = fld.sub(out[i], c);
    }
    trim(&mut out, fld);
    out
}

pub fn mul<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![fld.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if fld.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fld.add(out[i + j], fld.mul(x, y));
        }
    }
    trim(&mut out, fld);
    out
}

pub fn scale<F: FiniteField>(a: &[F::Elem], s: F::Elem, fld: &F) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> = a.iter().map(|&c| fld.mul(c, s)).collect();
    trim(&mut out, fld);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r, fld);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = fld.inv(*b.last().unwrap()).expect("unit leading coefficient");
    let mut q = vec![fld.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = fld.mul(*r.last().unwrap(), lead_inv);
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = fld.sub(r[k + i], fld.mul(c, bc));
        }
        // The leading term cancels by construction.
        r.pop();
        trim(&mut r, fld);
        if r.is_empty() {
            break;
        }
    }
    trim(&mut q, fld);
    (q, r)
}

pub fn rem<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    divrem(a, b, fld).1
}

pub fn make_monic<F: FiniteField>(a: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = fld.inv(lead).expect("unit leading coefficient");
            scale(a, inv, fld)
        }
    }
}

/// Monic gcd by the Euclidean algorithm.
pub fn gcd_monic<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a, fld);
    trim(&mut b, fld);
    while !b.is_empty() {
        let r = rem(&a, &b, fld);
        a = b;
        b = r;
    }
    make_monic(&a, fld)
}

pub fn mulmod<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], m: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    rem(&mul(a, b, fld), m, fld)
}

pub fn powmod<F: FiniteField>(base: &[F::Elem], mut e: u128, m: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let mut acc = rem(&[fld.one()], m, fld);
    let mut b = rem(base, m, fld);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, fld);
        }
        b = mulmod(&b, &b, m, fld);
        e >>= 1;
    }
    acc
}

/// x^|K| mod m, staged as extension-degree many p-th powers so the exponent
/// never has to be materialized.
pub fn x_pow_field_order_mod<F: FiniteField>(m: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    assert!(m.len() >= 2, "modulus must have positive degree");
    let p = fld.characteristic() as u128;
    let mut g = rem(&[fld.zero(), fld.one()], m, fld);
    for _ in 0..fld.extension_degree() {
        g = powmod(&g, p, m, fld);
    }
    g
}

/// g^((|K|-1)/2) mod m for odd |K|, staged as ((p-1)/2) then (p² + p + 1)
/// in the cubic-extension case.
fn half_order_powmod<F: FiniteField>(g: &[F::Elem], m: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let p = fld.characteristic();
    debug_assert!(p % 2 == 1, "half-order exponent needs odd field order");
    let s1 = ((p - 1) / 2) as u128;
    let h = powmod(g, s1, m, fld);
    match fld.extension_degree() {
        1 => h,
        3 => {
            let p = p as u128;
            powmod(&h, p * p + p + 1, m, fld)
        }
        d => unreachable!("unsupported extension degree {d}"),
    }
}

/// Extended Euclid: the inverse of `e` modulo `m`, if gcd(e, m) is a unit.
pub fn invmod<F: FiniteField>(e: &[F::Elem], m: &[F::Elem], fld: &F) -> Option<Vec<F::Elem>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(e, m, fld);
    let mut t0: Vec<F::Elem> = Vec::new();
    let mut t1 = vec![fld.one()];
    trim(&mut r0, fld);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, fld);
        let t = sub(&t0, &mul(&q, &t1, fld), fld);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let lead_inv = fld.inv(r0[0])?;
    Some(rem(&scale(&t0, lead_inv, fld), m, fld))
}

const BRUTE_FORCE_ORDER_CAP: u64 = 1 << 14;

/// All distinct roots of `f` in the field, sorted by the canonical key.
/// `f` must be nonzero.
pub fn distinct_roots<F: FiniteField>(f: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let mut f = f.to_vec();
    trim(&mut f, fld);
    assert!(!f.is_empty(), "roots of the zero polynomial are undefined");
    if f.len() == 1 {
        return Vec::new();
    }
    let mut roots = if let Some(order) = fld.order_if_at_most(BRUTE_FORCE_ORDER_CAP) {
        (0..order)
            .map(|i| fld.nth_elem(i))
            .filter(|&x| fld.is_zero(eval(&f, x, fld)))
            .collect::<Vec<_>>()
    } else {
        // Product of the distinct rational linear factors.
        let xq = x_pow_field_order_mod(&f, fld);
        let x = vec![fld.zero(), fld.one()];
        let linear_part = gcd_monic(&sub(&xq, &x, fld), &f, fld);
        let mut out = Vec::new();
        split_linear_product(linear_part, fld, &mut out);
        out
    };
    roots.sort_by_key(|&r| fld.sort_key(r));
    roots.dedup();
    roots
}

/// Split a monic squarefree product of rational linear factors into roots.
fn split_linear_product<F: FiniteField>(r: Vec<F::Elem>, fld: &F, out: &mut Vec<F::Elem>) {
    match degree(&r) {
        None | Some(0) => {}
        Some(1) => out.push(fld.neg(r[0])),
        Some(_) => {
            for trial in 0..100_000u64 {
                let a = fld.probe_elem(trial);
                // Direct hit: -a is a root; peel the factor off.
                if fld.is_zero(eval(&r, fld.neg(a), fld)) {
                    out.push(fld.neg(a));
                    let (q, rem_) = divrem(&r, &[a, fld.one()], fld);
                    debug_assert!(rem_.is_empty());
                    split_linear_product(q, fld, out);
                    return;
                }
                // Quadratic-character probe: gcd((x+a)^((|K|-1)/2) - 1, r)
                // separates roots by the character of root + a.
                let h = half_order_powmod(&[a, fld.one()], &r, fld);
                let hm1 = sub(&h, &[fld.one()], fld);
                if hm1.is_empty() {
                    continue;
                }
                let g = gcd_monic(&hm1, &r, fld);
                let d = degree(&g);
                if d.is_some() && d != Some(0) && g.len() < r.len() {
                    let (q, rem_) = divrem(&r, &g, fld);
                    debug_assert!(rem_.is_empty());
                    split_linear_product(g, fld, out);
                    split_linear_product(q, fld, out);
                    return;
                }
            }
            unreachable!("character probes failed to split a linear product")
        }
    }
}
