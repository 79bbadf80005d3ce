//! Exact arithmetic in GF(p) and in the cubic extension GF(p³).
//!
//! Moduli are capped at 62 bits so every product fits a 128-bit
//! intermediate; all residues are kept canonical in `[0, p)`. GF(p³) is
//! realized as GF(p)[θ]/(θ³ + a₂θ² + a₁θ + a₀) for the canonical
//! (lexicographically smallest) monic irreducible cubic modulus, which makes
//! extension-field representations reproducible bit for bit across runs.

use crate::error::{Error, Result};

/// Largest admissible modulus: products of two residues must fit in u128
/// with headroom for 10-term accumulations.
pub const MAX_MODULUS_BITS: u32 = 62;

/// A primality-checked prime modulus `p` with `2 ≤ p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1u64 << MAX_MODULUS_BITS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus { p })
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.p
    }

    /// Reduce a signed value into `[0, p)`.
    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b; // a, b < 2^62, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // Invariants: old_r = old_s * p + old_t * a (t tracked only).
        let (mut old_r, mut r) = (self.p as i128, a as i128);
        let (mut old_t, mut t) = (0i128, 1i128);
        while r != 0 {
            let q = old_r / r;
            old_r -= q * r;
            std::mem::swap(&mut old_r, &mut r);
            old_t -= q * t;
            std::mem::swap(&mut old_t, &mut t);
        }
        debug_assert_eq!(old_r, 1, "gcd(a, p) = 1 for prime p and a != 0");
        let mut v = old_t % self.p as i128;
        if v < 0 {
            v += self.p as i128;
        }
        Ok(v as u64)
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    // This witness set is exact below 3.3 * 10^24, which covers u64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A canonical residue in GF(p). Carries its modulus so cross-field misuse
/// is caught at the operation site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElement {
    value: u64,
    p: u64,
}

impl FpElement {
    pub fn new(value: u64, m: PrimeModulus) -> Self {
        FpElement {
            value: m.reduce(value),
            p: m.get(),
        }
    }

    pub fn zero(m: PrimeModulus) -> Self {
        FpElement { value: 0, p: m.get() }
    }

    pub fn one(m: PrimeModulus) -> Self {
        FpElement {
            value: 1 % m.get(),
            p: m.get(),
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    fn ctx(self) -> PrimeModulus {
        PrimeModulus { p: self.p }
    }

    pub fn inv(self) -> Result<FpElement> {
        let v = self.ctx().inv(self.value)?;
        Ok(FpElement { value: v, p: self.p })
    }

    pub fn pow(self, e: u64) -> FpElement {
        FpElement {
            value: self.ctx().pow(self.value, e),
            p: self.p,
        }
    }
}

#[inline]
fn check_same_modulus(a: FpElement, b: FpElement) {
    assert_eq!(
        a.p, b.p,
        "mismatched moduli: GF({}) vs GF({})",
        a.p, b.p
    );
}

impl std::ops::Add for FpElement {
    type Output = FpElement;
    fn add(self, rhs: FpElement) -> FpElement {
        check_same_modulus(self, rhs);
        FpElement {
            value: self.ctx().add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl std::ops::Sub for FpElement {
    type Output = FpElement;
    fn sub(self, rhs: FpElement) -> FpElement {
        check_same_modulus(self, rhs);
        FpElement {
            value: self.ctx().sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl std::ops::Mul for FpElement {
    type Output = FpElement;
    fn mul(self, rhs: FpElement) -> FpElement {
        check_same_modulus(self, rhs);
        FpElement {
            value: self.ctx().mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl std::ops::Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        FpElement {
            value: self.ctx().neg(self.value),
            p: self.p,
        }
    }
}

impl std::fmt::Display for FpElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The canonical monic irreducible cubic x³ + a₂x² + a₁x + a₀ over GF(p),
/// chosen as the lexicographically smallest (a₂, a₁, a₀) that is irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubicModulus {
    m: PrimeModulus,
    a2: u64,
    a1: u64,
    a0: u64,
    // Cached reduction rows: θ³ = -(a₂θ² + a₁θ + a₀) and
    // θ⁴ = (a₂² - a₁)θ² + (a₂a₁ - a₀)θ + a₂a₀.
    th4: [u64; 3],
}

impl CubicModulus {
    fn assemble(m: PrimeModulus, a2: u64, a1: u64, a0: u64) -> Self {
        let th4 = [
            m.mul(a2, a0),
            m.sub(m.mul(a2, a1), a0),
            m.sub(m.mul(a2, a2), a1),
        ];
        CubicModulus { m, a2, a1, a0, th4 }
    }

    pub fn prime(self) -> PrimeModulus {
        self.m
    }

    /// Coefficients (a₂, a₁, a₀) of x³ + a₂x² + a₁x + a₀.
    pub fn coefficients(self) -> (u64, u64, u64) {
        (self.a2, self.a1, self.a0)
    }

    pub fn element(self, c0: u64, c1: u64, c2: u64) -> Fp3Element {
        Fp3Element {
            c: [self.m.reduce(c0), self.m.reduce(c1), self.m.reduce(c2)],
            q: self,
        }
    }

    /// Embed a prime-field residue.
    pub fn embed(self, r: u64) -> Fp3Element {
        self.element(r, 0, 0)
    }

    #[inline]
    pub(crate) fn add3(self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        [
            self.m.add(a[0], b[0]),
            self.m.add(a[1], b[1]),
            self.m.add(a[2], b[2]),
        ]
    }

    #[inline]
    pub(crate) fn sub3(self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        [
            self.m.sub(a[0], b[0]),
            self.m.sub(a[1], b[1]),
            self.m.sub(a[2], b[2]),
        ]
    }

    #[inline]
    pub(crate) fn neg3(self, a: [u64; 3]) -> [u64; 3] {
        [self.m.neg(a[0]), self.m.neg(a[1]), self.m.neg(a[2])]
    }

    /// Schoolbook product reduced by the modulus rows; allocation-free since
    /// this sits inside root-finding loops.
    pub(crate) fn mul3(self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        let p = self.m.get() as u128;
        let w = |x: u64, y: u64| x as u128 * y as u128;
        let e0 = (w(a[0], b[0]) % p) as u64;
        let e1 = ((w(a[0], b[1]) + w(a[1], b[0])) % p) as u64;
        let e2 = ((w(a[0], b[2]) + w(a[1], b[1]) + w(a[2], b[0])) % p) as u64;
        let e3 = ((w(a[1], b[2]) + w(a[2], b[1])) % p) as u64;
        let e4 = (w(a[2], b[2]) % p) as u64;
        let th3 = [self.a0, self.a1, self.a2];
        let mut r = [0u64; 3];
        for i in 0..3 {
            let acc = [e0, e1, e2][i] as u128
                + w(e3, self.m.neg(th3[i]))
                + w(e4, self.th4[i]);
            r[i] = (acc % p) as u64;
        }
        r
    }

    pub(crate) fn pow3(self, a: [u64; 3], mut e: u64) -> [u64; 3] {
        let mut base = a;
        let mut acc = self.embed(1).c;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul3(acc, base);
            }
            base = self.mul3(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv3(self, a: [u64; 3]) -> Result<[u64; 3]> {
        if a == [0, 0, 0] {
            return Err(Error::DivisionByZero);
        }
        let gf = GfP { m: self.m };
        let modpoly = vec![self.a0, self.a1, self.a2, 1 % self.m.get()];
        let e: Vec<u64> = a.to_vec();
        let inv = crate::poly::invmod(&e, &modpoly, &gf)
            .expect("nonzero element of GF(p^3) is invertible");
        let mut r = [0u64; 3];
        for (i, v) in inv.iter().enumerate() {
            r[i] = *v;
        }
        Ok(r)
    }
}

/// An element c₀ + c₁θ + c₂θ² of GF(p³).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp3Element {
    c: [u64; 3],
    q: CubicModulus,
}

impl Fp3Element {
    pub fn coords(self) -> [u64; 3] {
        self.c
    }

    pub fn modulus(self) -> CubicModulus {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.c == [0, 0, 0]
    }

    /// True iff the element lies in the embedded prime field.
    pub fn is_in_base_field(self) -> bool {
        self.c[1] == 0 && self.c[2] == 0
    }

    pub fn inv(self) -> Result<Fp3Element> {
        Ok(Fp3Element {
            c: self.q.inv3(self.c)?,
            q: self.q,
        })
    }

    pub fn pow(self, e: u64) -> Fp3Element {
        Fp3Element {
            c: self.q.pow3(self.c, e),
            q: self.q,
        }
    }
}

#[inline]
fn check_same_cubic(a: Fp3Element, b: Fp3Element) {
    assert_eq!(
        a.q, b.q,
        "mismatched moduli: elements of different GF(p^3) realizations"
    );
}

impl std::ops::Add for Fp3Element {
    type Output = Fp3Element;
    fn add(self, rhs: Fp3Element) -> Fp3Element {
        check_same_cubic(self, rhs);
        Fp3Element {
            c: self.q.add3(self.c, rhs.c),
            q: self.q,
        }
    }
}

impl std::ops::Sub for Fp3Element {
    type Output = Fp3Element;
    fn sub(self, rhs: Fp3Element) -> Fp3Element {
        check_same_cubic(self, rhs);
        Fp3Element {
            c: self.q.sub3(self.c, rhs.c),
            q: self.q,
        }
    }
}

impl std::ops::Mul for Fp3Element {
    type Output = Fp3Element;
    fn mul(self, rhs: Fp3Element) -> Fp3Element {
        check_same_cubic(self, rhs);
        Fp3Element {
            c: self.q.mul3(self.c, rhs.c),
            q: self.q,
        }
    }
}

impl std::ops::Neg for Fp3Element {
    type Output = Fp3Element;
    fn neg(self) -> Fp3Element {
        Fp3Element {
            c: self.q.neg3(self.c),
            q: self.q,
        }
    }
}

/// The Frobenius automorphism e ↦ e^p of GF(p³). Fixes exactly the embedded
/// prime field and permutes the conjugates of every other element.
pub fn frobenius(e: Fp3Element) -> Fp3Element {
    e.pow(e.modulus().prime().get())
}

/// Find the canonical cubic modulus for GF(p³): the lexicographically
/// smallest (a₂, a₁, a₀) with x³ + a₂x² + a₁x + a₀ irreducible over GF(p).
///
/// A monic cubic is irreducible over GF(p) iff it has no root there. When
/// p ≢ 1 (mod 3) the cube map is a bijection, so every x³ + a₀ has a root
/// and the whole (0, 0, ·) row can be skipped without scanning it.
pub fn find_cubic_modulus(m: PrimeModulus) -> CubicModulus {
    let p = m.get();
    for a2 in 0..p {
        for a1 in 0..p {
            if a2 == 0 && a1 == 0 && p % 3 != 1 {
                continue;
            }
            for a0 in 0..p {
                if cubic_is_irreducible(m, a2, a1, a0) {
                    return CubicModulus::assemble(m, a2, a1, a0);
                }
            }
        }
    }
    unreachable!("an irreducible cubic exists over every GF(p)")
}

/// Monic cubic irreducibility via gcd(x^p - x, f): the gcd is nontrivial
/// exactly when f has a root in GF(p), and a cubic with no root is
/// irreducible.
fn cubic_is_irreducible(m: PrimeModulus, a2: u64, a1: u64, a0: u64) -> bool {
    let gf = GfP { m };
    let f = vec![a0, a1, a2, 1 % m.get()];
    let xp = crate::poly::x_pow_field_order_mod(&f, &gf);
    // x^p - x mod f
    let x = vec![0, 1 % m.get()];
    let diff = crate::poly::sub(&xp, &x, &gf);
    let g = crate::poly::gcd_monic(&diff, &f, &gf);
    crate::poly::degree(&g) == Some(0)
}

/// A field usable by the generic polynomial machinery. Implemented by the
/// prime-field and cubic-extension views below.
pub trait FiniteField: Copy + Send + Sync {
    type Elem: Copy + Eq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    fn extension_degree(&self) -> u32;
    /// Embed a canonical residue of the prime field.
    fn from_base(&self, r: u64) -> Self::Elem;
    /// The i-th element in the canonical enumeration (i < field order).
    fn nth_elem(&self, i: u64) -> Self::Elem;
    /// The i-th probe element for root splitting. Must engage extension
    /// coordinates immediately: Galois-conjugate roots have equal quadratic
    /// character under every base-field shift, so an enumeration that walks
    /// the base field first can never separate them.
    fn probe_elem(&self, i: u64) -> Self::Elem {
        self.nth_elem(i)
    }
    /// The field order if it does not exceed `cap`.
    fn order_if_at_most(&self, cap: u64) -> Option<u64>;
    /// Canonical sort key, used wherever element order must be reproducible.
    fn sort_key(&self, a: Self::Elem) -> [u64; 3];

    #[inline]
    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// Prime-field view over raw residues.
#[derive(Debug, Clone, Copy)]
pub struct GfP {
    pub m: PrimeModulus,
}

impl FiniteField for GfP {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m.get()
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.m.add(a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.m.sub(a, b)
    }
    fn neg(&self, a: u64) -> u64 {
        self.m.neg(a)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.m.mul(a, b)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        self.m.inv(a).ok()
    }
    fn characteristic(&self) -> u64 {
        self.m.get()
    }
    fn extension_degree(&self) -> u32 {
        1
    }
    fn from_base(&self, r: u64) -> u64 {
        self.m.reduce(r)
    }
    fn nth_elem(&self, i: u64) -> u64 {
        self.m.reduce(i)
    }
    fn order_if_at_most(&self, cap: u64) -> Option<u64> {
        (self.m.get() <= cap).then_some(self.m.get())
    }
    fn sort_key(&self, a: u64) -> [u64; 3] {
        [a, 0, 0]
    }
}

/// Cubic-extension view over raw coordinate triples.
#[derive(Debug, Clone, Copy)]
pub struct GfP3 {
    pub q: CubicModulus,
}

impl FiniteField for GfP3 {
    type Elem = [u64; 3];

    fn zero(&self) -> [u64; 3] {
        [0, 0, 0]
    }
    fn one(&self) -> [u64; 3] {
        [1 % self.q.prime().get(), 0, 0]
    }
    fn add(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        self.q.add3(a, b)
    }
    fn sub(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        self.q.sub3(a, b)
    }
    fn neg(&self, a: [u64; 3]) -> [u64; 3] {
        self.q.neg3(a)
    }
    fn mul(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        self.q.mul3(a, b)
    }
    fn inv(&self, a: [u64; 3]) -> Option<[u64; 3]> {
        self.q.inv3(a).ok()
    }
    fn characteristic(&self) -> u64 {
        self.q.prime().get()
    }
    fn extension_degree(&self) -> u32 {
        3
    }
    fn from_base(&self, r: u64) -> [u64; 3] {
        [self.q.prime().reduce(r), 0, 0]
    }
    fn nth_elem(&self, i: u64) -> [u64; 3] {
        let p = self.q.prime().get();
        [i % p, (i / p) % p, (i / (p * p)) % p]
    }
    fn probe_elem(&self, i: u64) -> [u64; 3] {
        let p = self.q.prime().get();
        [
            crate::seeds::derive_seed(i, 0) % p,
            crate::seeds::derive_seed(i, 1) % p,
            crate::seeds::derive_seed(i, 2) % p,
        ]
    }
    fn order_if_at_most(&self, cap: u64) -> Option<u64> {
        let p = self.q.prime().get() as u128;
        let order = p * p * p;
        (order <= cap as u128).then_some(order as u64)
    }
    fn sort_key(&self, a: [u64; 3]) -> [u64; 3] {
        // Most significant coordinate first so keys sort like base-p numerals.
        [a[2], a[1], a[0]]
    }
}
