//! Affine plane curves of degree at most 3 over GF(p): coefficient
//! representation in a fixed monomial order, point evaluation, brute-force
//! point enumeration, and irreducibility classification.
//!
//! Classification distinguishes curves that factor over GF(p) from degree-3
//! curves that only factor as three Galois-conjugate lines over GF(p³); a
//! cubic form with no rational linear factor can split no other way, since a
//! line-times-conic factorization forces the line to be Galois-stable. The
//! factor search therefore runs over GF(p) first and GF(p³) second, each via
//! slope/vertical candidate reduction to univariate root-finding, so it stays
//! fast for cryptographic-size p.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{find_cubic_modulus, FiniteField, FpElement, GfP, GfP3, PrimeModulus};
use crate::poly;

/// The fixed monomial sequence: index i holds the exponents (dx, dy) of the
/// i-th monomial x^dx · y^dy. This order is used everywhere a 10-vector of
/// coefficients appears, including file formats and the dual embedding.
pub const MONOMIAL_ORDER: [(u8, u8); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

/// Total degree of each monomial in [`MONOMIAL_ORDER`].
pub const MONOMIAL_DEGREES: [u8; 10] = [0, 1, 1, 2, 2, 2, 3, 3, 3, 3];

/// CSV header matching [`MONOMIAL_ORDER`]; `cIJ` is the coefficient of x^I y^J.
pub const CURVE_CSV_HEADER: &str = "c00,c10,c01,c20,c11,c02,c30,c21,c12,c03";

/// A point of the affine plane over GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint {
    pub x: FpElement,
    pub y: FpElement,
}

impl AffinePoint {
    pub fn new(x: u64, y: u64, m: PrimeModulus) -> Self {
        AffinePoint {
            x: FpElement::new(x, m),
            y: FpElement::new(y, m),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.x.modulus()
    }

    /// The 10 monomials of the point in [`MONOMIAL_ORDER`], as raw residues.
    pub fn monomial_vector(&self) -> [u64; 10] {
        monomial_vector(self.x.value(), self.y.value(), self.x.modulus())
    }
}

pub(crate) fn monomial_vector(x: u64, y: u64, p: u64) -> [u64; 10] {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let x2 = mul(x, x);
    let x3 = mul(x2, x);
    let y2 = mul(y, y);
    let y3 = mul(y2, y);
    [1 % p, x, y, x2, mul(x, y), y2, x3, mul(x2, y), mul(x, y2), y3]
}

/// Geometric factorization class of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrreducibilityClass {
    /// Degree 3 with a linear factor defined over GF(p).
    ReducibleRational,
    /// Degree 3, irreducible over GF(p), but a product of three conjugate
    /// lines over GF(p³).
    ConjugateLines,
    /// Degree 3 and irreducible over the algebraic closure.
    AbsolutelyIrreducible,
    /// Degree at most 2.
    LowDegree,
}

impl std::fmt::Display for IrreducibilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IrreducibilityClass::ReducibleRational => "reducible-rational",
            IrreducibilityClass::ConjugateLines => "conjugate-lines",
            IrreducibilityClass::AbsolutelyIrreducible => "absolutely-irreducible",
            IrreducibilityClass::LowDegree => "low-degree",
        };
        f.write_str(s)
    }
}

/// Normalized coefficient vector of a nonzero curve of degree at most 3.
/// The first nonzero entry is scaled to 1, so equal vectors mean equal
/// curves and file output is bit-exact.
#[derive(Debug, Clone)]
pub struct CurveCoeffs {
    p: u64,
    c: [u64; 10],
    degree: u8,
    class: OnceLock<IrreducibilityClass>,
}

impl PartialEq for CurveCoeffs {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.c == other.c
    }
}

impl Eq for CurveCoeffs {}

impl std::hash::Hash for CurveCoeffs {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.c.hash(state);
    }
}

impl CurveCoeffs {
    pub fn new(coeffs: [u64; 10], m: PrimeModulus) -> Result<Self> {
        let mut c = coeffs.map(|v| m.reduce(v));
        let first = match c.iter().position(|&v| v != 0) {
            Some(i) => i,
            None => return Err(Error::ZeroCurve),
        };
        let inv = m.inv(c[first])?;
        for v in c.iter_mut() {
            *v = m.mul(*v, inv);
        }
        let degree = c
            .iter()
            .zip(MONOMIAL_DEGREES)
            .filter(|(&v, _)| v != 0)
            .map(|(_, d)| d)
            .max()
            .unwrap();
        Ok(CurveCoeffs {
            p: m.get(),
            c,
            degree,
            class: OnceLock::new(),
        })
    }

    pub fn prime(&self) -> PrimeModulus {
        PrimeModulus::new(self.p).expect("modulus validated at construction")
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[u64; 10] {
        &self.c
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Σ c_{i,j} x^i y^j at the point, exactly.
    pub fn evaluate(&self, q: AffinePoint) -> FpElement {
        assert_eq!(self.p, q.modulus(), "mismatched moduli");
        let mono = q.monomial_vector();
        let mut acc: u128 = 0;
        for i in 0..10 {
            acc += self.c[i] as u128 * mono[i] as u128;
        }
        FpElement::new((acc % self.p as u128) as u64, self.prime())
    }

    pub fn incident(&self, q: AffinePoint) -> bool {
        self.evaluate(q).is_zero()
    }

    /// All affine rational points, by full enumeration of the plane.
    /// Guarded: p must not exceed 2^16.
    pub fn rational_points(&self) -> Result<Vec<AffinePoint>> {
        if self.p > 1 << 16 {
            return Err(Error::GuardExceeded {
                what: "rational_points enumeration modulus",
                limit: 1 << 16,
                got: self.p,
            });
        }
        let m = self.prime();
        let mut out = Vec::new();
        for x in 0..self.p {
            // Collapse to a univariate in y for this column.
            let col = self.column_poly(x, m);
            for y in 0..self.p {
                let mut acc = 0u64;
                for &c in col.iter().rev() {
                    acc = m.add(m.mul(acc, y), c);
                }
                if acc == 0 {
                    out.push(AffinePoint::new(x, y, m));
                }
            }
        }
        Ok(out)
    }

    /// Coefficients of y ↦ f(x₀, y) for a fixed column x₀.
    pub(crate) fn column_poly(&self, x: u64, m: PrimeModulus) -> [u64; 4] {
        let x2 = m.mul(x, x);
        let x3 = m.mul(x2, x);
        let c = &self.c;
        [
            m.add(m.add(c[0], m.mul(c[1], x)), m.add(m.mul(c[3], x2), m.mul(c[6], x3))),
            m.add(c[2], m.add(m.mul(c[4], x), m.mul(c[7], x2))),
            m.add(c[5], m.mul(c[8], x)),
            c[9],
        ]
    }

    /// The points of the curve on the column x = x₀, found by univariate
    /// root extraction in y; usable at any modulus, unlike full enumeration.
    /// A curve containing the whole column (a vertical-line component)
    /// yields an empty result; callers that admit reducible curves must
    /// treat such columns separately.
    pub fn points_on_column(&self, x: u64) -> Vec<AffinePoint> {
        let m = self.prime();
        let x = m.reduce(x);
        let col = self.column_poly(x, m);
        let gf = GfP { m };
        let mut f = col.to_vec();
        crate::poly::trim(&mut f, &gf);
        if f.is_empty() {
            return Vec::new();
        }
        crate::poly::distinct_roots(&f, &gf)
            .into_iter()
            .map(|y| AffinePoint::new(x, y, m))
            .collect()
    }

    /// Classify the factorization behavior; cached after the first call.
    pub fn classify(&self) -> IrreducibilityClass {
        *self.class.get_or_init(|| {
            if self.degree < 3 {
                return IrreducibilityClass::LowDegree;
            }
            let m = self.prime();
            if linear_factor_in(&self.c, &GfP { m }).is_some() {
                return IrreducibilityClass::ReducibleRational;
            }
            let q = find_cubic_modulus(m);
            if linear_factor_in(&self.c, &GfP3 { q }).is_some() {
                IrreducibilityClass::ConjugateLines
            } else {
                IrreducibilityClass::AbsolutelyIrreducible
            }
        })
    }

    /// The translated curve f(x - a, y - b).
    pub fn translate(&self, a: u64, b: u64) -> CurveCoeffs {
        let m = self.prime();
        let na = m.neg(m.reduce(a));
        let nb = m.neg(m.reduce(b));
        // Binomial expansion of (x + na)^i (y + nb)^j per monomial.
        let binom = [[1u64, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 0], [1, 3, 3, 1]];
        let mut out = [0u64; 10];
        for (idx, &(i, j)) in MONOMIAL_ORDER.iter().enumerate() {
            if self.c[idx] == 0 {
                continue;
            }
            for (ii, &(ti, tj)) in MONOMIAL_ORDER.iter().enumerate() {
                if ti > i || tj > j {
                    continue;
                }
                let coef = m.mul(
                    m.mul(
                        m.reduce(binom[i as usize][ti as usize]),
                        m.pow(na, (i - ti) as u64),
                    ),
                    m.mul(
                        m.reduce(binom[j as usize][tj as usize]),
                        m.pow(nb, (j - tj) as u64),
                    ),
                );
                out[ii] = m.add(out[ii], m.mul(self.c[idx], coef));
            }
        }
        CurveCoeffs::new(out, m).expect("translate of a nonzero curve is nonzero")
    }

    /// The product curve a·b; the degrees must sum to at most 3.
    pub fn product(a: &CurveCoeffs, b: &CurveCoeffs) -> Result<CurveCoeffs> {
        if a.p != b.p {
            return Err(Error::invalid("mismatched moduli in curve product"));
        }
        if a.degree + b.degree > 3 {
            return Err(Error::invalid(
                "product degree exceeds 3; not representable as a cubic",
            ));
        }
        let m = a.prime();
        let mut out = [0u64; 10];
        for (ia, &(xi, yi)) in MONOMIAL_ORDER.iter().enumerate() {
            if a.c[ia] == 0 {
                continue;
            }
            for (ib, &(xj, yj)) in MONOMIAL_ORDER.iter().enumerate() {
                if b.c[ib] == 0 {
                    continue;
                }
                let (xs, ys) = (xi + xj, yi + yj);
                let slot = MONOMIAL_ORDER
                    .iter()
                    .position(|&(dx, dy)| dx == xs && dy == ys)
                    .expect("degree bound keeps products inside the monomial order");
                out[slot] = m.add(out[slot], m.mul(a.c[ia], b.c[ib]));
            }
        }
        CurveCoeffs::new(out, m)
    }
}

/// A linear factor of a cubic over the search field: either a vertical line
/// x = r or a slope line y = s·x + t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LinearFactor<E> {
    Vertical(E),
    Slope(E, E),
}

/// Search for an affine linear factor of the degree-3 curve `c` over the
/// field `fld` (the prime field or its cubic extension).
///
/// A linear factor of the homogenized cubic never equals the line at
/// infinity (the curve has degree exactly 3), so every factor dehomogenizes
/// to x - r or y - (s·x + t). Vertical candidates r are common roots of the
/// per-power conditions of f(r, y) ≡ 0; slope candidates start from the
/// roots s of the top-form restriction and solve the remaining coefficient
/// conditions in t. Candidates are scanned in canonical element order.
pub(crate) fn linear_factor_in<F: FiniteField>(
    c: &[u64; 10],
    fld: &F,
) -> Option<LinearFactor<F::Elem>> {
    let e: Vec<F::Elem> = c.iter().map(|&v| fld.from_base(v)).collect();
    let small = |k: u64| fld.from_base(k % fld.characteristic());

    // Vertical factors need the y³ coefficient to vanish.
    if c[9] == 0 {
        let p2 = trimmed(vec![e[5], e[8]], fld);
        let p1 = trimmed(vec![e[2], e[4], e[7]], fld);
        let p0 = trimmed(vec![e[0], e[1], e[3], e[6]], fld);
        let g = poly::gcd_monic(&poly::gcd_monic(&p2, &p1, fld), &p0, fld);
        if poly::degree(&g).map_or(false, |d| d >= 1) {
            if let Some(&r) = poly::distinct_roots(&g, fld).first() {
                return Some(LinearFactor::Vertical(r));
            }
        }
    }

    // Slope factors: s must kill the x³ coefficient of f(x, sx + t).
    let top = trimmed(vec![e[6], e[7], e[8], e[9]], fld);
    debug_assert!(!top.is_empty(), "degree-3 curve has a nonzero cubic form");
    for s in poly::distinct_roots(&top, fld) {
        let s2 = fld.mul(s, s);
        // Coefficient of x²: linear in t.
        let e2 = trimmed(
            vec![
                fld.add(e[3], fld.add(fld.mul(e[4], s), fld.mul(e[5], s2))),
                fld.add(
                    e[7],
                    fld.add(
                        fld.mul(fld.mul(small(2), e[8]), s),
                        fld.mul(fld.mul(small(3), e[9]), s2),
                    ),
                ),
            ],
            fld,
        );
        // Coefficient of x¹: quadratic in t.
        let e1 = trimmed(
            vec![
                fld.add(e[1], fld.mul(e[2], s)),
                fld.add(e[4], fld.mul(fld.mul(small(2), e[5]), s)),
                fld.add(e[8], fld.mul(fld.mul(small(3), e[9]), s)),
            ],
            fld,
        );
        // Coefficient of x⁰: cubic in t.
        let e0 = trimmed(vec![e[0], e[2], e[5], e[9]], fld);
        let g = poly::gcd_monic(&poly::gcd_monic(&e2, &e1, fld), &e0, fld);
        if poly::degree(&g).map_or(false, |d| d >= 1) {
            if let Some(&t) = poly::distinct_roots(&g, fld).first() {
                return Some(LinearFactor::Slope(s, t));
            }
        }
    }
    None
}

fn trimmed<F: FiniteField>(mut v: Vec<F::Elem>, fld: &F) -> Vec<F::Elem> {
    poly::trim(&mut v, fld);
    v
}

/// Rejection-sample uniform coefficient vectors until one normalizes to a
/// degree-3, absolutely irreducible curve. Deterministic for a fixed seed.
pub fn random_irreducible_cubic(seed: u64, m: PrimeModulus) -> CurveCoeffs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(curve) = sample_candidate(&mut rng, m) {
            if curve.degree() == 3
                && curve.classify() == IrreducibilityClass::AbsolutelyIrreducible
            {
                return curve;
            }
        }
    }
}

pub(crate) fn sample_candidate(rng: &mut impl Rng, m: PrimeModulus) -> Option<CurveCoeffs> {
    let p = m.get();
    let mut c = [0u64; 10];
    for v in c.iter_mut() {
        *v = rng.gen_range(0..p);
    }
    CurveCoeffs::new(c, m).ok()
}
