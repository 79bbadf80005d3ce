//! Brute-force reference implementations for differential testing: naive
//! incidence counting, full-plane curve intersection, exhaustive projective
//! linear-factor scans, and the pairwise intersection-cap campaign.
//!
//! Nothing here is called by the fast paths; these functions back the test
//! suites and the verify subcommands, and they refuse (rather than degrade)
//! outside their size guards.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::curves::{AffinePoint, CurveCoeffs, IrreducibilityClass, MONOMIAL_ORDER};
use crate::error::{Error, Result};
use crate::field::{find_cubic_modulus, FiniteField, GfP, GfP3, PrimeModulus};
use crate::incidence::{CurveSet, PointSet};
use crate::seeds::derive_seed;

/// Double loop over all pairs with per-pair evaluation; the reference for
/// the cached counting engine.
pub fn naive_count_incidences(points: &PointSet, curves: &CurveSet) -> Result<u64> {
    let p = points.modulus().get();
    let pairs = points.len() as u64 * curves.len() as u64;
    if p > 1 << 16 && pairs > 100_000_000 {
        return Err(Error::GuardExceeded {
            what: "naive incidence pair count at large modulus",
            limit: 100_000_000,
            got: pairs,
        });
    }
    let mut total = 0u64;
    for curve in curves.curves() {
        for &q in points.points() {
            if curve.evaluate(q).is_zero() {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// The two curves, their exact common rational points, and both
/// classifications.
#[derive(Debug, Clone)]
pub struct IntersectionRecord {
    pub curve_a: CurveCoeffs,
    pub curve_b: CurveCoeffs,
    pub points: Vec<AffinePoint>,
    pub class_a: IrreducibilityClass,
    pub class_b: IrreducibilityClass,
}

/// Common rational points of two distinct curves by full-plane enumeration.
pub fn intersect_curves(a: &CurveCoeffs, b: &CurveCoeffs) -> Result<IntersectionRecord> {
    if a == b {
        return Err(Error::invalid(
            "intersection record is defined for distinct curves",
        ));
    }
    if a.modulus() != b.modulus() {
        return Err(Error::invalid("mismatched moduli in curve intersection"));
    }
    let points = a
        .rational_points()?
        .into_iter()
        .filter(|&q| b.incident(q))
        .collect();
    Ok(IntersectionRecord {
        class_a: a.classify(),
        class_b: b.classify(),
        curve_a: a.clone(),
        curve_b: b.clone(),
        points,
    })
}

/// Which field the exhaustive factor scan runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionChoice {
    Base,
    Cubic,
}

/// A projective linear form found by the exhaustive scan, over the field it
/// was searched in; coordinates follow (X, Y, Z) with first nonzero 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearFormFactor {
    Base([u64; 3]),
    Cubic([[u64; 3]; 3]),
}

/// Scan every normalized projective linear form over the requested field for
/// divisibility of the homogenization, in a fixed lexicographic order, and
/// return the first factor found.
pub fn exhaustive_linear_factor_search(
    curve: &CurveCoeffs,
    ext: ExtensionChoice,
) -> Result<Option<LinearFormFactor>> {
    if curve.degree() != 3 {
        return Err(Error::invalid(
            "exhaustive factor search is defined for degree-3 curves",
        ));
    }
    let p = curve.modulus();
    let m = curve.prime();
    match ext {
        ExtensionChoice::Base => {
            if p > 1 << 16 {
                return Err(Error::GuardExceeded {
                    what: "exhaustive base-field factor scan modulus",
                    limit: 1 << 16,
                    got: p,
                });
            }
            let fld = GfP { m };
            Ok(scan_forms(curve.coefficients(), &fld).map(LinearFormFactor::Base))
        }
        ExtensionChoice::Cubic => {
            if p > 1 << 10 {
                return Err(Error::GuardExceeded {
                    what: "exhaustive extension-field factor scan modulus",
                    limit: 1 << 10,
                    got: p,
                });
            }
            let fld = GfP3 {
                q: find_cubic_modulus(m),
            };
            Ok(scan_forms(curve.coefficients(), &fld).map(LinearFormFactor::Cubic))
        }
    }
}

/// Enumerate normalized forms (1:b:c), (0:1:c), (0:0:1) in element order and
/// test divisibility by restricting the homogenized cubic to the line.
fn scan_forms<F: FiniteField>(c: &[u64; 10], fld: &F) -> Option<[F::Elem; 3]> {
    let e: Vec<F::Elem> = c.iter().map(|&v| fld.from_base(v)).collect();
    let order = fld
        .order_if_at_most(u64::MAX)
        .expect("guarded field order fits u64");
    let one = fld.one();
    let zero = fld.zero();
    for bi in 0..order {
        let b = fld.nth_elem(bi);
        for ci in 0..order {
            let cc = fld.nth_elem(ci);
            let form = [one, b, cc];
            if divides_on_line(&e, form, fld) {
                return Some(form);
            }
        }
    }
    for ci in 0..order {
        let cc = fld.nth_elem(ci);
        let form = [zero, one, cc];
        if divides_on_line(&e, form, fld) {
            return Some(form);
        }
    }
    let form = [zero, zero, one];
    if divides_on_line(&e, form, fld) {
        return Some(form);
    }
    None
}

/// aX + bY + cZ divides the homogenization iff the cubic vanishes
/// identically on the line, i.e. the symbolic restriction to a spanning
/// pair of points is the zero binary form.
fn divides_on_line<F: FiniteField>(e: &[F::Elem], form: [F::Elem; 3], fld: &F) -> bool {
    let (u, v) = span_of_line(form, fld);
    // Early exit: u is on the line; if the cubic does not vanish there the
    // restriction cannot be zero.
    if !fld.is_zero(eval_cubic_form(e, u, fld)) {
        return false;
    }
    restrict_to_line(e, u, v, fld).iter().all(|&x| fld.is_zero(x))
}

/// Two independent points spanning {aX + bY + cZ = 0} for a normalized form.
fn span_of_line<F: FiniteField>(form: [F::Elem; 3], fld: &F) -> ([F::Elem; 3], [F::Elem; 3]) {
    let one = fld.one();
    let zero = fld.zero();
    if !fld.is_zero(form[0]) {
        (
            [fld.neg(form[1]), one, zero],
            [fld.neg(form[2]), zero, one],
        )
    } else if !fld.is_zero(form[1]) {
        ([one, zero, zero], [zero, fld.neg(form[2]), one])
    } else {
        ([one, zero, zero], [zero, one, zero])
    }
}

fn eval_cubic_form<F: FiniteField>(e: &[F::Elem], pt: [F::Elem; 3], fld: &F) -> F::Elem {
    let mut acc = fld.zero();
    for (idx, &(i, j)) in MONOMIAL_ORDER.iter().enumerate() {
        let k = 3 - i - j;
        let mut term = e[idx];
        for _ in 0..i {
            term = fld.mul(term, pt[0]);
        }
        for _ in 0..j {
            term = fld.mul(term, pt[1]);
        }
        for _ in 0..k {
            term = fld.mul(term, pt[2]);
        }
        acc = fld.add(acc, term);
    }
    acc
}

/// Coefficients of H(s·u + t·v) as a binary cubic b₀s³ + b₁s²t + b₂st² + b₃t³.
fn restrict_to_line<F: FiniteField>(
    e: &[F::Elem],
    u: [F::Elem; 3],
    v: [F::Elem; 3],
    fld: &F,
) -> [F::Elem; 4] {
    let mut out = [fld.zero(); 4];
    for (idx, &(i, j)) in MONOMIAL_ORDER.iter().enumerate() {
        if fld.is_zero(e[idx]) {
            continue;
        }
        let k = 3 - i - j;
        // Product of linear binary forms (u_c s + v_c t) per coordinate power.
        let mut form = vec![e[idx]];
        for (c, reps) in [(0usize, i), (1, j), (2, k)] {
            for _ in 0..reps {
                form = mul_binary(&form, &[u[c], v[c]], fld);
            }
        }
        debug_assert_eq!(form.len(), 4);
        for (slot, &coeff) in out.iter_mut().zip(form.iter()) {
            *slot = fld.add(*slot, coeff);
        }
    }
    out
}

/// Multiply homogeneous binary forms given as coefficient lists in t-degree.
fn mul_binary<F: FiniteField>(a: &[F::Elem], b: &[F::Elem], fld: &F) -> Vec<F::Elem> {
    let mut out = vec![fld.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fld.add(out[i + j], fld.mul(x, y));
        }
    }
    out
}

/// One sampled pair in the intersection-cap campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    CubicCubic,
    LineCubic,
    ConicCubic,
}

impl PairKind {
    pub fn cap(self) -> usize {
        match self {
            PairKind::CubicCubic => 9,
            PairKind::LineCubic => 3,
            PairKind::ConicCubic => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairKind::CubicCubic => "cubic-cubic",
            PairKind::LineCubic => "line-cubic",
            PairKind::ConicCubic => "conic-cubic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BezoutRow {
    pub trial: u64,
    pub kind: PairKind,
    pub intersection_size: usize,
    pub cap: usize,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct BezoutSummary {
    pub p: u64,
    pub trials_per_kind: u64,
    pub max_observed: [usize; 3],
    pub rows: Vec<BezoutRow>,
    pub violations: Vec<String>,
}

/// Sample random (cubic, cubic), (line, cubic), (conic, cubic) pairs and
/// check the rational intersection caps 9/3/6 by enumeration.
pub fn bezout_campaign(m: PrimeModulus, trials: u64, seed: u64) -> Result<BezoutSummary> {
    let p = m.get();
    if p > 31 {
        return Err(Error::GuardExceeded {
            what: "intersection-cap campaign modulus",
            limit: 31,
            got: p,
        });
    }
    let kinds = [PairKind::CubicCubic, PairKind::LineCubic, PairKind::ConicCubic];
    let mut rows = Vec::with_capacity((trials as usize) * 3);
    let mut violations = Vec::new();
    let mut max_observed = [0usize; 3];
    let mut counter = 0u64;
    for (ki, &kind) in kinds.iter().enumerate() {
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, counter));
            counter += 1;
            let cubic = crate::curves::random_irreducible_cubic(derive_seed(seed, counter), m);
            counter += 1;
            let other = match kind {
                PairKind::CubicCubic => loop {
                    let c =
                        crate::curves::random_irreducible_cubic(derive_seed(seed, counter), m);
                    counter += 1;
                    if c != cubic {
                        break c;
                    }
                },
                PairKind::LineCubic => random_line(&mut rng, m),
                PairKind::ConicCubic => random_conic(&mut rng, m),
            };
            let record = intersect_curves(&other, &cubic)?;
            let size = record.points.len();
            let cap = kind.cap();
            let ok = size <= cap;
            if !ok {
                violations.push(format!(
                    "p={} {} trial {} intersected in {} > {} points",
                    p,
                    kind.name(),
                    trial,
                    size,
                    cap
                ));
            }
            max_observed[ki] = max_observed[ki].max(size);
            rows.push(BezoutRow {
                trial,
                kind,
                intersection_size: size,
                cap,
                ok,
            });
        }
    }
    Ok(BezoutSummary {
        p,
        trials_per_kind: trials,
        max_observed,
        rows,
        violations,
    })
}

/// A uniformly random curve of degree exactly 1.
pub fn random_line(rng: &mut impl Rng, m: PrimeModulus) -> CurveCoeffs {
    let p = m.get();
    loop {
        let mut c = [0u64; 10];
        c[0] = rng.gen_range(0..p);
        c[1] = rng.gen_range(0..p);
        c[2] = rng.gen_range(0..p);
        if c[1] != 0 || c[2] != 0 {
            return CurveCoeffs::new(c, m).expect("nonzero linear part");
        }
    }
}

/// A uniformly random curve of degree exactly 2.
pub fn random_conic(rng: &mut impl Rng, m: PrimeModulus) -> CurveCoeffs {
    let p = m.get();
    loop {
        let mut c = [0u64; 10];
        for slot in c.iter_mut().take(6) {
            *slot = rng.gen_range(0..p);
        }
        if c[3] != 0 || c[4] != 0 || c[5] != 0 {
            return CurveCoeffs::new(c, m).expect("nonzero quadratic part");
        }
    }
}
