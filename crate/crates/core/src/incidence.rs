//! Exact incidence counting between point sets and curve sets, richness
//! classification, and rich-point counting in the dual plane.
//!
//! The counting core precomputes each point's 10 monomials once, so every
//! (point, curve) test is a branch-free 10-term dot product with a single
//! reduction. Work is partitioned over curves, which keeps per-curve counts
//! whole within one worker and makes totals independent of thread count.

use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::curves::{AffinePoint, CurveCoeffs, IrreducibilityClass};
use crate::dual::{dot10, DualLine};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;

/// A deduplicated point set with cached monomial vectors.
#[derive(Debug, Clone)]
pub struct PointSet {
    m: PrimeModulus,
    points: Vec<AffinePoint>,
    monomials: Vec<[u64; 10]>,
}

impl PointSet {
    /// Duplicates are rejected rather than merged so reported cardinalities
    /// stay unambiguous.
    pub fn new(points: Vec<AffinePoint>, m: PrimeModulus) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for q in &points {
            if q.modulus() != m.get() {
                return Err(Error::invalid("point with mismatched modulus"));
            }
            if !seen.insert((q.x.value(), q.y.value())) {
                return Err(Error::DuplicatePoint(q.x.value(), q.y.value()));
            }
        }
        let monomials = points.iter().map(|q| q.monomial_vector()).collect();
        Ok(PointSet { m, points, monomials })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.m
    }

    pub fn contains(&self, q: &AffinePoint) -> bool {
        self.points.contains(q)
    }

    pub(crate) fn monomials(&self) -> &[[u64; 10]] {
        &self.monomials
    }
}

/// A deduplicated curve set; the flag records whether every member is a
/// degree-3 absolutely irreducible curve.
#[derive(Debug, Clone)]
pub struct CurveSet {
    m: PrimeModulus,
    curves: Vec<CurveCoeffs>,
    all_irreducible_cubics: bool,
}

impl CurveSet {
    pub fn new(curves: Vec<CurveCoeffs>, m: PrimeModulus) -> Result<Self> {
        let mut seen = HashSet::with_capacity(curves.len());
        for (i, c) in curves.iter().enumerate() {
            if c.modulus() != m.get() {
                return Err(Error::invalid("curve with mismatched modulus"));
            }
            if !seen.insert(*c.coefficients()) {
                return Err(Error::DuplicateCurve(i));
            }
        }
        let all = curves
            .par_iter()
            .all(|c| c.degree() == 3 && c.classify() == IrreducibilityClass::AbsolutelyIrreducible);
        Ok(CurveSet {
            m,
            curves,
            all_irreducible_cubics: all,
        })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[CurveCoeffs] {
        &self.curves
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.m
    }

    pub fn all_irreducible_cubics(&self) -> bool {
        self.all_irreducible_cubics
    }
}

fn check_same_instance(points: &PointSet, curves: &CurveSet) {
    assert_eq!(
        points.m.get(),
        curves.m.get(),
        "mismatched moduli between point set and curve set"
    );
}

/// |{(q, γ) : q ∈ γ}|, exactly.
pub fn count_incidences(points: &PointSet, curves: &CurveSet) -> u64 {
    check_same_instance(points, curves);
    let p = points.m.get();
    curves
        .curves
        .par_iter()
        .map(|curve| {
            let c = curve.coefficients();
            points
                .monomials()
                .iter()
                .filter(|mono| dot10(c, mono, p) == 0)
                .count() as u64
        })
        .sum()
}

/// |γ ∩ P| per curve, in curve-set order.
pub fn incidence_counts_per_curve(points: &PointSet, curves: &CurveSet) -> Vec<u64> {
    check_same_instance(points, curves);
    let p = points.m.get();
    curves
        .curves
        .par_iter()
        .map(|curve| {
            let c = curve.coefficients();
            points
                .monomials()
                .iter()
                .filter(|mono| dot10(c, mono, p) == 0)
                .count() as u64
        })
        .collect()
}

/// The curves whose point count lies in the dyadic window [k, 2k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RichnessClass {
    pub k: u64,
    /// Indices into the curve set.
    pub members: Vec<usize>,
    /// Exact |γ ∩ P| per member, aligned with `members`.
    pub counts: Vec<u64>,
}

pub fn rich_curves(points: &PointSet, curves: &CurveSet, k: u64) -> Result<RichnessClass> {
    if k < 1 {
        return Err(Error::invalid("richness parameter k must be at least 1"));
    }
    let all = incidence_counts_per_curve(points, curves);
    let mut members = Vec::new();
    let mut counts = Vec::new();
    for (i, &n) in all.iter().enumerate() {
        if n >= k && n < 2 * k {
            members.push(i);
            counts.push(n);
        }
    }
    Ok(RichnessClass { k, members, counts })
}

/// Indices of curves with exactly k points of P.
pub fn exactly_rich_curves(points: &PointSet, curves: &CurveSet, k: u64) -> Vec<usize> {
    incidence_counts_per_curve(points, curves)
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == k)
        .map(|(i, _)| i)
        .collect()
}

/// Members of the richness class passing through all seven points of S.
pub fn rich_curves_through(
    points: &PointSet,
    curves: &CurveSet,
    class: &RichnessClass,
    s: &[AffinePoint],
) -> Result<Vec<usize>> {
    if s.len() != 7 {
        return Err(Error::invalid(format!(
            "subset S must have exactly 7 points, got {}",
            s.len()
        )));
    }
    let mut distinct = BTreeSet::new();
    for q in s {
        if !distinct.insert((q.x.value(), q.y.value())) {
            return Err(Error::DuplicatePoint(q.x.value(), q.y.value()));
        }
        if !points.contains(q) {
            return Err(Error::invalid(format!(
                "subset point ({}, {}) is not in P",
                q.x.value(),
                q.y.value()
            )));
        }
    }
    Ok(class
        .members
        .iter()
        .copied()
        .filter(|&i| s.iter().all(|&q| curves.curves[i].incident(q)))
        .collect())
}

/// Number of points of the dual projective plane lying on at least `t`
/// distinct lines. Input lines are deduplicated by covector; each distinct
/// source point contributed one line instance before deduplication.
///
/// Candidates are the pairwise intersections of distinct lines, which is
/// complete for t ≥ 2 without enumerating the plane.
pub fn rich_dual_points(lines: &[DualLine], t: u64) -> Result<u64> {
    if t < 2 {
        return Err(Error::invalid("dual richness threshold t must be at least 2"));
    }
    if lines.is_empty() {
        return Ok(0);
    }
    let p = lines[0].modulus();
    let m = PrimeModulus::new(p).expect("validated modulus");
    let distinct: Vec<[u64; 3]> = lines
        .iter()
        .map(|l| {
            assert_eq!(l.modulus(), p, "mismatched moduli among dual lines");
            l.covector()
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut candidates = BTreeSet::new();
    for (i, a) in distinct.iter().enumerate() {
        for b in &distinct[i + 1..] {
            let cross = [
                m.sub(m.mul(a[1], b[2]), m.mul(a[2], b[1])),
                m.sub(m.mul(a[2], b[0]), m.mul(a[0], b[2])),
                m.sub(m.mul(a[0], b[1]), m.mul(a[1], b[0])),
            ];
            debug_assert_ne!(cross, [0, 0, 0], "distinct normalized covectors span");
            candidates.insert(normalize3(cross, m));
        }
    }
    let mut rich = 0u64;
    for cand in candidates {
        let on = distinct
            .iter()
            .filter(|l| {
                let mut acc = 0u64;
                for i in 0..3 {
                    acc = m.add(acc, m.mul(l[i], cand[i]));
                }
                acc == 0
            })
            .count() as u64;
        if on >= t {
            rich += 1;
        }
    }
    Ok(rich)
}

pub(crate) fn normalize3(mut v: [u64; 3], m: PrimeModulus) -> [u64; 3] {
    let first = v.iter().position(|&x| x != 0).expect("nonzero vector");
    let inv = m.inv(v[first]).expect("nonzero entry");
    for x in v.iter_mut() {
        *x = m.mul(*x, inv);
    }
    v
}

/// Exact richness histogram: point count per curve mapped to multiplicity.
pub fn richness_histogram(points: &PointSet, curves: &CurveSet) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    for n in incidence_counts_per_curve(points, curves) {
        *hist.entry(n).or_insert(0) += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::random_irreducible_cubic;
    use crate::dual::{flat_of, psi, FlatResult, PsiResult};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn graph_cubic(p: u64) -> CurveCoeffs {
        let pm = m(p);
        let mut c = [0u64; 10];
        c[2] = 1;
        c[6] = pm.neg(1);
        CurveCoeffs::new(c, pm).unwrap()
    }

    fn full_plane(p: u64) -> PointSet {
        let pm = m(p);
        let pts = (0..p * p)
            .map(|i| AffinePoint::new(i / p, i % p, pm))
            .collect();
        PointSet::new(pts, pm).unwrap()
    }

    #[test]
    fn count_examples() {
        let f3 = m(3);
        let empty_points = PointSet::new(vec![], f3).unwrap();
        let one_curve = CurveSet::new(vec![graph_cubic(3)], f3).unwrap();
        assert_eq!(count_incidences(&empty_points, &one_curve), 0);
        let empty_curves = CurveSet::new(vec![], f3).unwrap();
        assert_eq!(count_incidences(&full_plane(3), &empty_curves), 0);

        assert_eq!(count_incidences(&full_plane(3), &one_curve), 3);

        let f5 = m(5);
        let two = CurveSet::new(
            vec![graph_cubic(5), {
                // x - y³
                let mut c = [0u64; 10];
                c[1] = 1;
                c[9] = f5.neg(1);
                CurveCoeffs::new(c, f5).unwrap()
            }],
            f5,
        )
        .unwrap();
        assert_eq!(count_incidences(&full_plane(5), &two), 10);
    }

    #[test]
    fn per_curve_examples() {
        let f5 = m(5);
        let one = CurveSet::new(vec![graph_cubic(5)], f5).unwrap();
        assert_eq!(incidence_counts_per_curve(&full_plane(5), &one), vec![5]);

        let empty_points = PointSet::new(vec![], f5).unwrap();
        let mut curves = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        while curves.len() < 6 {
            let c = random_irreducible_cubic(rng.gen(), f5);
            if !curves.contains(&c) {
                curves.push(c);
            }
        }
        let cs = CurveSet::new(curves, f5).unwrap();
        assert_eq!(incidence_counts_per_curve(&empty_points, &cs), vec![0; 6]);
    }

    #[test]
    fn per_curve_sums_match_total_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for trial in 0..100 {
            let p = [3u64, 5, 7, 11, 13][trial % 5];
            let pm = m(p);
            let n_pts = rng.gen_range(0..(p * p).min(40)) as usize;
            let mut pts = Vec::new();
            while pts.len() < n_pts {
                let q = AffinePoint::new(rng.gen_range(0..p), rng.gen_range(0..p), pm);
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
            let points = PointSet::new(pts, pm).unwrap();
            let mut curves = Vec::new();
            for _ in 0..rng.gen_range(1..10) {
                let c = random_irreducible_cubic(rng.gen(), pm);
                if !curves.contains(&c) {
                    curves.push(c);
                }
            }
            let cs = CurveSet::new(curves, pm).unwrap();
            let per = incidence_counts_per_curve(&points, &cs);
            assert_eq!(per.iter().sum::<u64>(), count_incidences(&points, &cs));
        }
    }

    #[test]
    fn duplicate_rejection() {
        let f5 = m(5);
        assert!(matches!(
            PointSet::new(
                vec![AffinePoint::new(1, 2, f5), AffinePoint::new(1, 2, f5)],
                f5
            ),
            Err(Error::DuplicatePoint(1, 2))
        ));
        let c = graph_cubic(5);
        assert!(matches!(
            CurveSet::new(vec![c.clone(), c], f5),
            Err(Error::DuplicateCurve(1))
        ));
    }

    #[test]
    fn richness_boundaries() {
        let f5 = m(5);
        let one = CurveSet::new(vec![graph_cubic(5)], f5).unwrap();
        let plane = full_plane(5);
        // |γ ∩ P| = 5: member for k = 4 (4 ≤ 5 < 8) and k = 5, not k = 6.
        assert_eq!(rich_curves(&plane, &one, 4).unwrap().members, vec![0]);
        assert_eq!(rich_curves(&plane, &one, 5).unwrap().members, vec![0]);
        assert!(rich_curves(&plane, &one, 6).unwrap().members.is_empty());
        assert!(rich_curves(&plane, &one, 100).unwrap().members.is_empty());
        assert!(rich_curves(&plane, &one, 0).is_err());
    }

    #[test]
    fn exactly_rich_partitions() {
        let f5 = m(5);
        let pm = f5;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut curves = Vec::new();
        while curves.len() < 8 {
            let c = random_irreducible_cubic(rng.gen(), pm);
            if !curves.contains(&c) {
                curves.push(c);
            }
        }
        let cs = CurveSet::new(curves, pm).unwrap();
        let plane = full_plane(5);
        let mut total_curves = 0usize;
        let mut weighted = 0u64;
        for k in 0..=25u64 {
            let exact = exactly_rich_curves(&plane, &cs, k);
            total_curves += exact.len();
            weighted += k * exact.len() as u64;
        }
        assert_eq!(total_curves, cs.len(), "classes partition C");
        assert_eq!(weighted, count_incidences(&plane, &cs));

        let empty = PointSet::new(vec![], pm).unwrap();
        assert_eq!(exactly_rich_curves(&empty, &cs, 0).len(), cs.len());

        let one = CurveSet::new(vec![graph_cubic(5)], f5).unwrap();
        assert_eq!(exactly_rich_curves(&plane, &one, 5), vec![0]);
    }

    #[test]
    fn rich_curves_through_contract() {
        let f13 = m(13);
        let curve = graph_cubic(13);
        let plane = full_plane(13);
        let class = rich_curves(&plane, &CurveSet::new(vec![curve.clone()], f13).unwrap(), 13)
            .unwrap();
        assert_eq!(class.members, vec![0]);
        // Seven points on the curve: the class member passes through them.
        let s: Vec<AffinePoint> = (0..7u64)
            .map(|x| AffinePoint::new(x, f13.pow(x, 3), f13))
            .collect();
        let through = rich_curves_through(
            &plane,
            &CurveSet::new(vec![curve.clone()], f13).unwrap(),
            &class,
            &s,
        )
        .unwrap();
        assert_eq!(through, vec![0]);
        for &i in &through {
            for &q in &s {
                assert!(
                    CurveSet::new(vec![curve.clone()], f13).unwrap().curves()[i].incident(q)
                );
            }
        }
        // A subset containing an off-curve point selects nothing.
        let mut s_off = s.clone();
        s_off[6] = AffinePoint::new(1, 2, f13);
        assert_eq!(s_off[6].y.value(), 2);
        let through = rich_curves_through(
            &plane,
            &CurveSet::new(vec![curve], f13).unwrap(),
            &class,
            &s_off,
        )
        .unwrap();
        assert!(through.is_empty());
    }

    #[test]
    fn subset_counting_identity_small_instance() {
        // Σ_S |C_{k,S}| over all 7-subsets equals Σ_γ C(|γ ∩ P|, 7) over the
        // k-rich curves: exhaustive check on a 12-point instance.
        let f13 = m(13);
        let curve = graph_cubic(13);
        let pts: Vec<AffinePoint> = (0..12u64)
            .map(|x| AffinePoint::new(x, f13.pow(x, 3), f13))
            .collect();
        let points = PointSet::new(pts.clone(), f13).unwrap();
        let mut curves = vec![curve];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        while curves.len() < 4 {
            let c = random_irreducible_cubic(rng.gen(), f13);
            if !curves.contains(&c) {
                curves.push(c);
            }
        }
        let cs = CurveSet::new(curves, f13).unwrap();
        let k = 11;
        let class = rich_curves(&points, &cs, k).unwrap();

        let mut sum_over_s = 0u64;
        let mut idx = [0usize; 7];
        for i in 0..7 {
            idx[i] = i;
        }
        loop {
            let s: Vec<AffinePoint> = idx.iter().map(|&i| pts[i]).collect();
            sum_over_s += rich_curves_through(&points, &cs, &class, &s).unwrap().len() as u64;
            // next combination
            let mut i = 6isize;
            while i >= 0 && idx[i as usize] == 12 - 7 + i as usize {
                i -= 1;
            }
            if i < 0 {
                break;
            }
            idx[i as usize] += 1;
            for j in (i as usize + 1)..7 {
                idx[j] = idx[j - 1] + 1;
            }
        }
        let binom7 = |n: u64| -> u64 {
            if n < 7 {
                0
            } else {
                (n - 6..=n).product::<u64>() / 5040
            }
        };
        let expected: u64 = class.counts.iter().map(|&n| binom7(n)).sum();
        assert_eq!(sum_over_s, expected);
        assert!(expected >= binom7(k) * class.members.len() as u64);
    }

    #[test]
    fn rich_dual_points_examples() {
        // Three concurrent lines vs three in general position, built from a
        // real flat so the DualLine type is exercised end to end.
        let f11 = m(11);
        let points = vec![
            AffinePoint::new(0, 1, f11),
            AffinePoint::new(1, 4, f11),
            AffinePoint::new(2, 9, f11),
            AffinePoint::new(3, 5, f11),
            AffinePoint::new(5, 2, f11),
            AffinePoint::new(7, 8, f11),
            AffinePoint::new(10, 6, f11),
        ];
        let FlatResult::Flat(flat) = flat_of(&points).unwrap() else {
            panic!("expected a flat");
        };
        let mut lines = Vec::new();
        for x in 0..11u64 {
            for y in 0..11u64 {
                let q = AffinePoint::new(x, y, f11);
                if points.contains(&q) {
                    continue;
                }
                if let PsiResult::Line(l) = psi(q, &flat).unwrap() {
                    lines.push(l);
                }
            }
        }
        assert!(lines.len() > 20);

        // Concurrent triple: three lines through the dual point of a curve
        // of the flat.
        let curve = flat.curve_at([1, 0, 0]).unwrap();
        let dp = crate::dual::phi(&curve);
        let mut through: Vec<DualLine> = Vec::new();
        let mut seen = BTreeSet::new();
        for l in &lines {
            if crate::dual::dual_incidence(&dp, l, &flat).unwrap() && seen.insert(l.covector()) {
                through.push(*l);
                if through.len() == 3 {
                    break;
                }
            }
        }
        assert_eq!(through.len(), 3);
        assert_eq!(rich_dual_points(&through, 3).unwrap(), 1);

        assert!(rich_dual_points(&lines, 1).is_err());
    }

    #[test]
    fn rich_dual_points_matches_plane_enumeration() {
        // Differential check against direct enumeration of the projective
        // plane over a small field.
        let f7 = m(7);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let flat = loop {
            let mut points = Vec::new();
            while points.len() < 7 {
                let q = AffinePoint::new(rng.gen_range(0..7), rng.gen_range(0..7), f7);
                if !points.contains(&q) {
                    points.push(q);
                }
            }
            if let FlatResult::Flat(flat) = flat_of(&points).unwrap() {
                break flat;
            }
        };
        let points = flat.defining_points().to_vec();
        let mut lines = Vec::new();
        for x in 0..7u64 {
            for y in 0..7u64 {
                let q = AffinePoint::new(x, y, f7);
                if points.contains(&q) {
                    continue;
                }
                if let PsiResult::Line(l) = psi(q, &flat).unwrap() {
                    lines.push(l);
                }
            }
        }
        // All projective points of PG(2, 7): (1, b, c), (0, 1, c), (0, 0, 1).
        let mut plane = Vec::new();
        for b in 0..7u64 {
            for c in 0..7u64 {
                plane.push([1, b, c]);
            }
        }
        for c in 0..7u64 {
            plane.push([0, 1, c]);
        }
        plane.push([0, 0, 1]);

        let distinct: BTreeSet<[u64; 3]> = lines.iter().map(|l| l.covector()).collect();
        for t in 2..=5u64 {
            let expected = plane
                .iter()
                .filter(|pt| {
                    distinct
                        .iter()
                        .filter(|l| {
                            let mut acc = 0u64;
                            for i in 0..3 {
                                acc = f7.add(acc, f7.mul(l[i], pt[i]));
                            }
                            acc == 0
                        })
                        .count() as u64
                        >= t
                })
                .count() as u64;
            assert_eq!(rich_dual_points(&lines, t).unwrap(), expected, "t = {t}");
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let f13 = m(13);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut pts = Vec::new();
        while pts.len() < 60 {
            let q = AffinePoint::new(rng.gen_range(0..13), rng.gen_range(0..13), f13);
            if !pts.contains(&q) {
                pts.push(q);
            }
        }
        let points = PointSet::new(pts, f13).unwrap();
        let mut curves = Vec::new();
        while curves.len() < 40 {
            let c = random_irreducible_cubic(rng.gen(), f13);
            if !curves.contains(&c) {
                curves.push(c);
            }
        }
        let cs = CurveSet::new(curves, f13).unwrap();
        let mut answers = Vec::new();
        for threads in [1usize, 2, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let (total, per) =
                pool.install(|| (count_incidences(&points, &cs), incidence_counts_per_curve(&points, &cs)));
            answers.push((total, per));
        }
        assert_eq!(answers[0], answers[1]);
        assert_eq!(answers[1], answers[2]);
    }

    #[test]
    fn pairwise_intersection_cap_for_irreducible_sets() {
        // Distinct absolutely irreducible cubics share at most 9 points of
        // the full plane for several small p.
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        for p in [7u64, 11, 13] {
            let pm = m(p);
            let mut curves = Vec::new();
            while curves.len() < 12 {
                let c = random_irreducible_cubic(rng.gen(), pm);
                if !curves.contains(&c) {
                    curves.push(c);
                }
            }
            let cs = CurveSet::new(curves, pm).unwrap();
            assert!(cs.all_irreducible_cubics());
            let plane = full_plane(p);
            let per_curve_points: Vec<BTreeSet<(u64, u64)>> = cs
                .curves()
                .iter()
                .map(|c| {
                    plane
                        .points()
                        .iter()
                        .filter(|&&q| c.incident(q))
                        .map(|q| (q.x.value(), q.y.value()))
                        .collect()
                })
                .collect();
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    let shared = per_curve_points[i]
                        .intersection(&per_curve_points[j])
                        .count();
                    assert!(shared <= 9, "p={p}: curves {i},{j} share {shared} points");
                }
            }
        }
    }
}
