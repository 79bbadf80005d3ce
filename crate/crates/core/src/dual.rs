//! Coefficient-space duality: the embedding of curves into the
//! 9-dimensional projective space of coefficient vectors, the hyperplane a
//! point imposes there, intersections of those hyperplanes (rank and
//! canonical nullspace), the 2-flat of a 7-point set, and the induced line
//! map on the flat.
//!
//! All elimination is exact over GF(p) with leftmost-pivot, first-nonzero-row
//! selection, and every basis is reduced row echelon form, so flats and dual
//! lines are canonical values comparable by equality.

use crate::curves::{AffinePoint, CurveCoeffs};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;

/// A curve seen as a point of the projective coefficient space; the
/// representative is the normalized coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualPoint {
    v: [u64; 10],
    p: u64,
}

impl DualPoint {
    pub fn coords(&self) -> &[u64; 10] {
        &self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

/// The coefficient embedding: a curve maps to its normalized coefficient
/// vector. Scaling-invariant because construction normalizes.
pub fn phi(curve: &CurveCoeffs) -> DualPoint {
    DualPoint {
        v: *curve.coefficients(),
        p: curve.modulus(),
    }
}

/// The linear condition a point imposes on coefficient vectors: covector of
/// monomial values. Its constant slot is 1, so it is already normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    cov: [u64; 10],
    p: u64,
}

impl Hyperplane {
    pub fn covector(&self) -> &[u64; 10] {
        &self.cov
    }

    /// Apply the covector to a coefficient vector.
    pub fn pair(&self, v: &[u64; 10]) -> u64 {
        dot10(&self.cov, v, self.p)
    }
}

pub fn hyperplane_of_point(q: AffinePoint) -> Hyperplane {
    Hyperplane {
        cov: q.monomial_vector(),
        p: q.modulus(),
    }
}

#[inline]
pub(crate) fn dot10(a: &[u64; 10], b: &[u64; 10], p: u64) -> u64 {
    let mut acc: u128 = 0;
    for i in 0..10 {
        acc += a[i] as u128 * b[i] as u128;
    }
    (acc % p as u128) as u64
}

/// Reduced row echelon form in place. Pivot selection: leftmost column,
/// first nonzero row. Returns the pivot columns; zero rows are dropped.
pub(crate) fn rref(rows: &mut Vec<[u64; 10]>, m: PrimeModulus) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..10 {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = m.inv(rows[r][col]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = m.mul(*v, inv);
        }
        let pivot_row = rows[r];
        for (j, row) in rows.iter_mut().enumerate() {
            if j != r && row[col] != 0 {
                let f = row[col];
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v = m.sub(*v, m.mul(f, *pv));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Canonical basis of the right nullspace of the rows: build one vector per
/// free column, then normalize the set to reduced echelon form (the unique
/// canonical basis of the subspace).
pub(crate) fn nullspace(rows: &[[u64; 10]], m: PrimeModulus) -> Vec<[u64; 10]> {
    let mut mat = rows.to_vec();
    let pivots = rref(&mut mat, m);
    let free: Vec<usize> = (0..10).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = [0u64; 10];
        v[fc] = 1 % m.get();
        for (row, &pc) in mat.iter().zip(pivots.iter()) {
            v[pc] = m.neg(row[fc]);
        }
        basis.push(v);
    }
    rref(&mut basis, m);
    basis
}

/// Exact rank of the hyperplane system of a point set, plus the canonical
/// echelon basis of its solution space.
pub fn intersect_hyperplanes(points: &[AffinePoint]) -> Result<(usize, Vec<[u64; 10]>)> {
    if points.is_empty() || points.len() > 10 {
        return Err(Error::invalid(format!(
            "hyperplane intersection needs 1..=10 points, got {}",
            points.len()
        )));
    }
    check_distinct(points)?;
    let m = PrimeModulus::new(points[0].modulus()).expect("validated modulus");
    let rows: Vec<[u64; 10]> = points.iter().map(|q| q.monomial_vector()).collect();
    let mut mat = rows.clone();
    let pivots = rref(&mut mat, m);
    Ok((pivots.len(), nullspace(&rows, m)))
}

fn check_distinct(points: &[AffinePoint]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a == b {
                return Err(Error::DuplicatePoint(a.x.value(), a.y.value()));
            }
        }
    }
    Ok(())
}

/// Whether a 7- or 8-point set imposes independent conditions on cubics,
/// i.e. its hyperplane covectors have full rank.
pub fn check_independent_conditions(points: &[AffinePoint]) -> Result<bool> {
    if points.len() != 7 && points.len() != 8 {
        return Err(Error::invalid(format!(
            "independence check is defined for 7 or 8 points, got {}",
            points.len()
        )));
    }
    let (rank, _) = intersect_hyperplanes(points)?;
    Ok(rank == points.len())
}

/// The 2-flat spanned by the curves through a 7-point set, when the set
/// imposes independent conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat2 {
    basis: [[u64; 10]; 3],
    pivots: [usize; 3],
    points: [AffinePoint; 7],
    p: u64,
}

impl Flat2 {
    /// The canonical echelon basis rows.
    pub fn basis(&self) -> &[[u64; 10]; 3] {
        &self.basis
    }

    pub fn defining_points(&self) -> &[AffinePoint; 7] {
        &self.points
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn m(&self) -> PrimeModulus {
        PrimeModulus::new(self.p).expect("validated modulus")
    }

    /// Parameter coordinates of a dual point in this flat's basis, or an
    /// error if the point does not lie in the flat.
    pub fn coords_of(&self, dp: &DualPoint) -> Result<[u64; 3]> {
        if dp.p != self.p {
            return Err(Error::invalid("mismatched moduli in flat coordinates"));
        }
        let m = self.m();
        let t = [
            dp.v[self.pivots[0]],
            dp.v[self.pivots[1]],
            dp.v[self.pivots[2]],
        ];
        // Reconstruct and compare: membership test and coordinates in one.
        let mut rec = [0u64; 10];
        for (ti, row) in t.iter().zip(self.basis.iter()) {
            for (r, &v) in rec.iter_mut().zip(row.iter()) {
                *r = m.add(*r, m.mul(*ti, v));
            }
        }
        if rec != dp.v {
            return Err(Error::invalid(
                "dual point does not lie in the flat".to_string(),
            ));
        }
        Ok(t)
    }

    /// The curve with the given parameter coordinates, if nonzero.
    pub fn curve_at(&self, t: [u64; 3]) -> Result<CurveCoeffs> {
        let m = self.m();
        let mut v = [0u64; 10];
        for (ti, row) in t.iter().zip(self.basis.iter()) {
            for (slot, &bv) in v.iter_mut().zip(row.iter()) {
                *slot = m.add(*slot, m.mul(m.reduce(*ti), bv));
            }
        }
        CurveCoeffs::new(v, m)
    }
}

/// Outcome of intersecting the seven point-hyperplanes of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatResult {
    Flat(Flat2),
    /// The conditions were dependent (rank below 7).
    NotAFlat { rank: usize },
}

/// Intersect the point-hyperplanes of a 7-point set: a 2-flat exactly when
/// the conditions are independent.
pub fn flat_of(points: &[AffinePoint]) -> Result<FlatResult> {
    if points.len() != 7 {
        return Err(Error::invalid(format!(
            "a flat is defined by exactly 7 points, got {}",
            points.len()
        )));
    }
    let (rank, basis) = intersect_hyperplanes(points)?;
    if rank != 7 {
        return Ok(FlatResult::NotAFlat { rank });
    }
    debug_assert_eq!(basis.len(), 3);
    let b: [[u64; 10]; 3] = [basis[0], basis[1], basis[2]];
    let pivots: Vec<usize> = b
        .iter()
        .map(|row| row.iter().position(|&v| v != 0).expect("nonzero basis row"))
        .collect();
    Ok(FlatResult::Flat(Flat2 {
        basis: b,
        pivots: [pivots[0], pivots[1], pivots[2]],
        points: points.try_into().expect("length checked"),
        p: points[0].modulus(),
    }))
}

/// A line inside a flat, as a normalized covector on the flat's parameter
/// coordinates, remembering which point induced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualLine {
    cov: [u64; 3],
    source: AffinePoint,
    p: u64,
}

impl DualLine {
    /// Normalized covector; lines are equal iff these agree.
    pub fn covector(&self) -> [u64; 3] {
        self.cov
    }

    pub fn source(&self) -> AffinePoint {
        self.source
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

/// Outcome of restricting a point-hyperplane to a flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsiResult {
    Line(DualLine),
    /// The flat is contained in the hyperplane: every curve of the flat
    /// already passes through the point.
    Degenerate,
}

/// Restrict the hyperplane of `q` to the flat: a line of the flat unless the
/// restriction vanishes. `q` must not be one of the defining points.
pub fn psi(q: AffinePoint, flat: &Flat2) -> Result<PsiResult> {
    if flat.defining_points().contains(&q) {
        return Err(Error::invalid(
            "psi is undefined on the points defining the flat",
        ));
    }
    if q.modulus() != flat.p {
        return Err(Error::invalid("mismatched moduli in psi"));
    }
    let m = flat.m();
    let cov = q.monomial_vector();
    let mut r = [0u64; 3];
    for (slot, row) in r.iter_mut().zip(flat.basis.iter()) {
        *slot = dot10(&cov, row, flat.p);
    }
    if r == [0, 0, 0] {
        return Ok(PsiResult::Degenerate);
    }
    let first = r.iter().position(|&v| v != 0).unwrap();
    let inv = m.inv(r[first]).expect("nonzero entry");
    for v in r.iter_mut() {
        *v = m.mul(*v, inv);
    }
    Ok(PsiResult::Line(DualLine {
        cov: r,
        source: q,
        p: flat.p,
    }))
}

/// The largest number of collinear points in the set.
pub fn max_collinear(points: &[AffinePoint]) -> usize {
    if points.len() <= 2 {
        return points.len();
    }
    let m = PrimeModulus::new(points[0].modulus()).expect("validated modulus");
    let collinear = |a: AffinePoint, b: AffinePoint, c: AffinePoint| {
        let lhs = m.mul(
            m.sub(b.x.value(), a.x.value()),
            m.sub(c.y.value(), a.y.value()),
        );
        let rhs = m.mul(
            m.sub(b.y.value(), a.y.value()),
            m.sub(c.x.value(), a.x.value()),
        );
        lhs == rhs
    };
    let mut best = 2;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let on_line = 2 + points
                .iter()
                .enumerate()
                .filter(|&(k, &q)| k != i && k != j && collinear(points[i], points[j], q))
                .count();
            best = best.max(on_line);
        }
    }
    best
}

/// Whether some nonzero curve of degree at most 2 passes through every
/// point: a rank computation on the six degree-≤2 monomial columns.
pub fn all_on_common_conic(points: &[AffinePoint]) -> bool {
    if points.is_empty() {
        return true;
    }
    let m = PrimeModulus::new(points[0].modulus()).expect("validated modulus");
    let mut rows: Vec<[u64; 10]> = points
        .iter()
        .map(|q| {
            let mono = q.monomial_vector();
            let mut row = [0u64; 10];
            row[..6].copy_from_slice(&mono[..6]);
            row
        })
        .collect();
    let rank = rref(&mut rows, m).len();
    rank <= 5
}

/// Whether the dual point lies on the dual line, both inside the flat.
pub fn dual_incidence(dp: &DualPoint, dl: &DualLine, flat: &Flat2) -> Result<bool> {
    if dl.p != flat.p {
        return Err(Error::invalid("mismatched moduli in dual incidence"));
    }
    let t = flat.coords_of(dp)?;
    let m = flat.m();
    let mut acc = 0u64;
    for i in 0..3 {
        acc = m.add(acc, m.mul(dl.cov[i], t[i]));
    }
    Ok(acc == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::random_irreducible_cubic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn pt(x: u64, y: u64, pm: PrimeModulus) -> AffinePoint {
        AffinePoint::new(x, y, pm)
    }

    /// Textbook Gaussian elimination, written independently of `rref` as the
    /// rank oracle for these tests: forward elimination only, counting
    /// nonzero rows.
    fn rank_oracle(points: &[AffinePoint], pm: PrimeModulus) -> usize {
        let mut rows: Vec<Vec<u64>> = points
            .iter()
            .map(|q| q.monomial_vector().to_vec())
            .collect();
        let mut rank = 0;
        for col in 0..10 {
            let Some(sel) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(rank, sel);
            for i in rank + 1..rows.len() {
                if rows[i][col] != 0 {
                    let f = pm.mul(rows[i][col], pm.inv(rows[rank][col]).unwrap());
                    for c in col..10 {
                        let sub = pm.mul(f, rows[rank][c]);
                        rows[i][c] = pm.sub(rows[i][c], sub);
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    #[test]
    fn phi_examples() {
        let f5 = m(5);
        let mut c = [0u64; 10];
        c[2] = 1;
        c[6] = f5.neg(1);
        let graph = CurveCoeffs::new(c, f5).unwrap();
        assert_eq!(phi(&graph).coords(), &[0, 0, 1, 0, 0, 0, 4, 0, 0, 0]);

        let one = CurveCoeffs::new([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], f5).unwrap();
        assert_eq!(phi(&one).coords(), &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);

        // Scaling invariance.
        let f7 = m(7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let c = random_irreducible_cubic(rng.gen(), f7);
            let doubled: Vec<u64> = c.coefficients().iter().map(|&v| f7.mul(v, 2)).collect();
            let c2 = CurveCoeffs::new(doubled.try_into().unwrap(), f7).unwrap();
            assert_eq!(phi(&c), phi(&c2));
        }
    }

    #[test]
    fn hyperplane_examples() {
        let f5 = m(5);
        assert_eq!(
            hyperplane_of_point(pt(0, 0, f5)).covector(),
            &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(
            hyperplane_of_point(pt(1, 1, f5)).covector(),
            &[1; 10]
        );
        assert_eq!(
            hyperplane_of_point(pt(2, 0, f5)).covector(),
            &[1, 2, 0, 4, 0, 0, 3, 0, 0, 0]
        );
    }

    #[test]
    fn hyperplane_pairs_like_evaluation() {
        let f11 = m(11);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let c = random_irreducible_cubic(rng.gen(), f11);
            let q = pt(rng.gen_range(0..11), rng.gen_range(0..11), f11);
            let paired = hyperplane_of_point(q).pair(c.coefficients());
            assert_eq!(paired, c.evaluate(q).value());
        }
    }

    #[test]
    fn intersect_single_point() {
        let f7 = m(7);
        let (rank, basis) = intersect_hyperplanes(&[pt(0, 0, f7)]).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(basis.len(), 9);
    }

    #[test]
    fn intersect_rejects_duplicates() {
        let f7 = m(7);
        let err = intersect_hyperplanes(&[pt(1, 2, f7), pt(1, 2, f7)]);
        assert_eq!(err, Err(Error::DuplicatePoint(1, 2)));
    }

    #[test]
    fn five_collinear_drops_rank() {
        let f7 = m(7);
        // Five points on y = 0 plus two generic points: the five collinear
        // conditions collapse to four (curves containing the whole line).
        let points = vec![
            pt(0, 0, f7),
            pt(1, 0, f7),
            pt(2, 0, f7),
            pt(3, 0, f7),
            pt(4, 0, f7),
            pt(0, 1, f7),
            pt(1, 1, f7),
        ];
        let (rank, basis) = intersect_hyperplanes(&points).unwrap();
        assert_eq!(rank, rank_oracle(&points, f7), "agrees with textbook elimination");
        assert_eq!(rank, 6);
        assert_eq!(basis.len(), 4);
        assert!(!check_independent_conditions(&points).unwrap());
        assert!(matches!(
            flat_of(&points).unwrap(),
            FlatResult::NotAFlat { rank: 6 }
        ));
    }

    #[test]
    fn conic_points_and_generic_points_have_rank_seven() {
        let f11 = m(11);
        // Seven points on the conic y = x² + x + 1.
        let conic: Vec<AffinePoint> = (0..7u64)
            .map(|t| pt(t, f11.add(f11.add(f11.mul(t, t), t), 1), f11))
            .collect();
        let (rank, _) = intersect_hyperplanes(&conic).unwrap();
        assert_eq!(rank, rank_oracle(&conic, f11));
        assert_eq!(rank, 7);

        // A generic-position set.
        let generic = vec![
            pt(0, 1, f11),
            pt(1, 4, f11),
            pt(2, 9, f11),
            pt(3, 5, f11),
            pt(5, 2, f11),
            pt(7, 8, f11),
            pt(10, 6, f11),
        ];
        let (rank, _) = intersect_hyperplanes(&generic).unwrap();
        assert_eq!(rank, rank_oracle(&generic, f11));
        assert_eq!(rank, 7);
        assert!(check_independent_conditions(&generic).unwrap());
    }

    #[test]
    fn eight_on_conic_are_dependent() {
        let f11 = m(11);
        let points: Vec<AffinePoint> =
            (0..8u64).map(|t| pt(t, f11.mul(t, t), f11)).collect();
        assert!(!check_independent_conditions(&points).unwrap());
        let (rank, _) = intersect_hyperplanes(&points).unwrap();
        assert_eq!(rank, rank_oracle(&points, f11));
        assert!(rank < 8);
    }

    #[test]
    fn flat_membership_of_curves_through_s() {
        let f11 = m(11);
        let points = vec![
            pt(0, 1, f11),
            pt(1, 4, f11),
            pt(2, 9, f11),
            pt(3, 5, f11),
            pt(5, 2, f11),
            pt(7, 8, f11),
            pt(10, 6, f11),
        ];
        let FlatResult::Flat(flat) = flat_of(&points).unwrap() else {
            panic!("expected a flat");
        };
        // Every parameter combination is a curve through all of S, and its
        // dual point lies back in the flat.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let t = [
                rng.gen_range(0..11),
                rng.gen_range(0..11),
                rng.gen_range(0..11),
            ];
            let Ok(curve) = flat.curve_at(t) else { continue };
            for &q in &points {
                assert!(curve.incident(q));
            }
            assert!(flat.coords_of(&phi(&curve)).is_ok());
        }
    }

    #[test]
    fn rank_is_order_invariant() {
        let f13 = m(13);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let mut points = Vec::new();
            while points.len() < 7 {
                let q = pt(rng.gen_range(0..13), rng.gen_range(0..13), f13);
                if !points.contains(&q) {
                    points.push(q);
                }
            }
            let (rank, basis) = intersect_hyperplanes(&points).unwrap();
            for _ in 0..5 {
                // Fisher-Yates shuffle.
                for i in (1..points.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    points.swap(i, j);
                }
                let (rank2, basis2) = intersect_hyperplanes(&points).unwrap();
                assert_eq!(rank, rank2);
                assert_eq!(basis, basis2, "canonical nullspace basis");
            }
        }
    }

    #[test]
    fn psi_degenerate_on_conic() {
        let f11 = m(11);
        let points: Vec<AffinePoint> =
            (0..7u64).map(|t| pt(t, f11.mul(t, t), f11)).collect();
        let FlatResult::Flat(flat) = flat_of(&points).unwrap() else {
            panic!("seven conic points impose independent conditions");
        };
        // (7, 5) is the eighth point of the same conic: 7² = 49 = 5 mod 11.
        let q = pt(7, 5, f11);
        assert_eq!(psi(q, &flat).unwrap(), PsiResult::Degenerate);
    }

    #[test]
    fn psi_generic_is_a_line_and_matches_direct_intersection() {
        let f11 = m(11);
        let points = vec![
            pt(0, 1, f11),
            pt(1, 4, f11),
            pt(2, 9, f11),
            pt(3, 5, f11),
            pt(5, 2, f11),
            pt(7, 8, f11),
            pt(10, 6, f11),
        ];
        let FlatResult::Flat(flat) = flat_of(&points).unwrap() else {
            panic!("expected a flat");
        };
        let q = pt(4, 4, f11);
        let PsiResult::Line(line) = psi(q, &flat).unwrap() else {
            panic!("expected a line");
        };
        // Independent solve: the solution space of S ∪ {q} is exactly the
        // kernel of the line's covector inside the flat.
        let mut with_q = points.clone();
        with_q.push(q);
        let (rank8, basis8) = intersect_hyperplanes(&with_q).unwrap();
        assert_eq!(rank8, 8);
        for v in basis8 {
            let dp = DualPoint { v, p: 11 };
            let t = flat.coords_of(&dp).expect("kernel vectors lie in the flat");
            let mut acc = 0u64;
            for i in 0..3 {
                acc = f11.add(acc, f11.mul(line.covector()[i], t[i]));
            }
            assert_eq!(acc, 0);
        }
    }

    #[test]
    fn psi_rejects_defining_points() {
        let f11 = m(11);
        let points = vec![
            pt(0, 1, f11),
            pt(1, 4, f11),
            pt(2, 9, f11),
            pt(3, 5, f11),
            pt(5, 2, f11),
            pt(7, 8, f11),
            pt(10, 6, f11),
        ];
        let FlatResult::Flat(flat) = flat_of(&points).unwrap() else {
            panic!("expected a flat");
        };
        assert!(psi(points[3], &flat).is_err());
    }

    #[test]
    fn collinearity_and_conic_helpers() {
        let f11 = m(11);
        let on_line: Vec<AffinePoint> = (0..5u64).map(|t| pt(t, f11.mul(3, t), f11)).collect();
        assert_eq!(max_collinear(&on_line), 5);
        let mut mixed = on_line.clone();
        mixed.truncate(3);
        mixed.push(pt(0, 5, f11));
        mixed.push(pt(1, 7, f11));
        assert_eq!(max_collinear(&mixed), 3);

        let conic_pts: Vec<AffinePoint> = (0..8u64).map(|t| pt(t, f11.mul(t, t), f11)).collect();
        assert!(all_on_common_conic(&conic_pts));
        // Any five points admit a conic.
        assert!(all_on_common_conic(&conic_pts[..5]));
        // Six in general position do not.
        let spread = vec![
            pt(0, 1, f11),
            pt(1, 4, f11),
            pt(2, 9, f11),
            pt(3, 5, f11),
            pt(5, 2, f11),
            pt(7, 8, f11),
        ];
        assert!(!all_on_common_conic(&spread));
    }

    #[test]
    fn dual_incidence_matches_direct_incidence() {
        let f13 = m(13);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut agree = 0u32;
        let mut trials = 0u32;
        let mut seen_true = false;
        let mut seen_false = false;
        while trials < 1000 {
            let mut points = Vec::new();
            while points.len() < 7 {
                let q = pt(rng.gen_range(0..13), rng.gen_range(0..13), f13);
                if !points.contains(&q) {
                    points.push(q);
                }
            }
            let FlatResult::Flat(flat) = flat_of(&points).unwrap() else {
                continue;
            };
            let t = [
                rng.gen_range(0..13),
                rng.gen_range(0..13),
                rng.gen_range(0..13),
            ];
            let Ok(curve) = flat.curve_at(t) else { continue };
            let q = pt(rng.gen_range(0..13), rng.gen_range(0..13), f13);
            if points.contains(&q) {
                continue;
            }
            let PsiResult::Line(line) = psi(q, &flat).unwrap() else {
                continue;
            };
            trials += 1;
            let dual = dual_incidence(&phi(&curve), &line, &flat).unwrap();
            let direct = curve.incident(q);
            if dual == direct {
                agree += 1;
            }
            seen_true |= direct;
            seen_false |= !direct;
        }
        assert_eq!(agree, trials, "duality equivalence must be exact");
        assert!(seen_true && seen_false, "both outcomes exercised");
    }
}
