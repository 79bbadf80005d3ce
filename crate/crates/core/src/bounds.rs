//! Closed-form bound evaluators and the measured-vs-bound report.
//!
//! Exponents here are rationals, so evaluation runs in 192-bit floating
//! point and only the final value is rounded to f64; the admissibility
//! condition |P| ≤ p^(15/13) is decided in exact integer arithmetic instead.
//! Implicit constants in the source inequalities are unknown, so measured
//! counts are compared to bounds as reported ratios, never asserted.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;

const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

fn consts() -> Consts {
    Consts::new().expect("constants cache allocation")
}

fn bf(x: u64) -> BigFloat {
    BigFloat::from_u64(x, PREC)
}

/// x^(num/den) with the exponent formed at full precision.
fn pow_ratio(x: u64, num: u64, den: u64, cc: &mut Consts) -> BigFloat {
    if x == 0 {
        return BigFloat::from_u64(0, PREC);
    }
    let e = bf(num).div(&bf(den), PREC, RM);
    bf(x).pow(&e, PREC, RM, cc)
}

fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _, sign, e, _) = x.as_raw_parts().expect("finite value");
    let hi = *words.last().expect("nonzero mantissa") as f64;
    let lo = if words.len() >= 2 {
        words[words.len() - 2] as f64
    } else {
        0.0
    };
    let mag = (hi + lo * 2f64.powi(-64)) * 2f64.powi(e - 64);
    match sign {
        Sign::Neg => -mag,
        Sign::Pos => mag,
    }
}

/// min{ m·n^(9/10) + n, m^(1/2)·n + m }, the pair-intersection-cap bound.
pub fn kst_bound(m: u64, n: u64) -> f64 {
    kst_bound_with_branch(m, n).0
}

pub fn kst_bound_with_branch(m: u64, n: u64) -> (f64, &'static str) {
    let mut cc = consts();
    let b1 = bf(m)
        .mul(&pow_ratio(n, 9, 10, &mut cc), PREC, RM)
        .add(&bf(n), PREC, RM);
    let b2 = pow_ratio(m, 1, 2, &mut cc)
        .mul(&bf(n), PREC, RM)
        .add(&bf(m), PREC, RM);
    if b1 <= b2 {
        (to_f64(&b1), "m*n^(9/10)+n")
    } else {
        (to_f64(&b2), "m^(1/2)*n+m")
    }
}

/// min{ (mn)^(39/43), m·n^(9/10), m^(1/2)·n } + m + n.
pub fn theorem1_bound(m: u64, n: u64) -> f64 {
    theorem1_bound_with_branch(m, n).0
}

pub fn theorem1_bound_with_branch(m: u64, n: u64) -> (f64, &'static str) {
    let mut cc = consts();
    let t1 = pow_ratio(m, 39, 43, &mut cc).mul(&pow_ratio(n, 39, 43, &mut cc), PREC, RM);
    let t2 = bf(m).mul(&pow_ratio(n, 9, 10, &mut cc), PREC, RM);
    let t3 = pow_ratio(m, 1, 2, &mut cc).mul(&bf(n), PREC, RM);
    let (mut best, mut name) = (t1, "(mn)^(39/43)");
    if t2 < best {
        best = t2;
        name = "m*n^(9/10)";
    }
    if t3 < best {
        best = t3;
        name = "m^(1/2)*n";
    }
    let v = best.add(&bf(m), PREC, RM).add(&bf(n), PREC, RM);
    (to_f64(&v), name)
}

/// (mn)^(39/43) + m^(71/43)·n^(28/43) + n.
pub fn theorem2_bound(m: u64, n: u64) -> f64 {
    let mut cc = consts();
    let t1 = pow_ratio(m, 39, 43, &mut cc).mul(&pow_ratio(n, 39, 43, &mut cc), PREC, RM);
    let t2 = pow_ratio(m, 71, 43, &mut cc).mul(&pow_ratio(n, 28, 43, &mut cc), PREC, RM);
    let v = t1.add(&t2, PREC, RM).add(&bf(n), PREC, RM);
    to_f64(&v)
}

/// L^(11/4)/t^(15/4) + L/t: rich points with respect to a line set.
pub fn sdz_rich_points_bound(l: u64, t: u64) -> Result<f64> {
    if t < 2 {
        return Err(Error::invalid("rich-point threshold t must be at least 2"));
    }
    let mut cc = consts();
    let a = pow_ratio(l, 11, 4, &mut cc).div(&pow_ratio(t, 15, 4, &mut cc), PREC, RM);
    let b = bf(l).div(&bf(t), PREC, RM);
    Ok(to_f64(&a.add(&b, PREC, RM)))
}

/// m^(11/4)/k^(15/4) + m/k: the per-subset rich-curve bound. Valid for
/// k ≥ 11, where the underlying dual threshold (k-7)/2 reaches 2.
pub fn cks_bound(m: u64, k: u64) -> Result<f64> {
    if k < 11 {
        return Err(Error::invalid("cks_bound requires k >= 11"));
    }
    let mut cc = consts();
    let a = pow_ratio(m, 11, 4, &mut cc).div(&pow_ratio(k, 15, 4, &mut cc), PREC, RM);
    let b = bf(m).div(&bf(k), PREC, RM);
    Ok(to_f64(&a.add(&b, PREC, RM)))
}

/// m^(39/4)/k^(43/4) + m^8/k^8: the aggregated rich-curve bound, k ≥ 11.
pub fn ck_bound(m: u64, k: u64) -> Result<f64> {
    if k < 11 {
        return Err(Error::invalid("ck_bound requires k >= 11"));
    }
    let mut cc = consts();
    let a = pow_ratio(m, 39, 4, &mut cc).div(&pow_ratio(k, 43, 4, &mut cc), PREC, RM);
    let b = pow_ratio(m, 8, 1, &mut cc).div(&pow_ratio(k, 8, 1, &mut cc), PREC, RM);
    Ok(to_f64(&a.add(&b, PREC, RM)))
}

/// The dyadic cutoff max{ 11, m^(39/43)/n^(4/43) }.
pub fn delta_opt(m: u64, n: u64) -> Result<f64> {
    delta_opt_with_branch(m, n).map(|(v, _)| v)
}

pub fn delta_opt_with_branch(m: u64, n: u64) -> Result<(f64, &'static str)> {
    if n == 0 {
        return Err(Error::invalid("delta_opt requires a nonempty curve set"));
    }
    let mut cc = consts();
    let ratio = pow_ratio(m, 39, 43, &mut cc).div(&pow_ratio(n, 4, 43, &mut cc), PREC, RM);
    let eleven = bf(11);
    if ratio <= eleven {
        Ok((11.0, "11"))
    } else {
        Ok((to_f64(&ratio), "m^(39/43)/n^(4/43)"))
    }
}

/// Δ·n + m^(39/4)/Δ^(39/4) + m^8/Δ^7 for a real cutoff Δ ≥ 1.
pub fn dyadic_bound(m: u64, n: u64, delta: f64) -> Result<f64> {
    if !(delta >= 1.0) {
        return Err(Error::invalid("dyadic_bound requires delta >= 1"));
    }
    let mut cc = consts();
    let d = BigFloat::from_f64(delta, PREC);
    let e394 = bf(39).div(&bf(4), PREC, RM);
    let t1 = d.mul(&bf(n), PREC, RM);
    let t2 = pow_ratio(m, 39, 4, &mut cc).div(&d.pow(&e394, PREC, RM, &mut cc), PREC, RM);
    let t3 = pow_ratio(m, 8, 1, &mut cc).div(&d.powi(7, PREC, RM), PREC, RM);
    Ok(to_f64(&t1.add(&t2, PREC, RM).add(&t3, PREC, RM)))
}

/// The window (m^(35/8), m^(40/3)) of curve-set sizes where the headline
/// bound beats the pair-cap bounds.
pub fn improvement_range(m: u64) -> (f64, f64) {
    let mut cc = consts();
    (
        to_f64(&pow_ratio(m, 35, 8, &mut cc)),
        to_f64(&pow_ratio(m, 40, 3, &mut cc)),
    )
}

/// Exact comparison a^ae ≤ b^be in integer arithmetic.
pub fn power_le(a: u64, ae: u32, b: u64, be: u32) -> bool {
    BigUint::from(a).pow(ae) <= BigUint::from(b).pow(be)
}

/// Whether the point-set size satisfies m ≤ p^(15/13), decided exactly as
/// m^13 ≤ p^15.
pub fn admissible(m: u64, p: PrimeModulus) -> bool {
    power_le(m, 13, p.get(), 15)
}

/// Sizes, measured count, every bound, ratios, and the admissibility flag
/// for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub p: u64,
    pub size_p: u64,
    pub size_c: u64,
    pub measured: u64,
    pub kst: f64,
    pub thm1: f64,
    pub thm2: f64,
    pub delta: f64,
    pub dyadic_at_delta: f64,
    pub admissible: bool,
    /// Identity of the active min-term of the headline bound.
    pub active_branch: &'static str,
    pub ratio_kst: f64,
    pub ratio_thm1: f64,
    pub ratio_thm2: f64,
}

impl BoundReport {
    pub fn compute(p: PrimeModulus, size_p: u64, size_c: u64, measured: u64) -> BoundReport {
        let kst = kst_bound(size_p, size_c);
        let (thm1, branch) = theorem1_bound_with_branch(size_p, size_c);
        let thm2 = theorem2_bound(size_p, size_c);
        let (delta, dyadic_at_delta) = if size_c == 0 {
            (0.0, 0.0)
        } else {
            let d = delta_opt(size_p, size_c).expect("size_c checked nonzero");
            (d, dyadic_bound(size_p, size_c, d).expect("delta_opt >= 11"))
        };
        let ratio = |bound: f64| if bound > 0.0 { measured as f64 / bound } else { 0.0 };
        BoundReport {
            p: p.get(),
            size_p,
            size_c,
            measured,
            kst,
            thm1,
            thm2,
            delta,
            dyadic_at_delta,
            admissible: admissible(size_p, p),
            active_branch: branch,
            ratio_kst: ratio(kst),
            ratio_thm1: ratio(thm1),
            ratio_thm2: ratio(thm2),
        }
    }

    pub const CSV_HEADER: &'static str =
        "p,sizeP,sizeC,measured_I,kst,thm1,thm2,delta,dyadic_at_delta,admissible,active_branch";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.size_p,
            self.size_c,
            self.measured,
            self.kst,
            self.thm1,
            self.thm2,
            self.delta,
            self.dyadic_at_delta,
            self.admissible,
            self.active_branch
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        if a == b {
            return true;
        }
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    /// Independent recomputation through f64 exp/ln, the low-precision side
    /// of the differential pair.
    fn pow_ratio_f64(x: u64, num: u64, den: u64) -> f64 {
        if x == 0 {
            0.0
        } else {
            ((num as f64 / den as f64) * (x as f64).ln()).exp()
        }
    }

    #[test]
    fn kst_examples() {
        assert_eq!(kst_bound(0, 0), 0.0);
        assert_eq!(kst_bound(0, 17), 0.0);
        assert_eq!(kst_bound(1, 1), 2.0);
        let v = kst_bound(10_000, 1_000_000);
        let b1 = 10_000.0 * pow_ratio_f64(1_000_000, 9, 10) + 1_000_000.0;
        let b2 = pow_ratio_f64(10_000, 1, 2) * 1_000_000.0 + 10_000.0;
        assert!(close(v, b1.min(b2), 1e-12));
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(theorem1_bound(0, 0), 0.0);
        assert_eq!(theorem1_bound(1, 1), 3.0);
        let (v, branch) = theorem1_bound_with_branch(1000, 10_000_000);
        let t1 = pow_ratio_f64(1000 * 10_000_000, 39, 43);
        let t2 = 1000.0 * pow_ratio_f64(10_000_000, 9, 10);
        let t3 = pow_ratio_f64(1000, 1, 2) * 10_000_000.0;
        let expected = t1.min(t2).min(t3) + 1000.0 + 10_000_000.0;
        assert!(close(v, expected, 1e-12));
        assert!(!branch.is_empty());
    }

    #[test]
    fn theorem2_examples() {
        assert_eq!(theorem2_bound(0, 5), 5.0);
        assert_eq!(theorem2_bound(1, 1), 3.0);
        let v = theorem2_bound(345, 678_901);
        let expected = pow_ratio_f64(345, 39, 43) * pow_ratio_f64(678_901, 39, 43)
            + pow_ratio_f64(345, 71, 43) * pow_ratio_f64(678_901, 28, 43)
            + 678_901.0;
        assert!(close(v, expected, 1e-12));
    }

    #[test]
    fn sdz_examples() {
        assert!(sdz_rich_points_bound(10, 1).is_err());
        // L = t: L^(11/4)/L^(15/4) + 1 = 1/L + 1.
        let v = sdz_rich_points_bound(64, 64).unwrap();
        assert!(close(v, 1.0 / 64.0 + 1.0, 1e-12));
        let v = sdz_rich_points_bound(100, 10).unwrap();
        let expected = pow_ratio_f64(100, 11, 4) / pow_ratio_f64(10, 15, 4) + 10.0;
        assert!(close(v, expected, 1e-12));
        // Monotone decreasing in t.
        let mut prev = f64::INFINITY;
        for t in 2..40 {
            let v = sdz_rich_points_bound(1000, t).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn cks_examples() {
        assert!(cks_bound(100, 10).is_err());
        let v = cks_bound(11, 11).unwrap();
        assert!(close(v, 1.0 / 11.0 + 1.0, 1e-12));
        let v = cks_bound(10_000, 20).unwrap();
        let expected = pow_ratio_f64(10_000, 11, 4) / pow_ratio_f64(20, 15, 4) + 500.0;
        assert!(close(v, expected, 1e-12));
        let mut prev = f64::INFINITY;
        for k in 11..60 {
            let v = cks_bound(5000, k).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn ck_examples() {
        assert!(ck_bound(100, 7).is_err());
        // m = k: m^(39/4 - 43/4) + 1 = 1/m + 1.
        let v = ck_bound(16, 16).unwrap();
        assert!(close(v, 1.0 / 16.0 + 1.0, 1e-12));
        let v = ck_bound(1000, 16).unwrap();
        let expected = pow_ratio_f64(1000, 39, 4) / pow_ratio_f64(16, 43, 4)
            + (1000f64).powi(8) / (16f64).powi(8);
        assert!(close(v, expected, 1e-12));
    }

    #[test]
    fn delta_examples() {
        assert!(delta_opt(5, 0).is_err());
        assert_eq!(delta_opt(1, 99).unwrap(), 11.0);
        // Clamp boundary: m^(39/43) = 11 n^(4/43) keeps delta at 11.
        assert_eq!(delta_opt(11, 11u64.pow(9)).unwrap(), 11.0);
        let v = delta_opt(1_000_000, 1000).unwrap();
        let expected = pow_ratio_f64(1_000_000, 39, 43) / pow_ratio_f64(1000, 4, 43);
        assert!(close(v, expected.max(11.0), 1e-12));
    }

    #[test]
    fn dyadic_examples() {
        assert!(dyadic_bound(1, 1, 0.5).is_err());
        let v = dyadic_bound(1, 7, 1.0).unwrap();
        assert!(close(v, 9.0, 1e-12)); // n + 1 + 1
        let v = dyadic_bound(1234, 56, 17.5).unwrap();
        let expected = 17.5 * 56.0
            + pow_ratio_f64(1234, 39, 4) / 17.5f64.powf(9.75)
            + (1234f64).powi(8) / 17.5f64.powi(7);
        assert!(close(v, expected, 1e-12));
    }

    #[test]
    fn dyadic_at_delta_matches_theorem2_leading_terms() {
        // With the ratio branch of delta active, dyadic(m, n, delta) equals
        // 2·(mn)^(39/43) + m^(71/43)n^(28/43); against the first two terms
        // of the headline bound the quotient lies in [1, 2]. This is exact
        // algebra, not an asymptotic claim.
        for (m, n) in [(10_000u64, 50u64), (100_000, 20), (1 << 30, 100)] {
            let (delta, branch) = delta_opt_with_branch(m, n).unwrap();
            assert_eq!(branch, "m^(39/43)/n^(4/43)");
            let d = dyadic_bound(m, n, delta).unwrap();
            let leading = theorem2_bound(m, n) - n as f64;
            let q = d / leading;
            assert!(q >= 1.0 - 1e-9 && q <= 2.0 + 1e-9, "quotient {q}");
        }
    }

    #[test]
    fn dyadic_is_unimodal_in_log_delta() {
        // Each term is convex in log(delta), so a dyadic sweep decreases and
        // then increases; the grid argmin is logged against delta_opt.
        for (m, n) in [(100_000u64, 40u64), (3, 729), (10_000, 10_000)] {
            let values: Vec<f64> = (0..40)
                .map(|j| dyadic_bound(m, n, 2f64.powi(j)).unwrap())
                .collect();
            let mut switched = false;
            for w in values.windows(2) {
                if w[1] > w[0] {
                    switched = true;
                } else {
                    assert!(!switched, "dyadic bound not unimodal for m={m} n={n}");
                }
            }
            let argmin = values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            println!(
                "m={m} n={n}: grid argmin 2^{argmin}, delta_opt {}",
                delta_opt(m, n).unwrap()
            );
        }
    }

    #[test]
    fn improvement_range_examples() {
        assert_eq!(improvement_range(1), (1.0, 1.0));
        let (lo, hi) = improvement_range(2);
        assert!(close(lo, 2f64.powf(35.0 / 8.0), 1e-12));
        assert!(close(hi, 2f64.powf(40.0 / 3.0), 1e-12));
        // Inside the window the headline leading term undercuts the
        // pair-cap bound; outside it does not. Ratios logged for reference.
        let m = 100u64;
        let inside_n = 100u64.pow(5);
        let t1 = pow_ratio_f64(m, 39, 43) * pow_ratio_f64(inside_n, 39, 43);
        let kst = kst_bound(m, inside_n);
        println!("inside window: leading/kst = {}", t1 / kst);
        let outside_n = 100u64.pow(2);
        let t1o = pow_ratio_f64(m, 39, 43) * pow_ratio_f64(outside_n, 39, 43);
        let ksto = kst_bound(m, outside_n);
        println!("outside window: leading/kst = {}", t1o / ksto);
    }

    #[test]
    fn admissible_examples() {
        let p = PrimeModulus::new(101).unwrap();
        assert!(admissible(101, p));
        assert!(!admissible(101 * 101, p));
        // Exact boundary of the integer comparator: (2^15)^13 = (2^13)^15.
        assert!(power_le(1 << 15, 13, 1 << 13, 15));
        assert!(!power_le((1 << 15) + 1, 13, 1 << 13, 15));
    }

    #[test]
    fn admissible_matches_exact_comparison_randomized() {
        use num_bigint::BigUint;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314);
        let primes = [3u64, 101, 65537, 2147483647];
        for _ in 0..1000 {
            let p = primes[rng.gen_range(0..primes.len())];
            let m: u64 = rng.gen_range(0..1u64 << 40);
            let pm = PrimeModulus::new(p).unwrap();
            // Naive repeated-multiplication oracle.
            let mut lhs = BigUint::from(1u32);
            for _ in 0..13 {
                lhs *= m;
            }
            let mut rhs = BigUint::from(1u32);
            for _ in 0..15 {
                rhs *= p;
            }
            assert_eq!(admissible(m, pm), lhs <= rhs);
        }
    }

    #[test]
    fn monotone_in_sizes() {
        let grid = [0u64, 1, 2, 10, 1000, 123_456];
        for &m in &grid {
            for &n in &grid {
                for &(dm, dn) in &[(1u64, 0u64), (0, 1), (7, 13)] {
                    assert!(kst_bound(m + dm, n + dn) >= kst_bound(m, n) - 1e-9);
                    assert!(theorem1_bound(m + dm, n + dn) >= theorem1_bound(m, n) - 1e-9);
                    assert!(theorem2_bound(m + dm, n + dn) >= theorem2_bound(m, n) - 1e-9);
                }
            }
        }
    }

    #[test]
    fn report_csv_shape() {
        let p = PrimeModulus::new(13).unwrap();
        let r = BoundReport::compute(p, 20, 10, 35);
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), BoundReport::CSV_HEADER.split(',').count());
        let empty = BoundReport::compute(p, 0, 0, 0);
        assert_eq!(empty.measured, 0);
        assert_eq!(empty.ratio_kst, 0.0);
    }
}
