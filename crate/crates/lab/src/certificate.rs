//! The end-to-end dualization certificate: for a k-rich class and sampled
//! (or exhausted) 7-subsets S, check every step of the curve-to-point
//! transfer — the 2-flat forms whenever C_{k,S} is nonempty, the induced
//! line map never degenerates, lines carry multiplicity at most two, and
//! every member curve lands on at least ⌈(k-7)/2⌉ distinct dual lines — and
//! aggregate measured dual rich-point counts against the closed-form bound
//! as ratios.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use incidence_core::bounds::{sdz_rich_points_bound, BoundReport};
use incidence_core::curves::AffinePoint;
use incidence_core::dual::{dual_incidence, flat_of, phi, psi, FlatResult, PsiResult};
use incidence_core::incidence::{
    count_incidences, rich_curves, rich_curves_through, rich_dual_points, richness_histogram,
    CurveSet, PointSet, RichnessClass,
};
use incidence_core::seeds::derive_seed;

use crate::{LabError, Result};

/// Full enumeration of 7-subsets is used when C(|P|, 7) stays below this.
const EXHAUSTIVE_SUBSET_CAP: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub p: u64,
    pub size_p: u64,
    pub size_c: u64,
    pub k: u64,
    pub richness_histogram: BTreeMap<u64, u64>,
    pub ck_size: u64,
    /// True when every 7-subset of P was examined.
    pub exhaustive: bool,
    pub subsets_examined: u64,
    pub uniform_samples: u64,
    pub stratified_samples: u64,
    pub nonempty_cks: u64,
    pub rank_histogram: BTreeMap<usize, u64>,
    pub flats_formed: u64,
    pub degenerate_psi: u64,
    pub max_line_multiplicity: u64,
    /// Minimum over member curves of distinct dual lines through the curve's
    /// dual point; None when no subset had members.
    pub min_dual_richness: Option<u64>,
    pub required_dual_richness: u64,
    pub dual_rich_point_checks: u64,
    /// max over subsets of measured t-rich dual points / closed-form bound.
    pub dual_rich_points_max_ratio: f64,
    pub bound: BoundReport,
    pub violations: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct SubsetOutcome {
    rank: usize,
    cks_size: usize,
    flat_formed: bool,
    degenerate_psi: u64,
    max_multiplicity: u64,
    min_curve_richness: Option<u64>,
    rich_points: Option<(u64, f64)>,
    violations: Vec<String>,
}

/// Run the certificate. Requires k ≥ 11 (the dual threshold (k-7)/2 must
/// reach 2) and a curve set consisting of absolutely irreducible cubics.
pub fn pipeline_certificate(
    points: &PointSet,
    curves: &CurveSet,
    k: u64,
    subset_samples: u64,
    seed: u64,
) -> Result<CertificateReport> {
    if k < 11 {
        return Err(LabError::invalid("pipeline certificate requires k >= 11"));
    }
    if !curves.all_irreducible_cubics() {
        return Err(LabError::invalid(
            "pipeline certificate requires a curve set of absolutely irreducible cubics",
        ));
    }
    let m = points.modulus();
    let class = rich_curves(points, curves, k)?;
    let hist = richness_histogram(points, curves);
    let measured = count_incidences(points, curves);
    let required = (k - 7).div_ceil(2);

    let (subsets, exhaustive, uniform_samples, stratified_samples) =
        select_subsets(points, curves, &class, subset_samples, seed);

    let outcomes: Vec<SubsetOutcome> = subsets
        .par_iter()
        .map(|s_idx| examine_subset(points, curves, &class, s_idx, k, required))
        .collect::<Result<Vec<_>>>()?;

    let mut report = CertificateReport {
        p: m.get(),
        size_p: points.len() as u64,
        size_c: curves.len() as u64,
        k,
        richness_histogram: hist,
        ck_size: class.members.len() as u64,
        exhaustive,
        subsets_examined: outcomes.len() as u64,
        uniform_samples,
        stratified_samples,
        nonempty_cks: 0,
        rank_histogram: BTreeMap::new(),
        flats_formed: 0,
        degenerate_psi: 0,
        max_line_multiplicity: 0,
        min_dual_richness: None,
        required_dual_richness: required,
        dual_rich_point_checks: 0,
        dual_rich_points_max_ratio: 0.0,
        bound: BoundReport::compute(m, points.len() as u64, curves.len() as u64, measured),
        violations: Vec::new(),
    };
    for (s_idx, o) in subsets.iter().zip(outcomes) {
        *report.rank_histogram.entry(o.rank).or_insert(0) += 1;
        if o.cks_size > 0 {
            report.nonempty_cks += 1;
        }
        if o.flat_formed {
            report.flats_formed += 1;
        }
        report.degenerate_psi += o.degenerate_psi;
        report.max_line_multiplicity = report.max_line_multiplicity.max(o.max_multiplicity);
        if let Some(r) = o.min_curve_richness {
            report.min_dual_richness = Some(report.min_dual_richness.map_or(r, |m| m.min(r)));
        }
        if let Some((_, ratio)) = o.rich_points {
            report.dual_rich_point_checks += 1;
            if ratio > report.dual_rich_points_max_ratio {
                report.dual_rich_points_max_ratio = ratio;
            }
        }
        for v in o.violations {
            report.violations.push(format!("S={s_idx:?}: {v}"));
        }
    }
    Ok(report)
}

/// The sorted list of subsets to examine: every 7-subset when feasible,
/// otherwise a mix of uniform samples and subsets stratified onto k-rich
/// curves (uniform sampling alone almost never hits a nonempty C_{k,S}).
fn select_subsets(
    points: &PointSet,
    curves: &CurveSet,
    class: &RichnessClass,
    subset_samples: u64,
    seed: u64,
) -> (Vec<[usize; 7]>, bool, u64, u64) {
    let n = points.len();
    if n >= 7 && binomial7(n as u64) <= EXHAUSTIVE_SUBSET_CAP {
        let mut all = Vec::new();
        let mut idx: [usize; 7] = [0, 1, 2, 3, 4, 5, 6];
        loop {
            all.push(idx);
            let mut i = 6isize;
            while i >= 0 && idx[i as usize] == n - 7 + i as usize {
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
        return (all, true, 0, 0);
    }
    let mut chosen = BTreeSet::new();
    let mut uniform = 0u64;
    let mut stratified = 0u64;
    if n < 7 {
        return (Vec::new(), true, 0, 0);
    }
    // Per-member incident point indices, for the stratified half.
    let member_points: Vec<Vec<usize>> = class
        .members
        .iter()
        .map(|&ci| {
            let curve = &curves.curves()[ci];
            points
                .points()
                .iter()
                .enumerate()
                .filter(|(_, &q)| curve.incident(q))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xC0DE));
    for trial in 0..subset_samples {
        let on_curve = trial % 2 == 1 && member_points.iter().any(|v| v.len() >= 7);
        let subset = if on_curve {
            let candidates: Vec<&Vec<usize>> =
                member_points.iter().filter(|v| v.len() >= 7).collect();
            let pool = candidates[rng.gen_range(0..candidates.len())];
            stratified += 1;
            sample_seven(pool.len(), &mut rng).map(|i| pool[i])
        } else {
            uniform += 1;
            sample_seven(n, &mut rng)
        };
        let mut sorted = subset;
        sorted.sort_unstable();
        chosen.insert(sorted);
    }
    (chosen.into_iter().collect(), false, uniform, stratified)
}

/// Seven distinct indices below n by Floyd's algorithm.
fn sample_seven(n: usize, rng: &mut ChaCha8Rng) -> [usize; 7] {
    debug_assert!(n >= 7);
    let mut chosen: Vec<usize> = Vec::with_capacity(7);
    for j in (n - 7)..n {
        let t = rng.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.try_into().expect("exactly seven")
}

pub(crate) fn binomial7(n: u64) -> u128 {
    if n < 7 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..7u128 {
        acc = acc.saturating_mul(n as u128 - i);
    }
    acc / 5040
}

fn examine_subset(
    points: &PointSet,
    curves: &CurveSet,
    class: &RichnessClass,
    s_idx: &[usize; 7],
    k: u64,
    required: u64,
) -> Result<SubsetOutcome> {
    let s: Vec<AffinePoint> = s_idx.iter().map(|&i| points.points()[i]).collect();
    let members = rich_curves_through(points, curves, class, &s)?;
    let flat_result = flat_of(&s)?;
    let rank = match &flat_result {
        FlatResult::Flat(_) => 7,
        FlatResult::NotAFlat { rank } => *rank,
    };
    let mut out = SubsetOutcome {
        rank,
        cks_size: members.len(),
        flat_formed: matches!(flat_result, FlatResult::Flat(_)),
        degenerate_psi: 0,
        max_multiplicity: 0,
        min_curve_richness: None,
        rich_points: None,
        violations: Vec::new(),
    };
    if members.is_empty() {
        return Ok(out);
    }
    let FlatResult::Flat(flat) = flat_result else {
        out.violations.push(format!(
            "C_k,S has {} members but the hyperplanes have rank {rank}, not 7",
            members.len()
        ));
        return Ok(out);
    };

    // Points of P, outside S, lying on at least one member curve.
    let s_set: BTreeSet<usize> = s_idx.iter().copied().collect();
    let relevant: Vec<AffinePoint> = points
        .points()
        .iter()
        .enumerate()
        .filter(|(i, _)| !s_set.contains(i))
        .filter(|(_, &q)| members.iter().any(|&ci| curves.curves()[ci].incident(q)))
        .map(|(_, &q)| q)
        .collect();

    let mut lines = Vec::with_capacity(relevant.len());
    for &q in &relevant {
        match psi(q, &flat)? {
            PsiResult::Line(l) => lines.push(l),
            PsiResult::Degenerate => {
                out.degenerate_psi += 1;
                out.violations.push(format!(
                    "psi degenerate at ({}, {})",
                    q.x.value(),
                    q.y.value()
                ));
            }
        }
    }

    // Multiplicity: distinct source points mapping to one line covector.
    let mut mult: BTreeMap<[u64; 3], u64> = BTreeMap::new();
    for l in &lines {
        *mult.entry(l.covector()).or_insert(0) += 1;
    }
    out.max_multiplicity = mult.values().copied().max().unwrap_or(0);
    if out.max_multiplicity > 2 {
        out.violations.push(format!(
            "a dual line carries multiplicity {}",
            out.max_multiplicity
        ));
    }

    // Each member curve must sit on enough distinct dual lines.
    let distinct_covs: Vec<[u64; 3]> = mult.keys().copied().collect();
    let cov_to_line: BTreeMap<[u64; 3], usize> = distinct_covs
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let mut representative = vec![None; distinct_covs.len()];
    for l in &lines {
        let i = cov_to_line[&l.covector()];
        if representative[i].is_none() {
            representative[i] = Some(*l);
        }
    }
    for &ci in &members {
        let dp = phi(&curves.curves()[ci]);
        let mut through = 0u64;
        for rep in representative.iter().flatten() {
            if dual_incidence(&dp, rep, &flat)? {
                through += 1;
            }
        }
        out.min_curve_richness = Some(out.min_curve_richness.map_or(through, |m| m.min(through)));
        if through < required {
            out.violations.push(format!(
                "curve {ci} lies on {through} distinct dual lines, below the required {required} (k = {k})"
            ));
        }
    }

    // Measured dual rich points against the closed-form bound, as a ratio.
    if !lines.is_empty() {
        let t = required.max(2);
        let measured = rich_dual_points(&lines, t)?;
        if (members.len() as u64) > measured {
            out.violations.push(format!(
                "{} member curves but only {measured} {t}-rich dual points",
                members.len()
            ));
        }
        let bound = sdz_rich_points_bound(distinct_covs.len() as u64, t)?;
        let ratio = if bound > 0.0 {
            measured as f64 / bound
        } else {
            0.0
        };
        out.rich_points = Some((measured, ratio));
    }
    Ok(out)
}
