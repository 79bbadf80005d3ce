//! Named verification campaigns, runnable from the CLI as CI gates: each
//! replays one step of the dualization argument over seeded random
//! sub-instances and reports violations (expected none).

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use incidence_core::curves::{random_irreducible_cubic, AffinePoint, CurveCoeffs};
use incidence_core::dual::{
    all_on_common_conic, dual_incidence, flat_of, intersect_hyperplanes, max_collinear, phi, psi,
    FlatResult, PsiResult,
};
use incidence_core::field::PrimeModulus;
use incidence_core::incidence::{rich_curves, rich_curves_through, CurveSet, PointSet};
use incidence_core::oracle::bezout_campaign;
use incidence_core::seeds::derive_seed;

use crate::certificate::pipeline_certificate;
use crate::instance::{generate_instance, CurveGen, InstanceSpec, PointGen};
use crate::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CampaignKind {
    Duality,
    Lemma,
    Multiplicity,
    Bezout,
    Proposition,
}

impl FromStr for CampaignKind {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "duality" => Ok(CampaignKind::Duality),
            "lemma" => Ok(CampaignKind::Lemma),
            "multiplicity" => Ok(CampaignKind::Multiplicity),
            "bezout" => Ok(CampaignKind::Bezout),
            "proposition" => Ok(CampaignKind::Proposition),
            other => Err(LabError::invalid(format!(
                "unknown campaign '{other}' (expected duality, lemma, multiplicity, bezout, proposition)"
            ))),
        }
    }
}

impl std::fmt::Display for CampaignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CampaignKind::Duality => "duality",
            CampaignKind::Lemma => "lemma",
            CampaignKind::Multiplicity => "multiplicity",
            CampaignKind::Bezout => "bezout",
            CampaignKind::Proposition => "proposition",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CampaignParams {
    pub p: u64,
    pub trials: u64,
    pub seed: u64,
    pub k: u64,
}

#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub name: &'static str,
    pub p: u64,
    pub trials: u64,
    pub seed: u64,
    pub csv_header: &'static str,
    pub rows: Vec<String>,
    /// Deterministically ordered key/value facts about the run.
    pub stats: Vec<(String, String)>,
    pub violations: Vec<String>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_campaign(kind: CampaignKind, params: &CampaignParams) -> Result<CampaignSummary> {
    match kind {
        CampaignKind::Duality => duality_campaign(params),
        CampaignKind::Lemma => lemma_campaign(params),
        CampaignKind::Multiplicity => multiplicity_campaign(params),
        CampaignKind::Bezout => bezout(params),
        CampaignKind::Proposition => proposition_campaign(params),
    }
}

/// Random valid (S, q, γ) configurations: membership of q in γ must agree
/// with membership of φ(γ) in ψ(q) inside the flat of S, exactly.
fn duality_campaign(params: &CampaignParams) -> Result<CampaignSummary> {
    let m = PrimeModulus::new(params.p)?;
    let p = m.get();
    if p < 11 {
        return Err(LabError::invalid(
            "duality campaign needs p >= 11 so random sets in general position exist",
        ));
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut incident_cases = 0u64;
    let mut nonincident_cases = 0u64;
    for trial in 0..params.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, trial));
        let flat = loop {
            let s = sample_distinct_points(&mut rng, m, 7);
            if let FlatResult::Flat(flat) = flat_of(&s)? {
                break flat;
            }
        };
        let curve = loop {
            let t = [
                rng.gen_range(0..p),
                rng.gen_range(0..p),
                rng.gen_range(0..p),
            ];
            if let Ok(c) = flat.curve_at(t) {
                if c.degree() == 3 {
                    break c;
                }
            }
        };
        let (q, line) = loop {
            let q = AffinePoint::new(rng.gen_range(0..p), rng.gen_range(0..p), m);
            if flat.defining_points().contains(&q) {
                continue;
            }
            match psi(q, &flat)? {
                PsiResult::Line(l) => break (q, l),
                PsiResult::Degenerate => continue,
            }
        };
        let direct = curve.incident(q);
        let dual = dual_incidence(&phi(&curve), &line, &flat)?;
        let ok = direct == dual;
        if direct {
            incident_cases += 1;
        } else {
            nonincident_cases += 1;
        }
        if !ok {
            violations.push(format!(
                "trial {trial}: incident={direct} but dual incidence={dual}"
            ));
        }
        rows.push(format!(
            "{trial},duality,{},{ok}",
            if direct { "incident" } else { "nonincident" }
        ));
    }
    Ok(CampaignSummary {
        name: "duality",
        p,
        trials: params.trials,
        seed: params.seed,
        csv_header: "trial,kind,outcome,ok",
        rows,
        stats: vec![
            ("incident_cases".into(), incident_cases.to_string()),
            ("nonincident_cases".into(), nonincident_cases.to_string()),
        ],
        violations,
    })
}

/// Every sampled or exhausted 7-subset with a nonempty C_{k,S} must have
/// hyperplane rank 7 (a 2-flat) and no four collinear points.
fn lemma_campaign(params: &CampaignParams) -> Result<CampaignSummary> {
    let k = params.k.max(11);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut nonempty = 0u64;
    let mut examined = 0u64;

    // Phase one: an exhaustively enumerable instance. Twelve points on one
    // irreducible cubic make that curve 12-rich, so every subset of curve
    // points has a nonempty C_{k,S}.
    {
        let m = PrimeModulus::new(13)?;
        let mut c = [0u64; 10];
        c[2] = 1;
        c[6] = m.neg(1);
        let graph = CurveCoeffs::new(c, m).unwrap();
        let mut curves = vec![graph];
        for i in 0..3u64 {
            let extra = random_irreducible_cubic(derive_seed(params.seed, 100 + i), m);
            if !curves.contains(&extra) {
                curves.push(extra);
            }
        }
        let pts: Vec<AffinePoint> = (0..12u64)
            .map(|x| AffinePoint::new(x, m.pow(x, 3), m))
            .collect();
        let points = PointSet::new(pts.clone(), m)?;
        let curve_set = CurveSet::new(curves, m)?;
        let class = rich_curves(&points, &curve_set, k)?;
        let mut idx = [0usize, 1, 2, 3, 4, 5, 6];
        loop {
            let s: Vec<AffinePoint> = idx.iter().map(|&i| pts[i]).collect();
            examined += 1;
            let members = rich_curves_through(&points, &curve_set, &class, &s)?;
            if !members.is_empty() {
                nonempty += 1;
                check_lemma_subset(&s, 13, &mut violations, &mut rows, examined)?;
            }
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
    }

    // Phase two: a larger instance at the requested modulus with stratified
    // sampling so nonempty subsets actually occur.
    {
        let spec = InstanceSpec {
            p: params.p.max(17),
            point_gen: PointGen::OnCurvesAdversarial,
            curve_gen: CurveGen::UniformIrreducible,
            n_points: 180,
            n_curves: 12,
            seed: derive_seed(params.seed, 2),
            allow_reducible: false,
        };
        let (points, curve_set) = generate_instance(&spec)?;
        let class = rich_curves(&points, &curve_set, k)?;
        let member_points: Vec<Vec<usize>> = class
            .members
            .iter()
            .map(|&ci| {
                let curve = &curve_set.curves()[ci];
                points
                    .points()
                    .iter()
                    .enumerate()
                    .filter(|(_, &q)| curve.incident(q))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, 3));
        let rich_pools: Vec<&Vec<usize>> =
            member_points.iter().filter(|v| v.len() >= 7).collect();
        let n = points.len();
        let mut seen = BTreeSet::new();
        for trial in 0..params.trials {
            let subset: Vec<usize> = if trial % 2 == 1 && !rich_pools.is_empty() {
                let pool = rich_pools[rng.gen_range(0..rich_pools.len())];
                sample_distinct_indices(&mut rng, pool.len(), 7)
                    .into_iter()
                    .map(|i| pool[i])
                    .collect()
            } else {
                sample_distinct_indices(&mut rng, n, 7)
            };
            let mut key = subset.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let s: Vec<AffinePoint> = subset.iter().map(|&i| points.points()[i]).collect();
            examined += 1;
            let members = rich_curves_through(&points, &curve_set, &class, &s)?;
            if !members.is_empty() {
                nonempty += 1;
                check_lemma_subset(&s, spec.p, &mut violations, &mut rows, examined)?;
            }
        }
    }

    Ok(CampaignSummary {
        name: "lemma",
        p: params.p,
        trials: params.trials,
        seed: params.seed,
        csv_header: "subset,kind,outcome,ok",
        rows,
        stats: vec![
            ("subsets_examined".into(), examined.to_string()),
            ("nonempty_cks".into(), nonempty.to_string()),
        ],
        violations,
    })
}

fn check_lemma_subset(
    s: &[AffinePoint],
    p: u64,
    violations: &mut Vec<String>,
    rows: &mut Vec<String>,
    id: u64,
) -> Result<()> {
    let rank = match flat_of(s)? {
        FlatResult::Flat(_) => 7,
        FlatResult::NotAFlat { rank } => rank,
    };
    let collinear = max_collinear(s);
    let flat_ok = rank == 7;
    let collinear_ok = collinear <= 3;
    if !flat_ok {
        violations.push(format!(
            "p={p} subset {id}: nonempty C_k,S with rank {rank}"
        ));
    }
    if !collinear_ok {
        violations.push(format!(
            "p={p} subset {id}: nonempty C_k,S with {collinear} collinear points"
        ));
    }
    rows.push(format!("{id},flat,rank{rank},{flat_ok}"));
    rows.push(format!("{id},collinearity,max{collinear},{collinear_ok}"));
    Ok(())
}

/// Pipeline certificates over a matrix of constructed instances; asserts
/// zero degenerate restrictions and multiplicity at most two throughout.
fn multiplicity_campaign(params: &CampaignParams) -> Result<CampaignSummary> {
    let k = params.k.max(11);
    let p = params.p.max(17);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut max_mult = 0u64;
    let mut degenerate = 0u64;
    let matrix = [
        (CurveGen::ThroughCommonPoints, 6usize, 60usize),
        (CurveGen::UniformIrreducible, 8, 96),
        (CurveGen::TranslateFamily, 8, 96),
    ];
    for (i, (curve_gen, n_curves, n_points)) in matrix.into_iter().enumerate() {
        let spec = InstanceSpec {
            p,
            point_gen: PointGen::OnCurvesAdversarial,
            curve_gen,
            n_points,
            n_curves,
            seed: derive_seed(params.seed, i as u64),
            allow_reducible: false,
        };
        let (points, curves) = generate_instance(&spec)?;
        let report = pipeline_certificate(&points, &curves, k, params.trials, params.seed)?;
        max_mult = max_mult.max(report.max_line_multiplicity);
        degenerate += report.degenerate_psi;
        let ok = report.passed();
        rows.push(format!(
            "{i},{curve_gen},mult{} deg{},{ok}",
            report.max_line_multiplicity, report.degenerate_psi
        ));
        violations.extend(report.violations);
    }
    Ok(CampaignSummary {
        name: "multiplicity",
        p,
        trials: params.trials,
        seed: params.seed,
        csv_header: "instance,kind,outcome,ok",
        rows,
        stats: vec![
            ("max_line_multiplicity".into(), max_mult.to_string()),
            ("degenerate_psi".into(), degenerate.to_string()),
        ],
        violations,
    })
}

fn bezout(params: &CampaignParams) -> Result<CampaignSummary> {
    let m = PrimeModulus::new(params.p)?;
    let summary = bezout_campaign(m, params.trials, params.seed)?;
    let rows = summary
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.trial,
                r.kind.name(),
                r.intersection_size,
                r.cap,
                r.ok
            )
        })
        .collect();
    Ok(CampaignSummary {
        name: "bezout",
        p: params.p,
        trials: params.trials,
        seed: params.seed,
        csv_header: "trial,kind,intersection_size,cap,ok",
        rows,
        stats: vec![
            (
                "max_cubic_cubic".into(),
                summary.max_observed[0].to_string(),
            ),
            ("max_line_cubic".into(), summary.max_observed[1].to_string()),
            (
                "max_conic_cubic".into(),
                summary.max_observed[2].to_string(),
            ),
        ],
        violations: summary.violations,
    })
}

/// Independence of point conditions: 7-point sets with no five collinear
/// have rank 7; 8-point sets additionally not on a common conic have rank 8.
fn proposition_campaign(params: &CampaignParams) -> Result<CampaignSummary> {
    let m = PrimeModulus::new(params.p)?;
    if m.get() < 11 {
        return Err(LabError::invalid(
            "proposition campaign needs p >= 11 so conditioned random sets exist",
        ));
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for trial in 0..params.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, trial));
        // 7 points, no five collinear.
        let s7 = loop {
            let s = sample_distinct_points(&mut rng, m, 7);
            if max_collinear(&s) < 5 {
                break s;
            }
        };
        let (rank, _) = intersect_hyperplanes(&s7)?;
        let ok = rank == 7;
        if !ok {
            violations.push(format!(
                "trial {trial}: 7 points with no five collinear have rank {rank}"
            ));
        }
        rows.push(format!("{trial},seven,rank{rank},{ok}"));

        // 8 points, no five collinear, not all on a conic.
        let s8 = loop {
            let s = sample_distinct_points(&mut rng, m, 8);
            if max_collinear(&s) < 5 && !all_on_common_conic(&s) {
                break s;
            }
        };
        let (rank, _) = intersect_hyperplanes(&s8)?;
        let ok = rank == 8;
        if !ok {
            violations.push(format!(
                "trial {trial}: 8 conditioned points have rank {rank}"
            ));
        }
        rows.push(format!("{trial},eight,rank{rank},{ok}"));
    }
    Ok(CampaignSummary {
        name: "proposition",
        p: params.p,
        trials: params.trials,
        seed: params.seed,
        csv_header: "trial,kind,outcome,ok",
        rows,
        stats: Vec::new(),
        violations,
    })
}

fn sample_distinct_points(rng: &mut ChaCha8Rng, m: PrimeModulus, n: usize) -> Vec<AffinePoint> {
    let p = m.get();
    let mut out: Vec<AffinePoint> = Vec::with_capacity(n);
    while out.len() < n {
        let q = AffinePoint::new(rng.gen_range(0..p), rng.gen_range(0..p), m);
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

fn sample_distinct_indices(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<usize> {
    debug_assert!(n >= count);
    let mut out: Vec<usize> = Vec::with_capacity(count);
    for j in (n - count)..n {
        let t = rng.gen_range(0..=j);
        if out.contains(&t) {
            out.push(j);
        } else {
            out.push(t);
        }
    }
    out
}
