//! Seeded instance generators. Every generator is deterministic for a fixed
//! spec and re-checks the classification it promises after generation.
//!
//! The reducible-counterexample family exists to demonstrate why curve sets
//! flagged all-irreducible exclude such curves: all points sit on one shared
//! line which is a component of every curve, so I(P, C) = |P|·|C|. It is
//! quarantined behind an explicit opt-in flag.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use incidence_core::curves::{random_irreducible_cubic, AffinePoint, CurveCoeffs, IrreducibilityClass};
use incidence_core::dual::{flat_of, FlatResult};
use incidence_core::field::PrimeModulus;
use incidence_core::incidence::{CurveSet, PointSet};
use incidence_core::oracle::random_conic;
use incidence_core::seeds::derive_seed;

use crate::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointGen {
    UniformRandom,
    Grid,
    OnCurvesAdversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveGen {
    UniformIrreducible,
    TranslateFamily,
    ThroughCommonPoints,
    ReducibleCounterexample,
}

impl FromStr for PointGen {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" => Ok(PointGen::UniformRandom),
            "grid" => Ok(PointGen::Grid),
            "on-curves-adversarial" => Ok(PointGen::OnCurvesAdversarial),
            other => Err(LabError::invalid(format!(
                "unknown point generator '{other}' (expected uniform-random, grid, on-curves-adversarial)"
            ))),
        }
    }
}

impl std::fmt::Display for PointGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PointGen::UniformRandom => "uniform-random",
            PointGen::Grid => "grid",
            PointGen::OnCurvesAdversarial => "on-curves-adversarial",
        };
        f.write_str(s)
    }
}

impl FromStr for CurveGen {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-irreducible" => Ok(CurveGen::UniformIrreducible),
            "translate-family" => Ok(CurveGen::TranslateFamily),
            "through-common-points" => Ok(CurveGen::ThroughCommonPoints),
            "reducible-counterexample" => Ok(CurveGen::ReducibleCounterexample),
            other => Err(LabError::invalid(format!(
                "unknown curve generator '{other}' (expected uniform-irreducible, translate-family, through-common-points, reducible-counterexample)"
            ))),
        }
    }
}

impl std::fmt::Display for CurveGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CurveGen::UniformIrreducible => "uniform-irreducible",
            CurveGen::TranslateFamily => "translate-family",
            CurveGen::ThroughCommonPoints => "through-common-points",
            CurveGen::ReducibleCounterexample => "reducible-counterexample",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub p: u64,
    pub point_gen: PointGen,
    pub curve_gen: CurveGen,
    pub n_points: usize,
    pub n_curves: usize,
    pub seed: u64,
    pub allow_reducible: bool,
}

/// Generate the instance: curves first, then points (the adversarial point
/// family places points on the generated curves).
pub fn generate_instance(spec: &InstanceSpec) -> Result<(PointSet, CurveSet)> {
    let m = PrimeModulus::new(spec.p)?;
    check_feasible(spec, m)?;
    if spec.curve_gen == CurveGen::ReducibleCounterexample {
        return generate_counterexample(spec, m);
    }
    let curves = match spec.curve_gen {
        CurveGen::UniformIrreducible => uniform_irreducible_curves(m, spec.n_curves, spec.seed),
        CurveGen::TranslateFamily => translate_family(m, spec.n_curves, spec.seed)?,
        CurveGen::ThroughCommonPoints => through_common_points(m, spec.n_curves, spec.seed)?,
        CurveGen::ReducibleCounterexample => unreachable!("handled above"),
    };
    for c in &curves {
        if c.degree() != 3 || c.classify() != IrreducibilityClass::AbsolutelyIrreducible {
            return Err(LabError::invalid(
                "generator emitted a curve failing its promised classification",
            ));
        }
    }
    let curve_set = CurveSet::new(curves, m)?;
    let points = match spec.point_gen {
        PointGen::UniformRandom => uniform_points(m, spec.n_points, derive_seed(spec.seed, 1 << 32)),
        PointGen::Grid => grid_points(m, spec.n_points)?,
        PointGen::OnCurvesAdversarial => {
            on_curves_points(m, spec.n_points, derive_seed(spec.seed, 1 << 33), &curve_set)?
        }
    };
    Ok((PointSet::new(points, m)?, curve_set))
}

fn check_feasible(spec: &InstanceSpec, m: PrimeModulus) -> Result<()> {
    let p = m.get() as u128;
    if (spec.n_points as u128) > p * p {
        return Err(LabError::invalid(format!(
            "{} points requested but the plane has only {} points",
            spec.n_points,
            p * p
        )));
    }
    // Number of distinct normalized nonzero 10-vectors; only binding at
    // very small p.
    let mut proj_count = 0u128;
    let mut power = 1u128;
    for _ in 0..10 {
        proj_count += power;
        power = power.saturating_mul(p);
    }
    if (spec.n_curves as u128) > proj_count {
        return Err(LabError::invalid(format!(
            "{} curves requested but only {} normalized coefficient vectors exist",
            spec.n_curves, proj_count
        )));
    }
    Ok(())
}

/// Batched rejection sampling: candidates classify in parallel, acceptance
/// order stays sequential, so output is independent of thread count.
pub fn uniform_irreducible_curves(m: PrimeModulus, n: usize, seed: u64) -> Vec<CurveCoeffs> {
    let mut out = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    let mut counter = 0u64;
    let batch = 64.max(n / 4);
    while out.len() < n {
        let seeds: Vec<u64> = (0..batch)
            .map(|i| derive_seed(seed, counter + i as u64))
            .collect();
        counter += batch as u64;
        let candidates: Vec<CurveCoeffs> = seeds
            .par_iter()
            .map(|&s| random_irreducible_cubic(s, m))
            .collect();
        for c in candidates {
            if out.len() == n {
                break;
            }
            if seen.insert(*c.coefficients()) {
                out.push(c);
            }
        }
    }
    out
}

/// Distinct translates of one random irreducible cubic.
fn translate_family(m: PrimeModulus, n: usize, seed: u64) -> Result<Vec<CurveCoeffs>> {
    let base = random_irreducible_cubic(derive_seed(seed, 0), m);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    let p = m.get();
    let mut out = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 200 * n + 1000 {
            return Err(LabError::invalid(
                "translate family exhausted; too few distinct translates at this modulus",
            ));
        }
        let c = base.translate(rng.gen_range(0..p), rng.gen_range(0..p));
        if seen.insert(*c.coefficients()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Distinct absolutely irreducible cubics through seven common points in
/// general position; forces |C_{k,S}| > 1 configurations.
fn through_common_points(m: PrimeModulus, n: usize, seed: u64) -> Result<Vec<CurveCoeffs>> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
    let p = m.get();
    let flat = loop {
        let mut pts = Vec::new();
        while pts.len() < 7 {
            let q = AffinePoint::new(rng.gen_range(0..p), rng.gen_range(0..p), m);
            if !pts.contains(&q) {
                pts.push(q);
            }
        }
        if let FlatResult::Flat(flat) = flat_of(&pts)? {
            break flat;
        }
    };
    let mut out = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 500 * n + 2000 {
            return Err(LabError::invalid(
                "through-common-points exhausted; flat holds too few irreducible cubics",
            ));
        }
        let t = [
            rng.gen_range(0..p),
            rng.gen_range(0..p),
            rng.gen_range(0..p),
        ];
        let Ok(curve) = flat.curve_at(t) else { continue };
        if curve.degree() == 3
            && curve.classify() == IrreducibilityClass::AbsolutelyIrreducible
            && seen.insert(*curve.coefficients())
        {
            out.push(curve);
        }
    }
    Ok(out)
}

fn uniform_points(m: PrimeModulus, n: usize, seed: u64) -> Vec<AffinePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = m.get();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let q = AffinePoint::new(rng.gen_range(0..p), rng.gen_range(0..p), m);
        if seen.insert((q.x.value(), q.y.value())) {
            out.push(q);
        }
    }
    out
}

/// The first n points of the ⌈√n⌉ × ⌈√n⌉ grid in row-major (x, y) order.
fn grid_points(m: PrimeModulus, n: usize) -> Result<Vec<AffinePoint>> {
    let side = (n as f64).sqrt().ceil() as u64;
    if side > m.get() {
        return Err(LabError::invalid(format!(
            "grid side {side} exceeds the modulus {}",
            m.get()
        )));
    }
    Ok((0..side)
        .flat_map(|x| (0..side).map(move |y| (x, y)))
        .take(n)
        .map(|(x, y)| AffinePoint::new(x, y, m))
        .collect())
}

/// Points placed on a few curves of the instance, round-robin, with uniform
/// filler if the hosts cannot absorb the quota. High per-curve richness is
/// the purpose of this family.
fn on_curves_points(
    m: PrimeModulus,
    n: usize,
    seed: u64,
    curves: &CurveSet,
) -> Result<Vec<AffinePoint>> {
    if curves.is_empty() {
        return Err(LabError::invalid(
            "adversarial point placement needs at least one curve",
        ));
    }
    let hosts = curves.len().min((n / 16).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = m.get();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    let mut dry_spells = 0usize;
    let mut host_idx = 0usize;
    while out.len() < n && dry_spells < 50 * n + 200 {
        let host = &curves.curves()[host_idx % hosts];
        host_idx += 1;
        let x = rng.gen_range(0..p);
        let mut placed = false;
        for q in host.points_on_column(x) {
            if out.len() == n {
                break;
            }
            if seen.insert((q.x.value(), q.y.value())) {
                out.push(q);
                placed = true;
            }
        }
        if !placed {
            dry_spells += 1;
        }
    }
    while out.len() < n {
        let q = AffinePoint::new(rng.gen_range(0..p), rng.gen_range(0..p), m);
        if seen.insert((q.x.value(), q.y.value())) {
            out.push(q);
        }
    }
    Ok(out)
}

/// All points on one line, every curve the product of that line with a
/// conic: I(P, C) = |P|·|C| exactly.
fn generate_counterexample(spec: &InstanceSpec, m: PrimeModulus) -> Result<(PointSet, CurveSet)> {
    if !spec.allow_reducible {
        return Err(LabError::invalid(
            "the reducible-counterexample generator must be enabled explicitly (allow_reducible / --allow-reducible)",
        ));
    }
    if spec.point_gen != PointGen::OnCurvesAdversarial {
        return Err(LabError::invalid(
            "the reducible counterexample places its points on the shared line; use the on-curves-adversarial point generator",
        ));
    }
    let p = m.get();
    if spec.n_points as u64 > p {
        return Err(LabError::invalid(format!(
            "at most {p} points fit on the shared line"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, 7));
    // The shared line y = αx + β.
    let alpha = rng.gen_range(0..p);
    let beta = rng.gen_range(0..p);
    let mut line_coeffs = [0u64; 10];
    line_coeffs[0] = m.neg(beta);
    line_coeffs[1] = m.neg(alpha);
    line_coeffs[2] = 1;
    let line = CurveCoeffs::new(line_coeffs, m)?;

    let mut curves = Vec::with_capacity(spec.n_curves);
    let mut seen = BTreeSet::new();
    let mut attempts = 0usize;
    while curves.len() < spec.n_curves {
        attempts += 1;
        if attempts > 500 * spec.n_curves + 2000 {
            return Err(LabError::invalid(
                "too few distinct line-times-conic curves at this modulus",
            ));
        }
        let conic = random_conic(&mut rng, m);
        let curve = CurveCoeffs::product(&line, &conic)?;
        if curve.classify() != IrreducibilityClass::ReducibleRational {
            return Err(LabError::invalid(
                "counterexample generator produced a curve that is not rationally reducible",
            ));
        }
        if seen.insert(*curve.coefficients()) {
            curves.push(curve);
        }
    }

    let mut xs = BTreeSet::new();
    while xs.len() < spec.n_points {
        xs.insert(rng.gen_range(0..p));
    }
    let points: Vec<AffinePoint> = xs
        .into_iter()
        .map(|x| AffinePoint::new(x, m.add(m.mul(alpha, x), beta), m))
        .collect();

    let curve_set = CurveSet::new(curves, m)?;
    debug_assert!(!curve_set.all_irreducible_cubics());
    Ok((PointSet::new(points, m)?, curve_set))
}
