//! Counting-engine throughput measurement across thread counts, with the
//! cross-configuration count equality asserted, not assumed.

use std::time::Instant;

use incidence_core::incidence::count_incidences;

use crate::instance::{generate_instance, CurveGen, InstanceSpec, PointGen};
use crate::{LabError, Result};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub size: usize,
    pub threads: usize,
    pub millis: u128,
    pub pairs_per_sec: f64,
    pub count: u64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub p: u64,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

/// For each size, generate one uniform instance with |P| = |C| = size and
/// time the counting engine under each thread count.
pub fn bench(sizes: &[usize], p: u64, threads: &[usize], seed: u64) -> Result<BenchReport> {
    let mut rows = Vec::new();
    for &size in sizes {
        let spec = InstanceSpec {
            p,
            point_gen: PointGen::UniformRandom,
            curve_gen: CurveGen::UniformIrreducible,
            n_points: size,
            n_curves: size,
            seed,
            allow_reducible: false,
        };
        let (points, curves) = generate_instance(&spec)?;
        let mut reference: Option<u64> = None;
        for &t in threads {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| LabError::invalid(format!("thread pool: {e}")))?;
            let start = Instant::now();
            let count = pool.install(|| count_incidences(&points, &curves));
            let elapsed = start.elapsed();
            match reference {
                None => reference = Some(count),
                Some(r) => {
                    if r != count {
                        return Err(LabError::invalid(format!(
                            "count mismatch across thread counts: {r} vs {count} at {t} threads"
                        )));
                    }
                }
            }
            let pairs = size as f64 * size as f64;
            rows.push(BenchRow {
                size,
                threads: t,
                millis: elapsed.as_millis(),
                pairs_per_sec: pairs / elapsed.as_secs_f64(),
                count,
            });
        }
    }
    Ok(BenchReport { p, seed, rows })
}
