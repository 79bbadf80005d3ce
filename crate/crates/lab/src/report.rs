//! CSV readers and writers for every file the harness exchanges. Output is
//! byte-deterministic: fixed field order, sorted map iteration, `\n` line
//! endings, and shortest-round-trip float formatting.

use std::fmt::Write as _;
use std::path::Path;

use incidence_core::bounds::BoundReport;
use incidence_core::curves::{AffinePoint, CurveCoeffs, CURVE_CSV_HEADER};
use incidence_core::field::PrimeModulus;
use incidence_core::incidence::{CurveSet, PointSet};

use crate::bench::BenchReport;
use crate::campaigns::CampaignSummary;
use crate::certificate::CertificateReport;
use crate::{LabError, Result};

pub const POINT_CSV_HEADER: &str = "x,y";
pub const COUNTS_CSV_HEADER: &str = "curve_index,count";

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| LabError::Io {
                path: parent.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, contents).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::from(POINT_CSV_HEADER);
    out.push('\n');
    for q in points.points() {
        let _ = writeln!(out, "{},{}", q.x.value(), q.y.value());
    }
    out
}

pub fn read_points_csv(path: &Path, m: PrimeModulus) -> Result<Vec<AffinePoint>> {
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line.trim() != POINT_CSV_HEADER {
                return Err(LabError::Parse {
                    path: path.display().to_string(),
                    line: 1,
                    msg: format!("expected header '{POINT_CSV_HEADER}', found '{line}'"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields = parse_residues(line, 2, m, path, i + 1)?;
        out.push(AffinePoint::new(fields[0], fields[1], m));
    }
    Ok(out)
}

pub fn curves_to_csv(curves: &CurveSet) -> String {
    let mut out = String::from(CURVE_CSV_HEADER);
    out.push('\n');
    for c in curves.curves() {
        let row: Vec<String> = c.coefficients().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn read_curves_csv(path: &Path, m: PrimeModulus) -> Result<Vec<CurveCoeffs>> {
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line.trim() != CURVE_CSV_HEADER {
                return Err(LabError::Parse {
                    path: path.display().to_string(),
                    line: 1,
                    msg: format!("expected header '{CURVE_CSV_HEADER}', found '{line}'"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields = parse_residues(line, 10, m, path, i + 1)?;
        let coeffs: [u64; 10] = fields.try_into().expect("length checked");
        out.push(CurveCoeffs::new(coeffs, m).map_err(|e| LabError::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

fn parse_residues(
    line: &str,
    expect: usize,
    m: PrimeModulus,
    path: &Path,
    lineno: usize,
) -> Result<Vec<u64>> {
    let parse_err = |msg: String| LabError::Parse {
        path: path.display().to_string(),
        line: lineno,
        msg,
    };
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() != expect {
        return Err(parse_err(format!(
            "expected {expect} fields, found {}",
            fields.len()
        )));
    }
    fields
        .iter()
        .map(|f| {
            let v: u64 = f
                .trim()
                .parse()
                .map_err(|e| parse_err(format!("bad residue '{f}': {e}")))?;
            if v >= m.get() {
                return Err(parse_err(format!(
                    "residue {v} is not reduced modulo {}",
                    m.get()
                )));
            }
            Ok(v)
        })
        .collect()
}

pub fn counts_to_csv(counts: &[u64]) -> String {
    let mut out = String::from(COUNTS_CSV_HEADER);
    out.push('\n');
    for (i, c) in counts.iter().enumerate() {
        let _ = writeln!(out, "{i},{c}");
    }
    out
}

pub fn bound_report_to_csv(report: &BoundReport) -> String {
    format!("{}\n{}\n", BoundReport::CSV_HEADER, report.csv_row())
}

/// Key/value serialization of the certificate, sections in a fixed order.
pub fn certificate_to_csv(report: &CertificateReport) -> String {
    let mut out = String::from("section,key,value\n");
    let mut kv = |section: &str, key: &str, value: String| {
        let _ = writeln!(out, "{section},{key},{value}");
    };
    kv("instance", "p", report.p.to_string());
    kv("instance", "size_p", report.size_p.to_string());
    kv("instance", "size_c", report.size_c.to_string());
    kv("instance", "k", report.k.to_string());
    kv("richness", "ck_size", report.ck_size.to_string());
    for (count, curves) in &report.richness_histogram {
        kv("richness_histogram", &count.to_string(), curves.to_string());
    }
    kv("subsets", "exhaustive", report.exhaustive.to_string());
    kv("subsets", "examined", report.subsets_examined.to_string());
    kv("subsets", "uniform_samples", report.uniform_samples.to_string());
    kv(
        "subsets",
        "stratified_samples",
        report.stratified_samples.to_string(),
    );
    kv("subsets", "nonempty_cks", report.nonempty_cks.to_string());
    for (rank, n) in &report.rank_histogram {
        kv("rank_histogram", &rank.to_string(), n.to_string());
    }
    kv("pipeline", "flats_formed", report.flats_formed.to_string());
    kv("pipeline", "degenerate_psi", report.degenerate_psi.to_string());
    kv(
        "pipeline",
        "max_line_multiplicity",
        report.max_line_multiplicity.to_string(),
    );
    kv(
        "pipeline",
        "min_dual_richness",
        report
            .min_dual_richness
            .map_or_else(|| "none".to_string(), |v| v.to_string()),
    );
    kv(
        "pipeline",
        "required_dual_richness",
        report.required_dual_richness.to_string(),
    );
    kv(
        "pipeline",
        "dual_rich_point_checks",
        report.dual_rich_point_checks.to_string(),
    );
    kv(
        "pipeline",
        "dual_rich_points_max_ratio",
        report.dual_rich_points_max_ratio.to_string(),
    );
    kv("bounds", "measured_I", report.bound.measured.to_string());
    kv("bounds", "kst", report.bound.kst.to_string());
    kv("bounds", "thm1", report.bound.thm1.to_string());
    kv("bounds", "thm2", report.bound.thm2.to_string());
    kv("bounds", "delta", report.bound.delta.to_string());
    kv(
        "bounds",
        "dyadic_at_delta",
        report.bound.dyadic_at_delta.to_string(),
    );
    kv("bounds", "admissible", report.bound.admissible.to_string());
    kv(
        "bounds",
        "active_branch",
        report.bound.active_branch.to_string(),
    );
    kv("result", "violations", report.violations.len().to_string());
    for (i, v) in report.violations.iter().enumerate() {
        kv("violation", &i.to_string(), v.replace(',', ";"));
    }
    out
}

pub fn campaign_to_csv(summary: &CampaignSummary) -> String {
    let mut out = String::from(summary.csv_header);
    out.push('\n');
    for row in &summary.rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

pub fn bench_to_csv(report: &BenchReport) -> String {
    let mut out = String::from("size,threads,millis,pairs_per_sec,count\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.size, row.threads, row.millis, row.pairs_per_sec, row.count
        );
    }
    out
}
