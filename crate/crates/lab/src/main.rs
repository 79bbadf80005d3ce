//! Command-line front end: gen, count, certify, verify, bound-report, bench.
//! Exit status 0 means every checked invariant held, so the binary can gate
//! CI runs directly.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use incidence_core::bounds::BoundReport;
use incidence_core::field::PrimeModulus;
use incidence_core::incidence::{count_incidences, incidence_counts_per_curve, CurveSet, PointSet};

use incidence_lab::campaigns::{verify_campaign, CampaignKind, CampaignParams};
use incidence_lab::certificate::pipeline_certificate;
use incidence_lab::instance::{generate_instance, CurveGen, InstanceSpec, PointGen};
use incidence_lab::report;
use incidence_lab::{bench, LabError};

#[derive(Parser)]
#[command(
    name = "incidence-lab",
    version,
    about = "Exact incidence counting and dualization experiments for cubic curves over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded instance and write point/curve CSV files.
    Gen {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "uniform-random")]
        point_gen: String,
        #[arg(long, default_value = "uniform-irreducible")]
        curve_gen: String,
        #[arg(long)]
        n_points: usize,
        #[arg(long)]
        n_curves: usize,
        #[arg(long)]
        points_out: PathBuf,
        #[arg(long)]
        curves_out: PathBuf,
        /// Required for the reducible-counterexample curve family.
        #[arg(long, default_value_t = false)]
        allow_reducible: bool,
    },
    /// Count incidences for CSV inputs; optionally write per-curve counts.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        points_file: PathBuf,
        #[arg(long)]
        curves_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the full dualization certificate and write it as CSV.
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        points_file: PathBuf,
        #[arg(long)]
        curves_file: PathBuf,
        #[arg(long, default_value_t = 11)]
        k: u64,
        #[arg(long, default_value_t = 2000)]
        subset_samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a named invariant campaign: duality, lemma, multiplicity,
    /// bezout, or proposition.
    Verify {
        #[arg(long)]
        campaign: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 11)]
        k: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every bound against the measured count for CSV inputs.
    BoundReport {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        points_file: PathBuf,
        #[arg(long)]
        curves_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the counting engine across sizes and thread counts.
    Bench {
        /// Comma-separated instance sizes (|P| = |C| per size).
        #[arg(long, value_delimiter = ',', default_value = "20000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2147483647)]
        p: u64,
        /// Comma-separated thread counts.
        #[arg(long, value_delimiter = ',', default_value = "1,2,8")]
        threads: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_instance(
    p: u64,
    points_file: &PathBuf,
    curves_file: &PathBuf,
) -> Result<(PointSet, CurveSet), LabError> {
    let m = PrimeModulus::new(p)?;
    let points = report::read_points_csv(points_file, m)?;
    let curves = report::read_curves_csv(curves_file, m)?;
    Ok((PointSet::new(points, m)?, CurveSet::new(curves, m)?))
}

fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, LabError>
where
    T: Send,
{
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| LabError::invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Returns Ok(true) when the run was clean (no violations).
fn run(cli: Cli) -> Result<bool, LabError> {
    match cli.cmd {
        Cmd::Gen {
            p,
            seed,
            point_gen,
            curve_gen,
            n_points,
            n_curves,
            points_out,
            curves_out,
            allow_reducible,
        } => {
            let spec = InstanceSpec {
                p,
                point_gen: point_gen.parse::<PointGen>()?,
                curve_gen: curve_gen.parse::<CurveGen>()?,
                n_points,
                n_curves,
                seed,
                allow_reducible,
            };
            let (points, curves) = generate_instance(&spec)?;
            report::write_file(&points_out, &report::points_to_csv(&points))?;
            report::write_file(&curves_out, &report::curves_to_csv(&curves))?;
            println!(
                "wrote {} points to {} and {} curves to {} (all irreducible cubics: {})",
                points.len(),
                points_out.display(),
                curves.len(),
                curves_out.display(),
                curves.all_irreducible_cubics()
            );
            Ok(true)
        }
        Cmd::Count {
            p,
            points_file,
            curves_file,
            out,
            threads,
        } => {
            let (points, curves) = load_instance(p, &points_file, &curves_file)?;
            let (total, per) = with_threads(threads, || {
                (
                    count_incidences(&points, &curves),
                    incidence_counts_per_curve(&points, &curves),
                )
            })?;
            println!("I(P,C) = {total}");
            if let Some(out) = out {
                report::write_file(&out, &report::counts_to_csv(&per))?;
                println!("wrote per-curve counts to {}", out.display());
            }
            Ok(true)
        }
        Cmd::Certify {
            p,
            points_file,
            curves_file,
            k,
            subset_samples,
            seed,
            out,
            threads,
        } => {
            let (points, curves) = load_instance(p, &points_file, &curves_file)?;
            let cert = with_threads(threads, || {
                pipeline_certificate(&points, &curves, k, subset_samples, seed)
            })??;
            println!(
                "examined {} subsets ({} nonempty C_k,S): degenerate_psi={} max_multiplicity={} violations={}",
                cert.subsets_examined,
                cert.nonempty_cks,
                cert.degenerate_psi,
                cert.max_line_multiplicity,
                cert.violations.len()
            );
            for v in &cert.violations {
                eprintln!("violation: {v}");
            }
            if let Some(out) = out {
                report::write_file(&out, &report::certificate_to_csv(&cert))?;
                println!("wrote certificate to {}", out.display());
            }
            Ok(cert.passed())
        }
        Cmd::Verify {
            campaign,
            p,
            trials,
            seed,
            k,
            out,
        } => {
            let kind: CampaignKind = campaign.parse()?;
            let params = CampaignParams { p, trials, seed, k };
            let summary = verify_campaign(kind, &params)?;
            println!(
                "campaign {}: {} rows, {} violations",
                summary.name,
                summary.rows.len(),
                summary.violations.len()
            );
            for (key, value) in &summary.stats {
                println!("  {key} = {value}");
            }
            for v in &summary.violations {
                eprintln!("violation: {v}");
            }
            if let Some(out) = out {
                report::write_file(&out, &report::campaign_to_csv(&summary))?;
                println!("wrote campaign rows to {}", out.display());
            }
            Ok(summary.passed())
        }
        Cmd::BoundReport {
            p,
            points_file,
            curves_file,
            out,
        } => {
            let (points, curves) = load_instance(p, &points_file, &curves_file)?;
            let measured = count_incidences(&points, &curves);
            let m = PrimeModulus::new(p)?;
            let rep = BoundReport::compute(m, points.len() as u64, curves.len() as u64, measured);
            let csv = report::bound_report_to_csv(&rep);
            print!("{csv}");
            if let Some(out) = out {
                report::write_file(&out, &csv)?;
            }
            Ok(true)
        }
        Cmd::Bench {
            sizes,
            p,
            threads,
            seed,
            out,
        } => {
            let rep = bench::bench(&sizes, p, &threads, seed)?;
            let csv = report::bench_to_csv(&rep);
            print!("{csv}");
            if let Some(out) = out {
                report::write_file(&out, &csv)?;
            }
            Ok(true)
        }
    }
}
