mod common;

use common::fixture;
use ghosa_core::harness::{
    export_report, load_report_config, run_experiment, Algorithm, ExperimentConfig, ProblemSpec, ReportFormat,
    CSV_HEADER,
};
use ghosa_core::{BenchmarkId, Metric, ThresholdPolicy};

fn small(spec: ProblemSpec, algorithm: Algorithm) -> ExperimentConfig {
    ExperimentConfig {
        runs: 3,
        iterations: 50,
        population: 12,
        seed_base: 11,
        ..ExperimentConfig::new(spec, algorithm)
    }
}

#[test]
fn export_reload_rerun_is_bitwise_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(
        ProblemSpec::Tsp {
            path: fixture("ulysses16.tsp"),
            metric_override: None,
        },
        Algorithm::Ghosa,
    );
    let first = run_experiment(&cfg, None).unwrap();
    let files = export_report(&first, dir.path(), ReportFormat::Json).unwrap();
    let json = dir.path().join("ulysses16.json");
    assert!(files.contains(&json));
    let replayed = load_report_config(&json).unwrap();
    assert_eq!(replayed, cfg);
    let second = run_experiment(&replayed, None).unwrap();
    let bits = |r: &ghosa_core::ExperimentResult| r.bests().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&first), bits(&second));
    assert_eq!(first.stats, second.stats);
}

#[test]
fn csv_row_has_eight_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(
        ProblemSpec::Knapsack {
            path: fixture("toy.mknap"),
            index: 1,
            policy: ThresholdPolicy::Walk,
        },
        Algorithm::Ghosa,
    );
    let res = run_experiment(&cfg, None).unwrap();
    export_report(&res, dir.path(), ReportFormat::Csv).unwrap();
    let text = std::fs::read_to_string(dir.path().join("toy-1.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].starts_with("toy-1,\"2,6\","));
    // quoted dimension counts as one column
    assert_eq!(lines[1].replace("\"2,6\"", "d").split(',').count(), 8);
    assert!(res.stats.best >= res.stats.mean && res.stats.mean >= res.stats.worst);
    assert!(res.runs.iter().all(|r| r.trace.total.windows(2).all(|w| w[1] >= w[0])));
}

#[test]
fn road_reports_nine_series_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        runs: 2,
        ..small(
            ProblemSpec::Road {
                path: fixture("toy.roadnet"),
                awt_noise: None,
            },
            Algorithm::Ghosa,
        )
    };
    let res = run_experiment(&cfg, None).unwrap();
    let files = export_report(&res, dir.path(), ReportFormat::Json).unwrap();
    let traces: Vec<_> = files
        .iter()
        .filter(|p| p.to_string_lossy().contains(".run0."))
        .collect();
    assert_eq!(traces.len(), 9);
    let total = std::fs::read_to_string(dir.path().join("toy.run0.trace")).unwrap();
    assert_eq!(total.lines().count(), cfg.iterations);
    let travel = std::fs::read_to_string(dir.path().join("toy.run0.travel.trace")).unwrap();
    let waiting = std::fs::read_to_string(dir.path().join("toy.run0.waiting.trace")).unwrap();
    for ((t, a), b) in total.lines().zip(travel.lines()).zip(waiting.lines()) {
        let (t, a, b): (f64, f64, f64) = (t.parse().unwrap(), a.parse().unwrap(), b.parse().unwrap());
        assert!((t - a - b).abs() < 1e-9);
    }
    let extras = &res.runs[0].extras;
    assert!((extras["travel"] + extras["waiting"] - res.runs[0].best).abs() < 1e-9);
}

#[test]
fn empty_traces_write_no_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(
        ProblemSpec::Qap {
            path: fixture("toy6.dat"),
        },
        Algorithm::Ghosa,
    );
    let mut res = run_experiment(&cfg, None).unwrap();
    for r in &mut res.runs {
        r.trace = Default::default();
    }
    let files = export_report(&res, dir.path(), ReportFormat::Csv).unwrap();
    assert_eq!(files.len(), 2);
}

#[test]
fn tsp_reports_plain_and_geo_lengths() {
    let cfg = ExperimentConfig {
        runs: 1,
        ..small(
            ProblemSpec::Tsp {
                path: fixture("ulysses16.tsp"),
                metric_override: Some(Metric::Euclidean),
            },
            Algorithm::Ghosa,
        )
    };
    let res = run_experiment(&cfg, None).unwrap();
    let run = &res.runs[0];
    assert_eq!(run.extras["euclidean_length"], run.best);
    assert!(run.extras["geo_length"] >= 6859.0);
    assert_eq!(run.extras["geo_length"].fract(), 0.0);
}

#[test]
fn data_dir_resolves_relative_instances() {
    let cfg = small(
        ProblemSpec::Qap {
            path: "toy6.dat".into(),
        },
        Algorithm::Ghosa,
    );
    let root = fixture("");
    assert!(run_experiment(&cfg, Some(&root)).is_ok());
}

#[test]
fn stats_ordering_across_benchmarks() {
    for f in [1u8, 6, 8, 13, 18] {
        let cfg = small(
            ProblemSpec::Benchmark {
                id: BenchmarkId::new(f).unwrap(),
                dim: None,
            },
            Algorithm::Pso,
        );
        let res = run_experiment(&cfg, None).unwrap();
        assert!(
            res.stats.best <= res.stats.mean && res.stats.mean <= res.stats.worst,
            "f{f}"
        );
        assert!(res.stats.sd >= 0.0);
    }
}
