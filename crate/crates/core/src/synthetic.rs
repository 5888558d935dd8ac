//! Seeded synthetic data: a regression benchmark with known informative
//! features, and a small Java project with a matching coverage report for
//! end-to-end runs.

use std::fmt::Write as _;
use std::path::PathBuf;

use coverageability_metrics::{FeatureVector, MetricSchema};
use ndarray::{Array2, Axis};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{split_indices, RobustScalerStats};
use crate::error::Result;
use crate::labeling::CoverageRecord;
use crate::learners::{train_members, train_vor, Hyperparameters, LearnerKind, Learned, TrainedModel};
use crate::selection::{evaluate, make_cv_plan, search, EvaluationReport, GridSpec};
use crate::rng::stream_rng;

pub const BENCHMARK_FEATURES: usize = 12;
pub const BENCHMARK_INFORMATIVE: usize = 10;
pub const BENCHMARK_NOISE: f64 = 0.05;
/// Scales the target into roughly [0, 1.1] so the noise is 5 % of its range.
pub const BENCHMARK_SCALE: f64 = 1.1;

fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// Noise-free target; features 10 and 11 are unused.
pub fn benchmark_signal(r: &[f64]) -> f64 {
    let s = sigmoid(12.0 * (r[0] - 0.5))
        + sigmoid(12.0 * (r[1] - 0.3))
        + r[2]
        + r[3] * r[3]
        + (std::f64::consts::PI * r[4]).sin()
        + sigmoid(12.0 * (r[5] - 0.7))
        + 2.0 * r[6] * r[7]
        + if r[8] > 0.5 { 1.0 } else { 0.0 }
        + r[9];
    BENCHMARK_SCALE * s / 8.0
}

/// `n` rows of 12 uniform features and a target with Gaussian noise.
pub fn benchmark(n: usize, seed: u64) -> (Array2<f64>, Vec<f64>) {
    let mut rng = stream_rng(seed, 0);
    let x = Array2::<f64>::from_shape_fn((n, BENCHMARK_FEATURES), |_| rng.gen_range(0.0..1.0));
    let noise = Normal::new(0.0, BENCHMARK_NOISE).expect("valid sigma");
    let mut nrng = stream_rng(seed, 1);
    let y = x
        .rows()
        .into_iter()
        .map(|r| benchmark_signal(r.as_slice().expect("standard layout")) + noise.sample(&mut nrng))
        .collect();
    (x, y)
}

/// A Java project of `classes` classes spread over a few packages,
/// including some trivial (tiny or data-only) classes.
pub fn java_corpus(classes: usize, seed: u64) -> Vec<(PathBuf, String)> {
    let mut rng = stream_rng(seed, 0);
    let mut out = Vec::with_capacity(classes);
    for i in 0..classes {
        let pkg = format!("gen.p{}", i % 4);
        let mut src = format!("package {pkg};\n\n");
        if i > 0 && rng.gen_bool(0.3) {
            let j = rng.gen_range(0..i);
            let _ = writeln!(src, "import gen.p{}.C{j};\n", j % 4);
        }
        let kind = rng.gen_range(0..10);
        let parent = if i > 0 && kind >= 2 && rng.gen_bool(0.2) {
            let j = rng.gen_range(0..i);
            if j % 4 != i % 4 {
                let _ = writeln!(src, "import gen.p{}.C{j};\n", j % 4);
            }
            format!(" extends C{j}")
        } else {
            String::new()
        };
        let _ = writeln!(src, "public class C{i}{parent} {{");
        let fields = rng.gen_range(0..6);
        for f in 0..fields {
            let vis = if rng.gen_bool(0.3) { "public" } else { "private" };
            let _ = writeln!(src, "    {vis} int f{f} = {};", rng.gen_range(0..100));
        }
        match kind {
            // data-only class
            0 => {
                let _ = writeln!(src, "    public int extra;\n    public String label;");
            }
            // tiny class
            1 => {
                let _ = writeln!(src, "    int one() {{ return 1; }}");
            }
            _ => {
                for f in 0..fields.min(2) {
                    let _ = writeln!(src, "    public int getF{f}() {{\n        return f{f};\n    }}");
                }
                let methods = rng.gen_range(1..6);
                for m in 0..methods {
                    let depth = rng.gen_range(1..4);
                    let body = coverageability_metrics::synth::random_method(&mut rng, depth);
                    let body = body.replacen("int m(", &format!("int m{m}("), 1);
                    for line in body.lines() {
                        let _ = writeln!(src, "    {line}");
                    }
                }
            }
        }
        src.push_str("}\n");
        out.push((PathBuf::from(format!("gen/p{}/C{i}.java", i % 4)), src));
    }
    out
}

/// Coverage that falls with size and method count, plus noise; one row
/// per class, two runs for every fifth class.
pub fn coverage_for(features: &[FeatureVector], seed: u64) -> Vec<CoverageRecord> {
    let schema = MetricSchema::full();
    let loc = schema.position("CSLOC").expect("CSLOC");
    let nom = schema.position("CSNOMNAMM").expect("CSNOMNAMM");
    let mut rng = stream_rng(seed, 1);
    let noise = Normal::new(0.0, 0.05).expect("valid sigma");
    let mut out = Vec::new();
    for (i, fv) in features.iter().enumerate() {
        let runs = if i % 5 == 0 { 2 } else { 1 };
        let suite = 1 + (fv.values[nom] as u64) * 2 + rng.gen_range(0..3);
        for _ in 0..runs {
            let base = 1.0 - 0.006 * fv.values[loc] - 0.02 * fv.values[nom];
            let statement = (base + noise.sample(&mut rng)).clamp(0.0, 1.0);
            let branch = (base - 0.1 + noise.sample(&mut rng)).clamp(0.0, 1.0);
            out.push(CoverageRecord {
                class: fv.class.clone(),
                statement,
                branch,
                suite_size: suite,
                repetitions: 1,
            });
        }
    }
    out
}

/// Held-out result of one learner on the benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkResult {
    pub model: TrainedModel,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    /// SGDR, MLPR, RFR, HGBR, then the tuned voter.
    pub learners: Vec<BenchmarkResult>,
    /// The voter with weights `[0, 1/6, 2/6, 3/6]` over the tuned members.
    pub weighted_voter: BenchmarkResult,
    pub x_test: Array2<f64>,
    pub y_test: Vec<f64>,
}

pub const BENCHMARK_VOTER_WEIGHTS: [f64; 4] = [0.0, 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0];

/// Benchmark names `X0..X11`.
pub fn benchmark_names() -> Vec<String> {
    (0..BENCHMARK_FEATURES).map(|j| format!("X{j}")).collect()
}

/// Split 75/25, robust-scale on the training rows, grid search every
/// learner with five shuffle-split folds, then score on the held-out rows.
pub fn run_benchmark(n: usize, seed: u64, spec: &GridSpec) -> Result<BenchmarkRun> {
    let (x, y) = benchmark(n, seed);
    let (train_idx, test_idx) = split_indices(n, 0.75, seed);
    let x_train = x.select(Axis(0), &train_idx);
    let y_train: Vec<f64> = train_idx.iter().map(|&i| y[i]).collect();
    let x_test = x.select(Axis(0), &test_idx);
    let y_test: Vec<f64> = test_idx.iter().map(|&i| y[i]).collect();
    let scaler = RobustScalerStats::fit(x_train.view());
    let xs = scaler.transform(x_train.view());
    let plan = make_cv_plan(xs.nrows(), seed)?;
    let finish = |hp: Hyperparameters, learned| -> Result<BenchmarkResult> {
        let model = TrainedModel::new(hp, seed, benchmark_names(), scaler.clone(), x_train.view(), learned);
        let report = evaluate(&y_test, &model.predict_raw(x_test.view())?)?;
        Ok(BenchmarkResult { model, report })
    };
    let mut learners = Vec::with_capacity(5);
    for kind in LearnerKind::BASE {
        let found = search(&spec.configurations(kind)?, xs.view(), &y_train, &plan, seed)?;
        learners.push(finish(found.best_hyperparameters().clone(), found.learned)?);
    }
    let members: [Hyperparameters; 4] = std::array::from_fn(|i| learners[i].model.hyperparameters.clone());
    let found = search(&spec.voter_configurations(&members)?, xs.view(), &y_train, &plan, seed)?;
    learners.push(finish(found.best_hyperparameters().clone(), found.learned)?);
    // same member seeds as a voter refit, so the members are the tuned ones
    let fitted = train_members(&members, xs.view(), &y_train, seed)?;
    let Hyperparameters::Vor(mut vp) = spec.voter_configurations(&members)?.remove(0) else {
        unreachable!("voter configurations are voters")
    };
    vp.weights = Some(BENCHMARK_VOTER_WEIGHTS);
    let weighted_voter = finish(Hyperparameters::Vor(vp), Learned::Voter(train_vor(fitted, Some(BENCHMARK_VOTER_WEIGHTS))?))?;
    Ok(BenchmarkRun {
        learners,
        weighted_voter,
        x_test,
        y_test,
    })
}
