//! Acceptance suite: one check per criterion, each at its stated tolerance
//! and time limit. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any fails.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use coverageability_core::dataset::{
    filter_trivial_classes, lof_outlier_removal, robust_scale, split_indices, trivial_kind_of, RobustScalerStats, TrivialKind, Variant,
};
use coverageability_core::inference::{predict_class_coverageability, OutcomeSource};
use coverageability_core::inspection::{classify_impact, pearson_correlation, permutation_importance, Impact};
use coverageability_core::labeling::{coverageability, mean_coverage};
use coverageability_core::learners::{
    train, train_rfr, train_sgdr, Activation, HgbrParams, Hyperparameters, Learned, LinearModel, MlpModel, RfrParams, SgdrParams,
    Schedule, TrainedModel,
};
use coverageability_core::selection::{evaluate, GridSpec};
use coverageability_core::synthetic::{benchmark, benchmark_names, run_benchmark, BENCHMARK_INFORMATIVE};
use coverageability_core::CoreError;
use coverageability_metrics::catalog::{compute_cc, CcVariant};
use coverageability_metrics::model::ast::Member;
use coverageability_metrics::model::cfg::build_cfg;
use coverageability_metrics::model::lexer::tokenize;
use coverageability_metrics::model::parser::parse_compilation_unit;
use coverageability_metrics::synth::random_method;
use coverageability_metrics::{extract_features, parse_project, MetricSchema, MetricsTable, ProjectModel};
use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "label and error formulas", limit: Some(Duration::from_secs(1)), run: formulas },
        Criterion { id: 2, name: "cyclomatic complexity variants", limit: Some(Duration::from_secs(5)), run: cc_variants },
        Criterion { id: 3, name: "schema and variant widths", limit: None, run: schema_counts },
        Criterion { id: 4, name: "metrics golden table", limit: None, run: golden_table },
        Criterion { id: 5, name: "preprocessing oracles", limit: None, run: preprocessing },
        Criterion { id: 6, name: "learner numerics", limit: None, run: learner_numerics },
        Criterion { id: 7, name: "synthetic benchmark", limit: Some(Duration::from_secs(120)), run: synthetic_benchmark },
        Criterion { id: 8, name: "permutation importance", limit: None, run: importance },
        Criterion { id: 9, name: "impact classification", limit: None, run: impact },
        Criterion { id: 10, name: "prediction rules and determinism", limit: None, run: prediction_and_determinism },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {}: PASS {} [{elapsed:.2?}] {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {} [{elapsed:.2?}] {why}", c.id, c.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn formulas() -> Check {
    ensure!(mean_coverage(0.8, 0.6) == 0.7, "mean_coverage(0.8, 0.6) = {}", mean_coverage(0.8, 0.6));
    ensure!(coverageability(1.0, 1, 1) == 1.0, "coverageability(1, 1, 1) != 1");
    for (e, n) in [(0.7, 10u64), (0.35, 3), (1.0, 17), (0.0, 4), (0.123456789, 99)] {
        let c = coverageability(e, n, n);
        ensure!(c == e, "b = |suite| gives {c}, expected {e}");
    }
    // y = (1, 2), prediction = (2, 4), by hand
    let r = evaluate(&[1.0, 2.0], &[2.0, 4.0]).map_err(|e| e.to_string())?;
    let mslge = ((2f64.ln() - 3f64.ln()).powi(2) + (3f64.ln() - 5f64.ln()).powi(2)) / 2.0;
    let expected = [
        ("MAE", r.mae, 1.5),
        ("MSE", r.mse, 2.5),
        ("RMSE", r.rmse, 2.5f64.sqrt()),
        ("MSLgE", r.mslge.unwrap_or(f64::NAN), mslge),
        ("MdAE", r.mdae, 1.5),
        ("R2", r.r2, -9.0),
    ];
    for (name, got, want) in expected {
        ensure!(close(got, want, 1e-12), "{name}: {got} vs {want}");
    }
    let y = [0.25, 0.5, 0.75, 1.0, 0.125, 0.375];
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let r2 = evaluate(&y, &[mean; 6]).map_err(|e| e.to_string())?.r2;
    ensure!(r2 == 0.0, "constant-mean predictor R2 = {r2}");
    Ok("identities exact, two-point errors within 1e-12".into())
}

fn method_cc(method_src: &str) -> Result<[u32; 4], String> {
    let src = format!("class T {{ {method_src} }}");
    let tokens = tokenize(&src).map_err(|e| e.to_string())?;
    let unit = parse_compilation_unit(&tokens).map_err(|e| e.to_string())?;
    let Some(Member::Method(m)) = unit.types.first().and_then(|t| t.members.first()) else {
        return Err("no method parsed".into());
    };
    let g = build_cfg(m).ok_or("method without body")?;
    Ok(CcVariant::ALL.map(|v| compute_cc(&g, v)))
}

fn cc_variants() -> Check {
    let [cc, strict, _, _] = method_cc("void m(boolean x, boolean y, boolean z) { if (x && y || z) s(); }")?;
    ensure!(cc == 2 && strict == 4, "CC = {cc}, strict = {strict}");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let src = random_method(&mut rng, 1 + i % 4);
        let [cc, strict, modified, essential] = method_cc(&src)?;
        ensure!(
            strict >= cc && cc >= modified && modified >= 1 && essential >= 1,
            "method {i}: CC {cc}, strict {strict}, modified {modified}, essential {essential}"
        );
    }
    Ok("CC 2, strict 4; ordering holds on 200 generated methods".into())
}

fn schema_counts() -> Check {
    let s = MetricSchema::full();
    ensure!(s.len() == 296, "full schema has {}", s.len());
    ensure!(s.base_width("CSCC") == 48, "class CC web has {}", s.base_width("CSCC"));
    let widths: Vec<usize> = Variant::ALL.iter().map(|v| v.width()).collect();
    ensure!(widths == [296, 15, 194, 177, 71], "variant widths {widths:?}");
    Ok("296 features, CC web 48, widths 296/15/194/177/71".into())
}

fn metrics_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../metrics/tests/fixtures")
}

fn golden_table() -> Check {
    let model = parse_project(&metrics_fixtures().join("corpus")).map_err(|e| e.to_string())?;
    let table = MetricsTable::from_vectors(extract_features(&model));
    let file = std::fs::File::open(metrics_fixtures().join("corpus_golden.csv")).map_err(|e| e.to_string())?;
    let golden = MetricsTable::read_from(file).map_err(|e| e.to_string())?;
    ensure!(golden.names == table.names, "column names differ");
    ensure!(golden.rows.len() == table.rows.len(), "{} rows vs {}", table.rows.len(), golden.rows.len());
    let (mut ints, mut reals) = (0, 0);
    for (g, t) in golden.rows.iter().zip(&table.rows) {
        ensure!(g.class == t.class, "class {} vs {}", t.class, g.class);
        for ((name, a), b) in golden.names.iter().zip(&g.values).zip(&t.values) {
            if a.fract() == 0.0 {
                ints += 1;
                ensure!(a == b, "{} {name}: {b} vs golden {a}", g.class);
            } else {
                reals += 1;
                ensure!(close(*a, *b, 1e-9), "{} {name}: {b} vs golden {a}", g.class);
            }
        }
    }
    Ok(format!("{} classes, {ints} integer cells exact, {reals} real cells within 1e-9", table.rows.len()))
}

/// Textbook LOF with exactly `k` neighbours, ties broken by index.
fn lof_oracle(p: &[(f64, f64)], k: usize) -> Vec<f64> {
    let n = p.len();
    let d = |i: usize, j: usize| ((p[i].0 - p[j].0).powi(2) + (p[i].1 - p[j].1).powi(2)).sqrt();
    let knn: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| d(i, a).total_cmp(&d(i, b)).then(a.cmp(&b)));
            others.truncate(k);
            others
        })
        .collect();
    let kdist: Vec<f64> = (0..n).map(|i| d(i, knn[i][k - 1])).collect();
    let lrd: Vec<f64> = (0..n)
        .map(|i| k as f64 / knn[i].iter().map(|&j| d(i, j).max(kdist[j])).sum::<f64>())
        .collect();
    (0..n).map(|i| knn[i].iter().map(|&j| lrd[j] / lrd[i]).sum::<f64>() / k as f64).collect()
}

fn preprocessing() -> Check {
    let mut pts: Vec<(f64, f64)> = (0..5).flat_map(|i| (0..5).map(move |j| (i as f64, j as f64 * 1.1))).collect();
    pts.push((12.0, 13.0));
    let outlier = pts.len() - 1;
    let x = Array2::<f64>::from_shape_fn((pts.len(), 2), |(i, j)| if j == 0 { pts[i].0 } else { pts[i].1 });
    let k = 5;
    let out = lof_outlier_removal(x.view(), k, 1.5);
    ensure!(out.removed == vec![outlier], "LOF removed {:?}", out.removed);
    let scores = out.scores.ok_or("LOF skipped")?;
    for (i, (s, o)) in scores.iter().zip(lof_oracle(&pts, k)).enumerate() {
        ensure!(close(*s, o, 1e-8 * o.max(1.0)), "row {i}: LOF {s} vs oracle {o}");
    }

    let col = Array2::from_shape_vec((5, 1), vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let (scaled, _, _) = robust_scale(col.view(), col.view());
    ensure!(scaled.column(0).to_vec() == [-1.0, -0.5, 0.0, 0.5, 1.0], "robust scaling gave {scaled:?}");

    let sources = [
        ("p/Tiny.java", "package p;\npublic class Tiny { int one() { return 1; } }\n"),
        (
            "p/Point.java",
            "package p;\n\npublic class Point {\n    public int x;\n    public int y;\n    public int z;\n    private String label;\n}\n",
        ),
        (
            "p/Counter.java",
            "package p;\n\npublic class Counter {\n    private int n;\n\n    public void bump(int by) {\n        if (by > 0) {\n            n += by;\n        } else {\n            n = 0;\n        }\n    }\n}\n",
        ),
    ];
    let vectors = extract_features(&ProjectModel::from_sources(&sources));
    let (kept, removed) = filter_trivial_classes(vectors, |v| v.values.as_slice());
    let removed: BTreeMap<String, TrivialKind> = removed.into_iter().map(|(v, k)| (v.class, k)).collect();
    let expected: BTreeMap<String, TrivialKind> =
        [("p.Point".to_string(), TrivialKind::Data), ("p.Tiny".to_string(), TrivialKind::Simple)].into();
    ensure!(removed == expected, "filter removed {removed:?}");
    ensure!(kept.len() == 1 && kept[0].class == "p.Counter", "kept {:?}", kept.iter().map(|v| &v.class).collect::<Vec<_>>());
    Ok("planted outlier only, LOF within 1e-8 of oracle, scaling exact, Simple and Data dropped".into())
}

/// Solves the least-squares normal equations with an intercept column.
fn least_squares(x: &Array2<f64>, y: &[f64]) -> Vec<f64> {
    let (n, d) = x.dim();
    let m = d + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..n {
        let row: Vec<f64> = x.row(i).iter().copied().chain(std::iter::once(1.0)).collect();
        for r in 0..m {
            for c in 0..m {
                a[r][c] += row[r] * row[c];
            }
            a[r][m] += row[r] * y[i];
        }
    }
    for c in 0..m {
        let p = (c..m).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        for r in 0..m {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=m {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    (0..m).map(|r| a[r][m] / a[r][r]).collect()
}

fn learner_numerics() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // MLP gradient against central differences
    let x = Array2::<f64>::from_shape_fn((24, 4), |_| rng.gen_range(-1.0..1.0));
    let y: Vec<f64> = (0..24).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut worst = 0.0f64;
    for (probe, activation) in (0..100).zip([Activation::Tanh, Activation::Logistic].into_iter().cycle()) {
        let mut net = MlpModel::initialise(4, &[6, 5], activation, probe as u64);
        let mut p = net.parameters();
        for v in p.iter_mut() {
            *v += rng.gen_range(-0.3..0.3);
        }
        net.set_parameters(&p);
        let (_, grad) = net.loss_and_gradient(x.view(), &y);
        let i = rng.gen_range(0..p.len());
        let h = 1e-5;
        let mut at = |v: f64| {
            let mut q = p.clone();
            q[i] = v;
            net.set_parameters(&q);
            net.loss_and_gradient(x.view(), &y).0
        };
        let fd = (at(p[i] + h) - at(p[i] - h)) / (2.0 * h);
        let rel = (fd - grad[i]).abs() / fd.abs().max(grad[i].abs()).max(1e-6);
        worst = worst.max(rel);
    }
    ensure!(worst <= 1e-5, "MLP gradient worst relative error {worst:e}");

    // forest prediction is the mean of its trees
    let xf = Array2::<f64>::from_shape_fn((200, 3), |_| rng.gen_range(0.0..1.0));
    let yf: Vec<f64> = xf.rows().into_iter().map(|r| r[0] * 2.0 + r[1].sin()).collect();
    let forest = train_rfr(xf.view(), &yf, &RfrParams { n_estimators: 25, ..RfrParams::default() }, 3).map_err(|e| e.to_string())?;
    for r in xf.rows() {
        let row = r.to_vec();
        let mean = forest.trees.iter().map(|t| t.predict_row(&row)).sum::<f64>() / forest.trees.len() as f64;
        ensure!(forest.predict_row(&row) == mean, "forest prediction differs from tree mean");
    }

    // boosting stages telescope to the final prediction
    let hp = Hyperparameters::Hgbr(HgbrParams { max_iter: 40, ..HgbrParams::default() });
    let Learned::Boosted(boosted) = train(&hp, xf.view(), &yf, 3).map_err(|e| e.to_string())? else {
        return Err("HGBR did not return a boosted model".into());
    };
    for r in xf.rows() {
        let row = r.to_vec();
        let staged = boosted.staged_predict_row(&row);
        ensure!(staged[0] == boosted.baseline, "stage 0 is not the baseline");
        for (k, t) in boosted.trees.iter().enumerate() {
            ensure!(staged[k + 1] == staged[k] + boosted.learning_rate * t.predict_row(&row), "stage {k} does not telescope");
        }
        ensure!(*staged.last().unwrap() == boosted.predict_row(&row), "last stage differs from prediction");
    }

    // SGD on a noiseless linear target
    let xs = Array2::<f64>::from_shape_fn((400, 3), |_| rng.gen_range(-1.0..1.0));
    let truth = [2.0, -1.0, 0.3];
    let ys: Vec<f64> = xs.rows().into_iter().map(|r| 0.5 + r.iter().zip(truth).map(|(a, b)| a * b).sum::<f64>()).collect();
    let ols = least_squares(&xs, &ys);
    let hp = SgdrParams { max_iter: 200, learning_rate: Schedule::Invscaling, alpha: 1e-6, ..SgdrParams::default() };
    let LinearModel { weights, .. } = train_sgdr(xs.view(), &ys, &hp, 1).map_err(|e| e.to_string())?;
    let slope_err = weights.iter().zip(&ols).map(|(w, o)| (w - o).abs()).fold(0.0, f64::max);
    ensure!(slope_err <= 1e-2, "SGD slopes {weights:?} vs least squares {:?}", &ols[..3]);
    Ok(format!("MLP worst rel {worst:.1e}, forest and boosting exact, SGD slope error {slope_err:.1e}"))
}

fn synthetic_benchmark() -> Check {
    let run = run_benchmark(2000, 1, &GridSpec::reduced()).map_err(|e| e.to_string())?;
    let hgbr = &run.learners[3];
    let vor = &run.weighted_voter;
    let best_sub = run.learners[..4].iter().map(|l| l.report.rmse).fold(f64::INFINITY, f64::min);
    let summary: Vec<String> = run
        .learners
        .iter()
        .map(|l| format!("{} R2 {:.3}", l.model.kind, l.report.r2))
        .chain(std::iter::once(format!("weighted vor R2 {:.3} RMSE {:.4}", vor.report.r2, vor.report.rmse)))
        .collect();
    let summary = summary.join(", ");
    ensure!(hgbr.report.r2 >= 0.80, "HGBR R2 {:.4} < 0.80 ({summary})", hgbr.report.r2);
    ensure!(vor.report.r2 >= 0.80, "voter R2 {:.4} < 0.80 ({summary})", vor.report.r2);
    ensure!(
        vor.report.rmse <= best_sub + 0.01,
        "voter RMSE {:.4} > best sub-model {best_sub:.4} + 0.01 ({summary})",
        vor.report.rmse
    );
    Ok(summary)
}

/// Hyperparameters of the benchmark's tuned HGBR, reused across seeds.
fn tuned_hgbr() -> Result<Hyperparameters, String> {
    let spec = GridSpec::reduced();
    let configs = spec.configurations(coverageability_core::learners::LearnerKind::Hgbr).map_err(|e| e.to_string())?;
    let (x, y) = benchmark(2000, 1);
    let (tr, _) = split_indices(2000, 0.75, 1);
    let xt = x.select(Axis(0), &tr);
    let yt: Vec<f64> = tr.iter().map(|&i| y[i]).collect();
    let scaler = RobustScalerStats::fit(xt.view());
    let plan = coverageability_core::selection::make_cv_plan(tr.len(), 1).map_err(|e| e.to_string())?;
    let found = coverageability_core::selection::search(&configs, scaler.transform(xt.view()).view(), &yt, &plan, 1)
        .map_err(|e| e.to_string())?;
    Ok(found.best_hyperparameters().clone())
}

fn fit_on_benchmark(hp: &Hyperparameters, seed: u64) -> Result<(TrainedModel, Array2<f64>, Vec<f64>), String> {
    let (x, y) = benchmark(2000, seed);
    let (tr, te) = split_indices(2000, 0.75, seed);
    let xt = x.select(Axis(0), &tr);
    let yt: Vec<f64> = tr.iter().map(|&i| y[i]).collect();
    let scaler = RobustScalerStats::fit(xt.view());
    let learned = train(hp, scaler.transform(xt.view()).view(), &yt, seed).map_err(|e| e.to_string())?;
    let model = TrainedModel::new(hp.clone(), seed, benchmark_names(), scaler, xt.view(), learned);
    Ok((model, x.select(Axis(0), &te), te.iter().map(|&i| y[i]).collect()))
}

fn unused_features(model: &TrainedModel) -> Vec<usize> {
    let trees = match &model.learned {
        Learned::Boosted(b) => &b.trees,
        Learned::Forest(f) => &f.trees,
        _ => return Vec::new(),
    };
    let used: HashSet<usize> = trees.iter().flat_map(|t| t.split_features()).collect();
    (0..model.features.len()).filter(|j| !used.contains(j)).collect()
}

fn importance() -> Check {
    let hp = tuned_hgbr()?;
    let informative: HashSet<String> = benchmark_names().into_iter().take(BENCHMARK_INFORMATIVE).collect();
    let mut hits = 0;
    let mut zero_checked = 0;
    for seed in 1..=20u64 {
        let (model, x, y) = fit_on_benchmark(&hp, seed)?;
        let report = permutation_importance(&model, x.view(), &y, 50, seed).map_err(|e| e.to_string())?;
        let top: HashSet<String> = report.top(BENCHMARK_INFORMATIVE).iter().map(|f| f.feature.clone()).collect();
        if top == informative {
            hits += 1;
        }
        for j in unused_features(&model) {
            let f = report.features.iter().find(|f| f.feature == model.features[j]).unwrap();
            ensure!(f.drops.iter().all(|&d| d == 0.0), "seed {seed}: unused {} has drops {:?}", f.feature, f.drops);
            zero_checked += 1;
        }
    }
    // a shallow model that cannot afford splits on the noise features
    let shallow = Hyperparameters::Hgbr(HgbrParams { max_depth: Some(2), max_iter: 10, ..HgbrParams::default() });
    let (model, x, y) = fit_on_benchmark(&shallow, 1)?;
    let unused = unused_features(&model);
    ensure!(!unused.is_empty(), "shallow model splits on every feature");
    let report = permutation_importance(&model, x.view(), &y, 50, 1).map_err(|e| e.to_string())?;
    for j in unused {
        let f = report.features.iter().find(|f| f.feature == model.features[j]).unwrap();
        ensure!(f.drops.iter().all(|&d| d == 0.0), "shallow model: unused {} has drops {:?}", f.feature, f.drops);
        zero_checked += 1;
    }
    ensure!(hits >= 19, "informative features fill the top 10 in {hits}/20 runs");
    Ok(format!("top 10 exact in {hits}/20 runs ({hp}); {zero_checked} unused-feature checks all exactly 0"))
}

fn impact() -> Check {
    let triples = [(-0.00820, 0.297, Impact::Unknown), (0.14445, 0.0009, Impact::Positive), (-0.31905, 1e-20, Impact::Negative)];
    for (r, p, want) in triples {
        ensure!(classify_impact(r, p) == want, "({r}, {p}) classified {:?}", classify_impact(r, p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..20 {
        let n = rng.gen_range(5..60);
        let slope = rng.gen_range(-1.0..1.0);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| slope * v + rng.gen_range(-3.0..3.0)).collect();
        let (r, p) = pearson_correlation(&x, &y).map_err(|e| e.to_string())?;
        let nf = n as f64;
        let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|b| b * b).sum();
        let r_oracle = (nf * sxy - sx * sy) / ((nf * sxx - sx * sx).sqrt() * (nf * syy - sy * sy).sqrt());
        let df = nf - 2.0;
        let t = r_oracle * (df / (1.0 - r_oracle * r_oracle)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| e.to_string())?;
        let p_oracle = 2.0 * dist.cdf(-t.abs());
        ensure!(close(r, r_oracle, 1e-9), "case {case}: r {r} vs {r_oracle}");
        ensure!(close(p, p_oracle, 1e-9), "case {case}: p {p} vs {p_oracle}");
    }
    Ok("three labels reproduced; r and p within 1e-9 on 20 fixtures".into())
}

fn constant_model(value: f64) -> TrainedModel {
    let names = vec!["CSLOC".to_string(), "CSNOMNAMM".into()];
    TrainedModel::new(
        Hyperparameters::Sgdr(SgdrParams::default()),
        0,
        names,
        RobustScalerStats::identity(2),
        Array2::from_elem((2, 2), 1.0).view(),
        Learned::Linear(LinearModel { weights: vec![0.0, 0.0], intercept: value }),
    )
}

fn rules() -> Result<(), String> {
    let sources = [
        ("q/Tiny.java", "package q;\nclass Tiny { int v() { return 1; } }\n"),
        ("q/Bag.java", "package q;\n\nclass Bag {\n    int a;\n    static int b;\n    public int getA() {\n        return a;\n    }\n}\n"),
        (
            "q/Work.java",
            "package q;\n\nclass Work {\n    int run(int n) {\n        int s = 0;\n        for (int i = 0; i < n; i++) {\n            s += i;\n        }\n        return s;\n    }\n}\n",
        ),
    ];
    let project = ProjectModel::from_sources(&sources);
    let fv = extract_features(&project);
    let get = |c: &str, m: &str| fv.iter().find(|v| v.class == c).and_then(|v| v.get(m)).unwrap();
    ensure!(get("q.Tiny", "CSLOC") < 5.0, "Tiny has CSLOC {}", get("q.Tiny", "CSLOC"));
    ensure!(
        get("q.Bag", "CSNOMNAMM") == 0.0 && get("q.Bag", "CSNOIA") + get("q.Bag", "CSNOSA") == 2.0 && get("q.Bag", "CSLOC") >= 5.0,
        "Bag is not a data class"
    );
    ensure!(trivial_kind_of(&fv.iter().find(|v| v.class == "q.Work").unwrap().values).is_none(), "Work is trivial");
    let bad = constant_model(1.2);
    let predict = |c: &str, m: &TrainedModel| predict_class_coverageability(&project, c, m);
    let simple = predict("q.Tiny", &bad).map_err(|e| e.to_string())?;
    ensure!(simple.coverageability == 1.0 && simple.source == OutcomeSource::RuleSimple, "Tiny: {simple:?}");
    let data = predict("q.Bag", &bad).map_err(|e| e.to_string())?;
    ensure!(data.coverageability == 1.0 && data.source == OutcomeSource::RuleData, "Bag: {data:?}");
    let model = predict("q.Work", &constant_model(0.42)).map_err(|e| e.to_string())?;
    ensure!(model.coverageability == 0.42 && model.source == OutcomeSource::Model, "Work: {model:?}");
    match predict("q.Work", &bad) {
        Err(CoreError::Prediction { value, .. }) if value == 1.2 => {}
        other => return Err(format!("out-of-range prediction gave {other:?}")),
    }
    ensure!(matches!(predict("q.Missing", &bad), Err(CoreError::UnknownClass(_))), "missing class accepted");
    Ok(())
}

fn cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_coverageability"))
        .args(args)
        .env_remove("COVERAGEABILITY_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "`{}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr));
    Ok(())
}

fn tree_bytes(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn same_trees(a: &Path, b: &Path) -> Result<usize, String> {
    let (ta, tb) = (tree_bytes(a), tree_bytes(b));
    ensure!(ta.keys().eq(tb.keys()), "different files under {} and {}", a.display(), b.display());
    for (k, v) in &ta {
        ensure!(tb[k] == *v, "{} differs between reruns", k.display());
    }
    Ok(ta.len())
}

fn determinism() -> Result<usize, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for run in ["a", "b"] {
        let root = tmp.path().join(run);
        let s = |p: &str| root.join(p).to_string_lossy().into_owned();
        let syn = s("syn");
        cli(&["synth", "--seed", "11", "--classes", "80", "--out", &syn])?;
        cli(&["pipeline", &s("syn/pipeline.toml")])?;
        let src = s("syn/src");
        let cov = s("syn/coverage.csv");
        cli(&["extract", &src, "--out", &s("cmd/metrics.csv")])?;
        cli(&["label", &cov, "--b", "2", "--out", &s("cmd/labels.csv")])?;
        cli(&["dataset", "--seed", "11", "--metrics", &s("cmd/metrics.csv"), "--coverage", &cov, "--out", &s("cmd/dataset")])?;
        cli(&["train", "--seed", "11", "--dataset", &s("cmd/dataset"), "--learner", "all", "--out", &s("cmd/models")])?;
        let vor = s("cmd/models/vor.json");
        cli(&["evaluate", "--model", &vor, "--dataset", &s("cmd/dataset"), "--out", &s("cmd/evaluation.json")])?;
        // trees stay inside the label range, so no class trips the range check
        cli(&["predict", &src, "--model", &s("cmd/models/hgbr.json"), "--out", &s("cmd/predictions.csv")])?;
        let _ = Command::new(env!("CARGO_BIN_EXE_coverageability"))
            .args(["gate", &s("cmd/predictions.csv"), "--report", &s("cmd/gate.json")])
            .output()
            .map_err(|e| e.to_string())?;
        cli(&["inspect", "--seed", "11", "--model", &vor, "--dataset", &s("cmd/dataset"), "--repeats", "5", "--out", &s("cmd")])?;
        cli(&["report", &s("cmd/labels.csv"), "--svg", "--out", &s("cmd/distribution.csv")])?;
    }
    files += same_trees(&tmp.path().join("a"), &tmp.path().join("b"))?;
    Ok(files)
}

fn prediction_and_determinism() -> Check {
    rules()?;
    let files = determinism()?;
    Ok(format!("rule-simple, rule-data, model and Prediction Error exercised; {files} artifacts byte-identical across reruns"))
}
