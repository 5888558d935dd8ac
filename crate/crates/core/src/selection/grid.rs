//! Exhaustive grid search scored by mean validation RMSE over the CV plan,
//! followed by a refit of the winner on the whole training set.

use std::io::Write;

use ndarray::{ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{CoreError, Result};
use crate::learners::{
    self, train, voter, Activation, BoostLoss, Criterion, HgbrParams, Hyperparameters, LearnerKind, Learned,
    LearningRateMode, MlpParams, Penalty, RfrParams, Schedule, SgdLoss, SgdrParams, TrainedModel, VorParams,
};

use super::cv::{fold_seed, make_cv_plan, CvPlan, FOLDS};
use super::evaluate::rmse;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgdrGrid {
    pub loss: Vec<SgdLoss>,
    pub penalty: Vec<Penalty>,
    pub learning_rate: Vec<Schedule>,
    pub max_iter: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpGrid {
    pub hidden_layer_sizes: Vec<Vec<usize>>,
    pub activation: Vec<Activation>,
    pub learning_rate: Vec<LearningRateMode>,
    pub epochs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfrGrid {
    pub n_estimators: Vec<usize>,
    pub criterion: Vec<Criterion>,
    pub max_depth: Vec<usize>,
    pub min_samples_split: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HgbrGrid {
    pub loss: Vec<BoostLoss>,
    pub max_depth: Vec<usize>,
    pub min_samples_leaf: Vec<usize>,
    pub max_iter: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VorGrid {
    /// One entry per candidate; an empty list means equal weights.
    pub weights: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub sgdr: SgdrGrid,
    pub mlp: MlpGrid,
    pub rfr: RfrGrid,
    pub hgbr: HgbrGrid,
    pub vor: VorGrid,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::reduced()
    }
}

fn steps(from: usize, to_exclusive: usize, step: usize) -> Vec<usize> {
    (from..to_exclusive).step_by(step).collect()
}

fn voter_weights() -> VorGrid {
    VorGrid {
        weights: vec![vec![], vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], vec![0.0, 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]],
    }
}

impl GridSpec {
    /// The complete candidate lists.
    pub fn full() -> Self {
        GridSpec {
            sgdr: SgdrGrid {
                loss: vec![SgdLoss::SquaredLoss, SgdLoss::Huber],
                penalty: vec![Penalty::L2, Penalty::L1, Penalty::Elasticnet],
                learning_rate: vec![Schedule::Invscaling, Schedule::Optimal, Schedule::Constant, Schedule::Adaptive],
                max_iter: steps(50, 500, 50),
            },
            mlp: MlpGrid {
                hidden_layer_sizes: vec![vec![128, 64], vec![256, 100], vec![512, 256, 100]],
                activation: vec![Activation::Relu, Activation::Tanh, Activation::Logistic],
                learning_rate: vec![LearningRateMode::Constant, LearningRateMode::Adaptive],
                epochs: steps(100, 500, 50),
            },
            rfr: RfrGrid {
                n_estimators: steps(50, 500, 50),
                criterion: vec![Criterion::Mse, Criterion::Mae],
                max_depth: steps(3, 50, 1),
                min_samples_split: steps(2, 30, 2),
            },
            hgbr: HgbrGrid {
                loss: vec![BoostLoss::LeastSquares, BoostLoss::LeastAbsoluteDeviation],
                max_depth: steps(3, 50, 1),
                min_samples_leaf: steps(5, 50, 10),
                max_iter: steps(50, 500, 50),
            },
            vor: voter_weights(),
        }
    }

    /// A subset of the complete lists that keeps a full run to minutes.
    pub fn reduced() -> Self {
        GridSpec {
            sgdr: SgdrGrid {
                loss: vec![SgdLoss::SquaredLoss, SgdLoss::Huber],
                penalty: vec![Penalty::L2, Penalty::Elasticnet],
                learning_rate: vec![Schedule::Invscaling, Schedule::Adaptive],
                max_iter: vec![50, 200],
            },
            mlp: MlpGrid {
                hidden_layer_sizes: vec![vec![128, 64]],
                activation: vec![Activation::Relu, Activation::Tanh],
                learning_rate: vec![LearningRateMode::Adaptive],
                epochs: vec![100, 200],
            },
            rfr: RfrGrid {
                n_estimators: vec![100],
                criterion: vec![Criterion::Mse],
                max_depth: vec![10, 30],
                min_samples_split: vec![2, 10],
            },
            hgbr: HgbrGrid {
                loss: vec![BoostLoss::LeastSquares],
                max_depth: vec![3, 10],
                min_samples_leaf: vec![5, 25],
                max_iter: vec![100, 300],
            },
            vor: voter_weights(),
        }
    }

    /// Base-learner configurations in enumeration order (last knob fastest).
    pub fn configurations(&self, kind: LearnerKind) -> Result<Vec<Hyperparameters>> {
        let mut out = Vec::new();
        match kind {
            LearnerKind::Sgdr => {
                let g = &self.sgdr;
                for &loss in &g.loss {
                    for &penalty in &g.penalty {
                        for &learning_rate in &g.learning_rate {
                            for &max_iter in &g.max_iter {
                                out.push(Hyperparameters::Sgdr(SgdrParams {
                                    loss,
                                    penalty,
                                    learning_rate,
                                    max_iter,
                                    ..SgdrParams::default()
                                }));
                            }
                        }
                    }
                }
            }
            LearnerKind::Mlp => {
                let g = &self.mlp;
                for hidden in &g.hidden_layer_sizes {
                    for &activation in &g.activation {
                        for &learning_rate in &g.learning_rate {
                            for &epochs in &g.epochs {
                                out.push(Hyperparameters::Mlp(MlpParams {
                                    hidden_layer_sizes: hidden.clone(),
                                    activation,
                                    learning_rate,
                                    epochs,
                                    ..MlpParams::default()
                                }));
                            }
                        }
                    }
                }
            }
            LearnerKind::Rfr => {
                let g = &self.rfr;
                for &n_estimators in &g.n_estimators {
                    for &criterion in &g.criterion {
                        for &depth in &g.max_depth {
                            for &min_samples_split in &g.min_samples_split {
                                out.push(Hyperparameters::Rfr(RfrParams {
                                    n_estimators,
                                    criterion,
                                    max_depth: Some(depth),
                                    min_samples_split,
                                    ..RfrParams::default()
                                }));
                            }
                        }
                    }
                }
            }
            LearnerKind::Hgbr => {
                let g = &self.hgbr;
                for &loss in &g.loss {
                    for &depth in &g.max_depth {
                        for &min_samples_leaf in &g.min_samples_leaf {
                            for &max_iter in &g.max_iter {
                                out.push(Hyperparameters::Hgbr(HgbrParams {
                                    loss,
                                    max_depth: Some(depth),
                                    min_samples_leaf,
                                    max_iter,
                                    ..HgbrParams::default()
                                }));
                            }
                        }
                    }
                }
            }
            LearnerKind::Vor => {
                return Err(CoreError::InvalidArgument(
                    "voter candidates need the tuned member configurations".into(),
                ))
            }
        }
        Ok(out)
    }

    /// Voter candidates around fixed members (SGDR, MLPR, RFR, HGBR order).
    pub fn voter_configurations(&self, members: &[Hyperparameters; 4]) -> Result<Vec<Hyperparameters>> {
        let (sgdr, mlp, rfr, hgbr) = match members {
            [Hyperparameters::Sgdr(a), Hyperparameters::Mlp(b), Hyperparameters::Rfr(c), Hyperparameters::Hgbr(d)] => {
                (a, b, c, d)
            }
            _ => return Err(CoreError::InvalidHyperparameters("voter members must be SGDR, MLPR, RFR, HGBR".into())),
        };
        self.vor
            .weights
            .iter()
            .map(|w| {
                let weights = match w.as_slice() {
                    [] => None,
                    [a, b, c, d] => Some([*a, *b, *c, *d]),
                    _ => return Err(CoreError::InvalidHyperparameters(format!("voter weights {w:?} need 4 entries"))),
                };
                voter::check_weights(&weights)?;
                Ok(Hyperparameters::Vor(VorParams {
                    weights,
                    sgdr: sgdr.clone(),
                    mlp: mlp.clone(),
                    rfr: rfr.clone(),
                    hgbr: hgbr.clone(),
                }))
            })
            .collect()
    }

    pub fn cardinality(&self, kind: LearnerKind) -> usize {
        match kind {
            LearnerKind::Sgdr => self.sgdr.loss.len() * self.sgdr.penalty.len() * self.sgdr.learning_rate.len() * self.sgdr.max_iter.len(),
            LearnerKind::Mlp => {
                self.mlp.hidden_layer_sizes.len() * self.mlp.activation.len() * self.mlp.learning_rate.len() * self.mlp.epochs.len()
            }
            LearnerKind::Rfr => {
                self.rfr.n_estimators.len() * self.rfr.criterion.len() * self.rfr.max_depth.len() * self.rfr.min_samples_split.len()
            }
            LearnerKind::Hgbr => {
                self.hgbr.loss.len() * self.hgbr.max_depth.len() * self.hgbr.min_samples_leaf.len() * self.hgbr.max_iter.len()
            }
            LearnerKind::Vor => self.vor.weights.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub id: usize,
    pub hyperparameters: Hyperparameters,
    /// `inf` marks a fold whose training failed.
    pub fold_rmse: Vec<f64>,
    pub mean_rmse: f64,
}

#[derive(Debug, Clone)]
pub struct Search {
    pub trace: Vec<TraceEntry>,
    pub best: usize,
    /// The winner refit on every training row.
    pub learned: Learned,
}

impl Search {
    pub fn best_hyperparameters(&self) -> &Hyperparameters {
        &self.trace[self.best].hyperparameters
    }

    pub fn best_score(&self) -> f64 {
        self.trace[self.best].mean_rmse
    }
}

struct FoldData {
    x_train: ndarray::Array2<f64>,
    y_train: Vec<f64>,
    x_valid: ndarray::Array2<f64>,
    y_valid: Vec<f64>,
}

fn fold_data(x: ArrayView2<f64>, y: &[f64], plan: &CvPlan) -> Vec<FoldData> {
    plan.folds
        .iter()
        .map(|f| FoldData {
            x_train: x.select(Axis(0), &f.train),
            y_train: f.train.iter().map(|&i| y[i]).collect(),
            x_valid: x.select(Axis(0), &f.validation),
            y_valid: f.validation.iter().map(|&i| y[i]).collect(),
        })
        .collect()
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

fn score(hp: &Hyperparameters, fold: &FoldData, seed: u64) -> f64 {
    match train(hp, fold.x_train.view(), &fold.y_train, seed) {
        Ok(model) => finite_or_inf(rmse(&fold.y_valid, &model.predict(fold.x_valid.view()))),
        Err(e) => {
            log::debug!("{hp}: {e}");
            f64::INFINITY
        }
    }
}

/// Voter candidates that differ only in weights share one member fit per fold.
fn shared_members(configs: &[Hyperparameters]) -> Option<[Hyperparameters; 4]> {
    let Hyperparameters::Vor(first) = configs.first()? else {
        return None;
    };
    configs
        .iter()
        .all(|c| matches!(c, Hyperparameters::Vor(p) if p.sgdr == first.sgdr && p.mlp == first.mlp && p.rfr == first.rfr && p.hgbr == first.hgbr))
        .then(|| first.members())
}

fn voter_scores(configs: &[Hyperparameters], members: &[Hyperparameters; 4], folds: &[FoldData], seed: u64) -> Vec<Vec<f64>> {
    let per_fold: Vec<Vec<f64>> = folds
        .par_iter()
        .enumerate()
        .map(|(f, fold)| {
            let Ok(fitted) = learners::train_members(members, fold.x_train.view(), &fold.y_train, fold_seed(seed, f)) else {
                return vec![f64::INFINITY; configs.len()];
            };
            let preds: Vec<Vec<f64>> = fitted.iter().map(|m| m.predict(fold.x_valid.view())).collect();
            configs
                .iter()
                .map(|c| {
                    let Hyperparameters::Vor(p) = c else { unreachable!() };
                    let combined: Vec<f64> =
                        (0..fold.y_valid.len()).map(|r| voter::combine(&p.weights, |i| preds[i][r])).collect();
                    finite_or_inf(rmse(&fold.y_valid, &combined))
                })
                .collect()
        })
        .collect();
    (0..configs.len()).map(|c| per_fold.iter().map(|f| f[c]).collect()).collect()
}

/// Scores every configuration on the plan's folds (rows of `x` are already
/// scaled training rows) and refits the winner on all of `x`.
pub fn search(configs: &[Hyperparameters], x: ArrayView2<f64>, y: &[f64], plan: &CvPlan, seed: u64) -> Result<Search> {
    if configs.is_empty() {
        return Err(CoreError::Empty("grid without configurations"));
    }
    if x.nrows() != y.len() {
        return Err(CoreError::LengthMismatch { left: x.nrows(), right: y.len() });
    }
    let folds = fold_data(x, y, plan);
    let scores: Vec<Vec<f64>> = match shared_members(configs) {
        Some(members) => voter_scores(configs, &members, &folds, seed),
        None => {
            let flat: Vec<f64> = (0..configs.len() * folds.len())
                .into_par_iter()
                .map(|k| {
                    let (c, f) = (k / folds.len(), k % folds.len());
                    score(&configs[c], &folds[f], fold_seed(seed, f))
                })
                .collect();
            flat.chunks(folds.len()).map(<[f64]>::to_vec).collect()
        }
    };
    let trace: Vec<TraceEntry> = configs
        .iter()
        .zip(scores)
        .enumerate()
        .map(|(id, (hp, fold_rmse))| TraceEntry {
            id,
            hyperparameters: hp.clone(),
            mean_rmse: fold_rmse.iter().sum::<f64>() / fold_rmse.len() as f64,
            fold_rmse,
        })
        .collect();
    let mut best = 0;
    for (i, t) in trace.iter().enumerate() {
        if t.mean_rmse < trace[best].mean_rmse {
            best = i;
        }
    }
    let learned = train(&trace[best].hyperparameters, x, y, seed)?;
    Ok(Search { trace, best, learned })
}

/// Grid search on a prepared dataset's training rows against C_μ.
pub fn grid_search(configs: &[Hyperparameters], dataset: &Dataset, seed: u64) -> Result<(Search, TrainedModel)> {
    let x = dataset.scaled_train();
    let y = dataset.train.coverageability();
    let plan = make_cv_plan(x.nrows(), seed)?;
    let found = search(configs, x.view(), &y, &plan, seed)?;
    let model = TrainedModel::new(
        found.best_hyperparameters().clone(),
        seed,
        dataset.names.clone(),
        dataset.scaler().clone(),
        dataset.train.x.view(),
        found.learned.clone(),
    );
    Ok((found, model))
}

/// Tunes the four base learners, then the voter over their winners.
pub fn train_all(spec: &GridSpec, dataset: &Dataset, seed: u64) -> Result<Vec<(Search, TrainedModel)>> {
    let mut out = Vec::with_capacity(5);
    for kind in LearnerKind::BASE {
        log::info!("grid search {kind}: {} configurations", spec.cardinality(kind));
        out.push(grid_search(&spec.configurations(kind)?, dataset, seed)?);
    }
    let members: [Hyperparameters; 4] = std::array::from_fn(|i| out[i].1.hyperparameters.clone());
    log::info!("grid search vor: {} configurations", spec.cardinality(LearnerKind::Vor));
    out.push(grid_search(&spec.voter_configurations(&members)?, dataset, seed)?);
    Ok(out)
}

/// Trace as delimited text: id, learner, knobs, one column per fold, mean.
pub fn write_trace<W: Write>(trace: &[TraceEntry], out: W) -> Result<()> {
    let mut w = crate::csv_writer(out);
    let mut header = vec!["config_id".to_string(), "learner".into(), "hyperparameters".into()];
    header.extend((1..=FOLDS).map(|f| format!("fold_{f}_rmse")));
    header.push("mean_rmse".into());
    let fail = |e: csv::Error| CoreError::Format(e.to_string());
    w.write_record(&header).map_err(fail)?;
    for t in trace {
        let mut rec = vec![t.id.to_string(), t.hyperparameters.kind().to_string(), t.hyperparameters.to_string()];
        rec.extend(t.fold_rmse.iter().map(f64::to_string));
        rec.push(t.mean_rmse.to_string());
        w.write_record(&rec).map_err(fail)?;
    }
    w.flush().map_err(|e| CoreError::Format(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::selection::evaluate::evaluate;
    use ndarray::Array2;
    use rand::Rng;

    fn interaction(n: usize, seed: u64) -> (Array2<f64>, Vec<f64>) {
        let mut rng = stream_rng(seed, 9);
        let x = Array2::<f64>::from_shape_fn((n, 4), |_| rng.gen_range(-1.0..1.0));
        let y = x
            .rows()
            .into_iter()
            .map(|r| if r[0] > 0.0 && r[1] > 0.0 && r[2] > 0.0 { 1.0 } else { 0.0 })
            .collect();
        (x, y)
    }

    #[test]
    fn grid_cardinalities() {
        let full = GridSpec::full();
        assert_eq!(full.configurations(LearnerKind::Sgdr).unwrap().len(), 2 * 3 * 4 * 9);
        assert_eq!(full.cardinality(LearnerKind::Mlp), 3 * 3 * 2 * 8);
        assert_eq!(full.cardinality(LearnerKind::Rfr), 9 * 2 * 47 * 14);
        assert_eq!(full.cardinality(LearnerKind::Hgbr), 2 * 47 * 5 * 9);
        let r = GridSpec::reduced();
        for k in LearnerKind::BASE {
            assert_eq!(r.configurations(k).unwrap().len(), r.cardinality(k));
        }
        let members: [Hyperparameters; 4] = std::array::from_fn(|i| r.configurations(LearnerKind::BASE[i]).unwrap()[0].clone());
        assert_eq!(r.voter_configurations(&members).unwrap().len(), 3);
    }

    #[test]
    fn single_configuration_wins_and_is_refit() {
        let (x, y) = interaction(120, 1);
        let plan = make_cv_plan(120, 4).unwrap();
        let hp = Hyperparameters::Hgbr(HgbrParams { max_iter: 20, ..HgbrParams::default() });
        let s = search(std::slice::from_ref(&hp), x.view(), &y, &plan, 4).unwrap();
        assert_eq!(s.best, 0);
        assert_eq!(s.learned, train(&hp, x.view(), &y, 4).unwrap());
    }

    #[test]
    fn deeper_boosting_wins_on_a_three_way_interaction() {
        let (x, y) = interaction(400, 2);
        let plan = make_cv_plan(400, 5).unwrap();
        let configs: Vec<Hyperparameters> = [1, 3]
            .map(|d| Hyperparameters::Hgbr(HgbrParams { max_depth: Some(d), max_iter: 100, min_samples_leaf: 5, ..HgbrParams::default() }))
            .to_vec();
        let s = search(&configs, x.view(), &y, &plan, 5).unwrap();
        assert_eq!(s.best, 1);
        // fold scores recomputed independently
        for (c, entry) in s.trace.iter().enumerate() {
            for (f, fold) in plan.folds.iter().enumerate() {
                let xt = x.select(Axis(0), &fold.train);
                let yt: Vec<f64> = fold.train.iter().map(|&i| y[i]).collect();
                let m = train(&configs[c], xt.view(), &yt, fold_seed(5, f)).unwrap();
                let xv = x.select(Axis(0), &fold.validation);
                let yv: Vec<f64> = fold.validation.iter().map(|&i| y[i]).collect();
                let r = evaluate(&yv, &m.predict(xv.view())).unwrap();
                assert!((r.rmse - entry.fold_rmse[f]).abs() < 1e-12);
            }
        }
        assert_eq!(s.best_score(), s.trace.iter().map(|t| t.mean_rmse).fold(f64::INFINITY, f64::min));
    }

    #[test]
    fn diverging_configuration_scores_infinity() {
        let (mut x, y) = interaction(80, 3);
        x.mapv_inplace(|v| v * 1e6);
        let plan = make_cv_plan(80, 1).unwrap();
        let bad = Hyperparameters::Sgdr(SgdrParams { learning_rate: Schedule::Constant, eta0: 10.0, ..SgdrParams::default() });
        let good = Hyperparameters::Rfr(RfrParams { n_estimators: 5, ..RfrParams::default() });
        let s = search(&[bad, good], x.view(), &y, &plan, 1).unwrap();
        assert!(s.trace[0].mean_rmse.is_infinite());
        assert_eq!(s.best, 1);
        let mut buf = Vec::new();
        write_trace(&s.trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().contains(",inf,"));
    }

    #[test]
    fn shared_voter_path_matches_independent_training() {
        let (x, y) = interaction(100, 4);
        let plan = make_cv_plan(100, 2).unwrap();
        let members = [
            Hyperparameters::Sgdr(SgdrParams::default()),
            Hyperparameters::Mlp(MlpParams { hidden_layer_sizes: vec![6], epochs: 5, ..MlpParams::default() }),
            Hyperparameters::Rfr(RfrParams { n_estimators: 4, ..RfrParams::default() }),
            Hyperparameters::Hgbr(HgbrParams { max_iter: 10, ..HgbrParams::default() }),
        ];
        let configs = GridSpec::reduced().voter_configurations(&members).unwrap();
        let s = search(&configs, x.view(), &y, &plan, 2).unwrap();
        let folds = fold_data(x.view(), &y, &plan);
        for (c, hp) in configs.iter().enumerate() {
            for (f, fold) in folds.iter().enumerate() {
                assert_eq!(s.trace[c].fold_rmse[f], score(hp, fold, fold_seed(2, f)));
            }
        }
    }
}
