//! The four base regressors, the weighted voter, and the serialisable
//! trained-model wrapper.

pub mod forest;
pub mod hgb;
pub mod linear;
pub mod mlp;
pub mod model;
pub mod tree;
pub mod voter;

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::rng::child_seed;

pub use forest::{train_rfr, Forest, RfrParams};
pub use hgb::{train_hgbr, BoostLoss, BoostedModel, HgbrParams};
pub use linear::{train_sgdr, LinearModel, Penalty, Schedule, SgdLoss, SgdrParams};
pub use mlp::{train_mlp, Activation, LearningRateMode, MlpModel, MlpParams};
pub use model::TrainedModel;
pub use tree::{Criterion, Node, Tree};
pub use voter::{train_vor, VoterModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Sgdr,
    Mlp,
    Rfr,
    Hgbr,
    Vor,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 5] = [LearnerKind::Sgdr, LearnerKind::Mlp, LearnerKind::Rfr, LearnerKind::Hgbr, LearnerKind::Vor];
    pub const BASE: [LearnerKind; 4] = [LearnerKind::Sgdr, LearnerKind::Mlp, LearnerKind::Rfr, LearnerKind::Hgbr];

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Sgdr => "sgdr",
            LearnerKind::Mlp => "mlp",
            LearnerKind::Rfr => "rfr",
            LearnerKind::Hgbr => "hgbr",
            LearnerKind::Vor => "vor",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CoreError::InvalidArgument(format!("unknown learner `{s}`")))
    }
}

/// Voter configuration: weights plus the member configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VorParams {
    pub weights: Option<[f64; 4]>,
    pub sgdr: SgdrParams,
    pub mlp: MlpParams,
    pub rfr: RfrParams,
    pub hgbr: HgbrParams,
}

impl VorParams {
    pub fn members(&self) -> [Hyperparameters; 4] {
        [
            Hyperparameters::Sgdr(self.sgdr.clone()),
            Hyperparameters::Mlp(self.mlp.clone()),
            Hyperparameters::Rfr(self.rfr.clone()),
            Hyperparameters::Hgbr(self.hgbr.clone()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "lowercase")]
pub enum Hyperparameters {
    Sgdr(SgdrParams),
    Mlp(MlpParams),
    Rfr(RfrParams),
    Hgbr(HgbrParams),
    Vor(VorParams),
}

impl Hyperparameters {
    pub fn kind(&self) -> LearnerKind {
        match self {
            Hyperparameters::Sgdr(_) => LearnerKind::Sgdr,
            Hyperparameters::Mlp(_) => LearnerKind::Mlp,
            Hyperparameters::Rfr(_) => LearnerKind::Rfr,
            Hyperparameters::Hgbr(_) => LearnerKind::Hgbr,
            Hyperparameters::Vor(_) => LearnerKind::Vor,
        }
    }
}

fn depth(d: Option<usize>) -> String {
    d.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn snake<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_string)).unwrap_or_default()
}

/// The grid-searched knobs, `key=value` separated by spaces.
impl fmt::Display for Hyperparameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperparameters::Sgdr(p) => write!(
                f,
                "loss={} penalty={} learning_rate={} max_iter={}",
                snake(&p.loss),
                snake(&p.penalty),
                snake(&p.learning_rate),
                p.max_iter
            ),
            Hyperparameters::Mlp(p) => write!(
                f,
                "hidden_layer_sizes={:?} activation={} learning_rate={} epochs={}",
                p.hidden_layer_sizes,
                snake(&p.activation),
                snake(&p.learning_rate),
                p.epochs
            ),
            Hyperparameters::Rfr(p) => write!(
                f,
                "n_estimators={} criterion={} max_depth={} min_samples_split={}",
                p.n_estimators,
                snake(&p.criterion),
                depth(p.max_depth),
                p.min_samples_split
            ),
            Hyperparameters::Hgbr(p) => write!(
                f,
                "loss={} max_depth={} min_samples_leaf={} max_iter={}",
                snake(&p.loss),
                depth(p.max_depth),
                p.min_samples_leaf,
                p.max_iter
            ),
            Hyperparameters::Vor(p) => match p.weights {
                None => write!(f, "weights=none"),
                Some(w) => write!(f, "weights=[{}]", w.map(|v| format!("{v:.6}")).join(" ")),
            },
        }
    }
}

/// Learned parameters of any learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Learned {
    Linear(LinearModel),
    Mlp(MlpModel),
    Forest(Forest),
    Boosted(BoostedModel),
    Voter(VoterModel),
}

impl Learned {
    /// Prediction on one already-scaled row.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        match self {
            Learned::Linear(m) => m.predict_row(row),
            Learned::Mlp(m) => m.predict_row(row),
            Learned::Forest(m) => m.predict_row(row),
            Learned::Boosted(m) => m.predict_row(row),
            Learned::Voter(m) => m.predict_row(row),
        }
    }

    /// Predictions on already-scaled rows, one row at a time so a row's
    /// value never depends on the batch it arrives in.
    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        use rayon::prelude::*;
        (0..x.nrows())
            .into_par_iter()
            .map(|i| match x.row(i).as_slice() {
                Some(row) => self.predict_row(row),
                None => self.predict_row(&x.row(i).to_vec()),
            })
            .collect()
    }
}

/// Trains any learner on scaled features.
pub fn train(hp: &Hyperparameters, x: ArrayView2<f64>, y: &[f64], seed: u64) -> Result<Learned> {
    Ok(match hp {
        Hyperparameters::Sgdr(p) => Learned::Linear(train_sgdr(x, y, p, seed)?),
        Hyperparameters::Mlp(p) => Learned::Mlp(train_mlp(x, y, p, seed)?),
        Hyperparameters::Rfr(p) => Learned::Forest(train_rfr(x, y, p, seed)?),
        Hyperparameters::Hgbr(p) => Learned::Boosted(train_hgbr(x, y, p, seed)?),
        Hyperparameters::Vor(p) => {
            voter::check_weights(&p.weights)?;
            let members = train_members(&p.members(), x, y, seed)?;
            Learned::Voter(train_vor(members, p.weights)?)
        }
    })
}

/// The four voter members, each with its own derived seed.
pub fn train_members(members: &[Hyperparameters; 4], x: ArrayView2<f64>, y: &[f64], seed: u64) -> Result<Vec<Learned>> {
    members
        .iter()
        .enumerate()
        .map(|(i, hp)| train(hp, x, y, member_seed(seed, i)))
        .collect()
}

pub fn member_seed(seed: u64, member: usize) -> u64 {
    child_seed(seed, 1000 + member as u64)
}
