//! Five independent shuffle-split folds of the training rows.

use serde::{Deserialize, Serialize};

use crate::dataset::split_indices;
use crate::error::{CoreError, Result};
use crate::rng::child_seed;

pub const FOLDS: usize = 5;
pub const INNER_TRAIN_FRACTION: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvPlan {
    pub seed: u64,
    pub folds: Vec<Fold>,
}

/// Folds may overlap; each is an independent 75/25 resample.
pub fn make_cv_plan(n: usize, seed: u64) -> Result<CvPlan> {
    if n < 4 {
        return Err(CoreError::InvalidArgument(format!("cross-validation needs at least 4 rows, got {n}")));
    }
    let folds = (0..FOLDS as u64)
        .map(|f| {
            let (train, validation) = split_indices(n, INNER_TRAIN_FRACTION, child_seed(seed, f));
            Fold { train, validation }
        })
        .collect();
    Ok(CvPlan { seed, folds })
}

/// Seed handed to every learner trained on fold `f`; independent of the
/// configuration so all candidates see the same randomness.
pub fn fold_seed(seed: u64, fold: usize) -> u64 {
    child_seed(seed, 100 + fold as u64)
}
