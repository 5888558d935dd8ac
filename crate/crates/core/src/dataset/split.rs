//! Seeded train/test partition.

use rand::seq::SliceRandom;

use crate::rng::stream_rng;

/// Train size: `n · fraction` rounded to nearest, ties toward train.
pub fn train_size(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction) + 0.5).floor() as usize
}

/// Disjoint, exhaustive `(train, test)` row indices, each ascending.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    assert!(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must lie in (0, 1)");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, 0));
    let cut = train_size(n, train_fraction).min(n);
    let mut train = order[..cut].to_vec();
    let mut test = order[cut..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sizes() {
        let (a, b) = split_indices(100, 0.75, 1);
        assert_eq!((a.len(), b.len()), (75, 25));
        let (a, b) = split_indices(4, 0.75, 1);
        assert_eq!((a.len(), b.len()), (3, 1));
        assert_eq!(train_size(2, 0.75), 2);
        assert_eq!(train_size(10, 0.25), 3);
        assert_eq!(split_indices(100, 0.75, 9), split_indices(100, 0.75, 9));
        assert_ne!(split_indices(100, 0.75, 9), split_indices(100, 0.75, 10));
    }

    proptest! {
        #[test]
        fn partition_is_disjoint_and_exhaustive(n in 1usize..300, f in 0.05f64..0.95, seed in any::<u64>()) {
            let (a, b) = split_indices(n, f, seed);
            let mut all: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert_eq!(a.len(), train_size(n, f).min(n));
        }
    }
}
