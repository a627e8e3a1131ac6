//! Image selection: score-ranked top-K and a seeded random baseline.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::score::ImageScore;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMethod {
    /// Keep the K best-scoring images.
    ScoreTopK,
    /// Keep K images chosen uniformly at random.
    Random,
}

/// Outcome of a selection pass.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Kept ids, best first for [`SelectionMethod::ScoreTopK`], draw order
    /// for [`SelectionMethod::Random`].
    pub kept_image_ids: Vec<u64>,
    pub pruning_rate: f64,
    pub kept_count: usize,
    pub method: SelectionMethod,
}

fn check_rate(p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::argument(format!(
            "pruning rate must be in [0, 1), got {p}"
        )));
    }
    Ok(())
}

/// K for a dataset of `total` images at pruning rate `p`: the kept fraction
/// rounded half-up.
pub fn kept_count(total: usize, p: f64) -> usize {
    ((1.0 - p) * total as f64).round() as usize
}

/// Keep the `round_half_up((1-p) * D)` highest-scoring images. Ties are
/// broken toward the lower image id so runs are reproducible everywhere.
pub fn select_top_k(image_scores: &[ImageScore], p: f64) -> Result<SelectionResult> {
    check_rate(p)?;
    let k = kept_count(image_scores.len(), p);
    let mut ranked: Vec<&ImageScore> = image_scores.iter().collect();
    ranked.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then(a.image_id.cmp(&b.image_id))
    });
    Ok(SelectionResult {
        kept_image_ids: ranked[..k].iter().map(|s| s.image_id).collect(),
        pruning_rate: p,
        kept_count: k,
        method: SelectionMethod::ScoreTopK,
    })
}

/// Keep K images sampled uniformly without replacement. The same seed
/// always draws the same subset, on any platform.
pub fn select_random(image_ids: &[u64], p: f64, seed: u64) -> Result<SelectionResult> {
    check_rate(p)?;
    let k = kept_count(image_ids.len(), p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, image_ids.len(), k);
    Ok(SelectionResult {
        kept_image_ids: picked.iter().map(|i| image_ids[i]).collect(),
        pruning_rate: p,
        kept_count: k,
        method: SelectionMethod::Random,
    })
}

/// Materialize a selection: kept images, their annotations, all categories.
pub fn prune(dataset: &Dataset, selection: &SelectionResult) -> Result<Dataset> {
    let known: HashSet<u64> = dataset.images.iter().map(|i| i.id).collect();
    for &id in &selection.kept_image_ids {
        if !known.contains(&id) {
            return Err(Error::argument(format!(
                "selection references unknown image id {id}"
            )));
        }
    }
    let kept: HashSet<u64> = selection.kept_image_ids.iter().copied().collect();
    Ok(dataset.retain_images(&kept))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(values: &[(u64, f64)]) -> Vec<ImageScore> {
        values
            .iter()
            .map(|&(image_id, value)| ImageScore { image_id, value, instance_count: 1 })
            .collect()
    }

    #[test]
    fn keeps_the_k_best() {
        let rows = scores(&[(1, 0.1), (2, 0.9), (3, 0.5), (4, 0.7), (5, 0.3)]);
        let sel = select_top_k(&rows, 0.4).unwrap();
        assert_eq!(sel.kept_count, 3);
        assert_eq!(sel.kept_image_ids, vec![2, 4, 3]); // rank order
    }

    #[test]
    fn rounding_is_half_up() {
        let rows = scores(&[(1, 5.0), (2, 4.0), (3, 3.0), (4, 2.0), (5, 1.0)]);
        let sel = select_top_k(&rows, 0.5).unwrap();
        assert_eq!(sel.kept_count, 3); // (1-0.5)*5 = 2.5 rounds up
    }

    #[test]
    fn kept_count_grid() {
        for &(total, p, expect) in &[
            (10usize, 0.2, 8usize),
            (10, 0.3, 7),
            (10, 0.4, 6),
            (10, 0.5, 5),
            (117, 0.2, 94),
            (117, 0.3, 82),
            (117, 0.4, 70),
            (117, 0.5, 59),
            (1000, 0.2, 800),
            (1000, 0.3, 700),
            (1000, 0.4, 600),
            (1000, 0.5, 500),
        ] {
            assert_eq!(kept_count(total, p), expect, "D={total}, p={p}");
        }
    }

    #[test]
    fn ties_break_toward_lower_id() {
        let rows = scores(&[(7, 2.0), (3, 2.0), (9, 5.0)]);
        let sel = select_top_k(&rows, 0.3).unwrap(); // K = 2, one slot after id 9
        assert_eq!(sel.kept_image_ids, vec![9, 3]);
    }

    #[test]
    fn dominance_over_dropped() {
        let rows = scores(&[(1, 0.4), (2, 1.4), (3, 0.2), (4, 2.2), (5, 1.0), (6, 0.6)]);
        let sel = select_top_k(&rows, 0.5).unwrap();
        let kept: HashSet<u64> = sel.kept_image_ids.iter().copied().collect();
        let min_kept = rows
            .iter()
            .filter(|s| kept.contains(&s.image_id))
            .map(|s| s.value)
            .fold(f64::INFINITY, f64::min);
        let max_dropped = rows
            .iter()
            .filter(|s| !kept.contains(&s.image_id))
            .map(|s| s.value)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(min_kept >= max_dropped);
    }

    #[test]
    fn invalid_rate_rejected() {
        let rows = scores(&[(1, 1.0)]);
        assert!(select_top_k(&rows, 1.0).is_err());
        assert!(select_top_k(&rows, -0.1).is_err());
        assert!(select_top_k(&rows, f64::NAN).is_err());
        assert!(select_random(&[1], 1.0, 0).is_err());
    }

    #[test]
    fn zero_rate_keeps_everything() {
        let rows = scores(&[(1, 1.0), (2, 2.0)]);
        assert_eq!(select_top_k(&rows, 0.0).unwrap().kept_count, 2);
        assert_eq!(select_random(&[1, 2], 0.0, 3).unwrap().kept_count, 2);
    }

    #[test]
    fn selecting_again_at_zero_is_idempotent() {
        let rows = scores(&[(1, 0.4), (2, 1.4), (3, 0.2), (4, 2.2), (5, 1.0)]);
        let first = select_top_k(&rows, 0.4).unwrap();
        let survivors: Vec<ImageScore> = rows
            .into_iter()
            .filter(|s| first.kept_image_ids.contains(&s.image_id))
            .collect();
        let second = select_top_k(&survivors, 0.0).unwrap();
        let a: HashSet<u64> = first.kept_image_ids.iter().copied().collect();
        let b: HashSet<u64> = second.kept_image_ids.iter().copied().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn random_is_seed_deterministic() {
        let ids: Vec<u64> = (1..=20).collect();
        let a = select_random(&ids, 0.35, 7).unwrap();
        let b = select_random(&ids, 0.35, 7).unwrap();
        assert_eq!(a, b);
        let c = select_random(&ids, 0.35, 8).unwrap();
        assert_ne!(a.kept_image_ids, c.kept_image_ids);
    }

    #[test]
    fn random_draws_are_unique_and_known() {
        let ids: Vec<u64> = (100..110).collect();
        let sel = select_random(&ids, 0.5, 42).unwrap();
        assert_eq!(sel.kept_count, 5);
        let unique: HashSet<u64> = sel.kept_image_ids.iter().copied().collect();
        assert_eq!(unique.len(), 5);
        assert!(unique.iter().all(|id| ids.contains(id)));
    }

    #[test]
    fn random_is_roughly_uniform() {
        let ids: Vec<u64> = (0..10).collect();
        let mut kept_counts = [0u32; 10];
        let trials = 10_000;
        for seed in 0..trials {
            let sel = select_random(&ids, 0.5, seed).unwrap();
            for id in sel.kept_image_ids {
                kept_counts[id as usize] += 1;
            }
        }
        for (id, &count) in kept_counts.iter().enumerate() {
            let freq = count as f64 / trials as f64;
            assert!((freq - 0.5).abs() < 0.02, "image {id} kept at {freq}");
        }
    }

    #[test]
    fn prune_filters_annotations() {
        use crate::dataset::{CategoryInfo, ImageRecord, InstanceRecord, MaskGeometry};
        let mut ds = Dataset::default();
        ds.categories.push(CategoryInfo::new(1, "c"));
        for id in 1..=3 {
            ds.images.push(ImageRecord::new(id, format!("{id}.jpg"), 10, 10));
            ds.instances.push(InstanceRecord {
                id,
                image_id: id,
                category_id: 1,
                mask: MaskGeometry::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]),
                is_crowd: false,
                extra: Default::default(),
            });
        }
        let sel = SelectionResult {
            kept_image_ids: vec![2],
            pruning_rate: 0.66,
            kept_count: 1,
            method: SelectionMethod::ScoreTopK,
        };
        let pruned = prune(&ds, &sel).unwrap();
        assert_eq!(pruned.images.len(), 1);
        assert_eq!(pruned.instances.len(), 1);
        assert_eq!(pruned.instances[0].image_id, 2);
        assert_eq!(pruned.categories.len(), 1);

        let keep_all = SelectionResult {
            kept_image_ids: vec![1, 2, 3],
            pruning_rate: 0.0,
            kept_count: 3,
            method: SelectionMethod::ScoreTopK,
        };
        assert_eq!(prune(&ds, &keep_all).unwrap(), ds);

        let bad = SelectionResult { kept_image_ids: vec![99], ..sel };
        assert!(prune(&ds, &bad).is_err());
    }
}
