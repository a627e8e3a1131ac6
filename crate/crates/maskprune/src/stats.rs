//! Distribution reports over full or pruned datasets: class histograms,
//! instance-area histograms, and per-class retention after pruning. All
//! areas are recomputed from mask geometry; `area` fields in the source
//! file are never trusted.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::instance_metrics;

/// Histogram bucket edges in px^2: the 32^2 and 96^2 boundaries of the
/// small/medium/large size convention, refined log-spaced on both sides.
pub fn default_area_edges() -> Vec<f64> {
    vec![256.0, 1024.0, 4096.0, 9216.0, 36864.0, 147456.0]
}

/// Instance areas bucketed into `edges.len() + 1` intervals. Bucket `i`
/// covers `[edges[i-1], edges[i])`, the first covers `(0, edges[0])`, the
/// last is unbounded above. Instances without measurable area are tallied
/// apart, not dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub degenerate: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaQuartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Everything the `stats` command reports for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub image_count: usize,
    pub instance_count: usize,
    pub class_counts: BTreeMap<u64, u64>,
    pub area_histogram: AreaHistogram,
    pub class_area_quartiles: BTreeMap<u64, AreaQuartiles>,
}

/// Instances per category id, with an explicit zero for empty categories.
pub fn class_histogram(dataset: &Dataset) -> BTreeMap<u64, u64> {
    let mut counts: BTreeMap<u64, u64> = dataset
        .categories
        .iter()
        .map(|c| (c.id, 0))
        .collect();
    for inst in &dataset.instances {
        *counts.entry(inst.category_id).or_insert(0) += 1;
    }
    counts
}

fn measured_areas(dataset: &Dataset) -> Vec<(u64, Option<f64>)> {
    dataset
        .instances
        .par_iter()
        .map(|inst| (inst.category_id, instance_metrics(&inst.mask).ok().map(|m| m.area)))
        .collect()
}

/// Bucket recomputed instance areas. Edges must be positive and strictly
/// ascending.
pub fn area_distribution(dataset: &Dataset, edges: &[f64]) -> Result<AreaHistogram> {
    if edges.is_empty() {
        return Err(Error::argument("area histogram needs at least one edge"));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) || edges[0] <= 0.0 {
        return Err(Error::argument(format!(
            "area histogram edges must be positive and ascending, got {edges:?}"
        )));
    }
    let mut counts = vec![0u64; edges.len() + 1];
    let mut degenerate = 0u64;
    for (_, area) in measured_areas(dataset) {
        match area {
            Some(a) => {
                let bucket = edges.partition_point(|&e| e <= a);
                counts[bucket] += 1;
            }
            None => degenerate += 1,
        }
    }
    Ok(AreaHistogram { edges: edges.to_vec(), counts, degenerate })
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let position = q * (sorted.len() - 1) as f64;
    let below = position.floor() as usize;
    let above = position.ceil() as usize;
    let fraction = position - below as f64;
    sorted[below] * (1.0 - fraction) + sorted[above] * fraction
}

/// Quartiles of measurable instance areas per class. Classes with no
/// measurable instance are omitted.
pub fn class_area_quartiles(dataset: &Dataset) -> BTreeMap<u64, AreaQuartiles> {
    let mut by_class: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (category_id, area) in measured_areas(dataset) {
        if let Some(a) = area {
            by_class.entry(category_id).or_default().push(a);
        }
    }
    by_class
        .into_iter()
        .map(|(category_id, mut areas)| {
            areas.sort_by(f64::total_cmp);
            let quartiles = AreaQuartiles {
                q1: quantile(&areas, 0.25),
                median: quantile(&areas, 0.50),
                q3: quantile(&areas, 0.75),
            };
            (category_id, quartiles)
        })
        .collect()
}

/// The full distribution report for one dataset.
pub fn distribution_report(dataset: &Dataset, edges: &[f64]) -> Result<DistributionReport> {
    Ok(DistributionReport {
        image_count: dataset.images.len(),
        instance_count: dataset.instances.len(),
        class_counts: class_histogram(dataset),
        area_histogram: area_distribution(dataset, edges)?,
        class_area_quartiles: class_area_quartiles(dataset),
    })
}

/// Per-class instance retention: kept count over full count, by category.
/// A class with nothing to keep retains trivially (1.0).
pub fn coverage_delta(full: &Dataset, pruned: &Dataset) -> Result<BTreeMap<u64, f64>> {
    let full_counts = class_histogram(full);
    let pruned_counts = class_histogram(pruned);
    for id in pruned_counts.keys() {
        if !full_counts.contains_key(id) {
            return Err(Error::integrity(format!(
                "pruned dataset has category {id} absent from the full dataset"
            )));
        }
    }
    Ok(full_counts
        .into_iter()
        .map(|(id, full_count)| {
            let kept = pruned_counts.get(&id).copied().unwrap_or(0);
            let fraction = if full_count == 0 {
                1.0
            } else {
                kept as f64 / full_count as f64
            };
            (id, fraction)
        })
        .collect())
}
