//! The three-stage shape complexity score and its image-level aggregation.
//!
//! Stage one is the raw perimeter-to-area ratio, which is cheap but biased:
//! it scales as 1/size, so small objects look complex. Stage two divides out
//! scale with the isoperimetric quotient Q = P^2 / (4*pi*A), the ratio of a
//! shape's squared perimeter to that of the circle with equal area. Stage
//! three min-max normalizes Q within each class across the whole dataset so
//! that rare classes get the same [0, 1] score budget as common ones. Image
//! scores sum the final stage over the image's instances, so object-dense
//! images rank high.
//!
//! Scoring never aborts on an individual bad mask: degenerate or otherwise
//! unmeasurable instances are reported as warnings, contribute zero to their
//! image, and are excluded from each class's min/max range.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{instance_metrics, ShapeMetrics};

/// Which stage of the score ladder to rank images by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Raw perimeter-to-area ratio.
    Scs,
    /// Scale-invariant isoperimetric quotient.
    Si,
    /// Class-balanced, the default.
    Cb,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Scs => "scs",
            Method::Si => "si",
            Method::Cb => "cb",
        }
    }

    fn stage_value(&self, score: &InstanceScore) -> f64 {
        match self {
            Method::Scs => score.raw_scs,
            Method::Si => score.si_scs,
            Method::Cb => score.cb_scs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScoreOptions {
    /// Leave crowd regions unscored. Off by default: a crowd mask has a
    /// boundary like any other.
    pub skip_crowds: bool,
}

/// All three score stages for one instance, plus the measured geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceScore {
    pub instance_id: u64,
    pub image_id: u64,
    pub category_id: u64,
    pub perimeter: f64,
    pub area: f64,
    pub raw_scs: f64,
    pub si_scs: f64,
    pub cb_scs: f64,
}

/// Aggregated score of one image: the sum over its scored instances.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageScore {
    pub image_id: u64,
    pub value: f64,
    /// Instances annotated on this image, scored or not.
    pub instance_count: usize,
}

/// An instance the scorer had to leave out.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreWarning {
    Degenerate { instance_id: u64, image_id: u64, perimeter: f64 },
    Unmeasurable { instance_id: u64, image_id: u64, message: String },
}

impl ScoreWarning {
    pub fn instance_id(&self) -> u64 {
        match self {
            ScoreWarning::Degenerate { instance_id, .. } => *instance_id,
            ScoreWarning::Unmeasurable { instance_id, .. } => *instance_id,
        }
    }
}

impl fmt::Display for ScoreWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreWarning::Degenerate { instance_id, image_id, perimeter } => write!(
                f,
                "instance {instance_id} (image {image_id}) has zero area \
                 (perimeter {perimeter}); scored 0"
            ),
            ScoreWarning::Unmeasurable { instance_id, image_id, message } => {
                write!(f, "instance {instance_id} (image {image_id}) not scored: {message}")
            }
        }
    }
}

/// Full scoring output for a dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetScores {
    /// One row per scored instance, ordered by instance id.
    pub instances: Vec<InstanceScore>,
    /// One row per image (scored or not), ordered by image id.
    pub images: Vec<ImageScore>,
    /// Instances that could not be scored, ordered by instance id.
    pub warnings: Vec<ScoreWarning>,
    /// Crowd instances left unscored by [`ScoreOptions::skip_crowds`].
    pub skipped_crowds: usize,
}

/// Raw score: perimeter over area, in 1/px. Halves when the shape doubles.
pub fn scs(metrics: ShapeMetrics) -> Result<f64> {
    if metrics.area <= 0.0 {
        return Err(Error::Degenerate { perimeter: metrics.perimeter });
    }
    Ok(metrics.perimeter / metrics.area)
}

/// Scale-invariant score: the isoperimetric quotient P^2 / (4*pi*A).
/// Equals 1 for an ideal circle and grows with boundary intricacy.
pub fn si_scs(metrics: ShapeMetrics) -> Result<f64> {
    if metrics.area <= 0.0 {
        return Err(Error::Degenerate { perimeter: metrics.perimeter });
    }
    Ok(metrics.perimeter * metrics.perimeter / (4.0 * PI * metrics.area))
}

/// Set `cb_scs` on every score: per-category min-max of `si_scs` over the
/// whole slice. A category whose scores all coincide (singletons included)
/// maps to 1.0, which keeps rare classes maximally represented.
pub fn cb_normalize(scores: &mut [InstanceScore]) {
    let mut range: HashMap<u64, (f64, f64)> = HashMap::new();
    for s in scores.iter() {
        let entry = range.entry(s.category_id).or_insert((s.si_scs, s.si_scs));
        entry.0 = entry.0.min(s.si_scs);
        entry.1 = entry.1.max(s.si_scs);
    }
    for s in scores.iter_mut() {
        let (lo, hi) = range[&s.category_id];
        s.cb_scs = if hi > lo { (s.si_scs - lo) / (hi - lo) } else { 1.0 };
    }
}

/// One [`ImageScore`] per image in the dataset, id-ascending, summing the
/// class-balanced stage. Images without instances score 0.
pub fn image_scores(dataset: &Dataset, scores: &[InstanceScore]) -> Vec<ImageScore> {
    image_scores_by(dataset, scores, Method::Cb)
}

/// Image scores summing an arbitrary stage of the ladder.
///
/// Addends are folded in instance-id order, so the floating-point result is
/// identical no matter how the caller produced or stored the scores.
pub fn image_scores_by(
    dataset: &Dataset,
    scores: &[InstanceScore],
    method: Method,
) -> Vec<ImageScore> {
    let mut ordered: Vec<&InstanceScore> = scores.iter().collect();
    ordered.sort_by_key(|s| s.instance_id);

    let mut sums: HashMap<u64, f64> = HashMap::new();
    for s in ordered {
        *sums.entry(s.image_id).or_insert(0.0) += method.stage_value(s);
    }
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for inst in &dataset.instances {
        *counts.entry(inst.image_id).or_insert(0) += 1;
    }

    let mut images: Vec<ImageScore> = dataset
        .images
        .iter()
        .map(|img| ImageScore {
            image_id: img.id,
            value: sums.get(&img.id).copied().unwrap_or(0.0),
            instance_count: counts.get(&img.id).copied().unwrap_or(0),
        })
        .collect();
    images.sort_by_key(|s| s.image_id);
    images
}

/// Score every instance and aggregate to images.
///
/// Per-instance measurement fans out across the rayon pool; the reduction
/// (class ranges, image sums) is a sequential pass over id-sorted rows, so
/// the output is a pure function of dataset content regardless of
/// annotation order or worker count.
pub fn score_dataset(dataset: &Dataset, options: ScoreOptions) -> DatasetScores {
    enum Outcome {
        Scored(InstanceScore),
        Warned(ScoreWarning),
        SkippedCrowd,
    }

    let outcomes: Vec<Outcome> = dataset
        .instances
        .par_iter()
        .map(|inst| {
            if options.skip_crowds && inst.is_crowd {
                return Outcome::SkippedCrowd;
            }
            match instance_metrics(&inst.mask) {
                Ok(metrics) => Outcome::Scored(InstanceScore {
                    instance_id: inst.id,
                    image_id: inst.image_id,
                    category_id: inst.category_id,
                    perimeter: metrics.perimeter,
                    area: metrics.area,
                    raw_scs: metrics.perimeter / metrics.area,
                    si_scs: metrics.perimeter * metrics.perimeter / (4.0 * PI * metrics.area),
                    cb_scs: 0.0,
                }),
                Err(Error::Degenerate { perimeter }) => Outcome::Warned(ScoreWarning::Degenerate {
                    instance_id: inst.id,
                    image_id: inst.image_id,
                    perimeter,
                }),
                Err(err) => Outcome::Warned(ScoreWarning::Unmeasurable {
                    instance_id: inst.id,
                    image_id: inst.image_id,
                    message: err.to_string(),
                }),
            }
        })
        .collect();

    let mut instances = Vec::new();
    let mut warnings = Vec::new();
    let mut skipped_crowds = 0;
    for outcome in outcomes {
        match outcome {
            Outcome::Scored(s) => instances.push(s),
            Outcome::Warned(w) => warnings.push(w),
            Outcome::SkippedCrowd => skipped_crowds += 1,
        }
    }
    instances.sort_by_key(|s| s.instance_id);
    warnings.sort_by_key(|w| w.instance_id());

    cb_normalize(&mut instances);
    let images = image_scores(dataset, &instances);

    DatasetScores { instances, images, warnings, skipped_crowds }
}
