//! Training-free pruning of instance segmentation datasets.
//!
//! Every annotated instance is scored by the complexity of its mask
//! boundary, no model involved: the raw perimeter-to-area ratio, its
//! scale-invariant form (the isoperimetric quotient), and a class-balanced
//! normalization that gives rare classes the same weight as common ones.
//! Image scores aggregate instance scores; the best images survive pruning
//! and are written back out as a standard annotation file any trainer can
//! consume.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability (scoring, pruning, class balance, synthetic corpora,
//! dataset statistics, the mask codec). The `maskprune` binary wraps the
//! same pipeline behind `score`, `prune`, `stats`, and `synth` subcommands.

pub mod coco;
pub mod dataset;
pub mod error;
pub mod geometry;
pub mod pipeline;
pub mod report;
pub mod rle;
pub mod score;
pub mod select;
pub mod stats;
pub mod synth;

pub use coco::{emit_coco, parse_coco, read_coco, write_coco};
pub use dataset::{
    CategoryInfo, Dataset, Diagnostic, ImageRecord, InstanceRecord, MaskGeometry, RleMask,
    Vertex,
};
pub use error::{Error, Result};
pub use geometry::{instance_metrics, BitMask, ShapeMetrics};
pub use score::{
    cb_normalize, image_scores, image_scores_by, scs, si_scs, score_dataset, DatasetScores,
    ImageScore, InstanceScore, Method, ScoreOptions,
};
pub use select::{prune, select_random, select_top_k, SelectionMethod, SelectionResult};
pub use stats::{
    area_distribution, class_histogram, coverage_delta, default_area_edges,
    distribution_report, DistributionReport,
};
pub use synth::{
    analytic_metrics, gen_corpus, gen_shape, shape_ring, ClassSpec, CorpusConfig, ShapeKind,
    ShapeStyle, SynthSpec,
};
