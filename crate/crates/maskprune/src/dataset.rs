//! In-memory model of an instance segmentation dataset.
//!
//! The model mirrors the COCO annotation layout: images, per-instance
//! annotations that reference an image and a category, and a category table.
//! Unknown fields from the source file are retained verbatim (`extra` on each
//! record, `passthrough` at the top level) so a pruned file can be emitted
//! without losing anything a downstream trainer might read.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde_json::{Map, Value};

/// A polygon vertex in pixel coordinates.
pub type Vertex = [f64; 2];

/// An object category.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryInfo {
    pub id: u64,
    pub name: String,
    /// Source fields not modeled here (supercategory, keypoints, ...).
    pub extra: Map<String, Value>,
}

impl CategoryInfo {
    pub fn new(id: u64, name: impl Into<String>) -> Self {
        CategoryInfo { id, name: name.into(), extra: Map::new() }
    }
}

/// An image entry. Pixel content is never loaded; only identity and extent.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRecord {
    pub id: u64,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
    pub extra: Map<String, Value>,
}

impl ImageRecord {
    pub fn new(id: u64, file_name: impl Into<String>, width: u32, height: u32) -> Self {
        ImageRecord { id, file_name: file_name.into(), width, height, extra: Map::new() }
    }

    pub fn pixel_count(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }
}

/// A run-length encoded bitmask, column-major, first run counting background.
#[derive(Debug, Clone, PartialEq)]
pub struct RleMask {
    pub height: usize,
    pub width: usize,
    /// Alternating background/foreground run lengths; sums to `height * width`.
    pub runs: Vec<u64>,
    /// True when the source file stored the runs as a compressed counts
    /// string; emission mirrors the source form.
    pub compressed: bool,
}

impl RleMask {
    /// Total pixels in the grid; a valid run list sums to exactly this.
    pub fn pixel_count(&self) -> u64 {
        (self.height as u64) * (self.width as u64)
    }

    pub fn run_sum(&self) -> u64 {
        self.runs.iter().sum()
    }

    /// Foreground pixels: runs alternate background/foreground, starting
    /// with background.
    pub fn set_pixels(&self) -> u64 {
        self.runs.iter().skip(1).step_by(2).sum()
    }
}

/// The spatial footprint of one instance: polygon rings or an RLE raster.
#[derive(Debug, Clone, PartialEq)]
pub enum MaskGeometry {
    /// Disjoint polygon parts (COCO multi-polygons are parts, not holes).
    Polygons(Vec<Vec<Vertex>>),
    Rle(RleMask),
}

impl MaskGeometry {
    pub fn polygon(ring: Vec<Vertex>) -> Self {
        MaskGeometry::Polygons(vec![ring])
    }
}

/// One annotated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceRecord {
    pub id: u64,
    pub image_id: u64,
    pub category_id: u64,
    pub mask: MaskGeometry,
    pub is_crowd: bool,
    /// Source fields preserved verbatim on emission but never trusted for
    /// scoring (`area` and `bbox` can be stale; geometry is recomputed).
    pub extra: Map<String, Value>,
}

/// A full dataset with referential integrity between instances, images, and
/// categories. Immutable after construction; safe to share across workers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub images: Vec<ImageRecord>,
    pub instances: Vec<InstanceRecord>,
    pub categories: Vec<CategoryInfo>,
    /// Retained top-level fields from the source file (info, licenses, ...).
    pub passthrough: Map<String, Value>,
}

impl Dataset {
    pub fn image_ids(&self) -> HashSet<u64> {
        self.images.iter().map(|im| im.id).collect()
    }

    pub fn category_ids(&self) -> HashSet<u64> {
        self.categories.iter().map(|c| c.id).collect()
    }

    /// Number of instances per image id, zero for instance-free images.
    pub fn instance_counts(&self) -> HashMap<u64, usize> {
        let mut counts: HashMap<u64, usize> =
            self.images.iter().map(|im| (im.id, 0)).collect();
        for inst in &self.instances {
            *counts.entry(inst.image_id).or_insert(0) += 1;
        }
        counts
    }

    /// A new dataset containing only the given images, their instances, all
    /// categories, and the passthrough fields. Source order is preserved.
    pub fn retain_images(&self, kept: &HashSet<u64>) -> Dataset {
        Dataset {
            images: self.images.iter().filter(|im| kept.contains(&im.id)).cloned().collect(),
            instances: self
                .instances
                .iter()
                .filter(|inst| kept.contains(&inst.image_id))
                .cloned()
                .collect(),
            categories: self.categories.clone(),
            passthrough: self.passthrough.clone(),
        }
    }

    /// Collects every invariant violation without failing. Empty iff valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        for im in &self.images {
            if !seen.insert(im.id) {
                out.push(Diagnostic::DuplicateImageId { image_id: im.id });
            }
            if im.width == 0 || im.height == 0 {
                out.push(Diagnostic::ZeroExtentImage { image_id: im.id });
            }
        }

        let mut seen = HashSet::new();
        for cat in &self.categories {
            if !seen.insert(cat.id) {
                out.push(Diagnostic::DuplicateCategoryId { category_id: cat.id });
            }
            if cat.name.is_empty() {
                out.push(Diagnostic::EmptyCategoryName { category_id: cat.id });
            }
        }

        let image_ids = self.image_ids();
        let category_ids = self.category_ids();
        let mut seen = HashSet::new();
        for inst in &self.instances {
            if !seen.insert(inst.id) {
                out.push(Diagnostic::DuplicateInstanceId { instance_id: inst.id });
            }
            if !image_ids.contains(&inst.image_id) {
                out.push(Diagnostic::DanglingImageRef {
                    instance_id: inst.id,
                    image_id: inst.image_id,
                });
            }
            if !category_ids.contains(&inst.category_id) {
                out.push(Diagnostic::DanglingCategoryRef {
                    instance_id: inst.id,
                    category_id: inst.category_id,
                });
            }
            match &inst.mask {
                MaskGeometry::Polygons(rings) => {
                    if rings.is_empty() {
                        out.push(Diagnostic::EmptyPolygonSet { instance_id: inst.id });
                    }
                    for ring in rings {
                        if ring.len() < 3 {
                            out.push(Diagnostic::ShortRing {
                                instance_id: inst.id,
                                vertices: ring.len(),
                            });
                        } else if ring.iter().flatten().any(|c| !c.is_finite()) {
                            out.push(Diagnostic::NonFiniteVertex { instance_id: inst.id });
                        }
                    }
                }
                MaskGeometry::Rle(rle) => {
                    let expected = rle.pixel_count();
                    let actual = rle.run_sum();
                    if actual != expected {
                        out.push(Diagnostic::RunSumMismatch {
                            instance_id: inst.id,
                            expected,
                            actual,
                        });
                    }
                    // Interior zero runs are non-canonical (two adjacent runs
                    // of the same value); only a leading zero is allowed.
                    if rle.runs.iter().skip(1).any(|&r| r == 0) {
                        out.push(Diagnostic::NonCanonicalRuns { instance_id: inst.id });
                    }
                }
            }
        }

        out
    }
}

/// One invariant violation found by [`Dataset::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateImageId { image_id: u64 },
    DuplicateCategoryId { category_id: u64 },
    DuplicateInstanceId { instance_id: u64 },
    ZeroExtentImage { image_id: u64 },
    EmptyCategoryName { category_id: u64 },
    DanglingImageRef { instance_id: u64, image_id: u64 },
    DanglingCategoryRef { instance_id: u64, category_id: u64 },
    EmptyPolygonSet { instance_id: u64 },
    ShortRing { instance_id: u64, vertices: usize },
    NonFiniteVertex { instance_id: u64 },
    RunSumMismatch { instance_id: u64, expected: u64, actual: u64 },
    NonCanonicalRuns { instance_id: u64 },
}

impl Diagnostic {
    /// The instance the problem was found on, when there is one.
    pub fn instance_id(&self) -> Option<u64> {
        match self {
            Diagnostic::DuplicateInstanceId { instance_id }
            | Diagnostic::DanglingImageRef { instance_id, .. }
            | Diagnostic::DanglingCategoryRef { instance_id, .. }
            | Diagnostic::EmptyPolygonSet { instance_id }
            | Diagnostic::ShortRing { instance_id, .. }
            | Diagnostic::NonFiniteVertex { instance_id }
            | Diagnostic::RunSumMismatch { instance_id, .. }
            | Diagnostic::NonCanonicalRuns { instance_id } => Some(*instance_id),
            _ => None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateImageId { image_id } => {
                write!(f, "duplicate image id {image_id}")
            }
            Diagnostic::DuplicateCategoryId { category_id } => {
                write!(f, "duplicate category id {category_id}")
            }
            Diagnostic::DuplicateInstanceId { instance_id } => {
                write!(f, "duplicate annotation id {instance_id}")
            }
            Diagnostic::ZeroExtentImage { image_id } => {
                write!(f, "image {image_id} has zero width or height")
            }
            Diagnostic::EmptyCategoryName { category_id } => {
                write!(f, "category {category_id} has an empty name")
            }
            Diagnostic::DanglingImageRef { instance_id, image_id } => {
                write!(f, "annotation {instance_id} references missing image {image_id}")
            }
            Diagnostic::DanglingCategoryRef { instance_id, category_id } => {
                write!(f, "annotation {instance_id} references missing category {category_id}")
            }
            Diagnostic::EmptyPolygonSet { instance_id } => {
                write!(f, "annotation {instance_id} has an empty polygon list")
            }
            Diagnostic::ShortRing { instance_id, vertices } => {
                write!(f, "annotation {instance_id} has a ring with only {vertices} vertices")
            }
            Diagnostic::NonFiniteVertex { instance_id } => {
                write!(f, "annotation {instance_id} has a non-finite vertex")
            }
            Diagnostic::RunSumMismatch { instance_id, expected, actual } => {
                write!(
                    f,
                    "annotation {instance_id} RLE runs sum to {actual}, expected {expected}"
                )
            }
            Diagnostic::NonCanonicalRuns { instance_id } => {
                write!(f, "annotation {instance_id} has an interior zero run")
            }
        }
    }
}
