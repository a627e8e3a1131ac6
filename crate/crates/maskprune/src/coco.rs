//! Reading and writing COCO-style annotation files.
//!
//! Parsing is strict about what scoring depends on (mask structure,
//! referential integrity, run sums) and permissive about everything else:
//! unknown fields ride along verbatim in `extra`/`passthrough` maps and come
//! back out on emission, so a pruned file drops nothing a downstream trainer
//! needs. Ring arity and similar soft invariants are left to
//! [`Dataset::validate`] so that imperfect files can still be inspected.

use std::fs;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::dataset::{
    CategoryInfo, Dataset, ImageRecord, InstanceRecord, MaskGeometry, RleMask, Vertex,
};
use crate::error::{Error, Result};
use crate::rle::{coco_counts_decode, coco_counts_encode};

#[derive(Debug, Deserialize, Serialize)]
struct WireDoc {
    images: Vec<WireImage>,
    annotations: Vec<WireAnnotation>,
    categories: Vec<WireCategory>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

#[derive(Debug, Deserialize, Serialize)]
struct WireImage {
    id: u64,
    file_name: String,
    width: u32,
    height: u32,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

#[derive(Debug, Deserialize, Serialize)]
struct WireCategory {
    id: u64,
    name: String,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

#[derive(Debug, Deserialize, Serialize)]
struct WireAnnotation {
    id: u64,
    image_id: u64,
    category_id: u64,
    segmentation: WireSegmentation,
    #[serde(
        default,
        deserialize_with = "de_iscrowd",
        serialize_with = "ser_iscrowd"
    )]
    iscrowd: bool,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum WireSegmentation {
    Polygons(Vec<Vec<f64>>),
    Rle(WireRle),
}

#[derive(Debug, Deserialize, Serialize)]
struct WireRle {
    size: [u64; 2],
    counts: WireCounts,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum WireCounts {
    Text(String),
    Runs(Vec<u64>),
}

/// Accept the 0/1 integers COCO actually uses alongside JSON booleans.
fn de_iscrowd<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<bool, D::Error> {
    match Value::deserialize(de)? {
        Value::Null => Ok(false),
        Value::Bool(b) => Ok(b),
        Value::Number(n) => Ok(n.as_f64().map(|f| f != 0.0).unwrap_or(false)),
        other => Err(D::Error::custom(format!(
            "iscrowd must be a boolean or number, got {other}"
        ))),
    }
}

fn ser_iscrowd<S: Serializer>(value: &bool, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_u8(*value as u8)
}

/// Translate a serde_json line/column position into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0usize;
    for (index, content) in text.split('\n').enumerate() {
        if index + 1 == line {
            return (offset + column.saturating_sub(1)).min(text.len());
        }
        offset += content.len() + 1;
    }
    text.len()
}

fn json_error(text: &str, err: serde_json::Error) -> Error {
    Error::Parse {
        offset: byte_offset(text, err.line(), err.column()),
        message: err.to_string(),
    }
}

fn convert_segmentation(id: u64, seg: WireSegmentation) -> Result<MaskGeometry> {
    match seg {
        WireSegmentation::Polygons(flat_rings) => {
            let mut rings: Vec<Vec<Vertex>> = Vec::with_capacity(flat_rings.len());
            for flat in &flat_rings {
                if flat.len() % 2 != 0 {
                    return Err(Error::integrity(format!(
                        "annotation {id}: polygon ring has odd coordinate count {}",
                        flat.len()
                    )));
                }
                rings.push(flat.chunks_exact(2).map(|xy| [xy[0], xy[1]]).collect());
            }
            Ok(MaskGeometry::Polygons(rings))
        }
        WireSegmentation::Rle(rle) => {
            let [height, width] = rle.size;
            let (runs, compressed) = match rle.counts {
                WireCounts::Text(text) => {
                    let runs = coco_counts_decode(&text)
                        .map_err(|e| Error::codec(format!("annotation {id}: {e}")))?;
                    (runs, true)
                }
                WireCounts::Runs(runs) => (runs, false),
            };
            let expected = height * width;
            let total: u64 = runs.iter().sum();
            if total != expected {
                return Err(Error::geometry(format!(
                    "annotation {id}: runs sum to {total} but mask is {height}x{width} \
                     ({expected} pixels)"
                )));
            }
            Ok(MaskGeometry::Rle(RleMask {
                height: height as usize,
                width: width as usize,
                runs,
                compressed,
            }))
        }
    }
}

/// Parse annotation file bytes into a [`Dataset`].
///
/// Malformed JSON reports the byte offset of the failure; a dangling
/// image or category reference, an odd-length polygon ring, or an RLE whose
/// runs do not cover the declared size is rejected naming the annotation.
pub fn parse_coco(bytes: &[u8]) -> Result<Dataset> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        offset: e.valid_up_to(),
        message: "document is not valid UTF-8".into(),
    })?;
    let wire: WireDoc = serde_json::from_str(text).map_err(|e| json_error(text, e))?;

    let images: Vec<ImageRecord> = wire
        .images
        .into_iter()
        .map(|w| ImageRecord {
            id: w.id,
            file_name: w.file_name,
            width: w.width,
            height: w.height,
            extra: w.extra,
        })
        .collect();
    let categories: Vec<CategoryInfo> = wire
        .categories
        .into_iter()
        .map(|w| CategoryInfo { id: w.id, name: w.name, extra: w.extra })
        .collect();

    let image_ids: std::collections::HashSet<u64> = images.iter().map(|i| i.id).collect();
    let category_ids: std::collections::HashSet<u64> =
        categories.iter().map(|c| c.id).collect();

    let mut instances = Vec::with_capacity(wire.annotations.len());
    for ann in wire.annotations {
        if !image_ids.contains(&ann.image_id) {
            return Err(Error::integrity(format!(
                "annotation {} references missing image {}",
                ann.id, ann.image_id
            )));
        }
        if !category_ids.contains(&ann.category_id) {
            return Err(Error::integrity(format!(
                "annotation {} references missing category {}",
                ann.id, ann.category_id
            )));
        }
        let mask = convert_segmentation(ann.id, ann.segmentation)?;
        instances.push(InstanceRecord {
            id: ann.id,
            image_id: ann.image_id,
            category_id: ann.category_id,
            mask,
            is_crowd: ann.iscrowd,
            extra: ann.extra,
        });
    }

    Ok(Dataset { images, instances, categories, passthrough: wire.extra })
}

/// Read and parse an annotation file from disk.
pub fn read_coco(path: &Path) -> Result<Dataset> {
    let bytes = fs::read(path)?;
    parse_coco(&bytes)
}

fn segmentation_to_wire(mask: &MaskGeometry) -> WireSegmentation {
    match mask {
        MaskGeometry::Polygons(rings) => WireSegmentation::Polygons(
            rings
                .iter()
                .map(|ring| ring.iter().flat_map(|v| [v[0], v[1]]).collect())
                .collect(),
        ),
        MaskGeometry::Rle(rle) => WireSegmentation::Rle(WireRle {
            size: [rle.height as u64, rle.width as u64],
            counts: if rle.compressed {
                WireCounts::Text(coco_counts_encode(&rle.runs))
            } else {
                WireCounts::Runs(rle.runs.clone())
            },
        }),
    }
}

/// Serialize the subset of `dataset` covered by `kept_image_ids`.
///
/// Emits exactly the kept images (in source order), every annotation on a
/// kept image, all categories, and all passthrough fields. Masks are written
/// back in the form they arrived in: polygons stay polygons and compressed
/// counts stay compressed.
pub fn emit_coco(dataset: &Dataset, kept_image_ids: &[u64]) -> Result<Vec<u8>> {
    let known: std::collections::HashSet<u64> = dataset.images.iter().map(|i| i.id).collect();
    for &id in kept_image_ids {
        if !known.contains(&id) {
            return Err(Error::argument(format!(
                "kept set references unknown image id {id}"
            )));
        }
    }
    let kept: std::collections::HashSet<u64> = kept_image_ids.iter().copied().collect();

    let wire = WireDoc {
        images: dataset
            .images
            .iter()
            .filter(|img| kept.contains(&img.id))
            .map(|img| WireImage {
                id: img.id,
                file_name: img.file_name.clone(),
                width: img.width,
                height: img.height,
                extra: img.extra.clone(),
            })
            .collect(),
        annotations: dataset
            .instances
            .iter()
            .filter(|inst| kept.contains(&inst.image_id))
            .map(|inst| WireAnnotation {
                id: inst.id,
                image_id: inst.image_id,
                category_id: inst.category_id,
                segmentation: segmentation_to_wire(&inst.mask),
                iscrowd: inst.is_crowd,
                extra: inst.extra.clone(),
            })
            .collect(),
        categories: dataset
            .categories
            .iter()
            .map(|cat| WireCategory {
                id: cat.id,
                name: cat.name.clone(),
                extra: cat.extra.clone(),
            })
            .collect(),
        extra: dataset.passthrough.clone(),
    };
    Ok(serde_json::to_vec(&wire).expect("annotation document serializes"))
}

/// Emit the kept subset of `dataset` to a file on disk.
pub fn write_coco(path: &Path, dataset: &Dataset, kept_image_ids: &[u64]) -> Result<()> {
    let bytes = emit_coco(dataset, kept_image_ids)?;
    fs::write(path, bytes)?;
    Ok(())
}
