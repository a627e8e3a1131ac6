//! Report artifacts: score CSVs, the selection manifest, the coverage
//! table, and the distribution JSON. Rows are id-ordered and floats are
//! printed with a fixed precision, so reruns produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::score::{ImageScore, InstanceScore};
use crate::stats::{class_histogram, coverage_delta, DistributionReport};

/// Format a float with 6 significant digits. Values outside a sane plain
/// range switch to scientific notation rather than spill extra digits.
pub fn fmt_sig(value: f64) -> String {
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    if !(-5..6).contains(&exponent) {
        format!("{value:.5e}")
    } else {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{value:.decimals$}")
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, contents)?;
    Ok(())
}

/// One CSV row per scored instance, ordered by instance id.
pub fn write_instance_scores(path: &Path, scores: &[InstanceScore]) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "instance_id,image_id,category_id,perimeter,area,scs,si_scs,cb_scs").unwrap();
    for s in scores {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.instance_id,
            s.image_id,
            s.category_id,
            fmt_sig(s.perimeter),
            fmt_sig(s.area),
            fmt_sig(s.raw_scs),
            fmt_sig(s.si_scs),
            fmt_sig(s.cb_scs),
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// One CSV row per image, ordered by image id.
pub fn write_image_scores(path: &Path, scores: &[ImageScore]) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "image_id,instance_count,image_score").unwrap();
    for s in scores {
        writeln!(out, "{},{},{}", s.image_id, s.instance_count, fmt_sig(s.value)).unwrap();
    }
    write_file(path, &out)
}

/// Kept image ids, one per line, in rank order.
pub fn write_manifest(path: &Path, kept_image_ids: &[u64]) -> Result<()> {
    let mut out = Vec::new();
    for id in kept_image_ids {
        writeln!(out, "{id}").unwrap();
    }
    write_file(path, &out)
}

/// The manifest lives alongside the pruned annotation file:
/// `x/pruned.json` pairs with `x/pruned.manifest.txt`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.manifest.txt"))
}

/// Per-class retention of the pruned dataset versus the full one.
pub fn write_coverage(path: &Path, full: &Dataset, pruned: &Dataset) -> Result<()> {
    let retention = coverage_delta(full, pruned)?;
    let full_counts = class_histogram(full);
    let pruned_counts = class_histogram(pruned);
    let mut out = Vec::new();
    writeln!(out, "category_id,category_name,full_instances,kept_instances,retention").unwrap();
    for category in &full.categories {
        writeln!(
            out,
            "{},{},{},{},{}",
            category.id,
            csv_field(&category.name),
            full_counts.get(&category.id).copied().unwrap_or(0),
            pruned_counts.get(&category.id).copied().unwrap_or(0),
            fmt_sig(retention.get(&category.id).copied().unwrap_or(1.0)),
        )
        .unwrap();
    }
    write_file(path, &out)
}

/// Distribution report as pretty-printed JSON.
pub fn write_distribution(path: &Path, report: &DistributionReport) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(report).expect("report serializes");
    bytes.push(b'\n');
    write_file(path, &bytes)
}
