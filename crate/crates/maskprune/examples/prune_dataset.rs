//! Keep the most boundary-complex half of a corpus and write it back out.
//!
//! The output is a standard annotation file any training pipeline can
//! consume, plus a one-id-per-line manifest of the kept images in rank
//! order. Per-class retention is printed so you can see what the cut cost.
//!
//! Run with: cargo run --example prune_dataset

use maskprune::report::{manifest_path, write_manifest};
use maskprune::{
    class_histogram, gen_corpus, image_scores, prune, score_dataset, select_top_k, write_coco,
    CorpusConfig, ScoreOptions,
};

fn main() {
    let corpus = gen_corpus(&CorpusConfig { image_count: 120, seed: 9, ..Default::default() })
        .expect("generate corpus");

    let scores = score_dataset(&corpus, ScoreOptions::default());
    let images = image_scores(&corpus, &scores.instances);
    let selection = select_top_k(&images, 0.5).expect("valid pruning rate");
    let kept = prune(&corpus, &selection).expect("selection refers to known images");

    let dir = tempfile::tempdir().expect("temp dir");
    let out = dir.path().join("pruned.json");
    write_coco(&out, &kept, &selection.kept_image_ids).expect("write pruned file");
    write_manifest(&manifest_path(&out), &selection.kept_image_ids).expect("write manifest");

    println!(
        "kept {} of {} images at p = {}",
        selection.kept_count,
        corpus.images.len(),
        selection.pruning_rate
    );
    println!("pruned file: {}", out.display());
    println!("manifest:    {}\n", manifest_path(&out).display());

    let full = class_histogram(&corpus);
    let after = class_histogram(&kept);
    println!("{:<10} {:>6} {:>6} {:>10}", "class", "before", "after", "retention");
    for category in &corpus.categories {
        let before = full.get(&category.id).copied().unwrap_or(0);
        let kept_n = after.get(&category.id).copied().unwrap_or(0);
        println!(
            "{:<10} {:>6} {:>6} {:>9.1}%",
            category.name,
            before,
            kept_n,
            100.0 * kept_n as f64 / before.max(1) as f64
        );
    }
}
