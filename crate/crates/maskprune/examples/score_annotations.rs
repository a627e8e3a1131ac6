//! Score a COCO-style annotation file and rank its images.
//!
//! Writes a small synthetic corpus to disk first, so the example exercises
//! the real file path: read, parse, score every instance in parallel,
//! aggregate per image, rank. Pass a path to score your own file instead.
//!
//! Run with: cargo run --example score_annotations [annotations.json]

use maskprune::{
    gen_corpus, image_scores, read_coco, score_dataset, write_coco, CorpusConfig, ScoreOptions,
};

fn main() {
    let arg = std::env::args().nth(1);
    let _guard; // keeps the temp dir alive while we read from it
    let path = match arg {
        Some(path) => path.into(),
        None => {
            let dir = tempfile::tempdir().expect("temp dir");
            let path = dir.path().join("corpus.json");
            let corpus = gen_corpus(&CorpusConfig { image_count: 50, seed: 3, ..Default::default() })
                .expect("generate corpus");
            let ids: Vec<u64> = corpus.images.iter().map(|im| im.id).collect();
            write_coco(&path, &corpus, &ids).expect("write corpus");
            _guard = dir;
            path
        }
    };

    let dataset = read_coco(&path).expect("readable annotation file");
    let scores = score_dataset(&dataset, ScoreOptions::default());
    for warning in &scores.warnings {
        eprintln!("warning: {warning}");
    }

    let mut ranked = image_scores(&dataset, &scores.instances);
    ranked.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.image_id.cmp(&b.image_id)));

    println!(
        "{} images, {} instances scored, {} skipped crowds, {} warnings\n",
        dataset.images.len(),
        scores.instances.len(),
        scores.skipped_crowds,
        scores.warnings.len()
    );
    println!("{:<6} {:>12} {:>10}", "rank", "image score", "instances");
    for (rank, score) in ranked.iter().take(5).enumerate() {
        println!(
            "{:<6} {:>12.4} {:>10}   image {}",
            rank + 1,
            score.value,
            score.instance_count,
            score.image_id
        );
    }
    println!("...");
    let total = ranked.len();
    for (rank, score) in ranked.iter().enumerate().skip(total.saturating_sub(3)) {
        println!(
            "{:<6} {:>12.4} {:>10}   image {}",
            rank + 1,
            score.value,
            score.instance_count,
            score.image_id
        );
    }
}
