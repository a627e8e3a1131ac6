//! Summarize an annotation file without scoring it.
//!
//! Prints the same distribution report the `stats` subcommand writes:
//! image and instance counts, per-class instance counts, an area histogram
//! over pixel buckets, and per-class area quartiles. Pass a path to
//! summarize your own file.
//!
//! Run with: cargo run --example dataset_stats [annotations.json]

use maskprune::{
    default_area_edges, distribution_report, gen_corpus, read_coco, CorpusConfig,
};

fn main() {
    let dataset = match std::env::args().nth(1) {
        Some(path) => read_coco(path.as_ref()).expect("readable annotation file"),
        None => gen_corpus(&CorpusConfig { image_count: 80, seed: 21, ..Default::default() })
            .expect("generate corpus"),
    };

    let report = distribution_report(&dataset, &default_area_edges())
        .expect("area bucket edges are valid");
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
