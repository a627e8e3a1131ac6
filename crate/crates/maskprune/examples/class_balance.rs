//! What the class-balanced stage buys on a long-tailed corpus.
//!
//! The corpus below is 90% stars, 9% boxes, 1% plain disks. Ranking images
//! by the raw scale-invariant quotient buries the rare disks: they are the
//! geometrically dullest class, so the images holding them go first. The
//! class-balanced stage min-max normalizes each class to the same [0, 1]
//! budget, so a dull-but-rare class competes on equal terms. The number to
//! watch is how much of the rarest class survives a hard cut.
//!
//! Run with: cargo run --example class_balance

use maskprune::{
    class_histogram, gen_corpus, image_scores_by, prune, score_dataset, select_random,
    select_top_k, ClassSpec, CorpusConfig, Method, ScoreOptions, ShapeStyle,
};

fn main() {
    let config = CorpusConfig {
        image_count: 800,
        circle_sides: 60,
        classes: vec![
            ClassSpec { category_id: 1, name: "burst".into(), weight: 0.90, style: ShapeStyle::Spiky },
            ClassSpec { category_id: 2, name: "box".into(), weight: 0.09, style: ShapeStyle::Boxy },
            ClassSpec { category_id: 3, name: "pebble".into(), weight: 0.01, style: ShapeStyle::Round },
        ],
        seed: 17,
        ..CorpusConfig::default()
    };
    let corpus = gen_corpus(&config).expect("generate corpus");
    let full = class_histogram(&corpus);
    let (&rarest, &rarest_total) = full.iter().min_by_key(|(_, &n)| n).unwrap();
    let rarest_name = &corpus.categories.iter().find(|c| c.id == rarest).unwrap().name;
    println!(
        "corpus: {} images, class counts {:?}, rarest = {rarest_name} ({rarest_total} instances)\n",
        corpus.images.len(),
        full
    );

    let p = 0.6;
    let scores = score_dataset(&corpus, ScoreOptions::default());
    println!("pruning at p = {p}:\n");
    println!("{:<18} {:>22}", "selection", "rarest-class retention");

    for method in [Method::Si, Method::Cb] {
        let images = image_scores_by(&corpus, &scores.instances, method);
        let selection = select_top_k(&images, p).unwrap();
        let kept = prune(&corpus, &selection).unwrap();
        let survivors = class_histogram(&kept).get(&rarest).copied().unwrap_or(0);
        println!(
            "{:<18} {:>13} of {:<3} ({:.0}%)",
            format!("top-k by {}", method.name()),
            survivors,
            rarest_total,
            100.0 * survivors as f64 / rarest_total as f64
        );
    }

    let ids: Vec<u64> = corpus.images.iter().map(|im| im.id).collect();
    let mut survivor_sum = 0;
    let seeds = 20;
    for seed in 0..seeds {
        let selection = select_random(&ids, p, seed).unwrap();
        let kept = prune(&corpus, &selection).unwrap();
        survivor_sum += class_histogram(&kept).get(&rarest).copied().unwrap_or(0);
    }
    let mean = survivor_sum as f64 / seeds as f64;
    println!(
        "{:<18} {:>13.1} of {:<3} ({:.0}%)   mean over {seeds} seeds",
        "random",
        mean,
        rarest_total,
        100.0 * mean / rarest_total as f64
    );
}
