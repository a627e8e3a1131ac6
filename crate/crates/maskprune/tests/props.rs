//! Property tests for the geometry, codec, scoring, and selection
//! invariants the library promises.

use proptest::prelude::*;

use maskprune::dataset::MaskGeometry;
use maskprune::geometry::{
    instance_metrics, polygon_set_metrics, raster_metrics, BitMask,
};
use maskprune::rle::{coco_counts_decode, coco_counts_encode, rle_decode, rle_encode};
use maskprune::score::{cb_normalize, score_dataset, si_scs, InstanceScore, ScoreOptions};
use maskprune::select::{select_random, select_top_k};
use maskprune::synth::{gen_corpus, CorpusConfig};
use maskprune::{emit_coco, parse_coco};

/// A random star-shaped (hence simple) polygon: vertices at strictly
/// increasing angles around the origin with positive radii.
fn simple_polygon() -> impl Strategy<Value = Vec<[f64; 2]>> {
    (3usize..24, proptest::collection::vec((0.05f64..0.95, 0.1f64..100.0), 24))
        .prop_map(|(n, params)| {
            (0..n)
                .map(|i| {
                    let (jitter, radius) = params[i];
                    let angle = std::f64::consts::TAU * (i as f64 + jitter) / n as f64;
                    [radius * angle.cos(), radius * angle.sin()]
                })
                .collect()
        })
}

fn bitmask() -> impl Strategy<Value = BitMask> {
    (1usize..32, 1usize..32)
        .prop_flat_map(|(h, w)| {
            proptest::collection::vec(proptest::bool::weighted(0.4), h * w)
                .prop_map(move |bits| {
                    let mut mask = BitMask::new(h, w);
                    let mut it = bits.into_iter();
                    mask.fill_where(|_, _| it.next().unwrap());
                    mask
                })
        })
}

fn scale(ring: &[[f64; 2]], k: f64) -> Vec<[f64; 2]> {
    ring.iter().map(|v| [v[0] * k, v[1] * k]).collect()
}

fn translate(ring: &[[f64; 2]], dx: f64, dy: f64) -> Vec<[f64; 2]> {
    ring.iter().map(|v| [v[0] + dx, v[1] + dy]).collect()
}

proptest! {
    #[test]
    fn polygon_translation_is_exactly_invariant_in_tolerance(
        ring in simple_polygon(),
        dx in -500.0f64..500.0,
        dy in -500.0f64..500.0,
    ) {
        let a = polygon_set_metrics(std::slice::from_ref(&ring.clone())).unwrap();
        let moved = translate(&ring, dx, dy);
        let b = polygon_set_metrics(&[moved]).unwrap();
        prop_assert!((a.perimeter - b.perimeter).abs() <= 1e-9 * a.perimeter.max(1.0));
        prop_assert!((a.area - b.area).abs() <= 1e-6 * a.area.max(1.0));
    }

    #[test]
    fn polygon_metrics_scale_as_k_and_k_squared(
        ring in simple_polygon(),
        k in prop_oneof![0.001f64..0.1, 0.1f64..10.0, 10.0f64..1000.0],
    ) {
        let base = polygon_set_metrics(std::slice::from_ref(&ring.clone())).unwrap();
        prop_assume!(base.area > 1e-9);
        let scaled = polygon_set_metrics(&[scale(&ring, k)]).unwrap();
        prop_assert!((scaled.perimeter - k * base.perimeter).abs() <= 1e-9 * (k * base.perimeter));
        prop_assert!((scaled.area - k * k * base.area).abs() <= 1e-9 * (k * k * base.area));
    }

    #[test]
    fn quotient_is_scale_invariant(
        ring in simple_polygon(),
        k in prop_oneof![Just(0.5f64), Just(2.0), Just(10.0), 0.01f64..100.0],
    ) {
        let base = polygon_set_metrics(std::slice::from_ref(&ring.clone())).unwrap();
        prop_assume!(base.area > 1e-9);
        let scaled = polygon_set_metrics(&[scale(&ring, k)]).unwrap();
        let qa = si_scs(base).unwrap();
        let qb = si_scs(scaled).unwrap();
        prop_assert!((qa - qb).abs() <= 1e-9 * qa, "{qa} vs {qb} at k={k}");
    }

    #[test]
    fn simple_polygons_never_beat_the_circle(ring in simple_polygon()) {
        let metrics = polygon_set_metrics(std::slice::from_ref(&ring.clone())).unwrap();
        prop_assume!(metrics.area > 1e-9);
        let q = si_scs(metrics).unwrap();
        prop_assert!(q >= 1.0 - 1e-6, "q = {q}");
    }

    #[test]
    fn rasters_never_beat_the_digital_square(mask in bitmask()) {
        let metrics = raster_metrics(&mask);
        prop_assume!(metrics.area > 0.0);
        let q = si_scs(metrics).unwrap();
        prop_assert!(q >= 4.0 / std::f64::consts::PI - 1e-6, "q = {q}");
    }

    #[test]
    fn raster_perimeter_matches_brute_force(mask in bitmask()) {
        // count edges between set pixels and clear-or-outside neighbors,
        // enumerated the slow way
        let (h, w) = (mask.height() as isize, mask.width() as isize);
        let set = |r: isize, c: isize| {
            r >= 0 && r < h && c >= 0 && c < w && mask.get(r as usize, c as usize)
        };
        let mut edges = 0u64;
        for r in 0..h {
            for c in 0..w {
                if !set(r, c) {
                    continue;
                }
                for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    if !set(r + dr, c + dc) {
                        edges += 1;
                    }
                }
            }
        }
        prop_assert_eq!(raster_metrics(&mask).perimeter, edges as f64);
    }

    #[test]
    fn raster_metrics_invariant_under_padding(mask in bitmask(), pad in 1usize..5) {
        let base = raster_metrics(&mask);
        let mut padded = BitMask::new(mask.height() + 2 * pad, mask.width() + 2 * pad);
        for r in 0..mask.height() {
            for c in 0..mask.width() {
                padded.set(r + pad, c + pad, mask.get(r, c));
            }
        }
        let shifted = raster_metrics(&padded);
        prop_assert_eq!(base.perimeter, shifted.perimeter);
        prop_assert_eq!(base.area, shifted.area);
    }

    #[test]
    fn mask_roundtrips_through_runs(mask in bitmask()) {
        let runs = rle_encode(&mask);
        let back = rle_decode(&runs, mask.height(), mask.width()).unwrap();
        prop_assert_eq!(back, mask);
    }

    #[test]
    fn counts_string_roundtrips(runs in proptest::collection::vec(0u64..1u64 << 33, 0..64)) {
        let encoded = coco_counts_encode(&runs);
        let decoded = coco_counts_decode(&encoded).unwrap();
        prop_assert_eq!(decoded, runs);
    }

    #[test]
    fn mask_roundtrips_through_counts_string(mask in bitmask()) {
        let runs = rle_encode(&mask);
        let text = coco_counts_encode(&runs);
        let back = rle_decode(&coco_counts_decode(&text).unwrap(), mask.height(), mask.width())
            .unwrap();
        prop_assert_eq!(back, mask);
    }

    #[test]
    fn cb_values_stay_in_unit_interval_with_extremes_pinned(
        values in proptest::collection::vec((1u64..4, 0.0f64..50.0), 2..40),
    ) {
        let mut rows: Vec<InstanceScore> = values
            .iter()
            .enumerate()
            .map(|(i, &(category_id, si))| InstanceScore {
                instance_id: i as u64 + 1,
                image_id: 1,
                category_id,
                perimeter: 1.0,
                area: 1.0,
                raw_scs: 1.0,
                si_scs: 1.0 + si,
                cb_scs: 0.0,
            })
            .collect();
        cb_normalize(&mut rows);
        for row in &rows {
            prop_assert!((0.0..=1.0).contains(&row.cb_scs));
        }
        for category_id in 1u64..4 {
            let members: Vec<&InstanceScore> =
                rows.iter().filter(|r| r.category_id == category_id).collect();
            if members.is_empty() {
                continue;
            }
            let lo = members.iter().map(|r| r.si_scs).fold(f64::INFINITY, f64::min);
            let hi = members.iter().map(|r| r.si_scs).fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                for member in &members {
                    if member.si_scs == hi {
                        prop_assert_eq!(member.cb_scs, 1.0);
                    }
                    if member.si_scs == lo {
                        prop_assert_eq!(member.cb_scs, 0.0);
                    }
                }
            } else {
                prop_assert!(members.iter().all(|r| r.cb_scs == 1.0));
            }
        }
    }

    #[test]
    fn selection_count_is_exact(
        total in 1usize..300,
        p in 0.0f64..0.99,
    ) {
        let scores: Vec<maskprune::score::ImageScore> = (0..total as u64)
            .map(|image_id| maskprune::score::ImageScore {
                image_id,
                value: (image_id as f64 * 0.37).sin().abs(),
                instance_count: 1,
            })
            .collect();
        let expect = ((1.0 - p) * total as f64).round() as usize;
        let topk = select_top_k(&scores, p).unwrap();
        prop_assert_eq!(topk.kept_count, expect);
        prop_assert_eq!(topk.kept_image_ids.len(), expect);

        let ids: Vec<u64> = (0..total as u64).collect();
        let random = select_random(&ids, p, 11).unwrap();
        prop_assert_eq!(random.kept_count, expect);
    }

    #[test]
    fn kept_scores_dominate_dropped(
        values in proptest::collection::vec(0.0f64..100.0, 2..60),
        p in 0.1f64..0.9,
    ) {
        let scores: Vec<maskprune::score::ImageScore> = values
            .iter()
            .enumerate()
            .map(|(i, &value)| maskprune::score::ImageScore {
                image_id: i as u64,
                value,
                instance_count: 1,
            })
            .collect();
        let sel = select_top_k(&scores, p).unwrap();
        let kept: std::collections::HashSet<u64> = sel.kept_image_ids.iter().copied().collect();
        let min_kept = scores
            .iter()
            .filter(|s| kept.contains(&s.image_id))
            .map(|s| s.value)
            .fold(f64::INFINITY, f64::min);
        let max_dropped = scores
            .iter()
            .filter(|s| !kept.contains(&s.image_id))
            .map(|s| s.value)
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(min_kept >= max_dropped || sel.kept_count == scores.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generated_corpora_roundtrip_and_score_order_free(seed in 0u64..1000) {
        let config = CorpusConfig {
            image_count: 12,
            seed,
            circle_sides: 24,
            ..CorpusConfig::default()
        };
        let dataset = gen_corpus(&config).unwrap();

        // emit -> parse is the identity on the dataset
        let all_ids: Vec<u64> = dataset.images.iter().map(|i| i.id).collect();
        let bytes = emit_coco(&dataset, &all_ids).unwrap();
        let back = parse_coco(&bytes).unwrap();
        prop_assert_eq!(&back, &dataset);

        // scoring does not care how annotations are ordered
        let mut reversed = dataset.clone();
        reversed.instances.reverse();
        let a = score_dataset(&dataset, ScoreOptions::default());
        let b = score_dataset(&reversed, ScoreOptions::default());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn emitted_subset_contains_only_kept_images(seed in 0u64..1000, p in 0.1f64..0.9) {
        let config = CorpusConfig {
            image_count: 15,
            seed,
            circle_sides: 16,
            ..CorpusConfig::default()
        };
        let dataset = gen_corpus(&config).unwrap();
        let scores = score_dataset(&dataset, ScoreOptions::default());
        let sel = select_top_k(&scores.images, p).unwrap();
        let bytes = emit_coco(&dataset, &sel.kept_image_ids).unwrap();
        let pruned = parse_coco(&bytes).unwrap();

        let kept: std::collections::HashSet<u64> = sel.kept_image_ids.iter().copied().collect();
        prop_assert_eq!(pruned.images.len(), sel.kept_count);
        prop_assert!(pruned.images.iter().all(|img| kept.contains(&img.id)));
        prop_assert!(pruned.instances.iter().all(|inst| kept.contains(&inst.image_id)));
        prop_assert_eq!(&pruned.categories, &dataset.categories);
        prop_assert!(pruned.validate().is_empty());

        // expected annotation count by brute-force recount
        let expected = dataset
            .instances
            .iter()
            .filter(|inst| kept.contains(&inst.image_id))
            .count();
        prop_assert_eq!(pruned.instances.len(), expected);
    }

    #[test]
    fn polygon_area_approximates_rasterized_area(radius in 57.0f64..110.0) {
        // pixel-center rasterization of a disk against the shoelace area of
        // its 512-gon; both near pi r^2, within 2% of each other
        let sides = 512u32;
        let ring: Vec<[f64; 2]> = (0..sides)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / sides as f64;
                [radius * theta.cos(), radius * theta.sin()]
            })
            .collect();
        let poly = polygon_set_metrics(&[ring]).unwrap();
        prop_assert!(poly.area >= 1e4 * 0.95);

        let grid = (2.0 * radius).ceil() as usize + 4;
        let center = grid as f64 / 2.0;
        let mut mask = BitMask::new(grid, grid);
        mask.fill_where(|row, col| {
            let dx = col as f64 + 0.5 - center;
            let dy = row as f64 + 0.5 - center;
            dx * dx + dy * dy <= radius * radius
        });
        let raster = raster_metrics(&mask);
        let gap = (raster.area - poly.area).abs() / poly.area;
        prop_assert!(gap < 0.02, "relative gap {gap} at radius {radius}");
    }
}

#[test]
fn degenerate_rle_mask_signals_cleanly() {
    // an all-background mask has area 0 and must surface as Degenerate
    let mask = MaskGeometry::Rle(maskprune::RleMask {
        height: 4,
        width: 4,
        runs: vec![16],
        compressed: false,
    });
    assert!(matches!(
        instance_metrics(&mask),
        Err(maskprune::Error::Degenerate { perimeter }) if perimeter == 0.0
    ));
}

#[test]
fn digital_disks_converge_in_quotient() {
    let disk = |radius: f64| {
        let grid = (2.0 * radius).ceil() as usize + 4;
        let center = grid as f64 / 2.0;
        let mut mask = BitMask::new(grid, grid);
        mask.fill_where(|row, col| {
            let dx = col as f64 + 0.5 - center;
            let dy = row as f64 + 0.5 - center;
            dx * dx + dy * dy <= radius * radius
        });
        si_scs(raster_metrics(&mask)).unwrap()
    };
    let q64 = disk(64.0);
    let q128 = disk(128.0);
    // the 4-connected estimator biases digital circles toward 16/pi^2
    let limit = 16.0 / (std::f64::consts::PI * std::f64::consts::PI);
    assert!((q64 - q128).abs() / q128 < 0.02, "{q64} vs {q128}");
    assert!((q64 - limit).abs() / limit < 0.05, "{q64} vs limit {limit}");
}

#[test]
fn scoring_is_identical_across_worker_counts() {
    let config = CorpusConfig { image_count: 30, seed: 77, ..CorpusConfig::default() };
    let dataset = gen_corpus(&config).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| score_dataset(&dataset, ScoreOptions::default()));
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| score_dataset(&dataset, ScoreOptions::default()));
    assert_eq!(single, many);
}
