//! The COCO mask codec end to end.
//!
//! Decodes a compressed counts string into runs and pixels, renders the
//! mask, measures it, and encodes it back to the identical string. Then
//! goes the other way: rasterize a disk and compress it.
//!
//! Run with: cargo run --example rle_roundtrip

use maskprune::geometry::raster_metrics;
use maskprune::rle::{coco_counts_decode, coco_counts_encode, rle_decode, rle_encode};
use maskprune::BitMask;

fn render(mask: &BitMask) {
    for row in 0..mask.height() {
        let line: String =
            (0..mask.width()).map(|col| if mask.get(row, col) { '#' } else { '.' }).collect();
        println!("  {line}");
    }
}

fn main() {
    // A 12x14 crowd region as COCO stores it: column-major runs,
    // background first, counts compressed to 6-bit chars.
    let counts = ">5700MJ060J06300Y1OkNM002";
    let (height, width) = (12, 14);

    let runs = coco_counts_decode(counts).expect("well-formed counts");
    let mask = rle_decode(&runs, height, width).expect("runs cover the grid");
    println!("counts {counts:?} -> {} runs -> {}x{} mask:", runs.len(), height, width);
    render(&mask);

    let metrics = raster_metrics(&mask);
    println!("area {} px, boundary {} px edges", metrics.area, metrics.perimeter);

    let reencoded = coco_counts_encode(&rle_encode(&mask));
    assert_eq!(reencoded, counts);
    println!("re-encoded byte-identically\n");

    let mut disk = BitMask::new(16, 16);
    disk.fill_where(|row, col| {
        let dy = row as f64 - 7.5;
        let dx = col as f64 - 7.5;
        dx * dx + dy * dy <= 36.0
    });
    println!("a rasterized disk:");
    render(&disk);
    println!("compresses to {:?}", coco_counts_encode(&rle_encode(&disk)));
}
