//! The score ladder on canonical shapes, stage by stage.
//!
//! Prints perimeter, area, the raw perimeter/area ratio, and the
//! scale-invariant quotient for a circle, a square, a star, and a sliver
//! rectangle of equal area, then re-scores the circle at a quarter of the
//! size to show what the second stage buys: the raw ratio quadruples, the
//! quotient holds still.
//!
//! Run with: cargo run --example shape_scores

use std::f64::consts::PI;

use maskprune::{gen_shape, instance_metrics, scs, si_scs, ImageRecord, ShapeKind, SynthSpec};

fn main() {
    let image = ImageRecord::new(1, "canvas.jpg", 512, 512);
    let area = 5000.0;

    // Same enclosed area everywhere; only the boundary changes.
    let ratio = 0.4;
    let outer = (area / (5.0 * ratio * (PI / 5.0).sin())).sqrt();
    let shapes = [
        ("circle", ShapeKind::Circle { sides: 360, radius: (area / PI).sqrt() }),
        ("square", ShapeKind::Square { side: area.sqrt() }),
        ("sliver", ShapeKind::Rectangle { width: area / 10.0, height: 10.0 }),
        ("star", ShapeKind::Star { points: 5, outer_radius: outer, inner_radius: ratio * outer }),
    ];

    println!("{:<8} {:>10} {:>10} {:>10} {:>10}", "shape", "perimeter", "area", "p/a", "quotient");
    for (name, kind) in shapes {
        let spec = SynthSpec { kind, center: [256.0, 256.0], category_id: 1, rotation: 0.0 };
        let instance = gen_shape(&spec, 1, &image).expect("shape fits the canvas");
        let metrics = instance_metrics(&instance.mask).expect("shape is measurable");
        println!(
            "{:<8} {:>10.1} {:>10.1} {:>10.4} {:>10.4}",
            name,
            metrics.perimeter,
            metrics.area,
            scs(metrics).unwrap(),
            si_scs(metrics).unwrap()
        );
    }

    println!("\nsame circle, quarter the radius:");
    for radius in [(area / PI).sqrt(), (area / PI).sqrt() / 4.0] {
        let spec = SynthSpec {
            kind: ShapeKind::Circle { sides: 360, radius },
            center: [256.0, 256.0],
            category_id: 1,
            rotation: 0.0,
        };
        let instance = gen_shape(&spec, 1, &image).unwrap();
        let metrics = instance_metrics(&instance.mask).unwrap();
        println!(
            "  radius {:>6.1}: p/a = {:.4}, quotient = {:.6}",
            radius,
            scs(metrics).unwrap(),
            si_scs(metrics).unwrap()
        );
    }
}
