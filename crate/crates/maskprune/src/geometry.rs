//! Perimeter and area for every mask representation.
//!
//! Polygons use exact Euclidean geometry (shoelace area, edge-sum perimeter).
//! Rasters use pixel counting for area and 4-connected exposed-edge counting
//! for perimeter: for each set pixel, every side facing a clear pixel or the
//! grid boundary contributes one unit. The raster estimator has a known
//! multiplicative bias relative to Euclidean length, which cancels in the
//! scale-invariant score.

use crate::dataset::{MaskGeometry, Vertex};
use crate::error::{Error, Result};
use crate::rle::rle_decode;

/// Perimeter and area of one mask, in pixel units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeMetrics {
    pub perimeter: f64,
    pub area: f64,
}

impl ShapeMetrics {
    pub fn is_degenerate(&self) -> bool {
        self.area <= 0.0
    }
}

/// A materialized binary mask. Bits are stored row-major; the column-major
/// convention of COCO RLE only matters at the codec boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMask {
    height: usize,
    width: usize,
    bits: Vec<bool>,
}

impl BitMask {
    pub fn new(height: usize, width: usize) -> Self {
        BitMask { height, width, bits: vec![false; height * width] }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    /// Set pixels from a predicate over (row, col).
    pub fn fill_where(&mut self, mut pred: impl FnMut(usize, usize) -> bool) {
        for row in 0..self.height {
            for col in 0..self.width {
                let v = pred(row, col);
                self.bits[row * self.width + col] = v;
            }
        }
    }

    pub fn count_set(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }
}

fn check_ring(ring: &[Vertex]) -> Result<()> {
    if ring.len() < 3 {
        return Err(Error::geometry(format!(
            "polygon ring needs at least 3 vertices, got {}",
            ring.len()
        )));
    }
    if ring.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::geometry("polygon ring contains a non-finite coordinate"));
    }
    Ok(())
}

/// Shoelace area of one ring, orientation-independent. Self-intersecting
/// rings are measured by |signed area|; real annotation files contain them.
pub fn polygon_area(ring: &[Vertex]) -> Result<f64> {
    check_ring(ring)?;
    let mut twice_area = 0.0;
    for (i, a) in ring.iter().enumerate() {
        let b = &ring[(i + 1) % ring.len()];
        twice_area += a[0] * b[1] - b[0] * a[1];
    }
    Ok(twice_area.abs() / 2.0)
}

/// Sum of Euclidean edge lengths of one ring, including the closing edge.
pub fn polygon_perimeter(ring: &[Vertex]) -> Result<f64> {
    check_ring(ring)?;
    let mut length = 0.0;
    for (i, a) in ring.iter().enumerate() {
        let b = &ring[(i + 1) % ring.len()];
        length += (b[0] - a[0]).hypot(b[1] - a[1]);
    }
    Ok(length)
}

/// Metrics for a polygon set. COCO multi-polygons denote disjoint parts, so
/// both perimeter and area are summed over rings (no hole semantics).
pub fn polygon_set_metrics(rings: &[Vec<Vertex>]) -> Result<ShapeMetrics> {
    let mut perimeter = 0.0;
    let mut area = 0.0;
    for ring in rings {
        perimeter += polygon_perimeter(ring)?;
        area += polygon_area(ring)?;
    }
    Ok(ShapeMetrics { perimeter, area })
}

/// Metrics for a raster: area is the set-pixel count, perimeter the
/// 4-connected exposed-edge count. Hole boundaries are counted naturally.
pub fn raster_metrics(mask: &BitMask) -> ShapeMetrics {
    let (h, w) = (mask.height(), mask.width());
    let mut area = 0u64;
    let mut perimeter = 0u64;
    for row in 0..h {
        for col in 0..w {
            if !mask.get(row, col) {
                continue;
            }
            area += 1;
            if row == 0 || !mask.get(row - 1, col) {
                perimeter += 1;
            }
            if row + 1 == h || !mask.get(row + 1, col) {
                perimeter += 1;
            }
            if col == 0 || !mask.get(row, col - 1) {
                perimeter += 1;
            }
            if col + 1 == w || !mask.get(row, col + 1) {
                perimeter += 1;
            }
        }
    }
    ShapeMetrics { perimeter: perimeter as f64, area: area as f64 }
}

/// Metrics for any mask representation. Zero-area masks (slivers, empty
/// rasters) come back as [`Error::Degenerate`] carrying the perimeter, so the
/// caller decides whether that is fatal.
pub fn instance_metrics(mask: &MaskGeometry) -> Result<ShapeMetrics> {
    let metrics = match mask {
        MaskGeometry::Polygons(rings) => polygon_set_metrics(rings)?,
        MaskGeometry::Rle(rle) => {
            let bits = rle_decode(&rle.runs, rle.height, rle.width)?;
            raster_metrics(&bits)
        }
    };
    if metrics.is_degenerate() {
        return Err(Error::Degenerate { perimeter: metrics.perimeter });
    }
    Ok(metrics)
}
