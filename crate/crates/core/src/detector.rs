//! Multi-scale sliding-window detection.
//!
//! The image is integrated once; detection scales are handled by scaling the
//! model's feature rectangles (never by resampling the image). Each candidate
//! window is variance-normalized and run through the cascade stages with
//! early rejection; accepted windows are merged into [`Detection`]s by
//! [`group_rectangles`].

use crate::cascade::CascadeModel;
use crate::imaging::{round_half_up, GrayImage, IntegralImage, Rect};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectorError {
    #[error("window at ({x}, {y}) with scale {scale} does not fit in a {width}x{height} image")]
    WindowOutOfBounds {
        x: u32,
        y: u32,
        scale: f64,
        width: u32,
        height: u32,
    },
    #[error("{width}x{height} image is smaller than the {base_w}x{base_h} base window")]
    ImageTooSmall {
        width: u32,
        height: u32,
        base_w: u32,
        base_h: u32,
    },
    #[error("invalid scan parameters: {0}")]
    InvalidScanParams(String),
}

/// Sliding-window scan configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanParams {
    /// Geometric growth factor between detection scales; must exceed 1.
    pub scale_factor: f64,
    /// Scan step in base-window pixels; the effective stride at scale `s` is
    /// `max(1, round(stride_factor * s))`.
    pub stride_factor: f64,
    /// Minimum cluster support for a detection to be kept.
    pub min_neighbors: u32,
    /// Smallest accepted window side, if any.
    pub min_size: Option<u32>,
    /// Largest accepted window side, if any.
    pub max_size: Option<u32>,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            scale_factor: 1.1,
            stride_factor: 2.0,
            min_neighbors: 3,
            min_size: None,
            max_size: None,
        }
    }
}

impl ScanParams {
    fn check(&self) -> Result<(), DetectorError> {
        if !self.scale_factor.is_finite() || self.scale_factor <= 1.0 {
            return Err(DetectorError::InvalidScanParams(format!(
                "scale_factor {} must be a finite value > 1",
                self.scale_factor
            )));
        }
        if !self.stride_factor.is_finite() || self.stride_factor <= 0.0 {
            return Err(DetectorError::InvalidScanParams(format!(
                "stride_factor {} must be a finite value > 0",
                self.stride_factor
            )));
        }
        if let (Some(lo), Some(hi)) = (self.min_size, self.max_size) {
            if lo > hi {
                return Err(DetectorError::InvalidScanParams(format!(
                    "min_size {lo} exceeds max_size {hi}"
                )));
            }
        }
        Ok(())
    }
}

/// One grouped detection: the cluster-mean box and its support count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    pub rect: Rect,
    pub neighbors: u32,
}

/// Outcome of evaluating one window: the stage sums actually computed and,
/// if the window was rejected, the index of the first failing stage.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowEval {
    pub stage_sums: Vec<f64>,
    pub rejected_at: Option<usize>,
}

impl WindowEval {
    pub fn passed(&self) -> bool {
        self.rejected_at.is_none()
    }
}

/// A feature rectangle scaled to a concrete window size, stored as the four
/// integral-table corner offsets relative to the window origin.
#[derive(Debug, Clone, Copy)]
struct ScaledRect {
    top_left: usize,
    top_right: usize,
    bottom_left: usize,
    bottom_right: usize,
    weight: f64,
}

#[derive(Debug, Clone, Copy)]
struct ScaledStump {
    rects: [ScaledRect; 3],
    rect_count: u8,
    threshold: f64,
    left_leaf: f64,
    right_leaf: f64,
}

#[derive(Debug, Clone)]
struct ScaledStage {
    stumps: Vec<ScaledStump>,
    threshold: f64,
}

/// Cascade with all feature rects scaled, rounded and re-balanced for one
/// concrete window size on one concrete integral-table stride.
struct ScaledCascade {
    window_w: u32,
    window_h: u32,
    inv_area: f64,
    window: ScaledRect,
    stages: Vec<ScaledStage>,
}

const ZERO_RECT: ScaledRect = ScaledRect {
    top_left: 0,
    top_right: 0,
    bottom_left: 0,
    bottom_right: 0,
    weight: 0.0,
};

fn corner_offsets(x: u32, y: u32, w: u32, h: u32, stride: usize, weight: f64) -> ScaledRect {
    let (x0, y0) = (x as usize, y as usize);
    let (x1, y1) = (x as usize + w as usize, y as usize + h as usize);
    ScaledRect {
        top_left: y0 * stride + x0,
        top_right: y0 * stride + x1,
        bottom_left: y1 * stride + x0,
        bottom_right: y1 * stride + x1,
        weight,
    }
}

#[inline]
fn rect_sum_at(table: &[u64], base: usize, r: &ScaledRect) -> u64 {
    table[base + r.bottom_right] + table[base + r.top_left]
        - table[base + r.bottom_left]
        - table[base + r.top_right]
}

/// Scales every feature rect by `scale` (rounding each coordinate, then
/// clamping into the scaled window so rounding can never escape it) and
/// recomputes the first rect's weight so the scaled weighted areas still
/// cancel exactly.
fn scale_cascade(model: &CascadeModel, scale: f64, stride: usize) -> ScaledCascade {
    let window_w = round_half_up(model.base_width as f64 * scale) as u32;
    let window_h = round_half_up(model.base_height as f64 * scale) as u32;
    let area = window_w as f64 * window_h as f64;

    let scaled_features: Vec<([ScaledRect; 3], u8)> = model
        .features
        .iter()
        .map(|feature| {
            let mut rects = [ZERO_RECT; 3];
            let mut areas = [0f64; 3];
            let count = feature.rects.len().min(3);
            for (i, wr) in feature.rects.iter().take(3).enumerate() {
                let x = (round_half_up(wr.rect.x as f64 * scale) as u32).min(window_w);
                let y = (round_half_up(wr.rect.y as f64 * scale) as u32).min(window_h);
                let w = (round_half_up(wr.rect.w as f64 * scale) as u32).min(window_w - x);
                let h = (round_half_up(wr.rect.h as f64 * scale) as u32).min(window_h - y);
                rects[i] = corner_offsets(x, y, w, h, stride, wr.weight);
                areas[i] = w as f64 * h as f64;
            }
            // re-balance: recompute weight 0 so sum(w_i * area_i) == 0
            if areas[0] > 0.0 {
                let rest: f64 = (1..count).map(|i| rects[i].weight * areas[i]).sum();
                rects[0].weight = -rest / areas[0];
            }
            (rects, count as u8)
        })
        .collect();

    let stages = model
        .stages
        .iter()
        .map(|stage| ScaledStage {
            threshold: stage.threshold,
            stumps: stage
                .stumps
                .iter()
                .map(|stump| {
                    let (rects, rect_count) = scaled_features[stump.feature_index];
                    ScaledStump {
                        rects,
                        rect_count,
                        threshold: stump.threshold,
                        left_leaf: stump.left_leaf,
                        right_leaf: stump.right_leaf,
                    }
                })
                .collect(),
        })
        .collect();

    ScaledCascade {
        window_w,
        window_h,
        inv_area: 1.0 / area,
        window: corner_offsets(0, 0, window_w, window_h, stride, 1.0),
        stages,
    }
}

/// Runs the stage loop for the window whose origin index is `base`.
/// Returns the index of the first failing stage, or `None` on acceptance;
/// pushes each computed stage sum into `sums` when provided.
fn run_stages(
    sc: &ScaledCascade,
    ii: &IntegralImage,
    base: usize,
    mut sums: Option<&mut Vec<f64>>,
) -> Option<usize> {
    let inv_area = sc.inv_area;
    let total = rect_sum_at(&ii.sum, base, &sc.window) as f64;
    let total_sq = rect_sum_at(&ii.sq_sum, base, &sc.window) as f64;
    let mean = total * inv_area;
    let variance = total_sq * inv_area - mean * mean;
    let std_dev = if variance > 0.0 { variance.sqrt() } else { 1.0 };

    for (index, stage) in sc.stages.iter().enumerate() {
        let mut stage_sum = 0.0;
        for stump in &stage.stumps {
            let mut weighted = 0.0;
            for r in &stump.rects[..stump.rect_count as usize] {
                weighted += r.weight * rect_sum_at(&ii.sum, base, r) as f64;
            }
            let value = weighted * inv_area;
            stage_sum += if value < stump.threshold * std_dev {
                stump.left_leaf
            } else {
                stump.right_leaf
            };
        }
        if let Some(out) = sums.as_deref_mut() {
            out.push(stage_sum);
        }
        if stage_sum < stage.threshold {
            return Some(index);
        }
    }
    None
}

/// Evaluates the cascade on a single window with full diagnostics.
///
/// The window covers `round(base_w * scale) x round(base_h * scale)` pixels at
/// `origin`; it must fit inside the integrated image. The window is variance
/// normalized from the two tables (a non-positive variance clamps the standard
/// deviation to 1), each stump compares its feature value against
/// `threshold * std_dev`, and the first stage whose sum falls below its
/// threshold rejects.
pub fn evaluate_window(
    model: &CascadeModel,
    ii: &IntegralImage,
    origin: (u32, u32),
    scale: f64,
) -> Result<WindowEval, DetectorError> {
    let sc = scale_cascade(model, scale, ii.stride());
    let (x, y) = origin;
    if x as u64 + sc.window_w as u64 > ii.width() as u64
        || y as u64 + sc.window_h as u64 > ii.height() as u64
    {
        return Err(DetectorError::WindowOutOfBounds {
            x,
            y,
            scale,
            width: ii.width(),
            height: ii.height(),
        });
    }
    let base = y as usize * ii.stride() + x as usize;
    let mut sums = Vec::with_capacity(sc.stages.len());
    let rejected_at = run_stages(&sc, ii, base, Some(&mut sums));
    Ok(WindowEval {
        stage_sums: sums,
        rejected_at,
    })
}

/// The scales a scan will visit: 1, f, f^2, ... while the scaled window fits
/// the image and respects the min/max size bounds.
fn scale_schedule(model: &CascadeModel, img_w: u32, img_h: u32, p: &ScanParams) -> Vec<f64> {
    let mut scales = Vec::new();
    let mut scale = 1.0f64;
    loop {
        let w = round_half_up(model.base_width as f64 * scale) as u64;
        let h = round_half_up(model.base_height as f64 * scale) as u64;
        if w > img_w as u64 || h > img_h as u64 {
            break;
        }
        if let Some(hi) = p.max_size {
            if w.max(h) > hi as u64 {
                break;
            }
        }
        let above_min = p.min_size.is_none_or(|lo| w.min(h) >= lo as u64);
        if above_min {
            scales.push(scale);
        }
        scale *= p.scale_factor;
    }
    scales
}

fn scan_one_scale(
    model: &CascadeModel,
    ii: &IntegralImage,
    scale: f64,
    stride_factor: f64,
) -> Vec<Rect> {
    let sc = scale_cascade(model, scale, ii.stride());
    let step = (round_half_up(stride_factor * scale) as u64).max(1) as u32;
    let mut hits = Vec::new();
    if sc.window_w > ii.width() || sc.window_h > ii.height() {
        return hits;
    }
    let mut y = 0u32;
    while y + sc.window_h <= ii.height() {
        let row_base = y as usize * ii.stride();
        let mut x = 0u32;
        while x + sc.window_w <= ii.width() {
            if run_stages(&sc, ii, row_base + x as usize, None).is_none() {
                hits.push(Rect::new(x, y, sc.window_w, sc.window_h));
            }
            x += step;
        }
        y += step;
    }
    hits
}

fn scan_prepared(
    model: &CascadeModel,
    img: &GrayImage,
    p: &ScanParams,
) -> Result<(IntegralImage, Vec<f64>), DetectorError> {
    p.check()?;
    if img.width() < model.base_width || img.height() < model.base_height {
        return Err(DetectorError::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            base_w: model.base_width,
            base_h: model.base_height,
        });
    }
    let ii = IntegralImage::new(img);
    let scales = scale_schedule(model, img.width(), img.height(), p);
    Ok((ii, scales))
}

/// All windows the cascade accepts, before grouping, scanned serially in
/// (scale, row, column) order.
pub fn scan_windows(
    model: &CascadeModel,
    img: &GrayImage,
    p: &ScanParams,
) -> Result<Vec<Rect>, DetectorError> {
    let (ii, scales) = scan_prepared(model, img, p)?;
    Ok(scales
        .iter()
        .flat_map(|&s| scan_one_scale(model, &ii, s, p.stride_factor))
        .collect())
}

/// Multi-scale detection: integrate once, scan every scheduled scale (scales
/// are evaluated in parallel; the merge order is fixed by the schedule, so
/// output is identical to a serial scan), then group raw windows into
/// detections. Results are sorted by `(y, x, h, w)`.
pub fn detect_multiscale(
    model: &CascadeModel,
    img: &GrayImage,
    p: &ScanParams,
) -> Result<Vec<Detection>, DetectorError> {
    let (ii, scales) = scan_prepared(model, img, p)?;
    let raw: Vec<Rect> = scales
        .par_iter()
        .map(|&s| scan_one_scale(model, &ii, s, p.stride_factor))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(group_rectangles(&raw, p.min_neighbors))
}

/// Two boxes are "similar" when every coordinate differs by at most
/// `0.2 * (min(w) + min(h)) / 2`.
fn similar(a: &Rect, b: &Rect) -> bool {
    let delta = 0.2 * (a.w.min(b.w) as f64 + a.h.min(b.h) as f64) / 2.0;
    (a.x as f64 - b.x as f64).abs() <= delta
        && (a.y as f64 - b.y as f64).abs() <= delta
        && (a.w as f64 - b.w as f64).abs() <= delta
        && (a.h as f64 - b.h as f64).abs() <= delta
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Clusters raw windows by transitive closure of the similarity predicate,
/// emits each cluster's rounded arithmetic-mean box (for clusters with at
/// least `max(1, min_neighbors)` members) with `neighbors` = cluster size,
/// then drops any box fully contained in another surviving box with at least
/// as many neighbors (equal boxes keep the canonically first one).
/// Output is sorted by `(y, x, h, w)`.
pub fn group_rectangles(raw: &[Rect], min_neighbors: u32) -> Vec<Detection> {
    let mut sets = DisjointSet::new(raw.len());
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if similar(&raw[i], &raw[j]) {
                sets.union(i, j);
            }
        }
    }

    let mut clusters: std::collections::BTreeMap<usize, (u64, u64, u64, u64, u32)> =
        std::collections::BTreeMap::new();
    for (i, r) in raw.iter().enumerate() {
        let root = sets.find(i);
        let entry = clusters.entry(root).or_insert((0, 0, 0, 0, 0));
        entry.0 += r.x as u64;
        entry.1 += r.y as u64;
        entry.2 += r.w as u64;
        entry.3 += r.h as u64;
        entry.4 += 1;
    }

    let needed = min_neighbors.max(1);
    let mut merged: Vec<Detection> = clusters
        .values()
        .filter(|&&(_, _, _, _, n)| n >= needed)
        .map(|&(sx, sy, sw, sh, n)| {
            let avg = |sum: u64| round_half_up(sum as f64 / n as f64) as u32;
            Detection {
                rect: Rect::new(avg(sx), avg(sy), avg(sw), avg(sh)),
                neighbors: n,
            }
        })
        .collect();

    merged.sort_by_key(|d| (d.rect.y, d.rect.x, d.rect.h, d.rect.w, d.neighbors));

    let kept: Vec<Detection> = merged
        .iter()
        .enumerate()
        .filter(|(i, d)| {
            !merged.iter().enumerate().any(|(j, other)| {
                j != *i
                    && other.neighbors >= d.neighbors
                    && other.rect.contains(&d.rect)
                    && (other.rect != d.rect || j < *i)
            })
        })
        .map(|(_, d)| *d)
        .collect();
    kept
}
