//! Shared helpers for the integration suites: the naive per-pixel window
//! evaluator (the no-integral-image oracle), random-image generators, and the
//! synthetic identity textures used by the end-to-end recognition tests.

#![allow(dead_code)]

use facekit::cascade::{parse_cascade_xml, CascadeModel};
use facekit::imaging::{resize_bilinear, GrayImage};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const TOY_CASCADE_XML: &[u8] = include_bytes!("../../fixtures/toy_cascade.xml");

pub fn toy_model() -> CascadeModel {
    parse_cascade_xml(TOY_CASCADE_XML).unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveEval {
    pub stage_sums: Vec<f64>,
    pub rejected_at: Option<usize>,
}

impl NaiveEval {
    pub fn passed(&self) -> bool {
        self.rejected_at.is_none()
    }
}

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

/// Sum of samples in a window-relative rect via a plain double loop.
fn pixel_sum(img: &GrayImage, ox: u32, oy: u32, x: u32, y: u32, w: u32, h: u32) -> f64 {
    let mut total = 0.0;
    for yy in oy + y..oy + y + h {
        for xx in ox + x..ox + x + w {
            total += img.get(xx, yy) as f64;
        }
    }
    total
}

/// Reference window evaluation computing every rectangle sum pixel by pixel,
/// with no summed-area tables anywhere. Mirrors the published contract:
/// scaled rects are rounded then clamped into the scaled window, rect 0's
/// weight is recomputed so the weighted areas cancel, the window is variance
/// normalized (sigma clamps to 1 when the variance is non-positive), each
/// stump compares its value against `threshold * sigma`, and the first stage
/// sum below its threshold rejects.
pub fn naive_evaluate_window(
    model: &CascadeModel,
    img: &GrayImage,
    origin: (u32, u32),
    scale: f64,
) -> NaiveEval {
    let (ox, oy) = origin;
    let win_w = round_half_up(model.base_width as f64 * scale) as u32;
    let win_h = round_half_up(model.base_height as f64 * scale) as u32;
    assert!(
        ox + win_w <= img.width() && oy + win_h <= img.height(),
        "window out of bounds"
    );
    let area = (win_w as f64) * (win_h as f64);

    let mut sum = 0.0;
    let mut sq_sum = 0.0;
    for y in oy..oy + win_h {
        for x in ox..ox + win_w {
            let v = img.get(x, y) as f64;
            sum += v;
            sq_sum += v * v;
        }
    }
    let mean = sum / area;
    let variance = sq_sum / area - mean * mean;
    let sigma = if variance > 0.0 { variance.sqrt() } else { 1.0 };

    struct ScaledRect {
        x: u32,
        y: u32,
        w: u32,
        h: u32,
        weight: f64,
    }
    let features: Vec<Vec<ScaledRect>> = model
        .features
        .iter()
        .map(|feature| {
            let mut rects: Vec<ScaledRect> = feature
                .rects
                .iter()
                .map(|wr| {
                    let x = (round_half_up(wr.rect.x as f64 * scale) as u32).min(win_w);
                    let y = (round_half_up(wr.rect.y as f64 * scale) as u32).min(win_h);
                    let w = (round_half_up(wr.rect.w as f64 * scale) as u32).min(win_w - x);
                    let h = (round_half_up(wr.rect.h as f64 * scale) as u32).min(win_h - y);
                    ScaledRect {
                        x,
                        y,
                        w,
                        h,
                        weight: wr.weight,
                    }
                })
                .collect();
            let area0 = rects[0].w as f64 * rects[0].h as f64;
            if area0 > 0.0 {
                let rest: f64 = rects[1..]
                    .iter()
                    .map(|r| r.weight * (r.w as f64 * r.h as f64))
                    .sum();
                rects[0].weight = -rest / area0;
            }
            rects
        })
        .collect();

    // every stage is evaluated (no early exit); the rejection index is then
    // the first stage whose sum falls below its threshold
    let mut stage_sums = Vec::new();
    for stage in &model.stages {
        let mut stage_sum = 0.0;
        for stump in &stage.stumps {
            let mut weighted = 0.0;
            for r in &features[stump.feature_index] {
                weighted += r.weight * pixel_sum(img, ox, oy, r.x, r.y, r.w, r.h);
            }
            let value = weighted / area;
            stage_sum += if value < stump.threshold * sigma {
                stump.left_leaf
            } else {
                stump.right_leaf
            };
        }
        stage_sums.push(stage_sum);
    }
    let rejected_at = stage_sums
        .iter()
        .zip(&model.stages)
        .position(|(&sum, stage)| sum < stage.threshold);
    NaiveEval {
        stage_sums,
        rejected_at,
    }
}

pub fn random_image(rng: &mut StdRng, w: u32, h: u32) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.random_range(0..=255))
}

/// Small random-but-valid cascade: random zero-sum features wired into 1..=3
/// stages of decision stumps. Thresholds are drawn so that random windows
/// land on both sides.
pub fn random_toy_cascade(rng: &mut StdRng) -> CascadeModel {
    use facekit::cascade::{HaarFeature, Stage, Stump, WeightedRect};
    use facekit::imaging::Rect;

    let base_w = rng.random_range(4..=8);
    let base_h = rng.random_range(4..=8);
    let random_rect = |rng: &mut StdRng| {
        let w = rng.random_range(1..=base_w);
        let h = rng.random_range(1..=base_h);
        let x = rng.random_range(0..=base_w - w);
        let y = rng.random_range(0..=base_h - h);
        Rect::new(x, y, w, h)
    };

    let feature_count = rng.random_range(2..=4);
    let features: Vec<HaarFeature> = (0..feature_count)
        .map(|_| {
            let first = random_rect(rng);
            let mut rects = vec![WeightedRect {
                rect: first,
                weight: 0.0,
            }];
            for _ in 0..rng.random_range(1..=2usize) {
                let sign = if rng.random_range(0..2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                rects.push(WeightedRect {
                    rect: random_rect(rng),
                    weight: sign * rng.random_range(0.5..3.0),
                });
            }
            // balance the first rect so the weighted areas cancel exactly
            let rest: f64 = rects[1..]
                .iter()
                .map(|r| r.weight * r.rect.area() as f64)
                .sum();
            rects[0].weight = -rest / first.area() as f64;
            HaarFeature { rects }
        })
        .collect();

    let stages = (0..rng.random_range(1..=3usize))
        .map(|_| {
            let stumps: Vec<Stump> = (0..rng.random_range(1..=4usize))
                .map(|_| Stump {
                    feature_index: rng.random_range(0..feature_count as usize),
                    threshold: rng.random_range(-1.0..1.0),
                    left_leaf: rng.random_range(-1.0..1.0),
                    right_leaf: rng.random_range(-1.0..1.0),
                })
                .collect();
            let threshold = rng.random_range(-1.0..1.0) * stumps.len() as f64 * 0.5;
            Stage { stumps, threshold }
        })
        .collect();

    let model = CascadeModel {
        base_width: base_w,
        base_height: base_h,
        stages,
        features,
    };
    assert!(
        model.validate().is_empty(),
        "generator produced an invalid model"
    );
    model
}

/// A reproducible smooth texture standing in for one person's face: a seeded
/// coarse grid upsampled bilinearly, so most energy sits in low frequencies.
pub fn identity_texture(seed: u64, size: u32) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let coarse = GrayImage::from_fn(6, 6, |_, _| rng.random_range(40..=216));
    resize_bilinear(&coarse, size, size)
}

/// Adds independent uniform noise in [-amplitude, amplitude] (sigma ~ 1.4 for
/// amplitude 2), clamped to the sample range.
pub fn with_noise(img: &GrayImage, seed: u64, amplitude: i32) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        (img.get(x, y) as i32 + rng.random_range(-amplitude..=amplitude)).clamp(0, 255) as u8
    })
}
