//! Deterministic inputs for the pipeline benchmarks: a synthetic multi-stage
//! cascade shaped like the published frontal-face models and reproducible
//! image/gallery builders.

use facekit::cascade::{CascadeModel, HaarFeature, Stage, Stump, WeightedRect};
use facekit::encoder::{Encoding, ENCODING_DIM};
use facekit::gallery::Gallery;
use facekit::imaging::{GrayImage, Rect};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A 20x20 cascade with `stages` stages whose stump counts grow like the
/// distributed frontal-face models (3, 8, 13, ...), over random two-rect
/// zero-sum features.
pub fn synthetic_cascade(stages: usize, seed: u64) -> CascadeModel {
    let mut rng = StdRng::seed_from_u64(seed);
    let base = 20u32;
    let mut features = Vec::new();
    let mut stage_list = Vec::new();
    for stage_index in 0..stages {
        let stump_count = 3 + stage_index * 5;
        let mut stumps = Vec::with_capacity(stump_count);
        for _ in 0..stump_count {
            let w = rng.random_range(2..=base);
            let h = rng.random_range(2..=base);
            let x = rng.random_range(0..=base - w);
            let y = rng.random_range(0..=base - h);
            let outer = Rect::new(x, y, w, h);
            let iw = rng.random_range(1..=w);
            let ih = rng.random_range(1..=h);
            let inner = Rect::new(
                x + rng.random_range(0..=w - iw),
                y + rng.random_range(0..=h - ih),
                iw,
                ih,
            );
            let inner_weight = rng.random_range(1.5..3.0);
            let outer_weight = -inner_weight * inner.area() as f64 / outer.area() as f64;
            features.push(HaarFeature {
                rects: vec![
                    WeightedRect {
                        rect: outer,
                        weight: outer_weight,
                    },
                    WeightedRect {
                        rect: inner,
                        weight: inner_weight,
                    },
                ],
            });
            stumps.push(Stump {
                feature_index: features.len() - 1,
                threshold: rng.random_range(-0.05..0.05),
                left_leaf: rng.random_range(-1.0..0.0),
                right_leaf: rng.random_range(0.0..1.0),
            });
        }
        // keep roughly half of random windows per stage so later stages get work
        stage_list.push(Stage {
            stumps,
            threshold: 0.0,
        });
    }
    let model = CascadeModel {
        base_width: base,
        base_height: base,
        stages: stage_list,
        features,
    };
    assert!(model.validate().is_empty());
    model
}

pub fn noise_image(width: u32, height: u32, seed: u64) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    GrayImage::from_fn(width, height, |_, _| rng.random_range(0..=255))
}

pub fn random_gallery(entries: usize, seed: u64) -> Gallery {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut gallery = Gallery::new();
    for i in 0..entries {
        let raw: Vec<f64> = (0..ENCODING_DIM)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut values = [0.0; ENCODING_DIM];
        for (o, v) in values.iter_mut().zip(&raw) {
            *o = v / norm;
        }
        gallery = gallery
            .enroll(&format!("person{i:04}"), Encoding::try_new(values).unwrap())
            .unwrap();
    }
    gallery
}

pub fn unit_encoding(axis: usize) -> Encoding {
    let mut values = [0.0; ENCODING_DIM];
    values[axis % ENCODING_DIM] = 1.0;
    Encoding::try_new(values).unwrap()
}
