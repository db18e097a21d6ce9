//! Boosted Haar cascade detection models: parsing, validation, representation.
//!
//! A model is a base detection window plus an ordered list of stages; each
//! stage sums the votes of single-feature decision stumps and rejects the
//! window as soon as one stage sum falls below its threshold. Features are
//! zero-sum weighted rectangle combinations evaluated on an integral image.

mod parse;

pub use parse::parse_cascade_xml;

use crate::imaging::Rect;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CascadeError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("unsupported cascade format: {0}")]
    UnsupportedFormat(String),
    #[error("model invariant violated: {0}")]
    InvariantViolation(String),
}

/// Relative tolerance for the zero-sum feature check; model files store
/// weights as decimal text, so exact cancellation cannot be required.
pub const ZERO_SUM_RELATIVE_TOLERANCE: f64 = 1e-6;

/// One rectangle of a Haar feature, in base-window coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedRect {
    pub rect: Rect,
    pub weight: f64,
}

/// A contrast feature: 2 or 3 weighted rects whose weighted areas cancel.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarFeature {
    pub rects: Vec<WeightedRect>,
}

impl HaarFeature {
    /// Signed weighted-area total; zero (within tolerance) for a valid feature.
    pub fn weighted_area_sum(&self) -> f64 {
        self.rects
            .iter()
            .map(|r| r.weight * r.rect.area() as f64)
            .sum()
    }
}

/// Single-feature threshold classifier contributing one of two leaf values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stump {
    pub feature_index: usize,
    pub threshold: f64,
    pub left_leaf: f64,
    pub right_leaf: f64,
}

/// Ordered stumps plus the rejection threshold for their summed votes.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub stumps: Vec<Stump>,
    pub threshold: f64,
}

/// A parsed, validated detection model.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeModel {
    pub base_width: u32,
    pub base_height: u32,
    pub stages: Vec<Stage>,
    pub features: Vec<HaarFeature>,
}

/// A broken model invariant: where it is and which rule failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Location inside the model, e.g. `stage 2 / stump 0` or `feature 31`.
    pub path: String,
    /// The rule that failed.
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.rule)
    }
}

impl CascadeModel {
    /// Checks every structural invariant; an empty list means the model is valid.
    ///
    /// Violations are data, not errors: the caller decides whether to reject.
    /// `parse_cascade_xml` rejects any model with a non-empty list.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut violation = |path: String, rule: String| out.push(Violation { path, rule });

        if self.base_width == 0 || self.base_height == 0 {
            violation(
                "model".into(),
                format!(
                    "base window {}x{} has a zero side",
                    self.base_width, self.base_height
                ),
            );
        }
        if self.stages.is_empty() {
            violation("model".into(), "model has no stages".into());
        }
        for (i, stage) in self.stages.iter().enumerate() {
            if stage.stumps.is_empty() {
                violation(format!("stage {i}"), "stage has no stumps".into());
            }
            for (j, stump) in stage.stumps.iter().enumerate() {
                if stump.feature_index >= self.features.len() {
                    violation(
                        format!("stage {i} / stump {j}"),
                        format!(
                            "feature index {} out of range (model has {} features)",
                            stump.feature_index,
                            self.features.len()
                        ),
                    );
                }
            }
        }
        for (k, feature) in self.features.iter().enumerate() {
            if feature.rects.len() < 2 || feature.rects.len() > 3 {
                violation(
                    format!("feature {k}"),
                    format!(
                        "feature has {} rects (expected 2 or 3)",
                        feature.rects.len()
                    ),
                );
            }
            for (r, wr) in feature.rects.iter().enumerate() {
                if !wr.rect.fits_in(self.base_width, self.base_height) {
                    violation(
                        format!("feature {k} / rect {r}"),
                        format!(
                            "rect {:?} outside the {}x{} base window",
                            wr.rect, self.base_width, self.base_height
                        ),
                    );
                }
            }
            let sum = feature.weighted_area_sum();
            let magnitude: f64 = feature
                .rects
                .iter()
                .map(|r| (r.weight * r.rect.area() as f64).abs())
                .sum();
            if sum.abs() > ZERO_SUM_RELATIVE_TOLERANCE * magnitude.max(1.0) {
                violation(
                    format!("feature {k}"),
                    format!("weighted areas sum to {sum:e}, not zero"),
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy_model() -> CascadeModel {
        CascadeModel {
            base_width: 4,
            base_height: 4,
            stages: vec![Stage {
                stumps: vec![
                    Stump {
                        feature_index: 0,
                        threshold: 0.5,
                        left_leaf: -1.0,
                        right_leaf: 1.0,
                    },
                    Stump {
                        feature_index: 1,
                        threshold: 0.25,
                        left_leaf: 1.0,
                        right_leaf: -1.0,
                    },
                ],
                threshold: 1.5,
            }],
            features: vec![
                HaarFeature {
                    rects: vec![
                        WeightedRect {
                            rect: Rect::new(0, 0, 4, 4),
                            weight: -1.0,
                        },
                        WeightedRect {
                            rect: Rect::new(0, 0, 4, 2),
                            weight: 2.0,
                        },
                    ],
                },
                HaarFeature {
                    rects: vec![
                        WeightedRect {
                            rect: Rect::new(0, 0, 4, 4),
                            weight: -1.0,
                        },
                        WeightedRect {
                            rect: Rect::new(0, 0, 2, 4),
                            weight: 2.0,
                        },
                    ],
                },
            ],
        }
    }

    #[test]
    fn valid_model_has_no_violations() {
        assert!(toy_model().validate().is_empty());
    }

    #[test]
    fn nonzero_weighted_area_is_flagged() {
        let mut model = toy_model();
        model.features[0].rects[1].weight = 2.0625; // sum becomes 0.5
        let violations = model.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].path, "feature 0");
        assert!(violations[0].rule.contains("not zero"));
    }

    #[test]
    fn bad_feature_index_is_flagged() {
        let mut model = toy_model();
        model.stages[0].stumps[1].feature_index = 2;
        let violations = model.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].path, "stage 0 / stump 1");
        assert!(violations[0].rule.contains("out of range"));
    }

    #[test]
    fn rect_outside_base_window_is_flagged() {
        let mut model = toy_model();
        model.features[1].rects[1].rect = Rect::new(3, 0, 2, 4);
        let violations = model.validate();
        assert!(violations.iter().any(|v| v.path == "feature 1 / rect 1"));
    }
}
