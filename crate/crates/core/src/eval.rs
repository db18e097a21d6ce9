//! Detection and recognition scoring against ground truth.
//!
//! Detection accuracy per image is `100 * detected_faces / total_faces`;
//! recognition accuracy is `100 * (a_pp + a_aa) / C` where `C` is the roster
//! size. Both aggregates are unweighted means over images. Boxes are paired
//! with ground truth by greedy one-to-one IoU matching, so a face detected
//! twice yields one true positive and one false positive.

use crate::gallery::MatchResult;
use crate::imaging::Rect;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no input rows")]
    EmptyInput,
    #[error("truth identity {0:?} is not in the roster")]
    UnknownLabelInTruth(String),
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("roster is empty")]
    EmptyRoster,
    #[error("duplicate roster label {0:?}")]
    DuplicateRosterLabel(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

/// Intersection-over-union of two boxes, in `[0, 1]`; 0 when both are empty.
pub fn iou(a: Rect, b: Rect) -> f64 {
    let ix = (a.right().min(b.right())).saturating_sub(a.x.max(b.x) as u64);
    let iy = (a.bottom().min(b.bottom())).saturating_sub(a.y.max(b.y) as u64);
    let inter = (ix * iy) as f64;
    let union = (a.area() + b.area()) as f64 - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// One-to-one box assignment: matched `(pred, truth)` index pairs plus the
/// leftovers on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_pred: Vec<usize>,
    pub unmatched_truth: Vec<usize>,
}

/// Greedy one-to-one matching in descending IoU order over candidate pairs
/// with `iou >= iou_min`; IoU ties break by (pred index, truth index).
/// Unmatched predictions are false positives (duplicate detections of one
/// face land here); unmatched truths are false negatives.
pub fn match_detections(pred: &[Rect], truth: &[Rect], iou_min: f64) -> Matching {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in pred.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            let overlap = iou(*p, *t);
            if overlap >= iou_min && overlap > 0.0 {
                candidates.push((overlap, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut pred_used = vec![false; pred.len()];
    let mut truth_used = vec![false; truth.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in candidates {
        if !pred_used[i] && !truth_used[j] {
            pred_used[i] = true;
            truth_used[j] = true;
            pairs.push((i, j));
        }
    }
    Matching {
        pairs,
        unmatched_pred: (0..pred.len()).filter(|&i| !pred_used[i]).collect(),
        unmatched_truth: (0..truth.len()).filter(|&j| !truth_used[j]).collect(),
    }
}

/// Per-image detection tallies, either measured via [`match_detections`] or
/// supplied directly (count passthrough).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageDetectionCounts {
    pub image: String,
    pub total_faces: u32,
    pub detected_faces: u32,
    #[serde(default)]
    pub false_positives: u32,
}

impl ImageDetectionCounts {
    pub fn from_matching(image: impl Into<String>, matching: &Matching) -> Self {
        ImageDetectionCounts {
            image: image.into(),
            total_faces: (matching.pairs.len() + matching.unmatched_truth.len()) as u32,
            detected_faces: matching.pairs.len() as u32,
            false_positives: matching.unmatched_pred.len() as u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReportRow {
    pub image: String,
    pub fp: u32,
    pub tp: u32,
    #[serde(rename = "fn")]
    pub missed: u32,
    pub total_faces: u32,
    pub detected_faces: u32,
    /// `100 * detected_faces / total_faces` (100 for images with no faces).
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReport {
    pub rows: Vec<DetectionReportRow>,
    /// Unweighted mean of the per-image accuracies.
    pub mean_accuracy: f64,
}

/// Builds per-image rows and the aggregate from detection counts.
pub fn detection_report(counts: &[ImageDetectionCounts]) -> Result<DetectionReport, EvalError> {
    if counts.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut rows = Vec::with_capacity(counts.len());
    for c in counts {
        if c.detected_faces > c.total_faces {
            return Err(EvalError::InvalidCounts(format!(
                "image {:?}: detected {} exceeds total {}",
                c.image, c.detected_faces, c.total_faces
            )));
        }
        let accuracy = if c.total_faces == 0 {
            100.0
        } else {
            100.0 * c.detected_faces as f64 / c.total_faces as f64
        };
        rows.push(DetectionReportRow {
            image: c.image.clone(),
            fp: c.false_positives,
            tp: c.detected_faces,
            missed: c.total_faces - c.detected_faces,
            total_faces: c.total_faces,
            detected_faces: c.detected_faces,
            accuracy,
        });
    }
    let mean_accuracy = rows.iter().map(|r| r.accuracy).sum::<f64>() / rows.len() as f64;
    Ok(DetectionReport {
        rows,
        mean_accuracy,
    })
}

/// A ground-truth face: its box and, when the person is enrolled, their label.
/// `None` marks a stranger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthFace {
    #[serde(rename = "box")]
    pub rect: Rect,
    #[serde(rename = "label")]
    pub identity: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthImage {
    pub image: String,
    pub faces: Vec<GroundTruthFace>,
}

/// The set of enrolled identities; its size is the `C` in recognition accuracy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    labels: BTreeSet<String>,
}

impl Roster {
    /// Builds a roster from distinct labels; empty input and duplicates are
    /// rejected.
    pub fn new(labels: impl IntoIterator<Item = String>) -> Result<Self, EvalError> {
        let mut set = BTreeSet::new();
        for label in labels {
            if !set.insert(label.clone()) {
                return Err(EvalError::DuplicateRosterLabel(label));
            }
        }
        if set.is_empty() {
            return Err(EvalError::EmptyRoster);
        }
        Ok(Roster { labels: set })
    }

    pub fn size(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.contains(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecognitionReportRow {
    pub image: String,
    pub c: u32,
    pub total_faces: u32,
    /// Enrolled faces labeled with their own identity.
    pub a_pp: f64,
    /// Enrolled-but-absent identities correctly left unassigned.
    pub a_aa: f64,
    /// Strangers labeled with an identity present in the image.
    pub a_ps: f64,
    /// Enrolled faces labeled unknown or with a different identity
    /// (undetected enrolled faces count here too).
    pub a_ap: f64,
    /// Strangers labeled with an absent identity.
    pub a_as: f64,
    /// `100 * (a_pp + a_aa) / c`.
    pub accuracy: f64,
}

impl RecognitionReportRow {
    /// Count passthrough: builds a row from externally supplied tallies.
    /// Counts are reals so that fractional bookkeeping (e.g. half credit for
    /// a double-detected face) can be reproduced; the measured path only ever
    /// writes whole numbers.
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        image: impl Into<String>,
        c: u32,
        total_faces: u32,
        a_pp: f64,
        a_aa: f64,
        a_ps: f64,
        a_ap: f64,
        a_as: f64,
    ) -> Result<Self, EvalError> {
        if c == 0 {
            return Err(EvalError::EmptyRoster);
        }
        for (name, v) in [
            ("a_pp", a_pp),
            ("a_aa", a_aa),
            ("a_ps", a_ps),
            ("a_ap", a_ap),
            ("a_as", a_as),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(EvalError::InvalidCounts(format!("{name} = {v}")));
            }
        }
        if a_pp > total_faces as f64 {
            return Err(EvalError::InvalidCounts(format!(
                "a_pp {a_pp} exceeds total_faces {total_faces}"
            )));
        }
        if a_pp + a_aa > c as f64 {
            return Err(EvalError::InvalidCounts(format!(
                "a_pp + a_aa = {} exceeds C = {c}",
                a_pp + a_aa
            )));
        }
        Ok(RecognitionReportRow {
            image: image.into(),
            c,
            total_faces,
            a_pp,
            a_aa,
            a_ps,
            a_ap,
            a_as,
            accuracy: 100.0 * (a_pp + a_aa) / c as f64,
        })
    }
}

/// Scores one image's recognition output against its ground truth.
///
/// Boxes are paired by [`match_detections`] first. A matched enrolled face
/// counts `a_pp` when the predicted label equals its identity and `a_ap`
/// otherwise (absent or different); an undetected enrolled face also counts
/// `a_ap`. A matched stranger predicted with some label counts `a_ps` when
/// that identity appears in the image and `a_as` otherwise; a stranger
/// predicted unknown is a correct rejection with no counter. `a_aa` is the
/// roster complement: `C` minus the identities either appearing in the image
/// or consumed by an `a_as` assignment.
pub fn recognition_tally(
    truth: &GroundTruthImage,
    predictions: &[(Rect, MatchResult)],
    roster: &Roster,
    iou_min: f64,
) -> Result<RecognitionReportRow, EvalError> {
    let mut appearing: BTreeSet<&str> = BTreeSet::new();
    for face in &truth.faces {
        if let Some(identity) = &face.identity {
            if !roster.contains(identity) {
                return Err(EvalError::UnknownLabelInTruth(identity.clone()));
            }
            if !appearing.insert(identity) {
                return Err(EvalError::InvalidCounts(format!(
                    "identity {identity:?} appears on two faces in image {:?}",
                    truth.image
                )));
            }
        }
    }

    let pred_boxes: Vec<Rect> = predictions.iter().map(|(r, _)| *r).collect();
    let truth_boxes: Vec<Rect> = truth.faces.iter().map(|f| f.rect).collect();
    let matching = match_detections(&pred_boxes, &truth_boxes, iou_min);

    let (mut a_pp, mut a_ps, mut a_ap, mut a_as) = (0u32, 0u32, 0u32, 0u32);
    let mut consumed: BTreeSet<&str> = BTreeSet::new();
    for &(pi, ti) in &matching.pairs {
        let predicted = predictions[pi].1.label.as_deref();
        match &truth.faces[ti].identity {
            Some(identity) => {
                if predicted == Some(identity.as_str()) {
                    a_pp += 1;
                } else {
                    a_ap += 1;
                }
            }
            None => match predicted {
                Some(label) if appearing.contains(label) => a_ps += 1,
                Some(label) => {
                    a_as += 1;
                    if roster.contains(label) {
                        consumed.insert(label);
                    }
                }
                None => {} // correct rejection of a stranger
            },
        }
    }
    for &ti in &matching.unmatched_truth {
        if truth.faces[ti].identity.is_some() {
            a_ap += 1; // undetected means unrecognized
        }
    }

    let accounted = appearing.union(&consumed).count() as u32;
    let a_aa = roster.size() - accounted.min(roster.size());

    RecognitionReportRow::from_counts(
        truth.image.clone(),
        roster.size(),
        truth.faces.len() as u32,
        a_pp as f64,
        a_aa as f64,
        a_ps as f64,
        a_ap as f64,
        a_as as f64,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecognitionReport {
    pub rows: Vec<RecognitionReportRow>,
    pub mean_accuracy: f64,
}

/// Aggregates rows into a report; the mean is unweighted.
pub fn recognition_report(rows: Vec<RecognitionReportRow>) -> Result<RecognitionReport, EvalError> {
    if rows.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mean_accuracy = rows.iter().map(|r| r.accuracy).sum::<f64>() / rows.len() as f64;
    Ok(RecognitionReport {
        rows,
        mean_accuracy,
    })
}

/// Parses a ground-truth document: either one image object or an array of them.
pub fn parse_ground_truth(json: &str) -> Result<Vec<GroundTruthImage>, EvalError> {
    let trimmed = json.trim_start();
    let result = if trimmed.starts_with('[') {
        serde_json::from_str::<Vec<GroundTruthImage>>(json)
    } else {
        serde_json::from_str::<GroundTruthImage>(json).map(|one| vec![one])
    };
    result.map_err(|e| EvalError::Schema(e.to_string()))
}

/// Parses a roster document: a JSON array of distinct label strings.
pub fn parse_roster(json: &str) -> Result<Roster, EvalError> {
    let labels: Vec<String> =
        serde_json::from_str(json).map_err(|e| EvalError::Schema(e.to_string()))?;
    Roster::new(labels)
}

fn format_count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v}")
    }
}

fn render_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let joined: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(joined.join("  ").trim_end());
        out.push('\n');
    };
    line(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for row in &rows {
        line(row);
    }
    out
}

impl DetectionReport {
    /// Fixed-width text table mirroring the detection metric columns.
    pub fn to_text_table(&self) -> String {
        let header = [
            "Image",
            "FP",
            "TP",
            "FN",
            "Total faces",
            "Detected faces",
            "Accuracy",
        ];
        let mut rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.image.clone(),
                    r.fp.to_string(),
                    r.tp.to_string(),
                    r.missed.to_string(),
                    r.total_faces.to_string(),
                    r.detected_faces.to_string(),
                    format!("{:.2}%", r.accuracy),
                ]
            })
            .collect();
        rows.push(vec![
            "Mean".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            format!("{:.2}%", self.mean_accuracy),
        ]);
        render_table(&header, rows)
    }
}

impl RecognitionReport {
    /// Fixed-width text table mirroring the recognition metric columns.
    pub fn to_text_table(&self) -> String {
        let header = [
            "Image",
            "C",
            "Total faces",
            "a_pp",
            "a_aa",
            "a_ps",
            "a_ap",
            "a_as",
            "Accuracy",
        ];
        let mut rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.image.clone(),
                    r.c.to_string(),
                    r.total_faces.to_string(),
                    format_count(r.a_pp),
                    format_count(r.a_aa),
                    format_count(r.a_ps),
                    format_count(r.a_ap),
                    format_count(r.a_as),
                    format!("{:.2}%", r.accuracy),
                ]
            })
            .collect();
        rows.push(vec![
            "Mean".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            format!("{:.2}%", self.mean_accuracy),
        ]);
        render_table(&header, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iou_basics() {
        let a = Rect::new(0, 0, 10, 10);
        assert_eq!(iou(a, a), 1.0);
        assert_eq!(iou(a, Rect::new(30, 30, 5, 5)), 0.0);
        assert_eq!(iou(Rect::new(0, 0, 0, 0), Rect::new(0, 0, 0, 0)), 0.0);
        // 5x5 overlap out of 100 + 100 - 25
        let b = Rect::new(5, 5, 10, 10);
        assert!((iou(a, b) - 25.0 / 175.0).abs() < 1e-12);
    }

    #[test]
    fn matching_identical_lists() {
        let boxes = [Rect::new(0, 0, 10, 10), Rect::new(20, 0, 8, 8)];
        let m = match_detections(&boxes, &boxes, 0.5);
        assert_eq!(m.pairs, vec![(0, 0), (1, 1)]);
        assert!(m.unmatched_pred.is_empty());
        assert!(m.unmatched_truth.is_empty());
    }

    #[test]
    fn double_detection_is_one_tp_one_fp() {
        let truth = [Rect::new(10, 10, 20, 20)];
        let pred = [Rect::new(10, 10, 20, 20), Rect::new(11, 10, 20, 20)];
        let m = match_detections(&pred, &truth, 0.5);
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.unmatched_pred.len(), 1);
        assert!(m.unmatched_truth.is_empty());
    }

    #[test]
    fn fp_fn_swap_under_argument_swap() {
        let a = [
            Rect::new(0, 0, 10, 10),
            Rect::new(5, 5, 10, 10),
            Rect::new(40, 2, 6, 6),
        ];
        let b = [Rect::new(1, 1, 10, 10), Rect::new(41, 2, 6, 6)];
        let forward = match_detections(&a, &b, 0.3);
        let backward = match_detections(&b, &a, 0.3);
        assert_eq!(forward.unmatched_pred.len(), backward.unmatched_truth.len());
        assert_eq!(forward.unmatched_truth.len(), backward.unmatched_pred.len());
    }

    fn counts(image: &str, total: u32, detected: u32) -> ImageDetectionCounts {
        ImageDetectionCounts {
            image: image.into(),
            total_faces: total,
            detected_faces: detected,
            false_positives: 0,
        }
    }

    #[test]
    fn detection_rows_and_mean() {
        let report = detection_report(&[counts("gp5", 25, 23), counts("gp8", 11, 11)]).unwrap();
        assert_eq!(report.rows[0].accuracy, 92.0);
        assert_eq!(report.rows[0].missed, 2);
        assert_eq!(report.rows[1].accuracy, 100.0);
        assert!((report.mean_accuracy - 96.0).abs() < 1e-12);
        assert!(detection_report(&[]).is_err());
        assert!(detection_report(&[counts("bad", 3, 4)]).is_err());
    }

    fn roster30() -> Roster {
        Roster::new((0..30).map(|i| format!("s{i:02}"))).unwrap()
    }

    fn truth_with(faces: Vec<GroundTruthFace>) -> GroundTruthImage {
        GroundTruthImage {
            image: "gp".into(),
            faces,
        }
    }

    fn face(x: u32, identity: Option<&str>) -> GroundTruthFace {
        GroundTruthFace {
            rect: Rect::new(x, 0, 10, 10),
            identity: identity.map(String::from),
        }
    }

    fn hit(x: u32, label: Option<&str>) -> (Rect, MatchResult) {
        (
            Rect::new(x, 0, 10, 10),
            MatchResult {
                label: label.map(String::from),
                distance: 0.1,
            },
        )
    }

    #[test]
    fn tally_one_unknown_among_25() {
        // 25 enrolled faces; 24 labeled correctly, 1 labeled unknown
        let truth = truth_with(
            (0..25)
                .map(|i| face(i * 20, Some(&format!("s{i:02}"))))
                .collect(),
        );
        let preds: Vec<_> = (0..25)
            .map(|i| {
                let label = if i == 7 {
                    None
                } else {
                    Some(format!("s{i:02}"))
                };
                hit(i * 20, label.as_deref())
            })
            .collect();
        let row = recognition_tally(&truth, &preds, &roster30(), 0.5).unwrap();
        assert_eq!(
            (row.a_pp, row.a_aa, row.a_ps, row.a_ap, row.a_as),
            (24.0, 5.0, 0.0, 1.0, 0.0)
        );
        assert!((row.accuracy - 96.67).abs() < 0.01);
    }

    #[test]
    fn tally_all_correct() {
        let truth = truth_with(
            (0..25)
                .map(|i| face(i * 20, Some(&format!("s{i:02}"))))
                .collect(),
        );
        let preds: Vec<_> = (0..25)
            .map(|i| hit(i * 20, Some(&format!("s{i:02}"))))
            .collect();
        let row = recognition_tally(&truth, &preds, &roster30(), 0.5).unwrap();
        assert_eq!((row.a_pp, row.a_aa), (25.0, 5.0));
        assert_eq!(row.accuracy, 100.0);
    }

    #[test]
    fn tally_empty_predictions() {
        let truth = truth_with(
            (0..25)
                .map(|i| face(i * 20, Some(&format!("s{i:02}"))))
                .collect(),
        );
        let row = recognition_tally(&truth, &[], &roster30(), 0.5).unwrap();
        assert_eq!((row.a_pp, row.a_ap, row.a_aa), (0.0, 25.0, 5.0));
        assert!((row.accuracy - 16.67).abs() < 0.01);
    }

    #[test]
    fn tally_strangers() {
        // one enrolled face plus two strangers: one labeled with the present
        // identity (a_ps), one labeled with an absent identity (a_as, consuming it)
        let truth = truth_with(vec![face(0, Some("s00")), face(100, None), face(200, None)]);
        let preds = vec![
            hit(0, Some("s00")),
            hit(100, Some("s00")),
            hit(200, Some("s05")),
        ];
        let row = recognition_tally(&truth, &preds, &roster30(), 0.5).unwrap();
        assert_eq!((row.a_pp, row.a_ps, row.a_as), (1.0, 1.0, 1.0));
        // 30 - |{s00} union {s05}| = 28
        assert_eq!(row.a_aa, 28.0);
    }

    #[test]
    fn tally_rejects_unknown_truth_identity() {
        let truth = truth_with(vec![face(0, Some("nobody"))]);
        assert_eq!(
            recognition_tally(&truth, &[], &roster30(), 0.5),
            Err(EvalError::UnknownLabelInTruth("nobody".into()))
        );
    }

    #[test]
    fn tally_rejects_duplicate_identity_in_one_image() {
        let truth = truth_with(vec![face(0, Some("s00")), face(100, Some("s00"))]);
        assert!(matches!(
            recognition_tally(&truth, &[], &roster30(), 0.5),
            Err(EvalError::InvalidCounts(_))
        ));
    }

    #[test]
    fn count_rows_enforce_the_row_invariants() {
        // a_pp cannot exceed the faces in the image
        assert!(matches!(
            RecognitionReportRow::from_counts("x", 30, 10, 11.0, 5.0, 0.0, 0.0, 0.0),
            Err(EvalError::InvalidCounts(_))
        ));
        // a_pp + a_aa cannot exceed the roster
        assert!(matches!(
            RecognitionReportRow::from_counts("x", 30, 25, 25.0, 6.0, 0.0, 0.0, 0.0),
            Err(EvalError::InvalidCounts(_))
        ));
        assert!(RecognitionReportRow::from_counts("x", 30, 25, 25.0, 5.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn recognition_mean_over_rows() {
        let rows = vec![
            RecognitionReportRow::from_counts("gp7", 30, 25, 18.0, 5.0, 0.0, 2.0, 0.0).unwrap(),
        ];
        assert!((rows[0].accuracy - 76.67).abs() < 0.01);
        let report = recognition_report(rows).unwrap();
        assert!((report.mean_accuracy - 76.67).abs() < 0.01);
        assert!(recognition_report(vec![]).is_err());
    }

    #[test]
    fn ground_truth_schema() {
        let one = r#"{ "image": "gp1", "faces": [ { "box": [1,2,3,4], "label": "ali" },
                                                   { "box": [9,9,5,5], "label": null } ] }"#;
        let parsed = parse_ground_truth(one).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].faces[0].rect, Rect::new(1, 2, 3, 4));
        assert_eq!(parsed[0].faces[0].identity.as_deref(), Some("ali"));
        assert_eq!(parsed[0].faces[1].identity, None);

        let many = format!("[{one}, {one}]");
        assert_eq!(parse_ground_truth(&many).unwrap().len(), 2);

        assert!(matches!(
            parse_ground_truth(r#"{ "image": "x", "faces": [ { "rect": [1,2,3,4] } ] }"#),
            Err(EvalError::Schema(_))
        ));
    }

    #[test]
    fn roster_schema() {
        let roster = parse_roster(r#"["ali", "bob"]"#).unwrap();
        assert_eq!(roster.size(), 2);
        assert!(roster.contains("ali"));
        assert!(matches!(parse_roster("[]"), Err(EvalError::EmptyRoster)));
        assert!(matches!(
            parse_roster(r#"["ali", "ali"]"#),
            Err(EvalError::DuplicateRosterLabel(_))
        ));
        assert!(matches!(parse_roster("{}"), Err(EvalError::Schema(_))));
    }

    #[test]
    fn tables_render_aligned() {
        let report = detection_report(&[counts("gp1", 25, 25)]).unwrap();
        let text = report.to_text_table();
        assert!(text.contains("Accuracy"));
        assert!(text.contains("100.00%"));
        assert!(text.lines().count() == 3);
    }
}
