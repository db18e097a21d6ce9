use crate::args::{EvalDetectArgs, EvalRecognizeArgs, OutputFormat};
use crate::error::CliError;
use crate::support;
use facekit::eval::{
    detection_report, match_detections, parse_ground_truth, parse_roster, recognition_report,
    recognition_tally, EvalError, GroundTruthImage, ImageDetectionCounts, RecognitionReportRow,
};
use facekit::gallery::MatchResult;
use facekit::imaging::Rect;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

fn schema_error(err: EvalError) -> CliError {
    CliError::schema(err.to_string())
}

/// Accepts either one JSON document or an array of them.
fn parse_one_or_many<T: serde::de::DeserializeOwned>(
    json: &str,
    what: &str,
) -> Result<Vec<T>, CliError> {
    let result = if json.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<T>>(json)
    } else {
        serde_json::from_str::<T>(json).map(|one| vec![one])
    };
    result.map_err(|e| CliError::schema(format!("{what}: {e}")))
}

fn ground_truth(path: &Path) -> Result<Vec<GroundTruthImage>, CliError> {
    parse_ground_truth(&support::read_text(path)?).map_err(schema_error)
}

/// Pairs each ground-truth image with the prediction document of the same
/// image id; every truth image must have exactly one prediction document.
fn pair_by_image<P>(
    truths: &[GroundTruthImage],
    preds: Vec<(String, P)>,
) -> Result<Vec<(&GroundTruthImage, P)>, CliError> {
    let mut by_image: BTreeMap<String, P> = BTreeMap::new();
    for (image, pred) in preds {
        if by_image.insert(image.clone(), pred).is_some() {
            return Err(CliError::schema(format!(
                "duplicate prediction document for {image:?}"
            )));
        }
    }
    let mut paired = Vec::with_capacity(truths.len());
    for truth in truths {
        let pred = by_image.remove(&truth.image).ok_or_else(|| {
            CliError::schema(format!(
                "no prediction document for image {:?}",
                truth.image
            ))
        })?;
        paired.push((truth, pred));
    }
    if let Some(extra) = by_image.keys().next() {
        return Err(CliError::schema(format!(
            "prediction for unknown image {extra:?}"
        )));
    }
    Ok(paired)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectPredFace {
    #[serde(rename = "box")]
    rect: Rect,
    #[allow(dead_code)]
    neighbors: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectPredDoc {
    image: String,
    detections: Vec<DetectPredFace>,
}

pub fn run_detect(args: EvalDetectArgs) -> Result<(), CliError> {
    let counts: Vec<ImageDetectionCounts> = if let Some(counts_path) = &args.counts {
        parse_one_or_many(&support::read_text(counts_path)?, "counts")?
    } else {
        let truths = ground_truth(args.truth.as_ref().expect("clap enforces --truth"))?;
        let docs: Vec<DetectPredDoc> = parse_one_or_many(
            &support::read_text(args.pred.as_ref().expect("clap enforces --pred"))?,
            "predictions",
        )?;
        let preds: Vec<(String, Vec<Rect>)> = docs
            .into_iter()
            .map(|d| (d.image, d.detections.into_iter().map(|f| f.rect).collect()))
            .collect();
        pair_by_image(&truths, preds)?
            .into_iter()
            .map(|(truth, boxes)| {
                let truth_boxes: Vec<Rect> = truth.faces.iter().map(|f| f.rect).collect();
                let matching = match_detections(&boxes, &truth_boxes, args.iou_min);
                ImageDetectionCounts::from_matching(truth.image.clone(), &matching)
            })
            .collect()
    };

    let report = detection_report(&counts).map_err(schema_error)?;
    match args.format {
        OutputFormat::Json => support::emit_json(&report, &None),
        OutputFormat::Table => {
            print!("{}", report.to_text_table());
            Ok(())
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecognizePredFace {
    #[serde(rename = "box")]
    rect: Rect,
    label: Option<String>,
    distance: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecognizePredDoc {
    image: String,
    faces: Vec<RecognizePredFace>,
}

/// Count-passthrough row: like the report row but without the derived
/// accuracy column.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecognitionCountsRow {
    image: String,
    c: u32,
    total_faces: u32,
    a_pp: f64,
    a_aa: f64,
    #[serde(default)]
    a_ps: f64,
    #[serde(default)]
    a_ap: f64,
    #[serde(default)]
    a_as: f64,
}

pub fn run_recognize(args: EvalRecognizeArgs) -> Result<(), CliError> {
    let rows: Vec<RecognitionReportRow> = if let Some(counts_path) = &args.counts {
        let raw: Vec<RecognitionCountsRow> =
            parse_one_or_many(&support::read_text(counts_path)?, "counts")?;
        raw.into_iter()
            .map(|r| {
                RecognitionReportRow::from_counts(
                    r.image,
                    r.c,
                    r.total_faces,
                    r.a_pp,
                    r.a_aa,
                    r.a_ps,
                    r.a_ap,
                    r.a_as,
                )
                .map_err(schema_error)
            })
            .collect::<Result<_, _>>()?
    } else {
        let truths = ground_truth(args.truth.as_ref().expect("clap enforces --truth"))?;
        let roster = parse_roster(&support::read_text(
            args.roster.as_ref().expect("clap enforces --roster"),
        )?)
        .map_err(schema_error)?;
        let docs: Vec<RecognizePredDoc> = parse_one_or_many(
            &support::read_text(args.pred.as_ref().expect("clap enforces --pred"))?,
            "predictions",
        )?;
        let preds: Vec<(String, Vec<(Rect, MatchResult)>)> = docs
            .into_iter()
            .map(|d| {
                let faces = d
                    .faces
                    .into_iter()
                    .map(|f| {
                        (
                            f.rect,
                            MatchResult {
                                label: f.label,
                                distance: f.distance,
                            },
                        )
                    })
                    .collect();
                (d.image, faces)
            })
            .collect();
        pair_by_image(&truths, preds)?
            .into_iter()
            .map(|(truth, predictions)| {
                recognition_tally(truth, &predictions, &roster, args.iou_min).map_err(schema_error)
            })
            .collect::<Result<_, _>>()?
    };

    let report = recognition_report(rows).map_err(schema_error)?;
    match args.format {
        OutputFormat::Json => support::emit_json(&report, &None),
        OutputFormat::Table => {
            print!("{}", report.to_text_table());
            Ok(())
        }
    }
}
