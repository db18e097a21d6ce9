use crate::args::DetectArgs;
use crate::error::CliError;
use crate::support;
use facekit::imaging::{annotate, save_ppm, Rect};
use serde::Serialize;

#[derive(Serialize)]
struct DetectionOut {
    #[serde(rename = "box")]
    rect: Rect,
    neighbors: u32,
}

#[derive(Serialize)]
struct DetectOutput {
    image: String,
    detections: Vec<DetectionOut>,
}

pub fn run(args: DetectArgs) -> Result<(), CliError> {
    let cascade = support::load_cascade(&support::cascade_path(&args.cascade)?)?;
    let image = support::load_image(&args.image)?;
    let gray = support::to_gray(&image);
    let detections = support::run_detection(&cascade, &gray, &args.scan.to_params())?;

    if let Some(out_path) = &args.annotate {
        let boxes: Vec<(Rect, Option<&str>)> = detections.iter().map(|d| (d.rect, None)).collect();
        let annotated = annotate(&support::to_rgb(&image), &boxes)
            .map_err(|e| CliError::input(e.to_string()))?;
        std::fs::write(out_path, save_ppm(&annotated))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", out_path.display())))?;
    }

    let report = DetectOutput {
        image: args.image.display().to_string(),
        detections: detections
            .iter()
            .map(|d| DetectionOut {
                rect: d.rect,
                neighbors: d.neighbors,
            })
            .collect(),
    };
    support::emit_json(&report, &args.output)
}
