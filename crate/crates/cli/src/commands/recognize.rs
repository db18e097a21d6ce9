use crate::args::RecognizeArgs;
use crate::error::CliError;
use crate::support;
use facekit::encoder::{encode_face, MIN_FACE_SIZE};
use facekit::imaging::{annotate, save_ppm, Rect};
use serde::Serialize;

#[derive(Serialize)]
struct FaceOut {
    #[serde(rename = "box")]
    rect: Rect,
    label: Option<String>,
    distance: f64,
}

#[derive(Serialize)]
struct RecognizeOutput {
    image: String,
    faces: Vec<FaceOut>,
}

pub fn run(args: RecognizeArgs) -> Result<(), CliError> {
    let cascade = support::load_cascade(&support::cascade_path(&args.cascade)?)?;
    let gallery = support::load_gallery_file(&args.gallery, true)?;
    if gallery.is_empty() {
        return Err(CliError::empty_gallery(format!(
            "gallery {} has no entries",
            args.gallery.display()
        )));
    }
    let image = support::load_image(&args.image)?;
    let gray = support::to_gray(&image);

    let mut faces = Vec::new();
    for detection in support::run_detection(&cascade, &gray, &args.scan.to_params())? {
        let rect = detection.rect;
        if rect.w < MIN_FACE_SIZE || rect.h < MIN_FACE_SIZE {
            eprintln!(
                "warning: skipping {}x{} detection at ({}, {}); faces below {} px cannot be encoded",
                rect.w, rect.h, rect.x, rect.y, MIN_FACE_SIZE
            );
            continue;
        }
        let encoding = encode_face(&gray, rect).map_err(|e| CliError::input(e.to_string()))?;
        let matched = gallery
            .match_probe(&encoding, args.threshold)
            .map_err(support::gallery_error)?;
        faces.push(FaceOut {
            rect,
            label: matched.label,
            distance: matched.distance,
        });
    }

    if let Some(out_path) = &args.annotate {
        let boxes: Vec<(Rect, Option<&str>)> = faces
            .iter()
            .map(|f| (f.rect, Some(f.label.as_deref().unwrap_or("unknown"))))
            .collect();
        let annotated = annotate(&support::to_rgb(&image), &boxes)
            .map_err(|e| CliError::input(e.to_string()))?;
        std::fs::write(out_path, save_ppm(&annotated))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", out_path.display())))?;
    }

    let report = RecognizeOutput {
        image: args.image.display().to_string(),
        faces,
    };
    support::emit_json(&report, &args.output)
}
