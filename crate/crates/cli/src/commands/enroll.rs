use crate::args::EnrollArgs;
use crate::error::CliError;
use crate::support;
use facekit::encoder::{encode_face, EncodeError, MIN_FACE_SIZE};
use facekit::gallery::save_gallery_to_path;
use facekit::imaging::Rect;

pub fn run(args: EnrollArgs) -> Result<(), CliError> {
    let image = support::load_image(&args.image)?;
    let gray = support::to_gray(&image);

    // an explicit box skips detection entirely
    let face: Rect = match args.r#box {
        Some(rect) => rect,
        None => {
            let cascade = support::load_cascade(&support::cascade_path(&args.cascade)?)?;
            let detections = support::run_detection(&cascade, &gray, &args.scan.to_params())?;
            // largest encodable box; ties break to the canonically first
            detections
                .iter()
                .filter(|d| d.rect.w >= MIN_FACE_SIZE && d.rect.h >= MIN_FACE_SIZE)
                .max_by_key(|d| (d.rect.area(), std::cmp::Reverse((d.rect.y, d.rect.x))))
                .map(|d| d.rect)
                .ok_or_else(|| {
                    CliError::no_face(format!("no face found in {}", args.image.display()))
                })?
        }
    };

    let encoding = encode_face(&gray, face).map_err(|e| match e {
        // an explicit --box that cannot be encoded is a flag problem
        EncodeError::FaceTooSmall { .. } if args.r#box.is_some() => CliError::usage(e.to_string()),
        other => CliError::input(other.to_string()),
    })?;
    let gallery = support::load_gallery_file(&args.gallery, false)?;
    let gallery = gallery
        .enroll(&args.label, encoding)
        .map_err(support::gallery_error)?;
    save_gallery_to_path(&gallery, &args.gallery)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", args.gallery.display())))?;

    println!(
        "enrolled {:?} from box [{}, {}, {}, {}]; entries: {}; distinct labels (C): {}",
        args.label,
        face.x,
        face.y,
        face.w,
        face.h,
        gallery.len(),
        gallery.distinct_labels()
    );
    Ok(())
}
