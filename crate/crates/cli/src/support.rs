//! Shared input plumbing: file loading, cascade/env resolution, quality
//! warnings, output writing.

use crate::error::CliError;
use facekit::cascade::{parse_cascade_xml, CascadeModel};
use facekit::detector::{detect_multiscale, Detection, DetectorError, ScanParams};
use facekit::gallery::{load_gallery, Gallery, GalleryError};
use facekit::imaging::{load_netpbm, GrayImage, NetpbmImage, RgbImage};
use std::path::{Path, PathBuf};

pub const CASCADE_ENV: &str = "FACE_CASCADE";

/// Resolves the cascade path from the flag or the FACE_CASCADE variable.
pub fn cascade_path(flag: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    if let Some(path) = flag {
        return Ok(path.clone());
    }
    match std::env::var_os(CASCADE_ENV) {
        Some(path) if !path.is_empty() => Ok(PathBuf::from(path)),
        _ => Err(CliError::usage(format!(
            "missing --cascade (or set {CASCADE_ENV})\nUsage: pass --cascade <PATH> to name the detection model XML"
        ))),
    }
}

pub fn load_cascade(path: &Path) -> Result<CascadeModel, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read cascade {}: {e}", path.display())))?;
    parse_cascade_xml(&bytes)
        .map_err(|e| CliError::model(format!("cascade {}: {e}", path.display())))
}

/// Loads a Netpbm image and emits the input-quality warnings on stderr:
/// low resolution (shorter side under 64 px) and near-constant content are
/// accuracy risks, not errors.
pub fn load_image(path: &Path) -> Result<NetpbmImage, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read image {}: {e}", path.display())))?;
    let img = load_netpbm(&bytes)
        .map_err(|e| CliError::input(format!("cannot decode image {}: {e}", path.display())))?;
    warn_about_quality(path, &to_gray(&img));
    Ok(img)
}

pub fn to_gray(img: &NetpbmImage) -> GrayImage {
    img.clone().into_gray()
}

pub fn to_rgb(img: &NetpbmImage) -> RgbImage {
    match img {
        NetpbmImage::Rgb(rgb) => rgb.clone(),
        NetpbmImage::Gray(gray) => gray.to_rgb(),
    }
}

fn warn_about_quality(path: &Path, img: &GrayImage) {
    if img.width().min(img.height()) < 64 {
        eprintln!(
            "warning: {} is {}x{}; faces encode poorly below 64 px on the shorter side",
            path.display(),
            img.width(),
            img.height()
        );
    }
    let count = img.samples().len() as f64;
    let mean = img.samples().iter().map(|&v| v as f64).sum::<f64>() / count;
    let variance = img
        .samples()
        .iter()
        .map(|&v| (v as f64 - mean).powi(2))
        .sum::<f64>()
        / count;
    if variance.sqrt() < 1.0 {
        eprintln!(
            "warning: {} is nearly constant (std {:.2}); detection and encoding need contrast",
            path.display(),
            variance.sqrt()
        );
    }
}

pub fn run_detection(
    model: &CascadeModel,
    gray: &GrayImage,
    params: &ScanParams,
) -> Result<Vec<Detection>, CliError> {
    detect_multiscale(model, gray, params).map_err(|e| match e {
        // bad flag values, not bad input data
        DetectorError::InvalidScanParams(_) => CliError::usage(e.to_string()),
        other => CliError::input(other.to_string()),
    })
}

/// Loads a gallery file; `must_exist = false` turns a missing file into an
/// empty gallery (the enroll path creates the file on save).
pub fn load_gallery_file(path: &Path, must_exist: bool) -> Result<Gallery, CliError> {
    let bytes = match std::fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound && !must_exist => {
            return Ok(Gallery::new())
        }
        Err(e) => {
            return Err(CliError::input(format!(
                "cannot read gallery {}: {e}",
                path.display()
            )))
        }
    };
    load_gallery(&bytes)
        .map_err(|e| CliError::input(format!("cannot decode gallery {}: {e}", path.display())))
}

/// Maps gallery matching failures onto their exit codes.
pub fn gallery_error(err: GalleryError) -> CliError {
    match err {
        GalleryError::EmptyGallery => CliError::empty_gallery("gallery has no entries"),
        other => CliError::input(other.to_string()),
    }
}

/// Writes the primary JSON document to stdout or the chosen file.
pub fn emit_json(value: &impl serde::Serialize, output: &Option<PathBuf>) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    match output {
        None => {
            println!("{body}");
            Ok(())
        }
        Some(path) => std::fs::write(path, body.as_bytes())
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}
