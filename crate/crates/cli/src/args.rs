use clap::{Args, Parser, Subcommand, ValueEnum};
use facekit::imaging::Rect;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "facekit",
    version,
    about = "Face detection, encoding, identification and evaluation",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Detect faces in an image and emit their boxes as JSON
    Detect(DetectArgs),
    /// Add one labeled face to a gallery file
    Enroll(EnrollArgs),
    /// Detect faces and identify each against a gallery
    Recognize(RecognizeArgs),
    /// Score predictions against ground truth
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Inspect gallery files
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Subcommand)]
pub enum EvalCommand {
    /// Detection accuracy per image and overall
    Detect(EvalDetectArgs),
    /// Recognition accuracy per image and overall
    Recognize(EvalRecognizeArgs),
}

#[derive(Subcommand)]
pub enum GalleryCommand {
    /// List gallery entries and the distinct-label count
    List(GalleryListArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

/// Sliding-window scan flags shared by detect, enroll and recognize.
#[derive(Args)]
pub struct ScanArgs {
    /// Geometric growth factor between detection scales (must exceed 1)
    #[arg(long, default_value_t = 1.1)]
    pub scale_factor: f64,

    /// Scan step in base-window pixels, scaled with the detection scale
    #[arg(long, default_value_t = 2.0)]
    pub stride_factor: f64,

    /// Minimum cluster support for a detection to be kept
    #[arg(long, default_value_t = 3)]
    pub min_neighbors: u32,

    /// Smallest window side to scan, in pixels
    #[arg(long)]
    pub min_size: Option<u32>,

    /// Largest window side to scan, in pixels
    #[arg(long)]
    pub max_size: Option<u32>,
}

impl ScanArgs {
    pub fn to_params(&self) -> facekit::detector::ScanParams {
        facekit::detector::ScanParams {
            scale_factor: self.scale_factor,
            stride_factor: self.stride_factor,
            min_neighbors: self.min_neighbors,
            min_size: self.min_size,
            max_size: self.max_size,
        }
    }
}

fn parse_box(s: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected x,y,w,h".into());
    }
    let mut values = [0u32; 4];
    for (v, p) in values.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .map_err(|_| format!("{p:?} is not a non-negative integer"))?;
    }
    Ok(Rect::new(values[0], values[1], values[2], values[3]))
}

#[derive(Args)]
pub struct DetectArgs {
    /// Cascade model XML (falls back to the FACE_CASCADE environment variable)
    #[arg(long)]
    pub cascade: Option<PathBuf>,

    /// Input image (PGM or PPM)
    #[arg(long)]
    pub image: PathBuf,

    /// Write the detection JSON here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Write a copy of the image with detection boxes drawn (binary PPM)
    #[arg(long)]
    pub annotate: Option<PathBuf>,

    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Args)]
pub struct EnrollArgs {
    /// Gallery file to extend (created when absent)
    #[arg(long)]
    pub gallery: PathBuf,

    /// Label to store with the face
    #[arg(long)]
    pub label: String,

    /// Input image (PGM or PPM)
    #[arg(long)]
    pub image: PathBuf,

    /// Face box "x,y,w,h"; skips detection when given
    #[arg(long, value_parser = parse_box)]
    pub r#box: Option<Rect>,

    /// Cascade model XML, required unless --box is given
    #[arg(long)]
    pub cascade: Option<PathBuf>,

    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Args)]
pub struct RecognizeArgs {
    /// Cascade model XML (falls back to the FACE_CASCADE environment variable)
    #[arg(long)]
    pub cascade: Option<PathBuf>,

    /// Gallery file with enrolled faces
    #[arg(long)]
    pub gallery: PathBuf,

    /// Input image (PGM or PPM)
    #[arg(long)]
    pub image: PathBuf,

    /// Greatest distance still accepted as an identification
    #[arg(long, default_value_t = facekit::gallery::DEFAULT_THRESHOLD)]
    pub threshold: f64,

    /// Write the identification JSON here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Write a copy of the image with labeled boxes drawn (binary PPM)
    #[arg(long)]
    pub annotate: Option<PathBuf>,

    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Args)]
pub struct EvalDetectArgs {
    /// Detection output JSON (one document or an array)
    #[arg(long, required_unless_present = "counts", conflicts_with = "counts")]
    pub pred: Option<PathBuf>,

    /// Ground-truth JSON (one document or an array)
    #[arg(long, required_unless_present = "counts", conflicts_with = "counts")]
    pub truth: Option<PathBuf>,

    /// Per-image count rows, bypassing box matching
    #[arg(long)]
    pub counts: Option<PathBuf>,

    /// Smallest IoU that counts as the same face
    #[arg(long, default_value_t = 0.5)]
    pub iou_min: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Args)]
pub struct EvalRecognizeArgs {
    /// Recognition output JSON (one document or an array)
    #[arg(long, required_unless_present = "counts", conflicts_with = "counts")]
    pub pred: Option<PathBuf>,

    /// Ground-truth JSON (one document or an array)
    #[arg(long, required_unless_present = "counts", conflicts_with = "counts")]
    pub truth: Option<PathBuf>,

    /// Roster JSON: array of distinct enrolled labels
    #[arg(long, required_unless_present = "counts", conflicts_with = "counts")]
    pub roster: Option<PathBuf>,

    /// Per-image tally rows, bypassing box matching
    #[arg(long)]
    pub counts: Option<PathBuf>,

    /// Smallest IoU that counts as the same face
    #[arg(long, default_value_t = 0.5)]
    pub iou_min: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Args)]
pub struct GalleryListArgs {
    /// Gallery file to inspect
    #[arg(long)]
    pub gallery: PathBuf,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}
