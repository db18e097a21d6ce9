//! Face detection and identification toolkit.
//!
//! The pipeline has three phases:
//!
//! 1. **Detection** — a boosted Haar cascade ([`cascade::CascadeModel`]) is
//!    swept over the image at multiple scales ([`detector::detect_multiscale`]);
//!    variance-normalized stage sums accept or reject each window, and
//!    overlapping acceptances are merged by [`detector::group_rectangles`].
//! 2. **Encoding** — each face crop is reduced to a unit-norm 128-dimensional
//!    vector ([`encoder::encode_face`]) built from low-frequency DCT
//!    coefficients, so faces compare by plain Euclidean distance.
//! 3. **Identification** — encodings are matched against an enrolled, labeled
//!    [`gallery::Gallery`]; a probe is accepted when its nearest entry lies
//!    within a distance threshold ([`gallery::Gallery::match_probe`]).
//!
//! The [`eval`] module scores detection and recognition output against ground
//! truth, and [`imaging`] provides the raster plumbing (Netpbm codecs,
//! integral images, resizing, annotation).

pub mod cascade;
pub mod detector;
pub mod encoder;
pub mod eval;
pub mod gallery;
pub mod imaging;

pub use cascade::CascadeModel;
pub use detector::{Detection, ScanParams};
pub use encoder::Encoding;
pub use gallery::{Gallery, MatchResult};
pub use imaging::{GrayImage, IntegralImage, Rect, RgbImage};
