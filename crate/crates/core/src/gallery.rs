//! Labeled encoding store and thresholded nearest-neighbor identification.
//!
//! A gallery is an ordered list of `(label, encoding)` pairs; the same label
//! may appear several times (multiple exemplars per person). Matching is
//! global best-match: the probe takes the label of its nearest entry when
//! that distance is within the threshold, otherwise it stays unidentified.

use crate::encoder::{Encoding, ENCODING_DIM};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("gallery is empty")]
    EmptyGallery,
    #[error("bad magic (expected \"FGAL\")")]
    BadMagic,
    #[error("unsupported gallery format version {0}")]
    UnsupportedVersion(u16),
    #[error("gallery data truncated in entry {0}")]
    TruncatedEntry(u32),
    #[error("entry {index}: {reason}")]
    InvalidEncoding { index: u32, reason: String },
    #[error("{0} trailing bytes after the last entry")]
    TrailingData(usize),
}

const MAGIC: &[u8; 4] = b"FGAL";
const VERSION: u16 = 1;

/// Default identification threshold on unit-norm encodings.
pub const DEFAULT_THRESHOLD: f64 = 0.6;

/// One enrolled exemplar.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryEntry {
    pub label: String,
    pub encoding: Encoding,
}

/// Identification outcome: the nearest distance is always reported; the label
/// is present only when that distance was within the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub label: Option<String>,
    pub distance: f64,
}

/// Labels must be 1..=255 bytes of UTF-8 with no control characters.
fn check_label(label: &str) -> Result<(), GalleryError> {
    if label.is_empty() {
        return Err(GalleryError::InvalidLabel("label is empty".into()));
    }
    if label.len() > 255 {
        return Err(GalleryError::InvalidLabel(format!(
            "label is {} bytes, limit is 255",
            label.len()
        )));
    }
    if let Some(c) = label.chars().find(|c| c.is_control()) {
        return Err(GalleryError::InvalidLabel(format!(
            "label contains control character {c:?}"
        )));
    }
    Ok(())
}

/// Euclidean distance between two encodings: `sqrt(sum_i (b_i - a_i)^2)`.
pub fn euclidean_distance(a: &Encoding, b: &Encoding) -> f64 {
    euclidean_distance_components(a.values(), b.values())
}

/// The same distance on raw component slices (equal length required).
pub fn euclidean_distance_components(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "component counts differ");
    a.iter()
        .zip(b)
        .map(|(x, y)| (y - x) * (y - x))
        .sum::<f64>()
        .sqrt()
}

/// Immutable ordered collection of enrolled entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Gallery {
    entries: Vec<GalleryEntry>,
}

impl Gallery {
    pub fn new() -> Self {
        Gallery::default()
    }

    pub fn entries(&self) -> &[GalleryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct labels (the roster size C).
    pub fn distinct_labels(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.label.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Returns a new gallery with the entry appended; existing entries are
    /// untouched. Duplicate labels are allowed.
    pub fn enroll(&self, label: &str, encoding: Encoding) -> Result<Gallery, GalleryError> {
        check_label(label)?;
        let mut entries = self.entries.clone();
        entries.push(GalleryEntry {
            label: label.to_string(),
            encoding,
        });
        Ok(Gallery { entries })
    }

    /// Nearest-entry identification.
    ///
    /// Returns the label of the minimum-distance entry iff that distance is
    /// within `threshold`; the minimum distance is reported either way.
    /// Distance ties break to the lexicographically smallest label, then to
    /// the lowest entry index, so entry order never changes the outcome.
    pub fn match_probe(
        &self,
        probe: &Encoding,
        threshold: f64,
    ) -> Result<MatchResult, GalleryError> {
        let mut best: Option<(f64, &str)> = None;
        for entry in &self.entries {
            let d = euclidean_distance(probe, &entry.encoding);
            let better = match &best {
                None => true,
                Some((bd, bl)) => d < *bd || (d == *bd && entry.label.as_str() < *bl),
            };
            if better {
                best = Some((d, &entry.label));
            }
        }
        let (distance, label) = best.ok_or(GalleryError::EmptyGallery)?;
        Ok(MatchResult {
            label: (distance <= threshold).then(|| label.to_string()),
            distance,
        })
    }
}

/// Serializes a gallery to the FGAL binary layout (all little-endian):
/// magic `"FGAL"`, version `u16` = 1, entry count `u32`, then per entry a
/// `u8` label length, the label bytes, and 128 IEEE-754 `f64` components.
pub fn save_gallery(gallery: &Gallery) -> Vec<u8> {
    let mut out = Vec::with_capacity(10 + gallery.len() * (1 + 16 + 8 * ENCODING_DIM));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(gallery.len() as u32).to_le_bytes());
    for entry in gallery.entries() {
        out.push(entry.label.len() as u8);
        out.extend_from_slice(entry.label.as_bytes());
        for v in entry.encoding.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Parses the FGAL layout written by [`save_gallery`].
///
/// Component vectors must satisfy the [`Encoding`] invariant (unit L2 norm or
/// all-zero); externally computed embeddings must be normalized before import.
pub fn load_gallery(bytes: &[u8]) -> Result<Gallery, GalleryError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(GalleryError::BadMagic);
    }
    if bytes.len() < 10 {
        return Err(GalleryError::TruncatedEntry(0));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(GalleryError::UnsupportedVersion(version));
    }
    let count = u32::from_le_bytes([bytes[6], bytes[7], bytes[8], bytes[9]]);

    let mut pos = 10usize;
    let mut gallery = Gallery::new();
    for index in 0..count {
        let len = *bytes.get(pos).ok_or(GalleryError::TruncatedEntry(index))? as usize;
        pos += 1;
        let label_bytes = bytes
            .get(pos..pos + len)
            .ok_or(GalleryError::TruncatedEntry(index))?;
        pos += len;
        let label = std::str::from_utf8(label_bytes).map_err(|_| {
            GalleryError::InvalidLabel(format!("entry {index}: label is not UTF-8"))
        })?;
        check_label(label)
            .map_err(|e| GalleryError::InvalidLabel(format!("entry {index}: {e}")))?;

        let mut values = [0.0; ENCODING_DIM];
        for v in values.iter_mut() {
            let raw = bytes
                .get(pos..pos + 8)
                .ok_or(GalleryError::TruncatedEntry(index))?;
            *v = f64::from_le_bytes(raw.try_into().unwrap());
            pos += 8;
        }
        let encoding = Encoding::try_new(values).map_err(|e| GalleryError::InvalidEncoding {
            index,
            reason: e.to_string(),
        })?;
        gallery = gallery.enroll(label, encoding)?;
    }
    if pos != bytes.len() {
        return Err(GalleryError::TrailingData(bytes.len() - pos));
    }
    Ok(gallery)
}

/// Writes the gallery file atomically: serialize to a sibling temp file, then
/// rename over the destination.
pub fn save_gallery_to_path(gallery: &Gallery, path: &Path) -> std::io::Result<()> {
    let tmp = path.with_extension("fgal.tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&save_gallery(gallery))?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

pub fn load_gallery_from_path(path: &Path) -> std::io::Result<Result<Gallery, GalleryError>> {
    Ok(load_gallery(&std::fs::read(path)?))
}
