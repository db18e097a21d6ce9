//! Face encodings: fixed-size spectral summaries of face crops.
//!
//! A crop is resized to a 32x32 working patch, standardized to zero mean and
//! unit variance (cancelling uniform brightness and contrast changes), and
//! transformed with an orthonormal 2-D DCT. The 128 lowest-frequency AC
//! coefficients in zig-zag order, scaled to unit L2 norm, form the encoding;
//! skipping the DC term makes the vector blind to any residual offset.

use crate::imaging::{crop, resize_bilinear, GrayImage, ImagingError, Rect};
use std::f64::consts::PI;
use thiserror::Error;

/// Number of components in a face encoding.
pub const ENCODING_DIM: usize = 128;

/// Side of the square working patch every face is resized to.
pub const PATCH_SIZE: u32 = 32;

/// Minimum face rect side accepted by [`encode_face`].
pub const MIN_FACE_SIZE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("face rect {rect:?} does not fit in a {width}x{height} image")]
    RectOutOfBounds { rect: Rect, width: u32, height: u32 },
    #[error("face rect {w}x{h} is smaller than the {MIN_FACE_SIZE}px minimum side")]
    FaceTooSmall { w: u32, h: u32 },
}

/// Reason an externally supplied component vector was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid encoding: {0}")]
pub struct InvalidEncoding(pub String);

/// Tolerance on the unit-norm invariant.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// A 128-dimensional face descriptor.
///
/// Invariant: the L2 norm is 1 (within [`NORM_TOLERANCE`]) or every component
/// is exactly 0 — the zero encoding is the degenerate result for constant
/// crops and matches nothing under any reasonable distance threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    values: [f64; ENCODING_DIM],
}

impl Encoding {
    /// Validates the invariant on raw components (the import path for
    /// externally computed vectors; they must arrive unit-normalized).
    pub fn try_new(values: [f64; ENCODING_DIM]) -> Result<Self, InvalidEncoding> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(InvalidEncoding("component is not finite".into()));
        }
        if values.iter().all(|&v| v == 0.0) {
            return Ok(Encoding { values });
        }
        let norm = norm_of(&values);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(InvalidEncoding(format!(
                "L2 norm is {norm}, expected 1 within {NORM_TOLERANCE:e} (or an all-zero vector)"
            )));
        }
        Ok(Encoding { values })
    }

    /// The all-zero encoding produced for constant inputs.
    pub fn zero() -> Self {
        Encoding {
            values: [0.0; ENCODING_DIM],
        }
    }

    pub fn values(&self) -> &[f64; ENCODING_DIM] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.values)
    }
}

fn norm_of(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Orthonormal type-II 2-D DCT of an `n x n` block (row-major).
///
/// `out[u*n+v] = a(u) a(v) * sum_{x,y} f[x*n+y] cos((2x+1)u pi / 2n)
/// cos((2y+1)v pi / 2n)` with `a(0) = sqrt(1/n)`, `a(k>0) = sqrt(2/n)`.
/// Computed separably in O(n^3).
pub fn dct2d(block: &[f64], n: usize) -> Vec<f64> {
    assert!(n >= 1, "block side must be >= 1");
    assert_eq!(block.len(), n * n, "block must be n*n values");

    // cos_table[u][x] = a(u) * cos((2x+1) u pi / 2n)
    let cos_table: Vec<Vec<f64>> = (0..n)
        .map(|u| {
            let alpha = if u == 0 {
                (1.0 / n as f64).sqrt()
            } else {
                (2.0 / n as f64).sqrt()
            };
            (0..n)
                .map(|x| alpha * ((2 * x + 1) as f64 * u as f64 * PI / (2.0 * n as f64)).cos())
                .collect()
        })
        .collect();

    // rows first: g[x][v] = sum_y f[x][y] * cos_table[v][y]
    let mut rows = vec![0.0; n * n];
    for x in 0..n {
        for v in 0..n {
            let mut acc = 0.0;
            for y in 0..n {
                acc += block[x * n + y] * cos_table[v][y];
            }
            rows[x * n + v] = acc;
        }
    }
    // then columns: C[u][v] = sum_x g[x][v] * cos_table[u][x]
    let mut out = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            let mut acc = 0.0;
            for x in 0..n {
                acc += rows[x * n + v] * cos_table[u][x];
            }
            out[u * n + v] = acc;
        }
    }
    out
}

/// JPEG zig-zag traversal of an `n x n` grid as (row, col) pairs, starting at
/// (0, 0) and moving first to (0, 1).
pub fn zigzag_order(n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 1);
    let mut order = Vec::with_capacity(n * n);
    for s in 0..=(2 * n - 2) {
        if s % 2 == 1 {
            // odd anti-diagonals walk down-left from the top
            let start_r = s.saturating_sub(n - 1);
            let end_r = s.min(n - 1);
            for r in start_r..=end_r {
                order.push((r, s - r));
            }
        } else {
            // even anti-diagonals walk up-right from the bottom
            let start_r = s.min(n - 1);
            let end_r = s.saturating_sub(n - 1);
            for r in (end_r..=start_r).rev() {
                order.push((r, s - r));
            }
        }
    }
    order
}

/// Encodes the face under `face` in `img`.
///
/// Pipeline: crop -> bilinear resize to 32x32 -> subtract mean, divide by the
/// population standard deviation -> 2-D DCT -> take the first 128 zig-zag
/// coefficients after the DC term -> scale to unit norm. A constant crop
/// (population std below 1e-6) yields the zero encoding.
pub fn encode_face(img: &GrayImage, face: Rect) -> Result<Encoding, EncodeError> {
    if face.w < MIN_FACE_SIZE || face.h < MIN_FACE_SIZE {
        return Err(EncodeError::FaceTooSmall {
            w: face.w,
            h: face.h,
        });
    }
    let cropped = crop(img, face).map_err(|e| match e {
        ImagingError::RectOutOfBounds {
            rect,
            width,
            height,
        } => EncodeError::RectOutOfBounds {
            rect,
            width,
            height,
        },
    })?;
    let patch = resize_bilinear(&cropped, PATCH_SIZE, PATCH_SIZE);

    let n = PATCH_SIZE as usize;
    let count = (n * n) as f64;
    let mut values: Vec<f64> = patch.samples().iter().map(|&v| v as f64).collect();
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count;
    let std_dev = variance.sqrt();
    if std_dev < 1e-6 {
        return Ok(Encoding::zero());
    }
    for v in &mut values {
        *v = (*v - mean) / std_dev;
    }

    let spectrum = dct2d(&values, n);
    let mut components = [0.0; ENCODING_DIM];
    for (i, &(r, c)) in zigzag_order(n)
        .iter()
        .skip(1)
        .take(ENCODING_DIM)
        .enumerate()
    {
        components[i] = spectrum[r * n + c];
    }
    let norm = norm_of(&components);
    if norm < 1e-12 {
        return Ok(Encoding::zero());
    }
    for v in &mut components {
        *v /= norm;
    }
    Ok(Encoding { values: components })
}
