//! Raster containers, Netpbm codecs, integral images, and geometry.
//!
//! Everything here is a pure function over immutable values: images are
//! constructed once and never mutated, so they can be shared freely across
//! threads.

mod annotate;
mod font;
mod netpbm;

pub use annotate::annotate;
pub use netpbm::{
    load_netpbm, save_pgm, save_pgm_ascii, save_ppm, save_ppm_ascii, NetpbmError, NetpbmImage,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImagingError {
    #[error("rect {rect:?} does not fit in a {width}x{height} image")]
    RectOutOfBounds { rect: Rect, width: u32, height: u32 },
}

/// Axis-aligned rectangle in pixel coordinates: origin `(x, y)`, extent `w x h`.
///
/// Zero-extent rects are legal (their pixel sums are 0); operations that need
/// actual pixels (`crop`, `annotate`) reject them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl serde::Serialize for Rect {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y, self.w, self.h].serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for Rect {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x, y, w, h] = <[u32; 4]>::deserialize(deserializer)?;
        Ok(Rect { x, y, w, h })
    }
}

impl Rect {
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn right(&self) -> u64 {
        self.x as u64 + self.w as u64
    }

    pub fn bottom(&self) -> u64 {
        self.y as u64 + self.h as u64
    }

    /// True when the rect lies entirely inside a `width x height` raster.
    pub fn fits_in(&self, width: u32, height: u32) -> bool {
        self.right() <= width as u64 && self.bottom() <= height as u64
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Rect) -> bool {
        self.x <= other.x
            && self.y <= other.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }
}

/// 8-bit luminance raster, row-major, `samples.len() == width * height`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    samples: Vec<u8>,
}

impl GrayImage {
    /// # Panics
    /// Panics if `width` or `height` is zero or `samples.len()` is not
    /// `width * height`. Decoders validate before constructing.
    pub fn new(width: u32, height: u32, samples: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(
            samples.len() as u64,
            width as u64 * height as u64,
            "sample count must equal width*height"
        );
        GrayImage {
            width,
            height,
            samples,
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut samples = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        GrayImage::new(width, height, samples)
    }

    pub fn constant(width: u32, height: u32, value: u8) -> Self {
        GrayImage::new(width, height, vec![value; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.samples[y as usize * self.width as usize + x as usize]
    }

    /// Full-image rect, convenient for whole-image crops and encodes.
    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    /// Replicates the luminance into R, G and B.
    pub fn to_rgb(&self) -> RgbImage {
        let mut samples = Vec::with_capacity(self.samples.len() * 3);
        for &v in &self.samples {
            samples.extend_from_slice(&[v, v, v]);
        }
        RgbImage::new(self.width, self.height, samples)
    }
}

/// 8-bit RGB raster, row-major interleaved triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    samples: Vec<u8>,
}

impl RgbImage {
    /// # Panics
    /// Panics if dimensions are zero or `samples.len() != 3 * width * height`.
    pub fn new(width: u32, height: u32, samples: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(
            samples.len() as u64,
            3 * width as u64 * height as u64,
            "sample count must equal 3*width*height"
        );
        RgbImage {
            width,
            height,
            samples,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.samples[i], self.samples[i + 1], self.samples[i + 2]]
    }

    pub(crate) fn set(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.samples[i..i + 3].copy_from_slice(&rgb);
    }
}

/// Rounds half-up (0.5 goes to 1). The single rounding rule used for every
/// float-to-sample conversion in the crate.
#[inline]
pub(crate) fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

/// BT.601 luma: `round(0.299 R + 0.587 G + 0.114 B)`, clamped to `[0, 255]`.
pub fn to_gray(img: &RgbImage) -> GrayImage {
    let mut samples = Vec::with_capacity(img.width as usize * img.height as usize);
    for px in img.samples.chunks_exact(3) {
        let y = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
        samples.push(round_half_up(y).clamp(0.0, 255.0) as u8);
    }
    GrayImage::new(img.width, img.height, samples)
}

/// Summed-area tables over an image: plain and squared sums, both exact.
///
/// Tables are `(width+1) x (height+1)`; entry `(x, y)` holds the sum of all
/// samples (resp. squared samples) in `[0, x) x [0, y)`, so row 0 and column 0
/// are zero and any rectangle sum is four lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralImage {
    width: u32,
    height: u32,
    pub(crate) sum: Vec<u64>,
    pub(crate) sq_sum: Vec<u64>,
}

impl IntegralImage {
    pub fn new(img: &GrayImage) -> Self {
        let (w, h) = (img.width as usize, img.height as usize);
        let stride = w + 1;
        let mut sum = vec![0u64; stride * (h + 1)];
        let mut sq_sum = vec![0u64; stride * (h + 1)];
        for y in 0..h {
            let mut row = 0u64;
            let mut row_sq = 0u64;
            let src = &img.samples[y * w..(y + 1) * w];
            for x in 0..w {
                let v = src[x] as u64;
                row += v;
                row_sq += v * v;
                sum[(y + 1) * stride + x + 1] = sum[y * stride + x + 1] + row;
                sq_sum[(y + 1) * stride + x + 1] = sq_sum[y * stride + x + 1] + row_sq;
            }
        }
        IntegralImage {
            width: img.width,
            height: img.height,
            sum,
            sq_sum,
        }
    }

    /// Width of the source image (the tables have one extra column).
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub(crate) fn stride(&self) -> usize {
        self.width as usize + 1
    }

    /// Table entry: sum of samples in `[0, x) x [0, y)`. `x <= width`, `y <= height`.
    pub fn sum_at(&self, x: u32, y: u32) -> u64 {
        self.sum[y as usize * self.stride() + x as usize]
    }

    /// Squared-sum table entry for the same prefix rectangle.
    pub fn sq_sum_at(&self, x: u32, y: u32) -> u64 {
        self.sq_sum[y as usize * self.stride() + x as usize]
    }

    fn lookup(table: &[u64], stride: usize, r: Rect) -> u64 {
        let (x0, y0) = (r.x as usize, r.y as usize);
        let (x1, y1) = (r.x as usize + r.w as usize, r.y as usize + r.h as usize);
        table[y1 * stride + x1] + table[y0 * stride + x0]
            - table[y1 * stride + x0]
            - table[y0 * stride + x1]
    }

    /// Sum of samples inside `r`, exactly, via four table lookups.
    pub fn rect_sum(&self, r: Rect) -> Result<u64, ImagingError> {
        self.check(r)?;
        Ok(Self::lookup(&self.sum, self.stride(), r))
    }

    /// Sum of squared samples inside `r`.
    pub fn rect_sum_squared(&self, r: Rect) -> Result<u64, ImagingError> {
        self.check(r)?;
        Ok(Self::lookup(&self.sq_sum, self.stride(), r))
    }

    fn check(&self, r: Rect) -> Result<(), ImagingError> {
        if r.fits_in(self.width, self.height) {
            Ok(())
        } else {
            Err(ImagingError::RectOutOfBounds {
                rect: r,
                width: self.width,
                height: self.height,
            })
        }
    }
}

/// Bilinear resampling with half-pixel-centered coordinates.
///
/// Output sample `(i, j)` interpolates the source at
/// `((i+0.5)*w/out_w - 0.5, (j+0.5)*h/out_h - 0.5)` with coordinates clamped
/// to the source range; the interpolated value rounds half-up.
pub fn resize_bilinear(img: &GrayImage, out_w: u32, out_h: u32) -> GrayImage {
    assert!(out_w >= 1 && out_h >= 1, "output dimensions must be >= 1");
    let sx_scale = img.width as f64 / out_w as f64;
    let sy_scale = img.height as f64 / out_h as f64;
    GrayImage::from_fn(out_w, out_h, |i, j| {
        let sx = ((i as f64 + 0.5) * sx_scale - 0.5).clamp(0.0, (img.width - 1) as f64);
        let sy = ((j as f64 + 0.5) * sy_scale - 0.5).clamp(0.0, (img.height - 1) as f64);
        let x0 = sx.floor() as u32;
        let y0 = sy.floor() as u32;
        let x1 = (x0 + 1).min(img.width - 1);
        let y1 = (y0 + 1).min(img.height - 1);
        let fx = sx - x0 as f64;
        let fy = sy - y0 as f64;
        let top = img.get(x0, y0) as f64 * (1.0 - fx) + img.get(x1, y0) as f64 * fx;
        let bot = img.get(x0, y1) as f64 * (1.0 - fx) + img.get(x1, y1) as f64 * fx;
        round_half_up(top * (1.0 - fy) + bot * fy).clamp(0.0, 255.0) as u8
    })
}

/// Extracts the sub-raster under `r`. The rect must be non-empty and in bounds.
pub fn crop(img: &GrayImage, r: Rect) -> Result<GrayImage, ImagingError> {
    if r.w == 0 || r.h == 0 || !r.fits_in(img.width, img.height) {
        return Err(ImagingError::RectOutOfBounds {
            rect: r,
            width: img.width,
            height: img.height,
        });
    }
    let mut samples = Vec::with_capacity(r.w as usize * r.h as usize);
    for y in r.y..r.y + r.h {
        let start = y as usize * img.width as usize + r.x as usize;
        samples.extend_from_slice(&img.samples[start..start + r.w as usize]);
    }
    Ok(GrayImage::new(r.w, r.h, samples))
}
