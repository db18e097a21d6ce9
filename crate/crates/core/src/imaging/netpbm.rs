//! Netpbm PGM/PPM codec: magics P2/P3 (plain) and P5/P6 (raw), maxval 255.

use super::{GrayImage, RgbImage};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetpbmError {
    #[error("unsupported magic number (expected P2, P3, P5 or P6)")]
    UnsupportedMagic,
    #[error("non-numeric header field")]
    NonNumericHeader,
    #[error("maxval {0} out of range (only 255 is supported)")]
    MaxvalOutOfRange(u32),
    #[error("payload truncated")]
    TruncatedPayload,
    #[error("image dimension is zero")]
    ZeroDimension,
    #[error("non-numeric sample in plain payload")]
    NonNumericSample,
    #[error("sample value {0} exceeds maxval 255")]
    SampleOutOfRange(u32),
}

/// Decode result: P2/P5 produce grayscale, P3/P6 produce RGB.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetpbmImage {
    Gray(GrayImage),
    Rgb(RgbImage),
}

impl NetpbmImage {
    /// Grayscale view regardless of source format (RGB converts via BT.601).
    pub fn into_gray(self) -> GrayImage {
        match self {
            NetpbmImage::Gray(g) => g,
            NetpbmImage::Rgb(rgb) => super::to_gray(&rgb),
        }
    }

    pub fn width(&self) -> u32 {
        match self {
            NetpbmImage::Gray(g) => g.width(),
            NetpbmImage::Rgb(c) => c.width(),
        }
    }

    pub fn height(&self) -> u32 {
        match self {
            NetpbmImage::Gray(g) => g.height(),
            NetpbmImage::Rgb(c) => c.height(),
        }
    }
}

struct Scanner<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(data: &'a [u8]) -> Self {
        Scanner { data, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => return,
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn next_u32(&mut self) -> Result<Option<u32>, ()> {
        match self.next_token() {
            None => Ok(None),
            Some(tok) => {
                if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) || tok.len() > 9 {
                    return Err(());
                }
                let mut v: u32 = 0;
                for &b in tok {
                    v = v * 10 + (b - b'0') as u32;
                }
                Ok(Some(v))
            }
        }
    }
}

/// Decodes a P2/P3/P5/P6 Netpbm image with maxval 255.
///
/// Header comments (`#` to end of line) are skipped; for the raw formats the
/// payload starts after exactly one whitespace byte following the maxval.
pub fn load_netpbm(bytes: &[u8]) -> Result<NetpbmImage, NetpbmError> {
    let mut sc = Scanner::new(bytes);
    let (gray, binary) = match sc.next_token() {
        Some(b"P2") => (true, false),
        Some(b"P3") => (false, false),
        Some(b"P5") => (true, true),
        Some(b"P6") => (false, true),
        _ => return Err(NetpbmError::UnsupportedMagic),
    };

    let mut header_field = || -> Result<u32, NetpbmError> {
        sc.next_u32()
            .map_err(|_| NetpbmError::NonNumericHeader)?
            .ok_or(NetpbmError::TruncatedPayload)
    };
    let width = header_field()?;
    let height = header_field()?;
    let maxval = header_field()?;
    if maxval != 255 {
        return Err(NetpbmError::MaxvalOutOfRange(maxval));
    }
    if width == 0 || height == 0 {
        return Err(NetpbmError::ZeroDimension);
    }

    let count = width as usize * height as usize * if gray { 1 } else { 3 };

    let samples = if binary {
        match bytes.get(sc.pos) {
            None => return Err(NetpbmError::TruncatedPayload),
            Some(b) if b.is_ascii_whitespace() => {}
            Some(_) => return Err(NetpbmError::NonNumericHeader),
        }
        let start = sc.pos + 1;
        if bytes.len() < start + count {
            return Err(NetpbmError::TruncatedPayload);
        }
        bytes[start..start + count].to_vec()
    } else {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let v = sc
                .next_u32()
                .map_err(|_| NetpbmError::NonNumericSample)?
                .ok_or(NetpbmError::TruncatedPayload)?;
            if v > 255 {
                return Err(NetpbmError::SampleOutOfRange(v));
            }
            out.push(v as u8);
        }
        out
    };

    Ok(if gray {
        NetpbmImage::Gray(GrayImage::new(width, height, samples))
    } else {
        NetpbmImage::Rgb(RgbImage::new(width, height, samples))
    })
}

fn header(magic: &str, w: u32, h: u32) -> Vec<u8> {
    format!("{magic}\n{w} {h}\n255\n").into_bytes()
}

/// Encodes as binary PGM (P5).
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = header("P5", img.width(), img.height());
    out.extend_from_slice(img.samples());
    out
}

/// Encodes as plain-text PGM (P2), one image row per line.
pub fn save_pgm_ascii(img: &GrayImage) -> Vec<u8> {
    let mut out = header("P2", img.width(), img.height());
    for row in img.samples().chunks(img.width() as usize) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.extend_from_slice(line.join(" ").as_bytes());
        out.push(b'\n');
    }
    out
}

/// Encodes as binary PPM (P6).
pub fn save_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = header("P6", img.width(), img.height());
    out.extend_from_slice(img.samples());
    out
}

/// Encodes as plain-text PPM (P3), one pixel row per line.
pub fn save_ppm_ascii(img: &RgbImage) -> Vec<u8> {
    let mut out = header("P3", img.width(), img.height());
    for row in img.samples().chunks(3 * img.width() as usize) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.extend_from_slice(line.join(" ").as_bytes());
        out.push(b'\n');
    }
    out
}
