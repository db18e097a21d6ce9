//! Box and label drawing for recognition output images.

use super::font::{glyph, GLYPH_ADVANCE, GLYPH_WIDTH};
use super::{ImagingError, Rect, RgbImage};

/// Color used for box outlines and label text.
pub const ANNOTATION_COLOR: [u8; 3] = [0, 255, 0];

/// Vertical gap in pixels between a box and its label.
const LABEL_GAP: u32 = 2;

/// Draws 2-pixel-wide box outlines and optional labels onto a copy of `img`.
///
/// Outlines are drawn inward from the rect boundary, so an in-bounds box never
/// paints outside itself. Labels render below the box in the embedded 5x7
/// font, scaled by `max(1, box_height / 64)`; characters without a glyph
/// (outside printable ASCII) are skipped, and label pixels falling outside the
/// image are clipped. Every box must lie within the image.
pub fn annotate(img: &RgbImage, boxes: &[(Rect, Option<&str>)]) -> Result<RgbImage, ImagingError> {
    for (rect, _) in boxes {
        if rect.w == 0 || rect.h == 0 || !rect.fits_in(img.width(), img.height()) {
            return Err(ImagingError::RectOutOfBounds {
                rect: *rect,
                width: img.width(),
                height: img.height(),
            });
        }
    }
    let mut out = img.clone();
    for (rect, label) in boxes {
        draw_outline(&mut out, *rect);
        if let Some(text) = label {
            let scale = (rect.h / 64).max(1);
            let ty = rect.y + rect.h + LABEL_GAP;
            draw_text(&mut out, rect.x, ty, text, scale);
        }
    }
    Ok(out)
}

fn draw_outline(img: &mut RgbImage, r: Rect) {
    let band = 2.min(r.w).min(r.h);
    for y in r.y..r.y + r.h {
        for x in r.x..r.x + r.w {
            let dx = (x - r.x).min(r.x + r.w - 1 - x);
            let dy = (y - r.y).min(r.y + r.h - 1 - y);
            if dx < band || dy < band {
                img.set(x, y, ANNOTATION_COLOR);
            }
        }
    }
}

/// Renders `text` with its top-left corner at `(x, y)`, clipped to the image.
pub(crate) fn draw_text(img: &mut RgbImage, x: u32, y: u32, text: &str, scale: u32) {
    let mut pen_x = x as u64;
    for c in text.chars() {
        let Some(rows) = glyph(c) else { continue };
        for (gy, row) in rows.iter().enumerate() {
            for gx in 0..GLYPH_WIDTH {
                if row & (1 << (GLYPH_WIDTH - 1 - gx)) == 0 {
                    continue;
                }
                for sy in 0..scale {
                    for sx in 0..scale {
                        let px = pen_x + (gx * scale + sx) as u64;
                        let py = y as u64 + (gy as u32 * scale + sy) as u64;
                        if px < img.width() as u64 && py < img.height() as u64 {
                            img.set(px as u32, py as u32, ANNOTATION_COLOR);
                        }
                    }
                }
            }
        }
        pen_x += (GLYPH_ADVANCE * scale) as u64;
    }
}
