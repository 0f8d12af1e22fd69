//! Frame representations and the small set of image primitives shared by the
//! pipeline stages.
//!
//! All grids are row-major `ndarray` arrays indexed `(row, col)`; pixel
//! coordinates elsewhere in the crate are `(x, y) = (col, row)`.

use std::path::Path;

use image::{GrayImage, ImageReader};
use ndarray::Array2;

use crate::error::{Error, Result};

/// Side of the preprocessed frame in pixels.
pub const PROC_SIDE: usize = 341;

/// 8-bit grayscale frame of arbitrary size.
pub type RawFrame = Array2<u8>;

/// Real-valued grayscale grid.
pub type GrayGrid = Array2<f32>;

/// Binary mask.
pub type Mask = Array2<bool>;

/// A preprocessed frame: exactly 341×341, intensities in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ProcFrame(GrayGrid);

impl ProcFrame {
    pub fn new(values: GrayGrid) -> Result<Self> {
        let (h, w) = values.dim();
        if h != PROC_SIDE || w != PROC_SIDE {
            return Err(Error::BadFrameShape {
                expected_h: PROC_SIDE,
                expected_w: PROC_SIDE,
                h,
                w,
            });
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(
                "ProcFrame intensities must lie in [0, 1]".into(),
            ));
        }
        Ok(ProcFrame(values))
    }

    pub fn values(&self) -> &GrayGrid {
        &self.0
    }

    pub fn into_values(self) -> GrayGrid {
        self.0
    }
}

/// A network input: S×S, intensities in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct NetInput(GrayGrid);

impl NetInput {
    pub fn new(values: GrayGrid) -> Result<Self> {
        let (h, w) = values.dim();
        if h != w {
            return Err(Error::BadFrameShape {
                expected_h: h,
                expected_w: h,
                h,
                w,
            });
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(
                "NetInput intensities must lie in [0, 1]".into(),
            ));
        }
        Ok(NetInput(values))
    }

    pub fn side(&self) -> usize {
        self.0.nrows()
    }

    pub fn values(&self) -> &GrayGrid {
        &self.0
    }
}

/// Bilinear resize with half-pixel sample alignment:
/// `src = (dst + 0.5) * (src_len / dst_len) - 0.5`, edge-clamped.
///
/// Identity when the output shape equals the input shape.
pub fn resize_bilinear(src: &GrayGrid, out_h: usize, out_w: usize) -> GrayGrid {
    let (h, w) = src.dim();
    if h == out_h && w == out_w {
        return src.clone();
    }
    let sy = h as f64 / out_h as f64;
    let sx = w as f64 / out_w as f64;
    let mut out = Array2::zeros((out_h, out_w));
    for oy in 0..out_h {
        let fy = ((oy as f64 + 0.5) * sy - 0.5).clamp(0.0, (h - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let wy = (fy - y0 as f64) as f32;
        for ox in 0..out_w {
            let fx = ((ox as f64 + 0.5) * sx - 0.5).clamp(0.0, (w - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(w - 1);
            let wx = (fx - x0 as f64) as f32;
            let top = src[[y0, x0]] * (1.0 - wx) + src[[y0, x1]] * wx;
            let bot = src[[y1, x0]] * (1.0 - wx) + src[[y1, x1]] * wx;
            out[[oy, ox]] = top * (1.0 - wy) + bot * wy;
        }
    }
    out
}

/// Separable Gaussian blur with a kernel truncated at 3σ (edge-clamped).
/// `sigma <= 0` returns the input unchanged.
pub fn gaussian_blur(src: &GrayGrid, sigma: f32) -> GrayGrid {
    if sigma <= 0.0 {
        return src.clone();
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let mut kernel = Vec::with_capacity(2 * radius + 1);
    let denom = 2.0 * sigma * sigma;
    for i in -(radius as isize)..=(radius as isize) {
        kernel.push((-((i * i) as f32) / denom).exp());
    }
    let sum: f32 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= sum;
    }

    let (h, w) = src.dim();
    let r = radius as isize;
    let mut tmp = Array2::zeros((h, w));
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let sx = (x as isize + ki as isize - r).clamp(0, w as isize - 1) as usize;
                acc += src[[y, sx]] * k;
            }
            tmp[[y, x]] = acc;
        }
    }
    let mut out = Array2::zeros((h, w));
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let sy = (y as isize + ki as isize - r).clamp(0, h as isize - 1) as usize;
                acc += tmp[[sy, x]] * k;
            }
            out[[y, x]] = acc;
        }
    }
    out
}

/// Load an 8-bit grayscale image into a `RawFrame`.
pub fn load_gray(path: &Path) -> Result<RawFrame> {
    let img = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| Error::Image {
            path: path.into(),
            source: e,
        })?
        .into_luma8();
    let (w, h) = img.dimensions();
    let data = img.into_raw();
    Ok(Array2::from_shape_vec((h as usize, w as usize), data)
        .expect("luma8 buffer matches dimensions"))
}

/// Save an 8-bit grayscale grid as PNG.
pub fn save_gray(path: &Path, frame: &RawFrame) -> Result<()> {
    let (h, w) = frame.dim();
    let data: Vec<u8> = frame.iter().copied().collect();
    let img = GrayImage::from_raw(w as u32, h as u32, data).expect("buffer matches dimensions");
    img.save(path).map_err(|e| Error::Image {
        path: path.into(),
        source: e,
    })
}

/// Quantize a [0, 1] grid to 8 bits (round-to-nearest).
pub fn to_u8(grid: &GrayGrid) -> RawFrame {
    grid.mapv(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
}
