//! Frame preprocessing: center crop, CLAHE contrast enhancement,
//! normalization to [0, 1], and the inference-time resize to the network
//! input side.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::frame::{resize_bilinear, NetInput, ProcFrame, RawFrame, PROC_SIDE};

/// CLAHE and resize parameters; the paper leaves these open, so they are
/// exposed as configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocessConfig {
    pub crop_size: usize,
    pub clahe_clip: f32,
    pub clahe_tiles: (usize, usize),
    /// Network input side. 224 makes three/four 2×2 poolings land on the
    /// 28×28 / 14×14 grids of CNN3/CNN4.
    pub net_side: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            crop_size: PROC_SIDE,
            clahe_clip: 2.0,
            clahe_tiles: (8, 8),
            net_side: 224,
        }
    }
}

/// Crop the `size`×`size` window centered in the frame (floor division for
/// odd remainders).
pub fn center_crop(frame: &RawFrame, size: usize) -> Result<RawFrame> {
    let (h, w) = frame.dim();
    if h < size || w < size {
        return Err(Error::FrameTooSmall { h, w, size });
    }
    let top = (h - size) / 2;
    let left = (w - size) / 2;
    Ok(frame
        .slice(ndarray::s![top..top + size, left..left + size])
        .to_owned())
}

/// Contrast-limited adaptive histogram equalization on an 8-bit frame.
///
/// Follows the usual tile-LUT formulation: per-tile histograms are clipped at
/// `clip_limit * tile_area / 256` (floor, at least 1), the excess is
/// redistributed uniformly, and output pixels bilinearly interpolate between
/// the four neighboring tile mappings. Frames whose sides are not divisible
/// by the grid are virtually extended by reflection for LUT computation.
pub fn clahe(frame: &RawFrame, clip_limit: f32, tiles: (usize, usize)) -> Result<RawFrame> {
    if clip_limit <= 0.0 {
        return Err(Error::InvalidParameter("CLAHE clip limit must be > 0".into()));
    }
    let (grid_y, grid_x) = tiles;
    if grid_x == 0 || grid_y == 0 {
        return Err(Error::InvalidParameter("CLAHE tile grid must be positive".into()));
    }
    let (h, w) = frame.dim();
    if h < grid_y || w < grid_x {
        return Err(Error::InvalidParameter(format!(
            "frame {h}x{w} smaller than tile grid {grid_y}x{grid_x}"
        )));
    }

    let ext_h = h.div_ceil(grid_y) * grid_y;
    let ext_w = w.div_ceil(grid_x) * grid_x;
    let tile_h = ext_h / grid_y;
    let tile_w = ext_w / grid_x;

    // reflect-101 lookup into the original frame
    let reflect = |i: isize, n: usize| -> usize {
        let n = n as isize;
        if n == 1 {
            return 0;
        }
        let period = 2 * n - 2;
        let mut r = i % period;
        if r < 0 {
            r += period;
        }
        if r >= n {
            r = period - r;
        }
        r as usize
    };

    let mut luts = vec![[0u8; 256]; grid_y * grid_x];
    let clip_int = (((clip_limit * (tile_h * tile_w) as f32) / 256.0).floor() as usize).max(1);
    for ty in 0..grid_y {
        for tx in 0..grid_x {
            let mut hist = [0usize; 256];
            for y in ty * tile_h..(ty + 1) * tile_h {
                for x in tx * tile_w..(tx + 1) * tile_w {
                    let v = frame[[reflect(y as isize, h), reflect(x as isize, w)]];
                    hist[v as usize] += 1;
                }
            }
            // clip and redistribute
            let mut clipped = 0usize;
            for bin in hist.iter_mut() {
                if *bin > clip_int {
                    clipped += *bin - clip_int;
                    *bin = clip_int;
                }
            }
            let batch = clipped / 256;
            let mut residual = clipped % 256;
            for bin in hist.iter_mut() {
                *bin += batch;
            }
            if residual > 0 {
                let step = (256 / residual).max(1);
                let mut i = 0;
                while i < 256 && residual > 0 {
                    hist[i] += 1;
                    residual -= 1;
                    i += step;
                }
            }
            // CDF -> LUT
            let scale = 255.0f32 / (tile_h * tile_w) as f32;
            let lut = &mut luts[ty * grid_x + tx];
            let mut cdf = 0usize;
            for (v, bin) in hist.iter().enumerate() {
                cdf += bin;
                lut[v] = (cdf as f32 * scale).round().clamp(0.0, 255.0) as u8;
            }
        }
    }

    let mut out = Array2::zeros((h, w));
    for y in 0..h {
        let fy = y as f32 / tile_h as f32 - 0.5;
        let ty0 = fy.floor().max(0.0) as usize;
        let wy = (fy - fy.floor()).clamp(0.0, 1.0);
        let ty1 = (ty0 + 1).min(grid_y - 1);
        let (ty0, wy) = if fy < 0.0 { (0, 0.0) } else { (ty0, wy) };
        for x in 0..w {
            let fx = x as f32 / tile_w as f32 - 0.5;
            let tx0 = fx.floor().max(0.0) as usize;
            let wx = (fx - fx.floor()).clamp(0.0, 1.0);
            let tx1 = (tx0 + 1).min(grid_x - 1);
            let (tx0, wx) = if fx < 0.0 { (0, 0.0) } else { (tx0, wx) };

            let v = frame[[y, x]] as usize;
            let tl = luts[ty0 * grid_x + tx0][v] as f32;
            let tr = luts[ty0 * grid_x + tx1][v] as f32;
            let bl = luts[ty1 * grid_x + tx0][v] as f32;
            let br = luts[ty1 * grid_x + tx1][v] as f32;
            let top = tl * (1.0 - wx) + tr * wx;
            let bot = bl * (1.0 - wx) + br * wx;
            out[[y, x]] = (top * (1.0 - wy) + bot * wy).round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(out)
}

/// Divide by 255 into [0, 1]. The frame must already be cropped to 341×341.
pub fn normalize(frame: &RawFrame) -> Result<ProcFrame> {
    let (h, w) = frame.dim();
    if h != PROC_SIDE || w != PROC_SIDE {
        return Err(Error::BadFrameShape {
            expected_h: PROC_SIDE,
            expected_w: PROC_SIDE,
            h,
            w,
        });
    }
    ProcFrame::new(frame.mapv(|v| v as f32 / 255.0))
}

/// Bilinear resize of a preprocessed frame to the network input side.
pub fn resize_to_net(frame: &ProcFrame, side: usize) -> Result<NetInput> {
    if side < 32 {
        return Err(Error::InvalidParameter(format!(
            "network input side {side} below minimum 32"
        )));
    }
    let resized = resize_bilinear(frame.values(), side, side).mapv(|v| v.clamp(0.0, 1.0));
    NetInput::new(resized)
}

/// Full preprocessing chain for one raw frame: crop, CLAHE, normalize.
pub fn preprocess_frame(frame: &RawFrame, cfg: &PreprocessConfig) -> Result<ProcFrame> {
    let cropped = center_crop(frame, cfg.crop_size)?;
    let enhanced = clahe(&cropped, cfg.clahe_clip, cfg.clahe_tiles)?;
    normalize(&enhanced)
}
