//! Reversible integer 5/3 wavelet (JPEG 2000 lossless path) in a dyadic
//! Mallat layout.
//!
//! At each level the current low-pass region is transformed along rows, then
//! along columns. An axis shorter than 2 samples is left untouched from that
//! level on, so narrow frames simply stop decomposing along that axis. Low
//! coefficients go to the first `ceil(n/2)` positions.

use crate::Frame;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DwtDirection {
    Forward,
    Inverse,
}

/// Size of the low-pass part of an axis of length `n` after one level.
#[inline]
pub(crate) fn low_len(n: usize) -> usize {
    if n >= 2 {
        n.div_ceil(2)
    } else {
        n
    }
}

/// Low-pass region sizes `(w, h)` before each level, outermost first.
pub(crate) fn level_sizes(width: usize, height: usize, levels: usize) -> Vec<(usize, usize)> {
    let mut sizes = Vec::with_capacity(levels);
    let (mut w, mut h) = (width, height);
    for _ in 0..levels {
        sizes.push((w, h));
        w = low_len(w);
        h = low_len(h);
    }
    sizes
}

/// A rectangular subband `[x0, x0+width) × [y0, y0+height)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubbandRect {
    pub x0: usize,
    pub y0: usize,
    pub width: usize,
    pub height: usize,
}

impl SubbandRect {
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Non-empty subbands of a `levels`-deep decomposition: the final LL band,
/// then HL, LH, HH from the deepest level outwards. They tile the frame.
pub fn subband_rects(width: usize, height: usize, levels: usize) -> Vec<SubbandRect> {
    let sizes = level_sizes(width, height, levels);
    let (ll_w, ll_h) = sizes
        .last()
        .map_or((width, height), |&(w, h)| (low_len(w), low_len(h)));
    let mut rects = vec![SubbandRect {
        x0: 0,
        y0: 0,
        width: ll_w,
        height: ll_h,
    }];
    for &(cw, ch) in sizes.iter().rev() {
        let (lw, lh) = (low_len(cw), low_len(ch));
        rects.push(SubbandRect {
            x0: lw,
            y0: 0,
            width: cw - lw,
            height: lh,
        });
        rects.push(SubbandRect {
            x0: 0,
            y0: lh,
            width: lw,
            height: ch - lh,
        });
        rects.push(SubbandRect {
            x0: lw,
            y0: lh,
            width: cw - lw,
            height: ch - lh,
        });
    }
    rects.retain(|r| !r.is_empty());
    rects
}

#[inline]
fn floor_div(a: i32, shift: u32) -> i32 {
    a >> shift
}

/// Forward 1-D 5/3 on `x`, writing `[low..., high...]` into `out`.
fn forward_1d(x: &[i32], out: &mut [i32]) {
    let n = x.len();
    if n < 2 {
        out[..n].copy_from_slice(x);
        return;
    }
    let nl = n.div_ceil(2);
    let nh = n / 2;
    let (low, high) = out.split_at_mut(nl);
    for i in 0..nh {
        let left = x[2 * i];
        let right = if 2 * i + 2 < n { x[2 * i + 2] } else { x[2 * i] };
        high[i] = x[2 * i + 1] - floor_div(left + right, 1);
    }
    for i in 0..nl {
        let dl = if i > 0 { high[i - 1] } else { high[0] };
        let dr = if i < nh { high[i] } else { high[nh - 1] };
        low[i] = x[2 * i] + floor_div(dl + dr + 2, 2);
    }
}

/// Inverse of [`forward_1d`].
fn inverse_1d(c: &[i32], out: &mut [i32]) {
    let n = c.len();
    if n < 2 {
        out[..n].copy_from_slice(c);
        return;
    }
    let nl = n.div_ceil(2);
    let nh = n / 2;
    let (low, high) = c.split_at(nl);
    for i in 0..nl {
        let dl = if i > 0 { high[i - 1] } else { high[0] };
        let dr = if i < nh { high[i] } else { high[nh - 1] };
        out[2 * i] = low[i] - floor_div(dl + dr + 2, 2);
    }
    for i in 0..nh {
        let left = out[2 * i];
        let right = if 2 * i + 2 < n { out[2 * i + 2] } else { out[2 * i] };
        out[2 * i + 1] = high[i] + floor_div(left + right, 1);
    }
}

fn transform_region(data: &mut [i32], stride: usize, w: usize, h: usize, dir: DwtDirection) {
    let f = match dir {
        DwtDirection::Forward => forward_1d,
        DwtDirection::Inverse => inverse_1d,
    };
    let mut line = vec![0i32; w.max(h)];
    let mut out = vec![0i32; w.max(h)];
    let rows = |data: &mut [i32], line: &mut [i32], out: &mut [i32]| {
        if w < 2 {
            return;
        }
        for y in 0..h {
            let row = &mut data[y * stride..y * stride + w];
            line[..w].copy_from_slice(row);
            f(&line[..w], &mut out[..w]);
            row.copy_from_slice(&out[..w]);
        }
    };
    let cols = |data: &mut [i32], line: &mut [i32], out: &mut [i32]| {
        if h < 2 {
            return;
        }
        for x in 0..w {
            for y in 0..h {
                line[y] = data[y * stride + x];
            }
            f(&line[..h], &mut out[..h]);
            for y in 0..h {
                data[y * stride + x] = out[y];
            }
        }
    };
    match dir {
        DwtDirection::Forward => {
            rows(data, &mut line, &mut out);
            cols(data, &mut line, &mut out);
        }
        DwtDirection::Inverse => {
            cols(data, &mut line, &mut out);
            rows(data, &mut line, &mut out);
        }
    }
}

/// Multi-level 2-D 5/3 transform. `levels = 0` is the identity.
pub fn spatial_dwt_53(frame: &Frame, levels: usize, direction: DwtDirection) -> Frame {
    let mut out = frame.clone();
    let stride = frame.width();
    let sizes = level_sizes(frame.width(), frame.height(), levels);
    let data = out.samples_mut();
    match direction {
        DwtDirection::Forward => {
            for &(w, h) in &sizes {
                transform_region(data, stride, w, h, direction);
            }
        }
        DwtDirection::Inverse => {
            for &(w, h) in sizes.iter().rev() {
                transform_region(data, stride, w, h, direction);
            }
        }
    }
    out
}
