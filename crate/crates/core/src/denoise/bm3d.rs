//! Single-stage collaborative filtering: block matching, hard thresholding in
//! a separable orthonormal 3-D DCT, and uniform-weight aggregation.
//!
//! Reference blocks sit on a grid with step [`STEP`] (the last row and column
//! of positions are always included so every pixel is covered). For each
//! reference, all blocks whose top-left corner lies within ±`(WINDOW_SIZE -
//! BLOCK_SIZE) / 2` pixels are ranked by squared L2 distance (ties broken by
//! raster order, the reference itself first) and the best [`GROUP_SIZE`] form
//! the group.

use crate::scalar::Real;
use crate::Plane;

pub const BLOCK_SIZE: usize = 8;
pub const GROUP_SIZE: usize = 16;
pub const WINDOW_SIZE: usize = 24;
pub const STEP: usize = 4;
pub const THRESHOLD_FACTOR: f64 = 2.7;

/// Orthonormal DCT-II basis, `basis[k * n + i]`.
struct DctBasis<F> {
    n: usize,
    basis: Vec<F>,
}

impl<F: Real> DctBasis<F> {
    fn new(n: usize) -> Self {
        let nf = F::of_usize(n);
        let mut basis = Vec::with_capacity(n * n);
        for k in 0..n {
            let scale = if k == 0 {
                (F::one() / nf).sqrt()
            } else {
                (F::of_usize(2) / nf).sqrt()
            };
            for i in 0..n {
                let arg = F::PI() * F::of_usize((2 * i + 1) * k) / F::of_usize(2 * n);
                basis.push(scale * arg.cos());
            }
        }
        DctBasis { n, basis }
    }

    /// Transforms `n` values read at `data[offset + i * stride]` in place.
    fn apply(&self, data: &mut [F], offset: usize, stride: usize, inverse: bool, tmp: &mut Vec<F>) {
        let n = self.n;
        tmp.clear();
        for k in 0..n {
            let mut acc = F::zero();
            for i in 0..n {
                let b = if inverse {
                    self.basis[i * n + k]
                } else {
                    self.basis[k * n + i]
                };
                acc = acc + b * data[offset + i * stride];
            }
            tmp.push(acc);
        }
        for (k, &v) in tmp.iter().enumerate() {
            data[offset + k * stride] = v;
        }
    }
}

fn grid_positions(len: usize, block: usize) -> Vec<usize> {
    let last = len - block;
    let mut pos: Vec<usize> = (0..=last).step_by(STEP).collect();
    if *pos.last().unwrap() != last {
        pos.push(last);
    }
    pos
}

/// Transforms a stack of `count` square blocks laid out block-major.
fn transform_3d<F: Real>(
    stack: &mut [F],
    block: &DctBasis<F>,
    group: &DctBasis<F>,
    inverse: bool,
    tmp: &mut Vec<F>,
) {
    let b = block.n;
    let bb = b * b;
    let count = group.n;
    let spatial = |stack: &mut [F], tmp: &mut Vec<F>| {
        for g in 0..count {
            let base = g * bb;
            for row in 0..b {
                block.apply(stack, base + row * b, 1, inverse, tmp);
            }
            for col in 0..b {
                block.apply(stack, base + col, b, inverse, tmp);
            }
        }
    };
    let temporal = |stack: &mut [F], tmp: &mut Vec<F>| {
        for i in 0..bb {
            group.apply(stack, i, bb, inverse, tmp);
        }
    };
    if inverse {
        temporal(stack, tmp);
        spatial(stack, tmp);
    } else {
        spatial(stack, tmp);
        temporal(stack, tmp);
    }
}

pub(super) fn filter<F: Real>(input: &Plane<F>, h: F) -> Plane<F> {
    let (w, ht) = (input.width(), input.height());
    let b = BLOCK_SIZE.min(w).min(ht);
    let bb = b * b;
    let reach = ((WINDOW_SIZE - BLOCK_SIZE) / 2) as isize;
    let threshold = F::of_f64(THRESHOLD_FACTOR) * h.sqrt();

    let block_basis = DctBasis::<F>::new(b);
    let group_bases: Vec<DctBasis<F>> = (1..=GROUP_SIZE).map(DctBasis::new).collect();

    let xs = grid_positions(w, b);
    let ys = grid_positions(ht, b);

    let mut sum = vec![F::zero(); w * ht];
    let mut count = vec![0u32; w * ht];
    let mut candidates: Vec<(F, usize, usize)> = Vec::new();
    let mut stack: Vec<F> = Vec::with_capacity(GROUP_SIZE * bb);
    let mut tmp = Vec::with_capacity(GROUP_SIZE.max(b));

    for &ry in &ys {
        for &rx in &xs {
            candidates.clear();
            let y_lo = (ry as isize - reach).max(0) as usize;
            let y_hi = (ry as isize + reach).min((ht - b) as isize) as usize;
            let x_lo = (rx as isize - reach).max(0) as usize;
            let x_hi = (rx as isize + reach).min((w - b) as isize) as usize;
            for cy in y_lo..=y_hi {
                for cx in x_lo..=x_hi {
                    let mut d = F::zero();
                    for j in 0..b {
                        let rrow = &input.row(ry + j)[rx..rx + b];
                        let crow = &input.row(cy + j)[cx..cx + b];
                        for (&p, &q) in rrow.iter().zip(crow) {
                            let e = p - q;
                            d = d + e * e;
                        }
                    }
                    candidates.push((d, cx, cy));
                }
            }
            // The reference leads its own group; remaining ties keep raster
            // order (stable sort).
            candidates.sort_by(|a, b| {
                let a_ref = (a.1, a.2) == (rx, ry);
                let b_ref = (b.1, b.2) == (rx, ry);
                a.0.partial_cmp(&b.0)
                    .expect("finite distance")
                    .then(b_ref.cmp(&a_ref))
            });
            let n = candidates.len().min(GROUP_SIZE);

            stack.clear();
            for &(_, cx, cy) in &candidates[..n] {
                for j in 0..b {
                    stack.extend_from_slice(&input.row(cy + j)[cx..cx + b]);
                }
            }
            let group_basis = &group_bases[n - 1];
            transform_3d(&mut stack, &block_basis, group_basis, false, &mut tmp);
            for c in stack.iter_mut() {
                if c.abs() <= threshold {
                    *c = F::zero();
                }
            }
            transform_3d(&mut stack, &block_basis, group_basis, true, &mut tmp);

            for (g, &(_, cx, cy)) in candidates[..n].iter().enumerate() {
                for j in 0..b {
                    for i in 0..b {
                        let idx = (cy + j) * w + cx + i;
                        sum[idx] = sum[idx] + stack[g * bb + j * b + i];
                        count[idx] += 1;
                    }
                }
            }
        }
    }

    let out: Vec<F> = sum
        .iter()
        .zip(&count)
        .map(|(&s, &c)| s / F::of_usize(c as usize))
        .collect();
    Plane::new(w, ht, out).expect("same dimensions")
}
