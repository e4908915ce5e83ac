//! Block-translational motion estimation and the warping operators used by
//! the lifting steps.
//!
//! A vector `v` of block `b` means: the prediction of pixel `p` of the current
//! frame is `reference[p + v]`. Forward warping fetches at `p + v_b`, inverse
//! warping at `p - v_b`, where `b` is always the block of the *output* pixel.
//! All fetches clamp to the frame border.

use crate::error::{Error, Result};
use crate::Frame;

pub const DEFAULT_GRID_SIZE: usize = 8;
pub const DEFAULT_SEARCH_RANGE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MotionConfig {
    pub grid_size: usize,
    pub search_range: usize,
}

impl Default for MotionConfig {
    fn default() -> Self {
        MotionConfig {
            grid_size: DEFAULT_GRID_SIZE,
            search_range: DEFAULT_SEARCH_RANGE,
        }
    }
}

impl MotionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_size == 0 {
            return Err(Error::param("grid size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotionVector {
    pub dx: i32,
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dx: 0, dy: 0 };

    pub fn new(dx: i32, dy: i32) -> Self {
        MotionVector { dx, dy }
    }

    fn l1(&self) -> u32 {
        self.dx.unsigned_abs() + self.dy.unsigned_abs()
    }
}

/// Per-block displacement vectors on a regular grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotionField {
    grid_size: usize,
    blocks_x: usize,
    blocks_y: usize,
    vectors: Vec<MotionVector>,
}

impl MotionField {
    pub fn zero(width: usize, height: usize, grid_size: usize) -> Self {
        let (blocks_x, blocks_y) = block_counts(width, height, grid_size);
        MotionField {
            grid_size,
            blocks_x,
            blocks_y,
            vectors: vec![MotionVector::ZERO; blocks_x * blocks_y],
        }
    }

    pub fn from_vectors(
        width: usize,
        height: usize,
        grid_size: usize,
        vectors: Vec<MotionVector>,
    ) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::param("grid size must be at least 1"));
        }
        let (blocks_x, blocks_y) = block_counts(width, height, grid_size);
        if vectors.len() != blocks_x * blocks_y {
            return Err(Error::dims(format!(
                "{} vectors for a {blocks_x}x{blocks_y} block grid",
                vectors.len()
            )));
        }
        Ok(MotionField {
            grid_size,
            blocks_x,
            blocks_y,
            vectors,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn blocks_x(&self) -> usize {
        self.blocks_x
    }

    pub fn blocks_y(&self) -> usize {
        self.blocks_y
    }

    pub fn vectors(&self) -> &[MotionVector] {
        &self.vectors
    }

    pub fn vector(&self, bx: usize, by: usize) -> MotionVector {
        self.vectors[by * self.blocks_x + bx]
    }

    pub fn set_vector(&mut self, bx: usize, by: usize, v: MotionVector) {
        self.vectors[by * self.blocks_x + bx] = v;
    }

    /// Whether this field tiles a `width`×`height` frame.
    pub fn fits(&self, width: usize, height: usize) -> bool {
        block_counts(width, height, self.grid_size) == (self.blocks_x, self.blocks_y)
    }

    fn check_fits(&self, frame: &Frame) -> Result<()> {
        if self.fits(frame.width(), frame.height()) {
            Ok(())
        } else {
            Err(Error::dims(format!(
                "{}x{} block field (grid {}) does not tile a {}x{} frame",
                self.blocks_x,
                self.blocks_y,
                self.grid_size,
                frame.width(),
                frame.height()
            )))
        }
    }
}

pub fn block_counts(width: usize, height: usize, grid_size: usize) -> (usize, usize) {
    (width.div_ceil(grid_size), height.div_ceil(grid_size))
}

fn block_sad(
    reference: &Frame,
    current: &Frame,
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
    v: MotionVector,
) -> u64 {
    let mut sad = 0u64;
    for y in y0..y1 {
        let ry = y as isize + v.dy as isize;
        for x in x0..x1 {
            let pred = reference.get_clamped(x as isize + v.dx as isize, ry);
            sad += (current.get(x, y) - pred).unsigned_abs() as u64;
        }
    }
    sad
}

/// Full-search SAD block matching of `current` against `reference`.
///
/// Candidates are visited in raster order of `(dy, dx)` starting at
/// `(-r, -r)`; a candidate replaces the incumbent only if it has a smaller SAD,
/// or an equal SAD and a smaller `|dx| + |dy|`.
pub fn estimate_motion(reference: &Frame, current: &Frame, cfg: &MotionConfig) -> Result<MotionField> {
    cfg.validate()?;
    reference.check_same_dims(current)?;
    let (w, h) = (current.width(), current.height());
    let g = cfg.grid_size;
    let r = cfg.search_range as i32;
    let mut field = MotionField::zero(w, h, g);
    for by in 0..field.blocks_y {
        for bx in 0..field.blocks_x {
            let (x0, y0) = (bx * g, by * g);
            let (x1, y1) = ((x0 + g).min(w), (y0 + g).min(h));
            let mut best = (u64::MAX, u32::MAX, MotionVector::ZERO);
            for dy in -r..=r {
                for dx in -r..=r {
                    let v = MotionVector::new(dx, dy);
                    let sad = block_sad(reference, current, x0, y0, x1, y1, v);
                    if (sad, v.l1()) < (best.0, best.1) {
                        best = (sad, v.l1(), v);
                    }
                }
            }
            field.set_vector(bx, by, best.2);
        }
    }
    Ok(field)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WarpDirection {
    Forward,
    Inverse,
}

/// Motion-compensates `frame` with `field`.
pub fn warp(frame: &Frame, field: &MotionField, direction: WarpDirection) -> Result<Frame> {
    field.check_fits(frame)?;
    let g = field.grid_size;
    let sign: isize = match direction {
        WarpDirection::Forward => 1,
        WarpDirection::Inverse => -1,
    };
    Ok(Frame::from_fn(frame.width(), frame.height(), |x, y| {
        let v = field.vector(x / g, y / g);
        frame.get_clamped(
            x as isize + sign * v.dx as isize,
            y as isize + sign * v.dy as isize,
        )
    }))
}
