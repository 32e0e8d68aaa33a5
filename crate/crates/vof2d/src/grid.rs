use std::ops::{Index, IndexMut, Range};

use crate::error::{invalid, Result};

/// Dense 2D array addressed by signed indices, so ghost layers can sit at
/// −1 or past the last physical index. Storage is contiguous along j.
#[derive(Debug, Clone, PartialEq)]
pub struct Array2 {
    i0: isize,
    j0: isize,
    ni: usize,
    nj: usize,
    data: Vec<f64>,
}

impl Array2 {
    pub fn new(i: Range<isize>, j: Range<isize>) -> Self {
        let ni = (i.end - i.start).max(0) as usize;
        let nj = (j.end - j.start).max(0) as usize;
        Self {
            i0: i.start,
            j0: j.start,
            ni,
            nj,
            data: vec![0.0; ni * nj],
        }
    }

    pub fn i_range(&self) -> Range<isize> {
        self.i0..self.i0 + self.ni as isize
    }

    pub fn j_range(&self) -> Range<isize> {
        self.j0..self.j0 + self.nj as isize
    }

    #[inline]
    fn offset(&self, i: isize, j: isize) -> usize {
        debug_assert!(
            self.i_range().contains(&i) && self.j_range().contains(&j),
            "({i}, {j}) outside {:?} × {:?}",
            self.i_range(),
            self.j_range()
        );
        (i - self.i0) as usize * self.nj + (j - self.j0) as usize
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(isize, isize)> for Array2 {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (isize, isize)) -> &f64 {
        &self.data[self.offset(i, j)]
    }
}

impl IndexMut<(isize, isize)> for Array2 {
    #[inline]
    fn index_mut(&mut self, (i, j): (isize, isize)) -> &mut f64 {
        let k = self.offset(i, j);
        &mut self.data[k]
    }
}

/// Uniform half-gap grid: x ∈ [0, R] with the symmetry plane at x = 0 and
/// the wall at x = R, y ∈ [0, height].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    /// Cell size, equal in both directions.
    pub h: f64,
}

impl Grid {
    pub const MIN_CELLS: usize = 4;

    pub fn new(half_width: f64, height: f64, nx: usize) -> Result<Self> {
        if nx < Self::MIN_CELLS {
            return Err(invalid("n_cells_per_radius", format!("{nx} < {}", Self::MIN_CELLS)));
        }
        let h = half_width / nx as f64;
        let rows = height / h;
        let ny = rows.round();
        if (rows - ny).abs() > 1e-9 * rows || ny < 1.0 {
            return Err(invalid(
                "domain_height",
                format!("{height} m is not a whole number of cells of {h} m"),
            ));
        }
        Ok(Self {
            nx,
            ny: ny as usize,
            h,
        })
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Cell-centred field with one ghost layer on every side.
    pub fn cell_field(&self) -> Array2 {
        Array2::new(-1..self.nx as isize + 1, -1..self.ny as isize + 1)
    }

    /// x-velocity on vertical faces 0..=nx, with ghost rows below and above.
    pub fn u_field(&self) -> Array2 {
        Array2::new(0..self.nx as isize + 1, -1..self.ny as isize + 1)
    }

    /// y-velocity on horizontal faces 0..=ny, with ghost columns and rows.
    pub fn v_field(&self) -> Array2 {
        Array2::new(-1..self.nx as isize + 1, -1..self.ny as isize + 2)
    }

    pub fn x_center(&self, i: isize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    pub fn y_center(&self, j: isize) -> f64 {
        (j as f64 + 0.5) * self.h
    }
}
