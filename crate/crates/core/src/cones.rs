//! Cone blocks, products of cones, and packed symmetric coordinates.
//!
//! Two block kinds are supported: the nonnegative orthant and the cone of
//! real symmetric positive semidefinite matrices. Both are self-dual under
//! the standard inner products, which lets every membership test in the
//! crate run on the same coordinates. Symmetric matrices travel in `svec`
//! form: the upper triangle read row by row with off-diagonal entries
//! scaled by sqrt(2), so that `dot(svec(M), svec(N)) = trace(M N)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense column vector of reals. All cone coordinates, strategies, and
/// program data use this representation.
pub type Point = DVector<f64>;

pub(crate) const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// One factor of a cone product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeBlock {
    /// Nonnegative orthant of the given dimension.
    Orthant(usize),
    /// Positive semidefinite matrices of the given side length, in svec
    /// coordinates of dimension size*(size+1)/2.
    Psd(usize),
}

impl ConeBlock {
    pub fn size(&self) -> usize {
        match *self {
            ConeBlock::Orthant(n) | ConeBlock::Psd(n) => n,
        }
    }

    /// Coordinate dimension of the block.
    pub fn dim(&self) -> usize {
        match *self {
            ConeBlock::Orthant(n) => n,
            ConeBlock::Psd(n) => n * (n + 1) / 2,
        }
    }

    /// Contribution to the barrier degree of the product.
    pub(crate) fn degree(&self) -> usize {
        self.size()
    }

    /// Minimal eigenvalue of a block coordinate vector: the smallest entry
    /// for an orthant block, the smallest eigenvalue of `smat(v)` for a
    /// semidefinite block. Negative exactly when `v` lies outside the block.
    pub fn min_eig(&self, v: &Point) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::dims("cone block coordinates", self.dim(), v.len()));
        }
        match *self {
            ConeBlock::Orthant(_) => Ok(v.min()),
            ConeBlock::Psd(_) => {
                let m = smat(v)?;
                Ok(crate::linalg::min_eigval(&m))
            }
        }
    }
}

/// Ordered product of cone blocks; the coordinate space is the
/// concatenation of the block coordinate spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeProduct {
    blocks: Vec<ConeBlock>,
    total_dim: usize,
}

impl ConeProduct {
    pub fn new(blocks: Vec<ConeBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidCone {
                reason: "cone product must contain at least one block".into(),
            });
        }
        for b in &blocks {
            if b.size() == 0 {
                return Err(Error::InvalidCone {
                    reason: "cone block size must be at least 1".into(),
                });
            }
        }
        let total_dim = blocks.iter().map(ConeBlock::dim).sum();
        Ok(ConeProduct { blocks, total_dim })
    }

    pub fn single(block: ConeBlock) -> Result<Self> {
        ConeProduct::new(vec![block])
    }

    pub fn blocks(&self) -> &[ConeBlock] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Barrier degree: orthant dimensions plus semidefinite side lengths.
    pub fn degree(&self) -> usize {
        self.blocks.iter().map(ConeBlock::degree).sum()
    }

    /// Blocks paired with their coordinate ranges.
    pub fn block_ranges(&self) -> Vec<(ConeBlock, std::ops::Range<usize>)> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut offset = 0;
        for &b in &self.blocks {
            out.push((b, offset..offset + b.dim()));
            offset += b.dim();
        }
        out
    }

    fn check_dim(&self, v: &Point) -> Result<()> {
        if v.len() != self.total_dim {
            return Err(Error::dims("cone coordinates", self.total_dim, v.len()));
        }
        Ok(())
    }

    /// Per-block minimal eigenvalues, in block order.
    pub fn margins(&self, v: &Point) -> Result<Vec<f64>> {
        self.check_dim(v)?;
        self.block_ranges()
            .into_iter()
            .map(|(b, r)| b.min_eig(&v.rows(r.start, r.len()).into_owned()))
            .collect()
    }

    /// Membership test. Each block must satisfy
    /// `min_eig >= -tol * (1 + max-abs of the block coordinates)`.
    pub fn in_cone(&self, v: &Point, tol: f64) -> Result<bool> {
        self.check_dim(v)?;
        for (b, r) in self.block_ranges() {
            let blk = v.rows(r.start, r.len()).into_owned();
            let scale = 1.0 + blk.amax();
            if b.min_eig(&blk)? < -tol * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Interior test; strict counterpart of [`ConeProduct::in_cone`].
    pub fn in_interior(&self, v: &Point, tol: f64) -> Result<bool> {
        self.check_dim(v)?;
        for (b, r) in self.block_ranges() {
            let blk = v.rows(r.start, r.len()).into_owned();
            let scale = 1.0 + blk.amax();
            if b.min_eig(&blk)? <= tol * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical interior point: all-ones on orthant blocks, svec of the
    /// identity on semidefinite blocks.
    pub fn canonical_interior(&self) -> Point {
        let mut v = Point::zeros(self.total_dim);
        for (b, r) in self.block_ranges() {
            match b {
                ConeBlock::Orthant(_) => {
                    for i in r {
                        v[i] = 1.0;
                    }
                }
                ConeBlock::Psd(n) => {
                    let eye = svec(&DMatrix::identity(n, n)).expect("identity is symmetric");
                    v.rows_mut(r.start, r.len()).copy_from(&eye);
                }
            }
        }
        v
    }
}

/// Side length `k` such that `k (k + 1) / 2 == len`.
pub(crate) fn side_of_packed_len(len: usize) -> Result<usize> {
    let mut k = 0usize;
    let mut acc = 0usize;
    while acc < len {
        k += 1;
        acc += k;
    }
    if acc == len && k > 0 {
        Ok(k)
    } else {
        Err(Error::NotTriangularLength { len })
    }
}

/// Packs a symmetric matrix into svec coordinates: upper triangle row by
/// row, off-diagonal entries scaled by sqrt(2). Rejects matrices that are
/// not symmetric to within 1e-12 relative to their largest entry.
pub fn svec(m: &DMatrix<f64>) -> Result<Point> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::dims("square matrix", n, m.ncols()));
    }
    let tol = 1e-12 * (1.0 + m.amax());
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = (m[(i, j)] - m[(j, i)]).abs();
            if delta > tol {
                return Err(Error::NotSymmetric { i, j, delta });
            }
        }
    }
    let mut v = Point::zeros(n * (n + 1) / 2);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            v[k] = if i == j {
                m[(i, j)]
            } else {
                // Average the two triangles so the packing is exact for
                // inputs that are symmetric only to within the tolerance.
                SQRT_2 * 0.5 * (m[(i, j)] + m[(j, i)])
            };
            k += 1;
        }
    }
    Ok(v)
}

/// Inverse of [`svec`]: unpacks coordinates into the symmetric matrix.
pub fn smat(v: &Point) -> Result<DMatrix<f64>> {
    let n = side_of_packed_len(v.len())?;
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let val = if i == j { v[k] } else { v[k] / SQRT_2 };
            m[(i, j)] = val;
            m[(j, i)] = val;
            k += 1;
        }
    }
    Ok(m)
}
