//! Rational lattices `Λ = A·Z^d + β`: duality, determinant, point
//! enumeration and fundamental-domain projection.

use num::{Signed, Zero};

use crate::error::{Result, TilingError};
use crate::matrix::Matrix;
use crate::ratio::{fract, norm_inf, to_f64, vec_add, vec_sub, zero_vec, Rat, RatVec};

/// Default cap on enumerated points, protecting CLI users from blowup.
pub const DEFAULT_ENUM_CAP: usize = 10_000_000;

/// A (possibly translated) full-rank rational lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: Matrix,
    offset: RatVec,
}

/// A finite list of points clipped to a window, in deterministic order.
#[derive(Debug, Clone)]
pub struct PointPatch {
    pub dim: usize,
    pub points: Vec<RatVec>,
    /// Bounding window as (center, ∞-norm radius).
    pub center: RatVec,
    pub radius: Rat,
}

impl Lattice {
    pub fn new(basis: Matrix) -> Result<Self> {
        let offset = zero_vec(basis.dim());
        Self::with_offset(basis, offset)
    }

    pub fn with_offset(basis: Matrix, offset: RatVec) -> Result<Self> {
        if basis.determinant().is_zero() {
            return Err(TilingError::SingularLattice);
        }
        if offset.len() != basis.dim() {
            return Err(TilingError::Domain("offset dimension mismatch".into()));
        }
        Ok(Lattice { basis, offset })
    }

    pub fn integer(dim: usize) -> Self {
        Lattice {
            basis: Matrix::identity(dim),
            offset: zero_vec(dim),
        }
    }

    pub fn diagonal(entries: &[Rat]) -> Result<Self> {
        Self::new(Matrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    pub fn has_offset(&self) -> bool {
        self.offset.iter().any(|x| !x.is_zero())
    }

    pub fn determinant(&self) -> Rat {
        self.basis.determinant()
    }

    /// Density of the lattice: `1 / |det|`.
    pub fn density(&self) -> Rat {
        self.determinant().abs().recip()
    }

    /// The dual lattice `Λ* = A^{-⊤}·Z^d`. Defined only for true lattices.
    pub fn dual(&self) -> Result<Lattice> {
        if self.has_offset() {
            return Err(TilingError::NonZeroOffset);
        }
        let basis = self.basis.inverse()?.transpose();
        Ok(Lattice {
            basis,
            offset: zero_vec(self.dim()),
        })
    }

    /// Exact membership test via linear solve.
    pub fn contains(&self, x: &[Rat]) -> bool {
        let shifted = vec_sub(x, &self.offset);
        match self.basis.solve(&shifted) {
            Ok(coeffs) => coeffs.iter().all(crate::ratio::is_integer),
            Err(_) => false,
        }
    }

    /// All lattice points with `‖λ − center‖∞ ≤ radius`, in lexicographic
    /// order, each exactly once.
    pub fn enumerate_points(&self, center: &[Rat], radius: &Rat) -> Result<PointPatch> {
        self.enumerate_points_capped(center, radius, DEFAULT_ENUM_CAP)
    }

    pub fn enumerate_points_capped(
        &self,
        center: &[Rat],
        radius: &Rat,
        cap: usize,
    ) -> Result<PointPatch> {
        if radius.is_negative() {
            return Err(TilingError::Precondition("radius must be >= 0".into()));
        }
        let d = self.dim();
        let inv = self.basis.inverse()?;
        // Preimage of the box is a parallelepiped; its integer bounding box
        // is spanned by the images of the 2^d corners.
        let mut lo = vec![Rat::zero(); d];
        let mut hi = vec![Rat::zero(); d];
        let mut first = true;
        for mask in 0u32..(1 << d) {
            let corner: RatVec = (0..d)
                .map(|j| {
                    let s = if mask & (1 << j) != 0 {
                        radius.clone()
                    } else {
                        -radius.clone()
                    };
                    &center[j] + s - &self.offset[j]
                })
                .collect();
            let pre = inv.mul_vec(&corner);
            for j in 0..d {
                if first || pre[j] < lo[j] {
                    lo[j] = pre[j].clone();
                }
                if first || pre[j] > hi[j] {
                    hi[j] = pre[j].clone();
                }
            }
            first = false;
        }
        let lo: Vec<i64> = lo.iter().map(|x| to_f64(&x.ceil()) as i64).collect();
        let hi: Vec<i64> = hi.iter().map(|x| to_f64(&x.floor()) as i64).collect();
        let mut count: usize = 1;
        for j in 0..d {
            if hi[j] < lo[j] {
                count = 0;
                break;
            }
            count = count.saturating_mul((hi[j] - lo[j] + 1) as usize);
        }
        if count > cap {
            return Err(TilingError::CapacityExceeded { cap });
        }

        let mut points: Vec<RatVec> = Vec::new();
        let mut n: Vec<i64> = lo.clone();
        if count > 0 {
            'outer: loop {
                let coeffs: RatVec = n.iter().map(|&c| Rat::from_integer(c.into())).collect();
                let p = vec_add(&self.basis.mul_vec(&coeffs), &self.offset);
                if norm_inf(&vec_sub(&p, center)) <= *radius {
                    points.push(p);
                }
                let mut k = d;
                loop {
                    if k == 0 {
                        break 'outer;
                    }
                    k -= 1;
                    if n[k] < hi[k] {
                        n[k] += 1;
                        for i in k + 1..d {
                            n[i] = lo[i];
                        }
                        break;
                    }
                }
            }
        }
        points.sort();
        Ok(PointPatch {
            dim: d,
            points,
            center: center.to_vec(),
            radius: radius.clone(),
        })
    }

    /// Maps `x` into the fundamental domain `A·[0,1)^d + β` so that the
    /// difference `x − result` lies in the lattice. Idempotent.
    pub fn project_to_fundamental(&self, x: &[Rat]) -> RatVec {
        let shifted = vec_sub(x, &self.offset);
        let coeffs = self
            .basis
            .solve(&shifted)
            .expect("lattice basis is invertible by construction");
        let fractional: RatVec = coeffs.iter().map(fract).collect();
        vec_add(&self.basis.mul_vec(&fractional), &self.offset)
    }
}

impl PointPatch {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Minimal pairwise Euclidean distance; 0 on duplicates, +∞ when fewer
    /// than two points.
    pub fn separation(&self) -> f64 {
        let pts: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|p| crate::ratio::vec_to_f64(p))
            .collect();
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d2: f64 = pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                best = best.min(d2.sqrt());
            }
        }
        best
    }
}
