//! Tiles that are finite unions of half-open axis-aligned rational boxes.
//!
//! The half-open convention `[a, a+w)` makes box boundaries measure-zero by
//! construction, so exact coverage counts at generic points are well defined.

use num::{Signed, Zero};

use crate::error::{Result, TilingError};
use crate::ratio::{vec_add, Rat, RatVec};

/// One weighted half-open box `[corner, corner + widths)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBox {
    pub corner: RatVec,
    pub widths: RatVec,
    pub weight: Rat,
}

impl WeightedBox {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.corner
            .iter()
            .zip(&self.widths)
            .zip(x)
            .all(|((a, w), xi)| *xi >= *a && *xi < a + w)
    }

    pub fn volume(&self) -> Rat {
        self.widths.iter().product()
    }

    fn overlaps(&self, other: &WeightedBox) -> bool {
        self.corner
            .iter()
            .zip(&self.widths)
            .zip(other.corner.iter().zip(&other.widths))
            .all(|((a, w), (b, v))| *a < b + v && *b < a + w)
    }
}

/// A finite union of weighted half-open boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxUnionTile {
    dim: usize,
    boxes: Vec<WeightedBox>,
}

impl BoxUnionTile {
    /// Builds a tile from pairwise-disjoint boxes (checked exactly) with
    /// positive total measure.
    pub fn new(boxes: Vec<WeightedBox>) -> Result<Self> {
        let tile = Self::new_weighted(boxes)?;
        for i in 0..tile.boxes.len() {
            for j in i + 1..tile.boxes.len() {
                if tile.boxes[i].overlaps(&tile.boxes[j]) {
                    return Err(TilingError::Domain(format!("boxes {i} and {j} overlap")));
                }
            }
        }
        Ok(tile)
    }

    /// Builds a signed combination of boxes without the disjointness check,
    /// for difference representations such as cube-minus-notch.
    pub fn new_weighted(boxes: Vec<WeightedBox>) -> Result<Self> {
        let dim = boxes
            .first()
            .map(|b| b.corner.len())
            .ok_or_else(|| TilingError::Domain("tile needs at least one box".into()))?;
        for b in &boxes {
            if b.corner.len() != dim || b.widths.len() != dim {
                return Err(TilingError::Domain("box dimension mismatch".into()));
            }
            if b.widths.iter().any(|w| !w.is_positive()) {
                return Err(TilingError::Domain("box widths must be positive".into()));
            }
        }
        let tile = BoxUnionTile { dim, boxes };
        if !tile.measure().is_positive() {
            return Err(TilingError::Domain(
                "tile must have positive measure".into(),
            ));
        }
        Ok(tile)
    }

    /// The half-open cube `[lo, lo + side)^d` with weight 1.
    pub fn cube(dim: usize, lo: Rat, side: Rat) -> Self {
        BoxUnionTile {
            dim,
            boxes: vec![WeightedBox {
                corner: vec![lo; dim],
                widths: vec![side; dim],
                weight: Rat::from_integer(1.into()),
            }],
        }
    }

    /// The unit cube `[0,1)^d`.
    pub fn unit_cube(dim: usize) -> Self {
        Self::cube(dim, Rat::zero(), Rat::from_integer(1.into()))
    }

    /// The centered unit cube `[-1/2, 1/2)^d`.
    pub fn unit_cube_centered(dim: usize) -> Self {
        Self::cube(dim, crate::ratio::rat(-1, 2), Rat::from_integer(1.into()))
    }

    /// 1D union of intervals `[a, b)`.
    pub fn intervals(spans: &[(Rat, Rat)]) -> Result<Self> {
        let boxes = spans
            .iter()
            .map(|(a, b)| WeightedBox {
                corner: vec![a.clone()],
                widths: vec![b - a],
                weight: Rat::from_integer(1.into()),
            })
            .collect();
        Self::new(boxes)
    }

    pub fn boxes(&self) -> &[WeightedBox] {
        &self.boxes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total measure `Σ weight · ∏ widths`, exact.
    pub fn measure(&self) -> Rat {
        self.boxes.iter().map(|b| &b.weight * b.volume()).sum()
    }

    /// Weighted coverage value at a point (exact, half-open convention).
    pub fn value_at(&self, x: &[Rat]) -> Rat {
        self.boxes
            .iter()
            .filter(|b| b.contains(x))
            .map(|b| b.weight.clone())
            .sum()
    }

    pub fn translate(&self, v: &[Rat]) -> Self {
        BoxUnionTile {
            dim: self.dim,
            boxes: self
                .boxes
                .iter()
                .map(|b| WeightedBox {
                    corner: vec_add(&b.corner, v),
                    widths: b.widths.clone(),
                    weight: b.weight.clone(),
                })
                .collect(),
        }
    }

    /// Smallest axis-aligned box containing every member box: `(lo, hi)`.
    pub fn bounding_box(&self) -> (RatVec, RatVec) {
        let mut lo = self.boxes[0].corner.clone();
        let mut hi: RatVec = self.boxes[0]
            .corner
            .iter()
            .zip(&self.boxes[0].widths)
            .map(|(a, w)| a + w)
            .collect();
        for b in &self.boxes[1..] {
            for j in 0..self.dim {
                let top = &b.corner[j] + &b.widths[j];
                if b.corner[j] < lo[j] {
                    lo[j] = b.corner[j].clone();
                }
                if top > hi[j] {
                    hi[j] = top;
                }
            }
        }
        (lo, hi)
    }

    /// ∞-norm reach of the tile from the origin: max over boxes and axes of
    /// `max(|corner|, |corner+width|)`.
    pub fn reach(&self) -> Rat {
        let (lo, hi) = self.bounding_box();
        lo.iter().chain(hi.iter()).map(|x| x.abs()).max().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};

    #[test]
    fn cube_measure_and_membership() {
        let q = BoxUnionTile::unit_cube(3);
        assert_eq!(q.measure(), rat_int(1));
        assert_eq!(q.value_at(&[rat(1, 2), rat(1, 2), rat(1, 2)]), rat_int(1));
        // half-open: the far corner is outside
        assert_eq!(
            q.value_at(&[rat_int(1), rat_int(0), rat_int(0)]),
            rat_int(0)
        );
        assert_eq!(
            q.value_at(&[rat_int(0), rat_int(0), rat_int(0)]),
            rat_int(1)
        );
    }

    #[test]
    fn overlap_rejected() {
        let b = |c: i64| WeightedBox {
            corner: vec![rat(c, 2)],
            widths: vec![rat_int(1)],
            weight: rat_int(1),
        };
        assert!(BoxUnionTile::new(vec![b(0), b(1)]).is_err());
        assert!(BoxUnionTile::new(vec![b(0), b(2)]).is_ok());
    }

    #[test]
    fn signed_difference_measure() {
        // Q − R, the notched square with δ = (1/2, 1/3): measure 5/6.
        let tile = BoxUnionTile::new_weighted(vec![
            WeightedBox {
                corner: vec![rat(-1, 2), rat(-1, 2)],
                widths: vec![rat_int(1), rat_int(1)],
                weight: rat_int(1),
            },
            WeightedBox {
                corner: vec![rat_int(0), rat(1, 6)],
                widths: vec![rat(1, 2), rat(1, 3)],
                weight: rat_int(-1),
            },
        ])
        .unwrap();
        assert_eq!(tile.measure(), rat(5, 6));
    }
}
