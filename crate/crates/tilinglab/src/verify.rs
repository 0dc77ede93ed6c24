//! The two independent tiling verdicts — the Fourier lattice criterion and
//! an exact direct-space coverage oracle — plus packing checks, density and
//! separation helpers, and sampled verification for non-periodic sets.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Result, TilingError};
use crate::fourier::ft_box_union;
use crate::lattice::{Lattice, PointPatch};
use crate::ratio::{rat_int, to_f64, vec_sub, vec_to_f64, Rat, RatVec};
use crate::tile::BoxUnionTile;

/// Cap on arrangement cells in the exact oracle and on 1D period cells.
pub const DEFAULT_CELL_CAP: usize = 1_000_000;

/// The set of translations a tile is tested against.
#[derive(Debug, Clone)]
pub enum TranslationSet {
    Lattice(Lattice),
    /// Finitely many lattices, each possibly carrying an offset.
    LatticeUnion(Vec<Lattice>),
    /// 1D: union of complete arithmetic progressions `α_j Z + β_j`, α_j > 0.
    ApUnion(Vec<(Rat, Rat)>),
    /// An explicit finite list of translates.
    Patch(PointPatch),
    /// 2D: columns of the unit-square tiling, column `m` shifted vertically
    /// by `s_m`; translates are `(m, n + s_m)` for all listed `m` and n ∈ Z.
    ShiftedColumns(BTreeMap<i64, Rat>),
}

/// Outcome of a tiling / packing verification.
#[derive(Debug, Clone)]
pub struct TilingReport {
    pub pass: bool,
    /// Level as a float, always present.
    pub level: f64,
    /// Level as an exact rational when the verdict engine is exact.
    pub level_exact: Option<Rat>,
    pub exact: bool,
    /// 0 when exact; otherwise the worst deviation seen.
    pub max_deviation: f64,
    /// Point (or cell midpoint, or dual frequency) witnessing a failure.
    pub witness: Option<Vec<f64>>,
    pub samples_or_cells: usize,
}

impl TranslationSet {
    pub fn dim(&self) -> usize {
        match self {
            TranslationSet::Lattice(l) => l.dim(),
            TranslationSet::LatticeUnion(ls) => ls.first().map_or(0, |l| l.dim()),
            TranslationSet::ApUnion(_) => 1,
            TranslationSet::Patch(p) => p.dim,
            TranslationSet::ShiftedColumns(_) => 2,
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(
            self,
            TranslationSet::Lattice(_)
                | TranslationSet::LatticeUnion(_)
                | TranslationSet::ApUnion(_)
        )
    }

    /// All translates λ with `lo_j ≤ λ_j ≤ hi_j`.
    pub fn enumerate_window(&self, lo: &[Rat], hi: &[Rat]) -> Result<Vec<RatVec>> {
        let center: RatVec = lo
            .iter()
            .zip(hi)
            .map(|(l, h)| (l + h) / rat_int(2))
            .collect();
        let radius = lo
            .iter()
            .zip(hi)
            .map(|(l, h)| (h - l) / rat_int(2))
            .max()
            .ok_or_else(|| TilingError::Domain("empty window".into()))?;
        let in_box = |p: &RatVec| {
            p.iter().zip(lo).all(|(x, l)| x >= l) && p.iter().zip(hi).all(|(x, h)| x <= h)
        };
        let mut out: Vec<RatVec> = match self {
            TranslationSet::Lattice(l) => l.enumerate_points(&center, &radius)?.points,
            TranslationSet::LatticeUnion(ls) => {
                let mut all = Vec::new();
                for l in ls {
                    all.extend(l.enumerate_points(&center, &radius)?.points);
                }
                all
            }
            TranslationSet::ApUnion(aps) => {
                let mut all = Vec::new();
                for (alpha, beta) in aps {
                    if !alpha.is_positive() {
                        return Err(TilingError::Precondition(
                            "arithmetic progression step must be positive".into(),
                        ));
                    }
                    let k_lo = ((&lo[0] - beta) / alpha).ceil();
                    let k_hi = ((&hi[0] - beta) / alpha).floor();
                    let mut k = k_lo;
                    while k <= k_hi {
                        all.push(vec![alpha * &k + beta]);
                        k += Rat::one();
                    }
                }
                all
            }
            TranslationSet::Patch(p) => p.points.clone(),
            TranslationSet::ShiftedColumns(cols) => {
                let mut all = Vec::new();
                let m_lo = to_f64(&lo[0].ceil()) as i64;
                let m_hi = to_f64(&hi[0].floor()) as i64;
                for m in m_lo..=m_hi {
                    let s = cols.get(&m).ok_or_else(|| {
                        TilingError::Precondition(format!(
                            "shifted-column map does not cover column {m}"
                        ))
                    })?;
                    let n_lo = (&lo[1] - s).ceil();
                    let n_hi = (&hi[1] - s).floor();
                    let mut n = n_lo;
                    while n <= n_hi {
                        all.push(vec![rat_int(m), &n + s]);
                        n += Rat::one();
                    }
                }
                all
            }
        };
        out.retain(|p| in_box(p));
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Smallest `c > 0` with `c·Z^d + T = T`, for the periodic variants.
    fn period(&self) -> Result<Rat> {
        match self {
            TranslationSet::Lattice(l) => lattice_period(l),
            TranslationSet::LatticeUnion(ls) => {
                let mut c = Rat::one();
                for l in ls {
                    c = rat_lcm(&c, &lattice_period(l)?);
                }
                Ok(c)
            }
            TranslationSet::ApUnion(aps) => {
                let mut c = None;
                for (alpha, _) in aps {
                    if !alpha.is_positive() {
                        return Err(TilingError::Precondition(
                            "arithmetic progression step must be positive".into(),
                        ));
                    }
                    c = Some(match c {
                        None => alpha.clone(),
                        Some(prev) => rat_lcm(&prev, alpha),
                    });
                }
                c.ok_or_else(|| TilingError::Domain("empty progression union".into()))
            }
            _ => Err(TilingError::Domain(
                "translation set is not a periodic variant".into(),
            )),
        }
    }
}

/// lcm of two positive rationals: lcm of numerators / gcd of denominators.
fn rat_lcm(a: &Rat, b: &Rat) -> Rat {
    Rat::new(a.numer().lcm(b.numer()), a.denom().gcd(b.denom()))
}

/// Smallest `c` with `cZ^d ⊆ Λ`: the lcm of the denominators of `A^{-1}`.
fn lattice_period(l: &Lattice) -> Result<Rat> {
    let inv = l.basis().inverse()?;
    let mut c = BigInt::one();
    for i in 0..l.dim() {
        for j in 0..l.dim() {
            c = c.lcm(inv.entry(i, j).denom());
        }
        // an offset must itself be commensurable for periodicity
        c = c.lcm(l.offset()[i].denom());
    }
    Ok(Rat::from_integer(c))
}

/// Fourier criterion: the tile tiles by Λ iff its transform vanishes on
/// `Λ* ∖ {0}`. Checked at every dual point with `0 < ‖ξ‖∞ ≤ radius`.
pub fn verify_lattice_tiling_fourier(
    tile: &BoxUnionTile,
    lattice: &Lattice,
    radius: &Rat,
    tol: f64,
) -> Result<TilingReport> {
    if lattice.has_offset() {
        return Err(TilingError::NonZeroOffset);
    }
    if !radius.is_positive() {
        return Err(TilingError::Precondition("radius must be positive".into()));
    }
    let dual = lattice.dual()?;
    let d = lattice.dim();
    let patch = dual.enumerate_points(&vec![Rat::zero(); d], radius)?;
    let mut worst = 0.0f64;
    let mut witness: Option<Vec<f64>> = None;
    let mut checked = 0usize;
    for xi in &patch.points {
        if xi.iter().all(Rat::is_zero) {
            continue;
        }
        checked += 1;
        let xi_f = vec_to_f64(xi);
        let v = ft_box_union(tile, &xi_f).norm();
        if v > worst {
            worst = v;
            if v > tol {
                witness = Some(xi_f);
            }
        }
    }
    let level = tile.measure() * lattice.density();
    Ok(TilingReport {
        pass: worst <= tol,
        level: to_f64(&level),
        level_exact: Some(level),
        exact: false,
        max_deviation: worst,
        witness,
        samples_or_cells: checked,
    })
}

/// Coverage values of `Σ_λ tile(x − λ)` on the open cells of a scan box
/// containing a representative of every coset of the translation group,
/// cut by every translated box face. Returns the cell midpoints with
/// their exact coverage.
///
/// For a single lattice the scan box is the bounding box of one
/// fundamental domain (far smaller than a cubical period cell when the
/// lattice has large denominators); for the other periodic variants it is
/// `[0, c)^d` with `c` the common period.
fn period_cell_coverage(tile: &BoxUnionTile, set: &TranslationSet) -> Result<Vec<(RatVec, Rat)>> {
    let d = tile.dim();
    if set.dim() != d {
        return Err(TilingError::Domain(
            "tile/translation dimension mismatch".into(),
        ));
    }
    let (lo, hi) = match set {
        TranslationSet::Lattice(l) => {
            // bounding box of A·[0,1)^d; the offset shifts cosets, not
            // which cosets are represented
            let mut lo = crate::ratio::zero_vec(d);
            let mut hi = crate::ratio::zero_vec(d);
            for i in 0..d {
                for j in 0..d {
                    let g = l.basis().entry(i, j);
                    if g.is_negative() {
                        lo[i] += g;
                    } else {
                        hi[i] += g;
                    }
                }
            }
            (lo, hi)
        }
        _ => {
            let c = set.period()?;
            (crate::ratio::zero_vec(d), vec![c; d])
        }
    };
    let (bb_lo, bb_hi) = tile.bounding_box();
    // λ + supp(tile) meets [lo, hi] iff λ_j ∈ [lo_j − bb_hi_j, hi_j − bb_lo_j]
    let win_lo: RatVec = lo.iter().zip(&bb_hi).map(|(l, x)| l - x).collect();
    let win_hi: RatVec = hi.iter().zip(&bb_lo).map(|(h, x)| h - x).collect();
    let translates = set.enumerate_window(&win_lo, &win_hi)?;
    if translates.is_empty() {
        return Err(TilingError::Domain(
            "no translates meet the scan box".into(),
        ));
    }
    // pairwise (translate, box) intervals per axis, plus their weight
    struct Pair {
        spans: Vec<(Rat, Rat)>,
        weight_idx: usize,
    }
    let mut weights: Vec<Rat> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for lam in &translates {
        for b in tile.boxes() {
            let spans: Vec<(Rat, Rat)> = (0..d)
                .map(|j| {
                    let a = &lam[j] + &b.corner[j];
                    let t = &a + &b.widths[j];
                    (a, t)
                })
                .collect();
            let weight_idx = match weights.iter().position(|w| *w == b.weight) {
                Some(i) => i,
                None => {
                    weights.push(b.weight.clone());
                    weights.len() - 1
                }
            };
            pairs.push(Pair { spans, weight_idx });
        }
    }
    // per-axis cut coordinates clipped to the scan box
    let mut cuts: Vec<Vec<Rat>> = vec![Vec::new(); d];
    for p in &pairs {
        for j in 0..d {
            let (a, t) = &p.spans[j];
            if *a > lo[j] && *a < hi[j] {
                cuts[j].push(a.clone());
            }
            if *t > lo[j] && *t < hi[j] {
                cuts[j].push(t.clone());
            }
        }
    }
    let mut n_cells = 1usize;
    for j in 0..d {
        cuts[j].push(lo[j].clone());
        cuts[j].push(hi[j].clone());
        cuts[j].sort();
        cuts[j].dedup();
        n_cells = n_cells.saturating_mul(cuts[j].len() - 1);
        if n_cells > DEFAULT_CELL_CAP {
            return Err(TilingError::CapacityExceeded {
                cap: DEFAULT_CELL_CAP,
            });
        }
    }
    // midpoints per axis
    let mids: Vec<Vec<Rat>> = cuts
        .iter()
        .map(|cs| {
            cs.windows(2)
                .map(|w| (&w[0] + &w[1]) / rat_int(2))
                .collect()
        })
        .collect();
    // per-axis membership tables: pair × midpoint, decided once with
    // exact comparisons so the cell sweep below is pure boolean work
    let member: Vec<Vec<Vec<bool>>> = (0..d)
        .map(|j| {
            pairs
                .iter()
                .map(|p| {
                    let (a, t) = &p.spans[j];
                    mids[j].iter().map(|m| m >= a && m < t).collect()
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n_cells);
    let mut idx = vec![0usize; d];
    let mut counts = vec![0i64; weights.len()];
    loop {
        for c in counts.iter_mut() {
            *c = 0;
        }
        for (p, pair) in pairs.iter().enumerate() {
            if (0..d).all(|j| member[j][p][idx[j]]) {
                counts[pair.weight_idx] += 1;
            }
        }
        let mut cover = Rat::zero();
        for (w, &n) in weights.iter().zip(&counts) {
            if n != 0 {
                cover += w * Rat::from_integer(n.into());
            }
        }
        let x: RatVec = (0..d).map(|j| mids[j][idx[j]].clone()).collect();
        out.push((x, cover));
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if idx[k] + 1 < mids[k].len() {
                idx[k] += 1;
                for i in k + 1..d {
                    idx[i] = 0;
                }
                break;
            }
        }
    }
}

/// Exact tiling verdict over one period cell of a periodic translation set.
pub fn verify_tiling_exact(tile: &BoxUnionTile, set: &TranslationSet) -> Result<TilingReport> {
    if !set.is_periodic() {
        return Err(TilingError::Domain(
            "exact oracle needs a periodic translation set; use the sampled verifier".into(),
        ));
    }
    let cells = period_cell_coverage(tile, set)?;
    let level = cells[0].1.clone();
    let witness = cells.iter().find(|(_, v)| *v != level);
    Ok(TilingReport {
        pass: witness.is_none(),
        level: to_f64(&level),
        level_exact: Some(level),
        exact: true,
        max_deviation: 0.0,
        witness: witness.map(|(x, _)| vec_to_f64(x)),
        samples_or_cells: cells.len(),
    })
}

/// Exact packing verdict: coverage must stay ≤ `level` everywhere
/// (default: the essential sup of the tile itself). Reports the max
/// coverage seen as the level.
pub fn verify_packing_exact(
    tile: &BoxUnionTile,
    set: &TranslationSet,
    level: Option<Rat>,
) -> Result<TilingReport> {
    let bound = match level {
        Some(l) => l,
        None => tile_ess_sup(tile)?,
    };
    let cells = period_cell_coverage(tile, set)?;
    let n = cells.len();
    let mut max_cover = Rat::zero();
    let mut witness = None;
    for (x, v) in cells {
        if v > max_cover {
            max_cover = v.clone();
        }
        if v > bound && witness.is_none() {
            witness = Some(vec_to_f64(&x));
        }
    }
    Ok(TilingReport {
        pass: witness.is_none(),
        level: to_f64(&max_cover),
        level_exact: Some(max_cover),
        exact: true,
        max_deviation: 0.0,
        witness,
        samples_or_cells: n,
    })
}

/// Essential sup of a box-union tile (max over the cells of its own
/// face arrangement — exact for signed combinations too).
pub fn tile_ess_sup(tile: &BoxUnionTile) -> Result<Rat> {
    let d = tile.dim();
    let mut cuts: Vec<Vec<Rat>> = vec![Vec::new(); d];
    for b in tile.boxes() {
        for j in 0..d {
            cuts[j].push(b.corner[j].clone());
            cuts[j].push(&b.corner[j] + &b.widths[j]);
        }
    }
    let mut n_cells = 1usize;
    for cs in cuts.iter_mut() {
        cs.sort();
        cs.dedup();
        n_cells = n_cells.saturating_mul(cs.len().saturating_sub(1));
        if n_cells > DEFAULT_CELL_CAP {
            return Err(TilingError::CapacityExceeded {
                cap: DEFAULT_CELL_CAP,
            });
        }
    }
    let mids: Vec<Vec<Rat>> = cuts
        .iter()
        .map(|cs| {
            cs.windows(2)
                .map(|w| (&w[0] + &w[1]) / rat_int(2))
                .collect()
        })
        .collect();
    let mut best = Rat::zero();
    let mut idx = vec![0usize; d];
    loop {
        let x: RatVec = (0..d).map(|j| mids[j][idx[j]].clone()).collect();
        let v = tile.value_at(&x);
        if v > best {
            best = v;
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            if idx[k] + 1 < mids[k].len() {
                idx[k] += 1;
                for i in k + 1..d {
                    idx[i] = 0;
                }
                break;
            }
        }
    }
}

/// Deterministic low-discrepancy rational points in a box: Halton bases
/// 2, 3, 5, 7, … offset by the seed. Exactly rational, so coverage counts
/// evaluated at these points are exact.
pub fn halton_rationals(lo: &[Rat], hi: &[Rat], samples: usize, seed: u64) -> Vec<RatVec> {
    const BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];
    let d = lo.len();
    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let n = seed + 1 + s as u64;
        let mut p = Vec::with_capacity(d);
        for j in 0..d {
            let base = BASES[j % BASES.len()];
            // radical inverse of n in the base, as an exact rational
            let mut num = BigInt::zero();
            let mut den = BigInt::one();
            let mut k = n;
            while k > 0 {
                num = num * BigInt::from(base) + BigInt::from(k % base);
                den *= BigInt::from(base);
                k /= base;
            }
            let u = Rat::new(num, den);
            p.push(&lo[j] + (&hi[j] - &lo[j]) * u);
        }
        out.push(p);
    }
    out
}

/// Sampled tiling verdict: exact rational coverage at quasi-random points,
/// compared against the modal coverage value.
pub fn verify_tiling_sampled(
    tile: &BoxUnionTile,
    set: &TranslationSet,
    window_lo: &[Rat],
    window_hi: &[Rat],
    samples: usize,
    seed: u64,
) -> Result<TilingReport> {
    let coverages = sampled_coverage(tile, set, window_lo, window_hi, samples, seed)?;
    // modal level: most frequent exact value
    let mut counts: BTreeMap<Rat, usize> = BTreeMap::new();
    for (_, v) in &coverages {
        *counts.entry(v.clone()).or_insert(0) += 1;
    }
    let modal = counts
        .iter()
        .max_by_key(|(_, &n)| n)
        .map(|(v, _)| v.clone())
        .ok_or_else(|| TilingError::Domain("no samples".into()))?;
    let mut max_dev = 0.0f64;
    let mut witness = None;
    for (x, v) in &coverages {
        let dev = to_f64(&(v - &modal)).abs();
        if dev > max_dev {
            max_dev = dev;
            witness = Some(vec_to_f64(x));
        }
    }
    Ok(TilingReport {
        pass: max_dev == 0.0,
        level: to_f64(&modal),
        level_exact: Some(modal),
        exact: false,
        max_deviation: max_dev,
        witness,
        samples_or_cells: coverages.len(),
    })
}

/// Sampled packing verdict: coverage must stay ≤ `level` at every sample.
pub fn verify_packing_sampled(
    tile: &BoxUnionTile,
    set: &TranslationSet,
    window_lo: &[Rat],
    window_hi: &[Rat],
    samples: usize,
    seed: u64,
    level: Option<Rat>,
) -> Result<TilingReport> {
    let bound = match level {
        Some(l) => l,
        None => tile_ess_sup(tile)?,
    };
    let coverages = sampled_coverage(tile, set, window_lo, window_hi, samples, seed)?;
    let mut max_cover = Rat::zero();
    let mut witness = None;
    for (x, v) in &coverages {
        if *v > max_cover {
            max_cover = v.clone();
        }
        if *v > bound && witness.is_none() {
            witness = Some(vec_to_f64(x));
        }
    }
    Ok(TilingReport {
        pass: witness.is_none(),
        level: to_f64(&max_cover),
        level_exact: Some(max_cover),
        exact: false,
        max_deviation: 0.0,
        witness,
        samples_or_cells: coverages.len(),
    })
}

fn sampled_coverage(
    tile: &BoxUnionTile,
    set: &TranslationSet,
    window_lo: &[Rat],
    window_hi: &[Rat],
    samples: usize,
    seed: u64,
) -> Result<Vec<(RatVec, Rat)>> {
    if samples == 0 {
        return Err(TilingError::Precondition("samples must be positive".into()));
    }
    let (bb_lo, bb_hi) = tile.bounding_box();
    let win_lo: RatVec = window_lo.iter().zip(&bb_hi).map(|(l, h)| l - h).collect();
    let win_hi: RatVec = window_hi.iter().zip(&bb_lo).map(|(h, l)| h - l).collect();
    let translates = set.enumerate_window(&win_lo, &win_hi)?;
    if translates.is_empty() {
        return Err(TilingError::Domain("no translates meet the window".into()));
    }
    let pts = halton_rationals(window_lo, window_hi, samples, seed);
    Ok(pts
        .into_iter()
        .map(|x| {
            let mut v = Rat::zero();
            for lam in &translates {
                v += tile.value_at(&vec_sub(&x, lam));
            }
            (x, v)
        })
        .collect())
}

/// Density of a periodic translation set: points per unit volume.
pub fn density_of(set: &TranslationSet) -> Result<Rat> {
    match set {
        TranslationSet::Lattice(l) => Ok(l.density()),
        TranslationSet::LatticeUnion(ls) => Ok(ls.iter().map(Lattice::density).sum()),
        TranslationSet::ApUnion(aps) => {
            let mut d = Rat::zero();
            for (alpha, _) in aps {
                if !alpha.is_positive() {
                    return Err(TilingError::Precondition(
                        "arithmetic progression step must be positive".into(),
                    ));
                }
                d += alpha.recip();
            }
            Ok(d)
        }
        _ => Err(TilingError::Domain(
            "density requires a periodic variant".into(),
        )),
    }
}

/// Minimal pairwise Euclidean distance of a point patch.
pub fn separation_of(patch: &PointPatch) -> f64 {
    patch.separation()
}

/// Convenience: the `ap_union` step sizes must tile at level
/// `Σ 1/α_j · measure`, so for 1D instances the two densities agree.
pub fn expected_level(tile: &BoxUnionTile, set: &TranslationSet) -> Result<Rat> {
    Ok(tile.measure() * density_of(set)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;
    use crate::tile::WeightedBox;

    fn z(d: usize) -> TranslationSet {
        TranslationSet::Lattice(Lattice::integer(d))
    }

    #[test]
    fn cube_tiles_by_integers_fourier() {
        let tile = BoxUnionTile::unit_cube(2);
        let rep =
            verify_lattice_tiling_fourier(&tile, &Lattice::integer(2), &rat_int(10), 1e-9).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.level_exact, Some(rat_int(1)));
    }

    #[test]
    fn cube_fails_against_dense_lattice_fourier() {
        // (1/2)Z × Z: dual is 2Z × Z, and the transform of the unit cube
        // does not vanish at e.g. ξ = (2, 0)? — it does (sinc(2π)=0).
        // The failure shows up at dual points like (2,0)? No: all dual
        // points have integer first coordinate ≥ 2 in absolute value or 0.
        // Actually dual(diag(1/2,1)) = diag(2,1): points (2m, n). At
        // (0, n≠0) the transform vanishes; at (2m≠0, n) it vanishes too.
        // The Fourier criterion therefore *passes* at the wrong level —
        // level would be 2 — and the oracle is the authority that this is
        // a double cover, not a tiling at level 1. Spec asks for a failing
        // dual witness for cube vs (1/2)Z × Z where one exists: take the
        // genuinely failing direction, the lattice 2Z × Z (dual (1/2)Z×Z),
        // whose dual point (1/2, 0) has |ft| = 2/π ≠ 0.
        let tile = BoxUnionTile::unit_cube(2);
        let sparse = Lattice::diagonal(&[rat_int(2), rat_int(1)]).unwrap();
        let rep = verify_lattice_tiling_fourier(&tile, &sparse, &rat_int(5), 1e-9).unwrap();
        assert!(!rep.pass);
        let w = rep.witness.unwrap();
        assert!(ft_box_union(&tile, &w).norm() > 1e-3);

        // dense lattice: criterion alone passes, exact oracle reports level 2
        let dense = Lattice::diagonal(&[rat(1, 2), rat_int(1)]).unwrap();
        let fou = verify_lattice_tiling_fourier(&tile, &dense, &rat_int(5), 1e-9).unwrap();
        assert_eq!(fou.level_exact, Some(rat_int(2)));
        let ex = verify_tiling_exact(&tile, &TranslationSet::Lattice(dense)).unwrap();
        assert!(ex.pass);
        assert_eq!(ex.level_exact, Some(rat_int(2)));
    }

    #[test]
    fn exact_oracle_unit_interval() {
        let tile = BoxUnionTile::unit_cube(1);
        let set = TranslationSet::ApUnion(vec![(rat_int(1), rat_int(0))]);
        let rep = verify_tiling_exact(&tile, &set).unwrap();
        assert!(rep.pass && rep.exact);
        assert_eq!(rep.level_exact, Some(rat_int(1)));
    }

    #[test]
    fn exact_oracle_two_progressions() {
        // χ_[0,1/2)∪[1,3/2) with {2Z, 2Z + 1/2}: period 2
        let tile =
            BoxUnionTile::intervals(&[(rat_int(0), rat(1, 2)), (rat_int(1), rat(3, 2))]).unwrap();
        let set = TranslationSet::ApUnion(vec![(rat_int(2), rat_int(0)), (rat_int(2), rat(1, 2))]);
        let rep = verify_tiling_exact(&tile, &set).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.level_exact, Some(rat_int(1)));
    }

    #[test]
    fn exact_oracle_detects_gap() {
        let tile = BoxUnionTile::unit_cube(1);
        let set = TranslationSet::ApUnion(vec![(rat_int(2), rat_int(0))]);
        let rep = verify_tiling_exact(&tile, &set).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn exact_oracle_cube_z2() {
        let rep = verify_tiling_exact(&BoxUnionTile::unit_cube(2), &z(2)).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.level_exact, Some(rat_int(1)));
    }

    #[test]
    fn exact_level_matches_density_invariant() {
        // dense lattice: coverage 2 everywhere
        let set = TranslationSet::Lattice(Lattice::diagonal(&[rat(1, 2), rat_int(1)]).unwrap());
        let tile = BoxUnionTile::unit_cube(2);
        let rep = verify_tiling_exact(&tile, &set).unwrap();
        assert!(rep.pass);
        assert_eq!(
            rep.level_exact.unwrap(),
            expected_level(&tile, &set).unwrap()
        );
    }

    #[test]
    fn translation_invariance() {
        let tile = BoxUnionTile::unit_cube(2);
        let shift = vec![rat(3, 7), rat(-2, 5)];
        let moved = tile.translate(&shift);
        let set = TranslationSet::Lattice(Lattice::integer(2));
        let set_moved = TranslationSet::Lattice(
            Lattice::with_offset(crate::matrix::Matrix::identity(2), shift.clone()).unwrap(),
        );
        let a = verify_tiling_exact(&tile, &set).unwrap();
        let b = verify_tiling_exact(&moved, &set).unwrap();
        let c = verify_tiling_exact(&tile, &set_moved).unwrap();
        assert_eq!(a.level_exact, b.level_exact);
        assert_eq!(a.level_exact, c.level_exact);
        assert!(a.pass && b.pass && c.pass);
    }

    #[test]
    fn packing_exact_sparse_and_overlap() {
        let tile = BoxUnionTile::unit_cube(2);
        let sparse = TranslationSet::Lattice(Lattice::diagonal(&[rat_int(2), rat_int(1)]).unwrap());
        let rep = verify_packing_exact(&tile, &sparse, None).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.level_exact, Some(rat_int(1)));
        let tiling = verify_tiling_exact(&tile, &sparse).unwrap();
        assert!(!tiling.pass);

        let dense = TranslationSet::Lattice(Lattice::diagonal(&[rat(1, 2), rat_int(1)]).unwrap());
        let rep = verify_packing_exact(&tile, &dense, None).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn sampled_shifted_columns() {
        let mut cols = BTreeMap::new();
        for m in -4..=4 {
            cols.insert(m, rat((m * m) % 3, 7)); // arbitrary shifts in [0,1)
        }
        let tile = BoxUnionTile::unit_cube(2);
        let set = TranslationSet::ShiftedColumns(cols);
        let rep = verify_tiling_sampled(
            &tile,
            &set,
            &[rat_int(-2), rat_int(-2)],
            &[rat_int(2), rat_int(2)],
            400,
            0,
        )
        .unwrap();
        assert!(rep.pass, "deviation {}", rep.max_deviation);
        assert_eq!(rep.level_exact, Some(rat_int(1)));
    }

    #[test]
    fn sampled_detects_missing_translate() {
        let full = Lattice::integer(2)
            .enumerate_points(&[rat_int(0), rat_int(0)], &rat_int(4))
            .unwrap();
        let mut pts = full.points.clone();
        pts.retain(|p| p != &vec![rat_int(0), rat_int(0)]);
        let patch = PointPatch {
            dim: 2,
            points: pts,
            center: full.center.clone(),
            radius: full.radius.clone(),
        };
        let tile = BoxUnionTile::unit_cube(2);
        let rep = verify_tiling_sampled(
            &tile,
            &TranslationSet::Patch(patch),
            &[rat(-3, 2), rat(-3, 2)],
            &[rat(3, 2), rat(3, 2)],
            500,
            0,
        )
        .unwrap();
        assert!(!rep.pass);
        let w = rep.witness.unwrap();
        // witness lies inside the uncovered unit square [0,1)²
        assert!(w[0] >= 0.0 && w[0] < 1.0 && w[1] >= 0.0 && w[1] < 1.0);
    }

    #[test]
    fn sampled_deterministic_in_seed() {
        let tile = BoxUnionTile::unit_cube(1);
        let set = TranslationSet::ApUnion(vec![(rat_int(1), rat_int(0))]);
        let a = verify_tiling_sampled(&tile, &set, &[rat_int(-1)], &[rat_int(1)], 100, 7).unwrap();
        let b = verify_tiling_sampled(&tile, &set, &[rat_int(-1)], &[rat_int(1)], 100, 7).unwrap();
        assert_eq!(a.samples_or_cells, b.samples_or_cells);
        assert_eq!(a.level_exact, b.level_exact);
        assert_eq!(a.max_deviation, b.max_deviation);
    }

    #[test]
    fn densities() {
        assert_eq!(density_of(&z(2)).unwrap(), rat_int(1));
        let ap = TranslationSet::ApUnion(vec![(rat_int(2), rat_int(0)), (rat_int(2), rat(1, 2))]);
        assert_eq!(density_of(&ap).unwrap(), rat_int(1));
    }

    #[test]
    fn signed_tile_ess_sup() {
        let tile = BoxUnionTile::new_weighted(vec![
            WeightedBox {
                corner: vec![rat_int(0)],
                widths: vec![rat_int(2)],
                weight: rat_int(1),
            },
            WeightedBox {
                corner: vec![rat(1, 2)],
                widths: vec![rat_int(1)],
                weight: rat_int(1),
            },
        ])
        .unwrap();
        assert_eq!(tile_ess_sup(&tile).unwrap(), rat_int(2));
    }

    #[test]
    fn nonperiodic_rejected_by_exact_oracle() {
        let patch = Lattice::integer(1)
            .enumerate_points(&[rat_int(0)], &rat_int(3))
            .unwrap();
        let err = verify_tiling_exact(&BoxUnionTile::unit_cube(1), &TranslationSet::Patch(patch));
        assert!(err.is_err());
    }
}
