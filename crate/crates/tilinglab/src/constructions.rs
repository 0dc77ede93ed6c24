//! Explicit tiling constructions: the notched cube and its lattice, cyclic
//! variants, extended cubes, shifted-column tilings, and convolution soft
//! tiles.

use num::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::error::{Result, TilingError};
use crate::lattice::Lattice;
use crate::matrix::Matrix;
use crate::ratio::{fract, is_integer, rat, to_f64, Rat, RatVec};
use crate::tile::{BoxUnionTile, WeightedBox};
use crate::verify::TranslationSet;

/// Parameters of the notched cube `N = Q ∖ R`: notch side lengths δ with
/// `0 < δ_j ≤ 1` and `∏δ_j < 1`.
#[derive(Debug, Clone)]
pub struct NotchedCubeSpec {
    delta: RatVec,
}

impl NotchedCubeSpec {
    pub fn new(delta: RatVec) -> Result<Self> {
        if delta.is_empty() {
            return Err(TilingError::Domain("need at least one δ".into()));
        }
        for d in &delta {
            if !d.is_positive() || *d > Rat::one() {
                return Err(TilingError::Domain(
                    "each δ_j must satisfy 0 < δ_j ≤ 1".into(),
                ));
            }
        }
        if delta.iter().product::<Rat>() == Rat::one() {
            return Err(TilingError::Domain(
                "∏δ_j = 1 leaves a measure-zero notched cube".into(),
            ));
        }
        Ok(NotchedCubeSpec { delta })
    }

    pub fn delta(&self) -> &[Rat] {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.delta.len()
    }

    /// `|N| = 1 − ∏δ_j`.
    pub fn measure(&self) -> Rat {
        Rat::one() - self.delta.iter().product::<Rat>()
    }
}

/// The notched cube as disjoint half-open slabs: the slab with index `j`
/// holds the points of `Q ∖ R` whose first coordinate escaping the notch
/// range is coordinate `j`.
pub fn notched_tile(spec: &NotchedCubeSpec) -> BoxUnionTile {
    let d = spec.dim();
    let half = rat(1, 2);
    let mut boxes = Vec::new();
    for j in 0..d {
        let wj = Rat::one() - &spec.delta[j];
        if wj.is_zero() {
            continue; // δ_j = 1: this slab is empty
        }
        let mut corner = Vec::with_capacity(d);
        let mut widths = Vec::with_capacity(d);
        for i in 0..d {
            if i < j {
                corner.push(&half - &spec.delta[i]);
                widths.push(spec.delta[i].clone());
            } else if i == j {
                corner.push(-half.clone());
                widths.push(wj.clone());
            } else {
                corner.push(-half.clone());
                widths.push(Rat::one());
            }
        }
        boxes.push(WeightedBox {
            corner,
            widths,
            weight: Rat::one(),
        });
    }
    BoxUnionTile::new(boxes).expect("slab decomposition is disjoint by construction")
}

/// The matrix with 1 on the diagonal and `−δ_{σ(i)}` at column `σ(i)` in
/// row `i`; for the standard cycle `i ↦ i+1` this is the construction
/// matrix whose transpose generates the tiling lattice.
fn construction_matrix(delta: &[Rat], sigma: &[usize]) -> Matrix {
    let d = delta.len();
    let mut rows = vec![vec![Rat::zero(); d]; d];
    for i in 0..d {
        rows[i][i] = Rat::one();
        if d > 1 {
            rows[i][sigma[i]] = -delta[sigma[i]].clone();
        } else {
            // d = 1: the single "cycle" folds onto the diagonal, 1 − δ₁
            rows[0][0] = Rat::one() - delta[0].clone();
        }
    }
    Matrix::new(rows).expect("square construction matrix")
}

fn standard_cycle(d: usize) -> Vec<usize> {
    (0..d).map(|i| (i + 1) % d).collect()
}

/// The tiling lattice `Λ = A^⊤ Z^d` for the notched cube, standard cycle.
pub fn notched_lattice(spec: &NotchedCubeSpec) -> Lattice {
    let a = construction_matrix(&spec.delta, &standard_cycle(spec.dim()));
    Lattice::new(a.transpose()).expect("det = 1 − ∏δ ≠ 0 by spec validation")
}

/// Checks that σ (0-based images) is one cycle through all of `0..d`.
fn validate_cycle(sigma: &[usize], d: usize) -> Result<()> {
    if sigma.len() != d {
        return Err(TilingError::Domain("permutation length mismatch".into()));
    }
    let mut seen = vec![false; d];
    for &s in sigma {
        if s >= d || seen[s] {
            return Err(TilingError::Domain("not a permutation".into()));
        }
        seen[s] = true;
    }
    // follow the orbit of 0; a single cycle visits everything
    let mut visited = 1usize;
    let mut at = sigma[0];
    while at != 0 {
        visited += 1;
        if visited > d {
            return Err(TilingError::Domain("not a permutation cycle".into()));
        }
        at = sigma[at];
    }
    if visited != d {
        return Err(TilingError::Domain(
            "permutation is not a single d-cycle".into(),
        ));
    }
    Ok(())
}

/// The cyclic-permutation variant lattice: row `i` carries `−δ_{σ(i)}` at
/// column `σ(i)`. One tiling lattice per cyclic permutation, `(d−1)!` total.
pub fn cyclic_variant(spec: &NotchedCubeSpec, sigma: &[usize]) -> Result<Lattice> {
    let d = spec.dim();
    validate_cycle(sigma, d)?;
    let a = construction_matrix(&spec.delta, sigma);
    Lattice::new(a.transpose())
}

/// All `(d−1)!` cyclic variants, each with its permutation.
pub fn cyclic_variants(spec: &NotchedCubeSpec) -> Vec<(Vec<usize>, Lattice)> {
    let d = spec.dim();
    if d == 1 {
        return vec![(vec![0], notched_lattice(spec))];
    }
    // enumerate cycles as orderings of 1..d following 0
    let mut rest: Vec<usize> = (1..d).collect();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut |order| {
        let mut sigma = vec![0usize; d];
        let mut prev = 0usize;
        for &nxt in order.iter() {
            sigma[prev] = nxt;
            prev = nxt;
        }
        sigma[prev] = 0;
        let lat = cyclic_variant(spec, &sigma).expect("valid cycle by construction");
        out.push((sigma, lat));
    });
    out
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Parameters of the extended cube: `R` has side lengths γ_j > 0 and meets
/// `Q` in a face of codimension `k`, which must be odd.
#[derive(Debug, Clone)]
pub struct ExtendedCubeSpec {
    gamma: RatVec,
    k: usize,
}

impl ExtendedCubeSpec {
    pub fn new(gamma: RatVec, k: usize) -> Result<Self> {
        let d = gamma.len();
        if d == 0 || k == 0 || k > d {
            return Err(TilingError::Domain("need 1 ≤ k ≤ d".into()));
        }
        if k % 2 == 0 {
            return Err(TilingError::Precondition(
                "even-codimension contact is refused: whether such bodies tile is open".into(),
            ));
        }
        if gamma.iter().any(|g| !g.is_positive()) {
            return Err(TilingError::Domain("γ_j must be positive".into()));
        }
        Ok(ExtendedCubeSpec { gamma, k })
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// The signed parameters: `δ_j = −γ_j` for `j ≤ k`, `γ_j` beyond.
    pub fn signed_delta(&self) -> RatVec {
        self.gamma
            .iter()
            .enumerate()
            .map(|(j, g)| if j < self.k { -g } else { g.clone() })
            .collect()
    }

    /// `|Q ∪ R| = 1 + ∏γ_j`.
    pub fn measure(&self) -> Rat {
        Rat::one() + self.gamma.iter().product::<Rat>()
    }
}

/// Builds the extended cube `Q ∪ R` and its tiling lattice. `R` is centered
/// at `(1/2,…,1/2) − δ/2`, so it shares the vertex `(1/2,…,1/2)` with `Q`,
/// sticking out on the first `k` coordinates and reaching inward-range on
/// the rest.
pub fn extended_cube(spec: &ExtendedCubeSpec) -> (BoxUnionTile, Lattice) {
    let d = spec.dim();
    let half = rat(1, 2);
    let q = WeightedBox {
        corner: vec![-half.clone(); d],
        widths: vec![Rat::one(); d],
        weight: Rat::one(),
    };
    let mut corner = Vec::with_capacity(d);
    for (j, g) in spec.gamma.iter().enumerate() {
        if j < spec.k {
            corner.push(half.clone()); // [1/2, 1/2 + γ_j)
        } else {
            corner.push(&half - g); // [1/2 − γ_j, 1/2)
        }
    }
    let r = WeightedBox {
        corner,
        widths: spec.gamma.clone(),
        weight: Rat::one(),
    };
    let tile = BoxUnionTile::new(vec![q, r]).expect("Q and R have disjoint interiors");
    let a = construction_matrix(&spec.signed_delta(), &standard_cycle(d));
    let lattice = Lattice::new(a.transpose()).expect("det = 1 + ∏γ > 0");
    (tile, lattice)
}

/// Shifted-column tiling of the plane by unit squares: column `m` is
/// shifted vertically by `s_m` (normalized into `[0,1)`). The map is
/// extended by zero shifts to cover all columns the window touches.
pub fn shifted_column_tiling(
    shifts: &BTreeMap<i64, Rat>,
    window_lo: &[Rat],
    window_hi: &[Rat],
) -> TranslationSet {
    let mut cols: BTreeMap<i64, Rat> = BTreeMap::new();
    let m_lo = to_f64(&window_lo[0].floor()) as i64 - 2;
    let m_hi = to_f64(&window_hi[0].ceil()) as i64 + 2;
    for m in m_lo..=m_hi {
        cols.insert(m, Rat::zero());
    }
    for (&m, s) in shifts {
        cols.insert(m, fract(s));
    }
    TranslationSet::ShiftedColumns(cols)
}

/// True iff the listed shifts are consistent with a single lattice: the
/// first differences `s_{m+1} − s_m` must be constant mod 1 over the
/// listed consecutive columns.
pub fn shifts_lattice_compatible(shifts: &BTreeMap<i64, Rat>) -> bool {
    let items: Vec<(&i64, &Rat)> = shifts.iter().collect();
    let mut slope: Option<Rat> = None;
    for w in items.windows(2) {
        let (m0, s0) = w[0];
        let (m1, s1) = w[1];
        if m1 - m0 != 1 {
            continue;
        }
        let diff = fract(&(s1 - s0));
        match &slope {
            None => slope = Some(diff),
            Some(d) if *d != diff => return false,
            _ => {}
        }
    }
    true
}

/// A sampled nonnegative function on a uniform rational grid, the output
/// of the convolution construction.
#[derive(Debug, Clone)]
pub struct SoftTile {
    pub dim: usize,
    /// Grid step.
    pub h: Rat,
    /// Values at the grid points `idx · h`.
    pub values: BTreeMap<Vec<i64>, Rat>,
}

impl SoftTile {
    pub fn value(&self, idx: &[i64]) -> Rat {
        self.values.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    /// ∞-norm diameter of the support.
    pub fn support_diameter(&self) -> f64 {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for (idx, v) in &self.values {
            if v.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                lo[j] = lo[j].min(idx[j]);
                hi[j] = hi[j].max(idx[j]);
            }
        }
        if lo[0] == i64::MAX {
            return 0.0;
        }
        // the interpolant is zero at the first grid point past the extreme
        // nonzero samples, so the support reaches one cell beyond each end
        let h = to_f64(&self.h);
        (0..self.dim)
            .map(|j| (hi[j] - lo[j] + 2) as f64 * h)
            .fold(0.0, f64::max)
    }
}

/// Result of the convolution build: the soft tile plus its measured
/// support diameter (logged, never asserted against the unknown constant).
#[derive(Debug, Clone)]
pub struct SoftTileBuild {
    pub tile: SoftTile,
    pub factors: usize,
    pub support_diameter: f64,
}

fn grid_index(x: &Rat, h: &Rat) -> Result<i64> {
    let q = x / h;
    if !is_integer(&q) {
        return Err(TilingError::Domain(format!(
            "coordinate {x} is not a multiple of the grid step {h}"
        )));
    }
    Ok(to_f64(&q).round() as i64)
}

/// Cell-occupancy bitmap of a box-union tile on the grid: value of the
/// tile on each cell `[ih, (i+1)h)` (constant there when h divides all
/// box coordinates).
fn cell_map(tile: &BoxUnionTile, h: &Rat) -> Result<BTreeMap<Vec<i64>, Rat>> {
    let d = tile.dim();
    for b in tile.boxes() {
        for j in 0..d {
            grid_index(&b.corner[j], h)?;
            grid_index(&(&b.corner[j] + &b.widths[j]), h)?;
        }
    }
    let (lo, hi) = tile.bounding_box();
    let lo: Vec<i64> = lo.iter().map(|x| grid_index(x, h)).collect::<Result<_>>()?;
    let hi: Vec<i64> = hi.iter().map(|x| grid_index(x, h)).collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    let mut idx = lo.clone();
    let half = rat(1, 2);
    loop {
        let center: RatVec = idx
            .iter()
            .map(|&i| (Rat::from_integer(i.into()) + &half) * h)
            .collect();
        let v = tile.value_at(&center);
        if !v.is_zero() {
            out.insert(idx.clone(), v);
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if idx[k] + 1 < hi[k] {
                idx[k] += 1;
                for i in k + 1..d {
                    idx[i] = lo[i];
                }
                break;
            }
        }
    }
}

/// Convolution `χ_{D₁} * ⋯ * χ_{D_N}` evaluated exactly at grid points.
///
/// The first factor pair is convolved cell-against-cell (exact for
/// indicators of grid-aligned boxes); each further factor is folded in by
/// the trapezoid rule, exact because the running result is piecewise
/// multilinear on the grid. A single domain is returned as its own
/// point samples.
pub fn soft_common_tile(domains: &[BoxUnionTile], h: &Rat) -> Result<SoftTileBuild> {
    if domains.is_empty() {
        return Err(TilingError::Domain("need at least one domain".into()));
    }
    if !h.is_positive() {
        return Err(TilingError::Domain("grid step must be positive".into()));
    }
    let d = domains[0].dim();
    if domains.iter().any(|t| t.dim() != d) {
        return Err(TilingError::Domain("domain dimension mismatch".into()));
    }
    let tile = if domains.len() == 1 {
        point_samples(&domains[0], h)?
    } else {
        let c1 = cell_map(&domains[0], h)?;
        let c2 = cell_map(&domains[1], h)?;
        let mut cur = conv_cell_cell(&c1, &c2, h, d);
        for dom in &domains[2..] {
            let c = cell_map(dom, h)?;
            cur = conv_point_cell(&cur, &c, h, d);
        }
        SoftTile {
            dim: d,
            h: h.clone(),
            values: cur,
        }
    };
    let diam = tile.support_diameter();
    Ok(SoftTileBuild {
        tile,
        factors: domains.len(),
        support_diameter: diam,
    })
}

fn point_samples(tile: &BoxUnionTile, h: &Rat) -> Result<SoftTile> {
    let cells = cell_map(tile, h)?;
    let d = tile.dim();
    let mut values = BTreeMap::new();
    for (idx, v) in cells {
        // value at the grid point = value of the cell that starts there
        values.insert(idx, v);
        let _ = d;
    }
    Ok(SoftTile {
        dim: tile.dim(),
        h: h.clone(),
        values,
    })
}

/// `(χ*χ)(m·h) = h^d Σ_i c1(i) c2(m − i − 1)` (1 = all-ones).
fn conv_cell_cell(
    c1: &BTreeMap<Vec<i64>, Rat>,
    c2: &BTreeMap<Vec<i64>, Rat>,
    h: &Rat,
    d: usize,
) -> BTreeMap<Vec<i64>, Rat> {
    let hd = num::pow::pow(h.clone(), d);
    let mut out: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    for (i, v1) in c1 {
        for (j, v2) in c2 {
            let m: Vec<i64> = i.iter().zip(j).map(|(a, b)| a + b + 1).collect();
            *out.entry(m).or_insert_with(Rat::zero) += v1 * v2 * &hd;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Trapezoid fold of a cell indicator into point samples: the integral of
/// the piecewise-multilinear `r` over each occupied cell is the average of
/// its `2^d` corner values times `h^d`.
fn conv_point_cell(
    r: &BTreeMap<Vec<i64>, Rat>,
    cells: &BTreeMap<Vec<i64>, Rat>,
    h: &Rat,
    d: usize,
) -> BTreeMap<Vec<i64>, Rat> {
    let hd = num::pow::pow(h.clone(), d);
    let scale = &hd / Rat::from_integer((1i64 << d).into());
    let mut out: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    for (m, v) in r {
        for (i, c) in cells {
            for mask in 0u32..(1 << d) {
                let target: Vec<i64> = (0..d)
                    .map(|j| m[j] + i[j] + ((mask >> j) & 1) as i64)
                    .collect();
                *out.entry(target).or_insert_with(Rat::zero) += v * c * &scale;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Level statistics of a periodic sum of a soft tile.
#[derive(Debug, Clone)]
pub struct SoftLevelReport {
    /// Value at the first grid point of the period cell.
    pub level: Rat,
    /// Max deviation of the sum from `level` over the period cell.
    pub max_dev: Rat,
    /// Max of the sum over the period cell (the packing level).
    pub max_sum: Rat,
}

/// Exact level check of a soft tile against a periodic translation set
/// whose points are multiples of the grid step: evaluates the periodic
/// sum at every grid point of one period.
pub fn soft_tile_level(
    tile: &SoftTile,
    set: &TranslationSet,
    period: &Rat,
) -> Result<SoftLevelReport> {
    let d = tile.dim;
    let n = {
        let q = period / &tile.h;
        if !is_integer(&q) || !q.is_positive() {
            return Err(TilingError::Domain(
                "period must be a positive multiple of the grid step".into(),
            ));
        }
        to_f64(&q) as i64
    };
    // translates covering [0, period)^d minus/plus the support reach
    let mut lo_idx = vec![i64::MAX; d];
    let mut hi_idx = vec![i64::MIN; d];
    for idx in tile.values.keys() {
        for j in 0..d {
            lo_idx[j] = lo_idx[j].min(idx[j]);
            hi_idx[j] = hi_idx[j].max(idx[j]);
        }
    }
    let win_lo: RatVec = (0..d)
        .map(|j| -Rat::from_integer(hi_idx[j].into()) * &tile.h)
        .collect();
    let win_hi: RatVec = (0..d)
        .map(|j| period - Rat::from_integer(lo_idx[j].into()) * &tile.h)
        .collect();
    let translates = set.enumerate_window(&win_lo, &win_hi)?;
    // translate offsets in grid units
    let mut offsets: Vec<Vec<i64>> = Vec::with_capacity(translates.len());
    for t in &translates {
        let mut o = Vec::with_capacity(d);
        for j in 0..d {
            o.push(grid_index(&t[j], &tile.h)?);
        }
        offsets.push(o);
    }
    let mut level: Option<Rat> = None;
    let mut max_dev = Rat::zero();
    let mut max_sum = Rat::zero();
    let mut point = vec![0i64; d];
    loop {
        let mut sum = Rat::zero();
        for o in &offsets {
            let rel: Vec<i64> = point.iter().zip(o).map(|(p, q)| p - q).collect();
            sum += tile.value(&rel);
        }
        if sum > max_sum {
            max_sum = sum.clone();
        }
        match &level {
            None => level = Some(sum),
            Some(l) => {
                let dev = (sum - l).abs();
                if dev > max_dev {
                    max_dev = dev;
                }
            }
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(SoftLevelReport {
                    level: level.unwrap(),
                    max_dev,
                    max_sum,
                });
            }
            k -= 1;
            if point[k] + 1 < n {
                point[k] += 1;
                for i in k + 1..d {
                    point[i] = 0;
                }
                break;
            }
        }
    }
}
