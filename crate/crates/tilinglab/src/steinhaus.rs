//! Quadratic-form certificates for the Steinhaus problem: sums-of-squares
//! predicates, representability sweeps, determinant-square tests, the
//! diagonal-form search, and Steinhaus radii.

use num::{One, Signed};

use crate::error::{Result, TilingError};
use crate::matrix::Matrix;
use crate::ratio::{is_integer, rat_int, Rat};

/// A positive-definite symmetric rational quadratic form `Q(x) = ⟨Bx, x⟩`.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    b: Matrix,
    /// `2B` when it is integral and fits in i64: bulk evaluation over
    /// integer ranges then runs in machine arithmetic.
    twice_int: Option<Vec<i64>>,
}

impl QuadraticForm {
    pub fn new(b: Matrix) -> Result<Self> {
        if !b.is_symmetric() {
            return Err(TilingError::Domain("form matrix must be symmetric".into()));
        }
        // positive definiteness via leading principal minors, exactly
        for k in 1..=b.dim() {
            let sub = Matrix::new(
                (0..k)
                    .map(|i| (0..k).map(|j| b.entry(i, j).clone()).collect())
                    .collect(),
            )?;
            if !sub.determinant().is_positive() {
                return Err(TilingError::Domain(
                    "form must be positive definite (a leading minor is ≤ 0)".into(),
                ));
            }
        }
        let d = b.dim();
        let mut twice = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let e = b.entry(i, j) * rat_int(2);
                match (is_integer(&e), i64::try_from(e.to_integer())) {
                    (true, Ok(v)) => twice.push(v),
                    _ => {
                        return Ok(QuadraticForm { b, twice_int: None });
                    }
                }
            }
        }
        Ok(QuadraticForm {
            b,
            twice_int: Some(twice),
        })
    }

    pub fn diagonal(coeffs: &[i64]) -> Result<Self> {
        let entries: Vec<Rat> = coeffs.iter().map(|&c| rat_int(c)).collect();
        Self::new(Matrix::diagonal(&entries))
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn determinant(&self) -> Rat {
        self.b.determinant()
    }

    /// `⟨Bx, x⟩` for an integer vector, exact.
    pub fn value(&self, x: &[i64]) -> Rat {
        if let Some(t) = &self.twice_int {
            let d = self.dim();
            let mut s: i128 = 0;
            for i in 0..d {
                for j in 0..d {
                    s += t[d * i + j] as i128 * x[i] as i128 * x[j] as i128;
                }
            }
            return Rat::new(num::BigInt::from(s), num::BigInt::from(2));
        }
        let xr: Vec<Rat> = x.iter().map(|&c| rat_int(c)).collect();
        crate::ratio::dot(&self.b.mul_vec(&xr), &xr)
    }

    /// Integer-valued on `Z^d` iff the diagonal is integral and the
    /// off-diagonal entries lie in `(1/2)Z`.
    pub fn integer_valued(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            if !is_integer(self.b.entry(i, i)) {
                return false;
            }
            for j in 0..d {
                if i != j && !is_integer(&(self.b.entry(i, j) * rat_int(2))) {
                    return false;
                }
            }
        }
        true
    }
}

/// The paper's 3D form `2x² + 11y² + 6z²`.
pub fn paper_form_3d() -> QuadraticForm {
    QuadraticForm::diagonal(&[2, 11, 6]).expect("positive definite diagonal")
}

/// The paper's 4D form `Σ x_i² + Σ_{i>j} x_i x_j`: matrix with 1 on the
/// diagonal and 1/2 off it.
pub fn paper_form_4d() -> QuadraticForm {
    let half = crate::ratio::rat(1, 2);
    let rows = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { Rat::one() } else { half.clone() })
                .collect()
        })
        .collect();
    QuadraticForm::new(Matrix::new(rows).unwrap()).expect("positive definite")
}

/// `n` is a sum of three integer squares iff `n ≠ 4^ν (8k + 7)`.
pub fn is_sum_of_three_squares(n: u64) -> bool {
    let mut m = n;
    while m % 4 == 0 && m > 0 {
        m /= 4;
    }
    m % 8 != 7
}

/// The lexicographically least nondecreasing `d`-tuple of nonnegative
/// integers whose squares sum to `n`, if one exists.
pub fn sum_of_squares_witness(n: u64, d: usize) -> Option<Vec<u64>> {
    fn rec(n: u64, d: usize, min: u64, acc: &mut Vec<u64>) -> bool {
        if d == 0 {
            return n == 0;
        }
        let mut a = min;
        while a * a * (d as u64) <= n {
            // remaining d−1 entries are ≥ a, so they can absorb at most
            // anything; they must cover n − a² with squares ≥ a² each —
            // feasibility is settled by recursion
            acc.push(a);
            if rec(n - a * a, d - 1, a, acc) {
                return true;
            }
            acc.pop();
            a += 1;
        }
        false
    }
    let mut acc = Vec::with_capacity(d);
    if rec(n, d, 0, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

/// Result of an exhaustive representability sweep over `‖x‖∞ ≤ n_range`.
#[derive(Debug, Clone)]
pub struct RepresentabilityReport {
    pub range: i64,
    pub all_representable: bool,
    pub counterexample: Option<(Vec<i64>, Rat)>,
    pub checked_count: usize,
}

/// Checks that `Q(x)` is a sum of `d_squares` integer squares for every
/// integer vector with `‖x‖∞ ≤ n_range`.
pub fn verify_representability(
    q: &QuadraticForm,
    d_squares: usize,
    n_range: i64,
) -> Result<RepresentabilityReport> {
    if !q.integer_valued() {
        return Err(TilingError::Precondition(
            "form is not integer-valued on the integer lattice".into(),
        ));
    }
    let d = q.dim();
    let mut counterexample = None;
    let mut checked = 0usize;
    let mut x = vec![-n_range; d];
    'outer: loop {
        checked += 1;
        let v = q.value(&x);
        debug_assert!(is_integer(&v));
        let n = v.to_integer();
        let n: u64 = n.try_into().map_err(|_| {
            TilingError::Domain("form took a negative value; not positive definite?".into())
        })?;
        // the arithmetic characterization (agreement with the brute-force
        // witness is pinned separately against a sieve up to 10^5)
        let ok = if d_squares == 3 {
            is_sum_of_three_squares(n)
        } else {
            sum_of_squares_witness(n, d_squares).is_some()
        };
        if !ok {
            counterexample = Some((x.clone(), v));
            break;
        }
        let mut k = d;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if x[k] < n_range {
                x[k] += 1;
                for i in k + 1..d {
                    x[i] = -n_range;
                }
                break;
            }
        }
    }
    Ok(RepresentabilityReport {
        range: n_range,
        all_representable: counterexample.is_none(),
        counterexample,
        checked_count: checked,
    })
}

/// True iff `det B` is the square of an integer, decided exactly.
pub fn det_is_integer_square(q: &QuadraticForm) -> bool {
    let det = q.determinant();
    if !is_integer(&det) || det.is_negative() {
        return false;
    }
    let n = det.to_integer();
    let r = n.sqrt();
    &r * &r == n
}

/// Combined certificate following the quadratic-form lemma: if the form is
/// integer-valued, every value up to the range is a sum of `d` squares,
/// and the determinant is not an integer square, then no Steinhaus set
/// exists in dimension `d` (conditional on the finite-range evidence).
#[derive(Debug, Clone)]
pub struct SteinhausVerdict {
    pub dim: usize,
    pub representable: RepresentabilityReport,
    pub det: Rat,
    pub det_is_square: bool,
    /// True when the lemma's hypotheses are confirmed over the range.
    pub fires: bool,
}

pub fn steinhaus_lemma_check(
    q: &QuadraticForm,
    d_squares: usize,
    n_range: i64,
) -> Result<SteinhausVerdict> {
    let rep = verify_representability(q, d_squares, n_range)?;
    let det = q.determinant();
    let sq = det_is_integer_square(q);
    Ok(SteinhausVerdict {
        dim: q.dim(),
        fires: rep.all_representable && !sq,
        representable: rep,
        det,
        det_is_square: sq,
    })
}

/// All diagonal forms `ax² + by² + cz²` with `1 ≤ a ≤ b ≤ c ≤ bound` whose
/// Steinhaus certificate fires at the given range, in lexicographic order.
pub fn search_forms_3d(coeff_bound: i64, n_range: i64) -> Result<Vec<(i64, i64, i64)>> {
    let mut out = Vec::new();
    for a in 1..=coeff_bound {
        for b in a..=coeff_bound {
            for c in b..=coeff_bound {
                let q = QuadraticForm::diagonal(&[a, b, c])?;
                if steinhaus_lemma_check(&q, 3, n_range)?.fires {
                    out.push((a, b, c));
                }
            }
        }
    }
    Ok(out)
}

/// Steinhaus radii: in dimension 2 the distinct values `√(m² + n²) ≤ R`,
/// in dimension 3 the square roots of sums of three squares.
pub fn steinhaus_radii(dim: usize, r_max: f64) -> Result<Vec<f64>> {
    if !(dim == 2 || dim == 3) {
        return Err(TilingError::Domain(
            "radii defined for dimensions 2 and 3".into(),
        ));
    }
    if r_max <= 0.0 {
        return Err(TilingError::Precondition("R_max must be positive".into()));
    }
    let cap = (r_max * r_max).floor() as u64;
    let mut squares: Vec<u64> = Vec::new();
    for n in 1..=cap {
        let ok = if dim == 2 {
            sum_of_squares_witness(n, 2).is_some()
        } else {
            is_sum_of_three_squares(n)
        };
        if ok {
            squares.push(n);
        }
    }
    Ok(squares.into_iter().map(|n| (n as f64).sqrt()).collect())
}
