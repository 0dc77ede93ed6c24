//! Spectrum ⇔ tiling for the unit cube: orthogonality plus completeness of
//! the exponential system on one side, the direct-space coverage oracle on
//! the other. The two verdicts must agree on positives and negatives alike.

use std::collections::BTreeMap;

use num::One;
use tilinglab::lattice::Lattice;
use tilinglab::ratio::{rat, Rat};
use tilinglab::spectra::cube_spectrum_iff_tiling;
use tilinglab::verify::TranslationSet;

fn show(name: &str, set: &TranslationSet) {
    let rec = cube_spectrum_iff_tiling(set, 2, 1000).unwrap();
    println!(
        "{name:<28} spectrum {}  tiling {}  agree {}  (completeness residual {:.2e})",
        rec.spectrum_pass, rec.tiling_pass, rec.agree, rec.completeness.max_residual
    );
}

fn main() {
    show("Z²", &TranslationSet::Lattice(Lattice::integer(2)));

    // columns of Z² shifted by a 4-periodic pattern of quarter shifts:
    // still a tiling (and a spectrum), but no longer a lattice
    let mut cols = BTreeMap::new();
    for m in -40..=40i64 {
        cols.insert(m, rat(m.rem_euclid(4), 4));
    }
    show("shifted columns", &TranslationSet::ShiftedColumns(cols));

    // negative control: twice the density can't be orthogonal or tile at 1
    let dense = Lattice::diagonal(&[Rat::one(), rat(1, 2)]).unwrap();
    show("density-2 lattice", &TranslationSet::Lattice(dense));

    // negative control: two interleaved copies of Z²
    let pair = TranslationSet::LatticeUnion(vec![
        Lattice::integer(2),
        Lattice::with_offset(
            tilinglab::matrix::Matrix::identity(2),
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap(),
    ]);
    show("half-shifted pair", &pair);
}
