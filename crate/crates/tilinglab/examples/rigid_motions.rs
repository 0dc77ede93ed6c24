//! Translations are special: a set of rigid motions that tiles with the
//! unit square fails for an equal-area parallelogram, so tiling by a
//! richer motion group does not transfer between shapes the way lattice
//! tilings do.

use tilinglab::spectra::rigid_motion_counterexample;

fn main() {
    let rec = rigid_motion_counterexample();

    println!("unit square under the motion set:");
    println!(
        "  {} samples: {} covered exactly once, {} uncovered, {} overlapped ⇒ tiles = {}",
        rec.square.samples,
        rec.square.exactly_one,
        rec.square.uncovered,
        rec.square.multiply_covered,
        rec.square.tiles
    );

    println!("equal-area parallelogram under the same motions:");
    println!(
        "  packs = {} but uncovered fraction {:.3} ⇒ tiles = {}",
        rec.parallelogram.packs, rec.parallelogram.uncovered_fraction, rec.parallelogram.tiles
    );
}
