//! Extended cubes: the cube grows past 1 on some axes and the matching
//! notch flips sign. Odd signed codimension tiles; even codimension is
//! structurally impossible and the constructor refuses it.

use tilinglab::constructions::{cyclic_variants, extended_cube, ExtendedCubeSpec, NotchedCubeSpec};
use tilinglab::ratio::{format_rat, rat};
use tilinglab::verify::{verify_tiling_exact, TranslationSet};

fn main() {
    let gamma = vec![rat(1, 2), rat(1, 3), rat(1, 5)];

    for k in [1usize, 3] {
        let spec = ExtendedCubeSpec::new(gamma.clone(), k).unwrap();
        let (tile, lattice) = extended_cube(&spec);
        let report = verify_tiling_exact(&tile, &TranslationSet::Lattice(lattice)).unwrap();
        println!(
            "extended cube k = {k}: measure {}, level {} ({})",
            format_rat(&spec.measure()),
            report
                .level_exact
                .as_ref()
                .map(format_rat)
                .unwrap_or_default(),
            if report.pass { "pass" } else { "fail" }
        );
    }

    match ExtendedCubeSpec::new(gamma, 2) {
        Err(e) => println!("extended cube k = 2: refused ({e})"),
        Ok(_) => println!("extended cube k = 2: unexpectedly accepted"),
    }

    // each cyclic coordinate permutation gives a distinct tiling lattice
    let spec = NotchedCubeSpec::new(vec![rat(1, 2), rat(1, 3), rat(1, 5)]).unwrap();
    let variants = cyclic_variants(&spec);
    println!("notched 3-cube has {} cyclic variants:", variants.len());
    for (sigma, lattice) in &variants {
        println!(
            "  σ = {sigma:?}  det = {}",
            format_rat(&lattice.determinant())
        );
    }
}
