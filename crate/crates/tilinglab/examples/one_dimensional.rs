//! One-dimensional structure: a union of intervals tiling with a union of
//! arithmetic progressions, verified exactly; then a soft common tile for
//! two copies of Z built by convolution, with the packing-to-tiling
//! transfer harness relating the indicator and soft verdicts.

use num::{One, Zero};
use tilinglab::constructions::{soft_common_tile, soft_tile_level};
use tilinglab::ratio::{format_rat, rat, rat_int, Rat};
use tilinglab::spectra::packing_transfer_harness;
use tilinglab::tile::{BoxUnionTile, WeightedBox};
use tilinglab::verify::{verify_tiling_exact, TranslationSet};

fn main() {
    // χ_[0,1/2) ∪ [1,3/2) tiles with 2Z ∪ (2Z + 1/2)
    let tile = BoxUnionTile::new(vec![
        WeightedBox {
            corner: vec![Rat::zero()],
            widths: vec![rat(1, 2)],
            weight: Rat::one(),
        },
        WeightedBox {
            corner: vec![Rat::one()],
            widths: vec![rat(1, 2)],
            weight: Rat::one(),
        },
    ])
    .unwrap();
    let set = TranslationSet::ApUnion(vec![(rat_int(2), Rat::zero()), (rat_int(2), rat(1, 2))]);
    let rep = verify_tiling_exact(&tile, &set).unwrap();
    println!(
        "two intervals + AP union: level {} ({})",
        rep.level_exact.as_ref().map(format_rat).unwrap_or_default(),
        if rep.pass { "tiles" } else { "fails" }
    );

    // nudging one progression breaks it, with an exact witness cell
    let bad = TranslationSet::ApUnion(vec![(rat_int(2), Rat::zero()), (rat_int(2), rat(3, 4))]);
    let rep = verify_tiling_exact(&tile, &bad).unwrap();
    println!(
        "perturbed by 1/4: {} (witness near {:?})",
        if rep.pass { "tiles" } else { "fails" },
        rep.witness
    );

    // soft tile: convolving indicators of [0,1) gives a piecewise-linear
    // bump that still tiles with Z, sampled on an exact rational grid
    let interval = BoxUnionTile::unit_cube(1);
    let build = soft_common_tile(&[interval.clone(), interval.clone()], &rat(1, 4)).unwrap();
    println!(
        "soft tile from two intervals: support diameter {}, {} grid values",
        build.support_diameter,
        build.tile.values.len()
    );
    let z = TranslationSet::ApUnion(vec![(Rat::one(), Rat::zero())]);
    let level = soft_tile_level(&build.tile, &z, &Rat::one()).unwrap();
    println!(
        "  level over one period: {} (max deviation {})",
        format_rat(&level.level),
        format_rat(&level.max_dev)
    );

    // the harness: both the indicator and the soft tile pack, so their
    // tiling verdicts must agree
    let rec = packing_transfer_harness(&interval, &build.tile, &z, &Rat::one()).unwrap();
    println!(
        "transfer harness: applicable {}, indicator tiles {}, soft tiles {}, agree {}",
        rec.applicable, rec.f_tiles, rec.g_tiles, rec.agree
    );
}
