//! Minkowski's lattice-point theorem and the Hajós cube-tiling predicate
//! on a couple of small rational matrices, cross-checked against the
//! Fourier criterion for the unit cube on the dual lattice.

use tilinglab::lattice::Lattice;
use tilinglab::matrix::{hajos_predicate, minkowski_vector, Matrix};
use tilinglab::ratio::{format_rat, rat, rat_int};
use tilinglab::tile::BoxUnionTile;
use tilinglab::verify::verify_lattice_tiling_fourier;

fn main() {
    let shear = Matrix::new(vec![
        vec![rat_int(1), rat(1, 2)],
        vec![rat_int(0), rat_int(1)],
    ])
    .unwrap();
    let mixed = shear.mul_mat(
        &Matrix::new(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat(1, 3), rat_int(1)],
        ])
        .unwrap(),
    );

    for (name, b) in [("shear", &shear), ("mixed product", &mixed)] {
        println!("{name}: det = {}", format_rat(&b.determinant()));

        // Minkowski: a nonzero integer point with |Bx|∞ ≤ det^{1/d} = 1
        match minkowski_vector(b, 20).unwrap() {
            Some(v) => println!("  minkowski vector  {v:?}"),
            None => println!("  minkowski vector  none within bound"),
        }

        // Hajós: every nonzero integer x gives Bx a nonzero integer coordinate
        let rep = hajos_predicate(b, 10).unwrap();
        println!(
            "  hajós predicate   {} (integral row: {:?}, witness: {:?})",
            rep.holds_up_to_bound, rep.integral_row, rep.witness
        );

        // the equivalent statement: the unit cube tiles with B^{-⊤}Z²
        let dual = Lattice::new(b.inverse().unwrap().transpose()).unwrap();
        let fr =
            verify_lattice_tiling_fourier(&BoxUnionTile::unit_cube(2), &dual, &rat_int(20), 1e-9)
                .unwrap();
        println!(
            "  cube + B^(-T)Z²   fourier {} (max |f̂| = {:.3e})",
            if fr.pass { "tiles" } else { "does not tile" },
            fr.max_deviation
        );
    }
}
