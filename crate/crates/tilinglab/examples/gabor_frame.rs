//! Gabor frames from tilings: when E tiles by the translation lattice K
//! and by the dual of the modulation lattice L, the window 1_E generates a
//! Parseval-like Weyl–Heisenberg system — the frame sum equals |E|·‖f‖².

use num::{One, Zero};
use tilinglab::lattice::Lattice;
use tilinglab::matrix::Matrix;
use tilinglab::multilattice::{gabor_frame_check, TestFunction};
use tilinglab::ratio::{rat, rat_int, Rat};
use tilinglab::tile::{BoxUnionTile, WeightedBox};

fn main() {
    let tests = vec![
        TestFunction::Bump {
            center: 0.5,
            width: 0.45,
        },
        TestFunction::ModulatedBump {
            center: 0.5,
            width: 0.4,
            freq: 2.0,
        },
    ];

    // classical case: E = [0,1), K = L = Z
    let z = Lattice::integer(1);
    let rep = gabor_frame_check(
        &z,
        &z,
        &BoxUnionTile::unit_cube(1),
        &tests,
        (-1.0, 2.0),
        1536,
    )
    .unwrap();
    println!(
        "E = [0,1), K = L = Z (density product {}):",
        rep.density_product
    );
    for r in &rep.residuals {
        println!(
            "  {:<26} ‖f‖² = {:.6}  residual {:.3e}  tail {:.1e}",
            r.function, r.norm_sq, r.residual, r.tail_estimate
        );
    }

    // rescaled pair: E = [0,2), K = 2Z, L = (1/2)Z keeps dens K · dens L = 1
    let two_z = Lattice::new(Matrix::new(vec![vec![rat_int(2)]]).unwrap()).unwrap();
    let half_z = Lattice::new(Matrix::new(vec![vec![rat(1, 2)]]).unwrap()).unwrap();
    let long = BoxUnionTile::new(vec![WeightedBox {
        corner: vec![Rat::zero()],
        widths: vec![rat_int(2)],
        weight: Rat::one(),
    }])
    .unwrap();
    let rep = gabor_frame_check(&two_z, &half_z, &long, &tests, (-2.0, 4.0), 1536).unwrap();
    println!("E = [0,2), K = 2Z, L = (1/2)Z:");
    for r in &rep.residuals {
        println!(
            "  {:<26} frame sum {:.6}  residual {:.3e}",
            r.function, r.frame_sum, r.residual
        );
    }
}
