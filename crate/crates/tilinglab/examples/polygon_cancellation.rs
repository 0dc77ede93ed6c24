//! Edge cancellation for centrally symmetric polygon tilings: in a level-1
//! tiling every supporting line carries equal length of + and − edge
//! segments from translated copies, so the signed boundary measure cancels.

use num::{One, Zero};
use tilinglab::lattice::Lattice;
use tilinglab::matrix::Matrix;
use tilinglab::polygon::{face_balance_check, verify_polygon_edge_cancellation, Polygon2D};
use tilinglab::ratio::{parse_rat, rat, rat_int, Rat};
use tilinglab::verify::TranslationSet;

fn main() {
    let square = Polygon2D::new(vec![
        vec![Rat::zero(), Rat::zero()],
        vec![Rat::one(), Rat::zero()],
        vec![Rat::one(), Rat::one()],
        vec![Rat::zero(), Rat::one()],
    ])
    .unwrap();
    let window = ([rat(-2, 1), rat(-2, 1)], [rat(2, 1), rat(2, 1)]);

    let rep = verify_polygon_edge_cancellation(
        &square,
        &TranslationSet::Lattice(Lattice::integer(2)),
        &window.0,
        &window.1,
        150,
        1e-12,
    )
    .unwrap();
    println!("square + Z²:");
    for pr in &rep.pairs {
        println!(
            "  edge direction ({:+.1}, {:+.1})  residual {:e}  ({} lines)",
            pr.edge_direction[0], pr.edge_direction[1], pr.residual, pr.lines_checked
        );
    }
    println!(
        "  coverage level {} ⇒ {}",
        rep.coverage_level,
        if rep.pass { "tiles" } else { "fails" }
    );

    // a hexagon against the honeycomb centers: residual at float precision
    let h = parse_rat("0.866025403784439").unwrap();
    let hex = Polygon2D::new(vec![
        vec![rat_int(1), rat_int(0)],
        vec![rat(1, 2), h.clone()],
        vec![rat(-1, 2), h.clone()],
        vec![rat_int(-1), rat_int(0)],
        vec![rat(-1, 2), -h.clone()],
        vec![rat(1, 2), -h.clone()],
    ])
    .unwrap();
    println!(
        "hexagon: centrally symmetric {}, all facet directions balanced {}",
        hex.is_centrally_symmetric(),
        face_balance_check(&hex).iter().all(|f| f.balanced)
    );
    let basis = Matrix::new(vec![vec![rat(3, 2), rat_int(0)], vec![h.clone(), &h + &h]]).unwrap();
    let rep = verify_polygon_edge_cancellation(
        &hex,
        &TranslationSet::Lattice(Lattice::new(basis).unwrap()),
        &[rat(-3, 1), rat(-3, 1)],
        &[rat(3, 1), rat(3, 1)],
        150,
        1e-9,
    )
    .unwrap();
    let worst = rep.pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    println!(
        "hexagon + honeycomb: worst residual {worst:.3e} ⇒ {}",
        if rep.pass { "tiles" } else { "fails" }
    );

    // double coverage shows up as a failing coverage witness
    let dense = Lattice::diagonal(&[rat(1, 2), Rat::one()]).unwrap();
    let rep = verify_polygon_edge_cancellation(
        &square,
        &TranslationSet::Lattice(dense),
        &window.0,
        &window.1,
        150,
        1e-9,
    )
    .unwrap();
    println!(
        "square + (1/2)Z×Z: {} (witness {:?})",
        if rep.pass { "tiles" } else { "fails" },
        rep.coverage_witness
    );
}
