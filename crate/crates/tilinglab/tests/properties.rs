//! Property suites: structural invariants that must hold for arbitrary
//! small rational inputs, checked with randomized search.

use num::{One, Zero};
use proptest::prelude::*;

use tilinglab::constructions::{notched_lattice, notched_tile, NotchedCubeSpec};
use tilinglab::envelope::{run, JobSpec};
use tilinglab::fourier::{ft_box_union, ft_notched};
use tilinglab::lattice::Lattice;
use tilinglab::matrix::Matrix;
use tilinglab::ratio::{rat, vec_to_f64, Rat, RatVec};
use tilinglab::tile::{BoxUnionTile, WeightedBox};
use tilinglab::verify::{verify_packing_exact, verify_tiling_exact, TranslationSet};

/// Small nonzero rationals with denominators ≤ 4.
fn small_rat() -> impl Strategy<Value = Rat> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// A 2×2 rational matrix constrained to be invertible.
fn invertible_2x2() -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(small_rat(), 4).prop_filter_map("singular", |v| {
        let m = Matrix::new(vec![
            vec![v[0].clone(), v[1].clone()],
            vec![v[2].clone(), v[3].clone()],
        ])
        .ok()?;
        if m.determinant().is_zero() {
            None
        } else {
            Some(m)
        }
    })
}

/// Notch depths strictly inside (0, 1).
fn notch_delta(dim: usize) -> impl Strategy<Value = RatVec> {
    proptest::collection::vec((1i64..=5, 6i64..=8).prop_map(|(n, d)| rat(n, d)), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The dual of the dual is the original lattice (basis-wise, since the
    /// dual construction is (A^{-1})^T twice).
    #[test]
    fn dual_of_dual_is_identity(m in invertible_2x2()) {
        let lat = Lattice::new(m.clone()).unwrap();
        let back = lat.dual().unwrap().dual().unwrap();
        prop_assert_eq!(back.basis().rows(), lat.basis().rows());
    }

    /// det(Λ*) · det(Λ) = 1 exactly.
    #[test]
    fn dual_determinant_reciprocity(m in invertible_2x2()) {
        let lat = Lattice::new(m).unwrap();
        let dual = lat.dual().unwrap();
        prop_assert_eq!(lat.determinant() * dual.determinant(), Rat::one());
    }

    /// Real tiles have conjugate-symmetric transforms: f̂(−ξ) = conj f̂(ξ).
    #[test]
    fn transform_conjugate_symmetry(
        corner in proptest::collection::vec(small_rat(), 2),
        w1 in (1i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
        w2 in (1i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
        xi in proptest::collection::vec(-4.0f64..4.0, 2),
    ) {
        let tile = BoxUnionTile::new(vec![WeightedBox {
            corner,
            widths: vec![w1, w2],
            weight: Rat::one(),
        }]).unwrap();
        let plus = ft_box_union(&tile, &xi);
        let minus = ft_box_union(&tile, &[-xi[0], -xi[1]]);
        prop_assert!((plus.conj() - minus).norm() < 1e-12);
    }

    /// f̂(0) is the tile measure.
    #[test]
    fn transform_at_zero_is_measure(
        w1 in (1i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
        w2 in (1i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
    ) {
        let tile = BoxUnionTile::new(vec![WeightedBox {
            corner: vec![Rat::zero(), Rat::zero()],
            widths: vec![w1, w2],
            weight: Rat::one(),
        }]).unwrap();
        let zero = ft_box_union(&tile, &[0.0, 0.0]);
        let measure = tilinglab::ratio::to_f64(&tile.measure());
        prop_assert!((zero.re - measure).abs() < 1e-12 && zero.im.abs() < 1e-15);
    }

    /// The closed-form notched transform agrees with the generic box-union
    /// transform of the same region.
    #[test]
    fn notched_transform_agreement(
        delta in notch_delta(2),
        xi in proptest::collection::vec(-3.0f64..3.0, 2),
    ) {
        let spec = NotchedCubeSpec::new(delta.clone()).unwrap();
        let tile = notched_tile(&spec);
        let a = ft_notched(&delta, &xi);
        let b = ft_box_union(&tile, &xi);
        prop_assert!((a - b).norm() < 1e-10, "closed form {a} vs box union {b}");
    }

    /// Every notched cube tiles: the exact oracle certifies level 1 for
    /// arbitrary admissible notch vectors, and the tile measure matches the
    /// lattice determinant.
    #[test]
    fn notched_always_tiles(delta in notch_delta(2)) {
        let spec = NotchedCubeSpec::new(delta).unwrap();
        let tile = notched_tile(&spec);
        let lat = notched_lattice(&spec);
        prop_assert_eq!(tile.measure(), lat.determinant());
        let rep = verify_tiling_exact(&tile, &TranslationSet::Lattice(lat)).unwrap();
        prop_assert!(rep.pass);
        prop_assert_eq!(rep.level_exact, Some(Rat::one()));
    }

    /// A tiling is a packing: whenever the exact oracle certifies level 1,
    /// the packing check at level 1 must pass too.
    #[test]
    fn tiling_implies_packing(delta in notch_delta(2)) {
        let spec = NotchedCubeSpec::new(delta).unwrap();
        let tile = notched_tile(&spec);
        let set = TranslationSet::Lattice(notched_lattice(&spec));
        let tiling = verify_tiling_exact(&tile, &set).unwrap();
        let packing = verify_packing_exact(&tile, &set, Some(Rat::one())).unwrap();
        prop_assert!(!tiling.pass || packing.pass);
    }

    /// Shrinking an interval below the progression step turns a 1D tiling
    /// into a strict packing: packing passes, tiling fails.
    #[test]
    fn strict_packing_from_shrunk_interval(num in 1i64..=3) {
        let width = rat(num, 4);
        let tile = BoxUnionTile::new(vec![WeightedBox {
            corner: vec![Rat::zero()],
            widths: vec![width.clone()],
            weight: Rat::one(),
        }]).unwrap();
        let z = TranslationSet::ApUnion(vec![(Rat::one(), Rat::zero())]);
        let packing = verify_packing_exact(&tile, &z, Some(Rat::one())).unwrap();
        prop_assert!(packing.pass);
        let tiling = verify_tiling_exact(&tile, &z).unwrap();
        prop_assert_eq!(tiling.pass, width == Rat::one());
    }

    /// Envelope round trip: re-running a job with its own resolved
    /// parameters reproduces the verdict, report and input hash.
    #[test]
    fn envelope_round_trip(n in 1i64..=3, d in 4i64..=6) {
        let spec = JobSpec::new(
            "verify-tiling",
            serde_json::json!({
                "tile": [{ "corner": ["0"], "widths": [format!("{n}/{d}")] }],
                "set": { "type": "ap_union",
                         "progressions": [[format!("{n}/{d}"), "0"]] },
            }),
        );
        let env = run(&spec).unwrap();
        prop_assert!(env.pass);
        let again = run(&JobSpec::new(&env.command, env.params.clone())).unwrap();
        prop_assert_eq!(again.report, env.report);
        prop_assert_eq!(again.input_hash, env.input_hash);
    }

    /// Translating a tile moves its transform by a phase only: |f̂| is
    /// translation invariant.
    #[test]
    fn transform_modulus_translation_invariant(
        shift in proptest::collection::vec(small_rat(), 2),
        xi in proptest::collection::vec(-3.0f64..3.0, 2),
    ) {
        let tile = BoxUnionTile::unit_cube(2);
        let moved = tile.translate(&shift);
        let a = ft_box_union(&tile, &xi).norm();
        let b = ft_box_union(&moved, &xi).norm();
        prop_assert!((a - b).abs() < 1e-12);
    }

    /// Lattice membership is stable under adding basis vectors.
    #[test]
    fn lattice_contains_its_points(
        m in invertible_2x2(),
        c1 in -3i64..=3,
        c2 in -3i64..=3,
    ) {
        let lat = Lattice::new(m).unwrap();
        let coeffs: RatVec = vec![Rat::from_integer(c1.into()), Rat::from_integer(c2.into())];
        let point = lat.basis().mul_vec(&coeffs);
        prop_assert!(lat.contains(&point), "missing {:?}", vec_to_f64(&point));
    }
}
