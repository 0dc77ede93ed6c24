//! Steinhaus-set obstructions from quadratic forms: a positive integer
//! quadratic form whose values are all sums of three squares, with a
//! non-square determinant, rules out a measurable Steinhaus set.

use tilinglab::ratio::format_rat;
use tilinglab::steinhaus::{
    is_sum_of_three_squares, paper_form_3d, paper_form_4d, search_forms_3d, steinhaus_lemma_check,
    steinhaus_radii,
};

fn main() {
    // the classic gaps: n ≡ 7 (mod 8) is never a sum of three squares
    let gaps: Vec<u64> = (0..60).filter(|&n| !is_sum_of_three_squares(n)).collect();
    println!("not sums of three squares below 60: {gaps:?}");

    // the certified 3D form
    let q = paper_form_3d();
    let verdict = steinhaus_lemma_check(&q, 3, 50).unwrap();
    println!(
        "2x² + 11y² + 6z²: det {} (square: {}), representable on ‖x‖∞ ≤ 50: {} ⇒ fires: {}",
        format_rat(&verdict.det),
        verdict.det_is_square,
        verdict.representable.all_representable,
        verdict.fires
    );

    // the 4D companion: integer-valued despite half-integer off-diagonals
    let q4 = paper_form_4d();
    println!(
        "4D form: integer-valued {} with det {}",
        q4.integer_valued(),
        format_rat(&q4.determinant())
    );

    // small search rediscovers the published coefficients
    let forms = search_forms_3d(12, 30).unwrap();
    println!("diagonal forms with coefficients ≤ 12 passing the test: {forms:?}");

    // admissible radii: distances realized between integer points
    let radii = steinhaus_radii(2, 4.0).unwrap();
    println!(
        "first admissible Steinhaus radii in d = 2: {:?}",
        &radii[..radii.len().min(8)]
    );
}
