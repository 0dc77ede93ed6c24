//! Non-spectrality of the disk: any spectrum would be a unit-density
//! packing-compatible set, so consecutive points can be at most
//! 2/12^(1/4) apart by the planar packing bound — but the transform of the
//! unit-area disk keeps its first zero circle strictly beyond that radius.

use tilinglab::bessel::{bessel_j1, j1_first_zero};
use tilinglab::spectra::disk_certificate;

fn main() {
    let z = j1_first_zero();
    println!("J₁ first positive zero: {z:.6}");
    println!("J₁ there (should vanish): {:.3e}", bessel_j1(z).unwrap());

    let c = disk_certificate();
    println!("first zero radius of the disk transform  r₀ = {:.6}", c.r0);
    println!(
        "packing-compatibility threshold  2/12^(1/4) = {:.7}",
        c.threshold
    );
    println!("Thue packing density bound  π/√12 = {:.7}", c.thue_bound);
    println!(
        "r₀ {} threshold ⇒ the disk is {}",
        if c.r0 > c.threshold { ">" } else { "≤" },
        if c.verdict {
            "not spectral"
        } else {
            "undecided"
        }
    );
}
