//! Drives the library through the same JSON job interface the CLI uses:
//! build a job spec, run it, and read the deterministic result envelope.
//! Re-running a job with the echoed resolved parameters reproduces the
//! envelope bit for bit.

use serde_json::json;
use tilinglab::envelope::{run, JobSpec};

fn main() {
    let spec = JobSpec::new("notched", json!({ "delta": ["1/2", "1/3", "1/5"] }));
    let envelope = run(&spec).unwrap();
    println!("{}", envelope.to_json());

    // round trip: the resolved params reproduce the same verdict and hash
    let again = run(&JobSpec::new(&envelope.command, envelope.params.clone())).unwrap();
    assert_eq!(again.report, envelope.report);
    assert_eq!(again.input_hash, envelope.input_hash);
    println!("round trip reproduced input hash {}", again.input_hash);
}
