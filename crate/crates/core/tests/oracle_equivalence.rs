mod common;

use std::time::Instant;

#[test]
fn every_model_matches_its_reference_implementation() {
    let start = Instant::now();
    let (diff, compared, worst) = common::oracle_max_difference();
    println!("compared {compared} predictions in {:?}; largest gap {diff:e} ({worst})", start.elapsed());
    assert!(diff <= 1e-10, "largest gap {diff:e} at {worst}");
}
