//! Error metrics and the per-category summary table.

use screwkit::datagen::{corrupt, derive_seed, generate, NoiseSpec, ObjectSpec};
use screwkit::estimator::{estimate, evaluate, LossWeights, Method, OrientationMode};
use screwkit::io::{format_table, summarize};
use screwkit::{CategoryThresholds, ModelCategory};

fn main() -> screwkit::Result<()> {
    let th = CategoryThresholds::default();
    let w = LossWeights::default();
    let noise = NoiseSpec::jitter(0.5f64.to_radians(), 0.002);
    let mut results = Vec::new();
    for cat in ModelCategory::ALL {
        for i in 0..50 {
            let seed = derive_seed(3, i);
            let t = corrupt(&generate(&ObjectSpec::for_category(cat), seed)?, &noise, seed)?;
            let e = estimate(&t.poses, &t.base_pose, Method::Refine, &th, &w)?;
            results.push((cat, evaluate(&e.model, &t.gt)?));
        }
    }
    print!("{}", format_table(&summarize(&results, OrientationMode::Raw)));

    // Raw and folded only differ when the estimate points the other way.
    let (_, first) = &results[50];
    println!(
        "revolute #0: raw {:.3} deg, folded {:.3} deg",
        first.orientation(OrientationMode::Raw),
        first.orientation(OrientationMode::Folded)
    );
    Ok(())
}
