//! Closed-form axis estimation from noisy part poses.

use screwkit::datagen::{corrupt, generate, NoiseSpec, ObjectSpec};
use screwkit::estimator::estimate_closed_form;
use screwkit::{line_distance, CategoryThresholds, ModelCategory};

fn main() -> screwkit::Result<()> {
    let th = CategoryThresholds::default();
    let noise = NoiseSpec::jitter(0.5f64.to_radians(), 0.002);
    for (i, cat) in ModelCategory::ALL.into_iter().enumerate() {
        let clean = generate(&ObjectSpec::for_category(cat), 100 + i as u64)?;
        let noisy = corrupt(&clean, &noise, 200 + i as u64)?;
        let m = estimate_closed_form(&noisy.poses, &noisy.base_pose, &th)?;
        let angle = m.axis.direction().angle(clean.gt.axis.direction()).to_degrees();
        println!(
            "{:<9} -> {:<9} axis off by {:6.3} deg, {:6.2} mm",
            cat.name(),
            m.category.name(),
            angle,
            line_distance(&m.axis, &clean.gt.axis) * 1000.0
        );
    }
    Ok(())
}
