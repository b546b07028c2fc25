//! Loss evaluation and refinement of a closed-form estimate.

use screwkit::datagen::{corrupt, generate, NoiseSpec, ObjectSpec};
use screwkit::estimator::{estimate_closed_form, evaluate, loss, refine_detailed, LossWeights, RefineOptions};
use screwkit::{CategoryThresholds, ModelCategory};

fn main() -> screwkit::Result<()> {
    let th = CategoryThresholds::default();
    let w = LossWeights::default();
    let clean = generate(&ObjectSpec::for_category(ModelCategory::Helical), 11)?;
    let t = corrupt(&clean, &NoiseSpec::jitter(1f64.to_radians(), 0.003), 12)?;

    let init = estimate_closed_form(&t.poses, &t.base_pose, &th)?;
    let r = refine_detailed(&init, &t.poses, &t.base_pose, &w, &RefineOptions::default())?;
    println!(
        "loss against observed screws: {:.5} -> {:.5} ({} iterations, {} accepted)",
        r.initial.total, r.refined.total, r.iterations, r.accepted_steps
    );
    let parts = &r.refined;
    println!(
        "  orientation {:.5}  distance {:.5}  constraint {:.2e}  theta {:.5}  d {:.5}",
        parts.l_s_ori, parts.l_s_dist, parts.l_s_cons, parts.l_theta, parts.l_d
    );

    for (name, m) in [("closed form", &init), ("refined", &r.model)] {
        let e = evaluate(m, &clean.gt)?;
        println!(
            "{name:>11}: axis {:.3} deg / {:.3} cm from truth, loss vs truth {:.5}",
            e.axis_orientation_error,
            e.axis_position_error,
            loss(m, &clean.gt, &w)?.total
        );
    }
    Ok(())
}
