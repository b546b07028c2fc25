//! Seeded synthetic trajectories with screw labels, written as JSON lines.

use screwkit::datagen::{generate_dataset, DatasetPlan, NoiseSpec};
use screwkit::ModelCategory;

fn main() -> screwkit::Result<()> {
    let mut plan = DatasetPlan::new(ModelCategory::ALL.to_vec(), 8, 7);
    plan.noise = NoiseSpec {
        frame_skip_prob: 0.1,
        ..NoiseSpec::jitter(0.5f64.to_radians(), 0.002)
    };
    let data = generate_dataset(&plan)?;
    for t in &data {
        println!(
            "#{} {:<9} frames {:>2}  final config theta {:+.3} rad, d {:+.3} m",
            t.id,
            t.category.name(),
            t.n_frames(),
            t.gt.configs.last().map_or(0.0, |c| c.theta),
            t.gt.configs.last().map_or(0.0, |c| c.d),
        );
    }

    let path = std::env::temp_dir().join("screwkit_example.jsonl");
    screwkit::io::save_trajectories(&path, &data)?;
    let back = screwkit::io::load_trajectories_strict(&path)?;
    println!(
        "wrote {} and read back {} trajectories, equal: {}",
        path.display(),
        back.len(),
        back == data
    );
    Ok(())
}
