//! The four joint categories as seen by the decision tree.

use screwkit::geom3d::Vector3;
use screwkit::{classify, CategoryThresholds, PluckerLine, ScrewDisplacement};

fn main() -> screwkit::Result<()> {
    let th = CategoryThresholds::default();
    let hinge = PluckerLine::from_point_direction(&Vector3::new(0.4, 0.0, 0.0), &Vector3::z())?;
    let cases: [(&str, f64, f64); 4] = [
        ("glued lid", 0.0, 0.0),
        ("door", 1.2, 0.0),
        ("drawer", 0.0, 0.25),
        ("bottle cap", 3.0, 0.004),
    ];
    println!("thresholds: eps_theta {} rad, eps_d {} m", th.eps_theta, th.eps_d);
    for (name, theta_max, d_max) in cases {
        let screws: Vec<_> = (1..=8)
            .map(|k| {
                let s = k as f64 / 8.0;
                ScrewDisplacement::new(hinge, theta_max * s, d_max * s)
            })
            .collect();
        println!("{name:>10}: {}", classify(&screws, &th)?);
    }
    Ok(())
}
