//! Relative pose to screw displacement and back.

use screwkit::geom3d::Vector3;
use screwkit::screwkin::{pitch, Pitch};
use screwkit::{apply_screw, screw_from_relative_pose, Pose, Rotation};

fn main() -> screwkit::Result<()> {
    // A twist of 60 deg about a vertical axis through (1, 0, 0), plus 5 cm of lift.
    let axis = Rotation::from_axis_angle(&Vector3::z(), 60f64.to_radians());
    let p = Vector3::new(1.0, 0.0, 0.0);
    let pose = Pose::new(axis, p - axis.rotate(&p) + Vector3::new(0.0, 0.0, 0.05));

    let s = screw_from_relative_pose(&pose);
    println!(
        "axis l = {:?}, point {:?}",
        s.axis.direction().as_slice(),
        s.axis.closest_point_to_origin().as_slice()
    );
    println!("theta = {:.4} deg, d = {:.4} m", s.theta.to_degrees(), s.d);
    match pitch(&s) {
        Pitch::Finite(h) => println!("pitch {h:.5} m/rad"),
        Pitch::Infinite => println!("pure translation"),
        Pitch::ZeroMotion => println!("no motion"),
    }

    let back = apply_screw(&s);
    let err = (back.translation - pose.translation).norm() + back.rotation.inverse().compose(&pose.rotation).angle();
    println!("reconstruction error {err:.2e}");

    let slide = screw_from_relative_pose(&Pose::from_translation(Vector3::new(0.0, 0.3, 0.4)));
    println!("a pure translation gives theta = {}, d = {:.2}", slide.theta, slide.d);
    Ok(())
}
