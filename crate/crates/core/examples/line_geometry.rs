//! Plücker lines, their distance and how a rigid motion moves them.

use screwkit::geom3d::{axis_angle_between, Vector3};
use screwkit::{line_distance, LineMotionMatrix, PluckerLine, Pose, Rotation};

fn main() -> screwkit::Result<()> {
    let a = PluckerLine::from_point_direction(&Vector3::new(0.0, 0.0, 0.0), &Vector3::x())?;
    let b = PluckerLine::from_point_direction(&Vector3::new(0.0, 0.0, 1.0), &Vector3::y())?;
    let c = PluckerLine::from_point_direction(&Vector3::new(0.0, 2.0, 0.0), &Vector3::x())?;

    println!("a: l = {:?}, m = {:?}", a.direction().as_slice(), a.moment().as_slice());
    println!("skew     d(a, b) = {:.3}", line_distance(&a, &b));
    println!("parallel d(a, c) = {:.3}", line_distance(&a, &c));
    println!("flipped  d(a, -a) = {:.3}", line_distance(&a, &a.flipped()));

    // Moving a line by a pose is a 6x6 linear map on (l, m).
    let g = Pose::new(
        Rotation::from_axis_angle(&Vector3::z(), 90f64.to_radians()),
        Vector3::new(1.0, 0.0, 0.0),
    );
    let moved = LineMotionMatrix::from_pose(&g).transform_line(&a);
    println!(
        "after 90 deg about z and 1 m along x: l = {:?}, closest point {:?}",
        moved.direction().as_slice(),
        moved.closest_point_to_origin().as_slice()
    );
    println!(
        "angle between a and moved: {:.1} deg",
        axis_angle_between(a.direction(), moved.direction()).to_degrees()
    );
    Ok(())
}
