use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Direction cross-product norm below which two lines are treated as parallel.
pub const PARALLEL_TOL: f64 = 1e-8;
/// Reciprocal product below which non-parallel lines are treated as intersecting.
pub const INTERSECT_TOL: f64 = 1e-9;

const CONSTRAINT_TOL: f64 = 1e-9;

/// A directed line in Plücker coordinates `(l̂, m)` with `‖l̂‖ = 1` and `⟨l̂, m⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluckerLine {
    direction: Vector3<f64>,
    moment: Vector3<f64>,
}

impl PluckerLine {
    /// Line through `point` along `dir`; `m = p × l̂`.
    pub fn from_point_direction(point: &Vector3<f64>, dir: &Vector3<f64>) -> Result<Self> {
        let n = dir.norm();
        if !n.is_finite() || n <= 1e-12 {
            return Err(Error::invalid("line direction has zero length"));
        }
        if !point.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("line point is not finite"));
        }
        let direction = dir / n;
        Ok(PluckerLine {
            direction,
            moment: point.cross(&direction),
        })
    }

    /// Validates both Plücker constraints within 1e-9.
    pub fn new(direction: Vector3<f64>, moment: Vector3<f64>) -> Result<Self> {
        let line = PluckerLine { direction, moment };
        if !direction.iter().chain(moment.iter()).all(|v| v.is_finite()) {
            return Err(Error::invalid("line coordinates are not finite"));
        }
        if line.constraint_violation() > CONSTRAINT_TOL * (1.0 + moment.norm()) {
            return Err(Error::invalid(format!(
                "Plücker constraints violated: |l|-1 = {:.3e}, <l,m> = {:.3e}",
                direction.norm() - 1.0,
                direction.dot(&moment)
            )));
        }
        Ok(line)
    }

    /// Projects arbitrary 6-vector coordinates onto the constraint manifold:
    /// `l̂ ← l/‖l‖`, `m ← m − ⟨l̂, m⟩ l̂`.
    pub fn projected(direction: Vector3<f64>, moment: Vector3<f64>) -> Result<Self> {
        let n = direction.norm();
        if !n.is_finite() || n <= 1e-12 {
            return Err(Error::invalid("line direction has zero length"));
        }
        let l = direction / n;
        Ok(PluckerLine {
            direction: l,
            moment: moment - l * l.dot(&moment),
        })
    }

    pub(crate) fn new_unchecked(direction: Vector3<f64>, moment: Vector3<f64>) -> Self {
        PluckerLine { direction, moment }
    }

    /// The `+z` axis through the origin, used as the axis of motionless screws.
    pub fn canonical() -> Self {
        PluckerLine {
            direction: Vector3::z(),
            moment: Vector3::zeros(),
        }
    }

    pub fn direction(&self) -> &Vector3<f64> {
        &self.direction
    }

    pub fn moment(&self) -> &Vector3<f64> {
        &self.moment
    }

    /// Point on the line closest to the origin, `l̂ × m`.
    pub fn closest_point_to_origin(&self) -> Vector3<f64> {
        self.direction.cross(&self.moment)
    }

    pub fn point_at(&self, s: f64) -> Vector3<f64> {
        self.closest_point_to_origin() + self.direction * s
    }

    pub fn flipped(&self) -> Self {
        PluckerLine {
            direction: -self.direction,
            moment: -self.moment,
        }
    }

    /// `|‖l̂‖ − 1| + |⟨l̂, m⟩|`.
    pub fn constraint_violation(&self) -> f64 {
        (self.direction.norm() - 1.0).abs() + self.direction.dot(&self.moment).abs()
    }

    /// Distance from a point to this line.
    pub fn distance_to_point(&self, p: &Vector3<f64>) -> f64 {
        (p.cross(&self.direction) - self.moment).norm()
    }

    pub fn as_array(&self) -> ([f64; 3], [f64; 3]) {
        let l = self.direction;
        let m = self.moment;
        ([l.x, l.y, l.z], [m.x, m.y, m.z])
    }
}

/// Distance between two lines with separate intersecting, parallel and skew cases.
///
/// Anti-parallel inputs are sign-aligned before the parallel branch, which uses
/// the bisector of both directions so the result is symmetric in its arguments.
pub fn line_distance(a: &PluckerLine, b: &PluckerLine) -> f64 {
    let cross = a.direction.cross(&b.direction);
    let sin = cross.norm();
    if sin < PARALLEL_TOL {
        let (bl, bm) = if a.direction.dot(&b.direction) < 0.0 {
            (-b.direction, -b.moment)
        } else {
            (b.direction, b.moment)
        };
        let mean = (a.direction + bl).normalize();
        return mean.cross(&(a.moment - bm)).norm();
    }
    let reciprocal = a.direction.dot(&b.moment) + b.direction.dot(&a.moment);
    if reciprocal.abs() < INTERSECT_TOL {
        0.0
    } else {
        reciprocal.abs() / sin
    }
}

/// Angle between two unit vectors, in `[0, π]`.
pub fn axis_angle_between(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}
