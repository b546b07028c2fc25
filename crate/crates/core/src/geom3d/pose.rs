use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::Rotation;

/// A rigid transform in SE(3): `p ↦ R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    #[serde(rename = "q")]
    pub rotation: Rotation,
    #[serde(rename = "t", with = "vec3_array")]
    pub translation: Vector3<f64>,
}

impl Pose {
    pub fn new(rotation: Rotation, translation: Vector3<f64>) -> Self {
        Pose { rotation, translation }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_translation(t: Vector3<f64>) -> Self {
        Pose::new(Rotation::identity(), t)
    }

    pub fn from_rotation(r: Rotation) -> Self {
        Pose::new(r, Vector3::zeros())
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation.compose(&other.rotation),
            translation: self.rotation.rotate(&other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let inv = self.rotation.inverse();
        Pose {
            rotation: inv,
            translation: -inv.rotate(&self.translation),
        }
    }

    /// Pose of `other` expressed in the frame of `self`: `self⁻¹ ∘ other`.
    pub fn between(&self, other: &Pose) -> Pose {
        self.inverse().compose(other)
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.rotate(p) + self.translation
    }

    pub fn transform_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.rotate(v)
    }

    /// Max of rotation-matrix and translation deviation, a cheap "same pose" metric.
    pub fn distance_to(&self, other: &Pose) -> f64 {
        let dr = (self.rotation.matrix() - other.rotation.matrix()).amax();
        let dt = (self.translation - other.translation).amax();
        dr.max(dt)
    }
}

pub(crate) mod vec3_array {
    use nalgebra::Vector3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vector3<f64>, s: S) -> Result<S::Ok, S::Error> {
        [v.x, v.y, v.z].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector3<f64>, D::Error> {
        let a = <[f64; 3]>::deserialize(d)?;
        Ok(Vector3::new(a[0], a[1], a[2]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Pose, Pose, Pose) {
        let a = Pose::new(
            Rotation::from_rotation_vector(&Vector3::new(0.1, 0.2, -0.3)),
            Vector3::new(1.0, -2.0, 0.5),
        );
        let b = Pose::new(
            Rotation::from_rotation_vector(&Vector3::new(-1.1, 0.4, 2.0)),
            Vector3::new(0.0, 0.3, -0.7),
        );
        let c = Pose::new(
            Rotation::from_rotation_vector(&Vector3::new(0.0, 2.5, 0.1)),
            Vector3::new(3.0, 0.0, 0.2),
        );
        (a, b, c)
    }

    #[test]
    fn composition_is_associative() {
        let (a, b, c) = sample();
        let lhs = a.compose(&b).compose(&c);
        let rhs = a.compose(&b.compose(&c));
        assert!(lhs.distance_to(&rhs) < 1e-12);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let (a, _, _) = sample();
        assert!(a.compose(&a.inverse()).distance_to(&Pose::identity()) < 1e-12);
        assert!(a.inverse().compose(&a).distance_to(&Pose::identity()) < 1e-12);
    }

    #[test]
    fn point_transform_matches_composition() {
        let (a, b, _) = sample();
        let p = Vector3::new(0.3, 0.2, 0.1);
        let direct = a.transform_point(&b.transform_point(&p));
        let composed = a.compose(&b).transform_point(&p);
        assert!((direct - composed).norm() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let p = Pose::from_translation(Vector3::new(1.0, 2.0, 3.0));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"q":[1.0,0.0,0.0,0.0],"t":[1.0,2.0,3.0]}"#);
        let back: Pose = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
