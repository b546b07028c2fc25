//! Independent oracles and random inputs shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use screwkit::geom3d::{PluckerLine, Pose, Rotation};
use screwkit::screwkin::ScrewDisplacement;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn point<R: Rng>(rng: &mut R, half: f64) -> Vector3<f64> {
    Vector3::from_fn(|_, _| rng.random_range(-half..half))
}

pub fn pose<R: Rng>(rng: &mut R) -> Pose {
    let angle = rng.random_range(0.0..std::f64::consts::PI);
    Pose::new(Rotation::from_axis_angle(&unit(rng), angle), point(rng, 2.0))
}

pub fn line<R: Rng>(rng: &mut R) -> PluckerLine {
    PluckerLine::from_point_direction(&point(rng, 2.0), &unit(rng)).unwrap()
}

/// Distance between two lines by direct minimization over the two line
/// parameters: a coarse grid seeds coordinate descent, where each step is the
/// exact 1-D minimizer along one line.
pub fn brute_force_distance(a: &PluckerLine, b: &PluckerLine) -> f64 {
    let (pa, la) = (a.closest_point_to_origin(), *a.direction());
    let (pb, lb) = (b.closest_point_to_origin(), *b.direction());
    let dist = |s: f64, t: f64| (pa + la * s - pb - lb * t).norm();
    let (mut s, mut t) = (0.0, 0.0);
    let mut best = dist(0.0, 0.0);
    for i in -20..=20 {
        for j in -20..=20 {
            let (si, tj) = (i as f64 * 0.25, j as f64 * 0.25);
            let d = dist(si, tj);
            if d < best {
                best = d;
                s = si;
                t = tj;
            }
        }
    }
    for _ in 0..200_000 {
        let s_new = la.dot(&(pb + lb * t - pa));
        let t_new = lb.dot(&(pa + la * s_new - pb));
        let moved = (s_new - s).abs() + (t_new - t).abs();
        s = s_new;
        t = t_new;
        if moved < 1e-13 {
            break;
        }
    }
    dist(s, t)
}

/// Screw parameters from the rotation matrix and translation alone: the axis
/// spans the null space of `R − I`, the point solves `(I − R) p = t − d l̂` in
/// the least-squares sense.
pub fn svd_screw(pose: &Pose) -> ScrewDisplacement {
    let r = pose.rotation.matrix();
    let t = pose.translation;
    let svd = (r - Matrix3::identity()).svd(true, true);
    let k = svd.singular_values.imin();
    let mut l: Vector3<f64> = svd.v_t.unwrap().row(k).transpose();
    let vee = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
    if l.dot(&vee) < 0.0 {
        l = -l;
    }
    let cos = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    let sin = l.dot(&vee) / 2.0;
    let theta = sin.atan2(cos);
    let d = l.dot(&t);
    let rhs = t - l * d;
    let p = (Matrix3::identity() - r).svd(true, true).solve(&rhs, 1e-9).unwrap();
    ScrewDisplacement {
        axis: PluckerLine::from_point_direction(&p, &l).unwrap(),
        theta,
        d,
    }
}

pub fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

use screwkit::estimator::{gradient_of_loss, loss_params, LossTargets, LossWeights, ScrewParams};
use screwkit::screwkin::Configuration;
use screwkit::{ArticulationModel, ModelCategory};

/// A random, off-manifold parameter point and random targets.
pub fn random_loss_problem<R: Rng>(rng: &mut R, n: usize) -> (ScrewParams, LossTargets) {
    let l = unit(rng) * rng.random_range(0.5..1.5);
    let m = point(rng, 1.0);
    let configs = (0..n)
        .map(|_| Configuration::new(rng.random_range(-2.0..2.0), rng.random_range(-0.5..0.5)))
        .collect();
    let target = ArticulationModel::new(
        ModelCategory::Helical,
        line(rng),
        (0..n)
            .map(|_| Configuration::new(rng.random_range(-2.0..2.0), rng.random_range(-0.5..0.5)))
            .collect(),
    );
    (ScrewParams { l, m, configs }, LossTargets::from_model(&target))
}

/// Largest componentwise relative error between the analytic gradient and
/// central differences with step `h`.
pub fn gradient_fd_error(p: &ScrewParams, t: &LossTargets, w: &LossWeights, h: f64) -> f64 {
    let g = gradient_of_loss(p, t, w).unwrap();
    let x = p.to_vector();
    let f = |x: &nalgebra::DVector<f64>| loss_params(&ScrewParams::from_vector(x), t, w).unwrap().total;
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        let mut xp = x.clone();
        xp[i] += h;
        let mut xm = x.clone();
        xm[i] -= h;
        let fd = (f(&xp) - f(&xm)) / (2.0 * h);
        let err = (g[i] - fd).abs() / g[i].abs().max(fd.abs()).max(1e-3);
        worst = worst.max(err);
    }
    worst
}
