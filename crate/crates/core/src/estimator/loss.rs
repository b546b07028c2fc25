//! The multi-objective screw loss and its analytic gradient.
//!
//! `total = λ1·ori + λ2·dist + λ3·cons + λ4·(α1·Lθ + α2·Ld)` where
//!
//! - `ori`: mean angle between the predicted direction and each target axis
//! - `dist`: mean line distance to each target axis
//! - `cons`: `|⟨l, m⟩| + |‖l‖ − 1|` on the raw predicted coordinates
//! - `Lθ`: `Σ_k ‖I − R(θ_k; l̂_k) R(θ̂_k; l̂)ᵀ‖_F`
//! - `Ld`: `Σ_k ‖d_k l̂_k − d̂_k l̂‖`
//!
//! Predictions are raw 6-vectors; the direction is normalized wherever a unit
//! axis is required, so the constraint term is the only place `‖l‖` enters.

use nalgebra::{DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::artmodel::ArticulationModel;
use crate::error::{Error, Result};
use crate::geom3d::{skew, PluckerLine, INTERSECT_TOL, PARALLEL_TOL};
use crate::screwkin::{Configuration, ScrewDisplacement};

/// Below this a norm-type component is treated as sitting on its kink and
/// contributes a zero subgradient.
const KINK_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LossWeights {
    /// axis orientation
    pub lambda1: f64,
    /// axis distance
    pub lambda2: f64,
    /// Plücker constraints
    pub lambda3: f64,
    /// configurations
    pub lambda4: f64,
    /// rotational part of the configuration loss
    pub alpha1: f64,
    /// translational part of the configuration loss
    pub alpha2: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights {
            lambda1: 1.0,
            lambda2: 2.0,
            lambda3: 1.0,
            lambda4: 1.0,
            alpha1: 1.0,
            alpha2: 1.0,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.lambda1,
            self.lambda2,
            self.lambda3,
            self.lambda4,
            self.alpha1,
            self.alpha2,
        ];
        if all.iter().all(|w| w.is_finite() && *w >= 0.0) {
            Ok(())
        } else {
            Err(Error::invalid(format!("loss weights must be non-negative: {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub l_s_ori: f64,
    pub l_s_dist: f64,
    pub l_s_cons: f64,
    pub l_theta: f64,
    pub l_d: f64,
    pub total: f64,
}

/// Unconstrained screw-axis coordinates plus configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScrewParams {
    pub l: Vector3<f64>,
    pub m: Vector3<f64>,
    pub configs: Vec<Configuration>,
}

impl ScrewParams {
    pub fn from_model(model: &ArticulationModel) -> Self {
        ScrewParams {
            l: *model.axis.direction(),
            m: *model.axis.moment(),
            configs: model.configs.clone(),
        }
    }

    pub fn len(&self) -> usize {
        6 + 2 * self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flattened as `[l, m, θ_1..θ_n, d_1..d_n]`.
    pub fn to_vector(&self) -> DVector<f64> {
        let n = self.configs.len();
        let mut v = DVector::zeros(6 + 2 * n);
        v.fixed_rows_mut::<3>(0).copy_from(&self.l);
        v.fixed_rows_mut::<3>(3).copy_from(&self.m);
        for (i, c) in self.configs.iter().enumerate() {
            v[6 + i] = c.theta;
            v[6 + n + i] = c.d;
        }
        v
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        let n = (v.len() - 6) / 2;
        ScrewParams {
            l: v.fixed_rows::<3>(0).into_owned(),
            m: v.fixed_rows::<3>(3).into_owned(),
            configs: (0..n).map(|i| Configuration::new(v[6 + i], v[6 + n + i])).collect(),
        }
    }

    /// Unit direction and orthogonal moment.
    pub fn projected(&self) -> Result<ScrewParams> {
        let line = PluckerLine::projected(self.l, self.m)?;
        Ok(ScrewParams {
            l: *line.direction(),
            m: *line.moment(),
            configs: self.configs.clone(),
        })
    }

    pub fn axis(&self) -> Result<PluckerLine> {
        PluckerLine::projected(self.l, self.m)
    }
}

/// What a prediction is scored against: a set of target axes (averaged in the
/// axis terms) and one target screw per configuration step.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTargets {
    pub axes: Vec<PluckerLine>,
    pub steps: Vec<ScrewDisplacement>,
}

impl LossTargets {
    pub fn from_model(model: &ArticulationModel) -> Self {
        LossTargets {
            axes: vec![model.axis],
            steps: (0..model.configs.len()).map(|i| model.screw(i)).collect(),
        }
    }

    /// Per-step screws as targets; only `axis_active` steps enter the axis terms.
    pub fn from_screws(steps: Vec<ScrewDisplacement>, axis_active: &[bool]) -> Self {
        let axes = steps
            .iter()
            .zip(axis_active)
            .filter(|(_, &a)| a)
            .map(|(s, _)| s.axis)
            .collect();
        LossTargets { axes, steps }
    }
}

pub(crate) fn rodrigues(axis: &Vector3<f64>, theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::identity() * c + skew(axis) * s + axis * axis.transpose() * (1.0 - c)
}

fn angle(u: &Vector3<f64>, a: &Vector3<f64>) -> f64 {
    u.cross(a).norm().atan2(u.dot(a))
}

/// Eq.-1 style distance allowing an unnormalized moment on the predicted side.
fn raw_line_distance(u: &Vector3<f64>, m: &Vector3<f64>, b: &PluckerLine) -> f64 {
    crate::geom3d::line_distance(&PluckerLine::new_unchecked(*u, *m), b)
}

/// Scores raw parameters against targets.
pub fn loss_params(p: &ScrewParams, t: &LossTargets, w: &LossWeights) -> Result<LossBreakdown> {
    if p.configs.len() != t.steps.len() {
        return Err(Error::LengthMismatch {
            expected: t.steps.len(),
            actual: p.configs.len(),
        });
    }
    let ln = p.l.norm();
    if ln.is_nan() || ln <= 0.0 {
        return Err(Error::invalid("predicted direction has zero length"));
    }
    let u = p.l / ln;

    let (mut ori, mut dist) = (0.0, 0.0);
    for a in &t.axes {
        ori += angle(&u, a.direction());
        dist += raw_line_distance(&u, &p.m, a);
    }
    if !t.axes.is_empty() {
        ori /= t.axes.len() as f64;
        dist /= t.axes.len() as f64;
    }
    let cons = p.l.dot(&p.m).abs() + (ln - 1.0).abs();

    let (mut lt, mut ld) = (0.0, 0.0);
    for (c, s) in p.configs.iter().zip(&t.steps) {
        let rt = rodrigues(s.axis.direction(), s.theta);
        let rp = rodrigues(&u, c.theta);
        lt += (Matrix3::identity() - rt * rp.transpose()).norm();
        ld += (s.axis.direction() * s.d - u * c.d).norm();
    }
    let total = w.lambda1 * ori + w.lambda2 * dist + w.lambda3 * cons + w.lambda4 * (w.alpha1 * lt + w.alpha2 * ld);
    Ok(LossBreakdown {
        l_s_ori: ori,
        l_s_dist: dist,
        l_s_cons: cons,
        l_theta: lt,
        l_d: ld,
        total,
    })
}

/// Loss of a predicted model against a target model.
pub fn loss(pred: &ArticulationModel, target: &ArticulationModel, w: &LossWeights) -> Result<LossBreakdown> {
    if pred.configs.len() != target.configs.len() {
        return Err(Error::LengthMismatch {
            expected: target.configs.len(),
            actual: pred.configs.len(),
        });
    }
    loss_params(&ScrewParams::from_model(pred), &LossTargets::from_model(target), w)
}

fn kink_sgn(x: f64) -> f64 {
    if x.abs() <= KINK_TOL {
        0.0
    } else {
        sgn(x)
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Gradient of the constraint term alone, `(∂/∂l, ∂/∂m)`.
pub fn constraint_gradient(l: &Vector3<f64>, m: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let s = kink_sgn(l.dot(m));
    let n = l.norm();
    (m * s + l * (kink_sgn(n - 1.0) / n), l * s)
}

/// Analytic gradient of the total loss, laid out as [`ScrewParams::to_vector`].
///
/// On kinks of the norm-type terms (zero error) the zero subgradient is used.
/// Inside the parallel branch of the line distance the bisector direction is
/// held fixed, so only the moment receives a distance gradient there.
pub fn gradient_of_loss(p: &ScrewParams, t: &LossTargets, w: &LossWeights) -> Result<DVector<f64>> {
    let n = p.configs.len();
    if n != t.steps.len() {
        return Err(Error::LengthMismatch {
            expected: t.steps.len(),
            actual: n,
        });
    }
    let ln = p.l.norm();
    if ln.is_nan() || ln <= 0.0 {
        return Err(Error::invalid("predicted direction has zero length"));
    }
    let u = p.l / ln;
    // d u / d l
    let jac = (Matrix3::identity() - u * u.transpose()) / ln;

    let mut g_u = Vector3::zeros();
    let mut g_l = Vector3::zeros();
    let mut g_m = Vector3::zeros();
    let mut g = DVector::zeros(6 + 2 * n);

    if !t.axes.is_empty() {
        let k = 1.0 / t.axes.len() as f64;
        for b in &t.axes {
            let a = b.direction();
            // orientation
            let cross = u.cross(a);
            let sin = cross.norm();
            if sin > KINK_TOL {
                let cos = u.dot(a);
                g_u += -(a - u * cos) / sin * (w.lambda1 * k);
            }
            // distance
            if sin < PARALLEL_TOL {
                let (al, bm) = if u.dot(a) < 0.0 {
                    (-a, -b.moment())
                } else {
                    (*a, *b.moment())
                };
                let mean = (u + al).normalize();
                let v = mean.cross(&(p.m - bm));
                let vn = v.norm();
                if vn > KINK_TOL {
                    g_m += v.cross(&mean) / vn * (w.lambda2 * k);
                }
            } else {
                let r = u.dot(b.moment()) + a.dot(&p.m);
                if r.abs() >= INTERSECT_TOL {
                    let sr = sgn(r);
                    g_m += a * (sr / sin) * (w.lambda2 * k);
                    let ds_du = a.cross(&cross) / sin;
                    g_u += (b.moment() * (sr / sin) - ds_du * (r.abs() / (sin * sin))) * (w.lambda2 * k);
                }
            }
        }
    }

    let (cl, cm) = constraint_gradient(&p.l, &p.m);
    g_l += cl * w.lambda3;
    g_m += cm * w.lambda3;

    let wt = w.lambda4 * w.alpha1;
    let wd = w.lambda4 * w.alpha2;
    for (i, (c, s)) in p.configs.iter().zip(&t.steps).enumerate() {
        let a = s.axis.direction();
        // rotational term: F = sqrt(6 − 2 tr(Rt Rpᵀ))
        let rt = rodrigues(a, s.theta);
        let rp = rodrigues(&u, c.theta);
        let f = (Matrix3::identity() - rt * rp.transpose()).norm();
        if f > KINK_TOL {
            let (sn, cs) = c.theta.sin_cos();
            let vee = Vector3::new(
                rt[(2, 1)] - rt[(1, 2)],
                rt[(0, 2)] - rt[(2, 0)],
                rt[(1, 0)] - rt[(0, 1)],
            );
            let dtau_dtheta = -sn * rt.trace() + cs * u.dot(&vee) + sn * u.dot(&(rt * u));
            let dtau_du = vee * sn + (rt + rt.transpose()) * u * (1.0 - cs);
            g[6 + i] += -dtau_dtheta / f * wt;
            g_u += -dtau_du / f * wt;
        }
        // translational term
        let e = a * s.d - u * c.d;
        let en = e.norm();
        if en > KINK_TOL {
            g[6 + n + i] += -u.dot(&e) / en * wd;
            g_u += -e * (c.d / en) * wd;
        }
    }

    g_l += jac * g_u;
    g.fixed_rows_mut::<3>(0).copy_from(&g_l);
    g.fixed_rows_mut::<3>(3).copy_from(&g_m);
    Ok(g)
}
