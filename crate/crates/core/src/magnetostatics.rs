//! Point-dipole model of a uniformly magnetized microsphere.
//!
//! Outside a uniformly magnetized sphere the stray field is exactly that of a
//! point dipole at its center, so the sphere radius only defines the region
//! where evaluation is refused.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::constants::{MU0, MU0_OVER_4PI};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::{GridSpec, PlaneMap, PlaneSpec};
use crate::Vector3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetModel {
    /// Dipole moment, A·m².
    pub moment: Vector3,
    /// Sphere center, m.
    pub position: Vector3,
    /// Sphere radius, m.
    pub radius: f64,
}

/// ∂B_i/∂x_j in T/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientTensor(pub Matrix3<f64>);

impl GradientTensor {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Largest |T_ij − T_ji| relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.0;
        let scale = m.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (m - m.transpose()).amax() / scale
    }

    /// |trace| relative to the largest entry.
    pub fn relative_trace(&self) -> f64 {
        let scale = self.0.amax();
        if scale == 0.0 {
            return 0.0;
        }
        self.0.trace().abs() / scale
    }

    /// Directional derivative of the field along `direction`.
    pub fn directional(&self, direction: &Vector3) -> Vector3 {
        self.0 * direction
    }
}

impl MagnetModel {
    pub fn new(moment: Vector3, position: Vector3, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::param("magnet.radius", format!("must be > 0, got {radius}")));
        }
        if !moment.iter().chain(position.iter()).all(|x| x.is_finite()) {
            return Err(Error::param("magnet", "moment and position must be finite"));
        }
        Ok(Self { moment, position, radius })
    }

    /// Sphere of the given radius and remanence magnetized along `easy_axis`.
    pub fn from_remanence(radius: f64, remanence: f64, easy_axis: Vector3, position: Vector3) -> Result<Self> {
        let moment = calibrate_moment(radius, remanence, easy_axis)?;
        Self::new(moment, position, radius)
    }

    fn separation(&self, r: &Vector3) -> Result<Vector3> {
        let d = r - self.position;
        let dist = d.norm();
        if dist <= self.radius || !dist.is_finite() {
            return Err(Error::EvaluationInsideMagnet {
                distance: dist,
                radius: self.radius,
                index: None,
            });
        }
        Ok(d)
    }
}

/// Anything that can report a static magnetic field at a point.
pub trait FieldSource: Sync {
    fn field_at(&self, r: &Vector3) -> Result<Vector3>;
}

impl FieldSource for MagnetModel {
    fn field_at(&self, r: &Vector3) -> Result<Vector3> {
        dipole_field(self, r)
    }
}

/// Spatially uniform field (a magnet removed to infinity, or a bias coil).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformField(pub Vector3);

impl FieldSource for UniformField {
    fn field_at(&self, _r: &Vector3) -> Result<Vector3> {
        Ok(self.0)
    }
}

/// B(r) = (μ₀/4π)·[3(m·r̂)r̂ − m]/|r|³.
pub fn dipole_field(magnet: &MagnetModel, r: &Vector3) -> Result<Vector3> {
    let d = magnet.separation(r)?;
    let m = magnet.moment;
    let r2 = d.norm_squared();
    let r_norm = r2.sqrt();
    let inv_r3 = 1.0 / (r2 * r_norm);
    let m_dot_r = m.dot(&d);
    Ok((d * (3.0 * m_dot_r / r2) - m) * (MU0_OVER_4PI * inv_r3))
}

/// Analytic ∂B_i/∂x_j of the dipole field.
pub fn dipole_gradient(magnet: &MagnetModel, r: &Vector3) -> Result<GradientTensor> {
    let d = magnet.separation(r)?;
    let m = magnet.moment;
    let r2 = d.norm_squared();
    let r_norm = r2.sqrt();
    let inv_r5 = 1.0 / (r2 * r2 * r_norm);
    let m_dot_r = m.dot(&d);
    let k = 3.0 * MU0_OVER_4PI * inv_r5;
    let mut g = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { m_dot_r } else { 0.0 };
            g[(i, j)] = k * (m[j] * d[i] + m[i] * d[j] + delta - 5.0 * m_dot_r * d[i] * d[j] / r2);
        }
    }
    Ok(GradientTensor(g))
}

/// Row-major map of [`dipole_field`] over a planar grid.
pub fn field_map(
    exec: Execution,
    magnet: &MagnetModel,
    plane: &PlaneSpec,
    grid: &GridSpec,
) -> Result<PlaneMap<Vector3>> {
    grid.validate()?;
    let values = exec.try_map(grid.len(), |k| {
        let (a, b) = grid.coords(k);
        dipole_field(magnet, &plane.point(a, b)).map_err(|e| with_index(e, k))
    })?;
    Ok(PlaneMap { plane: *plane, grid: *grid, values })
}

pub(crate) fn with_index(e: Error, k: usize) -> Error {
    match e {
        Error::EvaluationInsideMagnet { distance, radius, .. } => Error::EvaluationInsideMagnet {
            distance,
            radius,
            index: Some(k),
        },
        other => other,
    }
}

/// Dipole moment of a uniformly magnetized sphere: |m| = B_r·(4/3)πR³/μ₀,
/// directed along `easy_axis`.
pub fn calibrate_moment(radius: f64, remanence: f64, easy_axis: Vector3) -> Result<Vector3> {
    if !(radius > 0.0) {
        return Err(Error::param("magnet.radius", format!("must be > 0, got {radius}")));
    }
    if !(remanence >= 0.0) {
        return Err(Error::param("magnet.remanence", format!("must be >= 0, got {remanence}")));
    }
    let n = easy_axis.norm();
    if !(n > 0.0) {
        return Err(Error::param("magnet.easy_axis", "must be non-zero"));
    }
    let magnitude = remanence * (4.0 / 3.0) * PI * radius.powi(3) / MU0;
    Ok(easy_axis * (magnitude / n))
}

/// Distance along the moment axis at which the on-axis field 2(μ₀/4π)|m|/z³
/// equals `field`.
pub fn on_axis_standoff_for_field(magnet: &MagnetModel, field: f64) -> Result<f64> {
    if !(field > 0.0) {
        return Err(Error::param("magnet.target_field", "must be > 0"));
    }
    let z = (2.0 * MU0_OVER_4PI * magnet.moment.norm() / field).cbrt();
    outside(magnet, z)
}

/// Distance along the moment axis at which the on-axis gradient
/// |∂B_z/∂z| = 6(μ₀/4π)|m|/z⁴ equals `gradient` (T/m).
pub fn on_axis_standoff_for_gradient(magnet: &MagnetModel, gradient: f64) -> Result<f64> {
    if !(gradient > 0.0) {
        return Err(Error::param("magnet.target_gradient", "must be > 0"));
    }
    let z = (6.0 * MU0_OVER_4PI * magnet.moment.norm() / gradient).powf(0.25);
    outside(magnet, z)
}

fn outside(magnet: &MagnetModel, z: f64) -> Result<f64> {
    if z <= magnet.radius {
        Err(Error::EvaluationInsideMagnet { distance: z, radius: magnet.radius, index: None })
    } else {
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_dipole() -> MagnetModel {
        MagnetModel::new(Vector3::z(), Vector3::zeros(), 0.1).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn on_axis_field() {
        // 2·(μ₀/4π)·m/z³ with m = 1, z = 1
        let b = dipole_field(&unit_dipole(), &Vector3::new(0.0, 0.0, 1.0)).unwrap();
        assert!(rel(b.z, 2e-7) < 1e-15);
        assert_eq!((b.x, b.y), (0.0, 0.0));
    }

    #[test]
    fn equatorial_field() {
        let b = dipole_field(&unit_dipole(), &Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(rel(b.z, -1e-7) < 1e-15);
        assert!(b.x.abs() < 1e-30);
    }

    #[test]
    fn zero_moment_gives_zero_field() {
        let m = MagnetModel::new(Vector3::zeros(), Vector3::zeros(), 1e-6).unwrap();
        let b = dipole_field(&m, &Vector3::new(3e-6, -2e-6, 5e-6)).unwrap();
        assert_eq!(b, Vector3::zeros());
    }

    #[test]
    fn inside_magnet_is_an_error() {
        let m = unit_dipole();
        for r in [Vector3::zeros(), Vector3::new(0.1, 0.0, 0.0), Vector3::new(0.05, 0.05, 0.0)] {
            assert!(matches!(
                dipole_field(&m, &r),
                Err(Error::EvaluationInsideMagnet { index: None, .. })
            ));
            assert!(dipole_gradient(&m, &r).is_err());
        }
    }

    #[test]
    fn on_axis_gradient() {
        // d/dz of μ₀m/(2πz³) = −6e−7 at z = 1
        let g = dipole_gradient(&unit_dipole(), &Vector3::new(0.0, 0.0, 1.0)).unwrap();
        assert!(rel(g.get(2, 2), -6e-7) < 1e-15);
        assert!(g.asymmetry() < 1e-15);
        assert!(g.relative_trace() < 1e-15);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let m = MagnetModel::new(Vector3::new(0.3, -1.2, 2.0), Vector3::new(0.1, 0.2, -0.3), 0.2).unwrap();
        let r = Vector3::new(0.7, -0.4, 0.9);
        let g = dipole_gradient(&m, &r).unwrap();
        let h = 1e-6 * (r - m.position).norm();
        for j in 0..3 {
            let mut e = Vector3::zeros();
            e[j] = h;
            let fd = (dipole_field(&m, &(r + e)).unwrap() - dipole_field(&m, &(r - e)).unwrap()) / (2.0 * h);
            for i in 0..3 {
                let scale = g.0.amax();
                assert!((fd[i] - g.get(i, j)).abs() / scale < 1e-5, "({i},{j})");
            }
        }
    }

    #[test]
    fn moment_calibration() {
        let m = calibrate_moment(9e-6, 1.4, Vector3::z()).unwrap();
        // 1.4·(4/3)π(9e−6)³/(4π·1e−7) = 1.4·243e−18/1e−7·(1/3)... evaluated by hand: 3.402e−9
        assert!(rel(m.z, 3.402e-9) < 1e-3, "{}", m.z);
        assert_eq!(calibrate_moment(9e-6, 0.0, Vector3::z()).unwrap(), Vector3::zeros());
        let big = calibrate_moment(18e-6, 1.4, Vector3::new(0.0, 0.0, 3.0)).unwrap();
        assert!(rel(big.z, 8.0 * m.z) < 1e-14);
        assert!(calibrate_moment(0.0, 1.4, Vector3::z()).is_err());
    }

    #[test]
    fn field_map_symmetry_and_errors() {
        let m = unit_dipole();
        // x-z plane at y = 0 mirrored about x = 0: Bx flips, Bz kept.
        let plane = PlaneSpec::xz(Vector3::zeros());
        let grid = GridSpec::new(2, 2, (-1.0, 1.0), (0.5, 1.5)).unwrap();
        let map = field_map(Execution::Parallel, &m, &plane, &grid).unwrap();
        for j in 0..2 {
            let (l, r) = (map.get(0, j), map.get(1, j));
            assert!((l.x + r.x).abs() < 1e-22);
            assert!((l.z - r.z).abs() < 1e-22);
        }
        assert!(GridSpec::new(1, 1, (0.0, 1.0), (0.0, 1.0)).is_err());

        let through = GridSpec::new(3, 3, (-1.0, 1.0), (-1.0, 1.0)).unwrap();
        match field_map(Execution::Sequential, &m, &plane, &through) {
            Err(Error::EvaluationInsideMagnet { index: Some(4), .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn working_distance_field_is_tens_of_millitesla() {
        let m = MagnetModel::from_remanence(9e-6, 1.4, Vector3::z(), Vector3::zeros()).unwrap();
        let b = dipole_field(&m, &Vector3::new(0.0, 0.0, 20e-6)).unwrap();
        assert!(b.norm() > 0.02 && b.norm() < 0.2, "{}", b.norm());
    }

    #[test]
    fn standoff_calibration() {
        let m = MagnetModel::from_remanence(9e-6, 1.4, Vector3::z(), Vector3::zeros()).unwrap();
        let z = on_axis_standoff_for_field(&m, 0.05).unwrap();
        let b = dipole_field(&m, &Vector3::new(0.0, 0.0, z)).unwrap();
        assert!(rel(b.z, 0.05) < 1e-12);
        let z = on_axis_standoff_for_gradient(&m, 2.0e4).unwrap();
        let g = dipole_gradient(&m, &Vector3::new(0.0, 0.0, z)).unwrap();
        assert!(rel(g.get(2, 2).abs(), 2.0e4) < 1e-12);
        assert!(on_axis_standoff_for_gradient(&m, 1e9).is_err());
    }
}
