//! Planar scan grids shared by the field and qubit-frequency maps.

use crate::error::{Error, Result};
use crate::Vector3;

/// A plane through `origin` spanned by the orthonormal axes `u` and `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSpec {
    pub origin: Vector3,
    pub u: Vector3,
    pub v: Vector3,
}

impl PlaneSpec {
    /// Normalizes `u` and orthogonalizes `v` against it.
    pub fn new(origin: Vector3, u: Vector3, v: Vector3) -> Result<Self> {
        let un = u.norm();
        if !(un > 0.0) || !un.is_finite() {
            return Err(Error::InvalidGrid("plane axis u has zero length".into()));
        }
        let u = u / un;
        let v = v - u * u.dot(&v);
        let vn = v.norm();
        if !(vn > 1e-12) || !vn.is_finite() {
            return Err(Error::InvalidGrid("plane axes are parallel".into()));
        }
        Ok(Self { origin, u, v: v / vn })
    }

    /// The x–y plane through `origin`.
    pub fn xy(origin: Vector3) -> Self {
        Self { origin, u: Vector3::x(), v: Vector3::y() }
    }

    /// The x–z plane through `origin`.
    pub fn xz(origin: Vector3) -> Self {
        Self { origin, u: Vector3::x(), v: Vector3::z() }
    }

    pub fn point(&self, a: f64, b: f64) -> Vector3 {
        self.origin + self.u * a + self.v * b
    }
}

/// A regular `nu × nv` lattice of in-plane coordinates, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize, u_range: (f64, f64), v_range: (f64, f64)) -> Result<Self> {
        let g = Self { nu, nv, u_range, v_range };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::InvalidGrid(format!(
                "grid needs at least 2x2 points, got {}x{}",
                self.nu, self.nv
            )));
        }
        for (name, (lo, hi)) in [("u", self.u_range), ("v", self.v_range)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::InvalidGrid(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn du(&self) -> f64 {
        (self.u_range.1 - self.u_range.0) / (self.nu - 1) as f64
    }

    pub fn dv(&self) -> f64 {
        (self.v_range.1 - self.v_range.0) / (self.nv - 1) as f64
    }

    /// In-plane coordinates of row-major index `k` (rows run along v).
    pub fn coords(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k % self.nu, k / self.nu);
        (
            self.u_range.0 + i as f64 * self.du(),
            self.v_range.0 + j as f64 * self.dv(),
        )
    }
}

/// Row-major scalar or vector samples over a planar grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMap<T> {
    pub plane: PlaneSpec,
    pub grid: GridSpec,
    pub values: Vec<T>,
}

impl<T> PlaneMap<T> {
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.values[j * self.grid.nu + i]
    }

    /// World position of row-major index `k`.
    pub fn position(&self, k: usize) -> Vector3 {
        let (a, b) = self.grid.coords(k);
        self.plane.point(a, b)
    }
}
