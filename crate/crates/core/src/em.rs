//! Free-space Green's functions and element-surface quadrature.
//!
//! Time convention is `exp(+jωt)`, so an outgoing wave carries `exp(-jkr)`.
//! The dyadic Green's function is returned without the `-jωμ` radiation
//! prefactor; that constant is common to every model and cancels in NMSE and
//! in the normalized capacity.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{PlacedAperture, WaveSpec};

/// 3×3 complex dyad, units 1/m.
pub type Dyadic3 = Matrix3<Complex64>;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Scalar Green's function `exp(-jk|r|) / (4π|r|)`.
pub fn scalar_green(wave: &WaveSpec, r: &Vector3<f64>) -> Result<Complex64> {
    let dist = r.norm();
    if !(dist > 0.0) {
        return Err(Error::Singular);
    }
    Ok(green_at_distance(wave.wavenumber(), dist))
}

#[inline]
pub(crate) fn green_at_distance(k: f64, dist: f64) -> Complex64 {
    let (s, c) = (k * dist).sin_cos();
    Complex64::new(c, -s) / (FOUR_PI * dist)
}

/// Coefficients of `G = α I − β r̂r̂ᵀ` at separation `r` (assumed nonzero).
#[inline]
pub(crate) fn dyad_coefficients(k: f64, r: &Vector3<f64>) -> (Complex64, Complex64, Vector3<f64>) {
    let dist = r.norm();
    let g = green_at_distance(k, dist);
    let inv = 1.0 / (k * dist);
    let inv2 = inv * inv;
    let alpha = g * Complex64::new(1.0 - inv2, -inv);
    let beta = g * Complex64::new(1.0 - 3.0 * inv2, -3.0 * inv);
    (alpha, beta, r / dist)
}

/// Dyadic Green's function
/// `g(r)·[(1 − j/kr − 1/(kr)²) I − (1 − 3j/kr − 3/(kr)²) r̂r̂ᵀ]`.
pub fn dyadic_green(wave: &WaveSpec, r: &Vector3<f64>) -> Result<Dyadic3> {
    if !(r.norm() > 0.0) {
        return Err(Error::Singular);
    }
    let (alpha, beta, dir) = dyad_coefficients(wave.wavenumber(), r);
    let mut acc = DyadAccumulator::default();
    acc.add(alpha, beta, &dir, 1.0);
    Ok(acc.to_matrix())
}

/// Running weighted sum of dyads, stored as the identity coefficient plus the
/// six unique entries of the symmetric `r̂r̂ᵀ` part.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct DyadAccumulator {
    identity: Complex64,
    // xx, yy, zz, xy, xz, yz
    outer: [Complex64; 6],
}

impl DyadAccumulator {
    #[inline]
    pub(crate) fn add(&mut self, alpha: Complex64, beta: Complex64, dir: &Vector3<f64>, weight: f64) {
        self.identity += alpha * weight;
        let b = beta * weight;
        let (x, y, z) = (dir.x, dir.y, dir.z);
        self.outer[0] += b * (x * x);
        self.outer[1] += b * (y * y);
        self.outer[2] += b * (z * z);
        self.outer[3] += b * (x * y);
        self.outer[4] += b * (x * z);
        self.outer[5] += b * (y * z);
    }

    pub(crate) fn to_matrix(self) -> Dyadic3 {
        let i = self.identity;
        let o = self.outer;
        Matrix3::new(
            i - o[0], -o[3], -o[4],
            -o[3], i - o[1], -o[5],
            -o[4], -o[5], i - o[2],
        )
    }
}

/// Per-element midpoint rule: a `points_per_axis × points_per_axis` sub-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    points_per_axis: usize,
}

impl QuadratureSpec {
    pub fn midpoint(points_per_axis: usize) -> Result<Self> {
        if points_per_axis == 0 {
            return Err(Error::InvalidQuadrature);
        }
        Ok(Self { points_per_axis })
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Points per element (`P` on the TX side, `Q` on the RX side).
    pub fn points_per_element(&self) -> usize {
        self.points_per_axis * self.points_per_axis
    }
}

/// Midpoint-rule nodes and weights over one element's rectangle.
pub fn element_quadrature(
    aperture: &PlacedAperture,
    element_index: usize,
    quad: QuadratureSpec,
) -> Result<Vec<(Vector3<f64>, f64)>> {
    let count = aperture.element_count();
    if element_index >= count {
        return Err(Error::IndexOutOfRange {
            index: element_index,
            count,
        });
    }
    let n = quad.points_per_axis;
    let spec = aperture.spec();
    let (w, h) = (spec.element_width, spec.element_height);
    let weight = spec.element_area() / (n * n) as f64;
    let center = aperture.element_center(element_index);
    let (u, v) = (aperture.frame().u(), aperture.frame().v());
    let frac = |i: usize| (i as f64 + 0.5) / n as f64 - 0.5;
    let mut nodes = Vec::with_capacity(n * n);
    for b in 0..n {
        for a in 0..n {
            nodes.push((center + u * (frac(a) * w) + v * (frac(b) * h), weight));
        }
    }
    Ok(nodes)
}
