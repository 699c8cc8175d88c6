//! Apertures, element layouts, global placement and field-region classification.
//!
//! Every aperture is a rectangular grid of rectangular elements. Elements are
//! indexed row-major from zero (row varies slowest); columns advance along the
//! aperture's `u` axis and rows along its `v` axis. The element grid is
//! centered, so the centroid of all element centers is the aperture center.

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

const ORTHONORMAL_TOL: f64 = 1e-12;

/// Operating frequency, wavelength and wavenumber of a monochromatic field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpec {
    frequency: f64,
    wavelength: f64,
    wavenumber: f64,
}

impl WaveSpec {
    pub fn new(frequency: f64) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::InvalidWave(format!("frequency {frequency} Hz")));
        }
        let wavelength = SPEED_OF_LIGHT / frequency;
        Ok(Self {
            frequency,
            wavelength,
            wavenumber: 2.0 * std::f64::consts::PI / wavelength,
        })
    }

    /// Builds the spec from a wavelength. `from_wavelength(1.0)` gives
    /// wavelength-normalized units.
    pub fn from_wavelength(wavelength: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidWave(format!("wavelength {wavelength} m")));
        }
        Ok(Self {
            frequency: SPEED_OF_LIGHT / wavelength,
            wavelength,
            wavenumber: 2.0 * std::f64::consts::PI / wavelength,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }
}

/// Layout of a rectangular element grid, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApertureSpec {
    pub rows: usize,
    pub cols: usize,
    /// Center-to-center spacing, identical along both axes.
    pub spacing: f64,
    /// Element extent along the aperture `u` axis.
    pub element_width: f64,
    /// Element extent along the aperture `v` axis.
    pub element_height: f64,
}

impl ApertureSpec {
    /// Gapless aperture: every element fills its `spacing × spacing` cell.
    pub fn gapless(rows: usize, cols: usize, spacing: f64) -> Self {
        Self {
            rows,
            cols,
            spacing,
            element_width: spacing,
            element_height: spacing,
        }
    }

    pub fn with_element_size(mut self, width: f64, height: f64) -> Self {
        self.element_width = width;
        self.element_height = height;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidAperture(format!(
                "{}x{} grid has no elements",
                self.rows, self.cols
            )));
        }
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        if !finite_pos(self.spacing) {
            return Err(Error::InvalidAperture(format!("spacing {}", self.spacing)));
        }
        if !finite_pos(self.element_width) || !finite_pos(self.element_height) {
            return Err(Error::InvalidAperture(format!(
                "element size {}x{}",
                self.element_width, self.element_height
            )));
        }
        if self.element_width > self.spacing || self.element_height > self.spacing {
            return Err(Error::InvalidAperture(format!(
                "element {}x{} exceeds spacing {}",
                self.element_width, self.element_height, self.spacing
            )));
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn element_area(&self) -> f64 {
        self.element_width * self.element_height
    }

    /// Maximum aperture size: diagonal of the element-center grid plus the
    /// element diagonal.
    pub fn diagonal(&self) -> f64 {
        let w = (self.cols - 1) as f64 * self.spacing;
        let h = (self.rows - 1) as f64 * self.spacing;
        w.hypot(h) + self.element_width.hypot(self.element_height)
    }

    /// Physical half extents `(along u, along v)` including element size.
    pub fn half_extents(&self) -> (f64, f64) {
        (
            0.5 * ((self.cols - 1) as f64 * self.spacing + self.element_width),
            0.5 * ((self.rows - 1) as f64 * self.spacing + self.element_height),
        )
    }
}

/// Right-handed orthonormal triad `(u, v, n)`; `u` and `v` span the aperture
/// plane and `n` is its normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    u: Vector3<f64>,
    v: Vector3<f64>,
    n: Vector3<f64>,
}

impl Frame {
    pub fn new(u: Vector3<f64>, v: Vector3<f64>, n: Vector3<f64>) -> Result<Self> {
        let dev = [
            (u.dot(&u) - 1.0).abs(),
            (v.dot(&v) - 1.0).abs(),
            (n.dot(&n) - 1.0).abs(),
            u.dot(&v).abs(),
            u.dot(&n).abs(),
            v.dot(&n).abs(),
            (u.cross(&v) - n).amax(),
        ]
        .into_iter()
        .fold(0.0_f64, |acc, d| if d.is_nan() { f64::INFINITY } else { acc.max(d) });
        if dev > ORTHONORMAL_TOL {
            return Err(Error::NonOrthonormalAxes(dev));
        }
        Ok(Self { u, v, n })
    }

    /// Global axes: `u = x`, `v = y`, `n = z`.
    pub fn standard() -> Self {
        Self {
            u: Vector3::x(),
            v: Vector3::y(),
            n: Vector3::z(),
        }
    }

    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        Self {
            u: rotation * self.u,
            v: rotation * self.v,
            n: rotation * self.n,
        }
    }

    pub fn u(&self) -> Vector3<f64> {
        self.u
    }

    pub fn v(&self) -> Vector3<f64> {
        self.v
    }

    pub fn n(&self) -> Vector3<f64> {
        self.n
    }

    /// Axes as matrix columns `[u v n]`; maps local components to global ones.
    pub fn matrix(&self) -> nalgebra::Matrix3<f64> {
        nalgebra::Matrix3::from_columns(&[self.u, self.v, self.n])
    }
}

/// An aperture placed in space.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedAperture {
    spec: ApertureSpec,
    center: Vector3<f64>,
    frame: Frame,
    offsets: Vec<Vector3<f64>>,
}

/// Lays the elements of `spec` on a centered grid around `center`.
pub fn build_placed_aperture(
    spec: ApertureSpec,
    center: Vector3<f64>,
    frame: Frame,
) -> Result<PlacedAperture> {
    spec.validate()?;
    if !center.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidAperture("non-finite center".into()));
    }
    let col_mid = (spec.cols as f64 - 1.0) / 2.0;
    let row_mid = (spec.rows as f64 - 1.0) / 2.0;
    let mut offsets = Vec::with_capacity(spec.element_count());
    for row in 0..spec.rows {
        for col in 0..spec.cols {
            let a = (col as f64 - col_mid) * spec.spacing;
            let b = (row as f64 - row_mid) * spec.spacing;
            offsets.push(frame.u * a + frame.v * b);
        }
    }
    Ok(PlacedAperture {
        spec,
        center,
        frame,
        offsets,
    })
}

impl PlacedAperture {
    pub fn spec(&self) -> &ApertureSpec {
        &self.spec
    }

    pub fn center(&self) -> Vector3<f64> {
        self.center
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn element_count(&self) -> usize {
        self.offsets.len()
    }

    /// Local offsets of element centers from the aperture center.
    pub fn offsets(&self) -> &[Vector3<f64>] {
        &self.offsets
    }

    pub fn element_center(&self, index: usize) -> Vector3<f64> {
        self.center + self.offsets[index]
    }

    pub fn element_centers(&self) -> impl Iterator<Item = Vector3<f64>> + '_ {
        self.offsets.iter().map(move |q| self.center + q)
    }

    pub fn element_area(&self) -> f64 {
        self.spec.element_area()
    }

    pub fn diagonal(&self) -> f64 {
        self.spec.diagonal()
    }

    /// Applies one rigid motion (rotation about the origin, then translation).
    pub fn transformed(&self, rotation: &Rotation3<f64>, translation: &Vector3<f64>) -> Self {
        PlacedAperture {
            spec: self.spec,
            center: rotation * self.center + translation,
            frame: self.frame.rotated(rotation),
            offsets: self.offsets.iter().map(|q| rotation * q).collect(),
        }
    }

    /// Whether the physical rectangles of two apertures touch or intersect.
    pub fn overlaps(&self, other: &PlacedAperture) -> bool {
        let a = self.as_box();
        let b = other.as_box();
        let mut axes = vec![a.axes[0], a.axes[1], a.axes[2], b.axes[0], b.axes[1], b.axes[2]];
        for ea in &a.axes {
            for eb in &b.axes {
                axes.push(ea.cross(eb));
            }
        }
        let d = b.center - a.center;
        !axes.iter().any(|axis| {
            let norm = axis.norm();
            if norm < 1e-12 {
                return false;
            }
            let axis = axis / norm;
            let ra: f64 = (0..3).map(|i| a.half[i] * a.axes[i].dot(&axis).abs()).sum();
            let rb: f64 = (0..3).map(|i| b.half[i] * b.axes[i].dot(&axis).abs()).sum();
            d.dot(&axis).abs() > ra + rb
        })
    }

    fn as_box(&self) -> OrientedBox {
        let (hu, hv) = self.spec.half_extents();
        OrientedBox {
            center: self.center,
            axes: [self.frame.u, self.frame.v, self.frame.n],
            half: [hu, hv, 0.0],
        }
    }
}

struct OrientedBox {
    center: Vector3<f64>,
    axes: [Vector3<f64>; 3],
    half: [f64; 3],
}

/// Near/far field regions ordered by distance from the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FieldRegion {
    ReactiveNear,
    RadiativeNear,
    Far,
}

impl std::fmt::Display for FieldRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FieldRegion::ReactiveNear => "ReactiveNear",
            FieldRegion::RadiativeNear => "RadiativeNear",
            FieldRegion::Far => "Far",
        })
    }
}

impl std::str::FromStr for FieldRegion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ReactiveNear" => Ok(FieldRegion::ReactiveNear),
            "RadiativeNear" => Ok(FieldRegion::RadiativeNear),
            "Far" => Ok(FieldRegion::Far),
            other => Err(Error::Parse(format!("unknown field region {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRegionReport {
    pub rayleigh_distance: f64,
    pub reactive_bound: f64,
    pub region: FieldRegion,
}

/// Rayleigh distance `2 D² / λ` for an aperture of maximum size `size`.
pub fn rayleigh_distance(size: f64, wave: &WaveSpec) -> f64 {
    2.0 * size * size / wave.wavelength()
}

/// Reactive near-field bound `0.62 √(D³/λ)`.
pub fn reactive_bound(size: f64, wave: &WaveSpec) -> f64 {
    0.62 * (size.powi(3) / wave.wavelength()).sqrt()
}

pub fn classify_region(distance: f64, size: f64, wave: &WaveSpec) -> Result<FieldRegionReport> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    let rayleigh = rayleigh_distance(size, wave);
    let reactive = reactive_bound(size, wave);
    let region = if distance >= rayleigh {
        FieldRegion::Far
    } else if distance < reactive {
        FieldRegion::ReactiveNear
    } else {
        FieldRegion::RadiativeNear
    };
    Ok(FieldRegionReport {
        rayleigh_distance: rayleigh,
        reactive_bound: reactive,
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_wave() -> WaveSpec {
        WaveSpec::from_wavelength(1.0).unwrap()
    }

    #[test]
    fn wave_spec_relations() {
        let w = WaveSpec::new(2.4e9).unwrap();
        assert!((w.wavelength() - SPEED_OF_LIGHT / 2.4e9).abs() < 1e-15);
        assert!((w.wavenumber() * w.wavelength() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(WaveSpec::new(0.0).is_err());
        assert!(WaveSpec::new(-1.0).is_err());
        assert!(WaveSpec::from_wavelength(f64::NAN).is_err());
    }

    #[test]
    fn full_scale_grid() {
        let spec = ApertureSpec::gapless(40, 40, 0.05);
        let ap = build_placed_aperture(spec, Vector3::zeros(), Frame::standard()).unwrap();
        assert_eq!(ap.element_count(), 1600);
        let xs: Vec<f64> = ap.offsets().iter().map(|q| q.x).collect();
        let side = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        assert!((side - 1.95).abs() < 1e-12);
    }

    #[test]
    fn single_element_sits_at_center() {
        let spec = ApertureSpec::gapless(1, 1, 0.3);
        let c = Vector3::new(1.0, -2.0, 3.0);
        let ap = build_placed_aperture(spec, c, Frame::standard()).unwrap();
        assert_eq!(ap.element_count(), 1);
        assert_eq!(ap.offsets()[0], Vector3::zeros());
        assert_eq!(ap.element_center(0), c);
    }

    #[test]
    fn two_by_two_offsets() {
        let spec = ApertureSpec::gapless(2, 2, 0.5);
        let ap = build_placed_aperture(spec, Vector3::zeros(), Frame::standard()).unwrap();
        // row-major: (row 0, col 0), (row 0, col 1), (row 1, col 0), (row 1, col 1)
        let expect = [(-0.25, -0.25), (0.25, -0.25), (-0.25, 0.25), (0.25, 0.25)];
        for (q, (x, y)) in ap.offsets().iter().zip(expect) {
            assert!((q.x - x).abs() < 1e-15 && (q.y - y).abs() < 1e-15 && q.z == 0.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let ok = ApertureSpec::gapless(2, 2, 0.5);
        assert!(build_placed_aperture(ApertureSpec::gapless(0, 2, 0.5), Vector3::zeros(), Frame::standard()).is_err());
        assert!(build_placed_aperture(ok.with_element_size(0.6, 0.5), Vector3::zeros(), Frame::standard()).is_err());
        assert!(build_placed_aperture(ok.with_element_size(0.0, 0.5), Vector3::zeros(), Frame::standard()).is_err());
        let skew = Frame::new(Vector3::x(), Vector3::new(0.1, 1.0, 0.0), Vector3::z());
        assert!(matches!(skew, Err(Error::NonOrthonormalAxes(_))));
        let left = Frame::new(Vector3::x(), Vector3::y(), -Vector3::z());
        assert!(left.is_err());
    }

    #[test]
    fn diagonal_includes_element_extent() {
        let spec = ApertureSpec::gapless(40, 40, 0.05);
        let grid = 1.95 * 2f64.sqrt();
        assert!((spec.diagonal() - (grid + 0.05 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_examples() {
        let w = unit_wave();
        let d = 1.95 * 2f64.sqrt();
        assert!((rayleigh_distance(d, &w) - 15.21).abs() < 1e-9);
        assert_eq!(rayleigh_distance(0.0, &w), 0.0);
        assert!((rayleigh_distance(1.0, &w) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn region_examples() {
        let w = unit_wave();
        let d = 2.7577;
        assert_eq!(classify_region(300.0, d, &w).unwrap().region, FieldRegion::Far);
        let r = classify_region(6.0, d, &w).unwrap();
        assert_eq!(r.region, FieldRegion::RadiativeNear);
        assert!((r.reactive_bound - 2.84).abs() < 0.01);
        assert_eq!(classify_region(1.0, d, &w).unwrap().region, FieldRegion::ReactiveNear);
        assert!(matches!(classify_region(0.0, d, &w), Err(Error::NonPositiveDistance(_))));
    }

    #[test]
    fn reactive_bound_below_rayleigh_for_large_apertures() {
        let w = unit_wave();
        for d in [0.78, 1.0, 3.0, 50.0] {
            assert!(reactive_bound(d, &w) < rayleigh_distance(d, &w));
        }
    }

    #[test]
    fn overlap_detection() {
        let spec = ApertureSpec::gapless(4, 4, 0.1);
        let a = build_placed_aperture(spec, Vector3::zeros(), Frame::standard()).unwrap();
        let near = build_placed_aperture(spec, Vector3::new(0.0, 0.0, 1e-3), Frame::standard()).unwrap();
        let same_plane = build_placed_aperture(spec, Vector3::new(0.2, 0.0, 0.0), Frame::standard()).unwrap();
        let crossing = build_placed_aperture(
            spec,
            Vector3::new(0.0, 0.0, 0.05),
            Frame::new(Vector3::x(), Vector3::z(), -Vector3::y()).unwrap(),
        )
        .unwrap();
        assert!(!a.overlaps(&near));
        assert!(a.overlaps(&same_plane));
        assert!(a.overlaps(&crossing));
    }

    proptest! {
        #[test]
        fn offsets_are_centered(rows in 1usize..9, cols in 1usize..9, s in 0.01f64..2.0) {
            let ap = build_placed_aperture(ApertureSpec::gapless(rows, cols, s), Vector3::zeros(), Frame::standard()).unwrap();
            let sum: Vector3<f64> = ap.offsets().iter().sum();
            prop_assert!(sum.norm() < 1e-12 * (rows * cols) as f64 * s.max(1.0));
        }

        #[test]
        fn min_pair_distance_is_spacing(rows in 1usize..7, cols in 2usize..7, s in 0.01f64..2.0) {
            let ap = build_placed_aperture(ApertureSpec::gapless(rows, cols, s), Vector3::zeros(), Frame::standard()).unwrap();
            let mut min = f64::INFINITY;
            for i in 0..ap.element_count() {
                for j in i + 1..ap.element_count() {
                    min = min.min((ap.offsets()[i] - ap.offsets()[j]).norm());
                }
            }
            prop_assert!((min - s).abs() <= 1e-12 * s);
        }

        #[test]
        fn region_is_monotone(size in 0.1f64..10.0, a in 0.01f64..500.0, b in 0.01f64..500.0) {
            let w = unit_wave();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(classify_region(lo, size, &w).unwrap().region <= classify_region(hi, size, &w).unwrap().region);
        }

        #[test]
        fn rayleigh_is_quadratic(size in 0.0f64..100.0) {
            let w = unit_wave();
            let r1 = rayleigh_distance(size, &w);
            let r2 = rayleigh_distance(2.0 * size, &w);
            prop_assert!((r2 - 4.0 * r1).abs() <= 1e-12 * r2.max(1.0));
        }
    }
}
