//! Stochastic NLoS channels.
//!
//! Two model families live here: the cluster/multipath model, a sum of
//! near-field response outer products over point scatterers, and the one-ring
//! spatial correlation model with Gaussian realizations drawn from it.
//!
//! All randomness is seeded explicitly through ChaCha8. Batches derive the
//! generator for realization `i` from the seed and stream `i`, so results do
//! not depend on how a batch is split across threads.

use nalgebra::{DMatrix, DVector, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{PlacedAperture, WaveSpec};
use crate::los::{geometry_hash, ChannelMatrix, ModelKind, Polarization};

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpreadFamily {
    /// Uniform on `[mean − spread, mean + spread]`.
    Uniform,
    /// Normal with standard deviation `spread`, wrapped onto the circle.
    WrappedGaussian,
    /// Laplacian with standard deviation `spread`, wrapped.
    Laplacian,
    /// Von Mises; `spread` is the concentration κ.
    VonMises,
}

/// Azimuth distribution of scattered paths about a mean direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularSpreadSpec {
    family: SpreadFamily,
    mean_angle: f64,
    spread: f64,
}

/// Maps an angle onto `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    x - 2.0 * PI * ((x - PI) / (2.0 * PI)).ceil()
}

impl AngularSpreadSpec {
    pub fn new(family: SpreadFamily, mean_angle: f64, spread: f64) -> Result<Self> {
        if !(spread.is_finite() && spread > 0.0) {
            return Err(Error::InvalidSpread(format!("spread {spread}")));
        }
        if !mean_angle.is_finite() {
            return Err(Error::InvalidSpread(format!("mean angle {mean_angle}")));
        }
        if family == SpreadFamily::Uniform && spread > PI {
            return Err(Error::InvalidSpread(format!("uniform half-width {spread} exceeds π")));
        }
        Ok(Self {
            family,
            mean_angle,
            spread,
        })
    }

    pub fn family(&self) -> SpreadFamily {
        self.family
    }

    pub fn mean_angle(&self) -> f64 {
        self.mean_angle
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    /// Draws one azimuth in `(−π, π]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let offset = match self.family {
            SpreadFamily::Uniform => self.spread * rng.random_range(-1.0..=1.0),
            SpreadFamily::WrappedGaussian => self.spread * rng.sample::<f64, _>(StandardNormal),
            SpreadFamily::Laplacian => {
                let b = self.spread / std::f64::consts::SQRT_2;
                let u: f64 = rng.random::<f64>() - 0.5;
                -b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            SpreadFamily::VonMises => von_mises_offset(self.spread, rng),
        };
        wrap_angle(self.mean_angle + offset)
    }
}

/// Best–Fisher rejection sampler for a zero-mean von Mises variate.
fn von_mises_offset<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> f64 {
    if kappa < 1e-8 {
        return rng.random_range(-PI..PI);
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let theta = f.clamp(-1.0, 1.0).acos();
            return if u3 > 0.5 { theta } else { -theta };
        }
    }
}

/// Point scatterers with complex path gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ScattererSet {
    positions: Vec<Vector3<f64>>,
    gains: Vec<Complex64>,
    seed: u64,
}

impl ScattererSet {
    pub fn new(positions: Vec<Vector3<f64>>, gains: Vec<Complex64>, seed: u64) -> Result<Self> {
        if positions.is_empty() || positions.len() != gains.len() {
            return Err(Error::EmptyScattererSet);
        }
        Ok(Self { positions, gains, seed })
    }

    pub fn positions(&self) -> &[Vector3<f64>] {
        &self.positions
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Same geometry with every gain multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            positions: self.positions.clone(),
            gains: self.gains.iter().map(|g| g * factor).collect(),
            seed: self.seed,
        }
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    Complex64::new(s * rng.sample::<f64, _>(StandardNormal), s * rng.sample::<f64, _>(StandardNormal))
}

/// Near-field response of `aperture` to a point source, referenced to the
/// aperture center: `exp(−jk(|s − r_m| − |s − c|))`.
pub fn near_field_array_response(
    aperture: &PlacedAperture,
    source: &Vector3<f64>,
    wave: &WaveSpec,
) -> Result<DVector<Complex64>> {
    let k = wave.wavenumber();
    let reference = (source - aperture.center()).norm();
    let mut out = DVector::zeros(aperture.element_count());
    for (m, r) in aperture.element_centers().enumerate() {
        let d = (source - r).norm();
        if !(d > 0.0) {
            return Err(Error::CoincidentSource(m));
        }
        let (s, c) = (k * (d - reference)).sin_cos();
        out[m] = Complex64::new(c, -s);
    }
    Ok(out)
}

/// Places `count` scatterers in the plane spanned by the TX→RX bearing and
/// the TX `u` axis. Azimuths follow `spread` about the bearing, radii from the
/// TX center are uniform in `radial_range`, and points behind the TX aperture
/// are mirrored into its front half-space. Gains are i.i.d. CN(0, 1/count).
pub fn sample_scatterers(
    tx: &PlacedAperture,
    rx: &PlacedAperture,
    count: usize,
    spread: &AngularSpreadSpec,
    radial_range: (f64, f64),
    seed: u64,
) -> Result<ScattererSet> {
    if count == 0 {
        return Err(Error::EmptyScattererSet);
    }
    let (r_min, r_max) = radial_range;
    if !(r_min.is_finite() && r_max.is_finite() && r_min > 0.0 && r_max >= r_min) {
        return Err(Error::EmptyRadialRange(r_min, r_max));
    }
    let link = rx.center() - tx.center();
    if !(link.norm() > 0.0) {
        return Err(Error::CoincidentCenters);
    }
    let bearing = link.normalize();
    let frame = tx.frame();
    let lateral = [frame.u(), frame.v()]
        .into_iter()
        .map(|a| a - bearing * bearing.dot(&a))
        .find(|a| a.norm() > 1e-9)
        .map(|a| a.normalize())
        .unwrap_or_else(|| frame.n());
    let normal = frame.n();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variance = 1.0 / count as f64;
    let mut positions = Vec::with_capacity(count);
    let mut gains = Vec::with_capacity(count);
    for _ in 0..count {
        let az = spread.sample(&mut rng);
        let radius = if r_max > r_min { rng.random_range(r_min..r_max) } else { r_min };
        let mut rel = (bearing * az.cos() + lateral * az.sin()) * radius;
        let height = normal.dot(&rel);
        if height < 0.0 {
            rel -= normal * (2.0 * height);
        }
        positions.push(tx.center() + rel);
        gains.push(complex_normal(&mut rng, variance));
    }
    ScattererSet::new(positions, gains, seed)
}

/// `H = Σ_l g_l · a_rx(s_l) · a_tx(s_l)ᵀ`.
pub fn multipath_channel(
    tx: &PlacedAperture,
    rx: &PlacedAperture,
    wave: &WaveSpec,
    scatterers: &ScattererSet,
) -> Result<ChannelMatrix> {
    let l_count = scatterers.len();
    let mut rx_resp = DMatrix::zeros(rx.element_count(), l_count);
    let mut tx_resp = DMatrix::zeros(l_count, tx.element_count());
    for (l, (s, g)) in scatterers.positions().iter().zip(scatterers.gains()).enumerate() {
        let a_rx = near_field_array_response(rx, s, wave).map_err(|_| Error::CoincidentSource(l))?;
        let a_tx = near_field_array_response(tx, s, wave).map_err(|_| Error::CoincidentSource(l))?;
        rx_resp.set_column(l, &(a_rx * *g));
        tx_resp.set_row(l, &a_tx.transpose());
    }
    ChannelMatrix::new(
        rx_resp * tx_resp,
        ModelKind::Multipath,
        Polarization::Scalar,
        *wave,
        geometry_hash(tx, rx, wave),
    )
}

/// Hermitian positive semidefinite spatial correlation matrix with trace
/// equal to its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<Complex64>,
}

impl CorrelationMatrix {
    /// Validates Hermitian symmetry and positive semidefiniteness, then
    /// rescales to `trace = dimension`.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::ShapeMismatch(format!("{}x{} correlation", n, entries.ncols())));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !scale.is_finite() {
            return Err(Error::NonFinite("correlation matrix".into()));
        }
        if scale == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        let asym = (&entries - entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(asym / scale));
        }
        let trace = entries.trace().re;
        let eig = entries.clone().symmetric_eigenvalues();
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(trace > 0.0) || min < -PSD_TOL * trace / n as f64 {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(Self {
            entries: entries * Complex64::new(n as f64 / trace, 0.0),
        })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().cloned().collect();
        e.sort_by(|a, b| b.total_cmp(a));
        e
    }

    /// Hermitian square root with negative eigenvalues clamped to zero.
    pub fn sqrt(&self) -> DMatrix<Complex64> {
        let eig = self.entries.clone().symmetric_eigen();
        let v = &eig.eigenvectors;
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)));
        v * d * v.adjoint()
    }
}

/// Uniform ring of point scatterers in the plane spanned by the aperture's
/// `u` axis and normal, centered at `ring_center`; `R` averages
/// `a(s) a(s)ᴴ` over `n_points` equispaced ring points.
pub fn one_ring_correlation(
    aperture: &PlacedAperture,
    ring_center: &Vector3<f64>,
    ring_radius: f64,
    wave: &WaveSpec,
    n_points: usize,
) -> Result<CorrelationMatrix> {
    if n_points < 8 {
        return Err(Error::TooFewRingPoints(n_points));
    }
    if !(ring_radius.is_finite() && ring_radius > 0.0) {
        return Err(Error::NonPositiveDistance(ring_radius));
    }
    let frame = aperture.frame();
    let (u, n) = (frame.u(), frame.n());
    if ring_hits_aperture(aperture, ring_center, ring_radius) {
        return Err(Error::RingIntersectsAperture);
    }
    let m = aperture.element_count();
    let responses = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / n_points as f64;
            let s = ring_center + (u * phi.cos() + n * phi.sin()) * ring_radius;
            near_field_array_response(aperture, &s, wave)
        })
        .collect::<Result<Vec<_>>>()?;
    // summed in ring order so the result does not depend on the thread count
    let mut acc = DMatrix::zeros(m, m);
    for a in &responses {
        acc += a * a.adjoint();
    }
    CorrelationMatrix::new(acc / Complex64::new(n_points as f64, 0.0))
}

fn ring_hits_aperture(aperture: &PlacedAperture, ring_center: &Vector3<f64>, radius: f64) -> bool {
    let frame = aperture.frame();
    let rel = ring_center - aperture.center();
    // ring points: rel + R(cos φ u + sin φ n); the aperture plane is n·x = 0
    let sin_phi = -frame.n().dot(&rel) / radius;
    if sin_phi.abs() > 1.0 {
        return false;
    }
    let (hu, hv) = aperture.spec().half_extents();
    let cos_abs = (1.0 - sin_phi * sin_phi).sqrt();
    [cos_abs, -cos_abs].iter().any(|&cos_phi| {
        let p = rel + (frame.u() * cos_phi + frame.n() * sin_phi) * radius;
        frame.u().dot(&p).abs() <= hu && frame.v().dot(&p).abs() <= hv
    })
}

fn realization_from_sqrt(root: &DMatrix<Complex64>, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let w = DVector::from_fn(root.ncols(), |_, _| complex_normal(rng, 1.0));
    root * w
}

/// One draw `h = R^{1/2} w`, `w ~ CN(0, I)`.
pub fn correlated_realization(corr: &CorrelationMatrix, seed: u64) -> DVector<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    realization_from_sqrt(&corr.sqrt(), &mut rng)
}

/// `count` draws; draw `i` uses stream `i` of the seeded generator, so draw
/// 0 equals [`correlated_realization`] with the same seed.
pub fn correlated_realizations(corr: &CorrelationMatrix, seed: u64, count: usize) -> Vec<DVector<Complex64>> {
    let root = corr.sqrt();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            realization_from_sqrt(&root, &mut rng)
        })
        .collect()
}
