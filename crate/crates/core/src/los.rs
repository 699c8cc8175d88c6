//! Line-of-sight channel builders.
//!
//! The tensor models couple every RX element `m` to every TX element `n`
//! through a 3×3 block. Ports are ordered element-major, then polarization,
//! and each polarization triple is expressed in its aperture's own `(u, v, n)`
//! frame: block `(m, n)` is `F_rxᵀ · G · F_tx` where `F = [u v n]`. For
//! apertures aligned with the global axes this is plain `(x, y, z)`.
//!
//! | model | entries per pair | Green's-function work |
//! |-------|------------------|-----------------------|
//! | INTCM | double surface integral of the dyad | `3·M·Q·N·P` |
//! | CDCM  | center dyad × areas × sinc coefficient | `3·M·N` |
//! | CICM  | center dyad × areas | `3·M·N` |
//! | PSCM  | dyad at aperture-center vector, second-order phase | `3·M·N` |
//! | FSCM  | dyad at aperture-center vector, linear phase | `3·M·N` |
//!
//! The scalar models (spherical, parabolic, far-field) carry the same
//! `A_t·A_r` area factor so they are directly comparable with the
//! co-polarized part of a tensor channel.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::em::{dyad_coefficients, element_quadrature, green_at_distance, DyadAccumulator, Dyadic3, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{PlacedAperture, WaveSpec};

/// Every channel model this crate can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "INTCM")]
    Intcm,
    #[serde(rename = "CDCM")]
    Cdcm,
    #[serde(rename = "CICM")]
    Cicm,
    #[serde(rename = "PSCM")]
    Pscm,
    #[serde(rename = "FSCM")]
    Fscm,
    Spherical,
    Parabolic,
    FarFieldMMIMO,
    Multipath,
    Correlated,
}

impl ModelKind {
    /// The deterministic LoS models, in sweep order.
    pub const LOS: [ModelKind; 8] = [
        ModelKind::Intcm,
        ModelKind::Cdcm,
        ModelKind::Cicm,
        ModelKind::Pscm,
        ModelKind::Fscm,
        ModelKind::Spherical,
        ModelKind::Parabolic,
        ModelKind::FarFieldMMIMO,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Intcm => "INTCM",
            ModelKind::Cdcm => "CDCM",
            ModelKind::Cicm => "CICM",
            ModelKind::Pscm => "PSCM",
            ModelKind::Fscm => "FSCM",
            ModelKind::Spherical => "Spherical",
            ModelKind::Parabolic => "Parabolic",
            ModelKind::FarFieldMMIMO => "FarFieldMMIMO",
            ModelKind::Multipath => "Multipath",
            ModelKind::Correlated => "Correlated",
        }
    }

    pub fn polarization(&self) -> Polarization {
        match self {
            ModelKind::Intcm | ModelKind::Cdcm | ModelKind::Cicm | ModelKind::Pscm | ModelKind::Fscm => {
                Polarization::Tensor
            }
            _ => Polarization::Scalar,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = ModelKind::LOS.iter().chain(&[ModelKind::Multipath, ModelKind::Correlated]);
        all.copied()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// `3M × 3N`, three polarizations per element.
    Tensor,
    /// `M × N`, one polarization per element.
    Scalar,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Tensor => "tensor",
            Polarization::Scalar => "scalar",
        })
    }
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tensor" => Ok(Polarization::Tensor),
            "scalar" => Ok(Polarization::Scalar),
            other => Err(Error::Parse(format!("unknown polarization {other:?}"))),
        }
    }
}

/// A channel realization: complex matrix plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: DMatrix<Complex64>,
    kind: ModelKind,
    polarization: Polarization,
    wave: WaveSpec,
    geometry_hash: u64,
    green_evaluations: u64,
}

impl ChannelMatrix {
    pub fn new(
        entries: DMatrix<Complex64>,
        kind: ModelKind,
        polarization: Polarization,
        wave: WaveSpec,
        geometry_hash: u64,
    ) -> Result<Self> {
        if polarization == Polarization::Tensor && (entries.nrows() % 3 != 0 || entries.ncols() % 3 != 0) {
            return Err(Error::ShapeMismatch(format!(
                "tensor channel {}x{} is not a 3x3 block matrix",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(format!("{kind} channel")));
        }
        Ok(Self {
            entries,
            kind,
            polarization,
            wave,
            geometry_hash,
            green_evaluations: 0,
        })
    }

    fn with_evaluations(mut self, count: u64) -> Self {
        self.green_evaluations = count;
        self
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn wave(&self) -> &WaveSpec {
        &self.wave
    }

    pub fn geometry_hash(&self) -> u64 {
        self.geometry_hash
    }

    /// Kernel evaluations counted while building (one per pair and TX
    /// polarization column for tensor models, one per pair for scalar ones).
    pub fn green_evaluations(&self) -> u64 {
        self.green_evaluations
    }

    pub fn rx_elements(&self) -> usize {
        match self.polarization {
            Polarization::Tensor => self.entries.nrows() / 3,
            Polarization::Scalar => self.entries.nrows(),
        }
    }

    pub fn tx_elements(&self) -> usize {
        match self.polarization {
            Polarization::Tensor => self.entries.ncols() / 3,
            Polarization::Scalar => self.entries.ncols(),
        }
    }

    /// The 3×3 block coupling RX element `m` to TX element `n`.
    pub fn block(&self, m: usize, n: usize) -> Option<Dyadic3> {
        if self.polarization != Polarization::Tensor {
            return None;
        }
        Some(self.entries.fixed_view::<3, 3>(3 * m, 3 * n).into_owned())
    }

    /// One polarization pair of a tensor channel, as a scalar channel.
    /// Indices are local: 0 = `u`, 1 = `v`, 2 = `n`.
    pub fn component(&self, rx_pol: usize, tx_pol: usize) -> Result<ChannelMatrix> {
        if self.polarization != Polarization::Tensor {
            return Err(Error::ShapeMismatch("component selection needs a tensor channel".into()));
        }
        if rx_pol > 2 || tx_pol > 2 {
            return Err(Error::ShapeMismatch(format!("polarization index ({rx_pol}, {tx_pol})")));
        }
        let (m, n) = (self.rx_elements(), self.tx_elements());
        let entries = DMatrix::from_fn(m, n, |i, j| self.entries[(3 * i + rx_pol, 3 * j + tx_pol)]);
        Ok(ChannelMatrix {
            entries,
            kind: self.kind,
            polarization: Polarization::Scalar,
            wave: self.wave,
            geometry_hash: self.geometry_hash,
            green_evaluations: self.green_evaluations,
        })
    }

    /// The `(v_rx, v_tx)` co-polarized part; scalar channels pass through.
    pub fn co_polarized(&self) -> ChannelMatrix {
        match self.polarization {
            Polarization::Tensor => self.component(1, 1).expect("tensor channel"),
            Polarization::Scalar => self.clone(),
        }
    }

    /// Same channel with entries scaled by `factor`.
    pub fn scaled(&self, factor: Complex64) -> ChannelMatrix {
        let mut out = self.clone();
        out.entries *= factor;
        out
    }
}

/// Separable description of pair distances about the aperture-center vector.
///
/// With `c = rx_center − tx_center`, the exact pair distance is
/// `|c + q_m − p_n|`; to second order in the offsets it equals
/// `d0 + δ_r(m) + δ_t(n) + δ_x(m, n)`.
#[derive(Debug, Clone)]
pub struct CenterDecomposition {
    center_vector: Vector3<f64>,
    center_distance: f64,
    direction: Vector3<f64>,
    tx_offsets: Vec<Vector3<f64>>,
    rx_offsets: Vec<Vector3<f64>>,
    rx_delta: Vec<f64>,
    tx_delta: Vec<f64>,
    // offsets with the component along the center direction removed
    rx_transverse: Vec<Vector3<f64>>,
    tx_transverse: Vec<Vector3<f64>>,
}

pub fn center_decomposition(tx: &PlacedAperture, rx: &PlacedAperture) -> Result<CenterDecomposition> {
    let c = rx.center() - tx.center();
    let d0 = c.norm();
    if !(d0 > 0.0) {
        return Err(Error::CoincidentCenters);
    }
    let dir = c / d0;
    let own = |offsets: &[Vector3<f64>], sign: f64| -> (Vec<f64>, Vec<Vector3<f64>>) {
        offsets
            .iter()
            .map(|q| {
                let along = dir.dot(q);
                let delta = sign * along + (q.norm_squared() - along * along) / (2.0 * d0);
                (delta, q - dir * along)
            })
            .unzip()
    };
    let (rx_delta, rx_transverse) = own(rx.offsets(), 1.0);
    let (tx_delta, tx_transverse) = own(tx.offsets(), -1.0);
    Ok(CenterDecomposition {
        center_vector: c,
        center_distance: d0,
        direction: dir,
        tx_offsets: tx.offsets().to_vec(),
        rx_offsets: rx.offsets().to_vec(),
        rx_delta,
        tx_delta,
        rx_transverse,
        tx_transverse,
    })
}

impl CenterDecomposition {
    pub fn center_vector(&self) -> Vector3<f64> {
        self.center_vector
    }

    pub fn center_distance(&self) -> f64 {
        self.center_distance
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.direction
    }

    pub fn tx_offsets(&self) -> &[Vector3<f64>] {
        &self.tx_offsets
    }

    pub fn rx_offsets(&self) -> &[Vector3<f64>] {
        &self.rx_offsets
    }

    /// `ĉ·q_m + (|q_m|² − (ĉ·q_m)²) / (2 d0)`
    pub fn rx_delta(&self, m: usize) -> f64 {
        self.rx_delta[m]
    }

    /// `−ĉ·p_n + (|p_n|² − (ĉ·p_n)²) / (2 d0)`
    pub fn tx_delta(&self, n: usize) -> f64 {
        self.tx_delta[n]
    }

    /// `−(q_m·p_n − (ĉ·q_m)(ĉ·p_n)) / d0`
    pub fn cross_delta(&self, m: usize, n: usize) -> f64 {
        -self.rx_transverse[m].dot(&self.tx_transverse[n]) / self.center_distance
    }

    pub fn exact_distance(&self, m: usize, n: usize) -> f64 {
        (self.center_vector + self.rx_offsets[m] - self.tx_offsets[n]).norm()
    }

    /// Second-order surrogate `d0 + δ_r + δ_t + δ_x`.
    pub fn surrogate_distance(&self, m: usize, n: usize) -> f64 {
        self.center_distance + self.rx_delta[m] + self.tx_delta[n] + self.cross_delta(m, n)
    }

    /// First-order (planar) phase distance `d0 + ĉ·q_m − ĉ·p_n`.
    pub fn linear_distance(&self, m: usize, n: usize) -> f64 {
        self.center_distance + self.direction.dot(&self.rx_offsets[m]) - self.direction.dot(&self.tx_offsets[n])
    }
}

pub(crate) fn geometry_hash(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> u64 {
    let mut h = DefaultHasher::new();
    for ap in [tx, rx] {
        let s = ap.spec();
        s.rows.hash(&mut h);
        s.cols.hash(&mut h);
        for x in [s.spacing, s.element_width, s.element_height] {
            x.to_bits().hash(&mut h);
        }
        let f = ap.frame();
        for v in [ap.center(), f.u(), f.v(), f.n()] {
            for x in v.iter() {
                x.to_bits().hash(&mut h);
            }
        }
    }
    wave.wavelength().to_bits().hash(&mut h);
    h.finish()
}

fn ensure_disjoint(tx: &PlacedAperture, rx: &PlacedAperture) -> Result<()> {
    if tx.overlaps(rx) {
        return Err(Error::OverlappingApertures);
    }
    Ok(())
}

/// Assembles a `3M × 3N` channel from per-pair global-frame blocks.
fn tensor_channel<F>(
    tx: &PlacedAperture,
    rx: &PlacedAperture,
    wave: &WaveSpec,
    kind: ModelKind,
    block: F,
) -> Result<ChannelMatrix>
where
    F: Fn(usize, usize) -> (Dyadic3, u64) + Sync,
{
    let (m_count, n_count) = (rx.element_count(), tx.element_count());
    let to_rx = rx.frame().matrix().transpose().map(|x| Complex64::new(x, 0.0));
    let from_tx = tx.frame().matrix().map(|x| Complex64::new(x, 0.0));
    let rows: Vec<(Vec<Dyadic3>, u64)> = (0..m_count)
        .into_par_iter()
        .map(|m| {
            let mut evals = 0;
            let blocks = (0..n_count)
                .map(|n| {
                    let (g, e) = block(m, n);
                    evals += e;
                    to_rx * g * from_tx
                })
                .collect();
            (blocks, evals)
        })
        .collect();
    let mut entries = DMatrix::zeros(3 * m_count, 3 * n_count);
    let mut evals = 0;
    for (m, (blocks, e)) in rows.into_iter().enumerate() {
        evals += e;
        for (n, b) in blocks.into_iter().enumerate() {
            entries.fixed_view_mut::<3, 3>(3 * m, 3 * n).copy_from(&b);
        }
    }
    Ok(ChannelMatrix::new(entries, kind, Polarization::Tensor, *wave, geometry_hash(tx, rx, wave))?
        .with_evaluations(evals))
}

fn scalar_channel<F>(
    tx: &PlacedAperture,
    rx: &PlacedAperture,
    wave: &WaveSpec,
    kind: ModelKind,
    entry: F,
) -> Result<ChannelMatrix>
where
    F: Fn(usize, usize) -> Complex64 + Sync,
{
    let (m_count, n_count) = (rx.element_count(), tx.element_count());
    let rows: Vec<Vec<Complex64>> = (0..m_count)
        .into_par_iter()
        .map(|m| (0..n_count).map(|n| entry(m, n)).collect())
        .collect();
    let entries = DMatrix::from_fn(m_count, n_count, |m, n| rows[m][n]);
    Ok(ChannelMatrix::new(entries, kind, Polarization::Scalar, *wave, geometry_hash(tx, rx, wave))?
        .with_evaluations((m_count * n_count) as u64))
}

#[inline]
fn phase(k: f64, distance: f64) -> Complex64 {
    let (s, c) = (k * distance).sin_cos();
    Complex64::new(c, -s)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Integral-form model: midpoint-rule double surface integral of the dyad
/// over every element pair. This is the reference oracle.
pub fn intcm(
    tx: &PlacedAperture,
    rx: &PlacedAperture,
    wave: &WaveSpec,
    quad_tx: QuadratureSpec,
    quad_rx: QuadratureSpec,
) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let k = wave.wavenumber();
    let tx_nodes = (0..tx.element_count())
        .map(|n| element_quadrature(tx, n, quad_tx))
        .collect::<Result<Vec<_>>>()?;
    let rx_nodes = (0..rx.element_count())
        .map(|m| element_quadrature(rx, m, quad_rx))
        .collect::<Result<Vec<_>>>()?;
    tensor_channel(tx, rx, wave, ModelKind::Intcm, |m, n| {
        let mut acc = DyadAccumulator::default();
        let mut evals = 0;
        for (r, wr) in &rx_nodes[m] {
            for (s, ws) in &tx_nodes[n] {
                let (alpha, beta, dir) = dyad_coefficients(k, &(r - s));
                acc.add(alpha, beta, &dir, wr * ws);
                evals += 3;
            }
        }
        (acc.to_matrix(), evals)
    })
}

/// Coordinate-independent model: `A_t·A_r·G(r_m − s_n)` at element centers.
pub fn cicm(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let k = wave.wavenumber();
    let area = tx.element_area() * rx.element_area();
    tensor_channel(tx, rx, wave, ModelKind::Cicm, |m, n| {
        let r = rx.element_center(m) - tx.element_center(n);
        let (alpha, beta, dir) = dyad_coefficients(k, &r);
        let mut acc = DyadAccumulator::default();
        acc.add(alpha, beta, &dir, area);
        (acc.to_matrix(), 3)
    })
}

/// Direction-dependent correction of the element-pair integral: the product of
/// `sinc(k·extent·(d̂·axis)/2)` over both in-plane axes of both elements.
pub fn cdcm_coefficient(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec, direction: &Vector3<f64>) -> f64 {
    let half_k = 0.5 * wave.wavenumber();
    [tx, rx]
        .iter()
        .map(|ap| {
            let s = ap.spec();
            let f = ap.frame();
            sinc(half_k * s.element_width * direction.dot(&f.u()))
                * sinc(half_k * s.element_height * direction.dot(&f.v()))
        })
        .product()
}

/// Coordinate-dependent model: the CICM block scaled by [`cdcm_coefficient`].
pub fn cdcm(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let k = wave.wavenumber();
    let area = tx.element_area() * rx.element_area();
    tensor_channel(tx, rx, wave, ModelKind::Cdcm, |m, n| {
        let r = rx.element_center(m) - tx.element_center(n);
        let (alpha, beta, dir) = dyad_coefficients(k, &r);
        let kappa = cdcm_coefficient(tx, rx, wave, &dir);
        let mut acc = DyadAccumulator::default();
        acc.add(alpha, beta, &dir, area * kappa);
        (acc.to_matrix(), 3)
    })
}

/// Dyad at the center vector, in global coordinates, scaled by both areas.
fn center_block(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec, dec: &CenterDecomposition) -> Dyadic3 {
    let (alpha, beta, dir) = dyad_coefficients(wave.wavenumber(), &dec.center_vector());
    let mut acc = DyadAccumulator::default();
    acc.add(alpha, beta, &dir, tx.element_area() * rx.element_area());
    acc.to_matrix()
}

/// Partially separable model: center dyad with the second-order phase
/// `exp(−jk(δ_r + δ_t)) ∘ exp(−jk δ_x)`.
///
/// The first factor is an outer product of RX and TX response vectors; the
/// cross term is the inseparable Hadamard factor.
pub fn pscm(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let dec = center_decomposition(tx, rx)?;
    let k = wave.wavenumber();
    let g0 = center_block(tx, rx, wave, &dec);
    let rx_resp: Vec<Complex64> = (0..rx.element_count()).map(|m| phase(k, dec.rx_delta(m))).collect();
    let tx_resp: Vec<Complex64> = (0..tx.element_count()).map(|n| phase(k, dec.tx_delta(n))).collect();
    tensor_channel(tx, rx, wave, ModelKind::Pscm, |m, n| {
        let w = rx_resp[m] * tx_resp[n] * phase(k, dec.cross_delta(m, n));
        (g0 * w, 3)
    })
}

/// Fully separable model: center dyad with the linear (planar) phase only.
/// Its scalar part is exactly the far-field M-MIMO channel.
pub fn fscm(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let dec = center_decomposition(tx, rx)?;
    let k = wave.wavenumber();
    let g0 = center_block(tx, rx, wave, &dec);
    let (rx_resp, tx_resp) = planar_responses(&dec, k);
    tensor_channel(tx, rx, wave, ModelKind::Fscm, |m, n| (g0 * (rx_resp[m] * tx_resp[n]), 3))
}

/// `exp(−jk ĉ·q_m)` and `exp(+jk ĉ·p_n)`.
fn planar_responses(dec: &CenterDecomposition, k: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let c = dec.direction();
    let rx = dec.rx_offsets().iter().map(|q| phase(k, c.dot(q))).collect();
    let tx = dec.tx_offsets().iter().map(|p| phase(k, -c.dot(p))).collect();
    (rx, tx)
}

/// Spherical-wavefront model with exact pair distances.
pub fn spherical_wavefront(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let k = wave.wavenumber();
    let area = tx.element_area() * rx.element_area();
    scalar_channel(tx, rx, wave, ModelKind::Spherical, |m, n| {
        let d = (rx.element_center(m) - tx.element_center(n)).norm();
        green_at_distance(k, d) * area
    })
}

/// Parabolic-wavefront model: the second-order distance surrogate in both
/// phase and amplitude.
pub fn parabolic_wavefront(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    let dec = center_decomposition(tx, rx)?;
    let d0 = dec.center_distance();
    let reach = |ap: &PlacedAperture| ap.offsets().iter().map(|q| q.norm()).fold(0.0, f64::max);
    let extent = reach(tx) + reach(rx);
    if extent > d0 / 4.0 {
        log::warn!(
            "parabolic model used with aperture extent {extent:.4e} m beyond a quarter of the {d0:.4e} m link"
        );
    }
    let k = wave.wavenumber();
    let area = tx.element_area() * rx.element_area();
    scalar_channel(tx, rx, wave, ModelKind::Parabolic, |m, n| {
        green_at_distance(k, dec.surrogate_distance(m, n)) * area
    })
}

/// Conventional far-field LoS M-MIMO model; rank one by construction.
pub fn farfield_mmimo(tx: &PlacedAperture, rx: &PlacedAperture, wave: &WaveSpec) -> Result<ChannelMatrix> {
    ensure_disjoint(tx, rx)?;
    let dec = center_decomposition(tx, rx)?;
    let k = wave.wavenumber();
    let amp = green_at_distance(k, dec.center_distance()) * (tx.element_area() * rx.element_area());
    let (rx_resp, tx_resp) = planar_responses(&dec, k);
    scalar_channel(tx, rx, wave, ModelKind::FarFieldMMIMO, |m, n| amp * rx_resp[m] * tx_resp[n])
}

/// Builds any deterministic LoS model. `oracle` is the `(TX, RX)` quadrature
/// used by INTCM and ignored otherwise.
pub fn build_los(
    kind: ModelKind,
    tx: &PlacedAperture,
    rx: &PlacedAperture,
    wave: &WaveSpec,
    oracle: (QuadratureSpec, QuadratureSpec),
) -> Result<ChannelMatrix> {
    match kind {
        ModelKind::Intcm => intcm(tx, rx, wave, oracle.0, oracle.1),
        ModelKind::Cdcm => cdcm(tx, rx, wave),
        ModelKind::Cicm => cicm(tx, rx, wave),
        ModelKind::Pscm => pscm(tx, rx, wave),
        ModelKind::Fscm => fscm(tx, rx, wave),
        ModelKind::Spherical => spherical_wavefront(tx, rx, wave),
        ModelKind::Parabolic => parabolic_wavefront(tx, rx, wave),
        ModelKind::FarFieldMMIMO => farfield_mmimo(tx, rx, wave),
        ModelKind::Multipath | ModelKind::Correlated => Err(Error::UnknownKind(kind.to_string())),
    }
}
