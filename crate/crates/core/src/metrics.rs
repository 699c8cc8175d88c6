//! NMSE, equal-power capacity, effective degrees of freedom and the
//! complexity model of each builder.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::los::{ChannelMatrix, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmseReport {
    pub value: f64,
    pub model: ModelKind,
    pub reference: ModelKind,
}

/// `‖H − H_ref‖_F² / ‖H_ref‖_F²`.
pub fn nmse(h: &ChannelMatrix, reference: &ChannelMatrix) -> Result<NmseReport> {
    if h.polarization() != reference.polarization() || h.entries().shape() != reference.entries().shape() {
        return Err(Error::ShapeMismatch(format!(
            "{} {} {:?} vs {} {} {:?}",
            h.kind(),
            h.polarization(),
            h.entries().shape(),
            reference.kind(),
            reference.polarization(),
            reference.entries().shape()
        )));
    }
    let denom = reference.entries().norm_squared();
    if denom == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(NmseReport {
        value: (h.entries() - reference.entries()).norm_squared() / denom,
        model: h.kind(),
        reference: reference.kind(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// `‖H̃‖_F² = P_rx · P_tx`.
    UnitEntryPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    /// bits/s/Hz
    pub capacity: f64,
    pub snr_db: f64,
    pub n_tx_ports: usize,
    pub n_rx_ports: usize,
    pub normalization: Normalization,
}

/// Eigenvalues of the smaller Gram matrix (`HHᴴ` or `HᴴH`), descending and
/// clamped at zero.
pub fn gram_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let gram = if h.nrows() <= h.ncols() {
        h * h.adjoint()
    } else {
        h.adjoint() * h
    };
    let mut eig: Vec<f64> = gram.symmetric_eigenvalues().iter().map(|l| l.max(0.0)).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig
}

/// Capacity with equal power over all TX ports at TX SNR `snr_db`, after
/// normalizing the channel to unit average entry power.
pub fn capacity_equal_power(h: &ChannelMatrix, snr_db: f64) -> Result<CapacityReport> {
    let entries = h.entries();
    let (n_rx, n_tx) = entries.shape();
    let norm_sq = entries.norm_squared();
    if norm_sq == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    if !norm_sq.is_finite() || !snr_db.is_finite() {
        return Err(Error::NonFinite(format!("capacity of {} channel", h.kind())));
    }
    let rho = 10f64.powf(snr_db / 10.0);
    // H̃ = H·√(P_rx P_tx)/‖H‖_F, so the Gram spectrum scales by P_rx P_tx / ‖H‖²
    let scale = (n_rx * n_tx) as f64 / norm_sq;
    let per_port = rho / n_tx as f64;
    let capacity = gram_eigenvalues(entries)
        .into_iter()
        .map(|l| (1.0 + per_port * scale * l).log2())
        .sum();
    Ok(CapacityReport {
        capacity,
        snr_db,
        n_tx_ports: n_tx,
        n_rx_ports: n_rx,
        normalization: Normalization::UnitEntryPower,
    })
}

/// Number of singular values at or above `threshold` times the largest.
pub fn effective_dof(h: &ChannelMatrix, threshold: f64) -> Result<usize> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let eig = gram_eigenvalues(h.entries());
    let largest = eig.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    // compare squared singular values
    let cut = threshold * threshold * largest;
    Ok(eig.iter().filter(|&&l| l >= cut).count())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityReport {
    pub green_evaluations: u64,
    /// Lower bound on measured parameters; `None` when not applicable.
    pub measurement_parameters: Option<u64>,
    pub wall_time_s: Option<f64>,
}

/// Computational and measurement cost of a builder for `m` RX elements, `n`
/// TX elements and `p` (TX) / `q` (RX) quadrature points per element.
pub fn complexity_report(kind: ModelKind, m: u64, n: u64, p: u64, q: u64) -> Result<ComplexityReport> {
    if m == 0 || n == 0 || p == 0 || q == 0 {
        return Err(Error::Config(format!("sizes must be positive (M={m}, N={n}, P={p}, Q={q})")));
    }
    let (green_evaluations, measurement) = match kind {
        ModelKind::Intcm => (3 * m * q * n * p, Some(m * q + n * p)),
        ModelKind::Cdcm | ModelKind::Cicm => (3 * m * n, Some(m + n)),
        // PSCM local offsets come from calculation, not measurement
        ModelKind::Pscm => (3 * m * n, None),
        ModelKind::Fscm => (3 * m * n, Some(1)),
        ModelKind::Spherical => (m * n, Some(m + n)),
        ModelKind::Parabolic | ModelKind::FarFieldMMIMO => (m * n, Some(1)),
        ModelKind::Multipath | ModelKind::Correlated => return Err(Error::UnknownKind(kind.to_string())),
    };
    Ok(ComplexityReport {
        green_evaluations,
        measurement_parameters: measurement,
        wall_time_s: None,
    })
}
