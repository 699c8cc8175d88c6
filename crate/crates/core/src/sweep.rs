//! Distance sweeps over LoS models with NMSE, capacity, DoF and timing.
//!
//! Configuration lengths are in wavelengths and are converted to meters once,
//! through the [`WaveSpec`] built from `frequency`. Apertures are placed
//! parallel with their centers on a common normal: TX at the origin, RX at
//! `(0, 0, d)`, both with the standard frame.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::em::QuadratureSpec;
use crate::error::{Error, Result};
use crate::geometry::{build_placed_aperture, classify_region, ApertureSpec, FieldRegion, Frame, PlacedAperture, WaveSpec};
use crate::los::{build_los, ChannelMatrix, ModelKind, Polarization};
use crate::metrics::{capacity_equal_power, effective_dof, nmse};

pub const SWEEP_CSV_HEADER: &str = "distance_lambda,model,nmse,capacity_bits,effective_dof,green_evals,wall_time_s,region";

/// Flat key-value sweep description; every key may be omitted and falls back
/// to the desk-scale default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Hz
    pub frequency: f64,
    pub tx_rows: usize,
    pub tx_cols: usize,
    /// wavelengths
    pub tx_spacing: f64,
    /// wavelengths; defaults to the spacing (gapless aperture)
    pub tx_element_width: Option<f64>,
    pub tx_element_height: Option<f64>,
    pub rx_rows: usize,
    pub rx_cols: usize,
    pub rx_spacing: f64,
    pub rx_element_width: Option<f64>,
    pub rx_element_height: Option<f64>,
    /// wavelengths, strictly increasing
    pub distances: Vec<f64>,
    pub models: Vec<ModelKind>,
    pub snr_db: f64,
    /// INTCM points per axis on each TX element
    pub oracle_p: usize,
    /// INTCM points per axis on each RX element
    pub oracle_q: usize,
    pub seed: u64,
    /// `tensor` evaluates tensor models natively; `scalar` reduces them to
    /// their co-polarized part first.
    pub polarization: Polarization,
    pub output: Option<PathBuf>,
    /// Compute NMSE against INTCM (requires INTCM in `models`).
    pub nmse: bool,
    pub dof_threshold: f64,
    /// Record build wall time; disable for byte-reproducible output.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            frequency: 2.4e9,
            tx_rows: 16,
            tx_cols: 16,
            tx_spacing: 0.05,
            tx_element_width: None,
            tx_element_height: None,
            rx_rows: 8,
            rx_cols: 8,
            rx_spacing: 0.05,
            rx_element_width: None,
            rx_element_height: None,
            distances: vec![6.0, 8.0, 10.0, 16.0, 32.0, 64.0, 128.0, 256.0],
            models: ModelKind::LOS.to_vec(),
            snr_db: 20.0,
            oracle_p: 3,
            oracle_q: 3,
            seed: 0,
            polarization: Polarization::Tensor,
            output: None,
            nmse: true,
            dof_threshold: 0.1,
            timing: true,
        }
    }
}

impl SweepConfig {
    /// Full-size reference experiment: 40×40 TX, 16×16 RX.
    pub fn full_scale() -> Self {
        Self {
            tx_rows: 40,
            tx_cols: 40,
            rx_rows: 16,
            rx_cols: 16,
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn wave(&self) -> Result<WaveSpec> {
        WaveSpec::new(self.frequency).map_err(|e| Error::Config(e.to_string()))
    }

    fn aperture_spec(
        &self,
        side: &str,
        rows: usize,
        cols: usize,
        spacing: f64,
        width: Option<f64>,
        height: Option<f64>,
    ) -> Result<ApertureSpec> {
        let lambda = self.wave()?.wavelength();
        let spec = ApertureSpec::gapless(rows, cols, spacing * lambda)
            .with_element_size(width.unwrap_or(spacing) * lambda, height.unwrap_or(spacing) * lambda);
        spec.validate().map_err(|e| Error::Config(format!("{side}: {e}")))?;
        Ok(spec)
    }

    pub fn tx_spec(&self) -> Result<ApertureSpec> {
        self.aperture_spec("tx", self.tx_rows, self.tx_cols, self.tx_spacing, self.tx_element_width, self.tx_element_height)
    }

    pub fn rx_spec(&self) -> Result<ApertureSpec> {
        self.aperture_spec("rx", self.rx_rows, self.rx_cols, self.rx_spacing, self.rx_element_width, self.rx_element_height)
    }

    pub fn oracle(&self) -> Result<(QuadratureSpec, QuadratureSpec)> {
        let q = |n: usize, key: &str| QuadratureSpec::midpoint(n).map_err(|_| Error::Config(format!("{key} must be at least 1")));
        Ok((q(self.oracle_p, "oracle_p")?, q(self.oracle_q, "oracle_q")?))
    }

    pub fn validate(&self) -> Result<()> {
        self.wave()?;
        self.tx_spec()?;
        self.rx_spec()?;
        self.oracle()?;
        if self.distances.is_empty() {
            return Err(Error::Config("no distances".into()));
        }
        if self.distances.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::Config("distances must be finite and positive".into()));
        }
        if self.distances.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("distances must be strictly increasing".into()));
        }
        if self.models.is_empty() {
            return Err(Error::Config("no models".into()));
        }
        for (i, m) in self.models.iter().enumerate() {
            if !ModelKind::LOS.contains(m) {
                return Err(Error::Config(format!("{m} is not a LoS model")));
            }
            if self.models[..i].contains(m) {
                return Err(Error::Config(format!("{m} listed twice")));
            }
        }
        if self.nmse && !self.models.contains(&ModelKind::Intcm) {
            return Err(Error::Config("NMSE requires INTCM among the models".into()));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::Config("snr_db must be finite".into()));
        }
        if !(self.dof_threshold > 0.0 && self.dof_threshold < 1.0) {
            return Err(Error::Config("dof_threshold must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Places TX at the origin and RX at `distance_lambda` wavelengths along
    /// the common normal.
    pub fn place(&self, distance_lambda: f64) -> Result<(PlacedAperture, PlacedAperture)> {
        let lambda = self.wave()?.wavelength();
        let tx = build_placed_aperture(self.tx_spec()?, Vector3::zeros(), Frame::standard())?;
        let rx = build_placed_aperture(
            self.rx_spec()?,
            Vector3::new(0.0, 0.0, distance_lambda * lambda),
            Frame::standard(),
        )?;
        Ok((tx, rx))
    }
}

/// One `(distance, model)` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub distance_lambda: f64,
    pub model: ModelKind,
    /// Blank for the oracle itself or when NMSE is disabled.
    pub nmse: Option<f64>,
    pub capacity_bits: f64,
    pub effective_dof: usize,
    pub green_evals: u64,
    pub wall_time_s: Option<f64>,
    pub region: FieldRegion,
}

fn evaluated(h: ChannelMatrix, mode: Polarization) -> ChannelMatrix {
    match mode {
        Polarization::Tensor => h,
        Polarization::Scalar => h.co_polarized(),
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let wave = config.wave()?;
    let oracle = config.oracle()?;
    let mut rows = Vec::with_capacity(config.distances.len() * config.models.len());
    for &d in &config.distances {
        let (tx, rx) = config.place(d)?;
        let size = tx.diagonal().max(rx.diagonal());
        let region = classify_region(d * wave.wavelength(), size, &wave)?.region;
        let mut reference: Option<ChannelMatrix> = None;
        let mut built = Vec::with_capacity(config.models.len());
        for &kind in &config.models {
            let start = Instant::now();
            let h = build_los(kind, &tx, &rx, &wave, oracle)?;
            let wall = start.elapsed().as_secs_f64();
            if kind == ModelKind::Intcm {
                reference = Some(h.clone());
            }
            built.push((h, wall));
        }
        for (h, wall) in built {
            let kind = h.kind();
            let green_evals = h.green_evaluations();
            let nmse_value = match (&reference, config.nmse && kind != ModelKind::Intcm) {
                (Some(r), true) => {
                    let r = if h.polarization() == Polarization::Tensor && config.polarization == Polarization::Tensor {
                        r.clone()
                    } else {
                        r.co_polarized()
                    };
                    Some(nmse(&evaluated(h.clone(), config.polarization), &r)?.value)
                }
                _ => None,
            };
            let h = evaluated(h, config.polarization);
            let capacity = capacity_equal_power(&h, config.snr_db)?.capacity;
            let dof = effective_dof(&h, config.dof_threshold)?;
            if !capacity.is_finite() || nmse_value.is_some_and(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("{kind} metrics at {d} wavelengths")));
            }
            rows.push(SweepRow {
                distance_lambda: d,
                model: kind,
                nmse: nmse_value,
                capacity_bits: capacity,
                effective_dof: dof,
                green_evals,
                wall_time_s: config.timing.then_some(wall),
                region,
            });
        }
    }
    Ok(rows)
}

fn fmt_float(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    let mut text = String::new();
    writeln!(text, "{SWEEP_CSV_HEADER}").expect("string write");
    for r in rows {
        writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            fmt_float(r.distance_lambda),
            r.model,
            r.nmse.map(fmt_float).unwrap_or_default(),
            fmt_float(r.capacity_bits),
            r.effective_dof,
            r.green_evals,
            r.wall_time_s.map(fmt_float).unwrap_or_default(),
            r.region
        )
        .expect("string write");
    }
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Writes `rows` to `path` as UTF-8 CSV with LF line endings.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}

pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SweepRow>> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h == SWEEP_CSV_HEADER => {}
        _ => return Err(Error::Parse("missing sweep CSV header".into())),
    }
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| Error::Parse(format!("bad number {s:?}")))
        }
    };
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::Parse(format!("expected 8 fields in {line:?}")));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
        rows.push(SweepRow {
            distance_lambda: num(f[0])?,
            model: f[1].parse()?,
            nmse: opt(f[2])?,
            capacity_bits: num(f[3])?,
            effective_dof: f[4].parse().map_err(|_| Error::Parse(format!("bad dof {:?}", f[4])))?,
            green_evals: f[5].parse().map_err(|_| Error::Parse(format!("bad count {:?}", f[5])))?,
            wall_time_s: opt(f[6])?,
            region: f[7].parse()?,
        });
    }
    Ok(rows)
}
