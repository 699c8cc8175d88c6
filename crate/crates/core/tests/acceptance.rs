//! Acceptance suite for the channel-model library.
//!
//! Runs the desk-scale reference experiment once and checks each criterion
//! against it, printing one `[PASS]`/`[FAIL]` line per criterion. Exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use hmimo::em::{dyadic_green, QuadratureSpec};
use hmimo::geometry::{build_placed_aperture, ApertureSpec, Frame, PlacedAperture, WaveSpec};
use hmimo::los::{self, build_los, ChannelMatrix, ModelKind};
use hmimo::metrics::complexity_report;
use hmimo::nlos::{
    correlated_realizations, multipath_channel, one_ring_correlation, sample_scatterers, AngularSpreadSpec,
    CorrelationMatrix, SpreadFamily,
};
use hmimo::sweep::{run_sweep, SweepConfig, SweepRow};
use nalgebra::{DMatrix, Rotation3, Vector3};
use num_complex::Complex64;

const DISTANCES: [f64; 7] = [6.0, 8.0, 10.0, 16.0, 32.0, 64.0, 128.0];

struct Suite {
    failed: Vec<&'static str>,
}

impl Suite {
    fn record(&mut self, id: &'static str, title: &str, pass: bool, detail: String) {
        println!("[{}] {id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(id);
        }
    }
}

fn desk() -> SweepConfig {
    SweepConfig {
        distances: DISTANCES.to_vec(),
        oracle_p: 5,
        oracle_q: 5,
        timing: false,
        ..SweepConfig::default()
    }
}

type Table = BTreeMap<(u64, ModelKind), SweepRow>;

fn table(rows: Vec<SweepRow>) -> Table {
    rows.into_iter().map(|r| ((r.distance_lambda.to_bits(), r.model), r)).collect()
}

fn row(t: &Table, d: f64, kind: ModelKind) -> &SweepRow {
    &t[&(d.to_bits(), kind)]
}

fn nmse_of(t: &Table, d: f64, kind: ModelKind) -> f64 {
    row(t, d, kind).nmse.expect("nmse column")
}

fn cap_of(t: &Table, d: f64, kind: ModelKind) -> f64 {
    row(t, d, kind).capacity_bits
}

fn frob_rel(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).norm() / b.norm()
}

fn criterion_1_2(s: &mut Suite, t: &Table) {
    let mut worst = f64::NEG_INFINITY;
    for d in DISTANCES {
        worst = worst.max(nmse_of(t, d, ModelKind::Cdcm) - nmse_of(t, d, ModelKind::Cicm));
    }
    s.record("C1", "NMSE(CDCM) <= NMSE(CICM) at every distance", worst <= 0.0, format!("max CDCM-CICM gap {worst:.3e}"));

    let gap = DISTANCES
        .iter()
        .map(|&d| (nmse_of(t, d, ModelKind::Cdcm) - nmse_of(t, d, ModelKind::Cicm)).abs())
        .fold(0.0, f64::max);
    let flat = [ModelKind::Cdcm, ModelKind::Cicm]
        .iter()
        .map(|&k| (nmse_of(t, 64.0, k) - nmse_of(t, 128.0, k)).abs())
        .fold(0.0, f64::max);
    s.record(
        "C2",
        "CDCM/CICM coincide and flatten",
        gap <= 0.02 && flat <= 0.01,
        format!("max |CDCM-CICM| {gap:.3e} (<= 0.02), max |64λ-128λ| {flat:.3e} (<= 0.01)"),
    );
}

fn criterion_3(s: &mut Suite, t: &Table) {
    let worst = DISTANCES
        .iter()
        .filter(|&&d| d >= 10.0)
        .map(|&d| nmse_of(t, d, ModelKind::Pscm))
        .fold(0.0, f64::max);
    s.record("C3", "NMSE(PSCM) <= 0.3 beyond 10λ", worst <= 0.3, format!("max {worst:.4}"));
}

fn criterion_4(s: &mut Suite, t: &Table) {
    let ratios: Vec<f64> = [64.0, 128.0]
        .iter()
        .map(|&d| cap_of(t, d, ModelKind::Fscm) / cap_of(t, d, ModelKind::FarFieldMMIMO))
        .collect();
    let pass = ratios.iter().all(|r| (1.8..=2.2).contains(r));
    s.record("C4", "capacity(FSCM)/capacity(FarField) in [1.8, 2.2]", pass, format!("64λ {:.3}, 128λ {:.3}", ratios[0], ratios[1]));
}

fn criterion_5(s: &mut Suite, t: &Table) {
    let mut close = 0.0f64;
    let mut pscm_margin = f64::INFINITY;
    let mut sph_margin = f64::INFINITY;
    for d in [6.0, 8.0, 10.0, 16.0] {
        let oracle = cap_of(t, d, ModelKind::Intcm);
        for k in [ModelKind::Cdcm, ModelKind::Cicm] {
            close = close.max((cap_of(t, d, k) - oracle).abs() / oracle);
        }
        let sph = cap_of(t, d, ModelKind::Spherical);
        pscm_margin = pscm_margin.min(cap_of(t, d, ModelKind::Pscm) - sph);
        sph_margin = sph_margin.min(oracle - sph);
    }
    s.record(
        "C5",
        "capacity ordering at 6λ-16λ",
        close <= 0.05 && pscm_margin > 0.0 && sph_margin > 0.0,
        format!(
            "max CDCM/CICM deviation {:.2}% (<= 5%), min PSCM-Spherical {pscm_margin:.2} bits, min INTCM-Spherical {sph_margin:.2} bits",
            100.0 * close
        ),
    );
}

fn criterion_6(s: &mut Suite, cfg: &SweepConfig) {
    let wave = cfg.wave().unwrap();
    let grid = |n| {
        let q = QuadratureSpec::midpoint(n).unwrap();
        (q, q)
    };
    let mut worst = f64::INFINITY;
    for d in DISTANCES {
        let (tx, rx) = cfg.place(d).unwrap();
        let fine = build_los(ModelKind::Intcm, &tx, &rx, &wave, grid(9)).unwrap();
        let err = |n| (build_los(ModelKind::Intcm, &tx, &rx, &wave, grid(n)).unwrap().entries() - fine.entries()).norm();
        let (e3, e5) = (err(3), err(5));
        worst = worst.min(e3 / e5);
    }
    s.record(
        "C6",
        "oracle refinement converges",
        worst > 1.0,
        format!("min over distances of ‖I3-I9‖/‖I5-I9‖ = {worst:.3}"),
    );
}

fn slope(wave: &WaveSpec, kr_lo: f64, kr_hi: f64) -> f64 {
    let k = wave.wavenumber();
    let dir = Vector3::new(0.3, -0.5, 0.8).normalize();
    let norm = |kr: f64| dyadic_green(wave, &(dir * (kr / k))).unwrap().norm();
    (norm(kr_hi).ln() - norm(kr_lo).ln()) / (kr_hi.ln() - kr_lo.ln())
}

fn criterion_7(s: &mut Suite) {
    let wave = WaveSpec::from_wavelength(1.0).unwrap();
    let far = slope(&wave, 1e3, 1e4);
    let near = slope(&wave, 1e-4, 1e-3);
    s.record(
        "C7",
        "Green's-function power laws",
        (far + 1.0).abs() <= 0.02 && (near + 3.0).abs() <= 0.02,
        format!("far slope {far:.4}, near slope {near:.4}"),
    );
}

fn place(spec: ApertureSpec, center: Vector3<f64>, frame: Frame) -> PlacedAperture {
    build_placed_aperture(spec, center, frame).unwrap()
}

fn tilted_pair() -> (PlacedAperture, PlacedAperture) {
    let tx = place(ApertureSpec::gapless(3, 4, 0.2), Vector3::new(0.1, -0.2, 0.05), Frame::standard());
    let rx_frame = Frame::standard().rotated(&Rotation3::from_euler_angles(0.3, -0.5, 0.9));
    let rx = place(ApertureSpec::gapless(2, 3, 0.3).with_element_size(0.25, 0.2), Vector3::new(0.7, 0.4, 3.5), rx_frame);
    (tx, rx)
}

fn criterion_8(s: &mut Suite) {
    let wave = WaveSpec::from_wavelength(1.0).unwrap();
    let one = QuadratureSpec::midpoint(1).unwrap();
    let three = QuadratureSpec::midpoint(3).unwrap();
    let (tx, rx) = tilted_pair();

    let cicm = los::cicm(&tx, &rx, &wave).unwrap();
    let int1 = los::intcm(&tx, &rx, &wave, one, one).unwrap();
    let e_int = frob_rel(int1.entries(), cicm.entries());

    let single = |c: Vector3<f64>, f: Frame| place(ApertureSpec::gapless(1, 1, 0.1), c, f);
    let stx = single(Vector3::new(0.2, 0.0, 0.0), Frame::standard());
    let srx = single(Vector3::new(-0.4, 0.9, 2.0), Frame::standard().rotated(&Rotation3::from_euler_angles(0.2, 0.4, 0.0)));
    let e_single = frob_rel(los::pscm(&stx, &srx, &wave).unwrap().entries(), los::cicm(&stx, &srx, &wave).unwrap().entries());

    let motion = Rotation3::from_euler_angles(1.1, -0.7, 2.3);
    let shift = Vector3::new(-4.0, 2.5, 9.0);
    let (mtx, mrx) = (tx.transformed(&motion, &shift), rx.transformed(&motion, &shift));
    let mut e_recip = 0.0f64;
    let mut e_motion = 0.0f64;
    for kind in ModelKind::LOS {
        let build = |a: &PlacedAperture, b: &PlacedAperture| build_los(kind, a, b, &wave, (three, three)).unwrap();
        let h = build(&tx, &rx);
        e_recip = e_recip.max(frob_rel(&build(&rx, &tx).entries().transpose(), h.entries()));
        e_motion = e_motion.max(frob_rel(build(&mtx, &mrx).entries(), h.entries()));
    }
    s.record(
        "C8",
        "exact degenerations, reciprocity, rigid motion",
        e_int <= 1e-12 && e_single <= 1e-12 && e_recip <= 1e-10 && e_motion <= 1e-10,
        format!("INTCM(1x1)/CICM {e_int:.1e}, single-element PSCM/CICM {e_single:.1e}, reciprocity {e_recip:.1e}, rigid motion {e_motion:.1e}"),
    );
}

fn fastest(reps: usize, f: impl Fn() -> ChannelMatrix) -> (f64, ChannelMatrix) {
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let h = f();
        best = best.min(start.elapsed().as_secs_f64());
        last = Some(h);
    }
    (best, last.expect("at least one repetition"))
}

fn criterion_9(s: &mut Suite, cfg: &SweepConfig) {
    let wave = cfg.wave().unwrap();
    let oracle = cfg.oracle().unwrap();
    let (tx, rx) = cfg.place(10.0).unwrap();
    let (m, n) = (rx.element_count() as u64, tx.element_count() as u64);
    let (pq, qq) = (oracle.0.points_per_element() as u64, oracle.1.points_per_element() as u64);

    let (t_int, h_int) = fastest(2, || build_los(ModelKind::Intcm, &tx, &rx, &wave, oracle).unwrap());
    let mut counts_ok = h_int.green_evaluations() == 3 * m * qq * n * pq
        && h_int.green_evaluations() == complexity_report(ModelKind::Intcm, m, n, pq, qq).unwrap().green_evaluations;
    let mut min_speedup = f64::INFINITY;
    for kind in [ModelKind::Cicm, ModelKind::Cdcm, ModelKind::Pscm] {
        let (t, h) = fastest(5, || build_los(kind, &tx, &rx, &wave, oracle).unwrap());
        min_speedup = min_speedup.min(t_int / t);
        counts_ok &= h.green_evaluations() == 3 * m * n;
    }
    s.record(
        "C9",
        "cheap builders >= 20x faster, exact evaluation counts",
        min_speedup >= 20.0 && counts_ok,
        format!("INTCM {t_int:.3}s, min speedup {min_speedup:.0}x, counts {}", if counts_ok { "exact" } else { "WRONG" }),
    );
}

/// `J₀(x)` from its power series.
fn bessel_j0(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > 10 {
            break;
        }
    }
    sum
}

fn criterion_10(s: &mut Suite) {
    let wave = WaveSpec::from_wavelength(1.0).unwrap();
    let k = wave.wavenumber();

    // a line of 8 half-wavelength-spaced ports along u
    let line = place(ApertureSpec::gapless(1, 8, 0.5), Vector3::zeros(), Frame::standard());
    let far = one_ring_correlation(&line, &line.center(), 1e6, &wave, 720).unwrap();
    let r = far.entries();
    let herm = (r - r.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min_eig = far.eigenvalues().last().copied().unwrap();
    let psd_ok = herm <= 1e-12 * 8.0 && min_eig >= -1e-10 * r.trace().re;
    let mut j0_err = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let dx = (line.element_center(i) - line.element_center(j)).norm();
            j0_err = j0_err.max((r[(i, j)] - Complex64::new(bessel_j0(k * dx), 0.0)).norm());
        }
    }

    let near = place(ApertureSpec::gapless(2, 4, 0.25), Vector3::zeros(), Frame::standard());
    let corr = one_ring_correlation(&near, &Vector3::new(0.0, 0.0, 6.0), 2.0, &wave, 256).unwrap();
    let draws = correlated_realizations(&corr, 17, 10_000);
    let mut sample = DMatrix::<Complex64>::zeros(8, 8);
    for h in &draws {
        sample += h * h.adjoint();
    }
    sample /= Complex64::new(draws.len() as f64, 0.0);
    let cov_err = frob_rel(&sample, corr.entries());
    let psd_near = CorrelationMatrix::new(corr.entries().clone()).is_ok();

    let tx = place(ApertureSpec::gapless(4, 4, 0.5), Vector3::zeros(), Frame::standard());
    let rx = place(ApertureSpec::gapless(4, 4, 0.5), Vector3::new(0.0, 0.0, 10.0), Frame::standard());
    let spread = AngularSpreadSpec::new(SpreadFamily::Uniform, 0.0, PI / 3.0).unwrap();
    let seeds = 1000;
    let mean_power = (0..seeds)
        .map(|seed| {
            let set = sample_scatterers(&tx, &rx, 64, &spread, (3.0, 30.0), seed).unwrap();
            multipath_channel(&tx, &rx, &wave, &set).unwrap().entries().norm_squared()
        })
        .sum::<f64>()
        / seeds as f64;
    let power_err = (mean_power / 256.0 - 1.0).abs();

    s.record(
        "C10",
        "NLoS correlation and multipath statistics",
        psd_ok && psd_near && j0_err <= 0.02 && cov_err <= 0.05 && power_err <= 0.05,
        format!(
            "Hermitian/PSD {}, far-ring |R-J0| {j0_err:.1e}, sample covariance {:.2}%, E‖H‖²/MN-1 {:.2}%",
            psd_ok && psd_near,
            100.0 * cov_err,
            100.0 * power_err
        ),
    );
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: Vec::new() };
    let cfg = desk();
    let start = Instant::now();
    let t = table(run_sweep(&cfg).expect("desk sweep"));
    println!("desk sweep: {:.1}s", start.elapsed().as_secs_f64());

    criterion_1_2(&mut suite, &t);
    criterion_3(&mut suite, &t);
    criterion_4(&mut suite, &t);
    criterion_5(&mut suite, &t);
    criterion_6(&mut suite, &cfg);
    criterion_7(&mut suite);
    criterion_8(&mut suite);
    criterion_9(&mut suite, &cfg);
    criterion_10(&mut suite);

    if suite.failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {}", suite.failed.join(", "));
        ExitCode::FAILURE
    }
}
