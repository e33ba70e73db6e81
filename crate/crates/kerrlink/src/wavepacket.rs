//! Gaussian photon wave packets, their gravitational deformation, and the
//! resulting channel overlap Theta.
//!
//! The emitted packet is a real normalized Gaussian in frequency,
//! F(Omega) = (2 pi sigma^2)^{-1/4} exp(-(Omega - Omega_0)^2 / 4 sigma^2).
//! Propagation through the shifted space-time rescales the packet by the
//! clock-rate factor 1 + delta: the received packet is
//! F_B(Omega) = (1+delta)^{-1/2} F(Omega / (1+delta)), an L2-normalized
//! Gaussian with peak (1+delta) Omega_0 and width (1+delta) sigma. Its
//! overlap with the reference packet,
//!
//! ```text
//! Theta = sqrt(2(1+delta) / (1 + (1+delta)^2))
//!         * exp(-delta^2 Omega_0^2 / (4 (1 + (1+delta)^2) sigma^2)),
//! ```
//!
//! is the transmissivity of the equivalent lossy bosonic channel; the
//! channel fidelity is Theta^2. Theta lies in (0, 1] with Theta = 1 exactly
//! at delta = 0, and expands to 1 - delta^2 Omega_0^2 / 8 sigma^2 to second
//! order.
//!
//! Downstream correlation changes are O(1 - Theta), so the loss 1 - Theta is
//! the primary stored representation and is always assembled from
//! `exp_m1`/`ln_1p` forms that keep full precision at delta ~ 1e-10.

use thiserror::Error;

/// Default peak-frequency anchor: 500 THz (598 nm down-conversion source).
pub const DEFAULT_PEAK_ANCHOR_HZ: f64 = 5.0e14;
/// Default bandwidth anchor: 1 MHz.
pub const DEFAULT_BANDWIDTH_ANCHOR_HZ: f64 = 1.0e6;
/// Minimum physical peak-to-bandwidth ratio accepted by [`WavePacketSpec::new`].
pub const MIN_NARROWNESS_RATIO: f64 = 1.0e3;
/// Relaxed bound used by [`WavePacketSpec::broadband`] for stress tests.
pub const MIN_BROADBAND_RATIO: f64 = 10.0;

/// Absolute tolerance of the overlap quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Half-width of the integration window in effective bandwidths.
const QUADRATURE_SPAN: f64 = 12.0;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WavePacketError {
    #[error("invalid wave packet: {0}")]
    InvalidSpec(String),
    #[error("invalid shift: 1 + delta must be positive, got delta = {0:e}")]
    InvalidShift(f64),
    #[error("|delta| Omega_0/sigma = {0:e} is outside the expansion regime (< 1)")]
    OutOfRegime(f64),
    #[error("quadrature failed to reach tolerance {tolerance:e}: {reason}")]
    QuadratureFailure { tolerance: f64, reason: &'static str },
}

/// Dimensionless Gaussian wave-packet description.
///
/// `peak_frequency` is in units of the peak anchor (500 THz by default) and
/// `bandwidth` in units of the bandwidth anchor (1 MHz), matching the
/// dimensionless axes Omega = 1, sigma = 1 of the physical setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacketSpec {
    peak_frequency: f64,
    bandwidth: f64,
    peak_anchor_hz: f64,
    bandwidth_anchor_hz: f64,
}

impl WavePacketSpec {
    /// Packet with the default anchors. Requires peak and bandwidth positive
    /// and a physical narrowness Omega_0/sigma >= 1e3 (the overlap formula
    /// assumes Omega_0 >> sigma).
    pub fn new(peak_frequency: f64, bandwidth: f64) -> Result<Self, WavePacketError> {
        Self::with_anchors(
            peak_frequency,
            bandwidth,
            DEFAULT_PEAK_ANCHOR_HZ,
            DEFAULT_BANDWIDTH_ANCHOR_HZ,
        )
    }

    /// Packet with explicit rescaling anchors in Hz.
    pub fn with_anchors(
        peak_frequency: f64,
        bandwidth: f64,
        peak_anchor_hz: f64,
        bandwidth_anchor_hz: f64,
    ) -> Result<Self, WavePacketError> {
        let spec = Self::unvalidated(peak_frequency, bandwidth, peak_anchor_hz, bandwidth_anchor_hz)?;
        if spec.frequency_ratio() < MIN_NARROWNESS_RATIO {
            return Err(WavePacketError::InvalidSpec(format!(
                "peak/bandwidth ratio {:.3e} below the narrow-packet bound {MIN_NARROWNESS_RATIO:e}",
                spec.frequency_ratio()
            )));
        }
        Ok(spec)
    }

    /// Packet with the narrowness guard relaxed to Omega_0/sigma > 10, for
    /// stressing the overlap integral against the closed form on broad
    /// packets. The closed form neglects the clipped Omega < 0 tail, which is
    /// below e^{-Omega_0^2/2 sigma^2} ~ 1e-22 even at ratio 10.
    pub fn broadband(peak_frequency: f64, bandwidth: f64) -> Result<Self, WavePacketError> {
        let spec = Self::unvalidated(
            peak_frequency,
            bandwidth,
            DEFAULT_PEAK_ANCHOR_HZ,
            DEFAULT_BANDWIDTH_ANCHOR_HZ,
        )?;
        if spec.frequency_ratio() < MIN_BROADBAND_RATIO {
            return Err(WavePacketError::InvalidSpec(format!(
                "peak/bandwidth ratio {:.3e} below {MIN_BROADBAND_RATIO}",
                spec.frequency_ratio()
            )));
        }
        Ok(spec)
    }

    fn unvalidated(
        peak_frequency: f64,
        bandwidth: f64,
        peak_anchor_hz: f64,
        bandwidth_anchor_hz: f64,
    ) -> Result<Self, WavePacketError> {
        for (name, v) in [
            ("peak_frequency", peak_frequency),
            ("bandwidth", bandwidth),
            ("peak_anchor_hz", peak_anchor_hz),
            ("bandwidth_anchor_hz", bandwidth_anchor_hz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(WavePacketError::InvalidSpec(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            peak_frequency,
            bandwidth,
            peak_anchor_hz,
            bandwidth_anchor_hz,
        })
    }

    /// Dimensionless peak frequency Omega-tilde.
    pub fn peak_frequency(&self) -> f64 {
        self.peak_frequency
    }

    /// Dimensionless bandwidth sigma-tilde.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Physical peak frequency in Hz.
    pub fn peak_hz(&self) -> f64 {
        self.peak_frequency * self.peak_anchor_hz
    }

    /// Physical bandwidth in Hz.
    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth * self.bandwidth_anchor_hz
    }

    /// Physical Omega_0 / sigma.
    pub fn frequency_ratio(&self) -> f64 {
        self.peak_hz() / self.bandwidth_hz()
    }
}

/// Channel overlap Theta and the loss 1 - Theta.
///
/// `loss` is the primary representation: it is computed independently of
/// `theta` through `exp_m1`, never by subtracting two near-1 values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelOverlap {
    theta: f64,
    loss: f64,
}

impl ChannelOverlap {
    /// Build from g = ln Theta <= 0.
    fn from_log_theta(g: f64) -> Self {
        debug_assert!(g <= 0.0, "ln Theta must be non-positive, got {g}");
        Self {
            theta: g.exp(),
            loss: -g.exp_m1(),
        }
    }

    /// A perfect channel.
    pub fn perfect() -> Self {
        Self { theta: 1.0, loss: 0.0 }
    }

    /// Overlap Theta in (0, 1].
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Channel loss 1 - Theta.
    pub fn loss(&self) -> f64 {
        self.loss
    }

    /// Channel fidelity Theta^2.
    pub fn fidelity(&self) -> f64 {
        self.theta * self.theta
    }
}

/// Emitted packet amplitude density at the dimensionless frequency
/// `omega_tilde` (units of the peak anchor). The value is in physical
/// Hz^{-1/2} units and integrates to unit L2 norm over Omega.
pub fn packet_amplitude(spec: &WavePacketSpec, omega_tilde: f64) -> f64 {
    let sigma = spec.bandwidth_hz();
    let dev = omega_tilde * spec.peak_anchor_hz - spec.peak_hz();
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    norm * (-dev * dev / (4.0 * sigma * sigma)).exp()
}

/// Received packet amplitude density after propagation with shift `delta`.
///
/// F_B(Omega) = (1+delta)^{-1/2} F(Omega/(1+delta)): peak (1+delta) Omega_0,
/// width (1+delta) sigma, still L2-normalized. The argument is assembled as
/// ((Omega - Omega_0) - delta Omega_0)/(1+delta) so that shifts of order
/// 1e-10 of the carrier survive in double precision.
pub fn received_packet_amplitude(
    spec: &WavePacketSpec,
    delta: f64,
    omega_tilde: f64,
) -> Result<f64, WavePacketError> {
    let scale = 1.0 + delta;
    if !(scale > 0.0) {
        return Err(WavePacketError::InvalidShift(delta));
    }
    let sigma = spec.bandwidth_hz();
    let dev = omega_tilde * spec.peak_anchor_hz - spec.peak_hz();
    let arg = (dev - delta * spec.peak_hz()) / scale;
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25) / scale.sqrt();
    Ok(norm * (-arg * arg / (4.0 * sigma * sigma)).exp())
}

/// Closed-form overlap of received and emitted packets.
///
/// Evaluated in log space:
/// ln Theta = (1/2) ln_1p(-delta^2 / (2 + 2 delta + delta^2))
///            - (delta R)^2 / (4 (2 + 2 delta + delta^2)),  R = Omega_0/sigma.
/// Both terms are exact rearrangements of the prefactor and the exponent, so
/// the loss keeps full precision for any |delta| down to 1e-15.
pub fn overlap_exact(spec: &WavePacketSpec, delta: f64) -> Result<ChannelOverlap, WavePacketError> {
    if !(1.0 + delta > 0.0) {
        return Err(WavePacketError::InvalidShift(delta));
    }
    let r = spec.frequency_ratio();
    let q = 2.0 + 2.0 * delta + delta * delta; // 1 + (1+delta)^2
    let ln_prefactor = 0.5 * (-delta * delta / q).ln_1p();
    let x = delta * r;
    let exponent = x * x / (4.0 * q);
    Ok(ChannelOverlap::from_log_theta(ln_prefactor - exponent))
}

/// Second-order overlap: loss = delta^2 Omega_0^2 / 8 sigma^2.
///
/// Valid while |delta| Omega_0/sigma < 1.
pub fn overlap_perturbative(
    spec: &WavePacketSpec,
    delta: f64,
) -> Result<ChannelOverlap, WavePacketError> {
    let x = delta * spec.frequency_ratio();
    if !(x.abs() < 1.0) {
        return Err(WavePacketError::OutOfRegime(x.abs()));
    }
    let loss = x * x / 8.0;
    Ok(ChannelOverlap {
        theta: 1.0 - loss,
        loss,
    })
}

/// Overlap by adaptive quadrature of the product of
/// [`received_packet_amplitude`] and [`packet_amplitude`]; the independent
/// oracle for [`overlap_exact`].
///
/// Integration runs in the centered variable u = (Omega - Omega_0)/sigma over
/// [max(-Omega_0/sigma, lo), hi] spanning 12 effective bandwidths around both
/// packet peaks, with the initial panels split at the peaks.
pub fn overlap_quadrature(
    spec: &WavePacketSpec,
    delta: f64,
) -> Result<ChannelOverlap, WavePacketError> {
    let scale = 1.0 + delta;
    if !(scale > 0.0) {
        return Err(WavePacketError::InvalidShift(delta));
    }
    let sigma = spec.bandwidth_hz();
    let omega0 = spec.peak_hz();
    let anchor = spec.peak_anchor_hz;
    let r = spec.frequency_ratio();

    // Integrand in u, including the d Omega = sigma du Jacobian.
    let g = |u: f64| -> f64 {
        let omega_tilde = (omega0 + u * sigma) / anchor;
        let received = received_packet_amplitude(spec, delta, omega_tilde)
            .expect("shift validated above");
        received * packet_amplitude(spec, omega_tilde) * sigma
    };

    // Peaks sit at u = 0 (emitted) and u = delta R (received).
    let shift = delta * r;
    let width = scale.max(1.0);
    let mut lo = (shift.min(0.0) - QUADRATURE_SPAN * width).max(-r);
    let mut hi = shift.max(0.0) + QUADRATURE_SPAN * width;

    // Tail bound check: widen once if the integrand has not decayed.
    if g(lo).abs() > 1e-13 || g(hi).abs() > 1e-13 {
        lo = (shift.min(0.0) - 2.0 * QUADRATURE_SPAN * width).max(-r);
        hi = shift.max(0.0) + 2.0 * QUADRATURE_SPAN * width;
        if g(lo).abs() > 1e-13 || g(hi).abs() > 1e-13 {
            return Err(WavePacketError::QuadratureFailure {
                tolerance: QUADRATURE_TOLERANCE,
                reason: "integrand tails not decayed at the window edge",
            });
        }
    }

    // Panel breakpoints at both peaks and their 4-bandwidth flanks.
    let mut points: Vec<f64> = vec![
        lo,
        shift - 4.0 * scale,
        shift,
        shift + 4.0 * scale,
        -4.0,
        0.0,
        4.0,
        hi,
    ];
    points.retain(|&p| p >= lo && p <= hi);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let panels = points.len().saturating_sub(1).max(1);
    let per_panel_tol = QUADRATURE_TOLERANCE / panels as f64;
    let mut total = 0.0;
    for pair in points.windows(2) {
        total += adaptive_simpson(&g, pair[0], pair[1], per_panel_tol).ok_or(
            WavePacketError::QuadratureFailure {
                tolerance: QUADRATURE_TOLERANCE,
                reason: "adaptive subdivision exhausted",
            },
        )?;
    }

    let theta = total.clamp(0.0, 1.0);
    Ok(ChannelOverlap {
        theta,
        loss: 1.0 - theta,
    })
}

/// Adaptive Simpson integration with Richardson extrapolation.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Option<f64> {
    if a == b {
        return Some(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        return Some(left + right + diff / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    /// Shift parameter at geostationary height for Earth defaults, frozen
    /// from the spacetime module's 60-digit oracle.
    const DELTA_GEO: f64 = -5.4821920979233629e-10;

    fn unit_spec() -> WavePacketSpec {
        WavePacketSpec::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(WavePacketSpec::new(0.0, 1.0).is_err());
        assert!(WavePacketSpec::new(1.0, -1.0).is_err());
        // ratio 100 fails the narrow-packet bound but is fine as broadband
        assert!(WavePacketSpec::new(1.0, 5.0e6).is_err());
        assert!(WavePacketSpec::broadband(1.0, 5.0e6).is_ok());
        // the oracle-grid endpoint ratio = 1e3 is constructible
        assert!(WavePacketSpec::new(1.0, 5.0e5).is_ok());
        let s = unit_spec();
        assert_eq!(s.peak_hz(), 5.0e14);
        assert_eq!(s.bandwidth_hz(), 1.0e6);
        assert_eq!(s.frequency_ratio(), 5.0e8);
    }

    #[test]
    fn packet_peak_and_two_sigma_values() {
        let s = unit_spec();
        let sigma = s.bandwidth_hz();
        let peak_value = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
        assert_relative_eq!(packet_amplitude(&s, 1.0), peak_value, max_relative = 1e-14);
        // At Omega_0 +/- 2 sigma the amplitude is peak/e.
        for sign in [-1.0, 1.0] {
            let omega_tilde = (s.peak_hz() + sign * 2.0 * sigma) / 5.0e14;
            assert_relative_eq!(
                packet_amplitude(&s, omega_tilde),
                peak_value / std::f64::consts::E,
                max_relative = 1e-12
            );
        }
    }

    fn norm_squared<F: Fn(f64) -> f64>(amp: F, spec: &WavePacketSpec, center_shift: f64, halfwidth: f64) -> f64 {
        let sigma = spec.bandwidth_hz();
        let omega0 = spec.peak_hz();
        let f = |u: f64| {
            let a = amp((omega0 + u * sigma) / spec.peak_anchor_hz);
            a * a * sigma
        };
        adaptive_simpson(&f, center_shift - halfwidth, center_shift + halfwidth, 1e-12).unwrap()
    }

    #[test]
    fn packet_is_normalized() {
        let s = unit_spec();
        let n = norm_squared(|w| packet_amplitude(&s, w), &s, 0.0, 8.0);
        assert_abs_diff_eq!(n, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn received_packet_is_normalized_for_any_shift() {
        let s = unit_spec();
        for delta in [0.0, 0.1, -0.3, 1.0e-9] {
            let shift = delta * s.frequency_ratio();
            let width = (1.0 + delta).max(1.0);
            let n = norm_squared(
                |w| received_packet_amplitude(&s, delta, w).unwrap(),
                &s,
                shift,
                10.0 * width,
            );
            assert_abs_diff_eq!(n, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn received_equals_emitted_at_zero_shift() {
        let s = unit_spec();
        for omega_tilde in [0.999999998, 1.0, 1.000000004] {
            assert_eq!(
                received_packet_amplitude(&s, 0.0, omega_tilde).unwrap(),
                packet_amplitude(&s, omega_tilde)
            );
        }
        assert!(received_packet_amplitude(&s, -1.0, 1.0).is_err());
    }

    #[test]
    fn received_peak_is_shifted_and_rescaled() {
        let s = unit_spec();
        let delta = 0.1;
        let sigma = s.bandwidth_hz();
        // Peak at (1+delta) Omega_0 with height reduced by sqrt(1+delta).
        let peak_omega_tilde = (1.0 + delta) * s.peak_hz() / 5.0e14;
        let expected_peak =
            (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25) / (1.0 + delta).sqrt();
        assert_relative_eq!(
            received_packet_amplitude(&s, delta, peak_omega_tilde).unwrap(),
            expected_peak,
            max_relative = 1e-12
        );
    }

    #[test]
    fn overlap_exact_perfect_channel() {
        let ov = overlap_exact(&unit_spec(), 0.0).unwrap();
        assert_eq!(ov.theta(), 1.0);
        assert_eq!(ov.loss(), 0.0);
        assert_eq!(ov.fidelity(), 1.0);
    }

    #[test]
    fn overlap_exact_geostationary() {
        // Frozen 60-digit values for delta = DELTA_GEO, Omega = sigma = 1.
        let ov = overlap_exact(&unit_spec(), DELTA_GEO).unwrap();
        assert_relative_eq!(ov.theta(), 0.99065195772414601, max_relative = 1e-13);
        assert_relative_eq!(ov.loss(), 9.3480422758539898e-3, max_relative = 1e-11);
        assert_abs_diff_eq!(ov.theta() + ov.loss(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn overlap_perturbative_values() {
        let s = unit_spec();
        assert_eq!(overlap_perturbative(&s, 0.0).unwrap().theta(), 1.0);
        // delta Omega_0/sigma = -0.274085 -> loss = 0.274085^2/8.
        let delta = -0.274085 / s.frequency_ratio();
        let ov = overlap_perturbative(&s, delta).unwrap();
        let x: f64 = -0.274085;
        assert_relative_eq!(ov.loss(), x * x / 8.0, max_relative = 1e-12);
        // expansion regime bound
        let too_big = 1.5 / s.frequency_ratio();
        assert!(matches!(
            overlap_perturbative(&s, too_big),
            Err(WavePacketError::OutOfRegime(_))
        ));
    }

    #[test]
    fn perturbative_matches_exact_in_regime() {
        let s = unit_spec();
        let r = s.frequency_ratio();
        // At |x| <= 0.35 the curvature term (x^2/8)^2/2 stays near 1e-4;
        // at the regime edge x = 0.5 it grows to 4.9e-4.
        for i in 0..=70 {
            let x = -0.35 + 0.01 * i as f64;
            let delta = x / r;
            let exact = overlap_exact(&s, delta).unwrap().theta();
            let pert = overlap_perturbative(&s, delta).unwrap().theta();
            assert!(
                (exact - pert).abs() < 1.2e-4,
                "x = {x}: exact {exact}, pert {pert}"
            );
        }
        for x in [-0.5_f64, 0.5] {
            let delta = x / r;
            let exact = overlap_exact(&s, delta).unwrap().theta();
            let pert = overlap_perturbative(&s, delta).unwrap().theta();
            assert!((exact - pert).abs() < 5.0e-4);
        }
        // Earth point sits well inside the regime.
        let exact = overlap_exact(&s, DELTA_GEO).unwrap().theta();
        let pert = overlap_perturbative(&s, DELTA_GEO).unwrap().theta();
        assert!((exact - pert).abs() < 1e-4);
    }

    #[test]
    fn quadrature_matches_exact_on_grid() {
        // delta x (Omega_0/sigma) grid; ratio 1e3 via sigma-tilde = 5e5,
        // ratio 5e8 via the defaults.
        let specs = [
            WavePacketSpec::new(1.0, 5.0e5).unwrap(),
            WavePacketSpec::new(1.0, 1.0).unwrap(),
        ];
        for spec in &specs {
            for mag in [1.0e-10, 1.0e-5, 1.0e-2, 0.3] {
                for sign in [-1.0, 1.0] {
                    let delta = sign * mag;
                    let exact = overlap_exact(spec, delta).unwrap().theta();
                    let quad = overlap_quadrature(spec, delta).unwrap().theta();
                    assert!(
                        (exact - quad).abs() < 1e-6,
                        "ratio {:.1e}, delta {delta:e}: exact {exact:e}, quad {quad:e}",
                        spec.frequency_ratio()
                    );
                }
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        // Normalized self-overlap.
        let s = unit_spec();
        let ov = overlap_quadrature(&s, 0.0).unwrap();
        assert_abs_diff_eq!(ov.theta(), 1.0, epsilon = 1e-10);

        // Broad packet (Omega_0/sigma = 100), delta = 1e-2.
        let broad = WavePacketSpec::broadband(1.0, 5.0e6).unwrap();
        let exact = overlap_exact(&broad, 1.0e-2).unwrap().theta();
        let quad = overlap_quadrature(&broad, 1.0e-2).unwrap().theta();
        assert!((exact - quad).abs() < 1e-6);

        // The Earth-regime shift needs the cancellation-safe integrand.
        let exact = overlap_exact(&s, DELTA_GEO).unwrap().theta();
        let quad = overlap_quadrature(&s, DELTA_GEO).unwrap().theta();
        assert!((exact - quad).abs() < 1e-6);
    }

    #[test]
    fn overlap_is_asymmetric_in_delta_exact_symmetric_perturbative() {
        // A broad packet (Omega_0/sigma = 10) keeps Theta finite at
        // delta = +/-0.1, where the prefactor asymmetry is visible.
        let broad = WavePacketSpec::broadband(1.0, 5.0e7).unwrap();
        let tp = overlap_exact(&broad, 0.1).unwrap().theta();
        let tm = overlap_exact(&broad, -0.1).unwrap().theta();
        assert!(
            (tp - tm).abs() > 1e-3,
            "exact overlap must not be even in delta: {tp} vs {tm}"
        );
        let s = unit_spec();
        let pp = overlap_perturbative(&s, 0.3 / 5.0e8).unwrap().theta();
        let pm = overlap_perturbative(&s, -0.3 / 5.0e8).unwrap().theta();
        assert_eq!(pp, pm, "perturbative overlap is even in delta");
    }

    #[test]
    fn loss_increases_with_shift_magnitude() {
        let s = unit_spec();
        let r = s.frequency_ratio();
        let mut prev = -1.0;
        for i in 0..=40 {
            let x = 0.02 * i as f64; // up to x = 0.8
            let loss = overlap_exact(&s, x / r).unwrap().loss();
            assert!(loss > prev, "loss not increasing at x = {x}");
            prev = loss;
        }
    }

    proptest! {
        /// Theta in (0, 1], equal to 1 only at delta = 0, and theta + loss = 1.
        #[test]
        fn overlap_bounds(x in -0.9_f64..0.9, ratio_pow in 3.0_f64..6.0) {
            let ratio = 10.0_f64.powf(ratio_pow);
            let spec = WavePacketSpec::with_anchors(1.0, 1.0, ratio, 1.0).unwrap();
            let delta = x / ratio;
            let ov = overlap_exact(&spec, delta).unwrap();
            prop_assert!(ov.theta() > 0.0 && ov.theta() <= 1.0);
            prop_assert!(ov.loss() >= 0.0 && ov.loss() < 1.0);
            prop_assert!((ov.theta() + ov.loss() - 1.0).abs() <= f64::EPSILON);
            if delta != 0.0 {
                prop_assert!(ov.theta() < 1.0);
            }
        }
    }
}
