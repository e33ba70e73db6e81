//! Frequency shift between a ground emitter and an orbiting receiver in the
//! equatorial Kerr space-time.
//!
//! Geometric units (G = c = 1) are used throughout: masses and the Kerr
//! parameter a = J/M are lengths in meters, angular velocities are per meter.
//! The emitter (Alice) sits on the equator of the rotating body and turns
//! with it; the receiver (Bob) moves on a circular equatorial geodesic at
//! radius r_B = r_A + h.
//!
//! The observable of interest is the shift parameter
//!
//! ```text
//! delta = sqrt(Omega_B / Omega_A) - 1
//! ```
//!
//! which is ~1e-10 for Earth orbits. Every path here carries the small
//! quantity eta = ratio - 1 (never the ratio itself) through `ln_1p`/`exp_m1`
//! so that delta keeps full relative precision despite sitting ten orders of
//! magnitude below 1.

use thiserror::Error;

/// Speed of light in m/s, for converting SI inputs to geometric units.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Newtonian gravitational constant in SI units.
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;

/// Earth default: mean surface radius r_A in meters.
pub const EARTH_SURFACE_RADIUS: f64 = 6.371e6;
/// Earth default: Schwarzschild radius r_S = 2M, 9 mm.
pub const EARTH_SCHWARZSCHILD_RADIUS: f64 = 9.0e-3;
/// Earth default: sidereal angular velocity in rad/s.
pub const EARTH_ANGULAR_VELOCITY_SI: f64 = 7.292_115_0e-5;
/// Earth default: Kerr parameter J/(M c) in meters (J ~ 7.07e33 kg m^2/s).
pub const EARTH_KERR_PARAMETER: f64 = 3.95;

/// Errors from the shift-parameter computations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpacetimeError {
    /// A square-root argument in the exact frequency-ratio formula was
    /// non-positive; `radicand` names which one.
    #[error("invalid orbit: {radicand} radicand is non-positive ({value:e})")]
    InvalidOrbit { radicand: &'static str, value: f64 },
    /// `shift_parameter_exact` needs a positive frequency ratio.
    #[error("frequency ratio must be positive, got {0:e}")]
    NonPositiveRatio(f64),
    /// The shift parameter does not change sign on the search bracket.
    #[error("shift parameter does not change sign on [0, {bracket_end:e}] m")]
    NoRoot { bracket_end: f64 },
    /// Bisection exhausted its iteration cap without meeting tolerance.
    #[error("bisection failed to reach |delta| < {tolerance:e} within {iterations} iterations")]
    ConvergenceFailure { tolerance: f64, iterations: usize },
    /// Body parameters violate an invariant.
    #[error("invalid body: {0}")]
    InvalidBody(String),
    /// Orbit parameters violate an invariant.
    #[error("invalid orbit spec: {0}")]
    InvalidOrbitSpec(String),
}

/// Direction of the receiver's orbit relative to the body's rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitDirection {
    /// Same sense as the body's rotation (epsilon = +1).
    #[default]
    CoRotating,
    /// Opposite sense (epsilon = -1).
    CounterRotating,
}

impl OrbitDirection {
    /// The sign epsilon = +/-1.
    pub fn sign(self) -> f64 {
        match self {
            OrbitDirection::CoRotating => 1.0,
            OrbitDirection::CounterRotating => -1.0,
        }
    }

    /// Parse from +1/-1.
    pub fn from_sign(sign: i8) -> Result<Self, SpacetimeError> {
        match sign {
            1 => Ok(OrbitDirection::CoRotating),
            -1 => Ok(OrbitDirection::CounterRotating),
            other => Err(SpacetimeError::InvalidOrbitSpec(format!(
                "direction must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// Physical parameters of the rotating planet, in geometric units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrBody {
    /// M = r_S / 2, in meters.
    pub mass_geometric: f64,
    /// a = J/M in meters; a >= 0.
    pub kerr_parameter: f64,
    /// Surface radius r_A in meters; must exceed 2M.
    pub surface_radius: f64,
    /// Equatorial angular velocity omega/c, per meter; >= 0.
    pub angular_velocity_geometric: f64,
}

impl KerrBody {
    /// Build from geometric-unit values, checking invariants.
    pub fn new(
        mass_geometric: f64,
        kerr_parameter: f64,
        surface_radius: f64,
        angular_velocity_geometric: f64,
    ) -> Result<Self, SpacetimeError> {
        if !(mass_geometric > 0.0) || !mass_geometric.is_finite() {
            return Err(SpacetimeError::InvalidBody(format!(
                "mass_geometric must be positive and finite, got {mass_geometric}"
            )));
        }
        if !(surface_radius > 2.0 * mass_geometric) {
            return Err(SpacetimeError::InvalidBody(format!(
                "surface_radius ({surface_radius}) must exceed the Schwarzschild radius ({})",
                2.0 * mass_geometric
            )));
        }
        if !(kerr_parameter >= 0.0) || !kerr_parameter.is_finite() {
            return Err(SpacetimeError::InvalidBody(format!(
                "kerr_parameter must be non-negative, got {kerr_parameter}"
            )));
        }
        if !(angular_velocity_geometric >= 0.0) || !angular_velocity_geometric.is_finite() {
            return Err(SpacetimeError::InvalidBody(format!(
                "angular_velocity_geometric must be non-negative, got {angular_velocity_geometric}"
            )));
        }
        Ok(Self {
            mass_geometric,
            kerr_parameter,
            surface_radius,
            angular_velocity_geometric,
        })
    }

    /// Build from SI inputs: mass in kg, radius in m, angular velocity in
    /// rad/s, angular momentum in kg m^2/s. Converts to geometric units once.
    pub fn from_si(
        mass_kg: f64,
        surface_radius_m: f64,
        angular_velocity_rad_s: f64,
        angular_momentum: f64,
    ) -> Result<Self, SpacetimeError> {
        let c = SPEED_OF_LIGHT;
        let mass_geometric = GRAVITATIONAL_CONSTANT * mass_kg / (c * c);
        let kerr_parameter = if mass_kg > 0.0 {
            angular_momentum / (mass_kg * c)
        } else {
            0.0
        };
        Self::new(
            mass_geometric,
            kerr_parameter,
            surface_radius_m,
            angular_velocity_rad_s / c,
        )
    }

    /// The Earth with the library default constants.
    pub fn earth() -> Self {
        Self {
            mass_geometric: EARTH_SCHWARZSCHILD_RADIUS / 2.0,
            kerr_parameter: EARTH_KERR_PARAMETER,
            surface_radius: EARTH_SURFACE_RADIUS,
            angular_velocity_geometric: EARTH_ANGULAR_VELOCITY_SI / SPEED_OF_LIGHT,
        }
    }

    /// r_S = 2M exactly.
    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.mass_geometric
    }
}

/// Receiver orbit: height above the surface and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    /// h = r_B - r_A >= 0, meters.
    pub height: f64,
    /// epsilon = +/-1.
    pub direction: OrbitDirection,
}

impl OrbitSpec {
    pub fn new(height: f64, direction: OrbitDirection) -> Result<Self, SpacetimeError> {
        if !(height >= 0.0) || !height.is_finite() {
            return Err(SpacetimeError::InvalidOrbitSpec(format!(
                "height must be non-negative and finite, got {height}"
            )));
        }
        Ok(Self { height, direction })
    }

    /// Co-rotating orbit at the given height.
    pub fn co_rotating(height: f64) -> Result<Self, SpacetimeError> {
        Self::new(height, OrbitDirection::CoRotating)
    }
}

/// First-order decomposition of the shift parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftBreakdown {
    /// Schwarzschild term (r_S/4r_A)(r_A - 2h)/(r_A + h).
    pub schwarzschild_term: f64,
    /// Rotation term -(r_A omega)^2 / 2 from the emitter's surface motion.
    pub rotation_term: f64,
    /// Higher-order correction mixing r_S with the rotation.
    pub higher_order_term: f64,
    /// Sum of the three terms, formed once at construction.
    pub total: f64,
}

impl ShiftBreakdown {
    fn new(schwarzschild_term: f64, rotation_term: f64, higher_order_term: f64) -> Self {
        Self {
            schwarzschild_term,
            rotation_term,
            higher_order_term,
            total: schwarzschild_term + rotation_term + higher_order_term,
        }
    }
}

/// Which shift evaluation to use where either is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftMode {
    #[default]
    Exact,
    Perturbative,
}

/// ln sqrt(Omega_B/Omega_A) = ln(dtau_A/dt) - ln(dtau_B/dt), the half-log of
/// the frequency ratio. All inputs to `ln_1p` are sums of small terms, so no
/// significance is lost.
fn ln_sqrt_ratio(body: &KerrBody, orbit: &OrbitSpec) -> Result<f64, SpacetimeError> {
    let m = body.mass_geometric;
    let ra = body.surface_radius;
    let a = body.kerr_parameter;
    let w = body.angular_velocity_geometric;
    let rb = ra + orbit.height;
    let eps = orbit.direction.sign();

    // Receiver on a circular equatorial geodesic:
    // dtau_B/dt = sqrt(1 - 3M/r_B + 2 eps (a/r_B) sqrt(M/r_B)) / (1 + eps (a/r_B) sqrt(M/r_B)).
    let n = eps * (a / rb) * (m / rb).sqrt();
    let y = -3.0 * m / rb + 2.0 * n;
    if 1.0 + y <= 0.0 {
        return Err(SpacetimeError::InvalidOrbit {
            radicand: "circular-orbit",
            value: 1.0 + y,
        });
    }

    // Emitter co-rotating with the surface (worldline phi = omega t in the
    // equatorial Kerr metric):
    // (dtau_A/dt)^2 = 1 - 2M/r_A + 4 M a omega / r_A - (r_A^2 + a^2 + 2 M a^2/r_A) omega^2.
    let x = -2.0 * m / ra + 4.0 * m * a * w / ra - (ra * ra + a * a + 2.0 * m * a * a / ra) * w * w;
    if 1.0 + x <= 0.0 {
        return Err(SpacetimeError::InvalidOrbit {
            radicand: "emitter-clock",
            value: 1.0 + x,
        });
    }

    // 1 + y > 0 forces 1 + n >= 1/2 > 0, so ln_1p(n) is safe.
    Ok(n.ln_1p() + 0.5 * (x.ln_1p() - y.ln_1p()))
}

/// Frequency ratio Omega_B/Omega_A between the orbiting receiver and the
/// rotating ground emitter.
///
/// Conventions chosen so that `shift_parameter_exact(frequency_ratio_exact)`
/// reproduces the first-order breakdown of [`shift_parameter_perturbative`]:
/// the returned ratio is the square of the clock-rate ratio
/// (dtau_A/dt)/(dtau_B/dt), i.e. sqrt(ratio) - 1 is the fractional clock
/// offset between the two observers.
pub fn frequency_ratio_exact(body: &KerrBody, orbit: &OrbitSpec) -> Result<f64, SpacetimeError> {
    Ok((2.0 * ln_sqrt_ratio(body, orbit)?).exp())
}

/// delta = sqrt(ratio) - 1, evaluated through eta = ratio - 1.
///
/// For ratio within a factor 2 of 1, `ratio - 1.0` is exact in IEEE
/// arithmetic, so delta ~ 1e-10 keeps well over 6 significant digits.
pub fn shift_parameter_exact(ratio: f64) -> Result<f64, SpacetimeError> {
    if !(ratio > 0.0) {
        return Err(SpacetimeError::NonPositiveRatio(ratio));
    }
    let eta = ratio - 1.0;
    Ok((0.5 * eta.ln_1p()).exp_m1())
}

/// delta for a body/orbit pair through the exact path, composing the ratio
/// and the square root in log space (no f64 round-trip through the ratio).
pub fn shift_exact(body: &KerrBody, orbit: &OrbitSpec) -> Result<f64, SpacetimeError> {
    Ok(ln_sqrt_ratio(body, orbit)?.exp_m1())
}

/// First-order shift parameter, keeping one order in (r_A omega)^2.
///
/// delta_Sch = (r_S/4r_A)(r_A - 2h)/(r_A + h),
/// delta_rot = -(r_A omega)^2 / 2,
/// delta_h   = -((r_A omega)^2/4)(3 r_S/4 r_A) + r_S a omega / (2 r_A).
///
/// The 1/omega piece of the printed higher-order term only ever appears
/// multiplied by omega^2; it is evaluated as the product r_S a omega/(2 r_A)
/// directly, so omega = 0 gives delta_h = 0 with no 0/0.
pub fn shift_parameter_perturbative(body: &KerrBody, orbit: &OrbitSpec) -> ShiftBreakdown {
    let rs = body.schwarzschild_radius();
    let ra = body.surface_radius;
    let a = body.kerr_parameter;
    let w = body.angular_velocity_geometric;
    let h = orbit.height;

    let schwarzschild = 0.25 * (rs / ra) * ((ra - 2.0 * h) / (ra + h));
    let raw2 = (ra * w) * (ra * w);
    let rotation = -0.5 * raw2;
    let higher = -(raw2 / 4.0) * 0.75 * (rs / ra) + rs * a * w / (2.0 * ra);
    ShiftBreakdown::new(schwarzschild, rotation, higher)
}

/// Shift parameter by the requested mode.
pub fn shift_parameter(
    body: &KerrBody,
    orbit: &OrbitSpec,
    mode: ShiftMode,
) -> Result<f64, SpacetimeError> {
    match mode {
        ShiftMode::Exact => shift_exact(body, orbit),
        ShiftMode::Perturbative => Ok(shift_parameter_perturbative(body, orbit).total),
    }
}

/// Absolute tolerance on delta for the compensation-height search.
pub const COMPENSATION_TOLERANCE: f64 = 1e-16;
const BISECTION_CAP: usize = 200;

/// Orbit height h* at which the gravitational blue-shift and the velocity
/// red-shift cancel (delta = 0), found by bisection on [0, 10 r_A].
///
/// For Earth parameters h* is near r_A/2 but, with rotation included, not
/// exactly r_A/2.
pub fn compensation_height(
    body: &KerrBody,
    direction: OrbitDirection,
    mode: ShiftMode,
) -> Result<f64, SpacetimeError> {
    let eval = |h: f64| -> Result<f64, SpacetimeError> {
        let orbit = OrbitSpec::new(h, direction)?;
        shift_parameter(body, &orbit, mode)
    };

    let mut lo = 0.0_f64;
    let mut hi = 10.0 * body.surface_radius;
    let f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo.abs() < COMPENSATION_TOLERANCE {
        return Ok(lo);
    }
    if f_hi.abs() < COMPENSATION_TOLERANCE {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(SpacetimeError::NoRoot { bracket_end: hi });
    }

    let mut f_lo = f_lo;
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if f_mid.abs() < COMPENSATION_TOLERANCE {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(SpacetimeError::ConvergenceFailure {
        tolerance: COMPENSATION_TOLERANCE,
        iterations: BISECTION_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const H_GEO: f64 = 3.6e7;

    fn earth() -> KerrBody {
        KerrBody::earth()
    }

    fn orbit(h: f64) -> OrbitSpec {
        OrbitSpec::co_rotating(h).unwrap()
    }

    /// Static Schwarzschild closed form under this module's squared-ratio
    /// convention: (1 - 2M/r_A)/(1 - 3M/r_B).
    fn schwarzschild_ratio(m: f64, ra: f64, rb: f64) -> f64 {
        (1.0 - 2.0 * m / ra) / (1.0 - 3.0 * m / rb)
    }

    #[test]
    fn body_invariants() {
        assert!(KerrBody::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(KerrBody::new(1.0, 0.0, 1.5, 0.0).is_err()); // inside horizon
        assert!(KerrBody::new(4.5e-3, -1.0, 6.371e6, 0.0).is_err());
        assert!(KerrBody::new(4.5e-3, 0.0, 6.371e6, -1.0).is_err());
        let e = earth();
        assert_eq!(e.schwarzschild_radius(), 9.0e-3);
        assert!(OrbitSpec::new(-1.0, OrbitDirection::CoRotating).is_err());
    }

    #[test]
    fn from_si_earth_is_close_to_defaults() {
        // Standard geophysical values: mass 5.9722e24 kg, J ~ 7.07e33.
        let b = KerrBody::from_si(5.9722e24, 6.371e6, EARTH_ANGULAR_VELOCITY_SI, 7.07e33).unwrap();
        assert_relative_eq!(b.schwarzschild_radius(), 9.0e-3, max_relative = 2e-2);
        assert_relative_eq!(b.kerr_parameter, 3.95, max_relative = 1e-2);
    }

    #[test]
    fn flat_spacetime_ratio_is_one() {
        // Vanishing mass, spin and rotation: no shift at any height.
        let b = KerrBody::new(1e-30, 0.0, 6.371e6, 0.0).unwrap();
        for h in [0.0, 1e6, 3.6e7] {
            assert_eq!(frequency_ratio_exact(&b, &orbit(h)).unwrap(), 1.0);
            assert_eq!(shift_exact(&b, &orbit(h)).unwrap(), 0.0);
        }
    }

    #[test]
    fn static_schwarzschild_limit_matches_closed_form() {
        let b = KerrBody::new(4.5e-3, 0.0, EARTH_SURFACE_RADIUS, 0.0).unwrap();
        for h in [0.0, 1e5, 3.6e7, 6.0e7] {
            let got = frequency_ratio_exact(&b, &orbit(h)).unwrap();
            let want = schwarzschild_ratio(b.mass_geometric, b.surface_radius, b.surface_radius + h);
            assert_relative_eq!(got, want, max_relative = 1e-15);
        }
    }

    #[test]
    fn earth_geostationary_shift() {
        // Frozen from a 60-digit evaluation of the same expressions.
        let b = earth();
        let d = shift_exact(&b, &orbit(H_GEO)).unwrap();
        assert_relative_eq!(d, -5.4821920979233629e-10, max_relative = 1e-12);

        // ratio - 1 ~ 2 delta; the ratio itself survives an f64 round-trip
        // with ~1e-7 relative precision on the small part.
        let ratio = frequency_ratio_exact(&b, &orbit(H_GEO)).unwrap();
        assert_relative_eq!(ratio - 1.0, -1.0964384192841283e-9, max_relative = 1e-6);

        // Composition through the public ratio op keeps >= 6 digits.
        let d_via_ratio = shift_parameter_exact(ratio).unwrap();
        assert_relative_eq!(d_via_ratio, d, max_relative = 1e-6);
    }

    #[test]
    fn shift_parameter_exact_values() {
        assert_eq!(shift_parameter_exact(1.0).unwrap(), 0.0);
        assert_relative_eq!(shift_parameter_exact(4.0).unwrap(), 1.0, max_relative = 1e-15);
        // sqrt(1 - 1.09e-9) - 1 = -5.450000001485125e-10 (extended precision).
        let d = shift_parameter_exact(1.0 - 1.09e-9).unwrap();
        assert_relative_eq!(d, -5.4500000014851245e-10, max_relative = 1e-6);
        assert!(shift_parameter_exact(0.0).is_err());
        assert!(shift_parameter_exact(-2.0).is_err());
    }

    #[test]
    fn perturbative_terms_at_geostationary() {
        let b = earth();
        let s = shift_parameter_perturbative(&b, &orbit(H_GEO));
        // Frozen from 60-digit evaluation.
        assert_relative_eq!(s.schwarzschild_term, -5.47018464358163e-10, max_relative = 1e-12);
        assert_relative_eq!(s.rotation_term, -1.20074511028178e-12, max_relative = 1e-12);
        assert!(s.higher_order_term.abs() < 1e-21);
        assert_eq!(
            s.total,
            s.schwarzschild_term + s.rotation_term + s.higher_order_term
        );
    }

    #[test]
    fn perturbative_at_surface_and_half_radius() {
        let b = earth();
        let s0 = shift_parameter_perturbative(&b, &orbit(0.0));
        // (1/4)(r_S/r_A) = 3.5316277...e-10 at h = 0.
        assert_relative_eq!(s0.schwarzschild_term, 3.53162768796107e-10, max_relative = 1e-12);
        assert_relative_eq!(s0.total, 3.51962023685868e-10, max_relative = 1e-12);

        // The numerator r_A - 2h vanishes identically at h = r_A/2.
        let half = shift_parameter_perturbative(&b, &orbit(b.surface_radius / 2.0));
        assert_eq!(half.schwarzschild_term, 0.0);
    }

    #[test]
    fn higher_order_term_is_zero_without_rotation() {
        let b = KerrBody::new(4.5e-3, 3.95, EARTH_SURFACE_RADIUS, 0.0).unwrap();
        let s = shift_parameter_perturbative(&b, &orbit(1e7));
        assert_eq!(s.higher_order_term, 0.0);
        assert_eq!(s.rotation_term, 0.0);
    }

    #[test]
    fn exact_and_perturbative_agree_on_grid() {
        let b = earth();
        let mut worst = 0.0_f64;
        for i in 0..=1000 {
            let h = 10.0 * b.surface_radius * (i as f64) / 1000.0;
            let de = shift_exact(&b, &orbit(h)).unwrap();
            let dp = shift_parameter_perturbative(&b, &orbit(h)).total;
            let rel = (de - dp).abs() / de.abs().max(1e-14);
            worst = worst.max(rel);
        }
        // First-order validity; measured headroom is ~1e-8.
        assert!(worst < 1e-3, "worst relative deviation {worst:e}");
    }

    #[test]
    fn ratio_strictly_decreasing_in_height() {
        let b = earth();
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let h = 10.0 * b.surface_radius * (i as f64) / 1000.0;
            let r = frequency_ratio_exact(&b, &orbit(h)).unwrap();
            assert!(r < prev, "ratio not strictly decreasing at h = {h}");
            prev = r;
        }
    }

    #[test]
    fn schwarzschild_term_sign_structure() {
        let b = earth();
        let ra = b.surface_radius;
        let mut prev = f64::INFINITY;
        for i in 0..=200 {
            let h = 10.0 * ra * (i as f64) / 200.0;
            let t = shift_parameter_perturbative(&b, &orbit(h)).schwarzschild_term;
            if h < ra / 2.0 {
                assert!(t > 0.0);
            } else if h > ra / 2.0 {
                assert!(t < 0.0);
            }
            assert!(t < prev, "delta_Sch not strictly decreasing at h = {h}");
            prev = t;
        }
    }

    #[test]
    fn compensation_height_schwarzschild_is_half_radius() {
        // No rotation, no spin: only delta_Sch survives and its root is r_A/2.
        // |delta| < 1e-16 with slope ~7.4e-17/m bounds the height error by ~1.4 m.
        let b = KerrBody::new(4.5e-3, 0.0, EARTH_SURFACE_RADIUS, 0.0).unwrap();
        let h = compensation_height(&b, OrbitDirection::CoRotating, ShiftMode::Perturbative).unwrap();
        assert!(
            (h - b.surface_radius / 2.0).abs() < 2.0,
            "h* = {h}, expected ~r_A/2 = {}",
            b.surface_radius / 2.0
        );
    }

    #[test]
    fn compensation_height_earth() {
        let b = earth();
        let hp = compensation_height(&b, OrbitDirection::CoRotating, ShiftMode::Perturbative).unwrap();
        let he = compensation_height(&b, OrbitDirection::CoRotating, ShiftMode::Exact).unwrap();
        // Frozen root of the first-order sum: 3169281.633 m.
        assert!((hp - 3_169_281.633).abs() < 2.0, "hp = {hp}");
        // Rotation shifts the root off r_A/2 by ~0.25% of r_A, well under 5%.
        let ra = b.surface_radius;
        assert!((hp - ra / 2.0).abs() / ra < 0.05);
        assert!((he - ra / 2.0).abs() / ra < 0.05);
        // Exact and perturbative roots agree to 4 significant digits.
        assert!((hp - he).abs() / he < 1e-4, "hp = {hp}, he = {he}");
        // Residual shift at the root is below tolerance.
        let d = shift_exact(&b, &orbit(he)).unwrap();
        assert!(d.abs() < COMPENSATION_TOLERANCE);
    }

    #[test]
    fn no_root_without_sign_change() {
        // A non-rotating point mass with the receiver far outside r_A/2 red
        // zone: delta stays positive when r_A is huge relative to 10 r_A... use
        // a body whose delta never crosses zero on the bracket: surface at
        // 0.04 r_A-equivalent won't happen, so instead shrink the bracket by
        // using a body with r_A/2 beyond 10 r_A: impossible geometrically, so
        // check the counter-case: zero-mass body has delta ~ -(r_A w)^2/2 < 0
        // everywhere (pure rotation, no gravity to compensate).
        let b = KerrBody::new(1e-30, 0.0, EARTH_SURFACE_RADIUS, EARTH_ANGULAR_VELOCITY_SI / SPEED_OF_LIGHT)
            .unwrap();
        let err = compensation_height(&b, OrbitDirection::CoRotating, ShiftMode::Perturbative);
        assert!(matches!(err, Err(SpacetimeError::NoRoot { .. })));
    }

    #[test]
    fn invalid_orbit_reports_radicand() {
        // Receiver inside the photon-sphere-like bound 1 - 3M/r_B <= 0.
        let b = KerrBody::new(1.0, 0.0, 2.5, 0.0).unwrap();
        let err = frequency_ratio_exact(&b, &orbit(0.0)).unwrap_err();
        match err {
            SpacetimeError::InvalidOrbit { radicand, .. } => {
                assert_eq!(radicand, "circular-orbit")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    proptest! {
        /// The generic exact path must collapse to the static Schwarzschild
        /// closed form whenever a = 0 and omega = 0.
        #[test]
        fn schwarzschild_reduction(
            m_frac in 1e-12_f64..1e-4,
            ra in 1e5_f64..1e9,
            h_frac in 0.0_f64..10.0,
        ) {
            let m = m_frac * ra;
            let b = KerrBody::new(m, 0.0, ra, 0.0).unwrap();
            let h = h_frac * ra;
            let got = frequency_ratio_exact(&b, &orbit(h)).unwrap();
            let want = schwarzschild_ratio(m, ra, ra + h);
            prop_assert!((got - want).abs() <= 1e-15 * want.abs());
        }
    }
}
