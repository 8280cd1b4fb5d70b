//! The Rosinski measure `R`: a finite mixture of radial profiles along
//! finitely many unit directions, together with the Levy-measure validity and
//! properness checks and the `R <-> (sigma, Q_u)` spectral correspondences.
//!
//! Profiles carry exact analytic information wherever possible (atoms, Pareto
//! tails, power-law segments); numeric grid profiles integrate by the
//! trapezoid rule in log-radius on their node set.

use crate::error::{Result, TsError, Violation};
use crate::quad::{integrate, QuadTol};
use crate::scalar::{norm, Real};

/// Maximum supported ambient dimension; directions stay dense arrays.
pub const MAX_DIM: usize = 8;

/// Radial component of one ray of a Rosinski measure.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile<T> {
    /// Point mass `w` at radius `r0 > 0`.
    Atom { radius: T, weight: T },
    /// Density `c rho r^{-rho-1}` on `(r0, inf)`; total mass `c r0^{-rho}`,
    /// mass above `r >= r0` equal to `c r^{-rho}`.
    Pareto { r0: T, rho: T, c: T },
    /// Tabulated density on ascending positive nodes; functionals use the
    /// trapezoid rule in log-radius over the node set.
    Grid { rs: Vec<T>, density: Vec<T> },
    /// Density `coef r^{exponent}` on `(lo, hi)` with `hi = None` meaning
    /// unbounded support. `lo = 0` is allowed (no atom at the origin).
    Power {
        lo: T,
        hi: Option<T>,
        exponent: T,
        coef: T,
    },
}

impl<T: Real> RadialProfile<T> {
    /// Structural checks: positive radii/weights, ascending grids.
    pub fn check(&self) -> Result<()> {
        match self {
            RadialProfile::Atom { radius, weight } => {
                if !(*radius > T::zero()) {
                    return Err(TsError::Construction(format!(
                        "atom radius must be > 0, got {radius}"
                    )));
                }
                if !(*weight > T::zero()) {
                    return Err(TsError::Construction(format!(
                        "atom weight must be > 0, got {weight}"
                    )));
                }
            }
            RadialProfile::Pareto { r0, rho, c } => {
                if !(*r0 > T::zero() && *rho > T::zero() && *c > T::zero()) {
                    return Err(TsError::Construction(format!(
                        "pareto profile needs r0, rho, c > 0, got ({r0}, {rho}, {c})"
                    )));
                }
            }
            RadialProfile::Grid { rs, density } => {
                if rs.len() < 2 || rs.len() != density.len() {
                    return Err(TsError::Construction(
                        "grid profile needs >= 2 nodes and matching density length".into(),
                    ));
                }
                if !(rs[0] > T::zero()) {
                    return Err(TsError::Construction("grid radii must be > 0".into()));
                }
                for w in rs.windows(2) {
                    if !(w[1] > w[0]) {
                        return Err(TsError::Construction("grid radii must be ascending".into()));
                    }
                }
                if density.iter().any(|d| *d < T::zero() || !d.is_finite()) {
                    return Err(TsError::Construction(
                        "grid density must be finite and non-negative".into(),
                    ));
                }
            }
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => {
                if !(*lo >= T::zero()) || !(*coef > T::zero()) || !exponent.is_finite() {
                    return Err(TsError::Construction(
                        "power profile needs lo >= 0, coef > 0, finite exponent".into(),
                    ));
                }
                if let Some(h) = hi {
                    if !(*h > *lo) {
                        return Err(TsError::Construction("power profile needs hi > lo".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonicalizes `Power{lo > 0, hi = inf, exponent < -1}` into the
    /// equivalent `Pareto`.
    pub fn normalized(self) -> Self {
        if let RadialProfile::Power {
            lo,
            hi: None,
            exponent,
            coef,
        } = self
        {
            if lo > T::zero() && exponent < -T::one() {
                let rho = -exponent - T::one();
                return RadialProfile::Pareto {
                    r0: lo,
                    rho,
                    c: coef / rho,
                };
            }
        }
        self
    }

    /// Total mass (may be `+inf`).
    pub fn total_mass(&self) -> T {
        match self {
            RadialProfile::Atom { weight, .. } => *weight,
            RadialProfile::Pareto { r0, rho, c } => *c * r0.powf(-*rho),
            RadialProfile::Grid { rs, density } => log_trapz(rs, density, |_| T::one()),
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => power_segment_integral(*lo, *hi, *exponent, *coef, T::zero()),
        }
    }

    /// Mass strictly above radius `r` (may be `+inf` only for power profiles
    /// with fat unbounded tails, which `validate` rejects).
    pub fn mass_above(&self, r: T) -> T {
        match self {
            RadialProfile::Atom { radius, weight } => {
                if *radius > r {
                    *weight
                } else {
                    T::zero()
                }
            }
            RadialProfile::Pareto { r0, rho, c } => *c * r.max(*r0).powf(-*rho),
            RadialProfile::Grid { rs, density } => log_trapz_above(rs, density, r, |_| T::one()),
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => power_segment_integral(lo.max(r), *hi, *exponent, *coef, T::zero()),
        }
    }

    /// `int r^q dProfile`, `None` when divergent.
    pub fn power_moment(&self, q: T) -> Option<T> {
        match self {
            RadialProfile::Atom { radius, weight } => Some(*weight * radius.powf(q)),
            RadialProfile::Pareto { r0, rho, c } => {
                if q < *rho {
                    Some(*c * *rho * r0.powf(q - *rho) / (*rho - q))
                } else {
                    None
                }
            }
            RadialProfile::Grid { rs, density } => Some(log_trapz(rs, density, |r| r.powf(q))),
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => {
                let v = power_segment_integral(*lo, *hi, *exponent, *coef, q);
                if v.is_finite() {
                    Some(v)
                } else {
                    None
                }
            }
        }
    }

    /// `int_{r>1} r^q dProfile`, `None` when divergent.
    pub fn tail_power_moment(&self, q: T) -> Option<T> {
        let one = T::one();
        match self {
            RadialProfile::Atom { radius, weight } => Some(if *radius > one {
                *weight * radius.powf(q)
            } else {
                T::zero()
            }),
            RadialProfile::Pareto { r0, rho, c } => {
                if q < *rho {
                    let t = r0.max(one);
                    Some(*c * *rho * t.powf(q - *rho) / (*rho - q))
                } else {
                    None
                }
            }
            RadialProfile::Grid { rs, density } => {
                Some(log_trapz_above(rs, density, one, |r| r.powf(q)))
            }
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => {
                let v = power_segment_integral(lo.max(one), *hi, *exponent, *coef, q);
                if v.is_finite() {
                    Some(v)
                } else {
                    None
                }
            }
        }
    }

    /// `int_{r>1} r^q log(r) dProfile`, `None` when divergent.
    pub fn tail_log_moment(&self, q: T) -> Option<T> {
        let one = T::one();
        match self {
            RadialProfile::Atom { radius, weight } => Some(if *radius > one {
                *weight * radius.powf(q) * radius.ln()
            } else {
                T::zero()
            }),
            RadialProfile::Pareto { r0, rho, c } => {
                if q < *rho {
                    // int_t^inf r^{q-rho-1} ln r dr = t^{q-rho} (ln t/(rho-q) + 1/(rho-q)^2)
                    let t = r0.max(one);
                    let d = *rho - q;
                    Some(*c * *rho * t.powf(-d) * (t.ln() / d + T::one() / (d * d)))
                } else {
                    None
                }
            }
            RadialProfile::Grid { rs, density } => {
                Some(log_trapz_above(rs, density, one, |r| r.powf(q) * r.ln()))
            }
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => {
                let t = lo.max(one);
                let e = *exponent + q;
                match hi {
                    None => {
                        if e < -T::one() {
                            let d = -e - T::one();
                            Some(*coef * t.powf(-d) * (t.ln() / d + T::one() / (d * d)))
                        } else {
                            None
                        }
                    }
                    Some(h) => {
                        if *h <= t {
                            return Some(T::zero());
                        }
                        // int_t^h r^e ln r dr, closed form
                        let anti = |x: T| {
                            if (e + T::one()).abs() < T::of(1e-12) {
                                let l = x.ln();
                                l * l / T::of(2.0)
                            } else {
                                let ep1 = e + T::one();
                                x.powf(ep1) * (x.ln() / ep1 - T::one() / (ep1 * ep1))
                            }
                        };
                        Some(*coef * (anti(*h) - anti(t)))
                    }
                }
            }
        }
    }

    /// `int_{r<=1} r^2 dProfile`, `None` when divergent (only possible for
    /// a power profile reaching the origin too steeply).
    pub fn origin_square_integral(&self) -> Option<T> {
        let one = T::one();
        match self {
            RadialProfile::Atom { radius, weight } => Some(if *radius <= one {
                *weight * *radius * *radius
            } else {
                T::zero()
            }),
            RadialProfile::Pareto { r0, rho, c } => {
                if *r0 >= one {
                    return Some(T::zero());
                }
                // int_{r0}^{1} r^2 c rho r^{-rho-1} dr
                let e = T::of(2.0) - *rho - one;
                let v = if (e + one).abs() < T::of(1e-12) {
                    *c * *rho * (one / *r0).ln()
                } else {
                    *c * *rho * (one - r0.powf(e + one)) / (e + one)
                };
                Some(v)
            }
            RadialProfile::Grid { rs, density } => {
                Some(log_trapz(rs, density, |r| if r <= one { r * r } else { T::zero() }))
            }
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => {
                let upper = hi.map_or(one, |h| h.min(one));
                if *lo >= upper {
                    return Some(T::zero());
                }
                let v = power_segment_integral(*lo, Some(upper), *exponent, *coef, T::of(2.0));
                if v.is_finite() {
                    Some(v)
                } else {
                    None
                }
            }
        }
    }

    /// General functional `int f(r) dProfile(r)`, assuming absolute
    /// convergence. `growth_at_inf` bounds the power growth of `f` at large
    /// radii (the unbounded-support substitution uses it to flatten the
    /// endpoint).
    pub fn integral<F: Fn(T) -> T>(&self, f: F, growth_at_inf: T, tol: &QuadTol<T>) -> T {
        self.integral_dyn(&f, growth_at_inf, tol)
    }

    fn integral_dyn(&self, f: &dyn Fn(T) -> T, growth_at_inf: T, tol: &QuadTol<T>) -> T {
        match self {
            RadialProfile::Atom { radius, weight } => *weight * f(*radius),
            RadialProfile::Pareto { r0, rho, c } => {
                pareto_like_integral(*r0, *rho, *c * *rho, f, growth_at_inf, tol)
            }
            RadialProfile::Grid { rs, density } => log_trapz(rs, density, f),
            RadialProfile::Power {
                lo,
                hi,
                exponent,
                coef,
            } => {
                let one = T::one();
                match hi {
                    Some(h) => {
                        if *lo > T::zero() {
                            integrate(|x| f(x) * *coef * x.powf(*exponent), *lo, *h, tol).value
                        } else {
                            // (0, h]: x = h w^{1/(exponent+1)}, needs exponent > -1
                            let ep1 = *exponent + one;
                            if !(ep1 > T::zero()) {
                                return T::infinity();
                            }
                            let pref = *coef * h.powf(ep1) / ep1;
                            pref * integrate(|w: T| f(*h * w.powf(one / ep1)), T::zero(), one, tol)
                                .value
                        }
                    }
                    None => {
                        let split = lo.max(one);
                        let head = if *lo < split {
                            RadialProfile::Power {
                                lo: *lo,
                                hi: Some(split),
                                exponent: *exponent,
                                coef: *coef,
                            }
                            .integral_dyn(f, growth_at_inf, tol)
                        } else {
                            T::zero()
                        };
                        // [split, inf): pareto-like with rho = -exponent - 1
                        let m = -*exponent - one;
                        if !(m > T::zero()) {
                            return T::infinity();
                        }
                        head + pareto_like_integral(split, m, *coef, f, growth_at_inf, tol)
                    }
                }
            }
        }
    }

    /// True if the support is unbounded above.
    pub fn unbounded(&self) -> bool {
        matches!(
            self,
            RadialProfile::Pareto { .. } | RadialProfile::Power { hi: None, .. }
        )
    }
}

/// `int_lo^hi coef x^{exponent + q} dx`; `+inf` when divergent.
fn power_segment_integral<T: Real>(lo: T, hi: Option<T>, exponent: T, coef: T, q: T) -> T {
    let one = T::one();
    let e = exponent + q;
    match hi {
        None => {
            if e < -one && lo > T::zero() {
                coef * lo.powf(e + one) / (-e - one)
            } else {
                T::infinity()
            }
        }
        Some(h) => {
            if h <= lo {
                return T::zero();
            }
            if (e + one).abs() < T::of(1e-12) {
                if lo > T::zero() {
                    coef * (h / lo).ln()
                } else {
                    T::infinity()
                }
            } else if e > -one {
                coef * (h.powf(e + one) - lo.powf(e + one)) / (e + one)
            } else if lo > T::zero() {
                coef * (lo.powf(e + one) - h.powf(e + one)) / (-e - one)
            } else {
                T::infinity()
            }
        }
    }
}

/// `int_{r0}^inf f(x) c_total x^{-rho-1} dx` via the quantile substitution
/// `x = r0 w^{-m/rho}`, `m = rho/(rho - g)` flattening growth `g` of `f`.
fn pareto_like_integral<T: Real>(
    r0: T,
    rho: T,
    c_total: T,
    f: &dyn Fn(T) -> T,
    growth_at_inf: T,
    tol: &QuadTol<T>,
) -> T {
    let g = growth_at_inf.max(T::zero());
    if g >= rho {
        return T::infinity();
    }
    let m = rho / (rho - g);
    let mass = c_total / rho * r0.powf(-rho); // c_total = c * rho for pareto
    let val = integrate(
        |w: T| {
            if w <= T::zero() {
                return T::zero();
            }
            let x = r0 * w.powf(-m / rho);
            let fx = f(x);
            if fx == T::zero() {
                return T::zero();
            }
            fx * m * w.powf(m - T::one())
        },
        T::zero(),
        T::one(),
        tol,
    )
    .value;
    mass * val
}

/// Trapezoid rule in log-radius over grid nodes: `int f(r) dens(r) dr`
/// with `g(w) = r f(r) dens(r)`, `w = ln r`.
pub(crate) fn log_trapz<T: Real, F: Fn(T) -> T>(rs: &[T], density: &[T], f: F) -> T {
    let mut acc = T::zero();
    let half = T::of(0.5);
    for i in 0..rs.len() - 1 {
        let (r0, r1) = (rs[i], rs[i + 1]);
        let g0 = r0 * density[i] * f(r0);
        let g1 = r1 * density[i + 1] * f(r1);
        acc = acc + half * (g0 + g1) * (r1 / r0).ln();
    }
    acc
}

/// Same as [`log_trapz`] restricted to radii above `cut` (partial first cell
/// interpolated linearly in log-radius).
fn log_trapz_above<T: Real, F: Fn(T) -> T>(rs: &[T], density: &[T], cut: T, f: F) -> T {
    let n = rs.len();
    if cut >= rs[n - 1] {
        return T::zero();
    }
    if cut <= rs[0] {
        return log_trapz(rs, density, f);
    }
    let half = T::of(0.5);
    let mut acc = T::zero();
    for i in 0..n - 1 {
        let (r0, r1) = (rs[i], rs[i + 1]);
        if r1 <= cut {
            continue;
        }
        let g0 = r0 * density[i] * f(r0);
        let g1 = r1 * density[i + 1] * f(r1);
        if r0 >= cut {
            acc = acc + half * (g0 + g1) * (r1 / r0).ln();
        } else {
            // partial cell [cut, r1]
            let w = (cut / r0).ln() / (r1 / r0).ln();
            let gcut = g0 + (g1 - g0) * w;
            acc = acc + half * (gcut + g1) * (r1 / cut).ln();
        }
    }
    acc
}

/// One ray: a unit direction together with its radial profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray<T> {
    pub direction: Vec<T>,
    pub profile: RadialProfile<T>,
}

/// The Rosinski measure: finitely many rays in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct RosinskiMeasure<T> {
    dim: usize,
    rays: Vec<Ray<T>>,
}

impl<T: Real> RosinskiMeasure<T> {
    pub fn new(dim: usize, rays: Vec<Ray<T>>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(TsError::Construction(format!(
                "dimension must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        let unit_tol = T::of(1e-12).max(T::epsilon() * T::of(8.0));
        for (i, ray) in rays.iter().enumerate() {
            if ray.direction.len() != dim {
                return Err(TsError::Construction(format!(
                    "ray {i}: direction length {} != dim {dim}",
                    ray.direction.len()
                )));
            }
            let n = norm(&ray.direction);
            if (n - T::one()).abs() > unit_tol {
                return Err(TsError::Construction(format!(
                    "ray {i}: direction norm {n} is not 1 within tolerance"
                )));
            }
            ray.profile.check()?;
        }
        Ok(RosinskiMeasure { dim, rays })
    }

    /// The zero measure in `R^dim`.
    pub fn zero(dim: usize) -> Self {
        RosinskiMeasure { dim, rays: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Ray<T>] {
        &self.rays
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// `int |x|^gamma R(dx)` over all rays, `None` when divergent.
    pub fn norm_moment(&self, gamma: T) -> Option<T> {
        let mut acc = T::zero();
        for ray in &self.rays {
            acc = acc + ray.profile.power_moment(gamma)?;
        }
        Some(acc)
    }
}

/// Outcome of the Levy-measure conditions on `(alpha, R)`.
#[derive(Debug, Clone)]
pub struct Validation {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks whether `(alpha, R)` generates a Levy measure: `alpha < 2` and the
/// alpha-dependent integrability of `R` (square near the origin; `|x|^alpha`,
/// `1 + log|x|`, or plain mass in the tail for `alpha` in (0,2), = 0, < 0).
pub fn validate<T: Real>(alpha: T, measure: &RosinskiMeasure<T>) -> Validation {
    let mut violations = Vec::new();
    if !(alpha < T::of(2.0)) {
        violations.push(Violation::AlphaRange);
    }
    let zero = T::zero();
    for (i, ray) in measure.rays().iter().enumerate() {
        if ray.profile.origin_square_integral().is_none() {
            violations.push(Violation::OriginSquareIntegral { ray: i });
        }
        if alpha > zero {
            if ray.profile.tail_power_moment(alpha).is_none() {
                violations.push(Violation::TailAlphaIntegral { ray: i });
            }
        } else if alpha == zero {
            if ray.profile.tail_log_moment(zero).is_none() {
                violations.push(Violation::TailLogIntegral { ray: i });
            }
        } else if ray.profile.tail_power_moment(zero).is_none() {
            violations.push(Violation::TailMassIntegral { ray: i });
        }
    }
    Validation {
        valid: violations.is_empty(),
        violations,
    }
}

/// Properness: `int |x|^alpha R(dx) < inf` on top of validity.
pub fn is_proper<T: Real>(alpha: T, measure: &RosinskiMeasure<T>) -> Result<bool> {
    let v = validate(alpha, measure);
    if !v.valid {
        return Err(TsError::InvalidMeasure(v.violations));
    }
    Ok(measure.norm_moment(alpha).is_some())
}

/// Full parameter set of a p-tempered alpha-stable distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct TsParams<T> {
    alpha: T,
    p: T,
    shift: Vec<T>,
    measure: RosinskiMeasure<T>,
}

impl<T: Real> TsParams<T> {
    pub fn new(alpha: T, p: T, shift: Vec<T>, measure: RosinskiMeasure<T>) -> Result<Self> {
        if !(p > T::zero()) {
            return Err(TsError::Domain(format!("p must be > 0, got {p}")));
        }
        if shift.len() != measure.dim() {
            return Err(TsError::Construction(format!(
                "shift length {} != dim {}",
                shift.len(),
                measure.dim()
            )));
        }
        let v = validate(alpha, &measure);
        if !v.valid {
            return Err(TsError::InvalidMeasure(v.violations));
        }
        Ok(TsParams {
            alpha,
            p,
            shift,
            measure,
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn shift(&self) -> &[T] {
        &self.shift
    }

    pub fn measure(&self) -> &RosinskiMeasure<T> {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.measure.dim()
    }

    pub fn kernel(&self) -> crate::special::KernelParams<T> {
        crate::special::KernelParams::new(self.alpha, self.p).expect("validated at construction")
    }

    pub fn is_proper(&self) -> bool {
        self.measure.norm_moment(self.alpha).is_some()
    }
}

/// One direction of the spectral form: weight `sigma({u})` and the Bernstein
/// measure `Q_u` (a probability measure for proper laws).
#[derive(Debug, Clone)]
pub struct SpectralRay<T> {
    pub direction: Vec<T>,
    pub weight: T,
    pub q_profile: RadialProfile<T>,
}

/// Spectral reparameterization `(sigma, {Q_u})` of a proper measure.
#[derive(Debug, Clone)]
pub struct SpectralForm<T> {
    pub alpha: T,
    pub p: T,
    pub dim: usize,
    pub rays: Vec<SpectralRay<T>>,
}

/// `sigma(du) Q_u(ds)` from `R`: `sigma({u}) = int |x|^alpha dProfile_u`, and
/// `Q_u` is the normalized pushforward of `|x|^alpha dProfile_u` under
/// `r -> r^{-p}`.
pub fn to_spectral<T: Real>(params: &TsParams<T>) -> Result<SpectralForm<T>> {
    let alpha = params.alpha();
    let p = params.p();
    let mut rays = Vec::new();
    for ray in params.measure().rays() {
        let weight = ray
            .profile
            .power_moment(alpha)
            .ok_or(TsError::NotProper)?;
        let q_profile = radial_pushforward(&ray.profile, -p, alpha, T::one() / weight);
        rays.push(SpectralRay {
            direction: ray.direction.clone(),
            weight,
            q_profile,
        });
    }
    Ok(SpectralForm {
        alpha,
        p,
        dim: params.dim(),
        rays,
    })
}

/// Inverse map: `R` from `(sigma, {Q_u})` via the pushforward `s -> s^{-1/p}`
/// with weight `s^{alpha/p}`.
pub fn from_spectral<T: Real>(form: &SpectralForm<T>, alpha: T, p: T) -> Result<RosinskiMeasure<T>> {
    let mut rays = Vec::new();
    for sray in &form.rays {
        let profile =
            radial_pushforward(&sray.q_profile, -T::one() / p, alpha / p, sray.weight).normalized();
        rays.push(Ray {
            direction: sray.direction.clone(),
            profile,
        });
    }
    RosinskiMeasure::new(form.dim, rays)
}

/// Pushforward of a radial profile under `r -> r^e` (`e != 0`) with radial
/// weight `r^{w}` and overall scale `scale`:
/// the image of `mu(dr)` is `scale * r^w mu(dr)` carried to `s = r^e`.
fn radial_pushforward<T: Real>(
    profile: &RadialProfile<T>,
    e: T,
    w: T,
    scale: T,
) -> RadialProfile<T> {
    let one = T::one();
    match profile {
        RadialProfile::Atom { radius, weight } => RadialProfile::Atom {
            radius: radius.powf(e),
            weight: scale * *weight * radius.powf(w),
        },
        RadialProfile::Pareto { r0, rho, c } => {
            // density c rho r^{-rho-1} on (r0, inf); image support for e < 0 is (0, r0^e)
            // dens_s(s) = scale * r^w * c rho r^{-rho-1} * |dr/ds|, r = s^{1/e}
            // = scale * c rho / |e| * s^{(w - rho)/e - 1}
            let expo = (w - *rho) / e - one;
            let coef = scale * *c * *rho / e.abs();
            if e < T::zero() {
                RadialProfile::Power {
                    lo: T::zero(),
                    hi: Some(r0.powf(e)),
                    exponent: expo,
                    coef,
                }
            } else {
                RadialProfile::Power {
                    lo: r0.powf(e),
                    hi: None,
                    exponent: expo,
                    coef,
                }
            }
        }
        RadialProfile::Grid { rs, density } => {
            let mut pts: Vec<(T, T)> = rs
                .iter()
                .zip(density)
                .map(|(&r, &d)| {
                    let s = r.powf(e);
                    // |dr/ds| = |1/e| s^{1/e - 1}
                    let dens = scale * r.powf(w) * d * (one / e.abs()) * s.powf(one / e - one);
                    (s, dens)
                })
                .collect();
            pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite radii"));
            RadialProfile::Grid {
                rs: pts.iter().map(|p| p.0).collect(),
                density: pts.iter().map(|p| p.1).collect(),
            }
        }
        RadialProfile::Power {
            lo,
            hi,
            exponent,
            coef,
        } => {
            let expo = (w + *exponent + one) / e - one;
            let ncoef = scale * *coef / e.abs();
            let lo_img = if *lo == T::zero() {
                None // r -> r^e with e < 0 sends 0 to infinity
            } else {
                Some(lo.powf(e))
            };
            let hi_img = hi.map(|h| h.powf(e));
            let (new_lo, new_hi) = if e < T::zero() {
                (hi_img.unwrap_or(T::zero()), lo_img)
            } else {
                (lo_img.unwrap_or(T::zero()), hi_img)
            };
            RadialProfile::Power {
                lo: new_lo,
                hi: new_hi,
                exponent: expo,
                coef: ncoef,
            }
        }
    }
}

/// The tempering function `q(r^p, u) = int e^{-r^p s} Q_u(ds)` in direction
/// `u`; tends to 1 as `r -> 0` for proper measures. Rays sharing the
/// direction contribute as a sigma-weighted mixture.
pub fn tempering_function<T: Real>(
    form: &SpectralForm<T>,
    r: T,
    direction: &[T],
    tol: &QuadTol<T>,
) -> Result<T> {
    if !(r > T::zero()) {
        return Err(TsError::Domain(format!(
            "tempering_function needs r > 0, got {r}"
        )));
    }
    let dir_tol = T::of(1e-9);
    let matching: Vec<&SpectralRay<T>> = form
        .rays
        .iter()
        .filter(|sr| {
            sr.direction.len() == direction.len()
                && sr
                    .direction
                    .iter()
                    .zip(direction)
                    .all(|(&a, &b)| (a - b).abs() <= dir_tol)
        })
        .collect();
    if matching.is_empty() {
        return Err(TsError::UnknownDirection(format!(
            "no spectral ray matches direction {direction:?}"
        )));
    }
    let t = r.powf(form.p);
    let laplace = |q: &RadialProfile<T>| {
        q.integral(
            |s| {
                let e = -t * s;
                if e < T::of(-700.0) {
                    T::zero()
                } else {
                    e.exp()
                }
            },
            T::zero(),
            tol,
        )
    };
    let total_weight: T = matching.iter().map(|sr| sr.weight).sum();
    let mut acc = T::zero();
    for sr in &matching {
        acc = acc + sr.weight * laplace(&sr.q_profile);
    }
    Ok(acc / total_weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom_measure(radius: f64, weight: f64) -> RosinskiMeasure<f64> {
        RosinskiMeasure::new(
            1,
            vec![Ray {
                direction: vec![1.0],
                profile: RadialProfile::Atom { radius, weight },
            }],
        )
        .unwrap()
    }

    fn pareto_measure(r0: f64, rho: f64, c: f64) -> RosinskiMeasure<f64> {
        RosinskiMeasure::new(
            1,
            vec![Ray {
                direction: vec![1.0],
                profile: RadialProfile::Pareto { r0, rho, c },
            }],
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(RosinskiMeasure::<f64>::new(0, vec![]).is_err());
        assert!(RosinskiMeasure::new(
            1,
            vec![Ray {
                direction: vec![0.5],
                profile: RadialProfile::Atom {
                    radius: 1.0,
                    weight: 1.0
                },
            }]
        )
        .is_err());
        assert!(RosinskiMeasure::new(
            1,
            vec![Ray {
                direction: vec![1.0],
                profile: RadialProfile::Atom {
                    radius: 0.0,
                    weight: 1.0
                },
            }]
        )
        .is_err());
        assert!(RosinskiMeasure::new(
            2,
            vec![Ray {
                direction: vec![1.0],
                profile: RadialProfile::Atom {
                    radius: 1.0,
                    weight: 1.0
                },
            }]
        )
        .is_err());
    }

    #[test]
    fn validate_atom_always_valid() {
        let m = atom_measure(1.0, 1.0);
        assert!(validate(0.5, &m).valid);
        assert!(validate(0.0, &m).valid);
        assert!(validate(-1.0, &m).valid);
        assert!(!validate(2.0, &m).valid);
    }

    #[test]
    fn validate_pareto_dichotomy() {
        // alpha = 0.5, rho = 0.3 <= alpha: invalid via the tail integral
        let m = pareto_measure(1.0, 0.3, 1.0);
        let v = validate(0.5, &m);
        assert!(!v.valid);
        assert!(matches!(v.violations[0], Violation::TailAlphaIntegral { ray: 0 }));
        // alpha = -1, rho = 0.5: valid (tail mass = 1 < inf)
        assert!(validate(-1.0, &pareto_measure(1.0, 0.5, 1.0)).valid);
        // boundary: rho = alpha exactly diverges
        assert!(!validate(0.5, &pareto_measure(1.0, 0.5, 1.0)).valid);
    }

    #[test]
    fn validity_monotone_in_alpha() {
        // Corollary: valid at alpha implies valid at any beta <= alpha
        let m = pareto_measure(1.0, 1.2, 2.0);
        assert!(validate(1.0, &m).valid);
        for beta in [0.5, 0.0, -0.5, -2.0] {
            assert!(validate(beta, &m).valid, "beta = {beta}");
        }
    }

    #[test]
    fn proper_examples() {
        assert!(is_proper(0.5, &atom_measure(1.0, 1.0)).unwrap());
        // int r^{0.5} * 1.5 r^{-2.5} dr over (1, inf) = 1.5/2 * ... finite
        assert!(is_proper(0.5, &pareto_measure(1.0, 1.5, 1.0)).unwrap());
        let val = pareto_measure(1.0, 1.5, 1.0).norm_moment(0.5).unwrap();
        assert!((val - 1.5).abs() < 1e-12, "got {val}");
        // invalid measure -> error
        assert!(is_proper(0.5, &pareto_measure(1.0, 0.3, 1.0)).is_err());
    }

    #[test]
    fn spectral_atom_weight() {
        // atom weight 2 at radius 4, alpha = 0.5: sigma({u}) = 2 * 4^{0.5} = 4
        let m: RosinskiMeasure<f64> = RosinskiMeasure::new(
            1,
            vec![Ray {
                direction: vec![1.0],
                profile: RadialProfile::Atom {
                    radius: 4.0,
                    weight: 2.0,
                },
            }],
        )
        .unwrap();
        let params = TsParams::new(0.5, 1.0, vec![0.0], m).unwrap();
        let s = to_spectral(&params).unwrap();
        assert!((s.rays[0].weight - 4.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_zero_measure() {
        let params = TsParams::new(0.5, 1.0, vec![0.0], RosinskiMeasure::zero(1)).unwrap();
        let s = to_spectral(&params).unwrap();
        assert!(s.rays.is_empty());
    }

    #[test]
    fn from_spectral_atom_maps() {
        // Q_u atom at s = 8, p = 3, alpha = 0 -> R atom at 8^{-1/3} = 0.5, weight 1
        let form: SpectralForm<f64> = SpectralForm {
            alpha: 0.0,
            p: 3.0,
            dim: 1,
            rays: vec![SpectralRay {
                direction: vec![1.0],
                weight: 1.0,
                q_profile: RadialProfile::Atom {
                    radius: 8.0,
                    weight: 1.0,
                },
            }],
        };
        let r = from_spectral(&form, 0.0, 3.0).unwrap();
        match &r.rays()[0].profile {
            RadialProfile::Atom { radius, weight } => {
                assert!((radius - 0.5).abs() < 1e-14);
                assert!((weight - 1.0).abs() < 1e-14);
            }
            other => panic!("expected atom, got {other:?}"),
        }
        // Q_u atom at s = 4, p = 2, alpha = 1 -> radius 1/2, weight 4^{1/2} = 2
        let form: SpectralForm<f64> = SpectralForm {
            alpha: 1.0,
            p: 2.0,
            dim: 1,
            rays: vec![SpectralRay {
                direction: vec![1.0],
                weight: 1.0,
                q_profile: RadialProfile::Atom {
                    radius: 4.0,
                    weight: 1.0,
                },
            }],
        };
        let r = from_spectral(&form, 1.0, 2.0).unwrap();
        match &r.rays()[0].profile {
            RadialProfile::Atom { radius, weight } => {
                assert!((radius - 0.5).abs() < 1e-14);
                assert!((weight - 2.0).abs() < 1e-14);
            }
            other => panic!("expected atom, got {other:?}"),
        }
    }

    #[test]
    fn spectral_round_trip_atoms() {
        let m: RosinskiMeasure<f64> = RosinskiMeasure::new(
            2,
            vec![
                Ray {
                    direction: vec![1.0, 0.0],
                    profile: RadialProfile::Atom {
                        radius: 2.0,
                        weight: 3.0,
                    },
                },
                Ray {
                    direction: vec![0.0, -1.0],
                    profile: RadialProfile::Atom {
                        radius: 0.7,
                        weight: 0.4,
                    },
                },
            ],
        )
        .unwrap();
        let params = TsParams::new(0.5, 1.3, vec![0.0, 0.0], m.clone()).unwrap();
        let rt = from_spectral(&to_spectral(&params).unwrap(), 0.5, 1.3).unwrap();
        for (a, b) in m.rays().iter().zip(rt.rays()) {
            match (&a.profile, &b.profile) {
                (
                    RadialProfile::Atom { radius: r1, weight: w1 },
                    RadialProfile::Atom { radius: r2, weight: w2 },
                ) => {
                    assert!((r1 - r2).abs() < 1e-12, "radius {r1} vs {r2}");
                    assert!((w1 - w2).abs() < 1e-12, "weight {w1} vs {w2}");
                }
                other => panic!("expected atoms, got {other:?}"),
            }
        }
    }

    #[test]
    fn spectral_round_trip_pareto_values() {
        let m = pareto_measure(1.5, 2.0, 0.8);
        let params = TsParams::new(0.5, 1.0, vec![0.0], m.clone()).unwrap();
        let rt = from_spectral(&to_spectral(&params).unwrap(), 0.5, 1.0).unwrap();
        // the round trip canonicalizes back to a pareto profile
        match &rt.rays()[0].profile {
            RadialProfile::Pareto { r0, rho, c } => {
                assert!((r0 - 1.5).abs() < 1e-12);
                assert!((rho - 2.0).abs() < 1e-12);
                assert!((c - 0.8).abs() < 1e-12);
            }
            other => panic!("expected pareto, got {other:?}"),
        }
    }

    #[test]
    fn tempering_function_values() {
        // Q_u = atom at s = 2, r = 1, p = 1 -> e^{-2}
        let form = SpectralForm {
            alpha: 0.5,
            p: 1.0,
            dim: 1,
            rays: vec![SpectralRay {
                direction: vec![1.0],
                weight: 1.0,
                q_profile: RadialProfile::Atom {
                    radius: 2.0,
                    weight: 1.0,
                },
            }],
        };
        let tol = QuadTol::default();
        let v = tempering_function(&form, 1.0, &[1.0], &tol).unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 1e-14);
        assert!(tempering_function(&form, 1.0, &[-1.0], &tol).is_err());
        // proper: q -> 1 as r -> 0
        let v0 = tempering_function(&form, 1e-8, &[1.0], &tol).unwrap();
        assert!((v0 - 1.0).abs() < 1e-7, "got {v0}");
    }

    #[test]
    fn tempering_function_two_atoms() {
        // Q_u = {(1, 0.5), (3, 0.5)}, r = 1, p = 2 -> 0.5 e^{-1} + 0.5 e^{-3};
        // the two atoms sit on separate rays sharing the direction.
        let mk = |radius: f64, weight: f64| SpectralRay {
            direction: vec![1.0],
            weight,
            q_profile: RadialProfile::Atom { radius, weight: 1.0 },
        };
        let form = SpectralForm {
            alpha: 0.5,
            p: 2.0,
            dim: 1,
            rays: vec![mk(1.0, 0.5), mk(3.0, 0.5)],
        };
        let tol = QuadTol::default();
        let v = tempering_function(&form, 1.0, &[1.0], &tol).unwrap();
        let expect = 0.5 * (-1.0f64).exp() + 0.5 * (-3.0f64).exp();
        assert!((v - expect).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn complete_monotonicity_of_tempering() {
        // first and second divided differences alternate in sign on a log grid
        let m = pareto_measure(1.0, 2.0, 1.0);
        let params = TsParams::new(0.5, 1.0, vec![0.0], m).unwrap();
        let form = to_spectral(&params).unwrap();
        let tol = QuadTol::default();
        let grid = crate::scalar::log_grid(0.05f64, 5.0, 24);
        let vals: Vec<f64> = grid
            .iter()
            .map(|&r| tempering_function(&form, r, &[1.0], &tol).unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0] + 1e-12, "q must be decreasing");
        }
        // convexity in r^p (here p = 1): second differences non-negative
        for i in 1..vals.len() - 1 {
            let d2 = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i])
                - (vals[i] - vals[i - 1]) / (grid[i] - grid[i - 1]);
            assert!(d2 > -1e-9, "q must be convex, d2 = {d2}");
        }
    }

    #[test]
    fn grid_profile_mass() {
        // density 1 on [1, e]: mass = int_1^e dr = e - 1
        let rs = crate::scalar::log_grid(1.0f64, std::f64::consts::E, 200);
        let density = vec![1.0; rs.len()];
        let p = RadialProfile::Grid { rs, density };
        let mass = p.total_mass();
        assert!(
            (mass - (std::f64::consts::E - 1.0)).abs() < 1e-6,
            "got {mass}"
        );
        let above = p.mass_above(2.0);
        assert!(
            (above - (std::f64::consts::E - 2.0)).abs() < 1e-6,
            "got {above}"
        );
    }

    #[test]
    fn pareto_integral_against_closed_form() {
        // int r^{0.3} dPareto(r0=2, rho=1.5, c=0.7) = c rho r0^{0.3-1.5}/(1.5-0.3)
        let p: RadialProfile<f64> = RadialProfile::Pareto {
            r0: 2.0,
            rho: 1.5,
            c: 0.7,
        };
        let tol = QuadTol::default();
        let got = p.integral(|r| r.powf(0.3), 0.3, &tol);
        let expect = p.power_moment(0.3).unwrap();
        assert!((got - expect).abs() / expect < 1e-9, "{got} vs {expect}");
    }
}
