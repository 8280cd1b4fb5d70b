//! The induced Levy measure
//!
//! ```text
//!     M(A) = int int 1_A(t x) t^{-1-alpha} e^{-t^p} dt R(dx),
//! ```
//!
//! through its tail functionals `M_D(r) = M(|x| > r, x/|x| in D)`, the mass
//! of small balls, the scaled-tail limits, and the selfdecomposability
//! predicate.
//!
//! For atoms the tail is an exact kernel sum; for Pareto and power-law
//! profiles it reduces to incomplete gamma functions through
//! `int_0^b k(s) s^{m-1} ds = k(b) b^m / m + (mp)^{-1} gamma((m-alpha)/p, b^p)`;
//! grids use the trapezoid rule on their nodes.

use crate::error::{Result, TsError};
use crate::measure::{RadialProfile, TsParams};
use crate::quad::{integrate, QuadTol};
use crate::scalar::Real;
use crate::special::{
    gamma, gamma_lower, kernel_k, kernel_k0, kernel_k_deriv, KernelParams,
};

/// Cone selector: explicit ray indices, or `None` for the whole sphere.
pub type Cone<'a> = Option<&'a [usize]>;

/// `int_0^b k(s) s^{m-1} ds` in closed form (m > alpha v 0 when b = inf).
fn kernel_power_integral<T: Real>(b: T, m: T, kp: &KernelParams<T>) -> T {
    let p = kp.p();
    let alpha = kp.alpha();
    if m.abs() < T::of(1e-9) {
        // closed form degenerates; fall back to log-substituted quadrature
        let tol = QuadTol::new(T::of(1e-14), T::of(1e-11));
        let gap = T::of(0.25).max(-alpha);
        let y_lo = b.ln() - T::of(80.0) / gap;
        return integrate(
            |y: T| {
                let s = y.exp();
                kernel_k(s, kp) * s.powf(m)
            },
            y_lo,
            b.ln(),
            &tol,
        )
        .value;
    }
    let a_inc = (m - alpha) / p;
    if b.is_infinite() {
        return gamma(a_inc) / (m * p);
    }
    let tail_term = {
        let k_b = kernel_k(b, kp);
        if k_b == T::zero() {
            T::zero()
        } else {
            k_b * b.powf(m) / m
        }
    };
    tail_term + gamma_lower(a_inc, b.powf(p)).expect("m > alpha ensured by validity") / (m * p)
}

/// Tail of one radial profile: `int k(r/x) dProfile(x)`.
pub(crate) fn profile_tail<T: Real>(profile: &RadialProfile<T>, r: T, kp: &KernelParams<T>) -> T {
    match profile {
        RadialProfile::Atom { radius, weight } => *weight * kernel_k(r / *radius, kp),
        RadialProfile::Pareto { r0, rho, c } => {
            let b = r / *r0;
            *c * *rho * r.powf(-*rho) * kernel_power_integral(b, *rho, kp)
        }
        RadialProfile::Grid { rs, density } => {
            crate::measure::log_trapz(rs, density, |x| kernel_k(r / x, kp))
        }
        RadialProfile::Power {
            lo,
            hi,
            exponent,
            coef,
        } => {
            // int_lo^hi k(r/x) coef x^a dx = coef r^{a+1} int_{r/hi}^{r/lo} k(s) s^{-a-2} ds
            let m = -*exponent - T::one();
            let s_hi = if *lo > T::zero() {
                r / *lo
            } else {
                T::infinity()
            };
            let s_lo = match hi {
                Some(h) => r / *h,
                None => T::zero(),
            };
            let upper = kernel_power_integral(s_hi, m, kp);
            let lower = if s_lo > T::zero() {
                kernel_power_integral(s_lo, m, kp)
            } else {
                T::zero()
            };
            *coef * r.powf(-m) * (upper - lower)
        }
    }
}

/// `d/dr` of [`profile_tail`]; equals `-int x^{-1} |k'(r/x)| ... ` and is
/// negative wherever the profile has mass.
pub(crate) fn profile_tail_deriv<T: Real>(
    profile: &RadialProfile<T>,
    r: T,
    kp: &KernelParams<T>,
) -> T {
    let p = kp.p();
    let alpha = kp.alpha();
    match profile {
        RadialProfile::Atom { radius, weight } => {
            *weight * kernel_k_deriv(r / *radius, kp) / *radius
        }
        RadialProfile::Pareto { r0, rho, c } => {
            // -c rho r^{-rho-1} int_0^{r/r0} s^{rho-alpha} e^{-s^p} ds
            let b = r / *r0;
            let a_inc = (*rho - alpha + T::one()) / p;
            let inner = gamma_lower(a_inc, b.powf(p)).expect("rho - alpha + 1 > 0") / p;
            -*c * *rho * r.powf(-*rho - T::one()) * inner
        }
        RadialProfile::Grid { rs, density } => {
            crate::measure::log_trapz(rs, density, |x| kernel_k_deriv(r / x, kp) / x)
        }
        RadialProfile::Power {
            lo,
            hi,
            exponent,
            coef,
        } => {
            let m = -*exponent - T::one();
            let s_hi = if *lo > T::zero() {
                r / *lo
            } else {
                T::infinity()
            };
            let s_lo = match hi {
                Some(h) => r / *h,
                None => T::zero(),
            };
            let a_inc = (m - alpha + T::one()) / p;
            let seg = |s: T| -> T {
                if s.is_infinite() {
                    gamma(a_inc) / p
                } else {
                    gamma_lower(a_inc, s.powf(p)).expect("m - alpha + 1 > 0") / p
                }
            };
            -*coef * r.powf(-m - T::one()) * (seg(s_hi) - seg(s_lo))
        }
    }
}

fn cone_rays<'a, T: Real>(params: &'a TsParams<T>, cone: Cone<'_>) -> Result<Vec<usize>> {
    let n = params.measure().rays().len();
    match cone {
        None => Ok((0..n).collect()),
        Some(idx) => {
            for &i in idx {
                if i >= n {
                    return Err(TsError::UnknownDirection(format!(
                        "ray index {i} out of range ({n} rays)"
                    )));
                }
            }
            Ok(idx.to_vec())
        }
    }
}

/// `M_D(r)`: mass of the Levy measure beyond radius `r` in the cone `D`.
pub fn tail<T: Real>(params: &TsParams<T>, r: T, cone: Cone<'_>) -> Result<T> {
    if !(r > T::zero()) {
        return Err(TsError::Domain(format!("tail requires r > 0, got {r}")));
    }
    let kp = params.kernel();
    let mut acc = T::zero();
    for i in cone_rays(params, cone)? {
        acc = acc + profile_tail(&params.measure().rays()[i].profile, r, &kp);
    }
    Ok(acc)
}

/// `d/dr M_D(r)` (non-positive).
pub fn tail_deriv<T: Real>(params: &TsParams<T>, r: T, cone: Cone<'_>) -> Result<T> {
    if !(r > T::zero()) {
        return Err(TsError::Domain(format!("tail_deriv requires r > 0, got {r}")));
    }
    let kp = params.kernel();
    let mut acc = T::zero();
    for i in cone_rays(params, cone)? {
        acc = acc + profile_tail_deriv(&params.measure().rays()[i].profile, r, &kp);
    }
    Ok(acc)
}

/// `R_D(r)`: mass of the Rosinski measure beyond radius `r` in the cone `D`.
pub fn rosinski_tail<T: Real>(params: &TsParams<T>, r: T, cone: Cone<'_>) -> Result<T> {
    if !(r > T::zero()) {
        return Err(TsError::Domain(format!(
            "rosinski_tail requires r > 0, got {r}"
        )));
    }
    let mut acc = T::zero();
    for i in cone_rays(params, cone)? {
        acc = acc + params.measure().rays()[i].profile.mass_above(r);
    }
    Ok(acc)
}

/// `M(|x| < s)`: infinite whenever `alpha in [0,2)` and `R != 0`; a finite
/// lower-incomplete-gamma functional for `alpha < 0` (still infinite when the
/// measure has infinite mass near the origin).
pub fn ball_mass<T: Real>(params: &TsParams<T>, s: T, tol: &QuadTol<T>) -> Result<T> {
    if !(s > T::zero()) {
        return Err(TsError::Domain(format!("ball_mass requires s > 0, got {s}")));
    }
    if params.measure().is_zero() {
        return Ok(T::zero());
    }
    let alpha = params.alpha();
    if alpha >= T::zero() {
        return Ok(T::infinity());
    }
    let kp = params.kernel();
    let p = kp.p();
    // per profile: int p^{-1} gamma(-alpha/p, (s/x)^p) dProfile(x)
    let a_inc = -alpha / p;
    let mut acc = T::zero();
    for ray in params.measure().rays() {
        let contribution = match &ray.profile {
            RadialProfile::Atom { radius, weight } => {
                *weight * gamma_lower(a_inc, (s / *radius).powf(p))? / p
            }
            RadialProfile::Power { lo, exponent, .. }
                if *lo == T::zero() && *exponent <= -T::one() =>
            {
                // infinite mass near the origin picks up k(0) each
                T::infinity()
            }
            profile => {
                // mass * k0 - tail(s) computed without cancellation:
                // directly integrate the bounded inner integral
                let k0 = kernel_k0(&kp);
                let _ = k0;
                profile.integral(
                    |x| gamma_lower(a_inc, (s / x).powf(p)).unwrap_or(T::zero()) / p,
                    T::zero(),
                    tol,
                )
            }
        };
        acc = acc + contribution;
        if acc.is_infinite() {
            return Ok(T::infinity());
        }
    }
    Ok(acc)
}

/// Analytic limits of `s^alpha M(|x| > s)` at `s -> 0` and `s -> inf`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledTailLimits<T> {
    /// `(1/alpha) int |x|^alpha R(dx)` for `alpha in (0,2)`, `+inf` for
    /// `alpha <= 0` (when `R != 0`).
    pub at_zero: T,
    /// Always 0.
    pub at_inf: T,
}

pub fn scaled_tail_limits<T: Real>(params: &TsParams<T>) -> Result<ScaledTailLimits<T>> {
    let alpha = params.alpha();
    if params.measure().is_zero() {
        return Ok(ScaledTailLimits {
            at_zero: T::zero(),
            at_inf: T::zero(),
        });
    }
    let at_zero = if alpha > T::zero() {
        match params.measure().norm_moment(alpha) {
            Some(m) => m / alpha,
            None => T::infinity(),
        }
    } else {
        T::infinity()
    };
    Ok(ScaledTailLimits {
        at_zero,
        at_inf: T::zero(),
    })
}

/// Two-point estimate of `lim_{s->0} s^alpha M(|x|>s)` from evaluations at
/// `s1 > s2`, extrapolating the leading `s^{min(alpha, p)}` correction.
pub fn scaled_tail_extrapolated<T: Real>(params: &TsParams<T>, s1: T, s2: T) -> Result<T> {
    if !(s1 > s2 && s2 > T::zero()) {
        return Err(TsError::Domain(format!(
            "need s1 > s2 > 0, got ({s1}, {s2})"
        )));
    }
    let alpha = params.alpha();
    let v1 = s1.powf(alpha) * tail(params, s1, None)?;
    let v2 = s2.powf(alpha) * tail(params, s2, None)?;
    let e = if alpha > T::zero() {
        alpha.min(params.p())
    } else {
        params.p()
    };
    Ok(v2 + (v2 - v1) / ((s1 / s2).powf(e) - T::one()))
}

/// Selfdecomposability verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfDecomposable {
    /// Guaranteed: `q(r^p, u) r^{-alpha}` decreases, which always holds for
    /// `alpha in [0, 2)`.
    Holds,
    /// Not analyzed for `alpha < 0`.
    Unknown,
}

pub fn is_selfdecomposable<T: Real>(params: &TsParams<T>) -> SelfDecomposable {
    if params.alpha() >= T::zero() {
        SelfDecomposable::Holds
    } else {
        SelfDecomposable::Unknown
    }
}

/// Reusable tail evaluator bound to a parameter set, cone and tolerance.
#[derive(Debug, Clone)]
pub struct TailFunction<'p, T: Real> {
    params: &'p TsParams<T>,
    cone: Option<Vec<usize>>,
    pub tol: QuadTol<T>,
}

impl<'p, T: Real> TailFunction<'p, T> {
    pub fn new(params: &'p TsParams<T>, cone: Cone<'_>) -> Result<Self> {
        if let Some(idx) = cone {
            let n = params.measure().rays().len();
            for &i in idx {
                if i >= n {
                    return Err(TsError::UnknownDirection(format!(
                        "ray index {i} out of range ({n} rays)"
                    )));
                }
            }
        }
        Ok(TailFunction {
            params,
            cone: cone.map(|c| c.to_vec()),
            tol: QuadTol::default(),
        })
    }

    pub fn eval(&self, r: T) -> Result<T> {
        tail(self.params, r, self.cone.as_deref())
    }

    pub fn eval_many(&self, rs: &[T]) -> Result<Vec<T>> {
        rs.iter().map(|&r| self.eval(r)).collect()
    }
}
