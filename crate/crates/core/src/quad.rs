//! Adaptive Gauss-Kronrod quadrature (21-point rule, QUADPACK constants),
//! generic over the scalar and over real/complex integrand values.
//!
//! This is the crate's default integrator; tests cross-check it against an
//! independent adaptive-Simpson oracle.

use num_complex::Complex;

use crate::scalar::Real;

/// Quadrature tolerances. Defaults: absolute 1e-12, relative 1e-10.
#[derive(Debug, Clone, Copy)]
pub struct QuadTol<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Default for QuadTol<T> {
    fn default() -> Self {
        QuadTol {
            abs: T::of(1e-12),
            rel: T::of(1e-10),
        }
    }
}

impl<T: Real> QuadTol<T> {
    pub fn new(abs: T, rel: T) -> Self {
        QuadTol { abs, rel }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T, V = T> {
    pub value: V,
    pub abs_err: T,
    pub converged: bool,
}

/// Integrand values the adaptive driver can accumulate: the scalar itself or
/// a complex pair.
pub trait QuadValue<T: Real>: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: T) -> Self;
    fn magnitude(self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: T) -> Self {
        self * s
    }
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: T) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    fn magnitude(self) -> T {
        self.norm()
    }
}

// 21-point Kronrod abscissae / Gauss and Kronrod weights.
const XGK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WG21: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
const WGK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// One 21-point Gauss-Kronrod panel; returns (kronrod value, error estimate).
fn gk21_panel<T, V, F>(f: &F, a: T, b: T) -> (V, T)
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let half = (b - a) * T::of(0.5);
    let center = (a + b) * T::of(0.5);

    let fc = f(center);
    let mut kron = fc.scale(T::of(WGK21[10]));
    let mut gauss = V::zero();

    for j in 0..10 {
        let dx = half * T::of(XGK21[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let fsum = f1.add(f2);
        kron = kron.add(fsum.scale(T::of(WGK21[j])));
        if j % 2 == 1 {
            gauss = gauss.add(fsum.scale(T::of(WG21[j / 2])));
        }
    }
    let err = kron.sub(gauss).magnitude() * half.abs();
    (kron.scale(half), err)
}

struct Segment<T, V> {
    a: T,
    b: T,
    value: V,
    err: T,
}

fn adaptive<T, V, F>(f: &F, a: T, b: T, tol: &QuadTol<T>, max_segments: usize) -> QuadResult<T, V>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let (v, e) = gk21_panel(f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        err: e,
    }];

    loop {
        let mut total = V::zero();
        let mut err_total = T::zero();
        for s in &segs {
            total = total.add(s.value);
            err_total = err_total + s.err;
        }
        let target = tol.abs.max(tol.rel * total.magnitude());
        if err_total <= target || segs.len() >= max_segments {
            return QuadResult {
                value: total,
                abs_err: err_total,
                converged: err_total <= target,
            };
        }
        // bisect the segment with the largest error
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            if s.err > segs[worst].err {
                worst = i;
            }
        }
        let Segment { a, b, .. } = segs.swap_remove(worst);
        let mid = (a + b) * T::of(0.5);
        if mid <= a || mid >= b {
            // interval exhausted at this precision; keep as-is
            let (v, _) = gk21_panel(f, a, b);
            segs.push(Segment {
                a,
                b,
                value: v,
                err: T::zero(),
            });
            continue;
        }
        let (v1, e1) = gk21_panel(f, a, mid);
        let (v2, e2) = gk21_panel(f, mid, b);
        segs.push(Segment {
            a,
            b: mid,
            value: v1,
            err: e1,
        });
        segs.push(Segment {
            a: mid,
            b,
            value: v2,
            err: e2,
        });
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: &QuadTol<T>) -> QuadResult<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    if a == b {
        return QuadResult {
            value: T::zero(),
            abs_err: T::zero(),
            converged: true,
        };
    }
    adaptive(&f, a, b, tol, 512)
}

/// Adaptive integral of a complex-valued `f` over `[a, b]`.
pub fn integrate_complex<T, F>(f: F, a: T, b: T, tol: &QuadTol<T>) -> QuadResult<T, Complex<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    if a == b {
        return QuadResult {
            value: Complex::new(T::zero(), T::zero()),
            abs_err: T::zero(),
            converged: true,
        };
    }
    adaptive(&f, a, b, tol, 1024)
}

/// Adaptive integral of `f` over `[a, inf)` via the map `t = a + u/(1-u)`.
///
/// The integrand must decay; evaluations that return exactly zero short-circuit
/// the (potentially enormous) Jacobian.
pub fn integrate_upper<T, F>(f: F, a: T, tol: &QuadTol<T>) -> QuadResult<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let g = |u: T| {
        let w = T::one() - u;
        let t = a + u / w;
        if !t.is_finite() {
            return T::zero();
        }
        let v = f(t);
        if v == T::zero() {
            return T::zero();
        }
        v / (w * w)
    };
    adaptive(&g, T::zero(), T::one(), tol, 512)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| 3.0 * x * x, 0.0, 2.0, &QuadTol::default());
        assert!((r.value - 8.0).abs() < 1e-12, "got {}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &QuadTol::new(1e-12, 1e-10));
        assert!((r.value - 2.0).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn semi_infinite_exponential() {
        // int_1^inf e^{-t} dt = e^{-1}
        let r = integrate_upper(|t: f64| (-t).exp(), 1.0, &QuadTol::default());
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn complex_oscillatory() {
        // int_0^pi e^{it} dt = 2i
        let r = integrate_complex(
            |t: f64| Complex::new(t.cos(), t.sin()),
            0.0,
            std::f64::consts::PI,
            &QuadTol::default(),
        );
        assert!((r.value.re).abs() < 1e-12);
        assert!((r.value.im - 2.0).abs() < 1e-12);
    }
}
