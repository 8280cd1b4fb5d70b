//! Scalar abstraction: everything in this crate is generic over a floating
//! point type implementing [`Real`]. Concrete aliases for the common types
//! live at the crate root.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64` (or anything with the same surface).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for converting an `f64` constant into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Dot product of two equal-length slices.
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Log-spaced grid of `n >= 2` points from `lo` to `hi` (inclusive).
pub fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    assert!(n >= 2 && lo > T::zero() && hi > lo, "bad log grid spec");
    let (a, b) = (lo.ln(), hi.ln());
    let h = (b - a) / T::of((n - 1) as f64);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + h * T::of(i as f64)).exp()
            }
        })
        .collect()
}

/// Linearly spaced grid of `n >= 2` points from `lo` to `hi` (inclusive).
pub fn lin_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    assert!(n >= 2 && hi > lo, "bad linear grid spec");
    let h = (hi - lo) / T::of((n - 1) as f64);
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + h * T::of(i as f64) })
        .collect()
}
