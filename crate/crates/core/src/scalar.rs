//! The integer scalar abstraction shared by every exact computation.
//!
//! All algebra in this crate is written once over [`IntScalar`]. The
//! arbitrary-precision instance ([`num_bigint::BigInt`]) is the default used by
//! the aliases at the crate root; machine integers are available for
//! enumeration-heavy work where entries provably stay small.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed Euclidean integer type.
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every IntScalar")
    }

    fn count(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize fits IntScalar")
    }

    /// `self^e` by repeated squaring.
    fn pow_u32(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T> IntScalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Non-negative gcd.
pub fn gcd<T: IntScalar>(a: &T, b: &T) -> T {
    a.gcd(b)
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd<T: IntScalar>(a: &T, b: &T) -> (T, T, T) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
