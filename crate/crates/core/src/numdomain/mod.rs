//! Exact arithmetic substrate.
//!
//! Two value domains share one interface:
//!
//! - [`Nat`]: arbitrary-precision non-negative integers, the standard domain.
//! - [`JElem`]: pairs `<k, w>` of a big integer and a non-negative rational,
//!   the non-standard domain. Pairs with `w = 0` embed the standard numbers;
//!   pairs with `w > 0` behave like naturals under `+`, parity, and halving
//!   but are unreachable from 0 by repeated `+1`.
//!
//! [`DomainElement`] is the tagged union the trajectory executors run on.
//! All values are immutable; all operations are pure.

mod element;
mod jaskowski;

pub use element::{compare, DomainElement};
pub use jaskowski::{jadd, jdiv2, JElem, Rat};

use crate::error::DomainError;
use num_traits::{One, Zero};

/// Arbitrary-precision non-negative integer.
///
/// Decimal round-trip (`parse(render(n)) = n`) comes with the carrier type
/// and is re-checked by property tests.
pub type Nat = num_bigint::BigUint;

/// Largest exponent of 2 in the prime factorization of `x`.
///
/// `x / 2^expo(x)` is odd. Undefined on 0: the defining loop
/// `while even(y) do y := y/2` never terminates there, so 0 is a hard error
/// rather than a default.
pub fn expo(x: &Nat) -> Result<u64, DomainError> {
    if x.is_zero() {
        return Err(DomainError::ExpoOfZero);
    }
    Ok(x.trailing_zeros()
        .expect("nonzero value has a lowest set bit"))
}

/// `2^x` computed by repeated addition (`P2(x+1) = P2(x) + P2(x)`).
///
/// The doubling recurrence is the operation's definition, not an
/// implementation shortcut; the bit-shift equivalent serves as its test
/// oracle.
pub fn p2(x: u64) -> Nat {
    let mut acc = Nat::one();
    for _ in 0..x {
        acc = &acc + &acc;
    }
    acc
}

/// `y * 3^x` computed by repeated addition (`P3(y, x+1) = P3(y,x) + P3(y,x) + P3(y,x)`).
pub fn p3(y: &Nat, x: u64) -> Nat {
    let mut acc = y.clone();
    for _ in 0..x {
        acc = &acc + &acc + &acc;
    }
    acc
}

/// `2^x` as a single shift. Internal fast path for certificate arithmetic;
/// agreement with [`p2`] is property-tested.
pub(crate) fn pow2(x: u64) -> Nat {
    Nat::one() << usize::try_from(x).expect("exponent fits a shift amount")
}

/// `3^x` by square-and-multiply. Internal fast path; agreement with [`p3`]
/// on `y = 1` is property-tested.
pub(crate) fn pow3(x: u64) -> Nat {
    num_traits::pow::pow(
        Nat::from(3u8),
        usize::try_from(x).expect("exponent fits usize"),
    )
}
