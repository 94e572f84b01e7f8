use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{DomainError, ParseError};

/// Exact rational carrier for the `w` component.
///
/// Stored in lowest terms with a positive denominator; equality is value
/// equality. Canonical forms matter because cycle detection compares states
/// structurally.
pub type Rat = num_rational::BigRational;

/// Non-standard domain element `<k, w>`: an integer plus a non-negative
/// rational "height".
///
/// Invariants, enforced by every constructor:
///
/// - `w >= 0`
/// - `w = 0` implies `k >= 0` (such pairs embed the standard numbers)
///
/// A pair is *even* iff `k` is even; `w` plays no part in parity. A pair is
/// *reachable* (obtainable from `<0,0>` by finitely many `+1`) iff `w = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JElem {
    k: BigInt,
    w: Rat,
}

impl JElem {
    /// Builds a pair, rejecting the two malformed shapes: negative `w`, and
    /// `w = 0` with negative `k`.
    pub fn new(k: BigInt, w: Rat) -> Result<Self, DomainError> {
        if w.is_negative() {
            return Err(DomainError::NegativeW(w.to_string()));
        }
        if w.is_zero() && k.is_negative() {
            return Err(DomainError::NegativeStandard {
                k: k.to_string(),
                w: w.to_string(),
            });
        }
        Ok(JElem { k, w })
    }

    /// Convenience constructor from machine integers; `w = w_num / w_den`.
    pub fn from_parts(k: i64, w_num: i64, w_den: u64) -> Result<Self, DomainError> {
        let den = BigInt::from(w_den);
        if den.is_zero() {
            return Err(DomainError::NegativeW("with zero denominator".into()));
        }
        Self::new(BigInt::from(k), Rat::new(BigInt::from(w_num), den))
    }

    /// The constant `<0, 0>`.
    pub fn zero() -> Self {
        JElem {
            k: BigInt::zero(),
            w: Rat::zero(),
        }
    }

    /// The constant `<1, 0>`.
    pub fn one() -> Self {
        JElem {
            k: BigInt::one(),
            w: Rat::zero(),
        }
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn w(&self) -> &Rat {
        &self.w
    }

    /// Parity of a pair is the parity of `k`.
    pub fn is_even(&self) -> bool {
        self.k.is_even()
    }

    /// Reachable elements are exactly those with `w = 0`.
    pub fn is_reachable(&self) -> bool {
        self.w.is_zero()
    }
}

/// Componentwise addition `<a.k + b.k, a.w + b.w>`.
///
/// The structure invariant is re-checked on the result; two valid operands
/// cannot in fact produce a violation (non-negative `w` components sum to a
/// non-negative `w`, and `w = 0` forces both operands standard), but the
/// check mirrors the defensive `raise Error` of the reference class.
pub fn jadd(a: &JElem, b: &JElem) -> Result<JElem, DomainError> {
    JElem::new(&a.k + &b.k, &a.w + &b.w)
}

/// Halving: `<k, w> / 2 = <k/2, w/2>`, defined on even pairs only.
///
/// The trajectory algorithms only ever divide even values, so odd `k` is a
/// precondition violation rather than a rounding case.
pub fn jdiv2(a: &JElem) -> Result<JElem, DomainError> {
    if !a.is_even() {
        return Err(DomainError::OddDiv2(a.to_string()));
    }
    JElem::new(&a.k / 2, &a.w / Rat::from_integer(BigInt::from(2)))
}

/// Lexical order: compare `w` first (height), then `k` (position within the
/// height). Every reachable element (`w = 0`) is therefore below every
/// unreachable one.
impl Ord for JElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.w.cmp(&other.w).then_with(|| self.k.cmp(&other.k))
    }
}

impl PartialOrd for JElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Textual form `k+num/den`, e.g. `8+1/2`, `19+5/1`, `-10+1/2`.
impl fmt::Display for JElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}/{}", self.k, self.w.numer(), self.w.denom())
    }
}

impl FromStr for JElem {
    type Err = ParseError;

    /// Parses `k+num/den`; the denominator may be omitted (`19+5` means
    /// `w = 5`). The separator is the last `+` so a sign on `k` survives.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Pair { input: s.into() };
        let sep = s.rfind('+').ok_or_else(bad)?;
        if sep == 0 || sep + 1 == s.len() {
            return Err(bad());
        }
        let k = BigInt::from_str(&s[..sep]).map_err(|_| bad())?;
        let w_text = &s[sep + 1..];
        let (num_text, den_text) = match w_text.split_once('/') {
            Some(pair) => pair,
            None => (w_text, "1"),
        };
        let num = BigInt::from_str(num_text).map_err(|_| bad())?;
        let den = BigInt::from_str(den_text).map_err(|_| bad())?;
        if den.sign() != Sign::Plus {
            return Err(bad());
        }
        JElem::new(k, Rat::new(num, den)).map_err(|source| ParseError::PairDomain {
            input: s.into(),
            source,
        })
    }
}
