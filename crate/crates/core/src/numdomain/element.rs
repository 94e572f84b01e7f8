use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::One;

use super::jaskowski::{jadd, jdiv2, JElem};
use super::Nat;
use crate::error::DomainError;

/// Tagged union over the two value domains.
///
/// The trajectory executors are written once against this interface; the
/// five operations below are the complete surface they use. Operations never
/// mix domains: adding or comparing a natural with a pair is a domain error,
/// not a coercion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainElement {
    Nat(Nat),
    Jas(JElem),
}

impl DomainElement {
    pub fn domain_name(&self) -> &'static str {
        match self {
            DomainElement::Nat(_) => "nat",
            DomainElement::Jas(_) => "jaskowski",
        }
    }

    /// Addition within one domain.
    pub fn add(&self, other: &Self) -> Result<Self, DomainError> {
        match (self, other) {
            (DomainElement::Nat(a), DomainElement::Nat(b)) => Ok(DomainElement::Nat(a + b)),
            (DomainElement::Jas(a), DomainElement::Jas(b)) => Ok(DomainElement::Jas(jadd(a, b)?)),
            _ => Err(self.cross(other)),
        }
    }

    pub fn is_even(&self) -> bool {
        match self {
            DomainElement::Nat(n) => n.is_even(),
            DomainElement::Jas(e) => e.is_even(),
        }
    }

    /// Halving, defined on even values only.
    pub fn div2(&self) -> Result<Self, DomainError> {
        match self {
            DomainElement::Nat(n) => {
                if n.is_odd() {
                    return Err(DomainError::OddDiv2(n.to_string()));
                }
                Ok(DomainElement::Nat(n >> 1))
            }
            DomainElement::Jas(e) => Ok(DomainElement::Jas(jdiv2(e)?)),
        }
    }

    /// `3x + 1` built from addition alone: `add(add(add(x, x), x), 1)`.
    ///
    /// The add-chain form (rather than a multiply) is the definition shared
    /// by both domains; in the pair domain there is no multiplication to
    /// shortcut through.
    pub fn times3plus1(&self) -> Result<Self, DomainError> {
        let one = match self {
            DomainElement::Nat(_) => DomainElement::Nat(Nat::one()),
            DomainElement::Jas(_) => DomainElement::Jas(JElem::one()),
        };
        self.add(self)?.add(self)?.add(&one)
    }

    /// Total order within one domain; see [`compare`].
    pub fn compare(&self, other: &Self) -> Result<Ordering, DomainError> {
        compare(self, other)
    }

    /// Naturals are all reachable; a pair is reachable iff `w = 0`.
    pub fn is_reachable(&self) -> bool {
        match self {
            DomainElement::Nat(_) => true,
            DomainElement::Jas(e) => e.is_reachable(),
        }
    }

    /// The loop-guard constant: `1` or `<1, 0>`.
    pub fn is_one(&self) -> bool {
        match self {
            DomainElement::Nat(n) => n.is_one(),
            DomainElement::Jas(e) => *e == JElem::one(),
        }
    }

    fn cross(&self, other: &Self) -> DomainError {
        DomainError::CrossDomain {
            left: self.domain_name(),
            right: other.domain_name(),
        }
    }
}

/// Order within one domain: usual order on naturals; on pairs, `w` first,
/// then `k` (so every reachable element sits below every unreachable one).
/// Cross-domain comparison is an error.
pub fn compare(a: &DomainElement, b: &DomainElement) -> Result<Ordering, DomainError> {
    match (a, b) {
        (DomainElement::Nat(x), DomainElement::Nat(y)) => Ok(x.cmp(y)),
        (DomainElement::Jas(x), DomainElement::Jas(y)) => Ok(x.cmp(y)),
        _ => Err(a.cross(b)),
    }
}

impl From<Nat> for DomainElement {
    fn from(n: Nat) -> Self {
        DomainElement::Nat(n)
    }
}

impl From<u64> for DomainElement {
    fn from(n: u64) -> Self {
        DomainElement::Nat(Nat::from(n))
    }
}

impl From<JElem> for DomainElement {
    fn from(e: JElem) -> Self {
        DomainElement::Jas(e)
    }
}

/// Naturals render as decimals, pairs as `k+num/den`.
impl fmt::Display for DomainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainElement::Nat(n) => write!(f, "{n}"),
            DomainElement::Jas(e) => write!(f, "{e}"),
        }
    }
}
