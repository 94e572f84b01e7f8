//! Halting certificates.
//!
//! A halted trajectory of `n` leaves behind a triple `(x, y, z)` and a
//! division-burst sequence `k_0..k_x` satisfying the closing equation
//!
//! ```text
//! n * 3^x + y = 2^z
//! ```
//!
//! where `x` counts the odd steps, `z = k_0 + ... + k_x` counts the
//! halvings, and `y` encodes the interleaving of the two. A certificate can
//! be checked without re-running the trajectory: recompute `y` from the
//! burst sequence and test the equation. `y` has two independent closed
//! forms, a double sum and a Horner nesting, and [`verify`] insists on
//! both; a bug in one form cannot silently ratify the other.
//!
//! The triple alone is weaker than the full certificate: for every `n >= 1`
//! there is a [`TrivialTriple`] `(0, 2^z - n, z)` satisfying the equation
//! without describing any trajectory. The burst sequence is what ties the
//! numbers to an actual run.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numdomain::{expo, pow2, pow3, Nat};
use crate::trajectories::{run_gr3, Trace};

/// Exact decimal-string (de)serialization for big naturals, so JSON
/// certificates survive arbitrary magnitudes byte-for-byte.
mod nat_string {
    use super::Nat;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<Nat>()
            .map_err(|e| de::Error::custom(format!("not a decimal natural: {e}")))
    }
}

/// A halting certificate: the closing triple plus the division-burst
/// sequence that reproduces it.
///
/// Serialized field order and names are part of the format: `n`, `x`, `y`,
/// `z`, `k`, with `n` and `y` as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    #[serde(with = "nat_string")]
    pub n: Nat,
    pub x: u64,
    #[serde(with = "nat_string")]
    pub y: Nat,
    pub z: u64,
    #[serde(rename = "k")]
    pub k_seq: Vec<u64>,
}

impl Certificate {
    /// The canonical single-line JSON form.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization is infallible")
    }
}

/// Why [`certify`] failed.
#[derive(Debug, Error)]
pub enum CertifyError {
    /// The run did not close within the step budget. The partial trace is
    /// kept so callers can inspect how far it got.
    #[error("step budget of {fuel} exhausted before the closing equation held")]
    FuelExhausted { fuel: u64, partial: Box<Trace> },
}

/// Runs the array-form trajectory of `n` and extracts the certificate from
/// its final odd-step record. Because the executor's loop guard is the
/// closing equation itself, a returned certificate is true by construction;
/// [`verify`] re-checks it from scratch anyway.
pub fn certify(n: &Nat, fuel: u64) -> Result<Certificate, CertifyError> {
    let trace = run_gr3(n, fuel);
    if !trace.halted() {
        return Err(CertifyError::FuelExhausted {
            fuel,
            partial: Box::new(trace),
        });
    }
    let last = trace
        .odd_steps
        .last()
        .expect("a halted run records at least the initial burst");
    Ok(Certificate {
        n: n.clone(),
        x: last.x,
        y: last.y.clone(),
        z: last.z,
        k_seq: trace.odd_steps.iter().map(|r| r.k).collect(),
    })
}

/// First verification clause a certificate fails, in check order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateViolation {
    #[error("n = 0 has no certificate: 0 never reaches the terminal value")]
    ZeroN,
    #[error("burst sequence has {got} entries, expected x + 1 = {expected}")]
    KLength { expected: u128, got: usize },
    #[error("burst k_{index} = 0; every burst after an odd step halves at least once")]
    KPositivity { index: usize },
    #[error("k_0 = {got} but n carries 2^{expected}")]
    K0NotExpo { expected: u64, got: u64 },
    #[error("z = {got} but the bursts sum to {expected}")]
    ZMismatch { expected: u128, got: u64 },
    #[error("y = {got} but the double sum over the bursts gives {expected}")]
    YDoubleSum { expected: Nat, got: Nat },
    #[error("y = {got} but the Horner nesting of the bursts gives {expected}")]
    YHorner { expected: Nat, got: Nat },
    #[error("n*3^x + y != 2^z")]
    MainEquation,
}

/// Checks every certificate clause and reports the first failure:
/// the burst sequence is well-formed (`x + 1` entries, `k_0` the exact
/// power of two carried by `n`, later entries positive), `z` is the burst
/// total, `y` matches both closed forms, and the closing equation holds.
pub fn verify_detailed(cert: &Certificate) -> Result<(), CertificateViolation> {
    if cert.n.is_zero() {
        return Err(CertificateViolation::ZeroN);
    }
    let expected_len = cert.x as u128 + 1;
    if cert.k_seq.len() as u128 != expected_len {
        return Err(CertificateViolation::KLength {
            expected: expected_len,
            got: cert.k_seq.len(),
        });
    }
    if let Some(index) = cert.k_seq[1..].iter().position(|&k| k == 0) {
        return Err(CertificateViolation::KPositivity { index: index + 1 });
    }
    let expected_k0 = expo(&cert.n).expect("n checked nonzero");
    if cert.k_seq[0] != expected_k0 {
        return Err(CertificateViolation::K0NotExpo {
            expected: expected_k0,
            got: cert.k_seq[0],
        });
    }
    let burst_total: u128 = cert.k_seq.iter().map(|&k| k as u128).sum();
    if cert.z as u128 != burst_total {
        return Err(CertificateViolation::ZMismatch {
            expected: burst_total,
            got: cert.z,
        });
    }
    let by_sum = double_sum_y(&cert.k_seq);
    if by_sum != cert.y {
        return Err(CertificateViolation::YDoubleSum {
            expected: by_sum,
            got: cert.y.clone(),
        });
    }
    let by_horner = horner_y(&cert.k_seq);
    if by_horner != cert.y {
        return Err(CertificateViolation::YHorner {
            expected: by_horner,
            got: cert.y.clone(),
        });
    }
    if &cert.n * pow3(cert.x) + &cert.y != pow2(cert.z) {
        return Err(CertificateViolation::MainEquation);
    }
    Ok(())
}

/// True iff the certificate passes every clause of [`verify_detailed`].
pub fn verify(cert: &Certificate) -> bool {
    verify_detailed(cert).is_ok()
}

/// `y` as the literal double sum over the burst sequence:
/// the `j`-th odd step contributes `3^(x-1-j) * 2^(k_0 + ... + k_j)`.
/// The final burst `k_x` enters `z` but never `y`.
///
/// `k_seq` must be non-empty (a run records at least its initial burst).
pub fn double_sum_y(k_seq: &[u64]) -> Nat {
    assert!(!k_seq.is_empty(), "burst sequence has at least one entry");
    let x = k_seq.len() - 1;
    let mut total = Nat::zero();
    let mut prefix: u64 = 0;
    for (j, &k) in k_seq.iter().enumerate().take(x) {
        prefix = prefix.checked_add(k).expect("burst total fits u64");
        total += pow3((x - 1 - j) as u64) << usize::try_from(prefix).expect("shift fits usize");
    }
    total
}

/// `y` as a Horner nesting, factoring each prefix power of two outward:
/// `2^{k_0} * (3^{x-1} + 2^{k_1} * (3^{x-2} + ... + 2^{k_{x-1}} * 3^0))`.
/// Evaluates inside-out with one shift and one addition per level, and
/// never revisits the prefix sums the double sum depends on.
pub fn horner_y(k_seq: &[u64]) -> Nat {
    assert!(!k_seq.is_empty(), "burst sequence has at least one entry");
    let x = k_seq.len() - 1;
    if x == 0 {
        return Nat::zero();
    }
    let mut acc = Nat::one();
    for j in (1..x).rev() {
        acc = pow3((x - j) as u64) + (acc << usize::try_from(k_seq[j]).expect("shift fits usize"));
    }
    acc << usize::try_from(k_seq[0]).expect("shift fits usize")
}

/// The equation-only triple `(0, 2^z - n, z)` with the smallest valid `z`.
///
/// It satisfies `n*3^0 + y = 2^z` for every `n >= 1` yet names no
/// trajectory, which is exactly why [`verify`] demands the burst sequence:
/// the closing equation alone certifies nothing about halting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialTriple {
    pub x: u64,
    pub y: Nat,
    pub z: u64,
}

/// Builds the trivial triple for `n >= 1`: `z` is the smallest exponent
/// with `2^z >= n`, and `y` the gap `2^z - n`.
pub fn trivial_certificate(n: &Nat) -> TrivialTriple {
    assert!(!n.is_zero(), "the trivial triple needs n >= 1");
    let bits = n.bits();
    let z = if n.count_ones() == 1 { bits - 1 } else { bits };
    let y = pow2(z) - n;
    TrivialTriple { x: 0, y, z }
}

/// Why [`recover_n`] failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecoverError {
    #[error("2^{z} does not exceed y = {y}; no positive start solves the equation")]
    Underflow { y: Nat, z: u64 },
    #[error("2^{z} - y is not divisible by 3^{x}")]
    NotDivisible { x: u64, z: u64 },
}

/// Inverts the closing equation: `n = (2^z - y) / 3^x`, exactly or not at
/// all. `2^z` must strictly exceed `y` (equality would recover 0, which
/// has no certificate).
pub fn recover_n(x: u64, y: &Nat, z: u64) -> Result<Nat, RecoverError> {
    let total = pow2(z);
    if total <= *y {
        return Err(RecoverError::Underflow { y: y.clone(), z });
    }
    let (q, r) = (total - y).div_rem(&pow3(x));
    if !r.is_zero() {
        return Err(RecoverError::NotDivisible { x, z });
    }
    Ok(q)
}
