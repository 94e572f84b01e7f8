//! Cycle detection over exact trajectory values.
//!
//! Brent's algorithm, hand-rolled: the probe hare walks the trajectory one
//! primitive step at a time (so terminal values are noticed the moment they
//! are reached), the tortoise teleports to the hare at powers of two.
//! Every phase-1 step is metered against the fuel budget; the entry-point
//! replay of phase 2 revisits only already-explored ground and is not
//! charged.
//!
//! Pair values `<k, w>` with `w > 0` never repeat exactly (each step
//! multiplies `w` by 3 or divides it by 2, and `3^a = 2^b` has no positive
//! solution), so the report also carries the cycle of the integer
//! projection `k`, which evolves by the primitive step rule on signed
//! integers and does cycle.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{cl_step, RunOutcome};
use crate::numdomain::DomainElement;

enum Probe {
    Halted { steps: u64 },
    FuelOut,
    Cycle { entry: u64, period: u64 },
}

fn brent<T, F, G>(start: &T, mut succ: F, is_terminal: G, fuel: u64) -> Probe
where
    T: Clone + PartialEq,
    F: FnMut(&T) -> T,
    G: Fn(&T) -> bool,
{
    if is_terminal(start) {
        return Probe::Halted { steps: 0 };
    }
    let mut spent = 0u64;
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start.clone();
    if spent == fuel {
        return Probe::FuelOut;
    }
    let mut hare = succ(&tortoise);
    spent += 1;
    if is_terminal(&hare) {
        return Probe::Halted { steps: spent };
    }
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power = power.saturating_mul(2);
            lam = 0;
        }
        if spent == fuel {
            return Probe::FuelOut;
        }
        hare = succ(&hare);
        spent += 1;
        if is_terminal(&hare) {
            return Probe::Halted { steps: spent };
        }
        lam += 1;
    }
    // period found; locate the entry with two pointers `lam` apart
    let mut ahead = start.clone();
    for _ in 0..lam {
        ahead = succ(&ahead);
    }
    let mut behind = start.clone();
    let mut entry = 0u64;
    while behind != ahead {
        behind = succ(&behind);
        ahead = succ(&ahead);
        entry += 1;
    }
    Probe::Cycle { entry, period: lam }
}

/// Cycle of the integer projection of a pair-domain walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KProjectionCycle {
    /// Steps before the projected walk enters its cycle.
    pub entry: u64,
    /// Cycle length.
    pub period: u64,
    /// The cycle itself, starting at index `entry`.
    pub values: Vec<BigInt>,
}

/// Outcome of a bounded cycle probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    /// `Halted`, `FuelExhausted`, or `CycleDetected` over exact values.
    pub outcome: RunOutcome,
    /// For pair-domain starts, the cycle of the `k` component; `None` for
    /// natural starts and for probes that ran out of fuel.
    pub k_projection: Option<KProjectionCycle>,
}

fn k_succ(k: &BigInt) -> BigInt {
    if k.is_even() {
        k / 2
    } else {
        k * 3 + 1
    }
}

/// Probes the trajectory of `start` for an exact-value cycle, stopping at
/// the terminal value or after `fuel` steps. For pair-domain starts the
/// integer projection is probed as well (with no terminal value: the
/// projection of `<1, w>` keeps walking).
pub fn detect_cycle(start: &DomainElement, fuel: u64) -> CycleReport {
    let outcome = match brent(start, |v| cl_step(v).1, DomainElement::is_one, fuel) {
        Probe::Halted { steps } => RunOutcome::Halted { steps },
        Probe::FuelOut => RunOutcome::FuelExhausted { fuel },
        Probe::Cycle { entry, period } => RunOutcome::CycleDetected { entry, period },
    };
    let k_projection = match start {
        DomainElement::Nat(_) => None,
        DomainElement::Jas(j) => match brent(j.k(), k_succ, |_| false, fuel) {
            Probe::Cycle { entry, period } => {
                let mut value = j.k().clone();
                for _ in 0..entry {
                    value = k_succ(&value);
                }
                let mut values = Vec::with_capacity(period as usize);
                for _ in 0..period {
                    values.push(value.clone());
                    value = k_succ(&value);
                }
                Some(KProjectionCycle {
                    entry,
                    period,
                    values,
                })
            }
            _ => None,
        },
    };
    CycleReport {
        outcome,
        k_projection,
    }
}
