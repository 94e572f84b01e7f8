//! The reverse walk: consuming a closing triple back to the origin.
//!
//! A halted run leaves `(x, y, z)` with `n*3^x + y = 2^z`. The reverse walk
//! peels one odd step per move: subtract the top power of three from `y`,
//! then strip the factors of two that the forward run pushed in, shrinking
//! `z` accordingly. A genuine triple walks down to exactly `(0, 0, 0)`; on
//! the way it re-emits the division bursts `k_x..k_1` (newest first) and,
//! through the equation, the odd values the forward run visited.
//!
//! All three coordinates are naturals. Every subtraction is guarded, and a
//! guard failure marks the state with `err` instead of wrapping: underflow
//! is the walk's way of saying the triple lies. One corner is special:
//! when `y` reaches 0 the remaining `z` is the final burst (the count of
//! factors of two in a value known only through the equation), so it is
//! consumed whole rather than measured off the (zero) value.
//!
//! The walk expects a triple whose recovered start is odd. Triples of even
//! starts fail a guard mid-walk; [`roundtrip_check`] first divides the
//! initial burst out of `y` and `z`, which reduces to the odd-part triple.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::certificates::{certify, recover_n, Certificate};
use crate::numdomain::{expo, pow3, DomainElement, Nat};
use crate::trajectories::run_gr1;

/// One state of the reverse walk, with the audit trail accumulated so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseState {
    pub x: u64,
    pub y: Nat,
    pub z: u64,
    /// Set when a guard failed; the triple is left as it was.
    pub err: bool,
    /// Division bursts re-emitted so far, newest first (`k_x` first).
    pub consumed_ks: Vec<u64>,
    /// Exact recoveries `(2^z - y) / 3^x` of each state visited so far,
    /// including the start; states that do not recover exactly add nothing.
    pub recovered_ms: Vec<Nat>,
}

impl ReverseState {
    /// Fresh walk state; records the start's own recovery if it is exact.
    pub fn new(x: u64, y: Nat, z: u64) -> Self {
        let mut state = ReverseState {
            x,
            y,
            z,
            err: false,
            consumed_ks: Vec::new(),
            recovered_ms: Vec::new(),
        };
        state.push_recovery();
        state
    }

    /// True at the origin `(0, 0, 0)`: the triple has been fully consumed.
    pub fn is_done(&self) -> bool {
        self.x == 0 && self.y.is_zero() && self.z == 0
    }

    /// Moves taken so far; one per re-emitted burst.
    pub fn steps(&self) -> u64 {
        self.consumed_ks.len() as u64
    }

    fn push_recovery(&mut self) {
        if let Ok(m) = recover_n(self.x, &self.y, self.z) {
            self.recovered_ms.push(m);
        }
    }

    fn fail(&self) -> ReverseState {
        let mut next = self.clone();
        next.err = true;
        next
    }
}

impl fmt::Display for ReverseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// One reverse move. Pure: the input state is not touched.
///
/// Guards, in order: an odd `y` must be large enough to survive the coming
/// subtraction (or the walk is already past its last odd step); `x` must
/// support a decrement; `y` must cover `3^(x-1)`; and outside the `y = 0`
/// corner the stripped burst must fit inside `z`. A failed guard returns
/// the state marked `err`. Stepping a done or errored state is the
/// identity; [`ic_run`] never does either, but callers driving the walk by
/// hand get an absorbing state rather than a panic.
pub fn ic_step(state: &ReverseState) -> ReverseState {
    if state.err || state.is_done() {
        return state.clone();
    }
    // the walk's own guard: an odd y too small for the coming subtraction
    if state.y.is_odd() && (state.x == 0 || state.y < pow3(state.x - 1)) {
        return state.fail();
    }
    // natural-subtraction guards: each decrement must be covered
    if state.x == 0 {
        return state.fail();
    }
    let x_next = state.x - 1;
    let top = pow3(x_next);
    if state.y < top {
        return state.fail();
    }
    let mut next = state.clone();
    next.x = x_next;
    next.y = &state.y - &top;
    if next.y.is_zero() {
        // the remaining z is the burst of the (unseen) final value
        next.consumed_ks.push(next.z);
        next.z = 0;
    } else {
        let k = expo(&next.y).expect("y checked nonzero");
        if k > next.z {
            return state.fail();
        }
        next.y >>= usize::try_from(k).expect("burst fits usize");
        next.z -= k;
        next.consumed_ks.push(k);
    }
    next.push_recovery();
    next
}

/// Walks the triple down from `(x, y, z)`, one fuel per move, and returns
/// every state visited in order. The walk stops at the origin, at the
/// first errored state (which is included, its triple unchanged), or when
/// the fuel runs out; the last state's `err`/[`ReverseState::is_done`]
/// flags say which.
pub fn ic_run(x: u64, y: &Nat, z: u64, fuel: u64) -> Vec<ReverseState> {
    let mut states = vec![ReverseState::new(x, y.clone(), z)];
    for _ in 0..fuel {
        let current = states.last().expect("walk starts non-empty");
        if current.err || current.is_done() {
            break;
        }
        let next = ic_step(current);
        states.push(next);
        if states.last().expect("just pushed").err {
            break;
        }
    }
    states
}

/// Rebuilds the odd-value chain `1 -> m_{x-1} -> ... -> m_0` implied by a
/// burst sequence, newest burst first (the order [`ic_run`] emits).
/// Each link must invert `3m + 1` exactly and land on an odd value;
/// otherwise the sequence describes no trajectory and the answer is `None`.
pub fn chain_from_ks(ks: &[u64]) -> Option<Vec<Nat>> {
    let mut m = Nat::one();
    let mut chain = vec![m.clone()];
    let three = Nat::from(3u8);
    for &k in ks.iter().rev() {
        let t = (&m << usize::try_from(k).ok()?) - 1u32;
        let (q, r) = t.div_rem(&three);
        if !r.is_zero() || q.is_even() {
            return None;
        }
        m = q;
        chain.push(m.clone());
    }
    Some(chain)
}

/// First check a round trip fails, in check order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RoundtripFailure {
    #[error("forward run did not close within the step budget")]
    Certify,
    #[error("reverse walk hit a guard")]
    GuardErr,
    #[error("reverse walk ran out of fuel before the origin")]
    WalkIncomplete,
    #[error("re-emitted bursts differ from the forward bursts")]
    ConsumedKs,
    #[error("odd-value chain does not match the forward odd values")]
    Chain,
    #[error("per-state recoveries do not match the forward odd values")]
    Recovery,
}

/// Result of one forward-then-reverse round trip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub n: Nat,
    pub failure: Option<RoundtripFailure>,
}

impl RoundtripReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Certifies `n`, walks the certificate back down, and cross-checks the
/// walk against the forward run three ways: the re-emitted bursts must be
/// the forward bursts `k_x..k_1` reversed, the chain rebuilt from those
/// bursts must be the forward odd values reversed, and each state's exact
/// recovery must be the forward odd value at that depth.
///
/// For even `n` the walk starts from the odd-part triple: the initial
/// burst `k_0` is divided out of `y` and subtracted from `z` first. The
/// forward odd values come from the odd-value-guard executor while the
/// certificate comes from the equation-guard executor, so the two sides of
/// the comparison do not share a loop guard.
pub fn roundtrip_check(n: &Nat, fuel: u64) -> RoundtripReport {
    let fail = |failure| RoundtripReport {
        n: n.clone(),
        failure: Some(failure),
    };
    let cert = match certify(n, fuel) {
        Ok(cert) => cert,
        Err(_) => return fail(RoundtripFailure::Certify),
    };
    let trace = run_gr1(&DomainElement::Nat(n.clone()), fuel);
    let forward_ms: Vec<Nat> = trace
        .odd_steps
        .iter()
        .map(|r| match &r.m {
            DomainElement::Nat(m) => m.clone(),
            DomainElement::Jas(_) => unreachable!("natural run stays natural"),
        })
        .collect();

    let k0 = cert.k_seq[0];
    let start_y = &cert.y >> usize::try_from(k0).expect("burst fits usize");
    let start_z = cert.z - k0;
    let states = ic_run(cert.x, &start_y, start_z, fuel);
    let last = states.last().expect("walk starts non-empty");

    if last.err {
        return fail(RoundtripFailure::GuardErr);
    }
    if !last.is_done() {
        return fail(RoundtripFailure::WalkIncomplete);
    }
    if last.consumed_ks != cert.k_seq[1..] {
        return fail(RoundtripFailure::ConsumedKs);
    }
    let reversed_ms: Vec<Nat> = forward_ms.iter().rev().cloned().collect();
    match chain_from_ks(&last.consumed_ks) {
        Some(chain) if chain == reversed_ms => {}
        _ => return fail(RoundtripFailure::Chain),
    }
    if last.recovered_ms != forward_ms {
        return fail(RoundtripFailure::Recovery);
    }
    RoundtripReport {
        n: n.clone(),
        failure: None,
    }
}

/// Certificate field selector for [`perturb`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbField {
    N,
    X,
    Y,
    Z,
    /// Burst entry by index; must be in range.
    K(usize),
}

/// Returns the certificate with one field bumped by one, everything else
/// untouched.
pub fn perturb(cert: &Certificate, field: PerturbField) -> Certificate {
    let mut out = cert.clone();
    match field {
        PerturbField::N => out.n += 1u32,
        PerturbField::X => out.x += 1,
        PerturbField::Y => out.y += 1u32,
        PerturbField::Z => out.z += 1,
        PerturbField::K(i) => out.k_seq[i] += 1,
    }
    out
}

/// Why the reverse side rejected a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RejectionReason {
    #[error("reverse walk hit a guard")]
    GuardErr,
    #[error("reverse walk did not reach the origin")]
    WalkIncomplete,
    #[error("re-emitted bursts differ from the certificate bursts")]
    KSeqMismatch,
    #[error("burst sequence rebuilds no odd-value chain")]
    ChainDivisibility,
    #[error("rebuilt start does not match the certified n")]
    ChainEndMismatch,
    #[error("some visited state has no exact recovery")]
    StateRecovery,
}

/// Runs the reverse-side acceptance pipeline on a certificate without
/// consulting any forward run: walk the raw triple down, compare the
/// re-emitted bursts to the certificate's, rebuild the odd-value chain,
/// scale its end back up by `k_0` and compare to `n`, and require every
/// visited state to recover exactly. `None` means the certificate passed
/// every stage.
///
/// The walk is raw (no initial-burst normalization): this is the pipeline
/// for triples that claim to describe odd starts, and a lying `k_0` must
/// be caught, not divided away.
pub fn reject_perturbed(cert: &Certificate, fuel: u64) -> Option<RejectionReason> {
    let states = ic_run(cert.x, &cert.y, cert.z, fuel);
    let last = states.last().expect("walk starts non-empty");
    if last.err {
        return Some(RejectionReason::GuardErr);
    }
    if !last.is_done() {
        return Some(RejectionReason::WalkIncomplete);
    }
    let expected = cert.k_seq.get(1..).unwrap_or(&[]);
    if last.consumed_ks != expected {
        return Some(RejectionReason::KSeqMismatch);
    }
    let chain = match chain_from_ks(&last.consumed_ks) {
        Some(chain) => chain,
        None => return Some(RejectionReason::ChainDivisibility),
    };
    let k0 = cert.k_seq.first().copied().unwrap_or(0);
    let rebuilt = chain.last().expect("chain starts at 1").clone()
        << usize::try_from(k0).expect("burst fits usize");
    if rebuilt != cert.n {
        return Some(RejectionReason::ChainEndMismatch);
    }
    if last.recovered_ms.len() as u64 != last.steps() + 1 {
        return Some(RejectionReason::StateRecovery);
    }
    None
}
