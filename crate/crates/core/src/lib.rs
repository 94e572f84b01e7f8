//! Exact-arithmetic toolkit for Collatz trajectory analysis.
//!
//! The crate implements a family of equivalent trajectory algorithms over
//! two number domains, plus the certificate machinery that witnesses
//! halting:
//!
//! - [`numdomain`]: arbitrary-precision naturals and the non-standard pair
//!   domain `<k, w>`, under one [`DomainElement`] interface.
//! - [`trajectories`]: fuel-bounded executors `run_cl` / `run_gr` /
//!   `run_gr1` / `run_gr2` / `run_gr3` producing full [`Trace`]s with
//!   per-odd-step instrumentation, invariant checking, and Brent cycle
//!   detection.
//! - [`certificates`]: halting certificates `(n, x, y, z, k)` satisfying
//!   `n*3^x + y = 2^z`, with emission, two-route verification, and
//!   inversion.
//! - [`reverse`]: the certificate-consuming reverse walk driving triples
//!   down to `(0, 0, 0)`, and round-trip validation against the forward runs.
//! - [`collatztree`]: the inverse-map tree, the strata partition by
//!   odd-step count, the hotel grid view, and DOT/JSON exporters.
//!
//! All arithmetic is exact; there is no floating-point anywhere. Possibly
//! infinite runs are made total by explicit fuel counted in primitive steps
//! (one halving or one `3n+1`).

pub mod certificates;
pub mod collatztree;
pub mod error;
pub mod numdomain;
pub mod reverse;
pub mod trajectories;

pub use certificates::{
    certify, double_sum_y, horner_y, recover_n, trivial_certificate, verify, verify_detailed,
    Certificate, CertificateViolation, CertifyError, RecoverError, TrivialTriple,
};
pub use collatztree::{
    build_tree, check_range_membership, check_strata_properties, check_tree_structure, children_of,
    hotel_coord, hotel_dot, hotel_json, stratum, tree_dot, tree_json, CollatzTree, EdgeColor,
    HotelCoord, HotelGraph, MembershipReport, StrataReport, StrataTable, TreeNode,
    TreeStructureReport,
};
pub use error::{DomainError, ParseError};
pub use numdomain::{compare, expo, jadd, jdiv2, p2, p3, DomainElement, JElem, Nat, Rat};
pub use reverse::{
    ic_run, ic_step, perturb, reject_perturbed, roundtrip_check, PerturbField, RejectionReason,
    ReverseState, RoundtripFailure, RoundtripReport,
};
pub use trajectories::{
    check_invariant, detect_cycle, domain_closure_check, extract_odd_structure, run_cl, run_gr,
    run_gr1, run_gr2, run_gr3, CycleReport, InvariantReport, KProjectionCycle, OddStepRecord,
    RunOutcome, StepOp, Trace,
};
