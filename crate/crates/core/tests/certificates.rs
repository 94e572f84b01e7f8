//! Certificate contracts: extraction, the JSON format, clause-by-clause
//! verification, the two closed forms of `y`, trivial triples, and start
//! recovery.

use collatz_core::{
    certify, double_sum_y, horner_y, recover_n, trivial_certificate, verify, verify_detailed,
    Certificate, CertificateViolation, CertifyError, Nat, RecoverError,
};
use rayon::prelude::*;

fn nat(n: u64) -> Nat {
    Nat::from(n)
}

fn cert(n: u64) -> Certificate {
    certify(&nat(n), 1_000_000).expect("range values close")
}

const GOLDEN_13: &str = r#"{"n":"13","x":2,"y":"11","z":7,"k":[0,3,4]}"#;

#[test]
fn certificate_of_13_serializes_byte_for_byte() {
    assert_eq!(cert(13).canonical_json(), GOLDEN_13);
}

#[test]
fn golden_json_parses_back_to_the_same_certificate() {
    let parsed: Certificate = serde_json::from_str(GOLDEN_13).unwrap();
    assert_eq!(parsed, cert(13));
    assert!(verify(&parsed));
}

#[test]
fn json_format_is_strict() {
    // unknown fields, missing fields, and bare-number bigints all fail
    assert!(serde_json::from_str::<Certificate>(
        r#"{"n":"13","x":2,"y":"11","z":7,"k":[0,3,4],"extra":1}"#
    )
    .is_err());
    assert!(serde_json::from_str::<Certificate>(r#"{"n":"13","x":2,"y":"11","z":7}"#).is_err());
    assert!(
        serde_json::from_str::<Certificate>(r#"{"n":13,"x":2,"y":"11","z":7,"k":[0,3,4]}"#)
            .is_err()
    );
    assert!(
        serde_json::from_str::<Certificate>(r#"{"n":"-13","x":2,"y":"11","z":7,"k":[0,3,4]}"#)
            .is_err()
    );
}

#[test]
fn closing_triples_match_the_frozen_vector() {
    let expect = [
        (16u64, (0u64, 0u64, 4u64)),
        (5, (1, 1, 4)),
        (10, (1, 2, 5)),
        (20, (1, 4, 6)),
        (3, (2, 5, 5)),
        (6, (2, 10, 6)),
        (13, (2, 11, 7)),
        (21, (1, 1, 6)),
        (85, (1, 1, 8)),
        (341, (1, 1, 10)),
        (26, (2, 22, 8)),
        (52, (2, 44, 9)),
        (53, (2, 35, 9)),
        (17, (3, 53, 9)),
        (34, (3, 106, 10)),
        (11, (4, 133, 10)),
        (80, (1, 16, 8)),
    ];
    for (n, (x, y, z)) in expect {
        let c = cert(n);
        assert_eq!((c.x, c.y.clone(), c.z), (x, nat(y), z), "n = {n}");
        assert!(verify(&c), "n = {n}");
    }
}

#[test]
fn certify_reports_fuel_exhaustion_with_the_partial_trace() {
    match certify(&nat(27), 10) {
        Err(CertifyError::FuelExhausted { fuel, partial }) => {
            assert_eq!(fuel, 10);
            assert_eq!(partial.steps(), 10);
            assert!(!partial.halted());
        }
        other => panic!("expected fuel exhaustion, got {other:?}"),
    }
}

#[test]
fn verification_clauses_fire_in_order() {
    let base = cert(13);

    let zero = Certificate {
        n: nat(0),
        ..base.clone()
    };
    assert_eq!(verify_detailed(&zero), Err(CertificateViolation::ZeroN));

    let long = Certificate {
        x: 3,
        ..base.clone()
    };
    assert_eq!(
        verify_detailed(&long),
        Err(CertificateViolation::KLength {
            expected: 4,
            got: 3
        })
    );

    let stalled = Certificate {
        k_seq: vec![0, 0, 4],
        ..base.clone()
    };
    assert_eq!(
        verify_detailed(&stalled),
        Err(CertificateViolation::KPositivity { index: 1 })
    );

    let wrong_carry = Certificate {
        k_seq: vec![1, 3, 4],
        ..base.clone()
    };
    assert_eq!(
        verify_detailed(&wrong_carry),
        Err(CertificateViolation::K0NotExpo {
            expected: 0,
            got: 1
        })
    );

    let wrong_total = Certificate {
        z: 8,
        ..base.clone()
    };
    assert_eq!(
        verify_detailed(&wrong_total),
        Err(CertificateViolation::ZMismatch {
            expected: 7,
            got: 8
        })
    );

    let wrong_y = Certificate {
        y: nat(12),
        ..base.clone()
    };
    assert_eq!(
        verify_detailed(&wrong_y),
        Err(CertificateViolation::YDoubleSum {
            expected: nat(11),
            got: nat(12)
        })
    );

    // a well-formed burst sequence attached to the wrong start fails only
    // the closing equation
    let wrong_start = Certificate {
        n: nat(5),
        ..base.clone()
    };
    assert_eq!(
        verify_detailed(&wrong_start),
        Err(CertificateViolation::MainEquation)
    );

    assert_eq!(verify_detailed(&base), Ok(()));
}

#[test]
fn the_two_closed_forms_of_y_agree_on_real_certificates() {
    for n in 1u64..=2_000 {
        let c = cert(n);
        let by_sum = double_sum_y(&c.k_seq);
        let by_horner = horner_y(&c.k_seq);
        assert_eq!(by_sum, c.y, "n = {n}");
        assert_eq!(by_horner, c.y, "n = {n}");
    }
}

#[test]
fn y_forms_on_handpicked_sequences() {
    // x = 0: no odd steps, no history
    assert_eq!(double_sum_y(&[4]), nat(0));
    assert_eq!(horner_y(&[4]), nat(0));
    // x = 1: single term 3^0 * 2^{k_0}
    assert_eq!(double_sum_y(&[4, 4]), nat(16));
    assert_eq!(horner_y(&[4, 4]), nat(16));
    // 13: 3^1*2^0 + 3^0*2^3 = 11, final burst never contributes
    assert_eq!(double_sum_y(&[0, 3, 4]), nat(11));
    assert_eq!(double_sum_y(&[0, 3, 9]), nat(11));
}

#[test]
fn trivial_triples_match_frozen_values_and_satisfy_the_equation() {
    for (n, (x, y, z)) in [(13u64, (0u64, 3u64, 4u64)), (16, (0, 0, 4)), (1, (0, 0, 0))] {
        let t = trivial_certificate(&nat(n));
        assert_eq!((t.x, t.y.clone(), t.z), (x, nat(y), z), "n = {n}");
        // the equation holds with no trajectory behind it
        assert_eq!(nat(n) + &t.y, Nat::from(1u8) << t.z as usize, "n = {n}");
    }
}

#[test]
fn recovery_inverts_the_closing_triple() {
    assert_eq!(recover_n(2, &nat(11), 7).unwrap(), nat(13));
    assert_eq!(recover_n(1, &nat(1), 4).unwrap(), nat(5));
    assert_eq!(recover_n(0, &nat(0), 0).unwrap(), nat(1));
    assert!(matches!(
        recover_n(0, &nat(5), 2),
        Err(RecoverError::Underflow { .. })
    ));
    // equality recovers 0, which is out of domain
    assert!(matches!(
        recover_n(0, &nat(4), 2),
        Err(RecoverError::Underflow { .. })
    ));
    assert!(matches!(
        recover_n(1, &nat(0), 2),
        Err(RecoverError::NotDivisible { .. })
    ));
}

#[test]
fn every_certificate_in_range_recovers_its_start() {
    (1u64..=2_000).into_par_iter().for_each(|n| {
        let c = cert(n);
        assert_eq!(recover_n(c.x, &c.y, c.z).unwrap(), nat(n), "n = {n}");
    });
}

#[test]
fn start_parity_shows_through_y_whenever_an_odd_step_happened() {
    (1u64..=100_000).into_par_iter().for_each(|n| {
        let c = cert(n);
        if c.x >= 1 {
            assert_eq!(
                c.n.bit(0),
                c.y.bit(0),
                "parity of n and y diverged at n = {n}"
            );
        }
    });
}
