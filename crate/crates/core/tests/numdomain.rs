//! Number-domain contracts: exponent extraction, the repeated-addition
//! powers, pair-domain arithmetic, and the shared element interface.

use std::cmp::Ordering;

use collatz_core::error::DomainError;
use collatz_core::{compare, expo, jadd, jdiv2, p2, p3, DomainElement, JElem, Nat};

fn nat(n: u64) -> Nat {
    Nat::from(n)
}

#[test]
fn expo_measures_the_exact_power_of_two() {
    assert_eq!(expo(&nat(40)).unwrap(), 3);
    assert_eq!(expo(&nat(13)).unwrap(), 0);
    assert_eq!(expo(&nat(16)).unwrap(), 4);
    assert_eq!(expo(&nat(1)).unwrap(), 0);
    assert_eq!(expo(&(nat(7) << 20usize)).unwrap(), 20);
}

#[test]
fn expo_rejects_zero() {
    assert!(matches!(expo(&nat(0)), Err(DomainError::ExpoOfZero)));
}

#[test]
fn repeated_addition_powers_match_frozen_values() {
    assert_eq!(p2(0), nat(1));
    assert_eq!(p2(10), nat(1024));
    assert_eq!(p3(&nat(13), 2), nat(117));
    assert_eq!(p3(&nat(1), 5), nat(243));
    assert_eq!(p3(&nat(0), 7), nat(0));
}

#[test]
fn pair_display_and_parse_round_trip() {
    for text in ["8+1/2", "19+5/1", "1+9/256", "-3+7/4", "0+1/1", "5+0/1"] {
        let elem: JElem = text.parse().unwrap();
        assert_eq!(elem.to_string(), text);
    }
    // denominator defaults to 1 on input but always prints
    let elem: JElem = "19+5".parse().unwrap();
    assert_eq!(elem.to_string(), "19+5/1");
}

#[test]
fn pair_parse_rejects_malformed_text() {
    for text in ["", "19", "19+", "+5/1", "19+5/0", "19+-5/1", "a+b/c"] {
        assert!(text.parse::<JElem>().is_err(), "accepted {text:?}");
    }
}

#[test]
fn pair_invariant_rejects_unreachable_negatives() {
    // w = 0 pins the element to the standard part, where k is a natural
    assert!(JElem::from_parts(-1, 0, 1).is_err());
    assert!(JElem::from_parts(-1, 1, 2).is_ok());
    assert!(JElem::from_parts(3, -1, 2).is_err());
}

#[test]
fn pair_parity_follows_the_integer_part() {
    assert!(JElem::from_parts(8, 1, 2).unwrap().is_even());
    assert!(!JElem::from_parts(19, 5, 1).unwrap().is_even());
    // the weight has no say in parity
    assert!(JElem::from_parts(0, 3, 8).unwrap().is_even());
}

#[test]
fn pair_addition_is_componentwise() {
    let a = JElem::from_parts(8, 1, 2).unwrap();
    let b = JElem::from_parts(3, 1, 4).unwrap();
    let sum = jadd(&a, &b).unwrap();
    assert_eq!(sum.to_string(), "11+3/4");
    assert_eq!(jadd(&b, &a).unwrap(), sum);
}

#[test]
fn pair_halving_requires_an_even_integer_part() {
    let even = JElem::from_parts(8, 1, 2).unwrap();
    assert_eq!(jdiv2(&even).unwrap().to_string(), "4+1/4");
    let odd = JElem::from_parts(19, 5, 1).unwrap();
    assert!(matches!(jdiv2(&odd), Err(DomainError::OddDiv2(_))));
}

#[test]
fn pair_order_is_weight_major() {
    let heavy = JElem::from_parts(1, 5, 1).unwrap();
    let light = JElem::from_parts(100, 1, 2).unwrap();
    assert!(light < heavy);
    let a = JElem::from_parts(2, 1, 2).unwrap();
    let b = JElem::from_parts(7, 1, 2).unwrap();
    assert!(a < b);
}

#[test]
fn reachability_is_zero_weight() {
    assert!(JElem::from_parts(19, 0, 1).unwrap().is_reachable());
    assert!(!JElem::from_parts(19, 5, 1).unwrap().is_reachable());
    assert!(DomainElement::from(nat(19)).is_reachable());
}

#[test]
fn element_interface_covers_both_domains() {
    let five = DomainElement::from(nat(5));
    assert!(!five.is_even());
    assert_eq!(five.times3plus1().unwrap(), DomainElement::from(nat(16)));
    assert_eq!(
        DomainElement::from(nat(16)).div2().unwrap(),
        DomainElement::from(nat(8))
    );
    assert!(DomainElement::from(nat(5)).div2().is_err());

    let pair = DomainElement::from(JElem::from_parts(1, 1, 16).unwrap());
    assert_eq!(pair.times3plus1().unwrap().to_string(), "4+3/16");
    assert!(!pair.is_one());
    assert!(DomainElement::from(JElem::one()).is_one());
}

#[test]
fn element_addition_stays_within_one_domain() {
    let n = DomainElement::from(nat(2));
    let j = DomainElement::from(JElem::from_parts(1, 1, 2).unwrap());
    assert_eq!(n.add(&n).unwrap(), DomainElement::from(nat(4)));
    assert!(matches!(n.add(&j), Err(DomainError::CrossDomain { .. })));
    assert!(matches!(
        compare(&n, &j),
        Err(DomainError::CrossDomain { .. })
    ));
}

#[test]
fn element_comparison_delegates_to_the_domain_order() {
    let a = DomainElement::from(nat(5));
    let b = DomainElement::from(nat(8));
    assert_eq!(compare(&a, &b).unwrap(), Ordering::Less);
    let low = DomainElement::from(JElem::from_parts(100, 1, 2).unwrap());
    let high = DomainElement::from(JElem::from_parts(1, 5, 1).unwrap());
    assert_eq!(compare(&low, &high).unwrap(), Ordering::Less);
}

#[test]
fn element_displays_in_domain_notation() {
    assert_eq!(DomainElement::from(nat(40)).to_string(), "40");
    assert_eq!(
        DomainElement::from(JElem::from_parts(8, 1, 2).unwrap()).to_string(),
        "8+1/2"
    );
}
