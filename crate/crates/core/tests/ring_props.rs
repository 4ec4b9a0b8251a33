mod common;

use common::{NaiveField, NaiveRing};
use proptest::prelude::*;
use repzeta::ring::{field_make, is_prime};
use repzeta::{Error, Ring, RingKind};

const LIMIT: u64 = 1 << 10;
/// Prime fields above this size are swept on a stride rather than exhaustively.
const PRIME_FIELD_EXHAUSTIVE: u32 = 64;
const TRIPLE_BUDGET: u64 = 1 << 20;
/// Rows of the pair table checked against the slow oracle.
const ORACLE_ROWS: usize = 48;

fn is_large_prime_field(r: &Ring) -> bool {
    r.level() == 1 && r.field().k() == 1 && r.size() > PRIME_FIELD_EXHAUSTIVE
}

/// Stride for the first operand of pair sweeps.
fn pair_step(r: &Ring) -> usize {
    if is_large_prime_field(r) {
        (r.size() / 16).max(1) as usize
    } else {
        1
    }
}

/// Stride for the first two operands of triple sweeps, keeping them within budget.
fn triple_step(r: &Ring) -> usize {
    let n = r.size() as u64;
    let budget = if is_large_prime_field(r) {
        1 << 16
    } else {
        TRIPLE_BUDGET
    };
    if n * n * n <= budget {
        return 1;
    }
    let per_axis = ((budget / n) as f64).sqrt().max(1.0);
    (n as f64 / per_axis).ceil() as usize
}

fn small_rings() -> impl Iterator<Item = Ring> {
    descs().into_iter().map(|(p, k, level, zp)| {
        if zp {
            Ring::zp(p, level)
        } else {
            Ring::equal_char(p, k, level)
        }
        .unwrap()
    })
}

fn descs() -> Vec<(u32, u32, u32, bool)> {
    let mut out = Vec::new();
    for p in (2u32..LIMIT as u32).filter(|&p| is_prime(p as u64)) {
        for k in 1.. {
            let q = (p as u64).pow(k);
            if q > LIMIT {
                break;
            }
            for level in 1.. {
                if q.pow(level) > LIMIT {
                    break;
                }
                out.push((p, k, level, false));
                if k == 1 {
                    out.push((p, k, level, true));
                }
            }
        }
    }
    out
}

#[test]
fn fields_use_irreducible_moduli() {
    for (p, k) in [
        (2, 1),
        (2, 2),
        (2, 3),
        (2, 4),
        (3, 2),
        (5, 2),
        (7, 2),
        (3, 3),
    ] {
        let r = Ring::equal_char(p, k, 1).unwrap();
        let f = NaiveField::of(&r);
        assert_eq!(*f.modulus.last().unwrap(), 1);
        assert!(f.is_irreducible(), "GF({p}^{k})");
    }
    assert_eq!(field_make(2, 2).unwrap().desc().modulus, vec![1, 1, 1]);
    assert!(matches!(field_make(4, 1), Err(Error::NotPrime(4))));
    assert!(field_make(2, 0).is_err());
}

#[test]
fn arithmetic_matches_naive_oracle() {
    for r in small_rings() {
        let o = NaiveRing::of(&r);
        let step = pair_step(&r).max(r.size() as usize / ORACLE_ROWS);
        for a in r.elements().step_by(step) {
            for b in r.elements() {
                assert_eq!(r.add(a, b), o.add(a, b));
                assert_eq!(r.mul(a, b), o.mul(a, b), "{:?} {a} {b}", r.desc());
            }
        }
    }
}

#[test]
fn ring_axioms() {
    for r in small_rings() {
        for a in r.elements().step_by(pair_step(&r)) {
            for b in r.elements() {
                assert_eq!(r.add(a, b), r.add(b, a));
                assert_eq!(r.mul(a, b), r.mul(b, a));
            }
        }
        let step = triple_step(&r);
        for a in r.elements().step_by(step) {
            for b in r.elements().step_by(step) {
                let ab = r.mul(a, b);
                for c in r.elements() {
                    assert_eq!(r.mul(ab, c), r.mul(a, r.mul(b, c)));
                    assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
                    assert_eq!(r.mul(a, r.add(b, c)), r.add(ab, r.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn valuation_is_additive() {
    for r in small_rings().filter(|r| r.kind() == RingKind::EqualChar) {
        let o = NaiveRing::of(&r);
        let l = r.level();
        for a in r.elements() {
            assert_eq!(r.valuation(a), o.valuation(a));
            if a as usize % pair_step(&r) != 0 {
                continue;
            }
            for b in r.elements() {
                assert_eq!(
                    r.valuation(r.mul(a, b)),
                    l.min(r.valuation(a) + r.valuation(b))
                );
            }
        }
    }
}

#[test]
fn inverses() {
    for r in small_rings() {
        for a in r.elements() {
            if r.is_unit(a) {
                let ai = r.inv(a).unwrap();
                assert_eq!(r.mul(a, ai), r.one());
                assert_eq!(r.inv(ai).unwrap(), a);
            } else {
                assert_eq!(r.inv(a), Err(Error::NotAUnit));
            }
        }
    }
}

#[test]
fn inverse_examples() {
    let r = Ring::equal_char(2, 1, 3).unwrap();
    let one_plus_t = r.from_digits(&[1, 1]);
    assert_eq!(r.inv(one_plus_t).unwrap(), r.from_digits(&[1, 1, 1]));
    let z8 = Ring::zp(2, 3).unwrap();
    assert_eq!(z8.inv(3).unwrap(), 3);
    let r2 = Ring::equal_char(2, 1, 2).unwrap();
    assert_eq!(r2.inv(r2.uniformizer()), Err(Error::NotAUnit));
}

#[test]
fn char2_square_roots() {
    for k in 1..=4 {
        let f = field_make(2, k).unwrap();
        for a in 0..f.q() {
            let s = f.sqrt_char2(a).unwrap();
            assert_eq!(f.mul(s, s), a);
        }
    }
    assert!(field_make(3, 1).unwrap().sqrt_char2(1).is_err());
}

proptest! {
    #[test]
    fn larger_rings_agree_with_oracle(p_idx in 0usize..3, level in 1u32..=4, a in any::<u32>(), b in any::<u32>()) {
        let (p, k) = [(2, 3), (3, 2), (5, 1)][p_idx];
        let r = Ring::equal_char(p, k, level).unwrap();
        let o = NaiveRing::of(&r);
        let (a, b) = (a % r.size(), b % r.size());
        prop_assert_eq!(r.mul(a, b), o.mul(a, b));
        prop_assert_eq!(r.sub(r.add(a, b), b), a);
    }

    #[test]
    fn zp_matches_integers(p_idx in 0usize..4, level in 1u32..=5, a in any::<u32>(), b in any::<u32>()) {
        let p = [2u32, 3, 5, 7][p_idx];
        let r = Ring::zp(p, level).unwrap();
        let m = (p as u64).pow(level);
        let (a, b) = ((a as u64 % m) as u32, (b as u64 % m) as u32);
        prop_assert_eq!(r.mul(a, b) as u64, a as u64 * b as u64 % m);
        prop_assert_eq!(r.add(a, b) as u64, (a as u64 + b as u64) % m);
    }
}

#[test]
fn ring_json_round_trip() {
    use repzeta::RingDesc;
    for s in [
        r#"{"base":"Fq","p":2,"k":1,"level":3}"#,
        r#"{"base":"Zp","p":2,"level":3}"#,
    ] {
        let d = RingDesc::from_json(s).unwrap();
        assert_eq!(RingDesc::from_json(&d.to_json().to_string()).unwrap(), d);
    }
    assert!(RingDesc::from_json(r#"{"base":"Zp","p":2,"level":3,"e":2}"#).is_err());
    assert!(RingDesc::from_json(r#"{"base":"Qp","p":2,"level":3}"#).is_err());
    assert!(
        Ring::new(RingDesc::from_json(r#"{"base":"Fq","p":4,"k":1,"level":1}"#).unwrap()).is_err()
    );
}
