mod common;

use num_bigint::BigUint;
use num_rational::BigRational;
use repzeta::gl2zeta::{
    dims_and_mults, dirichlet_partial, sum_squares_identity, sum_squares_symbolic,
    twist_blocks_podd, twist_zeta_gl2_podd, twist_zeta_gl2fq, DirichletPoly,
};
use repzeta::mat2::{group_order, DEFAULT_CAP};
use repzeta::{Flavor, GroupDesc, Ring, RingDesc};

const PRIME_POWERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn poly(terms: &[(u64, u64)]) -> DirichletPoly {
    let mut p = DirichletPoly::new();
    for &(d, m) in terms {
        p.add_term(BigUint::from(d), BigUint::from(m));
    }
    p
}

#[test]
fn dirichlet_addition_is_a_commutative_monoid() {
    let a = poly(&[(1, 1), (3, 2), (6, 5)]);
    let b = poly(&[(2, 4), (3, 1)]);
    let c = poly(&[(6, 1), (7, 7)]);
    assert_eq!(a.add(&b), b.add(&a));
    assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    assert_eq!(a.add(&DirichletPoly::new()), a);
    for s in [-2i64, -1, 0, 1, 2, 5] {
        assert_eq!(a.add(&b).eval_exact(s), a.eval_exact(s) + b.eval_exact(s));
    }
    for s in [0.5, 1.25, 2.75] {
        assert!((a.add(&b).eval(s) - a.eval(s) - b.eval(s)).abs() < 1e-12);
    }
    assert_eq!(a.total(), BigUint::from(8u32));
    assert_eq!(poly(&[(2, 0)]), DirichletPoly::new());
}

/// Twist classes of GL2(F_q) have q - 1 members, except two classes of (q - 1)/2 members when q is odd.
#[test]
fn level_one_counts_irreducibles() {
    for q in PRIME_POWERS {
        let z = twist_zeta_gl2fq(q).unwrap();
        let short = if q % 2 == 1 { 1u32 } else { 0 };
        assert_eq!(
            (z.total() - short) * BigUint::from(q - 1),
            BigUint::from(q * q - 1),
            "q={q}"
        );
    }
}

/// The number of irreducibles of GL2(F_q) equals its number of conjugacy classes.
#[test]
fn level_one_matches_class_count() {
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let r = Ring::equal_char(p, k, 1).unwrap();
        let q = r.q() as u64;
        let invertible = common::naive_classes(&r, false, false)
            .iter()
            .filter(|c| r.is_unit(common::naive_det(&r, c.iter().next().unwrap())))
            .count() as u64;
        assert_eq!(invertible, q * q - 1, "q={q}");
    }
}

#[test]
fn sum_of_squares_holds_numerically_and_symbolically() {
    for q in PRIME_POWERS {
        for r in 2..=6 {
            assert!(sum_squares_identity(q, r).unwrap(), "q={q} r={r}");
        }
    }
    for r in 2..=8 {
        assert!(sum_squares_symbolic(r));
    }
}

#[test]
fn level_group_orders_match_enumeration() {
    for (p, k, l) in [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 1, 2), (2, 2, 1)] {
        let r = Ring::equal_char(p, k, l).unwrap();
        let n = repzeta::mat2::enumerate_group(&r, Flavor::GL2, DEFAULT_CAP)
            .unwrap()
            .count();
        let desc = GroupDesc {
            ring: RingDesc::equal_char(p, k, l),
            flavor: Flavor::GL2,
        };
        assert_eq!(group_order(&desc), BigUint::from(n));
    }
}

#[test]
fn closed_form_matches_partial_sums() {
    for q in [3u64, 5, 7, 9] {
        let blocks = twist_blocks_podd(q, 8).unwrap();
        for s in [2.0, 2.5, 3.0] {
            for r_max in 1..=8 {
                let closed = twist_zeta_gl2_podd(q, s, Some(r_max)).unwrap();
                let partial = dirichlet_partial(&blocks, s, r_max);
                assert!(
                    (closed - partial).abs() <= 1e-12 * closed.abs(),
                    "q={q} s={s} r={r_max}"
                );
            }
        }
    }
}

#[test]
fn exact_evaluation_at_negative_integers() {
    for q in [3u64, 5, 7] {
        let blocks = twist_blocks_podd(q, 4).unwrap();
        let merged = blocks
            .iter()
            .fold(DirichletPoly::new(), |acc, (_, p)| acc.add(p));
        let direct: BigUint = merged.terms.iter().map(|(d, m)| d * m).sum();
        assert_eq!(
            merged.eval_exact(-1),
            BigRational::from_integer(direct.into())
        );
        let b2 = dims_and_mults(q, 2).unwrap();
        assert_eq!(b2.twist_mults.is_some(), q % 2 == 1);
    }
    assert!(dims_and_mults(4, 2).unwrap().twist_mults.is_none());
}
