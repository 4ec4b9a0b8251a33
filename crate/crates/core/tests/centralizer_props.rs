mod common;

use std::collections::BTreeSet;

use common::{all_matrices, naive_det};
use num_bigint::BigUint;
use repzeta::centralizers::{
    centralizer_order, centralizer_order_brute, norm_one_brute, norm_one_count,
    norm_one_counts_for_trace, normalize_type3, sc_order, sc_ratio_check, sc_sweep,
    stab_decomposition_check, u_group, u_group_order_formula,
};
use repzeta::mat2::DEFAULT_CAP;
use repzeta::orbits::classify;
use repzeta::{Error, Mat2, OrbitType, Ring};

fn regular(r: &Ring) -> impl Iterator<Item = Mat2> + '_ {
    all_matrices(r).filter(move |m| classify(r, m).otype != OrbitType::NonRegular)
}

/// The centralizer of a regular β is the unit group of O[β] = {a + bβ}.
#[test]
fn centralizer_is_unit_group_of_generated_algebra() {
    for r in [
        Ring::equal_char(2, 1, 1).unwrap(),
        Ring::equal_char(2, 1, 2).unwrap(),
        Ring::equal_char(3, 1, 1).unwrap(),
    ] {
        for beta in regular(&r).step_by(5) {
            let brute: BTreeSet<Mat2> =
                repzeta::mat2::centralizer(&r, repzeta::Flavor::GL2, &beta, DEFAULT_CAP)
                    .unwrap()
                    .into_iter()
                    .collect();
            let mut algebra = BTreeSet::new();
            for a in r.elements() {
                for b in r.elements() {
                    let m = Mat2::new(
                        r.add(a, r.mul(b, beta.a)),
                        r.mul(b, beta.b),
                        r.mul(b, beta.c),
                        r.add(a, r.mul(b, beta.d)),
                    );
                    if r.is_unit(naive_det(&r, &m)) {
                        algebra.insert(m);
                    }
                }
            }
            assert_eq!(brute, algebra, "{beta:?}");
        }
    }
}

#[test]
fn centralizer_orders_match_formula() {
    for (p, k, l) in [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1), (3, 1, 2)] {
        let r = Ring::equal_char(p, k, l).unwrap();
        for beta in regular(&r).step_by(13) {
            let brute = centralizer_order_brute(&r, &beta, DEFAULT_CAP).unwrap();
            assert_eq!(
                centralizer_order(&r, &beta).unwrap(),
                BigUint::from(brute),
                "{beta:?}"
            );
        }
    }
    let r = Ring::equal_char(2, 1, 2).unwrap();
    assert_eq!(
        centralizer_order(&r, &Mat2::identity(&r)),
        Err(Error::NotRegular)
    );
}

#[test]
fn centralizer_grows_by_q_squared_per_level() {
    let lo = Ring::equal_char(2, 1, 1).unwrap();
    for beta in regular(&lo) {
        let base = centralizer_order_brute(&lo, &beta, DEFAULT_CAP).unwrap();
        for l in 2..=3 {
            let r = Ring::equal_char(2, 1, l).unwrap();
            let lifted = Mat2::companion(&r, beta.trace(&lo), beta.det(&lo));
            let brute = centralizer_order_brute(&r, &lifted, DEFAULT_CAP).unwrap();
            assert_eq!(brute, base * 4u64.pow(l - 1), "{beta:?} level {l}");
        }
    }
}

#[test]
fn sl_centralizer_matches_norm_equation() {
    for (p, k, l) in [(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (2, 2, 1)] {
        let r = Ring::equal_char(p, k, l).unwrap();
        for tau in r.elements() {
            for det in r.units().into_iter().step_by(3) {
                let beta = Mat2::companion(&r, tau, det);
                let sweep = sc_sweep(&r, &beta, DEFAULT_CAP).unwrap().len() as u64;
                assert_eq!(norm_one_brute(&r, tau, det).unwrap(), sweep);
                let report = sc_order(&r, &beta, true).unwrap();
                assert_eq!(report.order_brute, Some(sweep));
                if let Some(f) = report.order_formula {
                    assert_eq!(f, BigUint::from(sweep), "{:?} {beta:?}", r.desc());
                }
            }
        }
    }
}

#[test]
fn histogram_counts_match_direct_counts() {
    for (p, k, l) in [(2, 1, 3), (2, 2, 2), (3, 1, 2)] {
        let r = Ring::equal_char(p, k, l).unwrap();
        for tau in r.elements().step_by(3) {
            let table = norm_one_counts_for_trace(&r, tau).unwrap();
            for det in r.elements().step_by(5) {
                assert_eq!(table[det as usize], norm_one_brute(&r, tau, det).unwrap());
            }
        }
    }
}

/// Replacing β by β + x does not change |SC(β)|.
#[test]
fn norm_count_is_twist_invariant() {
    let r = Ring::equal_char(2, 1, 3).unwrap();
    for beta in regular(&r).step_by(211) {
        let n = norm_one_brute(&r, beta.trace(&r), beta.det(&r)).unwrap();
        for x in r.elements() {
            let b = beta.add_scalar(&r, x);
            assert_eq!(norm_one_brute(&r, b.trace(&r), b.det(&r)).unwrap(), n);
        }
    }
}

#[test]
fn normal_form_preserves_counts() {
    for (k, l) in [(1, 3), (1, 4), (2, 2)] {
        let r = Ring::equal_char(2, k, l).unwrap();
        for tau in r.elements().filter(|&t| !r.is_unit(t)) {
            for det in r.units().into_iter().step_by(7) {
                let (w, u) = normalize_type3(&r, tau, det).unwrap();
                assert_eq!(r.residue(u), 1);
                let tw = if tau == 0 { 0 } else { r.uniformizer_pow(w) };
                assert_eq!(
                    norm_one_brute(&r, tw, u).unwrap(),
                    norm_one_brute(&r, tau, det).unwrap()
                );
                let c = norm_one_count(&r, tau, det).unwrap();
                assert!(c.consistent(), "{c:?}");
            }
        }
    }
}

#[test]
fn u_group_order() {
    for (k, l) in [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3)] {
        let r = Ring::equal_char(2, k, l).unwrap();
        for tau in r.elements() {
            let u = u_group(&r, tau).unwrap();
            assert_eq!(
                u.order,
                u_group_order_formula(&r, tau),
                "{:?} τ={tau}",
                r.desc()
            );
            let set: BTreeSet<u32> = u.elements.iter().copied().collect();
            assert!(u
                .elements
                .iter()
                .all(|&a| u.elements.iter().all(|&b| set.contains(&r.add(a, b)))));
        }
    }
    assert!(u_group(&Ring::equal_char(3, 1, 2).unwrap(), 0).is_err());
}

#[test]
fn stabilizer_decomposes() {
    for (k, l) in [(1, 1), (1, 2), (1, 3), (2, 1)] {
        let r = Ring::equal_char(2, k, l).unwrap();
        for tau in r.elements() {
            for det in r.units() {
                let beta = Mat2::companion(&r, tau, det);
                assert!(
                    stab_decomposition_check(&r, &beta, DEFAULT_CAP).unwrap(),
                    "{beta:?}"
                );
            }
        }
    }
}

#[test]
fn reduction_ratio() {
    for l in 2..=4 {
        let r = Ring::equal_char(2, 1, l).unwrap();
        for tau in r.elements().filter(|&t| !r.is_unit(t)) {
            for det in r.units() {
                let rep = sc_ratio_check(&r, &Mat2::companion(&r, tau, det)).unwrap();
                assert!(rep.bound_holds && rep.delta_step_ok, "{rep:?}");
            }
        }
    }
}
