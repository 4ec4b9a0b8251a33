//! Centralizer orders in GL2 and SL2, the norm-one equation
//! x^2 + τxy + Δy^2 = 1, the groups U(τ), and the stabilizer of β + Z.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::{centralizer, enumerate_group, Flavor, Mat2};
use crate::orbits::{classify, w_delta, OrbitType};
use crate::ring::{Elem, Ring, RingDesc};

/// Brute cap on q^{2i} for the norm-one sweep.
pub const NORM_CAP: u64 = 1 << 22;

fn require_char2(r: &Ring) -> Result<()> {
    if r.is_char2() {
        Ok(())
    } else {
        Err(Error::Unsupported("needs F_q[t]/(t^i) with q even".into()))
    }
}

fn regular_type(r: &Ring, beta: &Mat2) -> Result<OrbitType> {
    match classify(r, beta).otype {
        OrbitType::NonRegular => Err(Error::NotRegular),
        t => Ok(t),
    }
}

/// |C_GL(β)| at the ring's level k.
pub fn centralizer_order(r: &Ring, beta: &Mat2) -> Result<BigUint> {
    let q = BigUint::from(r.q());
    let tail = q.pow(2 * (r.level() - 1));
    let qm = &q - 1u32;
    Ok(match regular_type(r, beta)? {
        OrbitType::One => &qm * &qm * tail,
        OrbitType::Two => (&q * &q - 1u32) * tail,
        _ => q * qm * tail,
    })
}

pub fn centralizer_order_brute(r: &Ring, beta: &Mat2, cap: u128) -> Result<u64> {
    Ok(centralizer(r, Flavor::GL2, beta, cap)?.len() as u64)
}

fn check_norm_cap(r: &Ring) -> Result<()> {
    let size = (r.size() as u64).pow(2);
    if size > NORM_CAP {
        Err(Error::TooLarge {
            size: size as u128,
            cap: NORM_CAP as u128,
        })
    } else {
        Ok(())
    }
}

/// Solutions of x^2 + τxy + Δy^2 = 1 over O_i by direct enumeration.
pub fn norm_one_brute(r: &Ring, tau: Elem, det: Elem) -> Result<u64> {
    check_norm_cap(r)?;
    let one = r.one();
    let mut n = 0;
    for y in r.elements() {
        let (ty, dyy) = (r.mul(tau, y), r.mul(det, r.mul(y, y)));
        for x in r.elements() {
            if r.add(r.mul(x, r.add(x, ty)), dyy) == one {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Solution counts of x^2 + τxy + Δy^2 = 1 for every Δ at once, indexed by Δ.
pub fn norm_one_counts_for_trace(r: &Ring, tau: Elem) -> Result<Vec<u64>> {
    check_norm_cap(r)?;
    let n = r.size() as usize;
    let one = r.one();
    let mut hist = vec![0u32; n * n];
    for y in r.elements() {
        let ty = r.mul(tau, y);
        let row = &mut hist[y as usize * n..(y as usize + 1) * n];
        for x in r.elements() {
            row[r.mul(x, r.add(x, ty)) as usize] += 1;
        }
    }
    let squares: Vec<Elem> = r.elements().map(|y| r.mul(y, y)).collect();
    Ok(r.elements()
        .map(|det| {
            (0..n)
                .map(|y| {
                    let need = r.sub(one, r.mul(det, squares[y]));
                    hist[y * n + need as usize] as u64
                })
                .sum()
        })
        .collect())
}

/// |SC(β)| for every companion class (τ, Δ) of a given set of traces, in parallel.
pub fn norm_one_table(r: &Ring, traces: &[Elem]) -> Result<Vec<(Elem, Vec<u64>)>> {
    traces
        .par_iter()
        .map(|&tau| Ok((tau, norm_one_counts_for_trace(r, tau)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormCount {
    pub w: u32,
    pub delta: u32,
    /// q^{i+δ}
    pub base: u64,
    pub admissible: Vec<u64>,
    pub count: Option<u64>,
    pub c: Option<u64>,
}

impl NormCount {
    pub fn consistent(&self) -> bool {
        self.c.is_some_and(|c| self.admissible.contains(&c))
    }
}

/// Predicted base q^{i+δ} and admissible factors for a type-3 pair.
pub fn norm_one_structural(r: &Ring, tau: Elem, det: Elem) -> Result<NormCount> {
    require_char2(r)?;
    if r.is_unit(tau) {
        return Err(Error::Unsupported(
            "trace must be a non-unit for type 3".into(),
        ));
    }
    let (w, delta) = w_delta(r, tau, det);
    let base = (r.q() as u64).pow(r.level() + delta);
    let admissible = if delta < w / 2 {
        vec![1, 2]
    } else {
        vec![1, 2, 3]
    };
    Ok(NormCount {
        w,
        delta,
        base,
        admissible,
        count: None,
        c: None,
    })
}

/// Brute count together with its structural prediction.
pub fn norm_one_count(r: &Ring, tau: Elem, det: Elem) -> Result<NormCount> {
    let mut s = norm_one_structural(r, tau, det)?;
    let count = norm_one_brute(r, tau, det)?;
    s.count = Some(count);
    s.c = (count % s.base == 0).then_some(count / s.base);
    Ok(s)
}

/// Normal form (w, u) of the norm-one equation: x^2 + t^w xy + u y^2 = 1 with u_0 = 1.
pub fn normalize_type3(r: &Ring, tau: Elem, det: Elem) -> Result<(u32, Elem)> {
    require_char2(r)?;
    if r.is_unit(tau) {
        return Err(Error::Unsupported(
            "trace must be a non-unit for type 3".into(),
        ));
    }
    let w = r.valuation(tau);
    let (tw, u) = if tau == 0 {
        (0, det)
    } else {
        let eta = tau / r.q().pow(w);
        let ei = r.inv(eta)?;
        (r.uniformizer_pow(w), r.mul(det, r.mul(ei, ei)))
    };
    let f = r.field();
    let lambda = r.constant(f.sqrt_char2(f.add(r.residue(u), 1))?);
    Ok((w, r.add(u, r.add(r.mul(lambda, lambda), r.mul(lambda, tw)))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralizerReport {
    pub level: u32,
    pub otype: OrbitType,
    pub delta: Option<u32>,
    pub order_formula: Option<BigUint>,
    pub order_brute: Option<u64>,
    pub c_factor: Option<u64>,
}

/// |SC(β)| = |C(β) ∩ SL2|, by formula where one is known and by brute force otherwise.
pub fn sc_order(r: &Ring, beta: &Mat2, brute: bool) -> Result<CentralizerReport> {
    let cls = classify(r, beta);
    let q = BigUint::from(r.q());
    let i = r.level();
    let formula = match cls.otype {
        OrbitType::NonRegular => return Err(Error::NotRegular),
        OrbitType::One => Some((&q - 1u32) * q.pow(i - 1)),
        OrbitType::Two => Some((&q + 1u32) * q.pow(i - 1)),
        OrbitType::Three if r.p() != 2 => Some(q.pow(i) * 2u32),
        OrbitType::Three => None,
    };
    let need_brute = brute || formula.is_none();
    let order_brute = if need_brute {
        Some(norm_one_brute(r, beta.trace(r), beta.det(r))?)
    } else {
        None
    };
    let c_factor = match (cls.otype, r.is_char2(), order_brute) {
        (OrbitType::Three, true, Some(n)) => {
            let base = (r.q() as u64).pow(i + cls.delta.unwrap());
            (n % base == 0).then_some(n / base)
        }
        _ => None,
    };
    Ok(CentralizerReport {
        level: i,
        otype: cls.otype,
        delta: cls.delta,
        order_formula: formula,
        order_brute,
        c_factor,
    })
}

/// The SL2-centralizer by a full group sweep.
pub fn sc_sweep(r: &Ring, beta: &Mat2, cap: u128) -> Result<Vec<Mat2>> {
    centralizer(r, Flavor::SL2, beta, cap)
}

/// |O^×| / |det C_GL(β)|, by a full centralizer sweep.
pub fn det_cokernel(r: &Ring, beta: &Mat2, cap: u128) -> Result<u64> {
    let dets: BTreeSet<Elem> = centralizer(r, Flavor::GL2, beta, cap)?
        .iter()
        .map(|g| g.det(r))
        .collect();
    Ok(r.unit_count() / dets.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UGroup {
    pub level: u32,
    pub tau: Elem,
    pub elements: Vec<Elem>,
    pub order: u64,
}

impl UGroup {
    pub fn matrices(&self, r: &Ring) -> Vec<Mat2> {
        self.elements
            .iter()
            .map(|&x| Mat2::new(r.one(), 0, x, r.one()))
            .collect()
    }
}

/// U(τ) = {x : x(x + τ) = 0}.
pub fn u_group(r: &Ring, tau: Elem) -> Result<UGroup> {
    require_char2(r)?;
    let elements: Vec<Elem> = r
        .elements()
        .filter(|&x| r.mul(x, r.add(x, tau)) == 0)
        .collect();
    Ok(UGroup {
        level: r.level(),
        tau,
        order: elements.len() as u64,
        elements,
    })
}

pub fn u_group_order_formula(r: &Ring, tau: Elem) -> u64 {
    if r.is_unit(tau) {
        return 2;
    }
    let (w, i, q) = (r.valuation(tau), r.level(), r.q() as u64);
    if w < i.div_ceil(2) {
        2 * q.pow(w)
    } else {
        q.pow(i / 2)
    }
}

/// Checks C_SL(β + Z) = U(τ) · SC(β) with U(τ) ∩ SC(β) trivial, for β = [[0,1],[Δ,τ]].
pub fn stab_decomposition_check(r: &Ring, beta: &Mat2, cap: u128) -> Result<bool> {
    require_char2(r)?;
    if beta.a != 0 || beta.b != r.one() {
        return Err(Error::Unsupported(
            "β must have the form [[0,1],[Δ,τ]]".into(),
        ));
    }
    regular_type(r, beta)?;
    let mut stab = BTreeSet::new();
    let mut sc = Vec::new();
    for g in enumerate_group(r, Flavor::SL2, cap)? {
        let gi = g.inverse(r)?;
        let moved = beta.conj(r, &g, &gi).sub(r, beta);
        if moved.is_scalar() {
            stab.insert(g);
            if moved.a == 0 {
                sc.push(g);
            }
        }
    }
    let u = u_group(r, beta.trace(r))?.matrices(r);
    let sc_set: BTreeSet<Mat2> = sc.iter().copied().collect();
    let id = Mat2::identity(r);
    let trivial = u.iter().all(|m| *m == id || !sc_set.contains(m));
    let product: BTreeSet<Mat2> = u
        .iter()
        .flat_map(|x| sc.iter().map(move |s| x.mul(r, s)))
        .collect();
    Ok(trivial && product == stab && product.len() == u.len() * sc.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub sc_low: u64,
    pub sc_high: u64,
    pub ratio: Ratio<u64>,
    pub delta_low: u32,
    pub delta_high: u32,
    pub bound_holds: bool,
    pub delta_step_ok: bool,
}

/// Compares |SC| of a type-3 β_l at the ring's level with its reduction one level down.
pub fn sc_ratio_check(r_high: &Ring, beta_high: &Mat2) -> Result<RatioReport> {
    require_char2(r_high)?;
    let l = r_high.level();
    if l < 2 {
        return Err(Error::InvalidParameter {
            field: "level",
            reason: "need level at least 2".into(),
        });
    }
    let desc = r_high.desc();
    let r_low = Ring::new(RingDesc {
        level: l - 1,
        ..desc.clone()
    })?;
    let beta_low = beta_high.reduce(r_high, l - 1);
    if classify(&r_low, &beta_low).otype != OrbitType::Three {
        return Err(Error::Unsupported("β must be of type 3".into()));
    }
    let (th, dh) = (beta_high.trace(r_high), beta_high.det(r_high));
    let (tl, dl) = (beta_low.trace(&r_low), beta_low.det(&r_low));
    let sc_high = norm_one_brute(r_high, th, dh)?;
    let sc_low = norm_one_brute(&r_low, tl, dl)?;
    let ratio = Ratio::new(sc_high, sc_low);
    let q = r_high.q() as u64;
    let bound_holds = Ratio::new(q, 3) <= ratio && ratio <= Ratio::from_integer(3 * q * q);
    let delta_low = w_delta(&r_low, tl, dl).1;
    let delta_high = w_delta(r_high, th, dh).1;
    let delta_step_ok = delta_high == delta_low || delta_high == delta_low + 1;
    Ok(RatioReport {
        sc_low,
        sc_high,
        ratio,
        delta_low,
        delta_high,
        bound_holds,
        delta_step_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::DEFAULT_CAP;

    #[test]
    fn centralizer_examples() {
        let r = Ring::equal_char(2, 1, 2).unwrap();
        let t2 = Mat2::companion(&r, 1, 1);
        assert_eq!(centralizer_order(&r, &t2).unwrap(), BigUint::from(12u32));
        let t3 = Mat2::companion(&r, 0, 0);
        assert_eq!(centralizer_order(&r, &t3).unwrap(), BigUint::from(8u32));
        let f3 = Ring::equal_char(3, 1, 1).unwrap();
        assert_eq!(
            centralizer_order(&f3, &Mat2::new(1, 0, 0, 0)).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(
            centralizer_order(&f3, &Mat2::scalar(1)),
            Err(Error::NotRegular)
        );
        for m in [t2, t3] {
            assert_eq!(
                BigUint::from(centralizer_order_brute(&r, &m, DEFAULT_CAP).unwrap()),
                centralizer_order(&r, &m).unwrap()
            );
        }
    }

    #[test]
    fn sc_examples() {
        let r = Ring::equal_char(3, 1, 2).unwrap();
        let rep = sc_order(&r, &Mat2::new(1, 0, 0, 0), true).unwrap();
        assert_eq!(rep.order_formula, Some(BigUint::from(6u32)));
        assert_eq!(rep.order_brute, Some(6));
        let rep = sc_order(&r, &Mat2::new(0, 1, 0, 0), true).unwrap();
        assert_eq!(rep.order_formula, Some(BigUint::from(18u32)));
        assert_eq!(rep.order_brute, Some(18));
        let f2 = Ring::equal_char(2, 1, 1).unwrap();
        let rep = sc_order(&f2, &Mat2::new(0, 1, 0, 0), false).unwrap();
        assert_eq!(
            (rep.order_brute, rep.delta, rep.c_factor),
            (Some(2), Some(0), Some(1))
        );
    }

    #[test]
    fn norm_examples() {
        let f2 = Ring::equal_char(2, 1, 1).unwrap();
        let n = norm_one_count(&f2, 0, 0).unwrap();
        assert_eq!((n.count, n.c), (Some(2), Some(1)));
        let r = Ring::equal_char(2, 1, 2).unwrap();
        let t = r.uniformizer();
        let n = norm_one_count(&r, t, t).unwrap();
        assert!(n.consistent(), "{n:?}");
        assert_eq!(
            norm_one_counts_for_trace(&r, t).unwrap()[t as usize],
            n.count.unwrap()
        );
    }

    #[test]
    fn normalization() {
        let r = Ring::equal_char(2, 1, 2).unwrap();
        let t = r.uniformizer();
        let (w, u) = normalize_type3(&r, t, r.add(1, t)).unwrap();
        assert_eq!(w, 1);
        assert_eq!(r.residue(u), 1);
        assert_eq!(
            norm_one_brute(&r, t, u).unwrap(),
            norm_one_brute(&r, t, r.add(1, t)).unwrap()
        );
        assert_eq!(normalize_type3(&r, 0, 1).unwrap(), (2, 1));
        let r4 = Ring::equal_char(2, 2, 3).unwrap();
        for tau in r4.elements().filter(|&x| !r4.is_unit(x)) {
            for det in r4.elements().step_by(5) {
                let (w, u) = normalize_type3(&r4, tau, det).unwrap();
                assert_eq!(r4.residue(u), 1);
                let tw = r4.uniformizer_pow(w);
                assert_eq!(
                    norm_one_brute(&r4, tw, u).unwrap(),
                    norm_one_brute(&r4, tau, det).unwrap()
                );
            }
        }
    }

    #[test]
    fn u_group_examples() {
        let r = Ring::equal_char(2, 1, 4).unwrap();
        assert_eq!(u_group(&r, r.uniformizer()).unwrap().order, 4);
        let r2 = Ring::equal_char(2, 1, 2).unwrap();
        assert_eq!(u_group(&r2, r2.uniformizer()).unwrap().order, 2);
        assert_eq!(u_group(&r2, 3).unwrap().elements, vec![0, 3]);
    }

    #[test]
    fn stab_decomposition_small() {
        let f2 = Ring::equal_char(2, 1, 1).unwrap();
        assert!(stab_decomposition_check(&f2, &Mat2::new(0, 1, 0, 0), DEFAULT_CAP).unwrap());
        assert!(stab_decomposition_check(&f2, &Mat2::new(0, 1, 1, 1), DEFAULT_CAP).unwrap());
    }

    #[test]
    fn ratio_small() {
        let r = Ring::equal_char(2, 1, 2).unwrap();
        for det in r.elements() {
            for tau in [0, r.uniformizer()] {
                let rep = sc_ratio_check(&r, &Mat2::companion(&r, tau, det)).unwrap();
                assert!(rep.bound_holds && rep.delta_step_ok, "{rep:?}");
            }
        }
    }
}
