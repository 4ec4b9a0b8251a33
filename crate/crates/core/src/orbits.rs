//! Orbit types of regular 2x2 matrices, the (w, δ) invariants, and class and
//! twist-orbit counts by closed form and by exhaustive enumeration.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{conj_orbit_bfs, generators, Flavor, Mat2, Partition};
use crate::ring::{Ring, RingKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbitType {
    One,
    Two,
    Three,
    NonRegular,
}

impl OrbitType {
    pub fn label(&self) -> &'static str {
        match self {
            OrbitType::One => "1",
            OrbitType::Two => "2",
            OrbitType::Three => "3",
            OrbitType::NonRegular => "non-regular",
        }
    }
}

/// Type of a matrix, with trace valuation w = 2M + ε and odd depth δ for type 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitClass {
    pub otype: OrbitType,
    pub w: Option<u32>,
    pub delta: Option<u32>,
    pub m: Option<u32>,
    pub epsilon: Option<u32>,
}

/// w and δ of the pair (trace, determinant), read from uniformizer digits.
pub fn w_delta(r: &Ring, tr: u32, det: u32) -> (u32, u32) {
    let w = r.valuation(tr);
    let m = w / 2;
    let delta = (0..m).find(|&k| r.digit(det, 2 * k + 1) != 0).unwrap_or(m);
    (w, delta)
}

pub fn classify(r: &Ring, beta: &Mat2) -> OrbitClass {
    let none = OrbitClass {
        otype: OrbitType::NonRegular,
        w: None,
        delta: None,
        m: None,
        epsilon: None,
    };
    if beta.is_scalar_mod_p(r) {
        return none;
    }
    let f = r.field();
    let (tr, det) = (beta.trace(r), beta.det(r));
    let roots = f.quadratic_roots(f.neg(r.residue(tr)), r.residue(det));
    let otype = match roots {
        2 => OrbitType::One,
        0 => OrbitType::Two,
        _ => OrbitType::Three,
    };
    if otype != OrbitType::Three {
        return OrbitClass { otype, ..none };
    }
    let (w, delta) = w_delta(r, tr, det);
    OrbitClass {
        otype,
        w: Some(w),
        delta: Some(delta),
        m: Some(w / 2),
        epsilon: Some(w % 2),
    }
}

/// Per-type counts (types 1, 2, 3).
pub type TypeCounts = [BigUint; 3];

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Number of conjugacy classes of each regular type in M2(O_l).
pub fn class_counts_closed(q: u64, l: u32) -> TypeCounts {
    let half = big((q - 1) * q.pow(2 * l - 1) / 2);
    [half.clone(), half, big(q).pow(2 * l - 1)]
}

/// Number of twist orbits (B1, B2, B3) of each regular type.
pub fn twist_counts_closed(r: &Ring) -> TypeCounts {
    let q = big(r.q() as u64);
    let l = r.level();
    let qm = &q - 1u32;
    let base = q.pow(l - 1);
    let half = &qm * &base / 2u32;
    if r.p() != 2 {
        return [half.clone(), half, base];
    }
    match r.ramification() {
        Some(e) if l > e => {
            let b3 = (big(e as u64) * &qm + 1u32) * &base;
            [half.clone(), half, b3]
        }
        _ => {
            let full = &qm * &base;
            let b3 = (big(l as u64 - 1) * &qm + 1u32) * &base;
            [full.clone(), full, b3]
        }
    }
}

fn tally(r: &Ring, reps: impl Iterator<Item = Mat2>) -> ([u64; 3], u64) {
    let mut out = [0u64; 3];
    let mut nonregular = 0;
    for m in reps {
        match classify(r, &m).otype {
            OrbitType::One => out[0] += 1,
            OrbitType::Two => out[1] += 1,
            OrbitType::Three => out[2] += 1,
            OrbitType::NonRegular => nonregular += 1,
        }
    }
    (out, nonregular)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteCounts {
    pub by_type: [u64; 3],
    pub nonregular: u64,
}

/// Conjugacy classes of M2(O) by type, from an exhaustive partition.
pub fn class_counts_brute(r: &Ring, flavor: Flavor, cap: u128) -> Result<BruteCounts> {
    let p = Partition::build(r, flavor, false, cap)?;
    let (by_type, nonregular) = tally(r, p.blocks(r).into_iter().map(|b| b.0));
    Ok(BruteCounts {
        by_type,
        nonregular,
    })
}

/// Twist orbits of M2(O) by type, from an exhaustive partition.
pub fn twist_counts_brute(r: &Ring, flavor: Flavor, cap: u128) -> Result<BruteCounts> {
    let p = Partition::build(r, flavor, true, cap)?;
    let (by_type, nonregular) = tally(r, p.blocks(r).into_iter().map(|b| b.0));
    Ok(BruteCounts {
        by_type,
        nonregular,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeCensus {
    pub closed: TypeCounts,
    pub brute: Option<BruteCounts>,
}

impl TypeCensus {
    pub fn agrees(&self) -> bool {
        self.brute
            .as_ref()
            .is_none_or(|b| (0..3).all(|i| big(b.by_type[i]) == self.closed[i]))
    }
}

pub fn count_orbits_by_type(r: &Ring, cap: u128) -> TypeCensus {
    let closed = class_counts_closed(r.q() as u64, r.level());
    TypeCensus {
        closed,
        brute: class_counts_brute(r, Flavor::GL2, cap).ok(),
    }
}

pub fn count_twist_orbits(r: &Ring, cap: u128) -> TypeCensus {
    TypeCensus {
        closed: twist_counts_closed(r),
        brute: twist_counts_brute(r, Flavor::GL2, cap).ok(),
    }
}

fn check_wdelta(l: u32, w: u32, delta: u32) -> Result<()> {
    if w < 1 || w > l || delta > w / 2 {
        Err(Error::InvalidInvariants { w, delta, level: l })
    } else {
        Ok(())
    }
}

fn qpow(q: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// Number of determinants with odd depth δ at level l, for trace valuation w.
pub fn det_count(q: u64, l: u32, w: u32, delta: u32) -> BigRational {
    let m = w / 2;
    let qm = BigRational::from_integer(BigInt::from(q - 1));
    if delta < m {
        qm * qpow(q, l as i64 - delta as i64 - 1)
    } else {
        qpow(q, l as i64 - m as i64)
    }
}

fn b_wdelta(q: u64, l: u32, w: u32, delta: u32, top_exp: i64) -> Result<BigRational> {
    check_wdelta(l, w, delta)?;
    let d = det_count(q, l, w, delta);
    let qm = BigRational::from_integer(BigInt::from(q - 1));
    Ok(if 2 * w < l {
        BigRational::from_integer(BigInt::from(2)) * &qm * qpow(q, -1) * d
    } else if w < l {
        qm * qpow(q, (l / 2) as i64 - w as i64 - 1) * d
    } else {
        qpow(q, top_exp) * d
    })
}

/// B(w, δ): type-3 twist orbits with trace valuation w and odd depth δ over
/// F_q[t]/(t^l), q even, using q^{-⌈l/2⌉} D(δ) when w = l.
pub fn count_twist_orbits_wdelta(q: u64, l: u32, w: u32, delta: u32) -> Result<BigRational> {
    b_wdelta(q, l, w, delta, -(l.div_ceil(2) as i64))
}

/// The same count with q^{-⌊l/2⌋} D(δ) at w = l.
pub fn count_twist_orbits_wdelta_floor(q: u64, l: u32, w: u32, delta: u32) -> Result<BigRational> {
    b_wdelta(q, l, w, delta, -((l / 2) as i64))
}

/// All admissible (w, δ) cells at level l.
pub fn wdelta_cells(l: u32) -> Vec<(u32, u32)> {
    (1..=l)
        .flat_map(|w| (0..=w / 2).map(move |d| (w, d)))
        .collect()
}

fn require_char2(r: &Ring) -> Result<()> {
    if r.kind() == RingKind::EqualChar && r.p() == 2 {
        Ok(())
    } else {
        Err(Error::Unsupported("needs F_q[t]/(t^i) with q even".into()))
    }
}

/// Brute-force count of type-3 twist orbits per (w, δ).
pub fn wdelta_census_brute(
    r: &Ring,
    flavor: Flavor,
    cap: u128,
) -> Result<BTreeMap<(u32, u32), u64>> {
    require_char2(r)?;
    let p = Partition::build(r, flavor, true, cap)?;
    let mut out = BTreeMap::new();
    for (rep, _) in p.blocks(r) {
        let c = classify(r, &rep);
        if c.otype == OrbitType::Three {
            *out.entry((c.w.unwrap(), c.delta.unwrap())).or_insert(0) += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlCell {
    pub w: u32,
    pub delta: u32,
    pub b_gl: u64,
    pub b_sl: u64,
    /// B q^{1+δ} <= B_SL <= 3 B q^{1+δ}
    pub bound_holds: bool,
    /// B q^δ <= B_SL <= 3 B q^δ
    pub shifted_bound_holds: bool,
}

/// SL2 twist-orbit census of type 3 per (w, δ), against the GL2 census.
pub fn sl_twist_census(r: &Ring, cap: u128) -> Result<Vec<SlCell>> {
    let gl = wdelta_census_brute(r, Flavor::GL2, cap)?;
    let sl = wdelta_census_brute(r, Flavor::SL2, cap)?;
    let q = r.q() as u64;
    let keys: BTreeSet<(u32, u32)> = gl.keys().chain(sl.keys()).copied().collect();
    Ok(keys
        .into_iter()
        .map(|(w, delta)| {
            let b_gl = gl.get(&(w, delta)).copied().unwrap_or(0);
            let b_sl = sl.get(&(w, delta)).copied().unwrap_or(0);
            let within = |f: u64| b_gl * f <= b_sl && b_sl <= 3 * b_gl * f;
            SlCell {
                w,
                delta,
                b_gl,
                b_sl,
                bound_holds: within(q.pow(1 + delta)),
                shifted_bound_holds: within(q.pow(delta)),
            }
        })
        .collect())
}

/// Number of SL2-orbits into which the GL2-class of β splits.
pub fn sl2_orbit_split(r: &Ring, beta: &Mat2, cap: u128) -> Result<u64> {
    let orbit = conj_orbit_bfs(r, Flavor::GL2, beta, cap)?;
    let gens = generators(r, Flavor::SL2);
    let mut seen: BTreeSet<Mat2> = BTreeSet::new();
    let mut count = 0;
    for m in &orbit.members {
        if seen.contains(m) {
            continue;
        }
        count += 1;
        seen.insert(*m);
        let mut queue = VecDeque::from([*m]);
        while let Some(x) = queue.pop_front() {
            for (g, gi) in &gens {
                let y = x.conj(r, g, gi);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(count)
}

/// Returns the integer value of an exactly integral rational.
pub fn as_integer(x: &BigRational) -> Option<u64> {
    if x.is_integer() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

/// Sum of B(w, δ) over all cells; equals B3 when the cell formulas are right.
pub fn wdelta_total(q: u64, l: u32) -> BigRational {
    wdelta_cells(l)
        .into_iter()
        .map(|(w, d)| count_twist_orbits_wdelta(q, l, w, d).unwrap())
        .fold(BigRational::zero(), |a, b| a + b)
}
