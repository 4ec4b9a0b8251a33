//! Dimensions and multiplicities of irreducible representations of GL2(O_r),
//! twist zeta functions, and Dirichlet polynomial evaluation.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::mat2::{group_order, Flavor, GroupDesc};
use crate::ring::RingDesc;

/// Finite Dirichlet polynomial: dimension -> multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DirichletPoly {
    pub terms: BTreeMap<BigUint, BigUint>,
}

impl DirichletPoly {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `mult` at `dim`, merging with an existing term. Zero multiplicities are dropped.
    pub fn add_term(&mut self, dim: BigUint, mult: BigUint) {
        if mult.is_zero() {
            return;
        }
        *self.terms.entry(dim).or_insert_with(BigUint::zero) += mult;
    }

    pub fn add(&self, other: &DirichletPoly) -> DirichletPoly {
        let mut out = self.clone();
        for (d, m) in &other.terms {
            out.add_term(d.clone(), m.clone());
        }
        out
    }

    pub fn total(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// Exact value at an integer s.
    pub fn eval_exact(&self, s: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (d, m) in &self.terms {
            let d = BigInt::from(d.clone());
            let m = BigInt::from(m.clone());
            let e = s.unsigned_abs() as usize;
            acc += if s >= 0 {
                BigRational::new(m, num_traits::pow(d, e))
            } else {
                BigRational::from_integer(m * num_traits::pow(d, e))
            };
        }
        acc
    }

    /// Value at real s: exact for small integers, otherwise each term is rounded
    /// once and the terms are accumulated exactly.
    pub fn eval(&self, s: f64) -> f64 {
        if s.fract() == 0.0 && s.abs() <= 64.0 {
            return self.eval_exact(s as i64).to_f64().unwrap_or(f64::NAN);
        }
        let mut acc = BigRational::zero();
        for (d, m) in &self.terms {
            let term = m.to_f64().unwrap() * d.to_f64().unwrap().powf(-s);
            acc += BigRational::from_float(term).unwrap_or_else(BigRational::zero);
        }
        acc.to_f64().unwrap_or(f64::NAN)
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Per-level data for GL2(O_r): dimensions, multiplicities and (p odd) twist multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelBlock {
    pub r: u32,
    pub q: u64,
    pub dims: [BigUint; 3],
    pub mults: [BigUint; 3],
    pub twist_mults: Option<[BigUint; 3]>,
}

impl LevelBlock {
    pub fn poly(&self) -> DirichletPoly {
        let mut p = DirichletPoly::new();
        for i in 0..3 {
            p.add_term(self.dims[i].clone(), self.mults[i].clone());
        }
        p
    }

    pub fn twist_poly(&self) -> Option<DirichletPoly> {
        let t = self.twist_mults.as_ref()?;
        let mut p = DirichletPoly::new();
        for i in 0..3 {
            p.add_term(self.dims[i].clone(), t[i].clone());
        }
        Some(p)
    }
}

pub(crate) fn check_q(q: u64) -> Result<u32> {
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut x = q;
    while x % p == 0 {
        x /= p;
    }
    if q < 2 || x != 1 {
        return Err(invalid("q", format!("{q} is not a prime power")));
    }
    Ok(p as u32)
}

pub fn dims_and_mults(q: u64, r: u32) -> Result<LevelBlock> {
    check_q(q)?;
    if r < 2 {
        return Err(invalid("r", "level must be at least 2"));
    }
    let qb = big(q);
    let (qm, qp) = (big(q - 1), big(q + 1));
    let dims = [
        &qp * qb.pow(r - 1),
        &qm * qb.pow(r - 1),
        (&qb * &qb - 1u32) * qb.pow(r - 2),
    ];
    let mults = [
        qm.pow(3) * qb.pow(2 * r - 3) / 2u32,
        &qm * &qm * &qp * qb.pow(2 * r - 3) / 2u32,
        &qm * qb.pow(2 * r - 2),
    ];
    let twist_mults = twist_mults_podd(q, r).ok();
    Ok(LevelBlock {
        r,
        q,
        dims,
        mults,
        twist_mults,
    })
}

fn gl2_order(q: u64, level: u32) -> BigUint {
    let (p, k) = prime_power(q);
    group_order(&GroupDesc {
        ring: RingDesc::equal_char(p, k, level),
        flavor: Flavor::GL2,
    })
}

fn prime_power(q: u64) -> (u32, u32) {
    let p = check_q(q).expect("prime power");
    let mut k = 0;
    let mut x = q;
    while x > 1 {
        x /= p as u64;
        k += 1;
    }
    (p, k)
}

/// Σ r_d d^2 over level-r representations equals |G_r| − q|G_{r−1}|, in exact integers.
pub fn sum_squares_identity(q: u64, r: u32) -> Result<bool> {
    let b = dims_and_mults(q, r)?;
    let lhs: BigUint = (0..3).map(|i| &b.mults[i] * &b.dims[i] * &b.dims[i]).sum();
    let rhs = gl2_order(q, r) - big(q) * gl2_order(q, r - 1);
    Ok(lhs == rhs)
}

/// Integer polynomial in q, coefficients from degree 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn monomial(c: i64, e: usize) -> IntPoly {
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::from(c);
        IntPoly(v).trim()
    }
    /// q + c
    pub fn linear(c: i64) -> IntPoly {
        IntPoly(vec![BigInt::from(c), BigInt::one()])
    }
    fn trim(mut self) -> IntPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }
    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut v = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly(v).trim()
    }
    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.0.len().max(o.0.len());
        let get = |p: &IntPoly, i: usize| p.0.get(i).cloned().unwrap_or_default();
        IntPoly((0..n).map(|i| get(self, i) + get(o, i)).collect()).trim()
    }
    pub fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }
    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::monomial(1, 0), |acc, _| acc.mul(self))
    }
}

/// Both sides of the sum-of-squares identity at level r as polynomials in q
/// (doubled to clear the halves), and their common factored form.
pub fn sum_squares_polys(r: u32) -> (IntPoly, IntPoly, IntPoly) {
    assert!(r >= 2);
    let q = |e: u32| IntPoly::monomial(1, e as usize);
    let (qm, qp) = (IntPoly::linear(-1), IntPoly::linear(1));
    let d1 = qp.mul(&q(r - 1));
    let d2 = qm.mul(&q(r - 1));
    let d3 = qm.mul(&qp).mul(&q(r - 2));
    let lhs = qm
        .pow(3)
        .mul(&q(2 * r - 3))
        .mul(&d1.pow(2))
        .add(&qm.pow(2).mul(&qp).mul(&q(2 * r - 3)).mul(&d2.pow(2)))
        .add(
            &IntPoly::monomial(2, 0)
                .mul(&qm)
                .mul(&q(2 * r - 2))
                .mul(&d3.pow(2)),
        );
    let g = |i: u32| q(4 * i - 3).mul(&qm.pow(2)).mul(&qp);
    let rhs = IntPoly::monomial(2, 0).mul(&g(r).add(&q(1).mul(&g(r - 1)).neg()));
    let factored = IntPoly::monomial(2, 0)
        .mul(&qm.pow(3))
        .mul(&qp)
        .mul(&q(4 * r - 6))
        .mul(&IntPoly(vec![BigInt::one(), BigInt::one(), BigInt::one()]));
    (lhs, rhs, factored)
}

pub fn sum_squares_symbolic(r: u32) -> bool {
    let (lhs, rhs, factored) = sum_squares_polys(r);
    lhs == rhs && rhs == factored
}

/// Twist zeta function of GL2(F_q).
pub fn twist_zeta_gl2fq(q: u64) -> Result<DirichletPoly> {
    let p = check_q(q)?;
    let mut z = DirichletPoly::new();
    z.add_term(big(1), big(1));
    z.add_term(big(q), big(1));
    if p == 2 {
        z.add_term(big(q + 1), big((q - 2) / 2));
        z.add_term(big(q - 1), big(q / 2));
    } else {
        z.add_term(big(q + 1), big((q - 1) / 2));
        z.add_term(big(q - 1), big((q + 1) / 2));
    }
    Ok(z)
}

/// Twist multiplicities at level r for p odd.
pub fn twist_mults_podd(q: u64, r: u32) -> Result<[BigUint; 3]> {
    let p = check_q(q)?;
    if p == 2 {
        return Err(Error::Unsupported("twist multiplicities need p odd".into()));
    }
    if r < 2 {
        return Err(invalid("r", "level must be at least 2"));
    }
    let qb = big(q);
    let t = qb.pow(r - 2);
    Ok([
        big((q - 1) * (q - 1) / 2) * &t,
        big((q * q - 1) / 2) * &t,
        big(2) * qb.pow(r - 1),
    ])
}

/// Twist zeta of GL2(O) truncated at level `r_max`, as levelled pieces (level 1 is GL2(F_q)).
pub fn twist_blocks_podd(q: u64, r_max: u32) -> Result<Vec<(u32, DirichletPoly)>> {
    let mut out = vec![(1, twist_zeta_gl2fq(q)?)];
    for r in 2..=r_max {
        let block = dims_and_mults(q, r)?;
        out.push((
            r,
            block
                .twist_poly()
                .ok_or_else(|| Error::Unsupported("twist multiplicities need p odd".into()))?,
        ));
    }
    Ok(out)
}

/// Sum of the pieces of level at most `r_max`, evaluated at s.
pub fn dirichlet_partial(blocks: &[(u32, DirichletPoly)], s: f64, r_max: u32) -> f64 {
    let merged = blocks
        .iter()
        .filter(|(r, _)| *r <= r_max)
        .fold(DirichletPoly::new(), |acc, (_, p)| acc.add(p));
    merged.eval(s)
}

/// Closed form of the twist zeta function of GL2(O), p odd, truncated at
/// level `r_max` or complete when `None`.
pub fn twist_zeta_gl2_podd(q: u64, s: f64, r_max: Option<u32>) -> Result<f64> {
    let p = check_q(q)?;
    if p == 2 {
        return Err(Error::Unsupported("closed form needs p odd".into()));
    }
    let qf = q as f64;
    let head = 1.0
        + qf.powf(-s)
        + (qf - 1.0) / 2.0 * (qf + 1.0).powf(-s)
        + (qf + 1.0) / 2.0 * (qf - 1.0).powf(-s);
    let bracket = (qf - 1.0).powi(2) / 2.0 * (qf * qf + qf).powf(-s)
        + (qf * qf - 1.0) / 2.0 * (qf * qf - qf).powf(-s)
        + 2.0 * qf * (qf * qf - 1.0).powf(-s);
    let x = qf.powf(1.0 - s);
    let geometric = match r_max {
        None if s == 1.0 => return Err(Error::Pole),
        None => 1.0 / (1.0 - x),
        Some(0) => return Err(invalid("rmax", "level must be at least 1")),
        Some(r) if s == 1.0 => (r - 1) as f64,
        Some(r) => (1.0 - x.powi(r as i32 - 1)) / (1.0 - x),
    };
    Ok(head + bracket * geometric)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbscissaEstimate {
    pub value: f64,
    /// (N, log R_N / log N) at every distinct dimension N >= 2 up to N_max.
    pub trace: Vec<(f64, f64)>,
}

/// log R_N / log N with R_N the number of terms of dimension at most N.
pub fn abscissa_estimate(
    terms: impl IntoIterator<Item = (BigUint, BigUint)>,
    n_max: &BigUint,
) -> Result<AbscissaEstimate> {
    let mut total = BigUint::zero();
    let mut last: Option<BigUint> = None;
    let mut trace: Vec<(f64, f64)> = Vec::new();
    let est = |total: &BigUint, n: &BigUint| -> f64 {
        let ln = n.to_f64().unwrap().ln();
        if ln == 0.0 || total.is_zero() {
            0.0
        } else {
            total.to_f64().unwrap().ln() / ln
        }
    };
    for (d, m) in terms {
        if last.as_ref().is_some_and(|l| &d < l) {
            return Err(invalid("terms", "dimensions must be nondecreasing"));
        }
        if &d > n_max {
            break;
        }
        total += m;
        if d > BigUint::one() {
            let point = (d.to_f64().unwrap(), est(&total, &d));
            match trace.last_mut() {
                Some(prev) if last.as_ref() == Some(&d) => *prev = point,
                _ => trace.push(point),
            }
        }
        last = Some(d);
    }
    Ok(AbscissaEstimate {
        value: est(&total, n_max),
        trace,
    })
}

/// Sorted (dimension, multiplicity) terms of the p-odd twist zeta function up to level r_max.
pub fn twist_terms_podd(q: u64, r_max: u32) -> Result<Vec<(BigUint, BigUint)>> {
    let merged = twist_blocks_podd(q, r_max)?
        .iter()
        .fold(DirichletPoly::new(), |acc, (_, p)| acc.add(p));
    Ok(merged.terms.into_iter().collect())
}
