//! Abscissa of convergence of ζ(P; s) = Σ P(x)^{-s} over x in Z_{>0}^r, for P a
//! product of linear forms with nonnegative coefficients.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Variable count above which subset enumeration is refused.
pub const MAX_VARS: usize = 20;
/// Largest grid N^r accepted by [`partial_sum`].
pub const GRID_CAP: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl LinearForm {
    /// Bit j is set when x_{j+1} has a positive coefficient.
    pub fn support(&self) -> u32 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .fold(0, |m, (j, _)| m | 1 << j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormPoly {
    pub r: usize,
    pub factors: Vec<LinearForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubpolyStat {
    /// 1-based variable indices.
    pub subset: Vec<usize>,
    pub r: usize,
    pub kappa: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abscissa {
    pub value: BigRational,
    /// 1-based indices of a maximizing proper subset.
    pub witness: Vec<usize>,
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || (int.is_empty() && frac.is_empty())
        {
            return None;
        }
        let digits = format!("{int}{frac}");
        let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let x = BigRational::new(num, den);
        return Some(if neg { -x } else { x });
    }
    BigRational::from_str(s).ok()
}

pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| j + 1)
        .collect()
}

impl LinearFormPoly {
    /// Builds and validates a polynomial from integer coefficient rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.first().map_or(0, |row| row.len());
        let factors = rows
            .iter()
            .map(|row| LinearForm {
                coeffs: row
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect(),
                constant: BigRational::zero(),
            })
            .collect();
        Self::new(r, factors)
    }

    pub fn new(r: usize, factors: Vec<LinearForm>) -> Result<Self> {
        for (i, f) in factors.iter().enumerate() {
            if f.coeffs.len() != r {
                return Err(Error::Malformed {
                    field: format!("factors[{i}].coeffs"),
                    reason: format!("expected {r} coefficients, got {}", f.coeffs.len()),
                });
            }
            if f.coeffs.iter().any(|c| c.is_negative()) || f.constant.is_negative() {
                return Err(Error::NegativeCoefficient { factor: i });
            }
            if f.coeffs.iter().all(|c| c.is_zero()) && f.constant.is_zero() {
                return Err(Error::ZeroFactor { factor: i });
            }
        }
        if r > MAX_VARS {
            return Err(Error::Malformed {
                field: "factors".into(),
                reason: format!("more than {MAX_VARS} variables"),
            });
        }
        Ok(LinearFormPoly { r, factors })
    }

    /// Parses `{"factors":[{"coeffs":["1","0"],"constant":"1"}, ...]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |field: String, reason: &str| Error::Malformed {
            field,
            reason: reason.into(),
        };
        let list = v
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("factors".into(), "expected an array"))?;
        let rat = |x: &Value, field: String| -> Result<BigRational> {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad(field, "expected a rational string")),
            };
            parse_rational(&s).ok_or_else(|| bad(field, "not a decimal or p/q rational"))
        };
        let mut factors = Vec::new();
        for (i, f) in list.iter().enumerate() {
            let coeffs = f
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("factors[{i}].coeffs"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, c)| rat(c, format!("factors[{i}].coeffs[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            let constant = match f.get("constant") {
                None | Some(Value::Null) => BigRational::zero(),
                Some(c) => rat(c, format!("factors[{i}].constant"))?,
            };
            factors.push(LinearForm { coeffs, constant });
        }
        let r = factors.first().map_or(0, |f| f.coeffs.len());
        Self::new(r, factors)
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                let coeffs: Vec<String> = f.coeffs.iter().map(rational_string).collect();
                if f.constant.is_zero() {
                    json!({ "coeffs": coeffs })
                } else {
                    json!({ "coeffs": coeffs, "constant": rational_string(&f.constant) })
                }
            })
            .collect();
        json!({ "factors": factors })
    }

    fn supports(&self) -> Vec<u32> {
        self.factors
            .iter()
            .map(LinearForm::support)
            .filter(|&s| s != 0)
            .collect()
    }

    /// Number of factors with a positive variable coefficient.
    pub fn kappa(&self) -> usize {
        self.supports().len()
    }

    fn kappa_of(supports: &[u32], mask: u32) -> usize {
        supports.iter().filter(|&&s| s & !mask == 0).count()
    }

    fn full_mask(&self) -> u32 {
        if self.r == 32 {
            u32::MAX
        } else {
            (1u32 << self.r) - 1
        }
    }
}

/// Statistics of the subpolynomial on a 1-based variable subset.
pub fn subpoly(p: &LinearFormPoly, subset: &[usize]) -> SubpolyStat {
    let mask = subset.iter().fold(0u32, |m, &j| m | 1 << (j - 1));
    SubpolyStat {
        subset: indices(mask),
        r: mask.count_ones() as usize,
        kappa: LinearFormPoly::kappa_of(&p.supports(), mask),
    }
}

/// max over proper subsets Q (including the empty one) of (r − r(Q)) / (κ − κ(Q)).
pub fn abscissa(p: &LinearFormPoly) -> Result<Abscissa> {
    let supports = p.supports();
    let kappa = supports.len();
    if kappa == 0 {
        return Err(Error::DegeneratePolynomial);
    }
    let used = supports.iter().fold(0, |m, s| m | s);
    if let Some(j) = (0..p.r).find(|j| used >> j & 1 == 0) {
        return Err(Error::UnboundedVariable(j + 1));
    }
    let full = p.full_mask();
    let mut best: Option<(BigRational, u32)> = None;
    for mask in 0..full {
        let kq = LinearFormPoly::kappa_of(&supports, mask);
        let val = BigRational::new(
            BigInt::from(p.r - mask.count_ones() as usize),
            BigInt::from(kappa - kq),
        );
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, mask));
        }
    }
    let (value, mask) = best.expect("at least the empty subset");
    Ok(Abscissa {
        value,
        witness: indices(mask),
    })
}

/// r(Q)/κ(Q) >= r/κ for every non-empty subpolynomial Q.
pub fn is_minimal_abscissa(p: &LinearFormPoly) -> Result<bool> {
    let supports = p.supports();
    let kappa = supports.len();
    if kappa == 0 {
        return Err(Error::DegeneratePolynomial);
    }
    let full = p.full_mask();
    Ok((1..=full).all(|mask| {
        let kq = LinearFormPoly::kappa_of(&supports, mask);
        mask.count_ones() as usize * kappa >= p.r * kq
    }))
}

/// Sets x_j = 1 (1-based); the coefficient moves into the constant term.
pub fn substitute_one(p: &LinearFormPoly, j: usize) -> Result<LinearFormPoly> {
    if j < 1 || j > p.r {
        return Err(Error::InvalidParameter {
            field: "j",
            reason: format!("must lie in 1..={}", p.r),
        });
    }
    let factors = p
        .factors
        .iter()
        .map(|f| {
            let mut coeffs = f.coeffs.clone();
            let c = coeffs.remove(j - 1);
            LinearForm {
                coeffs,
                constant: &f.constant + c,
            }
        })
        .collect();
    LinearFormPoly::new(p.r - 1, factors)
}

/// Σ over x in {1..N}^r of P(x)^{-s}, in lexicographic order of x.
pub fn partial_sum(p: &LinearFormPoly, s: f64, n: u64) -> Result<f64> {
    if p.r > 4 {
        return Err(Error::InvalidParameter {
            field: "r",
            reason: "partial sums need r <= 4".into(),
        });
    }
    let cells = n.checked_pow(p.r as u32).filter(|&c| c <= GRID_CAP);
    if n < 1 || cells.is_none() {
        return Err(Error::InvalidParameter {
            field: "N",
            reason: format!("need 1 <= N^r <= {GRID_CAP}"),
        });
    }
    let rows: Vec<(Vec<f64>, f64)> = p
        .factors
        .iter()
        .map(|f| {
            (
                f.coeffs.iter().map(|c| c.to_f64().unwrap()).collect(),
                f.constant.to_f64().unwrap(),
            )
        })
        .collect();
    let mut x = vec![1u64; p.r];
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    loop {
        let value: f64 = rows
            .iter()
            .map(|(a, c)| a.iter().zip(&x).map(|(a, &x)| a * x as f64).sum::<f64>() + c)
            .product();
        let term = value.powf(-s);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        let mut k = p.r;
        loop {
            if k == 0 {
                return Ok(sum + comp);
            }
            k -= 1;
            if x[k] < n {
                x[k] += 1;
                break;
            }
            x[k] = 1;
        }
    }
}

/// Exponents e_j = κ(Q_{j−1}) − κ(Q_j), where Q_j drops σ(1..j); listed in σ-order.
pub fn leading_monomial(p: &LinearFormPoly, sigma: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; p.r];
    if sigma.len() != p.r
        || !sigma
            .iter()
            .all(|&j| j >= 1 && j <= p.r && !std::mem::replace(&mut seen[j - 1], true))
    {
        return Err(Error::InvalidParameter {
            field: "sigma",
            reason: "not a permutation".into(),
        });
    }
    let supports = p.supports();
    let mut mask = p.full_mask();
    let mut prev = supports.len();
    let mut out = Vec::with_capacity(p.r);
    for &j in sigma {
        mask &= !(1 << (j - 1));
        let k = LinearFormPoly::kappa_of(&supports, mask);
        out.push(prev - k);
        prev = k;
    }
    Ok(out)
}
