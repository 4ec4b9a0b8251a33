//! Irreducible root systems built from Cartan matrices, the Weyl dimension
//! polynomial, Levi subsystems and Witten zeta abscissae.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mellin::{abscissa, substitute_one, LinearForm, LinearFormPoly};

/// Largest rank accepted for the classical families.
pub const MAX_RANK: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystem {
    pub family: char,
    pub rank: usize,
    /// A[i][j] = <α_i, α_j^∨>
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in the simple-root basis, sorted by height then lexicographically.
    pub positive_roots: Vec<Vec<u32>>,
    /// Length-squares of the simple roots, the shortest being 1.
    pub z: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeviSubsystem {
    /// 1-based simple-root indices.
    pub subset: Vec<usize>,
    pub r: usize,
    pub kappa: usize,
}

/// μ = Σ m_j ω_j in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominantWeight {
    pub m: Vec<u32>,
}

impl DominantWeight {
    pub fn is_regular(&self) -> bool {
        self.m.iter().all(|&x| x > 0)
    }
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn cartan_matrix(family: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let valid = match family {
        'A' => (1..=MAX_RANK).contains(&n),
        'B' | 'C' => (2..=MAX_RANK).contains(&n),
        'D' => (4..=MAX_RANK).contains(&n),
        'E' => (6..=8).contains(&n),
        'F' => n == 4,
        'G' => n == 2,
        _ => false,
    };
    if !valid {
        return None;
    }
    let mut a = chain(n);
    match family {
        'B' => a[n - 2][n - 1] = -2,
        'C' => a[n - 1][n - 2] = -2,
        'D' => {
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        'E' => {
            // Bourbaki labels: 1-3-4-5-6-7-8 with 2 attached to 4.
            a = vec![vec![0; n]; n];
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
            for k in 6..n {
                edges.push((k - 1, k));
            }
            for i in 0..n {
                a[i][i] = 2;
            }
            for (i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
        }
        'F' => a[1][2] = -2,
        'G' => a[1][0] = -3,
        _ => {}
    }
    Some(a)
}

fn length_squares(a: &[Vec<i64>]) -> Vec<u32> {
    let n = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    d[0] = Some(BigRational::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                let di = d[i].clone().unwrap();
                d[j] = Some(di * BigRational::new(a[j][i].into(), a[i][j].into()));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<BigRational> = d
        .into_iter()
        .map(|x| x.expect("connected diagram"))
        .collect();
    let min = d.iter().min().unwrap().clone();
    d.iter()
        .map(|x| {
            let z = x / &min;
            assert!(z.is_integer());
            u32::try_from(z.to_integer()).unwrap()
        })
        .collect()
}

fn positive_roots(a: &[Vec<i64>]) -> Vec<Vec<u32>> {
    let n = a.len();
    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    let mut seen: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple.into_iter().collect();
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| beta[j] * a[j][i]).sum();
            let mut image = beta.clone();
            image[i] -= pairing;
            if image.iter().all(|&c| c >= 0)
                && image.iter().any(|&c| c > 0)
                && seen.insert(image.clone())
            {
                queue.push_back(image);
            }
        }
    }
    let mut roots: Vec<Vec<u32>> = seen
        .into_iter()
        .map(|v| v.into_iter().map(|c| c as u32).collect())
        .collect();
    roots.sort_by_key(|v| (v.iter().sum::<u32>(), v.clone()));
    roots
}

impl RootSystem {
    pub fn new(family: char, rank: usize) -> Result<RootSystem> {
        let cartan = cartan_matrix(family, rank).ok_or_else(|| Error::Malformed {
            field: "type".into(),
            reason: format!("no irreducible root system {family}{rank}"),
        })?;
        let positive_roots = positive_roots(&cartan);
        let z = length_squares(&cartan);
        Ok(RootSystem {
            family,
            rank,
            cartan,
            positive_roots,
            z,
        })
    }

    /// Parses names such as "A3", "E8", "G2".
    pub fn parse(name: &str) -> Result<RootSystem> {
        let bad = || Error::Malformed {
            field: "type".into(),
            reason: format!("unrecognized root system {name:?}"),
        };
        let mut chars = name.trim().chars();
        let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        RootSystem::new(family, rank)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn kappa(&self) -> usize {
        self.positive_roots.len()
    }

    /// The standard count of positive roots.
    pub fn expected_kappa(family: char, n: usize) -> usize {
        match family {
            'A' => n * (n + 1) / 2,
            'B' | 'C' => n * n,
            'D' => n * (n - 1),
            'G' => 6,
            'F' => 24,
            'E' => [36, 63, 120][n - 6],
            _ => 0,
        }
    }

    /// Every system named in the standard tables up to rank 8.
    pub fn catalogue() -> Vec<RootSystem> {
        let mut names: Vec<(char, usize)> = (1..=8).map(|n| ('A', n)).collect();
        names.extend((2..=8).map(|n| ('B', n)));
        names.extend((2..=8).map(|n| ('C', n)));
        names.extend((4..=8).map(|n| ('D', n)));
        names.extend([('E', 6), ('E', 7), ('E', 8), ('F', 4), ('G', 2)]);
        names
            .into_iter()
            .map(|(f, n)| RootSystem::new(f, n).unwrap())
            .collect()
    }

    fn root_mask(root: &[u32]) -> u32 {
        root.iter()
            .enumerate()
            .filter(|(_, &b)| b > 0)
            .fold(0, |m, (j, _)| m | 1 << j)
    }
}

/// Product over positive roots of Σ_j z_j b_j x_j.
pub fn weyl_polynomial(phi: &RootSystem) -> LinearFormPoly {
    let factors = phi
        .positive_roots
        .iter()
        .map(|b| LinearForm {
            coeffs: b
                .iter()
                .zip(&phi.z)
                .map(|(&b, &z)| BigRational::from_integer(BigInt::from(b * z)))
                .collect(),
            constant: BigRational::zero(),
        })
        .collect();
    LinearFormPoly::new(phi.rank, factors).expect("root coefficients are nonnegative")
}

/// Dimension of the irreducible representation with highest weight Σ m_j ω_j.
pub fn weyl_dim(phi: &RootSystem, m: &[u32]) -> Result<BigUint> {
    if m.len() != phi.rank {
        return Err(Error::InvalidParameter {
            field: "m",
            reason: format!("expected {} entries", phi.rank),
        });
    }
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for b in &phi.positive_roots {
        let pair = |shift: &dyn Fn(usize) -> u64| -> u64 {
            (0..phi.rank)
                .map(|j| (phi.z[j] * b[j]) as u64 * shift(j))
                .sum()
        };
        num *= pair(&|j| m[j] as u64 + 1);
        den *= pair(&|_| 1);
    }
    assert!((&num % &den).is_zero(), "Weyl dimension is not an integer");
    Ok(num / den)
}

pub fn levi_subsystems(phi: &RootSystem) -> Vec<LeviSubsystem> {
    let masks: Vec<u32> = phi
        .positive_roots
        .iter()
        .map(|b| RootSystem::root_mask(b))
        .collect();
    (0..1u32 << phi.rank)
        .map(|s| LeviSubsystem {
            subset: (0..phi.rank)
                .filter(|j| s >> j & 1 == 1)
                .map(|j| j + 1)
                .collect(),
            r: s.count_ones() as usize,
            kappa: masks.iter().filter(|&&m| m & !s == 0).count(),
        })
        .collect()
}

/// r/κ < r(Ψ)/κ(Ψ) for every proper non-empty Levi subsystem Ψ.
pub fn verify_levi_inequality(phi: &RootSystem) -> bool {
    let (r, kappa) = (phi.rank, phi.kappa());
    levi_subsystems(phi)
        .iter()
        .filter(|l| l.r > 0 && l.r < r)
        .all(|l| r * l.kappa < l.r * kappa)
}

pub fn ratio(phi: &RootSystem) -> BigRational {
    BigRational::new(BigInt::from(phi.rank), BigInt::from(phi.kappa()))
}

/// Abscissa of the Witten zeta function, from the Weyl polynomial.
pub fn witten_abscissa(phi: &RootSystem) -> Result<BigRational> {
    Ok(abscissa(&weyl_polynomial(phi))?.value)
}

/// Abscissa of the series restricted to weights with m_j = 0.
pub fn irregular_abscissa(phi: &RootSystem, j: usize) -> Result<BigRational> {
    if phi.rank < 2 {
        return Err(Error::Unsupported(
            "a rank-one system has no irregular weights".into(),
        ));
    }
    Ok(abscissa(&substitute_one(&weyl_polynomial(phi), j)?)?.value)
}
