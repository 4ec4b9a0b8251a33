//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use repzeta::mat2::Mat2;
use repzeta::{Ring, RingKind};

/// Polynomial arithmetic over GF(p) on coefficient vectors, lowest degree first.
pub struct NaiveField {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

impl NaiveField {
    pub fn of(r: &Ring) -> NaiveField {
        let d = r.field().desc();
        NaiveField {
            p: d.p,
            k: d.k,
            modulus: d.modulus.clone(),
        }
    }

    pub fn decode(&self, code: u32) -> Vec<u32> {
        let mut c = code;
        (0..self.k)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn encode(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.decode(a), self.decode(b));
        self.encode(
            &x.iter()
                .zip(&y)
                .map(|(a, b)| (a + b) % self.p)
                .collect::<Vec<_>>(),
        )
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.decode(a), self.decode(b));
        let k = self.k as usize;
        let mut prod = vec![0u32; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        for deg in (k..2 * k).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            prod[deg] = 0;
            for j in 0..k {
                let sub = lead * self.modulus[j] % self.p;
                prod[deg - k + j] = (prod[deg - k + j] + self.p - sub) % self.p;
            }
        }
        self.encode(&prod[..k])
    }

    pub fn is_irreducible(&self) -> bool {
        let q = self.p.pow(self.k);
        (2..q).all(|a| (2..q).all(|b| self.mul(a, b) != 0))
    }
}

/// Truncated power series over a naive field, or integers modulo p^i.
pub struct NaiveRing {
    pub field: NaiveField,
    pub kind: RingKind,
    pub level: u32,
    pub q: u32,
}

impl NaiveRing {
    pub fn of(r: &Ring) -> NaiveRing {
        NaiveRing {
            field: NaiveField::of(r),
            kind: r.kind(),
            level: r.level(),
            q: r.q(),
        }
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut c = a;
        (0..self.level)
            .map(|_| {
                let d = c % self.q;
                c /= self.q;
                d
            })
            .collect()
    }

    fn pack(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.q + x)
    }

    fn modulus(&self) -> u64 {
        (self.q as u64).pow(self.level)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            RingKind::Unramified0 => ((a as u64 + b as u64) % self.modulus()) as u32,
            RingKind::EqualChar => {
                let (x, y) = (self.digits(a), self.digits(b));
                self.pack(
                    &x.iter()
                        .zip(&y)
                        .map(|(&a, &b)| self.field.add(a, b))
                        .collect::<Vec<_>>(),
                )
            }
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            RingKind::Unramified0 => ((a as u64 * b as u64) % self.modulus()) as u32,
            RingKind::EqualChar => {
                let (x, y) = (self.digits(a), self.digits(b));
                let l = self.level as usize;
                let mut out = vec![0u32; l];
                for i in 0..l {
                    for j in 0..l - i {
                        out[i + j] = self.field.add(out[i + j], self.field.mul(x[i], y[j]));
                    }
                }
                self.pack(&out)
            }
        }
    }

    pub fn valuation(&self, a: u32) -> u32 {
        match self.kind {
            RingKind::Unramified0 => {
                let p = self.q;
                let mut v = 0;
                let mut x = a;
                while v < self.level && x % p == 0 {
                    x /= p;
                    v += 1;
                }
                v
            }
            RingKind::EqualChar => self
                .digits(a)
                .iter()
                .position(|&d| d != 0)
                .map_or(self.level, |i| i as u32),
        }
    }
}

pub fn all_matrices(r: &Ring) -> impl Iterator<Item = Mat2> + '_ {
    let n = r.size();
    (0..n).flat_map(move |a| {
        (0..n)
            .flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| Mat2::new(a, b, c, d))))
    })
}

pub fn naive_det(r: &Ring, m: &Mat2) -> u32 {
    r.sub(r.mul(m.a, m.d), r.mul(m.b, m.c))
}

pub fn naive_mul(r: &Ring, x: &Mat2, y: &Mat2) -> Mat2 {
    Mat2::new(
        r.add(r.mul(x.a, y.a), r.mul(x.b, y.c)),
        r.add(r.mul(x.a, y.b), r.mul(x.b, y.d)),
        r.add(r.mul(x.c, y.a), r.mul(x.d, y.c)),
        r.add(r.mul(x.c, y.b), r.mul(x.d, y.d)),
    )
}

pub fn naive_inverse(r: &Ring, m: &Mat2) -> Mat2 {
    let di = r.inv(naive_det(r, m)).unwrap();
    Mat2::new(
        r.mul(di, m.d),
        r.mul(di, r.neg(m.b)),
        r.mul(di, r.neg(m.c)),
        r.mul(di, m.a),
    )
}

/// Every group element, by filtering all matrices on the determinant.
pub fn naive_group(r: &Ring, special: bool) -> Vec<Mat2> {
    all_matrices(r)
        .filter(|m| {
            let d = naive_det(r, m);
            if special {
                d == r.one()
            } else {
                r.is_unit(d)
            }
        })
        .collect()
}

/// Conjugacy classes by direct sweep: each unvisited matrix is conjugated by the whole group.
pub fn naive_classes(r: &Ring, special: bool, twist: bool) -> Vec<BTreeSet<Mat2>> {
    let group: Vec<(Mat2, Mat2)> = naive_group(r, special)
        .into_iter()
        .map(|g| (g, naive_inverse(r, &g)))
        .collect();
    let mut seen: BTreeSet<Mat2> = BTreeSet::new();
    let mut out = Vec::new();
    for m in all_matrices(r) {
        if seen.contains(&m) {
            continue;
        }
        let mut class = BTreeSet::new();
        let shifts: Vec<u32> = if twist {
            r.elements().collect()
        } else {
            vec![0]
        };
        for x in shifts {
            let mx = m.add_scalar(r, x);
            for (g, gi) in &group {
                class.insert(naive_mul(r, &naive_mul(r, g, &mx), gi));
            }
        }
        seen.extend(class.iter().copied());
        out.push(class);
    }
    out
}

/// Lexicographic subsets of {1..n} of every size, as bitmasks.
pub fn masks(n: usize) -> std::ops::Range<u32> {
    0..1u32 << n
}
