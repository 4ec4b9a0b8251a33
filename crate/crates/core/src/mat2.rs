//! 2x2 matrices over O_i, the groups GL2(O_i) and SL2(O_i), and exhaustive
//! orbit machinery for conjugation and twisting.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingDesc};

/// Default enumeration cap on the number of matrices swept.
pub const DEFAULT_CAP: u128 = 1 << 24;
/// Group order below which orbits are computed by a full group sweep.
pub const SWEEP_LIMIT: u64 = 1 << 12;

/// The matrix [[a, b], [c, d]]. The derived order is lexicographic on entry codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    GL2,
    SL2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDesc {
    pub ring: RingDesc,
    pub flavor: Flavor,
}

impl Mat2 {
    pub const fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(r: &Ring) -> Self {
        Mat2::scalar(r.one())
    }

    pub const fn scalar(x: Elem) -> Self {
        Mat2 {
            a: x,
            b: 0,
            c: 0,
            d: x,
        }
    }

    /// [[0, 1], [-det, tr]]: trace `tr`, determinant `det`.
    pub fn companion(r: &Ring, tr: Elem, det: Elem) -> Self {
        Mat2 {
            a: 0,
            b: r.one(),
            c: r.neg(det),
            d: tr,
        }
    }

    pub fn mul(&self, r: &Ring, o: &Mat2) -> Mat2 {
        Mat2 {
            a: r.add(r.mul(self.a, o.a), r.mul(self.b, o.c)),
            b: r.add(r.mul(self.a, o.b), r.mul(self.b, o.d)),
            c: r.add(r.mul(self.c, o.a), r.mul(self.d, o.c)),
            d: r.add(r.mul(self.c, o.b), r.mul(self.d, o.d)),
        }
    }

    pub fn add(&self, r: &Ring, o: &Mat2) -> Mat2 {
        Mat2 {
            a: r.add(self.a, o.a),
            b: r.add(self.b, o.b),
            c: r.add(self.c, o.c),
            d: r.add(self.d, o.d),
        }
    }

    pub fn sub(&self, r: &Ring, o: &Mat2) -> Mat2 {
        Mat2 {
            a: r.sub(self.a, o.a),
            b: r.sub(self.b, o.b),
            c: r.sub(self.c, o.c),
            d: r.sub(self.d, o.d),
        }
    }

    pub fn add_scalar(&self, r: &Ring, x: Elem) -> Mat2 {
        Mat2 {
            a: r.add(self.a, x),
            d: r.add(self.d, x),
            ..*self
        }
    }

    pub fn det(&self, r: &Ring) -> Elem {
        r.sub(r.mul(self.a, self.d), r.mul(self.b, self.c))
    }

    pub fn trace(&self, r: &Ring) -> Elem {
        r.add(self.a, self.d)
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    pub fn is_scalar_mod_p(&self, r: &Ring) -> bool {
        r.residue(self.b) == 0 && r.residue(self.c) == 0 && r.residue(self.a) == r.residue(self.d)
    }

    pub fn inverse(&self, r: &Ring) -> Result<Mat2> {
        let di = r.inv(self.det(r))?;
        Ok(Mat2 {
            a: r.mul(self.d, di),
            b: r.mul(r.neg(self.b), di),
            c: r.mul(r.neg(self.c), di),
            d: r.mul(self.a, di),
        })
    }

    /// g * self * g^{-1}, with the inverse supplied.
    #[inline]
    pub fn conj(&self, r: &Ring, g: &Mat2, ginv: &Mat2) -> Mat2 {
        g.mul(r, &self.mul(r, ginv))
    }

    pub fn reduce(&self, r: &Ring, j: u32) -> Mat2 {
        Mat2 {
            a: r.reduce(self.a, j),
            b: r.reduce(self.b, j),
            c: r.reduce(self.c, j),
            d: r.reduce(self.d, j),
        }
    }

    /// Position in the lexicographic enumeration of M2(O).
    #[inline]
    pub fn index(&self, r: &Ring) -> u64 {
        let n = r.size() as u64;
        ((self.a as u64 * n + self.b as u64) * n + self.c as u64) * n + self.d as u64
    }

    #[inline]
    pub fn from_index(r: &Ring, mut i: u64) -> Mat2 {
        let n = r.size() as u64;
        let d = (i % n) as u32;
        i /= n;
        let c = (i % n) as u32;
        i /= n;
        let b = (i % n) as u32;
        Mat2 {
            a: (i / n) as u32,
            b,
            c,
            d,
        }
    }

    pub fn to_json(&self, r: &Ring) -> Value {
        Value::from(vec![
            Value::from(vec![r.elem_to_json(self.a), r.elem_to_json(self.b)]),
            Value::from(vec![r.elem_to_json(self.c), r.elem_to_json(self.d)]),
        ])
    }

    pub fn from_json(r: &Ring, v: &Value, field: &str) -> Result<Mat2> {
        let bad = || Error::Malformed {
            field: field.to_string(),
            reason: "expected a 2x2 array".into(),
        };
        let rows = v
            .as_array()
            .filter(|rows| rows.len() == 2)
            .ok_or_else(bad)?;
        let mut e = [0u32; 4];
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|row| row.len() == 2)
                .ok_or_else(bad)?;
            for (j, x) in row.iter().enumerate() {
                e[2 * i + j] = r.elem_from_json(x, &format!("{field}[{i}][{j}]"))?;
            }
        }
        Ok(Mat2::new(e[0], e[1], e[2], e[3]))
    }
}

pub fn group_order(g: &GroupDesc) -> BigUint {
    let q = BigUint::from(g.ring.q());
    let i = g.ring.level;
    let one = BigUint::from(1u32);
    let (qm, qp) = (&q - &one, &q + &one);
    match g.flavor {
        Flavor::GL2 => q.pow(4 * i - 3) * &qm * &qm * qp,
        Flavor::SL2 => q.pow(3 * i - 2) * qm * qp,
    }
}

/// Number of matrices in M2(O), the quantity compared against caps.
pub fn matrix_count(r: &Ring) -> u128 {
    (r.size() as u128).pow(4)
}

pub fn check_cap(r: &Ring, cap: u128) -> Result<()> {
    let size = matrix_count(r);
    if size > cap {
        Err(Error::TooLarge { size, cap })
    } else {
        Ok(())
    }
}

pub fn in_group(r: &Ring, flavor: Flavor, m: &Mat2) -> bool {
    let det = m.det(r);
    match flavor {
        Flavor::GL2 => r.is_unit(det),
        Flavor::SL2 => det == r.one(),
    }
}

/// All group elements in lexicographic order.
pub fn enumerate_group(
    r: &Ring,
    flavor: Flavor,
    cap: u128,
) -> Result<impl Iterator<Item = Mat2> + '_> {
    check_cap(r, cap)?;
    let total = matrix_count(r) as u64;
    Ok((0..total)
        .map(move |i| Mat2::from_index(r, i))
        .filter(move |m| in_group(r, flavor, m)))
}

/// A small generating set of the unit group, chosen greedily.
pub fn unit_generators(r: &Ring) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut span: HashSet<Elem> = HashSet::from([r.one()]);
    for u in r.units() {
        if span.contains(&u) {
            continue;
        }
        gens.push(u);
        let mut frontier: Vec<Elem> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = r.mul(x, g);
                if span.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// Generators with their inverses: elementary matrices for every additive
/// generator, plus diag(u, 1) for unit generators in the GL2 case.
pub fn generators(r: &Ring, flavor: Flavor) -> Vec<(Mat2, Mat2)> {
    let one = r.one();
    let mut out = Vec::new();
    for x in r.additive_generators() {
        let nx = r.neg(x);
        out.push((Mat2::new(one, x, 0, one), Mat2::new(one, nx, 0, one)));
        out.push((Mat2::new(one, 0, x, one), Mat2::new(one, 0, nx, one)));
    }
    if flavor == Flavor::GL2 {
        for u in unit_generators(r) {
            let ui = r.inv(u).expect("unit");
            out.push((Mat2::new(u, 0, 0, one), Mat2::new(ui, 0, 0, one)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub rep: Mat2,
    pub members: Vec<Mat2>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn orbit_from(members: BTreeSet<Mat2>) -> Orbit {
    let members: Vec<Mat2> = members.into_iter().collect();
    Orbit {
        rep: members[0],
        members,
    }
}

/// Orbit of β by sweeping the full group.
pub fn conj_orbit_sweep(r: &Ring, flavor: Flavor, beta: &Mat2, cap: u128) -> Result<Orbit> {
    let mut set = BTreeSet::new();
    for g in enumerate_group(r, flavor, cap)? {
        let gi = g.inverse(r)?;
        set.insert(beta.conj(r, &g, &gi));
    }
    Ok(orbit_from(set))
}

/// Orbit of β by breadth-first search under generator conjugation.
pub fn conj_orbit_bfs(r: &Ring, flavor: Flavor, beta: &Mat2, cap: u128) -> Result<Orbit> {
    check_cap(r, cap)?;
    let gens = generators(r, flavor);
    let mut set = BTreeSet::from([*beta]);
    let mut queue = VecDeque::from([*beta]);
    while let Some(m) = queue.pop_front() {
        for (g, gi) in &gens {
            let x = m.conj(r, g, gi);
            if set.insert(x) {
                queue.push_back(x);
            }
        }
    }
    Ok(orbit_from(set))
}

pub fn conj_orbit(r: &Ring, flavor: Flavor, beta: &Mat2, cap: u128) -> Result<Orbit> {
    let order = group_order(&GroupDesc {
        ring: r.desc().clone(),
        flavor,
    });
    if order <= BigUint::from(SWEEP_LIMIT) {
        conj_orbit_sweep(r, flavor, beta, cap)
    } else {
        conj_orbit_bfs(r, flavor, beta, cap)
    }
}

/// Canonical representatives of the classes [xI + β], x in O.
pub fn twist_orbit(r: &Ring, flavor: Flavor, beta: &Mat2, cap: u128) -> Result<Vec<Mat2>> {
    let orbit = conj_orbit(r, flavor, beta, cap)?;
    let reps: BTreeSet<Mat2> = r
        .elements()
        .map(|x| {
            orbit
                .members
                .iter()
                .map(|m| m.add_scalar(r, x))
                .min()
                .unwrap()
        })
        .collect();
    Ok(reps.into_iter().collect())
}

/// All group elements commuting with β.
pub fn centralizer(r: &Ring, flavor: Flavor, beta: &Mat2, cap: u128) -> Result<Vec<Mat2>> {
    Ok(enumerate_group(r, flavor, cap)?
        .filter(|g| g.mul(r, beta) == beta.mul(r, g))
        .collect())
}

/// Partition of M2(O) into conjugacy classes (or twist orbits of classes).
#[derive(Debug, Clone)]
pub struct Partition {
    root: Vec<u32>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    let mut root = x;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    while parent[x as usize] != root {
        let next = parent[x as usize];
        parent[x as usize] = root;
        x = next;
    }
    root
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra < rb {
        parent[rb as usize] = ra;
    } else if rb < ra {
        parent[ra as usize] = rb;
    }
}

impl Partition {
    /// Union-find over M2(O) under the group generators, optionally also under
    /// addition of scalars. Every root is the least member of its block.
    pub fn build(r: &Ring, flavor: Flavor, twist: bool, cap: u128) -> Result<Partition> {
        check_cap(r, cap)?;
        let total = matrix_count(r);
        if total > u32::MAX as u128 {
            return Err(Error::TooLarge {
                size: total,
                cap: u32::MAX as u128,
            });
        }
        let total = total as u32;
        let gens = generators(r, flavor);
        let shifts = if twist {
            r.additive_generators()
        } else {
            Vec::new()
        };
        let mut parent: Vec<u32> = (0..total).collect();
        for i in 0..total {
            let m = Mat2::from_index(r, i as u64);
            for (g, gi) in &gens {
                union(&mut parent, i, m.conj(r, g, gi).index(r) as u32);
            }
            for &s in &shifts {
                union(&mut parent, i, m.add_scalar(r, s).index(r) as u32);
            }
        }
        for i in 0..total {
            find(&mut parent, i);
        }
        Ok(Partition { root: parent })
    }

    pub fn rep_of(&self, r: &Ring, m: &Mat2) -> Mat2 {
        Mat2::from_index(r, self.root[m.index(r) as usize] as u64)
    }

    /// (representative, block size) for every block, in representative order.
    pub fn blocks(&self, r: &Ring) -> Vec<(Mat2, u64)> {
        let mut sizes = vec![0u64; self.root.len()];
        for &x in &self.root {
            sizes[x as usize] += 1;
        }
        sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(|(i, &s)| (Mat2::from_index(r, i as u64), s))
            .collect()
    }
}
