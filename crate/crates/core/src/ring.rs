//! Finite fields GF(p^k) and finite truncated local rings.
//!
//! Elements are plain `u32` codes interpreted by a [`Field`] or [`Ring`]
//! context. A field element is the base-p packing of its polynomial
//! coefficients; an element of F_q[t]/(t^i) is the base-q packing of its
//! t-adic digits; an element of Z/p^i is the integer itself.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Error, Result};

/// Largest supported residue field size.
pub const FIELD_CAP: u64 = 1 << 16;
/// Largest supported ring size.
pub const RING_CAP: u64 = 1 << 30;
const TABLE_LIMIT: u32 = 1024;

pub type Elem = u32;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Descriptor of GF(p^k): modulus coefficients from degree 0 up to the leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct Field {
    desc: FieldDesc,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - dm;
            for j in 0..dm {
                a[off + j] = (a[off + j] + (p - lead) * m[j] % p) % p;
            }
        }
    }
    a
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for c in 0..count {
            let mut g = digits_of(c, p, d);
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn digits_of(mut c: u64, p: u32, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push((c % p as u64) as u32);
        c /= p as u64;
    }
    v
}

fn pack(d: &[u32], base: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * base + x)
}

/// Builds GF(p^k) with the lowest monic irreducible modulus, ordering
/// candidates by their coefficient code from the top degree down.
pub fn field_make(p: u32, k: u32) -> Result<Field> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if k < 1 {
        return Err(invalid("k", "extension degree must be at least 1"));
    }
    let q = (p as u64)
        .checked_pow(k)
        .filter(|&q| q <= FIELD_CAP)
        .ok_or_else(|| invalid("k", format!("p^k exceeds the field cap {FIELD_CAP}")))?
        as u32;
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        (0..q as u64)
            .map(|c| {
                let mut f = digits_of(c, p, k as usize);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree")
    };
    let desc = FieldDesc { p, k, modulus };
    let mulmod = |a: u32, b: u32| -> u32 {
        let (da, db) = (
            digits_of(a as u64, p, k as usize),
            digits_of(b as u64, p, k as usize),
        );
        let mut prod = vec![0u32; 2 * k as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        pack(&poly_rem(prod, &desc.modulus, p), p)
    };
    let n = q - 1;
    let mut prime_factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_factors.push(m);
    }
    let slow_pow = |g: u32, mut e: u32| -> u32 {
        let (mut acc, mut b) = (1u32, g);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let gen = (1..q.max(2))
        .find(|&g| q == 2 || prime_factors.iter().all(|&l| slow_pow(g, n / l) != 1))
        .unwrap_or(1);
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for e in 0..n {
        exp[e as usize] = x;
        log[x as usize] = e;
        x = mulmod(x, gen);
    }
    Ok(Field { desc, q, exp, log })
}

impl Field {
    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }
    pub fn p(&self) -> u32 {
        self.desc.p
    }
    pub fn k(&self) -> u32 {
        self.desc.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.desc.p;
        if p == 2 {
            return a ^ b;
        }
        if self.desc.k == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.desc.p;
        if p == 2 {
            return a;
        }
        if self.desc.k == 1 {
            return (p - a) % p;
        }
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::NotAUnit);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// The unique square root in GF(2^k), namely a^(2^(k-1)).
    pub fn sqrt_char2(&self, a: u32) -> Result<u32> {
        if self.desc.p != 2 {
            return Err(Error::Unsupported(
                "square roots need characteristic 2".into(),
            ));
        }
        let mut b = a;
        for _ in 1..self.desc.k {
            b = self.mul(b, b);
        }
        Ok(b)
    }

    /// Number of roots of x^2 + b x + c in the field.
    pub fn quadratic_roots(&self, b: u32, c: u32) -> usize {
        (0..self.q)
            .filter(|&x| self.add(self.add(self.mul(x, x), self.mul(b, x)), c) == 0)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    /// F_q[t]/(t^i)
    EqualChar,
    /// Z/p^i
    Unramified0,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDesc {
    pub kind: RingKind,
    pub p: u32,
    pub k: u32,
    pub level: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingSpec {
    base: String,
    p: u32,
    #[serde(default)]
    k: Option<u32>,
    level: u32,
    #[serde(default)]
    e: Option<u32>,
}

impl RingDesc {
    pub fn equal_char(p: u32, k: u32, level: u32) -> Self {
        RingDesc {
            kind: RingKind::EqualChar,
            p,
            k,
            level,
        }
    }
    pub fn zp(p: u32, level: u32) -> Self {
        RingDesc {
            kind: RingKind::Unramified0,
            p,
            k: 1,
            level,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: RingSpec = serde_json::from_str(s).map_err(|e| Error::Malformed {
            field: "ring".into(),
            reason: e.to_string(),
        })?;
        match spec.base.as_str() {
            "Fq" => Ok(RingDesc::equal_char(
                spec.p,
                spec.k.unwrap_or(1),
                spec.level,
            )),
            "Zp" => {
                if spec.e.is_some_and(|e| e != 1) {
                    return Err(Error::Unsupported("ramified extensions of Z_p".into()));
                }
                if spec.k.is_some_and(|k| k != 1) {
                    return Err(Error::Unsupported(
                        "unramified extensions of Z_p of degree > 1".into(),
                    ));
                }
                Ok(RingDesc::zp(spec.p, spec.level))
            }
            other => Err(Error::Malformed {
                field: "ring.base".into(),
                reason: format!("expected \"Fq\" or \"Zp\", got {other:?}"),
            }),
        }
    }

    pub fn to_json(&self) -> Value {
        match self.kind {
            RingKind::EqualChar => {
                serde_json::json!({"base": "Fq", "p": self.p, "k": self.k, "level": self.level})
            }
            RingKind::Unramified0 => {
                serde_json::json!({"base": "Zp", "p": self.p, "level": self.level})
            }
        }
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }
}

/// A finite truncated local ring O_i with its residue field.
#[derive(Debug, Clone)]
pub struct Ring {
    desc: RingDesc,
    field: Field,
    q: u32,
    size: u32,
    add_t: Vec<u32>,
    mul_t: Vec<u32>,
}

impl Ring {
    pub fn new(desc: RingDesc) -> Result<Ring> {
        if desc.level < 1 {
            return Err(invalid("level", "level must be at least 1"));
        }
        if desc.kind == RingKind::Unramified0 && desc.k != 1 {
            return Err(Error::Unsupported("Z/p^i has residue field GF(p)".into()));
        }
        let field = field_make(desc.p, desc.k)?;
        let q = field.q();
        let size = (q as u64)
            .checked_pow(desc.level)
            .filter(|&s| s <= RING_CAP)
            .ok_or_else(|| invalid("level", format!("ring size exceeds {RING_CAP}")))?
            as u32;
        let mut ring = Ring {
            desc,
            field,
            q,
            size,
            add_t: Vec::new(),
            mul_t: Vec::new(),
        };
        if ring.desc.kind == RingKind::EqualChar
            && ring.desc.level > 1
            && size <= TABLE_LIMIT
            && size > 2
        {
            let n = size as usize;
            let mut add_t = vec![0u32; n * n];
            let mut mul_t = vec![0u32; n * n];
            for a in 0..size {
                for b in 0..size {
                    add_t[a as usize * n + b as usize] = ring.add_slow(a, b);
                    mul_t[a as usize * n + b as usize] = ring.mul_slow(a, b);
                }
            }
            ring.add_t = add_t;
            ring.mul_t = mul_t;
        }
        Ok(ring)
    }

    pub fn equal_char(p: u32, k: u32, level: u32) -> Result<Ring> {
        Ring::new(RingDesc::equal_char(p, k, level))
    }

    pub fn zp(p: u32, level: u32) -> Result<Ring> {
        Ring::new(RingDesc::zp(p, level))
    }

    pub fn desc(&self) -> &RingDesc {
        &self.desc
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn kind(&self) -> RingKind {
        self.desc.kind
    }
    pub fn p(&self) -> u32 {
        self.desc.p
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn level(&self) -> u32 {
        self.desc.level
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    /// True for F_q[t]/(t^i) with q even.
    pub fn is_char2(&self) -> bool {
        self.desc.kind == RingKind::EqualChar && self.desc.p == 2
    }
    /// Ramification index v(p); `None` stands for infinity.
    pub fn ramification(&self) -> Option<u32> {
        match self.desc.kind {
            RingKind::EqualChar => None,
            RingKind::Unramified0 => Some(1),
        }
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    pub fn unit_count(&self) -> u64 {
        (self.q as u64 - 1) * (self.q as u64).pow(self.desc.level - 1)
    }

    pub fn zero(&self) -> Elem {
        0
    }
    pub fn one(&self) -> Elem {
        1 % self.size
    }

    /// The uniformizer t (or p).
    pub fn uniformizer(&self) -> Elem {
        self.q % self.size
    }

    /// Embeds a residue-field code as a constant.
    pub fn constant(&self, c: u32) -> Elem {
        c
    }

    /// The element t^j (or p^j); zero when j >= level.
    pub fn uniformizer_pow(&self, j: u32) -> Elem {
        if j >= self.desc.level {
            0
        } else {
            self.q.pow(j)
        }
    }

    /// Reduction modulo the j-th power of the maximal ideal, as a code of O_j.
    pub fn reduce(&self, a: Elem, j: u32) -> Elem {
        if j >= self.desc.level {
            a
        } else {
            a % self.q.pow(j)
        }
    }

    /// The j-th uniformizer digit (field code for F_q[t], integer digit for Z/p^i).
    #[inline]
    pub fn digit(&self, a: Elem, j: u32) -> u32 {
        (a / self.q.pow(j)) % self.q
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        (0..self.desc.level).map(|j| self.digit(a, j)).collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        pack(&d[..d.len().min(self.desc.level as usize)], self.q)
    }

    pub fn residue(&self, a: Elem) -> u32 {
        a % self.q
    }

    /// Generators of the additive group.
    pub fn additive_generators(&self) -> Vec<Elem> {
        match self.desc.kind {
            RingKind::Unramified0 => vec![1 % self.size],
            RingKind::EqualChar => (0..self.desc.level)
                .flat_map(|j| (0..self.desc.k).map(move |m| (j, m)))
                .map(|(j, m)| self.desc.p.pow(m) * self.q.pow(j))
                .collect(),
        }
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.desc.p == 2 {
            return a ^ b;
        }
        let d: Vec<u32> = (0..self.desc.level)
            .map(|j| self.field.add(self.digit(a, j), self.digit(b, j)))
            .collect();
        pack(&d, self.q)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let l = self.desc.level as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut out = vec![0u32; l];
        for i in 0..l {
            if da[i] == 0 {
                continue;
            }
            for j in 0..l - i {
                out[i + j] = self.field.add(out[i + j], self.field.mul(da[i], db[j]));
            }
        }
        pack(&out, self.q)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.desc.kind {
            RingKind::Unramified0 => {
                let s = a + b;
                if s >= self.size {
                    s - self.size
                } else {
                    s
                }
            }
            RingKind::EqualChar => {
                if self.desc.p == 2 {
                    a ^ b
                } else if self.desc.level == 1 {
                    self.field.add(a, b)
                } else if !self.add_t.is_empty() {
                    self.add_t[a as usize * self.size as usize + b as usize]
                } else {
                    self.add_slow(a, b)
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.desc.kind {
            RingKind::Unramified0 => (self.size - a) % self.size,
            RingKind::EqualChar => {
                if self.desc.p == 2 {
                    a
                } else if self.desc.level == 1 {
                    self.field.neg(a)
                } else {
                    let d: Vec<u32> = self.digits(a).iter().map(|&x| self.field.neg(x)).collect();
                    pack(&d, self.q)
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match self.desc.kind {
            RingKind::Unramified0 => ((a as u64 * b as u64) % self.size as u64) as u32,
            RingKind::EqualChar => {
                if self.desc.level == 1 {
                    self.field.mul(a, b)
                } else if !self.mul_t.is_empty() {
                    self.mul_t[a as usize * self.size as usize + b as usize]
                } else {
                    self.mul_slow(a, b)
                }
            }
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut acc, mut b) = (self.one(), a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Largest j with a in p^j; `level` for zero.
    pub fn valuation(&self, a: Elem) -> u32 {
        if a == 0 {
            return self.desc.level;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.q == 0 {
            a /= self.q;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        a % self.q != 0
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        Ok(self.pow(a, self.unit_count() - 1))
    }

    pub fn elem_to_json(&self, a: Elem) -> Value {
        match self.desc.kind {
            RingKind::EqualChar => Value::from(self.digits(a)),
            RingKind::Unramified0 => Value::from(a.to_string()),
        }
    }

    /// Parses a coefficient array (F_q[t]) or a decimal string/integer (Z/p^i).
    pub fn elem_from_json(&self, v: &Value, field: &str) -> Result<Elem> {
        let bad = |reason: String| Error::Malformed {
            field: field.to_string(),
            reason,
        };
        match (self.desc.kind, v) {
            (RingKind::EqualChar, Value::Array(xs)) => {
                if xs.len() > self.desc.level as usize {
                    return Err(bad(format!("more than {} coefficients", self.desc.level)));
                }
                let mut d = Vec::with_capacity(xs.len());
                for x in xs {
                    let c = x.as_u64().filter(|&c| c < self.q as u64);
                    d.push(c.ok_or_else(|| {
                        bad(format!(
                            "coefficient {x} is not a field code below {}",
                            self.q
                        ))
                    })? as u32);
                }
                Ok(self.from_digits(&d))
            }
            (RingKind::Unramified0, Value::String(s)) => {
                let n: i64 = s
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("{s:?} is not an integer")))?;
                Ok(n.rem_euclid(self.size as i64) as u32)
            }
            (RingKind::Unramified0, Value::Number(n)) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| bad(format!("{n} is not an integer")))?;
                Ok(n.rem_euclid(self.size as i64) as u32)
            }
            _ => Err(bad(
                "expected a coefficient array for Fq rings or a decimal string for Zp rings".into(),
            )),
        }
    }
}
