//! Finite fields `GF(p^k)` for `k <= 4`.
//!
//! An element `c_0 + c_1 a + ... + c_{k-1} a^{k-1}` (with `a` a root of the
//! modulus) is encoded as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! The modulus is the monic irreducible polynomial of degree `k` whose lower
//! coefficients, read as such an integer, are smallest.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest supported field order; multiplication goes through log tables.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// Lower coefficients `c_0..c_{k-1}` of the monic modulus.
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<Elem>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.k, self.modulus_string())
    }
}

/// Serialized field description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: String,
}

fn is_prime(n: u64) -> bool {
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

/// Splits `q = p^k`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q >= 2 has a divisor");
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, k))
}

/// Polynomials over `F_p` as coefficient vectors, low degree first.
fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while a.len() > db {
        let top = *a.last().expect("non-empty");
        if top != 0 {
            let f = top * lead_inv % p;
            let shift = a.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - f * bi % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn pow_mod(mut b: u32, mut e: u32, m: u32) -> u32 {
    let mut r = 1u64;
    let mut b64 = u64::from(b % m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b64 % u64::from(m);
        }
        b64 = b64 * b64 % u64::from(m);
        e >>= 1;
    }
    b = r as u32;
    b
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn is_irreducible(lower: &[u32], p: u32) -> bool {
    let k = lower.len();
    let mut f = lower.to_vec();
    f.push(1);
    for deg in 1..=k / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut g = digits(code, p, deg);
            g.push(1);
            if poly_rem(f.clone(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if !(1..=4).contains(&k) {
            return Err(Error::InvalidField(format!(
                "extension degree {k} outside 1..=4"
            )));
        }
        let q = u64::from(p).pow(k);
        if q > u64::from(MAX_ORDER) {
            return Err(Error::InvalidField(format!(
                "order {q} exceeds {MAX_ORDER}"
            )));
        }
        let q = q as u32;
        let modulus = (0..p.pow(k))
            .map(|code| digits(code, p, k as usize))
            .find(|lower| k == 1 || is_irreducible(lower, p))
            .expect("irreducible polynomials exist in every degree");
        let mut field = Self {
            p,
            k,
            q,
            modulus,
            log: Vec::new(),
            exp: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    pub fn from_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q)?;
        Self::new(p, k)
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let (p, k) = (self.p, self.k as usize);
        let da = digits(a, p, k);
        let db = digits(b, p, k);
        let mut prod = vec![0u32; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let mut m = self.modulus.clone();
        m.push(1);
        let rem = if k == 1 {
            vec![prod[0] % p]
        } else {
            poly_rem(prod, &m, p)
        };
        rem.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        for g in 2..q.max(3) {
            let g = if q == 2 { 1 } else { g };
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x = 1;
            let mut seen = vec![false; q as usize];
            let mut ok = true;
            for _ in 0..q - 1 {
                if seen[x as usize] {
                    ok = false;
                    break;
                }
                seen[x as usize] = true;
                exp.push(x);
                x = self.slow_mul(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
            if q == 2 {
                break;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            k: self.k,
            modulus: self.modulus_string(),
        }
    }

    /// The modulus as text, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = vec![format!("x^{}", self.k)];
        if self.k == 1 {
            terms[0] = "x".into();
        }
        for i in (0..self.k as usize).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join(" + ")
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(i64::from(self.p)) as u32
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[l as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let l = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Some(self.exp[l as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l =
            (u64::from(self.log[a as usize]) * (e % u64::from(self.q - 1))) % u64::from(self.q - 1);
        self.exp[l as usize]
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, u64::from(self.p))
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.exp.get(1).copied().unwrap_or(1)
    }

    pub fn format(&self, a: Elem) -> String {
        a.to_string()
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        let v: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        if !self.contains(v) {
            return Err(Error::Parse(format!("element {v} outside GF({})", self.q)));
        }
        Ok(v)
    }
}
