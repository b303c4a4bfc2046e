//! Finite fields `F_q`, `q = p^m` with `p` an odd prime.
//!
//! Elements are stored by their canonical encoding `c_0 + c_1 p + ... +
//! c_{m-1} p^{m-1}`, where `c_i` is the coefficient of `x^i` in the
//! polynomial basis over `F_p[x]/(modulus)`. For `m = 1` the encoding is the
//! residue itself.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Largest field order accepted unless a caller passes its own bound.
pub const DEFAULT_MAX_Q: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    /// Caller guarantees `encoding < q` for the field it will be used with.
    pub(crate) fn from_raw(encoding: u64) -> Self {
        Self(encoding)
    }

    pub fn encoding(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerField {
    p: u64,
    m: u32,
    q: u64,
    /// Non-leading coefficients `c_0..c_{m-1}` of the monic modulus.
    modulus: Option<Vec<u64>>,
    /// Prime divisors of `q - 1`.
    unit_primes: Vec<u64>,
}

impl PrimePowerField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_bound(p, m, DEFAULT_MAX_Q)
    }

    pub fn with_bound(p: u64, m: u32, bound: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgs("extension degree must be >= 1".into()));
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        let q = p
            .checked_pow(m)
            .ok_or(Error::BoundExceeded { q: u64::MAX, bound })?;
        if q > bound {
            return Err(Error::BoundExceeded { q, bound });
        }
        let modulus = (m >= 2).then(|| first_irreducible(p, m as usize));
        let factors = arith::factorize(q - 1);
        let back: u64 = factors.iter().map(|(l, e)| l.pow(*e)).product();
        assert_eq!(back, q - 1, "factorization of q-1 does not remultiply");
        Ok(Self {
            p,
            m,
            q,
            modulus,
            unit_primes: factors.into_iter().map(|(l, _)| l).collect(),
        })
    }

    /// Field of order `q`, which must be an odd prime power within `bound`.
    pub fn from_order(q: u64, bound: u64) -> Result<Self> {
        let (p, m) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if q > bound {
            return Err(Error::BoundExceeded { q, bound });
        }
        Self::with_bound(p, m, bound)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    /// Encoding of the modulus' non-leading coefficients, `None` for prime fields.
    pub fn modulus_encoding(&self) -> Option<u64> {
        self.modulus.as_ref().map(|c| self.encode(c))
    }

    /// The modulus in descending powers, e.g. `x^2+1`.
    pub fn modulus_display(&self) -> Option<String> {
        let c = self.modulus.as_ref()?;
        let mut terms = vec![format!("x^{}", self.m)];
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coeff = if ci == 1 && i > 0 {
                String::new()
            } else {
                ci.to_string()
            };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        Some(terms.join("+"))
    }

    /// Prime divisors of the unit group order.
    pub fn unit_order_primes(&self) -> &[u64] {
        &self.unit_primes
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// `-1`, whose encoding is `p - 1` in every basis.
    pub fn minus_one(&self) -> FieldElement {
        FieldElement(self.p - 1)
    }

    pub fn element(&self, encoding: u64) -> Result<FieldElement> {
        if encoding >= self.q {
            return Err(Error::InvalidArgs(format!(
                "encoding {encoding} out of range for F_{}",
                self.q
            )));
        }
        Ok(FieldElement(encoding))
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElement> {
        if coords.len() != self.m as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgs(format!("bad coordinates {coords:?}")));
        }
        Ok(FieldElement(self.encode(coords)))
    }

    pub fn coords(&self, a: FieldElement) -> Vec<u64> {
        let mut x = a.0;
        (0..self.m)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> u64 {
        coords.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// Nonzero elements in ascending encoding order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.m == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += (x % self.p + y % self.p) % self.p * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += (self.p - x % self.p) % self.p * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let Some(modulus) = &self.modulus else {
            return FieldElement(a.0 * b.0 % self.p);
        };
        let p = self.p;
        let m = self.m as usize;
        let x = self.coords(a);
        let y = self.coords(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        // x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        for k in (m..2 * m - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &c) in modulus.iter().enumerate() {
                prod[k - m + i] = (prod[k - m + i] + (p - c) * top) % p;
            }
        }
        FieldElement(self.encode(&prod[..m]))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Multiplicative order of a unit; `None` for zero.
    pub fn order(&self, a: FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut ord = self.q - 1;
        for &l in &self.unit_primes {
            while ord.is_multiple_of(l) && self.pow(a, ord / l) == self.one() {
                ord /= l;
            }
        }
        Some(ord)
    }

    pub fn is_primitive(&self, a: FieldElement) -> bool {
        !a.is_zero()
            && self
                .unit_primes
                .iter()
                .all(|&l| self.pow(a, (self.q - 1) / l) != self.one())
    }

    /// The primitive element with the smallest encoding.
    pub fn find_primitive(&self) -> FieldElement {
        self.units()
            .find(|&a| self.is_primitive(a))
            .expect("the unit group of a finite field is cyclic")
    }

    /// Every primitive element, ascending.
    pub fn primitive_elements(&self) -> Vec<FieldElement> {
        self.units().filter(|&a| self.is_primitive(a)).collect()
    }

    pub fn display(&self, a: FieldElement) -> String {
        if self.m == 1 {
            return a.0.to_string();
        }
        let c: Vec<String> = self.coords(a).iter().map(u64::to_string).collect();
        format!("({})", c.join(","))
    }
}

impl fmt::Display for PrimePowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus_display() {
            Some(m) => write!(f, "F_{}^{} = F_{}[x]/({m})", self.p, self.m, self.p),
            None => write!(f, "F_{}", self.p),
        }
    }
}

/// Dense polynomials over `F_p`, lowest coefficient first, used only to pick
/// the field modulus.
mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let db = b.len() - 1;
        let lead_inv = crate::arith::mod_pow(b[db], p - 2, p);
        while a.len() > db {
            let top = a.len() - 1;
            let c = a[top] * lead_inv % p;
            for (i, &bi) in b.iter().enumerate() {
                let k = top - db + i;
                a[k] = (a[k] + (p - c) * bi % p) % p;
            }
            trim(&mut a);
        }
        a
    }

    pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, f, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, f, p);
        let mut acc = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, f, p);
            }
            base = mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Rabin's irreducibility test for a monic `f` of degree `m >= 2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        let x = vec![0, 1];
        let primes: Vec<usize> = crate::arith::factorize(m as u64)
            .into_iter()
            .map(|(l, _)| l as usize)
            .collect();
        let mut h = x.clone();
        for i in 1..=m {
            h = pow_mod(&h, p, f, p);
            if primes.iter().any(|l| m / l == i) {
                let g = gcd(&sub(&h, &x, p), f, p);
                if g.len() != 1 {
                    return false;
                }
            }
        }
        h == x
    }
}

/// The first monic irreducible of degree `m` when the non-leading
/// coefficients are enumerated by ascending encoding.
fn first_irreducible(p: u64, m: usize) -> Vec<u64> {
    (0..p.pow(m as u32))
        .map(|e| {
            let mut coeffs: Vec<u64> = (0..m).map(|i| e / p.pow(i as u32) % p).collect();
            coeffs.push(1);
            coeffs
        })
        .find(|f| fp_poly::is_irreducible(f, p))
        .map(|mut f| {
            f.pop();
            f
        })
        .expect("irreducible polynomials exist in every degree")
}
