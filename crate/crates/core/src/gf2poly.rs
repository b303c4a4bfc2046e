//! Polynomials over GF(2), bit-packed into 64-bit words.
//!
//! Bit `i` of the packed representation is the coefficient of `x^i`. The word
//! vector never carries trailing zero words, so two polynomials are equal iff
//! their word vectors are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;
const ODD_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

/// Seed for the equal-degree splitting sweep.
const SPLIT_SEED: u64 = 0x0005_eed0_f6f2;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

/// `dst ^= src << shift`, with `dst` long enough to hold the result.
fn xor_shifted_into(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / 64;
    let bs = shift % 64;
    if bs == 0 {
        for (i, &w) in src.iter().enumerate() {
            dst[ws + i] ^= w;
        }
    } else {
        for (i, &w) in src.iter().enumerate() {
            dst[ws + i] ^= w << bs;
            let hi = w >> (64 - bs);
            if hi != 0 {
                dst[ws + i + 1] ^= hi;
            }
        }
    }
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn x() -> Self {
        Self::from_u64(2)
    }

    /// Polynomial whose coefficients are the bits of `bits`.
    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.trim();
        p
    }

    pub fn monomial(n: usize) -> Self {
        let mut p = Self::zero();
        p.flip(n);
        p
    }

    /// Sum of `x^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exponents: I) -> Self {
        let mut p = Self::zero();
        for e in exponents {
            p.flip(e);
        }
        p.trim();
        p
    }

    /// `bits[i]` becomes the coefficient of `x^i`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words)
    }

    /// `x^d-1 + ... + x + 1`.
    pub fn all_ones(d: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidArgs("all_ones requires d >= 1".into()));
        }
        let mut words = vec![u64::MAX; d / 64];
        if !d.is_multiple_of(64) {
            words.push((1u64 << (d % 64)) - 1);
        }
        Ok(Self::from_words(words))
    }

    /// `x^n + 1`, which over GF(2) is also `x^n - 1`.
    pub fn x_pow_plus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.flip(0);
        p.trim();
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    fn flip(&mut self, i: usize) {
        let w = i / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// `self ^= other * x^shift`.
    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        if other.is_zero() {
            return;
        }
        let need = shift / 64 + other.words.len() + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        xor_shifted_into(&mut self.words, &other.words, shift);
        self.trim();
    }

    pub fn shl(&self, n: usize) -> Self {
        let mut out = Self::zero();
        out.xor_shifted(self, n);
        out
    }

    pub fn square(&self) -> Self {
        let mut words = vec![0u64; self.words.len() * 2];
        for (i, &w) in self.words.iter().enumerate() {
            words[2 * i] = spread(w as u32);
            words[2 * i + 1] = spread((w >> 32) as u32);
        }
        Self::from_words(words)
    }

    /// Quotient and remainder of `self / divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZeroPoly)?;
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            quo.flip(dr - db);
            rem.xor_shifted(divisor, dr - db);
        }
        quo.trim();
        Ok((quo, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        let db = divisor.degree().ok_or(Error::DivisionByZeroPoly)?;
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            rem.xor_shifted(divisor, dr - db);
        }
        Ok(rem)
    }

    /// Quotient of a division known to be exact.
    fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Whether `self` divides `f`. The zero polynomial divides only zero.
    pub fn divides(&self, f: &Self) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Largest `k` with `p^k | self`.
    pub fn multiplicity(&self, p: &Self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::InvalidArgs("multiplicity of a factor in 0".into()));
        }
        if p.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidArgs("multiplicity needs deg(p) >= 1".into()));
        }
        let mut k = 0;
        let mut f = self.clone();
        loop {
            let (q, r) = f.div_rem(p)?;
            if !r.is_zero() {
                return Ok(k);
            }
            f = q;
            k += 1;
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self> {
        (self * other).rem(modulus)
    }

    /// Formal derivative. Over GF(2) only odd exponents survive.
    pub fn derivative(&self) -> Self {
        let words = self.words.iter().map(|w| w & ODD_BITS).collect();
        let odd = Self::from_words(words);
        if odd.is_zero() {
            return odd;
        }
        let mut out = vec![0u64; odd.words.len()];
        for (i, &w) in odd.words.iter().enumerate() {
            out[i] |= w >> 1;
            if i > 0 {
                out[i - 1] |= w << 63;
            }
        }
        Self::from_words(out)
    }

    /// Square root, defined exactly when every odd coefficient is zero.
    pub fn sqrt(&self) -> Option<Self> {
        if self.words.iter().any(|w| w & ODD_BITS != 0) {
            return None;
        }
        let mut words = vec![0u64; self.words.len().div_ceil(2)];
        for (i, &w) in self.words.iter().enumerate() {
            let half = compress(w & EVEN_BITS) as u64;
            words[i / 2] |= half << (32 * (i % 2));
        }
        Some(Self::from_words(words))
    }

    /// Hex of the little-endian byte image: byte 0 carries `x^0..x^7`.
    pub fn to_hex(&self) -> String {
        let mut bytes: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        while bytes.last() == Some(&0) {
            bytes.pop();
        }
        if bytes.is_empty() {
            return "00".into();
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.is_empty() || !s.len().is_multiple_of(2) || !s.is_ascii() {
            return Err(Error::InvalidArgs(format!("bad polynomial hex {s:?}")));
        }
        let mut words = vec![0u64; (s.len() / 2).div_ceil(8)];
        for (i, chunk) in s.as_bytes().chunks(2).enumerate() {
            let byte = std::str::from_utf8(chunk)
                .ok()
                .and_then(|c| u8::from_str_radix(c, 16).ok())
                .ok_or_else(|| Error::InvalidArgs(format!("bad polynomial hex {s:?}")))?;
            words[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        Ok(Self::from_words(words))
    }

    /// Rabin's test: `f` of degree `n` is irreducible iff `x^(2^n) = x mod f`
    /// and `gcd(x^(2^(n/l)) - x, f) = 1` for every prime `l | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => {
                return Err(Error::InvalidArgs(
                    "irreducibility is undefined for constants".into(),
                ))
            }
        };
        if n == 1 {
            return Ok(true);
        }
        let primes = prime_divisors(n);
        let checkpoints: Vec<usize> = primes.iter().map(|l| n / l).collect();
        let x = Self::x();
        let mut h = x.clone();
        for i in 1..=n {
            h = h.square().rem(self)?;
            if checkpoints.contains(&i) && !(&h + &x).gcd(self)?.is_one() {
                return Ok(false);
            }
        }
        Ok(h == x)
    }

    /// Complete factorization into irreducibles: square-free decomposition,
    /// then distinct-degree, then trace-based equal-degree splitting.
    pub fn factorize(&self) -> Result<FactorizationResult> {
        if self.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidArgs(
                "factorize needs a polynomial of degree >= 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut acc: BTreeMap<Gf2Poly, u32> = BTreeMap::new();
        let mut parts = Vec::new();
        squarefree_parts(self, 1, &mut parts);
        for (part, mult) in parts {
            for (block, d) in distinct_degree_parts(&part) {
                for factor in equal_degree_split(&block, d, &mut rng) {
                    *acc.entry(factor).or_default() += mult;
                }
            }
        }
        let factors: Vec<(Gf2Poly, u32)> = acc.into_iter().collect();
        let certified = factors
            .iter()
            .all(|(f, _)| f.is_irreducible().unwrap_or(false));
        let result = FactorizationResult { factors, certified };
        debug_assert_eq!(&result.product(), self);
        Ok(result)
    }
}

/// Interleave zero bits: bit `i` of `w` moves to bit `2i`.
fn spread(w: u32) -> u64 {
    let mut x = w as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & EVEN_BITS;
    x
}

/// Inverse of [`spread`] on words with only even bits set.
fn compress(w: u64) -> u32 {
    let mut x = w & EVEN_BITS;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut l = 2;
    while l * l <= n {
        if n.is_multiple_of(l) {
            out.push(l);
            while n.is_multiple_of(l) {
                n /= l;
            }
        }
        l += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn squarefree_parts(f: &Gf2Poly, scale: u32, out: &mut Vec<(Gf2Poly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let df = f.derivative();
    if df.is_zero() {
        let root = f.sqrt().expect("zero derivative implies a square");
        squarefree_parts(&root, scale * 2, out);
        return;
    }
    let mut c = f.gcd(&df).expect("f is nonzero");
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("w is nonzero");
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = c.sqrt().expect("leftover cofactor is a square");
        squarefree_parts(&root, scale * 2, out);
    }
}

/// Splits a square-free `f` into blocks whose irreducible factors all share
/// one degree.
fn distinct_degree_parts(f: &Gf2Poly) -> Vec<(Gf2Poly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = Gf2Poly::x();
    let mut h = x.clone();
    let mut i = 0;
    while let Some(n) = f.degree() {
        if n < 2 * (i + 1) {
            break;
        }
        i += 1;
        h = h.square().rem(&f).expect("f is nonzero");
        let g = (&h + &x).gcd(&f).expect("f is nonzero");
        if !g.is_one() {
            f = f.div_exact(&g);
            h = h.rem(&f).expect("f is nonzero");
            out.push((g, i));
        }
    }
    if let Some(n) = f.degree() {
        if n >= 1 {
            out.push((f, n));
        }
    }
    out
}

fn random_below(degree: usize, rng: &mut ChaCha8Rng) -> Gf2Poly {
    let mut words: Vec<u64> = (0..degree.div_ceil(64)).map(|_| rng.gen()).collect();
    if !degree.is_multiple_of(64) {
        if let Some(top) = words.last_mut() {
            *top &= (1u64 << (degree % 64)) - 1;
        }
    }
    Gf2Poly::from_words(words)
}

/// Splits a square-free product of degree-`d` irreducibles using the trace
/// map `a + a^2 + ... + a^(2^(d-1))`.
fn equal_degree_split(f: &Gf2Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Gf2Poly> {
    let n = f.degree().expect("nonzero block");
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a = random_below(n, rng);
        let mut s = a.clone();
        let mut t = a;
        for _ in 1..d {
            s = s.square().rem(f).expect("f is nonzero");
            t = &t + &s;
        }
        let g = t.gcd(f).expect("f is nonzero");
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&f.div_exact(&g), d, rng));
            return out;
        }
    }
}

impl Ord for Gf2Poly {
    /// Degree first, then integer value of the bit encoding.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Gf2Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Gf2Poly::from_words(words)
    }
}

impl Add for Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: Gf2Poly) -> Gf2Poly {
        &self + &rhs
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    /// Shift-and-xor carry-less product.
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || rhs.is_zero() {
            return Gf2Poly::zero();
        }
        let (sparse, dense) = if self.weight() <= rhs.weight() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = vec![0u64; self.words.len() + rhs.words.len() + 1];
        for e in sparse.exponents() {
            xor_shifted_into(&mut words, &dense.words, e);
        }
        Gf2Poly::from_words(words)
    }
}

impl Mul for Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: Gf2Poly) -> Gf2Poly {
        &self * &rhs
    }
}

impl fmt::Display for Gf2Poly {
    /// Descending powers, e.g. `x^2+x+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut exps: Vec<usize> = self.exponents().collect();
        exps.reverse();
        for (i, e) in exps.into_iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

/// Irreducible factors with multiplicities, sorted by (degree, encoding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResult {
    pub factors: Vec<(Gf2Poly, u32)>,
    /// Every listed factor passed [`Gf2Poly::is_irreducible`].
    pub certified: bool,
}

impl FactorizationResult {
    /// The empty factorization of the constant 1.
    pub fn trivial() -> Self {
        Self {
            factors: Vec::new(),
            certified: true,
        }
    }

    pub fn product(&self) -> Gf2Poly {
        self.factors
            .iter()
            .fold(Gf2Poly::one(), |acc, (f, k)| &acc * &f.pow(*k as u64))
    }

    /// Total degree, `sum(deg * multiplicity)`.
    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, k)| f.degree().unwrap_or(0) * *k as usize)
            .sum()
    }

    pub fn multiplicity_of(&self, p: &Gf2Poly) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| f == p)
            .map_or(0, |(_, k)| *k)
    }

    /// Factors as `(hex, multiplicity)` pairs.
    pub fn to_hex_pairs(&self) -> Vec<(String, u32)> {
        self.factors.iter().map(|(f, k)| (f.to_hex(), *k)).collect()
    }
}

impl fmt::Display for FactorizationResult {
    /// `(x+1)^6*(x^2+x+1)^2`; the empty product renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "({p})")?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}
