//! SLCE sequences and their linear complexity.
//!
//! For a primitive `alpha` of `F_q`, the sequence of period `N = q - 1` is
//! `s_i = 1` iff `alpha^i + 1` is a non-square. Its feedback polynomial is
//! `(x^N + 1) / gcd(x^N + 1, S(x))` with `S(x) = sum s_i x^i`, and its linear
//! complexity is `N - deg gcd`. Berlekamp-Massey over two periods is kept as
//! an independent check of the gcd route.

use crate::charsums::{quadratic_character, UnitGroup};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimePowerField};
use crate::gf2poly::{FactorizationResult, Gf2Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlceSequence {
    field: PrimePowerField,
    alpha: FieldElement,
    bits: Vec<bool>,
}

impl SlceSequence {
    pub fn generate(field: &PrimePowerField, alpha: FieldElement) -> Result<Self> {
        let group = UnitGroup::new(field.clone(), alpha)?;
        Ok(Self::from_group(&group))
    }

    pub fn from_group(group: &UnitGroup) -> Self {
        let field = group.field();
        let bits = (0..group.order())
            .map(|i| group.eta(field.add(group.alpha_pow(i as i64), field.one())) == -1)
            .collect();
        Self {
            field: field.clone(),
            alpha: group.alpha(),
            bits,
        }
    }

    pub fn field(&self) -> &PrimePowerField {
        &self.field
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `N = q - 1`.
    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `S_q(x)`.
    pub fn polynomial(&self) -> Gf2Poly {
        sequence_polynomial(&self.bits)
    }

    /// Recomputes every bit with Euler's criterion instead of the tables.
    pub fn verify(&self) -> bool {
        let f = &self.field;
        let mut x = f.one();
        self.bits.iter().all(|&b| {
            let ok = b == (quadratic_character(f, f.add(x, f.one())) == -1);
            x = f.mul(x, self.alpha);
            ok
        })
    }
}

/// `sum bits[i] x^i`.
pub fn sequence_polynomial(bits: &[bool]) -> Gf2Poly {
    Gf2Poly::from_bits(bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplexityResult {
    pub linear_complexity: usize,
    pub gcd_poly: Gf2Poly,
    pub feedback_poly: Gf2Poly,
    pub gcd_factors: FactorizationResult,
}

/// `(L, gcd)` for the periodic sequence with one period `bits`.
/// Accepts arbitrary bit patterns, including all zeros (`L = 0`).
pub fn periodic_linear_complexity(bits: &[bool]) -> (usize, Gf2Poly) {
    let n = bits.len();
    if n == 0 {
        return (0, Gf2Poly::one());
    }
    let gcd = Gf2Poly::x_pow_plus_one(n)
        .gcd(&sequence_polynomial(bits))
        .expect("x^N + 1 is nonzero");
    let deg = gcd.degree().expect("gcd of nonzero inputs");
    (n - deg, gcd)
}

pub fn analyze_lc(seq: &SlceSequence) -> Result<LinearComplexityResult> {
    let s = seq.polynomial();
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let modulus = Gf2Poly::x_pow_plus_one(seq.period());
    let gcd_poly = modulus.gcd(&s)?;
    let (feedback_poly, rest) = modulus.div_rem(&gcd_poly)?;
    debug_assert!(rest.is_zero());
    let gcd_factors = if gcd_poly.is_one() {
        FactorizationResult::trivial()
    } else {
        gcd_poly.factorize()?
    };
    Ok(LinearComplexityResult {
        linear_complexity: seq.period() - gcd_poly.degree().expect("nonzero gcd"),
        gcd_poly,
        feedback_poly,
        gcd_factors,
    })
}

fn pack(bits: impl Iterator<Item = bool>) -> Vec<u64> {
    let mut words = Vec::new();
    for (i, b) in bits.enumerate() {
        if i % 64 == 0 {
            words.push(0);
        }
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// 64 bits of `words` starting at bit `start`; bits past the end read as 0.
#[inline]
fn window(words: &[u64], start: usize) -> u64 {
    let w = start / 64;
    let b = start % 64;
    let lo = words.get(w).copied().unwrap_or(0);
    if b == 0 {
        return lo;
    }
    let hi = words.get(w + 1).copied().unwrap_or(0);
    (lo >> b) | (hi << (64 - b))
}

/// Shortest LFSR for a finite sequence over GF(2): returns its length `L`
/// and connection polynomial `c(x) = 1 + c_1 x + ... + c_L x^L`, with
/// `s_n = c_1 s_{n-1} + ... + c_L s_{n-L}` for `L <= n < len`.
pub fn berlekamp_massey(bits: &[bool]) -> (usize, Gf2Poly) {
    let total = bits.len();
    // bit j of `rev` is s_{total-1-j}, so s_{n-i} for i = 0.. is a contiguous run
    let rev = pack(bits.iter().rev().copied());
    let mut c = Gf2Poly::one();
    let mut b = Gf2Poly::one();
    let mut l = 0usize;
    let mut shift = 1usize;
    for n in 0..total {
        let start = total - 1 - n;
        let discrepancy = c.words().iter().enumerate().fold(0u32, |acc, (k, &cw)| {
            acc ^ (cw & window(&rev, start + 64 * k)).count_ones()
        }) & 1;
        if discrepancy == 0 {
            shift += 1;
        } else if 2 * l <= n {
            let prev = c.clone();
            c = &c + &b.shl(shift);
            l = n + 1 - l;
            b = prev;
            shift = 1;
        } else {
            c = &c + &b.shl(shift);
            shift += 1;
        }
    }
    (l, c)
}

/// Berlekamp-Massey over exactly two periods of a periodic sequence.
pub fn periodic_berlekamp_massey(period: &[bool]) -> (usize, Gf2Poly) {
    let doubled: Vec<bool> = period.iter().chain(period).copied().collect();
    berlekamp_massey(&doubled)
}

/// `S_2(x) = sum_{t<d} c_t x^t` with `c_t = s_t + s_{t+d} + ... (mod 2)`,
/// i.e. `S(x) mod (x^d + 1)`.
pub fn s2_polynomial(bits: &[bool], d: usize) -> Result<Gf2Poly> {
    let n = bits.len();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotADivisor {
            d: d as u64,
            n: n as u64,
        });
    }
    let coeffs: Vec<bool> = (0..d)
        .map(|t| bits.iter().skip(t).step_by(d).filter(|&&b| b).count() % 2 == 1)
        .collect();
    Ok(Gf2Poly::from_bits(&coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use crate::field::DEFAULT_MAX_Q;

    fn canonical(q: u64) -> SlceSequence {
        let f = PrimePowerField::from_order(q, DEFAULT_MAX_Q).unwrap();
        let alpha = f.find_primitive();
        SlceSequence::generate(&f, alpha).unwrap()
    }

    /// Brute-force oracle: smallest L admitting some recurrence of length L
    /// that reproduces the infinite periodic sequence.
    fn brute_lc(period: &[bool]) -> usize {
        let n = period.len();
        let s = |i: usize| period[i % n];
        for l in 0..=n {
            for taps in 0..(1u32 << l) {
                let ok = (0..2 * n).all(|i| {
                    let i = i + l;
                    let pred = (1..=l).fold(false, |acc, j| {
                        acc ^ ((taps >> (j - 1)) & 1 == 1 && s(i - j))
                    });
                    pred == s(i)
                });
                if ok {
                    return l;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn q5_sequence() {
        let f = PrimePowerField::new(5, 1).unwrap();
        let seq = SlceSequence::generate(&f, f.element(2).unwrap()).unwrap();
        assert_eq!(seq.bits(), &[true, true, false, false]);
        assert_eq!(seq.polynomial(), Gf2Poly::from_exponents([1, 0]));
        let lc = analyze_lc(&seq).unwrap();
        assert_eq!(lc.gcd_poly, Gf2Poly::from_exponents([1, 0]));
        assert_eq!(lc.linear_complexity, 3);
        assert_eq!(lc.feedback_poly, Gf2Poly::all_ones(4).unwrap());
    }

    #[test]
    fn non_primitive_generator_rejected() {
        let f = PrimePowerField::new(7, 1).unwrap();
        assert_eq!(
            SlceSequence::generate(&f, f.element(2).unwrap()).unwrap_err(),
            Error::NotPrimitive(2)
        );
    }

    #[test]
    fn weight_and_middle_bit() {
        for q in (3..2000u64).filter(|&q| matches!(arith::prime_power(q), Some((p, _)) if p != 2)) {
            let seq = canonical(q);
            assert_eq!(seq.period() as u64, q - 1);
            assert_eq!(seq.weight() as u64, (q - 1) / 2, "q={q}");
            assert!(!seq.bits()[((q - 1) / 2) as usize]);
            assert!(seq.polynomial().degree().unwrap() < seq.period());
        }
        assert!(canonical(49).verify());
        assert!(canonical(125).verify());
    }

    #[test]
    fn lc_invariants() {
        for q in [5u64, 13, 17, 25, 49, 81, 97, 193] {
            let lc = analyze_lc(&canonical(q)).unwrap();
            let n = (q - 1) as usize;
            assert_eq!(lc.linear_complexity, n - lc.gcd_poly.degree().unwrap());
            assert_eq!(&lc.feedback_poly * &lc.gcd_poly, Gf2Poly::x_pow_plus_one(n));
            assert_eq!(lc.feedback_poly.degree(), Some(lc.linear_complexity));
            assert_eq!(lc.gcd_factors.product(), lc.gcd_poly);
        }
    }

    #[test]
    fn q49_gcd() {
        let lc = analyze_lc(&canonical(49)).unwrap();
        let xp1 = Gf2Poly::from_exponents([1, 0]);
        let g = Gf2Poly::all_ones(3).unwrap();
        assert_eq!(lc.gcd_factors.factors, vec![(xp1, 6), (g, 2)]);
        assert_eq!(lc.linear_complexity, 38);
    }

    #[test]
    fn zero_sequence_rejected() {
        let mut seq = canonical(13);
        seq.bits.iter_mut().for_each(|b| *b = false);
        assert_eq!(analyze_lc(&seq).unwrap_err(), Error::ZeroSequence);
        assert!(sequence_polynomial(&[false; 12]).is_zero());
        assert_eq!(periodic_linear_complexity(&[false; 12]).0, 0);
    }

    #[test]
    fn berlekamp_massey_examples() {
        assert_eq!(berlekamp_massey(&[false; 10]), (0, Gf2Poly::one()));
        assert_eq!(
            berlekamp_massey(&[true; 10]),
            (1, Gf2Poly::from_exponents([1, 0]))
        );
        // s_n = s_{n-1} + s_{n-3}: taps give 1 + x + x^3
        let mut s = vec![true, false, false];
        for n in 3..40 {
            let v = s[n - 1] ^ s[n - 3];
            s.push(v);
        }
        assert_eq!(
            berlekamp_massey(&s),
            (3, Gf2Poly::from_exponents([3, 1, 0]))
        );
        // impulse at the end needs the full length
        let mut imp = vec![false; 70];
        imp[69] = true;
        assert_eq!(berlekamp_massey(&imp).0, 70);
    }

    #[test]
    fn berlekamp_massey_recurrence_holds() {
        let seq = canonical(97);
        let doubled: Vec<bool> = seq.bits().iter().chain(seq.bits()).copied().collect();
        let (l, c) = berlekamp_massey(&doubled);
        for n in l..doubled.len() {
            let pred = (1..=l).fold(false, |acc, j| acc ^ (c.coeff(j) && doubled[n - j]));
            assert_eq!(pred, doubled[n]);
        }
    }

    #[test]
    fn small_periods_match_exhaustive_search() {
        for period in 1..=8usize {
            for pattern in 0..(1u32 << period) {
                let bits: Vec<bool> = (0..period).map(|i| (pattern >> i) & 1 == 1).collect();
                let brute = brute_lc(&bits);
                assert_eq!(periodic_linear_complexity(&bits).0, brute, "{bits:?}");
                assert_eq!(periodic_berlekamp_massey(&bits).0, brute, "{bits:?}");
            }
        }
    }

    #[test]
    fn s2_examples() {
        let seq = canonical(49);
        assert!(s2_polynomial(seq.bits(), 3).unwrap().is_zero());
        assert_eq!(s2_polynomial(seq.bits(), 48).unwrap(), seq.polynomial());
        assert!(s2_polynomial(&[true; 12], 3).unwrap().is_zero());
        assert!(s2_polynomial(&[true; 12], 6).unwrap().is_zero());
        assert_eq!(
            s2_polynomial(seq.bits(), 5).unwrap_err(),
            Error::NotADivisor { d: 5, n: 48 }
        );
    }

    #[test]
    fn s2_is_reduction_mod_x_d_plus_one() {
        for q in [13u64, 49, 73, 97, 121] {
            let seq = canonical(q);
            let n = seq.period();
            for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
                let expected = seq.polynomial().rem(&Gf2Poly::x_pow_plus_one(d)).unwrap();
                assert_eq!(s2_polynomial(seq.bits(), d).unwrap(), expected);
            }
        }
    }
}
