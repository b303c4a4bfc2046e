//! Quadratic character, cyclotomic classes and numbers, and the Jacobsthal
//! sums
//!
//! ```text
//! I_n(a) = sum_{c in F_q*} eta(c^n + a)
//! H_n(a) = sum_{c in F_q*} eta(c) eta(c^n + a)
//! ```
//!
//! Single sums are evaluated by direct summation over the unit group.
//! [`JacobsthalTable`] fills a whole table of `I_d`/`H_d` values, `d | q-1`,
//! in `O(q)` by exploiting that `c -> c^d` is `d`-to-1 onto the subgroup of
//! `d`-th powers and that multiplying `a` by `alpha^(dk)` only changes a
//! sign.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimePowerField};

/// `eta(beta)` by Euler's criterion, `beta^((q-1)/2)`.
pub fn quadratic_character(field: &PrimePowerField, beta: FieldElement) -> i8 {
    if beta.is_zero() {
        return 0;
    }
    if field.pow(beta, (field.q() - 1) / 2) == field.one() {
        1
    } else {
        -1
    }
}

/// `eta` tabulated over all of `F_q`, indexed by encoding.
#[derive(Debug, Clone)]
pub struct QuadraticCharacter {
    table: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn new(field: &PrimePowerField) -> Self {
        let table = (0..field.q())
            .map(|e| quadratic_character(field, field.element(e).expect("in range")))
            .collect();
        Self { table }
    }

    #[inline]
    pub fn eval(&self, beta: FieldElement) -> i8 {
        self.table[beta.encoding() as usize]
    }
}

/// `F_q*` presented as the cyclic group generated by a primitive `alpha`,
/// with exponent and discrete-log tables.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    field: PrimePowerField,
    alpha: FieldElement,
    exp: Vec<FieldElement>,
    log: Vec<u32>,
    chi: QuadraticCharacter,
}

impl UnitGroup {
    pub fn new(field: PrimePowerField, alpha: FieldElement) -> Result<Self> {
        if alpha.encoding() >= field.q() || !field.is_primitive(alpha) {
            return Err(Error::NotPrimitive(alpha.encoding()));
        }
        let n = (field.q() - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; field.q() as usize];
        let mut x = field.one();
        for i in 0..n {
            exp.push(x);
            log[x.encoding() as usize] = i as u32;
            x = field.mul(x, alpha);
        }
        let chi = QuadraticCharacter::new(&field);
        Ok(Self {
            field,
            alpha,
            exp,
            log,
            chi,
        })
    }

    /// Uses the primitive element with the smallest encoding.
    pub fn canonical(field: PrimePowerField) -> Self {
        let alpha = field.find_primitive();
        Self::new(field, alpha).expect("canonical generator is primitive")
    }

    pub fn field(&self) -> &PrimePowerField {
        &self.field
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// `q - 1`.
    pub fn order(&self) -> u64 {
        self.exp.len() as u64
    }

    /// `alpha^i` for any integer `i`, negative exponents included.
    #[inline]
    pub fn alpha_pow(&self, i: i64) -> FieldElement {
        let n = self.exp.len() as i64;
        self.exp[i.rem_euclid(n) as usize]
    }

    /// Discrete logarithm to base `alpha`; `None` for zero.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        match self.log[a.encoding() as usize] {
            u32::MAX => None,
            l => Some(l as u64),
        }
    }

    #[inline]
    pub fn eta(&self, beta: FieldElement) -> i8 {
        self.chi.eval(beta)
    }

    pub fn character(&self) -> &QuadraticCharacter {
        &self.chi
    }
}

/// `I_n(a)` by direct summation over the `q - 1` units.
pub fn jacobsthal_i(group: &UnitGroup, n: u64, a: FieldElement) -> Result<i64> {
    if n < 1 {
        return Err(Error::InvalidArgs("Jacobsthal sums need n >= 1".into()));
    }
    let field = group.field();
    let order = group.order();
    Ok((0..order)
        .map(|j| {
            let cn = group.alpha_pow(((j as u128 * n as u128) % order as u128) as i64);
            group.eta(field.add(cn, a)) as i64
        })
        .sum())
}

/// `H_n(a)` by direct summation over the `q - 1` units.
pub fn jacobsthal_h(group: &UnitGroup, n: u64, a: FieldElement) -> Result<i64> {
    if n < 1 {
        return Err(Error::InvalidArgs("Jacobsthal sums need n >= 1".into()));
    }
    let field = group.field();
    let order = group.order();
    Ok((0..order)
        .map(|j| {
            let c = group.alpha_pow(j as i64);
            let cn = group.alpha_pow(((j as u128 * n as u128) % order as u128) as i64);
            (group.eta(c) * group.eta(field.add(cn, a))) as i64
        })
        .sum())
}

/// Order-`d` cyclotomy of `F_q`: `q - 1 = d f` and the classes
/// `C_i = { alpha^(kd+i) : 0 <= k < f }`.
#[derive(Debug, Clone)]
pub struct CyclotomicContext {
    group: Arc<UnitGroup>,
    d: u64,
    f: u64,
}

impl CyclotomicContext {
    pub fn new(group: Arc<UnitGroup>, d: u64) -> Result<Self> {
        let n = group.order();
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, n });
        }
        Ok(Self { group, d, f: n / d })
    }

    pub fn group(&self) -> &UnitGroup {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<UnitGroup> {
        Arc::clone(&self.group)
    }

    pub fn field(&self) -> &PrimePowerField {
        self.group.field()
    }

    pub fn alpha(&self) -> FieldElement {
        self.group.alpha()
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    fn check_index(&self, i: u64) -> Result<()> {
        if i >= self.d {
            return Err(Error::IndexOutOfRange {
                index: i as usize,
                len: self.d as usize,
            });
        }
        Ok(())
    }

    pub fn class(&self, i: u64) -> Result<Vec<FieldElement>> {
        self.check_index(i)?;
        Ok((0..self.f)
            .map(|k| self.group.alpha_pow((k * self.d + i) as i64))
            .collect())
    }

    /// Index of the class containing a unit.
    pub fn class_of(&self, a: FieldElement) -> Option<u64> {
        self.group.log(a).map(|l| l % self.d)
    }

    /// `(l, m)_d = |(C_l + 1) ∩ C_m|`.
    pub fn cyclotomic_number(&self, l: u64, m: u64) -> Result<u64> {
        self.check_index(m)?;
        let field = self.field();
        Ok(self
            .class(l)?
            .into_iter()
            .filter(|&c| self.class_of(field.add(c, field.one())) == Some(m))
            .count() as u64)
    }

    /// Membership in `<alpha^d>`, the subgroup of order `f`, tested as `a^f = 1`.
    pub fn in_power_subgroup(&self, a: FieldElement) -> bool {
        !a.is_zero() && self.field().pow(a, self.f) == self.field().one()
    }

    /// `I_d(a)`, summing over the `f` distinct values of `c^d`, each hit `d` times.
    pub fn jacobsthal(&self, a: FieldElement) -> i64 {
        let field = self.field();
        let s: i64 = (0..self.f)
            .map(|j| {
                self.group
                    .eta(field.add(self.group.alpha_pow((j * self.d) as i64), a))
                    as i64
            })
            .sum();
        self.d as i64 * s
    }

    /// `H_d(a)`: writing `c = alpha^(j + f s)` gives
    /// `H_d(a) = (sum_s (-1)^(f s)) * sum_j (-1)^j eta(alpha^(dj) + a)`.
    pub fn jacobsthal_h(&self, a: FieldElement) -> i64 {
        let field = self.field();
        let weight = if self.f.is_multiple_of(2) {
            self.d as i64
        } else {
            (self.d % 2) as i64
        };
        let s: i64 = (0..self.f)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * self
                    .group
                    .eta(field.add(self.group.alpha_pow((j * self.d) as i64), a))
                    as i64
            })
            .sum();
        weight * s
    }
}

/// `I_d(a)` (and optionally `H_d(a)`) for every unit `a`, where `d` is the
/// order of the owning [`CyclotomicContext`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobsthalTable {
    n: u64,
    /// Indexed by encoding; slot 0 is unused.
    i_values: Vec<i64>,
    h_values: Option<Vec<i64>>,
}

impl JacobsthalTable {
    pub fn build(ctx: &CyclotomicContext) -> Self {
        Self::build_inner(ctx, false)
    }

    pub fn build_with_h(ctx: &CyclotomicContext) -> Self {
        Self::build_inner(ctx, true)
    }

    fn build_inner(ctx: &CyclotomicContext, with_h: bool) -> Self {
        let group = ctx.group();
        let (d, f) = (ctx.d(), ctx.f());
        let q = ctx.field().q() as usize;
        // I_d(a alpha^(dk)) = (-1)^(dk) I_d(a), H_d(a alpha^(dk)) = (-1)^(k(d+1)) H_d(a)
        let i_base: Vec<i64> = (0..d)
            .map(|t| ctx.jacobsthal(group.alpha_pow(t as i64)))
            .collect();
        let h_base: Option<Vec<i64>> = with_h.then(|| {
            (0..d)
                .map(|t| ctx.jacobsthal_h(group.alpha_pow(t as i64)))
                .collect()
        });
        let mut i_values = vec![0i64; q];
        let mut h_values = with_h.then(|| vec![0i64; q]);
        for t in 0..d {
            for k in 0..f {
                let a = group.alpha_pow((t + d * k) as i64).encoding() as usize;
                let i_sign = if (d * k) % 2 == 0 { 1 } else { -1 };
                i_values[a] = i_sign * i_base[t as usize];
                if let (Some(h), Some(base)) = (h_values.as_mut(), h_base.as_ref()) {
                    let h_sign = if (k * (d + 1)) % 2 == 0 { 1 } else { -1 };
                    h[a] = h_sign * base[t as usize];
                }
            }
        }
        Self {
            n: d,
            i_values,
            h_values,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn get(&self, a: FieldElement) -> Option<i64> {
        if a.is_zero() {
            return None;
        }
        self.i_values.get(a.encoding() as usize).copied()
    }

    pub fn h(&self, a: FieldElement) -> Option<i64> {
        if a.is_zero() {
            return None;
        }
        self.h_values.as_ref()?.get(a.encoding() as usize).copied()
    }

    /// `I_n(a) mod 4` in `0..4`.
    pub fn residue_mod4(&self, a: FieldElement) -> Option<u8> {
        self.get(a).map(|v| v.rem_euclid(4) as u8)
    }

    /// `(a, I_n(a))` over all units in encoding order.
    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, i64)> + '_ {
        self.i_values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(e, &v)| (FieldElement::from_raw(e as u64), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use crate::field::DEFAULT_MAX_Q;

    fn odd_prime_powers(max: u64) -> impl Iterator<Item = u64> {
        (3..=max).filter(|&q| matches!(arith::prime_power(q), Some((p, _)) if p != 2))
    }

    fn group(q: u64) -> Arc<UnitGroup> {
        Arc::new(UnitGroup::canonical(
            PrimePowerField::from_order(q, DEFAULT_MAX_Q).unwrap(),
        ))
    }

    /// Brute-force oracle straight from the definitions, using only field
    /// arithmetic and Euler's criterion.
    fn brute_i(field: &PrimePowerField, n: u64, a: FieldElement) -> i64 {
        field
            .units()
            .map(|c| quadratic_character(field, field.add(field.pow(c, n), a)) as i64)
            .sum()
    }

    fn brute_h(field: &PrimePowerField, n: u64, a: FieldElement) -> i64 {
        field
            .units()
            .map(|c| {
                (quadratic_character(field, c)
                    * quadratic_character(field, field.add(field.pow(c, n), a)))
                    as i64
            })
            .sum()
    }

    #[test]
    fn character_examples() {
        let f7 = PrimePowerField::new(7, 1).unwrap();
        assert_eq!(quadratic_character(&f7, f7.one()), 1);
        assert_eq!(quadratic_character(&f7, f7.zero()), 0);
        assert_eq!(quadratic_character(&f7, f7.element(3).unwrap()), -1);
        let squares: Vec<u64> = f7
            .units()
            .filter(|&a| quadratic_character(&f7, a) == 1)
            .map(FieldElement::encoding)
            .collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }

    #[test]
    fn character_is_parity_of_discrete_log() {
        for q in [5, 9, 13, 25, 27, 49, 81, 121, 125] {
            let g = group(q);
            for i in 0..g.order() {
                let expected = if i % 2 == 0 { 1 } else { -1 };
                assert_eq!(g.eta(g.alpha_pow(i as i64)), expected, "q={q} i={i}");
            }
        }
    }

    #[test]
    fn character_multiplicative_and_balanced() {
        for q in odd_prime_powers(361) {
            let g = group(q);
            let field = g.field();
            let units: Vec<FieldElement> = field.units().collect();
            for &b in &units {
                for &c in &units {
                    assert_eq!(g.eta(field.mul(b, c)), g.eta(b) * g.eta(c), "q={q}");
                }
            }
            let total: i64 = units.iter().map(|&b| g.eta(b) as i64).sum();
            assert_eq!(total, 0);
            let squares = units.iter().filter(|&&b| g.eta(b) == 1).count() as u64;
            assert_eq!(squares, (q - 1) / 2);
        }
    }

    #[test]
    fn classes_partition_units() {
        for q in [13u64, 49, 61, 81] {
            let g = group(q);
            for d in (1..q).filter(|d| (q - 1) % d == 0) {
                let ctx = CyclotomicContext::new(g.clone(), d).unwrap();
                let mut seen = vec![0u32; q as usize];
                for i in 0..d {
                    let class = ctx.class(i).unwrap();
                    assert_eq!(class.len() as u64, ctx.f());
                    for a in class {
                        seen[a.encoding() as usize] += 1;
                    }
                }
                assert_eq!(seen[0], 0);
                assert!(seen[1..].iter().all(|&c| c == 1), "q={q} d={d}");
            }
        }
        let ctx = CyclotomicContext::new(group(13), 1).unwrap();
        assert_eq!(ctx.class(0).unwrap().len(), 12);
        assert!(matches!(ctx.class(1), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(
            CyclotomicContext::new(group(13), 5).unwrap_err(),
            Error::NotADivisor { d: 5, n: 12 }
        );
    }

    #[test]
    fn cyclotomic_numbers() {
        // squares mod 13: {1,3,4,9,10,12}; c+1 also a square for c in {3, 9}
        let ctx = CyclotomicContext::new(group(13), 2).unwrap();
        assert_eq!(ctx.cyclotomic_number(0, 0).unwrap(), 2);
        assert!(ctx.cyclotomic_number(0, 2).is_err());
        for q in odd_prime_powers(361) {
            let g = group(q);
            for d in (1..q).filter(|d| (q - 1) % d == 0) {
                let ctx = CyclotomicContext::new(g.clone(), d).unwrap();
                let mut total = 0;
                for l in 0..d {
                    for m in 0..d {
                        let n = ctx.cyclotomic_number(l, m).unwrap();
                        assert!(n <= ctx.f());
                        total += n;
                    }
                }
                assert_eq!(total, q - 2, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn direct_sums_match_brute_force() {
        for q in [5u64, 7, 9, 13, 25, 27, 49] {
            let g = group(q);
            let field = g.field();
            for n in 1..=7 {
                for a in (0..q).map(|e| field.element(e).unwrap()) {
                    assert_eq!(
                        jacobsthal_i(&g, n, a).unwrap(),
                        brute_i(field, n, a),
                        "q={q} n={n}"
                    );
                    assert_eq!(
                        jacobsthal_h(&g, n, a).unwrap(),
                        brute_h(field, n, a),
                        "q={q} n={n}"
                    );
                }
            }
        }
        assert!(jacobsthal_i(&group(7), 0, PrimePowerField::new(7, 1).unwrap().one()).is_err());
    }

    #[test]
    fn i1_is_minus_eta() {
        for q in odd_prime_powers(361) {
            let g = group(q);
            for a in g.field().units() {
                assert_eq!(jacobsthal_i(&g, 1, a).unwrap(), -(g.eta(a) as i64), "q={q}");
            }
        }
    }

    #[test]
    fn h_examples() {
        let g = group(13);
        for a in g.field().units() {
            assert_eq!(jacobsthal_h(&g, 1, a).unwrap(), -1);
        }
        for q in [13u64, 25, 49] {
            let g = group(q);
            let zero = g.field().zero();
            for n in 1..6u64 {
                let expected = if n % 2 == 1 { q as i64 - 1 } else { 0 };
                assert_eq!(jacobsthal_h(&g, n, zero).unwrap(), expected);
            }
        }
    }

    #[test]
    fn i3_of_one_at_listed_orders() {
        // Direct summation; the value does not depend on alpha or the modulus.
        for q in [49u64, 193] {
            let g = group(q);
            let one = g.field().one();
            assert_eq!(jacobsthal_i(&g, 3, one).unwrap(), -3, "q={q}");
            assert_eq!(brute_i(g.field(), 3, one), -3, "q={q}");
        }
    }

    #[test]
    fn table_matches_direct_summation() {
        for q in odd_prime_powers(200) {
            let g = group(q);
            for d in (1..q).filter(|d| (q - 1) % d == 0) {
                let ctx = CyclotomicContext::new(g.clone(), d).unwrap();
                let table = JacobsthalTable::build_with_h(&ctx);
                assert_eq!(table.n(), d);
                for a in g.field().units() {
                    let i = jacobsthal_i(&g, d, a).unwrap();
                    assert_eq!(table.get(a), Some(i), "q={q} d={d}");
                    assert_eq!(
                        table.h(a),
                        Some(jacobsthal_h(&g, d, a).unwrap()),
                        "q={q} d={d}"
                    );
                    assert!(i.unsigned_abs() < q);
                }
                assert_eq!(table.get(g.field().zero()), None);
                assert_eq!(table.iter().count() as u64, q - 1);
            }
        }
    }

    #[test]
    fn table_patterns_for_d3() {
        for q in [49u64, 193] {
            let ctx = CyclotomicContext::new(group(q), 3).unwrap();
            let table = JacobsthalTable::build(&ctx);
            for (a, v) in table.iter() {
                if ctx.in_power_subgroup(a) {
                    assert!(matches!((v + 3).rem_euclid(4), 0 | 2), "q={q}");
                } else {
                    assert_eq!(v.rem_euclid(4), 0, "q={q}");
                }
            }
        }
    }

    #[test]
    fn subgroup_membership_matches_log() {
        for q in [49u64, 193, 81] {
            let g = group(q);
            for d in (1..q).filter(|d| (q - 1) % d == 0) {
                let ctx = CyclotomicContext::new(g.clone(), d).unwrap();
                for a in g.field().units() {
                    assert_eq!(
                        ctx.in_power_subgroup(a),
                        g.log(a).unwrap().is_multiple_of(d)
                    );
                }
            }
        }
    }

    #[test]
    fn unit_group_rejects_non_primitive() {
        let f = PrimePowerField::new(7, 1).unwrap();
        let two = f.element(2).unwrap();
        assert_eq!(UnitGroup::new(f, two).unwrap_err(), Error::NotPrimitive(2));
    }
}
