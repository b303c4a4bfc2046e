//! Divisibility criteria for `gcd(x^(q-1)+1, S_q(x))`.
//!
//! With `q - 1 = d f`, `d` odd and `4 | f`, the all-ones polynomial
//! `g(x) = x^(d-1) + ... + 1` divides the gcd iff
//! `I_d(1) = -d (mod 4)` and `I_d(alpha^-t) = 0 (mod 4)` for `1 <= t < d`
//! ([`lemma5_condition`]). The original corollary replaced the negation of
//! that test by a condition quantified over the whole unit group
//! ([`cor4_original_condition`]); a *divergence* is a `q` where both hold.
//! The corrected statements are checked by [`corrected_corollary_verdict`]
//! and [`corrected_theorem_verdict`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::charsums::{CyclotomicContext, JacobsthalTable, UnitGroup};
use crate::error::{Error, Result};
use crate::field::PrimePowerField;
use crate::gf2poly::Gf2Poly;
use crate::sequence::{s2_polynomial, LinearComplexityResult, SlceSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Pass,
    Fail,
    NotApplicable,
}

impl TriState {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::NotApplicable => "not_applicable",
        }
    }
}

fn x_plus_one() -> Gf2Poly {
    Gf2Poly::from_u64(0b11)
}

/// `q - 1 = 2^k r` and whether `q` meets the corollary's hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplicabilityProfile {
    pub q: u64,
    pub k: u32,
    pub r: u64,
    pub r_is_odd_prime: bool,
    pub two_primitive_mod_r: bool,
    /// `k >= 2`, `r` an odd prime and 2 a primitive root mod `r`.
    pub applicable: bool,
}

impl ApplicabilityProfile {
    pub fn new(q: u64) -> Result<Self> {
        let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        let (k, r) = arith::split_two_power(q - 1);
        let r_is_odd_prime = r > 2 && arith::is_prime(r);
        let two_primitive_mod_r =
            r_is_odd_prime && arith::multiplicative_order(2, r) == Some(r - 1);
        Ok(Self {
            q,
            k,
            r,
            r_is_odd_prime,
            two_primitive_mod_r,
            applicable: k >= 2 && two_primitive_mod_r,
        })
    }
}

/// `q = x^2 + 4y^2` with `x = 1 (mod 4)`, `y > 0` and `gcd(x, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperRepresentation {
    pub x: i64,
    pub y: u64,
}

impl ProperRepresentation {
    /// Exhaustive search over `y`; defined only when `p = 1 (mod 4)`.
    pub fn find(q: u64) -> Result<Self> {
        let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p % 4 != 1 {
            return Err(Error::NotApplicable(format!(
                "proper representation needs p = 1 mod 4, got p = {p}"
            )));
        }
        for y in 1..=arith::isqrt(q / 4) {
            let rest = q - 4 * y * y;
            let x = arith::isqrt(rest);
            if x * x != rest || arith::gcd(x, q) != 1 {
                continue;
            }
            let x = if x % 4 == 1 { x as i64 } else { -(x as i64) };
            let rep = Self { x, y };
            assert!(rep.verify(q), "proper representation failed re-check");
            return Ok(rep);
        }
        Err(Error::NotFound(q))
    }

    pub fn verify(&self, q: u64) -> bool {
        let x2 = (self.x as i128).pow(2);
        x2 + 4 * (self.y as i128).pow(2) == q as i128
            && self.x.rem_euclid(4) == 1
            && arith::gcd(self.x.unsigned_abs(), q) == 1
    }
}

fn check_lemma5_preconditions(ctx: &CyclotomicContext) -> Result<()> {
    if ctx.d().is_multiple_of(2) || !ctx.f().is_multiple_of(4) {
        return Err(Error::PreconditionViolated(format!(
            "need d odd and 4 | f, got d = {}, f = {}",
            ctx.d(),
            ctx.f()
        )));
    }
    Ok(())
}

/// `I_d(1) = -d (mod 4)` and `I_d(alpha^-t) = 0 (mod 4)` for all `1 <= t < d`.
pub fn lemma5_condition(ctx: &CyclotomicContext) -> Result<bool> {
    check_lemma5_preconditions(ctx)?;
    let d = ctx.d() as i64;
    if (ctx.jacobsthal(ctx.field().one()) + d).rem_euclid(4) != 0 {
        return Ok(false);
    }
    Ok((1..d).all(|t| ctx.jacobsthal(ctx.group().alpha_pow(-t)).rem_euclid(4) == 0))
}

/// The literal negation of [`lemma5_condition`].
pub fn eq6_condition(ctx: &CyclotomicContext) -> Result<bool> {
    lemma5_condition(ctx).map(|holds| !holds)
}

fn check_corollary_context(ctx: &CyclotomicContext, profile: &ApplicabilityProfile) -> Result<()> {
    if !profile.applicable {
        return Err(Error::NotApplicable(format!(
            "q = {} is not of the form 2^k r + 1 with k >= 2, r an odd prime, 2 primitive mod r",
            profile.q
        )));
    }
    if ctx.field().q() != profile.q || ctx.d() != profile.r {
        return Err(Error::NotApplicable(format!(
            "context must have q = {} and d = r = {}",
            profile.q, profile.r
        )));
    }
    Ok(())
}

/// The original corollary's condition: some `a` in `<alpha^r>` has
/// `I_r(a) != -r (mod 4)`, or some `a` outside it has `I_r(a) != 0 (mod 4)`.
pub fn cor4_original_condition(
    ctx: &CyclotomicContext,
    profile: &ApplicabilityProfile,
) -> Result<bool> {
    check_corollary_context(ctx, profile)?;
    let r = ctx.d() as i64;
    let table = JacobsthalTable::build(ctx);
    let holds = table.iter().any(|(a, v)| {
        if ctx.in_power_subgroup(a) {
            (v + r).rem_euclid(4) != 0
        } else {
            v.rem_euclid(4) != 0
        }
    });
    Ok(holds)
}

/// `Some(i)` when `gcd = (x+1)^i`, `i >= 0`.
fn xplus1_power(gcd: &Gf2Poly) -> Option<u32> {
    let i = gcd.multiplicity(&x_plus_one()).ok()?;
    (x_plus_one().pow(i as u64) == *gcd).then_some(i)
}

/// Multiplicity checks on `x + 1`: exactly 1 when `q = 5 (mod 8)`; at least
/// 2 when `q = 1 (mod 8)`, and below 4 when `p = 1 (mod 4)` and `f + y/2` is
/// odd, with `f = (q-1)/8` and `y` from the proper representation.
pub fn lemma4_check(field: &PrimePowerField, lc: &LinearComplexityResult) -> (TriState, TriState) {
    let q = field.q();
    let mult = lc
        .gcd_poly
        .multiplicity(&x_plus_one())
        .expect("gcd is nonzero");
    let part_a = if q % 8 == 5 {
        TriState::from_bool(mult == 1)
    } else {
        TriState::NotApplicable
    };
    let part_b = if q % 8 == 1 {
        let mut ok = mult >= 2;
        if field.p() % 4 == 1 {
            let rep = ProperRepresentation::find(q).expect("exists for p = 1 mod 4");
            debug_assert_eq!(rep.y % 2, 0);
            if ((q - 1) / 8 + rep.y / 2) % 2 == 1 {
                ok &= mult < 4;
            }
        }
        TriState::from_bool(ok)
    } else {
        TriState::NotApplicable
    };
    (part_a, part_b)
}

/// Checks the corrected corollary's biconditional at one `q`:
/// `gcd = (x+1)^i` for some `1 <= i <= 2^k` iff the negated criterion holds.
pub fn corrected_corollary_verdict(
    ctx: &CyclotomicContext,
    profile: &ApplicabilityProfile,
    lc: &LinearComplexityResult,
) -> Result<bool> {
    check_corollary_context(ctx, profile)?;
    let eq6 = eq6_condition(ctx)?;
    let pure =
        matches!(xplus1_power(&lc.gcd_poly), Some(i) if i >= 1 && (i as u64) <= 1 << profile.k);
    Ok(pure == eq6)
}

/// Forward direction of the corrected theorem. When the negated criterion
/// holds: `k = 2` needs feedback `(x^(q-1)+1)/(x+1)`; `k >= 3` needs
/// `(x^(q-1)+1)/(x+1)^i` with `i >= 2`, and `i <= 4` when `(2^(k-2) r + y)/2`
/// is odd. `k = 1` and a failing criterion are not applicable.
pub fn corrected_theorem_verdict(
    ctx: &CyclotomicContext,
    profile: &ApplicabilityProfile,
    lc: &LinearComplexityResult,
    rep: Option<&ProperRepresentation>,
) -> Result<TriState> {
    if !profile.two_primitive_mod_r || profile.k < 1 {
        return Err(Error::NotApplicable(format!(
            "q = {} needs r an odd prime with 2 primitive mod r",
            profile.q
        )));
    }
    if profile.k == 1 {
        return Ok(TriState::NotApplicable);
    }
    check_corollary_context(ctx, profile)?;
    if !eq6_condition(ctx)? {
        return Ok(TriState::NotApplicable);
    }
    let n = (profile.q - 1) as usize;
    let Some(i) = xplus1_power(&lc.gcd_poly) else {
        return Ok(TriState::Fail);
    };
    debug_assert_eq!(
        &lc.feedback_poly * &x_plus_one().pow(i as u64),
        Gf2Poly::x_pow_plus_one(n)
    );
    if profile.k == 2 {
        return Ok(TriState::from_bool(i == 1));
    }
    let mut ok = i >= 2;
    if let Some(rep) = rep {
        let s = (1u64 << (profile.k - 2)) * profile.r + rep.y;
        if s.is_multiple_of(2) && (s / 2) % 2 == 1 {
            ok &= i <= 4;
        }
    }
    Ok(TriState::from_bool(ok))
}

/// Every criterion evaluated at one `q`. Fields are `None` where the
/// criterion's hypotheses do not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremVerdict {
    pub profile: ApplicabilityProfile,
    /// Order of the cyclotomy the criteria use: `r`, when `k >= 2` and `r > 1`.
    pub d: Option<u64>,
    pub f: Option<u64>,
    pub lemma5_holds: Option<bool>,
    pub eq6_holds: Option<bool>,
    pub cor4_original_holds: Option<bool>,
    pub s2_is_zero: Option<bool>,
    pub g_divides_gcd: Option<bool>,
    pub gcd_is_power_of_xplus1: bool,
    pub xplus1_multiplicity: u32,
    /// Both the divisibility criterion and the original corollary's
    /// condition hold, so the original corollary is contradicted here.
    pub divergence: bool,
    pub lemma4a: TriState,
    pub lemma4b: TriState,
    pub corrected_corollary: TriState,
    pub corrected_theorem: TriState,
    pub proper_representation: Option<ProperRepresentation>,
}

pub fn evaluate(
    group: Arc<UnitGroup>,
    seq: &SlceSequence,
    lc: &LinearComplexityResult,
) -> Result<TheoremVerdict> {
    let field = group.field().clone();
    let q = field.q();
    let profile = ApplicabilityProfile::new(q)?;
    let rep = ProperRepresentation::find(q).ok();
    let xplus1_multiplicity = lc.gcd_poly.multiplicity(&x_plus_one())?;
    let gcd_is_power_of_xplus1 = matches!(xplus1_power(&lc.gcd_poly), Some(i) if i >= 1);
    let (lemma4a, lemma4b) = lemma4_check(&field, lc);

    let mut verdict = TheoremVerdict {
        profile: profile.clone(),
        d: None,
        f: None,
        lemma5_holds: None,
        eq6_holds: None,
        cor4_original_holds: None,
        s2_is_zero: None,
        g_divides_gcd: None,
        gcd_is_power_of_xplus1,
        xplus1_multiplicity,
        divergence: false,
        lemma4a,
        lemma4b,
        corrected_corollary: TriState::NotApplicable,
        corrected_theorem: TriState::NotApplicable,
        proper_representation: rep,
    };
    if profile.k < 2 || profile.r < 3 {
        return Ok(verdict);
    }
    let ctx = CyclotomicContext::new(group, profile.r)?;
    let lemma5 = lemma5_condition(&ctx)?;
    let g = Gf2Poly::all_ones(profile.r as usize)?;
    verdict.d = Some(ctx.d());
    verdict.f = Some(ctx.f());
    verdict.lemma5_holds = Some(lemma5);
    verdict.eq6_holds = Some(!lemma5);
    verdict.s2_is_zero = Some(s2_polynomial(seq.bits(), profile.r as usize)?.is_zero());
    verdict.g_divides_gcd = Some(g.divides(&lc.gcd_poly));
    if profile.applicable {
        let cor4 = cor4_original_condition(&ctx, &profile)?;
        verdict.cor4_original_holds = Some(cor4);
        verdict.divergence = lemma5 && cor4;
        verdict.corrected_corollary =
            TriState::from_bool(corrected_corollary_verdict(&ctx, &profile, lc)?);
        verdict.corrected_theorem = corrected_theorem_verdict(&ctx, &profile, lc, rep.as_ref())?;
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsums::jacobsthal_i;
    use crate::field::DEFAULT_MAX_Q;
    use crate::sequence::analyze_lc;

    fn group(q: u64) -> Arc<UnitGroup> {
        Arc::new(UnitGroup::canonical(
            PrimePowerField::from_order(q, DEFAULT_MAX_Q).unwrap(),
        ))
    }

    fn full(q: u64) -> (Arc<UnitGroup>, SlceSequence, LinearComplexityResult) {
        let g = group(q);
        let seq = SlceSequence::from_group(&g);
        let lc = analyze_lc(&seq).unwrap();
        (g, seq, lc)
    }

    /// Criterion evaluated with direct-summation Jacobsthal sums.
    fn lemma5_oracle(g: &UnitGroup, d: u64) -> bool {
        let d_i = d as i64;
        let one = g.field().one();
        (jacobsthal_i(g, d, one).unwrap() + d_i).rem_euclid(4) == 0
            && (1..d_i).all(|t| jacobsthal_i(g, d, g.alpha_pow(-t)).unwrap().rem_euclid(4) == 0)
    }

    #[test]
    fn applicability_examples() {
        let p = ApplicabilityProfile::new(49).unwrap();
        assert_eq!((p.k, p.r, p.applicable), (4, 3, true));
        let p = ApplicabilityProfile::new(193).unwrap();
        assert_eq!((p.k, p.r, p.applicable), (6, 3, true));
        let p = ApplicabilityProfile::new(29).unwrap();
        assert_eq!(
            (p.k, p.r, p.r_is_odd_prime, p.two_primitive_mod_r),
            (2, 7, true, false)
        );
        assert!(!p.applicable);
        let p = ApplicabilityProfile::new(17).unwrap();
        assert_eq!((p.k, p.r, p.applicable), (4, 1, false));
        assert_eq!(ApplicabilityProfile::new(48), Err(Error::NotPrimePower(48)));
    }

    #[test]
    fn applicable_implies_irreducible_all_ones() {
        for q in (5..2000u64).filter(|&q| matches!(arith::prime_power(q), Some((p, _)) if p != 2)) {
            let p = ApplicabilityProfile::new(q).unwrap();
            assert_eq!(q - 1, (1u64 << p.k) * p.r);
            if p.two_primitive_mod_r {
                assert!(Gf2Poly::all_ones(p.r as usize)
                    .unwrap()
                    .is_irreducible()
                    .unwrap());
            }
        }
    }

    #[test]
    fn proper_representation_examples() {
        assert_eq!(
            ProperRepresentation::find(13).unwrap(),
            ProperRepresentation { x: -3, y: 1 }
        );
        assert_eq!(
            ProperRepresentation::find(29).unwrap(),
            ProperRepresentation { x: 5, y: 1 }
        );
        assert_eq!(
            ProperRepresentation::find(17).unwrap(),
            ProperRepresentation { x: 1, y: 2 }
        );
        assert!(matches!(
            ProperRepresentation::find(49),
            Err(Error::NotApplicable(_))
        ));
        assert_eq!(
            ProperRepresentation::find(50),
            Err(Error::NotPrimePower(50))
        );
    }

    #[test]
    fn proper_representation_exists_and_is_unique() {
        for q in
            (5..5000u64).filter(|&q| matches!(arith::prime_power(q), Some((p, _)) if p % 4 == 1))
        {
            let rep = ProperRepresentation::find(q).unwrap();
            assert!(rep.verify(q));
            let all = (1..=arith::isqrt(q / 4))
                .filter(|y| {
                    let rest = q - 4 * y * y;
                    let x = arith::isqrt(rest);
                    x * x == rest && arith::gcd(x, q) == 1
                })
                .count();
            assert_eq!(all, 1, "q={q}");
        }
    }

    #[test]
    fn lemma5_examples() {
        for q in [49u64, 193] {
            let ctx = CyclotomicContext::new(group(q), 3).unwrap();
            assert!(lemma5_condition(&ctx).unwrap(), "q={q}");
            assert!(!eq6_condition(&ctx).unwrap());
        }
        let g = group(13);
        let ctx = CyclotomicContext::new(g.clone(), 3).unwrap();
        assert_eq!(lemma5_condition(&ctx).unwrap(), lemma5_oracle(&g, 3));
        assert!(!lemma5_condition(&ctx).unwrap());
        assert!(eq6_condition(&ctx).unwrap());
        let ctx = CyclotomicContext::new(group(13), 4).unwrap();
        assert!(matches!(
            lemma5_condition(&ctx),
            Err(Error::PreconditionViolated(_))
        ));
        let ctx = CyclotomicContext::new(group(31), 3).unwrap();
        assert!(matches!(
            lemma5_condition(&ctx),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn lemma5_matches_direct_summation() {
        for q in [13u64, 29, 37, 41, 49, 61, 73, 81, 101, 121, 125, 169] {
            let g = group(q);
            for d in (1..q).filter(|d| (q - 1) % d == 0 && d % 2 == 1 && ((q - 1) / d) % 4 == 0) {
                let ctx = CyclotomicContext::new(g.clone(), d).unwrap();
                assert_eq!(
                    lemma5_condition(&ctx).unwrap(),
                    lemma5_oracle(&g, d),
                    "q={q} d={d}"
                );
            }
        }
    }

    #[test]
    fn cor4_original_examples() {
        for q in [49u64, 193, 769] {
            let g = group(q);
            let profile = ApplicabilityProfile::new(q).unwrap();
            let ctx = CyclotomicContext::new(g, 3).unwrap();
            assert!(cor4_original_condition(&ctx, &profile).unwrap(), "q={q}");
        }
        let profile = ApplicabilityProfile::new(29).unwrap();
        let ctx = CyclotomicContext::new(group(29), 7).unwrap();
        assert!(matches!(
            cor4_original_condition(&ctx, &profile),
            Err(Error::NotApplicable(_))
        ));
        let profile = ApplicabilityProfile::new(49).unwrap();
        let ctx = CyclotomicContext::new(group(49), 1).unwrap();
        assert!(matches!(
            cor4_original_condition(&ctx, &profile),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn lemma4_examples() {
        let (g, _, lc) = full(5);
        assert_eq!(
            lemma4_check(g.field(), &lc),
            (TriState::Pass, TriState::NotApplicable)
        );
        let (g, _, lc) = full(49);
        assert_eq!(
            lemma4_check(g.field(), &lc),
            (TriState::NotApplicable, TriState::Pass)
        );
        let (g, _, lc) = full(17);
        assert_eq!(lc.gcd_poly.multiplicity(&x_plus_one()).unwrap(), 2);
        assert_eq!(
            lemma4_check(g.field(), &lc),
            (TriState::NotApplicable, TriState::Pass)
        );
        let (g, _, lc) = full(7);
        assert_eq!(
            lemma4_check(g.field(), &lc),
            (TriState::NotApplicable, TriState::NotApplicable)
        );
    }

    #[test]
    fn corrected_statements() {
        for q in [49u64, 193, 13] {
            let (g, _, lc) = full(q);
            let profile = ApplicabilityProfile::new(q).unwrap();
            let ctx = CyclotomicContext::new(g, profile.r).unwrap();
            assert!(
                corrected_corollary_verdict(&ctx, &profile, &lc).unwrap(),
                "q={q}"
            );
        }
        let (g, _, lc) = full(13);
        assert_eq!(lc.gcd_poly, x_plus_one());
        assert_eq!(lc.linear_complexity, 11);
        let profile = ApplicabilityProfile::new(13).unwrap();
        let ctx = CyclotomicContext::new(g, 3).unwrap();
        let rep = ProperRepresentation::find(13).unwrap();
        assert_eq!(
            corrected_theorem_verdict(&ctx, &profile, &lc, Some(&rep)).unwrap(),
            TriState::Pass
        );

        let (g, _, lc) = full(53);
        let profile = ApplicabilityProfile::new(53).unwrap();
        assert!(profile.applicable);
        let ctx = CyclotomicContext::new(g, 13).unwrap();
        let rep = ProperRepresentation::find(53).unwrap();
        let verdict = corrected_theorem_verdict(&ctx, &profile, &lc, Some(&rep)).unwrap();
        if eq6_condition(&ctx).unwrap() {
            assert_eq!(verdict, TriState::Pass);
            assert_eq!(lc.gcd_poly, x_plus_one());
        } else {
            assert_eq!(verdict, TriState::NotApplicable);
        }

        let (g, _, lc) = full(49);
        let profile = ApplicabilityProfile::new(49).unwrap();
        let ctx = CyclotomicContext::new(g, 3).unwrap();
        assert_eq!(
            corrected_theorem_verdict(&ctx, &profile, &lc, None).unwrap(),
            TriState::NotApplicable
        );
    }

    #[test]
    fn evaluate_q49() {
        let (g, seq, lc) = full(49);
        let v = evaluate(g, &seq, &lc).unwrap();
        assert_eq!(v.d, Some(3));
        assert_eq!(v.f, Some(16));
        assert_eq!(v.lemma5_holds, Some(true));
        assert_eq!(v.eq6_holds, Some(false));
        assert_eq!(v.cor4_original_holds, Some(true));
        assert_eq!(v.s2_is_zero, Some(true));
        assert_eq!(v.g_divides_gcd, Some(true));
        assert!(v.divergence);
        assert!(!v.gcd_is_power_of_xplus1);
        assert_eq!(v.xplus1_multiplicity, 6);
        assert_eq!(v.corrected_corollary, TriState::Pass);
        assert!(v.proper_representation.is_none());
    }

    #[test]
    fn evaluate_non_applicable() {
        let (g, seq, lc) = full(17);
        let v = evaluate(g, &seq, &lc).unwrap();
        assert_eq!(v.d, None);
        assert_eq!(v.lemma5_holds, None);
        assert!(!v.divergence);
        assert_eq!(
            v.proper_representation,
            Some(ProperRepresentation { x: 1, y: 2 })
        );
        let (g, seq, lc) = full(29);
        let v = evaluate(g, &seq, &lc).unwrap();
        assert_eq!(v.d, Some(7));
        assert!(v.lemma5_holds.is_some());
        assert_eq!(v.cor4_original_holds, None);
        assert_eq!(v.corrected_corollary, TriState::NotApplicable);
    }
}
