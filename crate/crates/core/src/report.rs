//! Per-q analysis records, range scans, Jacobsthal dumps and the
//! counterexample checks behind `slce verify-claims`.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::charsums::{CyclotomicContext, JacobsthalTable, UnitGroup};
use crate::error::{Error, Result};
use crate::field::PrimePowerField;
use crate::gf2poly::{FactorizationResult, Gf2Poly};
use crate::sequence::{analyze_lc, periodic_berlekamp_massey, SlceSequence};
use crate::theorems::{self, ProperRepresentation, TriState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdFactor {
    pub poly: String,
    pub hex: String,
    pub degree: usize,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdFactors {
    /// e.g. `(x+1)^6*(x^2+x+1)^2`.
    pub rendered: String,
    pub factors: Vec<GcdFactor>,
}

impl From<&FactorizationResult> for GcdFactors {
    fn from(fact: &FactorizationResult) -> Self {
        Self {
            rendered: fact.to_string(),
            factors: fact
                .factors
                .iter()
                .map(|(p, e)| GcdFactor {
                    poly: p.to_string(),
                    hex: p.to_hex(),
                    degree: p.degree().unwrap_or(0),
                    multiplicity: *e,
                })
                .collect(),
        }
    }
}

impl GcdFactors {
    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|f| f.degree * f.multiplicity as usize)
            .sum()
    }

    /// `(hex, multiplicity)` pairs, for exact comparisons.
    pub fn pairs(&self) -> Vec<(String, u32)> {
        self.factors
            .iter()
            .map(|f| (f.hex.clone(), f.multiplicity))
            .collect()
    }
}

/// Wall-clock microseconds per pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub field_us: u64,
    pub sequence_us: u64,
    pub linear_complexity_us: u64,
    pub berlekamp_massey_us: u64,
    pub criteria_us: u64,
    pub total_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    pub k: u32,
    pub r: u64,
    pub d: Option<u64>,
    pub f: Option<u64>,
    pub applicable: bool,
    pub primitive_element: u64,
    /// Encoding of the defining polynomial; `None` for prime fields.
    pub modulus: Option<u64>,
    pub gcd_factors: GcdFactors,
    #[serde(rename = "L")]
    pub linear_complexity: usize,
    pub lemma5_holds: Option<bool>,
    pub eq6_holds: Option<bool>,
    pub cor4_original_holds: Option<bool>,
    pub s2_is_zero: Option<bool>,
    pub divergence: bool,
    pub lemma4a: TriState,
    pub lemma4b: TriState,
    pub proper_representation: Option<ProperRepresentation>,
    #[serde(rename = "bm_L")]
    pub bm_linear_complexity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

fn micros(since: Instant) -> u64 {
    since.elapsed().as_micros() as u64
}

/// Full pipeline for one `q`: field, primitive element (canonical unless
/// `alpha` names an encoding), sequence, linear complexity, criteria.
pub fn analyze(q: u64, alpha: Option<u64>, bound: u64) -> Result<AnalysisReport> {
    let start = Instant::now();
    let field = PrimePowerField::from_order(q, bound)?;
    let group = match alpha {
        Some(enc) => {
            let a = field.element(enc)?;
            UnitGroup::new(field, a)?
        }
        None => UnitGroup::canonical(field),
    };
    let group = Arc::new(group);
    let field_us = micros(start);

    let t = Instant::now();
    let seq = SlceSequence::from_group(&group);
    let sequence_us = micros(t);

    let t = Instant::now();
    let lc = analyze_lc(&seq)?;
    let linear_complexity_us = micros(t);

    let t = Instant::now();
    let (bm_linear_complexity, _) = periodic_berlekamp_massey(seq.bits());
    let berlekamp_massey_us = micros(t);

    let t = Instant::now();
    let verdict = theorems::evaluate(group.clone(), &seq, &lc)?;
    let criteria_us = micros(t);

    let field = group.field();
    Ok(AnalysisReport {
        q,
        p: field.p(),
        m: field.m(),
        k: verdict.profile.k,
        r: verdict.profile.r,
        d: verdict.d,
        f: verdict.f,
        applicable: verdict.profile.applicable,
        primitive_element: group.alpha().encoding(),
        modulus: field.modulus_encoding(),
        gcd_factors: GcdFactors::from(&lc.gcd_factors),
        linear_complexity: lc.linear_complexity,
        lemma5_holds: verdict.lemma5_holds,
        eq6_holds: verdict.eq6_holds,
        cor4_original_holds: verdict.cor4_original_holds,
        s2_is_zero: verdict.s2_is_zero,
        divergence: verdict.divergence,
        lemma4a: verdict.lemma4a,
        lemma4b: verdict.lemma4b,
        proper_representation: verdict.proper_representation,
        bm_linear_complexity,
        timings: Some(Timings {
            field_us,
            sequence_us,
            linear_complexity_us,
            berlekamp_massey_us,
            criteria_us,
            total_us: micros(start),
        }),
    })
}

/// `x^m + c_(m-1) x^(m-1) + ... + c_0` from the base-`p` encoding of the `c_i`.
fn modulus_poly(p: u64, m: u32, encoding: u64) -> String {
    let mut terms = vec![format!("x^{m}")];
    for i in (0..m).rev() {
        let c = encoding / p.pow(i) % p;
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i > 0 {
            String::new()
        } else {
            c.to_string()
        };
        terms.push(match i {
            0 => coeff,
            1 => format!("{coeff}x"),
            _ => format!("{coeff}x^{i}"),
        });
    }
    terms.join("+")
}

fn opt_bool(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "n/a",
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgs(format!("bad report JSON: {e}")))
    }

    /// `L = q - 1 - deg gcd` and `bm_L = L`.
    pub fn is_consistent(&self) -> bool {
        self.linear_complexity + self.gcd_factors.degree() == (self.q - 1) as usize
            && self.bm_linear_complexity == self.linear_complexity
    }

    pub fn render_text(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![
            ("q", self.q.to_string()),
            ("p^m", format!("{}^{}", self.p, self.m)),
            ("q-1 = 2^k * r", format!("2^{} * {}", self.k, self.r)),
            ("applicable", self.applicable.to_string()),
            ("primitive element", self.primitive_element.to_string()),
        ];
        if let Some(enc) = self.modulus {
            rows.push((
                "modulus",
                format!("{} (encoding {enc})", modulus_poly(self.p, self.m, enc)),
            ));
        }
        rows.extend([
            ("d", self.d.map_or("n/a".into(), |d| d.to_string())),
            ("f", self.f.map_or("n/a".into(), |f| f.to_string())),
            ("gcd", self.gcd_factors.rendered.clone()),
            ("L", self.linear_complexity.to_string()),
            ("bm_L", self.bm_linear_complexity.to_string()),
            ("lemma5_holds", opt_bool(self.lemma5_holds).into()),
            ("eq6_holds", opt_bool(self.eq6_holds).into()),
            (
                "cor4_original_holds",
                opt_bool(self.cor4_original_holds).into(),
            ),
            ("s2_is_zero", opt_bool(self.s2_is_zero).into()),
            ("divergence", self.divergence.to_string()),
            ("lemma4a", self.lemma4a.as_str().into()),
            ("lemma4b", self.lemma4b.as_str().into()),
            (
                "proper_representation",
                self.proper_representation
                    .map_or("n/a".into(), |r| format!("x = {}, y = {}", r.x, r.y)),
            ),
        ]);
        if let Some(t) = self.timings {
            rows.push((
                "total time",
                format!("{:.3} ms", t.total_us as f64 / 1000.0),
            ));
        }
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<22} {v}").unwrap();
        }
        out
    }
}

/// Odd prime powers in `[min, max]`.
pub fn odd_prime_powers(min: u64, max: u64) -> Vec<u64> {
    (min.max(3)..=max)
        .filter(|&q| matches!(arith::prime_power(q), Some((p, _)) if p != 2))
        .collect()
}

/// One report per odd prime power in `[min, max]`, sorted by `q`, with
/// timings stripped so the output depends only on the range.
pub fn divergence_scan(min: u64, max: u64, bound: u64) -> Result<Vec<AnalysisReport>> {
    if min > max {
        return Ok(Vec::new());
    }
    if min < 5 {
        return Err(Error::InvalidArgs(format!(
            "scan minimum must be at least 5, got {min}"
        )));
    }
    if max > bound {
        return Err(Error::BoundExceeded { q: max, bound });
    }
    let mut reports = odd_prime_powers(min, max)
        .into_par_iter()
        .map(|q| {
            analyze(q, None, bound).map(|mut r| {
                r.timings = None;
                r
            })
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| r.q);
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobsthalRow {
    pub a_encoding: u64,
    pub value: i64,
    pub mod4: u8,
    pub in_subgroup: bool,
}

/// `I_d(a)` for every unit `a`, in encoding order, with membership in the
/// subgroup of `f`-th roots of unity (`f = (q-1)/d`).
pub fn jacobsthal_rows(q: u64, d: u64, bound: u64) -> Result<Vec<JacobsthalRow>> {
    let field = PrimePowerField::from_order(q, bound)?;
    let group = Arc::new(UnitGroup::canonical(field));
    let ctx = CyclotomicContext::new(group, d)?;
    let table = JacobsthalTable::build(&ctx);
    Ok(table
        .iter()
        .map(|(a, v)| JacobsthalRow {
            a_encoding: a.encoding(),
            value: v,
            mod4: v.rem_euclid(4) as u8,
            in_subgroup: ctx.in_power_subgroup(a),
        })
        .collect())
}

pub fn jacobsthal_csv(rows: &[JacobsthalRow], mod4_only: bool) -> String {
    let mut out = String::new();
    if mod4_only {
        out.push_str("a_encoding,I_d_mod4,in_subgroup\n");
    } else {
        out.push_str("a_encoding,I_d,I_d_mod4,in_subgroup\n");
    }
    for row in rows {
        let flag = u8::from(row.in_subgroup);
        if mod4_only {
            writeln!(out, "{},{},{}", row.a_encoding, row.mod4, flag).unwrap();
        } else {
            writeln!(
                out,
                "{},{},{},{}",
                row.a_encoding, row.value, row.mod4, flag
            )
            .unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// Claimed value contradicts other claimed values for the same `q`;
    /// shown, but only counted as a failure in strict mode.
    KnownErratum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimRow {
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub status: ClaimStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub rows: Vec<ClaimRow>,
}

impl ClaimsReport {
    pub fn failures(&self, strict: bool) -> usize {
        self.rows
            .iter()
            .filter(|r| match r.status {
                ClaimStatus::Pass => false,
                ClaimStatus::Fail => true,
                ClaimStatus::KnownErratum => strict,
            })
            .count()
    }

    pub fn render_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.claim.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.rows {
            let status = match r.status {
                ClaimStatus::Pass => "PASS",
                ClaimStatus::Fail => "FAIL",
                ClaimStatus::KnownErratum => "ERRATUM",
            };
            writeln!(
                out,
                "{status:<8} {:<width$}  expected {}  computed {}",
                r.claim, r.expected, r.computed
            )
            .unwrap();
        }
        out
    }
}

struct Counterexample {
    q: u64,
    factors: &'static [(u64, u32)],
    linear_complexity: usize,
}

const COUNTEREXAMPLES: [Counterexample; 4] = [
    Counterexample {
        q: 49,
        factors: &[(0b11, 6), (0b111, 2)],
        linear_complexity: 38,
    },
    Counterexample {
        q: 193,
        factors: &[(0b11, 2), (0b111, 2)],
        linear_complexity: 186,
    },
    Counterexample {
        q: 769,
        factors: &[(0b11, 2), (0b111, 2)],
        linear_complexity: 762,
    },
    Counterexample {
        q: 12289,
        factors: &[(0b11, 2), (0b111, 2)],
        linear_complexity: 12282,
    },
];

/// Claimed `I_3(1)` at `q = 49`. It contradicts the claimed
/// residue pattern on `<alpha^3>` (which includes 1) and would make the
/// divisibility criterion fail, yet that criterion is claimed to hold.
const CLAIMED_I3_AT_ONE_Q49: i64 = 0;

const LEMMA4_SWEEP_MAX: u64 = 2000;

fn row(claim: String, expected: String, computed: String, status: ClaimStatus) -> ClaimRow {
    ClaimRow {
        claim,
        expected,
        computed,
        status,
    }
}

fn check(claim: String, expected: String, computed: String) -> ClaimRow {
    let status = if expected == computed {
        ClaimStatus::Pass
    } else {
        ClaimStatus::Fail
    };
    row(claim, expected, computed, status)
}

/// Counterexamples at `q = 49, 193, 769, 12289` plus the `(x+1)`-multiplicity
/// sweep over `q <= 2000`.
pub fn verify_claims(bound: u64) -> Result<ClaimsReport> {
    let mut rows = Vec::new();
    for ce in &COUNTEREXAMPLES {
        let rep = analyze(ce.q, None, bound)?;
        let q = ce.q;
        let expected = FactorizationResult {
            factors: ce
                .factors
                .iter()
                .map(|&(b, e)| (Gf2Poly::from_u64(b), e))
                .collect(),
            certified: true,
        };
        rows.push(check(
            format!("q={q} gcd factors"),
            expected.to_string(),
            rep.gcd_factors.rendered.clone(),
        ));
        rows.push(check(
            format!("q={q} L"),
            ce.linear_complexity.to_string(),
            rep.linear_complexity.to_string(),
        ));
        rows.push(check(
            format!("q={q} bm_L"),
            ce.linear_complexity.to_string(),
            rep.bm_linear_complexity.to_string(),
        ));
        rows.push(check(
            format!("q={q} lemma5_holds"),
            "true".into(),
            opt_bool(rep.lemma5_holds).into(),
        ));
        rows.push(check(
            format!("q={q} cor4_original_holds"),
            "true".into(),
            opt_bool(rep.cor4_original_holds).into(),
        ));
        rows.push(check(
            format!("q={q} divergence"),
            "true".into(),
            rep.divergence.to_string(),
        ));

        let field = PrimePowerField::from_order(q, bound)?;
        let group = Arc::new(UnitGroup::canonical(field));
        let ctx = CyclotomicContext::new(group, 3)?;
        let table = JacobsthalTable::build(&ctx);
        let (inside, outside): (Vec<_>, Vec<_>) =
            table.iter().partition(|&(a, _)| ctx.in_power_subgroup(a));
        let inside_ok = inside
            .iter()
            .all(|&(_, v)| matches!((v + 3).rem_euclid(4), 0 | 2));
        let outside_ok = outside.iter().all(|&(_, v)| v.rem_euclid(4) == 0);
        rows.push(check(
            format!("q={q} (I_3(b)+3) mod 4 in {{0,2}} on <alpha^3>"),
            "true".into(),
            inside_ok.to_string(),
        ));
        rows.push(check(
            format!("q={q} I_3(b) = 0 mod 4 off <alpha^3>"),
            "true".into(),
            outside_ok.to_string(),
        ));
        if q == 49 {
            let value = ctx.jacobsthal(ctx.field().one());
            let status = if value == CLAIMED_I3_AT_ONE_Q49 {
                ClaimStatus::Pass
            } else {
                ClaimStatus::KnownErratum
            };
            rows.push(row(
                "q=49 I_3(1)".into(),
                CLAIMED_I3_AT_ONE_Q49.to_string(),
                value.to_string(),
                status,
            ));
        }
    }

    let sweep: Vec<AnalysisReport> = odd_prime_powers(5, LEMMA4_SWEEP_MAX.min(bound))
        .into_par_iter()
        .map(|q| analyze(q, None, bound))
        .collect::<Result<_>>()?;
    let bad_a: Vec<u64> = sweep
        .iter()
        .filter(|r| r.lemma4a == TriState::Fail)
        .map(|r| r.q)
        .collect();
    let bad_b: Vec<u64> = sweep
        .iter()
        .filter(|r| r.lemma4b == TriState::Fail)
        .map(|r| r.q)
        .collect();
    let cases_a = sweep
        .iter()
        .filter(|r| r.lemma4a != TriState::NotApplicable)
        .count();
    let cases_b = sweep
        .iter()
        .filter(|r| r.lemma4b != TriState::NotApplicable)
        .count();
    rows.push(check(
        format!("q=5 mod 8, q<={LEMMA4_SWEEP_MAX}: (x+1) multiplicity 1 ({cases_a} cases)"),
        "no violations".into(),
        violations(&bad_a),
    ));
    rows.push(check(
        format!("q=1 mod 8, q<={LEMMA4_SWEEP_MAX}: (x+1) multiplicity bounds ({cases_b} cases)"),
        "no violations".into(),
        violations(&bad_b),
    ));
    Ok(ClaimsReport { rows })
}

fn violations(qs: &[u64]) -> String {
    if qs.is_empty() {
        "no violations".into()
    } else {
        format!("violations at q = {qs:?}")
    }
}
