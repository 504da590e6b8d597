//! Non-emptiness, properness, quasi-compactness and irreducibility criteria,
//! and the degeneration inequalities behind them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brauer::{
    torsion_order, validate_algebra, AlgebraSpec, LegAssignment, LegSite, ValidationReport,
};
use crate::coweight::{split_legs, BoundTuple, LegSpec};
use crate::error::{Error, Result};
use crate::exactq::{lcm_u64, Rational};

/// A leg placement as written in scenario files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementLeg {
    pub i: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    #[serde(default)]
    pub frob: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSpec {
    pub name: String,
    #[serde(default)]
    pub legs: Vec<PlacementLeg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub algebra: AlgebraSpec,
    pub legs: Vec<LegSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idele_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub placements: Vec<PlacementSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub name: String,
    pub legs: LegAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub algebra: AlgebraSpec,
    pub bounds: BoundTuple,
    pub legs: LegAssignment,
    pub idele_degree: Option<u32>,
    pub placements: Vec<Placement>,
}

impl Scenario {
    pub fn new(algebra: AlgebraSpec, bounds: BoundTuple, legs: LegAssignment) -> Self {
        Scenario {
            algebra,
            bounds,
            legs,
            idele_degree: None,
            placements: Vec::new(),
        }
    }

    /// All legs away from the ramification locus.
    pub fn generic(algebra: AlgebraSpec, bounds: BoundTuple) -> Self {
        let legs = LegAssignment::generic(bounds.legs.keys().copied());
        Scenario::new(algebra, bounds, legs)
    }

    pub fn from_spec(spec: &ScenarioSpec) -> Result<Self> {
        let (bounds, legs) = split_legs(&spec.legs)?;
        let mut placements = Vec::new();
        for p in &spec.placements {
            let mut a = LegAssignment::generic(bounds.legs.keys().copied());
            for l in &p.legs {
                if !bounds.legs.contains_key(&l.i) {
                    return Err(Error::InvalidScenario(format!(
                        "placement {:?} mentions unknown leg {}",
                        p.name, l.i
                    )));
                }
                a.entries.insert(
                    l.i,
                    l.place.as_ref().map(|x| LegSite {
                        place: x.clone(),
                        frobenius_index: l.frob,
                    }),
                );
            }
            placements.push(Placement {
                name: p.name.clone(),
                legs: a,
            });
        }
        Ok(Scenario {
            algebra: spec.algebra.clone(),
            bounds,
            legs,
            idele_degree: spec.idele_degree,
            placements,
        })
    }

    pub fn d(&self) -> usize {
        self.algebra.d
    }

    pub fn ram(&self) -> Vec<String> {
        self.algebra.ramified_ids()
    }

    /// `[m·inv_x(D)]` as a rational in `[0,1)`.
    pub fn bracket(&self, m: usize, x: &str) -> Rational {
        self.algebra.inv(x).scale(m as i64).representative().clone()
    }

    /// `Σ_i Σ_{j ≤ d−m} λ_{i,j}`.
    pub fn lambda_side(&self, m: usize) -> Rational {
        Rational::from(self.bounds.top_sum(self.d() - m))
    }

    pub fn bracket_sum<'a>(&self, m: usize, ys: impl IntoIterator<Item = &'a String>) -> Rational {
        ys.into_iter().map(|y| self.bracket(m, y)).sum()
    }
}

fn push(report: &mut ValidationReport, path: String, message: String) {
    report
        .violations
        .push(crate::brauer::Violation { path, message });
}

fn check_assignment(
    report: &mut ValidationReport,
    s: &Scenario,
    prefix: &str,
    legs: &LegAssignment,
) {
    for (i, site) in &legs.entries {
        let Some(site) = site else { continue };
        match s.algebra.place(&site.place) {
            None => push(
                report,
                format!("{prefix}/i={i}/place"),
                format!("unknown place {:?}", site.place),
            ),
            Some(p) if site.frobenius_index >= p.degree => push(
                report,
                format!("{prefix}/i={i}/frob"),
                format!(
                    "frobenius index {} not in [0, {})",
                    site.frobenius_index, p.degree
                ),
            ),
            _ => {}
        }
    }
}

/// Algebra validity plus consistency of legs, placements and idèle degree.
pub fn validate_scenario(s: &Scenario) -> ValidationReport {
    let alg = validate_algebra(&s.algebra);
    let mut report = ValidationReport {
        ok: false,
        violations: alg
            .violations
            .into_iter()
            .map(|v| crate::brauer::Violation {
                path: format!("/algebra{}", v.path),
                message: v.message,
            })
            .collect(),
    };
    for (i, lam) in &s.bounds.legs {
        if lam.d() != s.d() {
            push(
                &mut report,
                format!("/legs/i={i}/lambda"),
                format!("λ has length {}, expected d = {}", lam.d(), s.d()),
            );
        }
    }
    check_assignment(&mut report, s, "/legs", &s.legs);
    for (k, p) in s.placements.iter().enumerate() {
        check_assignment(&mut report, s, &format!("/placements/{k}/legs"), &p.legs);
    }
    if s.idele_degree == Some(0) {
        push(
            &mut report,
            "/idele_degree".into(),
            "idèle degree must be positive".into(),
        );
    }
    report.ok = report.violations.is_empty();
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub places: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub status: Status,
    pub holds: bool,
    pub explanation: String,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    fn new(criterion: &str, status: Status, explanation: String, witnesses: Vec<Witness>) -> Self {
        Verdict {
            criterion: criterion.to_string(),
            status,
            holds: status == Status::Holds,
            explanation,
            witnesses,
        }
    }

    fn decided(criterion: &str, witnesses: Vec<Witness>, ok: String, bad: String) -> Self {
        if witnesses.is_empty() {
            Verdict::new(criterion, Status::Holds, ok, witnesses)
        } else {
            Verdict::new(criterion, Status::Fails, bad, witnesses)
        }
    }
}

pub fn check_nonempty(s: &Scenario) -> Verdict {
    let total = s.bounds.total_degree();
    let witnesses = if total == 0 {
        Vec::new()
    } else {
        vec![Witness {
            lhs: Some(Rational::from(total)),
            rhs: Some(Rational::zero()),
            detail: Some("Σ_i deg(λ_i) ≠ 0".into()),
            ..Witness::default()
        }]
    };
    Verdict::decided(
        "nonempty",
        witnesses,
        "Σ_i deg(λ_i) = 0".into(),
        format!("Σ_i deg(λ_i) = {total}"),
    )
}

pub fn component_count(s: &Scenario) -> Result<u64> {
    let a = s.idele_degree.ok_or(Error::MissingIdeleDegree)?;
    Ok(s.d() as u64 * a as u64)
}

/// Per `m`: `(m, Σ_{Ram}[m·inv], Σ_i Σ_{j≤d−m} λ_{i,j})`.
pub fn lau_profile(s: &Scenario) -> Vec<(usize, Rational, Rational)> {
    let ram = s.ram();
    (1..s.d())
        .map(|m| (m, s.bracket_sum(m, &ram), s.lambda_side(m)))
        .collect()
}

pub fn check_lau(s: &Scenario) -> Verdict {
    let ram = s.ram();
    let witnesses: Vec<Witness> = lau_profile(s)
        .into_iter()
        .filter(|(_, l, r)| l <= r)
        .map(|(m, l, r)| Witness {
            m: Some(m),
            places: ram.clone(),
            lhs: Some(l),
            rhs: Some(r),
            detail: None,
        })
        .collect();
    Verdict::decided(
        "lau",
        witnesses,
        "strict inequality holds for every 0 < m < d".into(),
        "strict inequality fails for some m".into(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Intro,
    Theorem,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Intro => "main_intro",
            Variant::Theorem => "main_theorem",
        }
    }
}

/// The `c` places with the smallest brackets at `m`, ties broken by id.
fn smallest(s: &Scenario, m: usize, ram: &[String], c: usize) -> Vec<String> {
    let mut v: Vec<(Rational, &String)> = ram.iter().map(|y| (s.bracket(m, y), y)).collect();
    v.sort();
    let mut out: Vec<String> = v.into_iter().take(c).map(|(_, y)| y.clone()).collect();
    out.sort();
    out
}

pub fn check_main(s: &Scenario, variant: Variant) -> Verdict {
    check_main_with(s, variant, false)
}

/// With `exhaustive` every subset `Y` of the required size is tried.
pub fn check_main_with(s: &Scenario, variant: Variant, exhaustive: bool) -> Verdict {
    let ram = s.ram();
    let count = match variant {
        Variant::Intro => s.bounds.len(),
        Variant::Theorem => s.bounds.noncentral().len(),
    };
    let label = match variant {
        Variant::Intro => "|I|",
        Variant::Theorem => "|I^nc|",
    };
    if ram.len() <= count {
        return Verdict::new(
            variant.name(),
            Status::Inapplicable,
            format!(
                "|Ram(D)| = {} is not larger than {label} = {count}",
                ram.len()
            ),
            Vec::new(),
        );
    }
    let c = ram.len() - count;
    let mut witnesses = Vec::new();
    for m in 1..s.d() {
        let rhs = s.lambda_side(m);
        let worst = if exhaustive {
            ram.iter()
                .cloned()
                .combinations(c)
                .map(|y| (s.bracket_sum(m, &y), y))
                .min()
                .expect("c ≤ |Ram|")
        } else {
            let y = smallest(s, m, &ram, c);
            (s.bracket_sum(m, &y), y)
        };
        if worst.0 <= rhs {
            witnesses.push(Witness {
                m: Some(m),
                places: worst.1,
                lhs: Some(worst.0),
                rhs: Some(rhs),
                detail: None,
            });
        }
    }
    Verdict::decided(
        variant.name(),
        witnesses,
        format!("strict inequality holds for every m and every Y with |Y| = {c}"),
        format!("strict inequality fails for some Y with |Y| = {c}"),
    )
}

fn vp(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

fn primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn order_at(s: &Scenario, x: &str) -> u64 {
    torsion_order(&s.algebra.inv(x))
}

/// Whether the torsion orders over `Y` have lcm exactly `d`.
pub fn check_quasicompact_subset(s: &Scenario, ys: &[String]) -> Result<Verdict> {
    let ram: BTreeSet<String> = s.ram().into_iter().collect();
    let outside: Vec<String> = ys.iter().filter(|y| !ram.contains(*y)).cloned().collect();
    if !outside.is_empty() {
        return Err(Error::NotRamified(outside));
    }
    let l = lcm_u64(ys.iter().map(|y| order_at(s, y)))?;
    let d = s.d() as u64;
    let witnesses = if l == d {
        Vec::new()
    } else {
        vec![Witness {
            places: ys.to_vec(),
            lhs: Some(Rational::from(l as i64)),
            rhs: Some(Rational::from(d as i64)),
            detail: Some(format!("lcm of torsion orders is {l}")),
            ..Witness::default()
        }]
    };
    Ok(Verdict::decided(
        "quasicompact_subset",
        witnesses,
        "lcm of torsion orders over Y equals d".into(),
        "lcm of torsion orders over Y differs from d".into(),
    ))
}

/// Every subset of `Ram(D)` of size `|Ram(D)| − |I|` has torsion orders with lcm `d`.
///
/// Since all orders divide `d`, a subset misses `d` exactly when, for some prime
/// `p | d`, it avoids every place whose order has full `p`-valuation.
pub fn check_quasicompact(s: &Scenario) -> Verdict {
    let ram = s.ram();
    let Some(c) = quasicompact_size(s, &ram) else {
        return inapplicable_quasicompact(s, &ram);
    };
    let d = s.d() as u64;
    let mut witness = None;
    for p in primes(d) {
        let full = vp(d, p);
        let weak: Vec<String> = ram
            .iter()
            .filter(|x| vp(order_at(s, x), p) < full)
            .cloned()
            .collect();
        if weak.len() >= c {
            witness = Some((p, weak.into_iter().take(c).collect::<Vec<_>>()));
            break;
        }
    }
    quasicompact_verdict(s, c, witness.map(|(_, y)| y))
}

fn quasicompact_size(s: &Scenario, ram: &[String]) -> Option<usize> {
    let n = s.bounds.len();
    (ram.len() > n).then(|| ram.len() - n)
}

fn inapplicable_quasicompact(s: &Scenario, ram: &[String]) -> Verdict {
    Verdict::new(
        "quasicompact",
        Status::Inapplicable,
        format!(
            "|Ram(D)| = {} is not larger than |I| = {}",
            ram.len(),
            s.bounds.len()
        ),
        Vec::new(),
    )
}

fn quasicompact_verdict(s: &Scenario, c: usize, bad: Option<Vec<String>>) -> Verdict {
    let witnesses = bad
        .map(|y| {
            let l = lcm_u64(y.iter().map(|x| order_at(s, x))).unwrap_or(0);
            vec![Witness {
                places: y,
                lhs: Some(Rational::from(l as i64)),
                rhs: Some(Rational::from(s.d() as i64)),
                detail: Some(format!("lcm of torsion orders is {l}")),
                ..Witness::default()
            }]
        })
        .unwrap_or_default();
    Verdict::decided(
        "quasicompact",
        witnesses,
        format!("every Y ⊂ Ram(D) with |Y| = {c} has lcm of torsion orders d"),
        format!("some Y ⊂ Ram(D) with |Y| = {c} has lcm of torsion orders below d"),
    )
}

/// Same verdict by trying every subset.
pub fn check_quasicompact_exhaustive(s: &Scenario) -> Verdict {
    let ram = s.ram();
    let Some(c) = quasicompact_size(s, &ram) else {
        return inapplicable_quasicompact(s, &ram);
    };
    let d = s.d() as u64;
    let bad = ram
        .iter()
        .cloned()
        .combinations(c)
        .find(|y| lcm_u64(y.iter().map(|x| order_at(s, x))).unwrap_or(0) != d);
    quasicompact_verdict(s, c, bad)
}

/// `lcm_{y∈Y} d·e_y` (or `d` for empty `Y`), and whether it reaches `d²`.
pub fn check_irreducibility(s: &Scenario, ys: &[String]) -> Result<Verdict> {
    let ram: BTreeSet<String> = s.ram().into_iter().collect();
    let outside: Vec<String> = ys.iter().filter(|y| !ram.contains(*y)).cloned().collect();
    if !outside.is_empty() {
        return Err(Error::NotRamified(outside));
    }
    let occupied = s.legs.occupied_places();
    let met: Vec<String> = ys
        .iter()
        .filter(|y| occupied.contains(y.as_str()))
        .cloned()
        .collect();
    if !met.is_empty() {
        return Err(Error::LegsMeetY(met));
    }
    let d = s.d() as u64;
    let divisor = if ys.is_empty() {
        d
    } else {
        ys.iter()
            .map(|y| d * order_at(s, y))
            .fold(1, |a, b| a.lcm(&b))
    };
    let witnesses = if divisor == d * d {
        Vec::new()
    } else {
        vec![Witness {
            places: ys.to_vec(),
            lhs: Some(Rational::from(divisor as i64)),
            rhs: Some(Rational::from((d * d) as i64)),
            detail: Some(format!(
                "forced divisor {divisor} of the rank is below d² = {}",
                d * d
            )),
            ..Witness::default()
        }]
    };
    Ok(Verdict::decided(
        "irreducibility",
        witnesses,
        format!("forced divisor is d² = {}", d * d),
        format!("forced divisor is {divisor}"),
    ))
}

/// Default `Y` for irreducibility: ramified places carrying no leg.
pub fn default_irreducibility_places(s: &Scenario) -> Vec<String> {
    let occupied = s.legs.occupied_places();
    s.ram()
        .into_iter()
        .filter(|y| !occupied.contains(y.as_str()))
        .collect()
}

/// `d·Σ_i Σ_{j≤d−m} λ_{i,j}`.
pub fn coker_bound(s: &Scenario, m: usize) -> Result<Rational> {
    let d = s.d();
    if m == 0 || m > d {
        return Err(Error::MOutOfRange { m, d });
    }
    Ok(Rational::from(s.bounds.top_sum(d - m)).mul_int(d as i64))
}

fn noncentral_legs_at(s: &Scenario, legs: &LegAssignment, x: &str) -> Vec<u32> {
    let nc: BTreeSet<u32> = s.bounds.noncentral().into_iter().collect();
    legs.legs_at(x)
        .into_iter()
        .filter(|i| nc.contains(i))
        .collect()
}

pub fn degeneration_lower_bound(
    s: &Scenario,
    legs: &LegAssignment,
    m: usize,
    x: &str,
) -> Result<Rational> {
    let d = s.d();
    if m == 0 || m >= d {
        return Err(Error::MOutOfRange { m, d });
    }
    let b = s.bracket(m, x);
    if noncentral_legs_at(s, legs, x).is_empty() {
        return Ok(b);
    }
    let spread: i64 = legs
        .legs_at(x)
        .into_iter()
        .filter_map(|i| s.bounds.get(i))
        .map(|lam| lam.top_sum(m) - lam.bottom_sum(m))
        .sum();
    Ok((b - Rational::from(spread)).max(Rational::zero()))
}

/// Ramified places with no non-central leg.
pub fn clean_places(s: &Scenario, legs: &LegAssignment) -> Vec<String> {
    s.ram()
        .into_iter()
        .filter(|x| noncentral_legs_at(s, legs, x).is_empty())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingRow {
    pub m: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub blocking: bool,
}

/// Per `m`: `Σ_{Y′}[m·inv]` against `coker_bound/d`.
pub fn blocking_profile(s: &Scenario, legs: &LegAssignment) -> Vec<BlockingRow> {
    let clean = clean_places(s, legs);
    let d = s.d() as i64;
    (1..s.d())
        .map(|m| {
            let lhs = s.bracket_sum(m, &clean);
            let rhs = coker_bound(s, m)
                .and_then(|c| c.div_int(d))
                .expect("m in range");
            BlockingRow {
                m,
                blocking: lhs <= rhs,
                lhs,
                rhs,
            }
        })
        .collect()
}

/// Holds (a properness certificate for this placement) iff no `m` blocks.
pub fn find_blocking(s: &Scenario, legs: &LegAssignment) -> Verdict {
    let clean = clean_places(s, legs);
    let witnesses: Vec<Witness> = blocking_profile(s, legs)
        .into_iter()
        .find(|r| r.blocking)
        .map(|r| Witness {
            m: Some(r.m),
            places: clean.clone(),
            lhs: Some(r.lhs),
            rhs: Some(r.rhs),
            detail: Some("Σ_{Y′}[m·inv] ≤ coker bound / d".into()),
        })
        .into_iter()
        .collect();
    Verdict::decided(
        "degeneration",
        witnesses,
        "no degeneration consistent with the inequality chain".into(),
        "a degeneration is not excluded at some m".into(),
    )
}

const MAX_PLACEMENTS: u64 = 1 << 20;

fn describe(legs: &LegAssignment) -> String {
    legs.entries
        .iter()
        .map(|(i, site)| match site {
            Some(s) => format!("{i}@{}", s.place),
            None => format!("{i}@generic"),
        })
        .join(",")
}

/// Every leg either generic or at a ramified place, in a fixed order.
pub fn all_placements(s: &Scenario) -> Result<Vec<LegAssignment>> {
    let ram = s.ram();
    let legs: Vec<u32> = s.bounds.legs.keys().copied().collect();
    let total = (ram.len() as u64 + 1)
        .checked_pow(legs.len() as u32)
        .filter(|&n| n <= MAX_PLACEMENTS)
        .ok_or_else(|| Error::Unsupported(format!("more than {MAX_PLACEMENTS} leg placements")))?;
    let mut out = Vec::with_capacity(total as usize);
    let choices: Vec<Option<&String>> = std::iter::once(None).chain(ram.iter().map(Some)).collect();
    for combo in legs
        .iter()
        .map(|_| choices.iter())
        .multi_cartesian_product()
    {
        let mut a = LegAssignment::default();
        for (i, c) in legs.iter().zip(combo) {
            a.entries.insert(
                *i,
                c.map(|x| LegSite {
                    place: x.clone(),
                    frobenius_index: 0,
                }),
            );
        }
        out.push(a);
    }
    if legs.is_empty() {
        out.push(LegAssignment::default());
    }
    Ok(out)
}

/// `find_blocking` over every placement; reports the worst blocking one.
pub fn find_blocking_all(s: &Scenario) -> Result<Verdict> {
    let placements = all_placements(s)?;
    let results: Vec<(Verdict, Rational)> = placements
        .par_iter()
        .map(|p| {
            let v = find_blocking(s, p);
            let slack = blocking_profile(s, p)
                .into_iter()
                .map(|r| r.rhs - r.lhs)
                .max()
                .unwrap_or_default();
            (v, slack)
        })
        .collect();
    let blocked = results.iter().filter(|(v, _)| !v.holds).count();
    let worst = results
        .iter()
        .enumerate()
        .filter(|(_, (v, _))| !v.holds)
        .max_by(|(ia, (_, a)), (ib, (_, b))| a.cmp(b).then(ib.cmp(ia)))
        .map(|(k, (v, _))| {
            let mut w = v.witnesses[0].clone();
            w.detail = Some(format!("placement {}", describe(&placements[k])));
            w
        });
    let n = placements.len();
    Ok(Verdict::decided(
        "degeneration_all_placements",
        worst.into_iter().collect(),
        format!("certificate for all {n} placements"),
        format!("{blocked} of {n} placements are blocking"),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementVerdict {
    pub placement: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullReport {
    pub validation: ValidationReport,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub verdicts: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degeneration: Vec<PlacementVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_count: Option<u64>,
}

pub fn full_report(s: &Scenario) -> FullReport {
    let validation = validate_scenario(s);
    if !validation.ok {
        return FullReport {
            validation,
            verdicts: BTreeMap::new(),
            degeneration: Vec::new(),
            component_count: None,
        };
    }
    let mut verdicts = BTreeMap::new();
    for v in [
        check_nonempty(s),
        check_lau(s),
        check_main(s, Variant::Intro),
        check_main(s, Variant::Theorem),
        check_quasicompact(s),
    ] {
        verdicts.insert(v.criterion.clone(), v);
    }
    let mut degeneration = vec![PlacementVerdict {
        placement: "scenario".into(),
        verdict: find_blocking(s, &s.legs),
    }];
    for p in &s.placements {
        degeneration.push(PlacementVerdict {
            placement: p.name.clone(),
            verdict: find_blocking(s, &p.legs),
        });
    }
    FullReport {
        validation,
        verdicts,
        degeneration,
        component_count: component_count(s).ok(),
    }
}
