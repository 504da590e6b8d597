//! Dominant coweights of `GL_d`, the dominance order and the balancing
//! algorithm for minuscule 0/1 tuples.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::brauer::{LegAssignment, LegSite};
use crate::error::{Error, Result};
use crate::exactq::Rational;

/// A weakly decreasing integer tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Coweight(Vec<i64>);

impl TryFrom<Vec<i64>> for Coweight {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Coweight::new(v)
    }
}

impl From<Coweight> for Vec<i64> {
    fn from(c: Coweight) -> Self {
        c.0
    }
}

impl fmt::Debug for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Coweight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::RankMismatch {
                expected: 1,
                found: 0,
            });
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(entries));
        }
        Ok(Coweight(entries))
    }

    /// Dominant representative of an arbitrary tuple.
    pub fn sorted(mut entries: Vec<i64>) -> Result<Self> {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Coweight::new(entries)
    }

    pub fn zero(d: usize) -> Self {
        Coweight(vec![0; d])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_central(&self) -> bool {
        self.0.first() == self.0.last()
    }

    pub fn gap(&self) -> i64 {
        self.0[0] - self.0[self.0.len() - 1]
    }

    /// `λ_1 + … + λ_k`.
    pub fn top_sum(&self, k: usize) -> i64 {
        self.0[..k.min(self.0.len())].iter().sum()
    }

    /// `λ_{d−k+1} + … + λ_d`.
    pub fn bottom_sum(&self, k: usize) -> i64 {
        let d = self.0.len();
        self.0[d - k.min(d)..].iter().sum()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&x| Rational::from(x)).collect()
    }

    pub fn add(&self, other: &Coweight) -> Result<Coweight> {
        if self.d() != other.d() {
            return Err(Error::LengthMismatch {
                left: self.d(),
                right: other.d(),
            });
        }
        Coweight::sorted(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

pub fn degree(lambda: &Coweight) -> i64 {
    lambda.degree()
}

/// `μ ⪯ λ`: partial sums of `μ` bounded by those of `λ`, equal totals.
pub fn dominance_leq(mu: &[Rational], lambda: &[Rational]) -> Result<bool> {
    if mu.len() != lambda.len() {
        return Err(Error::LengthMismatch {
            left: mu.len(),
            right: lambda.len(),
        });
    }
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for (x, y) in mu.iter().zip(lambda) {
        a += x;
        b += y;
        if a > b {
            return Ok(false);
        }
    }
    Ok(a == b)
}

pub fn dominance_leq_int(mu: &[i64], lambda: &[i64]) -> Result<bool> {
    if mu.len() != lambda.len() {
        return Err(Error::LengthMismatch {
            left: mu.len(),
            right: lambda.len(),
        });
    }
    let (mut a, mut b) = (0i64, 0i64);
    for (x, y) in mu.iter().zip(lambda) {
        a += x;
        b += y;
        if a > b {
            return Ok(false);
        }
    }
    Ok(a == b)
}

/// Each entry repeated `d` times.
pub fn to_gl(lambda: &Coweight, d: usize) -> Result<Coweight> {
    if lambda.d() != d {
        return Err(Error::RankMismatch {
            expected: d,
            found: lambda.d(),
        });
    }
    Ok(Coweight(
        lambda
            .0
            .iter()
            .flat_map(|&x| std::iter::repeat_n(x, d))
            .collect(),
    ))
}

/// The unique central or minuscule coweight of the same degree lying below `λ`.
pub fn minimal_minuscule(lambda: &Coweight) -> Coweight {
    let d = lambda.d() as i64;
    let deg = lambda.degree();
    let q = deg.div_euclid(d);
    let r = (deg - q * d) as usize;
    let mut v = vec![q + 1; r];
    v.resize(lambda.d(), q);
    Coweight(v)
}

/// The twist of a leg bound by a power of Frobenius. Bounds here are defined
/// over the base field, so this is the identity.
pub fn frobenius_twist(lambda: &Coweight, _power: u32) -> Coweight {
    lambda.clone()
}

/// The bounds `λ_i` on all legs, of common rank `d`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundTuple {
    pub legs: BTreeMap<u32, Coweight>,
}

impl BoundTuple {
    pub fn new(legs: impl IntoIterator<Item = (u32, Coweight)>) -> Result<Self> {
        let b = BoundTuple {
            legs: legs.into_iter().collect(),
        };
        b.validate()?;
        Ok(b)
    }

    pub fn from_entries(entries: &[&[i64]]) -> Result<Self> {
        BoundTuple::new(
            entries
                .iter()
                .enumerate()
                .map(|(k, e)| Coweight::new(e.to_vec()).map(|c| (k as u32 + 1, c)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let mut it = self.legs.values();
        let Some(first) = it.next() else {
            return Err(Error::InvalidScenario("leg index set I is empty".into()));
        };
        for c in it {
            if c.d() != first.d() {
                return Err(Error::RankMismatch {
                    expected: first.d(),
                    found: c.d(),
                });
            }
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.legs.values().next().map_or(0, Coweight::d)
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn get(&self, i: u32) -> Option<&Coweight> {
        self.legs.get(&i)
    }

    /// Indices of the legs whose bound is not central.
    pub fn noncentral(&self) -> Vec<u32> {
        self.legs
            .iter()
            .filter(|(_, c)| !c.is_central())
            .map(|(i, _)| *i)
            .collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.legs.values().map(Coweight::degree).sum()
    }

    /// `Σ_i Σ_{j ≤ k} λ_{i,j}`.
    pub fn top_sum(&self, k: usize) -> i64 {
        self.legs.values().map(|c| c.top_sum(k)).sum()
    }
}

/// `λ_y`: dominant sum of the bounds of the legs sitting over `y`.
pub fn aggregate_lambda_y(bounds: &BoundTuple, legs: &LegAssignment, y: &str) -> Result<Coweight> {
    let mut acc = vec![0i64; bounds.d()];
    for i in legs.legs_at(y) {
        let site = legs.site(i).expect("leg listed at y");
        let lam = bounds
            .get(i)
            .ok_or_else(|| Error::InvalidScenario(format!("leg {i} has no bound")))?;
        let lam = frobenius_twist(lam, site.frobenius_index);
        for (a, b) in acc.iter_mut().zip(lam.entries()) {
            *a += b;
        }
    }
    Coweight::sorted(acc)
}

/// One leg as it appears in scenario files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegSpec {
    pub i: u32,
    pub lambda: Coweight,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    #[serde(default)]
    pub frob: u32,
}

pub fn split_legs(specs: &[LegSpec]) -> Result<(BoundTuple, LegAssignment)> {
    let mut bounds = BTreeMap::new();
    let mut assign = LegAssignment::default();
    for l in specs {
        if bounds.insert(l.i, l.lambda.clone()).is_some() {
            return Err(Error::InvalidScenario(format!(
                "duplicate leg index {}",
                l.i
            )));
        }
        let site = l.place.as_ref().map(|p| LegSite {
            place: p.clone(),
            frobenius_index: l.frob,
        });
        assign.entries.insert(l.i, site);
    }
    let bounds = BoundTuple::new(bounds)?;
    Ok((bounds, assign))
}

/// A 0/1 tuple with exactly `e_i` ones per leg.
pub type Balanced = Vec<Vec<u8>>;

fn weight_of(delta: &Coweight) -> Result<usize> {
    let e = delta.entries();
    let ones = e.iter().take_while(|&&x| x == 1).count();
    if e[ones..].iter().any(|&x| x != 0) {
        return Err(Error::InvalidDelta(format!(
            "{delta} is not of the form (1^e, 0^(d-e))"
        )));
    }
    if ones == e.len() {
        return Err(Error::InvalidDelta(format!("{delta} has e = d")));
    }
    Ok(ones)
}

fn check_weights(d: usize, e: &[usize]) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidDelta("d must be at least 1".into()));
    }
    if let Some(x) = e.iter().find(|&&x| x >= d) {
        return Err(Error::InvalidDelta(format!("e = {x} is not below d = {d}")));
    }
    let sum: usize = e.iter().sum();
    if !sum.is_multiple_of(d) {
        return Err(Error::UnbalancedWeights { sum, d });
    }
    Ok(sum / d)
}

/// Balances dominant minuscule tuples `δ_i` to `ε_i` in their `S_d`-orbits with
/// `Σ ε_i = s·(1,…,1)`.
pub fn balance(deltas: &[Coweight]) -> Result<Balanced> {
    let Some(first) = deltas.first() else {
        return Ok(Vec::new());
    };
    let d = first.d();
    let mut e = Vec::with_capacity(deltas.len());
    for delta in deltas {
        if delta.d() != d {
            return Err(Error::RankMismatch {
                expected: d,
                found: delta.d(),
            });
        }
        e.push(weight_of(delta)?);
    }
    balance_weights(d, &e)
}

/// Same as [`balance`], with each `δ_i` given by its number of ones `e_i`.
pub fn balance_weights(d: usize, e: &[usize]) -> Result<Balanced> {
    check_weights(d, e)?;
    let cap = 2 * e.len() + 4;
    let mut trace = Vec::new();
    match balance_rec(d, e, 0, cap, &mut trace) {
        Some(out) => Ok(out),
        None if d <= 4 => balance_exhaustive(d, e).ok_or_else(|| diverged(e, &trace)),
        None => Err(diverged(e, &trace)),
    }
}

fn diverged(e: &[usize], trace: &[String]) -> Error {
    Error::BalanceDiverged(format!("e = {e:?}; steps: {}", trace.join(" ")))
}

fn unit(d: usize, ones: usize) -> Vec<u8> {
    (0..d).map(|j| u8::from(j < ones)).collect()
}

fn balance_rec(
    d: usize,
    e: &[usize],
    depth: usize,
    cap: usize,
    trace: &mut Vec<String>,
) -> Option<Balanced> {
    if depth > cap {
        return None;
    }
    let mut out: Balanced = vec![vec![0; d]; e.len()];
    let live: Vec<usize> = (0..e.len()).filter(|&k| e[k] > 0).collect();
    if live.is_empty() {
        return Some(out);
    }
    let pairs: Vec<(usize, usize)> = live
        .iter()
        .enumerate()
        .flat_map(|(a, &p)| live[a + 1..].iter().map(move |&q| (p, q)))
        .collect();

    if let Some((p, q)) = pairs.iter().copied().find(|&(p, q)| e[p] + e[q] == d) {
        trace.push(format!("pair({p},{q})"));
        out[p] = unit(d, e[p]);
        out[q] = out[p].iter().map(|x| 1 - x).collect();
        let mut rest = e.to_vec();
        rest[p] = 0;
        rest[q] = 0;
        let sub = balance_rec(d, &rest, depth + 1, cap, trace)?;
        for k in 0..e.len() {
            if k != p && k != q {
                out[k] = sub[k].clone();
            }
        }
        return Some(out);
    }

    if let Some((p, q)) = pairs.iter().copied().find(|&(p, q)| e[p] + e[q] < d) {
        trace.push(format!("merge({p},{q})"));
        let mut rest = e.to_vec();
        rest[p] = e[p] + e[q];
        rest[q] = 0;
        let sub = balance_rec(d, &rest, depth + 1, cap, trace)?;
        let mut seen = 0;
        for j in 0..d {
            if sub[p][j] == 1 {
                if seen < e[p] {
                    out[p][j] = 1;
                } else {
                    out[q][j] = 1;
                }
                seen += 1;
            }
        }
        for k in 0..e.len() {
            if k != p && k != q {
                out[k] = sub[k].clone();
            }
        }
        return Some(out);
    }

    if live.len() == 1 {
        return None;
    }
    trace.push("complement".into());
    let comp: Vec<usize> = e.iter().map(|&x| if x == 0 { 0 } else { d - x }).collect();
    let sub = balance_rec(d, &comp, depth + 1, cap, trace)?;
    for &k in &live {
        out[k] = sub[k].iter().map(|x| 1 - x).collect();
    }
    Some(out)
}

/// Backtracking search over all orbit choices, column by column sums capped at `s`.
pub fn balance_exhaustive(d: usize, e: &[usize]) -> Option<Balanced> {
    let s = check_weights(d, e).ok()?;
    let mut cols = vec![0usize; d];
    let mut out: Balanced = Vec::with_capacity(e.len());
    fn go(
        k: usize,
        d: usize,
        e: &[usize],
        s: usize,
        cols: &mut [usize],
        out: &mut Balanced,
    ) -> bool {
        if k == e.len() {
            return cols.iter().all(|&c| c == s);
        }
        for mask in 0u32..(1 << d) {
            if mask.count_ones() as usize != e[k] {
                continue;
            }
            if (0..d).any(|j| mask >> j & 1 == 1 && cols[j] == s) {
                continue;
            }
            let row: Vec<u8> = (0..d).map(|j| (mask >> j & 1) as u8).collect();
            for j in 0..d {
                cols[j] += row[j] as usize;
            }
            out.push(row);
            if go(k + 1, d, e, s, cols, out) {
                return true;
            }
            let row = out.pop().unwrap();
            for j in 0..d {
                cols[j] -= row[j] as usize;
            }
        }
        false
    }
    go(0, d, e, s, &mut cols, &mut out).then_some(out)
}

/// Post-condition of balancing: row `i` is a 0/1 tuple with `e_i` ones, and all
/// column sums equal `Σe/d`.
pub fn is_balanced(d: usize, e: &[usize], eps: &Balanced) -> bool {
    if eps.len() != e.len() || d == 0 {
        return false;
    }
    let sum: usize = e.iter().sum();
    if !sum.is_multiple_of(d) {
        return false;
    }
    let s = sum / d;
    let mut cols = vec![0usize; d];
    for (row, &ei) in eps.iter().zip(e) {
        if row.len() != d || row.iter().any(|&x| x > 1) {
            return false;
        }
        if row.iter().filter(|&&x| x == 1).count() != ei {
            return false;
        }
        for j in 0..d {
            cols[j] += row[j] as usize;
        }
    }
    cols.iter().all(|&c| c == s)
}
