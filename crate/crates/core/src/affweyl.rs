//! The extended affine Weyl group `ℤ^d ⋊ S_d` of `GL_d`.
//!
//! An element `t_v w` is stored as the translation `v` and the one-line
//! permutation `w` (0-indexed internally, 1-indexed in JSON). Permutations act
//! on vectors by moving entry `i` to position `w(i)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coweight::{dominance_leq, Coweight};
use crate::error::{Error, Result};
use crate::exactq::Rational;
use crate::newton::NewtonPoint;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineElement {
    v: Vec<i64>,
    w: Vec<usize>,
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(|x| x.to_string()).collect();
        let w: Vec<String> = self.w.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "t({})·[{}]", v.join(","), w.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    v: Vec<i64>,
    w: Vec<usize>,
}

impl Serialize for AffineElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawElement {
            v: self.v.clone(),
            w: self.w.iter().map(|x| x + 1).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineElement {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawElement::deserialize(de)?;
        if raw.w.contains(&0) {
            return Err(serde::de::Error::custom(Error::InvalidPermutation(raw.w)));
        }
        AffineElement::new(raw.v, raw.w.iter().map(|x| x - 1).collect())
            .map_err(serde::de::Error::custom)
    }
}

fn is_permutation(w: &[usize]) -> bool {
    let mut seen = vec![false; w.len()];
    for &x in w {
        if x >= w.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

impl AffineElement {
    /// `t_v w` with `w` 0-indexed.
    pub fn new(v: Vec<i64>, w: Vec<usize>) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::LengthMismatch {
                left: v.len(),
                right: w.len(),
            });
        }
        if !is_permutation(&w) {
            return Err(Error::InvalidPermutation(w));
        }
        Ok(AffineElement { v, w })
    }

    pub fn identity(d: usize) -> Self {
        AffineElement {
            v: vec![0; d],
            w: (0..d).collect(),
        }
    }

    pub fn translation(v: Vec<i64>) -> Self {
        let d = v.len();
        AffineElement {
            v,
            w: (0..d).collect(),
        }
    }

    /// `ω = t_{e_1} · (k ↦ k+1 mod d)`, generating the length-zero subgroup.
    pub fn omega(d: usize) -> Self {
        let mut v = vec![0; d];
        if d > 0 {
            v[0] = 1;
        }
        AffineElement {
            v,
            w: (0..d).map(|k| (k + 1) % d).collect(),
        }
    }

    pub fn omega_pow(d: usize, k: i64) -> Self {
        let base = if k >= 0 {
            Self::omega(d)
        } else {
            Self::omega(d).inverse()
        };
        (0..k.unsigned_abs()).fold(Self::identity(d), |acc, _| acc.mul(&base))
    }

    /// Simple affine reflection `s_i`, `0 ≤ i < d`; `s_0` is the affine one.
    pub fn simple(d: usize, i: usize) -> Self {
        assert!(d >= 2 && i < d);
        let mut w: Vec<usize> = (0..d).collect();
        let mut v = vec![0; d];
        if i == 0 {
            w.swap(0, d - 1);
            v[0] = 1;
            v[d - 1] = -1;
        } else {
            w.swap(i - 1, i);
        }
        AffineElement { v, w }
    }

    pub fn d(&self) -> usize {
        self.v.len()
    }

    pub fn translation_part(&self) -> &[i64] {
        &self.v
    }

    /// 0-indexed one-line notation.
    pub fn permutation(&self) -> &[usize] {
        &self.w
    }

    pub fn permutation_one_based(&self) -> Vec<usize> {
        self.w.iter().map(|x| x + 1).collect()
    }

    /// Ω-component, the integer `Σ v`.
    pub fn kappa(&self) -> i64 {
        self.v.iter().sum()
    }

    fn act(w: &[usize], v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[w[i]] = x;
        }
        out
    }

    pub fn mul(&self, other: &AffineElement) -> AffineElement {
        let wv = Self::act(&self.w, &other.v);
        AffineElement {
            v: self.v.iter().zip(&wv).map(|(a, b)| a + b).collect(),
            w: other.w.iter().map(|&j| self.w[j]).collect(),
        }
    }

    pub fn inverse(&self) -> AffineElement {
        let mut winv = vec![0; self.d()];
        for (i, &x) in self.w.iter().enumerate() {
            winv[x] = i;
        }
        let v = Self::act(&winv, &self.v).into_iter().map(|x| -x).collect();
        AffineElement { v, w: winv }
    }

    pub fn pow(&self, n: u32) -> AffineElement {
        (0..n).fold(Self::identity(self.d()), |acc, _| acc.mul(self))
    }

    pub fn length(&self) -> u64 {
        length(self)
    }

    pub fn is_translation(&self) -> bool {
        self.w.iter().enumerate().all(|(i, &x)| i == x)
    }
}

pub fn length(e: &AffineElement) -> u64 {
    let d = e.d();
    let mut winv = vec![0; d];
    for (i, &x) in e.w.iter().enumerate() {
        winv[x] = i;
    }
    let mut l = 0u64;
    for i in 0..d {
        for j in i + 1..d {
            let diff = e.v[i] - e.v[j];
            l += if winv[i] < winv[j] {
                diff.unsigned_abs()
            } else {
                (diff - 1).unsigned_abs()
            };
        }
    }
    l
}

fn simples(d: usize) -> Vec<AffineElement> {
    if d < 2 {
        return Vec::new();
    }
    (0..d).map(|i| AffineElement::simple(d, i)).collect()
}

/// A reduced expression `ω^k s_{i_1} ⋯ s_{i_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWord {
    pub omega_power: i64,
    pub letters: Vec<usize>,
}

pub fn reduced_word(e: &AffineElement) -> ReducedWord {
    let d = e.d();
    let ss = simples(d);
    let mut x = e.clone();
    let mut stripped = Vec::new();
    let mut l = length(&x);
    while l > 0 {
        let (i, y) = ss
            .iter()
            .enumerate()
            .map(|(i, s)| (i, x.mul(s)))
            .find(|(_, y)| length(y) < l)
            .expect("element of positive length has a right descent");
        stripped.push(i);
        x = y;
        l -= 1;
    }
    stripped.reverse();
    ReducedWord {
        omega_power: x.kappa(),
        letters: stripped,
    }
}

/// Bruhat order, by the lifting property along right descents of `b`.
pub fn bruhat_leq(a: &AffineElement, b: &AffineElement) -> bool {
    if a.d() != b.d() || a.kappa() != b.kappa() {
        return false;
    }
    let ss = simples(a.d());
    let mut u = a.clone();
    let mut w = b.clone();
    loop {
        let (lu, lw) = (length(&u), length(&w));
        if lu > lw {
            return false;
        }
        if lw == 0 {
            return u == w;
        }
        let (s, ws) = ss
            .iter()
            .map(|s| (s, w.mul(s)))
            .find(|(_, y)| length(y) < lw)
            .expect("descent exists");
        let us = u.mul(s);
        if length(&us) < lu {
            u = us;
        }
        w = ws;
    }
}

/// `a ⋆ b`, the maximum of `{a·b′ : b′ ≤ b}`.
pub fn demazure(a: &AffineElement, b: &AffineElement) -> AffineElement {
    let d = a.d();
    let rw = reduced_word(b);
    let mut x = a.mul(&AffineElement::omega_pow(d, rw.omega_power));
    for &i in &rw.letters {
        let y = x.mul(&AffineElement::simple(d, i));
        if length(&y) > length(&x) {
            x = y;
        }
    }
    x
}

/// All elements Bruhat-below `w`, as products of subwords of a reduced word.
pub fn lower_set(w: &AffineElement) -> HashSet<AffineElement> {
    let d = w.d();
    let rw = reduced_word(w);
    let mut set: HashSet<AffineElement> = HashSet::new();
    set.insert(AffineElement::omega_pow(d, rw.omega_power));
    for &i in &rw.letters {
        let s = AffineElement::simple(d, i);
        let new: Vec<AffineElement> = set.iter().map(|x| x.mul(&s)).collect();
        set.extend(new);
    }
    set
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleSet {
    pub d: usize,
    pub lambda: Coweight,
    pub elements: BTreeSet<AffineElement>,
}

impl AdmissibleSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &AffineElement) -> bool {
        self.elements.contains(e)
    }
}

/// Distinct rearrangements of a tuple.
pub fn weyl_orbit(v: &[i64]) -> Vec<Vec<i64>> {
    v.iter()
        .copied()
        .permutations(v.len())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn admissible_set(lambda: &Coweight) -> AdmissibleSet {
    let tops: Vec<AffineElement> = weyl_orbit(lambda.entries())
        .into_iter()
        .map(AffineElement::translation)
        .collect();
    let elements = union_of_lower_sets(&tops);
    AdmissibleSet {
        d: lambda.d(),
        lambda: lambda.clone(),
        elements,
    }
}

fn union_of_lower_sets(tops: &[AffineElement]) -> BTreeSet<AffineElement> {
    tops.par_iter()
        .map(|t| lower_set(t).into_iter().collect::<BTreeSet<_>>())
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// The unique length-zero element of `Adm(λ)`, namely `ω^{deg λ}`.
pub fn basic_element(lambda: &Coweight) -> AffineElement {
    AffineElement::omega_pow(lambda.d(), lambda.degree())
}

/// Cycle averages of the translation part, sorted decreasingly.
pub fn newton_point(e: &AffineElement) -> NewtonPoint {
    let d = e.d();
    let mut seen = vec![false; d];
    let mut slopes = Vec::with_capacity(d);
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            cycle.push(k);
            k = e.w[k];
        }
        let sum: i64 = cycle.iter().map(|&i| e.v[i]).sum();
        let slope = Rational::new(sum, cycle.len() as i64).expect("nonzero cycle length");
        slopes.extend(std::iter::repeat_n(slope, cycle.len()));
    }
    NewtonPoint::from_unsorted(slopes)
}

/// `⟨ν, 2ρ⟩ = Σ_{i<j} (ν_i − ν_j)` for dominant `ν`.
pub fn pairing_2rho(nu: &NewtonPoint) -> Rational {
    let s = nu.slopes();
    let d = s.len() as i64;
    s.iter()
        .enumerate()
        .map(|(i, x)| x.mul_int(d - 1 - 2 * i as i64))
        .sum()
}

/// A cyclic shift of tuple positions, `a ↦ a + step mod f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicShift {
    pub step: usize,
}

impl Default for CyclicShift {
    fn default() -> Self {
        CyclicShift { step: 1 }
    }
}

fn orbits(f: usize, step: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; f];
    let mut out = Vec::new();
    for a in 0..f {
        if seen[a] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut k = a;
        while !seen[k] {
            seen[k] = true;
            orbit.push(k);
            k = (k + step) % f;
        }
        out.push(orbit);
    }
    out
}

fn check_tuple(tuple: &[AffineElement]) -> Result<usize> {
    let first = tuple
        .first()
        .ok_or_else(|| Error::InvalidScenario("empty tuple".into()))?;
    let d = first.d();
    if let Some(e) = tuple.iter().find(|e| e.d() != d) {
        return Err(Error::RankMismatch {
            expected: d,
            found: e.d(),
        });
    }
    Ok(d)
}

/// `x_a x_{a+step} ⋯` over one δ-orbit.
fn orbit_product(tuple: &[AffineElement], orbit: &[usize]) -> AffineElement {
    orbit
        .iter()
        .fold(AffineElement::identity(tuple[0].d()), |acc, &a| {
            acc.mul(&tuple[a])
        })
}

/// Whether `ℓ(x) = ⟨ν_x, 2ρ⟩` for `x = (w_a)_a · δ`, checked orbit by orbit.
pub fn is_straight(tuple: &[AffineElement], delta: CyclicShift) -> Result<bool> {
    check_tuple(tuple)?;
    let f = tuple.len();
    let step = delta.step % f;
    for orbit in orbits(f, step) {
        let total: u64 = orbit.iter().map(|&a| length(&tuple[a])).sum();
        let nu = newton_point(&orbit_product(tuple, &orbit));
        if Rational::from(total as i64) != pairing_2rho(&nu) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ℓ((xδ)^n)`: the sum over positions `a` of `ℓ(x_a x_{a+step} ⋯)` with `n` factors.
pub fn twisted_power_length(tuple: &[AffineElement], delta: CyclicShift, n: usize) -> Result<u64> {
    check_tuple(tuple)?;
    let f = tuple.len();
    let d = tuple[0].d();
    Ok((0..f)
        .map(|a| {
            let y = (0..n).fold(AffineElement::identity(d), |acc, k| {
                acc.mul(&tuple[(a + k * delta.step) % f])
            });
            length(&y)
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub holds: bool,
    pub lhs_size: usize,
    pub rhs_size: usize,
    pub only_in_lhs: Vec<AffineElement>,
    pub only_in_rhs: Vec<AffineElement>,
}

/// Compares `⋃ {w ≤ w₁ ⋆ w₂ : w₁ ∈ Adm(λ₁), w₂ ∈ Adm(λ₂)}` with `Adm(λ₁+λ₂)`.
///
/// Monotonicity of `⋆` lets the union run over the translation pairs only.
pub fn check_adm_additivity(l1: &Coweight, l2: &Coweight) -> Result<AdditivityReport> {
    let sum = l1.add(l2)?;
    let a: Vec<AffineElement> = weyl_orbit(l1.entries())
        .into_iter()
        .map(AffineElement::translation)
        .collect();
    let b: Vec<AffineElement> = weyl_orbit(l2.entries())
        .into_iter()
        .map(AffineElement::translation)
        .collect();
    let tops: BTreeSet<AffineElement> = a
        .iter()
        .cartesian_product(b.iter())
        .map(|(x, y)| demazure(x, y))
        .collect();
    let tops: Vec<AffineElement> = tops.into_iter().collect();
    let lhs = union_of_lower_sets(&tops);
    Ok(compare(lhs, admissible_set(&sum).elements))
}

fn compare(lhs: BTreeSet<AffineElement>, rhs: BTreeSet<AffineElement>) -> AdditivityReport {
    let only_in_lhs: Vec<_> = lhs.difference(&rhs).cloned().collect();
    let only_in_rhs: Vec<_> = rhs.difference(&lhs).cloned().collect();
    AdditivityReport {
        holds: only_in_lhs.is_empty() && only_in_rhs.is_empty(),
        lhs_size: lhs.len(),
        rhs_size: rhs.len(),
        only_in_lhs,
        only_in_rhs,
    }
}

/// Same comparison with the union over every pair of admissible elements.
pub fn check_adm_additivity_full(l1: &Coweight, l2: &Coweight) -> Result<AdditivityReport> {
    let sum = l1.add(l2)?;
    let a = admissible_set(l1);
    let b = admissible_set(l2);
    let tops: BTreeSet<AffineElement> = a
        .elements
        .iter()
        .cartesian_product(b.elements.iter())
        .map(|(x, y)| demazure(x, y))
        .collect();
    let tops: Vec<AffineElement> = tops.into_iter().collect();
    Ok(compare(
        union_of_lower_sets(&tops),
        admissible_set(&sum).elements,
    ))
}

/// Every element of `Adm(λ)` has Newton point dominated by `λ`.
pub fn mazur_holds(adm: &AdmissibleSet) -> bool {
    let lam = adm.lambda.to_rationals();
    adm.elements
        .iter()
        .all(|e| dominance_leq(newton_point(e).slopes(), &lam).unwrap_or(false))
}
