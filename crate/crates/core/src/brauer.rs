//! Places of the base field, central division algebras given by their local
//! invariants, extension shapes `L/F` and leg placements.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactq::{lcm_u64, QModZ, Rational};

/// A closed point of the curve, known only by its name and residue degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Place {
    pub id: String,
    #[serde(rename = "deg")]
    pub degree: u32,
}

impl Place {
    pub fn new(id: impl Into<String>, degree: u32) -> Self {
        Place {
            id: id.into(),
            degree,
        }
    }
}

/// A central division algebra over `F`, recorded by its index and the finite
/// support of its invariant map. Unlisted places carry invariant 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub d: usize,
    #[serde(default)]
    pub places: Vec<Place>,
    #[serde(default)]
    pub invariants: BTreeMap<String, QModZ>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    fn finish(mut self) -> Self {
        self.ok = self.violations.is_empty();
        self
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok {
            Ok(())
        } else {
            let msg = self
                .violations
                .iter()
                .map(|v| format!("{}: {}", v.path, v.message))
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::InvalidAlgebra(msg))
        }
    }
}

impl AlgebraSpec {
    /// Builds a spec whose places all have degree 1.
    pub fn with_invariants(d: usize, invariants: &[(&str, &str)]) -> Result<Self> {
        let mut places = Vec::new();
        let mut invs = BTreeMap::new();
        for (id, inv) in invariants {
            places.push(Place::new(*id, 1));
            invs.insert(id.to_string(), inv.parse()?);
        }
        Ok(AlgebraSpec {
            d,
            places,
            invariants: invs,
        })
    }

    pub fn place(&self, id: &str) -> Option<&Place> {
        self.places.iter().find(|p| p.id == id)
    }

    pub fn inv(&self, id: &str) -> QModZ {
        self.invariants.get(id).cloned().unwrap_or_default()
    }

    /// Places with nonzero invariant, sorted by id.
    pub fn ramification_locus(&self) -> Vec<&Place> {
        let ram: BTreeSet<&str> = self
            .invariants
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k.as_str())
            .collect();
        let mut out: Vec<&Place> = self
            .places
            .iter()
            .filter(|p| ram.contains(p.id.as_str()))
            .collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    pub fn ramified_ids(&self) -> Vec<String> {
        self.ramification_locus()
            .into_iter()
            .map(|p| p.id.clone())
            .collect()
    }

    pub fn is_ramified(&self, id: &str) -> bool {
        !self.inv(id).is_zero()
    }
}

pub fn validate_algebra(spec: &AlgebraSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    if spec.d == 0 {
        report.push("/d", "index d must be at least 1");
    }
    let mut seen = BTreeSet::new();
    for (k, p) in spec.places.iter().enumerate() {
        if !seen.insert(p.id.as_str()) {
            report.push(
                format!("/places/{k}/id"),
                format!("duplicate place id {:?}", p.id),
            );
        }
        if p.degree == 0 {
            report.push(
                format!("/places/{k}/deg"),
                format!("place {:?} has degree 0", p.id),
            );
        }
    }
    for (id, inv) in &spec.invariants {
        if !inv.is_zero() && !seen.contains(id.as_str()) {
            report.push(
                format!("/invariants/{id}"),
                format!("place {id:?} has nonzero invariant but is not declared"),
            );
        }
    }
    let total: QModZ = spec.invariants.values().cloned().sum();
    if !total.is_zero() {
        report.push(
            "/invariants",
            format!("invariant sum ≢ 0 (sum ≡ {total} mod ℤ)"),
        );
    }
    match lcm_u64(spec.invariants.values().map(|v| v.order().unwrap_or(0))) {
        Ok(l) if spec.d > 0 && l != spec.d as u64 => {
            report.push("/invariants", format!("lcm of orders {l} ≠ {}", spec.d))
        }
        Err(e) => report.push("/invariants", e.to_string()),
        _ => {}
    }
    report.finish()
}

pub fn ramification_locus(spec: &AlgebraSpec) -> Vec<&Place> {
    spec.ramification_locus()
}

/// `inv_y(D ⊗_F L) = [L_y : F_x] · inv_x(D)`.
pub fn invariant_after_base_change(spec: &AlgebraSpec, x: &str, local_degree: u32) -> QModZ {
    spec.inv(x).scale(local_degree as i64)
}

pub fn torsion_order(inv: &QModZ) -> u64 {
    // Representatives are reduced fractions; the denominator is the order.
    inv.order().expect("torsion order exceeds u64")
}

/// A place of `L` lying over a place of `F`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionPlace {
    pub id: String,
    pub over: String,
    pub local_degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absolute_degree: Option<u32>,
}

/// Degree bookkeeping for a finite extension `L/F`: only the fibres over the
/// places that matter for a computation are recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionShape {
    #[serde(rename = "degree")]
    pub total_degree: u32,
    #[serde(default)]
    pub places: Vec<ExtensionPlace>,
}

impl ExtensionShape {
    /// `L = F` restricted to the given places.
    pub fn trivial<'a>(places: impl IntoIterator<Item = &'a str>) -> Self {
        ExtensionShape {
            total_degree: 1,
            places: places
                .into_iter()
                .map(|x| ExtensionPlace {
                    id: x.to_string(),
                    over: x.to_string(),
                    local_degree: 1,
                    absolute_degree: None,
                })
                .collect(),
        }
    }

    pub fn places_above(&self) -> BTreeMap<&str, Vec<&ExtensionPlace>> {
        let mut m: BTreeMap<&str, Vec<&ExtensionPlace>> = BTreeMap::new();
        for p in &self.places {
            m.entry(p.over.as_str()).or_default().push(p);
        }
        m
    }

    pub fn above(&self, x: &str) -> Vec<&ExtensionPlace> {
        self.places.iter().filter(|p| p.over == x).collect()
    }

    pub fn has_fibre(&self, x: &str) -> bool {
        self.places.iter().any(|p| p.over == x)
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_degree == 0 {
            return Err(Error::InvalidExtension("[L:F] must be at least 1".into()));
        }
        let mut ids = BTreeSet::new();
        for p in &self.places {
            if !ids.insert(p.id.as_str()) {
                return Err(Error::InvalidExtension(format!(
                    "duplicate L-place {:?}",
                    p.id
                )));
            }
            if p.local_degree == 0 {
                return Err(Error::InvalidExtension(format!(
                    "L-place {:?} has local degree 0",
                    p.id
                )));
            }
            if p.absolute_degree == Some(0) {
                return Err(Error::InvalidExtension(format!(
                    "L-place {:?} has absolute degree 0",
                    p.id
                )));
            }
        }
        for (x, ys) in self.places_above() {
            let s: u64 = ys.iter().map(|y| y.local_degree as u64).sum();
            if s != self.total_degree as u64 {
                return Err(Error::InvalidExtension(format!(
                    "local degrees over {x:?} sum to {s}, expected [L:F] = {}",
                    self.total_degree
                )));
            }
        }
        Ok(())
    }
}

/// Where a leg sits: a place of `F` and the index of the geometric point over it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LegSite {
    pub place: String,
    pub frobenius_index: u32,
}

/// Legs with no site are generic, i.e. away from `Ram(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LegAssignment {
    pub entries: BTreeMap<u32, Option<LegSite>>,
}

impl LegAssignment {
    pub fn generic<I: IntoIterator<Item = u32>>(legs: I) -> Self {
        LegAssignment {
            entries: legs.into_iter().map(|i| (i, None)).collect(),
        }
    }

    pub fn assign(&mut self, leg: u32, place: impl Into<String>, frobenius_index: u32) {
        self.entries.insert(
            leg,
            Some(LegSite {
                place: place.into(),
                frobenius_index,
            }),
        );
    }

    pub fn site(&self, leg: u32) -> Option<&LegSite> {
        self.entries.get(&leg).and_then(|s| s.as_ref())
    }

    /// Legs whose site lies over `x`.
    pub fn legs_at(&self, x: &str) -> Vec<u32> {
        self.entries
            .iter()
            .filter(|(_, s)| s.as_ref().is_some_and(|s| s.place == x))
            .map(|(i, _)| *i)
            .collect()
    }

    pub fn occupied_places(&self) -> BTreeSet<&str> {
        self.entries
            .values()
            .flatten()
            .map(|s| s.place.as_str())
            .collect()
    }

    pub fn validate(&self, algebra: &AlgebraSpec) -> Result<()> {
        for (i, site) in &self.entries {
            let Some(site) = site else { continue };
            let p = algebra
                .place(&site.place)
                .ok_or_else(|| Error::UnknownPlace(site.place.clone()))?;
            if site.frobenius_index >= p.degree {
                return Err(Error::InvalidPlace(format!(
                    "leg {i}: frobenius index {} not in [0, {})",
                    site.frobenius_index, p.degree
                )));
            }
        }
        Ok(())
    }
}

/// Sum of all invariants as a rational, before reduction mod ℤ.
pub fn raw_invariant_sum(spec: &AlgebraSpec) -> Rational {
    spec.invariants
        .values()
        .map(|v| v.representative().clone())
        .sum()
}
