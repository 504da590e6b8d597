//! Simple `(D,φ)`-spaces presented by a pair `(L, Π)`, their invariants and
//! local slope data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::brauer::{invariant_after_base_change, validate_algebra, AlgebraSpec, ExtensionShape};
use crate::error::{Error, Result};
use crate::exactq::{bracket_q, lcm_denominators, lcm_u64, QModZ, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoSpaceSpec {
    pub algebra: AlgebraSpec,
    #[serde(rename = "L")]
    pub extension: ExtensionShape,
    #[serde(rename = "pi", default)]
    pub pi_degrees: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleSpaceReport {
    pub d_pi: u64,
    pub delta_invariants: BTreeMap<String, QModZ>,
    pub d_delta: u64,
    pub dim_over_fbar: u64,
    pub m: u64,
    pub multiplicity: u64,
}

/// One isoclinic piece of the localization at a place of `F`. `y` is `None`
/// for a fibre not listed in the extension shape, which then carries slope 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPiece {
    pub y: Option<String>,
    pub slope: Rational,
    pub dim: u64,
}

impl IsoSpaceSpec {
    pub fn pi(&self, y: &str) -> Rational {
        self.pi_degrees.get(y).cloned().unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        validate_algebra(&self.algebra).into_result()?;
        self.extension.validate()?;
        for p in &self.extension.places {
            if self.algebra.place(&p.over).is_none() {
                return Err(Error::UnknownPlace(p.over.clone()));
            }
        }
        for y in self.pi_degrees.keys() {
            if !self.extension.places.iter().any(|p| &p.id == y) {
                return Err(Error::UnknownPlace(y.clone()));
            }
        }
        for x in self.algebra.ramified_ids() {
            if !self.extension.has_fibre(&x) {
                return Err(Error::InvalidExtension(format!(
                    "no places of L listed over the ramified place {x:?}"
                )));
            }
        }
        let total: Rational = self.pi_degrees.values().sum();
        if !total.is_zero() {
            return Err(Error::NotPrincipal(total.to_string()));
        }
        Ok(())
    }
}

pub fn classify_simple(spec: &IsoSpaceSpec) -> Result<SimpleSpaceReport> {
    spec.validate()?;
    let mut pis: Vec<Rational> = spec
        .extension
        .places
        .iter()
        .map(|p| spec.pi(&p.id))
        .collect();
    pis.push(Rational::zero());
    let d_pi = lcm_denominators(&pis)?;

    let mut delta = BTreeMap::new();
    for p in &spec.extension.places {
        let base = invariant_after_base_change(&spec.algebra, &p.over, p.local_degree);
        delta.insert(p.id.clone(), base - QModZ::new(spec.pi(&p.id)));
    }
    let d_delta = lcm_u64(
        delta
            .values()
            .map(|v| v.order())
            .collect::<Result<Vec<_>>>()?,
    )?;

    let d = spec.algebra.d as u64;
    let n = spec.extension.total_degree as u64;
    let m = n * d_delta;
    if !(d * d_delta).is_multiple_of(d_pi) {
        return Err(Error::NotRealizable(format!(
            "multiplicity {}·{}/{} is not an integer",
            d, d_delta, d_pi
        )));
    }
    Ok(SimpleSpaceReport {
        d_pi,
        delta_invariants: delta,
        d_delta,
        dim_over_fbar: d * m,
        m,
        multiplicity: d * d_delta / d_pi,
    })
}

pub fn localize(spec: &IsoSpaceSpec, x: &str) -> Result<Vec<LocalPiece>> {
    let rep = classify_simple(spec)?;
    let d = spec.algebra.d as u64;
    let above = spec.extension.above(x);
    if above.is_empty() {
        return Ok(vec![LocalPiece {
            y: None,
            slope: Rational::zero(),
            dim: d * spec.extension.total_degree as u64 * rep.d_delta,
        }]);
    }
    above
        .into_iter()
        .map(|p| {
            Ok(LocalPiece {
                y: Some(p.id.clone()),
                slope: spec.pi(&p.id).div_int(p.local_degree as i64)?,
                dim: d * p.local_degree as u64 * rep.d_delta,
            })
        })
        .collect()
}

/// `deg(V_x, φ_x) = Σ_{y|x} d·d(Δ)·deg_y(Π)`.
pub fn degree_at(spec: &IsoSpaceSpec, x: &str) -> Result<Rational> {
    let rep = classify_simple(spec)?;
    let k = (spec.algebra.d as u64 * rep.d_delta) as i64;
    Ok(spec
        .extension
        .above(x)
        .into_iter()
        .map(|p| spec.pi(&p.id).mul_int(k))
        .sum())
}

/// `deg(V_x, φ_x)/d ≡ [m·inv_x(D)]` modulo `ℤ`.
pub fn check_degree_congruence(spec: &IsoSpaceSpec, x: &str) -> Result<bool> {
    let rep = classify_simple(spec)?;
    let lhs = degree_at(spec, x)?.div_int(spec.algebra.d as i64)?;
    let rhs = bracket_q(&spec.algebra.inv(x).representative().mul_int(rep.m as i64));
    Ok((lhs - rhs).is_integer())
}

/// Places of `F` mentioned by an [`IsoSpaceSpec`]: all declared places and every base of
/// a listed place of `L`.
pub fn relevant_places(spec: &IsoSpaceSpec) -> Vec<String> {
    let mut out: Vec<String> = spec.algebra.places.iter().map(|p| p.id.clone()).collect();
    out.extend(spec.extension.places.iter().map(|p| p.over.clone()));
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoSpaceSummary {
    pub report: SimpleSpaceReport,
    pub places: BTreeMap<String, PlaceSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceSummary {
    pub pieces: Vec<LocalPiece>,
    pub degree: Rational,
    pub congruence: bool,
}

pub fn summarize(spec: &IsoSpaceSpec) -> Result<IsoSpaceSummary> {
    let report = classify_simple(spec)?;
    let mut places = BTreeMap::new();
    for x in relevant_places(spec) {
        places.insert(
            x.clone(),
            PlaceSummary {
                pieces: localize(spec, &x)?,
                degree: degree_at(spec, &x)?,
                congruence: check_degree_congruence(spec, &x)?,
            },
        );
    }
    Ok(IsoSpaceSummary { report, places })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> IsoSpaceSpec {
        serde_json::from_str(json).unwrap()
    }

    const ALG: &str = r#"{"d":2,"places":[{"id":"x1","deg":1},{"id":"x2","deg":1},{"id":"z1","deg":1},{"id":"z2","deg":1}],"invariants":{"x1":"1/2","x2":"1/2"}}"#;

    fn trivial_l(ids: &[&str]) -> String {
        let ps: Vec<String> = ids
            .iter()
            .map(|x| format!(r#"{{"id":"{x}","over":"{x}","local_degree":1}}"#))
            .collect();
        format!(r#"{{"degree":1,"places":[{}]}}"#, ps.join(","))
    }

    fn first() -> IsoSpaceSpec {
        spec(&format!(
            r#"{{"algebra":{ALG},"L":{},"pi":{{"x1":"1/2","x2":"-1/2"}}}}"#,
            trivial_l(&["x1", "x2"])
        ))
    }

    fn second() -> IsoSpaceSpec {
        spec(&format!(
            r#"{{"algebra":{ALG},"L":{},"pi":{{"z1":"1","z2":"-1"}}}}"#,
            trivial_l(&["x1", "x2", "z1", "z2"])
        ))
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        let rep = classify_simple(&first()).unwrap();
        assert_eq!(
            (
                rep.d_pi,
                rep.d_delta,
                rep.dim_over_fbar,
                rep.m,
                rep.multiplicity
            ),
            (2, 1, 2, 1, 1)
        );
        assert!(rep.delta_invariants.values().all(QModZ::is_zero));

        let rep = classify_simple(&second()).unwrap();
        assert_eq!(
            (
                rep.d_pi,
                rep.d_delta,
                rep.dim_over_fbar,
                rep.m,
                rep.multiplicity
            ),
            (1, 2, 4, 2, 4)
        );
        assert_eq!(rep.delta_invariants["x1"], "1/2".parse().unwrap());
        assert!(rep.delta_invariants["z1"].is_zero());

        let unit = spec(r#"{"algebra":{"d":1},"L":{"degree":1}}"#);
        let rep = classify_simple(&unit).unwrap();
        assert_eq!(
            (rep.d_pi, rep.d_delta, rep.dim_over_fbar, rep.m),
            (1, 1, 1, 1)
        );
    }

    #[test]
    fn localize_examples() {
        let l = localize(&first(), "x1").unwrap();
        assert_eq!(
            l,
            vec![LocalPiece {
                y: Some("x1".into()),
                slope: r("1/2"),
                dim: 2
            }]
        );
        let l = localize(&second(), "x1").unwrap();
        assert_eq!(
            l,
            vec![LocalPiece {
                y: Some("x1".into()),
                slope: r("0"),
                dim: 4
            }]
        );
        let l = localize(&first(), "z9").unwrap();
        assert_eq!(
            l,
            vec![LocalPiece {
                y: None,
                slope: r("0"),
                dim: 2
            }]
        );
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_at(&first(), "x1").unwrap(), r("1"));
        assert_eq!(degree_at(&first(), "x2").unwrap(), r("-1"));
        assert_eq!(degree_at(&first(), "elsewhere").unwrap(), r("0"));
    }

    #[test]
    fn congruence_examples() {
        assert!(check_degree_congruence(&first(), "x1").unwrap());
        assert!(check_degree_congruence(&second(), "x1").unwrap());
        assert!(check_degree_congruence(&second(), "z1").unwrap());
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut s = first();
        s.pi_degrees.insert("x1".into(), r("1"));
        assert!(matches!(classify_simple(&s), Err(Error::NotPrincipal(_))));

        let mut s = first();
        s.extension.places.retain(|p| p.over != "x2");
        s.pi_degrees.clear();
        assert!(matches!(
            classify_simple(&s),
            Err(Error::InvalidExtension(_))
        ));

        let mut s = first();
        s.pi_degrees.insert("nowhere".into(), r("0"));
        assert!(matches!(classify_simple(&s), Err(Error::UnknownPlace(_))));

        let mut s = first();
        s.algebra.invariants.remove("x2");
        assert!(matches!(classify_simple(&s), Err(Error::InvalidAlgebra(_))));

        assert!(serde_json::from_str::<IsoSpaceSpec>(
            r#"{"algebra":{"d":1},"L":{"degree":1},"other":1}"#
        )
        .is_err());
    }

    #[test]
    fn quadratic_extension() {
        // L/F of degree 2, inert at x1 and split at x2.
        let s = spec(&format!(
            r#"{{"algebra":{ALG},"L":{{"degree":2,"places":[
                {{"id":"y1","over":"x1","local_degree":2}},
                {{"id":"y2","over":"x2","local_degree":1}},
                {{"id":"y3","over":"x2","local_degree":1}}]}},
              "pi":{{"y1":"1","y2":"-1/2","y3":"-1/2"}}}}"#
        ));
        let rep = classify_simple(&s).unwrap();
        assert!(rep.delta_invariants["y1"].is_zero());
        assert!(rep.delta_invariants["y2"].is_zero());
        assert_eq!(
            (rep.d_pi, rep.d_delta, rep.m, rep.multiplicity),
            (2, 1, 2, 1)
        );
        for x in relevant_places(&s) {
            assert!(check_degree_congruence(&s, &x).unwrap());
        }
        let sum: Rational = relevant_places(&s)
            .iter()
            .map(|x| degree_at(&s, x).unwrap())
            .sum();
        assert!(sum.is_zero());
        let l = localize(&s, "x1").unwrap();
        assert_eq!(l[0].slope, r("1/2"));
        assert_eq!(l[0].dim, 4);
    }
}
