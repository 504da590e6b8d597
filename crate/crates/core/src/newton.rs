//! Newton points and the sets `B(GL_d, λ)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affweyl::{newton_point, AffineElement};
use crate::brauer::AlgebraSpec;
use crate::coweight::{dominance_leq, Coweight};
use crate::error::{Error, Result};
use crate::exactq::Rational;

/// A weakly decreasing rational tuple with integral breakpoints.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NewtonPoint(Vec<Rational>);

impl fmt::Debug for NewtonPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NewtonPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl NewtonPoint {
    pub fn new(slopes: Vec<Rational>) -> Result<Self> {
        if validate_newton(&slopes) {
            Ok(NewtonPoint(slopes))
        } else {
            let s: Vec<String> = slopes.iter().map(|x| x.to_string()).collect();
            Err(Error::InvalidScenario(format!(
                "not a Newton point: ({})",
                s.join(",")
            )))
        }
    }

    /// Sorts decreasingly; no breakpoint check.
    pub fn from_unsorted(mut slopes: Vec<Rational>) -> Self {
        slopes.sort_by(|a, b| b.cmp(a));
        NewtonPoint(slopes)
    }

    pub fn from_coweight(lambda: &Coweight) -> Self {
        NewtonPoint(lambda.to_rationals())
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn is_isoclinic(&self) -> bool {
        self.0.first() == self.0.last()
    }

    pub fn leq(&self, other: &NewtonPoint) -> bool {
        dominance_leq(&self.0, &other.0).unwrap_or(false)
    }
}

pub fn validate_newton(slopes: &[Rational]) -> bool {
    if slopes.windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    let mut partial = Rational::zero();
    for (j, x) in slopes.iter().enumerate() {
        partial += x;
        let breakpoint = j + 1 == slopes.len() || slopes[j + 1] < *x;
        if breakpoint && !partial.is_integer() {
            return false;
        }
    }
    true
}

/// `B(GL_d, λ)`: Newton points `ν ⪯ λ`.
///
/// Enumerates concave polygons from `(0,0)` to `(d, deg λ)` through integral
/// breakpoints lying between the chord and the polygon of `λ`.
pub fn b_set(lambda: &Coweight) -> BTreeSet<NewtonPoint> {
    let d = lambda.d();
    let deg = lambda.degree();
    let upper: Vec<i64> = (0..=d).map(|j| lambda.top_sum(j)).collect();
    let lam = lambda.to_rationals();
    let mut out = BTreeSet::new();
    let mut slopes = Vec::with_capacity(d);
    extend(d, deg, &upper, 0, 0, None, &mut slopes, &mut |s| {
        if dominance_leq(s, &lam).unwrap_or(false) {
            out.insert(NewtonPoint(s.to_vec()));
        }
    });
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    d: usize,
    deg: i64,
    upper: &[i64],
    j: usize,
    sum: i64,
    last: Option<&Rational>,
    slopes: &mut Vec<Rational>,
    emit: &mut dyn FnMut(&[Rational]),
) {
    if j == d {
        emit(slopes);
        return;
    }
    for next in j + 1..=d {
        let lo = if next == d {
            deg
        } else {
            (next as i64 * deg).div_euclid(d as i64)
                + i64::from((next as i64 * deg).rem_euclid(d as i64) != 0)
        };
        let hi = if next == d { deg } else { upper[next] };
        for s in lo..=hi {
            let slope = Rational::new(s - sum, (next - j) as i64).expect("positive run");
            if last.is_some_and(|l| slope >= *l) {
                continue;
            }
            let before = slopes.len();
            slopes.extend(std::iter::repeat_n(slope.clone(), next - j));
            extend(d, deg, upper, next, s, Some(&slope), slopes, emit);
            slopes.truncate(before);
        }
    }
}

/// The isoclinic point `(deg λ / d, …)`.
pub fn basic_point(lambda: &Coweight) -> NewtonPoint {
    let d = lambda.d() as i64;
    let slope = Rational::new(lambda.degree(), d).expect("d ≥ 1");
    NewtonPoint(vec![slope; lambda.d()])
}

/// Newton point of the cyclic product `w̃_1 ⋯ w̃_f`.
pub fn shapiro_product(tuple: &[AffineElement]) -> Result<NewtonPoint> {
    let first = tuple
        .first()
        .ok_or_else(|| Error::InvalidScenario("empty tuple".into()))?;
    let d = first.d();
    let mut p = AffineElement::identity(d);
    for e in tuple {
        if e.d() != d {
            return Err(Error::RankMismatch {
                expected: d,
                found: e.d(),
            });
        }
        p = p.mul(e);
    }
    Ok(newton_point(&p))
}

/// `B(G_x, λ)` at a place of `F`. Only split places are described; at a
/// ramified place only the basic point is available.
pub fn local_b_set(
    algebra: &AlgebraSpec,
    x: &str,
    lambda: &Coweight,
) -> Result<BTreeSet<NewtonPoint>> {
    if algebra.is_ramified(x) {
        return Err(Error::Unsupported(format!(
            "non-basic Newton points at the ramified place {x:?}"
        )));
    }
    Ok(b_set(lambda))
}

pub fn local_basic_point(lambda: &Coweight) -> NewtonPoint {
    basic_point(lambda)
}
