//! Delta invariants of the projectivized bundle `P_V(L^{-1} ⊕ O_V)` with
//! boundary `a·V0 + b·Vinf`.
//!
//! Everything is expressed through the centroid
//! `Φ(A, B, n) = ∫_A^B t^{n+1} dt / ∫_A^B t^n dt`, where `A = r - (1 - a)`
//! and `B = r + (1 - b)`. The three candidate divisors give
//!
//! * a divisor pulled back from the base: `r·δ(V) / Φ`
//! * the zero section `V0`: `(1 - a) / (Φ - A)`
//! * the infinity section `Vinf`: `(1 - b) / (B - Φ)`
//!
//! and the delta invariant is the smallest of the three.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// What is known about `δ(V)` for the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeltaKnowledge {
    /// A known nonnegative value.
    Exact(Rational),
    /// Only `δ(V) >= 1`, i.e. the base is K-semistable.
    AtLeastOne,
}

impl DeltaKnowledge {
    pub fn exact(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::domain(format!("delta must be nonnegative (got {value})")));
        }
        Ok(DeltaKnowledge::Exact(value))
    }

    /// `min(δ, 1)`, which is all that matters once the value is capped by 1.
    pub fn capped_at_one(&self) -> Rational {
        match self {
            DeltaKnowledge::Exact(v) if *v < 1 => v.clone(),
            _ => Rational::one(),
        }
    }
}

impl fmt::Display for DeltaKnowledge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaKnowledge::Exact(v) => write!(f, "{v}"),
            DeltaKnowledge::AtLeastOne => write!(f, "ge1"),
        }
    }
}

/// Accepts `ge1` or an exact nonnegative rational.
impl FromStr for DeltaKnowledge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("ge1") {
            return Ok(DeltaKnowledge::AtLeastOne);
        }
        DeltaKnowledge::exact(t.parse()?)
    }
}

impl Serialize for DeltaKnowledge {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DeltaKnowledge {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Base data `(n, r, δ(V))` with `L ~ -(1/r) K_V` and `L^n` normalized to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoBase {
    n: u32,
    r: Rational,
    delta_v: DeltaKnowledge,
}

impl FanoBase {
    pub fn new(n: u32, r: Rational, delta_v: DeltaKnowledge) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be a positive integer"));
        }
        if !r.is_positive() {
            return Err(Error::domain(format!("r must be positive (got {r})")));
        }
        Ok(FanoBase { n, r, delta_v })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn delta_v(&self) -> &DeltaKnowledge {
        &self.delta_v
    }
}

/// Boundary coefficients `(a, b)` on `V0` and `Vinf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleBoundary {
    pub a: Rational,
    pub b: Rational,
}

impl BundleBoundary {
    pub fn new(a: Rational, b: Rational) -> Self {
        BundleBoundary { a, b }
    }

    pub fn empty() -> Self {
        BundleBoundary::new(Rational::zero(), Rational::zero())
    }

    /// Checks the log Fano range for slope `r`.
    pub fn validate(&self, r: &Rational) -> Result<()> {
        let one = Rational::one();
        if self.b.is_negative() || self.b >= one {
            return Err(Error::domain(format!("b must satisfy 0 <= b < 1 (got {})", self.b)));
        }
        if *r > one {
            if self.a.is_negative() || self.a >= one {
                return Err(Error::domain(format!(
                    "a must satisfy 0 <= a < 1 when r > 1 (got {})",
                    self.a
                )));
            }
        } else {
            let lower = &one - r;
            if self.a <= lower || self.a >= one {
                return Err(Error::domain(format!(
                    "a must satisfy 1-r < a < 1 when r <= 1, i.e. {lower} < a < 1 (got {})",
                    self.a
                )));
            }
        }
        Ok(())
    }

    /// `A = r - (1 - a)`.
    pub fn lower_end(&self, r: &Rational) -> Rational {
        r - (Rational::one() - &self.a)
    }

    /// `B = r + (1 - b)`.
    pub fn upper_end(&self, r: &Rational) -> Rational {
        r + (Rational::one() - &self.b)
    }
}

/// Candidate divisor attaining a branch of a delta formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Divisor {
    BaseDivisor,
    V0,
    Vinf,
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Divisor::BaseDivisor => "BaseDivisor",
            Divisor::V0 => "V0",
            Divisor::Vinf => "Vinf",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branches {
    /// `None` when only `δ(V) >= 1` is known.
    pub base: Option<Rational>,
    pub v0: Rational,
    pub vinf: Rational,
}

/// The three branch values of a delta formula and their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBreakdown {
    pub branches: Branches,
    /// Base branch evaluated at `δ(V) = 1`; the coefficient of `δ(V)`.
    pub base_at_delta_one: Rational,
    /// Exact minimum, or a proven lower bound when `lower_bound_only` is set.
    pub value: Rational,
    pub lower_bound_only: bool,
    /// Present with `lower_bound_only`: the value is at most this.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper_bound: Option<Rational>,
    pub minimizers: BTreeSet<Divisor>,
}

impl DeltaBreakdown {
    /// Assembles the breakdown from the coefficient of `δ(V)` in the base
    /// branch and the two section branches.
    pub fn from_branches(base_factor: Rational, v0: Rational, vinf: Rational, delta: &DeltaKnowledge) -> Self {
        match delta {
            DeltaKnowledge::Exact(d) => {
                let base = &base_factor * d;
                let value = [&base, &v0, &vinf].into_iter().min().unwrap().clone();
                let minimizers = [(Divisor::BaseDivisor, &base), (Divisor::V0, &v0), (Divisor::Vinf, &vinf)]
                    .into_iter()
                    .filter(|(_, v)| **v == value)
                    .map(|(d, _)| d)
                    .collect();
                DeltaBreakdown {
                    branches: Branches { base: Some(base), v0, vinf },
                    base_at_delta_one: base_factor,
                    value,
                    lower_bound_only: false,
                    upper_bound: None,
                    minimizers,
                }
            }
            DeltaKnowledge::AtLeastOne => {
                let sections = (&v0).min(&vinf).clone();
                let minimizers = [(Divisor::V0, &v0), (Divisor::Vinf, &vinf)]
                    .into_iter()
                    .filter(|(_, v)| **v == sections)
                    .map(|(d, _)| d)
                    .collect();
                let (value, lower_bound_only, upper_bound) = if sections <= base_factor {
                    (sections, false, None)
                } else {
                    // indeterminate without the exact δ(V)
                    (base_factor.clone(), true, Some(sections))
                };
                DeltaBreakdown {
                    branches: Branches { base: None, v0, vinf },
                    base_at_delta_one: base_factor,
                    value,
                    lower_bound_only,
                    upper_bound,
                    minimizers,
                }
            }
        }
    }
}

fn check_ends(lower: &Rational, upper: &Rational) -> Result<()> {
    if lower.is_negative() {
        return Err(Error::domain(format!("centroid requires A >= 0 (got A={lower})")));
    }
    if lower >= upper {
        return Err(Error::domain(format!("centroid requires A < B (got A={lower}, B={upper})")));
    }
    Ok(())
}

/// `Φ(A, B, n) = (n+1)/(n+2) · (B^{n+2} - A^{n+2}) / (B^{n+1} - A^{n+1})`,
/// the centroid of the measure `t^n dt` on `[A, B]`.
pub fn centroid_phi(lower: &Rational, upper: &Rational, n: u32) -> Result<Rational> {
    check_ends(lower, upper)?;
    let num = upper.pow(n + 2) - lower.pow(n + 2);
    let den = upper.pow(n + 1) - lower.pow(n + 1);
    Ok(Rational::from(n + 1) / Rational::from(n + 2) * num / den)
}

/// `β0 = 1 / (Φ(r-1, r+1, n) - (r-1))`, the `V0` threshold of the smooth bundle.
pub fn beta_zero(n: u32, r: &Rational) -> Result<Rational> {
    let one = Rational::one();
    if *r <= one {
        return Err(Error::domain(format!("beta_0 requires r > 1 (got {r})")));
    }
    let lower = r - &one;
    let phi = centroid_phi(&lower, &(r + &one), n)?;
    Ok((phi - lower).recip())
}

/// `(S(V0), S(Vinf)) = (Φ - A, B - Φ)` for ends `A`, `B`.
///
/// Also accepts the formal cone substitution `A = 0`.
pub fn s_invariants(n: u32, lower: &Rational, upper: &Rational) -> Result<(Rational, Rational)> {
    let phi = centroid_phi(lower, upper, n)?;
    Ok((&phi - lower, upper - &phi))
}

pub fn s_v0(base: &FanoBase, bdry: &BundleBoundary) -> Result<Rational> {
    bdry.validate(&base.r)?;
    Ok(s_invariants(base.n, &bdry.lower_end(&base.r), &bdry.upper_end(&base.r))?.0)
}

pub fn s_vinf(base: &FanoBase, bdry: &BundleBoundary) -> Result<Rational> {
    bdry.validate(&base.r)?;
    Ok(s_invariants(base.n, &bdry.lower_end(&base.r), &bdry.upper_end(&base.r))?.1)
}

/// Delta invariant of `(P_V(L^{-1} ⊕ O_V), a·V0 + b·Vinf)`.
pub fn bundle_delta(base: &FanoBase, bdry: &BundleBoundary) -> Result<DeltaBreakdown> {
    bdry.validate(&base.r)?;
    let lower = bdry.lower_end(&base.r);
    let upper = bdry.upper_end(&base.r);
    let phi = centroid_phi(&lower, &upper, base.n)?;
    let one = Rational::one();
    let base_factor = &base.r / &phi;
    let v0 = (&one - &bdry.a) / (&phi - &lower);
    let vinf = (&one - &bdry.b) / (&upper - &phi);
    Ok(DeltaBreakdown::from_branches(base_factor, v0, vinf, &base.delta_v))
}

/// The same three branches through `β_{a,b} = (1-a)/(Φ - A)`:
/// `{ r·δ·β/(1 - a + A·β), β, (1-b)·β/((B-A)·β - (1-a)) }`.
///
/// Used as a second algebraic route to [`bundle_delta`]; `δ` must be exact.
pub fn bundle_branches_via_beta(
    n: u32,
    r: &Rational,
    bdry: &BundleBoundary,
    delta_v: &Rational,
) -> Result<[Rational; 3]> {
    bdry.validate(r)?;
    let lower = bdry.lower_end(r);
    let upper = bdry.upper_end(r);
    let one = Rational::one();
    let one_minus_a = &one - &bdry.a;
    let beta = &one_minus_a / (centroid_phi(&lower, &upper, n)? - &lower);
    let base = r * delta_v * &beta / (&one_minus_a + &lower * &beta);
    let vinf = (&one - &bdry.b) * &beta / ((&upper - &lower) * &beta - &one_minus_a);
    Ok([base, beta, vinf])
}

/// Two-branch smooth form `min{ δ r β0 / (1 + β0 (r-1)), β0 }`.
pub fn smooth_threshold_relation(n: u32, r: &Rational, delta_v: &DeltaKnowledge) -> Result<Rational> {
    let DeltaKnowledge::Exact(delta) = delta_v else {
        return Err(Error::domain("the two-branch smooth formula needs an exact delta(V)"));
    };
    let beta0 = beta_zero(n, r)?;
    let one = Rational::one();
    let base = delta * r * &beta0 / (&one + &beta0 * (r - &one));
    Ok(base.min(beta0))
}

/// `δ(V)` at which the base and `V0` branches of the smooth bundle tie:
/// `1/r + β0 (1 - 1/r)`.
pub fn smooth_threshold_delta(n: u32, r: &Rational) -> Result<Rational> {
    let beta0 = beta_zero(n, r)?;
    let inv = r.recip();
    Ok(&inv + beta0 * (Rational::one() - &inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn base(n: u32, r: Rational, d: &str) -> FanoBase {
        FanoBase::new(n, r, d.parse().unwrap()).unwrap()
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid_phi(&q(1, 1), &q(3, 1), 1).unwrap(), q(13, 6));
        for n in 0..6u32 {
            let b = q(7, 3);
            assert_eq!(centroid_phi(&q(0, 1), &b, n).unwrap(), Rational::from(n + 1) * &b / Rational::from(n + 2));
        }
        assert_eq!(centroid_phi(&q(1, 2), &q(5, 2), 0).unwrap(), q(3, 2));
    }

    #[test]
    fn centroid_domain_errors() {
        assert!(matches!(centroid_phi(&q(3, 1), &q(3, 1), 1), Err(Error::Domain(_))));
        assert!(matches!(centroid_phi(&q(4, 1), &q(3, 1), 1), Err(Error::Domain(_))));
        assert!(matches!(centroid_phi(&q(-1, 2), &q(3, 1), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn beta_zero_examples() {
        assert_eq!(beta_zero(1, &q(2, 1)).unwrap(), q(6, 7));
        assert_eq!(beta_zero(1, &q(3, 1)).unwrap(), q(9, 10));
        assert_eq!(beta_zero(2, &q(2, 1)).unwrap(), q(13, 17));
        assert!(matches!(beta_zero(2, &q(1, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn s_invariants_blowup_of_plane() {
        let b = base(1, q(2, 1), "1");
        let bd = BundleBoundary::empty();
        assert_eq!(s_v0(&b, &bd).unwrap(), q(7, 6));
        assert_eq!(s_vinf(&b, &bd).unwrap(), q(5, 6));
    }

    #[test]
    fn s_invariants_cone_substitution() {
        for n in 1..5u32 {
            let upper = q(5, 2);
            let (s0, _) = s_invariants(n, &q(0, 1), &upper).unwrap();
            assert_eq!(s0, Rational::from(n + 1) * upper / Rational::from(n + 2));
        }
    }

    #[test]
    fn bundle_blowup_of_plane() {
        let out = bundle_delta(&base(1, q(2, 1), "1"), &BundleBoundary::empty()).unwrap();
        assert_eq!(out.branches.base, Some(q(12, 13)));
        assert_eq!(out.branches.v0, q(6, 7));
        assert_eq!(out.branches.vinf, q(6, 5));
        assert_eq!(out.value, q(6, 7));
        assert_eq!(out.minimizers, BTreeSet::from([Divisor::V0]));
        assert!(!out.lower_bound_only);
    }

    #[test]
    fn bundle_unstable_base_wins() {
        let out = bundle_delta(&base(1, q(2, 1), "1/2"), &BundleBoundary::empty()).unwrap();
        assert_eq!(out.value, q(6, 13));
        assert_eq!(out.minimizers, BTreeSet::from([Divisor::BaseDivisor]));
    }

    #[test]
    fn bundle_semistable_symbolic() {
        let out = bundle_delta(&base(1, q(2, 1), "ge1"), &BundleBoundary::empty()).unwrap();
        assert_eq!(out.value, q(6, 7));
        assert_eq!(out.branches.base, None);
        assert_eq!(out.base_at_delta_one, q(12, 13));
        assert_eq!(out.minimizers, BTreeSet::from([Divisor::V0]));
        assert!(!out.lower_bound_only);
    }

    #[test]
    fn bundle_threshold_tie() {
        let out = bundle_delta(&base(1, q(2, 1), "13/14"), &BundleBoundary::empty()).unwrap();
        assert_eq!(out.value, q(6, 7));
        assert_eq!(out.minimizers, BTreeSet::from([Divisor::BaseDivisor, Divisor::V0]));
        assert_eq!(smooth_threshold_delta(1, &q(2, 1)).unwrap(), q(13, 14));
    }

    #[test]
    fn semistable_base_never_undercuts_both_sections() {
        // base < V0 forces Φ < r while base < Vinf forces Φ > r
        for n in 1..5u32 {
            for r in [q(1, 3), q(1, 2), q(1, 1), q(3, 2), q(4, 1)] {
                for a in [q(0, 1), q(1, 4), q(3, 4), q(9, 10)] {
                    for b in [q(0, 1), q(1, 2), q(9, 10)] {
                        let bd = BundleBoundary::new(a.clone(), b);
                        if bd.validate(&r).is_err() {
                            continue;
                        }
                        let out = bundle_delta(&base(n, r.clone(), "ge1"), &bd).unwrap();
                        assert!(!out.lower_bound_only);
                        assert_eq!(out.value, (&out.branches.v0).min(&out.branches.vinf).clone());
                    }
                }
            }
        }
    }

    #[test]
    fn breakdown_reports_lower_bound_when_sections_are_larger() {
        let out = DeltaBreakdown::from_branches(q(1, 2), q(3, 4), q(2, 1), &DeltaKnowledge::AtLeastOne);
        assert!(out.lower_bound_only);
        assert_eq!(out.value, q(1, 2));
        assert_eq!(out.upper_bound, Some(q(3, 4)));
    }

    #[test]
    fn boundary_domain_is_strict() {
        let b = base(1, q(1, 2), "1");
        // r <= 1 needs a > 1 - r = 1/2
        assert!(matches!(bundle_delta(&b, &BundleBoundary::new(q(1, 2), q(0, 1))), Err(Error::Domain(_))));
        assert!(bundle_delta(&b, &BundleBoundary::new(q(3, 5), q(0, 1))).is_ok());
        let b2 = base(2, q(2, 1), "1");
        assert!(matches!(bundle_delta(&b2, &BundleBoundary::new(q(1, 1), q(0, 1))), Err(Error::Domain(_))));
        assert!(matches!(bundle_delta(&b2, &BundleBoundary::new(q(0, 1), q(-1, 3))), Err(Error::Domain(_))));
        assert!(matches!(bundle_delta(&b2, &BundleBoundary::new(q(-1, 4), q(0, 1))), Err(Error::Domain(_))));
    }

    #[test]
    fn smooth_relation_examples() {
        let r = q(2, 1);
        assert_eq!(smooth_threshold_relation(1, &r, &"1".parse().unwrap()).unwrap(), q(6, 7));
        assert_eq!(smooth_threshold_relation(1, &r, &"1/2".parse().unwrap()).unwrap(), q(6, 13));
        assert_eq!(smooth_threshold_relation(1, &r, &"13/14".parse().unwrap()).unwrap(), q(6, 7));
        assert!(smooth_threshold_relation(1, &r, &DeltaKnowledge::AtLeastOne).is_err());
        assert!(smooth_threshold_relation(1, &q(1, 1), &"1".parse().unwrap()).is_err());
    }

    #[test]
    fn beta_route_matches_direct() {
        let bd = BundleBoundary::new(q(1, 3), q(1, 4));
        let via = bundle_branches_via_beta(2, &q(3, 2), &bd, &q(4, 5)).unwrap();
        let direct = bundle_delta(&base(2, q(3, 2), "4/5"), &bd).unwrap();
        assert_eq!(via, [direct.branches.base.unwrap(), direct.branches.v0, direct.branches.vinf]);
    }

    #[test]
    fn delta_knowledge_parsing() {
        assert_eq!("ge1".parse::<DeltaKnowledge>().unwrap(), DeltaKnowledge::AtLeastOne);
        assert_eq!("3/4".parse::<DeltaKnowledge>().unwrap(), DeltaKnowledge::Exact(q(3, 4)));
        assert!(matches!("-1".parse::<DeltaKnowledge>(), Err(Error::Domain(_))));
        assert!(matches!("0.x".parse::<DeltaKnowledge>(), Err(Error::Parse(_))));
    }
}
