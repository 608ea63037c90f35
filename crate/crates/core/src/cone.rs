//! Delta invariants of projective cones `C_p(V, L)` with boundary `c·Vinf`,
//! iterated hypersurface cones, and cones over branched covers.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::bundle::{s_invariants, DeltaBreakdown, DeltaKnowledge, FanoBase};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeBoundary {
    c: Rational,
}

impl ConeBoundary {
    pub fn new(c: Rational) -> Result<Self> {
        if c.is_negative() || c >= 1 {
            return Err(Error::domain(format!("c must satisfy 0 <= c < 1 (got {c})")));
        }
        Ok(ConeBoundary { c })
    }

    pub fn none() -> Self {
        ConeBoundary { c: Rational::zero() }
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }
}

/// Whether the lower bound of the cone formula has a proof for these inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofCoverage {
    Full,
    /// `r > n + 1`: the formula value is a proven upper bound only.
    UpperBoundOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDelta {
    #[serde(flatten)]
    pub breakdown: DeltaBreakdown,
    pub r_effective: Rational,
    pub proof_coverage: ProofCoverage,
}

/// Cone formula for a base of dimension `dim` (zero allowed, for cones over
/// divisors of curves).
pub(crate) fn cone_delta_raw(dim: u32, r: &Rational, c: &Rational, delta: &DeltaKnowledge) -> Result<ConeDelta> {
    if !r.is_positive() {
        return Err(Error::domain(format!("r must be positive (got {r})")));
    }
    let bdry = ConeBoundary::new(c.clone())?;
    let one = Rational::one();
    let dim_q = Rational::from(dim);
    let n1 = &dim_q + &one;
    let n2 = &n1 + &one;
    let denom = r + &one - &bdry.c;
    let v0 = &n2 * r / (&n1 * &denom);
    let vinf = &n2 * (&one - &bdry.c) / &denom;
    let breakdown = DeltaBreakdown::from_branches(v0.clone(), v0, vinf, delta);
    let proof_coverage = if *r > n1 {
        ProofCoverage::UpperBoundOnly
    } else {
        ProofCoverage::Full
    };
    Ok(ConeDelta {
        breakdown,
        r_effective: r.clone(),
        proof_coverage,
    })
}

/// Delta invariant of `(C_p(V, L), c·Vinf)`.
///
/// Branches: `(n+2) r δ / ((n+1)(r+1-c))`, `(n+2) r / ((n+1)(r+1-c))` for `V0`
/// (log discrepancy `r`), and `(n+2)(1-c) / (r+1-c)` for `Vinf`.
pub fn cone_delta(base: &FanoBase, bdry: &ConeBoundary) -> Result<ConeDelta> {
    cone_delta_raw(base.n(), base.r(), bdry.c(), base.delta_v())
}

/// `(coefficient of δ(V), V0, Vinf)` branch triple.
pub type BranchTriple = [Rational; 3];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// Obtained from the bundle S-invariants with `a = 1 - r`, `b = c`.
    pub bundle_side: BranchTriple,
    pub cone_side: BranchTriple,
    pub agrees: bool,
}

/// Rebuilds the cone branches from the bundle volume computation with the
/// formal substitution `a = 1 - r`, `b = c` (so `A = 0`, `B = r + 1 - c`),
/// using log discrepancies `r` for `V0` and `1 - c` for `Vinf`.
pub fn cone_bundle_consistency(base: &FanoBase, c: &Rational) -> Result<ConsistencyReport> {
    let bdry = ConeBoundary::new(c.clone())?;
    let one = Rational::one();
    let r = base.r();
    let upper = r + &one - bdry.c();
    let (s0, sinf) = s_invariants(base.n(), &Rational::zero(), &upper)?;
    // Φ(0, B, n) equals S(V0) here since A = 0
    let bundle_side = [r / &s0, r / &s0, (&one - bdry.c()) / &sinf];
    let cone = cone_delta(base, &bdry)?;
    let cone_side = [
        cone.breakdown.base_at_delta_one.clone(),
        cone.breakdown.branches.v0.clone(),
        cone.breakdown.branches.vinf.clone(),
    ];
    let agrees = bundle_side == cone_side;
    Ok(ConsistencyReport { bundle_side, cone_side, agrees })
}

/// Smooth degree-`d` hypersurface `V_d^0 ⊂ P^{n+1}` coned `i` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceConeSpec {
    pub n: u32,
    pub d: u32,
    pub i: u32,
    pub delta_v0: DeltaKnowledge,
}

impl HypersurfaceConeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("n must be a positive integer"));
        }
        if self.d < 2 || self.d > self.n + 1 {
            return Err(Error::domain(format!(
                "d must satisfy 2 <= d <= n+1 = {} (got {})",
                self.n + 1,
                self.d
            )));
        }
        if self.i == 0 {
            return Err(Error::domain("the number of cone iterations i must be at least 1"));
        }
        Ok(())
    }

    /// `r_0 = n + 2 - d`.
    pub fn r0(&self) -> u32 {
        self.n + 2 - self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedConeStep {
    pub dimension: u32,
    pub r: Rational,
    pub delta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedCone {
    pub value: Rational,
    pub closed_form: Rational,
    pub composition: Rational,
    /// `δ(V_d^j)` for `j = 1..=i`, from the step-wise composition.
    pub steps: Vec<IteratedConeStep>,
}

/// `(n+2-d)(n+1+i) / ((n+1)(n+2+i-d)) · min(δ(V_d^0), 1)`.
pub fn iterated_closed_form(spec: &HypersurfaceConeSpec) -> Result<Rational> {
    spec.validate()?;
    let (n, d, i) = (spec.n, spec.d, spec.i);
    let num = Rational::from((n + 2 - d) * (n + 1 + i));
    let den = Rational::from((n + 1) * (n + 2 + i - d));
    Ok(num / den * spec.delta_v0.capped_at_one())
}

/// Applies [`cone_delta`] with `c = 0` step by step, carrying `(dim, r, δ)`.
pub fn iterated_composition(spec: &HypersurfaceConeSpec) -> Result<Vec<IteratedConeStep>> {
    spec.validate()?;
    let mut base = FanoBase::new(spec.n, Rational::from(spec.r0()), spec.delta_v0.clone())?;
    let mut steps = Vec::with_capacity(spec.i as usize);
    for _ in 0..spec.i {
        let out = cone_delta(&base, &ConeBoundary::none())?;
        if out.breakdown.lower_bound_only {
            return Err(Error::Disagreement("cone step produced only a lower bound".into()));
        }
        let dimension = base.n() + 1;
        let r = base.r() + Rational::one();
        let delta = out.breakdown.value;
        steps.push(IteratedConeStep { dimension, r: r.clone(), delta: delta.clone() });
        base = FanoBase::new(dimension, r, DeltaKnowledge::Exact(delta))?;
    }
    Ok(steps)
}

/// `δ(V_d^i)`, computed both in closed form and by composition; a mismatch is
/// an error.
pub fn iterated_hypersurface_report(spec: &HypersurfaceConeSpec) -> Result<IteratedCone> {
    let closed_form = iterated_closed_form(spec)?;
    let steps = iterated_composition(spec)?;
    let composition = steps.last().expect("i >= 1").delta.clone();
    if composition != closed_form {
        return Err(Error::Disagreement(format!(
            "iterated cone (n={}, d={}, i={}): closed form {closed_form} != composition {composition}",
            spec.n, spec.d, spec.i
        )));
    }
    Ok(IteratedCone { value: composition.clone(), closed_form, composition, steps })
}

pub fn iterated_hypersurface_delta(spec: &HypersurfaceConeSpec) -> Result<Rational> {
    Ok(iterated_hypersurface_report(spec)?.value)
}

/// Hypersurface `x_{n+1}^k x_{n+2}^{d-k} = g_d(x_0..x_n)`, viewed as the cone
/// over a `k`-fold cover of `P^n` branched along `{g_d = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedConeSpec {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub l: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
}

impl BranchedConeSpec {
    /// `r = (n+1)k - (k-1)d`, possibly nonpositive.
    pub fn r(&self) -> i64 {
        (self.n as i64 + 1) * self.k as i64 - (self.k as i64 - 1) * self.d as i64
    }

    pub fn side_conditions(&self) -> Vec<SideCondition> {
        let (k, d, l) = (self.k as i64, self.d as i64, self.l as i64);
        let cond = |name: &str, holds: bool| SideCondition { name: name.to_string(), holds };
        vec![
            cond("n >= 1", self.n >= 1),
            cond("k >= 2", k >= 2),
            cond("d >= 1", d >= 1),
            cond("l >= 1", l >= 1),
            cond("l < k", l < k),
            cond("gcd(k, l) = 1", k.gcd(&l) == 1),
            cond("k divides d*l - 1", k != 0 && (d * l - 1).rem_euclid(k) == 0),
            cond("r = (n+1)k - (k-1)d > 0", self.r() > 0),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let failed: Vec<String> = self
            .side_conditions()
            .into_iter()
            .filter(|c| !c.holds)
            .map(|c| c.name)
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::domain(format!("branched cone side conditions fail: {}", failed.join("; "))))
        }
    }

    /// `n+1 <= d <= n+2`, where the branched pair is known to be K-semistable.
    pub fn pair_known_semistable(&self) -> bool {
        (self.n + 1..=self.n + 2).contains(&self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    KSemistable,
    KUnstable,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairDeltaSource {
    Input,
    /// `d in [n+1, n+2]`: the pair `(P^n, (k-1)/k S_d)` is K-semistable.
    SemistableLargeDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchedConeDelta {
    #[serde(flatten)]
    pub cone: ConeDelta,
    pub side_conditions: Vec<SideCondition>,
    pub delta_pair: DeltaKnowledge,
    pub delta_pair_source: PairDeltaSource,
    pub verdict: Verdict,
}

pub fn verdict_of(breakdown: &DeltaBreakdown) -> Verdict {
    if breakdown.value >= 1 {
        Verdict::KSemistable
    } else if !breakdown.lower_bound_only || breakdown.upper_bound.as_ref().is_some_and(|u| *u < 1) {
        Verdict::KUnstable
    } else {
        Verdict::Indeterminate
    }
}

/// Delta invariant of the branched hypersurface cone. `delta_pair` is
/// `δ(P^n, (k-1)/k · S_d)`; it may be omitted when `n+1 <= d <= n+2`.
pub fn branched_cone_delta(spec: &BranchedConeSpec, delta_pair: Option<DeltaKnowledge>) -> Result<BranchedConeDelta> {
    spec.validate()?;
    let (delta_pair, delta_pair_source) = match delta_pair {
        Some(d) => (d, PairDeltaSource::Input),
        None if spec.pair_known_semistable() => (DeltaKnowledge::AtLeastOne, PairDeltaSource::SemistableLargeDegree),
        None => {
            return Err(Error::domain(format!(
                "delta of the branched pair must be supplied when d is outside [n+1, n+2] = [{}, {}] (got d={})",
                spec.n + 1,
                spec.n + 2,
                spec.d
            )))
        }
    };
    let r = Rational::integer(spec.r());
    let cone = cone_delta_raw(spec.n, &r, &Rational::zero(), &delta_pair)?;
    let verdict = verdict_of(&cone.breakdown);
    Ok(BranchedConeDelta {
        cone,
        side_conditions: spec.side_conditions(),
        delta_pair,
        delta_pair_source,
        verdict,
    })
}
