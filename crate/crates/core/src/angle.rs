//! Angle ranges `a` for which a pair `(V, a·S)` with `S ~ -λ K_V` stays
//! K-semistable.

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::bundle::DeltaKnowledge;
use crate::cone::{cone_delta_raw, ConeDelta};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorPairSpec {
    pub n: u32,
    pub lambda: Rational,
    pub base_semistable: bool,
    pub divisor_semistable: bool,
    /// Both `V` and `S` K-polystable.
    pub polystable: bool,
}

impl DivisorPairSpec {
    /// Semistable `V` and `S`, no polystability claim.
    pub fn semistable(n: u32, lambda: Rational) -> Self {
        DivisorPairSpec { n, lambda, base_semistable: true, divisor_semistable: true, polystable: false }
    }

    /// `r = 1/λ - 1`.
    pub fn r(&self) -> Rational {
        self.lambda.recip() - Rational::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalAngle {
    pub endpoint: Rational,
    pub r: Rational,
    /// `[0, endpoint]` is the full semistable set, endpoint included.
    pub semistable_closed: bool,
    /// `(V, aS)` is K-polystable on `[0, endpoint)`.
    pub polystable_open_interval: bool,
    pub hypotheses: Vec<String>,
}

/// `E(V, S) = [0, 1 - r/n]` with `r = 1/λ - 1`, for `0 < λ < 1`.
pub fn optimal_angle_interval(spec: &DivisorPairSpec) -> Result<OptimalAngle> {
    if spec.n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    if !spec.lambda.is_positive() {
        return Err(Error::domain(format!("lambda must be positive (got {})", spec.lambda)));
    }
    if spec.lambda >= 1 {
        return Err(Error::domain(format!(
            "lambda must be < 1 for the optimal angle (got {}); use the lambda >= 1 range",
            spec.lambda
        )));
    }
    if !spec.base_semistable || !spec.divisor_semistable {
        return Err(Error::domain(
            "optimal angle hypotheses not met: V and S must both be K-semistable",
        ));
    }
    let n_q = Rational::from(spec.n);
    let min_lambda = (&n_q + Rational::one()).recip();
    if spec.lambda < min_lambda {
        return Err(Error::domain(format!(
            "lambda must be >= 1/(n+1) = {min_lambda} for a K-semistable V (got {})",
            spec.lambda
        )));
    }
    let r = spec.r();
    let endpoint = Rational::one() - &r / &n_q;
    let mut hypotheses = vec![
        "V is a K-semistable Fano manifold".to_string(),
        "S is a smooth K-semistable divisor with S ~ -lambda K_V".to_string(),
    ];
    if spec.polystable {
        hypotheses.push("requires V and S K-polystable (polystable on [0, endpoint))".to_string());
    }
    Ok(OptimalAngle {
        endpoint,
        r,
        semistable_closed: true,
        polystable_open_interval: spec.polystable,
        hypotheses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemistableRange {
    /// The range is `[0, upper)`.
    pub upper: Rational,
    pub closed_at_zero: bool,
    pub stable_open_interval: bool,
    pub stability_note: String,
}

/// `[0, 1/λ)` for `λ >= 1`, with K-stability on `(0, 1/λ)`.
pub fn semistable_range_lambda_ge_1(n: u32, lambda: &Rational) -> Result<SemistableRange> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    if *lambda < 1 {
        return Err(Error::domain(format!("lambda must be >= 1 (got {lambda})")));
    }
    let stability_note = if *lambda == 1 {
        "K-stable on (0, 1) per the alpha-invariant and interpolation argument; uniform variant not distinguished"
    } else {
        "K-stable on (0, 1/lambda) since delta(V, aS) >= (1-a)/(1-lambda a) > 1"
    };
    Ok(SemistableRange {
        upper: lambda.recip(),
        closed_at_zero: true,
        stable_open_interval: true,
        stability_note: stability_note.to_string(),
    })
}

/// Delta invariant of `(C_p(S, M), a·S_inf)` where `S` has dimension `n - 1`
/// and `M ~ -(1/r) K_S`; the cone formula shifted down one dimension.
pub fn cone_over_divisor_delta(n: u32, r: &Rational, a: &Rational, delta_s: &DeltaKnowledge) -> Result<ConeDelta> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    cone_delta_raw(n - 1, r, a, delta_s)
}

/// Whether `a` exceeds the endpoint `1 - r/n`, in which case the `S_inf`
/// branch certifies instability.
pub fn past_endpoint(n: u32, r: &Rational, a: &Rational) -> bool {
    *a > Rational::one() - r / Rational::from(n)
}
