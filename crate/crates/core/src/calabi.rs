//! Momentum-profile calculus for Calabi-ansatz metrics on the smooth bundle.
//!
//! A profile is a function `φ(τ)` on `[r-1, r+1]`; every quantity used here
//! is a statement about the polynomial `N(τ) = τ^n φ(τ)`, so all checks are
//! exact. Conventions: `L^n = 1` and every factor of `2π` is dropped.
//!
//! Useful identities, with `N = τ^n φ`:
//! * `n φ/τ + φ' = N'/τ^n`
//! * at a zero of `N`, `φ' = N'/τ^n`

use serde::{Deserialize, Serialize};

use crate::arith::{Polynomial, Rational};
use crate::bundle::beta_zero;
use crate::error::{Error, Result};

/// Solution of `-(n φ/τ + φ')' = β` vanishing at both ends:
/// `τ^n φ = -(β/(n+2)) τ^{n+2} + c1 τ^{n+1} + c2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalabiProfile {
    pub n: u32,
    pub r: Rational,
    pub beta: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub numerator: Polynomial,
}

fn check_r(r: &Rational) -> Result<()> {
    if *r <= 1 {
        return Err(Error::domain(format!("the smooth bundle needs r > 1 (got {r})")));
    }
    Ok(())
}

pub fn solve_profile(n: u32, r: &Rational, beta: &Rational) -> Result<CalabiProfile> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    check_r(r)?;
    if !beta.is_positive() {
        return Err(Error::domain(format!("beta must be positive (got {beta})")));
    }
    let one = Rational::one();
    let (lo, hi) = (r - &one, r + &one);
    let n2 = Rational::from(n + 2);
    let span = hi.pow(n + 1) - lo.pow(n + 1);
    let c1 = beta / &n2 * (hi.pow(n + 2) - lo.pow(n + 2)) / &span;
    let c2 = -(Rational::integer(2) * beta / &n2) * (r * r - &one).pow(n + 1) / &span;
    let numerator = &(&Polynomial::monomial(-(beta / &n2), n as usize + 2)
        + &Polynomial::monomial(c1.clone(), n as usize + 1))
        + &Polynomial::constant(c2.clone());
    Ok(CalabiProfile { n, r: r.clone(), beta: beta.clone(), c1, c2, numerator })
}

/// `φ(τ)` at a point of the interval.
pub fn phi_at(n: u32, numerator: &Polynomial, tau: &Rational) -> Rational {
    numerator.eval(tau) / tau.pow(n)
}

/// `φ'(τ)` from the quotient rule on `N / τ^n`.
pub fn phi_prime_at(n: u32, numerator: &Polynomial, tau: &Rational) -> Rational {
    let tn = tau.pow(n);
    let num = numerator.derivative().eval(tau) * tau - Rational::from(n) * numerator.eval(tau);
    num / (tn * tau)
}

impl CalabiProfile {
    pub fn phi(&self, tau: &Rational) -> Rational {
        phi_at(self.n, &self.numerator, tau)
    }

    pub fn phi_prime(&self, tau: &Rational) -> Rational {
        phi_prime_at(self.n, &self.numerator, tau)
    }

    /// `τ^{n+1} · (-(n φ/τ + φ')' - β)` as a polynomial; identically zero for
    /// an exact solution.
    pub fn ode_residual(&self) -> Polynomial {
        let d1 = self.numerator.derivative();
        let d2 = d1.derivative();
        // -(N'/τ^n)' τ^{n+1} = n N' - τ N''
        let lhs = &d1.scale(&Rational::from(self.n)) - &(&Polynomial::x() * &d2);
        &lhs - &Polynomial::monomial(self.beta.clone(), self.n as usize + 1)
    }

    /// `(N(r-1), N(r+1))`.
    pub fn boundary_values(&self) -> (Rational, Rational) {
        let one = Rational::one();
        (self.numerator.eval(&(&self.r - &one)), self.numerator.eval(&(&self.r + &one)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAngles {
    /// `φ'(r-1)`, cone angle along `V0`.
    pub beta1: Rational,
    /// `-φ'(r+1)`, cone angle along `Vinf`.
    pub beta2: Rational,
}

/// Edge angles by differentiating the profile, cross-checked against
/// `β/β0` and `β(2β0 - 1)/β0`.
pub fn edge_angles(profile: &CalabiProfile) -> Result<EdgeAngles> {
    let one = Rational::one();
    let beta1 = profile.phi_prime(&(&profile.r - &one));
    let beta2 = -profile.phi_prime(&(&profile.r + &one));
    let beta0 = beta_zero(profile.n, &profile.r)?;
    let closed1 = &profile.beta / &beta0;
    let closed2 = &profile.beta * (Rational::integer(2) * &beta0 - &one) / &beta0;
    if beta1 != closed1 || beta2 != closed2 {
        return Err(Error::Disagreement(format!(
            "edge angles ({beta1}, {beta2}) differ from closed forms ({closed1}, {closed2})"
        )));
    }
    Ok(EdgeAngles { beta1, beta2 })
}

/// Largest β allowed for a twisting constant `μ`:
/// `min{ μ β0 / (1/r + β0 (1 - 1/r)), β0 }`.
pub fn beta_upper_limit(n: u32, r: &Rational, mu: &Rational) -> Result<Rational> {
    let beta0 = beta_zero(n, r)?;
    let inv = r.recip();
    let first = mu * &beta0 / (&inv + &beta0 * (Rational::one() - &inv));
    Ok(first.min(beta0))
}

/// `μ - β/(r β0) - β (1 - 1/r)`.
pub fn ricci_bound_margin(profile: &CalabiProfile, mu: &Rational) -> Result<Rational> {
    if !mu.is_positive() {
        return Err(Error::domain(format!("mu must be positive (got {mu})")));
    }
    let beta0 = beta_zero(profile.n, &profile.r)?;
    let r = &profile.r;
    Ok(mu - &profile.beta / (r * &beta0) - &profile.beta * (Rational::one() - r.recip()))
}

/// Checks that the base-direction Ricci coefficient exceeds that of `β η`
/// by exactly the margin:
/// `μ - n φ/(r τ) - φ'/r - β τ/r ≡ margin`, i.e. after multiplying by `r τ^n`,
/// `μ r τ^n - N' - β τ^{n+1} - r·margin·τ^n ≡ 0`.
pub fn ricci_bound_identity_holds(profile: &CalabiProfile, mu: &Rational) -> Result<bool> {
    let margin = ricci_bound_margin(profile, mu)?;
    let n = profile.n as usize;
    let r = &profile.r;
    let lhs = &(&Polynomial::monomial(mu * r, n) - &profile.numerator.derivative())
        - &Polynomial::monomial(profile.beta.clone(), n + 1);
    let diff = &lhs - &Polynomial::monomial(r * margin, n);
    Ok(diff.is_zero())
}

/// Exact check that `φ > 0` on the open interval `(r-1, r+1)`.
///
/// `N` is divided by `(τ - r + 1)(r + 1 - τ)`, which is positive inside; the
/// quotient must be positive at `r` and root-free on the closed interval
/// (Sturm count plus endpoint evaluation).
pub fn positive_on_interior(r: &Rational, numerator: &Polynomial) -> bool {
    let one = Rational::one();
    let (lo, hi) = (r - &one, r + &one);
    if numerator.eval(&lo) != Rational::zero() || numerator.eval(&hi) != Rational::zero() {
        return false;
    }
    let bump = -&(&Polynomial::linear_factor(&lo) * &Polynomial::linear_factor(&hi));
    let (quot, rem) = numerator.div_rem(&bump);
    debug_assert!(rem.is_zero());
    if quot.is_zero() || !quot.eval(r).is_positive() {
        return false;
    }
    if quot.eval(&lo).is_zero() || quot.eval(&hi).is_zero() {
        return false;
    }
    quot.count_roots_in(&lo, &hi) == 0
}

/// A profile that closes up smoothly: `φ(r±1) = 0`, `φ'(r-1) = 1`,
/// `φ'(r+1) = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleProfile {
    n: u32,
    r: Rational,
    numerator: Polynomial,
}

impl AdmissibleProfile {
    /// Validates the four endpoint conditions, listing every failure.
    pub fn new(n: u32, r: Rational, numerator: Polynomial) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be a positive integer"));
        }
        check_r(&r)?;
        let one = Rational::one();
        let (lo, hi) = (&r - &one, &r + &one);
        let mut failed = Vec::new();
        if !phi_at(n, &numerator, &lo).is_zero() {
            failed.push("phi(r-1) = 0".to_string());
        }
        if !phi_at(n, &numerator, &hi).is_zero() {
            failed.push("phi(r+1) = 0".to_string());
        }
        let d_lo = phi_prime_at(n, &numerator, &lo);
        if d_lo != one {
            failed.push(format!("phi'(r-1) = 1 (got {d_lo})"));
        }
        let d_hi = phi_prime_at(n, &numerator, &hi);
        if d_hi != -&one {
            failed.push(format!("phi'(r+1) = -1 (got {d_hi})"));
        }
        if !failed.is_empty() {
            return Err(Error::domain(format!("profile is not admissible: {}", failed.join("; "))));
        }
        Ok(AdmissibleProfile { n, r, numerator })
    }

    /// `φ = (τ - r + 1)(r + 1 - τ)/2`, so `φ' = r - τ`.
    pub fn standard(n: u32, r: &Rational) -> Result<Self> {
        check_r(r)?;
        let one = Rational::one();
        let phi = (-&(&Polynomial::linear_factor(&(r - &one)) * &Polynomial::linear_factor(&(r + &one))))
            .scale(&Rational::new(1, 2));
        let numerator = &Polynomial::monomial(Rational::one(), n as usize) * &phi;
        AdmissibleProfile::new(n, r.clone(), numerator)
    }

    /// Adds `eps · (τ - r + 1)^2 (τ - r - 1)^2 · shape(τ)` to `τ^n φ`; values
    /// and first derivatives at both ends are unchanged.
    pub fn perturbed(&self, eps: &Rational, shape: &Polynomial) -> Result<Self> {
        let one = Rational::one();
        let bump = (&Polynomial::linear_factor(&(&self.r - &one)) * &Polynomial::linear_factor(&(&self.r + &one))).pow(2);
        let numerator = &self.numerator + &(&bump * shape).scale(eps);
        AdmissibleProfile::new(self.n, self.r.clone(), numerator)
    }

    /// Validates a solved edge profile; fails unless both edge angles are 1.
    pub fn from_profile(profile: &CalabiProfile) -> Result<Self> {
        AdmissibleProfile::new(profile.n, profile.r.clone(), profile.numerator.clone())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn is_positive_on_interior(&self) -> bool {
        positive_on_interior(&self.r, &self.numerator)
    }
}

/// Fiber-reduced Futaki integrand in `τ`:
/// `(n+1) · (n r τ^n - τ N''(τ) - (n+1) τ^{n+1})`.
///
/// This is `(n+1) τ (r S(ω)/τ - N''/τ^n - n - 1) τ^n/r^n` after integrating
/// over the base with `∫ S(ω) ω^n = n r^n` and `∫ ω^n = r^n`.
pub fn futaki_integrand(profile: &AdmissibleProfile) -> Polynomial {
    let n = profile.n as usize;
    let n_q = Rational::from(profile.n);
    let n1 = &n_q + Rational::one();
    let second = profile.numerator.derivative().derivative();
    let scalar_part = Polynomial::monomial(&n_q * &profile.r, n);
    let curvature_part = &Polynomial::x() * &second;
    let volume_part = Polynomial::monomial(n1.clone(), n + 1);
    (&(&scalar_part - &curvature_part) - &volume_part).scale(&n1)
}

/// Exact Futaki invariant of the fiber `C*`-action for an admissible profile.
pub fn futaki_invariant(profile: &AdmissibleProfile) -> Result<Rational> {
    let one = Rational::one();
    futaki_integrand(profile).integrate(&(&profile.r - &one), &(&profile.r + &one))
}

/// `(1/β0 - 1) · ((r+1)^{n+1} - (r-1)^{n+1})`, the anticanonical volume
/// times `1/β0 - 1`.
pub fn futaki_closed_form(n: u32, r: &Rational) -> Result<Rational> {
    let one = Rational::one();
    let beta0 = beta_zero(n, r)?;
    Ok((beta0.recip() - &one) * ((r + &one).pow(n + 1) - (r - &one).pow(n + 1)))
}
