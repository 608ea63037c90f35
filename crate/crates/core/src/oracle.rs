//! Independent finite-scale oracles for the closed forms.
//!
//! All sums are accumulated exactly; "error" below always means
//! discretization error, never rounding.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Polynomial, Rational};
use crate::bundle::{bundle_delta, BundleBoundary, DeltaBreakdown, DeltaKnowledge, Divisor, FanoBase};
use crate::calabi::{futaki_integrand, futaki_invariant, AdmissibleProfile};
use crate::cone::{cone_delta, iterated_closed_form, iterated_composition, ConeBoundary, HypersurfaceConeSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub target: String,
    pub closed_form: Rational,
    pub approximation: Rational,
    pub m_or_steps: u64,
    pub absolute_error: Rational,
    pub bound: Rational,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl OracleReport {
    fn bounded(target: String, closed_form: Rational, approximation: Rational, m_or_steps: u64, bound: Rational) -> Self {
        let absolute_error = (&approximation - &closed_form).abs();
        let status = if absolute_error <= bound { Status::Pass } else { Status::Fail };
        OracleReport { target, closed_form, approximation, m_or_steps, absolute_error, bound, status, detail: None }
    }

    fn failed(target: String, err: &Error) -> Self {
        OracleReport {
            target,
            closed_form: Rational::zero(),
            approximation: Rational::zero(),
            m_or_steps: 1,
            absolute_error: Rational::zero(),
            bound: Rational::zero(),
            status: Status::Fail,
            detail: Some(err.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn mul_is_integer(m: u64, x: &Rational) -> Option<BigInt> {
    let v = Rational::from_bigint(BigInt::from(m)) * x;
    v.is_integer().then(|| v.numer().clone())
}

/// `Σ_j (j/m)(A + j/m)^n / Σ_j (A + j/m)^n` over `j = 0..=m(B-A)`, the
/// leading-order basis-type average; tends to `Φ(A, B, n) - A`.
pub fn riemann_s_limit(n: u32, lower: &Rational, upper: &Rational, m: u64) -> Result<Rational> {
    if lower.is_negative() || lower >= upper {
        return Err(Error::domain(format!("need 0 <= A < B (got A={lower}, B={upper})")));
    }
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let steps = mul_is_integer(m, &(upper - lower)).ok_or_else(|| {
        Error::domain(format!("m(B-A) must be an integer (m={m}, B-A={})", upper - lower))
    })?;
    let steps: u64 = steps.try_into().map_err(|_| Error::domain("m(B-A) is too large"))?;
    // (A + j/m) = (m p + j q) / (m q); the common factor cancels in the ratio
    let (p, q) = (lower.numer().clone(), lower.denom().clone());
    let mp = BigInt::from(m) * &p;
    let mut s0 = BigInt::zero();
    let mut s1 = BigInt::zero();
    for j in 0..=steps {
        let w = (&mp + BigInt::from(j) * &q).pow(n);
        s1 += &w * BigInt::from(j);
        s0 += w;
    }
    Rational::from_bigints(s1, s0 * BigInt::from(m))
}

/// Error budget `L g(L) / (m ∫_0^L g)` with `g(t) = (A + t)^n`, `L = B - A`.
///
/// Both sums over-count their integrals by at most one end term, which
/// bounds the ratio from both sides.
pub fn riemann_error_bound(n: u32, lower: &Rational, upper: &Rational, m: u64) -> Result<Rational> {
    let len = upper - lower;
    let g = Polynomial::linear_factor(&-lower).pow(n);
    let integral = g.integrate(&Rational::zero(), &len)?;
    Ok(&len * g.eval(&len) / (Rational::from_bigint(BigInt::from(m)) * integral))
}

/// Composite midpoint rule for `∫_lo^hi f`, summed exactly.
pub fn midpoint_rule(f: &Polynomial, lo: &Rational, hi: &Rational, steps: u64) -> Result<Rational> {
    if steps == 0 {
        return Err(Error::domain("steps must be at least 1"));
    }
    if lo > hi {
        return Err(Error::domain(format!("need lo <= hi (got lo={lo}, hi={hi})")));
    }
    let h = (hi - lo) / Rational::from_bigint(BigInt::from(steps));
    let first = lo + &h / Rational::integer(2);
    // g(k) = f(first + h k) with integer coefficients after clearing denominators
    let shifted = f.shift(&first);
    let mut hp = Rational::one();
    let mut coeffs = Vec::with_capacity(shifted.coeffs().len());
    for c in shifted.coeffs() {
        coeffs.push(c * &hp);
        hp *= &h;
    }
    let denom = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&denom / c.denom()))
        .collect();
    let mut total = BigInt::zero();
    for k in 0..steps {
        let kk = BigInt::from(k);
        let mut acc = BigInt::zero();
        for c in ints.iter().rev() {
            acc = acc * &kk + c;
        }
        total += acc;
    }
    Ok(Rational::from_bigints(total, denom)? * h)
}

/// `(hi - lo)^3 / (24 steps^2) · M2`, the midpoint error budget.
pub fn midpoint_error_bound(lo: &Rational, hi: &Rational, steps: u64, max_second: &Rational) -> Rational {
    let len = hi - lo;
    let s = Rational::from_bigint(BigInt::from(steps));
    len.pow(3) / (Rational::integer(24) * &s * &s) * max_second
}

/// `Σ |c_j| R^j`, bounding `|p|` on `[-R, R]`.
fn abs_coeff_bound(p: &Polynomial, radius: &Rational) -> Rational {
    p.coeffs().iter().enumerate().map(|(j, c)| c.abs() * radius.pow(j as u32)).sum()
}

/// Normalized volume integral for ends `A`, `B`:
/// `∫_0^{B-A} (B^{n+1} - (A+t)^{n+1}) dt / (B^{n+1} - A^{n+1})`, with its
/// midpoint error budget.
pub fn quadrature_s_ends(n: u32, lower: &Rational, upper: &Rational, steps: u64) -> Result<(Rational, Rational)> {
    if lower.is_negative() || lower >= upper {
        return Err(Error::domain(format!("need 0 <= A < B (got A={lower}, B={upper})")));
    }
    let top = upper.pow(n + 1);
    let vol = &top - lower.pow(n + 1);
    let f = &Polynomial::constant(top) - &Polynomial::linear_factor(&-lower).pow(n + 1);
    let len = upper - lower;
    let approx = midpoint_rule(&f, &Rational::zero(), &len, steps)? / &vol;
    // |f''| = (n+1) n (A+t)^{n-1} is largest at t = L
    let m2 = if n == 0 {
        Rational::zero()
    } else {
        Rational::from((n + 1) * n) * upper.pow(n - 1) / &vol
    };
    let bound = midpoint_error_bound(&Rational::zero(), &len, steps, &m2);
    Ok((approx, bound))
}

/// Midpoint approximation of `S(V0)` on the bundle.
pub fn quadrature_s_v0(n: u32, a: &Rational, b: &Rational, r: &Rational, steps: u64) -> Result<Rational> {
    let bdry = BundleBoundary::new(a.clone(), b.clone());
    bdry.validate(r)?;
    Ok(quadrature_s_ends(n, &bdry.lower_end(r), &bdry.upper_end(r), steps)?.0)
}

/// Midpoint approximation of the Futaki integral.
pub fn futaki_quadrature(profile: &AdmissibleProfile, steps: u64) -> Result<Rational> {
    let one = Rational::one();
    midpoint_rule(&futaki_integrand(profile), &(profile.r() - &one), &(profile.r() + &one), steps)
}

/// Error budget for [`futaki_quadrature`].
pub fn futaki_quadrature_bound(profile: &AdmissibleProfile, steps: u64) -> Rational {
    let one = Rational::one();
    let hi = profile.r() + &one;
    let m2 = abs_coeff_bound(&futaki_integrand(profile).derivative().derivative(), &hi);
    midpoint_error_bound(&(profile.r() - &one), &hi, steps, &m2)
}

/// Applies the single-step cone factor `(m+2) r / ((m+1)(r+1))` to
/// `min(δ, 1)` `i` times, starting from `V_d^0` of dimension `n` and slope
/// `n + 2 - d`.
pub fn telescoping_iterated_cone(n: u32, d: u32, i: u32, delta0: &DeltaKnowledge) -> Result<Rational> {
    let spec = HypersurfaceConeSpec { n, d, i, delta_v0: delta0.clone() };
    spec.validate()?;
    let one = Rational::one();
    let mut delta = delta0.capped_at_one();
    for j in 1..=i {
        let dim = n + j - 1;
        let r = Rational::from(n + 2 - d + j - 1);
        let factor = Rational::from(dim + 2) * &r / (Rational::from(dim + 1) * (&r + &one));
        let capped = if delta < one { delta } else { one.clone() };
        delta = factor * capped;
    }
    Ok(delta)
}

/// Centroid by direct integration, independent of the closed form.
fn centroid_by_integration(n: u32, lower: &Rational, upper: &Rational) -> Result<Rational> {
    let t = Polynomial::monomial(Rational::one(), n as usize);
    let t1 = Polynomial::monomial(Rational::one(), n as usize + 1);
    Ok(t1.integrate(lower, upper)? / t.integrate(lower, upper)?)
}

/// Minimum and minimizers from raw branch values; `base = None` means only
/// `δ >= 1` is known, in which case the sections decide if they undercut the
/// base factor.
fn brute_minimum(factor: &Rational, base: Option<&Rational>, v0: &Rational, vinf: &Rational) -> (Rational, bool, BTreeSet<Divisor>) {
    let mut cands: Vec<(Divisor, &Rational)> = vec![(Divisor::V0, v0), (Divisor::Vinf, vinf)];
    if let Some(b) = base {
        cands.push((Divisor::BaseDivisor, b));
    }
    let mut best = cands[0].1;
    for (_, v) in &cands {
        if *v < best {
            best = v;
        }
    }
    let mins = cands.iter().filter(|(_, v)| *v == best).map(|(d, _)| *d).collect();
    match base {
        Some(_) => (best.clone(), false, mins),
        None if best <= factor => (best.clone(), false, mins),
        None => (factor.clone(), true, mins),
    }
}

fn compare_breakdown(target: String, module: &DeltaBreakdown, brute: (Rational, bool, BTreeSet<Divisor>)) -> OracleReport {
    let (value, lower_only, mins) = brute;
    let mut rep = OracleReport::bounded(target, module.value.clone(), value.clone(), 1, Rational::zero());
    let mut issues = Vec::new();
    if module.value != value {
        issues.push(format!("value {} vs brute force {value}", module.value));
    }
    if module.lower_bound_only != lower_only {
        issues.push("lower-bound flag differs".to_string());
    }
    if module.minimizers != mins {
        issues.push(format!("minimizers {:?} vs brute force {:?}", module.minimizers, mins));
    }
    if !issues.is_empty() {
        rep.status = Status::Fail;
        rep.detail = Some(issues.join("; "));
    }
    rep
}

/// Re-evaluates the bundle branches by direct integration and compares with
/// [`bundle_delta`].
pub fn bundle_bruteforce(n: u32, r: &Rational, a: &Rational, b: &Rational, delta: &DeltaKnowledge) -> Result<OracleReport> {
    let base = FanoBase::new(n, r.clone(), delta.clone())?;
    let bdry = BundleBoundary::new(a.clone(), b.clone());
    let module = bundle_delta(&base, &bdry)?;
    let one = Rational::one();
    let lower = r - (&one - a);
    let upper = r + (&one - b);
    let phi = centroid_by_integration(n, &lower, &upper)?;
    let factor = r / &phi;
    let v0 = (&one - a) / (&phi - &lower);
    let vinf = (&one - b) / (&upper - &phi);
    let base_val = match delta {
        DeltaKnowledge::Exact(d) => Some(&factor * d),
        DeltaKnowledge::AtLeastOne => None,
    };
    let target = format!("branch_min bundle(n={n}, r={r}, a={a}, b={b}, delta={delta})");
    Ok(compare_breakdown(target, &module, brute_minimum(&factor, base_val.as_ref(), &v0, &vinf)))
}

/// Cone analogue of [`bundle_bruteforce`], with `A = 0`, `B = r + 1 - c`.
pub fn cone_bruteforce(n: u32, r: &Rational, c: &Rational, delta: &DeltaKnowledge) -> Result<OracleReport> {
    let base = FanoBase::new(n, r.clone(), delta.clone())?;
    let module = cone_delta(&base, &ConeBoundary::new(c.clone())?)?;
    let one = Rational::one();
    let upper = r + &one - c;
    let phi = centroid_by_integration(n, &Rational::zero(), &upper)?;
    let v0 = r / &phi;
    let vinf = (&one - c) / (&upper - &phi);
    let base_val = match delta {
        DeltaKnowledge::Exact(d) => Some(&v0 * d),
        DeltaKnowledge::AtLeastOne => None,
    };
    let target = format!("branch_min cone(n={n}, r={r}, c={c}, delta={delta})");
    Ok(compare_breakdown(target, &module.breakdown, brute_minimum(&v0, base_val.as_ref(), &v0, &vinf)))
}

/// Finite grid of inputs for the brute-force and quadrature oracles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: Vec<u32>,
    pub r: Vec<Rational>,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub delta: Vec<DeltaKnowledge>,
}

fn rats(xs: &[&str]) -> Vec<Rational> {
    xs.iter().map(|s| s.parse().expect("literal")).collect()
}

impl GridSpec {
    pub fn default_grid() -> Self {
        GridSpec {
            n: (1..=4).collect(),
            r: rats(&["1", "2", "3"]),
            a: rats(&["0", "1/2"]),
            b: rats(&["0", "1/2"]),
            c: rats(&["0", "1/2"]),
            delta: vec![
                DeltaKnowledge::Exact(Rational::new(1, 2)),
                DeltaKnowledge::Exact(Rational::one()),
                DeltaKnowledge::Exact(Rational::integer(2)),
                DeltaKnowledge::Exact(Rational::new(13, 14)),
                DeltaKnowledge::AtLeastOne,
            ],
        }
    }

    pub fn wide() -> Self {
        GridSpec {
            n: (1..=6).collect(),
            r: rats(&["1/2", "1", "3/2", "2", "3", "4"]),
            a: rats(&["0", "1/4", "1/2", "3/4"]),
            b: rats(&["0", "1/4", "1/2", "3/4"]),
            c: rats(&["0", "1/4", "1/2", "3/4"]),
            delta: vec![
                DeltaKnowledge::Exact(Rational::new(1, 3)),
                DeltaKnowledge::Exact(Rational::new(1, 2)),
                DeltaKnowledge::Exact(Rational::one()),
                DeltaKnowledge::Exact(Rational::integer(2)),
                DeltaKnowledge::AtLeastOne,
            ],
        }
    }

    /// `default`, `wide`, or a path to a JSON grid file.
    pub fn resolve(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(GridSpec::default_grid()),
            "wide" => Ok(GridSpec::wide()),
            path => GridSpec::from_file(Path::new(path)),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read grid file {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid grid file {}: {e}", path.display())))
    }

    /// Valid bundle tuples `(n, r, a, b)`.
    fn bundle_points(&self) -> Vec<(u32, Rational, Rational, Rational)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for r in &self.r {
                for a in &self.a {
                    for b in &self.b {
                        if n >= 1 && r.is_positive() && BundleBoundary::new(a.clone(), b.clone()).validate(r).is_ok() {
                            out.push((n, r.clone(), a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    fn cone_points(&self) -> Vec<(u32, Rational, Rational)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for r in &self.r {
                for c in &self.c {
                    if n >= 1 && r.is_positive() && ConeBoundary::new(c.clone()).is_ok() {
                        out.push((n, r.clone(), c.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Every brute-force branch comparison on the grid, in grid order.
pub fn branch_min_bruteforce(grid: &GridSpec) -> Vec<OracleReport> {
    let mut jobs: Vec<Job> = Vec::new();
    for (n, r, a, b) in grid.bundle_points() {
        for d in &grid.delta {
            jobs.push(Job::Bundle(n, r.clone(), a.clone(), b.clone(), d.clone()));
        }
    }
    for (n, r, c) in grid.cone_points() {
        for d in &grid.delta {
            jobs.push(Job::Cone(n, r.clone(), c.clone(), d.clone()));
        }
    }
    jobs.par_iter().map(Job::run).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub deep: bool,
    pub grid: GridSpec,
}

impl SuiteConfig {
    pub fn riemann_m(&self) -> u64 {
        if self.deep { 100_000 } else { 1_000 }
    }

    pub fn steps(&self) -> u64 {
        if self.deep { 10_000 } else { 1_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub deep: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub summary: SuiteSummary,
    pub reports: Vec<OracleReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[derive(Clone, Debug)]
enum Job {
    Riemann(u32, Rational, Rational, u64),
    RiemannRefinement(u32, Rational, Rational),
    Quadrature(u32, Rational, Rational, u64),
    Bundle(u32, Rational, Rational, Rational, DeltaKnowledge),
    Cone(u32, Rational, Rational, DeltaKnowledge),
    Futaki(u32, Rational, u32, u64),
    Iterated(u32, u32, u32, DeltaKnowledge),
}

/// Fixed perturbation shapes for the Futaki oracle; shape 0 is the standard
/// profile.
pub fn futaki_test_profile(n: u32, r: &Rational, shape: u32) -> Result<AdmissibleProfile> {
    let std = AdmissibleProfile::standard(n, r)?;
    match shape {
        0 => Ok(std),
        1 => std.perturbed(&Rational::new(1, 10), &Polynomial::constant(Rational::one())),
        2 => std.perturbed(&Rational::new(1, 20), &Polynomial::x()),
        3 => std.perturbed(&Rational::new(-1, 30), &Polynomial::new(vec![Rational::one(), Rational::zero(), Rational::new(1, 2)])),
        _ => Err(Error::domain(format!("unknown profile shape {shape}"))),
    }
}

fn riemann_report(n: u32, lower: &Rational, upper: &Rational, m: u64) -> Result<OracleReport> {
    let phi = centroid_by_integration(n, lower, upper)?;
    let closed = crate::bundle::centroid_phi(lower, upper, n)? - lower;
    let approx = riemann_s_limit(n, lower, upper, m)?;
    let bound = riemann_error_bound(n, lower, upper, m)?;
    let target = format!("riemann_s_limit(n={n}, A={lower}, B={upper})");
    let mut rep = OracleReport::bounded(target, closed.clone(), approx, m, bound);
    if phi - lower != closed {
        rep.status = Status::Fail;
        rep.detail = Some("centroid closed form differs from direct integration".into());
    }
    Ok(rep)
}

impl Job {
    fn label(&self) -> String {
        match self {
            Job::Riemann(n, a, b, _) | Job::RiemannRefinement(n, a, b) => format!("riemann(n={n}, A={a}, B={b})"),
            Job::Quadrature(n, a, b, _) => format!("quadrature(n={n}, A={a}, B={b})"),
            Job::Bundle(n, r, a, b, d) => format!("bundle(n={n}, r={r}, a={a}, b={b}, delta={d})"),
            Job::Cone(n, r, c, d) => format!("cone(n={n}, r={r}, c={c}, delta={d})"),
            Job::Futaki(n, r, s, _) => format!("futaki(n={n}, r={r}, shape={s})"),
            Job::Iterated(n, d, i, _) => format!("iterated_cone(n={n}, d={d}, i={i})"),
        }
    }

    fn run(&self) -> OracleReport {
        self.try_run().unwrap_or_else(|e| OracleReport::failed(self.label(), &e))
    }

    fn try_run(&self) -> Result<OracleReport> {
        match self {
            Job::Riemann(n, a, b, m) => riemann_report(*n, a, b, *m),
            Job::RiemannRefinement(n, a, b) => {
                let errs: Vec<Rational> = [100u64, 1_000, 10_000]
                    .iter()
                    .map(|&m| riemann_report(*n, a, b, m).map(|r| r.absolute_error))
                    .collect::<Result<_>>()?;
                let mut rep = riemann_report(*n, a, b, 10_000)?;
                rep.target = format!("riemann_refinement(n={n}, A={a}, B={b})");
                if !(errs[2] <= errs[1] && errs[1] <= errs[0]) {
                    rep.status = Status::Fail;
                }
                rep.detail = Some(format!(
                    "errors at m=1e2,1e3,1e4: {:.3e}, {:.3e}, {:.3e}",
                    errs[0].to_f64(),
                    errs[1].to_f64(),
                    errs[2].to_f64()
                ));
                Ok(rep)
            }
            Job::Quadrature(n, a, b, steps) => {
                let closed = crate::bundle::centroid_phi(a, b, *n)? - a;
                let (approx, bound) = quadrature_s_ends(*n, a, b, *steps)?;
                let target = format!("quadrature_s_v0(n={n}, A={a}, B={b})");
                Ok(OracleReport::bounded(target, closed, approx, *steps, bound))
            }
            Job::Bundle(n, r, a, b, d) => bundle_bruteforce(*n, r, a, b, d),
            Job::Cone(n, r, c, d) => cone_bruteforce(*n, r, c, d),
            Job::Futaki(n, r, shape, steps) => {
                let prof = futaki_test_profile(*n, r, *shape)?;
                let exact = futaki_invariant(&prof)?;
                let closed = crate::calabi::futaki_closed_form(*n, r)?;
                let approx = futaki_quadrature(&prof, *steps)?;
                let bound = futaki_quadrature_bound(&prof, *steps);
                let target = format!("futaki_quadrature(n={n}, r={r}, shape={shape})");
                let mut rep = OracleReport::bounded(target, closed.clone(), approx, *steps, bound);
                if exact != closed {
                    rep.status = Status::Fail;
                    rep.detail = Some(format!("exact integral {exact} differs from closed form {closed}"));
                }
                Ok(rep)
            }
            Job::Iterated(n, d, i, d0) => {
                let spec = HypersurfaceConeSpec { n: *n, d: *d, i: *i, delta_v0: d0.clone() };
                let tele = telescoping_iterated_cone(*n, *d, *i, d0)?;
                let comp = iterated_composition(&spec)?.last().expect("i >= 1").delta.clone();
                let closed = iterated_closed_form(&spec)?;
                let target = format!("telescoping_iterated_cone(n={n}, d={d}, i={i}, delta0={d0})");
                let mut rep = OracleReport::bounded(target, comp, tele, u64::from(*i), Rational::zero());
                rep.detail = Some(if closed == rep.closed_form {
                    format!("closed form {closed} agrees")
                } else {
                    format!("closed form {closed} differs from composition {}", rep.closed_form)
                });
                Ok(rep)
            }
        }
    }
}

/// Runs every oracle. Jobs fan out across threads; the output keeps job order.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let m = config.riemann_m();
    let steps = config.steps();
    let mut jobs = vec![
        Job::Riemann(0, Rational::zero(), Rational::one(), m),
        Job::Riemann(1, Rational::one(), Rational::integer(3), m),
        Job::Riemann(2, Rational::zero(), Rational::integer(2), m),
        Job::RiemannRefinement(1, Rational::one(), Rational::integer(3)),
        Job::Quadrature(0, Rational::zero(), Rational::one(), 1),
        Job::Quadrature(2, Rational::zero(), Rational::integer(2), steps),
    ];
    let mut ends = BTreeSet::new();
    for (n, r, a, b) in config.grid.bundle_points() {
        let bdry = BundleBoundary::new(a, b);
        ends.insert((n, bdry.lower_end(&r), bdry.upper_end(&r)));
    }
    for (n, lo, hi) in &ends {
        jobs.push(Job::Quadrature(*n, lo.clone(), hi.clone(), steps));
        if config.deep && mul_is_integer(100, &(hi - lo)).is_some() {
            jobs.push(Job::RiemannRefinement(*n, lo.clone(), hi.clone()));
        }
    }
    for (n, r, a, b) in config.grid.bundle_points() {
        for d in &config.grid.delta {
            jobs.push(Job::Bundle(n, r.clone(), a.clone(), b.clone(), d.clone()));
        }
    }
    for (n, r, c) in config.grid.cone_points() {
        for d in &config.grid.delta {
            jobs.push(Job::Cone(n, r.clone(), c.clone(), d.clone()));
        }
    }
    for (n, r) in [(1, Rational::integer(2)), (2, Rational::integer(2)), (2, Rational::integer(3))] {
        for shape in 0..4 {
            jobs.push(Job::Futaki(n, r.clone(), shape, steps));
        }
    }
    for n in 1..=4 {
        for d in 2..=n + 1 {
            for i in 1..=4 {
                for d0 in [DeltaKnowledge::AtLeastOne, DeltaKnowledge::Exact(Rational::new(1, 2))] {
                    jobs.push(Job::Iterated(n, d, i, d0));
                }
            }
        }
    }
    let reports: Vec<OracleReport> = jobs.par_iter().map(Job::run).collect();
    let passed = reports.iter().filter(|r| r.passed()).count();
    SuiteReport {
        summary: SuiteSummary { total: reports.len(), passed, failed: reports.len() - passed, deep: config.deep },
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn riemann_uniform_measure() {
        for m in [1u64, 2, 7, 100] {
            assert_eq!(riemann_s_limit(0, &q(0, 1), &q(1, 1), m).unwrap(), q(1, 2));
        }
    }

    #[test]
    fn riemann_small_m_by_hand() {
        // j = 0, 1, 2 with weights 1, 2, 3: (0 + 2 + 6) / (1 * 6)
        assert_eq!(riemann_s_limit(1, &q(1, 1), &q(3, 1), 1).unwrap(), q(4, 3));
    }

    #[test]
    fn riemann_converges() {
        let v = riemann_s_limit(1, &q(1, 1), &q(3, 1), 1000).unwrap();
        assert!((v - q(7, 6)).abs() < q(1, 100));
        let v = riemann_s_limit(2, &q(0, 1), &q(2, 1), 1000).unwrap();
        assert!((v - q(3, 2)).abs() < q(1, 100));
        assert!(riemann_s_limit(1, &q(1, 1), &q(4, 3), 2).is_err());
    }

    #[test]
    fn riemann_bound_holds() {
        for m in [10u64, 100, 1000] {
            let v = riemann_s_limit(1, &q(1, 1), &q(3, 1), m).unwrap();
            let bound = riemann_error_bound(1, &q(1, 1), &q(3, 1), m).unwrap();
            assert!((v - q(7, 6)).abs() <= bound);
        }
        assert_eq!(riemann_error_bound(1, &q(1, 1), &q(3, 1), 10_000).unwrap(), q(3, 20_000));
    }

    #[test]
    fn midpoint_linear_is_exact() {
        let f = Polynomial::new(vec![q(3, 1), q(-2, 5)]);
        assert_eq!(midpoint_rule(&f, &q(1, 1), &q(4, 1), 1).unwrap(), f.integrate(&q(1, 1), &q(4, 1)).unwrap());
        let (v, bound) = quadrature_s_ends(0, &q(0, 1), &q(1, 1), 1).unwrap();
        assert_eq!(v, q(1, 2));
        assert!(bound.is_zero());
    }

    #[test]
    fn midpoint_quadratic_error_is_known() {
        // ∫_0^1 t^2 by one midpoint: 1/4, error 1/12 = 1/24 · 2
        let f = Polynomial::monomial(q(1, 1), 2);
        assert_eq!(midpoint_rule(&f, &q(0, 1), &q(1, 1), 1).unwrap(), q(1, 4));
        assert_eq!(midpoint_error_bound(&q(0, 1), &q(1, 1), 1, &q(2, 1)), q(1, 12));
    }

    #[test]
    fn quadrature_examples() {
        let v = quadrature_s_v0(1, &q(0, 1), &q(0, 1), &q(2, 1), 10_000).unwrap();
        assert!((v - q(7, 6)).abs() < q(1, 1_000_000));
        let (v, _) = quadrature_s_ends(2, &q(0, 1), &q(2, 1), 10_000).unwrap();
        assert!((v - q(3, 2)).abs() < q(1, 1_000_000));
        assert!(quadrature_s_v0(1, &q(0, 1), &q(0, 1), &q(1, 2), 10).is_err());
    }

    #[test]
    fn futaki_quadrature_examples() {
        let prof = AdmissibleProfile::standard(1, &q(2, 1)).unwrap();
        let v = futaki_quadrature(&prof, 10_000).unwrap();
        assert!((v - q(4, 3)).abs() < q(1, 100_000));
        let pert = futaki_test_profile(1, &q(2, 1), 3).unwrap();
        let v = futaki_quadrature(&pert, 10_000).unwrap();
        assert!((v - q(4, 3)).abs() < q(1, 100_000));
        assert!(futaki_test_profile(1, &q(1, 1), 0).is_err());
    }

    #[test]
    fn telescoping_examples() {
        let ge1 = DeltaKnowledge::AtLeastOne;
        assert_eq!(telescoping_iterated_cone(1, 2, 1, &DeltaKnowledge::Exact(q(1, 1))).unwrap(), q(3, 4));
        assert_eq!(telescoping_iterated_cone(2, 3, 1, &ge1).unwrap(), q(2, 3));
        assert_eq!(telescoping_iterated_cone(2, 3, 2, &ge1).unwrap(), q(5, 9));
        assert!(telescoping_iterated_cone(2, 4, 1, &ge1).is_err());
    }

    #[test]
    fn brute_force_points() {
        let one = DeltaKnowledge::Exact(q(1, 1));
        let rep = bundle_bruteforce(1, &q(2, 1), &q(0, 1), &q(0, 1), &one).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.closed_form, q(6, 7));
        let tie = DeltaKnowledge::Exact(q(13, 14));
        let rep = bundle_bruteforce(1, &q(2, 1), &q(0, 1), &q(0, 1), &tie).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn default_grid_brute_force_passes() {
        let reports = branch_min_bruteforce(&GridSpec::default_grid());
        assert!(reports.len() > 100);
        for r in &reports {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn grid_file_round_trip() {
        let g = GridSpec::default_grid();
        let text = serde_json::to_string(&g).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.json");
        std::fs::write(&path, text).unwrap();
        assert_eq!(GridSpec::resolve(path.to_str().unwrap()).unwrap(), g);
        assert!(matches!(GridSpec::resolve("/nonexistent/grid.json"), Err(Error::Parse(_))));
    }
}
