//! Multiplier-sequence providers for the expansion engine: Taylor,
//! fixed lambda sequences, greedy adaptive selection, repeated outer
//! symbol, and classical unwinding by in-disc root extraction.

use crate::error::{CoreError, Result};
use crate::hardy::{AnalyticCoeffs, DiscPoint};
use crate::multipliers::{
    classify_blaschke_tail, classify_by_probe, Multiplier, TailClass, TailRule,
};
use crate::roots::{roots_in_disc, InDiscRoots};
use crate::toeplitz::ToeplitzContext;
use num_complex::Complex64;
use std::sync::Arc;

/// Default polar search grid of the greedy strategy.
pub const GREEDY_RADIAL_LEVELS: usize = 32;
pub const GREEDY_ANGULAR_RESOLUTION: usize = 256;
pub const GREEDY_R_MAX: f64 = 0.95;
/// Default near-boundary exclusion radius for root extraction.
pub const DEFAULT_EPS_ROOT: f64 = 1e-6;
/// Default cap on polynomial degree handed to the eigen solver.
pub const DEFAULT_MAX_DEGREE: usize = 512;

/// One step produced by a strategy.
#[derive(Debug, Clone)]
pub struct StrategyStep {
    pub multiplier: Arc<Multiplier>,
    /// The selected zero for Blaschke-factor steps.
    pub lambda: Option<Complex64>,
}

/// What is known about the infinite continuation of the factor stream,
/// for the dichotomy classification.
#[derive(Debug, Clone)]
pub enum ProductTail {
    /// Blaschke-type stream with known moduli prefix plus declared rule.
    Moduli { prefix: Vec<f64>, rule: TailRule },
    /// The same symbol repeats forever; classify by numeric probe.
    RepeatSymbol(Arc<Multiplier>),
    /// Divergence of sum (1 - |lambda_n|) is guaranteed by construction
    /// (moduli bounded away from 1, or the origin recurs forever).
    CertifiedVanishing,
}

/// Classify the product tail B_n: analytic Blaschke-sum criterion when
/// moduli are known, numeric probe fallback otherwise.
pub fn classify_tail(tail: &ProductTail) -> TailClass {
    match tail {
        ProductTail::Moduli { prefix, rule } => classify_blaschke_tail(prefix, rule),
        ProductTail::RepeatSymbol(b) => {
            let stream: Vec<&Multiplier> = (0..256).map(|_| b.as_ref()).collect();
            classify_by_probe(stream, 256)
        }
        ProductTail::CertifiedVanishing => TailClass::Vanishing,
    }
}

/// A sequential multiplier source consumed by the expansion engine.
pub trait Strategy {
    fn next_multiplier(
        &mut self,
        r_prev: &AnalyticCoeffs,
        ctx: &ToeplitzContext,
    ) -> Result<StrategyStep>;

    /// Tail description reflecting the declared continuation.
    fn tail(&self) -> ProductTail;

    fn name(&self) -> &'static str;
}

/// Serializable description of a strategy, mirrored by the CLI.
#[derive(Debug, Clone)]
pub enum StrategySpec {
    Taylor,
    FixedSequence {
        lambdas: Vec<Complex64>,
        tail: TailRule,
    },
    GreedyAfd {
        radial_levels: usize,
        angular_resolution: usize,
        r_max: f64,
    },
    ClassicalUnwinding {
        eps_root: f64,
        max_degree: usize,
    },
    OuterRepeat,
}

impl StrategySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::Taylor => "taylor",
            StrategySpec::FixedSequence { .. } => "fixed",
            StrategySpec::GreedyAfd { .. } => "greedy",
            StrategySpec::ClassicalUnwinding { .. } => "unwinding",
            StrategySpec::OuterRepeat => "outer",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategySpec::Taylor | StrategySpec::OuterRepeat => Ok(()),
            StrategySpec::FixedSequence { lambdas, .. } => {
                for l in lambdas {
                    DiscPoint::new(*l)?;
                }
                Ok(())
            }
            StrategySpec::GreedyAfd {
                radial_levels,
                angular_resolution,
                r_max,
            } => {
                if *radial_levels == 0 || *angular_resolution == 0 {
                    return Err(CoreError::Domain("greedy search grid is empty".into()));
                }
                if !(*r_max > 0.0 && *r_max <= 0.99) {
                    return Err(CoreError::Domain(format!(
                        "greedy r_max = {r_max} outside (0, 0.99]"
                    )));
                }
                Ok(())
            }
            StrategySpec::ClassicalUnwinding { eps_root, .. } => {
                if !(*eps_root > 0.0 && *eps_root < 0.1) {
                    return Err(CoreError::Domain(format!(
                        "eps_root = {eps_root} outside (0, 0.1)"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn build(&self) -> Result<Box<dyn Strategy>> {
        self.validate()?;
        Ok(match self {
            StrategySpec::Taylor => Box::new(TaylorStrategy),
            StrategySpec::FixedSequence { lambdas, tail } => Box::new(FixedStrategy {
                lambdas: lambdas
                    .iter()
                    .map(|l| DiscPoint::new(*l))
                    .collect::<Result<Vec<_>>>()?,
                tail: tail.clone(),
                index: 0,
            }),
            StrategySpec::GreedyAfd {
                radial_levels,
                angular_resolution,
                r_max,
            } => Box::new(GreedyStrategy {
                radial_levels: *radial_levels,
                angular_resolution: *angular_resolution,
                r_max: *r_max,
            }),
            StrategySpec::ClassicalUnwinding {
                eps_root,
                max_degree,
            } => Box::new(UnwindingStrategy {
                eps_root: *eps_root,
                max_degree: *max_degree,
            }),
            StrategySpec::OuterRepeat => Box::new(OuterStrategy),
        })
    }
}

/// b_n = z for every n.
pub struct TaylorStrategy;

impl Strategy for TaylorStrategy {
    fn next_multiplier(
        &mut self,
        _r_prev: &AnalyticCoeffs,
        _ctx: &ToeplitzContext,
    ) -> Result<StrategyStep> {
        Ok(StrategyStep {
            multiplier: Arc::new(Multiplier::monomial()),
            lambda: Some(Complex64::default()),
        })
    }

    fn tail(&self) -> ProductTail {
        ProductTail::Moduli {
            prefix: vec![0.0],
            rule: TailRule::RepeatLast,
        }
    }

    fn name(&self) -> &'static str {
        "taylor"
    }
}

/// Blaschke factors over a declared lambda sequence.
pub struct FixedStrategy {
    lambdas: Vec<DiscPoint>,
    tail: TailRule,
    index: usize,
}

impl FixedStrategy {
    pub fn new(lambdas: Vec<DiscPoint>, tail: TailRule) -> Self {
        FixedStrategy {
            lambdas,
            tail,
            index: 0,
        }
    }

    fn lambda_at(&self, index: usize) -> Result<DiscPoint> {
        if index < self.lambdas.len() {
            return Ok(self.lambdas[index]);
        }
        match &self.tail {
            TailRule::Exhaust => Err(CoreError::StrategyExhausted { index: index + 1 }),
            TailRule::RepeatLast => self
                .lambdas
                .last()
                .copied()
                .ok_or(CoreError::StrategyExhausted { index: index + 1 }),
            TailRule::GeometricApproach { rate } => {
                let modulus = 1.0 - rate.powi(index as i32 + 1);
                DiscPoint::from_parts(modulus, 0.0)
            }
        }
    }
}

impl Strategy for FixedStrategy {
    fn next_multiplier(
        &mut self,
        _r_prev: &AnalyticCoeffs,
        _ctx: &ToeplitzContext,
    ) -> Result<StrategyStep> {
        let lambda = self.lambda_at(self.index)?;
        self.index += 1;
        Ok(StrategyStep {
            multiplier: Arc::new(Multiplier::blaschke_factor(lambda)),
            lambda: Some(lambda.value()),
        })
    }

    fn tail(&self) -> ProductTail {
        ProductTail::Moduli {
            prefix: self.lambdas.iter().map(|l| l.value().norm()).collect(),
            rule: self.tail.clone(),
        }
    }

    fn name(&self) -> &'static str {
        "fixed"
    }
}

/// Greedy adaptive selection: the next zero maximizes the captured
/// energy (1 - |lambda|^2) |r(lambda)|^2 over a polar grid, which by the
/// H^2 energy identity minimizes the next residual norm over that grid.
pub struct GreedyStrategy {
    pub radial_levels: usize,
    pub angular_resolution: usize,
    pub r_max: f64,
}

impl GreedyStrategy {
    /// Deterministic scan with ties broken toward the smaller radius,
    /// then the smaller angle.
    pub fn select(&self, r_prev: &AnalyticCoeffs) -> Result<DiscPoint> {
        let mut best_value = f64::NEG_INFINITY;
        let mut best = Complex64::default();
        for i in 0..self.radial_levels {
            let rho = if self.radial_levels == 1 {
                0.0
            } else {
                self.r_max * i as f64 / (self.radial_levels - 1) as f64
            };
            for j in 0..self.angular_resolution {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / self.angular_resolution as f64;
                let z = Complex64::from_polar(rho, theta);
                let value = (1.0 - rho * rho) * r_prev.horner(z).norm_sqr();
                if value > best_value {
                    best_value = value;
                    best = z;
                }
            }
        }
        if best_value < 1e-15 {
            return Err(CoreError::DegenerateRemainder { best: best_value });
        }
        DiscPoint::new(best)
    }
}

impl Strategy for GreedyStrategy {
    fn next_multiplier(
        &mut self,
        r_prev: &AnalyticCoeffs,
        _ctx: &ToeplitzContext,
    ) -> Result<StrategyStep> {
        let lambda = self.select(r_prev)?;
        Ok(StrategyStep {
            multiplier: Arc::new(Multiplier::blaschke_factor(lambda)),
            lambda: Some(lambda.value()),
        })
    }

    fn tail(&self) -> ProductTail {
        // moduli never exceed r_max <= 0.99, so sum (1 - |lambda_n|) diverges
        ProductTail::CertifiedVanishing
    }

    fn name(&self) -> &'static str {
        "greedy"
    }
}

/// b_n = (z - 1)/2 for every n.
pub struct OuterStrategy;

impl Strategy for OuterStrategy {
    fn next_multiplier(
        &mut self,
        _r_prev: &AnalyticCoeffs,
        _ctx: &ToeplitzContext,
    ) -> Result<StrategyStep> {
        Ok(StrategyStep {
            multiplier: Arc::new(Multiplier::outer_half_shift()),
            lambda: None,
        })
    }

    fn tail(&self) -> ProductTail {
        ProductTail::RepeatSymbol(Arc::new(Multiplier::outer_half_shift()))
    }

    fn name(&self) -> &'static str {
        "outer"
    }
}

/// Classical unwinding as an engine strategy: each step extracts every
/// in-disc zero of r - r(0) into one finite Blaschke product.
pub struct UnwindingStrategy {
    pub eps_root: f64,
    pub max_degree: usize,
}

impl Strategy for UnwindingStrategy {
    fn next_multiplier(
        &mut self,
        r_prev: &AnalyticCoeffs,
        _ctx: &ToeplitzContext,
    ) -> Result<StrategyStep> {
        let b_step = unwinding_factor(r_prev, self.eps_root, self.max_degree)?.0;
        Ok(StrategyStep {
            multiplier: Arc::new(b_step),
            lambda: None,
        })
    }

    fn tail(&self) -> ProductTail {
        // the origin zero of r - r(0) recurs at every step
        ProductTail::CertifiedVanishing
    }

    fn name(&self) -> &'static str {
        "unwinding"
    }
}

/// The Blaschke factor gathering the in-disc zeros of g - g(0), with
/// origin zeros contributing plain monomial factors z (a unimodular sign
/// adjustment of the raw product).
fn unwinding_factor(
    g: &AnalyticCoeffs,
    eps_root: f64,
    max_degree: usize,
) -> Result<(Multiplier, InDiscRoots, AnalyticCoeffs)> {
    let g_scale = g
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut coeffs = g.coeffs().to_vec();
    if !coeffs.is_empty() {
        coeffs[0] = Complex64::default();
    }
    // the remainder counts as degenerate relative to g's own scale, so
    // grid roundoff in trailing coefficients never masquerades as zeros
    let p_scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if p_scale <= 1e-13 * g_scale {
        return Err(CoreError::DegenerateRemainder { best: p_scale });
    }
    let degree = coeffs
        .iter()
        .rposition(|c| c.norm() > 1e-14 * p_scale)
        .unwrap_or(0);
    coeffs.truncate(degree + 1);
    let p = AnalyticCoeffs::new(coeffs);
    if degree > max_degree {
        return Err(CoreError::RootFinding(format!(
            "degree {degree} exceeds the configured maximum {max_degree}"
        )));
    }
    let roots = roots_in_disc(&p, eps_root)?;
    let origin_mult = roots
        .in_disc
        .iter()
        .find(|r| r.root.norm() == 0.0)
        .map(|r| r.multiplicity)
        .unwrap_or(0);
    let zeros = roots.flattened()?;
    let scale = if origin_mult % 2 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(-1.0, 0.0)
    };
    let b_step = Multiplier::finite_blaschke_scaled(zeros, scale)?;
    Ok((b_step, roots, p))
}

/// One classical unwinding step: factor g - g(0) = B_step * g_next with
/// B_step gathering all in-disc zeros and g_next root-free in the disc
/// up to the eps_root slack.
#[derive(Debug, Clone)]
pub struct UnwindStep {
    pub b_step: Multiplier,
    pub zeros: Vec<DiscPoint>,
    pub excluded_roots: Vec<Complex64>,
    pub g_next: AnalyticCoeffs,
    pub constant: Complex64,
}

pub fn classical_unwinding_step(
    g: &AnalyticCoeffs,
    eps_root: f64,
    ctx: &ToeplitzContext,
) -> Result<UnwindStep> {
    let (b_step, roots, p) = unwinding_factor(g, eps_root, DEFAULT_MAX_DEGREE)?;
    let g_next = ctx.apply_coanalytic_symbol(&b_step, &p)?;

    // the deflated function must have no in-disc roots beyond the slack
    if let Some(d) = g_next.significant_degree(1e-13) {
        if d > 0 {
            let trimmed = AnalyticCoeffs::new(g_next.coeffs()[..=d].to_vec());
            let residual_roots = roots_in_disc(&trimmed, eps_root)?;
            if let Some(bad) = residual_roots.in_disc.first() {
                return Err(CoreError::DeflationIncomplete {
                    root: bad.root,
                    value: g_next.horner(bad.root).norm(),
                });
            }
        }
    }

    Ok(UnwindStep {
        b_step,
        zeros: roots.flattened()?,
        excluded_roots: roots.excluded_near_boundary.clone(),
        g_next,
        constant: g.coefficient(0),
    })
}

/// Record of one driver step of the classical unwinding series.
#[derive(Debug, Clone)]
pub struct UnwindStepRecord {
    pub degree: usize,
    pub zeros: Vec<Complex64>,
    pub excluded_roots: Vec<Complex64>,
}

/// The classical Blaschke unwinding series of a polynomial:
/// f = f(0) + f_1(0) B_1 + f_2(0) B_1 B_2 + ...  (terminates for
/// polynomial input since each step extracts at least the origin zero).
#[derive(Debug, Clone)]
pub struct UnwindSeries {
    /// f(0), f_1(0), f_2(0), ...
    pub constants: Vec<Complex64>,
    pub steps: Vec<UnwindStepRecord>,
    /// Coefficients of each series term constants[k] * B_1...B_k.
    pub terms: Vec<AnalyticCoeffs>,
    pub reconstruction_error: f64,
}

pub fn unwind_series(
    f: &AnalyticCoeffs,
    eps_root: f64,
    max_steps: usize,
    ctx: &ToeplitzContext,
) -> Result<UnwindSeries> {
    let mut g = f.clone();
    let mut product_samples = vec![Complex64::new(1.0, 0.0); ctx.grid_size()];
    let mut constants = Vec::new();
    let mut steps = Vec::new();
    let mut terms: Vec<AnalyticCoeffs> = Vec::new();

    loop {
        let constant = g.coefficient(0);
        constants.push(constant);
        let scaled: Vec<Complex64> = product_samples.iter().map(|v| v * constant).collect();
        terms.push(ctx.project_with_tail(&scaled).coeffs);

        if constants.len() > max_steps {
            break;
        }
        let step = match classical_unwinding_step(&g, eps_root, ctx) {
            Ok(step) => step,
            // a numerically constant remainder ends the finite series
            Err(CoreError::DegenerateRemainder { .. }) => break,
            Err(e) => return Err(e),
        };
        let bs = step.b_step.boundary_samples(ctx.grid_size())?;
        for (acc, v) in product_samples.iter_mut().zip(bs.iter()) {
            *acc *= v;
        }
        steps.push(UnwindStepRecord {
            degree: step.zeros.len(),
            zeros: step.zeros.iter().map(|z| z.value()).collect(),
            excluded_roots: step.excluded_roots.clone(),
        });
        g = step.g_next;
    }

    let mut sum = AnalyticCoeffs::zero(ctx.truncation());
    for t in &terms {
        sum = sum.add(t);
    }
    let reconstruction_error = sum.sub(&f.resized(sum.truncation_order())).h2_norm();

    Ok(UnwindSeries {
        constants,
        steps,
        terms,
        reconstruction_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx() -> ToeplitzContext {
        ToeplitzContext::new(64, 256).unwrap()
    }

    #[test]
    fn taylor_yields_monomials() {
        let mut s = TaylorStrategy;
        let f = AnalyticCoeffs::from_reals(&[1.0]);
        let mut product = Complex64::new(1.0, 0.0);
        for _ in 0..3 {
            let step = s.next_multiplier(&f, &ctx()).unwrap();
            product *= step.multiplier.evaluate(c(0.5, 0.0));
        }
        assert!((product - c(0.125, 0.0)).norm() < 1e-15);
        assert_eq!(classify_tail(&s.tail()), TailClass::Vanishing);
    }

    #[test]
    fn fixed_sequence_and_tail_rules() {
        let f = AnalyticCoeffs::from_reals(&[1.0]);
        let l0 = DiscPoint::from_parts(0.0, 0.0).unwrap();
        let l5 = DiscPoint::from_parts(0.5, 0.0).unwrap();

        let mut s = FixedStrategy::new(vec![l0, l5], TailRule::RepeatLast);
        let got: Vec<Option<Complex64>> = (0..3)
            .map(|_| s.next_multiplier(&f, &ctx()).unwrap().lambda)
            .collect();
        assert_eq!(got[0], Some(c(0.0, 0.0)));
        assert_eq!(got[1], Some(c(0.5, 0.0)));
        assert_eq!(got[2], Some(c(0.5, 0.0)));
        assert_eq!(classify_tail(&s.tail()), TailClass::Vanishing);

        let mut s = FixedStrategy::new(vec![], TailRule::GeometricApproach { rate: 0.5 });
        let third = (0..3)
            .map(|_| s.next_multiplier(&f, &ctx()).unwrap().lambda.unwrap())
            .last()
            .unwrap();
        assert!((third - c(0.875, 0.0)).norm() < 1e-15);
        assert_eq!(classify_tail(&s.tail()), TailClass::Limit);

        let mut s = FixedStrategy::new(vec![l5], TailRule::Exhaust);
        assert!(s.next_multiplier(&f, &ctx()).is_ok());
        assert!(matches!(
            s.next_multiplier(&f, &ctx()),
            Err(CoreError::StrategyExhausted { index: 2 })
        ));
        assert_eq!(classify_tail(&s.tail()), TailClass::Limit);
    }

    #[test]
    fn greedy_selects_origin_for_constants() {
        let g = GreedyStrategy {
            radial_levels: GREEDY_RADIAL_LEVELS,
            angular_resolution: GREEDY_ANGULAR_RESOLUTION,
            r_max: GREEDY_R_MAX,
        };
        let r = AnalyticCoeffs::from_reals(&[1.0]);
        let sel = g.select(&r).unwrap();
        assert!(sel.value().norm() < 1e-15);
    }

    #[test]
    fn greedy_matches_brute_force_oracle_and_scaling() {
        let g = GreedyStrategy {
            radial_levels: GREEDY_RADIAL_LEVELS,
            angular_resolution: GREEDY_ANGULAR_RESOLUTION,
            r_max: GREEDY_R_MAX,
        };
        let r = crate::hardy::cauchy_kernel(DiscPoint::from_parts(0.5, 0.0).unwrap(), 64);
        let sel = g.select(&r).unwrap();

        // independent argmax over the published grid definition
        let mut best = (f64::NEG_INFINITY, Complex64::default());
        for i in 0..GREEDY_RADIAL_LEVELS {
            let rho = GREEDY_R_MAX * i as f64 / (GREEDY_RADIAL_LEVELS - 1) as f64;
            for j in 0..GREEDY_ANGULAR_RESOLUTION {
                let th = 2.0 * std::f64::consts::PI * j as f64 / GREEDY_ANGULAR_RESOLUTION as f64;
                let z = Complex64::from_polar(rho, th);
                let v = (1.0 - rho * rho) * r.horner(z).norm_sqr();
                if v > best.0 {
                    best = (v, z);
                }
            }
        }
        assert!((sel.value() - best.1).norm() < 1e-15);
        // the true maximizer is 0.5; the grid point lands nearby
        assert!((sel.value() - c(0.5, 0.0)).norm() < 0.05);

        let sel_scaled = g.select(&r.scaled(c(7.0, 0.0))).unwrap();
        assert_eq!(sel.value(), sel_scaled.value());
    }

    #[test]
    fn greedy_rejects_degenerate_remainder() {
        let g = GreedyStrategy {
            radial_levels: 4,
            angular_resolution: 8,
            r_max: 0.9,
        };
        let r = AnalyticCoeffs::zero(4);
        assert!(matches!(
            g.select(&r),
            Err(CoreError::DegenerateRemainder { .. })
        ));
    }

    #[test]
    fn unwinding_step_examples() {
        let ctx = ctx();

        // g = z^2: B = z^2, g_next = 1, constant 0
        let step =
            classical_unwinding_step(&AnalyticCoeffs::from_reals(&[0.0, 0.0, 1.0]), 1e-6, &ctx)
                .unwrap();
        assert_eq!(step.zeros.len(), 2);
        assert!(step.constant.norm() < 1e-15);
        let s = step.b_step.boundary_samples(8).unwrap();
        let grid = crate::hardy::roots_of_unity(8);
        for (v, z) in s.iter().zip(grid.iter()) {
            assert!((v - z * z).norm() < 1e-12);
        }
        assert!((step.g_next.coefficient(0) - c(1.0, 0.0)).norm() < 1e-10);
        assert!(step.g_next.significant_degree(1e-12).unwrap_or(0) == 0);

        // g = z + z^2: the root at -1 sits on the circle and is excluded
        let step =
            classical_unwinding_step(&AnalyticCoeffs::from_reals(&[0.0, 1.0, 1.0]), 1e-6, &ctx)
                .unwrap();
        assert_eq!(step.zeros.len(), 1);
        assert_eq!(step.excluded_roots.len(), 1);
        assert!((step.g_next.coefficient(0) - c(1.0, 0.0)).norm() < 1e-10);
        assert!((step.g_next.coefficient(1) - c(1.0, 0.0)).norm() < 1e-10);

        // g = 2z: B = z, g_next = 2
        let step = classical_unwinding_step(&AnalyticCoeffs::from_reals(&[0.0, 2.0]), 1e-6, &ctx)
            .unwrap();
        assert_eq!(step.zeros.len(), 1);
        assert!((step.g_next.coefficient(0) - c(2.0, 0.0)).norm() < 1e-12);
        assert!((step.b_step.evaluate(c(0.5, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn deflation_reconstructs_input() {
        let ctx = ToeplitzContext::new(64, 512).unwrap();
        let mut state: u64 = 0x9E3779B97F4A7C15;
        let mut unit = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..10 {
            let g = AnalyticCoeffs::new((0..33).map(|_| c(unit(), unit())).collect());
            let step = classical_unwinding_step(&g, 1e-6, &ctx).unwrap();
            let back = ctx
                .apply_analytic_symbol(&step.b_step, &step.g_next)
                .unwrap();
            let mut recon = back.coeffs().to_vec();
            recon[0] += step.constant;
            let err = AnalyticCoeffs::new(recon)
                .sub(&g.resized(ctx.truncation()))
                .h2_norm();
            assert!(err < 1e-9, "deflation reconstruction error {err:.3e}");
        }
    }

    #[test]
    fn unwind_series_of_z_plus_z2() {
        let ctx = ctx();
        let f = AnalyticCoeffs::from_reals(&[0.0, 1.0, 1.0]);
        let series = unwind_series(&f, 1e-6, 16, &ctx).unwrap();
        assert_eq!(series.constants.len(), 3);
        assert!(series.constants[0].norm() < 1e-12);
        assert!((series.constants[1] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((series.constants[2] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(series.reconstruction_error < 1e-10);
    }

    #[test]
    fn unwind_series_of_z2() {
        let ctx = ctx();
        let f = AnalyticCoeffs::from_reals(&[0.0, 0.0, 1.0]);
        let series = unwind_series(&f, 1e-6, 16, &ctx).unwrap();
        assert_eq!(series.constants.len(), 2);
        assert!(series.constants[0].norm() < 1e-12);
        assert!((series.constants[1] - c(1.0, 0.0)).norm() < 1e-10);
        assert_eq!(series.steps[0].degree, 2);
        assert!(series.reconstruction_error < 1e-10);
    }

    #[test]
    fn strategy_spec_validation() {
        assert!(StrategySpec::GreedyAfd {
            radial_levels: 0,
            angular_resolution: 8,
            r_max: 0.9
        }
        .validate()
        .is_err());
        assert!(StrategySpec::GreedyAfd {
            radial_levels: 8,
            angular_resolution: 8,
            r_max: 0.995
        }
        .validate()
        .is_err());
        assert!(StrategySpec::ClassicalUnwinding {
            eps_root: 0.5,
            max_degree: 64
        }
        .validate()
        .is_err());
        assert!(StrategySpec::Taylor.validate().is_ok());
    }
}
