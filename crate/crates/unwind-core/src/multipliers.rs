//! Closed-unit-ball H-infinity symbols: Blaschke factors and products,
//! the outer half-shift, monomials, general polynomial symbols, and the
//! running products B_n together with their tail classification.

use crate::error::{CoreError, Result};
use crate::hardy::{self, AnalyticCoeffs, DiscPoint};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Allowed excess over 1 for sup |b| on the validation grid.
pub const UNIT_BALL_TOL: f64 = 1e-10;
/// Allowed deviation from unit modulus for inner symbols on the grid.
pub const UNIMODULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub enum MultiplierKind {
    /// b(z) = z.
    Monomial,
    /// b(z) = (lambda - z) / (1 - conj(lambda) z).
    BlaschkeFactor(DiscPoint),
    /// A finite product of Blaschke factors times a unimodular scale.
    /// The empty product is the constant 1.
    FiniteBlaschke {
        zeros: Vec<DiscPoint>,
        scale: Complex64,
    },
    /// b(z) = (z - 1) / 2.
    OuterHalfShift,
    /// An arbitrary polynomial symbol, validated to stay in the unit ball.
    GeneralSymbol(AnalyticCoeffs),
}

/// A symbol in the closed unit ball of H-infinity with cached boundary
/// samples per grid size. Immutable after construction; the cache is
/// behind a lock so values can be shared across threads.
#[derive(Debug)]
pub struct Multiplier {
    kind: MultiplierKind,
    cache: RwLock<HashMap<usize, Arc<Vec<Complex64>>>>,
}

impl Clone for Multiplier {
    fn clone(&self) -> Self {
        Multiplier {
            kind: self.kind.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

fn blaschke_eval(lambda: Complex64, z: Complex64) -> Complex64 {
    (lambda - z) / (Complex64::new(1.0, 0.0) - lambda.conj() * z)
}

impl Multiplier {
    fn from_kind(kind: MultiplierKind) -> Self {
        Multiplier {
            kind,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn monomial() -> Self {
        Self::from_kind(MultiplierKind::Monomial)
    }

    pub fn blaschke_factor(lambda: DiscPoint) -> Self {
        Self::from_kind(MultiplierKind::BlaschkeFactor(lambda))
    }

    /// Plain product of Blaschke factors over the listed zeros
    /// (repetitions allowed); the empty list gives the constant 1.
    pub fn finite_blaschke(zeros: Vec<DiscPoint>) -> Self {
        Self::from_kind(MultiplierKind::FiniteBlaschke {
            zeros,
            scale: Complex64::new(1.0, 0.0),
        })
    }

    /// Finite Blaschke product multiplied by a unimodular constant.
    pub fn finite_blaschke_scaled(zeros: Vec<DiscPoint>, scale: Complex64) -> Result<Self> {
        if (scale.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(CoreError::Domain(format!(
                "scale must be unimodular, got |c| = {}",
                scale.norm()
            )));
        }
        Ok(Self::from_kind(MultiplierKind::FiniteBlaschke { zeros, scale }))
    }

    pub fn outer_half_shift() -> Self {
        Self::from_kind(MultiplierKind::OuterHalfShift)
    }

    /// General polynomial symbol; membership in the closed unit ball is
    /// checked numerically on a grid with headroom over the bandwidth.
    pub fn general_symbol(coeffs: AnalyticCoeffs) -> Result<Self> {
        let n = (8 * coeffs.truncation_order().max(8)).next_power_of_two();
        let samples = hardy::sample_polynomial(coeffs.coeffs(), n);
        let sup = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup > 1.0 + UNIT_BALL_TOL {
            return Err(CoreError::UnitBallViolation { sup });
        }
        Ok(Self::from_kind(MultiplierKind::GeneralSymbol(coeffs)))
    }

    pub fn kind(&self) -> &MultiplierKind {
        &self.kind
    }

    /// Evaluation anywhere on the closed disc via the closed form.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            MultiplierKind::Monomial => z,
            MultiplierKind::BlaschkeFactor(l) => blaschke_eval(l.value(), z),
            MultiplierKind::FiniteBlaschke { zeros, scale } => {
                let mut acc = *scale;
                for l in zeros {
                    acc *= blaschke_eval(l.value(), z);
                }
                acc
            }
            MultiplierKind::OuterHalfShift => (z - Complex64::new(1.0, 0.0)) / 2.0,
            MultiplierKind::GeneralSymbol(c) => c.horner(z),
        }
    }

    /// Boundary samples on the N-grid, computed from the closed form and
    /// cached per grid size.
    pub fn boundary_samples(&self, n: usize) -> Result<Arc<Vec<Complex64>>> {
        if !n.is_power_of_two() {
            return Err(CoreError::GridNotPowerOfTwo(n));
        }
        if let Some(hit) = self.cache.read().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let values: Vec<Complex64> = match &self.kind {
            // Sampling the polynomial kinds goes through one padded DFT;
            // rational kinds come from the closed form so cancellation
            // near the boundary never enters.
            MultiplierKind::GeneralSymbol(c) => {
                if c.truncation_order() > n {
                    return Err(CoreError::AliasingRisk {
                        grid: n,
                        order: c.truncation_order(),
                    });
                }
                hardy::sample_polynomial(c.coeffs(), n)
            }
            _ => hardy::roots_of_unity(n)
                .into_iter()
                .map(|z| self.evaluate(z))
                .collect(),
        };
        let arc = Arc::new(values);
        self.cache.write().unwrap().insert(n, arc.clone());
        Ok(arc)
    }

    /// Polynomial bandwidth (degree), None for rational symbols.
    pub fn degree_hint(&self) -> Option<usize> {
        match &self.kind {
            MultiplierKind::Monomial => Some(1),
            MultiplierKind::OuterHalfShift => Some(1),
            MultiplierKind::GeneralSymbol(c) => Some(c.degree().unwrap_or(0)),
            MultiplierKind::BlaschkeFactor(_) => None,
            MultiplierKind::FiniteBlaschke { zeros, .. } => {
                if zeros.is_empty() {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }

    /// Whether the symbol has unimodular boundary values.
    pub fn is_inner(&self) -> bool {
        matches!(
            self.kind,
            MultiplierKind::Monomial
                | MultiplierKind::BlaschkeFactor(_)
                | MultiplierKind::FiniteBlaschke { .. }
        )
    }

    /// Coefficient form of the outer half-shift, [-1/2, 1/2].
    pub fn outer_half_shift_coeffs() -> AnalyticCoeffs {
        AnalyticCoeffs::from_reals(&[-0.5, 0.5])
    }
}

/// Running product B_n = b_1 b_2 ... b_n with cached grid samples.
/// Extension returns a new value; existing products are never mutated.
#[derive(Debug, Clone)]
pub struct MultiplierProduct {
    factors: Vec<Arc<Multiplier>>,
    samples: Vec<Complex64>,
    grid: usize,
}

impl MultiplierProduct {
    /// The empty product B_0 = 1 on the given grid.
    pub fn identity(grid: usize) -> Result<Self> {
        if !grid.is_power_of_two() {
            return Err(CoreError::GridNotPowerOfTwo(grid));
        }
        Ok(MultiplierProduct {
            factors: Vec::new(),
            samples: vec![Complex64::new(1.0, 0.0); grid],
            grid,
        })
    }

    /// B_{n+1} = B_n * b, multiplying the cached samples pointwise.
    pub fn extend(&self, b: Arc<Multiplier>) -> Result<Self> {
        let bs = b.boundary_samples(self.grid)?;
        let samples = self
            .samples
            .iter()
            .zip(bs.iter())
            .map(|(x, y)| x * y)
            .collect();
        let mut factors = self.factors.clone();
        factors.push(b);
        Ok(MultiplierProduct {
            factors,
            samples,
            grid: self.grid,
        })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    pub fn factors(&self) -> &[Arc<Multiplier>] {
        &self.factors
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// In-disc evaluation, factor by factor.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.factors
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, b| acc * b.evaluate(z))
    }

    pub fn is_inner(&self) -> bool {
        self.factors.iter().all(|b| b.is_inner())
    }
}

/// Anything with boundary samples and in-disc evaluation: multipliers and
/// their running products.
pub trait BoundarySymbol {
    fn symbol_samples(&self, n: usize) -> Result<Arc<Vec<Complex64>>>;
    fn symbol_evaluate(&self, z: Complex64) -> Complex64;
    fn symbol_degree_hint(&self) -> Option<usize>;
    fn symbol_is_inner(&self) -> bool;
}

impl BoundarySymbol for Multiplier {
    fn symbol_samples(&self, n: usize) -> Result<Arc<Vec<Complex64>>> {
        self.boundary_samples(n)
    }
    fn symbol_evaluate(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }
    fn symbol_degree_hint(&self) -> Option<usize> {
        self.degree_hint()
    }
    fn symbol_is_inner(&self) -> bool {
        self.is_inner()
    }
}

impl BoundarySymbol for MultiplierProduct {
    fn symbol_samples(&self, n: usize) -> Result<Arc<Vec<Complex64>>> {
        if n == self.grid {
            Ok(Arc::new(self.samples.clone()))
        } else {
            let mut acc = vec![Complex64::new(1.0, 0.0); n];
            for b in &self.factors {
                let bs = b.boundary_samples(n)?;
                for (a, v) in acc.iter_mut().zip(bs.iter()) {
                    *a *= v;
                }
            }
            Ok(Arc::new(acc))
        }
    }
    fn symbol_evaluate(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }
    fn symbol_degree_hint(&self) -> Option<usize> {
        self.factors
            .iter()
            .map(|b| b.degree_hint())
            .try_fold(0usize, |acc, d| d.map(|d| acc + d))
    }
    fn symbol_is_inner(&self) -> bool {
        self.is_inner()
    }
}

/// Outcome of the product-tail classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailClass {
    /// B_n -> 0 pointwise on the disc: the series alone reconstructs f.
    Vanishing,
    /// B_n -> B nonzero: a model-space term appears.
    Limit,
    /// The numeric probe could not certify either regime.
    Indeterminate,
}

impl TailClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            TailClass::Vanishing => "vanishing",
            TailClass::Limit => "limit",
            TailClass::Indeterminate => "indeterminate",
        }
    }
}

/// Declared continuation of a lambda sequence past its finite prefix.
#[derive(Debug, Clone, PartialEq)]
pub enum TailRule {
    /// No tail: the finite list is the whole sequence.
    Exhaust,
    /// Repeat the final lambda forever.
    RepeatLast,
    /// lambda_n = 1 - rate^n (real), approaching the boundary geometrically.
    GeometricApproach { rate: f64 },
}

/// Analytic classification from the Blaschke sum criterion: the sequence
/// of moduli is known as a finite prefix plus a declared tail rule, so
/// divergence of sum (1 - |lambda_n|) is decidable.
pub fn classify_blaschke_tail(moduli_prefix: &[f64], tail: &TailRule) -> TailClass {
    match tail {
        // Finite product: B_n is eventually constant and nonzero.
        TailRule::Exhaust => TailClass::Limit,
        // A repeated modulus < 1 contributes a fixed positive gap forever.
        TailRule::RepeatLast => match moduli_prefix.last() {
            Some(&m) if m < 1.0 => TailClass::Vanishing,
            _ => TailClass::Indeterminate,
        },
        // sum rate^n converges for rate < 1, so the Blaschke condition holds.
        TailRule::GeometricApproach { rate } => {
            if *rate > 0.0 && *rate < 1.0 {
                TailClass::Limit
            } else {
                TailClass::Indeterminate
            }
        }
    }
}

/// Probe points used by the numeric fallback classification.
pub fn probe_points() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, -0.5),
    ]
}

/// Threshold below which max |B_n| over the probes counts as vanished.
pub const PROBE_VANISH_THRESHOLD: f64 = 1e-8;
/// Per-step movement below which the probe values count as stalled.
pub const PROBE_STALL_THRESHOLD: f64 = 1e-12;
/// Consecutive stalled steps required to declare a limit.
pub const PROBE_STALL_WINDOW: usize = 8;

/// Numeric fallback for general symbol streams: track B_n on a fixed
/// compact probe set and compare against the threshold schedule. Streams
/// that neither vanish nor stall within max_steps are flagged, not
/// guessed.
pub fn classify_by_probe<'a, I>(stream: I, max_steps: usize) -> TailClass
where
    I: IntoIterator<Item = &'a Multiplier>,
{
    let probes = probe_points();
    let mut values: Vec<Complex64> = probes.iter().map(|_| Complex64::new(1.0, 0.0)).collect();
    let mut stalled = 0usize;
    for (step, b) in stream.into_iter().enumerate() {
        if step >= max_steps {
            break;
        }
        let mut movement: f64 = 0.0;
        for (v, &z) in values.iter_mut().zip(probes.iter()) {
            let next = *v * b.evaluate(z);
            movement = movement.max((next - *v).norm());
            *v = next;
        }
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup < PROBE_VANISH_THRESHOLD {
            return TailClass::Vanishing;
        }
        if movement < PROBE_STALL_THRESHOLD {
            stalled += 1;
            if stalled >= PROBE_STALL_WINDOW {
                return TailClass::Limit;
            }
        } else {
            stalled = 0;
        }
    }
    TailClass::Indeterminate
}
