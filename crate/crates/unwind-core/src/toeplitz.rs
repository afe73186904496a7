//! Analytic and co-analytic Toeplitz operators on the boundary grid and
//! the P_b / Q_b calculus built from them.
//!
//! Co-analytic application is boundary samples plus a frequency mask:
//! exact for polynomial symbols with grid headroom, and uniform across
//! multiplier kinds. The shift-like symbols (monomial, outer half-shift)
//! take the algebraically identical coefficient route so Taylor runs
//! terminate at an exact zero rather than FFT roundoff.

use crate::error::{CoreError, Result};
use crate::hardy::{self, AnalyticCoeffs};
use crate::multipliers::{BoundarySymbol, Multiplier, MultiplierKind};
use num_complex::Complex64;

/// Grid/truncation pair shared by repeated operator applications.
///
/// Read-only after construction; the invariant N >= 2M leaves headroom
/// for one product without aliasing.
#[derive(Debug, Clone, Copy)]
pub struct ToeplitzContext {
    grid: usize,
    truncation: usize,
}

/// Result of an operator application together with the Parseval mass of
/// the coefficient tail discarded by truncating back to order M.
#[derive(Debug, Clone)]
pub struct TruncatedOutput {
    pub coeffs: AnalyticCoeffs,
    pub tail_mass: f64,
}

impl ToeplitzContext {
    pub fn new(truncation: usize, grid: usize) -> Result<Self> {
        if !grid.is_power_of_two() {
            return Err(CoreError::GridNotPowerOfTwo(grid));
        }
        if truncation == 0 {
            return Err(CoreError::Domain("truncation order must be positive".into()));
        }
        if grid < 2 * truncation {
            return Err(CoreError::AliasingRisk {
                grid,
                order: truncation,
            });
        }
        Ok(ToeplitzContext { grid, truncation })
    }

    /// Defaults used across the crate: M = 256 on an N = 1024 grid.
    pub fn standard() -> Self {
        ToeplitzContext {
            grid: 1024,
            truncation: 256,
        }
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Highest coefficient count the grid can carry analytically.
    pub fn working_order(&self) -> usize {
        self.grid / 2
    }

    fn check_headroom(&self, b: &dyn BoundarySymbol, f: &AnalyticCoeffs) -> Result<()> {
        if let (Some(db), Some(df)) = (b.symbol_degree_hint(), f.degree()) {
            let needed = (db + 1) + (df + 1);
            if needed > self.grid {
                return Err(CoreError::HeadroomViolation {
                    index: 0,
                    needed,
                    available: self.grid,
                });
            }
        }
        Ok(())
    }

    /// T_b f = b f for analytic b: boundary multiply, project, truncate.
    pub fn apply_analytic(&self, b: &Multiplier, f: &AnalyticCoeffs) -> Result<AnalyticCoeffs> {
        Ok(self.apply_analytic_with_tail(b, f)?.coeffs)
    }

    /// As `apply_analytic`, also reporting the discarded tail mass.
    pub fn apply_analytic_with_tail(
        &self,
        b: &Multiplier,
        f: &AnalyticCoeffs,
    ) -> Result<TruncatedOutput> {
        match b.kind() {
            MultiplierKind::Monomial => Ok(self.truncate_with_tail(forward_shift(f))),
            MultiplierKind::OuterHalfShift => {
                // (S - I)/2
                let shifted = forward_shift(f);
                Ok(self.truncate_with_tail(shifted.sub(f).scaled(Complex64::new(0.5, 0.0))))
            }
            _ => {
                self.check_headroom(b, f)?;
                self.apply_analytic_symbol_with_tail(b, f)
            }
        }
    }

    /// Grid route for any boundary symbol (multiplier or running product).
    pub fn apply_analytic_symbol(
        &self,
        b: &dyn BoundarySymbol,
        f: &AnalyticCoeffs,
    ) -> Result<AnalyticCoeffs> {
        Ok(self.apply_analytic_symbol_with_tail(b, f)?.coeffs)
    }

    pub fn apply_analytic_symbol_with_tail(
        &self,
        b: &dyn BoundarySymbol,
        f: &AnalyticCoeffs,
    ) -> Result<TruncatedOutput> {
        let bs = b.symbol_samples(self.grid)?;
        let fs = self.sample(f)?;
        let prod: Vec<Complex64> = bs.iter().zip(fs.iter()).map(|(x, y)| x * y).collect();
        Ok(self.project_with_tail(&prod))
    }

    /// T_{conj(b)} f = P_+(conj(b) f) on the grid.
    pub fn apply_coanalytic(&self, b: &Multiplier, f: &AnalyticCoeffs) -> Result<AnalyticCoeffs> {
        match b.kind() {
            MultiplierKind::Monomial => Ok(backward_shift(f)),
            MultiplierKind::OuterHalfShift => {
                // (Z - I)/2
                let shifted = backward_shift(f);
                Ok(shifted.sub(f).scaled(Complex64::new(0.5, 0.0)))
            }
            _ => {
                self.check_headroom(b, f)?;
                self.apply_coanalytic_symbol(b, f)
            }
        }
    }

    /// Grid route of the co-analytic application for any symbol.
    pub fn apply_coanalytic_symbol(
        &self,
        b: &dyn BoundarySymbol,
        f: &AnalyticCoeffs,
    ) -> Result<AnalyticCoeffs> {
        let bs = b.symbol_samples(self.grid)?;
        let fs = self.sample(f)?;
        let prod: Vec<Complex64> = bs.iter().zip(fs.iter()).map(|(x, y)| x.conj() * y).collect();
        Ok(self.project_with_tail(&prod).coeffs)
    }

    /// Q_b f = f - b T_{conj(b)} f. For inner b this is the orthogonal
    /// projection onto the model space K_b in H^2.
    pub fn apply_q(&self, b: &Multiplier, f: &AnalyticCoeffs) -> Result<AnalyticCoeffs> {
        let co = self.apply_coanalytic(b, f)?;
        let back = self.apply_analytic(b, &co)?;
        Ok(f.resized(f.truncation_order().max(back.truncation_order())).sub(&back))
    }

    /// Q for the outer half-shift via its closed form
    /// (2 f + f(0) 1 + S f + Z f) / 4.
    pub fn outer_q_formula(&self, f: &AnalyticCoeffs) -> AnalyticCoeffs {
        let mut acc = f.scaled(Complex64::new(2.0, 0.0));
        let mut constant = AnalyticCoeffs::zero(1.max(f.truncation_order()));
        let mut coeffs = constant.coeffs().to_vec();
        coeffs[0] = f.coefficient(0);
        constant = AnalyticCoeffs::new(coeffs);
        acc = acc.add(&constant);
        acc = acc.add(&forward_shift(f));
        acc = acc.add(&backward_shift(f));
        self.truncate_with_tail(acc.scaled(Complex64::new(0.25, 0.0))).coeffs
    }

    /// T_{conj(b)} T_{conj(c)} f, asserting agreement with the product
    /// symbol route T_{conj(bc)} f within a norm-scaled tolerance.
    pub fn compose_coanalytic(
        &self,
        b: &Multiplier,
        c: &Multiplier,
        f: &AnalyticCoeffs,
    ) -> Result<AnalyticCoeffs> {
        let sequential = self.apply_coanalytic(b, &self.apply_coanalytic(c, f)?)?;

        let bs = b.symbol_samples(self.grid)?;
        let cs = c.symbol_samples(self.grid)?;
        let fs = self.sample(f)?;
        let prod: Vec<Complex64> = bs
            .iter()
            .zip(cs.iter())
            .zip(fs.iter())
            .map(|((x, y), v)| (x * y).conj() * v)
            .collect();
        let joint = self.project_with_tail(&prod).coeffs;

        let defect = sequential.sub(&joint).h2_norm();
        let tolerance = 1e-11 * f.h2_norm().max(1.0);
        if defect > tolerance {
            return Err(CoreError::CommutationDefect { defect, tolerance });
        }
        Ok(sequential)
    }

    /// Samples of a coefficient vector on the context grid. Coefficient
    /// counts up to the working order N/2 are accepted.
    pub(crate) fn sample(&self, f: &AnalyticCoeffs) -> Result<Vec<Complex64>> {
        if f.truncation_order() > self.working_order() {
            return Err(CoreError::AliasingRisk {
                grid: self.grid,
                order: f.truncation_order(),
            });
        }
        Ok(hardy::sample_polynomial(f.coeffs(), self.grid))
    }

    /// Frequency mask onto bins 0..N/2-1, truncated back to order M with
    /// the dropped analytic-tail mass reported.
    pub(crate) fn project_with_tail(&self, samples: &[Complex64]) -> TruncatedOutput {
        let spec = hardy::grid_spectrum(samples);
        let half = self.grid / 2;
        let tail_mass = spec[self.truncation.min(half)..half]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        TruncatedOutput {
            coeffs: AnalyticCoeffs::new(spec[..self.truncation.min(half)].to_vec()),
            tail_mass,
        }
    }

    /// Full-resolution mask onto bins 0..N/2-1 (no truncation to M).
    pub(crate) fn project_working(&self, samples: &[Complex64]) -> AnalyticCoeffs {
        let spec = hardy::grid_spectrum(samples);
        AnalyticCoeffs::new(spec[..self.grid / 2].to_vec())
    }

    fn truncate_with_tail(&self, f: AnalyticCoeffs) -> TruncatedOutput {
        if f.truncation_order() <= self.truncation {
            return TruncatedOutput {
                coeffs: f,
                tail_mass: 0.0,
            };
        }
        let tail_mass = f.coeffs()[self.truncation..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        TruncatedOutput {
            coeffs: AnalyticCoeffs::new(f.coeffs()[..self.truncation].to_vec()),
            tail_mass,
        }
    }
}

/// S f : multiply by z. Extends the coefficient vector by one.
pub(crate) fn forward_shift(f: &AnalyticCoeffs) -> AnalyticCoeffs {
    let mut coeffs = Vec::with_capacity(f.truncation_order() + 1);
    coeffs.push(Complex64::default());
    coeffs.extend_from_slice(f.coeffs());
    AnalyticCoeffs::new(coeffs)
}

/// Z f : drop the constant term.
pub(crate) fn backward_shift(f: &AnalyticCoeffs) -> AnalyticCoeffs {
    if f.truncation_order() <= 1 {
        return AnalyticCoeffs::new(Vec::new());
    }
    AnalyticCoeffs::new(f.coeffs()[1..].to_vec())
}
