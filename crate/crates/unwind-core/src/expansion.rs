//! The unwinding engine: term generation g_n = B_{n-1} Q_{b_n} T_{conj(B_{n-1})} f,
//! the residual recursion, partial sums, dichotomy handling, the model
//! projection, and the scalar-coefficient (TMW) form.
//!
//! Internally every product is a pointwise product of boundary samples,
//! so the finite partial-sum identity telescopes exactly on the grid and
//! survives coefficient truncation by linearity. Residuals are kept at
//! the full working order N/2; the reported lists carry their order-M
//! projections.

use crate::error::{CoreError, Result};
use crate::hardy::{self, cauchy_kernel, hp_norm, AnalyticCoeffs, DiscPoint};
use crate::multipliers::{BoundarySymbol, Multiplier, MultiplierKind, MultiplierProduct, TailClass};
use crate::strategies::{classify_tail, Strategy, StrategySpec};
use crate::toeplitz::{backward_shift, ToeplitzContext};
use num_complex::Complex64;

/// Per-run parameters of the engine.
#[derive(Debug, Clone)]
pub struct ExpandOptions {
    /// Norm exponent for residual tracking, in (1, inf).
    pub p: f64,
    pub max_terms: usize,
    /// Stop once the residual norm falls below this.
    pub tol: f64,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            p: 2.0,
            max_terms: 50,
            tol: 1e-10,
        }
    }
}

/// Reconstruction tolerance at prefix length n: error accumulates
/// linearly in the term count through repeated grid products.
pub fn reconstruction_tolerance(n: usize) -> f64 {
    1e-10 * (1.0 + n as f64)
}

/// One expansion term g_n = B_{n-1} Q_{b_n} T_{conj(B_{n-1})} f.
#[derive(Debug, Clone)]
pub struct ExpansionTerm {
    /// 1-based term index.
    pub index: usize,
    /// Coefficients of g_n, truncated to order M.
    pub term_fn: AnalyticCoeffs,
    /// The Q-output Q_{b_n} r_{n-1}, truncated to order M.
    pub q_output: AnalyticCoeffs,
    /// The running product B_{n-1} in front of the Q-output.
    pub product_before: MultiplierProduct,
    /// Selected zero for Blaschke-factor steps.
    pub lambda: Option<Complex64>,
    /// Scalar attached to the step: the orthonormal-basis Fourier
    /// coefficient (1-|lambda|^2)^{1/2} r_{n-1}(lambda) for factor steps,
    /// or the extracted constant for finite-Blaschke steps.
    pub scalar: Option<Complex64>,
    /// hp-norm of term_fn at the configured p.
    pub norm: f64,
}

/// Everything a finished run records.
#[derive(Debug, Clone)]
pub struct ExpansionResult {
    input: AnalyticCoeffs,
    ctx: ToeplitzContext,
    pub options: ExpandOptions,
    pub strategy_name: String,
    pub terms: Vec<ExpansionTerm>,
    /// r_n = T_{conj(B_n)} f, truncated to order M, for n = 1..N.
    pub residuals: Vec<AnalyticCoeffs>,
    /// hp-norms of the truncated residuals, entrywise.
    pub residual_norms: Vec<f64>,
    pub dichotomy: TailClass,
    /// Direct model projection B_N T_{conj(B_N)} f (truncated), present
    /// in the Limit regime.
    pub model_term: Option<AnalyticCoeffs>,
    final_product: MultiplierProduct,
    /// Iterated residual at full working order, for exact reconstruction.
    residuals_working: Vec<AnalyticCoeffs>,
}

/// Diagnostic record of the finite partial-sum identity at prefix n.
#[derive(Debug, Clone, Copy)]
pub struct ReconstructionReport {
    pub prefix: usize,
    /// || f - partial_sum(n) - B_n r_n ||_p
    pub reconstruction_error: f64,
    /// || r_n ||_p
    pub residual_norm: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Run the expansion: r_0 = f, b_n from the strategy,
/// g_n = B_{n-1} (r_{n-1} - b_n T_{conj(b_n)} r_{n-1}), r_n = T_{conj(b_n)} r_{n-1},
/// stopping at max_terms or once the residual norm drops below tol.
pub fn expand(
    f: &AnalyticCoeffs,
    strategy: &mut dyn Strategy,
    ctx: &ToeplitzContext,
    options: &ExpandOptions,
) -> Result<ExpansionResult> {
    if !(options.p > 1.0) || !options.p.is_finite() {
        return Err(CoreError::Domain(format!(
            "p = {} outside (1, inf)",
            options.p
        )));
    }
    let working = ctx.working_order();
    if f.truncation_order() > ctx.truncation() {
        return Err(CoreError::TruncationCapacity {
            requested: f.truncation_order(),
            capacity: ctx.truncation(),
        });
    }

    let f_samples = ctx.sample(f)?;
    let mut r_work = f.resized(working.min(f.truncation_order().max(1)));
    let mut r_samples = f_samples.clone();
    let mut product = MultiplierProduct::identity(ctx.grid_size())?;
    let mut degree_budget = f.significant_degree(1e-13).unwrap_or(0);

    let mut terms = Vec::new();
    let mut residuals = Vec::new();
    let mut residuals_working = Vec::new();
    let mut residual_norms = Vec::new();

    for index in 1..=options.max_terms {
        let step = match strategy.next_multiplier(&r_work, ctx) {
            Ok(step) => step,
            // a numerically exhausted remainder ends the run cleanly
            Err(CoreError::DegenerateRemainder { .. }) => break,
            Err(CoreError::StrategyExhausted { .. }) => {
                return Err(CoreError::StrategyExhausted { index })
            }
            Err(e) => return Err(e),
        };
        let b = step.multiplier.clone();

        let b_samples = b.boundary_samples(ctx.grid_size())?;
        let sup = b_samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup > 1.0 + crate::multipliers::UNIT_BALL_TOL {
            return Err(CoreError::ContractionViolation { index, norm: sup });
        }
        if let Some(d) = b.degree_hint() {
            degree_budget += d;
            if degree_budget + 1 > working {
                return Err(CoreError::HeadroomViolation {
                    index,
                    needed: degree_budget + 1,
                    available: working,
                });
            }
        }

        // residual update: exact coefficient route for the shift-like
        // symbols, boundary samples + frequency mask otherwise
        let r_next_work = match b.kind() {
            MultiplierKind::Monomial => backward_shift(&r_work).resized(working),
            MultiplierKind::OuterHalfShift => backward_shift(&r_work)
                .sub(&r_work)
                .scaled(Complex64::new(0.5, 0.0))
                .resized(working),
            _ => {
                let prod: Vec<Complex64> = b_samples
                    .iter()
                    .zip(r_samples.iter())
                    .map(|(x, y)| x.conj() * y)
                    .collect();
                ctx.project_working(&prod)
            }
        };
        let r_next_samples = hardy::sample_polynomial(r_next_work.coeffs(), ctx.grid_size());

        let product_next = product.extend(b.clone())?;

        // g_n = B_{n-1} r_{n-1} - B_n r_n pointwise: the partial sums
        // telescope exactly against the stored samples
        let g_samples: Vec<Complex64> = product
            .samples()
            .iter()
            .zip(r_samples.iter())
            .zip(product_next.samples().iter().zip(r_next_samples.iter()))
            .map(|((bp, rp), (bn, rn))| bp * rp - bn * rn)
            .collect();
        let term_fn = ctx.project_with_tail(&g_samples).coeffs;

        let q_samples: Vec<Complex64> = r_samples
            .iter()
            .zip(b_samples.iter().zip(r_next_samples.iter()))
            .map(|(rp, (bs, rn))| rp - bs * rn)
            .collect();
        let q_output = ctx.project_with_tail(&q_samples).coeffs;

        let scalar = match b.kind() {
            MultiplierKind::Monomial | MultiplierKind::BlaschkeFactor(_) => {
                step.lambda.map(|lam| {
                    (1.0 - lam.norm_sqr()).sqrt() * r_work.horner(lam)
                })
            }
            MultiplierKind::FiniteBlaschke { .. } => Some(q_output.coefficient(0)),
            _ => None,
        };

        let norm = hp_norm(&term_fn, options.p, ctx.grid_size())?;
        terms.push(ExpansionTerm {
            index,
            term_fn,
            q_output,
            product_before: product.clone(),
            lambda: step.lambda,
            scalar,
            norm,
        });

        product = product_next;
        r_work = r_next_work;
        r_samples = r_next_samples;

        let truncated = r_work.resized(ctx.truncation());
        let rnorm = hp_norm(&truncated, options.p, ctx.grid_size())?;
        residuals.push(truncated);
        residuals_working.push(r_work.clone());
        residual_norms.push(rnorm);

        if rnorm < options.tol {
            break;
        }
    }

    let dichotomy = classify_tail(&strategy.tail());
    let model_term = if dichotomy == TailClass::Limit {
        Some(model_projection(&product, f, ctx)?)
    } else {
        None
    };

    Ok(ExpansionResult {
        input: f.clone(),
        ctx: *ctx,
        options: options.clone(),
        strategy_name: strategy.name().to_string(),
        terms,
        residuals,
        residual_norms,
        dichotomy,
        model_term,
        final_product: product,
        residuals_working,
    })
}

/// Convenience wrapper building the strategy from its spec.
pub fn expand_with_spec(
    f: &AnalyticCoeffs,
    spec: &StrategySpec,
    ctx: &ToeplitzContext,
    options: &ExpandOptions,
) -> Result<ExpansionResult> {
    let mut strategy = spec.build()?;
    expand(f, strategy.as_mut(), ctx, options)
}

/// B T_{conj(B)} f computed directly from B and f. In H^2 with inner B
/// this is the projection of f onto B H^2; f minus it is the projection
/// onto the model space K_B.
pub fn model_projection(
    b: &dyn BoundarySymbol,
    f: &AnalyticCoeffs,
    ctx: &ToeplitzContext,
) -> Result<AnalyticCoeffs> {
    let co = ctx.apply_coanalytic_symbol(b, f)?;
    ctx.apply_analytic_symbol(b, &co.resized(ctx.working_order()))
}

impl ExpansionResult {
    pub fn input(&self) -> &AnalyticCoeffs {
        &self.input
    }

    pub fn context(&self) -> &ToeplitzContext {
        &self.ctx
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The running product B_n after n steps.
    pub fn product_at(&self, n: usize) -> Result<&MultiplierProduct> {
        if n < self.terms.len() {
            Ok(&self.terms[n].product_before)
        } else if n == self.terms.len() {
            Ok(&self.final_product)
        } else {
            Err(CoreError::IndexOutOfRange {
                index: n,
                len: self.terms.len(),
            })
        }
    }

    /// The iterated residual r_n at full working order.
    pub fn residual_working(&self, n: usize) -> Result<&AnalyticCoeffs> {
        if n == 0 {
            Ok(&self.input)
        } else {
            self.residuals_working
                .get(n - 1)
                .ok_or(CoreError::IndexOutOfRange {
                    index: n,
                    len: self.residuals_working.len(),
                })
        }
    }

    /// Coefficientwise sum of the first n term functions.
    pub fn partial_sum(&self, n: usize) -> Result<AnalyticCoeffs> {
        if n > self.terms.len() {
            return Err(CoreError::IndexOutOfRange {
                index: n,
                len: self.terms.len(),
            });
        }
        let mut acc = AnalyticCoeffs::zero(self.ctx.truncation());
        for t in &self.terms[..n] {
            acc = acc.add(&t.term_fn);
        }
        Ok(acc)
    }

    /// || f - partial_sum(n) - B_n r_n ||_p and || r_n ||_p at prefix n.
    pub fn verify_reconstruction(
        &self,
        f: &AnalyticCoeffs,
        n: usize,
        p: f64,
    ) -> Result<ReconstructionReport> {
        let partial = self.partial_sum(n)?;
        let product = self.product_at(n)?;
        let r_work = self.residual_working(n)?;
        let tail = self.ctx.apply_analytic_symbol(product, r_work)?;
        let diff = f
            .resized(self.ctx.truncation())
            .sub(&partial)
            .sub(&tail);
        let reconstruction_error = hp_norm(&diff, p, self.ctx.grid_size())?;
        let residual_norm = hp_norm(&r_work.resized(self.ctx.truncation()), p, self.ctx.grid_size())?;
        let tolerance = reconstruction_tolerance(n);
        Ok(ReconstructionReport {
            prefix: n,
            reconstruction_error,
            residual_norm,
            tolerance,
            within_tolerance: reconstruction_error <= tolerance,
        })
    }

    /// Grid inner product <f - B_N T_{conj(B_N)} f, B_N T_{conj(B_N)} f>
    /// with the direct projection; zero to machine precision for inner
    /// products of unimodular samples.
    pub fn model_orthogonality_defect(&self) -> Result<f64> {
        let n = self.ctx.grid_size();
        let f_samples = self.ctx.sample(&self.input)?;
        let b_samples = self.final_product.symbol_samples(n)?;
        let co: Vec<Complex64> = b_samples
            .iter()
            .zip(f_samples.iter())
            .map(|(b, f)| b.conj() * f)
            .collect();
        let r_direct = self.ctx.project_working(&co);
        let r_samples = hardy::sample_polynomial(r_direct.coeffs(), n);
        let model: Vec<Complex64> = b_samples
            .iter()
            .zip(r_samples.iter())
            .map(|(b, r)| b * r)
            .collect();
        let diff: Vec<Complex64> = f_samples
            .iter()
            .zip(model.iter())
            .map(|(f, m)| f - m)
            .collect();
        Ok(hardy::quadrature_inner(&diff, &model).norm())
    }

    /// || B_N T_{conj(B_N)} f - B_N r_N ||_2 on the grid: the reported
    /// gap between the direct model projection and the iterated
    /// residual route. The two agree when the grid resolves every
    /// factor; no decay rate is asserted.
    pub fn model_consistency_gap(&self) -> Result<f64> {
        let n = self.ctx.grid_size();
        let f_samples = self.ctx.sample(&self.input)?;
        let b_samples = self.final_product.symbol_samples(n)?;
        let co: Vec<Complex64> = b_samples
            .iter()
            .zip(f_samples.iter())
            .map(|(b, f)| b.conj() * f)
            .collect();
        let direct = hardy::sample_polynomial(self.ctx.project_working(&co).coeffs(), n);
        let r_n = self
            .residuals_working
            .last()
            .cloned()
            .unwrap_or_else(|| self.input.clone());
        let iterated = hardy::sample_polynomial(r_n.coeffs(), n);
        let sq = b_samples
            .iter()
            .zip(direct.iter().zip(iterated.iter()))
            .map(|(b, (d, i))| (b * (d - i)).norm_sqr())
            .sum::<f64>()
            / n as f64;
        Ok(sq.sqrt())
    }

    /// The grid norm of the model term B_N r_N (iterated route).
    pub fn model_term_norm_grid(&self) -> Result<f64> {
        let n = self.ctx.grid_size();
        let b_samples = self.final_product.symbol_samples(n)?;
        let r_n = self
            .residuals_working
            .last()
            .cloned()
            .unwrap_or_else(|| self.input.clone());
        let r_samples = hardy::sample_polynomial(r_n.coeffs(), n);
        let sq = b_samples
            .iter()
            .zip(r_samples.iter())
            .map(|(b, r)| (b * r).norm_sqr())
            .sum::<f64>()
            / n as f64;
        Ok(sq.sqrt())
    }
}

/// One element of the orthonormal system (1-|lambda_n|^2)^{1/2} B_{n-1} k_{lambda_n}.
#[derive(Debug, Clone)]
pub struct TmwElement {
    pub lambda: Complex64,
    /// Coefficients of the basis element, truncated to order M.
    pub coeffs: AnalyticCoeffs,
    /// Fourier coefficient (1-|lambda_n|^2)^{1/2} (T_{conj(B_{n-1})} f)(lambda_n).
    pub fourier_coeff: Complex64,
}

/// Scalar-coefficient form of the expansion over Blaschke factors.
#[derive(Debug, Clone)]
pub struct TmwExpansion {
    /// c_0 = f(lambda_1) and
    /// c_n = (T_{conj(B_n)} f)(lambda_{n+1}) - conj(lambda_n) (T_{conj(B_{n-1})} f)(lambda_n).
    pub scalars: Vec<Complex64>,
    /// Orthonormal system data for n = 1..L.
    pub basis: Vec<TmwElement>,
    /// v_n = (T_{conj(B_{n-1})} f)(lambda_n) for n = 1..L.
    pub boundary_values: Vec<Complex64>,
}

/// Scalar coefficients and the orthonormal-system data over a lambda
/// sequence. Providing L points yields c_0..c_{L-1} and L basis elements.
///
/// The input must be certifiably polynomial at this truncation: a
/// significant coefficient in the top slot is rejected, matching the
/// entire-function hypothesis behind the rearranged series.
pub fn tmw_coefficients(
    f: &AnalyticCoeffs,
    lambdas: &[DiscPoint],
    ctx: &ToeplitzContext,
) -> Result<TmwExpansion> {
    if lambdas.is_empty() {
        return Err(CoreError::Domain("empty lambda sequence".into()));
    }
    if let Some(d) = f.significant_degree(1e-13) {
        if d + 2 > ctx.truncation() {
            return Err(CoreError::RearrangementUnsupported(format!(
                "input occupies the truncation edge (degree {d} at order {})",
                ctx.truncation()
            )));
        }
    }

    let n_grid = ctx.grid_size();
    let mut b_samples = vec![Complex64::new(1.0, 0.0); n_grid];
    let mut r_work = f.resized(ctx.working_order().min(f.truncation_order().max(1)));
    let mut r_samples = ctx.sample(f)?;

    let mut boundary_values = Vec::with_capacity(lambdas.len());
    let mut basis = Vec::with_capacity(lambdas.len());

    for lam in lambdas {
        let v = r_work.horner(lam.value());
        boundary_values.push(v);

        let weight = (1.0 - lam.value().norm_sqr()).sqrt();
        let kernel = cauchy_kernel(*lam, ctx.truncation());
        let k_samples = hardy::sample_polynomial(kernel.coeffs(), n_grid);
        let e_samples: Vec<Complex64> = b_samples
            .iter()
            .zip(k_samples.iter())
            .map(|(b, k)| b * k * weight)
            .collect();
        basis.push(TmwElement {
            lambda: lam.value(),
            coeffs: ctx.project_with_tail(&e_samples).coeffs,
            fourier_coeff: weight * v,
        });

        // advance: r <- T_{conj(b_lambda)} r, B <- B b_lambda
        let b = Multiplier::blaschke_factor(*lam);
        let bs = b.boundary_samples(n_grid)?;
        let prod: Vec<Complex64> = bs
            .iter()
            .zip(r_samples.iter())
            .map(|(x, y)| x.conj() * y)
            .collect();
        r_work = ctx.project_working(&prod);
        r_samples = hardy::sample_polynomial(r_work.coeffs(), n_grid);
        for (acc, v) in b_samples.iter_mut().zip(bs.iter()) {
            *acc *= v;
        }
    }

    let mut scalars = Vec::with_capacity(lambdas.len());
    scalars.push(f.horner(lambdas[0].value()));
    for n in 1..lambdas.len() {
        let c = boundary_values[n] - lambdas[n - 1].value().conj() * boundary_values[n - 1];
        scalars.push(c);
    }

    Ok(TmwExpansion {
        scalars,
        basis,
        boundary_values,
    })
}
