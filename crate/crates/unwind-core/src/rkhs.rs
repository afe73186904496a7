//! Diagonal-weight reproducing-kernel spaces on the disc with orthogonal
//! monomial basis: multiplication operators as truncated lower-triangular
//! Toeplitz matrices, adjoints as weighted conjugate transposes, and the
//! abstract expansion scheme over polynomial multiplier sequences.

use crate::error::{CoreError, Result};
use crate::hardy::AnalyticCoeffs;
use num_complex::Complex64;

/// Power-iteration budget for the contraction certificate.
const POWER_ITERATIONS: usize = 64;
/// Allowed excess of the largest singular value over 1.
const CONTRACTION_TOL: f64 = 1e-8;

/// A space with ||z^n||^2 = w_n; kernel k_x(z) = sum conj(x)^n z^n / w_n.
#[derive(Debug, Clone)]
pub struct WeightedSpace {
    weights: Vec<f64>,
    name: String,
}

impl WeightedSpace {
    pub fn new(weights: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(CoreError::Domain("weights must be positive".into()));
        }
        Ok(WeightedSpace {
            weights,
            name: name.into(),
        })
    }

    /// w_n = 1.
    pub fn hardy(order: usize) -> Self {
        WeightedSpace {
            weights: vec![1.0; order],
            name: "hardy".into(),
        }
    }

    /// w_n = 1/(n+1).
    pub fn bergman(order: usize) -> Self {
        WeightedSpace {
            weights: (0..order).map(|n| 1.0 / (n as f64 + 1.0)).collect(),
            name: "bergman".into(),
        }
    }

    /// w_n = n+1.
    pub fn dirichlet(order: usize) -> Self {
        WeightedSpace {
            weights: (0..order).map(|n| n as f64 + 1.0).collect(),
            name: "dirichlet".into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// <f, g>_w = sum w_k f_k conj(g_k).
    pub fn inner(&self, f: &AnalyticCoeffs, g: &AnalyticCoeffs) -> Complex64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(k, &w)| f.coefficient(k) * g.coefficient(k).conj() * w)
            .sum()
    }

    pub fn norm(&self, f: &AnalyticCoeffs) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(k, &w)| w * f.coefficient(k).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Truncated kernel at x: coefficients conj(x)^n / w_n.
    pub fn kernel(&self, x: Complex64) -> AnalyticCoeffs {
        let mut pow = Complex64::new(1.0, 0.0);
        let mut coeffs = Vec::with_capacity(self.weights.len());
        for &w in &self.weights {
            coeffs.push(pow / w);
            pow *= x.conj();
        }
        AnalyticCoeffs::new(coeffs)
    }
}

/// The matrix of M_phi in the monomial basis, truncated to M x M:
/// entry (i, j) = phi_{i-j} for i >= j, zero above the diagonal. The
/// entries do not depend on the weights; the adjoint does.
#[derive(Debug, Clone)]
pub struct MultOperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    symbol: AnalyticCoeffs,
}

/// Build the truncated multiplication matrix of a polynomial symbol.
pub fn mult_matrix(phi: &AnalyticCoeffs, dim: usize) -> MultOperatorMatrix {
    let mut entries = vec![Complex64::default(); dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            entries[i * dim + j] = phi.coefficient(i - j);
        }
    }
    MultOperatorMatrix {
        dim,
        entries,
        symbol: phi.clone(),
    }
}

impl MultOperatorMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbol(&self) -> &AnalyticCoeffs {
        &self.symbol
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// A f, truncated multiplication by the symbol.
    pub fn apply(&self, f: &AnalyticCoeffs) -> AnalyticCoeffs {
        let mut out = vec![Complex64::default(); self.dim];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..=i {
                *o += self.entries[i * self.dim + j] * f.coefficient(j);
            }
        }
        AnalyticCoeffs::new(out)
    }
}

/// M_phi^* f in the weighted inner product:
/// (M^* f)_j = (1/w_j) sum_i conj(A_ij) w_i f_i.
pub fn adjoint_apply(
    a: &MultOperatorMatrix,
    space: &WeightedSpace,
    f: &AnalyticCoeffs,
) -> Result<AnalyticCoeffs> {
    if space.order() < a.dim() {
        return Err(CoreError::DimensionMismatch(format!(
            "space order {} below matrix dimension {}",
            space.order(),
            a.dim()
        )));
    }
    let dim = a.dim();
    let w = space.weights();
    let mut out = vec![Complex64::default(); dim];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::default();
        for i in j..dim {
            acc += a.entry(i, j).conj() * f.coefficient(i) * w[i];
        }
        *o = acc / w[j];
    }
    Ok(AnalyticCoeffs::new(out))
}

/// Largest singular value of the truncated matrix in the weighted space,
/// by power iteration on M^* M from a fixed deterministic start.
pub fn operator_norm_estimate(a: &MultOperatorMatrix, space: &WeightedSpace) -> Result<f64> {
    let dim = a.dim();
    let mut v = AnalyticCoeffs::new(
        (0..dim)
            .map(|k| Complex64::new(1.0, 0.3 + 0.1 * (k as f64 + 1.0).ln()))
            .collect(),
    );
    let mut sigma_sq = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let nv = space.norm(&v);
        if nv == 0.0 {
            return Ok(0.0);
        }
        v = v.scaled(Complex64::new(1.0 / nv, 0.0));
        let av = a.apply(&v);
        let bv = adjoint_apply(a, space, &av)?;
        sigma_sq = space.inner(&bv, &v).re;
        v = bv;
    }
    Ok(sigma_sq.max(0.0).sqrt())
}

/// Exact polynomial product truncated to the space order.
fn poly_mul_truncate(a: &AnalyticCoeffs, b: &AnalyticCoeffs, dim: usize) -> AnalyticCoeffs {
    let mut out = vec![Complex64::default(); dim];
    for (i, &ca) in a.coeffs().iter().enumerate() {
        if ca.norm() == 0.0 {
            continue;
        }
        for (j, &cb) in b.coeffs().iter().enumerate() {
            if i + j >= dim {
                break;
            }
            out[i + j] += ca * cb;
        }
    }
    AnalyticCoeffs::new(out)
}

/// One term of the abstract scheme plus the running state behind it.
#[derive(Debug, Clone)]
pub struct RkhsTerm {
    pub index: usize,
    /// Phi_{n-1} * Q_{phi_n} M_{Phi_{n-1}}^* f, truncated to the order.
    pub term_fn: AnalyticCoeffs,
    /// Q_{phi_n} applied to the running adjoint chain.
    pub q_output: AnalyticCoeffs,
    pub norm: f64,
}

/// Result of the finite scheme: f = sum of terms + remainder holds
/// exactly in the truncated space.
#[derive(Debug, Clone)]
pub struct RkhsExpansion {
    pub space_name: String,
    pub terms: Vec<RkhsTerm>,
    /// g_n = M_{Phi_n}^* f after each step.
    pub adjoint_chain: Vec<AnalyticCoeffs>,
    /// Weighted norms of the adjoint chain entries.
    pub chain_norms: Vec<f64>,
    /// Phi_n products, truncated.
    pub products: Vec<AnalyticCoeffs>,
    /// Phi_N * M_{Phi_N}^* f.
    pub remainder: AnalyticCoeffs,
}

impl RkhsExpansion {
    pub fn partial_sum(&self, n: usize) -> Result<AnalyticCoeffs> {
        if n > self.terms.len() {
            return Err(CoreError::IndexOutOfRange {
                index: n,
                len: self.terms.len(),
            });
        }
        let order = self.remainder.truncation_order();
        let mut acc = AnalyticCoeffs::zero(order);
        for t in &self.terms[..n] {
            acc = acc.add(&t.term_fn);
        }
        Ok(acc)
    }

    /// || f - (sum of terms + remainder) ||_w.
    pub fn identity_defect(&self, f: &AnalyticCoeffs, space: &WeightedSpace) -> Result<f64> {
        let sum = self.partial_sum(self.terms.len())?.add(&self.remainder);
        Ok(space.norm(&sum.sub(&f.resized(self.remainder.truncation_order()))))
    }
}

/// Run the scheme over a polynomial multiplier sequence: each phi_n must
/// pass the numeric contraction certificate on the truncated matrix, and
/// each product must stay inside the truncation (headroom precondition).
pub fn expand_rkhs(
    f: &AnalyticCoeffs,
    phis: &[AnalyticCoeffs],
    space: &WeightedSpace,
    n_terms: usize,
) -> Result<RkhsExpansion> {
    let dim = space.order();
    if f.truncation_order() > dim {
        return Err(CoreError::TruncationCapacity {
            requested: f.truncation_order(),
            capacity: dim,
        });
    }
    if n_terms > phis.len() {
        return Err(CoreError::StrategyExhausted {
            index: phis.len() + 1,
        });
    }

    let mut g = f.resized(dim);
    let mut product = {
        let mut one = vec![Complex64::default(); dim];
        one[0] = Complex64::new(1.0, 0.0);
        AnalyticCoeffs::new(one)
    };
    let mut product_degree = 0usize;

    let mut terms = Vec::new();
    let mut adjoint_chain = Vec::new();
    let mut chain_norms = Vec::new();
    let mut products = Vec::new();

    for index in 1..=n_terms {
        let phi = &phis[index - 1];
        let phi_degree = phi.significant_degree(1e-14).unwrap_or(0);
        let matrix = mult_matrix(phi, dim);

        let sigma = operator_norm_estimate(&matrix, space)?;
        if sigma > 1.0 + CONTRACTION_TOL {
            return Err(CoreError::ContractionViolation { index, norm: sigma });
        }

        let g_degree = g.significant_degree(1e-16).unwrap_or(0);
        if product_degree + phi_degree + g_degree + 1 > dim {
            return Err(CoreError::HeadroomViolation {
                index,
                needed: product_degree + phi_degree + g_degree + 1,
                available: dim,
            });
        }

        let adj = adjoint_apply(&matrix, space, &g)?;
        let q_output = g.sub(&matrix.apply(&adj)).resized(dim);
        let term_fn = poly_mul_truncate(&product, &q_output, dim);
        let norm = space.norm(&term_fn);
        terms.push(RkhsTerm {
            index,
            term_fn,
            q_output,
            norm,
        });

        g = adj;
        product = poly_mul_truncate(&product, phi, dim);
        product_degree += phi_degree;
        adjoint_chain.push(g.clone());
        chain_norms.push(space.norm(&g));
        products.push(product.clone());
    }

    let remainder = poly_mul_truncate(&product, &g, dim);

    Ok(RkhsExpansion {
        space_name: space.name().to_string(),
        terms,
        adjoint_chain,
        chain_norms,
        products,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z_symbol() -> AnalyticCoeffs {
        AnalyticCoeffs::from_reals(&[0.0, 1.0])
    }

    #[test]
    fn mult_matrix_examples() {
        let m = mult_matrix(&z_symbol(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(m.entry(i, j), c(want, 0.0));
            }
        }

        let ident = mult_matrix(&AnalyticCoeffs::from_reals(&[1.0]), 4);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(ident.entry(i, j), c(want, 0.0));
            }
        }

        let m = mult_matrix(&AnalyticCoeffs::from_reals(&[-0.5, 0.5]), 2);
        assert_eq!(m.entry(0, 0), c(-0.5, 0.0));
        assert_eq!(m.entry(0, 1), c(0.0, 0.0));
        assert_eq!(m.entry(1, 0), c(0.5, 0.0));
        assert_eq!(m.entry(1, 1), c(-0.5, 0.0));
    }

    #[test]
    fn adjoint_examples() {
        // Hardy: M_z^* is the backward shift
        let space = WeightedSpace::hardy(4);
        let a = mult_matrix(&z_symbol(), 4);
        let f = AnalyticCoeffs::from_reals(&[1.0, 2.0, 3.0, 4.0]);
        let out = adjoint_apply(&a, &space, &f).unwrap();
        for (k, want) in [2.0, 3.0, 4.0, 0.0].iter().enumerate() {
            assert!((out.coefficient(k) - c(*want, 0.0)).norm() < 1e-14);
        }

        // Bergman: (M_z^* f)_0 = (w_1/w_0) f_1 = 0.5
        let space = WeightedSpace::bergman(2);
        let a = mult_matrix(&z_symbol(), 2);
        let f = AnalyticCoeffs::from_reals(&[0.0, 1.0]);
        let out = adjoint_apply(&a, &space, &f).unwrap();
        assert!((out.coefficient(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(out.coefficient(1).norm() < 1e-15);
    }

    #[test]
    fn adjoint_is_weighted_transpose() {
        // <A f, g>_w = <f, A^* g>_w over random-ish vectors in each space
        let symbols = [
            AnalyticCoeffs::from_reals(&[0.2, 0.3, 0.1]),
            z_symbol(),
        ];
        for space in [
            WeightedSpace::hardy(12),
            WeightedSpace::bergman(12),
            WeightedSpace::dirichlet(12),
        ] {
            for phi in &symbols {
                let a = mult_matrix(phi, 12);
                let f = AnalyticCoeffs::new(
                    (0..9).map(|k| c(0.3 * k as f64 - 1.0, 0.1 * k as f64)).collect(),
                );
                let g = AnalyticCoeffs::new(
                    (0..9).map(|k| c(0.7 - 0.2 * k as f64, -0.05 * k as f64)).collect(),
                );
                let lhs = space.inner(&a.apply(&f), &g);
                let rhs = space.inner(&f, &adjoint_apply(&a, &space, &g).unwrap());
                assert!((lhs - rhs).norm() < 1e-11, "space {}", space.name());
            }
        }
    }

    #[test]
    fn adjoint_kernel_eigenvector() {
        let x = c(0.4, 0.2);
        for space in [WeightedSpace::hardy(96), WeightedSpace::bergman(96)] {
            let k = space.kernel(x);
            let phi = AnalyticCoeffs::from_reals(&[0.1, 0.5, 0.2]);
            let a = mult_matrix(&phi, 96);
            let out = adjoint_apply(&a, &space, &k).unwrap();
            let want = k.scaled(phi.horner(x).conj());
            // truncation tail |x|^(M - deg phi) bounds the defect
            assert!(
                space.norm(&out.sub(&want)) < 1e-9,
                "space {}",
                space.name()
            );
        }
    }

    #[test]
    fn contraction_certificate() {
        // z is a contraction on Hardy and Bergman but not on Dirichlet
        let a = mult_matrix(&z_symbol(), 24);
        assert!(operator_norm_estimate(&a, &WeightedSpace::hardy(24)).unwrap() <= 1.0 + 1e-8);
        assert!(operator_norm_estimate(&a, &WeightedSpace::bergman(24)).unwrap() <= 1.0 + 1e-8);
        let sigma = operator_norm_estimate(&a, &WeightedSpace::dirichlet(24)).unwrap();
        assert!((sigma - 2f64.sqrt()).abs() < 1e-6, "sigma = {sigma}");

        let err = expand_rkhs(
            &AnalyticCoeffs::from_reals(&[1.0, 1.0]),
            &[z_symbol()],
            &WeightedSpace::dirichlet(24),
            1,
        );
        assert!(matches!(err, Err(CoreError::ContractionViolation { index: 1, .. })));
    }

    #[test]
    fn bergman_single_step_example() {
        let space = WeightedSpace::bergman(8);
        let f = AnalyticCoeffs::from_reals(&[1.0, 1.0]);
        let result = expand_rkhs(&f, &[z_symbol()], &space, 1).unwrap();
        let t = &result.terms[0].term_fn;
        assert!((t.coefficient(0) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((t.coefficient(1) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((result.remainder.coefficient(1) - c(0.5, 0.0)).norm() < 1e-14);
        assert!(result.identity_defect(&f, &space).unwrap() < 1e-14);
    }

    #[test]
    fn partial_sum_identity_all_spaces() {
        let f = AnalyticCoeffs::new(vec![c(0.9, -0.3), c(0.4, 0.2), c(-0.7, 0.5), c(0.2, 0.1)]);
        let phis: Vec<AnalyticCoeffs> = (0..12)
            .map(|k| match k % 3 {
                0 => AnalyticCoeffs::from_reals(&[0.0, 0.5]),
                1 => AnalyticCoeffs::from_reals(&[0.3, 0.2, 0.1]),
                _ => AnalyticCoeffs::from_reals(&[0.1, 0.4]),
            })
            .collect();
        for space in [
            WeightedSpace::hardy(64),
            WeightedSpace::bergman(64),
            WeightedSpace::dirichlet(64),
        ] {
            let result = expand_rkhs(&f, &phis, &space, 12).unwrap();
            let defect = result.identity_defect(&f, &space).unwrap();
            assert!(defect < 1e-10, "space {}: defect {defect:.3e}", space.name());
        }
    }

    #[test]
    fn hardy_kernel_eigen_decay() {
        let space = WeightedSpace::hardy(64);
        let x = c(0.5, 0.0);
        let k = space.kernel(x);
        let phis: Vec<AnalyticCoeffs> = (0..6).map(|_| z_symbol()).collect();
        let result = expand_rkhs(&k, &phis, &space, 6).unwrap();
        // remainder norm = |Phi_N(x)| ||k_x|| = 0.5^6 ||k|| up to tail
        let want = 0.5f64.powi(6) * space.norm(&k);
        let got = space.norm(&result.remainder);
        assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
    }

    #[test]
    fn headroom_precondition_enforced() {
        let space = WeightedSpace::hardy(8);
        let f = AnalyticCoeffs::from_reals(&[1.0, 1.0, 1.0, 1.0]);
        let phis: Vec<AnalyticCoeffs> = (0..8).map(|_| z_symbol()).collect();
        let err = expand_rkhs(&f, &phis, &space, 8);
        assert!(matches!(err, Err(CoreError::HeadroomViolation { .. })));
    }
}
