//! Finite representations of analytic functions on the disc: truncated
//! coefficient vectors, uniform boundary grids, the discrete Riesz
//! projection, norms, and the Cauchy kernel.

use crate::error::{CoreError, Result};
use crate::fft;
use num_complex::Complex64;

/// Points with modulus below one are kept this far away from the circle.
pub const DISC_BOUNDARY_MARGIN: f64 = 1e-12;

/// A point of the open unit disc, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() >= 1.0 - DISC_BOUNDARY_MARGIN {
            return Err(CoreError::Domain(format!(
                "|z| = {} is not strictly inside the unit disc",
                z.norm()
            )));
        }
        Ok(DiscPoint(z))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Truncated Taylor coefficients c_0..c_{M-1} of an analytic function.
///
/// The truncation order is the coefficient count; an empty vector is the
/// zero function.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticCoeffs {
    coeffs: Vec<Complex64>,
}

impl AnalyticCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        AnalyticCoeffs { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        AnalyticCoeffs {
            coeffs: vec![Complex64::default(); order],
        }
    }

    pub fn from_reals(values: &[f64]) -> Self {
        AnalyticCoeffs {
            coeffs: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Degree of the trailing nonzero coefficient, or None for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() != 0.0)
    }

    /// Degree ignoring coefficients below rel_tol times the largest one,
    /// so grid roundoff does not inflate the bandwidth.
    pub fn significant_degree(&self, rel_tol: f64) -> Option<usize> {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > rel_tol * max)
    }

    pub fn coefficient(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Horner evaluation at an arbitrary complex point.
    ///
    /// Unchecked variant used internally where |z| <= 1 is known.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Point evaluation inside the disc.
    pub fn evaluate(&self, z: DiscPoint) -> Complex64 {
        self.horner(z.value())
    }

    /// Exact Parseval norm sqrt(sum |c_k|^2).
    pub fn h2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coefficientwise H^2 inner product sum c_k conj(d_k).
    pub fn h2_inner(&self, other: &AnalyticCoeffs) -> Complex64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Returns a copy truncated or zero-padded to the given order.
    pub fn resized(&self, order: usize) -> AnalyticCoeffs {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, Complex64::default());
        AnalyticCoeffs { coeffs }
    }

    pub fn add(&self, other: &AnalyticCoeffs) -> AnalyticCoeffs {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::default(); n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coefficient(k) + other.coefficient(k);
        }
        AnalyticCoeffs { coeffs }
    }

    pub fn sub(&self, other: &AnalyticCoeffs) -> AnalyticCoeffs {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::default(); n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coefficient(k) - other.coefficient(k);
        }
        AnalyticCoeffs { coeffs }
    }

    pub fn scaled(&self, s: Complex64) -> AnalyticCoeffs {
        AnalyticCoeffs {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// Samples of a boundary function on the uniform grid exp(2 pi i j / N).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySamples {
    values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(CoreError::GridNotPowerOfTwo(values.len()));
        }
        Ok(BoundarySamples { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    /// Grid quadrature of the H^2 norm: sqrt of the mean of |g_j|^2.
    pub fn h2_norm(&self) -> f64 {
        quadrature_norm_sqr(&self.values).sqrt()
    }
}

/// Mean of |v_j|^2 over the grid, i.e. the trapezoidal rule for
/// (1/2pi) int |g|^2 on the circle.
pub(crate) fn quadrature_norm_sqr(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum::<f64>() / values.len() as f64
}

/// Grid quadrature of the L^2 pairing (1/2pi) int u conj(v).
pub(crate) fn quadrature_inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum::<Complex64>() / u.len() as f64
}

/// The grid points exp(2 pi i j / N).
pub(crate) fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect()
}

/// Exact polynomial sampling on an n-grid (n >= len suffices; no product
/// headroom is implied). Zero-pad and run one inverse DFT.
pub(crate) fn sample_polynomial(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    debug_assert!(n.is_power_of_two() && n >= coeffs.len());
    let mut buf = coeffs.to_vec();
    buf.resize(n, Complex64::default());
    fft::inverse(&mut buf);
    buf
}

/// Discrete Fourier coefficients of grid samples (forward DFT over N).
pub(crate) fn grid_spectrum(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    fft::forward(&mut buf);
    let n = buf.len() as f64;
    for c in buf.iter_mut() {
        *c /= n;
    }
    buf
}

/// The discrete Riesz projection P_+ : keep frequencies 0..N/2-1 and
/// return them as Taylor coefficients, truncated to the requested order.
pub fn riesz_project(g: &BoundarySamples, order: usize) -> Result<AnalyticCoeffs> {
    let n = g.grid_size();
    if order > n / 2 {
        return Err(CoreError::TruncationCapacity {
            requested: order,
            capacity: n / 2,
        });
    }
    let spec = grid_spectrum(g.values());
    Ok(AnalyticCoeffs::new(spec[..order].to_vec()))
}

/// Exact evaluation of the polynomial sum c_k z^k on the N-grid.
///
/// Requires N >= 2M so one subsequent product stays alias-free.
pub fn to_boundary(f: &AnalyticCoeffs, n: usize) -> Result<BoundarySamples> {
    if !n.is_power_of_two() {
        return Err(CoreError::GridNotPowerOfTwo(n));
    }
    let m = f.truncation_order();
    if n < 2 * m.max(1) {
        return Err(CoreError::AliasingRisk { grid: n, order: m });
    }
    Ok(BoundarySamples {
        values: sample_polynomial(f.coeffs(), n),
    })
}

/// H^p norm: exact Parseval for p = 2, trapezoidal boundary quadrature of
/// |f|^p otherwise. p must lie in (1, infinity).
pub fn hp_norm(f: &AnalyticCoeffs, p: f64, n: usize) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(CoreError::Domain(format!(
            "p = {p} outside the admissible range (1, inf)"
        )));
    }
    if p == 2.0 {
        return Ok(f.h2_norm());
    }
    let samples = to_boundary(f, n)?;
    let mean = samples
        .values()
        .iter()
        .map(|v| v.norm().powf(p))
        .sum::<f64>()
        / n as f64;
    Ok(mean.powf(1.0 / p))
}

/// Truncated Cauchy (Szego) kernel k_lambda: coefficients conj(lambda)^k.
pub fn cauchy_kernel(lambda: DiscPoint, order: usize) -> AnalyticCoeffs {
    let lb = lambda.value().conj();
    let mut coeffs = Vec::with_capacity(order);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 0..order {
        coeffs.push(pow);
        pow *= lb;
    }
    AnalyticCoeffs::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_point_rejects_boundary() {
        assert!(DiscPoint::from_parts(1.0, 0.0).is_err());
        assert!(DiscPoint::from_parts(1.0 - 1e-13, 0.0).is_err());
        assert!(DiscPoint::from_parts(0.999, 0.0).is_ok());
    }

    #[test]
    fn riesz_annihilates_negative_frequencies() {
        // g(e^{i t}) = e^{-it} + 2 + 3 e^{it}
        let n = 8;
        let pts = roots_of_unity(n);
        let values: Vec<Complex64> = pts
            .iter()
            .map(|&z| z.conj() + c(2.0, 0.0) + c(3.0, 0.0) * z)
            .collect();
        let g = BoundarySamples::new(values).unwrap();
        let f = riesz_project(&g, 2).unwrap();
        assert!((f.coefficient(0) - c(2.0, 0.0)).norm() < 1e-13);
        assert!((f.coefficient(1) - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn riesz_fixes_constants() {
        let g = BoundarySamples::new(vec![c(1.0, 0.0); 8]).unwrap();
        let f = riesz_project(&g, 4).unwrap();
        assert!((f.coefficient(0) - c(1.0, 0.0)).norm() < 1e-14);
        for k in 1..4 {
            assert!(f.coefficient(k).norm() < 1e-14);
        }
    }

    #[test]
    fn riesz_of_shifted_square() {
        // e^{-it} (1 + e^{it})^2 = e^{-it} + 2 + e^{it}; oracle: hand convolution.
        let n = 8;
        let pts = roots_of_unity(n);
        let values: Vec<Complex64> = pts
            .iter()
            .map(|&z| z.conj() * (Complex64::new(1.0, 0.0) + z).powu(2))
            .collect();
        let g = BoundarySamples::new(values).unwrap();
        let f = riesz_project(&g, 2).unwrap();
        assert!((f.coefficient(0) - c(2.0, 0.0)).norm() < 1e-13);
        assert!((f.coefficient(1) - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn riesz_order_capacity() {
        let g = BoundarySamples::new(vec![c(1.0, 0.0); 8]).unwrap();
        assert!(matches!(
            riesz_project(&g, 5),
            Err(CoreError::TruncationCapacity { .. })
        ));
    }

    #[test]
    fn boundary_values_of_constants_and_monomials() {
        let one = AnalyticCoeffs::from_reals(&[1.0]);
        let s = to_boundary(&one, 4).unwrap();
        assert!(s.values().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-14));

        let z = AnalyticCoeffs::from_reals(&[0.0, 1.0]);
        let s = to_boundary(&z, 4).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (v, e) in s.values().iter().zip(expect.iter()) {
            assert!((v - e).norm() < 1e-14);
        }
    }

    #[test]
    fn boundary_values_of_one_plus_z() {
        let f = AnalyticCoeffs::from_reals(&[1.0, 1.0]);
        let s = to_boundary(&f, 4).unwrap();
        let expect = [c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(1.0, -1.0)];
        for (v, e) in s.values().iter().zip(expect.iter()) {
            assert!((v - e).norm() < 1e-14);
        }
    }

    #[test]
    fn boundary_needs_headroom() {
        let f = AnalyticCoeffs::from_reals(&[1.0, 1.0, 1.0]);
        assert!(matches!(
            to_boundary(&f, 4),
            Err(CoreError::AliasingRisk { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let f = AnalyticCoeffs::from_reals(&[1.0, 2.0, 3.0]);
        let origin = DiscPoint::from_parts(0.0, 0.0).unwrap();
        assert!((f.evaluate(origin) - c(1.0, 0.0)).norm() < 1e-15);
        let half = DiscPoint::from_parts(0.5, 0.0).unwrap();
        assert!((f.evaluate(half) - c(2.75, 0.0)).norm() < 1e-15);
        let zero = AnalyticCoeffs::zero(5);
        assert_eq!(zero.evaluate(half), Complex64::default());
    }

    #[test]
    fn hp_norm_examples() {
        let f = AnalyticCoeffs::from_reals(&[3.0]);
        assert!((hp_norm(&f, 2.0, 8).unwrap() - 3.0).abs() < 1e-15);

        let f = AnalyticCoeffs::from_reals(&[1.0, 1.0]);
        assert!((hp_norm(&f, 2.0, 8).unwrap() - 2f64.sqrt()).abs() < 1e-15);

        // (1/2pi) int |1+e^{it}|^4 dt = 6; oracle below re-derives it by
        // direct high-resolution quadrature, independent of the FFT path.
        let direct: f64 = (0..1_000_000)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 1e6;
                let v = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, t)).norm();
                v.powi(4)
            })
            .sum::<f64>()
            / 1e6;
        assert!((direct - 6.0).abs() < 1e-9);
        let got = hp_norm(&f, 4.0, 1024).unwrap();
        assert!((got - 6f64.powf(0.25)).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn hp_norm_rejects_bad_p() {
        let f = AnalyticCoeffs::from_reals(&[1.0]);
        assert!(hp_norm(&f, 1.0, 8).is_err());
        assert!(hp_norm(&f, 0.5, 8).is_err());
        assert!(hp_norm(&f, f64::INFINITY, 8).is_err());
    }

    #[test]
    fn cauchy_kernel_examples() {
        let k = cauchy_kernel(DiscPoint::from_parts(0.0, 0.0).unwrap(), 4);
        assert_eq!(k.coefficient(0), c(1.0, 0.0));
        assert_eq!(k.coefficient(1), Complex64::default());

        let k = cauchy_kernel(DiscPoint::from_parts(0.5, 0.0).unwrap(), 4);
        for (i, want) in [1.0, 0.5, 0.25, 0.125].iter().enumerate() {
            assert!((k.coefficient(i) - c(*want, 0.0)).norm() < 1e-15);
        }

        let k = cauchy_kernel(DiscPoint::from_parts(0.0, 0.5).unwrap(), 3);
        assert!((k.coefficient(1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((k.coefficient(2) - c(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_and_parseval() {
        let f = AnalyticCoeffs::new(vec![c(0.3, -1.2), c(0.0, 0.7), c(2.0, 0.1), c(-0.5, 0.5)]);
        let s = to_boundary(&f, 16).unwrap();
        let back = riesz_project(&s, 4).unwrap();
        for k in 0..4 {
            assert!((back.coefficient(k) - f.coefficient(k)).norm() < 1e-13);
        }
        assert!((s.h2_norm() - f.h2_norm()).abs() < 1e-13);
    }

    #[test]
    fn kernel_reproduces_point_values() {
        let f = AnalyticCoeffs::new(vec![c(1.0, 0.5), c(-2.0, 0.25), c(0.5, -1.0)]);
        let lambda = DiscPoint::from_parts(0.4, -0.3).unwrap();
        let k = cauchy_kernel(lambda, 64);
        let ip = f.resized(64).h2_inner(&k);
        assert!((ip - f.evaluate(lambda)).norm() < 1e-12);
    }
}
