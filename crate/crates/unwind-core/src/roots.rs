//! Polynomial roots inside the disc via companion-matrix eigenvalues.
//!
//! The companion matrix is upper Hessenberg, so a single-shift complex QR
//! iteration with Givens rotations finds all eigenvalues; Newton polish
//! tightens them and clustered values merge into multiplicities.

use crate::error::{CoreError, Result};
use crate::hardy::{AnalyticCoeffs, DiscPoint};
use num_complex::Complex64;

/// Eigenvalues closer than this merge into one root with multiplicity.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;

/// Relative threshold below which a coefficient counts as zero when
/// trimming.
const TRIM_REL_TOL: f64 = 1e-14;

/// A root of the polynomial with its multiplicity.
#[derive(Debug, Clone, Copy)]
pub struct RootWithMultiplicity {
    pub root: Complex64,
    pub multiplicity: usize,
}

/// Output of the in-disc root search: kept roots plus the near-boundary
/// ones that the deflation policy excluded.
#[derive(Debug, Clone)]
pub struct InDiscRoots {
    pub in_disc: Vec<RootWithMultiplicity>,
    pub excluded_near_boundary: Vec<Complex64>,
}

impl InDiscRoots {
    /// Roots flattened with repetition, as validated disc points.
    pub fn flattened(&self) -> Result<Vec<DiscPoint>> {
        let mut out = Vec::new();
        for r in &self.in_disc {
            let p = DiscPoint::new(r.root)?;
            for _ in 0..r.multiplicity {
                out.push(p);
            }
        }
        Ok(out)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.in_disc.iter().map(|r| r.multiplicity).sum()
    }
}

/// All roots of p with |root| < 1 - eps_root, with multiplicities from
/// cluster merging. Near-boundary roots (|root| within eps_root of the
/// circle) are excluded from the result but reported.
pub fn roots_in_disc(p: &AnalyticCoeffs, eps_root: f64) -> Result<InDiscRoots> {
    if !(eps_root > 0.0 && eps_root < 0.1) {
        return Err(CoreError::Domain(format!(
            "eps_root = {eps_root} outside (0, 0.1)"
        )));
    }
    let coeffs = p.coeffs();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(CoreError::RootFinding("zero polynomial".into()));
    }
    let tol = TRIM_REL_TOL * scale;

    // trailing trim fixes the true degree; leading trim extracts the
    // origin root with its multiplicity
    let degree = coeffs.iter().rposition(|c| c.norm() > tol).unwrap();
    let origin_mult = coeffs[..degree].iter().take_while(|c| c.norm() <= tol).count();

    let mut result = InDiscRoots {
        in_disc: Vec::new(),
        excluded_near_boundary: Vec::new(),
    };
    if origin_mult > 0 {
        result.in_disc.push(RootWithMultiplicity {
            root: Complex64::default(),
            multiplicity: origin_mult,
        });
    }

    let deflated = &coeffs[origin_mult..=degree];
    if deflated.len() <= 1 {
        return Ok(result);
    }

    let eigen = companion_eigenvalues(deflated)?;
    let polished: Vec<Complex64> = eigen.into_iter().map(|z| newton_polish(deflated, z)).collect();
    let clusters = cluster_roots(&polished, ROOT_CLUSTER_TOL);

    for c in clusters {
        let m = c.root.norm();
        if m < 1.0 - eps_root {
            result.in_disc.push(c);
        } else if m <= 1.0 + eps_root {
            for _ in 0..c.multiplicity {
                result.excluded_near_boundary.push(c.root);
            }
        }
    }
    Ok(result)
}

/// Eigenvalues of the companion matrix of the (trimmed, q(0) != 0)
/// coefficient slice.
fn companion_eigenvalues(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let mut h = vec![vec![Complex64::default(); d]; d];
    for (i, row) in h.iter_mut().enumerate() {
        if i > 0 {
            row[i - 1] = Complex64::new(1.0, 0.0);
        }
        row[d - 1] = -coeffs[i] / lead;
    }
    hessenberg_eigenvalues(&mut h)
}

/// Single-shift QR iteration for a complex upper Hessenberg matrix.
pub(crate) fn hessenberg_eigenvalues(h: &mut [Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut eigen = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigen);
    }
    let mut hi = n - 1;
    let mut iter_count = 0usize;
    let max_iter = 40 * n.max(1);

    loop {
        // deflate: find the largest l with a negligible subdiagonal entry
        let mut lo = 0;
        for l in (1..=hi).rev() {
            let sub = h[l][l - 1].norm();
            let diag = h[l - 1][l - 1].norm() + h[l][l].norm();
            if sub <= f64::EPSILON * diag.max(f64::MIN_POSITIVE) {
                h[l][l - 1] = Complex64::default();
                lo = l;
                break;
            }
        }

        if lo == hi {
            eigen.push(h[hi][hi]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }

        if iter_count >= max_iter {
            return Err(CoreError::RootFinding(format!(
                "QR iteration did not converge after {max_iter} sweeps"
            )));
        }
        iter_count += 1;

        // Wilkinson shift from the trailing 2x2 block, with an occasional
        // exceptional shift to break symmetry stalls
        let shift = if iter_count % 12 == 0 {
            h[hi][hi] + Complex64::new(h[hi][hi - 1].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(
                h[hi - 1][hi - 1],
                h[hi - 1][hi],
                h[hi][hi - 1],
                h[hi][hi],
            )
        };

        for k in lo..=hi {
            h[k][k] -= shift;
        }

        // QR by Givens rotations on rows, then RQ on columns
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            for j in k..=hi {
                let a = h[k][j];
                let b = h[k + 1][j];
                h[k][j] = c * a + s * b;
                h[k + 1][j] = -s.conj() * a + c * b;
            }
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            let top = (hi).min(k + 2);
            for row in h.iter_mut().take(top + 1).skip(lo) {
                let a = row[k];
                let b = row[k + 1];
                row[k] = c * a + s.conj() * b;
                row[k + 1] = -s * a + c * b;
            }
        }

        for k in lo..=hi {
            h[k][k] += shift;
        }
    }
    Ok(eigen)
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let e1 = (tr + disc) / 2.0;
    let e2 = (tr - disc) / 2.0;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// Complex Givens rotation with real cosine: G [a; b] = [r; 0].
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::default());
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let rho = (na * na + nb * nb).sqrt();
    let c = na / rho;
    let s = (a / na) * b.conj() / rho;
    (c, s)
}

fn eval_with_derivatives(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut p = Complex64::default();
    let mut dp = Complex64::default();
    let mut ddp = Complex64::default();
    for &c in coeffs.iter().rev() {
        ddp = ddp * z + dp * 2.0;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, ddp)
}

/// Newton applied to p/p' (whose roots are all simple), accepting a step
/// only when it does not increase |p|. Near multiple roots cancellation
/// limits attainable accuracy to roughly eps^(1/m); the safeguard keeps
/// the better iterate instead of amplifying that noise.
fn newton_polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = eval_with_derivatives(coeffs, z).0.norm();
    for _ in 0..6 {
        let (p, dp, ddp) = eval_with_derivatives(coeffs, z);
        let denom = dp * dp - p * ddp;
        if denom.norm() < 1e-300 {
            break;
        }
        let step = p * dp / denom;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        let candidate = z - step;
        let value = eval_with_derivatives(coeffs, candidate).0.norm();
        if value > best {
            break;
        }
        best = value;
        z = candidate;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<RootWithMultiplicity> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        match clusters
            .iter_mut()
            .find(|(center, count)| (*center / *count as f64 - r).norm() <= tol)
        {
            Some((center, count)) => {
                *center += r;
                *count += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(sum, count)| RootWithMultiplicity {
            root: sum / count as f64,
            multiplicity: count,
        })
        .collect()
}
