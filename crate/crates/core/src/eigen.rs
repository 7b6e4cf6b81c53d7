//! Dense hermitian eigensolver.
//!
//! A hermitian matrix is reduced to a real symmetric tridiagonal matrix by
//! Householder reflections (or by a diagonal phase similarity when the input
//! is already tridiagonal). The tridiagonal problem is then solved by the
//! implicit QL algorithm with Wilkinson shifts. When only a single eigenvector
//! is needed from a large matrix, the eigenvalues are computed without
//! accumulating rotations and the vector is obtained by inverse iteration.
//!
//! Everything is deterministic: no random starting vectors, no
//! schedule-dependent reductions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Matrices up to this order get a full QL decomposition even when a single
/// eigenvector is requested.
const SMALL_ORDER: usize = 64;

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues (ascending) with the matching orthonormal eigenvectors as
/// matrix columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// One eigenvector together with the full sorted spectrum.
#[derive(Debug, Clone)]
pub struct SelectedEigen {
    pub values: Vec<f64>,
    pub index: usize,
    pub vector: CVector,
}

impl SelectedEigen {
    pub fn value(&self) -> f64 {
        self.values[self.index]
    }
}

/// Real symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn norm(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        implicit_ql(&mut d, &mut e, None)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Full decomposition; eigenvectors are the columns of the returned
    /// row-major `n x n` array.
    pub fn eigen(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        let mut z: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        implicit_ql(&mut d, &mut e, Some(&mut z))?;
        let order = ascending_order(&d);
        let values = order.iter().map(|&k| d[k]).collect();
        let vectors = (0..n).map(|row| order.iter().map(|&k| z[row][k]).collect()).collect();
        Ok((values, vectors))
    }

    /// The `index`-th eigenpair (ascending order) plus all eigenvalues.
    pub fn eigenpair(&self, index: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.len();
        if index >= n {
            return Err(Error::InvalidParams(format!(
                "eigenvalue index {index} out of range for order {n}"
            )));
        }
        if n <= SMALL_ORDER {
            let (values, vectors) = self.eigen()?;
            let column = vectors.iter().map(|row| row[index]).collect();
            return Ok((values, column));
        }
        let values = self.eigenvalues()?;
        let vector = self.inverse_iteration(&values, index)?;
        Ok((values, vector))
    }

    fn inverse_iteration(&self, values: &[f64], index: usize) -> Result<Vec<f64>> {
        let n = self.len();
        let norm = self.norm().max(f64::MIN_POSITIVE);
        let cluster_tol = 1e-3 * norm;
        let mut start = index;
        while start > 0 && values[start] - values[start - 1] <= cluster_tol {
            start -= 1;
        }
        let separation = 10.0 * f64::EPSILON * norm;
        let mut found: Vec<Vec<f64>> = Vec::with_capacity(index - start + 1);
        let mut previous_shift = f64::NEG_INFINITY;
        for (k, &value) in values.iter().enumerate().take(index + 1).skip(start) {
            let mut shift = value;
            if shift - previous_shift < separation {
                shift = previous_shift + separation;
            }
            previous_shift = shift;
            let lu = TridiagonalLu::factor(self, shift, f64::EPSILON * norm);
            let mut x = starting_vector(n);
            let mut converged = false;
            for _ in 0..8 {
                lu.solve(&mut x);
                for q in &found {
                    let overlap: f64 = q.iter().zip(&x).map(|(a, b)| a * b).sum();
                    x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= overlap * qi);
                }
                let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if len == 0.0 || !len.is_finite() {
                    return Err(Error::NoConvergence("inverse iteration collapsed".into()));
                }
                x.iter_mut().for_each(|v| *v /= len);
                if self.residual(&x, value) <= 1e-13 * norm {
                    converged = true;
                    break;
                }
            }
            if !converged && self.residual(&x, value) > 1e-10 * norm {
                return Err(Error::NoConvergence(format!("inverse iteration for eigenvalue {k}")));
            }
            found.push(x);
        }
        Ok(found.pop().expect("at least one vector"))
    }

    fn residual(&self, x: &[f64], value: f64) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = (self.diag[i] - value) * x[i];
                if i > 0 {
                    r += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    r += self.off[i] * x[i + 1];
                }
                r * r
            })
            .sum::<f64>()
            .sqrt()
    }
}

fn starting_vector(n: usize) -> Vec<f64> {
    // Weyl sequence; any vector with no systematic zero components works.
    let golden = 0.618_033_988_749_894_9;
    let v: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * golden).fract() + 0.5).collect();
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / len).collect()
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// LU factorisation with partial pivoting of `T - shift`.
struct TridiagonalLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    dl: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.len();
        let tiny = tiny.max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut du = t.off.clone();
        let mut dl = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() < tiny {
                    d[i] = if d[i] < 0.0 { -tiny } else { tiny };
                }
                let m = dl[i] / d[i];
                dl[i] = m;
                d[i + 1] -= m * du[i];
            } else {
                let m = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = m;
                let below = d[i + 1];
                d[i + 1] = du[i] - m * below;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du2[i];
                }
                du[i] = below;
                swapped[i] = true;
            }
        }
        if let Some(last) = d.last_mut() {
            if last.abs() < tiny {
                *last = if *last < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            d,
            du,
            du2,
            dl,
            swapped,
        }
    }

    fn solve(&self, x: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.dl[i] * x[i];
        }
        x[n - 1] /= self.d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - self.du[n - 2] * x[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - self.du[i] * x[i + 1] - self.du2[i] * x[i + 2]) / self.d[i];
        }
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `e[i]` couples `i` and `i + 1`, `e[n - 1]` must be zero. On return `d`
/// holds the (unsorted) eigenvalues and the columns of `z` have been rotated
/// accordingly.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Vec<Vec<f64>>>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence(format!(
                    "implicit QL did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for row in z.iter_mut() {
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Unitary map taking the tridiagonal eigenvectors back to the original basis.
enum BackTransform {
    /// Householder reflectors `I - tau v v^H` acting on rows `k + 1..`.
    Reflectors(Vec<(Vec<Complex64>, Complex64)>),
    /// Diagonal phase similarity.
    Phases(Vec<Complex64>),
}

impl BackTransform {
    fn apply(&self, z: &[f64]) -> CVector {
        match self {
            BackTransform::Phases(phases) => CVector::from_iterator(z.len(), phases.iter().zip(z).map(|(p, &x)| p * x)),
            BackTransform::Reflectors(reflectors) => {
                let mut y: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                for (k, (v, tau)) in reflectors.iter().enumerate().rev() {
                    if *tau == ZERO {
                        continue;
                    }
                    let tail = &mut y[k + 1..];
                    let dot: Complex64 = v.iter().zip(tail.iter()).map(|(vi, yi)| vi.conj() * yi).sum();
                    let scale = tau * dot;
                    tail.iter_mut().zip(v).for_each(|(yi, vi)| *yi -= scale * vi);
                }
                CVector::from_vec(y)
            }
        }
    }
}

fn is_tridiagonal(a: &CMatrix) -> bool {
    let n = a.nrows();
    (0..n).all(|j| (j + 2..n).all(|i| a[(i, j)] == ZERO))
}

/// Reduce a hermitian matrix (only the lower triangle is read) to real
/// symmetric tridiagonal form.
fn tridiagonalize(a: &CMatrix) -> (SymTridiagonal, BackTransform) {
    let n = a.nrows();
    if is_tridiagonal(a) {
        let mut phases = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        let mut phase = Complex64::new(1.0, 0.0);
        phases.push(phase);
        for i in 0..n.saturating_sub(1) {
            let h = a[(i + 1, i)];
            let r = h.norm();
            if r > 0.0 {
                phase *= h / r;
            }
            off.push(r);
            phases.push(phase);
        }
        let diag = (0..n).map(|i| a[(i, i)].re).collect();
        return (SymTridiagonal::new(diag, off), BackTransform::Phases(phases));
    }

    // Column-major working copy; only the lower triangle is kept current.
    let mut w = a.clone();
    let s = w.as_mut_slice();
    let at = |i: usize, j: usize| i + j * n;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let alpha = s[at(k + 1, k)];
        let xnorm = (k + 2..n).map(|i| s[at(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let (tau, beta, v) = if xnorm == 0.0 && alpha.im == 0.0 {
            (ZERO, alpha.re, Vec::new())
        } else {
            let beta = -(alpha.norm_sqr() + xnorm * xnorm).sqrt().copysign(alpha.re);
            let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
            let scale = (alpha - beta).inv();
            let mut v = Vec::with_capacity(m);
            v.push(Complex64::new(1.0, 0.0));
            v.extend((k + 2..n).map(|i| s[at(i, k)] * scale));
            (tau, beta, v)
        };
        off[k] = beta;
        diag[k] = s[at(k, k)].re;
        if tau != ZERO {
            // w = tau * A22 v, using the lower triangle only.
            let base = k + 1;
            let mut wv = vec![ZERO; m];
            for j in 0..m {
                let col = (base + j) * n + base;
                let vj = v[j];
                wv[j] += s[col + j].re * vj;
                let mut acc = ZERO;
                for i in j + 1..m {
                    let aij = s[col + i];
                    wv[i] += aij * vj;
                    acc += aij.conj() * v[i];
                }
                wv[j] += acc;
            }
            wv.iter_mut().for_each(|x| *x *= tau);
            let dot: Complex64 = wv.iter().zip(&v).map(|(wi, vi)| wi.conj() * vi).sum();
            let shift = -0.5 * tau * dot;
            wv.iter_mut().zip(&v).for_each(|(wi, vi)| *wi += shift * vi);
            // A22 -= v w^H + w v^H on the lower triangle.
            for j in 0..m {
                let col = (base + j) * n + base;
                let wj = wv[j].conj();
                let vj = v[j].conj();
                for i in j..m {
                    s[col + i] -= v[i] * wj + wv[i] * vj;
                }
            }
        }
        reflectors.push((v, tau));
    }
    if n > 0 {
        diag[n - 1] = s[at(n - 1, n - 1)].re;
    }
    (SymTridiagonal::new(diag, off), BackTransform::Reflectors(reflectors))
}

/// Make the largest-magnitude component real and positive.
fn fix_phase(v: &mut CVector) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, c) in v.iter().enumerate() {
        let m = c.norm_sqr();
        if m > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = m;
        }
    }
    if best_norm > 0.0 {
        let c = v[best];
        let phase = c.conj() / c.norm();
        v.iter_mut().for_each(|x| *x *= phase);
        v[best] = Complex64::new(v[best].re, 0.0);
    }
}

fn check_square(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParams("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Full spectral decomposition of a hermitian matrix. Only the lower triangle
/// is read; hermiticity is the caller's responsibility.
pub fn eigh(a: &CMatrix) -> Result<HermitianEigen> {
    check_square(a)?;
    let n = a.nrows();
    let (t, back) = tridiagonalize(a);
    let (values, z) = t.eigen()?;
    let mut vectors = CMatrix::zeros(n, n);
    let mut column = vec![0.0; n];
    for k in 0..n {
        column.iter_mut().zip(&z).for_each(|(c, row)| *c = row[k]);
        let mut v = back.apply(&column);
        fix_phase(&mut v);
        vectors.set_column(k, &v);
    }
    Ok(HermitianEigen { values, vectors })
}

/// All eigenvalues and the eigenvector at position `index` of the ascending
/// spectrum.
pub fn eigh_select(a: &CMatrix, index: usize) -> Result<SelectedEigen> {
    check_square(a)?;
    let (t, back) = tridiagonalize(a);
    let (values, z) = t.eigenpair(index)?;
    let mut vector = back.apply(&z);
    let len = vector.norm();
    vector.unscale_mut(len);
    fix_phase(&mut vector);
    Ok(SelectedEigen { values, index, vector })
}

/// Largest entry-wise deviation from hermiticity.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in j..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenpairs of a general complex square matrix, sorted by real part and
/// then imaginary part. Eigenvectors are unit length with the largest
/// component real and positive.
pub fn eig_general(a: &CMatrix) -> Result<Vec<(Complex64, CVector)>> {
    check_square(a)?;
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NoConvergence("complex Schur iteration".into()))?;
    let (q, t) = schur.unpack();
    let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![ZERO; n];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let acc: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < tiny {
                denom = Complex64::new(tiny, 0.0);
            }
            y[i] = -acc / denom;
        }
        let mut v = &q * CVector::from_vec(y);
        let len = v.norm();
        v.unscale_mut(len);
        fix_phase(&mut v);
        pairs.push((lambda, v));
    }
    pairs.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));
    Ok(pairs)
}

/// Orthonormal eigenbasis of a normal matrix (for example a unitary one).
///
/// A normal `W` shares its eigenvectors with the Hermitian parts
/// `A = (W + W†)/2` and `B = (W − W†)/2i`, so one Hermitian solve of
/// `A + γB` for a generic `γ` diagonalises it. A `γ` that happens to merge
/// distinct eigenvalues leaves `V†WV` visibly non-diagonal and the next is
/// tried. Returns the diagonal of `V†WV`, `V`, and the largest off-diagonal
/// modulus.
pub fn eig_normal(a: &CMatrix) -> Result<(Vec<Complex64>, CMatrix, f64)> {
    check_square(a)?;
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let adjoint = a.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let hermitian = (a + &adjoint) * half;
    let skew = (a - &adjoint) * Complex64::new(0.0, -0.5);
    let mut best: Option<(Vec<Complex64>, CMatrix, f64)> = None;
    // Euler's constant has no stable std name.
    for gamma in [
        0.577_215_664_901_532_9,
        std::f64::consts::SQRT_2,
        std::f64::consts::FRAC_1_PI,
    ] {
        let combined = &hermitian + &skew * Complex64::new(gamma, 0.0);
        let eig = eigh(&combined)?;
        let t = eig.vectors.adjoint() * a * &eig.vectors;
        let values = (0..n).map(|k| t[(k, k)]).collect();
        let mut off_diagonal: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    off_diagonal = off_diagonal.max(t[(i, j)].norm());
                }
            }
        }
        let done = off_diagonal <= 1e-12 * scale;
        if best.as_ref().map_or(true, |b| off_diagonal < b.2) {
            best = Some((values, eig.vectors, off_diagonal));
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one attempt"))
}
