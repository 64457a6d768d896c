//! Dense spectral routines: normalized Laplacian, symmetric eigenvalues via
//! cyclic Jacobi, real eigenvalues of update matrices via Hessenberg QR, and
//! the correspondence check `lambda = 1 - alpha * mu` between the two spectra.
//!
//! Everything is dense; the benchmark graphs stay small (n <= 1222) and only
//! eigenvalues are needed, never eigenvectors.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zero(n: usize) -> DenseMatrix {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<DenseMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Ok(DenseMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Matrix product `self * rhs` (naive triple loop in ikj order).
    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, rhs.n, "matrix orders must match");
        let n = self.n;
        let mut out = DenseMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    out_row[j] += a * rhs_row[j];
                }
            }
        }
        out
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// Entrywise `self += rhs`.
    pub fn add_assign(&mut self, rhs: &DenseMatrix) {
        assert_eq!(self.n, rhs.n, "matrix orders must match");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Square matrix whose constructor has verified symmetry (within 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: DenseMatrix,
}

impl SymMatrix {
    pub fn new(m: DenseMatrix) -> Result<SymMatrix> {
        let n = m.order();
        for i in 0..n {
            for j in (i + 1)..n {
                if (m.get(i, j) - m.get(j, i)).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SymMatrix { inner: m })
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner.get(i, j)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }
}

/// Normalized Laplacian: diagonal 1 for non-isolated vertices (0 otherwise),
/// `-1/sqrt(d_i d_j)` on edges. Spectrum lies in `[0, 2]`.
pub fn normalized_laplacian(g: &Graph) -> SymMatrix {
    let n = g.vertex_count();
    let deg = g.degrees();
    let mut m = DenseMatrix::zero(n);
    for i in 0..n {
        if deg[i] > 0 {
            m.set(i, i, 1.0);
        }
    }
    for &(i, j) in g.edges() {
        let w = -1.0 / ((deg[i] * deg[j]) as f64).sqrt();
        m.set(i, j, w);
        m.set(j, i, w);
    }
    SymMatrix::new(m).expect("laplacian is symmetric by construction")
}

/// All eigenvalues of a symmetric matrix, ascending.
///
/// Cyclic Jacobi rotations (Numerical Recipes section 11.1), eigenvalues
/// only. Always converges for symmetric input; accuracy is at rounding level,
/// far inside the 1e-9 * (1 + spectral radius) contract.
pub fn sym_eigenvalues(m: &SymMatrix) -> Vec<f64> {
    let n = m.order();
    if n == 1 {
        return vec![m.get(0, 0)];
    }
    let mut a = m.as_dense().clone();
    let mut b: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut d = b.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..50 {
        let mut sm = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                sm += a.get(p, q).abs();
            }
        }
        if sm == 0.0 {
            break;
        }
        let tresh = if sweep < 3 {
            0.2 * sm / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = 100.0 * a.get(p, q).abs();
                // after four sweeps, zero out entries too small to matter
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a.set(p, q, 0.0);
                } else if a.get(p, q).abs() > tresh {
                    let mut h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        a.get(p, q) / h
                    } else {
                        let theta = 0.5 * h / a.get(p, q);
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    h = t * a.get(p, q);
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    a.set(p, q, 0.0);
                    let rot = |a: &mut DenseMatrix, i: usize, j: usize, k: usize, l: usize| {
                        let g = a.get(i, j);
                        let h = a.get(k, l);
                        a.set(i, j, g - s * (h + g * tau));
                        a.set(k, l, h + s * (g - h * tau));
                    };
                    for j in 0..p {
                        rot(&mut a, j, p, j, q);
                    }
                    for j in p + 1..q {
                        rot(&mut a, p, j, j, q);
                    }
                    for j in q + 1..n {
                        rot(&mut a, p, j, q, j);
                    }
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }

    d.sort_unstable_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    d
}

/// Second-smallest eigenvalue of the normalized Laplacian.
///
/// Zero exactly when the graph is disconnected; `n/(n-1)` on the complete
/// graph. Needs at least two vertices.
pub fn mu2(g: &Graph) -> Result<f64> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidArgument(
            "mu2 needs at least two vertices".into(),
        ));
    }
    Ok(sym_eigenvalues(&normalized_laplacian(g))[1])
}

/// Linear update matrix `P = Id - alpha * Q` of the averaging rule on `g`:
/// `P_ij = alpha / d_i` on edges, diagonal `1 - alpha` (or 1 when isolated).
///
/// Rows sum to one and the diagonal exceeds 1/2 for `alpha` in (0, 1/2).
pub fn update_matrix(g: &Graph, alpha: f64) -> Result<DenseMatrix> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    let n = g.vertex_count();
    let deg = g.degrees();
    let mut p = DenseMatrix::zero(n);
    for i in 0..n {
        if deg[i] == 0 {
            p.set(i, i, 1.0);
        } else {
            p.set(i, i, 1.0 - alpha);
            for &j in g.neighbors(i) {
                p.set(i, j, alpha / deg[i] as f64);
            }
        }
    }
    Ok(p)
}

/// All eigenvalues of a square matrix known to have a real spectrum
/// (here: update matrices, which are diagonally similar to symmetric ones).
/// Householder reduction to Hessenberg form, then explicitly shifted QR with
/// Givens rotations. Ascending order.
pub fn real_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.order();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m.get(0, 0)];
    }
    let mut h = m.clone();
    hessenberg(&mut h);

    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let eps = f64::EPSILON;
    let mut iters_here = 0usize;
    loop {
        // find the deflation point: smallest active window [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let off = h.get(lo, lo - 1).abs();
            let scale = h.get(lo - 1, lo - 1).abs() + h.get(lo, lo).abs();
            if off <= eps * scale || off < f64::MIN_POSITIVE {
                h.set(lo, lo - 1, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigs.push(h.get(hi, hi));
            if hi == 0 {
                break;
            }
            hi -= 1;
            iters_here = 0;
            continue;
        }
        if lo + 1 == hi {
            let (r1, r2) = real_roots_2x2(
                h.get(lo, lo),
                h.get(lo, hi),
                h.get(hi, lo),
                h.get(hi, hi),
            );
            eigs.push(r1);
            eigs.push(r2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iters_here = 0;
            continue;
        }
        iters_here += 1;
        assert!(
            iters_here <= 100,
            "QR iteration failed to converge; matrix spectrum may not be real"
        );
        // Wilkinson-style shift: eigenvalue of the trailing 2x2 nearest to the
        // corner entry, with the occasional exceptional shift to break cycles
        let shift = if iters_here % 12 == 0 {
            h.get(hi, hi) + h.get(hi, hi - 1).abs()
        } else {
            let (r1, r2) = real_roots_2x2(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            );
            let corner = h.get(hi, hi);
            if (r1 - corner).abs() < (r2 - corner).abs() {
                r1
            } else {
                r2
            }
        };
        qr_step(&mut h, lo, hi, shift);
    }
    eigs.sort_unstable_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    eigs
}

/// Roots of the 2x2 block `[[a, b], [c, d]]`, clamping a marginally negative
/// discriminant (rounding noise on real-spectrum input) to zero.
fn real_roots_2x2(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    let tr = a + d;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let s = disc.max(0.0).sqrt();
    let mid = tr * 0.5;
    (mid - s, mid + s)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut DenseMatrix) {
    let n = a.order();
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a.get(i, k) * a.get(i, k);
        }
        if norm2 == 0.0 {
            continue;
        }
        let mut alpha = norm2.sqrt();
        if a.get(k + 1, k) > 0.0 {
            alpha = -alpha;
        }
        // v = x - alpha * e1 (householder vector over rows k+1..n)
        let mut v = vec![0.0; n];
        v[k + 1] = a.get(k + 1, k) - alpha;
        for i in k + 2..n {
            v[i] = a.get(i, k);
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        // A <- (I - 2vv^T/v^Tv) A
        for j in 0..n {
            let mut dot = 0.0;
            for i in k + 1..n {
                dot += v[i] * a.get(i, j);
            }
            let f = 2.0 * dot / vtv;
            for i in k + 1..n {
                a.set(i, j, a.get(i, j) - f * v[i]);
            }
        }
        // A <- A (I - 2vv^T/v^Tv)
        for i in 0..n {
            let mut dot = 0.0;
            for j in k + 1..n {
                dot += a.get(i, j) * v[j];
            }
            let f = 2.0 * dot / vtv;
            for j in k + 1..n {
                a.set(i, j, a.get(i, j) - f * v[j]);
            }
        }
        a.set(k + 1, k, alpha);
        for i in k + 2..n {
            a.set(i, k, 0.0);
        }
    }
}

/// One explicitly shifted QR sweep on the Hessenberg window `[lo, hi]`.
fn qr_step(h: &mut DenseMatrix, lo: usize, hi: usize, shift: f64) {
    for i in lo..=hi {
        h.set(i, i, h.get(i, i) - shift);
    }
    // factor H = QR with Givens rotations on adjacent rows
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h.get(k, k);
        let y = h.get(k + 1, k);
        let r = x.hypot(y);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (x / r, y / r) };
        rots.push((c, s));
        for j in k..=hi {
            let u = h.get(k, j);
            let v = h.get(k + 1, j);
            h.set(k, j, c * u + s * v);
            h.set(k + 1, j, -s * u + c * v);
        }
    }
    // H <- R Q (apply rotations on columns), restoring Hessenberg form
    for (k, &(c, s)) in (lo..hi).zip(&rots) {
        for i in lo..=(k + 1).min(hi) {
            let u = h.get(i, k);
            let v = h.get(i, k + 1);
            h.set(i, k, c * u + s * v);
            h.set(i, k + 1, -s * u + c * v);
        }
    }
    for i in lo..=hi {
        h.set(i, i, h.get(i, i) + shift);
    }
}

/// Dual-route check of the spectral correspondence `lambda = 1 - alpha * mu`
/// between the update matrix and the normalized Laplacian of `g`.
///
/// Route one maps the Jacobi spectrum of the Laplacian; route two solves the
/// (nonsymmetric) update matrix directly with the QR iteration. Returns the
/// largest gap after sorted matching, which is the optimal matching for real
/// multisets.
pub fn verify_eigen_correspondence(g: &Graph, alpha: f64) -> Result<f64> {
    let p = update_matrix(g, alpha)?;
    let from_laplacian: Vec<f64> = {
        let mut v: Vec<f64> = sym_eigenvalues(&normalized_laplacian(g))
            .into_iter()
            .map(|mu| 1.0 - alpha * mu)
            .collect();
        v.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite"));
        v
    };
    let direct = real_eigenvalues(&p);
    Ok(from_laplacian
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Checks the community criterion `1 - alpha * mu2(g) < rho` on a connected
/// subgraph: the second-largest update-matrix eigenvalue must contract faster
/// than the confidence radius decays.
pub fn lambda2_check(g: &Graph, alpha: f64, rho: f64) -> Result<bool> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidArgument(
            "lambda2_check needs at least two vertices".into(),
        ));
    }
    if g.connected_components().class_count() != 1 {
        return Err(Error::InvalidArgument(
            "lambda2_check needs a connected graph".into(),
        ));
    }
    Ok(1.0 - alpha * mu2(g)? < rho)
}
