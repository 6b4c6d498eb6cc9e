//! Dense complex linear algebra sized for small (8x8) generator matrices:
//! eigendecomposition, matrix-exponential action, resolvent solves and
//! null-space extraction.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse, Solve};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

pub const DEFAULT_CONDITION_CAP: f64 = 1e12;

/// Slots of the Bloch vector holding populations, used to normalize the
/// kernel vector of an 8-dimensional generator.
pub const POPULATION_SLOTS: [usize; 4] = [0, 2, 5, 7];

#[derive(Debug, Clone)]
pub struct EigDecomposition {
    /// Sorted by (imaginary, real) ascending for deterministic comparisons.
    pub eigenvalues: Vec<C64>,
    pub right_vectors: CMatrix,
    pub inverse_vectors: CMatrix,
    pub condition_estimate: f64,
}

fn op_norm_inf(m: &CMatrix) -> f64 {
    m.rows()
        .into_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn eig_decompose(m: &CMatrix) -> Result<EigDecomposition> {
    eig_decompose_capped(m, DEFAULT_CONDITION_CAP)
}

pub fn eig_decompose_capped(m: &CMatrix, cap: f64) -> Result<EigDecomposition> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    let (vals, vecs) = m.eig()?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (vals[a].im, vals[a].re)
            .partial_cmp(&(vals[b].im, vals[b].re))
            .expect("eigenvalues must be finite")
    });
    let eigenvalues: Vec<C64> = order.iter().map(|&i| vals[i]).collect();
    let mut right = Array2::<C64>::zeros((n, n));
    for (col, &i) in order.iter().enumerate() {
        right.column_mut(col).assign(&vecs.column(i));
    }
    let inverse = right.inv()?;
    let condition_estimate = op_norm_inf(&right) * op_norm_inf(&inverse);
    if !condition_estimate.is_finite() || condition_estimate > cap {
        return Err(Error::DefectiveMatrix {
            estimate: condition_estimate,
            cap,
        });
    }
    Ok(EigDecomposition {
        eigenvalues,
        right_vectors: right,
        inverse_vectors: inverse,
        condition_estimate,
    })
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// e^{Mt} v through the eigenbasis.
    pub fn exp_action(&self, t: f64, v: &CVector) -> CVector {
        let mut c = self.inverse_vectors.dot(v);
        for (ci, lam) in c.iter_mut().zip(&self.eigenvalues) {
            *ci *= (lam * t).exp();
        }
        self.right_vectors.dot(&c)
    }

    /// Max elementwise error of V diag(lambda) V^{-1} against the original.
    pub fn reconstruction_error(&self, m: &CMatrix) -> f64 {
        let n = self.dim();
        let mut lam_vinv = self.inverse_vectors.clone();
        for i in 0..n {
            let l = self.eigenvalues[i];
            lam_vinv.row_mut(i).map_inplace(|z| *z *= l);
        }
        let rebuilt = self.right_vectors.dot(&lam_vinv);
        max_abs(&(&rebuilt - m))
    }

    fn zero_mode_index(&self) -> usize {
        let mut i0 = 0;
        let mut best = f64::INFINITY;
        for (i, lam) in self.eigenvalues.iter().enumerate() {
            if lam.norm() < best {
                best = lam.norm();
                i0 = i;
            }
        }
        i0
    }

    /// (i omega 1 - M)^{-1} v with the stationary zero mode removed.
    ///
    /// Fluctuation vectors are analytically orthogonal to the zero mode; the
    /// projection is checked and discarded, never divided by. This is what
    /// keeps spectra finite at omega = 0, where the direct solve is singular.
    pub fn resolvent_deflated(&self, omega: f64, v: &CVector) -> Result<CVector> {
        let c = self.inverse_vectors.dot(v);
        let i0 = self.zero_mode_index();
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let projection = c[i0].norm();
        if projection > 1e-9 * scale {
            return Err(Error::ZeroModeContamination { projection });
        }
        let n = self.dim();
        let mut out = Array1::<C64>::zeros(n);
        let iw = C64::new(0.0, omega);
        for i in 0..n {
            if i == i0 {
                continue;
            }
            let w = c[i] / (iw - self.eigenvalues[i]);
            out.scaled_add(w, &self.right_vectors.column(i));
        }
        Ok(out)
    }
}

/// Propagator for e^{Mt}: eigenbasis when well conditioned, otherwise
/// scaling-and-squaring on the dense matrix.
#[derive(Debug, Clone)]
pub enum Propagator {
    Eig(EigDecomposition),
    Dense(CMatrix),
}

impl Propagator {
    pub fn new(m: &CMatrix) -> Result<Propagator> {
        match eig_decompose(m) {
            Ok(d) => Ok(Propagator::Eig(d)),
            Err(Error::DefectiveMatrix { .. }) => Ok(Propagator::Dense(m.clone())),
            Err(e) => Err(e),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Propagator::Eig(d) => d.dim(),
            Propagator::Dense(m) => m.nrows(),
        }
    }

    pub fn apply(&self, t: f64, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        match self {
            Propagator::Eig(d) => Ok(d.exp_action(t, v)),
            Propagator::Dense(m) => {
                let e = expm(&m.mapv(|z| z * t));
                Ok(e.dot(v))
            }
        }
    }
}

pub fn mat_exp_action(m: &CMatrix, t: f64, v: &CVector) -> Result<CVector> {
    Propagator::new(m)?.apply(t, v)
}

/// Dense matrix exponential, scaling-and-squaring with a [6/6] Pade
/// approximant (sufficient at the scaled norm bound 0.25).
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = op_norm_inf(a);
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a_sc = a.mapv(|z| z / C64::from(2f64.powi(s as i32)));
    let b = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665280.0,
    ];
    let id = Array2::<C64>::eye(n);
    let a2 = a_sc.dot(&a_sc);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let u = a_sc.dot(&(&id * C64::from(b[1]) + &a2 * C64::from(b[3]) + &a4 * C64::from(b[5])));
    let v = &id * C64::from(b[0]) + &a2 * C64::from(b[2]) + &a4 * C64::from(b[4]) + &a6 * C64::from(b[6]);
    let num = &v + &u;
    let den = &v - &u;
    let mut e = den.solve_mat(&num);
    for _ in 0..s {
        e = e.dot(&e);
    }
    e
}

trait SolveMat {
    fn solve_mat(&self, rhs: &CMatrix) -> CMatrix;
}

impl SolveMat for CMatrix {
    fn solve_mat(&self, rhs: &CMatrix) -> CMatrix {
        // columnwise solve; matrices here are tiny
        let n = self.nrows();
        let mut out = Array2::<C64>::zeros((n, rhs.ncols()));
        for j in 0..rhs.ncols() {
            let col = rhs.column(j).to_owned();
            let x = self.solve(&col).expect("Pade denominator is nonsingular");
            out.column_mut(j).assign(&x);
        }
        out
    }
}

/// Direct LU solve of (i omega 1 - m) x = v, with a residual check.
pub fn resolvent_solve(m: &CMatrix, omega: f64, v: &CVector) -> Result<CVector> {
    let n = m.nrows();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let mut a = m.mapv(|z| -z);
    let iw = C64::new(0.0, omega);
    for i in 0..n {
        a[[i, i]] += iw;
    }
    let x = a
        .solve(v)
        .map_err(|_| Error::SingularResolvent { omega })?;
    let resid = &a.dot(&x) - v;
    let vnorm = v.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let rnorm = resid.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !rnorm.is_finite() || rnorm > 1e-10 * vnorm {
        return Err(Error::SingularResolvent { omega });
    }
    Ok(x)
}

/// Kernel vector of an 8-dimensional generator, normalized so the
/// population slots sum to one with zero imaginary part.
pub fn null_vector(m: &CMatrix) -> Result<CVector> {
    null_vector_normalized(m, &POPULATION_SLOTS)
}

pub fn null_vector_normalized(m: &CMatrix, norm_slots: &[usize]) -> Result<CVector> {
    let decomp = eig_decompose(m)?;
    let scale = op_norm_inf(m).max(1.0);
    let tol = 1e-9 * scale;
    let zero_idx: Vec<usize> = decomp
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.norm() < tol)
        .map(|(i, _)| i)
        .collect();
    if zero_idx.len() != 1 {
        return Err(Error::DegenerateKernel {
            multiplicity: zero_idx.len(),
        });
    }
    let col = decomp.right_vectors.column(zero_idx[0]).to_owned();
    let s: C64 = norm_slots.iter().map(|&i| col[i]).sum();
    if s.norm() < 1e-300 {
        return Err(Error::DivisionByZero {
            context: "null vector normalization",
        });
    }
    Ok(col.mapv(|z| z / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_eig_sorted() {
        let m = array![[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-2.0, 0.0)]];
        let d = eig_decompose(&m).unwrap();
        assert!((d.eigenvalues[0] - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((d.eigenvalues[1] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(d.reconstruction_error(&m) < 1e-12);
    }

    #[test]
    fn exp_action_identity_at_zero() {
        let m = array![[c(-1.0, 0.3), c(0.2, 0.0)], [c(0.0, -0.1), c(-2.0, 0.0)]];
        let v = array![c(1.0, -0.5), c(0.25, 2.0)];
        let out = mat_exp_action(&m, 0.0, &v).unwrap();
        for (a, b) in out.iter().zip(v.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn expm_matches_eig_path() {
        let m = array![
            [c(-1.0, 2.0), c(0.5, -0.2), c(0.0, 0.1)],
            [c(0.3, 0.0), c(-0.5, -1.0), c(0.2, 0.2)],
            [c(0.0, 0.0), c(0.1, 0.0), c(-2.0, 3.0)]
        ];
        let v = array![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.5)];
        let d = eig_decompose(&m).unwrap();
        for &t in &[0.3, 1.7, 6.0] {
            let via_eig = d.exp_action(t, &v);
            let via_pade = expm(&m.mapv(|z| z * t)).dot(&v);
            for (a, b) in via_eig.iter().zip(via_pade.iter()) {
                assert!((a - b).norm() < 1e-9, "t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn scalar_resolvent() {
        let m = array![[c(-1.0, 0.0)]];
        let v = array![c(1.0, 0.0)];
        let x = resolvent_solve(&m, 0.0, &v).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn resolvent_rejects_singular() {
        // eigenvalue exactly at i*omega
        let m = array![[c(0.0, 2.0)]];
        let v = array![c(1.0, 0.0)];
        assert!(matches!(
            resolvent_solve(&m, 2.0, &v),
            Err(Error::SingularResolvent { .. })
        ));
    }

    #[test]
    fn null_vector_of_two_state_generator() {
        // classical rate matrix with stationary distribution (2/3, 1/3)
        let m = array![[c(-1.0, 0.0), c(2.0, 0.0)], [c(1.0, 0.0), c(-2.0, 0.0)]];
        let v = null_vector_normalized(&m, &[0, 1]).unwrap();
        assert!((v[0].re - 2.0 / 3.0).abs() < 1e-12);
        assert!((v[1].re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_kernel_detected() {
        let m = Array2::<C64>::zeros((3, 3));
        assert!(matches!(
            null_vector_normalized(&m, &[0, 1, 2]),
            Err(Error::DegenerateKernel { multiplicity: 3 })
        ));
    }
}
