//! Linear solves behind the potential and trace-rate computations:
//! dense LU for small systems, preconditioned BiCGStab beyond.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Above this dimension the solver switches from dense LU to BiCGStab.
pub const DENSE_LIMIT: usize = 3000;

/// Relative residual target for the iterative path.
pub const ITERATIVE_TOL: f64 = 1e-11;

/// Row-major sparse square matrix.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn new(n: usize) -> Self {
        SparseMatrix {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        for e in self.rows[i].iter_mut() {
            if e.0 == j {
                e.1 += v;
                return;
            }
        }
        self.rows[i].push((j, v));
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
        out
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(j, _)| j == i)
            .map(|&(_, v)| v)
            .unwrap_or(0.0)
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }
}

/// Solves `m x = b`, choosing the path by dimension.
pub fn solve(m: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != m.dim() {
        return Err(Error::Dimension {
            expected: m.dim(),
            got: b.len(),
        });
    }
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    if m.dim() <= DENSE_LIMIT {
        solve_dense(m, b)
    } else {
        solve_bicgstab(m, b, ITERATIVE_TOL)
    }
}

pub fn solve_dense(m: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let dense = m.to_dense();
    let rhs = DVector::from_column_slice(b);
    let lu = dense.lu();
    match lu.solve(&rhs) {
        Some(x) => Ok(x.iter().copied().collect()),
        None => Err(Error::Solver("singular system in dense LU".into())),
    }
}

/// Jacobi-preconditioned BiCGStab.
pub fn solve_bicgstab(m: &SparseMatrix, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = m.dim();
    let inv_diag: Vec<f64> = (0..n)
        .map(|i| {
            let d = m.diagonal(i);
            if d.abs() > 0.0 {
                1.0 / d
            } else {
                1.0
            }
        })
        .collect();
    let precond = |v: &[f64]| -> Vec<f64> { v.iter().zip(&inv_diag).map(|(x, d)| x * d).collect() };

    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = vec![0.0; n];
    let mut r: Vec<f64> = b.to_vec();
    let r0 = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    let max_iter = 40 * n + 200;
    for _ in 0..max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new.abs() < 1e-300 {
            return Err(Error::Solver("BiCGStab breakdown (rho)".into()));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let p_hat = precond(&p);
        v = m.apply(&p_hat);
        let denom = dot(&r0, &v);
        if denom.abs() < 1e-300 {
            return Err(Error::Solver("BiCGStab breakdown (r0.v)".into()));
        }
        alpha = rho_new / denom;
        let s: Vec<f64> = (0..n).map(|i| r[i] - alpha * v[i]).collect();
        if norm(&s) / b_norm < tol {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            return Ok(x);
        }
        let s_hat = precond(&s);
        let t = m.apply(&s_hat);
        let tt = dot(&t, &t);
        if tt == 0.0 {
            return Err(Error::Solver("BiCGStab breakdown (t)".into()));
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm(&r) / b_norm < tol {
            return Ok(x);
        }
        rho = rho_new;
    }
    Err(Error::Solver(format!(
        "BiCGStab did not reach residual {tol} in {max_iter} iterations"
    )))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
