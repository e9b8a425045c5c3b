//! The forward generator, its adjoint and symmetric part as sparse
//! operators on functions over `E_N`, together with Dirichlet forms and
//! the cycle decomposition.

use std::io::Write;

use crate::configspace::{occupation_weight, torus_add, Configuration, StateSpace};
use crate::error::{Error, Result};

/// Jump rate `g(k) = a(k)/a(k-1)`: `g(0) = 0`, `g(1) = 1`,
/// `g(k) = (k/(k-1))^alpha` for `k >= 2`.
#[inline]
pub fn jump_rate(k: u32, alpha: f64) -> f64 {
    match k {
        0 => 0.0,
        1 => 1.0,
        _ => (k as f64 / (k - 1) as f64).powf(alpha),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Particles jump clockwise (x -> x+1).
    Forward,
    /// The time-reversed process: particles jump counterclockwise.
    Adjoint,
    /// Half the sum of the two.
    Symmetric,
}

/// Sparse rate operator over `E_N`: off-diagonal rates per row plus the
/// diagonal `-sum of rates`.
#[derive(Debug)]
pub struct RateOperator {
    pub kind: Kind,
    rows: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
}

impl RateOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Off-diagonal entries of row `i` as `(column, rate)` pairs.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.diag[i]
    }

    /// Total exit rate out of state `i`.
    pub fn exit_rate(&self, i: usize) -> f64 {
        -self.diag[i]
    }

    /// Matrix-vector product `(op f)(eta)`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: f.len(),
            });
        }
        let mut out = vec![0.0; f.len()];
        for i in 0..f.len() {
            let mut acc = self.diag[i] * f[i];
            for &(j, r) in &self.rows[i] {
                acc += r * f[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// All entries in coordinate format, diagonal included.
    pub fn to_coo(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            out.push((i, i, self.diag[i]));
            for &(j, r) in &self.rows[i] {
                out.push((i, j, r));
            }
        }
        out
    }

    /// Writes the operator as `row,col,rate` CSV for external verification.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,rate")?;
        for (i, j, r) in self.to_coo() {
            writeln!(w, "{i},{j},{r:.17e}")?;
        }
        Ok(())
    }
}

fn push_rate(row: &mut Vec<(usize, f64)>, j: usize, r: f64) {
    for entry in row.iter_mut() {
        if entry.0 == j {
            entry.1 += r;
            return;
        }
    }
    row.push((j, r));
}

/// Builds the sparse operator of the requested kind on `E_N`.
pub fn build(space: &StateSpace, kind: Kind) -> RateOperator {
    let dim = space.len();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    let mut diag = vec![0.0; dim];

    let add_moves = |rows: &mut Vec<Vec<(usize, f64)>>, diag: &mut Vec<f64>, step: isize, scale: f64| {
        for (i, s) in space.states().iter().enumerate() {
            for x in 0..space.l {
                let k = s.occ(x);
                if k == 0 {
                    continue;
                }
                let y = torus_add(x, step, space.l);
                let target = s.move_particle(x, y).expect("occupied site");
                let j = space
                    .index_of(target.occupations())
                    .expect("move stays in E_N");
                let r = scale * jump_rate(k, space.alpha);
                push_rate(&mut rows[i], j, r);
                diag[i] -= r;
            }
        }
    };

    match kind {
        Kind::Forward => add_moves(&mut rows, &mut diag, 1, 1.0),
        Kind::Adjoint => add_moves(&mut rows, &mut diag, -1, 1.0),
        Kind::Symmetric => {
            add_moves(&mut rows, &mut diag, 1, 0.5);
            add_moves(&mut rows, &mut diag, -1, 0.5);
        }
    }

    RateOperator { kind, rows, diag }
}

/// Dirichlet form `D_N(F) = <F, (-S) F>_mu`, evaluated by the explicit
/// bond sum over forward jumps.
pub fn dirichlet_form(space: &StateSpace, f: &[f64]) -> Result<f64> {
    if f.len() != space.len() {
        return Err(Error::Dimension {
            expected: space.len(),
            got: f.len(),
        });
    }
    let mut acc = 0.0;
    for (i, s) in space.states().iter().enumerate() {
        let mu = space.mu_of(i);
        for x in 0..space.l {
            let k = s.occ(x);
            if k == 0 {
                continue;
            }
            let y = torus_add(x, 1, space.l);
            let target = s.move_particle(x, y).unwrap();
            let j = space.index_of(target.occupations()).unwrap();
            let d = f[j] - f[i];
            acc += mu * jump_rate(k, space.alpha) * d * d;
        }
    }
    Ok(0.5 * acc)
}

/// Dirichlet form of a single cycle generator: `xi` lives in `E_{N-1}`
/// and the cycle touches the `L` states `xi + d_z`.
pub fn cycle_form(space: &StateSpace, xi: &Configuration, f: &[f64]) -> Result<f64> {
    if f.len() != space.len() {
        return Err(Error::Dimension {
            expected: space.len(),
            got: f.len(),
        });
    }
    let total: u64 = xi.occupations().iter().map(|&k| k as u64).sum();
    if total + 1 != space.n as u64 {
        return Err(Error::domain(format!(
            "cycle base sums to {total}, expected N-1 = {}",
            space.n - 1
        )));
    }
    let a_xi: f64 = xi
        .occupations()
        .iter()
        .map(|&k| occupation_weight(k, space.alpha))
        .product();
    let weight = (space.n as f64).powf(space.alpha) / (2.0 * space.z * a_xi);
    let values: Vec<f64> = (0..space.l)
        .map(|z| {
            let idx = space
                .index_of(xi.add_particle(z).occupations())
                .expect("xi + d_z in E_N");
            f[idx]
        })
        .collect();
    let mut acc = 0.0;
    for x in 0..space.l {
        let d = values[(x + 1) % space.l] - values[x];
        acc += d * d;
    }
    Ok(weight * acc)
}

/// Off-diagonal entries of the cycle generator attached to `xi` in
/// `E_{N-1}`, as `(row, col, rate)` triples in `E_N` indexing.
pub fn cycle_entries(space: &StateSpace, xi: &Configuration) -> Result<Vec<(usize, usize, f64)>> {
    let total: u64 = xi.occupations().iter().map(|&k| k as u64).sum();
    if total + 1 != space.n as u64 {
        return Err(Error::domain("cycle base must sum to N-1"));
    }
    let mut out = Vec::with_capacity(space.l);
    for x in 0..space.l {
        let from = xi.add_particle(x);
        let to = xi.add_particle((x + 1) % space.l);
        let i = space.index_of(from.occupations()).unwrap();
        let j = space.index_of(to.occupations()).unwrap();
        out.push((i, j, jump_rate(from.occ(x), space.alpha)));
    }
    Ok(out)
}

/// Worst absolute row-sum defect of an operator.
pub fn max_row_sum_defect(op: &RateOperator) -> f64 {
    (0..op.dim())
        .map(|i| {
            let s: f64 = op.row(i).iter().map(|&(_, r)| r).sum();
            (s + op.diagonal(i)).abs()
        })
        .fold(0.0, f64::max)
}

/// Worst global-balance defect: `sum_eta mu(eta) r(eta, xi)` must equal
/// `mu(xi) * exit_rate(xi)` for every `xi`.
pub fn max_balance_defect(space: &StateSpace, op: &RateOperator) -> f64 {
    let mut influx = vec![0.0; op.dim()];
    for i in 0..op.dim() {
        let mu = space.mu_of(i);
        for &(j, r) in op.row(i) {
            influx[j] += mu * r;
        }
    }
    (0..op.dim())
        .map(|j| (influx[j] - space.mu_of(j) * op.exit_rate(j)).abs())
        .fold(0.0, f64::max)
}
