//! Test-only reference implementations: dense absorbing-chain solves
//! with the jump rates recomputed from scratch, a Monte Carlo hitting
//! estimator, and a dense pseudo-inverse for the constrained quadratic.
//! Nothing here shares code with the library's operator or solver paths.

use nalgebra::{DMatrix, DVector};

use crate::configspace::StateSpace;

fn rate_of(k: u32, alpha: f64) -> f64 {
    match k {
        0 => 0.0,
        1 => 1.0,
        _ => (k as f64 / (k - 1) as f64).powf(alpha),
    }
}

/// Dense generator with particles stepping by `step` sites, rebuilt
/// directly from the occupation vectors.
pub fn dense_generator(space: &StateSpace, step: isize) -> DMatrix<f64> {
    let dim = space.len();
    let l = space.l as isize;
    let mut m = DMatrix::zeros(dim, dim);
    for (i, s) in space.states().iter().enumerate() {
        for x in 0..space.l {
            let k = s.occ(x);
            if k == 0 {
                continue;
            }
            let y = (((x as isize + step) % l + l) % l) as usize;
            let mut occ = s.occupations().to_vec();
            occ[x] -= 1;
            occ[y] += 1;
            let j = space.index_of(&occ).unwrap();
            let r = rate_of(k, space.alpha);
            m[(i, j)] += r;
            m[(i, i)] -= r;
        }
    }
    m
}

/// Hitting probabilities `P_eta[reach A before B]` by a dense solve of
/// the absorbing problem for the chain jumping by `step`.
pub fn dense_hitting(space: &StateSpace, step: isize, a: &[usize], b: &[usize]) -> Vec<f64> {
    let gen = dense_generator(space, step);
    let dim = space.len();
    let mut boundary = vec![0u8; dim];
    for &i in a {
        boundary[i] = 1;
    }
    for &i in b {
        boundary[i] = 2;
    }
    let free: Vec<usize> = (0..dim).filter(|&i| boundary[i] == 0).collect();
    let mut v = vec![0.0; dim];
    for &i in a {
        v[i] = 1.0;
    }
    if free.is_empty() {
        return v;
    }
    let mut m = DMatrix::zeros(free.len(), free.len());
    let mut rhs = DVector::zeros(free.len());
    for (p, &i) in free.iter().enumerate() {
        for (q, &j) in free.iter().enumerate() {
            m[(p, q)] = gen[(i, j)];
        }
        let mut acc = 0.0;
        for &j in a {
            acc -= gen[(i, j)];
        }
        rhs[p] = acc;
    }
    let sol = m.lu().solve(&rhs).expect("absorbing system nonsingular");
    for (p, &i) in free.iter().enumerate() {
        v[i] = sol[p];
    }
    v
}

/// Capacity via the boundary-flux formula: with `V` the forward hitting
/// probability of `A` before `B`,
/// `Cap(A,B) = sum_{eta in A} mu(eta) sum_xi r(eta,xi) (1 - V(xi))`.
pub fn dense_capacity(space: &StateSpace, a: &[usize], b: &[usize]) -> f64 {
    let v = dense_hitting(space, 1, a, b);
    let gen = dense_generator(space, 1);
    let mut cap = 0.0;
    for &i in a {
        let mu = space.mu_of(i);
        for j in 0..space.len() {
            if j != i && gen[(i, j)] != 0.0 {
                cap += mu * gen[(i, j)] * (1.0 - v[j]);
            }
        }
    }
    cap
}

/// Optimal value of the unconstrained quadratic
/// `2 <L*F, H>_mu - <H, (-S) H>_mu` by a dense pseudo-inverse:
/// `b^T Q^+ b` with `Q_ij = -mu_i s(i,j)` and `b = mu .* (L* F)`.
pub fn dense_unconstrained_sup(space: &StateSpace, f: &[f64]) -> f64 {
    let dim = space.len();
    let fwd = dense_generator(space, 1);
    let adj = dense_generator(space, -1);
    let fv = DVector::from_column_slice(f);
    let lstar_f = &adj * &fv;
    let mut q = DMatrix::zeros(dim, dim);
    let mut b = DVector::zeros(dim);
    for i in 0..dim {
        let mu = space.mu_of(i);
        b[i] = mu * lstar_f[i];
        for j in 0..dim {
            q[(i, j)] = -mu * 0.5 * (fwd[(i, j)] + adj[(i, j)]);
        }
    }
    let pinv = q.pseudo_inverse(1e-12).expect("pseudo-inverse");
    (b.transpose() * pinv * &b)[(0, 0)]
}

/// Monte Carlo estimate of `P_start[hit A before B]` for the forward
/// jump chain, with a self-contained linear congruential generator.
pub fn mc_hitting(
    space: &StateSpace,
    a: &[usize],
    b: &[usize],
    start: usize,
    trials: u64,
    seed: u64,
) -> f64 {
    let mut rng = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
    let mut next = || {
        rng = rng
            .wrapping_mul(2862933555777941757)
            .wrapping_add(3037000493);
        (rng >> 11) as f64 / (1u64 << 53) as f64
    };
    let dim = space.len();
    let mut boundary = vec![0u8; dim];
    for &i in a {
        boundary[i] = 1;
    }
    for &i in b {
        boundary[i] = 2;
    }
    let l = space.l;
    let mut hits = 0u64;
    for _ in 0..trials {
        let mut occ = space.state(start).occupations().to_vec();
        let mut idx = start;
        loop {
            match boundary[idx] {
                1 => {
                    hits += 1;
                    break;
                }
                2 => break,
                _ => {}
            }
            let rates: Vec<f64> = (0..l).map(|x| rate_of(occ[x], space.alpha)).collect();
            let total: f64 = rates.iter().sum();
            let mut u = next() * total;
            let mut site = l - 1;
            for (x, r) in rates.iter().enumerate() {
                if u < *r {
                    site = x;
                    break;
                }
                u -= r;
            }
            occ[site] -= 1;
            occ[(site + 1) % l] += 1;
            idx = space.index_of(&occ).unwrap();
        }
    }
    hits as f64 / trials as f64
}
