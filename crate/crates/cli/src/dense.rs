//! Independently assembled dense capacity cross-check: rates are
//! recomputed from the occupation vectors and the absorbing problem is
//! solved with a dense LU, sharing no code with the library's sparse
//! path.

use nalgebra::{DMatrix, DVector};

use zrp_core::StateSpace;

fn rate_of(k: u32, alpha: f64) -> f64 {
    match k {
        0 => 0.0,
        1 => 1.0,
        _ => (k as f64 / (k - 1) as f64).powf(alpha),
    }
}

fn forward_matrix(space: &StateSpace) -> DMatrix<f64> {
    let dim = space.len();
    let l = space.l;
    let mut m = DMatrix::zeros(dim, dim);
    for (i, s) in space.states().iter().enumerate() {
        for x in 0..l {
            let k = s.occ(x);
            if k == 0 {
                continue;
            }
            let mut occ = s.occupations().to_vec();
            occ[x] -= 1;
            occ[(x + 1) % l] += 1;
            let j = space.index_of(&occ).unwrap();
            let r = rate_of(k, space.alpha);
            m[(i, j)] += r;
            m[(i, i)] -= r;
        }
    }
    m
}

/// `Cap(A, B)` via the boundary flux of the forward hitting probability.
pub fn dense_capacity(space: &StateSpace, a: &[usize], b: &[usize]) -> f64 {
    let gen = forward_matrix(space);
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
    if !free.is_empty() {
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
    }
    let mut cap = 0.0;
    for &i in a {
        let mu = space.mu_of(i);
        for j in 0..dim {
            if j != i && gen[(i, j)] != 0.0 {
                cap += mu * gen[(i, j)] * (1.0 - v[j]);
            }
        }
    }
    cap
}
