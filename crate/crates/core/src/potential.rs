//! Equilibrium potentials and capacities by three routes: the Dirichlet
//! identity `Cap = D_N(V)`, the inf-sup formula evaluated at its known
//! optimizer `(V + V*)/2`, and the Dirichlet principle of the symmetric
//! chain. Also the constrained quadratic maximization behind the inf-sup
//! and the mean-rate functionals.

use serde::Serialize;

use crate::configspace::{StateSpace, WellPartition};
use crate::error::{Error, Result};
use crate::generator::{build, dirichlet_form, Kind, RateOperator};
use crate::solver::{solve, SparseMatrix};

/// The three operators of one state space, built once and reused.
pub struct Operators {
    pub forward: RateOperator,
    pub adjoint: RateOperator,
    pub symmetric: RateOperator,
}

impl Operators {
    pub fn build(space: &StateSpace) -> Self {
        Operators {
            forward: build(space, Kind::Forward),
            adjoint: build(space, Kind::Adjoint),
            symmetric: build(space, Kind::Symmetric),
        }
    }

    pub fn of_kind(&self, kind: Kind) -> &RateOperator {
        match kind {
            Kind::Forward => &self.forward,
            Kind::Adjoint => &self.adjoint,
            Kind::Symmetric => &self.symmetric,
        }
    }
}

fn check_sets(space: &StateSpace, a: &[usize], b: &[usize]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("boundary sets must be nonempty"));
    }
    let dim = space.len();
    let mut seen = vec![false; dim];
    for &i in a.iter().chain(b) {
        if i >= dim {
            return Err(Error::Dimension {
                expected: dim,
                got: i,
            });
        }
        if seen[i] {
            return Err(Error::domain("boundary sets must be disjoint"));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Solves the harmonic problem of `op`: value 1 on `a`, 0 on `b`,
/// `(op V)(eta) = 0` elsewhere.
pub fn hitting_potential(
    space: &StateSpace,
    op: &RateOperator,
    a: &[usize],
    b: &[usize],
) -> Result<Vec<f64>> {
    check_sets(space, a, b)?;
    let dim = space.len();
    let mut role = vec![0u8; dim]; // 0 free, 1 in A, 2 in B
    for &i in a {
        role[i] = 1;
    }
    for &i in b {
        role[i] = 2;
    }
    let free: Vec<usize> = (0..dim).filter(|&i| role[i] == 0).collect();
    let mut v = vec![0.0; dim];
    for &i in a {
        v[i] = 1.0;
    }
    if free.is_empty() {
        return Ok(v);
    }
    let mut pos = vec![usize::MAX; dim];
    for (k, &i) in free.iter().enumerate() {
        pos[i] = k;
    }
    let mut m = SparseMatrix::new(free.len());
    let mut rhs = vec![0.0; free.len()];
    for (k, &i) in free.iter().enumerate() {
        m.add(k, k, op.diagonal(i));
        for &(j, r) in op.row(i) {
            match role[j] {
                0 => m.add(k, pos[j], r),
                1 => rhs[k] -= r,
                _ => {}
            }
        }
    }
    let sol = solve(&m, &rhs)?;
    for (k, &i) in free.iter().enumerate() {
        v[i] = sol[k];
    }
    Ok(v)
}

/// Max harmonicity defect of `v` off the boundary.
pub fn harmonicity_residual(op: &RateOperator, v: &[f64], a: &[usize], b: &[usize]) -> f64 {
    let lv = op.apply(v).expect("dimension checked by caller");
    let mut boundary = vec![false; v.len()];
    for &i in a.iter().chain(b) {
        boundary[i] = true;
    }
    lv.iter()
        .enumerate()
        .filter(|(i, _)| !boundary[*i])
        .map(|(_, x)| x.abs())
        .fold(0.0, f64::max)
}

/// Forward and adjoint equilibrium potentials of a pair of sets.
#[derive(Debug)]
pub struct PotentialSolution {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub v: Vec<f64>,
    pub v_star: Vec<f64>,
    /// max of the forward and adjoint harmonicity defects
    pub residual: f64,
}

pub fn equilibrium_potentials(
    space: &StateSpace,
    ops: &Operators,
    a: &[usize],
    b: &[usize],
) -> Result<PotentialSolution> {
    let v = hitting_potential(space, &ops.forward, a, b)?;
    let v_star = hitting_potential(space, &ops.adjoint, a, b)?;
    let residual = harmonicity_residual(&ops.forward, &v, a, b)
        .max(harmonicity_residual(&ops.adjoint, &v_star, a, b));
    Ok(PotentialSolution {
        a: a.to_vec(),
        b: b.to_vec(),
        v,
        v_star,
        residual,
    })
}

/// Constraint on the maximizing function over one set of states.
#[derive(Debug, Clone)]
pub enum SetValue {
    Fixed(f64),
    /// Constant over the set, value optimized.
    FreeConstant,
}

#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub states: Vec<usize>,
    pub value: SetValue,
}

/// Maximizes the concave quadratic `2 <L*F, H>_mu - <H, (-S) H>_mu`
/// over `H` subject to per-set constraints, by gluing each constrained
/// set to a single node. When every constraint is a free constant the
/// additive gauge is pinned by fixing the first set's constant at zero.
/// Returns the value and the maximizer.
pub fn sup_functional(
    space: &StateSpace,
    ops: &Operators,
    f: &[f64],
    constraints: &[ConstraintSet],
) -> Result<(f64, Vec<f64>)> {
    let dim = space.len();
    if f.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: f.len(),
        });
    }
    // node id per state: usize::MAX = own free node assigned later
    let mut set_of = vec![usize::MAX; dim];
    for (s, c) in constraints.iter().enumerate() {
        for &i in &c.states {
            if i >= dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: i,
                });
            }
            if set_of[i] != usize::MAX {
                return Err(Error::domain("constraint sets must be pairwise disjoint"));
            }
            set_of[i] = s;
        }
    }

    let any_fixed = constraints
        .iter()
        .any(|c| matches!(c.value, SetValue::Fixed(_)));
    // Resolve each constrained set to either a fixed value or an unknown id.
    enum Node {
        Fixed(f64),
        Unknown(usize),
    }
    let mut n_unknowns = 0usize;
    let mut set_nodes = Vec::with_capacity(constraints.len());
    for (s, c) in constraints.iter().enumerate() {
        match c.value {
            SetValue::Fixed(v) => set_nodes.push(Node::Fixed(v)),
            SetValue::FreeConstant => {
                if !any_fixed && s == 0 {
                    // gauge: pin the first free constant at zero
                    set_nodes.push(Node::Fixed(0.0));
                } else {
                    set_nodes.push(Node::Unknown(n_unknowns));
                    n_unknowns += 1;
                }
            }
        }
    }
    let mut gauge_state: Option<usize> = None;
    if constraints.is_empty() {
        // no constraints at all: pin state 0 to zero
        gauge_state = Some(0);
    }
    // free states get the remaining unknown ids
    let mut node_of: Vec<Node> = Vec::with_capacity(dim);
    for i in 0..dim {
        let node = if set_of[i] != usize::MAX {
            match set_nodes[set_of[i]] {
                Node::Fixed(v) => Node::Fixed(v),
                Node::Unknown(u) => Node::Unknown(u),
            }
        } else if gauge_state == Some(i) {
            Node::Fixed(0.0)
        } else {
            let u = n_unknowns;
            n_unknowns += 1;
            Node::Unknown(u)
        };
        node_of.push(node);
    }

    // b_i = mu_i (L* F)_i ; stationarity of the glued quadratic: Q H = b.
    let lstar_f = ops.adjoint.apply(f)?;
    let mut rhs = vec![0.0; n_unknowns];
    let mut m = SparseMatrix::new(n_unknowns);
    for i in 0..dim {
        let mu = space.mu_of(i);
        let b_i = mu * lstar_f[i];
        let row = match node_of[i] {
            Node::Unknown(u) => {
                rhs[u] += b_i;
                Some(u)
            }
            Node::Fixed(_) => None,
        };
        // Q_ii = mu_i * exit_rate_i ; Q_ij = -mu_i s(i,j)
        if let Some(u) = row {
            m.add(u, u, mu * ops.symmetric.exit_rate(i));
            for &(j, s_rate) in ops.symmetric.row(i) {
                let q = -mu * s_rate;
                match node_of[j] {
                    Node::Unknown(w) => m.add(u, w, q),
                    Node::Fixed(v) => rhs[u] -= q * v,
                }
            }
        }
    }

    let sol = if n_unknowns > 0 {
        solve(&m, &rhs)?
    } else {
        Vec::new()
    };
    let mut h = vec![0.0; dim];
    for i in 0..dim {
        h[i] = match node_of[i] {
            Node::Fixed(v) => v,
            Node::Unknown(u) => sol[u],
        };
    }
    let sh = ops.symmetric.apply(&h)?;
    let value = 2.0 * space.inner(&lstar_f, &h) + space.inner(&h, &sh);
    Ok((value, h))
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityResiduals {
    pub harmonic_forward: f64,
    pub harmonic_adjoint: f64,
    pub harmonic_symmetric: f64,
    pub infsup_rel: f64,
}

/// Capacity of a pair of sets with the certifying cross-checks.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    pub l: usize,
    pub n: u32,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub cap: f64,
    pub cap_sym: f64,
    pub infsup: f64,
    /// Cap(B, A); reported, not asserted equal to cap.
    pub cap_reversed: f64,
    pub sandwich_ok: bool,
    pub residuals: CapacityResiduals,
    pub notes: Vec<String>,
}

pub fn capacity(
    space: &StateSpace,
    ops: &Operators,
    a: &[usize],
    b: &[usize],
) -> Result<CapacityReport> {
    let pot = equilibrium_potentials(space, ops, a, b)?;
    let cap = dirichlet_form(space, &pot.v)?;

    let v_sym = hitting_potential(space, &ops.symmetric, a, b)?;
    let cap_sym = dirichlet_form(space, &v_sym)?;
    let res_sym = harmonicity_residual(&ops.symmetric, &v_sym, a, b);

    let f_opt: Vec<f64> = pot
        .v
        .iter()
        .zip(&pot.v_star)
        .map(|(x, y)| 0.5 * (x + y))
        .collect();
    let constraints = [
        ConstraintSet {
            states: a.to_vec(),
            value: SetValue::FreeConstant,
        },
        ConstraintSet {
            states: b.to_vec(),
            value: SetValue::FreeConstant,
        },
    ];
    let (infsup, _) = sup_functional(space, ops, &f_opt, &constraints)?;

    let v_rev = hitting_potential(space, &ops.forward, b, a)?;
    let cap_reversed = dirichlet_form(space, &v_rev)?;

    let l2 = 4.0 * (space.l * space.l) as f64;
    let sandwich_ok = cap_sym <= cap * (1.0 + 1e-10) && cap <= l2 * cap_sym * (1.0 + 1e-10);
    let infsup_rel = if cap != 0.0 {
        (cap - infsup).abs() / cap
    } else {
        (cap - infsup).abs()
    };

    let mut notes = Vec::new();
    if space.l == 2 {
        notes.push(
            "L = 2: right and left jumps coincide, the dynamics is reversible \
             and cap equals cap_sym exactly"
                .to_string(),
        );
    }

    Ok(CapacityReport {
        l: space.l,
        n: space.n,
        alpha: space.alpha,
        ell: None,
        a: a.to_vec(),
        b: b.to_vec(),
        cap,
        cap_sym,
        infsup,
        cap_reversed,
        sandwich_ok,
        residuals: CapacityResiduals {
            harmonic_forward: harmonicity_residual(&ops.forward, &pot.v, a, b),
            harmonic_adjoint: harmonicity_residual(&ops.adjoint, &pot.v_star, a, b),
            harmonic_symmetric: res_sym,
            infsup_rel,
        },
        notes,
    })
}

/// Monotonicity: `Cap(A, B) <= Cap(A', B')` for `A ⊂ A'`, `B ⊂ B'`.
pub fn monotonicity_check(
    space: &StateSpace,
    ops: &Operators,
    a: &[usize],
    a_sup: &[usize],
    b: &[usize],
    b_sup: &[usize],
) -> Result<bool> {
    let contains = |sup: &[usize], sub: &[usize]| sub.iter().all(|i| sup.contains(i));
    if !contains(a_sup, a) || !contains(b_sup, b) {
        return Err(Error::domain("inclusion A ⊂ A', B ⊂ B' violated"));
    }
    if a_sup.iter().any(|i| b_sup.contains(i)) {
        return Err(Error::domain("A' and B' must be disjoint"));
    }
    let small = capacity(space, ops, a, b)?;
    let large = capacity(space, ops, a_sup, b_sup)?;
    Ok(small.cap <= large.cap + 1e-10)
}

/// Evaluates the mean-rate functional `G^{x,y}(f)`: the sup over `H`
/// free-constant on the wells of `x` and `y` and zero on every other
/// well. `f` must be 1 on the well of `x`, 0 on the wells of all
/// `z != x, y`, and constant on the well of `y`.
pub fn mean_rate_functional(
    space: &StateSpace,
    ops: &Operators,
    wells: &WellPartition,
    x: usize,
    y: usize,
    f: &[f64],
) -> Result<f64> {
    let l = wells.wells.len();
    if x >= l || y >= l || x == y {
        return Err(Error::domain("need two distinct torus sites"));
    }
    if f.len() != space.len() {
        return Err(Error::Dimension {
            expected: space.len(),
            got: f.len(),
        });
    }
    for &i in &wells.wells[x] {
        if (f[i] - 1.0).abs() > 1e-12 {
            return Err(Error::domain("f must equal 1 on the well of x"));
        }
    }
    let fy = f[wells.wells[y][0]];
    for &i in &wells.wells[y] {
        if (f[i] - fy).abs() > 1e-12 {
            return Err(Error::domain("f must be constant on the well of y"));
        }
    }
    let mut rest = Vec::new();
    for z in 0..l {
        if z != x && z != y {
            for &i in &wells.wells[z] {
                if f[i].abs() > 1e-12 {
                    return Err(Error::domain("f must vanish on the remaining wells"));
                }
                rest.push(i);
            }
        }
    }
    let constraints = [
        ConstraintSet {
            states: wells.wells[x].clone(),
            value: SetValue::FreeConstant,
        },
        ConstraintSet {
            states: wells.wells[y].clone(),
            value: SetValue::FreeConstant,
        },
        ConstraintSet {
            states: rest,
            value: SetValue::Fixed(0.0),
        },
    ];
    let (value, _) = sup_functional(space, ops, f, &constraints)?;
    Ok(value)
}
