//! Limiting constants of the condensate walk, exact trace-process mean
//! rates between wells, well-separation diagnostics, and a variational
//! upper bound on well-to-well capacities built from a smooth profile
//! on the simplex.

use serde::Serialize;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::configspace::{well_mass_report, StateSpace, WellPartition};
use crate::error::{Error, Result};
use crate::generator::{dirichlet_form, RateOperator};
use crate::potential::{
    hitting_potential, sup_functional, ConstraintSet, Operators, SetValue,
};
use crate::solver::{solve, SparseMatrix};

/// Terms summed explicitly in the occupation-weight series; the rest is
/// an Euler-Maclaurin tail.
const SERIES_TERMS: u32 = 100_000;

/// `Gamma(alpha) = sum_{j >= 0} 1/a(j) = 1 + sum_{j >= 1} j^(-alpha)`,
/// finite iff `alpha > 1`. Explicit partial sum (accumulated smallest
/// first) plus an Euler-Maclaurin tail correction.
pub fn gamma_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::domain(format!(
            "occupation-weight series diverges for alpha = {alpha}; needs alpha > 1"
        )));
    }
    let mut sum = 0.0;
    for j in (1..=SERIES_TERMS).rev() {
        sum += (j as f64).powf(-alpha);
    }
    sum += 1.0; // j = 0 term: 1/a(0) = 1
    let a = (SERIES_TERMS + 1) as f64;
    // integral + half-term + first derivative correction
    sum += a.powf(1.0 - alpha) / (alpha - 1.0)
        + 0.5 * a.powf(-alpha)
        + alpha * a.powf(-alpha - 1.0) / 12.0;
    Ok(sum)
}

/// `I_alpha = integral_0^1 u^alpha (1-u)^alpha du`, in Beta closed form
/// `Gamma(alpha+1)^2 / Gamma(2 alpha + 2)`.
pub fn i_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("need alpha > 0, got {alpha}")));
    }
    Ok((2.0 * ln_gamma(alpha + 1.0) - ln_gamma(2.0 * alpha + 2.0)).exp())
}

/// The constants fixing the limiting condensate walk.
#[derive(Debug, Clone, Serialize)]
pub struct LimitConstants {
    pub alpha: f64,
    pub gamma_alpha: f64,
    pub i_alpha: f64,
    /// `1 / (Gamma(alpha) * I_alpha)`: the limiting rate at which the
    /// condensate hops to any given other site.
    pub hop_rate: f64,
}

pub fn limit_constants(alpha: f64) -> Result<LimitConstants> {
    let g = gamma_alpha(alpha)?;
    let i = i_alpha(alpha)?;
    Ok(LimitConstants {
        alpha,
        gamma_alpha: g,
        i_alpha: i,
        hop_rate: 1.0 / (g * i),
    })
}

fn validate_site_set(l: usize, a: &[usize]) -> Result<Vec<usize>> {
    if l < 2 {
        return Err(Error::domain("need L >= 2 sites"));
    }
    let mut sites: Vec<usize> = a.to_vec();
    sites.sort_unstable();
    sites.dedup();
    if sites.iter().any(|&x| x >= l) {
        return Err(Error::domain("site index out of range"));
    }
    if sites.is_empty() || sites.len() >= l {
        return Err(Error::domain(
            "site set must be a nonempty proper subset of the torus",
        ));
    }
    Ok(sites)
}

/// Limiting value of `N^(1+alpha) * Cap_N(wells of A, wells of A^c)`:
/// `|A| (L - |A|) / (L * Gamma(alpha) * I_alpha)`.
pub fn limit_capacity_prediction(l: usize, alpha: f64, a: &[usize]) -> Result<f64> {
    let sites = validate_site_set(l, a)?;
    let c = limit_constants(alpha)?;
    let k = sites.len() as f64;
    Ok(k * (l as f64 - k) / l as f64 * c.hop_rate)
}

/// Capacity between two sites of the symmetric nearest-neighbor walk on
/// the torus (rate 1/2 to each neighbor, uniform measure): two parallel
/// resistor paths of lengths `d` and `L - d`.
pub fn walk_capacity(l: usize, x: usize, y: usize) -> Result<f64> {
    if l < 2 || x >= l || y >= l {
        return Err(Error::domain("sites out of range"));
    }
    if x == y {
        return Err(Error::domain("need two distinct sites"));
    }
    let d = if x > y { x - y } else { y - x };
    let d = d.min(l - d).max(1);
    Ok((1.0 / (2.0 * l as f64)) * (1.0 / d as f64 + 1.0 / (l - d) as f64))
}

/// Limiting value of `N^(1+alpha) * Cap^s_N(wells of A, wells of A^c)`
/// for the symmetrized dynamics:
/// `(1/(Gamma(alpha) I_alpha)) * sum_{x in A, y not in A} walk_capacity(x,y)`.
pub fn symmetric_benchmark(l: usize, alpha: f64, a: &[usize]) -> Result<f64> {
    let sites = validate_site_set(l, a)?;
    let c = limit_constants(alpha)?;
    let mut acc = 0.0;
    for &x in &sites {
        for y in 0..l {
            if !sites.contains(&y) {
                acc += walk_capacity(l, x, y)?;
            }
        }
    }
    Ok(c.hop_rate * acc)
}

/// Riemann-sum approximation of `I_alpha` at resolution `N`:
/// `N^(-(2 alpha + 1)) * sum_{i=1}^{N-1} i^alpha (N - i)^alpha`.
pub fn discrete_i_alpha(n: u32, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("need N >= 2"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain("need alpha > 0"));
    }
    let nf = n as f64;
    let mut acc = 0.0;
    for i in 1..n {
        acc += (i as f64).powf(alpha) * ((n - i) as f64).powf(alpha);
    }
    Ok(acc * nf.powf(-(2.0 * alpha + 1.0)))
}

/// The limiting random walk of the condensate on the torus: every
/// off-diagonal rate equals `hop_rate`.
#[derive(Debug, Clone, Serialize)]
pub struct LimitWalk {
    pub l: usize,
    pub hop_rate: f64,
}

impl LimitWalk {
    /// Total exit rate per site: `(L - 1) * hop_rate`.
    pub fn exit_rate(&self) -> f64 {
        (self.l - 1) as f64 * self.hop_rate
    }

    /// Dense generator matrix on the `L` sites.
    pub fn generator(&self) -> Vec<Vec<f64>> {
        let mut g = vec![vec![self.hop_rate; self.l]; self.l];
        for (x, row) in g.iter_mut().enumerate() {
            row[x] = -self.exit_rate();
        }
        g
    }
}

pub fn limit_walk(l: usize, alpha: f64) -> Result<LimitWalk> {
    if l < 2 {
        return Err(Error::domain("need L >= 2 sites"));
    }
    let c = limit_constants(alpha)?;
    Ok(LimitWalk {
        l,
        hop_rate: c.hop_rate,
    })
}

/// Mean rates of the process traced on the union of wells.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRateTable {
    pub l: usize,
    pub n: u32,
    pub alpha: f64,
    pub ell: u32,
    pub well_masses: Vec<f64>,
    /// `rates[x][y]`: mean rate from the well of `x` into the well of
    /// `y`; zero diagonal.
    pub rates: Vec<Vec<f64>>,
    /// `rates[x][y]` summed over `y != x`.
    pub exit_rates: Vec<f64>,
}

impl TraceRateTable {
    /// Worst relative spread among entries that the cyclic symmetry
    /// forces to be equal (same `y - x` mod `L`).
    pub fn rotation_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for d in 1..self.l {
            let vals: Vec<f64> = (0..self.l)
                .map(|x| self.rates[x][(x + d) % self.l])
                .collect();
            let mean = vals.iter().sum::<f64>() / self.l as f64;
            if mean == 0.0 {
                continue;
            }
            for v in &vals {
                worst = worst.max((v - mean).abs() / mean.abs());
            }
        }
        worst
    }
}

/// Computes the mean jump rates of the trace process on the wells. For
/// each target well the absorbing problem on the transition region is
/// solved for the probability that the first well visited is the
/// target; the raw rates out of each source well are then aggregated
/// against the stationary measure conditioned on the source well.
pub fn trace_mean_rates(
    space: &StateSpace,
    forward: &RateOperator,
    wells: &WellPartition,
) -> Result<TraceRateTable> {
    let l = space.l;
    let delta = &wells.delta;
    let mut delta_pos = vec![usize::MAX; space.len()];
    for (k, &i) in delta.iter().enumerate() {
        delta_pos[i] = k;
    }

    // One absorbing system, L right-hand sides.
    let mut m = SparseMatrix::new(delta.len());
    for (k, &i) in delta.iter().enumerate() {
        m.add(k, k, forward.exit_rate(i));
        for &(j, r) in forward.row(i) {
            if delta_pos[j] != usize::MAX {
                m.add(k, delta_pos[j], -r);
            }
        }
    }
    let mut absorbed = Vec::with_capacity(l);
    for y in 0..l {
        let mut rhs = vec![0.0; delta.len()];
        for (k, &i) in delta.iter().enumerate() {
            for &(j, r) in forward.row(i) {
                if wells.well_of(j) == Some(y) {
                    rhs[k] += r;
                }
            }
        }
        absorbed.push(if delta.is_empty() {
            Vec::new()
        } else {
            solve(&m, &rhs)?
        });
    }

    let masses: Vec<f64> = wells.wells.iter().map(|w| space.mass(w)).collect();
    let mut rates = vec![vec![0.0; l]; l];
    for x in 0..l {
        for y in 0..l {
            if y == x {
                continue;
            }
            let mut acc = 0.0;
            for &i in &wells.wells[x] {
                let mu = space.mu_of(i);
                let mut rate_to_y = 0.0;
                for &(j, r) in forward.row(i) {
                    if wells.well_of(j) == Some(y) {
                        rate_to_y += r;
                    } else if delta_pos[j] != usize::MAX {
                        rate_to_y += r * absorbed[y][delta_pos[j]];
                    }
                }
                acc += mu * rate_to_y;
            }
            rates[x][y] = acc / masses[x];
        }
    }
    let exit_rates: Vec<f64> = rates.iter().map(|row| row.iter().sum()).collect();
    Ok(TraceRateTable {
        l,
        n: space.n,
        alpha: space.alpha,
        ell: wells.ell,
        well_masses: masses,
        rates,
        exit_rates,
    })
}

/// Diagnostics quantifying how well the wells separate the dynamics:
/// the mass of the transition region relative to a well, a bound on the
/// worst-case ratio between the well exit capacity and single-state
/// capacities inside the well, and the scaled exit rates against their
/// limit. Single-state quantities are computed at site 0 and hold for
/// every site by the cyclic symmetry.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub l: usize,
    pub n: u32,
    pub alpha: f64,
    pub ell: u32,
    pub delta_mass: f64,
    pub well_masses: Vec<f64>,
    /// `mu(Delta) / mu(well)`, maximized over wells.
    pub delta_to_well_ratio: f64,
    /// `4 L^2 * Cap^s(well, other wells) / min_eta Cap^s(eta, apex)`,
    /// an upper bound on `sup_eta Cap(well, other wells) / Cap(eta, apex)`.
    pub capacity_ratio_bound: f64,
    /// Whether the minimum ran over every state of the well (true) or a
    /// single worst-case candidate (false).
    pub per_state_caps_exhaustive: bool,
    /// Sanity check of the escape-probability identity
    /// `Cap^s(eta, apex) = mu(eta) * lambda_s(eta) * P[escape] <=
    /// mu(eta) * lambda_s(eta)` on every state tried, where
    /// `lambda_s(eta)` is the total symmetric jump rate out of `eta`.
    pub singleton_cap_below_mass: bool,
    /// `N^(1+alpha) * exit rate` per well, from the trace-rate table.
    pub scaled_exit_rates: Vec<f64>,
    /// `(L - 1) * hop_rate`, the limit of the scaled exit rates
    /// (absent for alpha <= 1).
    pub limit_exit_rate: Option<f64>,
}

/// Per-state capacity sweeps above this well size fall back to a single
/// worst-case candidate configuration.
const EXHAUSTIVE_WELL_LIMIT: usize = 1_000;

pub fn separation_report(
    space: &StateSpace,
    ops: &Operators,
    wells: &WellPartition,
    table: &TraceRateTable,
) -> Result<SeparationReport> {
    let l = space.l;
    let report = well_mass_report(space, wells);
    let delta_to_well_ratio = report
        .well_masses
        .iter()
        .map(|m| report.delta_mass / m)
        .fold(0.0, f64::max);

    // Exit capacity of the well of site 0 under the symmetric dynamics.
    let well0 = &wells.wells[0];
    let others = wells.complement_wells(0);
    let v = hitting_potential(space, &ops.symmetric, well0, &others)?;
    let cap_well = dirichlet_form(space, &v)?;

    // The apex: all N particles at site 0.
    let mut apex_occ = vec![0u32; l];
    apex_occ[0] = space.n;
    let apex = space
        .index_of(&apex_occ)
        .ok_or_else(|| Error::domain("apex configuration not found"))?;

    let exhaustive = well0.len() <= EXHAUSTIVE_WELL_LIMIT;
    let candidates: Vec<usize> = if exhaustive {
        well0.iter().copied().filter(|&i| i != apex).collect()
    } else {
        // Worst case: the boundary configuration with the ell spare
        // particles spread as evenly as possible over the other sites.
        let mut occ = vec![0u32; l];
        occ[0] = space.n - wells.ell;
        for k in 0..wells.ell as usize {
            occ[1 + k % (l - 1)] += 1;
        }
        vec![space
            .index_of(&occ)
            .ok_or_else(|| Error::domain("candidate configuration not found"))?]
    };

    let mut min_cap = f64::INFINITY;
    let mut below_mass = true;
    for &i in &candidates {
        let vi = hitting_potential(space, &ops.symmetric, &[i], &[apex])?;
        let c = dirichlet_form(space, &vi)?;
        if c > space.mu_of(i) * ops.symmetric.exit_rate(i) * (1.0 + 1e-9) {
            below_mass = false;
        }
        min_cap = min_cap.min(c);
    }

    let scale = (space.n as f64).powf(1.0 + space.alpha);
    Ok(SeparationReport {
        l,
        n: space.n,
        alpha: space.alpha,
        ell: wells.ell,
        delta_mass: report.delta_mass,
        well_masses: report.well_masses,
        delta_to_well_ratio,
        capacity_ratio_bound: 4.0 * (l * l) as f64 * cap_well / min_cap,
        per_state_caps_exhaustive: exhaustive,
        singleton_cap_below_mass: below_mass,
        scaled_exit_rates: table.exit_rates.iter().map(|r| r * scale).collect(),
        limit_exit_rate: limit_constants(space.alpha)
            .ok()
            .map(|c| (l - 1) as f64 * c.hop_rate),
    })
}

/// A variational upper bound on `Cap_N(wells of A, wells of A^c)` and
/// the diagnostics of the profile it was built from.
#[derive(Debug, Clone, Serialize)]
pub struct TestFunctionReport {
    pub bound: f64,
    /// `N^(1+alpha) * bound`.
    pub scaled_bound: f64,
    /// Half-width of the flat zones of the ramp.
    pub lambda: f64,
    /// Largest slope of the profile; single-jump increments are bounded
    /// by `slope_limit / N`.
    pub slope_limit: f64,
    /// Measured largest single-jump increment of any per-site profile.
    pub max_jump_increment: f64,
}

/// Quintic ramp: 0 on `[0, lambda]`, 1 on `[1 - lambda, 1]`, smooth and
/// symmetric (`ramp(t) + ramp(1 - t) = 1`) in between.
fn ramp(t: f64, lambda: f64) -> f64 {
    let s = ((t - lambda) / (1.0 - 2.0 * lambda)).clamp(0.0, 1.0);
    // rounding can push the polynomial a few ulps outside [0, 1], which
    // the regularized-Beta evaluation downstream rejects
    (s * s * s * (10.0 + s * (-15.0 + 6.0 * s))).clamp(0.0, 1.0)
}

/// Upper-bounds the capacity between the wells of `A` and the wells of
/// the complement by evaluating the capacity functional at an explicit
/// trial function: the normalized incomplete Beta profile of the
/// occupation fractions, composed with the quintic ramp. The supremum
/// side runs over functions constant on the enlarged wells (occupation
/// threshold `N - 3 ell`), on which the trial function is exactly 1
/// resp. 0; by capacity monotonicity the result dominates the capacity
/// of the original wells.
pub fn test_function_bound(
    space: &StateSpace,
    ops: &Operators,
    wells: &WellPartition,
    a: &[usize],
    epsilon: f64,
) -> Result<TestFunctionReport> {
    let l = space.l;
    let sites = validate_site_set(l, a)?;
    if !(epsilon > 0.0 && epsilon < 1.0 / 3.0) {
        return Err(Error::domain(format!(
            "need 0 < epsilon < 1/3, got {epsilon}"
        )));
    }
    let n = space.n as f64;
    let spread = 3.0 * wells.ell as f64 / n;
    if spread > 0.45 {
        return Err(Error::domain(format!(
            "enlarged wells overlap: 3*ell/N = {spread:.3} exceeds 0.45"
        )));
    }
    let lambda = (3.0 * epsilon).max(spread).min(0.45);
    let ia = i_alpha(space.alpha)?;
    let shape = space.alpha + 1.0;
    let profile = |t: f64| beta_reg(shape, shape, ramp(t, lambda));

    // Per-site trial functions W_x and their sum over A.
    let dim = space.len();
    let in_a = {
        let mut v = vec![false; l];
        for &x in &sites {
            v[x] = true;
        }
        v
    };
    let w_site = |occ: &[u32], x: usize| -> f64 {
        let wx = profile(occ[x] as f64 / n);
        let w_other = occ
            .iter()
            .enumerate()
            .filter(|&(z, _)| z != x)
            .map(|(_, &k)| profile(k as f64 / n))
            .fold(0.0, f64::max);
        0.5 * (wx + 1.0 - w_other)
    };
    let mut f = vec![0.0; dim];
    for (i, s) in space.states().iter().enumerate() {
        f[i] = sites.iter().map(|&x| w_site(s.occupations(), x)).sum();
    }

    // Enlarged wells with threshold N - 3 ell.
    let threshold = space.n - 3 * wells.ell;
    let mut d_a = Vec::new();
    let mut d_ac = Vec::new();
    for (i, s) in space.states().iter().enumerate() {
        if let Some(x) = s.occupations().iter().position(|&k| k >= threshold) {
            if in_a[x] {
                d_a.push(i);
            } else {
                d_ac.push(i);
            }
        }
    }
    for &i in &d_a {
        if (f[i] - 1.0).abs() > 1e-9 {
            return Err(Error::domain(
                "trial function not constant on the enlarged source wells",
            ));
        }
        f[i] = 1.0;
    }
    for &i in &d_ac {
        if f[i].abs() > 1e-9 {
            return Err(Error::domain(
                "trial function not constant on the enlarged target wells",
            ));
        }
        f[i] = 0.0;
    }

    let constraints = [
        ConstraintSet {
            states: d_a,
            value: SetValue::FreeConstant,
        },
        ConstraintSet {
            states: d_ac,
            value: SetValue::FreeConstant,
        },
    ];
    let (bound, _) = sup_functional(space, ops, &f, &constraints)?;

    // Largest single-jump increment of any per-site profile, over all
    // forward transitions.
    let mut max_inc: f64 = 0.0;
    for s in space.states() {
        for x_from in 0..l {
            if s.occ(x_from) == 0 {
                continue;
            }
            let target = s
                .move_particle(x_from, crate::configspace::torus_add(x_from, 1, l))
                .unwrap();
            for &x in &sites {
                let inc = (w_site(target.occupations(), x) - w_site(s.occupations(), x)).abs();
                max_inc = max_inc.max(inc);
            }
        }
    }
    // Peak slope of the composed profile: the Beta density at 1/2 times
    // the peak ramp slope 15/8 / (1 - 2 lambda).
    let slope_limit = (1.0 / ia) * 0.25f64.powf(space.alpha) * 1.875 / (1.0 - 2.0 * lambda);

    Ok(TestFunctionReport {
        bound,
        scaled_bound: n.powf(1.0 + space.alpha) * bound,
        lambda,
        slope_limit,
        max_jump_increment: max_inc,
    })
}
