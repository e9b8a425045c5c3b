//! Enumeration of the configuration space `E_N` on the discrete torus,
//! its stationary measure, and the partition into metastable wells and
//! the transition region.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metastability::gamma_alpha;

/// Default cap on |E_N|: dense f64 vectors over the space stay in the
/// hundreds of megabytes.
pub const DEFAULT_ENUMERATION_CAP: u128 = 5_000_000;

/// `a(n) = n^alpha` with `a(0) = 1`. Single source of truth for the
/// stationary weights; the jump rate `g` is derived from it.
#[inline]
pub fn occupation_weight(n: u32, alpha: f64) -> f64 {
    if n == 0 {
        1.0
    } else {
        (n as f64).powf(alpha)
    }
}

/// An occupation-number vector on the torus: `occ[x]` particles at site `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    occ: Vec<u32>,
}

impl Configuration {
    /// Builds a configuration, checking `L >= 2` and that the entries sum
    /// to the expected particle count.
    pub fn new(occ: Vec<u32>, n_particles: u32) -> Result<Self> {
        if occ.len() < 2 {
            return Err(Error::domain(format!(
                "configuration needs at least 2 sites, got {}",
                occ.len()
            )));
        }
        let total: u64 = occ.iter().map(|&k| k as u64).sum();
        if total != n_particles as u64 {
            return Err(Error::domain(format!(
                "configuration sums to {total}, expected {n_particles}"
            )));
        }
        Ok(Configuration { occ })
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occ
    }

    pub fn sites(&self) -> usize {
        self.occ.len()
    }

    /// Occupation at site `x` (no wrapping).
    pub fn occ(&self, x: usize) -> u32 {
        self.occ[x]
    }

    /// The configuration with one particle moved from `x` to `y`
    /// (torus indices, already reduced). `None` if site `x` is empty.
    pub fn move_particle(&self, x: usize, y: usize) -> Option<Configuration> {
        if self.occ[x] == 0 {
            return None;
        }
        let mut occ = self.occ.clone();
        occ[x] -= 1;
        occ[y] += 1;
        Some(Configuration { occ })
    }

    /// Cyclic relabeling of the sites: site `x` of the result carries the
    /// occupation of site `x - shift` (mod L).
    pub fn rotate(&self, shift: usize) -> Configuration {
        let l = self.occ.len();
        let occ = (0..l).map(|x| self.occ[(x + l - shift % l) % l]).collect();
        Configuration { occ }
    }

    /// Adds one particle at site `z` (the configuration `xi + d_z`).
    pub fn add_particle(&self, z: usize) -> Configuration {
        let mut occ = self.occ.clone();
        occ[z] += 1;
        Configuration { occ }
    }
}

/// Mathematical (non-negative) modulo for torus arithmetic.
#[inline]
pub fn torus_add(x: usize, step: isize, l: usize) -> usize {
    let l = l as isize;
    (((x as isize + step) % l + l) % l) as usize
}

/// Indexed enumeration of `E_N` with stationary weights.
#[derive(Debug)]
pub struct StateSpace {
    pub l: usize,
    pub n: u32,
    pub alpha: f64,
    states: Vec<Configuration>,
    index: HashMap<Vec<u32>, usize>,
    /// Unnormalized weights `1/a(eta)`.
    weights: Vec<f64>,
    /// Normalizing constant `Z_N = N^alpha * sum 1/a(eta)`.
    pub z: f64,
    mu: Vec<f64>,
}

/// Number of compositions of `n` into `l` non-negative parts:
/// `binomial(n + l - 1, l - 1)`.
pub fn cardinality(l: usize, n: u32) -> u128 {
    let mut acc: u128 = 1;
    let n = n as u128;
    let k = (l - 1) as u128;
    for i in 1..=k {
        acc = acc * (n + i) / i;
    }
    acc
}

/// Enumerates `E_N` with the default size cap.
pub fn enumerate(l: usize, n: u32, alpha: f64) -> Result<StateSpace> {
    enumerate_with_cap(l, n, alpha, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates `E_N` in lexicographic order of the occupation vectors and
/// populates the stationary measure.
pub fn enumerate_with_cap(l: usize, n: u32, alpha: f64, cap: u128) -> Result<StateSpace> {
    if l < 2 {
        return Err(Error::domain(format!("need L >= 2 sites, got {l}")));
    }
    if n < 1 {
        return Err(Error::domain("need N >= 1 particles"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("need alpha > 0, got {alpha}")));
    }
    let card = cardinality(l, n);
    if card > cap {
        return Err(Error::SizeCap {
            cardinality: card,
            cap,
        });
    }

    let mut states = Vec::with_capacity(card as usize);
    let mut current = vec![0u32; l];
    gen_lex(&mut current, 0, n, &mut states);
    debug_assert_eq!(states.len() as u128, card);

    let mut index = HashMap::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        index.insert(s.occ.clone(), i);
    }

    let weights: Vec<f64> = states
        .iter()
        .map(|s| s.occ.iter().map(|&k| 1.0 / occupation_weight(k, alpha)).product())
        .collect();
    let wsum: f64 = weights.iter().sum();
    let z = (n as f64).powf(alpha) * wsum;
    let mu: Vec<f64> = weights.iter().map(|w| w / wsum).collect();

    Ok(StateSpace {
        l,
        n,
        alpha,
        states,
        index,
        weights,
        z,
        mu,
    })
}

fn gen_lex(current: &mut Vec<u32>, site: usize, remaining: u32, out: &mut Vec<Configuration>) {
    let l = current.len();
    if site == l - 1 {
        current[site] = remaining;
        out.push(Configuration {
            occ: current.clone(),
        });
        current[site] = 0;
        return;
    }
    for k in 0..=remaining {
        current[site] = k;
        gen_lex(current, site + 1, remaining - k, out);
    }
    current[site] = 0;
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &Configuration {
        &self.states[i]
    }

    pub fn index_of(&self, occ: &[u32]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn mu_of(&self, i: usize) -> f64 {
        self.mu[i]
    }

    /// Unnormalized weight `1/a(eta)` of state `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// `mu_N`-weighted inner product. No unweighted product is exposed.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        debug_assert_eq!(g.len(), self.len());
        f.iter()
            .zip(g)
            .zip(&self.mu)
            .map(|((a, b), m)| a * b * m)
            .sum()
    }

    /// The measure of a set of state ordinals.
    pub fn mass(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.mu[i]).sum()
    }
}

/// Partition of `E_N` into the wells `{eta : eta_x >= N - ell}` and the
/// transition region.
#[derive(Debug)]
pub struct WellPartition {
    pub ell: u32,
    /// For each site `x`, the ordinals of its well.
    pub wells: Vec<Vec<usize>>,
    /// Ordinals in no well.
    pub delta: Vec<usize>,
    /// Inverse lookup: the well containing each ordinal, if any.
    well_of: Vec<Option<usize>>,
}

pub fn partition_wells(space: &StateSpace, ell: u32) -> Result<WellPartition> {
    if ell < 1 {
        return Err(Error::domain("well width ell must be >= 1"));
    }
    if 2 * ell >= space.n {
        return Err(Error::domain(format!(
            "wells overlap: need 2*ell < N, got ell = {ell}, N = {}",
            space.n
        )));
    }
    let threshold = space.n - ell;
    let mut wells = vec![Vec::new(); space.l];
    let mut delta = Vec::new();
    let mut well_of = vec![None; space.len()];
    for (i, s) in space.states.iter().enumerate() {
        match s.occupations().iter().position(|&k| k >= threshold) {
            Some(x) => {
                wells[x].push(i);
                well_of[i] = Some(x);
            }
            None => delta.push(i),
        }
    }
    Ok(WellPartition {
        ell,
        wells,
        delta,
        well_of,
    })
}

impl WellPartition {
    /// The well containing ordinal `i`, or `None` for the transition region.
    pub fn well_of(&self, i: usize) -> Option<usize> {
        self.well_of[i]
    }

    /// Ordinals of the union of wells over a set of sites.
    pub fn union(&self, sites: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &x in sites {
            out.extend_from_slice(&self.wells[x]);
        }
        out
    }

    /// Ordinals of all wells except site `x` (the set breve-E^x).
    pub fn complement_wells(&self, x: usize) -> Vec<usize> {
        let sites: Vec<usize> = (0..self.wells.len()).filter(|&y| y != x).collect();
        self.union(&sites)
    }
}

/// Per-well stationary masses and the mass of the transition region.
#[derive(Debug, Clone, Serialize)]
pub struct WellMassReport {
    pub well_masses: Vec<f64>,
    pub delta_mass: f64,
}

pub fn well_mass_report(space: &StateSpace, partition: &WellPartition) -> WellMassReport {
    WellMassReport {
        well_masses: partition.wells.iter().map(|w| space.mass(w)).collect(),
        delta_mass: space.mass(&partition.delta),
    }
}

/// `lim_N Z_N = L * Gamma(alpha)^(L-1)` where `Gamma(alpha) = sum_j 1/a(j)`.
/// Requires `alpha > 1` for convergence.
pub fn z_limit(l: usize, alpha: f64) -> Result<f64> {
    let g = gamma_alpha(alpha)?;
    Ok(l as f64 * g.powi(l as i32 - 1))
}

/// JSON-exportable summary of a state space.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceSummary {
    pub l: usize,
    pub n: u32,
    pub alpha: f64,
    pub cardinality: u64,
    pub z: f64,
    pub well_masses: Option<Vec<f64>>,
    pub delta_mass: Option<f64>,
}

pub fn summary(space: &StateSpace, partition: Option<&WellPartition>) -> SpaceSummary {
    let report = partition.map(|p| well_mass_report(space, p));
    SpaceSummary {
        l: space.l,
        n: space.n,
        alpha: space.alpha,
        cardinality: space.len() as u64,
        z: space.z,
        well_masses: report.as_ref().map(|r| r.well_masses.clone()),
        delta_mass: report.as_ref().map(|r| r.delta_mass),
    }
}
