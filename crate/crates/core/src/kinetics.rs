//! Power-law kinetics, equilibrium search and numerical checks of the
//! equilibria-set relations between a network and its decompositions.
//!
//! Evaluation is generic over the float type. The multistart solver works
//! in log coordinates `u = ln x` with a Gauss-Newton step (minimum-norm
//! least squares through an SVD) and Armijo backtracking, so solution
//! manifolds and non-square systems are handled uniformly.

use nalgebra::{DMatrix, DVector};
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::{classify, Decomposition};
use crate::error::{Error, Result};
use crate::model::Network;
use crate::scalar::Scalar;
use crate::structure::is_weakly_reversible;

/// Rate constant and kinetic-order row per reaction:
/// `K_j(x) = rate_j * prod_s x_s^orders[j][s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawKinetics<T> {
    rates: Vec<T>,
    orders: Vec<Vec<T>>,
}

impl<T: Float> PowerLawKinetics<T> {
    pub fn new(net: &Network, rates: Vec<T>, orders: Vec<Vec<T>>) -> Result<Self> {
        if rates.len() != net.r() || orders.len() != net.r() {
            return Err(Error::InvalidKinetics(format!(
                "expected {} rates and order rows, found {} and {}",
                net.r(),
                rates.len(),
                orders.len()
            )));
        }
        if let Some(j) = rates
            .iter()
            .position(|k| !(k.is_finite() && *k > T::zero()))
        {
            return Err(Error::InvalidKinetics(format!(
                "rate of reaction {j} is not positive"
            )));
        }
        for (j, row) in orders.iter().enumerate() {
            if row.len() != net.m() {
                return Err(Error::InvalidKinetics(format!(
                    "order row {j} has length {}, expected {}",
                    row.len(),
                    net.m()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidKinetics(format!(
                    "order row {j} is not finite"
                )));
            }
        }
        Ok(PowerLawKinetics { rates, orders })
    }

    /// Mass-action kinetics: orders are the reactant stoichiometric coefficients.
    pub fn mass_action(net: &Network, rates: Vec<T>) -> Result<Self> {
        let orders = net
            .reactions()
            .iter()
            .map(|r| {
                net.complex_vector(r.reactant)
                    .iter()
                    .map(|c| T::from(c.to_f64()).expect("coefficient representable"))
                    .collect()
            })
            .collect();
        Self::new(net, rates, orders)
    }

    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    pub fn orders(&self) -> &[Vec<T>] {
        &self.orders
    }

    /// `K(x)`; `x` must be strictly positive.
    pub fn rate_vector(&self, x: &[T]) -> Result<Vec<T>> {
        if let Some(i) = x
            .iter()
            .position(|v| v.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::NonpositiveState(i));
        }
        Ok(self
            .rates
            .iter()
            .zip(&self.orders)
            .map(|(&k, row)| {
                row.iter().zip(x).fold(k, |acc, (&p, &xi)| {
                    if p == T::zero() {
                        acc
                    } else {
                        acc * xi.powf(p)
                    }
                })
            })
            .collect())
    }
}

/// Result of [`evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    /// `K(x)`, one entry per reaction.
    pub rates: Vec<T>,
    /// `f(x) = N K(x)`, one entry per species.
    pub species_rates: Vec<T>,
    /// `I_a K(x)`, one entry per complex.
    pub complex_rates: Vec<T>,
}

pub fn evaluate<T: Float>(
    net: &Network,
    kin: &PowerLawKinetics<T>,
    x: &[T],
) -> Result<Evaluation<T>> {
    if x.len() != net.m() {
        return Err(Error::DimensionMismatch {
            expected: net.m(),
            found: x.len(),
        });
    }
    let rates = kin.rate_vector(x)?;
    let mut species_rates = vec![T::zero(); net.m()];
    let mut complex_rates = vec![T::zero(); net.n()];
    for (j, r) in net.reactions().iter().enumerate() {
        let k = rates[j];
        complex_rates[r.reactant] = complex_rates[r.reactant] - k;
        complex_rates[r.product] = complex_rates[r.product] + k;
        for (s, c) in net.complexes()[r.product].terms() {
            species_rates[s] = species_rates[s] + k * T::from(c.to_f64()).unwrap();
        }
        for (s, c) in net.complexes()[r.reactant].terms() {
            species_rates[s] = species_rates[s] - k * T::from(c.to_f64()).unwrap();
        }
    }
    Ok(Evaluation {
        rates,
        species_rates,
        complex_rates,
    })
}

/// Kinetics document: `{ "rates": [...], "orders": [[...]] }` or
/// `{ "rates": [...], "mass_action": true }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KineticsDocument {
    pub rates: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mass_action: bool,
}

impl KineticsDocument {
    pub fn into_kinetics(self, net: &Network) -> Result<PowerLawKinetics<f64>> {
        match (self.orders, self.mass_action) {
            (Some(_), true) => Err(Error::InvalidKinetics(
                "give either \"orders\" or \"mass_action\", not both".into(),
            )),
            (Some(orders), false) => PowerLawKinetics::new(net, self.rates, orders),
            (None, true) => PowerLawKinetics::mass_action(net, self.rates),
            (None, false) => Err(Error::InvalidKinetics("missing \"orders\"".into())),
        }
    }
}

impl From<&PowerLawKinetics<f64>> for KineticsDocument {
    fn from(k: &PowerLawKinetics<f64>) -> Self {
        KineticsDocument {
            rates: k.rates.clone(),
            orders: Some(k.orders.clone()),
            mass_action: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Absolute max-norm acceptance threshold on residuals.
    pub tol: f64,
    pub max_iter: usize,
    /// Starts are drawn uniformly from `[-log_box, log_box]^m` in log space.
    pub log_box: f64,
    /// Witnesses closer than this (max-norm, log space) are merged.
    pub dedup_radius: f64,
    /// Per equation, upper bound on `|residual|` relative to the sum of the
    /// absolute terms; rejects drift towards states where the rates vanish.
    pub relative_guard: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-9,
            max_iter: 200,
            log_box: 3.0,
            dedup_radius: 1e-6,
            relative_guard: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumWitness {
    pub x: Vec<f64>,
    /// `|f(x)|_inf`.
    pub residual_sfrf: f64,
    /// `|I_a K(x)|_inf`.
    pub residual_cb: f64,
    pub is_cb: bool,
}

impl EquilibriumWitness {
    pub fn at(net: &Network, kin: &PowerLawKinetics<f64>, x: Vec<f64>, tol: f64) -> Result<Self> {
        let ev = evaluate(net, kin, &x)?;
        let residual_sfrf = max_abs(&ev.species_rates);
        let residual_cb = max_abs(&ev.complex_rates);
        Ok(EquilibriumWitness {
            x,
            residual_sfrf,
            residual_cb,
            is_cb: residual_cb < tol,
        })
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Which linear image of `K(x)` a solve drives to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Balance {
    /// `I_a K(x) = 0` (complex balance).
    Complex,
    /// `N K(x) = 0` (equilibrium).
    Species,
}

/// Bound on `|ln x_i|` during a solve; points on the bound are rejected.
const LOG_CLAMP: f64 = 50.0;

/// Linear residual `x -> G K(x)` where `G` stacks one copy of the incidence
/// or stoichiometric matrix per reaction group, zeroed outside the group.
pub struct ResidualSystem {
    g: DMatrix<f64>,
    rates: DVector<f64>,
    orders: DMatrix<f64>,
}

impl ResidualSystem {
    pub fn new(
        net: &Network,
        kin: &PowerLawKinetics<f64>,
        balance: Balance,
        groups: &[Vec<usize>],
    ) -> Self {
        let base = match balance {
            Balance::Complex => net.incidence_matrix(),
            Balance::Species => net.stoichiometric_matrix(),
        };
        let rows = base.rows();
        let mut g = DMatrix::zeros(rows * groups.len(), net.r());
        for (b, group) in groups.iter().enumerate() {
            for &j in group {
                for i in 0..rows {
                    g[(b * rows + i, j)] = base[(i, j)].to_f64();
                }
            }
        }
        let orders = DMatrix::from_fn(net.r(), net.m(), |j, s| kin.orders[j][s]);
        ResidualSystem {
            g,
            rates: DVector::from_vec(kin.rates.clone()),
            orders,
        }
    }

    fn rate_vector(&self, u: &DVector<f64>) -> DVector<f64> {
        let lin = &self.orders * u;
        DVector::from_fn(self.rates.len(), |j, _| self.rates[j] * lin[j].exp())
    }

    pub fn residual(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.g * self.rate_vector(u)
    }

    /// Analytic Jacobian in log coordinates: `G diag(K) orders`.
    pub fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let k = self.rate_vector(u);
        let mut scaled = self.orders.clone();
        for j in 0..scaled.nrows() {
            scaled.row_mut(j).scale_mut(k[j]);
        }
        &self.g * scaled
    }

    /// Residual with each equation divided by the sum of its absolute
    /// terms, and its Jacobian. Equations with no terms are left at zero.
    /// Unlike the raw residual, this has no descent direction towards
    /// states where the rates vanish.
    fn normalized(&self, u: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let k = self.rate_vector(u);
        let abs_g = self.g.abs();
        let f = &self.g * &k;
        let scale = &abs_g * &k;
        let mut dk = self.orders.clone();
        for j in 0..dk.nrows() {
            dk.row_mut(j).scale_mut(k[j]);
        }
        let df = &self.g * &dk;
        let ds = &abs_g * &dk;
        let mut h = DVector::zeros(f.len());
        let mut jac = DMatrix::zeros(f.len(), u.len());
        for i in 0..f.len() {
            if scale[i] > 0.0 {
                h[i] = f[i] / scale[i];
                let row = (df.row(i) * scale[i] - ds.row(i) * f[i]) / (scale[i] * scale[i]);
                jac.set_row(i, &row);
            }
        }
        (h, jac)
    }

    /// Damped Gauss-Newton on the normalized residual from `u0`. Returns
    /// the final point and whether it satisfies the acceptance thresholds.
    pub fn solve(&self, u0: DVector<f64>, opts: &SolverOptions) -> (DVector<f64>, bool) {
        let mut u = u0;
        let (mut h, mut jac) = self.normalized(&u);
        let mut phi = 0.5 * h.norm_squared();
        for _ in 0..opts.max_iter {
            if h.amax() < 1e-15 {
                break;
            }
            let svd = jac.clone().svd(true, true);
            let eps = svd.singular_values.max() * 1e-12;
            let Ok(step) = svd.solve(&(-&h), eps) else {
                break;
            };
            let slope = (jac.transpose() * &h).dot(&step);
            if !slope.is_finite() || slope >= 0.0 {
                break;
            }
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let cand = (&u + &step * t).map(|v| v.clamp(-LOG_CLAMP, LOG_CLAMP));
                let (hc, jc) = self.normalized(&cand);
                let pc = 0.5 * hc.norm_squared();
                if pc.is_finite() && pc <= phi + 1e-4 * t * slope {
                    accepted = Some((cand, hc, jc, pc));
                    break;
                }
                t *= 0.5;
            }
            let Some((cand, hc, jc, pc)) = accepted else {
                break;
            };
            u = cand;
            h = hc;
            jac = jc;
            phi = pc;
        }
        let f = self.residual(&u);
        let balanced = h.amax() <= opts.relative_guard;
        let interior = u.iter().all(|v| v.abs() < LOG_CLAMP - 1e-6);
        let ok = f.amax() < opts.tol && balanced && interior;
        (u, ok)
    }
}

/// Complex-balance residual Jacobian with respect to `ln x`, exposed for
/// finite-difference checks.
pub fn complex_balance_jacobian(
    net: &Network,
    kin: &PowerLawKinetics<f64>,
    x: &[f64],
) -> Result<DMatrix<f64>> {
    if let Some(i) = x
        .iter()
        .position(|v| v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::NonpositiveState(i));
    }
    let sys = ResidualSystem::new(net, kin, Balance::Complex, &[(0..net.r()).collect()]);
    let u = DVector::from_iterator(x.len(), x.iter().map(|v| v.ln()));
    Ok(sys.jacobian(&u))
}

fn random_starts(m: usize, count: usize, seed: u64, log_box: f64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| DVector::from_fn(m, |_, _| rng.gen_range(-log_box..=log_box)))
        .collect()
}

/// Runs the solver from every start and returns accepted points in log
/// coordinates, deduplicated and sorted.
pub fn multistart(
    sys: &ResidualSystem,
    starts: Vec<DVector<f64>>,
    opts: &SolverOptions,
) -> Vec<Vec<f64>> {
    let mut found: Vec<Vec<f64>> = Vec::new();
    for s in starts {
        let (u, ok) = sys.solve(s, opts);
        if !ok {
            continue;
        }
        let u: Vec<f64> = u.iter().copied().collect();
        let dup = found.iter().any(|w| {
            w.iter()
                .zip(&u)
                .all(|(a, b)| (a - b).abs() <= opts.dedup_radius)
        });
        if !dup {
            found.push(u);
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    found
}

fn witnesses(
    net: &Network,
    kin: &PowerLawKinetics<f64>,
    us: Vec<Vec<f64>>,
    tol: f64,
) -> Vec<EquilibriumWitness> {
    us.into_iter()
        .map(|u| {
            EquilibriumWitness::at(net, kin, u.iter().map(|v| v.exp()).collect(), tol)
                .expect("exp is positive")
        })
        .collect()
}

/// Multistart search for complex balanced equilibria.
///
/// For networks that are not weakly reversible no positive rate vector
/// lies in the kernel of the incidence map, so the search is expected to
/// come back empty.
pub fn find_cb_equilibria(
    net: &Network,
    kin: &PowerLawKinetics<f64>,
    starts: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Vec<EquilibriumWitness> {
    if !is_weakly_reversible(net) {
        log::warn!("network is not weakly reversible; complex balanced equilibria may not exist");
    }
    let sys = ResidualSystem::new(net, kin, Balance::Complex, &[(0..net.r()).collect()]);
    let us = multistart(
        &sys,
        random_starts(net.m(), starts, seed, opts.log_box),
        opts,
    );
    witnesses(net, kin, us, opts.tol)
}

/// Multistart search for positive equilibria (`f(x) = 0`).
pub fn find_equilibria(
    net: &Network,
    kin: &PowerLawKinetics<f64>,
    starts: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Vec<EquilibriumWitness> {
    let sys = ResidualSystem::new(net, kin, Balance::Species, &[(0..net.r()).collect()]);
    let us = multistart(
        &sys,
        random_starts(net.m(), starts, seed, opts.log_box),
        opts,
    );
    witnesses(net, kin, us, opts.tol)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    /// Whether the decomposition meets the hypotheses of the relation.
    pub applicable: bool,
    pub checked: usize,
    pub confirmed: usize,
    pub violations: usize,
}

impl TheoremCheck {
    fn new(name: &str, applicable: bool) -> Self {
        TheoremCheck {
            name: name.to_string(),
            applicable,
            checked: 0,
            confirmed: 0,
            violations: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if ok {
            self.confirmed += 1;
        } else {
            self.violations += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriaReport {
    pub tol: f64,
    pub independent: bool,
    pub incidence_independent: bool,
    #[serde(rename = "is_C")]
    pub is_c: bool,
    pub blocks_weakly_reversible: bool,
    pub whole_cb_witnesses: Vec<EquilibriumWitness>,
    pub joint_cb_witnesses: Vec<EquilibriumWitness>,
    pub whole_equilibria: Vec<EquilibriumWitness>,
    pub joint_equilibria: Vec<EquilibriumWitness>,
    pub checks: Vec<TheoremCheck>,
    pub violations: usize,
}

fn block_residuals(
    net: &Network,
    kin: &PowerLawKinetics<f64>,
    d: &Decomposition,
    x: &[f64],
    balance: Balance,
) -> Vec<f64> {
    d.blocks()
        .iter()
        .map(|b| {
            let sys = ResidualSystem::new(net, kin, balance, std::slice::from_ref(b));
            let u = DVector::from_iterator(x.len(), x.iter().map(|v| v.ln()));
            sys.residual(&u).amax()
        })
        .collect()
}

/// Samples equilibria of the whole network and joint equilibria of the
/// blocks (under the projected kinetics) and checks the inclusions and
/// equalities that the decomposition's class guarantees.
///
/// Checks, by name:
/// - `cb_inclusion`: joint block CB witnesses are CB for the whole network (always).
/// - `cb_equality`: whole-network CB witnesses are CB on every block (incidence independent).
/// - `equilibria_inclusion`: joint block equilibria are whole-network equilibria (always).
/// - `equilibria_equality`: whole-network equilibria are block equilibria (independent).
/// - `cb_existence`: per-block CB witnesses imply a whole-network CB witness
///   (C-decompositions into weakly reversible blocks).
pub fn verify_equilibria_theorems(
    net: &Network,
    kin: &PowerLawKinetics<f64>,
    d: &Decomposition,
    samples: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<EquilibriaReport> {
    let class = classify(net, d)?;
    let tol = opts.tol;
    let m = net.m();
    let blocks_wr = d
        .blocks()
        .iter()
        .map(|b| net.restrict(b).map(|sub| is_weakly_reversible(&sub)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|w| w);
    let y_norm = (0..m)
        .map(|s| {
            net.complexes()
                .iter()
                .map(|c| c.coefficient(s).to_f64().abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);

    let whole_cb = find_cb_equilibria(net, kin, samples, seed, opts);
    let joint_sys = ResidualSystem::new(net, kin, Balance::Complex, d.blocks());
    let joint_cb = witnesses(
        net,
        kin,
        multistart(
            &joint_sys,
            random_starts(m, samples, seed ^ 0x5bd1_e995, opts.log_box),
            opts,
        ),
        tol,
    );
    let whole_eq = find_equilibria(net, kin, samples, seed.wrapping_add(1), opts);
    let joint_eq_sys = ResidualSystem::new(net, kin, Balance::Species, d.blocks());
    let joint_eq = witnesses(
        net,
        kin,
        multistart(
            &joint_eq_sys,
            random_starts(m, samples, seed.wrapping_add(2), opts.log_box),
            opts,
        ),
        tol,
    );

    let mut cb_inclusion = TheoremCheck::new("cb_inclusion", true);
    for w in &joint_cb {
        cb_inclusion.record(w.residual_cb < tol && w.residual_sfrf <= (y_norm + 1.0) * tol);
    }
    let mut cb_equality = TheoremCheck::new("cb_equality", class.incidence_independent);
    if class.incidence_independent {
        for w in &whole_cb {
            let per_block = block_residuals(net, kin, d, &w.x, Balance::Complex);
            cb_equality.record(per_block.iter().all(|&r| r < tol));
        }
    }
    let mut eq_inclusion = TheoremCheck::new("equilibria_inclusion", true);
    for w in &joint_eq {
        eq_inclusion.record(w.residual_sfrf < tol);
    }
    let mut eq_equality = TheoremCheck::new("equilibria_equality", class.independent);
    if class.independent {
        for w in &whole_eq {
            let per_block = block_residuals(net, kin, d, &w.x, Balance::Species);
            eq_equality.record(per_block.iter().all(|&r| r < tol));
        }
    }

    let mut existence = TheoremCheck::new("cb_existence", class.is_c && blocks_wr);
    if existence.applicable {
        let mut block_starts: Vec<DVector<f64>> = Vec::new();
        let mut all_nonempty = true;
        for (i, b) in d.blocks().iter().enumerate() {
            let sys = ResidualSystem::new(net, kin, Balance::Complex, std::slice::from_ref(b));
            let found = multistart(
                &sys,
                random_starts(m, samples, seed.wrapping_add(100 + i as u64), opts.log_box),
                opts,
            );
            match found.first() {
                Some(u) => block_starts.push(DVector::from_vec(u.clone())),
                None => all_nonempty = false,
            }
        }
        if all_nonempty {
            let whole_sys =
                ResidualSystem::new(net, kin, Balance::Complex, &[(0..net.r()).collect()]);
            let mut starts = block_starts;
            starts.extend(random_starts(
                m,
                samples,
                seed.wrapping_add(99),
                opts.log_box,
            ));
            existence.record(!multistart(&whole_sys, starts, opts).is_empty());
        }
    }

    let checks = vec![
        cb_inclusion,
        cb_equality,
        eq_inclusion,
        eq_equality,
        existence,
    ];
    let violations = checks.iter().map(|c| c.violations).sum();
    Ok(EquilibriaReport {
        tol,
        independent: class.independent,
        incidence_independent: class.incidence_independent,
        is_c: class.is_c,
        blocks_weakly_reversible: blocks_wr,
        whole_cb_witnesses: whole_cb,
        joint_cb_witnesses: joint_cb,
        whole_equilibria: whole_eq,
        joint_equilibria: joint_eq,
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    #[test]
    fn evaluate_single_reaction() {
        let n = parse_network("A -> B").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0]).unwrap();
        let ev = evaluate(&n, &k, &[1.0, 1.0]).unwrap();
        assert_eq!(ev.rates, vec![1.0]);
        assert_eq!(ev.species_rates, vec![-1.0, 1.0]);
    }

    #[test]
    fn evaluate_generic_f32() {
        let n = parse_network("A -> B\nB -> C\nC -> A").unwrap();
        let k = PowerLawKinetics::<f32>::mass_action(&n, vec![1.0; 3]).unwrap();
        let ev = evaluate(&n, &k, &[2.0f32; 3]).unwrap();
        assert!(ev.species_rates.iter().all(|v| *v == 0.0));
        assert!(ev.complex_rates.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn nonpositive_state_rejected() {
        let n = parse_network("A -> B").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0]).unwrap();
        assert!(matches!(
            evaluate(&n, &k, &[0.0, 1.0]),
            Err(Error::NonpositiveState(0))
        ));
        assert!(PowerLawKinetics::mass_action(&n, vec![0.0]).is_err());
    }

    #[test]
    fn kinetics_document() {
        let n = parse_network("A -> B").unwrap();
        let doc: KineticsDocument =
            serde_json::from_str(r#"{"rates":[2.0],"mass_action":true}"#).unwrap();
        let k = doc.into_kinetics(&n).unwrap();
        assert_eq!(k.orders(), &[vec![1.0, 0.0]]);
        let doc: KineticsDocument = serde_json::from_str(r#"{"rates":[2.0]}"#).unwrap();
        assert!(doc.into_kinetics(&n).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let n = parse_network("A + B -> 2 C\n2 C -> A + B\nC -> A\nA -> C").unwrap();
        let k = PowerLawKinetics::new(
            &n,
            vec![1.3, 0.7, 2.0, 0.4],
            vec![
                vec![1.0, 1.0, 0.0],
                vec![0.0, 0.0, 2.0],
                vec![0.0, 0.5, 1.0],
                vec![1.5, 0.0, -0.3],
            ],
        )
        .unwrap();
        let x = [0.8, 1.7, 0.6];
        let jac = complex_balance_jacobian(&n, &k, &x).unwrap();
        let h = 1e-6;
        for s in 0..3 {
            let mut up = x;
            let mut dn = x;
            up[s] *= f64::exp(h);
            dn[s] *= f64::exp(-h);
            let fu = evaluate(&n, &k, &up).unwrap().complex_rates;
            let fd = evaluate(&n, &k, &dn).unwrap().complex_rates;
            for i in 0..n.n() {
                let fd_val = (fu[i] - fd[i]) / (2.0 * h);
                assert!((jac[(i, s)] - fd_val).abs() < 1e-6, "entry ({i},{s})");
            }
        }
    }

    #[test]
    fn reversible_pair_witness_lies_on_ray() {
        let n = parse_network("A -> B\nB -> A").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0, 1.0]).unwrap();
        let ws = find_cb_equilibria(&n, &k, 8, 7, &SolverOptions::default());
        assert!(!ws.is_empty());
        for w in ws {
            assert!((w.x[0] - w.x[1]).abs() < 1e-8 * w.x[0].max(1.0));
            assert!(w.is_cb);
        }
    }

    #[test]
    fn cycle_witnesses_are_symmetric() {
        let n = parse_network("A -> B\nB -> C\nC -> A").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0; 3]).unwrap();
        let ws = find_cb_equilibria(&n, &k, 8, 1, &SolverOptions::default());
        assert!(!ws.is_empty());
        for w in ws {
            assert!((w.x[0] - w.x[1]).abs() < 1e-8 && (w.x[1] - w.x[2]).abs() < 1e-8);
        }
    }

    #[test]
    fn irreversible_reaction_has_no_witness() {
        let n = parse_network("A -> B").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0]).unwrap();
        assert!(find_cb_equilibria(&n, &k, 8, 3, &SolverOptions::default()).is_empty());
    }

    #[test]
    fn disjoint_cycles_linkage_check() {
        let n = parse_network("A -> B\nB -> C\nC -> A\nD -> 2 E\n2 E -> D").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0, 2.0, 0.5, 1.5, 0.3]).unwrap();
        let rep = verify_equilibria_theorems(
            &n,
            &k,
            &Decomposition::linkage(&n),
            6,
            11,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.violations, 0);
        assert!(!rep.whole_cb_witnesses.is_empty());
        let eq = rep.checks.iter().find(|c| c.name == "cb_equality").unwrap();
        assert_eq!(eq.confirmed, rep.whole_cb_witnesses.len());
        let ex = rep
            .checks
            .iter()
            .find(|c| c.name == "cb_existence")
            .unwrap();
        assert_eq!((ex.checked, ex.confirmed), (1, 1));
    }

    #[test]
    fn dependent_example_single_block_inclusion() {
        let n = parse_network("X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1").unwrap();
        let k = PowerLawKinetics::mass_action(&n, vec![1.0, 1.0]).unwrap();
        let rep = verify_equilibria_theorems(
            &n,
            &k,
            &Decomposition::single(&n),
            4,
            0,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.joint_cb_witnesses.is_empty());
    }
}
