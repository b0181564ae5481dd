//! Monte-Carlo wave-function trajectories.
//!
//! Between jumps `ψ` follows `dψ/dt = -iH ψ` with `H = -(i/2) R` and the rate
//! operator `R = W J-J+ + Γ E+E-`. A jump fires when `‖ψ‖²` falls to a uniform
//! threshold `r`; the channel is `J+` or `E-` with odds `W‖J+ψ‖² : Γ‖E-ψ‖²`.
//! `R`, `J+`, `E-` and the initial state are real in the `l/r` basis, so
//! trajectories are real vectors.
//!
//! Random numbers: trajectory `k` of an ensemble with master seed `s` uses
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `k`. Each `u64` draw `x`
//! becomes the uniform `((x >> 11) + 0.5) · 2⁻⁵³ ∈ (0, 1)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::basis::{Flavor, SymmetricBasis};
use crate::liouvillian::ModelParams;
use crate::operators::{build_ladder, CollectiveOperator, Ladder};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Step controls of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct McwfOptions {
    /// Preferred fractional loss of `‖ψ‖²` per step.
    pub target_norm_loss: f64,
    /// Steps losing more than this fraction are halved and retried.
    pub max_norm_loss: f64,
    /// Jump times are refined until `|‖ψ‖² - r| ≤ jump_tol`.
    pub jump_tol: f64,
    /// Accepted steps allowed per trajectory.
    pub max_steps: usize,
}

impl Default for McwfOptions {
    fn default() -> Self {
        Self {
            target_norm_loss: 0.02,
            max_norm_loss: 0.1,
            jump_tol: 1e-9,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `J+` into the z-cavity.
    Pump,
    /// `E-` into the x-cavity.
    Decay,
}

impl Channel {
    pub fn label(self) -> &'static str {
        match self {
            Channel::Pump => "pump",
            Channel::Decay => "decay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub channel: Channel,
    /// `‖ψ‖² - r` when the jump fired.
    pub crossing_error: f64,
}

/// Operators shared by all trajectories of one parameter point.
#[derive(Debug, Clone)]
pub struct TrajectoryModel {
    params: ModelParams,
    basis: Arc<SymmetricBasis>,
    j_plus: CsrMatrix<f64>,
    e_minus: CsrMatrix<f64>,
    rates: CsrMatrix<f64>,
    max_dt: f64,
}

fn real(op: &CollectiveOperator) -> Result<CsrMatrix<f64>> {
    op.matrix()
        .to_real()
        .ok_or_else(|| Error::RepresentationStructure(format!("`{}` is not real", op.label())))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sqr(a: &[f64]) -> f64 {
    dot(a, a)
}

/// `(x >> 11 + 0.5) · 2⁻⁵³`, never 0 or 1.
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Generator of trajectory `index` under `master_seed`.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// `20/(NΓ) · max(1, Γ/W)`.
pub fn default_t_final(params: &ModelParams) -> Result<f64> {
    let (w, g) = (params.pump(), params.decay());
    if !(w > 0.0 && g > 0.0) {
        return Err(Error::Domain("default duration needs W > 0 and Γ > 0".into()));
    }
    Ok(20.0 / (params.n_atoms() as f64 * g) * (g / w).max(1.0))
}

impl TrajectoryModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let basis = Arc::new(SymmetricBasis::new(params.n_atoms(), Flavor::MomentumLr)?);
        let j_plus = real(&build_ladder(Ladder::JPlus, &basis)?)?;
        let e_minus = real(&build_ladder(Ladder::EPlus, &basis)?.adjoint())?;
        let pump_loss = j_plus.transpose().matmul(&j_plus)?;
        let decay_loss = e_minus.transpose().matmul(&e_minus)?;
        let rates = pump_loss.lin_comb(params.pump(), &decay_loss, params.decay())?;
        // RK4 on -R/2 is stable for |hλ/2| < 2.78; stay well inside.
        let max_dt = 3.0 / rates.gershgorin_bound().max(f64::MIN_POSITIVE);
        Ok(Self {
            params: params.clone(),
            basis,
            j_plus,
            e_minus,
            rates,
            max_dt,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// The `l/r` flavor basis of the trajectories.
    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    /// `R = W J-J+ + Γ E+E-`.
    pub fn rate_operator(&self) -> &CsrMatrix<f64> {
        &self.rates
    }

    /// `H = -(i/2) R`.
    pub fn nh_hamiltonian(&self) -> Result<CollectiveOperator> {
        let m = self.rates.map(|v| C64::new(0.0, -0.5 * v));
        CollectiveOperator::new(self.basis.clone(), m, "H_NH", false)
    }

    /// `|g,l>^⊗N` at `t = 0` with a fresh threshold.
    pub fn initial_state(&self, mut rng: ChaCha8Rng) -> TrajectoryState {
        let mut psi = vec![0.0; self.basis.len()];
        psi[0] = 1.0;
        let threshold = uniform(&mut rng);
        TrajectoryState {
            psi,
            time: 0.0,
            rng,
            threshold,
            jump_log: Vec::new(),
        }
    }

    fn rk4(&self, psi: &[f64], dt: f64) -> Vec<f64> {
        let d = psi.len();
        let f = |y: &[f64], out: &mut [f64]| {
            self.rates.matvec(y, out);
            out.iter_mut().for_each(|v| *v *= -0.5);
        };
        let mut k1 = vec![0.0; d];
        let mut k2 = vec![0.0; d];
        let mut k3 = vec![0.0; d];
        let mut k4 = vec![0.0; d];
        let mut tmp = vec![0.0; d];
        f(psi, &mut k1);
        for i in 0..d {
            tmp[i] = psi[i] + 0.5 * dt * k1[i];
        }
        f(&tmp, &mut k2);
        for i in 0..d {
            tmp[i] = psi[i] + 0.5 * dt * k2[i];
        }
        f(&tmp, &mut k3);
        for i in 0..d {
            tmp[i] = psi[i] + dt * k3[i];
        }
        f(&tmp, &mut k4);
        (0..d)
            .map(|i| psi[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    }

    /// `-d ln‖ψ‖²/dt = <ψ|R|ψ>/<ψ|ψ>`.
    pub fn loss_rate(&self, psi: &[f64]) -> f64 {
        dot(psi, &self.rates.mul_vec(psi)) / norm_sqr(psi)
    }

    /// Step size the controller would propose for `psi`.
    pub fn proposed_dt(&self, psi: &[f64], options: &McwfOptions) -> f64 {
        let rate = self.loss_rate(psi);
        if rate > 0.0 {
            self.max_dt.min(options.target_norm_loss / rate)
        } else {
            self.max_dt
        }
    }

    /// Integrate the no-jump evolution over at most `dt`, halving until the
    /// fractional norm loss is at most `max_norm_loss`. Returns the step taken.
    pub fn step(&self, state: &mut TrajectoryState, dt: f64, options: &McwfOptions) -> Result<f64> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Domain(format!("step must be positive, got {dt}")));
        }
        let before = norm_sqr(&state.psi);
        let mut h = dt.min(self.max_dt);
        loop {
            let next = self.rk4(&state.psi, h);
            let loss = 1.0 - norm_sqr(&next) / before;
            if loss <= options.max_norm_loss {
                state.psi = next;
                state.time += h;
                return Ok(h);
            }
            h *= 0.5;
            if h <= f64::EPSILON * state.time.max(1.0) {
                return Err(Error::NonConvergence {
                    steps: 0,
                    residual: loss,
                });
            }
        }
    }

    /// Fire a jump if `‖ψ‖²` has reached the threshold. `u` picks the channel.
    pub fn maybe_jump(&self, state: &mut TrajectoryState, u: f64, options: &McwfOptions) -> Result<Option<Channel>> {
        let n2 = norm_sqr(&state.psi);
        if n2 > state.threshold + options.jump_tol {
            return Ok(None);
        }
        let pumped = self.j_plus.mul_vec(&state.psi);
        let decayed = self.e_minus.mul_vec(&state.psi);
        let p_pump = self.params.pump() * norm_sqr(&pumped);
        let p_decay = self.params.decay() * norm_sqr(&decayed);
        let total = p_pump + p_decay;
        if !(total > 0.0) {
            return Err(Error::ImpossibleJump { time: state.time });
        }
        let (channel, mut psi) = if u * total < p_pump {
            (Channel::Pump, pumped)
        } else {
            (Channel::Decay, decayed)
        };
        let norm = norm_sqr(&psi).sqrt();
        psi.iter_mut().for_each(|v| *v /= norm);
        state.jump_log.push(Jump {
            time: state.time,
            channel,
            crossing_error: n2 - state.threshold,
        });
        state.psi = psi;
        state.threshold = uniform(&mut state.rng);
        Ok(Some(channel))
    }

    /// Locate the threshold crossing inside `(0, dt]` from `start` by the
    /// Illinois variant of regula falsi on `‖ψ(τ)‖² - r`.
    fn crossing(&self, start: &[f64], dt: f64, r: f64, tol: f64) -> (f64, Vec<f64>) {
        let g = |psi: &[f64]| norm_sqr(psi) - r;
        let (mut a, mut fa) = (0.0, g(start));
        let mut psi_b = self.rk4(start, dt);
        let (mut b, mut fb) = (dt, g(&psi_b));
        let mut side = 0i8;
        for _ in 0..200 {
            if fb.abs() <= tol {
                break;
            }
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > a && c < b) {
                c = 0.5 * (a + b);
            }
            let psi_c = self.rk4(start, c);
            let fc = g(&psi_c);
            if fc.abs() <= tol {
                return (c, psi_c);
            }
            if fc > 0.0 {
                a = c;
                fa = fc;
                if side == 1 {
                    fb *= 0.5;
                }
                side = 1;
            } else {
                b = c;
                fb = fc;
                psi_b = psi_c;
                if side == -1 {
                    fa *= 0.5;
                }
                side = -1;
            }
        }
        (b, psi_b)
    }

    /// Evolve with jumps until `t_end`.
    pub fn advance(&self, state: &mut TrajectoryState, t_end: f64, options: &McwfOptions, steps: &mut usize) -> Result<()> {
        while state.time < t_end {
            if *steps >= options.max_steps {
                return Err(Error::NonConvergence {
                    steps: *steps,
                    residual: t_end - state.time,
                });
            }
            let remaining = t_end - state.time;
            let proposal = self.proposed_dt(&state.psi, options);
            let last = proposal >= remaining;
            let dt = if last { remaining } else { proposal };
            let start = state.psi.clone();
            let t0 = state.time;
            let taken = self.step(state, dt, options)?;
            *steps += 1;
            if last && taken == dt {
                state.time = t_end;
            }
            if norm_sqr(&state.psi) <= state.threshold {
                let (tau, psi) = self.crossing(&start, taken, state.threshold, options.jump_tol);
                state.psi = psi;
                state.time = if tau == taken && last && taken == dt { t_end } else { t0 + tau };
                let u = uniform(&mut state.rng);
                self.maybe_jump(state, u, options)?;
            }
        }
        Ok(())
    }
}

/// One trajectory in progress.
#[derive(Debug, Clone)]
pub struct TrajectoryState {
    /// Unnormalized between jumps.
    pub psi: Vec<f64>,
    pub time: f64,
    pub rng: ChaCha8Rng,
    /// Current jump threshold `r`.
    pub threshold: f64,
    pub jump_log: Vec<Jump>,
}

impl TrajectoryState {
    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.psi)
    }

    /// `ψ/‖ψ‖`.
    pub fn normalized(&self) -> Vec<f64> {
        let n = self.norm_sqr().sqrt();
        self.psi.iter().map(|v| v / n).collect()
    }
}

/// Run trajectory `index` and call `observe(k, t_k, ψ/‖ψ‖)` at every sample time.
pub fn run_trajectory<F>(
    model: &TrajectoryModel,
    master_seed: u64,
    index: u64,
    sample_times: &[f64],
    options: &McwfOptions,
    mut observe: F,
) -> Result<TrajectoryState>
where
    F: FnMut(usize, f64, &[f64]) -> Result<()>,
{
    if sample_times.windows(2).any(|w| w[1] < w[0]) || sample_times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::Config("sample times must be ascending and non-negative".into()));
    }
    let mut state = model.initial_state(trajectory_rng(master_seed, index));
    let mut steps = 0usize;
    for (k, &t) in sample_times.iter().enumerate() {
        model.advance(&mut state, t, options, &mut steps)?;
        observe(k, t, &state.normalized())?;
    }
    Ok(state)
}

/// `<ψ|O|ψ>` for real normalized `ψ` and Hermitian `O`.
pub fn real_expectation(op: &CollectiveOperator, psi: &[f64]) -> f64 {
    op.matrix().triplets().map(|(i, j, v)| psi[i] * v.re * psi[j]).sum()
}

/// Per-time ensemble means and standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `mean[o][k]` for observable `o` at time `k`.
    pub mean: Vec<Vec<f64>>,
    /// Sample standard deviation over `√n`; zero for a single trajectory.
    pub std_err: Vec<Vec<f64>>,
    pub n_traj: usize,
}

impl EnsembleResult {
    /// Reduce `samples[traj][k][o]` in trajectory order.
    pub fn from_samples(times: Vec<f64>, labels: Vec<String>, samples: &[Vec<Vec<f64>>]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::Domain("ensemble needs at least one trajectory".into()));
        }
        let (nt, no) = (times.len(), labels.len());
        if samples.iter().any(|s| s.len() != nt || s.iter().any(|row| row.len() != no)) {
            return Err(Error::Shape("trajectory samples do not match the time grid".into()));
        }
        let mut mean = vec![vec![0.0; nt]; no];
        let mut std_err = vec![vec![0.0; nt]; no];
        for o in 0..no {
            for k in 0..nt {
                let m = samples.iter().map(|s| s[k][o]).sum::<f64>() / n as f64;
                mean[o][k] = m;
                if n > 1 {
                    let var = samples.iter().map(|s| (s[k][o] - m).powi(2)).sum::<f64>() / (n - 1) as f64;
                    std_err[o][k] = (var / n as f64).sqrt();
                }
            }
        }
        Ok(Self {
            times,
            labels,
            mean,
            std_err,
            n_traj: n,
        })
    }
}

/// Sequential ensemble of `n_traj` trajectories sampling `observables`.
pub fn run_ensemble(
    model: &TrajectoryModel,
    n_traj: usize,
    sample_times: &[f64],
    observables: &[CollectiveOperator],
    master_seed: u64,
    options: &McwfOptions,
) -> Result<EnsembleResult> {
    for op in observables {
        if **op.basis() != **model.basis() {
            return Err(Error::Shape(format!("`{}` is not on the trajectory basis", op.label())));
        }
        if !op.is_hermitian(1e-12) {
            return Err(Error::Precondition(format!("`{}` is not Hermitian", op.label())));
        }
    }
    let mut samples = Vec::with_capacity(n_traj);
    for index in 0..n_traj {
        let mut rows = vec![Vec::new(); sample_times.len()];
        run_trajectory(model, master_seed, index as u64, sample_times, options, |k, _, psi| {
            rows[k] = observables.iter().map(|op| real_expectation(op, psi)).collect();
            Ok(())
        })?;
        samples.push(rows);
    }
    EnsembleResult::from_samples(
        sample_times.to_vec(),
        observables.iter().map(|o| String::from(o.label())).collect(),
        &samples,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::{evolve, initial_state, EvolveOptions, InitialState, Representation};
    use crate::operators::hermitian_components;

    fn model(n: usize, w: f64, g: f64) -> TrajectoryModel {
        TrajectoryModel::new(&ModelParams::new(n, w, g).unwrap()).unwrap()
    }

    #[test]
    fn rate_operator_is_positive() {
        let m = model(2, 1.3, 0.7);
        let h = m.nh_hamiltonian().unwrap();
        let ih = h.matrix().to_dense().map(|z| z * C64::new(0.0, 1.0));
        assert!(ih.iter().all(|z| z.im == 0.0));
        let ev = ih.map(|z| z.re).symmetric_eigenvalues();
        assert!(ev.iter().all(|v| *v >= -1e-12));
    }

    #[test]
    fn single_atom_norm_decays_at_pump_rate() {
        let w = 0.8;
        let m = model(1, w, 1.0);
        let opts = McwfOptions::default();
        let mut s = m.initial_state(trajectory_rng(1, 0));
        s.threshold = 0.0;
        let mut steps = 0;
        for t in [0.25, 0.5, 1.0, 2.0] {
            m.advance(&mut s, t, &opts, &mut steps).unwrap();
            assert!((s.norm_sqr() - (-w * t).exp()).abs() < 1e-9, "{t}");
        }
    }

    #[test]
    fn no_state_is_dark_to_both_cavities() {
        for n in 1..=4 {
            let m = model(n, 1.0, 1.0);
            let min = m.rate_operator().to_dense().symmetric_eigenvalues().min();
            assert!((min - n as f64).abs() < 1e-10, "N={n}: {min}");
        }
    }

    #[test]
    fn dark_state_is_unchanged() {
        // Without decay, all atoms excited is dark: J+ψ = 0.
        let n = 3;
        let m = model(n, 1.0, 0.0);
        let idx = m
            .basis()
            .index_of(&crate::basis::OccupationState([0, 0, n as u32, 0]))
            .unwrap();
        let mut s = m.initial_state(trajectory_rng(0, 0));
        s.psi = vec![0.0; m.basis().len()];
        s.psi[idx] = 1.0;
        let before = s.psi.clone();
        m.step(&mut s, 0.1, &McwfOptions::default()).unwrap();
        assert_eq!(s.psi, before);
        assert_eq!(m.loss_rate(&s.psi), 0.0);
    }

    #[test]
    fn norm_never_increases() {
        let m = model(3, 2.0, 1.0);
        let opts = McwfOptions::default();
        let mut s = m.initial_state(trajectory_rng(3, 0));
        let mut rng = trajectory_rng(4, 0);
        let mut prev = s.norm_sqr();
        for _ in 0..20_000 {
            if s.norm_sqr() < 1e-3 {
                s.psi = s.normalized();
                prev = 1.0;
            }
            m.step(&mut s, uniform(&mut rng) * 0.05, &opts).unwrap();
            let now = s.norm_sqr();
            assert!(now <= prev * (1.0 + 1e-15));
            prev = now;
        }
    }

    #[test]
    fn oversized_step_is_halved() {
        let m = model(2, 5.0, 1.0);
        let opts = McwfOptions::default();
        let mut s = m.initial_state(trajectory_rng(0, 0));
        let taken = m.step(&mut s, 10.0, &opts).unwrap();
        assert!(taken < 10.0);
        assert!(1.0 - s.norm_sqr() <= opts.max_norm_loss);
    }

    #[test]
    fn single_atom_cycle() {
        let m = model(1, 1.0, 1.0);
        let opts = McwfOptions::default();
        // |g,l> -> |e,l> -> |g,r> -> |e,r> -> |g,l>
        let idx = |st: [u32; 4]| m.basis().index_of(&crate::basis::OccupationState(st)).unwrap();
        let cycle = [idx([1, 0, 0, 0]), idx([0, 0, 1, 0]), idx([0, 1, 0, 0]), idx([0, 0, 0, 1])];
        let times: Vec<f64> = (1..=500).map(|k| 0.1 * k as f64).collect();
        let mut seen = Vec::new();
        let s = run_trajectory(&m, 11, 0, &times, &opts, |_, t, psi| {
            seen.push((t, psi.to_vec()));
            Ok(())
        })
        .unwrap();
        assert!(s.jump_log.len() > 10);
        for (k, jump) in s.jump_log.iter().enumerate() {
            let expect = if k % 2 == 0 { Channel::Pump } else { Channel::Decay };
            assert_eq!(jump.channel, expect);
            assert!(jump.crossing_error.abs() <= opts.jump_tol);
        }
        for (t, psi) in &seen {
            let jumps = s.jump_log.iter().filter(|j| j.time <= *t).count();
            assert!((psi[cycle[jumps % 4]].abs() - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn jump_counts_stay_balanced() {
        let n = 4;
        let m = model(n, 3.0, 1.0);
        let mut s = m.initial_state(trajectory_rng(5, 2));
        let mut steps = 0;
        m.advance(&mut s, 20.0, &McwfOptions::default(), &mut steps).unwrap();
        let pumps = s.jump_log.iter().filter(|j| j.channel == Channel::Pump).count() as i64;
        let decays = s.jump_log.len() as i64 - pumps;
        assert!(pumps > 50);
        // Each pump adds one excitation and each decay removes one.
        assert!((0..=n as i64).contains(&(pumps - decays)));
        assert!(s.jump_log.iter().all(|j| j.crossing_error.abs() <= 1e-9));
    }

    #[test]
    fn impossible_jump_is_reported() {
        let m = model(1, 1.0, 1.0);
        let mut s = m.initial_state(trajectory_rng(0, 0));
        s.psi = vec![0.0; 4];
        s.threshold = 0.5;
        assert!(matches!(
            m.maybe_jump(&mut s, 0.5, &McwfOptions::default()),
            Err(Error::ImpossibleJump { .. })
        ));
    }

    #[test]
    fn seeds_determine_jump_logs() {
        let m = model(3, 1.0, 1.0);
        let opts = McwfOptions::default();
        let times = [1.0, 2.0, 3.0];
        let a = run_trajectory(&m, 42, 3, &times, &opts, |_, _, _| Ok(())).unwrap();
        let b = run_trajectory(&m, 42, 3, &times, &opts, |_, _, _| Ok(())).unwrap();
        let c = run_trajectory(&m, 42, 4, &times, &opts, |_, _, _| Ok(())).unwrap();
        assert_eq!(a.jump_log, b.jump_log);
        assert_eq!(a.psi, b.psi);
        assert_ne!(a.jump_log, c.jump_log);
    }

    #[test]
    fn uniform_draws_are_open_interval() {
        let mut rng = trajectory_rng(0, 0);
        for _ in 0..10_000 {
            let u = uniform(&mut rng);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn default_duration() {
        let p = ModelParams::new(10, 0.5, 1.0).unwrap();
        assert!((default_t_final(&p).unwrap() - 4.0).abs() < 1e-15);
        let p = ModelParams::new(10, 5.0, 1.0).unwrap();
        assert!((default_t_final(&p).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_reduction() {
        let samples = vec![vec![vec![1.0], vec![2.0]], vec![vec![3.0], vec![2.0]]];
        let r = EnsembleResult::from_samples(vec![0.0, 1.0], vec!["x".into()], &samples).unwrap();
        assert_eq!(r.mean[0], vec![2.0, 2.0]);
        assert!((r.std_err[0][0] - 1.0).abs() < 1e-15);
        assert_eq!(r.std_err[0][1], 0.0);
    }

    #[test]
    fn ensemble_tracks_master_equation() {
        let n = 2;
        let p = ModelParams::new(n, 2.0, 1.0).unwrap();
        let m = TrajectoryModel::new(&p).unwrap();
        let jp = build_ladder(Ladder::JPlus, m.basis()).unwrap();
        let (_, _, jz) = hermitian_components(&jp).unwrap();
        let times: Vec<f64> = (1..=5).map(|k| 0.3 * k as f64).collect();
        let ens = run_ensemble(&m, 300, &times, &[jz.clone()], 7, &McwfOptions::default()).unwrap();
        let InitialState::Full(rho0) = initial_state(n, Representation::FullLr).unwrap() else {
            unreachable!()
        };
        let opts = EvolveOptions {
            checkpoints: times.clone(),
            ..EvolveOptions::default()
        };
        let exact = evolve(&rho0, &p, *times.last().unwrap(), &opts).unwrap();
        for (k, (_, rho)) in exact.checkpoints.iter().enumerate() {
            let want = rho.expectation(&jz).unwrap().re;
            let got = ens.mean[0][k];
            let se = ens.std_err[0][k];
            assert!((got - want).abs() <= 4.0 * se, "t={} {got} vs {want} ± {se}", times[k]);
        }
    }
}
