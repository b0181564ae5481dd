//! Algebraic entropies against explicit partial traces on the `4^N` product space.

use std::sync::Arc;

use nalgebra::DMatrix;
use superrad_core::basis::{Flavor, SymmetricBasis};
use superrad_core::entropy::{vn_entropy, LayerDecomposition, Subsystem};
use superrad_core::liouvillian::{steady_state_full, BlockModel, DensityMatrix, ModelParams};
use superrad_core::math::ln_factorial;
use superrad_core::C64;

/// Columns are the symmetric basis states written on `4^N` atom sequences.
fn embedding(basis: &SymmetricBasis) -> DMatrix<f64> {
    let n = basis.n_atoms();
    let dim = 4usize.pow(n as u32);
    let mut e = DMatrix::zeros(dim, basis.len());
    for seq in 0..dim {
        let mut occ = [0u32; 4];
        let mut s = seq;
        for _ in 0..n {
            occ[s % 4] += 1;
            s /= 4;
        }
        let col = basis
            .states()
            .iter()
            .position(|st| st.0 == occ)
            .expect("every sequence has an occupation state");
        let ln_multinomial =
            ln_factorial(n as u64) - occ.iter().map(|&k| ln_factorial(u64::from(k))).sum::<f64>();
        e[(seq, col)] = (-0.5 * ln_multinomial).exp();
    }
    e
}

/// Reduced density of the spin (`keep_spin`) or momentum label of every atom.
fn partial_trace(rho: &DMatrix<C64>, n: usize, keep_spin: bool) -> DMatrix<C64> {
    let split = |seq: usize| {
        let (mut kept, mut traced) = (0, 0);
        let mut s = seq;
        for a in 0..n {
            let mode = s % 4;
            s /= 4;
            // l/r ordering: mode = 2·spin + momentum
            let (spin, mom) = (mode >> 1, mode & 1);
            let (k, t) = if keep_spin { (spin, mom) } else { (mom, spin) };
            kept |= k << a;
            traced |= t << a;
        }
        (kept, traced)
    };
    let d = 1usize << n;
    let mut out = DMatrix::<C64>::zeros(d, d);
    let dim = rho.nrows();
    let labels: Vec<(usize, usize)> = (0..dim).map(split).collect();
    for r in 0..dim {
        for c in 0..dim {
            if labels[r].1 == labels[c].1 {
                out[(labels[r].0, labels[c].0)] += rho[(r, c)];
            }
        }
    }
    out
}

fn check(rho: &DensityMatrix, tol: f64) {
    let basis = rho.basis().clone();
    let n = basis.n_atoms();
    let e = embedding(&basis).map(|x| C64::new(x, 0.0));
    let big = &e * rho.matrix() * e.transpose();
    let dec = LayerDecomposition::new(basis).unwrap();
    for (keep, spin) in [(Subsystem::J, true), (Subsystem::K, false)] {
        let direct = vn_entropy(&partial_trace(&big, n, spin)).unwrap();
        let layered = dec.algebraic_entropy(rho, keep).unwrap();
        assert!((direct - layered).abs() < tol, "N={n} {keep:?}: {direct} vs {layered}");
    }
    let full = vn_entropy(&big).unwrap();
    assert!((full - vn_entropy(rho.matrix()).unwrap()).abs() < tol);
}

fn lr(n: usize) -> Arc<SymmetricBasis> {
    Arc::new(SymmetricBasis::new(n, Flavor::MomentumLr).unwrap())
}

#[test]
fn steady_states_match_partial_traces() {
    for n in [2, 3, 4] {
        let model = BlockModel::new(n).unwrap();
        for ratio in [0.01, 0.5, 1.0, 10.0] {
            let params = ModelParams::new(n, ratio, 1.0).unwrap();
            let ss = steady_state_full(&model, &params).unwrap();
            check(&ss.rho_lr, 1e-9);
        }
    }
}

#[test]
fn random_mixed_states_match_partial_traces() {
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for n in [1, 2, 3, 5] {
        let basis = lr(n);
        let d = basis.len();
        let a = DMatrix::<C64>::from_fn(d, d, |_, _| C64::new(next(), next()));
        let m = &a * a.adjoint();
        let rho = &m / m.trace();
        check(&DensityMatrix::new(basis, rho).unwrap(), 1e-9);
    }
}
