//! Exact lifts of per-particle momentum mixings to the symmetric subspace.
//!
//! A mixing replaces the creation operators of one internal manifold by
//! `b_k† = Σ_t s[t][k] b'_t† / √2` with `s[t][k] ∈ {-1, 0, 1}`. Expanding
//! `(b_0†)^a (b_1†)^c` gives integer (Kravchuk-type) coefficients, which are
//! summed exactly before a single floating-point rescale.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;


use crate::basis::{Flavor, OccupationState, SymmetricBasis};
use crate::math::binomial_u128;
use crate::operators::CollectiveOperator;
use crate::sparse::{CsrMatrix, Scalar};
use crate::{Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Sign pattern `s[target][source]` of a 2×2 mixing scaled by `√2`.
pub type Signs = [[i8; 2]; 2];

/// Independent momentum mixings of the ground and excited manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoModeMixing {
    pub ground: Signs,
    pub excited: Signs,
}

impl TwoModeMixing {
    /// `|l> = (|+> - |->)/√2`, `|r> = (|+> + |->)/√2` on both manifolds.
    pub const LR_TO_PM: Self = Self {
        ground: [[-1, 1], [1, 1]],
        excited: [[-1, 1], [1, 1]],
    };

    /// `exp[-i(U_y - V_y)π/2]`, where `U` and `V` rotate the momentum of the
    /// excited and ground manifolds respectively.
    pub const ACCELERATION_FRAME: Self = Self {
        ground: [[1, -1], [1, 1]],
        excited: [[1, 1], [-1, 1]],
    };
}

/// Integer coefficient of `x^p y^(a+c-p)` in `(s00 x + s10 y)^a (s01 x + s11 y)^c`.
fn mixing_coefficient(a: u32, c: u32, p: u32, s: Signs) -> i128 {
    let pow = |base: i8, e: u32| -> i128 { i128::from(base).pow(e) };
    let lo = p.saturating_sub(c);
    let hi = a.min(p);
    let mut acc: i128 = 0;
    for i in lo..=hi {
        let ca = binomial_u128(u64::from(a), u64::from(i)).expect("small binomial") as i128;
        let cc = binomial_u128(u64::from(c), u64::from(p - i)).expect("small binomial") as i128;
        acc += ca
            * cc
            * pow(s[0][0], i)
            * pow(s[1][0], a - i)
            * pow(s[0][1], p - i)
            * pow(s[1][1], c + i - p);
    }
    acc
}

/// Amplitudes `T[a][p] = <p, n-p| R |a, n-a>` for a two-mode mixing on `n` bosons.
pub fn two_mode_amplitudes(n: u32, s: Signs) -> Vec<Vec<f64>> {
    let scale = 2f64.powf(-(n as f64) / 2.0);
    let nn = u64::from(n);
    (0..=n)
        .map(|a| {
            let ca = binomial_u128(nn, u64::from(a)).expect("small binomial") as f64;
            (0..=n)
                .map(|p| {
                    let cp = binomial_u128(nn, u64::from(p)).expect("small binomial") as f64;
                    let k = mixing_coefficient(a, n - a, p, s);
                    k as f64 * (ca / cp).sqrt() * scale
                })
                .collect()
        })
        .collect()
}

/// A [`TwoModeMixing`] lifted to `N` atoms, applied without forming the matrix.
#[derive(Debug, Clone)]
pub struct MixingLift {
    n_atoms: usize,
    ground: Vec<Vec<Vec<f64>>>,
    excited: Vec<Vec<Vec<f64>>>,
}

impl MixingLift {
    pub fn new(n_atoms: usize, mixing: TwoModeMixing) -> Self {
        let tables = |s| (0..=n_atoms as u32).map(|n| two_mode_amplitudes(n, s)).collect();
        Self {
            n_atoms,
            ground: tables(mixing.ground),
            excited: tables(mixing.excited),
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    fn check(&self, basis: &SymmetricBasis, len: usize) -> Result<()> {
        if basis.n_atoms() != self.n_atoms || basis.len() != len {
            return Err(Error::Shape("vector does not match the lifted mixing".into()));
        }
        Ok(())
    }

    /// Apply the lift to a coordinate vector. Input and output share the
    /// occupation ordering of `basis`.
    pub fn apply<T: Scalar>(&self, basis: &SymmetricBasis, psi: &[T]) -> Result<Vec<T>> {
        self.check(basis, psi.len())?;
        // Mix the ground pair, then the excited pair; each pass only touches
        // states sharing the other pair's occupations.
        let mid = self.pass(basis, psi, 0)?;
        self.pass(basis, &mid, 2)
    }

    fn pass<T: Scalar>(&self, basis: &SymmetricBasis, psi: &[T], first: usize) -> Result<Vec<T>> {
        let tables = if first == 0 { &self.ground } else { &self.excited };
        let mut out = vec![T::zero(); psi.len()];
        for (i, st) in basis.states().iter().enumerate() {
            let amp = psi[i];
            if amp == T::zero() {
                continue;
            }
            let a = st.0[first];
            let n = a + st.0[first + 1];
            let row = &tables[n as usize][a as usize];
            for (p, &t) in row.iter().enumerate() {
                if t == 0.0 {
                    continue;
                }
                let mut target = *st;
                target.0[first] = p as u32;
                target.0[first + 1] = n - p as u32;
                let j = basis.index_of(&target).expect("pair mixing conserves totals");
                out[j] += amp * T::from_real(t);
            }
        }
        Ok(out)
    }

    /// Explicit sparse matrix of the lift (rows: output coordinates).
    pub fn matrix(&self, basis: &SymmetricBasis) -> Result<CsrMatrix<f64>> {
        if basis.n_atoms() != self.n_atoms {
            return Err(Error::Shape("basis does not match the lifted mixing".into()));
        }
        let mut triplets = Vec::new();
        for (col, st) in basis.states().iter().enumerate() {
            let [a, c, e, f] = st.0;
            let (ng, ne) = (a + c, e + f);
            let g_row = &self.ground[ng as usize][a as usize];
            let e_row = &self.excited[ne as usize][e as usize];
            for (p, &tg) in g_row.iter().enumerate() {
                if tg == 0.0 {
                    continue;
                }
                for (q, &te) in e_row.iter().enumerate() {
                    if te == 0.0 {
                        continue;
                    }
                    let target = OccupationState([p as u32, ng - p as u32, q as u32, ne - q as u32]);
                    let row = basis.index_of(&target).expect("pair mixing conserves totals");
                    triplets.push((row, col, tg * te));
                }
            }
        }
        let d = basis.len();
        Ok(CsrMatrix::from_triplets(d, d, triplets))
    }
}

/// The unitary relating `l/r` and `±` flavor coordinates: `ψ_pm = U ψ_lr`.
#[derive(Debug, Clone)]
pub struct BasisRotation {
    lr: Arc<SymmetricBasis>,
    pm: Arc<SymmetricBasis>,
    matrix: CsrMatrix<f64>,
}

/// Build the flavor-change unitary for `N` atoms.
pub fn basis_rotation(n_atoms: usize) -> Result<BasisRotation> {
    let lr = Arc::new(SymmetricBasis::new(n_atoms, Flavor::MomentumLr)?);
    let pm = Arc::new(SymmetricBasis::new(n_atoms, Flavor::MomentumPm)?);
    let matrix = MixingLift::new(n_atoms, TwoModeMixing::LR_TO_PM).matrix(&lr)?;
    Ok(BasisRotation { lr, pm, matrix })
}

impl BasisRotation {
    pub fn lr_basis(&self) -> &Arc<SymmetricBasis> {
        &self.lr
    }

    pub fn pm_basis(&self) -> &Arc<SymmetricBasis> {
        &self.pm
    }

    pub fn matrix(&self) -> &CsrMatrix<f64> {
        &self.matrix
    }

    pub fn to_pm_vector(&self, psi_lr: &[C64]) -> Vec<C64> {
        self.matrix.to_complex().mul_vec(psi_lr)
    }

    pub fn to_lr_vector(&self, psi_pm: &[C64]) -> Vec<C64> {
        self.matrix.transpose().to_complex().mul_vec(psi_pm)
    }

    /// `U A U†` for an operator on the `l/r` basis.
    pub fn to_pm(&self, op: &CollectiveOperator) -> Result<CollectiveOperator> {
        self.conjugate(op, &self.lr, &self.pm, false)
    }

    /// `U† A U` for an operator on the `±` basis.
    pub fn to_lr(&self, op: &CollectiveOperator) -> Result<CollectiveOperator> {
        self.conjugate(op, &self.pm, &self.lr, true)
    }

    fn conjugate(
        &self,
        op: &CollectiveOperator,
        from: &Arc<SymmetricBasis>,
        to: &Arc<SymmetricBasis>,
        inverse: bool,
    ) -> Result<CollectiveOperator> {
        if **op.basis() != **from {
            return Err(Error::Shape(format!(
                "`{}` is not on the expected source basis",
                op.label()
            )));
        }
        let u = self.matrix.to_complex();
        let (left, right) = if inverse {
            (u.transpose(), u)
        } else {
            let ut = u.transpose();
            (u, ut)
        };
        let m = left.matmul(op.matrix())?.matmul(&right)?;
        let tol = crate::operators::ZERO_TOL * m.max_abs().max(1.0);
        CollectiveOperator::new(to.clone(), m.pruned(tol), op.label(), op.is_hermitian_flagged())
    }

    /// `U† ρ U` for a dense `±` flavor matrix.
    pub fn dense_to_lr(&self, rho_pm: &nalgebra::DMatrix<C64>) -> nalgebra::DMatrix<C64> {
        let u = self.matrix.to_dense().map(|x| C64::new(x, 0.0));
        u.transpose() * rho_pm * u
    }

    /// `U ρ U†` for a dense `l/r` flavor matrix.
    pub fn dense_to_pm(&self, rho_lr: &nalgebra::DMatrix<C64>) -> nalgebra::DMatrix<C64> {
        let u = self.matrix.to_dense().map(|x| C64::new(x, 0.0));
        &u * rho_lr * u.transpose()
    }
}
