//! Quantum Fisher information of pure states over the 15 collective
//! generators that leave the atom number fixed, and the fixed rotation that
//! maps the optimal interferometric generator onto the momentum inversion.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::{SMatrix, SVector, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{lr, Flavor, SymmetricBasis};
use crate::math::ln_factorial;
use crate::operators::{build_ladder, hermitian_components, CollectiveOperator, Ladder};
use crate::rotation::{MixingLift, TwoModeMixing};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Number of generators.
pub const N_GENERATORS: usize = 15;
/// Allowed deviation of `<ψ|ψ>` from one.
pub const NORM_TOL: f64 = 1e-10;
/// Relative gap below which eigenvalues count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Components smaller than this are treated as zero by the sign rule.
const SIGN_TOL: f64 = 1e-10;

pub type Qfim = SMatrix<f64, N_GENERATORS, N_GENERATORS>;
pub type Coefficients = SVector<f64, N_GENERATORS>;

pub const LABELS: [&str; N_GENERATORS] = [
    "Q_x", "Q_y", "Q_z", "Sigma_x", "Sigma_y", "Sigma_z", "M_x", "M_y", "N_x", "N_y", "P_z",
    "U_x", "U_y", "V_x", "V_y",
];

const Q_Z: usize = 2;
const SIGMA_Z: usize = 5;
const U_X: usize = 11;
const V_X: usize = 13;

/// The ordered generator set on an `l/r` basis.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    basis: Arc<SymmetricBasis>,
    ops: Vec<CollectiveOperator>,
}

impl GeneratorBasis {
    pub fn new(basis: Arc<SymmetricBasis>) -> Result<Self> {
        if basis.flavor() != Flavor::MomentumLr {
            return Err(Error::Config("generator basis requires the l/r flavor".into()));
        }
        let comps = |l: Ladder| hermitian_components(&build_ladder(l, &basis)?);
        let (qx, qy, qz) = comps(Ladder::QPlus)?;
        let (sx, sy, sz) = comps(Ladder::SigmaPlus)?;
        let (mx, my, mz) = comps(Ladder::CalMPlus)?;
        let (nx, ny, nz) = comps(Ladder::CalNPlus)?;
        let (ux, uy, _) = comps(Ladder::UPlus)?;
        let (vx, vy, _) = comps(Ladder::VPlus)?;
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let pz = mz.lin_comb(C64::new(r, 0.0), &nz, C64::new(-r, 0.0))?;
        let mut ops = Vec::with_capacity(N_GENERATORS);
        for (op, label) in [qx, qy, qz, sx, sy, sz, mx, my, nx, ny, pz, ux, uy, vx, vy]
            .into_iter()
            .zip(LABELS)
        {
            ops.push(op.with_label(label));
        }
        Ok(Self { basis, ops })
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    pub fn ops(&self) -> &[CollectiveOperator] {
        &self.ops
    }

    /// `Σ c_μ G_μ`.
    pub fn combine(&self, c: &Coefficients, label: impl Into<String>) -> Result<CollectiveOperator> {
        let mut acc = self.ops[0].scale(C64::new(c[0], 0.0));
        for (op, &w) in self.ops.iter().zip(c.iter()).skip(1) {
            acc = acc.lin_comb(C64::new(1.0, 0.0), op, C64::new(w, 0.0))?;
        }
        Ok(acc.with_label(label))
    }

    /// Unit coefficients of `K_z/√2 = (Q_z - Σ_z)/√2`.
    pub fn acceleration_direction() -> Coefficients {
        let mut c = Coefficients::zeros();
        c[Q_Z] = core::f64::consts::FRAC_1_SQRT_2;
        c[SIGMA_Z] = -core::f64::consts::FRAC_1_SQRT_2;
        c
    }

    /// Unit coefficients of `(U_x - V_x)/√2`.
    pub fn interferometer_direction() -> Coefficients {
        let mut c = Coefficients::zeros();
        c[U_X] = core::f64::consts::FRAC_1_SQRT_2;
        c[V_X] = -core::f64::consts::FRAC_1_SQRT_2;
        c
    }
}

/// QFI matrix with its leading eigenpair and the optimal generator.
#[derive(Debug, Clone)]
pub struct QfimResult {
    pub f: Qfim,
    pub lambda_max: f64,
    pub v_max: Coefficients,
    pub generator: CollectiveOperator,
}

fn check_normalized(psi: &[C64]) -> Result<()> {
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Precondition(format!("state norm² {norm} is not 1")));
    }
    Ok(())
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `F_μν = 2<{G_μ, G_ν}> - 4<G_μ><G_ν>` on a normalized pure state.
pub fn qfi_matrix(generators: &GeneratorBasis, psi: &[C64]) -> Result<Qfim> {
    if psi.len() != generators.basis.len() {
        return Err(Error::Shape("state does not match the generator basis".into()));
    }
    check_normalized(psi)?;
    let images: Vec<Vec<C64>> = generators.ops.iter().map(|g| g.matrix().mul_vec(psi)).collect();
    let means: Vec<f64> = images.iter().map(|v| dot(psi, v).re).collect();
    let mut f = Qfim::zeros();
    for mu in 0..N_GENERATORS {
        for nu in mu..N_GENERATORS {
            let v = 4.0 * dot(&images[mu], &images[nu]).re - 4.0 * means[mu] * means[nu];
            f[(mu, nu)] = v;
            f[(nu, mu)] = v;
        }
    }
    Ok(f)
}

/// Largest eigenvalue and a deterministic unit eigenvector.
///
/// In a degenerate top eigenspace the vector with the largest single entry is
/// chosen (lowest index on ties); the first nonzero entry is made positive.
pub fn leading_eigenpair(f: &Qfim) -> (f64, Coefficients) {
    let eig = SymmetricEigen::new(*f);
    let lambda = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = DEGENERACY_TOL * lambda.abs().max(1.0);
    let top: Vec<Coefficients> = (0..N_GENERATORS)
        .filter(|&i| eig.eigenvalues[i] >= lambda - tol)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let mut v = top[0];
    if top.len() > 1 {
        let mut best = -1.0;
        for mu in 0..N_GENERATORS {
            let mut p = Coefficients::zeros();
            for t in &top {
                p += t * t[mu];
            }
            let n = p.norm();
            if n > best + SIGN_TOL {
                best = n;
                v = p / n;
            }
        }
    }
    if let Some(&first) = v.iter().find(|x| x.abs() > SIGN_TOL) {
        if first < 0.0 {
            v = -v;
        }
    }
    (lambda, v)
}

/// QFI matrix, its leading eigenpair and the optimal generator `Σ v_μ G_μ`.
pub fn qfim(generators: &GeneratorBasis, psi: &[C64]) -> Result<QfimResult> {
    let f = qfi_matrix(generators, psi)?;
    let (lambda_max, v_max) = leading_eigenpair(&f);
    let generator = generators.combine(&v_max, "G_opt")?;
    Ok(QfimResult { f, lambda_max, v_max, generator })
}

/// `exp[-i(U_y - V_y)π/2]` on an `l/r` basis, with the momentum inversion `K_z`.
#[derive(Debug, Clone)]
pub struct AccelerationFrame {
    basis: Arc<SymmetricBasis>,
    lift: MixingLift,
    k_z: Vec<f64>,
}

impl AccelerationFrame {
    pub fn new(basis: Arc<SymmetricBasis>) -> Result<Self> {
        if basis.flavor() != Flavor::MomentumLr {
            return Err(Error::Config("acceleration frame requires the l/r flavor".into()));
        }
        let lift = MixingLift::new(basis.n_atoms(), TwoModeMixing::ACCELERATION_FRAME);
        let k_z = basis
            .states()
            .iter()
            .map(|s| {
                let r = s.0[lr::G_R] + s.0[lr::E_R];
                let l = s.0[lr::G_L] + s.0[lr::E_L];
                (f64::from(r) - f64::from(l)) / 2.0
            })
            .collect();
        Ok(Self { basis, lift, k_z })
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    /// Diagonal of `K_z`.
    pub fn k_z(&self) -> &[f64] {
        &self.k_z
    }

    pub fn rotate(&self, psi: &[C64]) -> Result<Vec<C64>> {
        self.lift.apply(&self.basis, psi)
    }

    /// The rotation as an explicit real matrix.
    pub fn matrix(&self) -> Result<CsrMatrix<f64>> {
        self.lift.matrix(&self.basis)
    }

    /// `U† O U`.
    pub fn pull_back(&self, op: &CollectiveOperator) -> Result<CollectiveOperator> {
        let u = self.matrix()?.map(|x| C64::new(x, 0.0));
        let m = u.adjoint().matmul(&op.matrix().matmul(&u)?)?;
        CollectiveOperator::new(
            self.basis.clone(),
            m,
            format!("U^dag {} U", op.label()),
            op.is_hermitian_flagged(),
        )
    }

    /// `4 Var(K_z/√2) = 2 Var(K_z)` on a normalized state.
    pub fn acceleration_qfi(&self, psi: &[C64]) -> Result<f64> {
        if psi.len() != self.k_z.len() {
            return Err(Error::Shape("state does not match the frame basis".into()));
        }
        check_normalized(psi)?;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (a, &k) in psi.iter().zip(&self.k_z) {
            let p = a.norm_sqr();
            m1 += p * k;
            m2 += p * k * k;
        }
        Ok(2.0 * (m2 - m1 * m1).max(0.0))
    }
}

/// One sample of the optimal-generator time series.
#[derive(Debug, Clone, PartialEq)]
pub struct QfiSample {
    pub time: f64,
    pub lambda_max: f64,
    pub v_max: Coefficients,
    pub f_accel: f64,
}

impl QfiSample {
    /// `λ_max - F_a`.
    pub fn gap(&self) -> f64 {
        self.lambda_max - self.f_accel
    }
}

/// Leading eigenpair and acceleration QFI of one normalized state.
pub fn qfi_sample(
    generators: &GeneratorBasis,
    frame: &AccelerationFrame,
    time: f64,
    psi: &[C64],
) -> Result<QfiSample> {
    let f = qfi_matrix(generators, psi)?;
    let (lambda_max, v_max) = leading_eigenpair(&f);
    let f_accel = frame.acceleration_qfi(&frame.rotate(psi)?)?;
    Ok(QfiSample { time, lambda_max, v_max, f_accel })
}

/// [`qfi_sample`] over a sequence of `(time, state)` pairs.
pub fn track_generator<'a>(
    generators: &GeneratorBasis,
    frame: &AccelerationFrame,
    samples: impl IntoIterator<Item = (f64, &'a [C64])>,
) -> Result<Vec<QfiSample>> {
    samples
        .into_iter()
        .map(|(t, psi)| qfi_sample(generators, frame, t, psi))
        .collect()
}

/// `|φ>^⊗N` for a single-particle state `φ` in `l/r` coordinates.
pub fn product_state(basis: &SymmetricBasis, phi: [C64; 4]) -> Vec<C64> {
    let n = basis.n_atoms() as u64;
    basis
        .states()
        .iter()
        .map(|s| {
            let ln_multinomial =
                ln_factorial(n) - s.0.iter().map(|&k| ln_factorial(u64::from(k))).sum::<f64>();
            let mut amp = C64::new((0.5 * ln_multinomial).exp(), 0.0);
            for (c, &k) in phi.iter().zip(&s.0) {
                amp *= c.powu(k);
            }
            amp
        })
        .collect()
}
