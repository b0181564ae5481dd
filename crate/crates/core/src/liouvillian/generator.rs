use alloc::format;
use alloc::sync::Arc;

use nalgebra::DMatrix;

use super::density::DensityMatrix;
use super::params::ModelParams;
use crate::basis::SymmetricBasis;
use crate::operators::{build_ladder, CollectiveOperator, Ladder};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// `D[O]ρ = OρO† - (O†Oρ + ρO†O)/2`.
pub fn dissipator_apply(op: &CollectiveOperator, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let d = op.dim();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::Shape(format!(
            "state {}x{} for operator of dimension {d}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let o = op.matrix();
    let oh = o.adjoint();
    let ohoh = oh.matmul(o)?;
    let jump = oh.left_mul_dense(&o.mul_dense(rho));
    let anti = ohoh.mul_dense(rho) + ohoh.left_mul_dense(rho);
    Ok(jump - anti * C64::new(0.5, 0.0))
}

/// Sparse pieces of `ℒρ = W D[J+]ρ + Γc D[E-]ρ` on one basis.
#[derive(Debug, Clone)]
pub struct Generator {
    basis: Arc<SymmetricBasis>,
    pump: f64,
    decay: f64,
    j_plus: CsrMatrix<C64>,
    j_minus: CsrMatrix<C64>,
    e_minus: CsrMatrix<C64>,
    e_plus: CsrMatrix<C64>,
    // W J-J+ + Γc E+E-
    loss: CsrMatrix<C64>,
}

impl Generator {
    pub fn new(params: &ModelParams, basis: &Arc<SymmetricBasis>) -> Result<Self> {
        if basis.n_atoms() != params.n_atoms() {
            return Err(Error::Shape("parameters and basis disagree on N".into()));
        }
        let jp = build_ladder(Ladder::JPlus, basis)?;
        let em = build_ladder(Ladder::EMinus, basis)?;
        let j_plus = jp.matrix().clone();
        let j_minus = j_plus.adjoint();
        let e_minus = em.matrix().clone();
        let e_plus = e_minus.adjoint();
        let loss = j_minus.matmul(&j_plus)?.lin_comb(
            C64::new(params.pump(), 0.0),
            &e_plus.matmul(&e_minus)?,
            C64::new(params.decay(), 0.0),
        )?;
        Ok(Self {
            basis: basis.clone(),
            pump: params.pump(),
            decay: params.decay(),
            j_plus,
            j_minus,
            e_minus,
            e_plus,
            loss,
        })
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    /// `W J-J+ + Γc E+E-`, the total jump-rate operator.
    pub fn loss_operator(&self) -> &CsrMatrix<C64> {
        &self.loss
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = self.j_minus.left_mul_dense(&self.j_plus.mul_dense(rho)) * C64::new(self.pump, 0.0);
        out += self.e_plus.left_mul_dense(&self.e_minus.mul_dense(rho)) * C64::new(self.decay, 0.0);
        out -= (self.loss.mul_dense(rho) + self.loss.left_mul_dense(rho)) * C64::new(0.5, 0.0);
        out
    }
}

/// `ℒρ = W D[J+]ρ + Γc D[E-]ρ` on the state's own basis.
pub fn liouvillian_apply(params: &ModelParams, rho: &DensityMatrix) -> Result<DMatrix<C64>> {
    Ok(Generator::new(params, rho.basis())?.apply(rho.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::density::max_norm;
    use crate::basis::Flavor;
    use proptest::prelude::*;

    fn lr(n: usize) -> Arc<SymmetricBasis> {
        Arc::new(SymmetricBasis::new(n, Flavor::MomentumLr).unwrap())
    }

    fn projector(d: usize, i: usize) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(d, d);
        m[(i, i)] = C64::new(1.0, 0.0);
        m
    }

    #[test]
    fn identity_dissipator_vanishes() {
        let b = lr(2);
        let id = CollectiveOperator::identity(b.clone());
        let rho = projector(10, 3);
        assert_eq!(max_norm(&dissipator_apply(&id, &rho).unwrap()), 0.0);
    }

    #[test]
    fn single_atom_pumping_and_decay() {
        let b = lr(1);
        let jp = build_ladder(Ladder::JPlus, &b).unwrap();
        let out = dissipator_apply(&jp, &projector(4, 0)).unwrap();
        let expect = projector(4, 2) - projector(4, 0);
        assert!(max_norm(&(out - expect)) < 1e-15);

        let em = build_ladder(Ladder::EMinus, &b).unwrap();
        let out = dissipator_apply(&em, &projector(4, 2)).unwrap();
        let expect = projector(4, 1) - projector(4, 2);
        assert!(max_norm(&(out - expect)) < 1e-15);
    }

    fn random_hermitian(d: usize, seed: u64) -> DMatrix<C64> {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let m = DMatrix::from_fn(d, d, |_, _| C64::new(next(), next()));
        &m + m.adjoint()
    }

    proptest! {
        #[test]
        fn trace_preservation(seed in 0u64..1000, n in 1usize..5, w in 0.01f64..100.0) {
            let b = lr(n);
            let p = ModelParams::new(n, w, 1.0).unwrap();
            let g = Generator::new(&p, &b).unwrap();
            let rho = random_hermitian(b.len(), seed);
            let out = g.apply(&rho);
            let scale = rho.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(out.trace().norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn zero_pump_and_decay_is_rejected_upstream() {
        assert!(ModelParams::new(2, 0.0, 0.0).is_err());
    }

    #[test]
    fn generator_matches_dissipators() {
        let b = lr(3);
        let p = ModelParams::new(3, 0.7, 1.3).unwrap();
        let rho = random_hermitian(b.len(), 5);
        let jp = build_ladder(Ladder::JPlus, &b).unwrap();
        let em = build_ladder(Ladder::EMinus, &b).unwrap();
        let expect = dissipator_apply(&jp, &rho).unwrap() * C64::new(0.7, 0.0)
            + dissipator_apply(&em, &rho).unwrap() * C64::new(1.3, 0.0);
        let got = Generator::new(&p, &b).unwrap().apply(&rho);
        assert!(max_norm(&(got - expect)) < 1e-13);
    }
}
