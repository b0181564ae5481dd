//! Null vectors of block-tridiagonal real matrices by top-down Schur elimination.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

/// Relative pivot size below which a Schur complement counts as singular.
pub const PIVOT_TOL: f64 = 1e-12;

/// `diag[e]` on the diagonal, `sub[e]` at `(e, e-1)`, `sup[e]` at `(e, e+1)`.
#[derive(Debug, Clone)]
pub struct BlockTridiagonal {
    pub diag: Vec<DMatrix<f64>>,
    pub sub: Vec<DMatrix<f64>>,
    pub sup: Vec<DMatrix<f64>>,
}

/// Which end layer the other layers are eliminated onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Eliminate from the top layer down onto layer 0.
    Down,
    /// Eliminate from layer 0 up onto the top layer.
    Up,
}

impl Sweep {
    /// Rounding in the complements grows like the population ratio between
    /// neighbouring layers, so the sweep runs toward the heavier end.
    pub fn for_rates(up_rate: f64, down_rate: f64) -> Self {
        if up_rate > down_rate {
            Sweep::Up
        } else {
            Sweep::Down
        }
    }
}

/// Result of eliminating all layers onto one end layer.
#[derive(Debug, Clone)]
pub struct Elimination {
    sweep: Sweep,
    /// In sweep order: `x_k = -t[k] x_{k-1}` for `k >= 1`; `t[0]` is empty.
    t: Vec<DMatrix<f64>>,
    /// Schur complement on the end layer.
    pub bottom: DMatrix<f64>,
}

/// A Schur complement was singular above the bottom layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularLayer {
    pub layer: usize,
    pub pivot_ratio: f64,
}

fn pivot_ratio(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let lu = m.clone().full_piv_lu();
    let u = lu.u();
    let n = u.nrows().min(u.ncols());
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let a = u[(i, i)].abs();
        lo = lo.min(a);
        hi = hi.max(a);
    }
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

impl BlockTridiagonal {
    pub fn layers(&self) -> usize {
        self.diag.len()
    }

    pub fn transpose(&self) -> Self {
        let n = self.diag.len();
        let diag = self.diag.iter().map(DMatrix::transpose).collect();
        let sub = (0..n)
            .map(|e| {
                if e == 0 {
                    DMatrix::zeros(0, 0)
                } else {
                    self.sup[e - 1].transpose()
                }
            })
            .collect();
        let sup = (0..n)
            .map(|e| {
                if e + 1 == n {
                    DMatrix::zeros(0, 0)
                } else {
                    self.sub[e + 1].transpose()
                }
            })
            .collect();
        Self { diag, sub, sup }
    }

    /// Same system with the layer order reversed.
    pub fn reversed(&self) -> Self {
        let n = self.diag.len();
        let diag = self.diag.iter().rev().cloned().collect();
        let sub = (0..n)
            .map(|k| if k == 0 { DMatrix::zeros(0, 0) } else { self.sup[n - 1 - k].clone() })
            .collect();
        let sup = (0..n)
            .map(|k| if k + 1 == n { DMatrix::zeros(0, 0) } else { self.sub[n - 1 - k].clone() })
            .collect();
        Self { diag, sub, sup }
    }

    /// Eliminate onto layer 0 (`Sweep::Down`) or onto the top layer (`Sweep::Up`).
    /// Reported singular layers use the natural layer index.
    pub fn eliminate(&self, sweep: Sweep) -> Result<Elimination, SingularLayer> {
        let mut el = match sweep {
            Sweep::Down => self.eliminate_down()?,
            Sweep::Up => self.reversed().eliminate_down().map_err(|s| SingularLayer {
                layer: self.diag.len() - 1 - s.layer,
                ..s
            })?,
        };
        el.sweep = sweep;
        Ok(el)
    }

    fn eliminate_down(&self) -> Result<Elimination, SingularLayer> {
        let n = self.diag.len();
        let mut t = alloc::vec![DMatrix::zeros(0, 0); n];
        let mut s = self.diag[n - 1].clone();
        for e in (1..n).rev() {
            let ratio = pivot_ratio(&s);
            if ratio <= PIVOT_TOL {
                return Err(SingularLayer {
                    layer: e,
                    pivot_ratio: ratio,
                });
            }
            let lu = s.full_piv_lu();
            let te = lu.solve(&self.sub[e]).ok_or(SingularLayer {
                layer: e,
                pivot_ratio: 0.0,
            })?;
            s = &self.diag[e - 1] - &self.sup[e - 1] * &te;
            t[e] = te;
        }
        Ok(Elimination {
            sweep: Sweep::Down,
            t,
            bottom: s,
        })
    }

    /// Frobenius norm of the whole matrix.
    pub fn frobenius(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.sub)
            .chain(&self.sup)
            .map(|m| m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// `Σ_e ‖(A x)_e‖²`, square-rooted.
    pub fn residual(&self, x: &[DVector<f64>]) -> f64 {
        let n = self.diag.len();
        let mut acc = 0.0;
        for e in 0..n {
            let mut r = &self.diag[e] * &x[e];
            if e > 0 {
                r += &self.sub[e] * &x[e - 1];
            }
            if e + 1 < n {
                r += &self.sup[e] * &x[e + 1];
            }
            acc += r.norm_squared();
        }
        acc.sqrt()
    }
}

impl Elimination {
    /// Pivot ratio of the bottom Schur complement (0 when exactly singular).
    pub fn bottom_pivot_ratio(&self) -> f64 {
        pivot_ratio(&self.bottom)
    }

    pub fn sweep(&self) -> Sweep {
        self.sweep
    }

    /// Propagate an end-layer vector through all layers; returned in natural layer order.
    pub fn back_substitute(&self, end: DVector<f64>) -> Vec<DVector<f64>> {
        let mut xs = Vec::with_capacity(self.t.len());
        xs.push(end);
        for k in 1..self.t.len() {
            let next = -(&self.t[k] * &xs[k - 1]);
            xs.push(next);
        }
        if self.sweep == Sweep::Up {
            xs.reverse();
        }
        xs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system() -> BlockTridiagonal {
        // Three-state birth-death chain with columns summing to zero.
        let d = |v: f64| DMatrix::from_element(1, 1, v);
        BlockTridiagonal {
            diag: alloc::vec![d(-1.0), d(-3.0), d(-2.0)],
            sub: alloc::vec![DMatrix::zeros(0, 0), d(1.0), d(1.0)],
            sup: alloc::vec![d(2.0), d(2.0), DMatrix::zeros(0, 0)],
        }
    }

    #[test]
    fn birth_death_chain_kernel() {
        let a = system();
        let el = a.eliminate(Sweep::Down).unwrap();
        assert!(el.bottom[(0, 0)].abs() < 1e-15);
        let x = el.back_substitute(DVector::from_element(1, 1.0));
        assert!(a.residual(&x) < 1e-15);
        // detailed balance: x1/x0 = 1/2, x2/x1 = 1/2
        assert!((x[1][0] - 0.5).abs() < 1e-15);
        assert!((x[2][0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn transposed_kernel_is_trace_functional() {
        let at = system().transpose();
        let el = at.eliminate(Sweep::Down).unwrap();
        let y = el.back_substitute(DVector::from_element(1, 1.0));
        for v in &y {
            assert!((v[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_upper_layer_is_reported() {
        let mut a = system();
        a.diag[2] = DMatrix::zeros(1, 1);
        assert_eq!(a.eliminate(Sweep::Down).unwrap_err().layer, 2);
    }

    #[test]
    fn upward_sweep_gives_same_kernel() {
        let a = system();
        let el = a.eliminate(Sweep::Up).unwrap();
        assert!(el.bottom[(0, 0)].abs() < 1e-15);
        let x = el.back_substitute(DVector::from_element(1, 1.0));
        assert!(a.residual(&x) < 1e-15);
        assert!((x[0][0] / x[2][0] - 4.0).abs() < 1e-14);
        a.reversed().reversed().diag.iter().zip(&a.diag).for_each(|(p, q)| assert_eq!(p, q));
    }

    #[test]
    fn upward_singular_layer_uses_natural_index() {
        let mut a = system();
        a.diag[0] = DMatrix::zeros(1, 1);
        assert_eq!(a.eliminate(Sweep::Up).unwrap_err().layer, 0);
    }

    #[test]
    fn steep_chain_is_stable_in_the_matching_direction() {
        // Up rate 100, down rate 1 over 40 layers: populations span 1e80.
        let n = 40;
        let d = |v: f64| DMatrix::from_element(1, 1, v);
        let (b, g) = (100.0, 1.0);
        let diag = (0..n)
            .map(|e| d(-(if e + 1 < n { b } else { 0.0 } + if e > 0 { g } else { 0.0 })))
            .collect();
        let sub = (0..n).map(|e| if e == 0 { DMatrix::zeros(0, 0) } else { d(b) }).collect();
        let sup = (0..n).map(|e| if e + 1 == n { DMatrix::zeros(0, 0) } else { d(g) }).collect();
        let a = BlockTridiagonal { diag, sub, sup };
        let el = a.eliminate(Sweep::for_rates(b, g)).unwrap();
        assert_eq!(el.sweep(), Sweep::Up);
        assert!(el.bottom[(0, 0)].abs() < 1e-12 * b);
        let x = el.back_substitute(DVector::from_element(1, 1.0));
        for e in 1..n {
            assert!((x[e - 1][0] / x[e][0] - 0.01).abs() < 1e-14);
        }
    }
}
