//! Collective one-body operators on the symmetric subspace.
//!
//! A one-body operator `Σ_j A_j` with single-particle matrix `A` acts on
//! occupation states as `Σ_{dst,src} A[dst][src] b†_dst b_src`, i.e. a
//! transfer `src -> dst` carries the bosonic amplitude `sqrt(n_src (n_dst+1))`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::format;

use crate::basis::{lr, pm, Flavor, OccupationState, SymmetricBasis};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative threshold below which product entries are treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Named collective ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    JPlus,
    JMinus,
    EPlus,
    EMinus,
    KPlus,
    KMinus,
    MPlus,
    MMinus,
    PPlus,
    PMinus,
    /// `|e,r><g,l|`
    QPlus,
    /// `|e,l><g,r|`
    SigmaPlus,
    /// `|e,r><g,r|`
    CalMPlus,
    /// `|e,l><g,l|`
    CalNPlus,
    /// `|e,r><e,l|`
    UPlus,
    /// `|g,r><g,l|`
    VPlus,
}

/// A single-particle term `coeff · |dst><src|`.
type Term = (usize, usize, f64);

impl Ladder {
    pub const ALL: [Ladder; 16] = [
        Ladder::JPlus,
        Ladder::JMinus,
        Ladder::EPlus,
        Ladder::EMinus,
        Ladder::KPlus,
        Ladder::KMinus,
        Ladder::MPlus,
        Ladder::MMinus,
        Ladder::PPlus,
        Ladder::PMinus,
        Ladder::QPlus,
        Ladder::SigmaPlus,
        Ladder::CalMPlus,
        Ladder::CalNPlus,
        Ladder::UPlus,
        Ladder::VPlus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Ladder::JPlus => "J+",
            Ladder::JMinus => "J-",
            Ladder::EPlus => "E+",
            Ladder::EMinus => "E-",
            Ladder::KPlus => "K+",
            Ladder::KMinus => "K-",
            Ladder::MPlus => "M+",
            Ladder::MMinus => "M-",
            Ladder::PPlus => "P+",
            Ladder::PMinus => "P-",
            Ladder::QPlus => "Q+",
            Ladder::SigmaPlus => "Sigma+",
            Ladder::CalMPlus => "calM+",
            Ladder::CalNPlus => "calN+",
            Ladder::UPlus => "U+",
            Ladder::VPlus => "V+",
        }
    }

    /// Parse a ladder name. Accepts ASCII (`J-`, `Sigma+`, `calM+`) and the
    /// typographic forms (`J−`, `Σ+`, `𝓜+`).
    pub fn parse(name: &str) -> Result<Self> {
        let norm: String = name.trim().replace('−', "-");
        let found = match norm.as_str() {
            "Σ+" => Some(Ladder::SigmaPlus),
            "𝓜+" => Some(Ladder::CalMPlus),
            "𝓝+" => Some(Ladder::CalNPlus),
            "𝓤+" => Some(Ladder::UPlus),
            "𝓥+" => Some(Ladder::VPlus),
            other => Self::ALL.iter().copied().find(|l| l.label() == other),
        };
        found.ok_or_else(|| Error::Config(format!("unknown ladder operator `{name}`")))
    }

    pub fn is_raising(self) -> bool {
        !matches!(
            self,
            Ladder::JMinus | Ladder::EMinus | Ladder::KMinus | Ladder::MMinus | Ladder::PMinus
        )
    }

    fn raising_partner(self) -> Option<Ladder> {
        Some(match self {
            Ladder::JMinus => Ladder::JPlus,
            Ladder::EMinus => Ladder::EPlus,
            Ladder::KMinus => Ladder::KPlus,
            Ladder::MMinus => Ladder::MPlus,
            Ladder::PMinus => Ladder::PPlus,
            _ => return None,
        })
    }

    /// Single-particle terms of the raising member in the given flavor.
    fn raising_terms(self, flavor: Flavor) -> Result<Vec<Term>> {
        use Flavor::*;
        let mismatch = || {
            Err(Error::Config(format!(
                "operator {} is not available in the {:?} flavor",
                self.label(),
                flavor
            )))
        };
        let terms: Vec<Term> = match (self, flavor) {
            (Ladder::JPlus, MomentumLr) => [(lr::E_L, lr::G_L, 1.0), (lr::E_R, lr::G_R, 1.0)].into(),
            (Ladder::JPlus, MomentumPm) => {
                [(pm::E_MINUS, pm::G_MINUS, 1.0), (pm::E_PLUS, pm::G_PLUS, 1.0)].into()
            }
            // E+ = (E-)†, E- = |g><e| ⊗ s^x
            (Ladder::EPlus, MomentumLr) => [(lr::E_R, lr::G_L, 1.0), (lr::E_L, lr::G_R, 1.0)].into(),
            (Ladder::EPlus, MomentumPm) => {
                [(pm::E_PLUS, pm::G_PLUS, 1.0), (pm::E_MINUS, pm::G_MINUS, -1.0)].into()
            }
            // K+ = Σ|r><l|
            (Ladder::KPlus, MomentumLr) => [(lr::G_R, lr::G_L, 1.0), (lr::E_R, lr::E_L, 1.0)].into(),
            (Ladder::KPlus, MomentumPm) => {
                let mut t = Vec::new();
                for (m, p) in [(pm::G_MINUS, pm::G_PLUS), (pm::E_MINUS, pm::E_PLUS)] {
                    t.extend([(m, m, -0.5), (m, p, 0.5), (p, m, -0.5), (p, p, 0.5)]);
                }
                t
            }
            (Ladder::MPlus, MomentumPm) => [(pm::E_MINUS, pm::G_MINUS, 1.0)].into(),
            (Ladder::PPlus, MomentumPm) => [(pm::E_PLUS, pm::G_PLUS, 1.0)].into(),
            (Ladder::QPlus, MomentumLr) => [(lr::E_R, lr::G_L, 1.0)].into(),
            (Ladder::SigmaPlus, MomentumLr) => [(lr::E_L, lr::G_R, 1.0)].into(),
            (Ladder::CalMPlus, MomentumLr) => [(lr::E_R, lr::G_R, 1.0)].into(),
            (Ladder::CalNPlus, MomentumLr) => [(lr::E_L, lr::G_L, 1.0)].into(),
            (Ladder::UPlus, MomentumLr) => [(lr::E_R, lr::E_L, 1.0)].into(),
            (Ladder::VPlus, MomentumLr) => [(lr::G_R, lr::G_L, 1.0)].into(),
            _ => return mismatch(),
        };
        Ok(terms)
    }

    fn terms(self, flavor: Flavor) -> Result<Vec<Term>> {
        match self.raising_partner() {
            None => self.raising_terms(flavor),
            Some(up) => Ok(up
                .raising_terms(flavor)?
                .into_iter()
                .map(|(d, s, c)| (s, d, c))
                .collect()),
        }
    }
}

/// Sparse operator on a [`SymmetricBasis`].
#[derive(Debug, Clone)]
pub struct CollectiveOperator {
    basis: Arc<SymmetricBasis>,
    matrix: CsrMatrix<C64>,
    label: String,
    hermitian: bool,
    ladder: Option<Ladder>,
}

impl CollectiveOperator {
    pub fn new(
        basis: Arc<SymmetricBasis>,
        matrix: CsrMatrix<C64>,
        label: impl Into<String>,
        hermitian: bool,
    ) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::Shape(format!(
                "matrix {}x{} on a basis of dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.len()
            )));
        }
        Ok(Self {
            basis,
            matrix,
            label: label.into(),
            hermitian,
            ladder: None,
        })
    }

    pub fn identity(basis: Arc<SymmetricBasis>) -> Self {
        let n = basis.len();
        Self {
            basis,
            matrix: CsrMatrix::identity(n),
            label: "I".into(),
            hermitian: true,
            ladder: None,
        }
    }

    /// Diagonal operator with entries `f(state)`.
    pub fn diagonal(
        basis: Arc<SymmetricBasis>,
        label: impl Into<String>,
        f: impl Fn(&OccupationState) -> f64,
    ) -> Self {
        let diag: Vec<C64> = basis.states().iter().map(|s| C64::new(f(s), 0.0)).collect();
        Self {
            matrix: CsrMatrix::from_diagonal(&diag),
            basis,
            label: label.into(),
            hermitian: true,
            ladder: None,
        }
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CsrMatrix<C64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether the operator was constructed as Hermitian.
    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    pub fn ladder(&self) -> Option<Ladder> {
        self.ladder
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Elementwise check `A = A†`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix
            .max_abs_diff(&self.matrix.adjoint())
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "`{}` and `{}` live on different bases",
                self.label, other.label
            )))
        }
    }

    fn derived(&self, matrix: CsrMatrix<C64>, label: String, hermitian: bool) -> Self {
        Self {
            basis: self.basis.clone(),
            matrix,
            label,
            hermitian,
            ladder: None,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.derived(self.matrix.adjoint(), format!("({})†", self.label), self.hermitian);
        out.ladder = self.ladder.and_then(adjoint_ladder);
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        let m = self.matrix.matmul(&other.matrix)?;
        let tol = ZERO_TOL * m.max_abs().max(1.0);
        Ok(self.derived(m.pruned(tol), format!("{}·{}", self.label, other.label), false))
    }

    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        self.same_basis(other)?;
        let m = self.matrix.lin_comb(a, &other.matrix, b)?;
        let tol = ZERO_TOL * m.max_abs().max(1.0);
        let herm = self.hermitian && other.hermitian && a.im == 0.0 && b.im == 0.0;
        Ok(self.derived(m.pruned(tol), format!("({} ± {})", self.label, other.label), herm))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.derived(
            self.matrix.scale(s),
            format!("{}·{}", s, self.label),
            self.hermitian && s.im == 0.0,
        )
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        let c = ab.sub(&ba)?;
        Ok(c.with_label(format!("[{}, {}]", self.label, other.label)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_basis(other)?;
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// `⟨ψ|A|ψ⟩` for a normalized `ψ`.
    pub fn expectation(&self, psi: &[C64]) -> C64 {
        let a_psi = self.matrix.mul_vec(psi);
        psi.iter().zip(&a_psi).map(|(x, y)| x.conj() * y).sum()
    }
}

fn adjoint_ladder(l: Ladder) -> Option<Ladder> {
    Some(match l {
        Ladder::JPlus => Ladder::JMinus,
        Ladder::JMinus => Ladder::JPlus,
        Ladder::EPlus => Ladder::EMinus,
        Ladder::EMinus => Ladder::EPlus,
        Ladder::KPlus => Ladder::KMinus,
        Ladder::KMinus => Ladder::KPlus,
        Ladder::MPlus => Ladder::MMinus,
        Ladder::MMinus => Ladder::MPlus,
        Ladder::PPlus => Ladder::PMinus,
        Ladder::PMinus => Ladder::PPlus,
        _ => return None,
    })
}

/// Second-quantized lift of the single-particle terms `coeff |dst><src|`.
pub fn one_body(
    basis: &Arc<SymmetricBasis>,
    terms: &[(usize, usize, f64)],
    label: impl Into<String>,
) -> CollectiveOperator {
    let mut triplets = Vec::new();
    for (col, state) in basis.states().iter().enumerate() {
        for &(dst, src, coeff) in terms {
            let n_src = state.0[src];
            if n_src == 0 {
                continue;
            }
            if dst == src {
                triplets.push((col, col, C64::new(coeff * f64::from(n_src), 0.0)));
                continue;
            }
            let mut next = *state;
            next.0[src] -= 1;
            next.0[dst] += 1;
            let amp = (f64::from(n_src) * f64::from(next.0[dst])).sqrt();
            let row = basis
                .index_of(&next)
                .expect("one-body transfer stays in the symmetric subspace");
            triplets.push((row, col, C64::new(coeff * amp, 0.0)));
        }
    }
    let n = basis.len();
    let hermitian = terms.iter().all(|&(d, s, c)| {
        terms
            .iter()
            .any(|&(d2, s2, c2)| d2 == s && s2 == d && c2 == c)
    });
    CollectiveOperator {
        basis: basis.clone(),
        matrix: CsrMatrix::from_triplets(n, n, triplets),
        label: label.into(),
        hermitian,
        ladder: None,
    }
}

/// Build a named ladder operator on `basis`.
pub fn build_ladder(name: Ladder, basis: &Arc<SymmetricBasis>) -> Result<CollectiveOperator> {
    let terms = name.terms(basis.flavor())?;
    let mut op = one_body(basis, &terms, name.label());
    op.hermitian = false;
    op.ladder = Some(name);
    Ok(op)
}

/// Number operator of one mode.
pub fn number_operator(basis: &Arc<SymmetricBasis>, mode: usize) -> CollectiveOperator {
    CollectiveOperator::diagonal(basis.clone(), format!("n{mode}"), |s| f64::from(s.0[mode]))
}

/// `O_x = (O+ + O-)/2`, `O_y = (iO- - iO+)/2`, `O_z = [O+, O-]/2`.
pub fn hermitian_components(
    raising: &CollectiveOperator,
) -> Result<(CollectiveOperator, CollectiveOperator, CollectiveOperator)> {
    match raising.ladder {
        Some(l) if l.is_raising() => {}
        _ => {
            return Err(Error::Precondition(format!(
                "`{}` is not a declared raising operator",
                raising.label
            )))
        }
    }
    let name = raising.label.trim_end_matches('+').to_string();
    let lowering = raising.adjoint();
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let mut x = raising.lin_comb(half, &lowering, half)?.with_label(format!("{name}_x"));
    let mut y = lowering.lin_comb(ihalf, raising, -ihalf)?.with_label(format!("{name}_y"));
    let mut z = raising.commutator(&lowering)?.scale(half).with_label(format!("{name}_z"));
    x.hermitian = true;
    y.hermitian = true;
    z.hermitian = true;
    Ok((x, y, z))
}

/// Quadratic Casimir `O_x² + O_y² + O_z²`.
pub fn casimir(
    x: &CollectiveOperator,
    y: &CollectiveOperator,
    z: &CollectiveOperator,
) -> Result<CollectiveOperator> {
    for o in [x, y, z] {
        if !o.hermitian {
            return Err(Error::Precondition(format!("`{}` is not Hermitian", o.label)));
        }
    }
    let sum = x.matmul(x)?.add(&y.matmul(y)?)?.add(&z.matmul(z)?)?;
    let name = x.label.trim_end_matches("_x");
    let mut out = sum.with_label(format!("{name}^2"));
    out.hermitian = true;
    Ok(out)
}
