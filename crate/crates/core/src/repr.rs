//! Restricted modules given by explicit action matrices.

use std::sync::Arc;

use thiserror::Error;

use crate::field;
use crate::linalg::Matrix;
use crate::report::CheckReport;
use crate::superalg::{AlgebraError, Parity, SuperAlgebra, SuperBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("expected {expected} action matrices, found {found}")]
    ActionCount { expected: usize, found: usize },
    #[error("action matrix {index} has shape {rows}x{cols}, expected {dim}x{dim}")]
    ActionShape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug)]
pub struct Representation {
    algebra: Arc<SuperAlgebra>,
    basis: SuperBasis,
    action: Vec<Matrix>,
    /// For Hom(N, M): module index -> (index in M, index in N).
    hom_pairs: Option<Vec<(usize, usize)>>,
}

impl Representation {
    pub fn new(
        algebra: Arc<SuperAlgebra>,
        basis: SuperBasis,
        action: Vec<Matrix>,
    ) -> Result<Self, ReprError> {
        if action.len() != algebra.dim() {
            return Err(ReprError::ActionCount {
                expected: algebra.dim(),
                found: action.len(),
            });
        }
        let d = basis.dim();
        for (index, m) in action.iter().enumerate() {
            if m.rows() != d || m.cols() != d || m.modulus() != algebra.p() {
                return Err(ReprError::ActionShape {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim: d,
                });
            }
        }
        Ok(Representation {
            algebra,
            basis,
            action,
            hom_pairs: None,
        })
    }

    pub fn trivial(algebra: Arc<SuperAlgebra>) -> Self {
        Self::trivial_with_basis(algebra, SuperBasis::numbered("v", 1, "w", 0))
    }

    /// Zero action on a superspace with the given basis.
    pub fn trivial_with_basis(algebra: Arc<SuperAlgebra>, basis: SuperBasis) -> Self {
        let d = basis.dim();
        let action = vec![Matrix::zeros(d, d, algebra.p()); algebra.dim()];
        Representation {
            algebra,
            basis,
            action,
            hom_pairs: None,
        }
    }

    pub fn adjoint(algebra: Arc<SuperAlgebra>) -> Self {
        let action = (0..algebra.dim())
            .map(|i| algebra.ad_basis(i).clone())
            .collect();
        let basis = algebra.basis().clone();
        Representation {
            algebra,
            basis,
            action,
            hom_pairs: None,
        }
    }

    /// Hom(N, M) with `(xφ)(n) = xφ(n) − (−1)^{|φ||x|} φ(xn)`.
    ///
    /// The basis consists of the elementary maps `n_b ↦ m_a`, even ones first.
    pub fn hom(n: &Representation, m: &Representation) -> Result<Self, ReprError> {
        if *n.algebra != *m.algebra {
            return Err(ReprError::AlgebraMismatch);
        }
        let l = &n.algebra;
        let p = l.p();
        let mut pairs = Vec::new();
        for want in [Parity::Even, Parity::Odd] {
            for a in 0..m.dim() {
                for b in 0..n.dim() {
                    if m.basis.parity(a).plus(n.basis.parity(b)) == want {
                        pairs.push((a, b));
                    }
                }
            }
        }
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for &(a, b) in &pairs {
            let name = format!("{}->{}", n.basis.name(b), m.basis.name(a));
            if m.basis.parity(a).plus(n.basis.parity(b)) == Parity::Even {
                even.push(name);
            } else {
                odd.push(name);
            }
        }
        let basis = SuperBasis::new(even, odd)?;
        let index = |a: usize, b: usize| pairs.iter().position(|&q| q == (a, b)).unwrap();
        let d = pairs.len();
        let mut action = Vec::with_capacity(l.dim());
        for x in 0..l.dim() {
            let rm = &m.action[x];
            let rn = &n.action[x];
            let mut mat = Matrix::zeros(d, d, p);
            for (col, &(a, b)) in pairs.iter().enumerate() {
                let phi_par = m.basis.parity(a).plus(n.basis.parity(b));
                let s = field::sign(phi_par.bit() * l.parity(x).bit(), p);
                // ρ_M(x) ∘ E_ab
                for a2 in 0..m.dim() {
                    let c = rm.get(a2, a);
                    if c != 0 {
                        mat.add_at(index(a2, b), col, c);
                    }
                }
                // − s · E_ab ∘ ρ_N(x)
                for c2 in 0..n.dim() {
                    let c = rn.get(b, c2);
                    if c != 0 {
                        mat.add_at(index(a, c2), col, field::neg(field::mul(s, c, p), p));
                    }
                }
            }
            action.push(mat);
        }
        Ok(Representation {
            algebra: l.clone(),
            basis,
            action,
            hom_pairs: Some(pairs),
        })
    }

    pub fn algebra(&self) -> &Arc<SuperAlgebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &SuperBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.basis.parity(a)
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn rho_basis(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.action.iter().all(|m| m.is_zero())
    }

    /// Linear extension of the action to a coordinate vector of L.
    pub fn rho(&self, x: &[u32]) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d, self.p());
        for (i, &a) in x.iter().enumerate() {
            if a != 0 {
                m = m.add(&self.action[i].scale(a));
            }
        }
        m
    }

    /// For Hom(N, M): `(index in M, index in N)` of each basis map.
    pub fn hom_pairs(&self) -> Option<&[(usize, usize)]> {
        self.hom_pairs.as_deref()
    }

    pub fn check_rep(&self) -> CheckReport {
        let l = &self.algebra;
        let p = l.p();
        let n = l.dim();
        let mut report = CheckReport::new();

        let mut witness = None;
        'blocks: for (i, m) in self.action.iter().enumerate() {
            for r in 0..self.dim() {
                for c in 0..self.dim() {
                    if m.get(r, c) != 0 && self.parity(r) != self.parity(c).plus(l.parity(i)) {
                        witness = Some(format!(
                            "rho({}) maps {} into {}",
                            l.basis().name(i),
                            self.basis.name(c),
                            self.basis.name(r)
                        ));
                        break 'blocks;
                    }
                }
            }
        }
        report.record("parity blocks", witness);

        let mut witness = None;
        'pairs: for i in 0..n {
            for j in 0..n {
                let lhs = self.rho(l.bracket_basis(i, j));
                let s = field::sign(l.parity(i).bit() * l.parity(j).bit(), p);
                let rhs = self.action[i]
                    .mul(&self.action[j])
                    .sub(&self.action[j].mul(&self.action[i]).scale(s));
                if lhs != rhs {
                    witness = Some(format!("({}, {})", l.basis().name(i), l.basis().name(j)));
                    break 'pairs;
                }
            }
        }
        report.record("rho([x,y]) = [rho x, rho y]", witness);

        if l.has_pmap() {
            let witness = (0..l.n_even())
                .find(|&i| self.rho(l.pmap_basis(i).unwrap()) != self.action[i].pow(p as u64))
                .map(|i| format!("rho({0}^[p]) != rho({0})^p", l.basis().name(i)));
            report.record("rho(x^[p]) = rho(x)^p", witness);
        }
        report
    }
}
