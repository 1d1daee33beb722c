//! Cycles, boundaries and cohomology in degrees 0–2 for both theories.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochain::{differential_matrix, Cochain, CochainError, CochainSpace};
use crate::field::{self, FieldError};
use crate::filiform::{restricted_model_filiform, FiliformError};
use crate::linalg::{axpy, quotient_basis, rank_kernel_image, Matrix, Subspace};
use crate::repr::Representation;
use crate::restricted::{d_star_matrix, RestrictedError, RestrictedSpace};
use crate::superalg::{Parity, SuperAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("cohomology is computed in degrees 0, 1, 2; got {0}")]
    Degree(usize),
    #[error("restricted cohomology needs a p-map")]
    NoPMap,
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Restricted(#[from] RestrictedError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Filiform(#[from] FiliformError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Ordinary,
    Restricted,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theory::Ordinary => write!(f, "ordinary"),
            Theory::Restricted => write!(f, "restricted"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub theory: Theory,
    pub degree: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    pub dim_h_even: usize,
    pub dim_h_odd: usize,
    /// Coordinates in C^q (ordinary, or restricted with q < 2) or C^2_*;
    /// even classes first, each block in reduced echelon form.
    pub representatives: Vec<Vec<u32>>,
}

/// A report together with the cycle and boundary spaces it was computed from.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub report: CohomologyReport,
    pub cycles: Subspace,
    pub boundaries: Subspace,
}

impl Cohomology {
    pub fn is_cycle(&self, v: &[u32]) -> bool {
        self.cycles.contains(v)
    }

    pub fn is_boundary(&self, v: &[u32]) -> bool {
        self.boundaries.contains(v)
    }

    /// Rank of the classes of `vs` in Z/B (vectors outside Z are not classes).
    pub fn class_rank(&self, vs: &[Vec<u32>]) -> Option<usize> {
        if !vs.iter().all(|v| self.is_cycle(v)) {
            return None;
        }
        let reduced: Vec<Vec<u32>> = vs.iter().map(|v| self.boundaries.reduce(v)).collect();
        Some(Subspace::span(&reduced, self.cycles.ambient(), self.cycles.modulus()).dim())
    }

    pub fn classes_independent(&self, vs: &[Vec<u32>]) -> bool {
        self.class_rank(vs) == Some(vs.len())
    }

    pub fn classes_span(&self, vs: &[Vec<u32>]) -> bool {
        self.class_rank(vs) == Some(self.report.dim_h)
    }

    pub fn classes_form_basis(&self, vs: &[Vec<u32>]) -> bool {
        vs.len() == self.report.dim_h && self.classes_independent(vs)
    }

    /// A uniformly random cycle supported on coordinates of parity `want`.
    pub fn random_cycle(&self, parities: &[Parity], want: Parity, rng: &mut impl Rng) -> Vec<u32> {
        let p = self.cycles.modulus();
        let mut v = vec![0u32; self.cycles.ambient()];
        for b in self.cycles.basis() {
            axpy(&mut v, rng.gen_range(0..p), b, p);
        }
        for (c, q) in parities.iter().enumerate() {
            if *q != want {
                v[c] = 0;
            }
        }
        v
    }
}

fn columns_of_parity(parities: &[Parity], want: Parity) -> Vec<usize> {
    (0..parities.len())
        .filter(|&c| parities[c] == want)
        .collect()
}

fn select_columns(m: &Matrix, cols: &[usize]) -> Matrix {
    let columns: Vec<Vec<u32>> = cols.iter().map(|&c| m.column(c)).collect();
    Matrix::from_columns(&columns, m.rows(), m.modulus())
}

fn embed(v: &[u32], cols: &[usize], ambient: usize) -> Vec<u32> {
    let mut out = vec![0u32; ambient];
    for (k, &c) in cols.iter().enumerate() {
        out[c] = v[k];
    }
    out
}

/// Cohomology at the middle of `prev: C^{q-1} → C^q`, `next: C^q → C^{q+1}`,
/// block by block for the parity of C^q coordinates; both maps must be even.
pub fn cohomology_at(
    theory: Theory,
    degree: usize,
    prev: Option<(&Matrix, &[Parity])>,
    next: &Matrix,
    parities: &[Parity],
) -> Cohomology {
    let p = next.modulus();
    let n = next.cols();
    let mut cycles = Subspace::zero(n, p);
    let mut boundaries = Subspace::zero(n, p);
    let mut reps = Vec::new();
    let mut split = [0usize; 2];
    for want in [Parity::Even, Parity::Odd] {
        let cols = columns_of_parity(parities, want);
        let z_vecs: Vec<Vec<u32>> = rank_kernel_image(&select_columns(next, &cols))
            .kernel
            .basis()
            .iter()
            .map(|v| embed(v, &cols, n))
            .collect();
        let z = Subspace::span(&z_vecs, n, p);
        let b = match prev {
            None => Subspace::zero(n, p),
            Some((d, src)) => {
                let src_cols = columns_of_parity(src, want);
                rank_kernel_image(&select_columns(d, &src_cols)).image
            }
        };
        let q = quotient_basis(&z, &b).expect("boundaries are cycles");
        split[want.bit()] = q.len();
        reps.extend(q);
        cycles = cycles.sum(&z);
        boundaries = boundaries.sum(&b);
    }
    let report = CohomologyReport {
        theory,
        degree,
        dim_z: cycles.dim(),
        dim_b: boundaries.dim(),
        dim_h: cycles.dim() - boundaries.dim(),
        dim_h_even: split[0],
        dim_h_odd: split[1],
        representatives: reps,
    };
    Cohomology {
        report,
        cycles,
        boundaries,
    }
}

pub fn ordinary_cohomology(
    l: &SuperAlgebra,
    m: &Representation,
    q: usize,
) -> Result<Cohomology, CohomologyError> {
    if q > 2 {
        return Err(CohomologyError::Degree(q));
    }
    let next = differential_matrix(l, m, q)?;
    let parities = CochainSpace::new(l, m, q)?.coordinate_parities();
    let prev = if q == 0 {
        None
    } else {
        Some((
            differential_matrix(l, m, q - 1)?,
            CochainSpace::new(l, m, q - 1)?.coordinate_parities(),
        ))
    };
    Ok(cohomology_at(
        Theory::Ordinary,
        q,
        prev.as_ref().map(|(d, s)| (d, s.as_slice())),
        &next,
        &parities,
    ))
}

pub fn restricted_cohomology(
    l: &SuperAlgebra,
    m: &Representation,
    q: usize,
) -> Result<Cohomology, CohomologyError> {
    if q > 2 {
        return Err(CohomologyError::Degree(q));
    }
    if !l.has_pmap() {
        return Err(CohomologyError::NoPMap);
    }
    let next = d_star_matrix(l, m, q)?;
    let parities = RestrictedSpace::new(l, m, q)?.coordinate_parities();
    let prev = if q == 0 {
        None
    } else {
        Some((
            d_star_matrix(l, m, q - 1)?,
            RestrictedSpace::new(l, m, q - 1)?.coordinate_parities(),
        ))
    };
    Ok(cohomology_at(
        Theory::Restricted,
        q,
        prev.as_ref().map(|(d, s)| (d, s.as_slice())),
        &next,
        &parities,
    ))
}

pub fn cohomology(
    l: &SuperAlgebra,
    m: &Representation,
    q: usize,
    theory: Theory,
) -> Result<Cohomology, CohomologyError> {
    match theory {
        Theory::Ordinary => ordinary_cohomology(l, m, q),
        Theory::Restricted => restricted_cohomology(l, m, q),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCochain {
    pub name: String,
    pub cochain: Cochain,
}

/// The 2-cocycles of L_{p,p} with trivial coefficients that represent H²:
/// φ_i (i odd, 5 ≤ i ≤ p+2), ψ_j (2 ≤ j ≤ p), φ_k (k even, 2 ≤ k ≤ p+1),
/// X^{1,p} and X^1 Y^p.
pub fn cocycle_families(p: u64) -> Result<Vec<NamedCochain>, CohomologyError> {
    let pu = field::check_modulus(p)?;
    let n = p as usize;
    let l = restricted_model_filiform(p, &vec![0; n])?;
    let t = Representation::trivial(std::sync::Arc::new(l.clone()));
    let space = CochainSpace::new(&l, &t, 2)?;
    let x = |r: usize| r - 1;
    let y = |s: usize| n + s - 1;
    let sgn = |e: usize| field::sign(e, pu);
    let mut out = Vec::new();
    let mut push = |name: String, terms: Vec<([usize; 2], u32)>| -> Result<(), CohomologyError> {
        let terms: Vec<(&[usize], usize, u32)> =
            terms.iter().map(|(t, v)| (&t[..], 0usize, *v)).collect();
        out.push(NamedCochain {
            name,
            cochain: Cochain::from_terms(&space, &l, &terms)?,
        });
        Ok(())
    };
    for i in (5..=n + 2).step_by(2) {
        let terms = (2..=i / 2).map(|r| ([x(r), x(i - r)], sgn(r))).collect();
        push(format!("phi_{i}"), terms)?;
    }
    for j in 2..=n {
        let terms = (2..=j).map(|s| ([x(s), y(j - s + 1)], sgn(s))).collect();
        push(format!("psi_{j}"), terms)?;
    }
    let half = field::inv(2, pu).expect("p is odd");
    for k in (2..=n + 1).step_by(2) {
        let mut terms: Vec<([usize; 2], u32)> =
            (1..k / 2).map(|t| ([y(t), y(k - t)], sgn(t))).collect();
        terms.push(([y(k / 2), y(k / 2)], field::mul(sgn(k / 2), half, pu)));
        push(format!("phi_{k}"), terms)?;
    }
    push(format!("X^1,{n}"), vec![([x(1), x(n)], 1)])?;
    push(format!("X^1Y^{n}"), vec![([x(1), y(n)], 1)])?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filiform::unit_lambda;
    use crate::restricted::RestrictedTwoCochain;
    use crate::superalg::strongly_abelian;
    use std::sync::Arc;

    fn filiform(p: u64, lambda: &[u32]) -> (Arc<SuperAlgebra>, Representation) {
        let l = Arc::new(restricted_model_filiform(p, lambda).unwrap());
        let t = Representation::trivial(l.clone());
        (l, t)
    }

    #[test]
    fn first_cohomology_of_filiform() {
        for p in [3u64, 5] {
            let (l, t) = filiform(p, &unit_lambda(p as usize, 1));
            let h = ordinary_cohomology(&l, &t, 1).unwrap();
            assert_eq!(h.report.dim_h, 3);
            assert_eq!((h.report.dim_h_even, h.report.dim_h_odd), (2, 1));
            let n = p as usize;
            let named: Vec<Vec<u32>> = [0, 1, n]
                .iter()
                .map(|&i| crate::linalg::unit(2 * n, i))
                .collect();
            assert!(h.classes_form_basis(&named));
            let hr = restricted_cohomology(&l, &t, 1).unwrap();
            assert_eq!(hr.report.dim_h, 3);
            assert!(
                hr.cycles.contains_subspace(&h.cycles) && h.cycles.contains_subspace(&hr.cycles)
            );
        }
    }

    #[test]
    fn second_cohomology_ledgers() {
        for p in [3u64, 5] {
            let n = p as usize;
            let (l, t) = filiform(p, &vec![0; n]);
            let h = ordinary_cohomology(&l, &t, 2).unwrap();
            assert_eq!(h.report.dim_z, 4 * n - 2);
            assert_eq!(h.report.dim_b, 2 * n - 3);
            assert_eq!(h.report.dim_h, 2 * n + 1);
            let hr = restricted_cohomology(&l, &t, 2).unwrap();
            assert_eq!(
                (hr.report.dim_z, hr.report.dim_b),
                (4 * n - 2 + n, 2 * n - 3)
            );
            assert_eq!(hr.report.dim_h, 3 * n + 1);
            let (l, t) = filiform(p, &unit_lambda(n, n));
            let hr = restricted_cohomology(&l, &t, 2).unwrap();
            assert_eq!(
                (hr.report.dim_z, hr.report.dim_b),
                (4 * n - 4 + n, 2 * n - 3)
            );
            assert_eq!(hr.report.dim_h, 3 * n - 1);
        }
    }

    #[test]
    fn families_are_cocycles_spanning_h2() {
        for p in [3u64, 5, 7] {
            let n = p as usize;
            let fams = cocycle_families(p).unwrap();
            assert_eq!(fams.len(), 2 * n + 1);
            let (l, t) = filiform(p, &vec![0; n]);
            let h = ordinary_cohomology(&l, &t, 2).unwrap();
            let vs: Vec<Vec<u32>> = fams.iter().map(|f| f.cochain.coords.clone()).collect();
            assert!(h.classes_form_basis(&vs), "p = {p}");

            let rs = RestrictedSpace::new(&l, &t, 2).unwrap();
            let mut lifted: Vec<Vec<u32>> = fams
                .iter()
                .map(|f| RestrictedTwoCochain::with_zero_values(&rs, f.cochain.clone()).to_coords())
                .collect();
            lifted.extend(
                (0..n).map(|k| RestrictedTwoCochain::semilinear(&rs, k, vec![1]).to_coords()),
            );
            let hr = restricted_cohomology(&l, &t, 2).unwrap();
            assert!(hr.classes_form_basis(&lifted));
        }
    }

    #[test]
    fn phi_two_at_p_three() {
        let fams = cocycle_families(3).unwrap();
        let phi2 = fams.iter().find(|f| f.name == "phi_2").unwrap();
        let (l, t) = filiform(3, &[0; 3]);
        let space = CochainSpace::new(&l, &t, 2).unwrap();
        let expect = Cochain::from_terms(&space, &l, &[(&[3, 3], 0, 1)]).unwrap();
        assert_eq!(phi2.cochain, expect);
    }

    #[test]
    fn abelian_line() {
        let l = Arc::new(strongly_abelian(5, 1, 0).unwrap());
        let t = Representation::trivial(l.clone());
        assert_eq!(ordinary_cohomology(&l, &t, 1).unwrap().report.dim_h, 1);
        assert_eq!(restricted_cohomology(&l, &t, 1).unwrap().report.dim_h, 1);
        assert!(matches!(
            ordinary_cohomology(&l, &t, 3),
            Err(CohomologyError::Degree(3))
        ));
    }

    #[test]
    fn representatives_are_reproducible() {
        let (l, t) = filiform(5, &unit_lambda(5, 2));
        let a = restricted_cohomology(&l, &t, 2).unwrap().report;
        let b = restricted_cohomology(&l, &t, 2).unwrap().report;
        assert_eq!(a, b);
        assert_eq!(a.dim_h, a.representatives.len());
        assert_eq!(a.dim_h_even + a.dim_h_odd, a.dim_h);
    }
}
