//! The model filiform Lie superalgebra L_{n,m} and its restricted family.
//!
//! Basis order is X1..Xn, Y1..Ym. The only nonzero brackets are
//! `[X1, Xi] = X(i+1)` and `[X1, Yj] = Y(j+1)`.

use thiserror::Error;

use crate::field::{self, FieldError};
use crate::superalg::{AlgebraError, SuperAlgebra, SuperBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiliformError {
    #[error("n and m must be at least 1")]
    EmptyFamily,
    #[error("lambda must have length p = {expected}, found {found}")]
    LambdaLength { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiliformSpec {
    pub n: usize,
    pub m: usize,
    pub lambda: Option<Vec<u32>>,
}

impl FiliformSpec {
    pub fn build(&self, p: u64) -> Result<SuperAlgebra, FiliformError> {
        match &self.lambda {
            None => model_filiform(p, self.n, self.m),
            Some(l) => {
                if self.n != p as usize || self.m != p as usize {
                    return Err(FiliformError::LambdaLength {
                        expected: p as usize,
                        found: l.len(),
                    });
                }
                restricted_model_filiform(p, l)
            }
        }
    }
}

pub fn model_filiform(p: u64, n: usize, m: usize) -> Result<SuperAlgebra, FiliformError> {
    if n == 0 || m == 0 {
        return Err(FiliformError::EmptyFamily);
    }
    field::check_modulus(p)?;
    let dim = n + m;
    let unit = |k: usize| {
        let mut v = vec![0u32; dim];
        v[k] = 1;
        v
    };
    let mut brackets = Vec::new();
    for i in 1..n.saturating_sub(1) {
        brackets.push((0, i, unit(i + 1)));
    }
    for j in 0..m - 1 {
        brackets.push((0, n + j, unit(n + j + 1)));
    }
    Ok(SuperAlgebra::new(
        p,
        SuperBasis::numbered("X", n, "Y", m),
        brackets,
        None,
    )?)
}

/// L_{p,p} with `X_k^{[p]} = λ_k X_p`.
pub fn restricted_model_filiform(p: u64, lambda: &[u32]) -> Result<SuperAlgebra, FiliformError> {
    let pu = field::check_modulus(p)?;
    let n = p as usize;
    if lambda.len() != n {
        return Err(FiliformError::LambdaLength {
            expected: n,
            found: lambda.len(),
        });
    }
    let base = model_filiform(p, n, n)?;
    let pmap = lambda
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let mut v = vec![0u32; 2 * n];
            v[n - 1] = l % pu;
            (k, v)
        })
        .collect();
    Ok(SuperAlgebra::new(
        p,
        base.basis().clone(),
        base.bracket_entries(),
        Some(pmap),
    )?)
}

/// `(Σ a_k X_k)^{[p]} = (Σ a_k^p λ_k) X_p`.
pub fn closed_form_p_power(p: u32, lambda: &[u32], x: &[u32]) -> Vec<u32> {
    let n = lambda.len();
    let mut c = 0u32;
    for k in 0..n {
        c = field::add(
            c,
            field::mul(field::pow(x[k], p as u64, p), lambda[k], p),
            p,
        );
    }
    let mut out = vec![0u32; x.len()];
    out[n - 1] = c;
    out
}

/// `e_k` in GF(p)^p, 1-based `k`.
pub fn unit_lambda(p: usize, k: usize) -> Vec<u32> {
    let mut l = vec![0u32; p];
    l[k - 1] = 1;
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_zero, Matrix};
    use crate::superalg::SuperVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn brackets_of_l33() {
        let l = model_filiform(3, 3, 3).unwrap();
        assert_eq!(l.bracket_basis(0, 1), &[0, 0, 1, 0, 0, 0]);
        assert_eq!(l.bracket_basis(0, 3), &[0, 0, 0, 0, 1, 0]);
        assert_eq!(l.bracket_basis(0, 4), &[0, 0, 0, 0, 0, 1]);
        assert!(is_zero(l.bracket_basis(1, 2)));
        assert!(is_zero(l.bracket_basis(0, 5)));
        assert!(!l.has_pmap());
        assert!(model_filiform(5, 5, 5).unwrap().check_axioms().passed());
    }

    #[test]
    fn bracket_examples_l55() {
        let l = restricted_model_filiform(5, &[0; 5]).unwrap();
        let b = l.basis();
        let x1 = SuperVector::basis_vector(0, b);
        let x2 = SuperVector::basis_vector(1, b);
        assert_eq!(
            l.bracket(&x1, &x2).unwrap().coords,
            SuperVector::basis_vector(2, b).coords
        );
        assert_eq!(l.bracket(&x2, &x1).unwrap().coords[2], 4);
        let y1 = SuperVector::basis_vector(5, b);
        let y2 = SuperVector::basis_vector(6, b);
        assert!(is_zero(&l.bracket(&y1, &y2).unwrap().coords));
    }

    #[test]
    fn ad_x1_is_a_shift() {
        let l = restricted_model_filiform(3, &[0; 3]).unwrap();
        let ad = l.ad_basis(0);
        let mut shift = Matrix::zeros(6, 6, 3);
        shift.set(2, 1, 1);
        shift.set(4, 3, 1);
        shift.set(5, 4, 1);
        assert_eq!(ad, &shift);
        assert!(ad.pow(3).is_zero());
        assert!(l.ad_coords(&[0; 6]).is_zero());
    }

    #[test]
    fn p_map_examples() {
        let l = restricted_model_filiform(5, &[0, 0, 0, 0, 1]).unwrap();
        let b = l.basis();
        let x5 = SuperVector::basis_vector(4, b);
        assert_eq!(l.p_power(&x5).unwrap().coords, x5.coords);
        for k in 0..4 {
            assert!(is_zero(
                &l.p_power(&SuperVector::basis_vector(k, b)).unwrap().coords
            ));
        }
        let l = restricted_model_filiform(5, &[1, 1, 0, 0, 0]).unwrap();
        let x = SuperVector::new(vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0], l.basis());
        let y = SuperVector::basis_vector(1, l.basis());
        let x1 = SuperVector::basis_vector(0, l.basis());
        for i in 1..5 {
            assert!(is_zero(&l.jacobson_term(&x1, &y, i).unwrap().coords));
        }
        assert_eq!(l.p_power(&x).unwrap().coords[4], 2);
        let zero = restricted_model_filiform(5, &[0; 5]).unwrap();
        assert!(is_zero(&zero.p_power(&x).unwrap().coords));
        assert!(zero
            .p_power(&SuperVector::basis_vector(5, zero.basis()))
            .is_err());
    }

    #[test]
    fn restricted_family_passes_checks() {
        for p in [3u64, 5, 7] {
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            let lambda: Vec<u32> = (0..p).map(|_| rng.gen_range(0..p as u32)).collect();
            let l = restricted_model_filiform(p, &lambda).unwrap();
            assert!(l.check_axioms().passed());
            assert!(l.check_restricted().passed());
        }
        let l = restricted_model_filiform(3, &[1, 2, 0]).unwrap();
        for k in 0..3 {
            assert!(l.ad_coords(l.pmap_basis(k).unwrap()).is_zero());
            assert!(l.ad_basis(k).pow(3).is_zero());
        }
    }

    #[test]
    fn broken_p_map_is_detected() {
        let l = restricted_model_filiform(3, &[0; 3]).unwrap();
        let bad = l.with_pmap_value(0, vec![0, 1, 0, 0, 0, 0]).unwrap();
        let r = bad.check_restricted();
        assert!(!r.entry("ad(x^[p]) = (ad x)^p on basis").unwrap().passed);
    }

    #[test]
    fn nilpotency_and_center() {
        for p in [3u64, 5, 7] {
            let l = restricted_model_filiform(p, &vec![1; p as usize]).unwrap();
            let n = p as usize;
            assert!(l.ad_basis(0).pow(p).is_zero());
            for i in 1..2 * n {
                for j in 1..2 * n {
                    assert!(l.ad_basis(i).mul(l.ad_basis(j)).is_zero());
                }
            }
            for i in 0..2 * n {
                assert!(is_zero(l.bracket_basis(n - 1, i)));
                assert!(is_zero(l.bracket_basis(2 * n - 1, i)));
            }
        }
    }

    #[test]
    fn lambda_length_is_checked() {
        assert!(matches!(
            restricted_model_filiform(5, &[0; 4]),
            Err(FiliformError::LambdaLength {
                expected: 5,
                found: 4
            })
        ));
    }

    #[test]
    fn closed_form_agrees_with_jacobson() {
        for p in [3u64, 5, 7] {
            let pu = p as u32;
            let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
            let lambda: Vec<u32> = (0..p).map(|_| rng.gen_range(0..pu)).collect();
            let l = restricted_model_filiform(p, &lambda).unwrap();
            for _ in 0..100 {
                let mut x = vec![0u32; 2 * p as usize];
                for c in x.iter_mut().take(p as usize) {
                    *c = rng.gen_range(0..pu);
                }
                assert_eq!(
                    l.p_power_coords(&x).unwrap(),
                    closed_form_p_power(pu, &lambda, &x)
                );
            }
        }
    }
}
