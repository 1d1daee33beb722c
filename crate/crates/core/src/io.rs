//! JSON forms of algebras, modules, cochains and cohomology reports.
//!
//! Integer entries may be any `i64`; they are reduced mod p on input.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochain::{Cochain, CochainError, CochainSpace, Monomial};
use crate::cohomology::{CohomologyReport, Theory};
use crate::field::{self, FieldError};
use crate::linalg::Matrix;
use crate::repr::{ReprError, Representation};
use crate::restricted::{
    RestrictedError, RestrictedSpace, RestrictedThreeCochain, RestrictedTwoCochain,
};
use crate::superalg::{AlgebraError, Parity, SuperAlgebra, SuperBasis};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Restricted(#[from] RestrictedError),
    #[error("{0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub out: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMapJson {
    pub i: usize,
    pub out: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub p: u64,
    pub even: Vec<String>,
    pub odd: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmap: Option<Vec<PMapJson>>,
}

fn reduce_all(v: &[i64], p: u32) -> Vec<u32> {
    v.iter().map(|&c| field::reduce(c, p)).collect()
}

fn widen(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&c| c as i64).collect()
}

impl AlgebraJson {
    pub fn from_algebra(l: &SuperAlgebra) -> Self {
        AlgebraJson {
            p: l.p() as u64,
            even: l.basis().even_names().to_vec(),
            odd: l.basis().odd_names().to_vec(),
            brackets: l
                .bracket_entries()
                .into_iter()
                .map(|(i, j, out)| BracketJson {
                    i,
                    j,
                    out: widen(&out),
                })
                .collect(),
            pmap: l.pmap_entries().map(|e| {
                e.into_iter()
                    .map(|(i, out)| PMapJson {
                        i,
                        out: widen(&out),
                    })
                    .collect()
            }),
        }
    }

    pub fn to_algebra(&self) -> Result<SuperAlgebra, IoError> {
        let p = field::check_modulus(self.p)?;
        let basis = SuperBasis::new(self.even.clone(), self.odd.clone())?;
        let brackets = self
            .brackets
            .iter()
            .map(|b| (b.i, b.j, reduce_all(&b.out, p)))
            .collect();
        let pmap = self
            .pmap
            .as_ref()
            .map(|e| e.iter().map(|q| (q.i, reduce_all(&q.out, p))).collect());
        Ok(SuperAlgebra::new(self.p, basis, brackets, pmap)?)
    }
}

pub fn parse_algebra(text: &str) -> Result<SuperAlgebra, IoError> {
    let j: AlgebraJson = serde_json::from_str(text)?;
    j.to_algebra()
}

pub fn algebra_to_json(l: &SuperAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from_algebra(l)).expect("serializable")
}

/// Module basis names and one action matrix (list of rows) per algebra basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub action: Vec<Vec<Vec<i64>>>,
}

impl ModuleJson {
    pub fn from_module(m: &Representation) -> Self {
        ModuleJson {
            even: m.basis().even_names().to_vec(),
            odd: m.basis().odd_names().to_vec(),
            action: m
                .action()
                .iter()
                .map(|a| a.to_rows().iter().map(|r| widen(r)).collect())
                .collect(),
        }
    }

    pub fn to_module(&self, l: Arc<SuperAlgebra>) -> Result<Representation, IoError> {
        let p = l.p();
        let basis = SuperBasis::new(self.even.clone(), self.odd.clone())?;
        let d = basis.dim();
        let mut action = Vec::with_capacity(self.action.len());
        for (k, rows) in self.action.iter().enumerate() {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(IoError::Shape(format!("action matrix {k} must be {d}x{d}")));
            }
            let rows: Vec<Vec<u32>> = rows.iter().map(|r| reduce_all(r, p)).collect();
            action.push(Matrix::from_rows(&rows, d, p).map_err(|e| IoError::Shape(e.to_string()))?);
        }
        Ok(Representation::new(l, basis, action)?)
    }
}

pub fn parse_module(text: &str, l: Arc<SuperAlgebra>) -> Result<Representation, IoError> {
    let j: ModuleJson = serde_json::from_str(text)?;
    j.to_module(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityJson {
    Even,
    Odd,
}

impl From<Parity> for ParityJson {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => ParityJson::Even,
            Parity::Odd => ParityJson::Odd,
        }
    }
}

impl From<ParityJson> for Parity {
    fn from(p: ParityJson) -> Self {
        match p {
            ParityJson::Even => Parity::Even,
            ParityJson::Odd => Parity::Odd,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub monomial: Vec<usize>,
    pub module_index: usize,
    pub value: i64,
}

/// `value` is the coordinate along the dual monomial tensored with the module basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub degree: usize,
    pub parity: ParityJson,
    pub entries: Vec<EntryJson>,
}

impl CochainJson {
    pub fn from_cochain(space: &CochainSpace, c: &Cochain) -> Self {
        let entries = c
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| {
                let (t, a) = space.split(k);
                EntryJson {
                    monomial: t.indices().to_vec(),
                    module_index: a,
                    value: v as i64,
                }
            })
            .collect();
        CochainJson {
            degree: c.degree,
            parity: c.parity.unwrap_or(Parity::Even).into(),
            entries,
        }
    }

    pub fn to_cochain(&self, space: &CochainSpace, l: &SuperAlgebra) -> Result<Cochain, IoError> {
        if self.degree != space.degree() {
            return Err(IoError::Shape(format!(
                "expected a {}-cochain, found degree {}",
                space.degree(),
                self.degree
            )));
        }
        let p = l.p();
        let mut coords = vec![0u32; space.len()];
        for e in &self.entries {
            if e.monomial.iter().any(|&i| i >= l.dim()) {
                return Err(
                    AlgebraError::IndexOutOfRange(*e.monomial.iter().max().unwrap()).into(),
                );
            }
            if e.module_index >= space.module_dim() {
                return Err(CochainError::ModuleIndex(e.module_index).into());
            }
            let mono = Monomial::from_indices(l, &e.monomial)?;
            let c = space
                .coordinate(&mono, e.module_index)
                .ok_or_else(|| CochainError::NotCanonical(e.monomial.clone()))?;
            coords[c] = field::add(coords[c], field::reduce(e.value, p), p);
        }
        Ok(Cochain::with_parity(space, coords, self.parity.into())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedTwoJson {
    pub phi: CochainJson,
    pub omega: Vec<Vec<i64>>,
}

impl RestrictedTwoJson {
    pub fn from_pair(space: &RestrictedSpace, c: &RestrictedTwoCochain) -> Self {
        RestrictedTwoJson {
            phi: CochainJson::from_cochain(space.cochains(), &c.phi),
            omega: c.omega.iter().map(|v| widen(v)).collect(),
        }
    }

    pub fn to_pair(
        &self,
        space: &RestrictedSpace,
        l: &SuperAlgebra,
    ) -> Result<RestrictedTwoCochain, IoError> {
        let phi = self.phi.to_cochain(space.cochains(), l)?;
        if self.omega.len() != l.n_even()
            || self.omega.iter().any(|v| v.len() != space.module_dim())
        {
            return Err(IoError::Shape(format!(
                "omega needs {} module vectors of length {}",
                l.n_even(),
                space.module_dim()
            )));
        }
        Ok(RestrictedTwoCochain {
            phi,
            omega: self.omega.iter().map(|v| reduce_all(v, l.p())).collect(),
        })
    }
}

/// `beta[x][y]` is the value on the even basis pair `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedThreeJson {
    pub alpha: CochainJson,
    pub beta: Vec<Vec<Vec<i64>>>,
}

impl RestrictedThreeJson {
    pub fn from_triple(space: &RestrictedSpace, c: &RestrictedThreeCochain, n_even: usize) -> Self {
        RestrictedThreeJson {
            alpha: CochainJson::from_cochain(space.cochains(), &c.alpha),
            beta: c
                .beta
                .chunks(n_even.max(1))
                .map(|row| row.iter().map(|v| widen(v)).collect())
                .collect(),
        }
    }

    pub fn to_triple(
        &self,
        space: &RestrictedSpace,
        l: &SuperAlgebra,
    ) -> Result<RestrictedThreeCochain, IoError> {
        let alpha = self.alpha.to_cochain(space.cochains(), l)?;
        let n0 = l.n_even();
        let d = space.module_dim();
        if self.beta.len() != n0
            || self
                .beta
                .iter()
                .any(|r| r.len() != n0 || r.iter().any(|v| v.len() != d))
        {
            return Err(IoError::Shape(format!(
                "beta needs {n0}x{n0} module vectors of length {d}"
            )));
        }
        Ok(RestrictedThreeCochain {
            alpha,
            beta: self
                .beta
                .iter()
                .flatten()
                .map(|v| reduce_all(v, l.p()))
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepresentativeJson {
    Pair(RestrictedTwoJson),
    Cochain(CochainJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportJson {
    pub p: u64,
    pub lambda: Option<Vec<u32>>,
    pub theory: Theory,
    pub degree: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    pub dim_h_even: usize,
    pub dim_h_odd: usize,
    pub representatives: Vec<RepresentativeJson>,
}

impl ReportJson {
    pub fn from_report(
        l: &SuperAlgebra,
        m: &Representation,
        lambda: Option<Vec<u32>>,
        r: &CohomologyReport,
    ) -> Result<Self, IoError> {
        let restricted_pair = r.theory == Theory::Restricted && r.degree == 2;
        let space = CochainSpace::new(l, m, r.degree)?;
        let rspace = RestrictedSpace::new(l, m, r.degree)?;
        let representatives = r
            .representatives
            .iter()
            .map(|v| {
                Ok(if restricted_pair {
                    RepresentativeJson::Pair(RestrictedTwoJson::from_pair(
                        &rspace,
                        &RestrictedTwoCochain::from_coords(&rspace, v)?,
                    ))
                } else {
                    RepresentativeJson::Cochain(CochainJson::from_cochain(
                        &space,
                        &Cochain::from_coords(&space, v.clone())?,
                    ))
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(ReportJson {
            p: l.p() as u64,
            lambda,
            theory: r.theory,
            degree: r.degree,
            dim_z: r.dim_z,
            dim_b: r.dim_b,
            dim_h: r.dim_h,
            dim_h_even: r.dim_h_even,
            dim_h_odd: r.dim_h_odd,
            representatives,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::restricted_cohomology;
    use crate::filiform::{restricted_model_filiform, unit_lambda};
    use crate::superalg::borel_gl21;

    #[test]
    fn algebra_round_trip() {
        for l in [
            borel_gl21(5).unwrap(),
            restricted_model_filiform(3, &[1, 0, 2]).unwrap(),
        ] {
            let text = algebra_to_json(&l);
            assert_eq!(parse_algebra(&text).unwrap(), l);
        }
    }

    #[test]
    fn values_reduce_and_errors_surface() {
        let text = r#"{"p": 3, "even": ["a", "b"], "odd": [],
            "brackets": [{"i": 0, "j": 1, "out": [0, -2]}]}"#;
        let l = parse_algebra(text).unwrap();
        assert_eq!(l.bracket_basis(0, 1), &[0, 1]);
        assert!(!l.has_pmap());
        let err = parse_algebra(r#"{"p": 3, "even": ["a"], "odd": [] "#).unwrap_err();
        assert!(err.to_string().contains("line 1"));
        assert!(matches!(
            parse_algebra(r#"{"p": 9, "even": [], "odd": []}"#),
            Err(IoError::Field(_))
        ));
        let swapped = r#"{"p": 3, "even": ["a", "b"], "odd": [], "brackets": [{"i": 1, "j": 0, "out": [0, 0]}]}"#;
        assert!(matches!(
            parse_algebra(swapped),
            Err(IoError::Algebra(AlgebraError::BracketOrder(1, 0)))
        ));
    }

    #[test]
    fn module_round_trip() {
        let l = Arc::new(borel_gl21(3).unwrap());
        let a = Representation::adjoint(l.clone());
        let j = ModuleJson::from_module(&a);
        let back = j.to_module(l.clone()).unwrap();
        assert_eq!(back.action(), a.action());
        let bad = ModuleJson {
            even: vec!["v".into()],
            odd: vec![],
            action: vec![vec![vec![0]]],
        };
        assert!(bad.to_module(l).is_err());
    }

    #[test]
    fn cochain_and_report_round_trip() {
        let l = Arc::new(restricted_model_filiform(3, &unit_lambda(3, 3)).unwrap());
        let t = Representation::trivial(l.clone());
        let h = restricted_cohomology(&l, &t, 2).unwrap();
        let j = ReportJson::from_report(&l, &t, Some(unit_lambda(3, 3)), &h.report).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let back: ReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert!(text.contains("\"dimH\":8"));
        let rs = RestrictedSpace::new(&l, &t, 2).unwrap();
        for (rep, coords) in back.representatives.iter().zip(&h.report.representatives) {
            let RepresentativeJson::Pair(pj) = rep else {
                panic!("expected a pair")
            };
            assert_eq!(&pj.to_pair(&rs, &l).unwrap().to_coords(), coords);
        }

        let s2 = CochainSpace::new(&l, &t, 2).unwrap();
        let c = CochainJson {
            degree: 2,
            parity: ParityJson::Even,
            entries: vec![EntryJson {
                monomial: vec![3, 3],
                module_index: 0,
                value: -1,
            }],
        };
        let phi = c.to_cochain(&s2, &l).unwrap();
        assert_eq!(phi.value_on_basis(&s2, &l, &[3, 3]), vec![1]);
        let wrong = CochainJson {
            parity: ParityJson::Odd,
            ..c.clone()
        };
        assert!(wrong.to_cochain(&s2, &l).is_err());
        let unsorted = CochainJson {
            entries: vec![EntryJson {
                monomial: vec![1, 0],
                module_index: 0,
                value: 1,
            }],
            ..c
        };
        assert!(unsorted.to_cochain(&s2, &l).is_err());
    }
}
