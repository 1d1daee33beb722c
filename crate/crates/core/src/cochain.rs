//! Super-alternating cochains C^q(L; M), q ≤ 3, and the differential.
//!
//! A monomial is a nondecreasing tuple of algebra basis indices with no
//! repeated even index; since even indices precede odd ones in the basis,
//! even entries come first. Coordinates are taken with respect to the dual
//! basis of super-symmetric monomials: the dual of a monomial in which an odd
//! index occurs `m` times takes the value `m!` on its own argument tuple (so
//! `Y^{s,s}` evaluates to 2 on `(Y_s, Y_s)`). When `m!` vanishes mod p the
//! raw value is used instead.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field;
use crate::linalg::{axpy, is_zero, Matrix};
use crate::repr::Representation;
use crate::superalg::{Parity, SuperAlgebra};

pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CochainError {
    #[error("degree {0} is not supported")]
    UnsupportedDegree(usize),
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("expected {expected} coordinates, found {found}")]
    Length { expected: usize, found: usize },
    #[error("monomial {0:?} is not canonical for this algebra")]
    NotCanonical(Vec<usize>),
    #[error("module index {0} out of range")]
    ModuleIndex(usize),
    #[error("declared {declared:?} cochain has support of the other parity")]
    ParityMismatch { declared: Parity },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    /// The monomial with these indices, which must already be in canonical order.
    pub fn from_indices(l: &SuperAlgebra, indices: &[usize]) -> Result<Self, CochainError> {
        let mono = Monomial(indices.to_vec());
        match canonicalize(l, indices) {
            Some((1, m)) if m == mono => Ok(mono),
            _ => Err(CochainError::NotCanonical(indices.to_vec())),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn parity(&self, l: &SuperAlgebra) -> Parity {
        Parity::from_bit(self.0.iter().map(|&i| l.parity(i).bit()).sum())
    }

    pub fn name(&self, l: &SuperAlgebra) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&i| l.basis().name(i))
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Value of the dual monomial on its own argument tuple.
pub fn weight(l: &SuperAlgebra, indices: &[usize]) -> u32 {
    let p = l.p();
    let mut w = 1u32;
    let mut run = 0u32;
    for (k, &i) in indices.iter().enumerate() {
        if l.parity(i) == Parity::Odd && k > 0 && indices[k - 1] == i {
            run += 1;
        } else {
            run = 1;
        }
        w = field::mul(w, run % p, p);
    }
    if w == 0 {
        1
    } else {
        w
    }
}

/// Sorts basis indices into canonical order, returning the accumulated sign
/// (`−(−1)^{|a||b|}` per adjacent transposition), or `None` if an even index repeats.
pub fn canonicalize(l: &SuperAlgebra, args: &[usize]) -> Option<(u32, Monomial)> {
    let p = l.p();
    let mut v = args.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            let both_odd = l.parity(v[j - 1]) == Parity::Odd && l.parity(v[j]) == Parity::Odd;
            if !both_odd {
                negative = !negative;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2)
        .any(|w| w[0] == w[1] && l.parity(w[0]) == Parity::Even)
    {
        return None;
    }
    Some((if negative { p - 1 } else { 1 }, Monomial(v)))
}

/// Ordered basis of C^q(L; M): monomials tensored with the module basis.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    weights: Vec<u32>,
    mono_parity: Vec<Parity>,
    module_parity: Vec<Parity>,
}

fn even_combinations(n0: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n0: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n0 {
            cur.push(i);
            go(i + 1, n0, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n0, k, &mut Vec::new(), &mut out);
    out
}

fn odd_multisets(n0: usize, n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n0, n, k, &mut Vec::new(), &mut out);
    out
}

impl CochainSpace {
    pub fn new(l: &SuperAlgebra, m: &Representation, q: usize) -> Result<Self, CochainError> {
        if q > MAX_DEGREE {
            return Err(CochainError::UnsupportedDegree(q));
        }
        let n0 = l.n_even();
        let n = l.dim();
        let mut monomials = Vec::new();
        for n_even in (0..=q).rev() {
            let evens = even_combinations(n0, n_even);
            let odds = odd_multisets(n0, n, q - n_even);
            for e in &evens {
                for o in &odds {
                    let mut t = e.clone();
                    t.extend_from_slice(o);
                    monomials.push(Monomial(t));
                }
            }
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let weights = monomials.iter().map(|t| weight(l, &t.0)).collect();
        let mono_parity = monomials.iter().map(|t| t.parity(l)).collect();
        let module_parity = (0..m.dim()).map(|a| m.parity(a)).collect();
        Ok(CochainSpace {
            degree: q,
            monomials,
            index,
            weights,
            mono_parity,
            module_parity,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn module_dim(&self) -> usize {
        self.module_parity.len()
    }

    pub fn len(&self) -> usize {
        self.monomials.len() * self.module_dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn monomial_index(&self, t: &Monomial) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn coordinate(&self, t: &Monomial, a: usize) -> Option<usize> {
        if a >= self.module_dim() {
            return None;
        }
        self.monomial_index(t).map(|i| i * self.module_dim() + a)
    }

    /// `(monomial, module index)` of a coordinate.
    pub fn split(&self, coord: usize) -> (&Monomial, usize) {
        let d = self.module_dim();
        (&self.monomials[coord / d], coord % d)
    }

    pub fn weight(&self, mono: usize) -> u32 {
        self.weights[mono]
    }

    pub fn coordinate_parity(&self, coord: usize) -> Parity {
        let d = self.module_dim();
        self.mono_parity[coord / d].plus(self.module_parity[coord % d])
    }

    pub fn coordinate_parities(&self) -> Vec<Parity> {
        (0..self.len()).map(|c| self.coordinate_parity(c)).collect()
    }
}

/// Basis of C^q(L; M) in its canonical order.
pub fn enumerate_basis(
    l: &SuperAlgebra,
    m: &Representation,
    q: usize,
) -> Result<Vec<(Monomial, usize)>, CochainError> {
    let space = CochainSpace::new(l, m, q)?;
    Ok((0..space.len())
        .map(|c| {
            let (t, a) = space.split(c);
            (t.clone(), a)
        })
        .collect())
}

#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub parity: Option<Parity>,
    pub coords: Vec<u32>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Cochain(q={}, {:?}, {:?})",
            self.degree, self.parity, self.coords
        )
    }
}

impl Cochain {
    pub fn zero(space: &CochainSpace) -> Self {
        Cochain {
            degree: space.degree,
            parity: Some(Parity::Even),
            coords: vec![0; space.len()],
        }
    }

    /// Cochain with the given coordinates; parity is inferred (`None` if mixed).
    pub fn from_coords(space: &CochainSpace, coords: Vec<u32>) -> Result<Self, CochainError> {
        if coords.len() != space.len() {
            return Err(CochainError::Length {
                expected: space.len(),
                found: coords.len(),
            });
        }
        let parity = infer_parity(space, &coords);
        Ok(Cochain {
            degree: space.degree,
            parity,
            coords,
        })
    }

    pub fn with_parity(
        space: &CochainSpace,
        coords: Vec<u32>,
        parity: Parity,
    ) -> Result<Self, CochainError> {
        let mut c = Self::from_coords(space, coords)?;
        match c.parity {
            Some(q) if q != parity && !is_zero(&c.coords) => {
                return Err(CochainError::ParityMismatch { declared: parity })
            }
            None => return Err(CochainError::ParityMismatch { declared: parity }),
            _ => {}
        }
        c.parity = Some(parity);
        Ok(c)
    }

    /// Sum of `value · (dual monomial ⊗ module basis vector)`.
    pub fn from_terms(
        space: &CochainSpace,
        l: &SuperAlgebra,
        terms: &[(&[usize], usize, u32)],
    ) -> Result<Self, CochainError> {
        let p = l.p();
        let mut coords = vec![0u32; space.len()];
        for &(t, a, v) in terms {
            let mono = Monomial(t.to_vec());
            if canonicalize(l, t).map(|(s, m)| s == 1 && m == mono) != Some(true) {
                return Err(CochainError::NotCanonical(t.to_vec()));
            }
            let c = space
                .coordinate(&mono, a)
                .ok_or_else(|| CochainError::NotCanonical(t.to_vec()))?;
            coords[c] = field::add(coords[c], v % p, p);
        }
        Self::from_coords(space, coords)
    }

    /// Value on basis arguments.
    pub fn value_on_basis(
        &self,
        space: &CochainSpace,
        l: &SuperAlgebra,
        args: &[usize],
    ) -> Vec<u32> {
        basis_value(space, l, &self.coords, args)
    }

    /// The cochain taking the value `f(t)` on each canonical basis tuple `t`.
    pub fn from_values(
        space: &CochainSpace,
        l: &SuperAlgebra,
        f: impl Fn(&[usize]) -> Vec<u32>,
    ) -> Result<Self, CochainError> {
        let p = l.p();
        let d = space.module_dim();
        let mut coords = vec![0u32; space.len()];
        for (ti, t) in space.monomials.iter().enumerate() {
            let v = f(t.indices());
            if v.len() != d {
                return Err(CochainError::Length {
                    expected: d,
                    found: v.len(),
                });
            }
            let w = field::inv(space.weights[ti], p).expect("weights are nonzero");
            for a in 0..d {
                coords[ti * d + a] = field::mul(v[a] % p, w, p);
            }
        }
        Self::from_coords(space, coords)
    }

    /// Multilinear evaluation on arbitrary coordinate vectors.
    pub fn evaluate(
        &self,
        space: &CochainSpace,
        l: &SuperAlgebra,
        args: &[&[u32]],
    ) -> Result<Vec<u32>, CochainError> {
        if args.len() != self.degree {
            return Err(CochainError::Arity {
                expected: self.degree,
                found: args.len(),
            });
        }
        Ok(evaluate_coords(space, l, &self.coords, args))
    }
}

fn infer_parity(space: &CochainSpace, coords: &[u32]) -> Option<Parity> {
    let mut seen = [false, false];
    for (c, &v) in coords.iter().enumerate() {
        if v != 0 {
            seen[space.coordinate_parity(c).bit()] = true;
        }
    }
    match seen {
        [_, false] => Some(Parity::Even),
        [false, true] => Some(Parity::Odd),
        _ => None,
    }
}

pub(crate) fn basis_value(
    space: &CochainSpace,
    l: &SuperAlgebra,
    coords: &[u32],
    args: &[usize],
) -> Vec<u32> {
    let d = space.module_dim();
    let p = l.p();
    let mut out = vec![0u32; d];
    if let Some((s, t)) = canonicalize(l, args) {
        let mi = space.index[&t];
        let f = field::mul(s, space.weights[mi], p);
        for a in 0..d {
            out[a] = field::mul(f, coords[mi * d + a], p);
        }
    }
    out
}

pub(crate) fn evaluate_coords(
    space: &CochainSpace,
    l: &SuperAlgebra,
    coords: &[u32],
    args: &[&[u32]],
) -> Vec<u32> {
    let p = l.p();
    let d = space.module_dim();
    let mut out = vec![0u32; d];
    let supports: Vec<Vec<(usize, u32)>> = args
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; args.len()];
    if supports.iter().any(|s| s.is_empty()) && !args.is_empty() {
        return out;
    }
    loop {
        let mut coef = 1u32;
        let mut tuple = Vec::with_capacity(args.len());
        for (k, s) in supports.iter().enumerate() {
            let (i, c) = s[idx[k]];
            coef = field::mul(coef, c, p);
            tuple.push(i);
        }
        let v = basis_value(space, l, coords, &tuple);
        axpy(&mut out, coef, &v, p);
        let mut k = args.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < supports[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Matrix of d^q: C^q(L; M) → C^{q+1}(L; M).
pub fn differential_matrix(
    l: &SuperAlgebra,
    m: &Representation,
    q: usize,
) -> Result<Matrix, CochainError> {
    if q >= MAX_DEGREE {
        return Err(CochainError::UnsupportedDegree(q));
    }
    let source = CochainSpace::new(l, m, q)?;
    let target = CochainSpace::new(l, m, q + 1)?;
    Ok(differential_between(l, m, &source, &target))
}

pub(crate) fn differential_between(
    l: &SuperAlgebra,
    m: &Representation,
    source: &CochainSpace,
    target: &CochainSpace,
) -> Matrix {
    let p = l.p();
    let d = m.dim();
    let mut out = Matrix::zeros(target.len(), source.len(), p);
    let trivial = m.is_trivial();
    for (si, s) in target.monomials.iter().enumerate() {
        let xs = s.indices();
        let k = xs.len();
        let par: Vec<usize> = xs.iter().map(|&i| l.parity(i).bit()).collect();
        let prefix = |i: usize| par[..i].iter().sum::<usize>();
        let ws_inv = field::inv(target.weights[si], p).expect("weights are nonzero");

        for i in 0..k {
            for j in i + 1..k {
                let sigma = (i + 1) + (j + 1) + par[i] * prefix(i) + par[j] * (prefix(j) + par[i]);
                let br = l.bracket_basis(xs[i], xs[j]);
                let rest: Vec<usize> = (0..k)
                    .filter(|&r| r != i && r != j)
                    .map(|r| xs[r])
                    .collect();
                for (b, &c) in br.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut args = vec![b];
                    args.extend_from_slice(&rest);
                    let Some((sg, t)) = canonicalize(l, &args) else {
                        continue;
                    };
                    let ti = source.index[&t];
                    let f = [field::sign(sigma, p), sg, c, source.weights[ti], ws_inv]
                        .iter()
                        .fold(1, |acc, &v| field::mul(acc, v, p));
                    for a in 0..d {
                        out.add_at(si * d + a, ti * d + a, f);
                    }
                }
            }
        }

        if trivial {
            continue;
        }
        for i in 0..k {
            let rest: Vec<usize> = (0..k).filter(|&r| r != i).map(|r| xs[r]).collect();
            let Some((sg, t)) = canonicalize(l, &rest) else {
                continue;
            };
            let ti = source.index[&t];
            let rho = m.rho_basis(xs[i]);
            for a in 0..d {
                let phi_par = source.mono_parity[ti].plus(m.parity(a)).bit();
                let gamma = (i + 1) + 1 + par[i] * (prefix(i) + phi_par);
                let f = [field::sign(gamma, p), sg, source.weights[ti], ws_inv]
                    .iter()
                    .fold(1, |acc, &v| field::mul(acc, v, p));
                for b in 0..d {
                    let c = rho.get(b, a);
                    if c != 0 {
                        out.add_at(si * d + b, ti * d + a, field::mul(f, c, p));
                    }
                }
            }
        }
    }
    out
}
