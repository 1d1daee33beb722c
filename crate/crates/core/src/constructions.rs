//! Restricted superderivations, module extensions from restricted 1-cocycles,
//! central extensions from restricted 2-cocycles, and equivalences between them.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::cochain::{Cochain, CochainError, CochainSpace};
use crate::field;
use crate::linalg::{is_zero, rank_kernel_image, solve, unit, vec_sub, Matrix};
use crate::report::CheckReport;
use crate::repr::{ReprError, Representation};
use crate::restricted::{d_star, RestrictedError, RestrictedSpace, RestrictedTwoCochain};
use crate::superalg::{is_strongly_abelian, AlgebraError, Parity, SuperAlgebra, SuperBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("input is not a restricted cocycle")]
    NotACocycle,
    #[error("kernel algebra is not strongly abelian")]
    NotStronglyAbelian,
    #[error("cochain is not even")]
    NotEven,
    #[error("cochain is not homogeneous")]
    NotHomogeneous,
    #[error("matrix is not a parity-preserving section of the projection")]
    NotASection,
    #[error("algebra has no p-map")]
    NoPMap,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Restricted(#[from] RestrictedError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superderivation {
    pub matrix: Matrix,
    pub parity: Parity,
}

/// Basis of Der_res(L), even derivations first.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub derivations: Vec<Superderivation>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.derivations.len()
    }

    pub fn dim_of(&self, parity: Parity) -> usize {
        self.derivations
            .iter()
            .filter(|d| d.parity == parity)
            .count()
    }

    /// Whether `m` is a linear combination of the basis.
    pub fn contains(&self, m: &Matrix) -> bool {
        let n = m.rows();
        let p = m.modulus();
        let flat = |a: &Matrix| -> Vec<u32> { (0..n * n).map(|k| a.get(k / n, k % n)).collect() };
        let cols: Vec<Vec<u32>> = self.derivations.iter().map(|d| flat(&d.matrix)).collect();
        let span = Matrix::from_columns(&cols, n * n, p);
        solve(&span, &flat(m)).is_some()
    }
}

fn derivation_defect(l: &SuperAlgebra, d: &Matrix, parity: Parity) -> Vec<u32> {
    let p = l.p();
    let n = l.dim();
    let mut out = Vec::with_capacity(n * n * n + l.n_even() * n);
    for i in 0..n {
        let di = d.column(i);
        for j in 0..n {
            let dj = d.column(j);
            let lhs = d.mul_vec(l.bracket_basis(i, j));
            let s = field::sign(parity.bit() * l.parity(i).bit(), p);
            let a = l.bracket_coords(&unit(n, i), &dj);
            let b = l.bracket_coords(&di, &unit(n, j));
            let mut v = vec_sub(&lhs, &crate::linalg::scaled(&a, s, p), p);
            v = vec_sub(&v, &b, p);
            out.extend(v);
        }
    }
    for z in 0..l.n_even() {
        let zp = l.pmap_basis(z).expect("restricted algebra");
        let lhs = d.mul_vec(zp);
        let rhs = l.ad_basis(z).pow(p as u64 - 1).mul_vec(&d.column(z));
        out.extend(vec_sub(&lhs, &rhs, p));
    }
    out
}

/// Solves the derivation identity on basis pairs and the p-condition on even
/// basis elements.
pub fn restricted_derivations(l: &SuperAlgebra) -> Result<DerivationSpace, ConstructionError> {
    if !l.has_pmap() {
        return Err(ConstructionError::NoPMap);
    }
    let p = l.p();
    let n = l.dim();
    let mut derivations = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let vars: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| l.parity(r) == l.parity(c).plus(parity))
            .collect();
        let cols: Vec<Vec<u32>> = vars
            .iter()
            .map(|&(r, c)| {
                let mut d = Matrix::zeros(n, n, p);
                d.set(r, c, 1);
                derivation_defect(l, &d, parity)
            })
            .collect();
        let rows = n * n * n + l.n_even() * n;
        let system = Matrix::from_columns(&cols, rows, p);
        for v in rank_kernel_image(&system).kernel.basis() {
            let mut d = Matrix::zeros(n, n, p);
            for (k, &(r, c)) in vars.iter().enumerate() {
                d.set(r, c, v[k]);
            }
            derivations.push(Superderivation { matrix: d, parity });
        }
    }
    Ok(DerivationSpace { derivations })
}

pub fn is_restricted_derivation(l: &SuperAlgebra, d: &Superderivation) -> bool {
    is_zero(&derivation_defect(l, &d.matrix, d.parity))
}

/// Samples the derivation identity on random homogeneous vectors and the
/// p-condition on random even vectors.
pub fn derivation_check(
    l: &SuperAlgebra,
    d: &Superderivation,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<CheckReport, ConstructionError> {
    let p = l.p();
    let n = l.dim();
    let random = |rng: &mut dyn rand::RngCore, parity: Parity| -> Vec<u32> {
        (0..n)
            .map(|i| {
                if l.parity(i) == parity {
                    rng.gen_range(0..p)
                } else {
                    0
                }
            })
            .collect()
    };
    let mut report = CheckReport::new();
    let (mut w1, mut w2) = (None, None);
    for _ in 0..samples {
        let px = if rng.gen::<bool>() {
            Parity::Even
        } else {
            Parity::Odd
        };
        let py = if rng.gen::<bool>() {
            Parity::Even
        } else {
            Parity::Odd
        };
        let x = random(rng, px);
        let y = random(rng, py);
        let lhs = d.matrix.mul_vec(&l.bracket_coords(&x, &y));
        let s = field::sign(d.parity.bit() * px.bit(), p);
        let a = crate::linalg::scaled(&l.bracket_coords(&x, &d.matrix.mul_vec(&y)), s, p);
        let b = l.bracket_coords(&d.matrix.mul_vec(&x), &y);
        if w1.is_none() && lhs != crate::linalg::vec_add(&a, &b, p) {
            w1 = Some(format!(
                "x = {}, y = {}",
                l.basis().describe(&x),
                l.basis().describe(&y)
            ));
        }
        let z = random(rng, Parity::Even);
        let zp = l.p_power_coords(&z)?;
        let rhs = l
            .ad_coords(&z)
            .pow(p as u64 - 1)
            .mul_vec(&d.matrix.mul_vec(&z));
        if w2.is_none() && d.matrix.mul_vec(&zp) != rhs {
            w2 = Some(format!("z = {}", l.basis().describe(&z)));
        }
    }
    report.record("D[x,y] = (-1)^{|D||x|}[x,Dy] + [Dx,y]", w1);
    report.record("D(z^[p]) = (ad z)^{p-1} D z", w2);
    Ok(report)
}

/// Inclusion and projection of `0 → A → E → B → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionDatum {
    pub inclusion: Matrix,
    pub projection: Matrix,
}

impl ExtensionDatum {
    pub fn check_exact(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let comp = self.projection.mul(&self.inclusion);
        r.record(
            "projection after inclusion is zero",
            (!comp.is_zero()).then(|| "nonzero composite".to_string()),
        );
        let ri = self.inclusion.rank();
        let rp = self.projection.rank();
        r.record(
            "inclusion injective",
            (ri != self.inclusion.cols()).then(|| format!("rank {ri}")),
        );
        r.record(
            "projection surjective",
            (rp != self.projection.rows()).then(|| format!("rank {rp}")),
        );
        let total = self.inclusion.rows();
        r.record(
            "exact in the middle",
            (total - rp != ri).then(|| format!("kernel {} vs image {ri}", total - rp)),
        );
        r
    }
}

/// `N ⊕ M` with basis N_even, M_even, N_odd, M_odd.
#[derive(Clone, Debug)]
pub struct ModuleExtension {
    pub module: Representation,
    pub datum: ExtensionDatum,
    n_index: Vec<usize>,
    m_index: Vec<usize>,
}

impl ModuleExtension {
    pub fn n_index(&self, b: usize) -> usize {
        self.n_index[b]
    }

    pub fn m_index(&self, a: usize) -> usize {
        self.m_index[a]
    }
}

fn extension_layout(
    n: &Representation,
    m: &Representation,
) -> (SuperBasis, Vec<usize>, Vec<usize>) {
    let (n0, m0) = (n.basis().n_even(), m.basis().n_even());
    let (n1, _) = (n.basis().n_odd(), m.basis().n_odd());
    let n_index = (0..n.dim())
        .map(|b| if b < n0 { b } else { m0 + b })
        .collect();
    let m_index = (0..m.dim())
        .map(|a| if a < m0 { n0 + a } else { n0 + n1 + a })
        .collect();
    let mut even: Vec<String> = n
        .basis()
        .even_names()
        .iter()
        .map(|s| format!("n:{s}"))
        .collect();
    even.extend(m.basis().even_names().iter().map(|s| format!("m:{s}")));
    let mut odd: Vec<String> = n
        .basis()
        .odd_names()
        .iter()
        .map(|s| format!("n:{s}"))
        .collect();
    odd.extend(m.basis().odd_names().iter().map(|s| format!("m:{s}")));
    (
        SuperBasis::new(even, odd).expect("prefixed names are unique"),
        n_index,
        m_index,
    )
}

/// `x(n, m) = (xn, xm + (−1)^{|φ|(|x|+|n|)} φ(x)(n))` on `E = N ⊕ M`, for a
/// restricted 1-cocycle φ with values in Hom(N, M).
pub fn module_extension_from_cocycle(
    n: &Representation,
    m: &Representation,
    phi: &Cochain,
) -> Result<ModuleExtension, ConstructionError> {
    let hom = Representation::hom(n, m)?;
    let l = hom.algebra().clone();
    let p = l.p();
    let space = CochainSpace::new(&l, &hom, 1)?;
    if phi.coords.len() != space.len() {
        return Err(CochainError::Length {
            expected: space.len(),
            found: phi.coords.len(),
        }
        .into());
    }
    if !is_zero(&d_star(&l, &hom, 1, &phi.coords)?) {
        return Err(ConstructionError::NotACocycle);
    }
    let phi_parity = phi.parity.ok_or(ConstructionError::NotHomogeneous)?;
    let pairs = hom.hom_pairs().expect("hom module").to_vec();
    let (basis, n_index, m_index) = extension_layout(n, m);
    let d = basis.dim();
    let mut action = Vec::with_capacity(l.dim());
    for x in 0..l.dim() {
        let mut mat = Matrix::zeros(d, d, p);
        let rn = n.rho_basis(x);
        let rm = m.rho_basis(x);
        for r in 0..n.dim() {
            for c in 0..n.dim() {
                mat.set(n_index[r], n_index[c], rn.get(r, c));
            }
        }
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                mat.set(m_index[r], m_index[c], rm.get(r, c));
            }
        }
        let value = phi.value_on_basis(&space, &l, &[x]);
        for (h, &(a, b)) in pairs.iter().enumerate() {
            if value[h] == 0 {
                continue;
            }
            let s = field::sign(
                phi_parity.bit() * (l.parity(x).bit() + n.parity(b).bit()),
                p,
            );
            mat.add_at(m_index[a], n_index[b], field::mul(s, value[h], p));
        }
        action.push(mat);
    }
    let module = Representation::new(l, basis, action)?;
    let mut inclusion = Matrix::zeros(d, m.dim(), p);
    for a in 0..m.dim() {
        inclusion.set(m_index[a], a, 1);
    }
    let mut projection = Matrix::zeros(n.dim(), d, p);
    for b in 0..n.dim() {
        projection.set(b, n_index[b], 1);
    }
    Ok(ModuleExtension {
        module,
        datum: ExtensionDatum {
            inclusion,
            projection,
        },
        n_index,
        m_index,
    })
}

/// `σ(n, m) = (n, m − (−1)^{θ|n|} f(n))` for `f: N → M` of parity θ, given as
/// a `dim M × dim N` matrix. For φ = d⁰f it maps the split module onto the
/// extension by φ.
pub fn module_sigma(
    ext: &ModuleExtension,
    n: &Representation,
    f: &Matrix,
    theta: Parity,
) -> Matrix {
    let p = f.modulus();
    let d = ext.module.dim();
    let mut s = Matrix::identity(d, p);
    for a in 0..f.rows() {
        for b in 0..f.cols() {
            let c = f.get(a, b);
            if c != 0 {
                let sg = field::sign(theta.bit() * n.parity(b).bit(), p);
                s.add_at(
                    ext.m_index[a],
                    ext.n_index[b],
                    field::neg(field::mul(sg, c, p), p),
                );
            }
        }
    }
    s
}

/// Whether `sigma` intertwines the two actions.
pub fn is_module_homomorphism(sigma: &Matrix, from: &Representation, to: &Representation) -> bool {
    from.action()
        .iter()
        .zip(to.action())
        .all(|(a, b)| sigma.mul(a) == b.mul(sigma))
}

/// Searches for an even `σ = id + (map N → M)` with `σ ρ_a = ρ_b σ`.
pub fn module_equivalence(a: &ModuleExtension, b: &ModuleExtension) -> Option<Matrix> {
    let ra = &a.module;
    let rb = &b.module;
    let p = ra.p();
    let d = ra.dim();
    let vars: Vec<(usize, usize)> = a
        .m_index
        .iter()
        .flat_map(|&mi| a.n_index.iter().map(move |&ni| (mi, ni)))
        .filter(|&(mi, ni)| ra.parity(mi) == ra.parity(ni))
        .collect();
    let flat = |m: &Matrix| -> Vec<u32> { (0..d * d).map(|k| m.get(k / d, k % d)).collect() };
    let mut rhs = Vec::new();
    for (x, y) in ra.action().iter().zip(rb.action()) {
        rhs.extend(flat(&y.sub(x)));
    }
    let cols: Vec<Vec<u32>> = vars
        .iter()
        .map(|&(r, c)| {
            let mut g = Matrix::zeros(d, d, p);
            g.set(r, c, 1);
            let mut col = Vec::new();
            for (x, y) in ra.action().iter().zip(rb.action()) {
                col.extend(flat(&g.mul(x).sub(&y.mul(&g))));
            }
            col
        })
        .collect();
    let system = Matrix::from_columns(&cols, rhs.len(), p);
    let sol = solve(&system, &rhs)?;
    let mut sigma = Matrix::identity(d, p);
    for (k, &(r, c)) in vars.iter().enumerate() {
        sigma.set(r, c, sol[k]);
    }
    debug_assert!(is_module_homomorphism(&sigma, ra, rb));
    Some(sigma)
}

/// `L_{α,β} = K ⊕ L` with basis K_even, L_even, K_odd, L_odd.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub algebra: SuperAlgebra,
    pub datum: ExtensionDatum,
    base: Arc<SuperAlgebra>,
    kernel: SuperAlgebra,
    k_index: Vec<usize>,
    l_index: Vec<usize>,
}

impl CentralExtension {
    pub fn base(&self) -> &Arc<SuperAlgebra> {
        &self.base
    }

    pub fn kernel(&self) -> &SuperAlgebra {
        &self.kernel
    }

    /// The module of values: K with the zero action of L.
    pub fn coefficients(&self) -> Representation {
        Representation::trivial_with_basis(self.base.clone(), self.kernel.basis().clone())
    }

    /// `l ↦ (0, l)`.
    pub fn canonical_section(&self) -> Matrix {
        let p = self.base.p();
        let mut s = Matrix::zeros(self.algebra.dim(), self.base.dim(), p);
        for (i, &e) in self.l_index.iter().enumerate() {
            s.set(e, i, 1);
        }
        s
    }

    /// `ρ + ι∘f` for a linear `f: L → K` given as a `dim K × dim L` matrix.
    pub fn shifted_section(&self, f: &Matrix) -> Matrix {
        self.canonical_section().add(&self.datum.inclusion.mul(f))
    }

    /// `σ(k, l) = (k − f(l), l)`, from this extension onto the one built
    /// from the cocycle of `shifted_section(f)`.
    pub fn sigma(&self, f: &Matrix) -> Matrix {
        let p = self.base.p();
        let mut s = Matrix::identity(self.algebra.dim(), p);
        for a in 0..f.rows() {
            for i in 0..f.cols() {
                let c = f.get(a, i);
                if c != 0 {
                    s.add_at(self.k_index[a], self.l_index[i], field::neg(c, p));
                }
            }
        }
        s
    }
}

fn check_even_pair(
    l: &SuperAlgebra,
    m: &Representation,
    coords: &[u32],
) -> Result<(), ConstructionError> {
    let par = RestrictedSpace::new(l, m, 2)?.coordinate_parities();
    if coords
        .iter()
        .zip(&par)
        .any(|(&v, &q)| v != 0 && q == Parity::Odd)
    {
        return Err(ConstructionError::NotEven);
    }
    Ok(())
}

/// Bracket `[(k₁,l₁),(k₂,l₂)] = (α(l₁,l₂), [l₁,l₂])` and p-map
/// `(k,l)^{[p]} = (−β(l), l^{[p]})` on the even basis.
pub fn central_extension(
    l: Arc<SuperAlgebra>,
    k: &SuperAlgebra,
    pair: &RestrictedTwoCochain,
) -> Result<CentralExtension, ConstructionError> {
    if !is_strongly_abelian(k) {
        return Err(ConstructionError::NotStronglyAbelian);
    }
    if !l.has_pmap() {
        return Err(ConstructionError::NoPMap);
    }
    let coeff = Representation::trivial_with_basis(l.clone(), k.basis().clone());
    let coords = pair.to_coords();
    let rs = RestrictedSpace::new(&l, &coeff, 2)?;
    if coords.len() != rs.len() {
        return Err(RestrictedError::Length {
            expected: rs.len(),
            found: coords.len(),
        }
        .into());
    }
    check_even_pair(&l, &coeff, &coords)?;
    if !is_zero(&d_star(&l, &coeff, 2, &coords)?) {
        return Err(ConstructionError::NotACocycle);
    }
    let p = l.p();
    let (k0, k1) = (k.basis().n_even(), k.basis().n_odd());
    let l0 = l.n_even();
    let k_index: Vec<usize> = (0..k.dim())
        .map(|a| if a < k0 { a } else { l0 + a })
        .collect();
    let l_index: Vec<usize> = (0..l.dim())
        .map(|i| if i < l0 { k0 + i } else { k0 + k1 + i })
        .collect();
    let mut even = k.basis().even_names().to_vec();
    even.extend(l.basis().even_names().iter().cloned());
    let mut odd = k.basis().odd_names().to_vec();
    odd.extend(l.basis().odd_names().iter().cloned());
    let basis = SuperBasis::new(even, odd)?;
    let n = basis.dim();
    let embed = |kv: &[u32], lv: &[u32]| {
        let mut out = vec![0u32; n];
        for (a, &c) in kv.iter().enumerate() {
            out[k_index[a]] = c;
        }
        for (i, &c) in lv.iter().enumerate() {
            out[l_index[i]] = c;
        }
        out
    };
    let space = rs.cochains();
    let mut brackets = Vec::new();
    for i in 0..l.dim() {
        for j in i..l.dim() {
            let a = pair.phi.value_on_basis(space, &l, &[i, j]);
            let v = embed(&a, l.bracket_basis(i, j));
            if !is_zero(&v) {
                brackets.push((l_index[i], l_index[j], v));
            }
        }
    }
    let mut pmap: Vec<(usize, Vec<u32>)> = (0..k0).map(|a| (k_index[a], vec![0; n])).collect();
    for i in 0..l0 {
        let minus_beta: Vec<u32> = pair.omega[i].iter().map(|&c| field::neg(c, p)).collect();
        pmap.push((l_index[i], embed(&minus_beta, l.pmap_basis(i).unwrap())));
    }
    let algebra = SuperAlgebra::new(p as u64, basis, brackets, Some(pmap))?;
    let mut inclusion = Matrix::zeros(n, k.dim(), p);
    for (a, &e) in k_index.iter().enumerate() {
        inclusion.set(e, a, 1);
    }
    let mut projection = Matrix::zeros(l.dim(), n, p);
    for (i, &e) in l_index.iter().enumerate() {
        projection.set(i, e, 1);
    }
    Ok(CentralExtension {
        algebra,
        datum: ExtensionDatum {
            inclusion,
            projection,
        },
        base: l,
        kernel: k.clone(),
        k_index,
        l_index,
    })
}

/// `α(x,y) = ι⁻¹([ρx, ρy] − ρ[x,y])`, `β(z) = ι⁻¹(ρ(z^{[p]}) − (ρz)^{[p]})`.
pub fn section_to_cocycle(
    ext: &CentralExtension,
    section: &Matrix,
) -> Result<RestrictedTwoCochain, ConstructionError> {
    let l = &ext.base;
    let e = &ext.algebra;
    let p = l.p();
    if section.rows() != e.dim()
        || section.cols() != l.dim()
        || ext.datum.projection.mul(section) != Matrix::identity(l.dim(), p)
    {
        return Err(ConstructionError::NotASection);
    }
    for c in 0..l.dim() {
        for r in 0..e.dim() {
            if section.get(r, c) != 0 && e.parity(r) != l.parity(c) {
                return Err(ConstructionError::NotASection);
            }
        }
    }
    let pull_back = |w: &[u32]| -> Vec<u32> {
        solve(&ext.datum.inclusion, w).expect("central difference lies in the kernel")
    };
    let coeff = ext.coefficients();
    let rs = RestrictedSpace::new(l, &coeff, 2)?;
    let phi = Cochain::from_values(rs.cochains(), l, |t| {
        let (i, j) = (t[0], t[1]);
        let a = e.bracket_coords(&section.column(i), &section.column(j));
        let b = section.mul_vec(l.bracket_basis(i, j));
        pull_back(&vec_sub(&a, &b, p))
    })?;
    let mut omega = Vec::with_capacity(l.n_even());
    for i in 0..l.n_even() {
        let a = section.mul_vec(l.pmap_basis(i).unwrap());
        let b = e.p_power_coords(&section.column(i))?;
        omega.push(pull_back(&vec_sub(&a, &b, p)));
    }
    Ok(RestrictedTwoCochain { phi, omega })
}

/// Checks `σ[u,v] = [σu,σv]` on basis pairs and `σ(u^{[p]}) = (σu)^{[p]}` on
/// the even basis.
pub fn is_restricted_homomorphism(
    sigma: &Matrix,
    from: &SuperAlgebra,
    to: &SuperAlgebra,
) -> Result<CheckReport, ConstructionError> {
    let n = from.dim();
    let mut report = CheckReport::new();
    let mut w = None;
    'outer: for i in 0..n {
        for j in i..n {
            let lhs = sigma.mul_vec(from.bracket_basis(i, j));
            let rhs = to.bracket_coords(&sigma.column(i), &sigma.column(j));
            if lhs != rhs {
                w = Some(format!(
                    "({}, {})",
                    from.basis().name(i),
                    from.basis().name(j)
                ));
                break 'outer;
            }
        }
    }
    report.record("sigma preserves brackets", w);
    let mut w = None;
    for i in 0..from.n_even() {
        let lhs = sigma.mul_vec(&from.p_power_coords(&unit(n, i))?);
        let rhs = to.p_power_coords(&sigma.column(i))?;
        if lhs != rhs {
            w = Some(from.basis().name(i).to_string());
            break;
        }
    }
    report.record("sigma preserves p-th powers", w);
    Ok(report)
}

/// Searches for `f: L → K` (even) such that `σ(k,l) = (k − f(l), l)` is a
/// restricted isomorphism from `a` to `b`.
pub fn central_equivalence(
    a: &CentralExtension,
    b: &CentralExtension,
) -> Result<Option<Matrix>, ConstructionError> {
    let l = &a.base;
    let p = l.p();
    let kd = a.kernel.dim();
    let ld = l.dim();
    let n = a.algebra.dim();
    let defect = |f: &Matrix| -> Result<Vec<u32>, ConstructionError> {
        let s = a.sigma(f);
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let lhs = s.mul_vec(a.algebra.bracket_basis(i, j));
                let rhs = b.algebra.bracket_coords(&s.column(i), &s.column(j));
                out.extend(vec_sub(&lhs, &rhs, p));
            }
        }
        for i in 0..a.algebra.n_even() {
            let lhs = s.mul_vec(&a.algebra.p_power_coords(&unit(n, i))?);
            let rhs = b.algebra.p_power_coords(&s.column(i))?;
            out.extend(vec_sub(&lhs, &rhs, p));
        }
        Ok(out)
    };
    let vars: Vec<(usize, usize)> = (0..kd)
        .flat_map(|r| (0..ld).map(move |c| (r, c)))
        .filter(|&(r, c)| a.kernel.parity(r) == l.parity(c))
        .collect();
    let zero = Matrix::zeros(kd, ld, p);
    let base = defect(&zero)?;
    let mut cols = Vec::with_capacity(vars.len());
    for &(r, c) in &vars {
        let mut f = zero.clone();
        f.set(r, c, 1);
        cols.push(vec_sub(&defect(&f)?, &base, p));
    }
    let system = Matrix::from_columns(&cols, base.len(), p);
    let rhs: Vec<u32> = base.iter().map(|&c| field::neg(c, p)).collect();
    let Some(sol) = solve(&system, &rhs) else {
        return Ok(None);
    };
    let mut f = zero;
    for (k, &(r, c)) in vars.iter().enumerate() {
        f.set(r, c, sol[k]);
    }
    let sigma = a.sigma(&f);
    if !is_restricted_homomorphism(&sigma, &a.algebra, &b.algebra)?.passed() {
        return Ok(None);
    }
    Ok(Some(sigma))
}
