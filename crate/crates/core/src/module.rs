//! Finitely presented modules `A^n / im R` and maps between them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::ring::algebra::ideal_generators;
use crate::ring::groebner::{groebner, pack, pack_iter, unpack, Gb};
use crate::ring::{Algebra, AlgebraMap, Matrix, Monomial, Poly, Scalar, Solver};

struct ModInner {
    ring: Algebra,
    ngens: usize,
    relations: Matrix,
    gb: OnceLock<Result<Gb>>,
    kbasis: OnceLock<Result<Option<Vec<(usize, Monomial)>>>>,
}

/// A finitely presented module: generators `e_0 … e_{n-1}` and relations
/// given as the columns of an `n × r` matrix. Cheap to clone.
#[derive(Clone)]
pub struct FPModule(Arc<ModInner>);

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FPModule")
            .field("ring", &self.0.ring.name())
            .field("ngens", &self.0.ngens)
            .field("relations", &self.0.relations.cols())
            .finish()
    }
}

impl FPModule {
    pub fn new(ring: &Algebra, ngens: usize, relations: Matrix) -> Result<FPModule> {
        if relations.rows() != ngens {
            return Err(Error::Invalid(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                ngens
            )));
        }
        let cols: Vec<Vec<Poly>> = relations
            .columns()
            .into_iter()
            .map(|c| c.iter().map(|p| ring.nf(p)).collect::<Vec<_>>())
            .filter(|c| c.iter().any(|p| !p.is_zero()))
            .collect();
        Ok(FPModule(Arc::new(ModInner {
            ring: ring.clone(),
            ngens,
            relations: Matrix::from_columns(ngens, &cols),
            gb: OnceLock::new(),
            kbasis: OnceLock::new(),
        })))
    }

    pub fn free(ring: &Algebra, n: usize) -> FPModule {
        Self::new(ring, n, Matrix::zero(n, 0)).expect("shape is consistent")
    }

    pub fn zero(ring: &Algebra) -> FPModule {
        Self::free(ring, 0)
    }

    pub fn ring(&self) -> &Algebra {
        &self.0.ring
    }

    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn relations(&self) -> &Matrix {
        &self.0.relations
    }

    pub fn same(&self, other: &FPModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn gb(&self) -> Result<&Gb> {
        self.0
            .gb
            .get_or_init(|| {
                let ring = &self.0.ring;
                let mut gens: Vec<_> = self.0.relations.columns().iter().map(|c| pack(c, 0)).collect();
                gens.extend(ideal_generators(ring, 0..self.0.ngens as u32));
                groebner(ring.ring(), gens, ring.budget())
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Unique representative of the class of `v`.
    pub fn nf(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        assert_eq!(v.len(), self.ngens(), "vector length does not match generator count");
        let ring = &self.0.ring;
        if self.0.relations.cols() == 0 {
            return Ok(v.iter().map(|p| ring.nf(p)).collect());
        }
        let gb = self.gb()?;
        Ok(unpack(&gb.reduce(ring.ring(), pack(v, 0)), 0, self.ngens()))
    }

    pub fn is_zero(&self, v: &[Poly]) -> Result<bool> {
        if v.iter().all(|p| p.is_zero()) {
            return Ok(true);
        }
        if self.0.relations.cols() == 0 {
            return Ok(v.iter().all(|p| self.0.ring.is_zero(p)));
        }
        Ok(self.nf(v)?.iter().all(|p| p.is_zero()))
    }

    pub fn equal(&self, a: &[Poly], b: &[Poly]) -> Result<bool> {
        self.is_zero(&self.0.ring.vec_sub(a, b))
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        for i in 0..self.ngens() {
            if !self.is_zero(&self.0.ring.unit_vector(self.ngens(), i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Standard monomials `(component, monomial)` spanning the module over
    /// the coefficient field, or `None` when the module is infinite
    /// dimensional over it.
    pub fn kbasis(&self) -> Result<Option<&[(usize, Monomial)]>> {
        self.0
            .kbasis
            .get_or_init(|| self.compute_kbasis())
            .as_ref()
            .map(|o| o.as_deref())
            .map_err(|e| e.clone())
    }

    fn compute_kbasis(&self) -> Result<Option<Vec<(usize, Monomial)>>> {
        let ring = &self.0.ring;
        let nv = ring.nvars();
        let mut leads: Vec<Vec<Monomial>> = vec![Vec::new(); self.ngens()];
        if self.0.relations.cols() == 0 {
            for c in 0..self.ngens() {
                for g in ring.groebner_basis() {
                    leads[c].push(g.terms()[0].0.clone());
                }
            }
        } else {
            for e in self.gb()?.elems() {
                leads[e[0].comp as usize].push(e[0].mono.clone());
            }
        }
        let mut out = Vec::new();
        for (c, ls) in leads.iter().enumerate() {
            if ls.iter().any(|m| m.is_one()) {
                continue;
            }
            // finite iff every variable has a pure power among the leads
            let mut bound = vec![0u16; nv];
            for (i, b) in bound.iter_mut().enumerate() {
                let pure = ls
                    .iter()
                    .filter(|m| m.exponents().iter().enumerate().all(|(j, &e)| j == i || e == 0))
                    .map(|m| m.exponents()[i])
                    .min();
                match pure {
                    Some(e) => *b = e,
                    None => return Ok(None),
                }
            }
            let mut monos = Vec::new();
            let mut exps = vec![0u16; nv];
            loop {
                let m = Monomial::from_exponents(&exps);
                if !ls.iter().any(|l| l.divides(&m)) {
                    monos.push(m);
                }
                let mut i = 0;
                while i < nv {
                    exps[i] += 1;
                    if exps[i] < bound[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if i == nv {
                    break;
                }
            }
            monos.sort_by(|a, b| ring.ring().cmp(a, b));
            out.extend(monos.into_iter().map(|m| (c, m)));
        }
        Ok(Some(out))
    }

    pub fn kdim(&self) -> Result<Option<usize>> {
        Ok(self.kbasis()?.map(|b| b.len()))
    }

    /// Coordinates of `v` along [`FPModule::kbasis`].
    pub fn kcoords(&self, v: &[Poly]) -> Result<Vec<Scalar>> {
        let basis = self
            .kbasis()?
            .ok_or_else(|| Error::Capability("module is not finite dimensional over the field".into()))?;
        let index: HashMap<(usize, &Monomial), usize> =
            basis.iter().enumerate().map(|(k, (c, m))| ((*c, m), k)).collect();
        let field = self.0.ring.field();
        let mut out = vec![field.zero(); basis.len()];
        for (c, p) in self.nf(v)?.iter().enumerate() {
            for (m, s) in p.terms() {
                let k = index[&(c, m)];
                out[k] = s.clone();
            }
        }
        Ok(out)
    }

    pub fn from_kcoords(&self, coords: &[Scalar]) -> Result<Vec<Poly>> {
        let basis = self
            .kbasis()?
            .ok_or_else(|| Error::Capability("module is not finite dimensional over the field".into()))?;
        let ring = self.0.ring.ring();
        let mut v = vec![Poly::zero(); self.ngens()];
        for ((c, m), s) in basis.iter().zip(coords) {
            v[*c] = ring.add(&v[*c], &ring.monomial(m.clone(), s.clone()));
        }
        Ok(v)
    }
}

/// A module map given by a `target.ngens × source.ngens` matrix.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    /// Builds a map and checks that relations go to relations.
    pub fn new(source: &FPModule, target: &FPModule, matrix: Matrix) -> Result<ModuleMap> {
        let f = Self::new_unchecked(source, target, matrix)?;
        if !f.is_well_defined()? {
            return Err(Error::Invalid("matrix does not send relations to relations".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: &FPModule, target: &FPModule, matrix: Matrix) -> Result<ModuleMap> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::Invalid(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let ring = source.ring();
        let matrix = ring.normalize_matrix(matrix);
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    pub fn is_well_defined(&self) -> Result<bool> {
        let ring = self.source.ring();
        let img = ring.mat_mul(&self.matrix, self.source.relations());
        for c in 0..img.cols() {
            if !self.target.is_zero(&img.column(c))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn identity(m: &FPModule) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.ring(), m.ngens()),
        }
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zero(target.ngens(), source.ngens()),
        }
    }

    pub fn ring(&self) -> &Algebra {
        self.source.ring()
    }

    pub fn apply(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        self.target.nf(&self.ring().mat_vec(&self.matrix, v))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert_eq!(other.target.ngens(), self.source.ngens(), "maps do not compose");
        ModuleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.ring().mat_mul(&self.matrix, &other.matrix),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.ring().mat_add(&self.matrix, &other.matrix),
        }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.ring().mat_sub(&self.matrix, &other.matrix),
        }
    }

    pub fn scale(&self, s: &Poly) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.ring().mat_scale(&self.matrix, s),
        }
    }

    /// Every generator maps to zero in the target.
    pub fn is_zero(&self) -> Result<bool> {
        if self.matrix.is_zero() {
            return Ok(true);
        }
        for c in 0..self.matrix.cols() {
            if !self.target.is_zero(&self.matrix.column(c))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &ModuleMap) -> Result<bool> {
        self.sub(other).is_zero()
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> Result<(FPModule, ModuleMap)> {
        let ring = self.ring();
        let solver = Solver::new(ring, &self.matrix, self.target.relations())?;
        let k = solver.kernel(ring);
        let gens = prune_generators(&self.source, &k.columns())?;
        let km = Matrix::from_columns(self.source.ngens(), &gens);
        let rels = Solver::new(ring, &km, self.source.relations())?.kernel(ring);
        let module = FPModule::new(ring, gens.len(), rels)?;
        let inclusion = ModuleMap::new_unchecked(&module, &self.source, km)?;
        Ok((module, inclusion))
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> Result<(FPModule, ModuleMap)> {
        let ring = self.ring();
        let module = FPModule::new(ring, self.target.ngens(), self.target.relations().hstack(&self.matrix))?;
        let proj = ModuleMap {
            source: self.target.clone(),
            target: module.clone(),
            matrix: Matrix::identity(ring, self.target.ngens()),
        };
        Ok((module, proj))
    }

    pub fn is_injective(&self) -> Result<bool> {
        self.kernel()?.0.is_zero_module()
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.cokernel()?.0.is_zero_module()
    }

    /// Some `h` with `self ∘ h = g`, for `g` into the target of `self`.
    pub fn lift(&self, g: &ModuleMap) -> Result<Option<ModuleMap>> {
        let ring = self.ring();
        let solver = Solver::new(ring, &self.matrix, self.target.relations())?;
        match solver.solve_matrix(ring, &g.matrix) {
            Some(h) => Ok(Some(ModuleMap::new_unchecked(&g.source, &self.source, h)?)),
            None => Ok(None),
        }
    }

    /// Two-sided inverse, when `self` is an isomorphism.
    pub fn inverse(&self) -> Result<Option<ModuleMap>> {
        let Some(g) = self.lift(&ModuleMap::identity(&self.target))? else {
            return Ok(None);
        };
        if !g.is_well_defined()? {
            return Ok(None);
        }
        if !g.compose(self).equals(&ModuleMap::identity(&self.source))? {
            return Ok(None);
        }
        Ok(Some(g))
    }
}

/// Drops generators that are zero or lie in the span of the relations and
/// the generators kept before them.
fn prune_generators(m: &FPModule, cols: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>> {
    let mut kept: Vec<Vec<Poly>> = Vec::new();
    let mut span = m.clone();
    for c in cols {
        if span.is_zero(c)? {
            continue;
        }
        kept.push(c.clone());
        let rels = m.relations().hstack(&Matrix::from_columns(m.ngens(), &kept));
        span = FPModule::new(m.ring(), m.ngens(), rels)?;
    }
    // representatives reduced modulo the original relations
    kept.iter().map(|c| m.nf(c)).collect()
}

/// `Hom_A(M, N)` presented as a submodule of `N^m`; generator `q`
/// corresponds to the map whose matrix has entry `(l, i)` equal to row
/// `i·n + l` of inclusion column `q`.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: FPModule,
    pub target: FPModule,
    pub module: FPModule,
    pub inclusion: Matrix,
    power: FPModule,
    solver: Arc<Solver>,
}

pub fn hom_module(m: &FPModule, n: &FPModule) -> Result<HomModule> {
    let ring = m.ring();
    let (mg, ng) = (m.ngens(), n.ngens());
    let power = direct_power(n, mg)?;
    let (module, inclusion) = if m.relations().cols() == 0 {
        (power.clone(), Matrix::identity(ring, mg * ng))
    } else {
        let r = m.relations();
        let target = direct_power(n, r.cols())?;
        let phi = Matrix::from_fn(r.cols() * ng, mg * ng, |row, col| {
            let (k, l) = (row / ng, row % ng);
            let (i, l2) = (col / ng, col % ng);
            if l == l2 {
                r.get(i, k).clone()
            } else {
                Poly::zero()
            }
        });
        let (module, inc) = ModuleMap::new_unchecked(&power, &target, phi)?.kernel()?;
        (module, inc.matrix)
    };
    let solver = Solver::new(ring, &inclusion, power.relations())?;
    Ok(HomModule {
        source: m.clone(),
        target: n.clone(),
        module,
        inclusion,
        power,
        solver: Arc::new(solver),
    })
}

impl HomModule {
    /// The map represented by an element of the hom module.
    pub fn to_map(&self, h: &[Poly]) -> Result<ModuleMap> {
        let ring = self.source.ring();
        let v = ring.mat_vec(&self.inclusion, h);
        let (mg, ng) = (self.source.ngens(), self.target.ngens());
        let mat = Matrix::from_fn(ng, mg, |l, i| v[i * ng + l].clone());
        ModuleMap::new_unchecked(&self.source, &self.target, mat)
    }

    /// The element representing a map; fails on maps that are not well
    /// defined.
    pub fn from_map(&self, f: &ModuleMap) -> Result<Vec<Poly>> {
        self.from_block(&f.matrix, 0)
    }

    /// [`HomModule::from_map`] for the map whose matrix is the block of
    /// `m` starting at column `first`.
    pub(crate) fn from_block(&self, m: &Matrix, first: usize) -> Result<Vec<Poly>> {
        let ring = self.source.ring();
        let (mg, ng) = (self.source.ngens(), self.target.ngens());
        let v = (0..mg).flat_map(|i| (0..ng).map(move |l| m.get(l, first + i)));
        self.solver
            .solve_packed(ring, pack_iter(v, 0))
            .ok_or_else(|| Error::Invalid("map is not a module homomorphism".into()))
    }

    /// `h(m)`.
    pub fn evaluate(&self, h: &[Poly], m: &[Poly]) -> Result<Vec<Poly>> {
        self.to_map(h)?.apply(m)
    }

    pub fn ambient(&self) -> &FPModule {
        &self.power
    }
}

fn direct_power(n: &FPModule, k: usize) -> Result<FPModule> {
    direct_sum(&vec![n.clone(); k], n.ring())
}

/// `M_1 ⊕ … ⊕ M_k`, generators concatenated in order.
pub fn direct_sum(ms: &[FPModule], ring: &Algebra) -> Result<FPModule> {
    let blocks: Vec<&Matrix> = ms.iter().map(|m| m.relations()).collect();
    let rels = Matrix::block_diag(&blocks);
    let n = ms.iter().map(|m| m.ngens()).sum();
    FPModule::new(ring, n, rels)
}

/// Injections `M_i → ⊕ M` and projections `⊕ M → M_i`.
pub fn sum_maps(ms: &[FPModule], sum: &FPModule) -> (Vec<ModuleMap>, Vec<ModuleMap>) {
    let ring = sum.ring();
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    let mut off = 0;
    for m in ms {
        let mut i = Matrix::zero(sum.ngens(), m.ngens());
        let mut p = Matrix::zero(m.ngens(), sum.ngens());
        for k in 0..m.ngens() {
            i.set(off + k, k, ring.one());
            p.set(k, off + k, ring.one());
        }
        inj.push(ModuleMap {
            source: m.clone(),
            target: sum.clone(),
            matrix: i,
        });
        proj.push(ModuleMap {
            source: sum.clone(),
            target: m.clone(),
            matrix: p,
        });
        off += m.ngens();
    }
    (inj, proj)
}

/// `M ⊗_A N`, generator `(j, l)` at index `j·n + l`.
pub fn tensor(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    let ring = m.ring();
    let a = ring.kron(m.relations(), &Matrix::identity(ring, n.ngens()));
    let b = ring.kron(&Matrix::identity(ring, m.ngens()), n.relations());
    FPModule::new(ring, m.ngens() * n.ngens(), a.hstack(&b))
}

pub fn tensor_map(f: &ModuleMap, g: &ModuleMap, source: &FPModule, target: &FPModule) -> ModuleMap {
    ModuleMap {
        source: source.clone(),
        target: target.clone(),
        matrix: f.ring().kron(&f.matrix, &g.matrix),
    }
}

/// `B ⊗_A M` along `φ: A → B`.
pub fn base_change(phi: &AlgebraMap, m: &FPModule) -> Result<FPModule> {
    FPModule::new(&phi.target, m.ngens(), phi.apply_matrix(m.relations()))
}

pub fn base_change_map(phi: &AlgebraMap, f: &ModuleMap, source: &FPModule, target: &FPModule) -> ModuleMap {
    ModuleMap {
        source: source.clone(),
        target: target.clone(),
        matrix: phi.apply_matrix(&f.matrix),
    }
}

/// A section of the projection from the free module on the generators,
/// when one exists. Its existence certifies that `M` is projective.
pub fn projectivity_certificate(m: &FPModule) -> Result<Option<ModuleMap>> {
    let ring = m.ring();
    let n = m.ngens();
    let r = m.relations();
    let free = FPModule::free(ring, n);
    if r.cols() == 0 {
        return Ok(Some(ModuleMap {
            source: m.clone(),
            target: free,
            matrix: Matrix::identity(ring, n),
        }));
    }
    let rc = r.cols();
    // vec(R·Y·R) = (Rᵀ ⊗ R)·vec(Y) with Y of shape rc × n, column-major
    let lhs = Matrix::from_fn(n * rc, rc * n, |row, col| {
        let (b, a) = (row / n, row % n);
        let (j, i) = (col / rc, col % rc);
        ring.mul(r.get(a, i), r.get(j, b))
    });
    let mut rhs = vec![Poly::zero(); n * rc];
    for b in 0..rc {
        for a in 0..n {
            rhs[b * n + a] = r.get(a, b).clone();
        }
    }
    let solver = Solver::new(ring, &lhs, &Matrix::zero(n * rc, 0))?;
    let Some(y) = solver.solve(ring, &rhs) else {
        return Ok(None);
    };
    let ym = Matrix::from_fn(rc, n, |i, j| y[j * rc + i].clone());
    let s = ring.mat_sub(&Matrix::identity(ring, n), &ring.mat_mul(r, &ym));
    Ok(Some(ModuleMap {
        source: m.clone(),
        target: free,
        matrix: s,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Budget, Field, MonomialOrder, PolyRing, PresentedAlgebra};

    fn dual() -> Algebra {
        let f = Field::Rationals;
        let r = PolyRing::new(f, vec!["x".into()], MonomialOrder::degrevlex(1));
        let x = r.var(0);
        PresentedAlgebra::new("D", f, vec!["x".into()], vec![r.mul(&x, &x)], MonomialOrder::degrevlex(1), Budget::default())
            .unwrap()
    }

    #[test]
    fn kernel_and_cokernel_of_x() {
        let a = dual();
        let x = a.var(0);
        let m = FPModule::free(&a, 1);
        let f = ModuleMap::new(&m, &m, Matrix::from_rows(&[vec![x.clone()]], 1)).unwrap();
        let (k, inc) = f.kernel().unwrap();
        assert_eq!(k.kdim().unwrap(), Some(1));
        assert!(f.compose(&inc).is_zero().unwrap());
        assert!(inc.is_injective().unwrap());
        let (c, p) = f.cokernel().unwrap();
        assert_eq!(c.kdim().unwrap(), Some(1));
        assert!(p.compose(&f).is_zero().unwrap());
    }

    #[test]
    fn hom_of_dual_numbers_is_two_dimensional() {
        let a = dual();
        let m = FPModule::free(&a, 1);
        let h = hom_module(&m, &m).unwrap();
        assert_eq!(h.module.kdim().unwrap(), Some(2));
        let q = PresentedAlgebra::ground("Q", Field::Rationals);
        let qm = FPModule::free(&q, 2);
        assert_eq!(hom_module(&qm, &qm).unwrap().module.ngens(), 4);
    }

    #[test]
    fn residue_field_has_no_certificate() {
        let a = dual();
        let x = a.var(0);
        let m = FPModule::new(&a, 1, Matrix::from_rows(&[vec![x]], 1)).unwrap();
        assert!(projectivity_certificate(&m).unwrap().is_none());
        let free = FPModule::free(&a, 2);
        assert!(projectivity_certificate(&free).unwrap().is_some());
    }

    #[test]
    fn vector_space_quotients_split() {
        let q = PresentedAlgebra::ground("Q", Field::Rationals);
        let rel = Matrix::from_columns(2, &[vec![q.from_i64(1), q.from_i64(1)]]);
        let m = FPModule::new(&q, 2, rel).unwrap();
        let s = projectivity_certificate(&m).unwrap().unwrap();
        assert!(s.is_well_defined().unwrap());
        let proj = ModuleMap::identity(&m);
        let back = ModuleMap::new_unchecked(&s.target, &m, proj.matrix.clone()).unwrap();
        assert!(back.compose(&s).equals(&ModuleMap::identity(&m)).unwrap());
    }
}
