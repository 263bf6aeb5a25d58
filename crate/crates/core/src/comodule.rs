//! Left comodules `ψ: M → A1 ⊗_{η_R} M` and equivariant maps.
//!
//! The coaction is a matrix `C` over `A1` with `ψ(e_j) = Σ_k C[k][j] ⊗ e_k`.
//! `A0` acts on the target through `η_L`, so `ψ(a·m) = η_L(a)·ψ(m)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebroid::{Algebroid, AxiomReport};
use crate::error::{Error, Result};
use crate::kspace::keyed_matrix;
use crate::module::{base_change, direct_sum, FPModule, ModuleMap};
use crate::ring::{Algebra, Matrix, Poly, Scalar, Solver};

struct Inner {
    alg: Algebroid,
    module: FPModule,
    coaction: Matrix,
    /// `N` when this comodule is `A1 ⊗ N` with the extended structure
    base: Option<FPModule>,
    /// `A1 ⊗_{η_R} M` over `A1`
    over_a1: OnceLock<Result<FPModule>>,
    /// the same, flattened to an `A0`-module (free-finite case)
    flat: OnceLock<Result<FPModule>>,
}

/// A comodule over a Hopf algebroid. Cheap to clone.
#[derive(Clone)]
pub struct Comodule(Arc<Inner>);

impl fmt::Debug for Comodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Comodule")
            .field("ngens", &self.ngens())
            .field("relations", &self.module().relations().cols())
            .field("extended", &self.0.base.is_some())
            .finish()
    }
}

impl Comodule {
    /// Builds a comodule; the axioms are checked separately by
    /// [`Comodule::check`].
    pub fn new(alg: &Algebroid, module: FPModule, coaction: Matrix) -> Result<Comodule> {
        Self::with_base(alg, module, coaction, None)
    }

    fn with_base(alg: &Algebroid, module: FPModule, coaction: Matrix, base: Option<FPModule>) -> Result<Comodule> {
        let n = module.ngens();
        if coaction.rows() != n || coaction.cols() != n {
            return Err(Error::Invalid(format!(
                "coaction is {}x{}, expected {n}x{n}",
                coaction.rows(),
                coaction.cols()
            )));
        }
        if !Arc::ptr_eq(module.ring(), &alg.a0) {
            return Err(Error::Invalid("underlying module is not over A0".into()));
        }
        let a1 = &alg.a1;
        let coaction = Matrix::from_fn(n, n, |r, c| a1.nf(coaction.get(r, c)));
        Ok(Comodule(Arc::new(Inner {
            alg: alg.clone(),
            module,
            coaction,
            base,
            over_a1: OnceLock::new(),
            flat: OnceLock::new(),
        })))
    }

    /// `A0` with `ψ(1) = 1 ⊗ 1`.
    pub fn unit(alg: &Algebroid) -> Comodule {
        let m = FPModule::free(&alg.a0, 1);
        Self::new(alg, m, Matrix::identity(&alg.a1, 1)).expect("unit comodule")
    }

    pub fn zero(alg: &Algebroid) -> Comodule {
        Self::new(alg, FPModule::zero(&alg.a0), Matrix::zero(0, 0)).expect("zero comodule")
    }

    pub fn algebroid(&self) -> &Algebroid {
        &self.0.alg
    }

    pub fn module(&self) -> &FPModule {
        &self.0.module
    }

    pub fn coaction(&self) -> &Matrix {
        &self.0.coaction
    }

    pub fn ngens(&self) -> usize {
        self.0.module.ngens()
    }

    pub fn a0(&self) -> &Algebra {
        &self.0.alg.a0
    }

    pub fn a1(&self) -> &Algebra {
        &self.0.alg.a1
    }

    /// `N` when this comodule was built as `extend(N)`.
    pub fn extended_base(&self) -> Option<&FPModule> {
        self.0.base.as_ref()
    }

    pub fn same(&self, other: &Comodule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Dimension of the underlying module over the coefficient field.
    pub fn kdim(&self) -> Result<Option<usize>> {
        self.module().kdim()
    }

    /// `A1 ⊗_{η_R} M` as an `A1`-module.
    pub fn over_a1(&self) -> Result<&FPModule> {
        self.0
            .over_a1
            .get_or_init(|| base_change(&self.0.alg.eta_r, self.module()))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// `A1 ⊗_{η_R} M` as an `A0`-module: the underlying module of
    /// `extend(UM)`.
    pub fn flat(&self) -> Result<&FPModule> {
        self.0
            .flat
            .get_or_init(|| extended_module(&self.0.alg, self.module()))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Checks well-definedness, counitality and coassociativity.
    pub fn check(&self) -> Result<AxiomReport> {
        let alg = &self.0.alg;
        let (a0, a1) = (&alg.a0, &alg.a1);
        let m = self.module();
        let c = self.coaction();
        let n = self.ngens();
        let mut rep = AxiomReport::default();

        let img = a1.mat_mul(c, &alg.eta_l.apply_matrix(m.relations()));
        let over = self.over_a1()?;
        let mut w = None;
        for k in 0..img.cols() {
            if !over.is_zero(&img.column(k))? {
                w = Some(format!("relation {k} is not respected"));
                break;
            }
        }
        rep.push("coaction well-defined", w);

        let eps = alg.counit.apply_matrix(c);
        let diff = a0.mat_sub(&eps, &Matrix::identity(a0, n));
        let mut w = None;
        for j in 0..n {
            if !m.is_zero(&diff.column(j))? {
                w = Some(format!("generator {j}"));
                break;
            }
        }
        rep.push("counit", w);

        let t2 = alg.t2();
        let lhs = alg.comult.apply_matrix(c);
        let rhs = t2.mat_mul(&alg.right().apply_matrix(c), &alg.left().apply_matrix(c));
        let over2 = base_change(&alg.eta_r.then(alg.right()), m)?;
        let diff = t2.mat_sub(&lhs, &rhs);
        let mut w = None;
        for j in 0..n {
            if !over2.is_zero(&diff.column(j))? {
                w = Some(format!("generator {j}"));
                break;
            }
        }
        rep.push("coassociativity", w);
        Ok(rep)
    }

    /// `ψ(v) ∈ A1 ⊗ M` for `v ∈ A0^n`.
    pub fn coact(&self, v: &[Poly]) -> Vec<Poly> {
        let alg = &self.0.alg;
        alg.a1.mat_vec(self.coaction(), &alg.eta_l.apply_vec(v))
    }

    /// Coordinates over the field of an element of `A1 ⊗_{η_R} M`, keyed
    /// so that equal elements give equal maps.
    pub fn a1_kcoords(&self, v: &[Poly]) -> Result<BTreeMap<(i64, usize), Scalar>> {
        let alg = &self.0.alg;
        let mut out = BTreeMap::new();
        if alg.is_free_finite() {
            let y = alg.flatten(v)?;
            for (i, s) in self.flat()?.kcoords(&y)?.into_iter().enumerate() {
                if !s.is_zero() {
                    out.insert((0, i), s);
                }
            }
            return Ok(out);
        }
        if alg.laurent().is_none() {
            return Err(Error::Capability(format!(
                "algebroid {} is neither free-finite nor Laurent; coordinates over the field are unavailable",
                alg.name
            )));
        }
        let a0 = &alg.a0;
        let n = v.len();
        let mut by_weight: BTreeMap<i64, Vec<Poly>> = BTreeMap::new();
        for (l, p) in v.iter().enumerate() {
            for (w, c) in alg.weight_parts(p)? {
                let e = by_weight.entry(w).or_insert_with(|| vec![Poly::zero(); n]);
                e[l] = a0.add(&e[l], &a0.constant(c));
            }
        }
        for (w, vec) in by_weight {
            for (i, s) in self.module().kcoords(&vec)?.into_iter().enumerate() {
                if !s.is_zero() {
                    out.insert((w, i), s);
                }
            }
        }
        Ok(out)
    }
}

/// `A1 ⊗_{η_R} N` as an `A0`-module through `η_L`: generators `b_i ⊗ e_l`
/// at index `i·n + l`.
fn extended_module(alg: &Algebroid, n: &FPModule) -> Result<FPModule> {
    let free = alg.free()?;
    let a1 = &alg.a1;
    let d = free.basis.len();
    let rels = alg.eta_r.apply_matrix(n.relations());
    let mut cols = Vec::new();
    for b in &free.basis {
        for k in 0..rels.cols() {
            let v = a1.vec_scale(&rels.column(k), b);
            cols.push(alg.flatten(&v)?);
        }
    }
    FPModule::new(&alg.a0, d * n.ngens(), Matrix::from_columns(d * n.ngens(), &cols))
}

/// The extended comodule `A1 ⊗ N` with coaction `Δ ⊗ id`.
pub fn extend(alg: &Algebroid, n: &FPModule) -> Result<Comodule> {
    let free = alg.free()?;
    let module = extended_module(alg, n)?;
    let d = free.basis.len();
    let k = n.ngens();
    let mut c = Matrix::zero(d * k, d * k);
    for i in 0..d {
        for ip in 0..d {
            let e = &free.delta[i][ip];
            if e.is_zero() {
                continue;
            }
            for l in 0..k {
                c.set(ip * k + l, i * k + l, e.clone());
            }
        }
    }
    let out = Comodule::with_base(alg, module, c, Some(n.clone()))?;
    Ok(out)
}

/// An equivariant map.
#[derive(Clone, Debug)]
pub struct ComoduleMap {
    pub source: Comodule,
    pub target: Comodule,
    pub map: ModuleMap,
}

impl ComoduleMap {
    /// Builds a map, rejecting matrices that are not well defined or not
    /// equivariant.
    pub fn new(source: &Comodule, target: &Comodule, matrix: Matrix) -> Result<ComoduleMap> {
        let f = Self::new_unchecked(source, target, matrix)?;
        if !f.map.is_well_defined()? {
            return Err(Error::Invalid("matrix does not send relations to relations".into()));
        }
        if !f.is_equivariant()? {
            return Err(Error::Invalid("map is not equivariant".into()));
        }
        Ok(f)
    }

    pub fn new_unchecked(source: &Comodule, target: &Comodule, matrix: Matrix) -> Result<ComoduleMap> {
        let map = ModuleMap::new_unchecked(source.module(), target.module(), matrix)?;
        Ok(ComoduleMap {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.map.matrix
    }

    /// `η_R(F)·C_M − C_N·η_L(F)`, the failure of equivariance.
    fn defect(&self) -> Matrix {
        let alg = self.source.algebroid();
        let a1 = &alg.a1;
        let l = a1.mat_mul(&alg.eta_r.apply_matrix(self.matrix()), self.source.coaction());
        let r = a1.mat_mul(self.target.coaction(), &alg.eta_l.apply_matrix(self.matrix()));
        a1.mat_sub(&l, &r)
    }

    pub fn is_equivariant(&self) -> Result<bool> {
        let d = self.defect();
        let over = self.target.over_a1()?;
        for j in 0..d.cols() {
            if !over.is_zero(&d.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn identity(m: &Comodule) -> ComoduleMap {
        ComoduleMap {
            source: m.clone(),
            target: m.clone(),
            map: ModuleMap::identity(m.module()),
        }
    }

    pub fn zero(source: &Comodule, target: &Comodule) -> ComoduleMap {
        ComoduleMap {
            source: source.clone(),
            target: target.clone(),
            map: ModuleMap::zero(source.module(), target.module()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ComoduleMap) -> ComoduleMap {
        ComoduleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&other.map),
        }
    }

    pub fn add(&self, other: &ComoduleMap) -> ComoduleMap {
        ComoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.add(&other.map),
        }
    }

    pub fn sub(&self, other: &ComoduleMap) -> ComoduleMap {
        ComoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.sub(&other.map),
        }
    }

    /// Multiplication by a field element.
    pub fn scale(&self, s: &Scalar) -> ComoduleMap {
        let a0 = self.source.a0();
        ComoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.scale(&a0.constant(s.clone())),
        }
    }

    pub fn neg(&self) -> ComoduleMap {
        self.scale(&-&self.source.a0().field().one())
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.map.is_zero()
    }

    pub fn equals(&self, other: &ComoduleMap) -> Result<bool> {
        self.map.equals(&other.map)
    }

    /// Two-sided inverse, when the map is an isomorphism.
    pub fn inverse(&self) -> Result<Option<ComoduleMap>> {
        Ok(self.map.inverse()?.map(|g| ComoduleMap {
            source: self.target.clone(),
            target: self.source.clone(),
            map: g,
        }))
    }

    /// Some `h` with `self ∘ h = g`.
    pub fn lift(&self, g: &ComoduleMap) -> Result<Option<ComoduleMap>> {
        Ok(self.map.lift(&g.map)?.map(|h| ComoduleMap {
            source: g.source.clone(),
            target: self.source.clone(),
            map: h,
        }))
    }
}

/// `A1 ⊗ g: extend(N) → extend(N')`; the extended comodules must be
/// built on the source and target of `g`.
pub fn extend_map(g: &ModuleMap, source: &Comodule, target: &Comodule) -> Result<ComoduleMap> {
    let alg = source.algebroid();
    let free = alg.free()?;
    let a1 = &alg.a1;
    let gm = alg.eta_r.apply_matrix(&g.matrix);
    let mut cols = Vec::new();
    for b in &free.basis {
        for x in 0..g.matrix.cols() {
            cols.push(alg.flatten(&a1.vec_scale(&gm.column(x), b))?);
        }
    }
    let rows = free.basis.len() * g.matrix.rows();
    // column (i, x) sits at index i·|source| + x
    ComoduleMap::new_unchecked(source, target, Matrix::from_columns(rows, &cols))
}

/// `ε ⊗ id: U extend(N) → N`.
pub fn counit_map(ext: &Comodule) -> Result<ModuleMap> {
    let alg = ext.algebroid();
    let free = alg.free()?;
    let n = ext
        .extended_base()
        .ok_or_else(|| Error::Invalid("comodule is not extended".into()))?;
    let k = n.ngens();
    let d = free.basis.len();
    let m = Matrix::from_fn(k, d * k, |l, col| {
        let (i, l2) = (col / k, col % k);
        if l == l2 {
            free.eps[i].clone()
        } else {
            Poly::zero()
        }
    });
    ModuleMap::new_unchecked(ext.module(), n, m)
}

/// `Hom_coMod(M, extend N) → Hom_A0(UM, N)`, `f ↦ (ε ⊗ id)∘f`.
pub fn transpose_forward(f: &ComoduleMap) -> Result<ModuleMap> {
    if !f.is_equivariant()? {
        return Err(Error::Invalid("map is not equivariant".into()));
    }
    Ok(counit_map(&f.target)?.compose(&f.map))
}

/// `Hom_A0(UM, N) → Hom_coMod(M, extend N)`, `g ↦ (id ⊗ g)∘ψ_M`.
pub fn transpose_back(m: &Comodule, g: &ModuleMap, ext: &Comodule) -> Result<ComoduleMap> {
    let alg = m.algebroid();
    let a1 = &alg.a1;
    let v = a1.mat_mul(&alg.eta_r.apply_matrix(&g.matrix), m.coaction());
    let flat = alg.flatten_matrix(&v)?;
    ComoduleMap::new_unchecked(m, ext, flat)
}

/// `ψ_M: M → extend(UM)`, the unit of the adjunction.
pub fn coaction_map(m: &Comodule, ext: &Comodule) -> Result<ComoduleMap> {
    transpose_back(m, &ModuleMap::identity(m.module()), ext)
}

/// Kernel of an equivariant map, with the restricted coaction.
pub fn kernel_comodule(f: &ComoduleMap) -> Result<(Comodule, ComoduleMap)> {
    let alg = f.source.algebroid();
    let (a0, a1) = (&alg.a0, &alg.a1);
    let (k, inc) = f.map.kernel()?;
    let m = &f.source;
    let v = a1.mat_mul(m.coaction(), &alg.eta_l.apply_matrix(&inc.matrix));
    let kc = k.ngens();
    let coaction = if alg.is_free_finite() {
        let x = {
            let d = alg.rank().unwrap();
            let gm = alg.eta_r.apply_matrix(&inc.matrix);
            let mut cols = Vec::new();
            for b in alg.basis().unwrap() {
                for c in 0..kc {
                    cols.push(alg.flatten(&a1.vec_scale(&gm.column(c), b))?);
                }
            }
            Matrix::from_columns(d * m.ngens(), &cols)
        };
        let solver = Solver::new(a0, &x, m.flat()?.relations())?;
        let mut cols = Vec::new();
        for a in 0..kc {
            let target = alg.flatten(&v.column(a))?;
            let y = solver.solve(a0, &target).ok_or_else(|| {
                Error::Integrity("coaction does not restrict to the kernel; flatness declaration is false".into())
            })?;
            cols.push(alg.unflatten(&y, kc)?);
        }
        Matrix::from_columns(kc, &cols)
    } else if let Ok(parts) = crate::graded::weight_components(alg, m.coaction()) {
        // each weight projector commutes with f, so it restricts to the kernel
        let mut lifted = BTreeMap::new();
        for (w, p) in parts {
            let pw = ModuleMap::new_unchecked(m.module(), m.module(), p)?.compose(&inc);
            let h = inc
                .lift(&pw)?
                .ok_or_else(|| Error::Integrity("weight projector does not preserve the kernel".into()))?;
            lifted.insert(w, h.matrix);
        }
        crate::graded::assemble(alg, &lifted, kc, kc)?
    } else {
        let solver = Solver::new(a1, &alg.eta_r.apply_matrix(&inc.matrix), &alg.eta_r.apply_matrix(m.module().relations()))?;
        let mut cols = Vec::new();
        for a in 0..kc {
            let y = solver.solve(a1, &v.column(a)).ok_or_else(|| {
                Error::Integrity("coaction does not restrict to the kernel; flatness declaration is false".into())
            })?;
            cols.push(y);
        }
        Matrix::from_columns(kc, &cols)
    };
    let kcom = Comodule::new(alg, k, coaction)?;
    let inclusion = ComoduleMap {
        source: kcom.clone(),
        target: m.clone(),
        map: ModuleMap::new_unchecked(kcom.module(), m.module(), inc.matrix)?,
    };
    Ok((kcom, inclusion))
}

/// Cokernel of an equivariant map, with the projection.
pub fn cokernel_comodule(f: &ComoduleMap) -> Result<(Comodule, ComoduleMap)> {
    let (q, p) = f.map.cokernel()?;
    let alg = f.source.algebroid();
    let c = Comodule::new(alg, q, f.target.coaction().clone())?;
    let proj = ComoduleMap {
        source: f.target.clone(),
        target: c.clone(),
        map: ModuleMap::new_unchecked(f.target.module(), c.module(), p.matrix)?,
    };
    Ok((c, proj))
}

/// `M_1 ⊕ … ⊕ M_k`.
pub fn direct_sum_comodule(alg: &Algebroid, ms: &[Comodule]) -> Result<Comodule> {
    let mods: Vec<FPModule> = ms.iter().map(|m| m.module().clone()).collect();
    let module = direct_sum(&mods, &alg.a0)?;
    let blocks: Vec<&Matrix> = ms.iter().map(|m| m.coaction()).collect();
    Comodule::new(alg, module, Matrix::block_diag(&blocks))
}

/// Injections into and projections out of a direct sum built by
/// [`direct_sum_comodule`].
pub fn sum_maps(ms: &[Comodule], sum: &Comodule) -> (Vec<ComoduleMap>, Vec<ComoduleMap>) {
    let mods: Vec<FPModule> = ms.iter().map(|m| m.module().clone()).collect();
    let (inj, proj) = crate::module::sum_maps(&mods, sum.module());
    let inj = inj
        .into_iter()
        .zip(ms)
        .map(|(f, m)| ComoduleMap {
            source: m.clone(),
            target: sum.clone(),
            map: f,
        })
        .collect();
    let proj = proj
        .into_iter()
        .zip(ms)
        .map(|(f, m)| ComoduleMap {
            source: sum.clone(),
            target: m.clone(),
            map: f,
        })
        .collect();
    (inj, proj)
}

/// Primitive elements `{ v : ψ(v) = 1 ⊗ v }`, as a basis over the field.
///
/// This is linear over the field but not over `A0`, so the result is a
/// list of elements of `UN` rather than a module.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub basis: Vec<Vec<Poly>>,
}

impl Invariants {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn field_combination(a0: &Algebra, vectors: &[Vec<Poly>], coeffs: &[Scalar], n: usize) -> Vec<Poly> {
    let mut acc = vec![Poly::zero(); n];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let cv: Vec<Poly> = v.iter().map(|p| a0.scale(p, c)).collect();
        acc = a0.vec_add(&acc, &cv);
    }
    acc
}

pub fn invariants(n: &Comodule) -> Result<Invariants> {
    let alg = n.algebroid();
    let (a0, field) = (&alg.a0, alg.field());
    let dim = n
        .kdim()?
        .ok_or_else(|| Error::Capability("invariants need a comodule of finite dimension over the field".into()))?;
    let mut elems = Vec::with_capacity(dim);
    let mut cols = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = vec![field.zero(); dim];
        e[i] = field.one();
        let v = n.module().from_kcoords(&e)?;
        let diff = alg.a1.vec_sub(&n.coact(&v), &alg.eta_r.apply_vec(&v));
        cols.push(n.a1_kcoords(&diff)?);
        elems.push(v);
    }
    let m = keyed_matrix(field, &cols);
    let basis = m
        .nullspace()
        .iter()
        .map(|c| field_combination(a0, &elems, c, n.ngens()))
        .collect();
    Ok(Invariants { basis })
}

/// A basis over the field of `Hom_coMod(M, N)`.
pub fn comodule_homs(m: &Comodule, n: &Comodule) -> Result<Vec<ComoduleMap>> {
    let alg = m.algebroid();
    let field = alg.field();
    let hom = crate::module::hom_module(m.module(), n.module())?;
    let dim = hom
        .module
        .kdim()?
        .ok_or_else(|| Error::Capability("Hom module is not finite dimensional over the field".into()))?;
    let mut maps = Vec::with_capacity(dim);
    let mut cols = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = vec![field.zero(); dim];
        e[i] = field.one();
        let h = hom.module.from_kcoords(&e)?;
        let f = ComoduleMap {
            source: m.clone(),
            target: n.clone(),
            map: hom.to_map(&h)?,
        };
        let d = f.defect();
        let mut keyed = BTreeMap::new();
        for j in 0..d.cols() {
            for ((w, k), s) in n.a1_kcoords(&d.column(j))? {
                keyed.insert((j, w, k), s);
            }
        }
        cols.push(keyed);
        maps.push(f);
    }
    let km = keyed_matrix(field, &cols);
    let mut out = Vec::new();
    for c in km.nullspace() {
        let mut acc = ComoduleMap::zero(m, n);
        for (f, s) in maps.iter().zip(&c) {
            if !s.is_zero() {
                acc = acc.add(&f.scale(s));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// The element of `N` picked out by a map `A0 → N`, and back.
pub fn invariant_to_map(n: &Comodule, v: &[Poly]) -> Result<ComoduleMap> {
    let unit = Comodule::unit(n.algebroid());
    ComoduleMap::new(&unit, n, Matrix::from_columns(n.ngens(), &[v.to_vec()]))
}

pub fn map_to_invariant(f: &ComoduleMap) -> Vec<Poly> {
    f.matrix().column(0)
}
