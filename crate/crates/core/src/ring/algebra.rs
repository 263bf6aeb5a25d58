//! Finitely presented commutative algebras k[x]/I, their elements and maps.

use std::fmt;
use std::sync::Arc;

use super::groebner::{groebner, pack, unpack, Budget, Gb, MVec};
use super::poly::{Monomial, MonomialOrder, Poly, PolyRing};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// k[x_1, …, x_n]/I with a reduced Gröbner basis of I computed at
/// construction.
#[derive(Debug)]
pub struct PresentedAlgebra {
    name: String,
    ring: PolyRing,
    relations: Vec<Poly>,
    basis: Vec<Poly>,
    gb: Gb,
    budget: Budget,
    /// Normal form of 1; zero exactly when the relations generate everything.
    one: Poly,
}

pub type Algebra = Arc<PresentedAlgebra>;

impl PresentedAlgebra {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        names: Vec<String>,
        relations: Vec<Poly>,
        order: MonomialOrder,
        budget: Budget,
    ) -> Result<Algebra> {
        if !order.is_valid_for(names.len()) {
            return Err(Error::Invalid("monomial order ranking must permute the variables".into()));
        }
        let ring = PolyRing::new(field, names, order);
        let relations: Vec<Poly> = relations.iter().map(|p| ring.resort(p)).collect();
        let gb = groebner(
            &ring,
            relations.iter().map(|p| pack(std::slice::from_ref(p), 0)).collect(),
            budget,
        )?;
        let basis = gb
            .elems()
            .iter()
            .map(|v| unpack(v, 0, 1).pop().unwrap())
            .collect();
        let one = unpack(&gb.reduce(&ring, pack(&[ring.one()], 0)), 0, 1).pop().unwrap();
        Ok(Arc::new(PresentedAlgebra {
            name: name.into(),
            ring,
            relations,
            basis,
            gb,
            budget,
            one,
        }))
    }

    /// The field itself, as an algebra with no variables.
    pub fn ground(name: impl Into<String>, field: Field) -> Algebra {
        Self::new(name, field, vec![], vec![], MonomialOrder::degrevlex(0), Budget::default())
            .expect("no relations")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn var_names(&self) -> &[String] {
        &self.ring.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.ring.names.iter().position(|n| n == name)
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    /// Reduced Gröbner basis of the relation ideal.
    pub fn groebner_basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// True when the algebra is the ground field.
    pub fn is_field(&self) -> bool {
        self.nvars() == 0
    }

    pub fn nf(&self, p: &Poly) -> Poly {
        if self.is_normal(p) {
            return p.clone();
        }
        unpack(&self.gb.reduce(&self.ring, pack(std::slice::from_ref(p), 0)), 0, 1)
            .pop()
            .unwrap()
    }

    /// No term is divisible by a leading monomial of the basis.
    pub fn is_normal(&self, p: &Poly) -> bool {
        !p.terms()
            .iter()
            .any(|(m, _)| self.basis.iter().any(|g| g.leading().is_some_and(|(l, _)| l.divides(m))))
    }

    /// [`PresentedAlgebra::nf`] without copying polynomials that are
    /// already reduced.
    pub fn normalize(&self, p: Poly) -> Poly {
        if self.is_normal(&p) {
            p
        } else {
            self.nf(&p)
        }
    }

    pub fn normalize_matrix(&self, mut m: Matrix) -> Matrix {
        for p in m.data.iter_mut() {
            if !self.is_normal(p) {
                *p = self.nf(p);
            }
        }
        m
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        p.is_zero() || (!self.is_normal(p) && self.nf(p).is_zero())
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.one.clone()
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        self.ring.scale(&self.one, &c)
    }

    pub fn from_i64(&self, n: i64) -> Poly {
        self.constant(self.field().from_i64(n))
    }

    pub fn var(&self, i: usize) -> Poly {
        self.nf(&self.ring.var(i))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.add(a, b)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.sub(a, b)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.ring.neg(a)
    }

    pub fn scale(&self, a: &Poly, s: &Scalar) -> Poly {
        self.ring.scale(a, s)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.nf(&self.ring.mul(a, b))
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn element(self: &Arc<Self>, p: Poly) -> AlgebraElement {
        AlgebraElement {
            poly: self.nf(&p),
            parent: self.clone(),
        }
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> impl fmt::Display + 'a {
        self.ring.display(p)
    }

    /// Every S-polynomial of the cached basis reduces to zero.
    pub fn basis_is_groebner(&self) -> bool {
        self.gb.is_groebner(&self.ring)
    }
}

/// Reduced Gröbner basis of an ideal given by generators.
pub fn groebner_basis(ring: &PolyRing, relations: &[Poly], budget: Budget) -> Result<Vec<Poly>> {
    let gb = groebner(
        ring,
        relations.iter().map(|p| pack(std::slice::from_ref(&ring.resort(p)), 0)).collect(),
        budget,
    )?;
    Ok(gb.elems().iter().map(|v| unpack(v, 0, 1).pop().unwrap()).collect())
}

/// An element of a presented algebra, always in normal form.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    parent: Algebra,
    poly: Poly,
}

impl AlgebraElement {
    pub fn parent(&self) -> &Algebra {
        &self.parent
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            poly: self.parent.add(&self.poly, &other.poly),
            parent: self.parent.clone(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            poly: self.parent.sub(&self.poly, &other.poly),
            parent: self.parent.clone(),
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            poly: self.parent.mul(&self.poly, &other.poly),
            parent: self.parent.clone(),
        }
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.poly == other.poly
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.parent.display(&self.poly))
    }
}

/// A k-algebra map given by the images of the source variables.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub source: Algebra,
    pub target: Algebra,
    images: Vec<Poly>,
}

/// Outcome of [`AlgebraMap::check`].
#[derive(Clone, Debug, PartialEq)]
pub struct MapReport {
    /// (relation index, relation, its image) for each relation not sent to zero.
    pub violations: Vec<(usize, String, String)>,
}

impl MapReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl AlgebraMap {
    pub fn new(source: Algebra, target: Algebra, images: Vec<Poly>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::Invalid(format!(
                "map {} -> {} needs {} images, got {}",
                source.name(),
                target.name(),
                source.nvars(),
                images.len()
            )));
        }
        if source.field() != target.field() {
            return Err(Error::Invalid("algebra map between different base fields".into()));
        }
        let images = images.iter().map(|p| target.nf(&target.ring().resort(p))).collect();
        Ok(AlgebraMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(a: &Algebra) -> Self {
        let images = (0..a.nvars()).map(|i| a.var(i)).collect();
        AlgebraMap {
            source: a.clone(),
            target: a.clone(),
            images,
        }
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Image of a polynomial in the source variables, in target normal form.
    pub fn apply(&self, p: &Poly) -> Poly {
        substitute(&self.target, p, &self.images)
    }

    pub fn apply_matrix(&self, m: &Matrix) -> Matrix {
        Matrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|p| self.apply(p)).collect(),
        }
    }

    pub fn apply_vec(&self, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| self.apply(p)).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraMap) -> AlgebraMap {
        AlgebraMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|p| other.apply(p)).collect(),
        }
    }

    /// Lists every source relation whose image is nonzero.
    pub fn check(&self) -> MapReport {
        let violations = self
            .source
            .relations()
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let img = self.apply(r);
                (!img.is_zero()).then(|| {
                    (
                        i,
                        self.source.display(r).to_string(),
                        self.target.display(&img).to_string(),
                    )
                })
            })
            .collect();
        MapReport { violations }
    }

    /// Agreement on every source variable.
    pub fn agrees_with(&self, other: &AlgebraMap) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(a, b)| self.target.is_zero(&self.target.sub(a, b)))
    }
}

/// Evaluates `p` (in some source ring layout) at `images` inside `target`.
pub fn substitute(target: &PresentedAlgebra, p: &Poly, images: &[Poly]) -> Poly {
    let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); images.len()];
    let mut acc = Poly::zero();
    for (m, c) in p.terms() {
        let mut t = target.constant(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if powers[i].is_empty() {
                powers[i].push(target.one());
            }
            while powers[i].len() <= e as usize {
                let next = target.mul(powers[i].last().unwrap(), &images[i]);
                powers[i].push(next);
            }
            t = target.mul(&t, &powers[i][e as usize]);
            if t.is_zero() {
                break;
            }
        }
        acc = target.add(&acc, &t);
    }
    acc
}

/// A dense matrix of polynomials, row-major. Entries are kept in the
/// normal form of whichever algebra produced them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(a: &PresentedAlgebra, n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, a.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Poly>]) -> Self {
        let cols = columns.len();
        Self::from_fn(rows, cols, |r, c| columns[c][r].clone())
    }

    pub fn from_rows(rows: &[Vec<Poly>], cols: usize) -> Self {
        Self::from_fn(rows.len(), cols, |r, c| rows[r][c].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn column(&self, c: usize) -> Vec<Poly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Sub-block copy.
    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }
}

/// Matrix arithmetic inside a presented algebra.
impl PresentedAlgebra {
    pub fn mat_mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.cols, b.rows, "matrix shapes do not compose");
        let mut data = Vec::with_capacity(a.rows * b.cols);
        let mut terms = Vec::new();
        for r in 0..a.rows {
            for c in 0..b.cols {
                for k in 0..a.cols {
                    let (x, y) = (a.get(r, k), b.get(k, c));
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    for (mx, cx) in x.terms() {
                        for (my, cy) in y.terms() {
                            terms.push((mx.mul(my), cx * cy));
                        }
                    }
                }
                data.push(self.ring.collect_terms(&mut terms));
            }
        }
        let out = Matrix {
            rows: a.rows,
            cols: b.cols,
            data,
        };
        self.normalize_matrix(out)
    }

    pub fn mat_vec(&self, a: &Matrix, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(a.cols, v.len());
        (0..a.rows)
            .map(|r| {
                let mut acc = Poly::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() && !a.get(r, k).is_zero() {
                        acc = self.ring.add(&acc, &self.ring.mul(a.get(r, k), x));
                    }
                }
                self.nf(&acc)
            })
            .collect()
    }

    pub fn mat_add(&self, a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Matrix::from_fn(a.rows, a.cols, |r, c| self.add(a.get(r, c), b.get(r, c)))
    }

    pub fn mat_sub(&self, a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Matrix::from_fn(a.rows, a.cols, |r, c| self.sub(a.get(r, c), b.get(r, c)))
    }

    pub fn mat_scale(&self, a: &Matrix, s: &Poly) -> Matrix {
        Matrix::from_fn(a.rows, a.cols, |r, c| self.mul(a.get(r, c), s))
    }

    pub fn mat_neg(&self, a: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows, a.cols, |r, c| self.neg(a.get(r, c)))
    }

    /// Kronecker product: entry ((i,k),(j,l)) = a[i][j]·b[k][l].
    pub fn kron(&self, a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
            let (i, k) = (r / b.rows, r % b.rows);
            let (j, l) = (c / b.cols, c % b.cols);
            self.mul(a.get(i, j), b.get(k, l))
        })
    }

    pub fn vec_add(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        a.iter().zip(b).map(|(x, y)| self.add(x, y)).collect()
    }

    pub fn vec_sub(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        a.iter().zip(b).map(|(x, y)| self.sub(x, y)).collect()
    }

    pub fn vec_scale(&self, v: &[Poly], s: &Poly) -> Vec<Poly> {
        v.iter().map(|x| self.mul(x, s)).collect()
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); n];
        v[i] = self.one();
        v
    }
}

/// Monomial helper for the definition format and fixtures.
pub fn monomial_of(exps: &[u16]) -> Monomial {
    Monomial::from_exponents(exps)
}

pub(crate) fn ideal_generators(a: &PresentedAlgebra, comps: std::ops::Range<u32>) -> Vec<MVec> {
    let mut out = Vec::new();
    for c in comps {
        for g in a.groebner_basis() {
            out.push(pack(std::slice::from_ref(g), c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qg() -> Algebra {
        let f = Field::Rationals;
        let r = PolyRing::new(f, vec!["g".into()], MonomialOrder::degrevlex(1));
        let g = r.var(0);
        let rel = r.sub(&r.mul(&g, &g), &r.one());
        PresentedAlgebra::new("H", f, vec!["g".into()], vec![rel], MonomialOrder::degrevlex(1), Budget::default())
            .unwrap()
    }

    #[test]
    fn normal_form_uses_relations() {
        let a = qg();
        let g = a.var(0);
        assert_eq!(a.pow(&g, 3), g);
        assert_eq!(a.nf(&a.ring().mul(&g, &g)), a.one());
        assert_eq!(a.groebner_basis().len(), 1);
        assert!(a.basis_is_groebner());
    }

    #[test]
    fn laurent_relation_normalizes_to_one() {
        let f = Field::Rationals;
        let names = vec!["t".to_string(), "s".to_string()];
        let r = PolyRing::new(f, names.clone(), MonomialOrder::degrevlex(2));
        let ts = r.mul(&r.var(0), &r.var(1));
        let a = PresentedAlgebra::new("L", f, names, vec![r.sub(&ts, &r.one())], MonomialOrder::degrevlex(2), Budget::default())
            .unwrap();
        assert_eq!(a.nf(&ts), a.one());
    }

    #[test]
    fn counit_check_on_group_algebra() {
        let h = qg();
        let q = PresentedAlgebra::ground("Q", Field::Rationals);
        let good = AlgebraMap::new(h.clone(), q.clone(), vec![q.one()]).unwrap();
        assert!(good.check().is_valid());
        let bad = AlgebraMap::new(h.clone(), q.clone(), vec![q.from_i64(2)]).unwrap();
        let rep = bad.check();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].2, "3");
        assert!(AlgebraMap::identity(&h).check().is_valid());
    }
}
