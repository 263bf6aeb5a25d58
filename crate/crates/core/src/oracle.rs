//! An independent model of comodules over `ℚ[t, t⁻¹]`: finitely supported
//! `ℤ`-graded vector spaces with degree-preserving maps.
//!
//! Nothing here goes through presentations, Gröbner bases or coactions. The
//! comparison suite builds random graded data, realizes it as comodules
//! (with a scrambled basis and redundant generators so the library has real
//! work to do), and checks that the library reports the same graded
//! dimensions for tensor products, internal homs, invariants and tensor
//! products of complexes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::Algebroid;
use crate::comodule::{invariants, Comodule, ComoduleMap};
use crate::complex::{tensor_complexes, Complex};
use crate::error::{Error, Result};
use crate::graded::weight_dims;
use crate::module::FPModule;
use crate::monoidal::{chom, ctensor};
use crate::ring::{Matrix, Poly};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense rational matrix, rows of entries.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += t;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    /// Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let piv = a[rank][c].clone();
            for r in 0..self.rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &piv;
                    for j in c..self.cols {
                        let t = &f * &a[rank][j];
                        a[r][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.rows;
        let mut a: Vec<Vec<Q>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let piv = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x = &*x / &piv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..2 * n {
                        let t = &f * &a[c][j];
                        a[r][j] -= t;
                    }
                }
            }
        }
        Some(QMatrix {
            rows: n,
            cols: n,
            data: a.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }
}

/// A graded vector space by its dimension in each weight.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    pub dims: BTreeMap<i64, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        GradedSpace {
            dims: dims.into_iter().filter(|(_, d)| *d > 0).collect(),
        }
    }

    pub fn dim(&self, w: i64) -> usize {
        self.dims.get(&w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// Weights of the standard basis, in order.
    pub fn basis_weights(&self) -> Vec<i64> {
        self.dims.iter().flat_map(|(w, d)| std::iter::repeat(*w).take(*d)).collect()
    }

    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let mut out: BTreeMap<i64, usize> = BTreeMap::new();
        for (a, x) in &self.dims {
            for (b, y) in &other.dims {
                *out.entry(a + b).or_default() += x * y;
            }
        }
        GradedSpace::new(out)
    }

    /// Maps raising weight by `d` form the degree-`d` part.
    pub fn hom(&self, other: &GradedSpace) -> GradedSpace {
        let mut out: BTreeMap<i64, usize> = BTreeMap::new();
        for (a, x) in &self.dims {
            for (b, y) in &other.dims {
                *out.entry(b - a).or_default() += x * y;
            }
        }
        GradedSpace::new(out)
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|(w, d)| format!("{w}:{d}")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// A degree-preserving map, one block per weight.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub blocks: BTreeMap<i64, QMatrix>,
}

impl GradedMap {
    pub fn block(&self, w: i64) -> QMatrix {
        self.blocks
            .get(&w)
            .cloned()
            .unwrap_or_else(|| QMatrix::zero(self.target.dim(w), self.source.dim(w)))
    }

    /// The whole map in the standard bases.
    pub fn full(&self) -> QMatrix {
        let mut m = QMatrix::zero(self.target.total(), self.source.total());
        let (mut r0, mut c0) = (BTreeMap::new(), BTreeMap::new());
        let mut off = 0;
        for (w, d) in &self.target.dims {
            r0.insert(*w, off);
            off += d;
        }
        off = 0;
        for (w, d) in &self.source.dims {
            c0.insert(*w, off);
            off += d;
        }
        for (w, b) in &self.blocks {
            let (Some(r), Some(c)) = (r0.get(w), c0.get(w)) else { continue };
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[r + i][c + j] = b.data[i][j].clone();
                }
            }
        }
        m
    }
}

/// A two-term complex `V^lo → V^{lo+1}` or a single space.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub lo: i64,
    pub terms: Vec<GradedSpace>,
    pub diffs: Vec<GradedMap>,
}

impl GradedComplex {
    fn term(&self, n: i64) -> GradedSpace {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.terms.len() {
            GradedSpace::default()
        } else {
            self.terms[i as usize].clone()
        }
    }

    fn diff_block(&self, n: i64, w: i64) -> QMatrix {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.diffs.len() {
            QMatrix::zero(self.term(n + 1).dim(w), self.term(n).dim(w))
        } else {
            self.diffs[i as usize].block(w)
        }
    }

    fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    /// Homology of the total complex of `self ⊗ other`, by degree and
    /// weight, computed block by block with the Koszul sign.
    pub fn tensor_homology(&self, other: &GradedComplex) -> BTreeMap<i64, GradedSpace> {
        let (lo, hi) = (self.lo + other.lo, self.hi() + other.hi());
        let mut weights: Vec<i64> = Vec::new();
        for n in self.lo..=self.hi() {
            for m in other.lo..=other.hi() {
                for w in self.term(n).tensor(&other.term(m)).dims.keys() {
                    if !weights.contains(w) {
                        weights.push(*w);
                    }
                }
            }
        }
        // for weight w, degree n: ⊕_{p} ⊕_{a} V^p_a ⊗ W^{n-p}_{w-a}
        let piece_index = |n: i64, w: i64| -> Vec<(i64, i64, usize, usize, usize)> {
            let mut v = Vec::new();
            let mut off = 0;
            for p in self.lo..=self.hi() {
                let qd = n - p;
                for (a, da) in &self.term(p).dims {
                    let db = other.term(qd).dim(w - a);
                    if db > 0 {
                        v.push((p, *a, off, *da, db));
                        off += da * db;
                    }
                }
            }
            v
        };
        let size = |n: i64, w: i64| -> usize { piece_index(n, w).iter().map(|x| x.3 * x.4).sum() };
        let mut out: BTreeMap<i64, GradedSpace> = BTreeMap::new();
        for n in lo..=hi {
            let mut dims = BTreeMap::new();
            for &w in &weights {
                let dn = self.total_diff(other, n, w, &piece_index);
                let dprev = self.total_diff(other, n - 1, w, &piece_index);
                let h = size(n, w) - dn.rank() - dprev.rank();
                if h > 0 {
                    dims.insert(w, h);
                }
            }
            out.insert(n, GradedSpace::new(dims));
        }
        out
    }

    #[allow(clippy::type_complexity)]
    fn total_diff(
        &self,
        other: &GradedComplex,
        n: i64,
        w: i64,
        index: &dyn Fn(i64, i64) -> Vec<(i64, i64, usize, usize, usize)>,
    ) -> QMatrix {
        let src = index(n, w);
        let tgt = index(n + 1, w);
        let rows: usize = tgt.iter().map(|x| x.3 * x.4).sum();
        let cols: usize = src.iter().map(|x| x.3 * x.4).sum();
        let mut m = QMatrix::zero(rows, cols);
        for &(p, a, off, da, db) in &src {
            let qd = n - p;
            // d ⊗ 1 into (p+1, a)
            if let Some(&(_, _, toff, tda, tdb)) = tgt.iter().find(|x| x.0 == p + 1 && x.1 == a) {
                let d = self.diff_block(p, a);
                debug_assert_eq!(tdb, db);
                for i in 0..tda {
                    for j in 0..da {
                        if d.data[i][j].is_zero() {
                            continue;
                        }
                        for l in 0..db {
                            m.data[toff + i * db + l][off + j * db + l] = d.data[i][j].clone();
                        }
                    }
                }
            }
            // (-1)^p 1 ⊗ d into (p, a)
            if let Some(&(_, _, toff, tda, tdb)) = tgt.iter().find(|x| x.0 == p && x.1 == a) {
                let d = other.diff_block(qd, w - a);
                debug_assert_eq!(tda, da);
                let s = if p.rem_euclid(2) == 0 { q(1) } else { q(-1) };
                for j in 0..da {
                    for i in 0..tdb {
                        for l in 0..db {
                            if !d.data[i][l].is_zero() {
                                m.data[toff + j * tdb + i][off + j * db + l] = &s * &d.data[i][l];
                            }
                        }
                    }
                }
            }
        }
        m
    }
}

// ------------------------------------------------------------ realization

/// Random graded data turned into library objects with a scrambled basis.
struct Realizer<'a> {
    alg: &'a Algebroid,
    rng: ChaCha8Rng,
}

/// A comodule together with its change of basis: library generator `j` is
/// `Σ_i Q[i][j] b_i` for the first `n` generators, the rest are redundant.
struct Realized {
    comodule: Comodule,
    q_inv: QMatrix,
    /// `(basis index, scalar)` for each redundant generator
    extras: Vec<(usize, Q)>,
}

impl Realizer<'_> {
    fn space(&mut self) -> GradedSpace {
        let k = self.rng.gen_range(1..=3);
        let mut dims = BTreeMap::new();
        for _ in 0..k {
            let w = self.rng.gen_range(-2..=2);
            *dims.entry(w).or_insert(0) += self.rng.gen_range(1..=2);
        }
        GradedSpace::new(dims)
    }

    /// At most three dimensions, for the terms of complexes.
    fn small_space(&mut self) -> GradedSpace {
        let mut dims = BTreeMap::new();
        let total = self.rng.gen_range(1..=3);
        for _ in 0..total {
            *dims.entry(self.rng.gen_range(-1..=1)).or_insert(0) += 1;
        }
        GradedSpace::new(dims)
    }

    fn invertible(&mut self, n: usize) -> (QMatrix, QMatrix) {
        loop {
            let mut m = QMatrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.data[i][j] = q(self.rng.gen_range(-1..=1));
                }
                m.data[i][i] += q(1);
            }
            if let Some(inv) = m.inverse() {
                return (m, inv);
            }
        }
    }

    fn scalar(&self, x: &Q) -> Result<Poly> {
        Ok(self.alg.a0.constant(self.alg.field().from_rational(x)?))
    }

    fn realize(&mut self, v: &GradedSpace) -> Result<Realized> {
        let alg = self.alg;
        let (a0, a1) = (&alg.a0, &alg.a1);
        let n = v.total();
        let weights = v.basis_weights();
        let (qm, q_inv) = self.invertible(n);
        let nextra = if n > 0 { self.rng.gen_range(0..=1) } else { 0 };
        let mut extras = Vec::new();
        for _ in 0..nextra {
            let i = self.rng.gen_range(0..n);
            let s = q(self.rng.gen_range(1..=3));
            extras.push((i, s));
        }
        let total = n + nextra;
        let mut c = Matrix::zero(total, total);
        for k in 0..n {
            for j in 0..n {
                let mut e = a1.zero();
                for i in 0..n {
                    let x = &q_inv.data[k][i] * &qm.data[i][j];
                    if !x.is_zero() {
                        let coeff = alg.eta_l.apply(&self.scalar(&x)?);
                        e = a1.add(&e, &a1.mul(&coeff, &alg.weight_monomial(weights[i])?));
                    }
                }
                c.set(k, j, e);
            }
        }
        let mut rels = Vec::new();
        for (x, (i, s)) in extras.iter().enumerate() {
            c.set(n + x, n + x, alg.weight_monomial(weights[*i])?);
            let mut col = vec![a0.zero(); total];
            col[n + x] = a0.one();
            for k in 0..n {
                let y = &q_inv.data[k][*i] * s;
                if !y.is_zero() {
                    col[k] = a0.neg(&self.scalar(&y)?);
                }
            }
            rels.push(col);
        }
        let module = FPModule::new(a0, total, Matrix::from_columns(total, &rels))?;
        Ok(Realized {
            comodule: Comodule::new(alg, module, c)?,
            q_inv,
            extras,
        })
    }

    fn graded_map(&mut self, s: &GradedSpace, t: &GradedSpace) -> GradedMap {
        let mut blocks = BTreeMap::new();
        for (w, ds) in &s.dims {
            let dt = t.dim(*w);
            if dt == 0 {
                continue;
            }
            let mut b = QMatrix::zero(dt, *ds);
            for i in 0..dt {
                for j in 0..*ds {
                    b.data[i][j] = q(self.rng.gen_range(-2..=2));
                }
            }
            blocks.insert(*w, b);
        }
        GradedMap {
            source: s.clone(),
            target: t.clone(),
            blocks,
        }
    }

    /// The library matrix of a graded map between realized comodules.
    fn map_matrix(&self, f: &GradedMap, src: &Realized, tgt: &Realized) -> Result<Matrix> {
        let full = f.full();
        let sn = src.q_inv.rows;
        // columns in graded coordinates: Q for the main generators
        let q_src = src.q_inv.inverse().expect("invertible");
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for j in 0..sn {
            cols.push((0..sn).map(|i| q_src.data[i][j].clone()).collect());
        }
        for (i, s) in &src.extras {
            let mut v = vec![Q::zero(); sn];
            v[*i] = s.clone();
            cols.push(v);
        }
        let tn = tgt.q_inv.rows;
        let total_t = tn + tgt.extras.len();
        let mut out = Matrix::zero(total_t, cols.len());
        for (c, v) in cols.iter().enumerate() {
            let col = QMatrix {
                rows: v.len(),
                cols: 1,
                data: v.iter().map(|x| vec![x.clone()]).collect(),
            };
            let img = tgt.q_inv.mul(&full.mul(&col));
            for r in 0..tn {
                let x = &img.data[r][0];
                if !x.is_zero() {
                    out.set(r, c, self.scalar(x)?);
                }
            }
        }
        Ok(out)
    }
}

fn lib_dims(m: &Comodule) -> Result<GradedSpace> {
    Ok(GradedSpace::new(weight_dims(m)?))
}

/// One comparison between the library and the oracle.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub kind: &'static str,
    pub index: usize,
    pub agree: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub seed: u64,
    pub cases: Vec<OracleCase>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.agree)
    }

    pub fn count(&self, kind: &str) -> (usize, usize) {
        let all: Vec<&OracleCase> = self.cases.iter().filter(|c| c.kind == kind).collect();
        (all.iter().filter(|c| c.agree).count(), all.len())
    }
}

/// Runs `count` random instances of each comparison on a Laurent
/// algebroid over `ℚ`.
pub fn compare_suite(alg: &Algebroid, seed: u64, count: usize) -> Result<OracleReport> {
    if alg.laurent().is_none() || alg.a0.nvars() != 0 || alg.field().characteristic() != 0 {
        return Err(Error::Capability(
            "the graded oracle models Laurent algebroids over the rationals".into(),
        ));
    }
    let mut r = Realizer {
        alg,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut rep = OracleReport {
        seed,
        cases: Vec::new(),
    };
    fn push(cases: &mut Vec<OracleCase>, kind: &'static str, index: usize, want: &GradedSpace, got: &GradedSpace) {
        cases.push(OracleCase {
            kind,
            index,
            agree: want == got,
            detail: format!("oracle {want}, library {got}"),
        });
    }
    for i in 0..count {
        let (v, w) = (r.space(), r.space());
        let (m, n) = (r.realize(&v)?, r.realize(&w)?);
        if !m.comodule.check()?.passed() || !n.comodule.check()?.passed() {
            return Err(Error::Integrity("realized comodule fails the axioms".into()));
        }
        let t = ctensor(&m.comodule, &n.comodule)?;
        push(&mut rep.cases, "ctensor", i, &v.tensor(&w), &lib_dims(&t)?);

        let h = chom(&m.comodule, &n.comodule)?;
        push(&mut rep.cases, "chom", i, &v.hom(&w), &lib_dims(&h.comodule)?);

        let inv = invariants(&m.comodule)?.dim();
        push(
            &mut rep.cases,
            "invariants",
            i,
            &GradedSpace::new([(0, v.dim(0))]),
            &GradedSpace::new([(0, inv)]),
        );

        // two-term complexes V → V' and W → W' with random graded maps
        let (v, w) = (r.small_space(), r.small_space());
        let (m, n) = (r.realize(&v)?, r.realize(&w)?);
        let (v2, w2) = (r.small_space(), r.small_space());
        let (m2, n2) = (r.realize(&v2)?, r.realize(&w2)?);
        let fv = r.graded_map(&v, &v2);
        let fw = r.graded_map(&w, &w2);
        let lo_c = r.rng.gen_range(-1..=1);
        let lo_d = r.rng.gen_range(-1..=1);
        let gc = GradedComplex {
            lo: lo_c,
            terms: vec![v.clone(), v2.clone()],
            diffs: vec![fv.clone()],
        };
        let gd = GradedComplex {
            lo: lo_d,
            terms: vec![w.clone(), w2.clone()],
            diffs: vec![fw.clone()],
        };
        let dc = ComoduleMap::new(&m.comodule, &m2.comodule, r.map_matrix(&fv, &m, &m2)?)?;
        let dd = ComoduleMap::new(&n.comodule, &n2.comodule, r.map_matrix(&fw, &n, &n2)?)?;
        let cc = Complex::new(alg, lo_c, vec![m.comodule.clone(), m2.comodule.clone()], vec![dc])?;
        let cd = Complex::new(alg, lo_d, vec![n.comodule.clone(), n2.comodule.clone()], vec![dd])?;
        let tot = tensor_complexes(&cc, &cd, true)?;
        let want = gc.tensor_homology(&gd);
        let mut agree = true;
        let mut detail = String::new();
        for (deg, sp) in &want {
            let got = lib_dims(&tot.complex.homology(*deg)?)?;
            if &got != sp {
                agree = false;
            }
            detail.push_str(&format!("H{deg}: oracle {sp}, library {got}; "));
        }
        rep.cases.push(OracleCase {
            kind: "tensor_complexes",
            index: i,
            agree,
            detail,
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rank_and_inverse() {
        let m = QMatrix {
            rows: 2,
            cols: 2,
            data: vec![vec![q(1), q(2)], vec![q(2), q(4)]],
        };
        assert_eq!(m.rank(), 1);
        assert!(m.inverse().is_none());
        let m = QMatrix {
            rows: 2,
            cols: 2,
            data: vec![vec![q(1), q(2)], vec![q(3), q(4)]],
        };
        assert_eq!(m.mul(&m.inverse().unwrap()), QMatrix::identity(2));
    }

    #[test]
    fn graded_dimensions() {
        let a = GradedSpace::new([(0, 1), (1, 2)]);
        let b = GradedSpace::new([(-1, 1)]);
        assert_eq!(a.tensor(&b), GradedSpace::new([(-1, 1), (0, 2)]));
        assert_eq!(a.hom(&b), GradedSpace::new([(-1, 1), (-2, 2)]));
    }

    #[test]
    fn koszul_complex_of_identity_is_exact() {
        let v = GradedSpace::new([(0, 1)]);
        let id = GradedMap {
            source: v.clone(),
            target: v.clone(),
            blocks: [(0, QMatrix::identity(1))].into_iter().collect(),
        };
        let c = GradedComplex {
            lo: 0,
            terms: vec![v.clone(), v.clone()],
            diffs: vec![id],
        };
        let h = c.tensor_homology(&c);
        assert!(h.values().all(|s| s.total() == 0));
    }

    #[test]
    fn small_suite_agrees() {
        let f2 = crate::format::fixture("F2").unwrap();
        let rep = compare_suite(&f2.algebroid, 7, 5).unwrap();
        for c in &rep.cases {
            assert!(c.agree, "{} #{}: {}", c.kind, c.index, c.detail);
        }
    }
}
