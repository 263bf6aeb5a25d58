//! Linear systems `A·y ≡ b (mod im R)` over a presented algebra.

use super::algebra::{ideal_generators, Matrix, PresentedAlgebra};
use super::groebner::{groebner, pack, pack_iter, unpack, Gb, MTerm, MVec};
use super::poly::{Monomial, Poly};
use crate::error::Result;

/// Gröbner basis of the augmented system `(A | R ; I | 0)`.
///
/// Elements whose leading component falls in the second block give the
/// kernel of `A` modulo `R`; reducing `(b; 0)` gives a preimage when one
/// exists.
#[derive(Debug, Clone)]
pub struct Solver {
    n: usize,
    p: usize,
    gb: Gb,
}

impl Solver {
    pub fn new(alg: &PresentedAlgebra, a: &Matrix, rels: &Matrix) -> Result<Solver> {
        let n = a.rows();
        let p = a.cols();
        assert_eq!(rels.rows(), n, "relation matrix has the wrong height");
        let ring = alg.ring();
        let mut gens = Vec::with_capacity(p + rels.cols());
        for j in 0..p {
            let mut v = pack(&a.column(j), 0);
            v.push(MTerm {
                comp: (n + j) as u32,
                mono: Monomial::one(ring.nvars()),
                coef: ring.field.one(),
            });
            gens.push(v);
        }
        for k in 0..rels.cols() {
            gens.push(pack(&rels.column(k), 0));
        }
        gens.extend(ideal_generators(alg, 0..(n + p) as u32));
        let gb = groebner(ring, gens, alg.budget())?;
        Ok(Solver { n, p, gb })
    }

    /// Generators of `{ y : A·y ∈ im R }`, as columns, with duplicates and
    /// multiples of the relation ideal removed.
    pub fn kernel(&self, alg: &PresentedAlgebra) -> Matrix {
        let mut cols: Vec<Vec<Poly>> = Vec::new();
        for e in self.gb.elems() {
            if (e[0].comp as usize) < self.n {
                continue;
            }
            let y: Vec<Poly> = unpack(e, self.n as u32, self.p).iter().map(|q| alg.nf(q)).collect();
            if y.iter().all(|q| q.is_zero()) || cols.contains(&y) {
                continue;
            }
            cols.push(y);
        }
        Matrix::from_columns(self.p, &cols)
    }

    /// Some `y` with `A·y ≡ b (mod im R)`, or `None`.
    pub fn solve(&self, alg: &PresentedAlgebra, b: &[Poly]) -> Option<Vec<Poly>> {
        assert_eq!(b.len(), self.n);
        self.solve_packed(alg, pack(b, 0))
    }

    pub(crate) fn solve_packed(&self, alg: &PresentedAlgebra, b: MVec) -> Option<Vec<Poly>> {
        let r = self.gb.reduce(alg.ring(), b);
        if r.iter().any(|t| (t.comp as usize) < self.n) {
            return None;
        }
        Some(
            unpack(&r, self.n as u32, self.p)
                .iter()
                .map(|q| alg.normalize(alg.neg(q)))
                .collect(),
        )
    }

    /// Column-wise [`Solver::solve`].
    pub fn solve_matrix(&self, alg: &PresentedAlgebra, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows(), self.n);
        let mut out = Matrix::zero(self.p, b.cols());
        for c in 0..b.cols() {
            let y = self.solve_packed(alg, pack_iter((0..b.rows()).map(|r| b.get(r, c)), 0))?;
            for (r, p) in y.into_iter().enumerate() {
                out.set(r, c, p);
            }
        }
        Some(out)
    }
}

/// Columns generating the kernel of `v ↦ M·v`; `M · syzygies(M) = 0`.
pub fn syzygies(alg: &PresentedAlgebra, m: &Matrix) -> Result<Matrix> {
    let s = Solver::new(alg, m, &Matrix::zero(m.rows(), 0))?;
    Ok(s.kernel(alg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Budget, Field, MonomialOrder, PolyRing};

    fn dual_numbers() -> crate::ring::Algebra {
        let f = Field::Rationals;
        let r = PolyRing::new(f, vec!["x".into()], MonomialOrder::degrevlex(1));
        let x = r.var(0);
        PresentedAlgebra::new("D", f, vec!["x".into()], vec![r.mul(&x, &x)], MonomialOrder::degrevlex(1), Budget::default())
            .unwrap()
    }

    #[test]
    fn identity_has_no_syzygies() {
        let a = dual_numbers();
        let s = syzygies(&a, &Matrix::identity(&a, 3)).unwrap();
        assert_eq!(s.cols(), 0);
    }

    #[test]
    fn multiplication_by_x_on_dual_numbers() {
        let a = dual_numbers();
        let x = a.var(0);
        let m = Matrix::from_rows(&[vec![x.clone()]], 1);
        let s = syzygies(&a, &m).unwrap();
        assert_eq!(s.cols(), 1);
        assert_eq!(s.get(0, 0), &x);
        assert!(a.mat_mul(&m, &s).is_zero());
    }

    #[test]
    fn row_over_a_field() {
        let q = PresentedAlgebra::ground("Q", Field::Rationals);
        let m = Matrix::from_rows(&[vec![q.from_i64(2), q.from_i64(3)]], 2);
        let s = syzygies(&q, &m).unwrap();
        assert_eq!(s.cols(), 1);
        assert!(q.mat_mul(&m, &s).is_zero());
    }

    #[test]
    fn solve_modulo_relations() {
        let a = dual_numbers();
        let x = a.var(0);
        let m = Matrix::from_rows(&[vec![x.clone()]], 1);
        let solver = Solver::new(&a, &m, &Matrix::zero(1, 0)).unwrap();
        let y = solver.solve(&a, &[x.clone()]).unwrap();
        assert_eq!(a.mul(&x, &y[0]), x);
        assert!(solver.solve(&a, &[a.one()]).is_none());
    }
}
