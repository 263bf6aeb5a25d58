//! Sparse multivariate polynomials over an exact field.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::scalar::{Field, Scalar};

/// An exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub(crate) SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Degrevlex,
    Lex,
}

/// A monomial order: a kind plus a ranking of the variables, most
/// significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub ranking: Vec<usize>,
}

impl MonomialOrder {
    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Degrevlex,
            ranking: (0..nvars).collect(),
        }
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            ranking: (0..nvars).collect(),
        }
    }

    pub fn with_ranking(kind: OrderKind, ranking: Vec<usize>) -> Self {
        MonomialOrder { kind, ranking }
    }

    /// True when `ranking` is a permutation of `0..nvars`.
    pub fn is_valid_for(&self, nvars: usize) -> bool {
        let mut seen = vec![false; nvars];
        self.ranking.len() == nvars
            && self.ranking.iter().all(|&i| {
                if i >= nvars || seen[i] {
                    false
                } else {
                    seen[i] = true;
                    true
                }
            })
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &i in &self.ranking {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Degrevlex => match a.degree().cmp(&b.degree()) {
                Ordering::Equal => {
                    for &i in self.ranking.iter().rev() {
                        match a.0[i].cmp(&b.0[i]) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                }
                o => o,
            },
        }
    }
}

/// A polynomial as a list of terms sorted by decreasing monomial under the
/// ring's order. Zero coefficients never appear.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub(crate) terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    /// The constant coefficient, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Option<&Scalar>> {
        match self.terms.as_slice() {
            [] => Some(None),
            [(m, c)] if m.is_one() => Some(Some(c)),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The ambient polynomial ring k[x_1, …, x_n] with a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: Field,
    pub names: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: Field, names: Vec<String>, order: MonomialOrder) -> Self {
        assert!(order.is_valid_for(names.len()), "order ranking does not match variables");
        PolyRing { field, names, order }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(self.nvars()), c)],
            }
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn from_i64(&self, n: i64) -> Poly {
        self.constant(self.field.from_i64(n))
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly {
            terms: vec![(Monomial::var(self.nvars(), i), self.field.one())],
        }
    }

    pub fn monomial(&self, m: Monomial, c: Scalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut terms: Vec<(Monomial, Scalar)> = terms.into_iter().collect();
        self.collect_terms(&mut terms)
    }

    /// [`PolyRing::from_terms`] that drains a reusable buffer.
    pub fn collect_terms(&self, terms: &mut Vec<(Monomial, Scalar)>) -> Poly {
        if terms.len() <= 1 {
            return Poly {
                terms: terms.drain(..).filter(|t| !t.1.is_zero()).collect(),
            };
        }
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms.drain(..) {
            debug_assert_eq!(m.nvars(), self.nvars());
            match out.last_mut() {
                Some((last, acc)) if *last == m => *acc = &*acc + &c,
                _ => {
                    if out.last().is_some_and(|t| t.1.is_zero()) {
                        out.pop();
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|t| t.1.is_zero()) {
            out.pop();
        }
        Poly { terms: out }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.merge(a, b, false)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.merge(a, b, true)
    }

    fn merge(&self, a: &Poly, b: &Poly, negate_b: bool) -> Poly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = &a.terms[i];
            let (mb, cb) = &b.terms[j];
            match self.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate_b { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(
            b.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate_b { -c } else { c.clone() })),
        );
        Poly { terms: out }
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, a: &Poly, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// `c · m · a`; multiplication by a monomial preserves term order.
    pub fn mul_term(&self, a: &Poly, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a.terms.iter().map(|(am, ac)| (am.mul(m), ac * c)).collect(),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        if a.terms.len() == 1 {
            let (m, c) = &a.terms[0];
            return self.mul_term(b, m, c);
        }
        if b.terms.len() == 1 {
            let (m, c) = &b.terms[0];
            return self.mul_term(a, m, c);
        }
        self.from_terms(
            a.terms
                .iter()
                .flat_map(|(ma, ca)| b.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }

    /// Makes the leading coefficient one.
    pub fn monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => a.clone(),
            Some((_, c)) => self.scale(a, &c.inv()),
        }
    }

    /// Re-sorts terms after a change of order (or of variable layout).
    pub fn resort(&self, a: &Poly) -> Poly {
        self.from_terms(a.terms.iter().cloned())
    }

    /// Renames variables: variable `i` of the source layout becomes variable
    /// `map[i]` of this ring.
    pub fn embed(&self, a: &Poly, map: &[usize]) -> Poly {
        self.from_terms(a.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(self.nvars());
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e.0[map[i]] += x;
                }
            }
            (e, c.clone())
        }))
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: p }
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(
            Field::Rationals,
            vec!["x".into(), "y".into(), "z".into()],
            MonomialOrder::degrevlex(3),
        )
    }

    #[test]
    fn degrevlex_breaks_ties_on_last_variable() {
        let r = ring();
        let xz = Monomial::from_exponents(&[1, 0, 1]);
        let y2 = Monomial::from_exponents(&[0, 2, 0]);
        // same degree; xz has the larger z-exponent, so it is smaller
        assert_eq!(r.cmp(&xz, &y2), Ordering::Less);
        let lex = MonomialOrder::lex(3);
        assert_eq!(lex.cmp(&xz, &y2), Ordering::Greater);
    }

    #[test]
    fn ranking_permutes_significance() {
        let o = MonomialOrder::with_ranking(OrderKind::Lex, vec![2, 0, 1]);
        let x = Monomial::from_exponents(&[5, 0, 0]);
        let z = Monomial::from_exponents(&[0, 0, 1]);
        assert_eq!(o.cmp(&z, &x), Ordering::Greater);
        assert!(!MonomialOrder::with_ranking(OrderKind::Lex, vec![0, 0, 1]).is_valid_for(3));
    }

    #[test]
    fn arithmetic_combines_terms() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let s = r.add(&x, &y);
        let d = r.sub(&x, &y);
        let p = r.mul(&s, &d);
        let expect = r.sub(&r.mul(&x, &x), &r.mul(&y, &y));
        assert_eq!(p, expect);
        assert_eq!(r.display(&p).to_string(), "x^2 - y^2");
        assert!(r.sub(&p, &expect).is_zero());
    }
}
