//! Buchberger's algorithm for submodules of free modules k[x]^n.
//!
//! Ideals are the rank-one case. Module terms are ordered position over
//! term: a smaller component index is larger, ties are broken by the
//! monomial order. With that order the elements of a Gröbner basis whose
//! leading component lies outside the first block form a Gröbner basis of
//! the intersection with the remaining block, which is what syzygy and
//! lifting computations rely on.

use std::cmp::Ordering;

use super::poly::{Monomial, Poly, PolyRing};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MTerm {
    pub comp: u32,
    pub mono: Monomial,
    pub coef: Scalar,
}

/// A module element, terms sorted decreasingly in the position-over-term order.
pub type MVec = Vec<MTerm>;

/// Upper bound on the reduction steps a single basis computation may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_reductions: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_reductions: 5_000_000,
        }
    }
}

struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    fn new(b: Budget) -> Self {
        Meter {
            used: 0,
            limit: b.max_reductions,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::ResourceLimit(format!(
                "Gröbner basis computation exceeded {} reduction steps",
                self.limit
            )));
        }
        Ok(())
    }
}

pub fn term_cmp(ring: &PolyRing, a: (u32, &Monomial), b: (u32, &Monomial)) -> Ordering {
    match b.0.cmp(&a.0) {
        Ordering::Equal => ring.cmp(a.1, b.1),
        o => o,
    }
}

/// Packs a column of polynomials into a module element, placing entry `i`
/// in component `offset + i`.
pub fn pack(entries: &[Poly], offset: u32) -> MVec {
    pack_iter(entries, offset)
}

pub fn pack_iter<'a>(entries: impl IntoIterator<Item = &'a Poly>, offset: u32) -> MVec {
    // components ascend with i, and within a component terms are already
    // sorted decreasingly, which is exactly the POT order
    let mut v = Vec::new();
    for (i, p) in entries.into_iter().enumerate() {
        for (m, c) in p.terms() {
            v.push(MTerm {
                comp: offset + i as u32,
                mono: m.clone(),
                coef: c.clone(),
            });
        }
    }
    v
}

/// Inverse of [`pack`] for components `offset..offset + n`; other
/// components are dropped.
pub fn unpack(v: &MVec, offset: u32, n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n];
    for t in v {
        if t.comp >= offset && ((t.comp - offset) as usize) < n {
            out[(t.comp - offset) as usize]
                .terms
                .push((t.mono.clone(), t.coef.clone()));
        }
    }
    out
}

/// `a - c·m·b`.
fn sub_scaled(ring: &PolyRing, a: &[MTerm], b: &[MTerm], m: &Monomial, c: &Scalar) -> MVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let shifted = |t: &MTerm| MTerm {
        comp: t.comp,
        mono: t.mono.mul(m),
        coef: -&(&t.coef * c),
    };
    let mut bj = b.first().map(shifted);
    while i < a.len() {
        let Some(tb) = &bj else { break };
        match term_cmp(ring, (a[i].comp, &a[i].mono), (tb.comp, &tb.mono)) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(tb.clone());
                j += 1;
                bj = b.get(j).map(shifted);
            }
            Ordering::Equal => {
                let s = &a[i].coef + &tb.coef;
                if !s.is_zero() {
                    out.push(MTerm {
                        comp: a[i].comp,
                        mono: a[i].mono.clone(),
                        coef: s,
                    });
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(shifted);
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    if let Some(tb) = bj {
        out.push(tb);
        out.extend(b[j + 1..].iter().map(shifted));
    }
    out
}

fn monic(v: MVec) -> MVec {
    match v.first() {
        None => v,
        Some(t) if t.coef.is_one() => v,
        Some(t) => {
            let inv = t.coef.inv();
            v.into_iter()
                .map(|t| MTerm {
                    coef: &t.coef * &inv,
                    ..t
                })
                .collect()
        }
    }
}

fn single_component(v: &MVec) -> bool {
    v.iter().all(|t| t.comp == v[0].comp)
}

/// A finished Gröbner basis with a per-component index of leading terms.
#[derive(Clone, Debug)]
pub struct Gb {
    elems: Vec<MVec>,
    by_comp: Vec<Vec<usize>>,
}

impl Gb {
    pub(crate) fn from_elems(elems: Vec<MVec>) -> Self {
        let mut by_comp: Vec<Vec<usize>> = Vec::new();
        for (k, e) in elems.iter().enumerate() {
            let c = e[0].comp as usize;
            if by_comp.len() <= c {
                by_comp.resize(c + 1, Vec::new());
            }
            by_comp[c].push(k);
        }
        Gb { elems, by_comp }
    }

    pub fn elems(&self) -> &[MVec] {
        &self.elems
    }

    fn divisor(&self, comp: u32, mono: &Monomial) -> Option<&MVec> {
        self.by_comp
            .get(comp as usize)?
            .iter()
            .map(|&k| &self.elems[k])
            .find(|g| g[0].mono.divides(mono))
    }

    /// Full normal form of `v`.
    pub fn reduce(&self, ring: &PolyRing, v: MVec) -> MVec {
        reduce_with(ring, v, |c, m| self.divisor(c, m), &mut None).expect("no meter, no limit")
    }

    pub fn is_member(&self, ring: &PolyRing, v: MVec) -> bool {
        self.reduce(ring, v).is_empty()
    }

    /// Checks Buchberger's criterion: every S-vector reduces to zero.
    pub fn is_groebner(&self, ring: &PolyRing) -> bool {
        for (i, a) in self.elems.iter().enumerate() {
            for b in &self.elems[i + 1..] {
                if a[0].comp != b[0].comp {
                    continue;
                }
                let s = s_vector(ring, a, b);
                if !self.reduce(ring, s).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn reduce_with<'a>(
    ring: &PolyRing,
    mut p: MVec,
    divisor: impl Fn(u32, &Monomial) -> Option<&'a MVec>,
    meter: &mut Option<&mut Meter>,
) -> Result<MVec> {
    let mut k = 0;
    while k < p.len() {
        let found = divisor(p[k].comp, &p[k].mono);
        match found {
            Some(g) => {
                if let Some(m) = meter.as_deref_mut() {
                    m.tick()?;
                }
                let mono = p[k].mono.div(&g[0].mono);
                let c = if g[0].coef.is_one() {
                    p[k].coef.clone()
                } else {
                    &p[k].coef * &g[0].coef.inv()
                };
                let tail = sub_scaled(ring, &p[k..], g, &mono, &c);
                p.truncate(k);
                p.extend(tail);
            }
            None => k += 1,
        }
    }
    Ok(p)
}

fn s_vector(ring: &PolyRing, a: &MVec, b: &MVec) -> MVec {
    let l = a[0].mono.lcm(&b[0].mono);
    let ma = l.div(&a[0].mono);
    let mb = l.div(&b[0].mono);
    let ca = a[0].coef.inv();
    let cb = b[0].coef.inv();
    let left: MVec = sub_scaled(ring, &[], a, &ma, &-&ca);
    sub_scaled(ring, &left, b, &mb, &cb)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: u32,
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
///
/// Deterministic: pairs are selected by lcm degree, then by the module
/// order, then by index.
pub fn groebner(ring: &PolyRing, gens: Vec<MVec>, budget: Budget) -> Result<Gb> {
    let gens: Vec<MVec> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    if ring.nvars() == 0 {
        return Ok(Gb::from_elems(echelon(ring, gens)));
    }
    let mut meter = Meter::new(budget);
    let mut basis: Vec<MVec> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut by_comp: Vec<Vec<usize>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let insert = |h: MVec,
                  basis: &mut Vec<MVec>,
                  alive: &mut Vec<bool>,
                  by_comp: &mut Vec<Vec<usize>>,
                  pairs: &mut Vec<Pair>| {
        let k = basis.len();
        let comp = h[0].comp;
        let lm = h[0].mono.clone();
        let h_single = single_component(&h);
        // candidate pairs (g, h) for live g with the same leading component
        let cands: Vec<(usize, Monomial, bool)> = by_comp
            .get(comp as usize)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .filter(|&&g| alive[g])
            .map(|&g| {
                let gm = &basis[g][0].mono;
                let coprime = h_single && single_component(&basis[g]) && gm.coprime(&lm);
                (g, gm.lcm(&lm), coprime)
            })
            .collect();
        // Gebauer–Möller: drop pairs whose lcm is a multiple of another new lcm
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, (g, l, coprime)) in cands.iter().enumerate() {
            let dominated = !coprime
                && (cands[idx + 1..].iter().any(|(_, l2, _)| l2.divides(l))
                    || kept.iter().any(|(_, l2, _)| l2.divides(l)));
            if !dominated {
                kept.push((*g, l.clone(), *coprime));
            }
        }
        // old pairs made redundant by h
        pairs.retain(|p| {
            if p.comp != comp || !lm.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i][0].mono.lcm(&lm);
            let lj = basis[p.j][0].mono.lcm(&lm);
            li == p.lcm || lj == p.lcm
        });
        for (g, l, coprime) in kept {
            if !coprime {
                pairs.push(Pair {
                    i: g,
                    j: k,
                    lcm: l,
                    comp,
                });
            }
        }
        if let Some(v) = by_comp.get(comp as usize) {
            for &g in v {
                if alive[g] && lm.divides(&basis[g][0].mono) {
                    alive[g] = false;
                }
            }
        }
        if by_comp.len() <= comp as usize {
            by_comp.resize(comp as usize + 1, Vec::new());
        }
        by_comp[comp as usize].push(k);
        basis.push(h);
        alive.push(true);
    };

    for g in gens {
        let r = {
            let b = &basis;
            let bc = &by_comp;
            reduce_with(
                ring,
                g,
                |c, m| {
                    bc.get(c as usize)?
                        .iter()
                        .map(|&k| &b[k])
                        .find(|e| e[0].mono.divides(m))
                },
                &mut Some(&mut meter),
            )?
        };
        if !r.is_empty() {
            insert(monic(r), &mut basis, &mut alive, &mut by_comp, &mut pairs);
        }
    }

    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            let ord = a
                .lcm
                .degree()
                .cmp(&b.lcm.degree())
                .then_with(|| term_cmp(ring, (a.comp, &a.lcm), (b.comp, &b.lcm)))
                .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        let s = s_vector(ring, &basis[p.i], &basis[p.j]);
        let r = {
            let b = &basis;
            let bc = &by_comp;
            reduce_with(
                ring,
                s,
                |c, m| {
                    bc.get(c as usize)?
                        .iter()
                        .map(|&k| &b[k])
                        .find(|e| e[0].mono.divides(m))
                },
                &mut Some(&mut meter),
            )?
        };
        if !r.is_empty() {
            insert(monic(r), &mut basis, &mut alive, &mut by_comp, &mut pairs);
        }
    }

    // minimal basis = live elements; then interreduce tails
    let minimal: Vec<MVec> = basis
        .into_iter()
        .zip(alive)
        .filter_map(|(b, a)| a.then_some(b))
        .collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others = Gb::from_elems(
            minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, e)| e.clone())
                .collect(),
        );
        let head = g[0].clone();
        let tail = others.reduce(ring, g[1..].to_vec());
        let mut e = vec![head];
        e.extend(tail);
        reduced.push(monic(e));
    }
    reduced.sort_by(|a, b| term_cmp(ring, (b[0].comp, &b[0].mono), (a[0].comp, &a[0].mono)));
    Ok(Gb::from_elems(reduced))
}

/// Reduced row echelon form; this is the reduced Gröbner basis when the
/// ring has no variables.
fn echelon(ring: &PolyRing, gens: Vec<MVec>) -> Vec<MVec> {
    let mut rows: Vec<MVec> = Vec::new();
    for g in gens {
        let gb = Gb::from_elems(rows.clone());
        let r = gb.reduce(ring, g);
        if r.is_empty() {
            continue;
        }
        let r = monic(r);
        let pivot = r[0].comp;
        for row in rows.iter_mut() {
            if let Some(t) = row.iter().find(|t| t.comp == pivot) {
                let c = t.coef.clone();
                *row = sub_scaled(ring, row, &r, &r[0].mono, &c);
            }
        }
        rows.push(r);
    }
    rows.sort_by_key(|r| r[0].comp);
    rows
}
