//! The `ℤ`-graded picture of comodules over a Laurent algebroid.
//!
//! Over `k[t, t⁻¹]` with `t` grouplike a coaction matrix splits as
//! `C = Σ_w t^w · P_w` where `P_w` projects onto the weight-`w` part. This is
//! how the internal hom is built when `A1` is not finite over `A0`.

use std::collections::BTreeMap;

use crate::algebroid::Algebroid;
use crate::comodule::Comodule;
use crate::error::{Error, Result};
use crate::module::{hom_module, HomModule};
use crate::ring::{Matrix, Poly};

/// Weight components `P_w` of a coaction matrix, as matrices over `A0`.
pub fn weight_components(alg: &Algebroid, c: &Matrix) -> Result<BTreeMap<i64, Matrix>> {
    if alg.laurent().is_none() || alg.a0.nvars() != 0 {
        return Err(Error::Capability(format!(
            "algebroid {} is not a Laurent algebroid over the field",
            alg.name
        )));
    }
    let a0 = &alg.a0;
    let mut out: BTreeMap<i64, Matrix> = BTreeMap::new();
    for r in 0..c.rows() {
        for col in 0..c.cols() {
            for (w, s) in alg.weight_parts(c.get(r, col))? {
                let m = out.entry(w).or_insert_with(|| Matrix::zero(c.rows(), c.cols()));
                let v = a0.add(m.get(r, col), &a0.constant(s));
                m.set(r, col, v);
            }
        }
    }
    Ok(out)
}

/// Reassembles `Σ_w t^w · P_w`.
pub fn assemble(alg: &Algebroid, parts: &BTreeMap<i64, Matrix>, rows: usize, cols: usize) -> Result<Matrix> {
    let a1 = &alg.a1;
    let mut c = Matrix::zero(rows, cols);
    for (w, p) in parts {
        let tw = alg.weight_monomial(*w)?;
        for r in 0..rows {
            for col in 0..cols {
                let e = p.get(r, col);
                if !e.is_zero() {
                    let v = a1.add(c.get(r, col), &a1.mul(&tw, &alg.eta_l.apply(e)));
                    c.set(r, col, v);
                }
            }
        }
    }
    Ok(c)
}

/// `Hom_k(UM, UN)` with the grading by weight shift: the degree-`d` part of
/// `h` is `Σ_w P^N_{w+d} · h · P^M_w`.
pub fn graded_hom(m: &Comodule, n: &Comodule) -> Result<(Comodule, HomModule)> {
    let alg = m.algebroid();
    let a0 = &alg.a0;
    let pm = weight_components(alg, m.coaction())?;
    let pn = weight_components(alg, n.coaction())?;
    let hom = hom_module(m.module(), n.module())?;
    let q = hom.module.ngens();
    let mut shifts: Vec<i64> = Vec::new();
    for wm in pm.keys() {
        for wn in pn.keys() {
            if !shifts.contains(&(wn - wm)) {
                shifts.push(wn - wm);
            }
        }
    }
    shifts.sort_unstable();
    let mut parts: BTreeMap<i64, Matrix> = BTreeMap::new();
    for g in 0..q {
        let h = hom.to_map(&a0.unit_vector(q, g))?;
        for &d in &shifts {
            let mut acc = Matrix::zero(n.ngens(), m.ngens());
            for (w, p) in &pm {
                if let Some(pn_w) = pn.get(&(w + d)) {
                    let term = a0.mat_mul(&a0.mat_mul(pn_w, &h.matrix), p);
                    acc = a0.mat_add(&acc, &term);
                }
            }
            let f = crate::module::ModuleMap::new_unchecked(m.module(), n.module(), acc)?;
            let v = hom.from_map(&f)?;
            if v.iter().all(Poly::is_zero) {
                continue;
            }
            let e = parts.entry(d).or_insert_with(|| Matrix::zero(q, q));
            for (r, p) in v.into_iter().enumerate() {
                e.set(r, g, p);
            }
        }
    }
    let c = assemble(alg, &parts, q, q)?;
    Ok((Comodule::new(alg, hom.module.clone(), c)?, hom))
}

/// Dimension of each weight space, read from the projectors.
pub fn weight_dims(m: &Comodule) -> Result<BTreeMap<i64, usize>> {
    let alg = m.algebroid();
    let parts = weight_components(alg, m.coaction())?;
    let mut out = BTreeMap::new();
    for (w, p) in parts {
        let f = crate::module::ModuleMap::new_unchecked(m.module(), m.module(), p)?;
        let (img, _) = {
            let (_, proj) = f.cokernel()?;
            let (k, inc) = proj.kernel()?;
            (k, inc)
        };
        let d = img
            .kdim()?
            .ok_or_else(|| Error::Capability("weight space is not finite dimensional".into()))?;
        if d > 0 {
            out.insert(w, d);
        }
    }
    Ok(out)
}
