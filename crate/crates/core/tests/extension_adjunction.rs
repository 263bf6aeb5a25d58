//! `Hom_coMod(M, A1 ⊗ N) ≅ Hom_A0(UM, N)` on F1, exhaustively over 𝔽₂.

use std::time::{Duration, Instant};

use hopf_comod::algebroid::Algebroid;
use hopf_comod::comodule::{
    comodule_homs, direct_sum_comodule, extend, extend_map, transpose_back, transpose_forward, Comodule, ComoduleMap,
};
use hopf_comod::format::fixture;
use hopf_comod::module::{FPModule, ModuleMap};
use hopf_comod::ring::Matrix;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every element of a space given by a basis over 𝔽₂.
fn all_combinations(basis: &[ComoduleMap], zero: ComoduleMap) -> Vec<ComoduleMap> {
    let mut out = Vec::with_capacity(1 << basis.len());
    for mask in 0u32..(1 << basis.len()) {
        let mut acc = zero.clone();
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.add(b);
            }
        }
        out.push(acc);
    }
    out
}

/// Every 0/1 matrix as a module map between modules over 𝔽₂ without
/// relations.
fn all_module_maps(source: &FPModule, target: &FPModule) -> Vec<ModuleMap> {
    let a0 = source.ring();
    let (r, c) = (target.ngens(), source.ngens());
    (0u32..(1 << (r * c)))
        .map(|mask| {
            let m = Matrix::from_fn(r, c, |i, j| if mask >> (i * c + j) & 1 == 1 { a0.one() } else { a0.zero() });
            ModuleMap::new(source, target, m).unwrap()
        })
        .collect()
}

fn unit_matrices(source: &FPModule, target: &FPModule) -> Vec<ModuleMap> {
    let a0 = source.ring();
    let mut out = Vec::new();
    for i in 0..target.ngens() {
        for j in 0..source.ngens() {
            let m = Matrix::from_fn(target.ngens(), source.ngens(), |a, b| {
                if (a, b) == (i, j) {
                    a0.one()
                } else {
                    a0.zero()
                }
            });
            out.push(ModuleMap::new(source, target, m).unwrap());
        }
    }
    out
}

fn f1_catalog(alg: &Algebroid, t: &Comodule, r: &Comodule) -> Vec<(&'static str, Comodule)> {
    let sum = |a: &Comodule, b: &Comodule| direct_sum_comodule(alg, &[a.clone(), b.clone()]).unwrap();
    vec![
        ("T", t.clone()),
        ("R", r.clone()),
        ("T+T", sum(t, t)),
        ("T+R", sum(t, r)),
        ("R+R", sum(r, r)),
    ]
}

#[test]
fn extension_adjunction_is_natural() {
    let result: Result<String, String> = (|| {
    let start = Instant::now();
    let def = fixture("F1").map_err(|e| e.to_string())?;
    let alg = &def.algebroid;
    let cat = f1_catalog(alg, def.comodule("trivial").unwrap(), def.comodule("regular").unwrap());
    let bases: Vec<FPModule> = (1..=2).map(|n| FPModule::free(&alg.a0, n)).collect();
    let exts: Vec<Comodule> = bases.iter().map(|b| extend(alg, b).unwrap()).collect();
    let (mut trips, mut squares, mut pairs) = (0usize, 0usize, 0usize);
    for (mname, m) in &cat {
        let dm = m.kdim().unwrap().unwrap();
        for (ni, (n, ext)) in bases.iter().zip(&exts).enumerate() {
            let de = ext.kdim().unwrap().unwrap();
            if dm + de > 8 {
                continue;
            }
            pairs += 1;
            let fs = all_combinations(
                &comodule_homs(m, ext).map_err(|e| e.to_string())?,
                ComoduleMap::zero(m, ext),
            );
            let gs = all_module_maps(m.module(), n);
            ensure(fs.len() == gs.len(), || {
                format!("{mname}, N{ni}: |Hom_coMod| = {} but |Hom_A0| = {}", fs.len(), gs.len())
            })?;
            let fwd: Vec<ModuleMap> = fs.iter().map(|f| transpose_forward(f).unwrap()).collect();
            let back: Vec<ComoduleMap> = gs.iter().map(|g| transpose_back(m, g, ext).unwrap()).collect();
            for (f, tf) in fs.iter().zip(&fwd) {
                ensure(transpose_back(m, tf, ext).unwrap().equals(f).unwrap(), || {
                    format!("{mname}: back(forward f) != f")
                })?;
                trips += 1;
            }
            for (g, bg) in gs.iter().zip(&back) {
                ensure(transpose_forward(bg).unwrap().equals(g).unwrap(), || {
                    format!("{mname}: forward(back g) != g")
                })?;
                trips += 1;
            }
            // naturality in M along every basis map h: M' → M
            for (pname, mp) in &cat {
                if mp.kdim().unwrap().unwrap() + dm > 8 {
                    continue;
                }
                for h in comodule_homs(mp, m).unwrap() {
                    for (f, tf) in fs.iter().zip(&fwd) {
                        let l = transpose_forward(&f.compose(&h)).unwrap();
                        ensure(l.equals(&tf.compose(&h.map)).unwrap(), || {
                            format!("square 1 fails for {pname} -> {mname}")
                        })?;
                        squares += 1;
                    }
                    for (g, bg) in gs.iter().zip(&back) {
                        let l = transpose_back(mp, &g.compose(&h.map), ext).unwrap();
                        ensure(l.equals(&bg.compose(&h)).unwrap(), || {
                            format!("square 2 fails for {pname} -> {mname}")
                        })?;
                        squares += 1;
                    }
                }
            }
            // naturality in N along every unit matrix φ: N → N'
            for (n2, ext2) in bases.iter().zip(&exts) {
                if dm + ext2.kdim().unwrap().unwrap() > 8 {
                    continue;
                }
                for phi in unit_matrices(n, n2) {
                    let ephi = extend_map(&phi, ext, ext2).unwrap();
                    for (f, tf) in fs.iter().zip(&fwd) {
                        let l = transpose_forward(&ephi.compose(f)).unwrap();
                        ensure(l.equals(&phi.compose(tf)).unwrap(), || format!("square 3 fails on {mname}"))?;
                        squares += 1;
                    }
                    for (g, bg) in gs.iter().zip(&back) {
                        let l = transpose_back(m, &phi.compose(g), ext2).unwrap();
                        ensure(l.equals(&ephi.compose(bg)).unwrap(), || format!("square 4 fails on {mname}"))?;
                        squares += 1;
                    }
                }
            }
        }
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(10), || format!("took {el:?}"))?;
    Ok(format!("{pairs} pairs, {trips} round trips, {squares} square instances"))
    })();
    let detail = result.unwrap();
    println!("{detail}");
}
