//! Seeded generators of small valid DG algebras, bimodules and DGA maps,
//! used by property tests and randomized campaigns.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{DgAlgebra, DgaMap, ProductTerm};
use crate::algebras::{Algebra, Bimodule};
use crate::exactla::{GroundField, Matrix, Scalar};

pub fn random_field<R: Rng>(rng: &mut R) -> GroundField {
    match rng.gen_range(0..4) {
        0 => GroundField::Prime(2),
        1 => GroundField::Prime(3),
        2 => GroundField::Prime(5),
        _ => GroundField::Rationals,
    }
}

pub fn random_scalar<R: Rng>(rng: &mut R, field: GroundField) -> Scalar {
    match field.order() {
        Some(p) => field.element(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn random_invertible<R: Rng>(rng: &mut R, field: GroundField, n: usize) -> Matrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| random_scalar(rng, field)).collect())
            .collect();
        let m = Matrix::from_rows(field, n, rows);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A small algebra from a fixed menu, in a random basis.
pub fn random_algebra<R: Rng>(rng: &mut R, field: GroundField) -> Algebra {
    let a = match rng.gen_range(0..5) {
        0 => Algebra::ground(field),
        1 => Algebra::truncated_polynomial(field, 2),
        2 => Algebra::truncated_polynomial(field, rng.gen_range(3..=4)),
        3 => Algebra::upper_triangular(field, 2),
        _ => Algebra::truncated_polynomial(field, 2)
            .tensor(&Algebra::truncated_polynomial(field, 2))
            .expect("same field"),
    };
    if rng.gen_bool(0.5) && a.dim() > 1 {
        // keep the unit as the first basis vector so augmentations stay simple
        let n = a.dim();
        loop {
            let mut p = random_invertible(rng, field, n);
            for r in 0..n {
                p.set(r, 0, a.unit()[r].clone());
            }
            if p.is_invertible() {
                return a.change_basis(&p).expect("invertible");
            }
        }
    }
    a
}

/// Basis of the center of `a`.
pub fn center(a: &Algebra) -> Vec<Vec<Scalar>> {
    let n = a.dim();
    let f = a.field();
    let mut rows = Vec::new();
    for j in 0..n {
        let e = f.unit_vec(n, j);
        // x ↦ e_j x - x e_j
        let m = a.left_mul(&e).sub(&a.right_mul(&e));
        for r in 0..n {
            rows.push(m.row(r).to_vec());
        }
    }
    Matrix::from_rows(f, n, rows).kernel_basis()
}

/// `B[y]/y²` with `|y| = 1`, `y` central and `d y = z` for a central `z`.
pub fn exterior_extension(b: &Algebra, z: &[Scalar]) -> DgAlgebra {
    let f = b.field();
    let labels = vec![
        b.basis().to_vec(),
        b.basis().iter().map(|s| format!("{s}·y")).collect(),
    ];
    let d1 = b.right_mul(z);
    let mut product: Vec<ProductTerm> = Vec::new();
    for (i, j, k, c) in b.triples() {
        product.push((0, i, 0, j, k, c.clone()));
        product.push((0, i, 1, j, k, c.clone()));
        product.push((1, i, 0, j, k, c));
    }
    DgAlgebra::new(f, labels, vec![d1], &product, b.unit().to_vec(), true)
        .expect("well-formed exterior extension")
}

/// `k ⊕ k u ⊕ k v` with `|u| = j`, `|v| = j + 1`, `d v = u` and all
/// products of `u, v` zero. Acyclic apart from the unit.
pub fn acyclic_pair(field: GroundField, j: usize) -> DgAlgebra {
    let hi = j + 1;
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); hi + 1];
    labels[0].push("1".into());
    labels[j].push("u".into());
    labels[j + 1].push("v".into());
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    let mut diffs = Vec::new();
    for p in 1..=hi {
        let mut d = Matrix::zeros(field, dims[p - 1], dims[p]);
        if p == j + 1 {
            d.set(if j == 0 { 1 } else { 0 }, 0, field.one());
        }
        diffs.push(d);
    }
    let ui = if j == 0 { 1 } else { 0 };
    let product = [
        (0, 0, 0, 0, 0, field.one()),
        (0, 0, j, ui, ui, field.one()),
        (j, ui, 0, 0, ui, field.one()),
        (0, 0, j + 1, 0, 0, field.one()),
        (j + 1, 0, 0, 0, 0, field.one()),
    ];
    DgAlgebra::new(field, labels, diffs, &product, field.unit_vec(dims[0], 0), true)
        .expect("well-formed acyclic pair")
}

/// A random bimodule over `a` from a fixed menu.
pub fn random_bimodule<R: Rng>(rng: &mut R, a: &Algebra) -> Bimodule {
    if a.dim() == 0 {
        return Bimodule::zero(a);
    }
    let reg = Bimodule::regular(a);
    let aug = Bimodule::from_character(a, &a.field().unit_vec(a.dim(), 0))
        .ok()
        .filter(|m| m.validate_against(a).map(|r| r.is_valid()).unwrap_or(false));
    let mut menu = vec![reg.clone()];
    if let Some(k) = aug.clone() {
        menu.push(k.clone());
        menu.push(reg.direct_sum(&k).expect("same algebra"));
    }
    if a.dim() <= 2 {
        menu.push(reg.direct_sum(&reg).expect("same algebra"));
    }
    menu.choose(rng).expect("nonempty").clone()
}

fn random_base<R: Rng>(rng: &mut R, field: GroundField) -> DgAlgebra {
    let b = random_algebra(rng, field);
    if rng.gen_bool(0.5) {
        let zs = center(&b);
        let mut z = field.zero_vec(b.dim());
        for v in &zs {
            field.axpy(&mut z, &random_scalar(rng, field), v);
        }
        exterior_extension(&b, &z)
    } else {
        DgAlgebra::from_algebra(&b)
    }
}

/// Random per-degree change of basis.
pub fn conjugate<R: Rng>(rng: &mut R, c: &DgAlgebra) -> (DgAlgebra, Vec<Matrix>) {
    let mats: Vec<Matrix> = (0..=c.hi())
        .map(|p| random_invertible(rng, c.field(), c.dim(p)))
        .collect();
    (c.change_basis(&mats).expect("invertible"), mats)
}

/// A random valid DGA with total dimension at most `max_total` and window
/// at most `max_hi`.
pub fn random_dga<R: Rng>(rng: &mut R, field: GroundField, max_total: usize, max_hi: usize) -> DgAlgebra {
    loop {
        let c = match rng.gen_range(0..5) {
            0 => DgAlgebra::from_algebra(&random_algebra(rng, field)),
            1 => random_base(rng, field),
            2 => {
                let base = random_base(rng, field);
                base.tensor(&acyclic_pair(field, rng.gen_range(0..=2))).expect("same field")
            }
            3 => {
                let base = random_base(rng, field);
                let h0 = base.h0().expect("exact top").algebra;
                let m = random_bimodule(rng, &h0);
                base.trivial_extension(&m, rng.gen_range(1..=3)).expect("valid extension")
            }
            _ => {
                let a = DgAlgebra::from_algebra(&Algebra::truncated_polynomial(field, 2));
                let b = random_base(rng, field);
                a.tensor(&b).expect("same field")
            }
        };
        if c.total_dim() > max_total || c.hi() > max_hi {
            continue;
        }
        if rng.gen_bool(0.5) {
            return conjugate(rng, &c).0;
        }
        return c;
    }
}

/// A random DGA map from a menu of natural maps, optionally conjugated by
/// changes of basis on both ends.
pub fn random_dga_map<R: Rng>(rng: &mut R, field: GroundField) -> DgaMap {
    loop {
        let c = random_dga(rng, field, 10, 4);
        let f = match rng.gen_range(0..7) {
            0 => DgaMap::identity(&c),
            1 => DgaMap::unit_map(&c),
            2 => {
                let n = rng.gen_range(0..=c.hi());
                match c.truncation_map(n) {
                    Ok(m) => m,
                    Err(_) => continue,
                }
            }
            3 | 4 => {
                let h0 = c.h0().expect("exact top").algebra;
                let m = random_bimodule(rng, &h0);
                let (incl, proj) = c
                    .trivial_extension_maps(&m, rng.gen_range(1..=3))
                    .expect("valid extension");
                if rng.gen_bool(0.5) {
                    incl
                } else {
                    proj
                }
            }
            5 => {
                let e = acyclic_pair(field, rng.gen_range(1..=2));
                DgaMap::tensor_inclusion(&c, &e).expect("valid inclusion")
            }
            _ => {
                let e = acyclic_pair(field, rng.gen_range(1..=2));
                DgaMap::tensor_augmentation(&c, &e, &[field.one()]).expect("valid augmentation")
            }
        };
        if f.source().total_dim() + f.target().total_dim() > 30 {
            continue;
        }
        if rng.gen_bool(0.5) {
            let (s2, ps) = conjugate(rng, f.source());
            let (t2, pt) = conjugate(rng, f.target());
            let maps = (0..=f.hi())
                .map(|p| {
                    pt[p]
                        .inverse()
                        .expect("invertible")
                        .mul(f.component(p))
                        .mul(&ps[p])
                })
                .collect();
            return DgaMap::new(s2, t2, maps).expect("conjugated map");
        }
        return f;
    }
}
