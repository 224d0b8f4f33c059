use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebras::bimodule_hom_space;
use crate::dga::random::{random_algebra, random_bimodule, random_field, random_scalar};

fn f2() -> GroundField {
    GroundField::prime(2).unwrap()
}

fn f3() -> GroundField {
    GroundField::prime(3).unwrap()
}

fn dims(a: &Algebra, m: &Bimodule, normalized: bool, top: usize) -> Vec<usize> {
    let c = HochschildComplex::new(a, m, normalized).unwrap();
    (0..=top).map(|s| c.cohomology(s).unwrap().dim).collect()
}

#[test]
fn delta_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..25 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        for normalized in [true, false] {
            let c = HochschildComplex::new(&a, &m, normalized).unwrap();
            for s in 0..3 {
                if c.cochain_dim(s + 2).unwrap() > 3000 {
                    break;
                }
                let dd = c.delta(s + 1).unwrap().mul(&c.delta(s).unwrap());
                assert!(dd.is_zero(), "level {s}, normalized {normalized}");
            }
        }
    }
}

#[test]
fn ground_field_has_no_higher_cohomology() {
    let k = Algebra::ground(f3());
    let m = Bimodule::regular(&k);
    assert_eq!(dims(&k, &m, true, 4), vec![1, 0, 0, 0, 0]);
    assert_eq!(dims(&k, &m, false, 3), vec![1, 0, 0, 0]);
}

#[test]
fn dual_numbers() {
    let a = Algebra::truncated_polynomial(f2(), 2);
    let m = Bimodule::regular(&a);
    assert_eq!(dims(&a, &m, true, 5), vec![2; 6]);
    let a = Algebra::truncated_polynomial(f3(), 2);
    let m = Bimodule::regular(&a);
    assert_eq!(dims(&a, &m, true, 5), vec![2, 1, 1, 1, 1, 1]);
    assert_eq!(dims(&a, &m, false, 3), vec![2, 1, 1, 1]);
    let q = Algebra::truncated_polynomial(GroundField::Rationals, 2);
    assert_eq!(dims(&q, &Bimodule::regular(&q), true, 4), vec![2, 1, 1, 1, 1]);
}

#[test]
fn normalized_and_full_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..15 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        let full = HochschildComplex::new(&a, &m, false).unwrap();
        let top = (0..4)
            .take_while(|&s| full.cochain_dim(s + 1).unwrap() <= 1500)
            .last()
            .unwrap_or(0);
        assert_eq!(dims(&a, &m, true, top), dims(&a, &m, false, top));
    }
}

#[test]
fn normalize_class_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        let norm = HochschildComplex::new(&a, &m, true).unwrap();
        let full = HochschildComplex::new(&a, &m, false).unwrap();
        for s in 1..=2 {
            if full.cochain_dim(s + 1).unwrap() > 1500 {
                break;
            }
            let hh = norm.cohomology(s).unwrap();
            let coords: Vec<Scalar> = (0..hh.dim).map(|_| random_scalar(&mut rng, field)).collect();
            let z = hh.class_from_coords(&coords).cochain;
            let mut big = norm.to_unnormalized(s, &z).unwrap();
            assert!(full.is_cocycle(s, &big).unwrap());
            // perturb by a random full coboundary
            let prev = full.delta(s - 1).unwrap();
            let b: Vec<Scalar> = (0..prev.cols()).map(|_| random_scalar(&mut rng, field)).collect();
            big = field.add_vec(&big, &prev.mul_vec(&b));
            assert_eq!(norm.normalize_class(s, &big).unwrap(), coords);
        }
    }
}

#[test]
fn canonical_representatives_are_cocycles() {
    let a = Algebra::truncated_polynomial(f3(), 3);
    let m = Bimodule::regular(&a);
    let c = HochschildComplex::new(&a, &m, true).unwrap();
    for s in 0..=3 {
        let hh = c.cohomology(s).unwrap();
        let reps = hh.representatives();
        assert_eq!(reps.len(), hh.dim);
        for (i, r) in reps.iter().enumerate() {
            assert!(c.is_cocycle(s, &r.cochain).unwrap());
            assert_eq!(hh.coords(&r.cochain), f3().unit_vec(hh.dim, i));
            assert_eq!(r.context, c.context(s));
        }
    }
    assert_ne!(c.context(1), c.context(2));
}

#[test]
fn cap_is_enforced() {
    let a = Algebra::truncated_polynomial(f2(), 4);
    let m = Bimodule::regular(&a);
    let caps = Caps {
        tensor: 100,
        ..Caps::default()
    };
    let err = hh(&a, &m, 4, true, &caps).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { .. }));
    assert!(hh(&a, &m, 1, true, &caps).is_ok());
}

#[test]
fn aut_action() {
    let a = Algebra::truncated_polynomial(f3(), 2);
    let m = Bimodule::regular(&a);
    let c = HochschildComplex::new(&a, &m, true).unwrap();
    let hh1 = c.cohomology(1).unwrap();
    let rep = &hh1.representatives()[0];
    let id = BimoduleMap::identity(&m);
    assert_eq!(aut_action_on_hh(&c, &hh1, &id, rep).unwrap(), *rep);
    let two = BimoduleMap {
        matrix: Matrix::identity(f3(), 2).scale(&f3().from_i64(2)),
    };
    let moved = aut_action_on_hh(&c, &hh1, &two, rep).unwrap();
    assert_eq!(hh1.coords(&moved.cochain), vec![f3().from_i64(2)]);
    let hh2 = c.cohomology(2).unwrap();
    let other = &hh2.representatives()[0];
    assert!(matches!(
        aut_action_on_hh(&c, &hh1, &id, other),
        Err(Error::BimoduleMismatch(_))
    ));
    let singular = BimoduleMap {
        matrix: a.left_mul(&f3().unit_vec(2, 1)),
    };
    assert!(aut_action_on_hh(&c, &hh1, &singular, rep).is_err());
}

#[test]
fn derivation_examples() {
    let k = Algebra::ground(f2());
    assert_eq!(derivations(&k, &Bimodule::regular(&k)).unwrap().len(), 0);
    let a = Algebra::truncated_polynomial(f2(), 2);
    assert_eq!(derivations(&a, &Bimodule::regular(&a)).unwrap().len(), 2);
    let b = Algebra::truncated_polynomial(f3(), 2);
    let ders = derivations(&b, &Bimodule::regular(&b)).unwrap();
    assert_eq!(ders.len(), 1);
    // D(x) = x
    assert_eq!(ders[0].column(1), f3().unit_vec(2, 1));
    assert_eq!(omega1(&a).unwrap().bimodule.dim(), 2);
}

#[test]
fn omega1_represents_derivations() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        let om = omega1(&a).unwrap();
        assert_eq!(om.bimodule.dim(), a.dim() * a.dim() - a.dim());
        assert!(om.multiplication.mul(&om.inclusion).is_zero());
        let homs = bimodule_hom_space(&om.bimodule, &m).unwrap();
        assert_eq!(homs.len(), derivations(&a, &m).unwrap().len());
    }
}

#[test]
fn derivations_satisfy_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        let n = a.dim();
        for d in derivations(&a, &m).unwrap() {
            for i in 0..n {
                for j in 0..n {
                    let lhs = d.mul_vec(a.product(i, j));
                    let di = d.column(i);
                    let dj = d.column(j);
                    let rhs = field.add_vec(&m.left(i).mul_vec(&dj), &m.right(j).mul_vec(&di));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

fn free_on(field: GroundField, degree: usize, window: usize) -> SemifreeDga {
    SemifreeDga::new(field, window)
        .adjoin_cell_str("y", degree, "0")
        .unwrap()
}

#[test]
fn dg_examples() {
    let q = GroundField::Rationals;
    for n in 0..=3 {
        let t = free_on(q, n + 1, n + 2);
        assert_eq!(dg_hh(&t.expand().unwrap(), 1, n).unwrap().dim, 1);
        assert_eq!(der_classes(&t, 1, n).unwrap().dim, 1);
        assert_eq!(der_classes(&t, 3, n).unwrap().dim, 3);
    }
    for n in 1..=3 {
        let t = free_on(f2(), 1, n + 2);
        assert_eq!(dg_hh(&t.expand().unwrap(), 1, n).unwrap().dim, 0);
        assert_eq!(der_classes(&t, 1, n).unwrap().dim, 0);
    }
    let k = DgAlgebra::ground(f2());
    assert_eq!(dg_hh(&k, 2, 0).unwrap().dim, 0);
    let short = free_on(q, 2, 2);
    assert!(matches!(der_classes(&short, 1, 1), Err(Error::WindowLimited(_))));
    assert!(matches!(
        dg_hh(&short.expand().unwrap(), 1, 1),
        Err(Error::WindowLimited(_))
    ));
}

#[test]
fn dg_hh_of_square_zero_extensions() {
    // k ⊕ Σ^j k with zero products: the bar construction is the tensor
    // coalgebra on a class of degree j + 1 with zero differential.
    for field in [f2(), f3(), GroundField::Rationals] {
        let k = DgAlgebra::ground(field);
        let kk = Bimodule::regular(&Algebra::ground(field));
        for j in 1..=3 {
            let e = k.trivial_extension(&kk, j).unwrap();
            for n in 0..=4 {
                let expected = usize::from((n + 2) % (j + 1) == 0);
                assert_eq!(dg_hh(&e, 1, n).unwrap().dim, expected, "j={j} n={n}");
            }
        }
    }
}

#[test]
fn dg_hh_matches_derivation_classes() {
    let q = GroundField::Rationals;
    let x = SemifreeDga::new(q, 6).adjoin_cell_str("x", 1, "0").unwrap();
    let cases = [
        x.adjoin_cell_str("y", 3, "x*x").unwrap(),
        x.adjoin_cell_str("y", 3, "x*x")
            .unwrap()
            .adjoin_cell_str("z", 5, "x*y + y*x")
            .unwrap(),
        SemifreeDga::new(q, 6)
            .adjoin_cell_str("a", 2, "0")
            .unwrap()
            .adjoin_cell_str("b", 3, "a")
            .unwrap()
            .adjoin_cell_str("c", 2, "0")
            .unwrap(),
        SemifreeDga::new(f3(), 6)
            .adjoin_cell_str("a", 1, "0")
            .unwrap()
            .adjoin_cell_str("b", 1, "0")
            .unwrap()
            .adjoin_cell_str("u", 3, "a*b + b*a")
            .unwrap(),
    ];
    for s in &cases {
        let c = s.expand().unwrap();
        for n in 0..=3 {
            let bar = dg_hh(&c, 1, n).unwrap().dim;
            let der = der_classes(s, 1, n).unwrap().dim;
            assert_eq!(bar, der, "{:?} n={n}", s.names());
        }
    }
}

#[test]
fn bar_complex_rejects_non_connected() {
    let a = DgAlgebra::from_algebra(&Algebra::truncated_polynomial(f2(), 2));
    assert!(matches!(reduced_bar_complex(&a, 2), Err(Error::Invalid(_))));
}

#[test]
fn pointwise_delta_matches_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..15 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        for normalized in [true, false] {
            let c = HochschildComplex::new(&a, &m, normalized).unwrap();
            for s in 0..3 {
                if c.cochain_dim(s + 1).unwrap() > 1000 {
                    break;
                }
                let f: Vec<Scalar> = (0..c.cochain_dim(s).unwrap())
                    .map(|_| random_scalar(&mut rng, field))
                    .collect();
                assert_eq!(c.apply_delta(s, &f).unwrap(), c.delta(s).unwrap().mul_vec(&f));
            }
        }
    }
}

#[test]
fn unit_vanishing_cocycles_read_off_directly() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..10 {
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        let norm = HochschildComplex::new(&a, &m, true).unwrap();
        let full = HochschildComplex::new(&a, &m, false).unwrap();
        let s = 2;
        if full.cochain_dim(s + 1).unwrap() > 1500 {
            continue;
        }
        let hh = norm.cohomology(s).unwrap();
        let coords: Vec<Scalar> = (0..hh.dim).map(|_| random_scalar(&mut rng, field)).collect();
        let z = hh.class_from_coords(&coords).cochain;
        let big = norm.to_unnormalized(s, &z).unwrap();
        assert_eq!(norm.restrict(s, &big).unwrap(), z);
        assert_eq!(norm.class_of_unnormalized(s, &big).unwrap(), coords);
        let prev = full.delta(s - 1).unwrap();
        let b: Vec<Scalar> = (0..prev.cols()).map(|_| random_scalar(&mut rng, field)).collect();
        let shifted = field.add_vec(&big, &prev.mul_vec(&b));
        assert_eq!(norm.class_of_unnormalized(s, &shifted).unwrap(), coords);
    }
}
