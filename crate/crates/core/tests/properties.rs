use abelfourier::fourier::GroupLaw;
use abelfourier::hodge::{hodge_lattice_with, same_lattice};
use abelfourier::linalg::smith_normal_form;
use abelfourier::{AbelianVariety, Homomorphism, HodgeParameter, Int, IntMatrix, Multivector, PoincareContext};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn class(rank: u32, even: bool, min_degree: u32, max_degree: u32) -> impl Strategy<Value = Multivector> {
    let full = if rank == 64 { u64::MAX } else { (1u64 << rank) - 1 };
    prop::collection::vec((any::<u64>(), -3i64..=3), 0..6).prop_map(move |terms| {
        let mut x = Multivector::zero(rank);
        for (m, c) in terms {
            let mut mask = m & full;
            while mask.count_ones() > max_degree || (even && mask.count_ones() % 2 == 1) {
                mask &= mask - 1;
            }
            if mask.count_ones() >= min_degree {
                x.add_term(mask, Int::from(c));
            }
        }
        x
    })
}

fn homogeneous(rank: u32) -> impl Strategy<Value = Multivector> {
    (0..=rank).prop_flat_map(move |k| {
        let basis = Multivector::basis_masks(rank, k);
        prop::collection::vec((0..basis.len().max(1), -3i64..=3), 1..4).prop_map(move |picks| {
            let mut x = Multivector::zero(rank);
            for (i, c) in picks {
                if let Some(&m) = basis.get(i) {
                    x.add_term(m, Int::from(c));
                }
            }
            x
        })
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| IntMatrix::from_fn(rows, cols, |r, c| Int::from(v[r * cols + c])))
}

fn ppav(g: u32) -> AbelianVariety {
    AbelianVariety::standard_ppav(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative(x in class(6, false, 0, 6), y in class(6, false, 0, 6), z in class(6, false, 0, 6)) {
        let l = x.wedge(&y).unwrap().wedge(&z).unwrap();
        let r = x.wedge(&y.wedge(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn wedge_is_graded_commutative(x in homogeneous(6), y in homogeneous(6)) {
        let (p, q) = (x.homogeneous_degree().unwrap_or(0), y.homogeneous_degree().unwrap_or(0));
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(x.wedge(&y).unwrap(), y.wedge(&x).unwrap().scale_i64(sign));
    }

    #[test]
    fn divide_exact_inverts_scaling(x in class(6, false, 0, 6), n in 1i64..=7) {
        let n = Int::from(n);
        prop_assert_eq!(x.scale(&n).divide_exact(&n).unwrap(), x);
    }

    #[test]
    fn divide_exact_reports_first_offender(x in class(5, false, 0, 5)) {
        let two = Int::from(2);
        let odd = x.terms().find(|(_, c)| c.is_odd()).map(|(m, c)| (m, c.clone()));
        match (x.divide_exact(&two), odd) {
            (Ok(_), None) => {}
            (Err(abelfourier::Error::NonDivisible { mask, coefficient, .. }), Some((m, c))) => {
                prop_assert_eq!(mask, m);
                prop_assert_eq!(coefficient, c);
            }
            (other, odd) => prop_assert!(false, "{:?} vs {:?}", other, odd),
        }
    }

    #[test]
    fn pullback_is_functorial(f in matrix(4, 2), g in matrix(6, 4), y in class(6, false, 0, 6)) {
        let (a, b, c) = (ppav(1), ppav(2), ppav(3));
        let f = Homomorphism::new(a, b, f).unwrap();
        let g = Homomorphism::new(f.target().clone(), c, g).unwrap();
        let gf = f.then(&g).unwrap();
        prop_assert_eq!(gf.pullback(&y).unwrap(), f.pullback(&g.pullback(&y).unwrap()).unwrap());
    }

    #[test]
    fn pushforward_is_functorial(f in matrix(4, 2), g in matrix(2, 4), x in class(2, false, 0, 2)) {
        let (a, b) = (ppav(1), ppav(2));
        let f = Homomorphism::new(a.clone(), b, f).unwrap();
        let g = Homomorphism::new(f.target().clone(), a, g).unwrap();
        let gf = f.then(&g).unwrap();
        prop_assert_eq!(gf.pushforward(&x).unwrap(), g.pushforward(&f.pushforward(&x).unwrap()).unwrap());
    }

    #[test]
    fn pushforward_is_adjoint_to_pullback(m in matrix(4, 6), x in class(6, false, 0, 6), y in class(4, false, 0, 4)) {
        let f = Homomorphism::new(ppav(3), ppav(2), m).unwrap();
        let lhs = f.target().integrate(&f.pushforward(&x).unwrap().wedge(&y).unwrap()).unwrap();
        let rhs = f.source().integrate(&x.wedge(&f.pullback(&y).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn smith_form_round_trips(m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let s = smith_normal_form(&m);
        prop_assert!(s.left.is_unimodular() && s.right.is_unimodular());
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal_matrix());
        let nz: Vec<&Int> = s.divisors.iter().filter(|d| !d.is_zero()).collect();
        prop_assert!(nz.iter().all(|d| d.is_positive()));
        prop_assert!(nz.windows(2).all(|w| (w[1] % w[0]).is_zero()));
        prop_assert!(s.divisors[nz.len()..].iter().all(Zero::is_zero));
    }

    #[test]
    fn fourier_is_an_involution_up_to_sign(x in class(4, false, 0, 4), y in class(6, false, 0, 6)) {
        for (a, z) in [(ppav(2), x), (AbelianVariety::of_type(&[1, 1, 3]).unwrap(), y)] {
            let ctx = PoincareContext::new(&a);
            let sign = if a.genus() % 2 == 0 { 1 } else { -1 };
            let twice = ctx.fourier_on_dual(&ctx.fourier(&z).unwrap()).unwrap();
            prop_assert_eq!(&twice, &abelfourier::fourier::minus_one_pullback(&z).scale_i64(sign));
            prop_assert_eq!(ctx.inverse_fourier(&ctx.fourier(&z).unwrap()).unwrap(), z);
        }
    }

    #[test]
    fn star_is_commutative_on_even_classes(x in class(4, true, 0, 4), y in class(4, true, 0, 4)) {
        let law = GroupLaw::new(&ppav(2));
        prop_assert_eq!(law.star(&x, &y).unwrap(), law.star(&y, &x).unwrap());
    }

    #[test]
    fn star_exponential_is_multiplicative(x in class(4, true, 2, 2), y in class(4, true, 2, 2)) {
        let law = GroupLaw::new(&ppav(2));
        let sum = law.star_exponential(&(&x + &y)).unwrap();
        let prod = law.star(&law.star_exponential(&x).unwrap(), &law.star_exponential(&y).unwrap()).unwrap();
        prop_assert_eq!(sum, prod);
    }
}

#[test]
fn poincare_pairing_is_unimodular_in_every_degree() {
    for a in [ppav(1), ppav(2), ppav(3), AbelianVariety::of_type(&[1, 2]).unwrap()] {
        let n = a.rank();
        for k in 0..=n {
            let lo = Multivector::basis_masks(n, k);
            let hi = Multivector::basis_masks(n, n - k);
            let m = IntMatrix::from_fn(lo.len(), hi.len(), |i, j| {
                let x = Multivector::monomial(n, lo[i], 1).wedge(&Multivector::monomial(n, hi[j], 1)).unwrap();
                a.integrate(&x).unwrap()
            });
            assert!(m.is_unimodular(), "{} degree {k}", a.name());
        }
    }
}

#[test]
fn hodge_lattices_do_not_depend_on_the_parameter() {
    for a in [ppav(1), ppav(2), ppav(3), AbelianVariety::of_type(&[1, 2]).unwrap()] {
        for k in 0..=a.genus() {
            let x = hodge_lattice_with(&a, k, HodgeParameter::DEFAULT).unwrap();
            let y = hodge_lattice_with(&a, k, HodgeParameter::ALTERNATE).unwrap();
            assert!(same_lattice(&x, &y), "{} k = {k}", a.name());
        }
    }
}
