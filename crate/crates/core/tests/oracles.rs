//! Hand-derived values and brute-force oracles that share no code with the
//! library's own algorithms.

use std::collections::BTreeMap;

use abelfourier::fourier::{gamma_theta, GroupLaw};
use abelfourier::hodge::hodge_lattice;
use abelfourier::linalg::{cokernel_invariants, smith_normal_form};
use abelfourier::variety::gaussian_structure;
use abelfourier::{AbelianVariety, Int, IntMatrix, Multivector, PoincareContext, Rat, RatMatrix};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exterior algebra keyed by sorted generator lists; signs come from counting
/// the transpositions of a bubble sort.
type Dense = BTreeMap<Vec<u32>, Int>;

fn to_dense(x: &Multivector) -> Dense {
    x.terms()
        .map(|(mask, c)| ((0..64).filter(|i| mask >> i & 1 == 1).collect(), c.clone()))
        .collect()
}

fn bubble_sign(mut v: Vec<u32>) -> Option<(Vec<u32>, i32)> {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn dense_wedge(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let cat: Vec<u32> = ka.iter().chain(kb).copied().collect();
            if let Some((k, s)) = bubble_sign(cat) {
                *out.entry(k).or_insert_with(Int::zero) += ca * cb * Int::from(s);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn random_class(rng: &mut ChaCha8Rng, rank: u32, terms: usize) -> Multivector {
    let mut x = Multivector::zero(rank);
    for _ in 0..terms {
        let mask = rng.gen::<u64>() & ((1u64 << rank) - 1);
        x.add_term(mask, Int::from(rng.gen_range(-3i64..=3)));
    }
    x
}

#[test]
fn wedge_agrees_with_bubble_sort_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let rank = rng.gen_range(1..=8);
        let x = random_class(&mut rng, rank, 4);
        let y = random_class(&mut rng, rank, 4);
        assert_eq!(to_dense(&x.wedge(&y).unwrap()), dense_wedge(&to_dense(&x), &to_dense(&y)));
    }
}

#[test]
fn hand_expansions() {
    // (e1e2 + e3e4)^2 = 2·e1e2e3e4
    let x = Multivector::monomial(4, 0b0011, 1) + Multivector::monomial(4, 0b1100, 1);
    assert_eq!(x.wedge(&x).unwrap(), Multivector::monomial(4, 0b1111, 2));

    // θ = x1y1 + 2·x2y2 for type (1,2): θ²/2 integrates to 2
    let a = AbelianVariety::of_type(&[1, 2]).unwrap();
    let theta = a.theta_class();
    assert_eq!(theta, Multivector::monomial(4, 0b0011, 1) + Multivector::monomial(4, 0b1100, 2));
    assert_eq!(a.integrate(&theta.divided_power(2).unwrap()).unwrap(), Int::from(2));

    // principal g = 2: θ² = 2·point
    let p = AbelianVariety::standard_ppav(2).unwrap();
    assert_eq!(p.theta_class().cup_power(2).divide_exact(&Int::from(2)).unwrap(), p.point_class());
    assert_eq!(p.theta_class().divided_power(2).unwrap(), p.point_class());
}

#[test]
fn smith_form_by_hand() {
    let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
    assert_eq!(smith_normal_form(&m).divisors, vec![Int::from(2), Int::from(4)]);
    // d1 = gcd of entries, d1·d2 = |det|
    let m = IntMatrix::from_i64_rows(&[&[6, 10, 4], &[3, 9, 12], &[0, 6, 15]]);
    let d = smith_normal_form(&m).divisors;
    assert_eq!(d[0], Int::from(1));
    assert_eq!(d.iter().product::<Int>(), m.determinant().abs());
}

fn leibniz(m: &IntMatrix) -> Int {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.rows();
    perms(n)
        .into_iter()
        .map(|p| {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod: Int = (0..n).map(|i| m[(i, p[i])].clone()).product();
            if inv % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

#[test]
fn determinant_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let m = IntMatrix::from_fn(n, n, |_, _| Int::from(rng.gen_range(-9i64..=9)));
        assert_eq!(m.determinant(), leibniz(&m));
        let adj = m.adjugate();
        assert_eq!(adj.mul(&m), IntMatrix::identity(n).scale(&m.determinant()));
    }
}

/// Rank over ℚ by plain Gaussian elimination.
fn rational_rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Alternating form `W` of a degree-2 class.
fn form(x: &Multivector, n: usize) -> RatMatrix {
    let mut w = RatMatrix::zeros(n, n);
    for (mask, c) in x.terms() {
        let i = mask.trailing_zeros() as usize;
        let j = 63 - mask.leading_zeros() as usize;
        w[(i, j)] = Rat::from_integer(c.clone());
        w[(j, i)] = -Rat::from_integer(c.clone());
    }
    w
}

/// Dimension of `{W : JᵀWJ = W}` on the `C(n,2)` alternating forms.
fn invariant_form_dimension(j: &RatMatrix) -> usize {
    let n = j.rows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    // one column per basis form, one row per entry (a,b) of JᵀWJ − W
    let mut cols = Vec::new();
    for &(a, b) in &pairs {
        let mut w = RatMatrix::zeros(n, n);
        w[(a, b)] = Rat::one();
        w[(b, a)] = -Rat::one();
        let t = j.transpose().mul(&w).mul(j).sub(&w);
        cols.push(pairs.iter().map(|&(r, s)| t[(r, s)].clone()).collect::<Vec<_>>());
    }
    let rows: Vec<Vec<Rat>> = (0..pairs.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    pairs.len() - rational_rank(rows)
}

#[test]
fn hodge_rank_matches_invariant_forms() {
    for g in 1..=3u32 {
        let a = AbelianVariety::standard_ppav(g).unwrap();
        let lat = hodge_lattice(&a, 1).unwrap();
        let j = gaussian_structure(g as usize);
        assert_eq!(lat.rank(), invariant_form_dimension(&j));
        assert_eq!(lat.rank(), (g * g) as usize);
        for b in lat.basis_classes() {
            let w = form(&b, 2 * g as usize);
            assert_eq!(j.transpose().mul(&w).mul(&j), w);
        }
    }
    // type (1,2) with the same Gaussian structure
    let a = AbelianVariety::of_type(&[1, 2]).unwrap();
    assert_eq!(hodge_lattice(&a, 1).unwrap().rank(), invariant_form_dimension(&gaussian_structure(2)));
}

#[test]
fn hodge_rank_with_rational_structure() {
    let e = abelfourier::variety::frobenius_polarization(&[Int::one(), Int::one()]);
    let half = Rat::new(Int::from(1), Int::from(2));
    let mut j = RatMatrix::zeros(4, 4);
    j[(0, 1)] = -half;
    j[(1, 0)] = Rat::from_integer(Int::from(2));
    j[(2, 3)] = -Rat::one();
    j[(3, 2)] = Rat::one();
    let a = AbelianVariety::new(e, Some(j.clone()), "E'×E").unwrap();
    let lat = hodge_lattice(&a, 1).unwrap();
    let dims = [invariant_form_dimension(&j), invariant_form_dimension(&j.transpose())];
    assert!(dims.contains(&lat.rank()), "rank {} vs oracle {dims:?}", lat.rank());
}

#[test]
fn divisor_products_generate_hdg2_of_e_squared() {
    let a = AbelianVariety::standard_ppav(2).unwrap();
    let lat = hodge_lattice(&a, 1).unwrap();
    let span = abelfourier::hodge::divisor_power_span(&a, 1).unwrap();
    // coordinates of the spanning classes in the lattice basis
    let n = lat.rank();
    let cols: Vec<Vec<Int>> = (0..span.cols())
        .map(|c| {
            let x = Multivector::from_coordinates(4, lat.ambient_basis(), &span.column(c));
            lat.coordinates(&x).unwrap()
        })
        .collect();
    let m = IntMatrix::from_columns(n, &cols);
    assert!(cokernel_invariants(&m, n).unwrap().is_trivial());
}

#[test]
fn poincare_class_genus_one() {
    let a = AbelianVariety::standard_ppav(1).unwrap();
    let ctx = PoincareContext::new(&a);
    let x = ctx.product().variety();
    let ell = ctx.ell();
    assert_eq!(ell.len(), 2);
    assert_eq!(x.integrate(&ell.wedge(ell).unwrap()).unwrap(), Int::from(-2));
    let e = ell.cup_exponential().unwrap();
    assert_eq!(x.integrate(&e.graded_component(4)).unwrap(), Int::from(-1));
}

#[test]
fn fourier_of_unit_and_point() {
    for g in 1..=3 {
        let a = AbelianVariety::standard_ppav(g).unwrap();
        let ctx = PoincareContext::new(&a);
        let hat = ctx.dual();
        assert_eq!(ctx.fourier(&a.point_class()).unwrap(), hat.fundamental_class());
        let sign = if g % 2 == 0 { 1 } else { -1 };
        assert_eq!(ctx.fourier(&a.fundamental_class()).unwrap(), hat.point_class().scale_i64(sign));
    }
}

#[test]
fn minimal_class_of_e_cubed() {
    let a = AbelianVariety::standard_ppav(3).unwrap();
    // θ = x1y1 + x2y2 + x3y3 with x_i = e_{2i}, y_i = e_{2i+1}
    let axes = [0b001111u64, 0b110011, 0b111100];
    let expected = axes.iter().fold(Multivector::zero(6), |acc, &m| acc + Multivector::monomial(6, m, 1));
    assert_eq!(gamma_theta(&a).unwrap(), expected);
}

#[test]
fn theta_star_theta_genus_two() {
    let a = AbelianVariety::standard_ppav(2).unwrap();
    let law = GroupLaw::new(&a);
    let t = a.theta_class();
    assert_eq!(law.star(&t, &t).unwrap(), a.fundamental_class().scale_i64(2));
    assert_eq!(law.star_divided_power(&gamma_theta(&a).unwrap(), 2).unwrap(), a.fundamental_class());
}

#[test]
fn principal_polarization_isogeny_has_degree_one() {
    for g in 1..=3 {
        let a = AbelianVariety::standard_ppav(g).unwrap();
        assert_eq!(a.polarization_isogeny().degree().unwrap(), Int::one());
    }
    let b = AbelianVariety::of_type(&[1, 2]).unwrap();
    assert_eq!(b.polarization_isogeny().degree().unwrap(), Int::from(4));
}
