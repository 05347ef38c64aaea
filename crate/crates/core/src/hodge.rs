//! Hodge classes for varieties with an exact rational complex structure.
//!
//! For `u = a + b·J*` acting on `H¹`, the induced operator on `Λ^{2k}` has
//! eigenvalues `(a+bi)^p (a−bi)^q` on the `(p,q)` part. When `a² + b²` is a
//! rational prime these are distinct Gaussian integers unless `p = q`, so the
//! `(k,k)` lattice is exactly the eigenlattice for `(a² + b²)^k`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::fourier::PoincareContext;
use crate::linalg::{
    cokernel_invariants, kernel_saturated, CokernelInvariants, Int, IntMatrix, LatticeCoordinates,
};
use crate::variety::AbelianVariety;

/// The Gaussian integer `a + bi` used to select `(k,k)` classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HodgeParameter {
    pub a: i64,
    pub b: i64,
}

impl HodgeParameter {
    pub const DEFAULT: HodgeParameter = HodgeParameter { a: 1, b: 2 };
    pub const ALTERNATE: HodgeParameter = HodgeParameter { a: 2, b: 3 };

    pub fn norm(self) -> i64 {
        self.a * self.a + self.b * self.b
    }
}

impl Default for HodgeParameter {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Integer matrix `u' = a·d·I + b·J'ᵀ` where `J = J'/d`, together with the
/// eigenvalue scale `(a² + b²)·d²` per unit of half-degree.
fn scaled_operator(a: &AbelianVariety, p: HodgeParameter) -> Result<(IntMatrix, Int)> {
    let j = a.complex_structure().ok_or(Error::NoComplexStructure)?;
    let (jn, d) = j.clear_denominators();
    let n = a.rank() as usize;
    let u = IntMatrix::identity(n)
        .scale(&(&d * BigInt::from(p.a)))
        .add(&jn.transpose().scale(&BigInt::from(p.b)));
    Ok((u, BigInt::from(p.norm()) * &d * &d))
}

/// Membership test by direct evaluation of the selecting operator.
pub fn is_hodge(a: &AbelianVariety, x: &Multivector) -> Result<bool> {
    is_hodge_with(a, x, HodgeParameter::DEFAULT)
}

pub fn is_hodge_with(a: &AbelianVariety, x: &Multivector, p: HodgeParameter) -> Result<bool> {
    a.check_class(x)?;
    let (u, scale) = scaled_operator(a, p)?;
    let deg = x.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if x.is_zero() {
        return Ok(true);
    }
    if deg % 2 == 1 {
        return Ok(false);
    }
    let image = x.apply_integer(&u)?;
    let expected = x.scale(&num_traits::pow(scale, (deg / 2) as usize));
    Ok(image == expected)
}

/// Saturated lattice `Hdg^{2k}(A, ℤ)` inside `Λ^{2k}`.
#[derive(Clone, Debug)]
pub struct HodgeLattice {
    rank_ambient: u32,
    k: u32,
    masks: Vec<u64>,
    coords: LatticeCoordinates,
}

impl HodgeLattice {
    pub fn half_degree(&self) -> u32 {
        self.k
    }

    pub fn degree(&self) -> u32 {
        2 * self.k
    }

    pub fn rank(&self) -> usize {
        self.coords.rank()
    }

    /// Standard monomial basis of `Λ^{2k}` indexing the rows of [`Self::basis`].
    pub fn ambient_basis(&self) -> &[u64] {
        &self.masks
    }

    /// Columns are lattice generators in standard coordinates.
    pub fn basis(&self) -> &IntMatrix {
        self.coords.basis()
    }

    pub fn basis_classes(&self) -> Vec<Multivector> {
        let b = self.basis();
        (0..b.cols())
            .map(|c| Multivector::from_coordinates(self.rank_ambient, &self.masks, &b.column(c)))
            .collect()
    }

    /// Coordinates of `x` in the lattice basis.
    pub fn coordinates(&self, x: &Multivector) -> Result<Vec<Int>> {
        if x.rank() != self.rank_ambient {
            return Err(Error::RankMismatch {
                left: x.rank(),
                right: self.rank_ambient,
            });
        }
        if x.degrees().iter().any(|&d| d != self.degree()) {
            return Err(Error::NotInLattice);
        }
        self.coords
            .coordinates(&x.coordinates(&self.masks))
            .ok_or(Error::NotInLattice)
    }

    pub fn contains(&self, x: &Multivector) -> bool {
        self.coordinates(x).is_ok()
    }

    /// Elementary divisors of `Λ^{2k} / Hdg^{2k}`; a saturated lattice has no
    /// torsion here.
    pub fn saturation_invariants(&self) -> CokernelInvariants {
        cokernel_invariants(self.basis(), self.masks.len()).expect("basis rows match ambient")
    }
}

pub fn hodge_lattice(a: &AbelianVariety, k: u32) -> Result<HodgeLattice> {
    hodge_lattice_with(a, k, HodgeParameter::DEFAULT)
}

pub fn hodge_lattice_with(a: &AbelianVariety, k: u32, p: HodgeParameter) -> Result<HodgeLattice> {
    let (u, scale) = scaled_operator(a, p)?;
    let n = a.rank();
    if 2 * k > n {
        return Err(Error::UnsupportedParams {
            check: "hodge_lattice".into(),
            reason: format!("degree {} exceeds {}", 2 * k, n),
        });
    }
    let masks = Multivector::basis_masks(n, 2 * k);
    let dim = masks.len();
    let index: std::collections::HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let eigen = num_traits::pow(scale, k as usize);
    let mut op = IntMatrix::zeros(dim, dim);
    for (c, &m) in masks.iter().enumerate() {
        let img = Multivector::monomial(n, m, 1).apply_integer(&u)?;
        for (t, v) in img.terms() {
            op[(index[&t], c)] = v.clone();
        }
        op[(c, c)] -= &eigen;
    }
    let basis = kernel_saturated(&op.to_rational());
    Ok(HodgeLattice {
        rank_ambient: n,
        k,
        masks,
        coords: LatticeCoordinates::new(basis),
    })
}

/// Standard coordinates (columns) of all `k`-fold wedge products of a basis
/// of `Hdg²`.
pub fn divisor_power_span(a: &AbelianVariety, k: u32) -> Result<IntMatrix> {
    let h2 = hodge_lattice(a, 1)?;
    let divisors = h2.basis_classes();
    let masks = Multivector::basis_masks(a.rank(), 2 * k);
    let mut columns = Vec::new();
    let mut stack: Vec<(usize, u32, Multivector)> = vec![(0, 0, Multivector::one(a.rank()))];
    while let Some((start, depth, acc)) = stack.pop() {
        if depth == k {
            columns.push(acc.coordinates(&masks));
            continue;
        }
        for (i, d) in divisors.iter().enumerate().skip(start) {
            stack.push((i, depth + 1, acc.wedge(d)?));
        }
    }
    columns.sort();
    Ok(IntMatrix::from_columns(masks.len(), &columns))
}

/// Quotient of `Hdg^{2k}` by the span of supplied Hodge classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoisinCertificate {
    pub invariants: CokernelInvariants,
    /// A Hodge class outside the span, when the quotient is nontrivial.
    pub witness: Option<Multivector>,
    pub lattice_rank: usize,
}

impl VoisinCertificate {
    pub fn is_trivial(&self) -> bool {
        self.invariants.is_trivial()
    }
}

pub fn voisin_certificate(a: &AbelianVariety, k: u32, generators: &[Multivector]) -> Result<VoisinCertificate> {
    let lattice = hodge_lattice(a, k)?;
    voisin_certificate_in(&lattice, a, generators)
}

/// Same as [`voisin_certificate`] with a precomputed lattice.
pub fn voisin_certificate_in(
    lattice: &HodgeLattice,
    a: &AbelianVariety,
    generators: &[Multivector],
) -> Result<VoisinCertificate> {
    let mut cols = Vec::with_capacity(generators.len());
    for (i, x) in generators.iter().enumerate() {
        let homogeneous_ok = x.is_zero() || x.homogeneous_degree() == Some(lattice.degree());
        if !homogeneous_ok || !is_hodge(a, x)? {
            return Err(Error::NotHodge(i));
        }
        cols.push(lattice.coordinates(x).map_err(|_| Error::NotHodge(i))?);
    }
    let r = lattice.rank();
    let m = if cols.is_empty() {
        IntMatrix::zeros(r, 0)
    } else {
        IntMatrix::from_columns(r, &cols)
    };
    let invariants = cokernel_invariants(&m, r)?;
    let witness = if invariants.is_trivial() {
        None
    } else {
        let padded = if m.cols() == 0 { IntMatrix::zeros(r, 1) } else { m.clone() };
        lattice.coords.cokernel_witness(&padded).map(|v| {
            Multivector::from_coordinates(a.rank(), &lattice.masks, &v)
        })
    };
    Ok(VoisinCertificate {
        invariants,
        witness,
        lattice_rank: r,
    })
}

/// Matrix of `F_A` from `Hdg^{2i}(A)` to `Hdg^{2g-2i}(Â)` in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierHodgeMatrix {
    pub matrix: IntMatrix,
    pub unimodular: bool,
}

pub fn fourier_hodge_matrix(ctx: &PoincareContext, i: u32) -> Result<FourierHodgeMatrix> {
    let a = ctx.variety();
    let g = a.genus();
    if i > g {
        return Err(Error::UnsupportedParams {
            check: "fourier_hodge_matrix".into(),
            reason: format!("half-degree {i} exceeds genus {g}"),
        });
    }
    let source = hodge_lattice(a, i)?;
    let target = hodge_lattice(ctx.dual(), g - i)?;
    let mut cols = Vec::with_capacity(source.rank());
    for (n, b) in source.basis_classes().iter().enumerate() {
        let img = ctx.fourier(b)?;
        let c = target.coordinates(&img).map_err(|_| {
            Error::ImageNotInHodge(format!("image of basis vector {n} of Hdg^{} is {img}", 2 * i))
        })?;
        cols.push(c);
    }
    let matrix = if cols.is_empty() {
        IntMatrix::zeros(target.rank(), 0)
    } else {
        IntMatrix::from_columns(target.rank(), &cols)
    };
    let unimodular = matrix.is_square() && matrix.is_unimodular();
    Ok(FourierHodgeMatrix { matrix, unimodular })
}

/// True iff the lattices from the two parameters have the same column span.
pub fn same_lattice(x: &HodgeLattice, y: &HodgeLattice) -> bool {
    x.rank() == y.rank()
        && x.masks == y.masks
        && y.basis_classes().iter().all(|c| x.contains(c))
        && x.basis_classes().iter().all(|c| y.contains(c))
}
