//! Abelian varieties as lattices with polarization and complex structure,
//! their duals and products, and homomorphisms acting on first homology.
//!
//! `H¹(A, ℤ)` is the dual lattice of `H₁(A, ℤ)`; generator `i` of the exterior
//! algebra is the coordinate functional `v_i*`. A homomorphism is given by its
//! integer matrix on `H₁`, so its pullback acts on `H¹` by the transpose.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{full_mask, wedge_sign_negative, Multivector, Orientation};
use crate::linalg::{is_positive_definite, smith_normal_form, Int, IntMatrix, Rat, RatMatrix};

/// Global sign of the Poincaré class. Flipping it amounts to composing the
/// identification of the dual with `[-1]`, which no identity can observe.
pub const ELL_SIGN: i64 = 1;

/// A complex torus with polarization, modeled on its first homology lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct AbelianVariety {
    name: String,
    genus: u32,
    polarization: IntMatrix,
    complex_structure: Option<RatMatrix>,
    orientation: Orientation,
    pairing_signs: Vec<i8>,
    polarization_type: Vec<Int>,
    dual_j_sign: Option<i8>,
}

impl fmt::Debug for AbelianVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbelianVariety")
            .field("name", &self.name)
            .field("genus", &self.genus)
            .field("type", &self.polarization_type.iter().map(ToString::to_string).collect::<Vec<_>>())
            .field("E", &self.polarization)
            .field("J", &self.complex_structure)
            .field("orientation", &self.orientation)
            .finish()
    }
}

/// Skew-symmetric Pfaffian by congruence elimination over ℚ.
pub fn pfaffian(e: &IntMatrix) -> Int {
    let n = e.rows();
    if n % 2 == 1 {
        return Int::zero();
    }
    let mut a = e.to_rational();
    let mut pf = Rat::one();
    let mut k = 0;
    while k < n {
        let Some(p) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
            return Int::zero();
        };
        if p != k + 1 {
            a.swap_rows(k + 1, p);
            a.swap_cols(k + 1, p);
            pf = -pf;
        }
        let piv = a[(k, k + 1)].clone();
        pf *= &piv;
        for i in k + 2..n {
            // clear a[k][i] using index k+1, then a[k+1][i] using index k
            let c = &a[(k, i)] / &piv;
            if !c.is_zero() {
                for r in 0..n {
                    let v = &a[(r, i)] - &c * &a[(r, k + 1)];
                    a[(r, i)] = v;
                }
                for col in 0..n {
                    let v = &a[(i, col)] - &c * &a[(k + 1, col)];
                    a[(i, col)] = v;
                }
            }
            let c = &a[(k + 1, i)] / &a[(k + 1, k)];
            if !c.is_zero() {
                for r in 0..n {
                    let v = &a[(r, i)] - &c * &a[(r, k)];
                    a[(r, i)] = v;
                }
                for col in 0..n {
                    let v = &a[(i, col)] - &c * &a[(k, col)];
                    a[(i, col)] = v;
                }
            }
        }
        k += 2;
    }
    debug_assert!(pf.is_integer());
    pf.to_integer()
}

/// `blockdiag(δ_i·[[0,1],[-1,0]])` in the interleaved basis `x_1, y_1, x_2, y_2, …`.
pub fn frobenius_polarization(delta: &[Int]) -> IntMatrix {
    let blocks: Vec<IntMatrix> = delta
        .iter()
        .map(|d| {
            IntMatrix::from_rows(vec![
                vec![Int::zero(), d.clone()],
                vec![-d.clone(), Int::zero()],
            ])
        })
        .collect();
    IntMatrix::block_diagonal(&blocks)
}

/// `blockdiag([[0,-1],[1,0]])`: multiplication by `i` on each `ℤ[i]` factor.
pub fn gaussian_structure(g: usize) -> RatMatrix {
    let block = RatMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
    RatMatrix::block_diagonal(&vec![block; g])
}

/// Checks that `delta` is a chain of positive integers, each dividing the next.
pub fn validate_type(delta: &[Int]) -> Result<()> {
    let shown = || {
        format!(
            "({})",
            delta.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        )
    };
    if delta.is_empty() || delta.iter().any(|d| !d.is_positive()) {
        return Err(Error::InvalidType(shown()));
    }
    for w in delta.windows(2) {
        if !w[1].is_multiple_of(&w[0]) {
            return Err(Error::InvalidType(shown()));
        }
    }
    Ok(())
}

fn check_alternating(e: &IntMatrix) -> Result<()> {
    if !e.is_square() || e.rows() % 2 == 1 || e.rows() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "polarization must be 2g×2g with g ≥ 1, got {}×{}",
            e.rows(),
            e.cols()
        )));
    }
    if e.rows() > 64 {
        return Err(Error::RankTooLarge(e.rows() as u32));
    }
    for i in 0..e.rows() {
        if !e[(i, i)].is_zero() {
            return Err(Error::NotAlternating);
        }
        for j in i + 1..e.rows() {
            if e[(i, j)] != -e[(j, i)].clone() {
                return Err(Error::NotAlternating);
            }
        }
    }
    Ok(())
}

fn check_complex_structure(e: &IntMatrix, j: &RatMatrix) -> Result<()> {
    let n = e.rows();
    if j.rows() != n || j.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "complex structure is {}×{}, polarization is {n}×{n}",
            j.rows(),
            j.cols()
        )));
    }
    if j.mul(j) != RatMatrix::identity(n).neg() {
        return Err(Error::ComplexStructureInvalid);
    }
    let er = e.to_rational();
    if j.transpose().mul(&er).mul(j) != er {
        return Err(Error::RiemannRelationViolated(
            "J does not preserve the polarization form (JᵀEJ ≠ E)".into(),
        ));
    }
    let s = er.mul(j);
    if !s.is_symmetric() {
        return Err(Error::RiemannRelationViolated("E(x, Jy) is not symmetric".into()));
    }
    if !is_positive_definite(&s)? {
        return Err(Error::RiemannRelationViolated(
            "E(x, Jy) is not positive definite".into(),
        ));
    }
    Ok(())
}

/// The class `Σ_i σ_i e_i ∧ e_{n+i}` on a rank-`2n` algebra, where `n` is the
/// number of signs.
pub fn pairing_class(signs: &[i8]) -> Multivector {
    let n = signs.len() as u32;
    let mut ell = Multivector::zero(2 * n);
    for (i, &s) in signs.iter().enumerate() {
        let mask = (1u64 << i) | (1u64 << (n as usize + i));
        ell.add_term(mask, BigInt::from(ELL_SIGN * s as i64));
    }
    ell
}

impl AbelianVariety {
    /// Validates `E` (and `J` if given) and fixes the orientation so that
    /// `θ^g/g!` integrates to the product of the polarization type.
    pub fn new(polarization: IntMatrix, complex_structure: Option<RatMatrix>, name: impl Into<String>) -> Result<Self> {
        let n = polarization.rows();
        Self::from_parts(polarization, complex_structure, name.into(), vec![1; n], None)
    }

    fn from_parts(
        polarization: IntMatrix,
        complex_structure: Option<RatMatrix>,
        name: String,
        pairing_signs: Vec<i8>,
        dual_j_sign: Option<i8>,
    ) -> Result<Self> {
        check_alternating(&polarization)?;
        let pf = pfaffian(&polarization);
        if pf.is_zero() {
            return Err(Error::SingularPolarization);
        }
        if let Some(j) = &complex_structure {
            check_complex_structure(&polarization, j)?;
        }
        let snf = smith_normal_form(&polarization);
        let polarization_type = snf.divisors.iter().step_by(2).cloned().collect();
        Ok(AbelianVariety {
            name,
            genus: (polarization.rows() / 2) as u32,
            orientation: Orientation::from_sign(if pf.is_negative() { -1 } else { 1 }),
            polarization,
            complex_structure,
            pairing_signs,
            polarization_type,
            dual_j_sign,
        })
    }

    /// `(E_i)^g` with the product complex structure and a polarization of
    /// type `δ` in Frobenius normal form.
    pub fn elliptic_product(delta: &[Int]) -> Result<Self> {
        validate_type(delta)?;
        let g = delta.len();
        let name = if delta.iter().all(One::is_one) {
            format!("E_i^{g}")
        } else {
            format!(
                "E_i^{g}({})",
                delta.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            )
        };
        Self::new(frobenius_polarization(delta), Some(gaussian_structure(g)), name)
    }

    /// Principally polarized `(E_i)^g`.
    pub fn standard_ppav(g: u32) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidType("()".into()));
        }
        Self::elliptic_product(&vec![Int::one(); g as usize])
    }

    /// Convenience wrapper for integer types.
    pub fn of_type(delta: &[i64]) -> Result<Self> {
        let d: Vec<Int> = delta.iter().map(|&x| BigInt::from(x)).collect();
        Self::elliptic_product(&d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Rank of `H¹`, that is `2g`.
    pub fn rank(&self) -> u32 {
        2 * self.genus
    }

    pub fn polarization(&self) -> &IntMatrix {
        &self.polarization
    }

    pub fn complex_structure(&self) -> Option<&RatMatrix> {
        self.complex_structure.as_ref()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn polarization_type(&self) -> &[Int] {
        &self.polarization_type
    }

    pub fn is_principal(&self) -> bool {
        self.polarization_type.iter().all(One::is_one)
    }

    /// Signs `σ_i` with which generator `i` enters the Poincaré class.
    pub fn pairing_signs(&self) -> &[i8] {
        &self.pairing_signs
    }

    /// For a dual variety built from one with a complex structure: `-1` if
    /// `J_Â = -Jᵀ`, `+1` if `J_Â = Jᵀ`.
    pub fn dual_j_sign(&self) -> Option<i8> {
        self.dual_j_sign
    }

    /// Same variety with the opposite orientation. Only useful for testing
    /// that orientation-sensitive identities notice the change.
    pub fn with_flipped_orientation(&self) -> Self {
        let mut v = self.clone();
        v.orientation = v.orientation.flip();
        v.name = format!("{}[reversed]", v.name);
        v
    }

    pub fn rename(&self, name: impl Into<String>) -> Self {
        let mut v = self.clone();
        v.name = name.into();
        v
    }

    /// `θ = Σ_{i<j} E_ij e_i ∧ e_j`.
    pub fn theta_class(&self) -> Multivector {
        let n = self.polarization.rows();
        let mut theta = Multivector::zero(n as u32);
        for i in 0..n {
            for j in i + 1..n {
                theta.add_term((1u64 << i) | (1u64 << j), self.polarization[(i, j)].clone());
            }
        }
        theta
    }

    pub fn integrate(&self, x: &Multivector) -> Result<Int> {
        self.check_class(x)?;
        Ok(x.integrate(self.orientation))
    }

    /// The class `[0]` of a point: integrates to one.
    pub fn point_class(&self) -> Multivector {
        Multivector::top(self.rank(), self.orientation.sign())
    }

    pub fn fundamental_class(&self) -> Multivector {
        Multivector::one(self.rank())
    }

    pub fn check_class(&self, x: &Multivector) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::RankMismatch {
                left: x.rank(),
                right: self.rank(),
            });
        }
        Ok(())
    }

    /// The dual variety: `H¹(Â) = H₁(A)` with polarization `-δ_1δ_g·E⁻¹`, so
    /// that `Â` has type `(δ_1δ_g/δ_g, …, δ_1δ_g/δ_1)` and the double dual is
    /// literally `A`.
    ///
    /// The complex structure is the one of `±Jᵀ` for which the Poincaré
    /// class on `A × Â` is a Hodge class.
    pub fn dual(&self) -> AbelianVariety {
        let k = &self.polarization_type[0] * self.polarization_type.last().expect("g ≥ 1");
        let inv = self
            .polarization
            .to_rational()
            .inverse()
            .expect("polarization is nondegenerate");
        let e_hat = inv
            .scale(&Rat::from_integer(-k))
            .to_integer()
            .expect("δ_1δ_g·E⁻¹ is integral");
        let signs: Vec<i8> = self.pairing_signs.iter().map(|s| -s).collect();
        let name = match self.name.strip_prefix("dual(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("dual({})", self.name),
        };
        let Some(j) = &self.complex_structure else {
            return Self::from_parts(e_hat, None, name, signs, None).expect("dual polarization is valid");
        };
        let jt = j.transpose();
        for sign in [-1i8, 1] {
            let cand_j = if sign < 0 { jt.neg() } else { jt.clone() };
            let Ok(cand) = Self::from_parts(e_hat.clone(), Some(cand_j), name.clone(), signs.clone(), None) else {
                continue;
            };
            let pair = ProductStructure::new(vec![self.clone(), cand.clone()]);
            let ell = pairing_class(&self.pairing_signs);
            if crate::hodge::is_hodge(pair.variety(), &ell).unwrap_or(false) {
                let mut out = cand;
                // the double dual forgets the recorded choice
                out.dual_j_sign = if self.dual_j_sign.is_some() { None } else { Some(sign) };
                return out;
            }
        }
        panic!("no sign of Jᵀ makes the Poincaré class Hodge; the complex structure is inconsistent");
    }

    /// The isogeny `λ: A → Â` induced by the polarization.
    pub fn polarization_isogeny(&self) -> Homomorphism {
        let m = self.polarization.scale(&BigInt::from(ELL_SIGN));
        Homomorphism::new(self.clone(), self.dual(), m).expect("λ has the right shape")
    }

    /// `[n]: A → A`.
    pub fn scalar(&self, n: i64) -> Homomorphism {
        let m = IntMatrix::identity(self.rank() as usize).scale(&BigInt::from(n));
        Homomorphism::new(self.clone(), self.clone(), m).expect("square")
    }

    pub fn identity(&self) -> Homomorphism {
        self.scalar(1)
    }

    /// `m, Δ, π_1, π_2, j_1, j_2` for `A × A`.
    pub fn structure_homs(&self) -> StructureHoms {
        StructureHoms::new(self)
    }
}

/// Integer matrix on `H₁` between two varieties.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Homomorphism {
    source: AbelianVariety,
    target: AbelianVariety,
    matrix: IntMatrix,
    holomorphic: bool,
}

impl Homomorphism {
    /// `matrix` is `2g_target × 2g_source`. The holomorphic flag is set when
    /// both complex structures exist and commute with the matrix.
    pub fn new(source: AbelianVariety, target: AbelianVariety, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() as usize || matrix.cols() != source.rank() as usize {
            return Err(Error::ShapeMismatch(format!(
                "homomorphism matrix is {}×{}, expected {}×{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let holomorphic = match (source.complex_structure(), target.complex_structure()) {
            (Some(js), Some(jt)) => {
                let m = matrix.to_rational();
                m.mul(js) == jt.mul(&m)
            }
            _ => false,
        };
        Ok(Homomorphism {
            source,
            target,
            matrix,
            holomorphic,
        })
    }

    /// Like [`Homomorphism::new`] but rejects non-holomorphic matrices.
    pub fn new_holomorphic(source: AbelianVariety, target: AbelianVariety, matrix: IntMatrix) -> Result<Self> {
        if source.complex_structure().is_none() || target.complex_structure().is_none() {
            return Err(Error::NoComplexStructure);
        }
        let f = Self::new(source, target, matrix)?;
        if !f.holomorphic {
            return Err(Error::NotHolomorphic);
        }
        Ok(f)
    }

    pub fn source(&self) -> &AbelianVariety {
        &self.source
    }

    pub fn target(&self) -> &AbelianVariety {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_holomorphic(&self) -> bool {
        self.holomorphic
    }

    /// `f^*`: a ring map from classes on the target to classes on the source.
    pub fn pullback(&self, x: &Multivector) -> Result<Multivector> {
        self.target.check_class(x)?;
        x.apply_integer(&self.matrix.transpose())
    }

    /// `f_*`, the adjoint of `f^*` for the Poincaré pairings:
    /// `∫_Y f_*(x)·y = ∫_X x·f^*(y)`.
    pub fn pushforward(&self, x: &Multivector) -> Result<Multivector> {
        self.source.check_class(x)?;
        let dx = poincare_dual_forward(x, self.source.orientation);
        let img = dx.apply_integer(&self.matrix)?;
        Ok(poincare_dual_backward(&img, self.target.orientation))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Homomorphism) -> Result<Homomorphism> {
        if g.source.rank() != self.target.rank() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: target rank {} vs source rank {}",
                self.target.rank(),
                g.source.rank()
            )));
        }
        Homomorphism::new(self.source.clone(), g.target.clone(), g.matrix.mul(&self.matrix))
    }

    /// `f̂: Ŷ → X̂`. Involutive: `f.dual().dual() == f`.
    pub fn dual(&self) -> Homomorphism {
        let dx = sign_diagonal(self.source.pairing_signs());
        let dy = sign_diagonal(self.target.pairing_signs());
        let m = dx.mul(&self.matrix.transpose()).mul(&dy);
        Homomorphism::new(self.target.dual(), self.source.dual(), m).expect("transposed shape")
    }

    /// `|det M|` for isogenies.
    pub fn degree(&self) -> Result<Int> {
        if !self.matrix.is_square() {
            return Err(Error::NotIsogeny);
        }
        let d = self.matrix.determinant();
        if d.is_zero() {
            return Err(Error::NotIsogeny);
        }
        Ok(d.abs())
    }

    /// `(self, other): X → Y × Z` for a shared source.
    pub fn pair(&self, other: &Homomorphism, target: &ProductStructure) -> Result<Homomorphism> {
        let rows: Vec<Vec<Int>> = (0..self.matrix.rows())
            .map(|r| self.matrix.row(r).to_vec())
            .chain((0..other.matrix.rows()).map(|r| other.matrix.row(r).to_vec()))
            .collect();
        Homomorphism::new(self.source.clone(), target.variety().clone(), IntMatrix::from_rows(rows))
    }
}

fn sign_diagonal(signs: &[i8]) -> IntMatrix {
    let d: Vec<Int> = signs.iter().map(|&s| BigInt::from(s)).collect();
    IntMatrix::diagonal(&d)
}

/// `e_S ↦ o·ε(S, Sᶜ)·e_{Sᶜ}`: identifies a class with the functional it
/// defines through the Poincaré pairing.
fn poincare_dual_forward(x: &Multivector, o: Orientation) -> Multivector {
    let full = full_mask(x.rank());
    let mut out = Multivector::zero(x.rank());
    for (s, c) in x.terms() {
        let comp = full & !s;
        let neg = wedge_sign_negative(s, comp) ^ o.is_negative();
        out.add_term(comp, if neg { -c.clone() } else { c.clone() });
    }
    out
}

/// Inverse direction: `e_U ↦ o·ε(Uᶜ, U)·e_{Uᶜ}`.
fn poincare_dual_backward(x: &Multivector, o: Orientation) -> Multivector {
    let full = full_mask(x.rank());
    let mut out = Multivector::zero(x.rank());
    for (u, c) in x.terms() {
        let comp = full & !u;
        let neg = wedge_sign_negative(comp, u) ^ o.is_negative();
        out.add_term(comp, if neg { -c.clone() } else { c.clone() });
    }
    out
}

/// A product of varieties with generators ordered factor by factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductStructure {
    factors: Vec<AbelianVariety>,
    offsets: Vec<usize>,
    variety: AbelianVariety,
}

impl ProductStructure {
    pub fn new(factors: Vec<AbelianVariety>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        let mut offsets = Vec::with_capacity(factors.len());
        let mut off = 0;
        for f in &factors {
            offsets.push(off);
            off += f.rank() as usize;
        }
        let e = IntMatrix::block_diagonal(&factors.iter().map(|f| f.polarization.clone()).collect::<Vec<_>>());
        let j = factors
            .iter()
            .map(|f| f.complex_structure.clone())
            .collect::<Option<Vec<_>>>()
            .map(|js| RatMatrix::block_diagonal(&js));
        let signs = factors.iter().flat_map(|f| f.pairing_signs.iter().copied()).collect();
        let name = factors.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(" × ");
        let mut variety =
            AbelianVariety::from_parts(e, j, name, signs, None).expect("product of valid varieties is valid");
        // agrees with the Pfaffian rule unless a factor was deliberately reversed
        variety.orientation = factors.iter().fold(Orientation::Positive, |o, f| o * f.orientation);
        ProductStructure {
            factors,
            offsets,
            variety,
        }
    }

    pub fn pair(a: &AbelianVariety, b: &AbelianVariety) -> Self {
        Self::new(vec![a.clone(), b.clone()])
    }

    pub fn factors(&self) -> &[AbelianVariety] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &AbelianVariety {
        &self.factors[i]
    }

    /// Generator index range of factor `i`.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.factors[i].rank() as usize
    }

    pub fn variety(&self) -> &AbelianVariety {
        &self.variety
    }

    pub fn rank(&self) -> u32 {
        self.variety.rank()
    }

    /// `π_i: P → factor i`.
    pub fn projection(&self, i: usize) -> Homomorphism {
        let r = self.range(i);
        let m = IntMatrix::from_fn(r.len(), self.rank() as usize, |a, b| {
            if b == r.start + a {
                Int::one()
            } else {
                Int::zero()
            }
        });
        Homomorphism::new(self.variety.clone(), self.factors[i].clone(), m).expect("shape")
    }

    /// `j_i: factor i → P`, the inclusion at the origin of the other factors.
    pub fn inclusion(&self, i: usize) -> Homomorphism {
        let r = self.range(i);
        let m = IntMatrix::from_fn(self.rank() as usize, r.len(), |a, b| {
            if a == r.start + b {
                Int::one()
            } else {
                Int::zero()
            }
        });
        Homomorphism::new(self.factors[i].clone(), self.variety.clone(), m).expect("shape")
    }

    /// Projection onto the sub-product of the listed factors (in that order).
    pub fn projection_onto(&self, indices: &[usize]) -> (ProductStructure, Homomorphism) {
        let sub = ProductStructure::new(indices.iter().map(|&i| self.factors[i].clone()).collect());
        let mut m = IntMatrix::zeros(sub.rank() as usize, self.rank() as usize);
        let mut row = 0;
        for &i in indices {
            for c in self.range(i) {
                m[(row, c)] = Int::one();
                row += 1;
            }
        }
        let h = Homomorphism::new(self.variety.clone(), sub.variety.clone(), m).expect("shape");
        (sub, h)
    }

    /// `π_i^*` without building the homomorphism: shifts generator indices.
    pub fn pull_from_factor(&self, i: usize, x: &Multivector) -> Result<Multivector> {
        self.factors[i].check_class(x)?;
        let shift = self.offsets[i];
        Multivector::from_terms(self.rank(), x.terms().map(|(m, c)| (m << shift, c.clone())))
    }

    /// `π_i,*` by fiber integration: keeps terms containing the full monomial
    /// of every other factor.
    pub fn push_to_factor(&self, i: usize, x: &Multivector) -> Result<Multivector> {
        self.variety.check_class(x)?;
        let r = self.range(i);
        let own = full_mask(r.len() as u32) << r.start;
        let others = full_mask(self.rank()) & !own;
        let mut sign_neg = false;
        for (k, f) in self.factors.iter().enumerate() {
            if k != i {
                sign_neg ^= f.orientation.is_negative();
            }
        }
        let mut out = Multivector::zero(self.factors[i].rank());
        for (m, c) in x.terms() {
            if m & others != others {
                continue;
            }
            let mine = m & own;
            // Reorder e_{before} e_{mine} e_{after} into e_{mine} e_{before} e_{after}:
            // the factors before have even degree, so no sign arises.
            let v = if sign_neg { -c.clone() } else { c.clone() };
            out.add_term(mine >> r.start, v);
        }
        Ok(out)
    }

    /// `π_1^* x ∧ π_2^* y ∧ …` for one class per factor.
    pub fn external_product(&self, classes: &[&Multivector]) -> Result<Multivector> {
        assert_eq!(classes.len(), self.factors.len());
        let mut out = Multivector::one(self.rank());
        for (i, x) in classes.iter().enumerate() {
            out = out.wedge(&self.pull_from_factor(i, x)?)?;
        }
        Ok(out)
    }

    /// The product of the factor duals, in the same order.
    pub fn dual(&self) -> ProductStructure {
        ProductStructure::new(self.factors.iter().map(AbelianVariety::dual).collect())
    }
}

/// Structure morphisms of `A × A`.
#[derive(Clone, Debug)]
pub struct StructureHoms {
    pub square: ProductStructure,
    /// Group law `m(x, y) = x + y`.
    pub m: Homomorphism,
    pub diagonal: Homomorphism,
    pub pi1: Homomorphism,
    pub pi2: Homomorphism,
    pub j1: Homomorphism,
    pub j2: Homomorphism,
}

impl StructureHoms {
    pub fn new(a: &AbelianVariety) -> Self {
        let square = ProductStructure::pair(a, a);
        let n = a.rank() as usize;
        let id = IntMatrix::identity(n);
        let m = IntMatrix::from_fn(n, 2 * n, |r, c| id[(r, c % n)].clone());
        let diag = m.transpose();
        StructureHoms {
            m: Homomorphism::new(square.variety().clone(), a.clone(), m).expect("shape"),
            diagonal: Homomorphism::new(a.clone(), square.variety().clone(), diag).expect("shape"),
            pi1: square.projection(0),
            pi2: square.projection(1),
            j1: square.inclusion(0),
            j2: square.inclusion(1),
            square,
        }
    }
}
