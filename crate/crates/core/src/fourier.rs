//! Poincaré class, cohomological Fourier transform, Pontryagin product and
//! the named classes built from them.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::variety::{pairing_class, AbelianVariety, Homomorphism, ProductStructure, StructureHoms};

/// `(-1)^k` as a machine integer.
pub fn parity_sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `[-1]^*`: negates odd-degree parts.
pub fn minus_one_pullback(x: &Multivector) -> Multivector {
    Multivector::from_terms(
        x.rank(),
        x.terms().map(|(m, c)| {
            if m.count_ones() % 2 == 1 {
                (m, -c.clone())
            } else {
                (m, c.clone())
            }
        }),
    )
    .expect("same rank")
}

/// `A`, its dual, and the Poincaré class on `A × Â`, with the divided powers
/// of `ℓ` cached on demand.
#[derive(Debug)]
pub struct PoincareContext {
    product: ProductStructure,
    ell: Multivector,
    powers: Mutex<Vec<Multivector>>,
}

impl Clone for PoincareContext {
    fn clone(&self) -> Self {
        PoincareContext {
            product: self.product.clone(),
            ell: self.ell.clone(),
            powers: Mutex::new(self.powers.lock().expect("poisoned").clone()),
        }
    }
}

impl PoincareContext {
    pub fn new(a: &AbelianVariety) -> Self {
        Self::with_dual(a, &a.dual())
    }

    /// Context for a product, whose dual is taken factorwise.
    pub fn for_product(p: &ProductStructure) -> Self {
        Self::with_dual(p.variety(), p.dual().variety())
    }

    /// `dual` must carry the negated pairing signs of `a`, as produced by
    /// [`AbelianVariety::dual`] or [`ProductStructure::dual`].
    pub fn with_dual(a: &AbelianVariety, dual: &AbelianVariety) -> Self {
        assert_eq!(a.rank(), dual.rank(), "dual has a different rank");
        assert!(
            a.pairing_signs().iter().zip(dual.pairing_signs()).all(|(s, t)| s == &-t),
            "dual pairing signs are not opposite"
        );
        let product = ProductStructure::pair(a, dual);
        let ell = pairing_class(a.pairing_signs());
        PoincareContext {
            product,
            ell,
            powers: Mutex::new(Vec::new()),
        }
    }

    pub fn variety(&self) -> &AbelianVariety {
        self.product.factor(0)
    }

    pub fn dual(&self) -> &AbelianVariety {
        self.product.factor(1)
    }

    pub fn genus(&self) -> u32 {
        self.variety().genus()
    }

    /// `A × Â`.
    pub fn product(&self) -> &ProductStructure {
        &self.product
    }

    /// `ℓ = c₁(P_A)`.
    pub fn ell(&self) -> &Multivector {
        &self.ell
    }

    /// The same construction with the roles of `A` and `Â` exchanged.
    pub fn dual_context(&self) -> PoincareContext {
        Self::with_dual(self.dual(), self.variety())
    }

    /// `ℓ^k / k!`; zero for `k > 2g`.
    pub fn ell_divided_power(&self, k: u32) -> Multivector {
        let mut cache = self.powers.lock().expect("poisoned");
        if cache.is_empty() {
            cache.push(Multivector::one(self.ell.rank()));
        }
        while cache.len() as u32 <= k {
            let n = cache.len();
            let next = if cache[n - 1].is_zero() {
                cache[n - 1].clone()
            } else {
                cache[n - 1]
                    .wedge(&self.ell)
                    .and_then(|p| p.divide_exact(&BigInt::from(n)))
                    .expect("divided powers of ℓ are integral")
            };
            cache.push(next);
        }
        cache[k as usize].clone()
    }

    /// `ch(P_A) = e^ℓ`.
    pub fn chern_character(&self) -> Multivector {
        let mut sum = Multivector::zero(self.ell.rank());
        for k in 0..=2 * self.genus() {
            sum += &self.ell_divided_power(k);
        }
        sum
    }

    /// `F_A(x) = π_2,*(e^ℓ · π_1^* x)`.
    pub fn fourier(&self, x: &Multivector) -> Result<Multivector> {
        self.variety().check_class(x)?;
        let two_g = 2 * self.genus();
        let mut total = Multivector::zero(two_g);
        for j in x.degrees() {
            let xj = self.product.pull_from_factor(0, &x.graded_component(j))?;
            // only ℓ^{[2g-j]} supplies the remaining A-degree
            let kernel = self.ell_divided_power(two_g - j);
            let prod = kernel.wedge(&xj)?;
            total += &self.product.push_to_factor(1, &prod)?;
        }
        Ok(total)
    }

    /// `F_Â` on classes of the dual.
    pub fn fourier_on_dual(&self, y: &Multivector) -> Result<Multivector> {
        self.dual_context().fourier(y)
    }

    /// `F_A⁻¹ = (-1)^g [-1]^* ∘ F_Â`.
    pub fn inverse_fourier(&self, y: &Multivector) -> Result<Multivector> {
        let back = self.fourier_on_dual(y)?;
        Ok(minus_one_pullback(&back).scale_i64(parity_sign(self.genus())))
    }

    /// `R_A = ρ_A = ℓ^{2g-1}/(2g-1)!`.
    pub fn r_class(&self) -> Multivector {
        self.ell_divided_power(2 * self.genus() - 1)
    }

    /// `σ_A = ℓ^{2g-2}/(2g-2)!`.
    pub fn sigma_class(&self) -> Multivector {
        self.ell_divided_power(2 * self.genus() - 2)
    }

    /// `π_2,*(Γ · π_1^* x)` for a class `Γ` on `A × Â`.
    pub fn correspondence(&self, gamma: &Multivector, x: &Multivector) -> Result<Multivector> {
        correspondence_action(&self.product, gamma, x)
    }

    /// `τ = j_1,*(Γ_θ) + j_2,*(Γ_θ̂) − (id, λ)_*(Γ_θ)` on `A × Â`.
    pub fn tau_class(&self) -> Result<Multivector> {
        let a = self.variety();
        let gamma = gamma_theta(a)?;
        let gamma_hat = gamma_theta(self.dual())?;
        let lambda = a.polarization_isogeny();
        let graph = a.identity().pair(&lambda, &self.product)?;
        let j1 = self.product.inclusion(0).pushforward(&gamma)?;
        let j2 = self.product.inclusion(1).pushforward(&gamma_hat)?;
        let diag = graph.pushforward(&gamma)?;
        Ok(&(&j1 + &j2) - &diag)
    }

    pub fn named_class(&self, tag: NamedClass) -> Result<Multivector> {
        let a = self.variety();
        Ok(match tag {
            NamedClass::RA | NamedClass::Rho => self.r_class(),
            NamedClass::Sigma => self.sigma_class(),
            NamedClass::GammaTheta => gamma_theta(a)?,
            NamedClass::Tau => self.tau_class()?,
            NamedClass::Point => a.point_class(),
            NamedClass::Fundamental => a.fundamental_class(),
        })
    }
}

/// `π_2,*(Γ · π_1^* x)` on a two-factor product.
pub fn correspondence_action(p: &ProductStructure, gamma: &Multivector, x: &Multivector) -> Result<Multivector> {
    let pulled = p.pull_from_factor(0, x)?;
    let prod = gamma.wedge(&pulled)?;
    p.push_to_factor(1, &prod)
}

/// Classes with a fixed definition in terms of `ℓ` and `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedClass {
    RA,
    Rho,
    Sigma,
    GammaTheta,
    Tau,
    Point,
    Fundamental,
}

impl NamedClass {
    pub const ALL: [NamedClass; 7] = [
        NamedClass::RA,
        NamedClass::Rho,
        NamedClass::Sigma,
        NamedClass::GammaTheta,
        NamedClass::Tau,
        NamedClass::Point,
        NamedClass::Fundamental,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedClass::RA => "R_A",
            NamedClass::Rho => "rho_A",
            NamedClass::Sigma => "sigma_A",
            NamedClass::GammaTheta => "gamma_theta",
            NamedClass::Tau => "tau",
            NamedClass::Point => "point",
            NamedClass::Fundamental => "fundamental",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown class name `{s}`")))
    }

    /// Whether the class lives on `A × Â` rather than on `A`.
    pub fn on_product(self) -> bool {
        matches!(self, NamedClass::RA | NamedClass::Rho | NamedClass::Sigma | NamedClass::Tau)
    }
}

/// `γ_θ = θ^{g-1}/(g-1)!` for a principal polarization.
pub fn gamma_theta(a: &AbelianVariety) -> Result<Multivector> {
    if !a.is_principal() {
        return Err(Error::NotPrincipal);
    }
    a.theta_class().divided_power(a.genus() - 1)
}

/// Group law data for Pontryagin products on `A`.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    variety: AbelianVariety,
    homs: StructureHoms,
}

impl GroupLaw {
    pub fn new(a: &AbelianVariety) -> Self {
        GroupLaw {
            variety: a.clone(),
            homs: a.structure_homs(),
        }
    }

    pub fn variety(&self) -> &AbelianVariety {
        &self.variety
    }

    pub fn homs(&self) -> &StructureHoms {
        &self.homs
    }

    /// `x ⋆ y = m_*(π_1^* x · π_2^* y)`.
    pub fn star(&self, x: &Multivector, y: &Multivector) -> Result<Multivector> {
        let sq = &self.homs.square;
        let prod = sq.pull_from_factor(0, x)?.wedge(&sq.pull_from_factor(1, y)?)?;
        self.homs.m.pushforward(&prod)
    }

    /// `x^{⋆n}`, with `x^{⋆0} = [0]`.
    pub fn star_power(&self, x: &Multivector, n: u32) -> Result<Multivector> {
        let mut p = self.variety.point_class();
        for _ in 0..n {
            p = self.star(&p, x)?;
            if p.is_zero() {
                break;
            }
        }
        Ok(p)
    }

    fn check_positive_dimensional(&self, x: &Multivector) -> Result<()> {
        let top = self.variety.rank();
        if !x.graded_component(top).is_zero() {
            return Err(Error::NotPositiveDimensional(top));
        }
        Ok(())
    }

    /// `x^{[n]} = x^{⋆n}/n!`, computed as `(x^{[n-1]} ⋆ x)/n`, which is the
    /// same rational class; a failed division is reported with its term.
    pub fn star_divided_power(&self, x: &Multivector, n: u32) -> Result<Multivector> {
        self.variety.check_class(x)?;
        self.check_positive_dimensional(x)?;
        let mut p = self.variety.point_class();
        for k in 1..=n {
            p = self.star(&p, x)?.divide_exact(&BigInt::from(k))?;
            if p.is_zero() {
                break;
            }
        }
        Ok(p)
    }

    /// `E(x) = Σ_n x^{[n]}`.
    pub fn star_exponential(&self, x: &Multivector) -> Result<Multivector> {
        self.variety.check_class(x)?;
        self.check_positive_dimensional(x)?;
        let mut p = self.variety.point_class();
        let mut sum = p.clone();
        for k in 1..=self.variety.rank() + 1 {
            p = self.star(&p, x)?.divide_exact(&BigInt::from(k))?;
            if p.is_zero() {
                return Ok(sum);
            }
            sum += &p;
        }
        Err(Error::NotNilpotent)
    }
}

/// `Σ_{i+j+k=2g-2} (-1)^{j+k} π_2,*(m^*(θ^{[i]}) · π_1^*(θ^{[j]}) · π_1^* D) · θ^{[k]}`.
pub fn beta_from_divisor(a: &AbelianVariety, d: &Multivector) -> Result<Multivector> {
    if !a.is_principal() {
        return Err(Error::NotPrincipal);
    }
    a.check_class(d)?;
    let g = a.genus();
    let theta = a.theta_class();
    let powers: Vec<Multivector> = (0..=g).map(|i| theta.divided_power(i)).collect::<Result<_>>()?;
    let law = GroupLaw::new(a);
    let sq = &law.homs.square;
    let pulled_d = sq.pull_from_factor(0, d)?;
    let n = 2 * g - 2;
    let mut total = Multivector::zero(a.rank());
    for i in 0..=n.min(g) {
        let m_i = law.homs.m.pullback(&powers[i as usize])?;
        for j in 0..=(n - i).min(g) {
            let k = n - i - j;
            if k > g {
                continue;
            }
            let inner = m_i
                .wedge(&sq.pull_from_factor(0, &powers[j as usize])?)?
                .wedge(&pulled_d)?;
            let pushed = sq.push_to_factor(1, &inner)?;
            let term = pushed.wedge(&powers[k as usize])?;
            total += &term.scale_i64(parity_sign(j + k));
        }
    }
    Ok(total)
}

/// `Σ_{i+j+k=2g-2} (-1)^{j+k} m^*(θ^{[i]}) · π_1^*(θ^{[j]}) · π_2^*(θ^{[k]})` on `A × A`.
pub fn sigma_triple_sum(a: &AbelianVariety) -> Result<Multivector> {
    let g = a.genus();
    let theta = a.theta_class();
    let powers: Vec<Multivector> = (0..=g).map(|i| theta.divided_power(i)).collect::<Result<_>>()?;
    let homs = a.structure_homs();
    let sq = &homs.square;
    let n = 2 * g - 2;
    let mut total = Multivector::zero(sq.rank());
    for i in 0..=n.min(g) {
        let m_i = homs.m.pullback(&powers[i as usize])?;
        for j in 0..=(n - i).min(g) {
            let k = n - i - j;
            if k > g {
                continue;
            }
            let term = m_i
                .wedge(&sq.pull_from_factor(0, &powers[j as usize])?)?
                .wedge(&sq.pull_from_factor(1, &powers[k as usize])?)?;
            total += &term.scale_i64(parity_sign(j + k));
        }
    }
    Ok(total)
}

/// `id × λ: A × A → A × Â`.
pub fn id_times_lambda(ctx: &PoincareContext) -> Result<Homomorphism> {
    let a = ctx.variety();
    let sq = ProductStructure::pair(a, a);
    let lam = a.polarization_isogeny();
    let n = a.rank() as usize;
    let mut m = crate::linalg::IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i)] = BigInt::one();
        for j in 0..n {
            m[(n + i, n + j)] = lam.matrix()[(i, j)].clone();
        }
    }
    Homomorphism::new(sq.variety().clone(), ctx.product().variety().clone(), m)
}

/// Both sides of the Künneth decomposition of `R_{A×Â}` on
/// `(A × Â) × (Â × A)`: the class itself and
/// `π_13^*(R_A)·π_24^*([0]) + π_13^*([0])·π_24^*(R_Â)`.
pub fn kunneth_r_decomposition(a: &AbelianVariety) -> Result<(Multivector, Multivector)> {
    let ctx_a = PoincareContext::new(a);
    let ctx_hat = ctx_a.dual_context();
    let x = ProductStructure::pair(a, ctx_a.dual());
    let big = PoincareContext::for_product(&x);
    let four = ProductStructure::new(vec![
        a.clone(),
        ctx_a.dual().clone(),
        ctx_a.dual().clone(),
        a.clone(),
    ]);
    debug_assert_eq!(four.rank(), big.product().rank());
    let lhs = big.r_class();
    let (_, p13) = four.projection_onto(&[0, 2]);
    let (_, p24) = four.projection_onto(&[1, 3]);
    let point_a = ctx_a.product().variety().point_class();
    let point_hat = ctx_hat.product().variety().point_class();
    let first = p13.pullback(&ctx_a.r_class())?.wedge(&p24.pullback(&point_hat)?)?;
    let second = p13.pullback(&point_a)?.wedge(&p24.pullback(&ctx_hat.r_class())?)?;
    Ok((lhs, &first + &second))
}

/// Outcome of the pushforward identity for `X = A × B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardOutcome {
    /// `ρ_X` equals the two-term Künneth expansion.
    pub expansion_holds: bool,
    /// `f_*(ρ_X) = (-1)^{g_B}·μ^{[2g-1]}`.
    pub pushforward_holds: bool,
    /// `f_*(ρ_X) − (-1)^{g_B} μ^{[2g-1]}`.
    pub pushforward_difference: Multivector,
    pub expansion_difference: Multivector,
}

/// Checks the two-term expansion of `ρ_X` and its pushforward for `X = A × B`, with
/// `f: X × X̂ → A × Â`, the projection.
pub fn product_pushforward_check(a: &AbelianVariety, b: &AbelianVariety) -> Result<PushforwardOutcome> {
    let ctx_a = PoincareContext::new(a);
    let ctx_b = PoincareContext::new(b);
    let x = ProductStructure::pair(a, b);
    let ctx_x = PoincareContext::for_product(&x);
    let four = ProductStructure::new(vec![a.clone(), b.clone(), ctx_a.dual().clone(), ctx_b.dual().clone()]);
    let (ga, gb) = (a.genus(), b.genus());
    let (_, f) = four.projection_onto(&[0, 2]);
    let (_, g) = four.projection_onto(&[1, 3]);
    let rho_x = ctx_x.r_class();
    let expansion = &f
        .pullback(&ctx_a.ell_divided_power(2 * ga - 1))?
        .wedge(&g.pullback(&ctx_b.ell_divided_power(2 * gb))?)?
        + &f.pullback(&ctx_a.ell_divided_power(2 * ga))?
            .wedge(&g.pullback(&ctx_b.ell_divided_power(2 * gb - 1))?)?;
    let expansion_difference = &rho_x - &expansion;
    // f is a homomorphism into the variety of A × Â; reinterpret there
    let pushed = f.pushforward(&rho_x)?;
    let expected = ctx_a.r_class().scale_i64(parity_sign(gb));
    let pushforward_difference = &pushed - &expected;
    Ok(PushforwardOutcome {
        expansion_holds: expansion_difference.is_zero(),
        pushforward_holds: pushforward_difference.is_zero(),
        pushforward_difference,
        expansion_difference,
    })
}
