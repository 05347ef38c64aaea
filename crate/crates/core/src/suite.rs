//! Named identity checks with deterministic parameters and failure witnesses.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{full_mask, Multivector};
use crate::fourier::{
    beta_from_divisor, gamma_theta, id_times_lambda, kunneth_r_decomposition, minus_one_pullback, parity_sign,
    product_pushforward_check, sigma_triple_sum, GroupLaw, PoincareContext,
};
use crate::hodge::{fourier_hodge_matrix, hodge_lattice, is_hodge, voisin_certificate_in, HodgeParameter};
use crate::linalg::{Int, IntMatrix};
use crate::variety::{gaussian_structure, AbelianVariety, Homomorphism, ProductStructure, ELL_SIGN};

/// A registered check: short id, name and the identity it evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckDescriptor {
    pub id: &'static str,
    pub name: &'static str,
    pub anchor: &'static str,
    /// Largest supported genus (for the pushforward check: `g_A + g_B`).
    pub max_genus: u32,
}

macro_rules! registry {
    ($($id:literal $name:literal $max:literal $anchor:literal;)*) => {
        pub const REGISTRY: &[CheckDescriptor] = &[
            $(CheckDescriptor { id: $id, name: $name, anchor: $anchor, max_genus: $max },)*
        ];
    };
}

registry! {
    "C1" "fourier_involution" 5 "F_Â ∘ F_A = (−1)^g·[−1]^*";
    "C2" "beauville_exp" 5 "F_A(e^Θ) = e^{−Θ}";
    "C3" "star_exp_of_R" 5 "e^ℓ = (−1)^g·E((−1)^g·R_A)";
    "C4" "claim_star" 5 "F_{A×Â}(e^ℓ) = (−1)^g · e^{−ℓ̂}";
    "C5" "eq35_minclass" 5 "(−1)^g·F_{Â×A}(−ℓ̂) = ℓ^{2g−1}/(2g−1)! = R_A";
    "C6" "tau_equals_R" 5 "τ = (−1)^{g+1}·R_A";
    "C7" "functoriality" 5 "(f̂)^∗ ∘ F_X = F_Y ∘ f_∗";
    "C8" "product_exchange" 5 "F_X(x·y) = (−1)^g·F_X(x) ⋆ F_X(y)";
    "C9" "theta_divided" 5 "θ^i/i! = γ_θ^{⋆j}/j!";
    "C10" "kunneth_R" 5 "R_{A×Â} = π₁₃^∗(R_A)·π₂₄^∗([0]) + π₁₃^∗([0])·π₂₄^∗(R_Â), with (2g)!·[0]_{A×Â} for ℓ^{2g}";
    "C11" "sigma_triple_sum" 5 "σ_A = Σ_{i+j+k=2g−2} (−1)^{j+k}·m^∗(θ^i/i!)·π₁^∗(θ^j/j!)·π₂^∗(θ^k/k!)";
    "C12" "beta_surjectivity" 5 "any β ∈ Hdg^{2g−2}(A,ℤ) may be written as π₂,∗(σ·π₁^∗[D])";
    "C13" "divided_square" 5 "σ_A = (−1)^g·(ρ_A)^{⋆2}/2!";
    "C14" "lemma51_diagram" 5 "π₂,∗((−)·n·σ_Â)∘π₁^∗ = n·F_Â on H²(Â,ℤ)";
    "C15" "prop45_pushforward" 6 "f_∗(c₁(P_X)^{2h−1}/(2h−1)!) = (−1)^{g_B}·μ^{2g−1}/(2g−1)!";
    "C16" "isogeny_degree" 5 "(β∘α) × (α̂∘β̂) = [m]_{X×X̂}, deg(α)·deg(β) = m^{2h}";
    "C17" "hodge_fourier_unimodular" 5 "F_A: Hdg^{2i}(A,ℤ) → Hdg^{2g−2i}(Â,ℤ) is an isomorphism";
    "C18" "ihc_certificate_elliptic_products" 5 "Hdg^{2g−2}(A,ℤ) is generated by classes of curves";
    "C19" "poincare_normalization" 5 "ℓ^{2g} = (2g)!·[0]_{A×Â} (unsigned) vs ∫ℓ^{2g} = (−1)^g·(2g)!";
    "C20" "ell_integrality" 5 "ch(P_A) = exp(c₁(P_A)) with every ℓ^k/k! integral";
}

pub fn descriptor(name: &str) -> Result<&'static CheckDescriptor> {
    REGISTRY
        .iter()
        .find(|d| d.name == name || d.id.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

/// Inputs of one check run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckParams {
    pub variety: AbelianVariety,
    pub seed: u64,
    /// Sample count for randomized checks; `None` uses the check's default.
    pub samples: Option<u32>,
    /// Genus of the auxiliary factor `B` in the pushforward check.
    pub aux_genus: u32,
}

impl CheckParams {
    pub fn new(variety: AbelianVariety) -> Self {
        CheckParams {
            variety,
            seed: 0,
            samples: None,
            aux_genus: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: u32) -> Self {
        self.samples = Some(samples);
        self
    }

    pub fn with_aux_genus(mut self, g: u32) -> Self {
        self.aux_genus = g;
        self
    }

    pub fn record(&self) -> ParamRecord {
        ParamRecord {
            genus: self.variety.genus(),
            polarization_type: self.variety.polarization_type().to_vec(),
            seed: self.seed,
            variety: self.variety.name().to_string(),
            samples: self.samples,
        }
    }
}

/// Parameters as they appear in reports.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParamRecord {
    pub genus: u32,
    pub polarization_type: Vec<Int>,
    pub seed: u64,
    pub variety: String,
    pub samples: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Status::Pass),
            "fail" => Ok(Status::Fail),
            "skipped" => Ok(Status::Skipped),
            other => Err(Error::Parse(format!("unknown status `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub anchor: String,
    pub params: ParamRecord,
    pub status: Status,
    /// Present on failure: the difference of the two sides, or the offending term.
    pub witness: Option<Multivector>,
    pub notes: String,
    pub runtime_us: u128,
}

/// What a check body returns.
struct Outcome {
    witness: Option<Multivector>,
    notes: String,
}

impl Outcome {
    fn pass(notes: impl Into<String>) -> Self {
        Outcome {
            witness: None,
            notes: notes.into(),
        }
    }

    fn compare(lhs: &Multivector, rhs: &Multivector, notes: impl Into<String>) -> Self {
        let diff = lhs - rhs;
        Outcome {
            witness: (!diff.is_zero()).then_some(diff),
            notes: notes.into(),
        }
    }

    fn fail(witness: Multivector, notes: impl Into<String>) -> Self {
        Outcome {
            witness: Some(witness),
            notes: notes.into(),
        }
    }
}

/// Runs one check. Parameters outside a check's envelope give
/// `UnsupportedParams`; mathematical failures give a `Fail` result.
pub fn run_check(name: &str, params: &CheckParams) -> Result<CheckResult> {
    let desc = descriptor(name)?;
    admissible(desc, params)?;
    let start = Instant::now();
    let outcome = match evaluate(desc, params) {
        Ok(o) => o,
        Err(e @ Error::UnsupportedParams { .. }) => return Err(e),
        Err(e) => error_outcome(&e, params),
    };
    let runtime_us = start.elapsed().as_micros();
    Ok(CheckResult {
        id: desc.id.to_string(),
        name: desc.name.to_string(),
        anchor: desc.anchor.to_string(),
        params: params.record(),
        status: if outcome.witness.is_some() { Status::Fail } else { Status::Pass },
        witness: outcome.witness,
        notes: outcome.notes,
        runtime_us,
    })
}

fn error_outcome(e: &Error, params: &CheckParams) -> Outcome {
    let rank = params.variety.rank();
    let witness = match e {
        Error::NonDivisible { mask, coefficient, .. } => {
            let r = (64 - mask.leading_zeros()).max(rank);
            Multivector::monomial(r, *mask, coefficient.clone())
        }
        _ => Multivector::zero(rank),
    };
    Outcome::fail(witness, format!("error[{}]: {e}", e.code()))
}

fn unsupported(desc: &CheckDescriptor, reason: impl Into<String>) -> Error {
    Error::UnsupportedParams {
        check: desc.name.to_string(),
        reason: reason.into(),
    }
}

fn admissible(desc: &CheckDescriptor, p: &CheckParams) -> Result<()> {
    let a = &p.variety;
    let g = a.genus();
    let total = if desc.name == "prop45_pushforward" { g + p.aux_genus } else { g };
    if total > desc.max_genus {
        return Err(unsupported(desc, format!("genus {total} exceeds budget {}", desc.max_genus)));
    }
    let needs_principal = matches!(
        desc.name,
        "beauville_exp" | "tau_equals_R" | "theta_divided" | "sigma_triple_sum" | "beta_surjectivity"
            | "ihc_certificate_elliptic_products"
    );
    if needs_principal && !a.is_principal() {
        return Err(unsupported(desc, "requires a principal polarization"));
    }
    let needs_j = matches!(
        desc.name,
        "functoriality" | "beta_surjectivity" | "isogeny_degree" | "hodge_fourier_unimodular"
            | "ihc_certificate_elliptic_products"
    );
    if needs_j && a.complex_structure().is_none() {
        return Err(unsupported(desc, "requires a complex structure"));
    }
    let needs_gaussian = matches!(desc.name, "functoriality" | "isogeny_degree");
    if needs_gaussian && a.complex_structure() != Some(&gaussian_structure(g as usize)) {
        return Err(unsupported(desc, "random holomorphic maps need the product Gaussian complex structure"));
    }
    if desc.name == "prop45_pushforward" && p.aux_genus == 0 {
        return Err(unsupported(desc, "auxiliary genus must be positive"));
    }
    Ok(())
}

fn rng_for(desc: &CheckDescriptor, seed: u64) -> ChaCha8Rng {
    // distinct but reproducible streams per check
    let salt = desc.id.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(seed ^ salt.rotate_left(17))
}

/// A random class with coefficients in `[-3, 3]` and at most `max_terms` terms.
pub fn random_class(rng: &mut impl Rng, rank: u32, max_terms: usize, even_only: bool) -> Multivector {
    let mut x = Multivector::zero(rank);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let mut mask = rng.gen::<u64>() & full_mask(rank);
        if even_only && mask.count_ones() % 2 == 1 {
            mask &= mask - 1;
        }
        let c: i64 = rng.gen_range(-3..=3);
        x.add_term(mask, BigInt::from(c));
    }
    x
}

/// Matrix of a random holomorphic map `E_i^{cols} → E_i^{rows}`: each 2×2
/// block is multiplication by a Gaussian integer with parts in `[-3, 3]`.
pub fn random_gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(2 * rows, 2 * cols);
    for r in 0..rows {
        for c in 0..cols {
            let a: i64 = rng.gen_range(-3..=3);
            let b: i64 = rng.gen_range(-3..=3);
            m[(2 * r, 2 * c)] = BigInt::from(a);
            m[(2 * r, 2 * c + 1)] = BigInt::from(-b);
            m[(2 * r + 1, 2 * c)] = BigInt::from(b);
            m[(2 * r + 1, 2 * c + 1)] = BigInt::from(a);
        }
    }
    m
}

fn basis_monomials(rank: u32) -> impl Iterator<Item = Multivector> {
    (0..=rank).flat_map(move |k| Multivector::basis_masks(rank, k).into_iter().map(move |m| Multivector::monomial(rank, m, 1)))
}

fn evaluate(desc: &CheckDescriptor, p: &CheckParams) -> Result<Outcome> {
    let a = &p.variety;
    let g = a.genus();
    match desc.name {
        "fourier_involution" => {
            let ctx = PoincareContext::new(a);
            let sign = parity_sign(g);
            let mut count = 0;
            for x in basis_monomials(a.rank()) {
                let twice = ctx.fourier_on_dual(&ctx.fourier(&x)?)?;
                let expected = minus_one_pullback(&x).scale_i64(sign);
                if twice != expected {
                    return Ok(Outcome::fail(&twice - &expected, format!("fails on basis monomial {x}")));
                }
                count += 1;
            }
            Ok(Outcome::pass(format!("{count} basis monomials")))
        }
        "beauville_exp" => {
            let ctx = PoincareContext::new(a);
            let lhs = ctx.fourier(&a.theta_class().cup_exponential()?)?;
            let rhs = (-ctx.dual().theta_class()).cup_exponential()?;
            Ok(Outcome::compare(&lhs, &rhs, "compared on Â with θ̂ the dual polarization"))
        }
        "star_exp_of_R" => {
            let ctx = PoincareContext::new(a);
            let law = GroupLaw::new(ctx.product().variety());
            let sign = parity_sign(g);
            let rhs = law.star_exponential(&ctx.r_class().scale_i64(sign))?.scale_i64(sign);
            Ok(Outcome::compare(&ctx.chern_character(), &rhs, "all divided ⋆-powers exact"))
        }
        "claim_star" => {
            let ctx = PoincareContext::new(a);
            let x = ProductStructure::pair(a, ctx.dual());
            let big = PoincareContext::for_product(&x);
            let lhs = big.fourier(&ctx.chern_character())?;
            let hat = ctx.dual_context();
            let rhs = (-hat.ell()).cup_exponential()?.scale_i64(parity_sign(g));
            Ok(Outcome::compare(&lhs, &rhs, "evaluated on (A×Â)×(Â×A)"))
        }
        "eq35_minclass" => {
            let ctx = PoincareContext::new(a);
            let hat = ctx.dual_context();
            let y = ProductStructure::pair(ctx.dual(), a);
            let big = PoincareContext::for_product(&y);
            let lhs = big.fourier(&-hat.ell())?.scale_i64(parity_sign(g));
            let direct = ctx.ell().divided_power(2 * g - 1)?;
            if direct != ctx.r_class() {
                return Ok(Outcome::fail(&direct - &ctx.r_class(), "cached divided power disagrees"));
            }
            Ok(Outcome::compare(&lhs, &direct, "R_A computed as ℓ^{2g−1}/(2g−1)!"))
        }
        "tau_equals_R" => {
            let ctx = PoincareContext::new(a);
            let tau = ctx.tau_class()?;
            let rhs = ctx.r_class().scale_i64(parity_sign(g + 1));
            Ok(Outcome::compare(&tau, &rhs, ""))
        }
        "functoriality" => functoriality(desc, p),
        "product_exchange" => product_exchange(desc, p),
        "theta_divided" => {
            let law = GroupLaw::new(a);
            let gamma = gamma_theta(a)?;
            let theta = a.theta_class();
            for i in 0..=g {
                let lhs = theta.divided_power(i)?;
                let rhs = law.star_divided_power(&gamma, g - i)?;
                if lhs != rhs {
                    return Ok(Outcome::fail(&lhs - &rhs, format!("fails at i = {i}")));
                }
            }
            Ok(Outcome::pass(format!("i = 0..{g}")))
        }
        "kunneth_R" => {
            let (lhs, rhs) = kunneth_r_decomposition(a)?;
            let sign = parity_sign(g);
            let out = Outcome::compare(&lhs, &rhs.scale_i64(sign), "");
            let note = if sign == 1 || lhs == rhs {
                "agrees with the unsigned decomposition".to_string()
            } else {
                format!("agrees after the normalization sign (−1)^g = {sign}, since ℓ^{{2g}}/(2g)! = (−1)^g·[0]")
            };
            Ok(Outcome { notes: note, ..out })
        }
        "sigma_triple_sum" => {
            let ctx = PoincareContext::new(a);
            let h = id_times_lambda(&ctx)?;
            let lhs = h.pullback(&ctx.sigma_class())?;
            let rhs = sigma_triple_sum(a)?;
            Ok(Outcome::compare(&lhs, &rhs, "σ_A pulled back along id × λ"))
        }
        "beta_surjectivity" => beta_surjectivity(a),
        "divided_square" => {
            let ctx = PoincareContext::new(a);
            let law = GroupLaw::new(ctx.product().variety());
            let rhs = law.star_divided_power(&ctx.r_class(), 2)?.scale_i64(parity_sign(g));
            Ok(Outcome::compare(&ctx.sigma_class(), &rhs, ""))
        }
        "lemma51_diagram" => correspondence_diagram(a),
        "prop45_pushforward" => {
            let b = AbelianVariety::standard_ppav(p.aux_genus)?;
            let out = product_pushforward_check(a, &b)?;
            let notes = format!("B = {}, sign (−1)^{{g_B}} = {}", b.name(), parity_sign(p.aux_genus));
            if !out.expansion_holds {
                return Ok(Outcome::fail(out.expansion_difference, format!("{notes}; two-term expansion fails")));
            }
            if !out.pushforward_holds {
                return Ok(Outcome::fail(out.pushforward_difference, format!("{notes}; pushforward fails")));
            }
            Ok(Outcome::pass(notes))
        }
        "isogeny_degree" => isogeny_degree(desc, p),
        "hodge_fourier_unimodular" => {
            let ctx = PoincareContext::new(a);
            let mut ranks = Vec::new();
            for i in 0..=g {
                let m = fourier_hodge_matrix(&ctx, i)?;
                if !m.unimodular {
                    let target = hodge_lattice(ctx.dual(), g - i)?;
                    let images: Vec<Multivector> = hodge_lattice(a, i)?
                        .basis_classes()
                        .iter()
                        .map(|b| ctx.fourier(b))
                        .collect::<Result<_>>()?;
                    let cert = voisin_certificate_in(&target, ctx.dual(), &images)?;
                    let w = cert.witness.unwrap_or_else(|| Multivector::zero(a.rank()));
                    return Ok(Outcome::fail(w, format!("not unimodular in degree {}", 2 * i)));
                }
                ranks.push(m.matrix.rows().to_string());
            }
            Ok(Outcome::pass(format!("Hdg ranks by degree: {}", ranks.join(","))))
        }
        "ihc_certificate_elliptic_products" => ihc_certificate(a),
        "poincare_normalization" => {
            let ctx = PoincareContext::new(a);
            let x = ctx.product().variety();
            let top = ctx.ell().cup_power(2 * g);
            let value = x.integrate(&top)?;
            let fact: Int = (1..=2 * g).map(BigInt::from).product();
            let derived = &fact * BigInt::from(parity_sign(g));
            let delta = if parity_sign(g) == 1 { "none" } else { "(−1)^g = −1 relative to the unsigned (2g)!·[0]" };
            let notes = format!("∫ℓ^{{2g}} = {value}; derived (−1)^g(2g)! = {derived}; sign delta: {delta}");
            if value == derived {
                Ok(Outcome::pass(notes))
            } else {
                Ok(Outcome::fail(&top - &x.point_class().scale(&derived), notes))
            }
        }
        "ell_integrality" => {
            let ctx = PoincareContext::new(a);
            let powers = ctx.ell().divided_powers()?;
            if powers.len() as u32 != 2 * g + 1 {
                return Ok(Outcome::fail(
                    powers.last().cloned().unwrap_or_else(|| Multivector::zero(2 * a.rank())),
                    format!("expected {} nonzero divided powers, found {}", 2 * g + 1, powers.len()),
                ));
            }
            Ok(Outcome::pass(format!("ℓ^k/k! integral for k = 0..{}", 2 * g)))
        }
        _ => Err(Error::UnknownCheck(desc.name.to_string())),
    }
}

fn functoriality(desc: &CheckDescriptor, p: &CheckParams) -> Result<Outcome> {
    let x_var = &p.variety;
    let mut rng = rng_for(desc, p.seed);
    let samples = p.samples.unwrap_or(20);
    let ctx_x = PoincareContext::new(x_var);
    for s in 0..samples {
        let gy = rng.gen_range(1..=3u32);
        let y_var = AbelianVariety::standard_ppav(gy)?;
        let ctx_y = PoincareContext::new(&y_var);
        let m = random_gaussian_matrix(&mut rng, gy as usize, x_var.genus() as usize);
        let f = Homomorphism::new_holomorphic(x_var.clone(), y_var.clone(), m)?;
        let f_hat = f.dual();
        let x = random_class(&mut rng, x_var.rank(), 6, false);
        let y = random_class(&mut rng, y_var.rank(), 6, false);
        let lhs = f_hat.pullback(&ctx_x.fourier(&x)?)?;
        let rhs = ctx_y.fourier(&f.pushforward(&x)?)?;
        if lhs != rhs {
            return Ok(Outcome::fail(&lhs - &rhs, format!("sample {s}: (f̂)^*F_X ≠ F_Y f_*")));
        }
        let lhs = ctx_x.fourier(&f.pullback(&y)?)?;
        let sign = parity_sign(x_var.genus() + gy);
        let rhs = f_hat.pushforward(&ctx_y.fourier(&y)?)?.scale_i64(sign);
        if lhs != rhs {
            return Ok(Outcome::fail(&lhs - &rhs, format!("sample {s}: F_X f^* ≠ ±(f̂)_* F_Y")));
        }
    }
    Ok(Outcome::pass(format!("{samples} random holomorphic homomorphisms")))
}

fn product_exchange(desc: &CheckDescriptor, p: &CheckParams) -> Result<Outcome> {
    let a = &p.variety;
    let mut rng = rng_for(desc, p.seed);
    let samples = p.samples.unwrap_or(50);
    let ctx = PoincareContext::new(a);
    let law_a = GroupLaw::new(a);
    let law_hat = GroupLaw::new(ctx.dual());
    let sign = parity_sign(a.genus());
    for s in 0..samples {
        let x = random_class(&mut rng, a.rank(), 5, true);
        let y = random_class(&mut rng, a.rank(), 5, true);
        let (fx, fy) = (ctx.fourier(&x)?, ctx.fourier(&y)?);
        let lhs = ctx.fourier(&x.wedge(&y)?)?;
        let rhs = law_hat.star(&fx, &fy)?.scale_i64(sign);
        if lhs != rhs {
            return Ok(Outcome::fail(&lhs - &rhs, format!("sample {s}: F(x·y) ≠ (−1)^g F(x)⋆F(y)")));
        }
        let lhs = ctx.fourier(&law_a.star(&x, &y)?)?;
        let rhs = fx.wedge(&fy)?;
        if lhs != rhs {
            return Ok(Outcome::fail(&lhs - &rhs, format!("sample {s}: F(x⋆y) ≠ F(x)·F(y)")));
        }
    }
    Ok(Outcome::pass(format!("{samples} random pairs of even classes")))
}

fn beta_surjectivity(a: &AbelianVariety) -> Result<Outcome> {
    let g = a.genus();
    let ctx = PoincareContext::new(a);
    let h2 = hodge_lattice(a, 1)?;
    let target = hodge_lattice(a, g - 1)?;
    let divisors = h2.basis_classes();
    // β via the triple sum must agree with π₂,∗(σ^λ·π₁^∗D), σ^λ = (id × λ)^∗σ_A
    let sigma_l = id_times_lambda(&ctx)?.pullback(&ctx.sigma_class())?;
    let sq = ProductStructure::pair(a, a);
    let mut betas = Vec::with_capacity(divisors.len());
    for d in &divisors {
        let beta = beta_from_divisor(a, d)?;
        let direct = crate::fourier::correspondence_action(&sq, &sigma_l, d)?;
        if beta != direct {
            return Ok(Outcome::fail(&beta - &direct, format!("triple sum disagrees with the correspondence for D = {d}")));
        }
        betas.push(beta);
    }
    let cert = voisin_certificate_in(&target, a, &betas)?;
    if let Some(w) = cert.witness {
        return Ok(Outcome::fail(
            w,
            format!("cokernel divisors {:?}, free rank {}", cert.invariants.torsion(), cert.invariants.free_rank),
        ));
    }
    Ok(Outcome::pass(format!(
        "β(Hdg²) = Hdg^{} (rank {})",
        2 * g - 2,
        target.rank()
    )))
}

fn correspondence_diagram(a: &AbelianVariety) -> Result<Outcome> {
    let g = a.genus();
    let ctx = PoincareContext::new(a);
    let hat = ctx.dual_context();
    let n: Int = (1..=2 * g - 2).map(BigInt::from).product();
    let gamma = hat.sigma_class().scale(&n);
    for m in Multivector::basis_masks(a.rank(), 2) {
        let x = Multivector::monomial(a.rank(), m, 1);
        let lhs = hat.correspondence(&gamma, &x)?;
        let rhs = hat.fourier(&x)?.scale(&n);
        if lhs != rhs {
            return Ok(Outcome::fail(&lhs - &rhs, format!("fails on {x}")));
        }
    }
    let mut notes = format!("n = (2g−2)! = {n}, all of H²(Â,ℤ)");
    if a.complex_structure().is_some() {
        for b in hodge_lattice(hat.variety(), 1)?.basis_classes() {
            let img = hat.correspondence(&gamma, &b)?;
            if !is_hodge(a, &img)? {
                return Ok(Outcome::fail(img, "image of a Hodge class is not Hodge"));
            }
        }
        notes.push_str("; Hdg²(Â) lands in Hdg^{2g−2}(A)");
    }
    Ok(Outcome::pass(notes))
}

fn isogeny_degree(desc: &CheckDescriptor, p: &CheckParams) -> Result<Outcome> {
    let x = &p.variety;
    let g = x.genus() as usize;
    let mut rng = rng_for(desc, p.seed);
    let samples = p.samples.unwrap_or(10);
    let ps = ProductStructure::pair(x, &x.dual());
    for s in 0..samples {
        let m = loop {
            let m = random_gaussian_matrix(&mut rng, g, g);
            if !m.determinant().is_zero() {
                break m;
            }
        };
        let alpha = Homomorphism::new_holomorphic(x.clone(), x.clone(), m)?;
        let det = alpha.matrix().determinant();
        let deg_m = det.abs();
        let adj = alpha.matrix().adjugate();
        let beta_m = if det.is_negative() { adj.neg() } else { adj };
        let beta = Homomorphism::new_holomorphic(x.clone(), x.clone(), beta_m)?;
        let ba = alpha.then(&beta)?;
        let dual_side = beta.dual().then(&alpha.dual())?;
        let combined = IntMatrix::block_diagonal(&[ba.matrix().clone(), dual_side.matrix().clone()]);
        let expected = IntMatrix::identity(ps.rank() as usize).scale(&deg_m);
        if combined != expected {
            let diff = Homomorphism::new(ps.variety().clone(), ps.variety().clone(), combined.sub(&expected))?;
            let w = diff.pullback(&ps.variety().theta_class())?;
            return Ok(Outcome::fail(w, format!("sample {s}: (β∘α)×(α̂∘β̂) ≠ [m]")));
        }
        let product = alpha.degree()? * beta.degree()?;
        let target = num_traits::pow(deg_m.clone(), 2 * g);
        if product != target {
            return Ok(Outcome::fail(
                Multivector::scalar(x.rank(), &product - &target),
                format!("sample {s}: deg α·deg β = {product}, m^(2h) = {target}"),
            ));
        }
    }
    Ok(Outcome::pass(format!("{samples} random isogenies")))
}

fn ihc_certificate(a: &AbelianVariety) -> Result<Outcome> {
    let g = a.genus();
    let h2 = hodge_lattice(a, 1)?;
    let standard = a.complex_structure() == Some(&gaussian_structure(g as usize));
    if standard && h2.rank() != (g * g) as usize {
        return Ok(Outcome::fail(
            Multivector::scalar(a.rank(), h2.rank() as i64 - (g * g) as i64),
            format!("rank Hdg² = {}, expected {}", h2.rank(), g * g),
        ));
    }
    let target = hodge_lattice(a, g - 1)?;
    let betas: Vec<Multivector> = h2.basis_classes().iter().map(|d| beta_from_divisor(a, d)).collect::<Result<_>>()?;
    let cert = voisin_certificate_in(&target, a, &betas)?;
    if let Some(w) = cert.witness {
        return Ok(Outcome::fail(
            w,
            format!("Voisin group divisors {:?}, free rank {}", cert.invariants.torsion(), cert.invariants.free_rank),
        ));
    }
    Ok(Outcome::pass(format!(
        "rank Hdg² = {}, rank Hdg^{} = {}, cokernel trivial",
        h2.rank(),
        2 * g - 2,
        target.rank()
    )))
}

/// Convention record carried by every report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conventions {
    pub ell_sign: i64,
    pub orientation: String,
    pub hodge_parameter: HodgeParameter,
    /// `(variety name, sign)` with `J_Â = sign·Jᵀ`.
    pub dual_j_signs: Vec<(String, i8)>,
}

impl Conventions {
    pub fn for_varieties(varieties: &[AbelianVariety]) -> Self {
        let mut dual_j_signs: Vec<(String, i8)> = varieties
            .iter()
            .filter(|v| v.complex_structure().is_some())
            .map(|v| (v.name().to_string(), v.dual().dual_j_sign().unwrap_or(0)))
            .collect();
        dual_j_signs.sort();
        dual_j_signs.dedup();
        Conventions {
            ell_sign: ELL_SIGN,
            orientation: "integral of θ^g/g! equals the product of the polarization type".into(),
            hodge_parameter: HodgeParameter::DEFAULT,
            dual_j_signs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub tool_version: String,
    pub conventions: Conventions,
    pub results: Vec<CheckResult>,
    pub status: Status,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn count(&self, s: Status) -> usize {
        self.results.iter().filter(|r| r.status == s).count()
    }
}

/// Which checks to run on which varieties.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub checks: Vec<String>,
    pub varieties: Vec<AbelianVariety>,
    pub seed: u64,
    pub samples: Option<u32>,
    pub aux_genus: u32,
}

impl SuiteConfig {
    pub fn all_checks() -> Vec<String> {
        REGISTRY.iter().map(|d| d.name.to_string()).collect()
    }

    /// Genus 1 to 3 principal products and the type `(1,2)` surface.
    pub fn default_suite() -> Self {
        let mut varieties: Vec<AbelianVariety> =
            (1..=3).map(|g| AbelianVariety::standard_ppav(g).expect("valid")).collect();
        varieties.push(AbelianVariety::of_type(&[1, 2]).expect("valid"));
        SuiteConfig {
            checks: Self::all_checks(),
            varieties,
            seed: 0,
            samples: None,
            aux_genus: 1,
        }
    }

    pub fn new(checks: Vec<String>, varieties: Vec<AbelianVariety>) -> Self {
        SuiteConfig {
            checks,
            varieties,
            seed: 0,
            samples: None,
            aux_genus: 1,
        }
    }
}

/// Runs every (check, variety) pair in parallel; results are sorted by
/// check name and then parameters.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    for c in &config.checks {
        descriptor(c)?;
    }
    let jobs: Vec<(&'static CheckDescriptor, CheckParams)> = config
        .checks
        .iter()
        .flat_map(|c| {
            let d = descriptor(c).expect("validated");
            config.varieties.iter().map(move |v| {
                let mut p = CheckParams::new(v.clone()).with_seed(config.seed).with_aux_genus(config.aux_genus);
                p.samples = config.samples;
                (d, p)
            })
        })
        .collect();
    let mut results: Vec<CheckResult> = jobs
        .par_iter()
        .map(|(d, p)| match run_check(d.name, p) {
            Ok(r) => r,
            Err(e) => CheckResult {
                id: d.id.to_string(),
                name: d.name.to_string(),
                anchor: d.anchor.to_string(),
                params: p.record(),
                status: Status::Skipped,
                witness: None,
                notes: match e {
                    Error::UnsupportedParams { reason, .. } => format!("skipped (budget): {reason}"),
                    other => format!("skipped: {other}"),
                },
                runtime_us: 0,
            },
        })
        .collect();
    results.sort_by(|x, y| (&x.name, &x.params).cmp(&(&y.name, &y.params)));
    let status = if results.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    Ok(VerificationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        conventions: Conventions::for_varieties(&config.varieties),
        results,
        status,
    })
}
