//! The group algebra of a finite group as functions under counting-measure convolution.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::hyperhecke::{HyperHecke, Triple};
use crate::linalg::Matrix;
use crate::monomial::CosetsWithin;
use crate::rep::MatrixRep;

#[derive(Clone, Debug)]
pub struct GroupFunction {
    group: Arc<FiniteGroup>,
    modulus: u32,
    values: Vec<CycloScalar>,
}

impl PartialEq for GroupFunction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group.order() == other.group.order())
            && self.values == other.values
    }
}

impl Eq for GroupFunction {}

impl GroupFunction {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        let modulus = group.exponent() as u32;
        GroupFunction {
            group: group.clone(),
            modulus,
            values: vec![CycloScalar::zero(modulus); group.order()],
        }
    }

    pub fn from_values(group: &Arc<FiniteGroup>, values: Vec<CycloScalar>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Precondition("one value per element is required".into()));
        }
        Ok(GroupFunction {
            group: group.clone(),
            modulus: group.exponent() as u32,
            values,
        })
    }

    /// `f_g`, the indicator of `{g}`.
    pub fn delta(group: &Arc<FiniteGroup>, g: usize) -> Self {
        GroupFunction::indicator(group, &[g])
    }

    /// `χ_W`.
    pub fn indicator(group: &Arc<FiniteGroup>, set: &[usize]) -> Self {
        let mut f = GroupFunction::zero(group);
        for &x in set {
            f.values[x] = CycloScalar::one(f.modulus);
        }
        f
    }

    /// `e_K = χ_K / vol(K)`.
    pub fn idempotent(group: &Arc<FiniteGroup>, k: &Subgroup) -> Self {
        GroupFunction::indicator(group, k.elements()).scale(&CycloScalar::from_rational(
            group.exponent() as u32,
            BigRational::new(BigInt::from(1), BigInt::from(k.order() as i64)),
        ))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[CycloScalar] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &CycloScalar {
        &self.values[x]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&x| !self.values[x].is_zero()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.add_ref(b)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        GroupFunction {
            values: self.values.iter().map(|a| a.mul_ref(c)).collect(),
            ..self.clone()
        }
    }

    /// `(f₁∗f₂)(z) = Σ_h f₁(h) f₂(h⁻¹z)`.
    pub fn convolve(&self, other: &Self) -> Self {
        let g = self.group.as_ref();
        let mut out = GroupFunction::zero(&self.group);
        for h in self.support() {
            let hinv = g.inv(h);
            let a = &self.values[h];
            for (z, slot) in out.values.iter_mut().enumerate() {
                let b = &other.values[g.mul(hinv, z)];
                if !b.is_zero() {
                    *slot += &a.mul_ref(b);
                }
            }
        }
        out
    }

    /// `(f₁∗f₂)(g) = Σ_h f₁(gh) f₂(h⁻¹)`.
    pub fn convolve_right(&self, other: &Self) -> Self {
        let g = self.group.as_ref();
        let mut out = GroupFunction::zero(&self.group);
        for h in 0..g.order() {
            let b = &other.values[g.inv(h)];
            if b.is_zero() {
                continue;
            }
            for (z, slot) in out.values.iter_mut().enumerate() {
                let a = &self.values[g.mul(z, h)];
                if !a.is_zero() {
                    *slot += &a.mul_ref(b);
                }
            }
        }
        out
    }

    /// `T(F)(x) = F(x⁻¹)`.
    pub fn involution_t(&self) -> Self {
        let g = self.group.as_ref();
        GroupFunction {
            values: (0..g.order()).map(|x| self.values[g.inv(x)].clone()).collect(),
            ..self.clone()
        }
    }

    /// `F*(x) = conj(F(x⁻¹))`, the conjugate-linear involution; agrees with `T` on real-valued functions.
    pub fn involution_star(&self) -> Self {
        let g = self.group.as_ref();
        GroupFunction {
            values: (0..g.order()).map(|x| self.values[g.inv(x)].conj()).collect(),
            ..self.clone()
        }
    }

    /// `(a·F)(x) = F(xa)`.
    pub fn translate(&self, a: usize) -> Self {
        let g = self.group.as_ref();
        GroupFunction {
            values: (0..g.order()).map(|x| self.values[g.mul(x, a)].clone()).collect(),
            ..self.clone()
        }
    }
}

/// Choices of representatives for the expansions; `None` means minimal index.
pub struct Choices<'a, R: Rng> {
    pub rng: Option<&'a mut R>,
}

fn pick_reps<R: Rng>(g: &FiniteGroup, ambient: &Subgroup, sub: &Subgroup, rng: &mut Option<&mut R>) -> Vec<usize> {
    let cos = CosetsWithin::new(g, ambient, sub);
    cos.reps()
        .iter()
        .map(|&r| match rng {
            Some(rng) => {
                let members: Vec<usize> = sub.elements().iter().map(|&k| g.mul(r, k)).collect();
                *members.choose(rng).expect("cosets are nonempty")
            }
            None => r,
        })
        .collect()
}

fn root(modulus: u32, e: u32) -> CycloScalar {
    CycloScalar::root_of_unity(modulus, e as i64)
}

/// `g₁·f_(K,ψ) = Σ_j ψ(v_j) χ_{Ker(ψ) v_j g₁⁻¹}` for representatives `v_j` of `K/Ker ψ`.
pub fn translate_expansion<R: Rng>(
    group: &Arc<FiniteGroup>,
    psi: &crate::character::Character,
    g1: usize,
    choices: &mut Choices<R>,
) -> GroupFunction {
    let g = group.as_ref();
    let ker = psi.kernel();
    let g1inv = g.inv(g1);
    let mut out = GroupFunction::zero(group);
    for v in pick_reps(g, psi.domain(), &ker, &mut choices.rng) {
        let c = root(psi.modulus(), psi.exp(v));
        for &w in ker.elements() {
            let x = g.mul(g.mul(w, v), g1inv);
            out.values[x] += &c;
        }
    }
    out
}

/// `Φ = Σ_j φ(u_j) χ_{g⁻¹ Ker(φ) u_j}` with `u_j` representatives of `H / (gKg⁻¹·Ker φ)`.
pub fn phi_element<R: Rng>(hh: &HyperHecke, t: &Triple, choices: &mut Choices<R>) -> Result<GroupFunction> {
    if !hh.triple_valid(t) {
        return Err(Error::InvalidTriple(format!("{t:?}")));
    }
    let poset = hh.poset();
    let group = poset.group_arc();
    let g = group.as_ref();
    let k = poset.pair(t.source).subgroup();
    let phi = poset.pair(t.target).character();
    let h = phi.domain();
    let ker_phi = phi.kernel();
    let mut gens: Vec<usize> = k.elements().iter().map(|&x| g.conj(t.g, x)).collect();
    gens.extend_from_slice(ker_phi.elements());
    let l = g.generate(&gens);
    let ginv = g.inv(t.g);
    let mut out = GroupFunction::zero(group);
    for u in pick_reps(g, h, &l, &mut choices.rng) {
        let c = root(phi.modulus(), phi.exp(u));
        for &w in ker_phi.elements() {
            out.values[g.mul(g.mul(ginv, w), u)] += &c;
        }
    }
    Ok(out)
}

/// Both sides of `[(K,ψ),g,(H,φ)](g₁·f_(K,ψ)) = vol(Ker ψ)⁻¹ T(T(g₁·f_(K,ψ)) ∗ Φ)`.
///
/// `convolution` uses the involution `F ↦ conj(F(x⁻¹))`, under which
/// `T(ψ(v)·χ_W) = ψ(v)⁻¹·χ_{W⁻¹}`; `literal` uses `F ↦ F(x⁻¹)` and differs exactly
/// when some character value is not real.
pub struct ConvolutionSides {
    pub direct: GroupFunction,
    pub expanded: GroupFunction,
    pub convolution: GroupFunction,
    pub literal: GroupFunction,
}

impl ConvolutionSides {
    pub fn holds(&self) -> bool {
        self.direct == self.expanded && self.direct == self.convolution
    }

    pub fn literal_holds(&self) -> bool {
        self.direct == self.literal
    }
}

pub fn convolution_sides<R: Rng>(
    hh: &HyperHecke,
    t: &Triple,
    g1: usize,
    choices: &mut Choices<R>,
) -> Result<ConvolutionSides> {
    if !hh.triple_valid(t) {
        return Err(Error::InvalidTriple(format!("{t:?}")));
    }
    let poset = hh.poset();
    let group = poset.group_arc();
    let g = group.as_ref();
    let psi = poset.pair(t.source).character();
    let phi = poset.pair(t.target).character();
    let a = g.mul(g1, g.inv(t.g));
    let f_h = GroupFunction::from_values(
        group,
        (0..g.order())
            .map(|x| match phi.exp_at(x) {
                Some(e) => root(phi.modulus(), e),
                None => CycloScalar::zero(phi.modulus()),
            })
            .collect(),
    )?;
    let direct = f_h.translate(a);
    let expanded = translate_expansion(group, phi, a, choices);
    let src = translate_expansion(group, psi, g1, choices);
    let big_phi = phi_element(hh, t, choices)?;
    let vol = CycloScalar::from_rational(
        phi.modulus(),
        BigRational::new(BigInt::from(1), BigInt::from(psi.kernel().order() as i64)),
    );
    let convolution = src.involution_star().convolve(&big_phi).involution_star().scale(&vol);
    let literal = src.involution_t().convolve(&big_phi).involution_t().scale(&vol);
    Ok(ConvolutionSides {
        direct,
        expanded,
        convolution,
        literal,
    })
}

pub fn convolution_formula_check(hh: &HyperHecke, t: &Triple, g1: usize) -> Result<bool> {
    let mut choices: Choices<rand_chacha::ChaCha8Rng> = Choices { rng: None };
    Ok(convolution_sides(hh, t, g1, &mut choices)?.holds())
}

/// `π(f) = Σ_g f(g) ρ(g)`.
pub fn pi_of_phi(v: &MatrixRep, f: &GroupFunction) -> Result<Matrix> {
    if v.group().order() != f.group().order() {
        return Err(Error::Precondition("function and representation live on different groups".into()));
    }
    let mut out = Matrix::zero(v.dim(), v.dim(), v.modulus());
    for x in f.support() {
        out = out.add(&v.image(x).scale(f.value(x)))?;
    }
    Ok(out)
}

/// `χ_V(f) = Trace(π(f))`.
pub fn trace_distribution(v: &MatrixRep, f: &GroupFunction) -> Result<CycloScalar> {
    Ok(pi_of_phi(v, f)?.trace())
}
