//! One-dimensional characters, pairs `(H, φ)` and the poset of pairs with a
//! fixed central character.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, LeftCosets, Subgroup};
use crate::snf::{smith_normal_form, Smith};

/// A homomorphism `H → μ_E`, stored as exponents of `ζ_E` aligned with the
/// sorted elements of `H`. `E` is the exponent of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    domain: Subgroup,
    exps: Vec<u32>,
    modulus: u32,
}

impl Ord for Character {
    fn cmp(&self, other: &Self) -> Ordering {
        self.domain
            .cmp(&other.domain)
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| self.modulus.cmp(&other.modulus))
    }
}

impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Character {
    pub fn trivial(domain: Subgroup, modulus: u32) -> Self {
        let exps = vec![0; domain.order()];
        Character {
            domain,
            exps,
            modulus,
        }
    }

    /// Builds a character from exponents indexed like `domain.elements()`, checking multiplicativity.
    pub fn from_exponents(g: &FiniteGroup, domain: Subgroup, exps: Vec<u32>) -> Result<Self> {
        let modulus = g.exponent() as u32;
        if exps.len() != domain.order() {
            return Err(Error::Precondition("exponent vector length mismatch".into()));
        }
        let ch = Character {
            domain,
            exps: exps.into_iter().map(|e| e % modulus).collect(),
            modulus,
        };
        if !ch.is_multiplicative(g) {
            return Err(Error::Precondition("values are not multiplicative".into()));
        }
        Ok(ch)
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent `e` with `φ(h) = ζ_E^e`, or `None` off the domain.
    #[inline]
    pub fn exp_at(&self, h: usize) -> Option<u32> {
        self.domain.position(h).map(|i| self.exps[i])
    }

    /// Exponent at an element known to lie in the domain.
    #[inline]
    pub fn exp(&self, h: usize) -> u32 {
        self.exps[self.domain.position(h).expect("element outside character domain")]
    }

    pub fn value(&self, h: usize) -> Option<CycloScalar> {
        self.exp_at(h)
            .map(|e| CycloScalar::root_of_unity(self.modulus, e as i64))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(
            self.domain
                .elements()
                .iter()
                .zip(&self.exps)
                .filter(|(_, &e)| e == 0)
                .map(|(&h, _)| h)
                .collect(),
        )
    }

    /// Order of the character as an element of the dual group.
    pub fn order(&self) -> u32 {
        let m = self.modulus;
        (1..=m)
            .find(|&k| self.exps.iter().all(|&e| (e as u64 * k as u64) % m as u64 == 0))
            .unwrap_or(m)
    }

    pub fn is_multiplicative(&self, g: &FiniteGroup) -> bool {
        let m = self.modulus;
        if self.exp_at(0) != Some(0) {
            return false;
        }
        for (i, &a) in self.domain.elements().iter().enumerate() {
            for (j, &b) in self.domain.elements().iter().enumerate() {
                match self.exp_at(g.mul(a, b)) {
                    Some(e) if e == (self.exps[i] + self.exps[j]) % m => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn restrict(&self, k: &Subgroup) -> Result<Character> {
        let mut exps = Vec::with_capacity(k.order());
        for &x in k.elements() {
            exps.push(
                self.exp_at(x)
                    .ok_or_else(|| Error::NotASubgroup(format!("element {x} outside domain")))?,
            );
        }
        Ok(Character {
            domain: k.clone(),
            exps,
            modulus: self.modulus,
        })
    }

    pub fn product(&self, other: &Character) -> Result<Character> {
        if self.domain != other.domain {
            return Err(Error::Precondition("characters on different domains".into()));
        }
        let m = self.modulus;
        Ok(Character {
            domain: self.domain.clone(),
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| (a + b) % m)
                .collect(),
            modulus: m,
        })
    }

    pub fn inverse(&self) -> Character {
        let m = self.modulus;
        Character {
            domain: self.domain.clone(),
            exps: self.exps.iter().map(|&a| (m - a) % m).collect(),
            modulus: m,
        }
    }
}

/// Coordinates of `H/[H,H]` over chosen generators, with its relation matrix reduced.
struct Abelianization {
    cosets: LeftCosets,
    vec_of: HashMap<usize, Vec<i64>>,
    smith: Smith,
}

impl Abelianization {
    fn coords(&self, x: usize) -> &[i64] {
        &self.vec_of[&self.cosets.coset_of(x)]
    }
}

fn abelianization(g: &FiniteGroup, h: &Subgroup) -> Option<Abelianization> {
    let comm = g.commutator_subgroup(h);
    let cosets = g.left_cosets(&comm);
    let label = |x: usize| cosets.coset_of(x);
    let mut gens: Vec<usize> = Vec::new();
    let mut span = comm.clone();
    for &x in h.elements() {
        if !span.contains(x) {
            gens.push(x);
            let mut all: Vec<usize> = comm.elements().to_vec();
            all.extend(&gens);
            span = g.generate(&all);
        }
    }
    let r = gens.len();
    if r == 0 {
        return None;
    }
    // BFS over the quotient, recording exponent vectors and relations.
    let mut vec_of: HashMap<usize, Vec<i64>> = HashMap::new();
    let mut rep_of: Vec<usize> = vec![0];
    vec_of.insert(label(0), vec![0; r]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut i = 0;
    while i < rep_of.len() {
        let x = rep_of[i];
        let vx = vec_of[&label(x)].clone();
        for (k, &a) in gens.iter().enumerate() {
            let y = g.mul(x, a);
            let mut w = vx.clone();
            w[k] += 1;
            match vec_of.get(&label(y)) {
                Some(vy) => {
                    let rel: Vec<i64> = w.iter().zip(vy).map(|(p, q)| p - q).collect();
                    if rel.iter().any(|&c| c != 0) {
                        relations.push(rel);
                    }
                }
                None => {
                    vec_of.insert(label(y), w);
                    rep_of.push(y);
                }
            }
        }
        i += 1;
    }
    let smith = smith_normal_form(&relations, r);
    Some(Abelianization {
        cosets,
        vec_of,
        smith,
    })
}

/// Invariant factors `d_1 | d_2 | …` (all > 1) of `H/[H,H]`.
pub fn abelian_invariants(g: &FiniteGroup, h: &Subgroup) -> Vec<u64> {
    abelianization(g, h).map_or_else(Vec::new, |ab| {
        ab.smith
            .diagonal
            .iter()
            .filter(|&&d| d != 1)
            .map(|&d| d as u64)
            .collect()
    })
}

/// All one-dimensional characters of `H`, sorted lexicographically by exponent vector.
///
/// Computed from `H/[H,H]` split into cyclic factors by elementary divisors.
pub fn characters(g: &FiniteGroup, h: &Subgroup) -> Vec<Character> {
    let modulus = g.exponent() as u32;
    let Some(ab) = abelianization(g, h) else {
        return vec![Character::trivial(h.clone(), modulus)];
    };
    let smith = &ab.smith;
    let r = smith.v.len();
    let e = modulus as i64;
    let mut gen_exps: Vec<Vec<i64>> = vec![vec![0; r]];
    for (idx, &d) in smith.diagonal.iter().enumerate() {
        assert!(d > 0, "abelianization must be finite");
        let mut next = Vec::new();
        for base in &gen_exps {
            for k in 0..d {
                let mut c = base.clone();
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj = (*cj + smith.v[j][idx] * k * (e / d)).rem_euclid(e);
                }
                next.push(c);
            }
        }
        gen_exps = next;
    }
    let mut out: Vec<Character> = gen_exps
        .into_iter()
        .map(|c| {
            let exps = h
                .elements()
                .iter()
                .map(|&x| {
                    let v = ab.coords(x);
                    v.iter()
                        .zip(&c)
                        .map(|(a, b)| a * b)
                        .sum::<i64>()
                        .rem_euclid(e) as u32
                })
                .collect();
            Character {
                domain: h.clone(),
                exps,
                modulus,
            }
        })
        .collect();
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|c| c.is_multiplicative(g)));
    out
}

/// `(g)*(φ)`: the character on `g⁻¹Hg` with value `φ(gkg⁻¹)` at `k`.
pub fn conj_character(g: &FiniteGroup, x: usize, phi: &Character) -> Character {
    let xinv = g.inv(x);
    let domain = g.conjugate_subgroup(xinv, phi.domain());
    let exps = domain
        .elements()
        .iter()
        .map(|&k| phi.exp(g.conj(x, k)))
        .collect();
    Character {
        domain,
        exps,
        modulus: phi.modulus,
    }
}

/// Characters of the centre, in `characters` order; index 0 is trivial.
pub fn central_characters(g: &FiniteGroup) -> Vec<Character> {
    characters(g, &g.center())
}

/// A pair `(H, φ)`: a subgroup together with a one-dimensional character on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPair {
    character: Character,
}

impl CharPair {
    pub fn new(character: Character) -> Self {
        CharPair { character }
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.character.domain()
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn kernel(&self) -> Subgroup {
        self.character.kernel()
    }
}

/// `(K, ψ) ≤ (H, φ)`: `K ⊆ H` and `φ|_K = ψ`.
pub fn pair_leq(a: &CharPair, b: &CharPair) -> bool {
    if !a.subgroup().is_subset_of(b.subgroup()) {
        return false;
    }
    a.subgroup()
        .elements()
        .iter()
        .zip(a.character.exponents())
        .all(|(&k, &e)| b.character.exp(k) == e)
}

/// `g·(H, φ) = (gHg⁻¹, x ↦ φ(g⁻¹xg))`.
pub fn act_on_pair(g: &FiniteGroup, x: usize, p: &CharPair) -> CharPair {
    CharPair::new(conj_character(g, g.inv(x), &p.character))
}

/// `{z : zKz⁻¹ = K and ψ(zkz⁻¹) = ψ(k)}`.
pub fn stabilizer(g: &FiniteGroup, p: &CharPair) -> Subgroup {
    let elems = (0..g.order())
        .filter(|&z| {
            p.subgroup().elements().iter().zip(p.character.exponents()).all(|(&k, &e)| {
                let c = g.conj(z, k);
                p.character.exp_at(c) == Some(e)
            })
        })
        .collect();
    Subgroup::from_sorted_unchecked(elems)
}

/// The poset of pairs `(H, φ)` with `Z(G) ⊆ H` and `φ|_{Z(G)} = φ̄`.
#[derive(Debug)]
pub struct PairPoset {
    group: Arc<FiniteGroup>,
    central: Character,
    pairs: Vec<CharPair>,
    index: HashMap<CharPair, usize>,
    stabilizers: Vec<Subgroup>,
    kernels: Vec<Subgroup>,
    action: Vec<usize>,
    leq: Vec<bool>,
    orbit_of: Vec<usize>,
    orbit_reps: Vec<usize>,
}

impl PairPoset {
    pub fn new(group: Arc<FiniteGroup>, central: Character) -> Result<Self> {
        let g = group.as_ref();
        let z = g.center();
        if central.domain() != &z {
            return Err(Error::CentralCharacterMismatch(
                "central character must be defined exactly on Z(G)".into(),
            ));
        }
        let mut pairs = Vec::new();
        for h in g.subgroups_containing(&z)? {
            for ch in characters(g, &h) {
                if ch.restrict(&z)? == central {
                    pairs.push(CharPair::new(ch));
                }
            }
        }
        pairs.sort();
        let index: HashMap<CharPair, usize> =
            pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let np = pairs.len();
        let stabilizers: Vec<Subgroup> = pairs.iter().map(|p| stabilizer(g, p)).collect();
        let kernels: Vec<Subgroup> = pairs.iter().map(|p| p.kernel()).collect();
        let mut action = vec![0; g.order() * np];
        for x in 0..g.order() {
            for (i, p) in pairs.iter().enumerate() {
                let q = act_on_pair(g, x, p);
                action[x * np + i] = *index.get(&q).ok_or_else(|| {
                    Error::InvariantViolation("conjugate pair left the poset".into())
                })?;
            }
        }
        let mut leq = vec![false; np * np];
        for (i, a) in pairs.iter().enumerate() {
            for (j, b) in pairs.iter().enumerate() {
                leq[i * np + j] = pair_leq(a, b);
            }
        }
        let mut orbit_of = vec![usize::MAX; np];
        let mut orbit_reps = Vec::new();
        for i in 0..np {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let o = orbit_reps.len();
            orbit_reps.push(i);
            for x in 0..g.order() {
                orbit_of[action[x * np + i]] = o;
            }
        }
        Ok(PairPoset {
            group,
            central,
            pairs,
            index,
            stabilizers,
            kernels,
            action,
            leq,
            orbit_of,
            orbit_reps,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn central(&self) -> &Character {
        &self.central
    }

    pub fn pairs(&self) -> &[CharPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, i: usize) -> &CharPair {
        &self.pairs[i]
    }

    pub fn index_of(&self, p: &CharPair) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of the pair `(Z(G), φ̄)`, always 0.
    pub fn bottom(&self) -> usize {
        0
    }

    pub fn stabilizer(&self, i: usize) -> &Subgroup {
        &self.stabilizers[i]
    }

    pub fn kernel(&self, i: usize) -> &Subgroup {
        &self.kernels[i]
    }

    /// Index of `g·p`.
    #[inline]
    pub fn act(&self, g: usize, i: usize) -> usize {
        self.action[g * self.pairs.len() + i]
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.pairs.len() + j]
    }

    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    /// Minimal pair index in each `G`-orbit.
    pub fn orbit_reps(&self) -> &[usize] {
        &self.orbit_reps
    }

    pub fn exponent(&self) -> u32 {
        self.group.exponent() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d8_character_order() {
        let g = FiniteGroup::builtin("d8").unwrap();
        let chars = characters(&g, &g.whole());
        assert_eq!(chars.len(), 4);
        // 1, χ₂, χ₁, χ₁χ₂ with x = 1, y = 4
        let vals: Vec<(u32, u32)> = chars.iter().map(|c| (c.exp(1), c.exp(4))).collect();
        assert_eq!(vals, vec![(0, 0), (0, 2), (2, 0), (2, 2)]);
    }

    #[test]
    fn cyclic_group_of_order_twelve() {
        let g = FiniteGroup::builtin("c12").unwrap();
        let chars = characters(&g, &g.whole());
        assert_eq!(chars.len(), 12);
        let gens: Vec<u32> = chars.iter().map(|c| c.exp(1)).collect();
        let mut sorted = gens.clone();
        sorted.sort();
        assert_eq!(sorted, (0..12).collect::<Vec<_>>());
    }
}
