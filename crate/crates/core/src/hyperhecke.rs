//! The hyperHecke algebra of a finite group with a fixed central character.
//!
//! A basis element is a triple `[(K,ψ), g, (H,φ)]` with `K ⊆ g⁻¹Hg` and
//! `ψ(k) = φ(gkg⁻¹)`, taken modulo
//! `[(K,ψ), gk, (H,φ)] = ψ(k⁻¹)[(K,ψ), g, (H,φ)]` and
//! `[(K,ψ), hg, (H,φ)] = φ(h⁻¹)[(K,ψ), g, (H,φ)]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use crate::character::PairPoset;
use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};

/// `[(K,ψ), g, (H,φ)]` with `source = (K,ψ)` and `target = (H,φ)` given as poset indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub source: usize,
    pub target: usize,
    pub g: usize,
}

impl Triple {
    pub fn new(source: usize, g: usize, target: usize) -> Self {
        Triple { source, target, g }
    }

    pub fn identity(p: usize) -> Self {
        Triple::new(p, 0, p)
    }
}

/// Per `(source, target)`: for each `g`, `Some((g₀, e))` with `[s, g, t] = ζ_E^e [s, g₀, t]`.
type CanonTable = Vec<Option<(u32, u32)>>;

#[derive(Debug)]
pub struct HyperHecke {
    poset: Arc<PairPoset>,
    canon: Vec<OnceLock<std::result::Result<CanonTable, Error>>>,
    basis: OnceLock<Vec<Triple>>,
    basis_index: OnceLock<HashMap<Triple, usize>>,
}

/// A finite combination of canonical triples.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HHElement {
    terms: BTreeMap<Triple, CycloScalar>,
}

impl HHElement {
    pub fn zero() -> Self {
        HHElement::default()
    }

    pub fn terms(&self) -> &BTreeMap<Triple, CycloScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &Triple) -> Option<&CycloScalar> {
        self.terms.get(t)
    }

    /// Adds `c·t` where `t` is already canonical.
    pub fn add_canonical(&mut self, t: Triple, c: &CycloScalar) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&t) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(t, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &HHElement) -> HHElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_canonical(*t, c);
        }
        out
    }

    pub fn scale(&self, c: &CycloScalar) -> HHElement {
        let mut out = HHElement::zero();
        for (t, v) in &self.terms {
            out.add_canonical(*t, &v.mul_ref(c));
        }
        out
    }

    pub fn neg(&self) -> HHElement {
        HHElement {
            terms: self.terms.iter().map(|(t, c)| (*t, c.neg_ref())).collect(),
        }
    }
}

impl HyperHecke {
    pub fn new(poset: Arc<PairPoset>) -> Self {
        let np = poset.len();
        HyperHecke {
            poset,
            canon: (0..np * np).map(|_| OnceLock::new()).collect(),
            basis: OnceLock::new(),
            basis_index: OnceLock::new(),
        }
    }

    pub fn poset(&self) -> &PairPoset {
        &self.poset
    }

    pub fn poset_arc(&self) -> &Arc<PairPoset> {
        &self.poset
    }

    pub fn exponent(&self) -> u32 {
        self.poset.exponent()
    }

    fn root(&self, e: u32) -> CycloScalar {
        CycloScalar::root_of_unity(self.exponent(), e as i64)
    }

    /// `K ⊆ g⁻¹Hg` and `ψ(k) = φ(gkg⁻¹)` for all `k ∈ K`.
    pub fn triple_valid(&self, t: &Triple) -> bool {
        let g = self.poset.group();
        if t.source >= self.poset.len() || t.target >= self.poset.len() || t.g >= g.order() {
            return false;
        }
        let psi = self.poset.pair(t.source).character();
        let phi = self.poset.pair(t.target).character();
        psi.domain()
            .elements()
            .iter()
            .zip(psi.exponents())
            .all(|(&k, &e)| phi.exp_at(g.conj(t.g, k)) == Some(e))
    }

    fn canon_table(&self, source: usize, target: usize) -> Result<&CanonTable> {
        let np = self.poset.len();
        let slot = &self.canon[source * np + target];
        slot.get_or_init(|| self.build_canon_table(source, target))
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn build_canon_table(&self, source: usize, target: usize) -> Result<CanonTable> {
        let g = self.poset.group();
        let e = self.exponent();
        let psi = self.poset.pair(source).character();
        let phi = self.poset.pair(target).character();
        let k_elems = psi.domain().elements();
        let h_elems = phi.domain().elements();
        let mut table: CanonTable = vec![None; g.order()];
        let mut done = vec![false; g.order()];
        for x in 0..g.order() {
            if done[x] {
                continue;
            }
            let valid = self.triple_valid(&Triple::new(source, x, target));
            for (hi, &h) in h_elems.iter().enumerate() {
                let hx = g.mul(h, x);
                for (ki, &k) in k_elems.iter().enumerate() {
                    let y = g.mul(hx, k);
                    if valid != self.triple_valid(&Triple::new(source, y, target)) {
                        return Err(Error::InvariantViolation(
                            "validity is not constant on a double coset".into(),
                        ));
                    }
                    done[y] = true;
                    if !valid {
                        continue;
                    }
                    let exp = (2 * e - phi.exponents()[hi] - psi.exponents()[ki]) % e;
                    match table[y] {
                        Some((_, prev)) if prev != exp => {
                            return Err(Error::InvariantViolation(format!(
                                "scalar of element {y} depends on its factorization"
                            )));
                        }
                        _ => table[y] = Some((x as u32, exp)),
                    }
                }
            }
        }
        Ok(table)
    }

    /// Returns `(e, rep)` with `t = ζ_E^e · rep` and `rep` canonical.
    pub fn canonicalize_exp(&self, t: &Triple) -> Result<(u32, Triple)> {
        if !self.triple_valid(t) {
            return Err(Error::InvalidTriple(format!("{t:?}")));
        }
        let table = self.canon_table(t.source, t.target)?;
        let (g0, e) = table[t.g].expect("valid triple has a canonical form");
        Ok((e, Triple::new(t.source, g0 as usize, t.target)))
    }

    pub fn canonicalize(&self, t: &Triple) -> Result<(CycloScalar, Triple)> {
        let (e, rep) = self.canonicalize_exp(t)?;
        Ok((self.root(e), rep))
    }

    pub fn is_canonical(&self, t: &Triple) -> bool {
        matches!(self.canonicalize_exp(t), Ok((0, r)) if r == *t)
    }

    pub fn element(&self, t: &Triple) -> Result<HHElement> {
        let (c, rep) = self.canonicalize(t)?;
        let mut out = HHElement::zero();
        out.add_canonical(rep, &c);
        Ok(out)
    }

    /// `a·b` for triples: nonzero only when `target(b) = source(a)`.
    pub fn multiply_triples(&self, a: &Triple, b: &Triple) -> Result<Option<(u32, Triple)>> {
        if b.target != a.source {
            return Ok(None);
        }
        let g = self.poset.group();
        let prod = Triple::new(b.source, g.mul(a.g, b.g), a.target);
        self.canonicalize_exp(&prod).map(Some)
    }

    pub fn multiply(&self, a: &HHElement, b: &HHElement) -> Result<HHElement> {
        let mut out = HHElement::zero();
        for (ta, ca) in &a.terms {
            for (tb, cb) in &b.terms {
                if let Some((e, t)) = self.multiply_triples(ta, tb)? {
                    let c = ca.mul_ref(cb).mul_root(e as i64);
                    out.add_canonical(t, &c);
                }
            }
        }
        Ok(out)
    }

    /// Canonical triples, grouped by `(source, target)` and sorted by `g`.
    pub fn basis(&self) -> &[Triple] {
        self.basis.get_or_init(|| {
            let np = self.poset.len();
            let mut out = Vec::new();
            for s in 0..np {
                for t in 0..np {
                    out.extend(self.basis_between(s, t));
                }
            }
            out
        })
    }

    pub fn basis_between(&self, source: usize, target: usize) -> Vec<Triple> {
        let table = self
            .canon_table(source, target)
            .expect("canonical table construction");
        let reps: BTreeSet<u32> = table.iter().flatten().map(|&(g0, _)| g0).collect();
        reps.into_iter()
            .map(|g0| Triple::new(source, g0 as usize, target))
            .collect()
    }

    pub fn basis_index(&self, t: &Triple) -> Option<usize> {
        self.basis_index
            .get_or_init(|| {
                self.basis()
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (*t, i))
                    .collect()
            })
            .get(t)
            .copied()
    }

    /// `Σ [(H_i,φ_i), 1, (H_i,φ_i)]` over distinct pairs.
    pub fn idempotent_sum(&self, pairs: &[usize]) -> Result<HHElement> {
        let distinct: BTreeSet<usize> = pairs.iter().copied().collect();
        if distinct.len() != pairs.len() {
            return Err(Error::Precondition("idempotent pairs must be distinct".into()));
        }
        let one = CycloScalar::one(self.exponent());
        let mut out = HHElement::zero();
        for p in distinct {
            out.add_canonical(Triple::identity(p), &one);
        }
        Ok(out)
    }

    /// Index of `(g⁻¹Hg, (g)*φ)` for `t = [(K,ψ), g, (H,φ)]`.
    pub fn pulled_back_target(&self, t: &Triple) -> usize {
        let g = self.poset.group();
        self.poset.act(g.inv(t.g), t.target)
    }
}
