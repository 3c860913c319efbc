//! The monocentre: families `{x_(K,ψ) ∈ stab(K,ψ)/Ker ψ}` compatible with every triple.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::character::{abelian_invariants, central_characters, PairPoset};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hyperhecke::{HyperHecke, Triple};

pub const EXHAUSTIVE_MAX_ORDER: usize = 8;
pub const EXHAUSTIVE_MAX_ASSIGNMENTS: usize = 1_000_000;

/// One coset of `Ker ψ_p` inside `stab(p)` for every pair `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoFamily {
    cosets: Vec<Vec<usize>>,
}

impl MonoFamily {
    /// Checks that each entry is a coset of the kernel inside the stabilizer.
    pub fn new(poset: &PairPoset, mut cosets: Vec<Vec<usize>>) -> Result<Self> {
        if cosets.len() != poset.len() {
            return Err(Error::Precondition("one coset per pair is required".into()));
        }
        for (p, c) in cosets.iter_mut().enumerate() {
            c.sort_unstable();
            let x = *c
                .first()
                .ok_or_else(|| Error::Precondition(format!("empty coset for pair {p}")))?;
            if !poset.stabilizer(p).contains(x) || *c != coset(poset, p, x) {
                return Err(Error::Precondition(format!(
                    "entry for pair {p} is not a kernel coset in the stabilizer"
                )));
            }
        }
        Ok(MonoFamily { cosets })
    }

    /// The family `x_p = x·Ker ψ_p`; `None` when `x` misses some stabilizer.
    pub fn from_element(poset: &PairPoset, x: usize) -> Option<Self> {
        (0..poset.len())
            .all(|p| poset.stabilizer(p).contains(x))
            .then(|| MonoFamily {
                cosets: (0..poset.len()).map(|p| coset(poset, p, x)).collect(),
            })
    }

    pub fn coset(&self, p: usize) -> &[usize] {
        &self.cosets[p]
    }

    /// Minimal element of the coset at `p`.
    pub fn rep(&self, p: usize) -> usize {
        self.cosets[p][0]
    }

    pub fn reps(&self) -> Vec<usize> {
        self.cosets.iter().map(|c| c[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }
}

fn coset(poset: &PairPoset, p: usize, x: usize) -> Vec<usize> {
    let g = poset.group();
    let mut c: Vec<usize> = poset.kernel(p).elements().iter().map(|&w| g.mul(x, w)).collect();
    c.sort_unstable();
    c
}

/// `g x g⁻¹ ∈ stab(H,φ)` and `g x g⁻¹·Ker φ = x_H` for the representative `x = min x_K`.
pub fn monocentre_condition(hh: &HyperHecke, t: &Triple, x_k: &[usize], x_h: &[usize]) -> Result<bool> {
    if !hh.triple_valid(t) {
        return Err(Error::InvalidTriple(format!("{t:?}")));
    }
    let x = *x_k
        .first()
        .ok_or_else(|| Error::Precondition("empty coset".into()))?;
    Ok(condition_with_rep(hh.poset(), t, x, x_h))
}

/// The condition evaluated at an arbitrary representative of `x_K`.
pub fn condition_with_rep(poset: &PairPoset, t: &Triple, x: usize, x_h: &[usize]) -> bool {
    let y = poset.group().conj(t.g, x);
    poset.stabilizer(t.target).contains(y) && x_h.binary_search(&y).is_ok()
}

/// All valid triples, every `g` included.
pub fn valid_triples(hh: &HyperHecke) -> Vec<Triple> {
    let np = hh.poset().len();
    let n = hh.poset().group().order();
    let mut out = Vec::new();
    for s in 0..np {
        for t in 0..np {
            for g in 0..n {
                let tr = Triple::new(s, g, t);
                if hh.triple_valid(&tr) {
                    out.push(tr);
                }
            }
        }
    }
    out
}

fn satisfies_all(poset: &PairPoset, triples: &[Triple], fam: &MonoFamily) -> bool {
    triples
        .iter()
        .all(|t| condition_with_rep(poset, t, fam.rep(t.source), fam.coset(t.target)))
}

/// `Z_{M,φ̄}(G)`: its families (identity first) and the induced multiplication.
#[derive(Clone, Debug)]
pub struct Monocentre {
    families: Vec<MonoFamily>,
    elements: Vec<usize>,
    table: Option<Vec<Vec<usize>>>,
}

impl Monocentre {
    fn from_families(poset: &PairPoset, mut families: Vec<(MonoFamily, usize)>) -> Result<Self> {
        families.sort();
        families.dedup_by(|a, b| a.0 == b.0);
        let index: HashMap<Vec<usize>, usize> = families
            .iter()
            .enumerate()
            .map(|(i, (f, _))| (f.reps(), i))
            .collect();
        let g = poset.group();
        let mut table = Some(Vec::with_capacity(families.len()));
        for (a, _) in &families {
            let mut row = Vec::with_capacity(families.len());
            for (b, _) in &families {
                let key: Vec<usize> = (0..poset.len())
                    .map(|p| coset(poset, p, g.mul(a.rep(p), b.rep(p)))[0])
                    .collect();
                match index.get(&key) {
                    Some(&i) => row.push(i),
                    None => {
                        table = None;
                        break;
                    }
                }
            }
            match table.as_mut() {
                Some(t) => t.push(row),
                None => break,
            }
        }
        let (families, elements) = families.into_iter().unzip();
        Ok(Monocentre {
            families,
            elements,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.families.len()
    }

    pub fn families(&self) -> &[MonoFamily] {
        &self.families
    }

    /// An element of `G` generating each family (its `x_(Z,φ̄)` representative for the fast path).
    pub fn generating_elements(&self) -> &[usize] {
        &self.elements
    }

    /// `false` when the induced product leaves the set of families.
    pub fn is_closed(&self) -> bool {
        self.table.is_some()
    }

    pub fn table(&self) -> Option<&[Vec<usize>]> {
        self.table.as_deref()
    }

    pub fn as_group(&self) -> Result<FiniteGroup> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| Error::InvariantViolation("monocentre is not closed under products".into()))?;
        FiniteGroup::from_cayley_table(table, "monocentre")
    }

    pub fn is_abelian(&self) -> Result<bool> {
        Ok(self.as_group()?.is_abelian())
    }

    /// Invariant factors of the abelianization.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        let g = self.as_group()?;
        Ok(abelian_invariants(&g, &g.whole()))
    }

    pub fn same_families(&self, other: &Monocentre) -> bool {
        self.families == other.families
    }
}

/// Fast path: every family is generated by a single `x ∈ G`.
pub fn monocentre(hh: &HyperHecke) -> Result<Monocentre> {
    let poset = hh.poset();
    let triples = valid_triples(hh);
    let found: Vec<(MonoFamily, usize)> = (0..poset.group().order())
        .into_par_iter()
        .filter_map(|x| {
            let fam = MonoFamily::from_element(poset, x)?;
            satisfies_all(poset, &triples, &fam).then_some((fam, x))
        })
        .collect();
    Monocentre::from_families(poset, found)
}

/// Brute force over independent coset choices, guarded by group order and search size.
pub fn monocentre_exhaustive(hh: &HyperHecke) -> Result<Monocentre> {
    let poset = hh.poset();
    let g = poset.group();
    if g.order() > EXHAUSTIVE_MAX_ORDER {
        return Err(Error::too_large("group order", g.order(), EXHAUSTIVE_MAX_ORDER));
    }
    let choices: Vec<Vec<Vec<usize>>> = (0..poset.len())
        .map(|p| {
            let mut cs: Vec<Vec<usize>> = poset
                .stabilizer(p)
                .elements()
                .iter()
                .map(|&x| coset(poset, p, x))
                .collect();
            cs.sort();
            cs.dedup();
            cs
        })
        .collect();
    let mut size: usize = 1;
    for c in &choices {
        size = size.saturating_mul(c.len());
        if size > EXHAUSTIVE_MAX_ASSIGNMENTS {
            return Err(Error::too_large(
                "monocentre assignments",
                size,
                EXHAUSTIVE_MAX_ASSIGNMENTS,
            ));
        }
    }
    let triples = valid_triples(hh);
    // a triple is checked as soon as both of its endpoints are assigned
    let mut due: Vec<Vec<Triple>> = vec![Vec::new(); poset.len()];
    for t in triples {
        due[t.source.max(t.target)].push(t);
    }
    let mut found = Vec::new();
    let mut current: Vec<usize> = vec![0; poset.len()];
    search(poset, &choices, &due, 0, &mut current, &mut found);
    let families = found
        .into_iter()
        .map(|pick| {
            let cosets: Vec<Vec<usize>> = pick
                .iter()
                .enumerate()
                .map(|(p, &i)| choices[p][i].clone())
                .collect();
            let x = cosets[poset.bottom()][0];
            (MonoFamily { cosets }, x)
        })
        .collect();
    Monocentre::from_families(poset, families)
}

fn search(
    poset: &PairPoset,
    choices: &[Vec<Vec<usize>>],
    due: &[Vec<Triple>],
    p: usize,
    current: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if p == choices.len() {
        found.push(current.clone());
        return;
    }
    for i in 0..choices[p].len() {
        current[p] = i;
        let ok = due[p].iter().all(|t| {
            let x_k = &choices[t.source][current[t.source]];
            let x_h = &choices[t.target][current[t.target]];
            condition_with_rep(poset, t, x_k[0], x_h)
        });
        if ok {
            search(poset, choices, due, p + 1, current, found);
        }
    }
}

/// `[(K,ψ),g,(H,φ)]·[(K,ψ),x_K,(K,ψ)] = [(H,φ),x_H,(H,φ)]·[(K,ψ),g,(H,φ)]`.
pub fn commutation_check(hh: &HyperHecke, t: &Triple, fam: &MonoFamily) -> Result<bool> {
    let lhs = hh.multiply(
        &hh.element(t)?,
        &hh.element(&Triple::new(t.source, fam.rep(t.source), t.source))?,
    )?;
    let rhs = hh.multiply(
        &hh.element(&Triple::new(t.target, fam.rep(t.target), t.target))?,
        &hh.element(t)?,
    )?;
    Ok(lhs == rhs)
}

/// The family of inverses `x_p⁻¹·Ker ψ_p`.
pub fn inverse_family(poset: &PairPoset, fam: &MonoFamily) -> MonoFamily {
    let g = poset.group();
    MonoFamily {
        cosets: (0..poset.len())
            .map(|p| coset(poset, p, g.inv(fam.rep(p))))
            .collect(),
    }
}

/// Monocentres for every central character of `G`, in `central_characters` order.
pub fn monocentre_all(group: &Arc<FiniteGroup>) -> Result<Vec<Monocentre>> {
    central_characters(group)
        .into_iter()
        .map(|chi| {
            let poset = Arc::new(PairPoset::new(group.clone(), chi)?);
            monocentre(&HyperHecke::new(poset))
        })
        .collect()
}

/// `|Z_M(G)|` as the product over central characters.
pub fn full_monocentre_order(group: &Arc<FiniteGroup>) -> Result<usize> {
    Ok(monocentre_all(group)?.iter().map(Monocentre::order).product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hh(name: &str, central: usize) -> HyperHecke {
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        let chi = central_characters(&g)[central].clone();
        HyperHecke::new(Arc::new(PairPoset::new(g, chi).unwrap()))
    }

    #[test]
    fn d8_orders() {
        let m = monocentre(&hh("d8", 0)).unwrap();
        assert_eq!(m.order(), 4);
        assert_eq!(m.abelian_invariants().unwrap(), vec![2, 2]);
        let m = monocentre(&hh("d8", 1)).unwrap();
        assert_eq!(m.order(), 2);
        assert_eq!(m.abelian_invariants().unwrap(), vec![2]);
    }

    #[test]
    fn c2_splits_over_central_characters() {
        let h = hh("c2", 0);
        let m = monocentre(&h).unwrap();
        assert_eq!(m.order(), 1);
        assert!(m.same_families(&monocentre_exhaustive(&h).unwrap()));
        let g = Arc::new(FiniteGroup::builtin("c2").unwrap());
        assert_eq!(full_monocentre_order(&g).unwrap(), 2);
    }

    #[test]
    fn guard_trips_above_order_eight() {
        let err = monocentre_exhaustive(&hh("s4", 0)).unwrap_err();
        assert_eq!(err.kind(), "TooLarge");
    }
}
