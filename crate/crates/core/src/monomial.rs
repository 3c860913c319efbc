//! Monomial modules: direct sums of lines permuted by a group up to roots of unity.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::character::{act_on_pair, conj_character, pair_leq, CharPair, Character};
use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::hyperhecke::{HyperHecke, Triple};

/// Left cosets `aH` of `H` inside an ambient subgroup `A`, numbered by first appearance.
#[derive(Clone, Debug)]
pub struct CosetsWithin {
    reps: Vec<usize>,
    split: Vec<Option<(usize, usize)>>,
}

impl CosetsWithin {
    pub fn new(g: &FiniteGroup, ambient: &Subgroup, h: &Subgroup) -> Self {
        let mut split = vec![None; g.order()];
        let mut reps = Vec::new();
        for &a in ambient.elements() {
            if split[a].is_some() {
                continue;
            }
            let idx = reps.len();
            reps.push(a);
            for &k in h.elements() {
                split[g.mul(a, k)] = Some((idx, k));
            }
        }
        CosetsWithin { reps, split }
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// `(i, h)` with `a = reps[i]·h`; panics outside the ambient subgroup.
    pub fn split(&self, a: usize) -> (usize, usize) {
        self.split[a].expect("element outside the ambient subgroup")
    }
}

/// A line `k·(rep ⊗ 1)` of summand `summand`, fixed by `pair` up to its character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub pair: CharPair,
    pub summand: usize,
    pub rep: usize,
}

#[derive(Clone, Debug)]
pub struct MonomialModule {
    group: Arc<FiniteGroup>,
    acting: Subgroup,
    position: Vec<Option<usize>>,
    lines: Vec<Line>,
    /// `action[pos(a)·n + i] = (j, e)` means `a·ℓ_i = ζ_E^e ℓ_j`.
    action: Vec<(u32, u32)>,
    modulus: u32,
}

impl MonomialModule {
    /// `Ind_H^G(k_φ)` with one line per left coset.
    pub fn induced(group: &Arc<FiniteGroup>, p: &CharPair) -> Self {
        MonomialModule::induced_in(group, &group.whole(), p)
    }

    /// `Ind_H^A(k_φ)` for `H ⊆ A`, acted on by `A`.
    pub fn induced_in(group: &Arc<FiniteGroup>, ambient: &Subgroup, p: &CharPair) -> Self {
        let g = group.as_ref();
        let phi = p.character();
        let cosets = CosetsWithin::new(g, ambient, p.subgroup());
        let lines: Vec<Line> = cosets
            .reps()
            .iter()
            .map(|&r| Line {
                pair: act_on_pair(g, r, p),
                summand: 0,
                rep: r,
            })
            .collect();
        let n = lines.len();
        let mut action = Vec::with_capacity(ambient.order() * n);
        for &a in ambient.elements() {
            for &r in cosets.reps() {
                let (j, h) = cosets.split(g.mul(a, r));
                action.push((j as u32, phi.exp(h)));
            }
        }
        MonomialModule {
            group: group.clone(),
            position: positions(g, ambient),
            acting: ambient.clone(),
            lines,
            action,
            modulus: phi.modulus(),
        }
    }

    pub fn direct_sum(parts: &[MonomialModule]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        if parts
            .iter()
            .any(|m| m.acting != first.acting || !Arc::ptr_eq(&m.group, &first.group))
        {
            return Err(Error::Precondition("summands must share the acting group".into()));
        }
        let mut lines = Vec::new();
        let mut offsets = Vec::new();
        let mut summand_base = 0;
        for m in parts {
            offsets.push(lines.len());
            let s = m.summand_count();
            lines.extend(m.lines.iter().map(|l| Line {
                summand: summand_base + l.summand,
                ..l.clone()
            }));
            summand_base += s;
        }
        let n = lines.len();
        let mut action = Vec::with_capacity(first.acting.order() * n);
        for pos in 0..first.acting.order() {
            for (m, &off) in parts.iter().zip(&offsets) {
                let k = m.lines.len();
                action.extend(
                    m.action[pos * k..(pos + 1) * k]
                        .iter()
                        .map(|&(j, e)| (j + off as u32, e)),
                );
            }
        }
        Ok(MonomialModule {
            lines,
            action,
            ..first.clone()
        })
    }

    /// `Res_J`: only `J` acts and each line keeps its stabilizing pair intersected with `J`.
    pub fn restrict(&self, j: &Subgroup) -> Result<Self> {
        if !j.is_subset_of(&self.acting) {
            return Err(Error::NotASubgroup("restriction target is not in the acting group".into()));
        }
        let g = self.group.as_ref();
        let n = self.lines.len();
        let mut lines = Vec::with_capacity(n);
        for l in &self.lines {
            let ch = l.pair.character();
            let dom = g.intersection(ch.domain(), j);
            lines.push(Line {
                pair: CharPair::new(ch.restrict(&dom)?),
                ..l.clone()
            });
        }
        let mut action = Vec::with_capacity(j.order() * n);
        for &a in j.elements() {
            let pos = self.pos(a);
            action.extend_from_slice(&self.action[pos * n..(pos + 1) * n]);
        }
        Ok(MonomialModule {
            group: self.group.clone(),
            position: positions(g, j),
            acting: j.clone(),
            lines,
            action,
            modulus: self.modulus,
        })
    }

    /// The same module with line `i` moved to position `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.lines.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Precondition("relabeling must be a permutation".into()));
        }
        let mut lines = self.lines.clone();
        for (i, l) in self.lines.iter().enumerate() {
            lines[perm[i]] = l.clone();
        }
        let mut action = vec![(0, 0); self.action.len()];
        for pos in 0..self.acting.order() {
            for i in 0..n {
                let (j, e) = self.action[pos * n + i];
                action[pos * n + perm[i]] = (perm[j as usize] as u32, e);
            }
        }
        Ok(MonomialModule {
            lines,
            action,
            ..self.clone()
        })
    }

    fn pos(&self, a: usize) -> usize {
        self.position[a].expect("element outside the acting group")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn acting(&self) -> &Subgroup {
        &self.acting
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn summand_count(&self) -> usize {
        self.lines.iter().map(|l| l.summand + 1).max().unwrap_or(0)
    }

    /// `a·ℓ_i = ζ_E^e ℓ_j`, returned as `(j, e)`.
    #[inline]
    pub fn act(&self, a: usize, i: usize) -> (usize, u32) {
        let (j, e) = self.action[self.pos(a) * self.lines.len() + i];
        (j as usize, e)
    }

    /// Action of `a` on a vector of line coordinates.
    pub fn act_on_vector(&self, a: usize, v: &[CycloScalar]) -> Vec<CycloScalar> {
        let mut out = vec![CycloScalar::zero(self.modulus); v.len()];
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (j, e) = self.act(a, i);
                out[j] = c.mul_root(e as i64);
            }
        }
        out
    }

    /// Composition law, identity, and stabilizing pairs, checked exhaustively.
    pub fn check_axioms(&self) -> Result<()> {
        let g = self.group.as_ref();
        let e = self.modulus;
        let n = self.lines.len();
        for i in 0..n {
            if self.act(0, i) != (i, 0) {
                return Err(Error::InvariantViolation("identity does not act trivially".into()));
            }
        }
        for &a in self.acting.elements() {
            for &b in self.acting.elements() {
                let ab = g.mul(a, b);
                for i in 0..n {
                    let (j, e1) = self.act(b, i);
                    let (k, e2) = self.act(a, j);
                    if self.act(ab, i) != (k, (e1 + e2) % e) {
                        return Err(Error::InvariantViolation("action is not multiplicative".into()));
                    }
                }
            }
        }
        for (i, l) in self.lines.iter().enumerate() {
            let ch = l.pair.character();
            for &a in self.acting.elements() {
                let (j, ea) = self.act(a, i);
                let expected = ch.exp_at(a);
                if (j == i) != expected.is_some() || expected.is_some_and(|x| x != ea) {
                    return Err(Error::InvariantViolation(format!(
                        "line {i} is not stabilized exactly by its pair"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lines whose stabilizing pair dominates `p`.
    pub fn lineable_fixed_points(&self, p: &CharPair) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&i| pair_leq(p, &self.lines[i].pair))
            .collect()
    }

    /// Orbits of lines, each tagged by the canonical representative of its pair's orbit.
    pub fn decompose(&self) -> Vec<Summand> {
        let g = self.group.as_ref();
        let n = self.lines.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut lines: Vec<usize> = self
                .acting
                .elements()
                .iter()
                .map(|&a| self.act(a, i).0)
                .collect();
            lines.sort_unstable();
            lines.dedup();
            for &j in &lines {
                seen[j] = true;
            }
            let tag = self
                .acting
                .elements()
                .iter()
                .map(|&a| act_on_pair(g, a, &self.lines[i].pair))
                .min()
                .expect("acting group is nonempty");
            out.push(Summand { lines, tag });
        }
        out.sort_by(|a, b| a.tag.cmp(&b.tag).then(a.lines.cmp(&b.lines)));
        out
    }

    /// Sorted orbit tags, one per indecomposable summand.
    pub fn decomposition_tags(&self) -> Vec<CharPair> {
        self.decompose().into_iter().map(|s| s.tag).collect()
    }
}

fn positions(g: &FiniteGroup, a: &Subgroup) -> Vec<Option<usize>> {
    let mut pos = vec![None; g.order()];
    for (i, &x) in a.elements().iter().enumerate() {
        pos[x] = Some(i);
    }
    pos
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub lines: Vec<usize>,
    pub tag: CharPair,
}

/// A linear map given column by column: `columns[i]` is the image of source line `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMorphism {
    target_len: usize,
    modulus: u32,
    columns: Vec<BTreeMap<usize, CycloScalar>>,
}

impl MonomialMorphism {
    pub fn zero(source_len: usize, target_len: usize, modulus: u32) -> Self {
        MonomialMorphism {
            target_len,
            modulus,
            columns: vec![BTreeMap::new(); source_len],
        }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut m = MonomialMorphism::zero(n, n, modulus);
        for i in 0..n {
            m.add_entry(i, i, &CycloScalar::one(modulus));
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn source_len(&self) -> usize {
        self.columns.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn column(&self, i: usize) -> &BTreeMap<usize, CycloScalar> {
        &self.columns[i]
    }

    /// Adds `c` to the coefficient of target line `j` in the image of source line `i`.
    pub fn add_entry(&mut self, i: usize, j: usize, c: &CycloScalar) {
        assert!(j < self.target_len, "target line out of range");
        let col = &mut self.columns[i];
        let v = col
            .entry(j)
            .or_insert_with(|| CycloScalar::zero(self.modulus));
        *v += c;
        if v.is_zero() {
            col.remove(&j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        let mut out = MonomialMorphism::zero(self.source_len(), self.target_len, self.modulus);
        for (i, col) in self.columns.iter().enumerate() {
            for (&j, v) in col {
                out.add_entry(i, j, &v.mul_ref(c));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source_len() != other.source_len() || self.target_len != other.target_len {
            return Err(Error::Precondition("morphism shapes differ".into()));
        }
        let mut out = self.clone();
        for (i, col) in other.columns.iter().enumerate() {
            for (&j, v) in col {
                out.add_entry(i, j, v);
            }
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.target_len != self.source_len() {
            return Err(Error::Precondition("morphisms are not composable".into()));
        }
        let mut out = MonomialMorphism::zero(other.source_len(), self.target_len, self.modulus);
        for (i, col) in other.columns.iter().enumerate() {
            for (&k, a) in col {
                for (&j, b) in &self.columns[k] {
                    out.add_entry(i, j, &b.mul_ref(a));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        let mut out = vec![CycloScalar::zero(self.modulus); self.target_len];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (&j, a) in &self.columns[i] {
                out[j] += &a.mul_ref(c);
            }
        }
        out
    }

    /// Dense `target × source` matrix.
    pub fn to_dense(&self) -> Vec<Vec<CycloScalar>> {
        let mut m = vec![vec![CycloScalar::zero(self.modulus); self.source_len()]; self.target_len];
        for (i, col) in self.columns.iter().enumerate() {
            for (&j, v) in col {
                m[j][i] = v.clone();
            }
        }
        m
    }

    /// `f(a·ℓ) = a·f(ℓ)` for every line and every element acting on both modules.
    pub fn is_equivariant(&self, source: &MonomialModule, target: &MonomialModule) -> bool {
        if source.len() != self.source_len() || target.len() != self.target_len {
            return false;
        }
        let acting = source.acting();
        if acting != target.acting() {
            return false;
        }
        acting.elements().iter().all(|&a| {
            (0..source.len()).all(|i| {
                let (j, e) = source.act(a, i);
                let lhs = self.columns[j].iter().map(|(&k, v)| (k, v.mul_root(e as i64)));
                let rhs = self.columns[i].iter().map(|(&k, v)| {
                    let (k2, e2) = target.act(a, k);
                    (k2, v.mul_root(e2 as i64))
                });
                let lhs: BTreeMap<usize, CycloScalar> = lhs.collect();
                let rhs: BTreeMap<usize, CycloScalar> = rhs.collect();
                lhs == rhs
            })
        })
    }

    /// Each line lands in lines whose pairs dominate its own.
    pub fn respects_lines(&self, source: &MonomialModule, target: &MonomialModule) -> bool {
        self.columns.iter().enumerate().all(|(i, col)| {
            col.keys()
                .all(|&j| pair_leq(&source.lines()[i].pair, &target.lines()[j].pair))
        })
    }
}

/// The morphism `Ind_K^G(k_ψ) → Ind_H^G(k_φ)` of `[(K,ψ), g, (H,φ)]`: `r ⊗ 1 ↦ r g⁻¹ ⊗ 1`.
pub fn triple_morphism(hh: &HyperHecke, t: &Triple) -> Result<MonomialMorphism> {
    if !hh.triple_valid(t) {
        return Err(Error::InvalidTriple(format!("{t:?}")));
    }
    let poset = hh.poset();
    let g = poset.group();
    let k = poset.pair(t.source).subgroup();
    let phi = poset.pair(t.target).character();
    let src = g.left_cosets(k);
    let tgt = g.left_cosets(phi.domain());
    let ginv = g.inv(t.g);
    let mut m = MonomialMorphism::zero(src.len(), tgt.len(), hh.exponent());
    for (i, &r) in src.reps().iter().enumerate() {
        let (j, h) = tgt.split(g.mul(r, ginv));
        m.add_entry(i, j, &CycloScalar::root_of_unity(hh.exponent(), phi.exp(h) as i64));
    }
    Ok(m)
}

/// Morphism of a combination of triples, all sharing `source` and `target`.
pub fn element_morphism(
    hh: &HyperHecke,
    x: &crate::hyperhecke::HHElement,
    source: usize,
    target: usize,
) -> Result<MonomialMorphism> {
    let g = hh.poset().group();
    let n_src = g.order() / hh.poset().pair(source).subgroup().order();
    let n_tgt = g.order() / hh.poset().pair(target).subgroup().order();
    let mut out = MonomialMorphism::zero(n_src, n_tgt, hh.exponent());
    for (t, c) in x.terms() {
        if t.source != source || t.target != target {
            return Err(Error::Precondition("term between other pairs".into()));
        }
        out = out.add(&triple_morphism(hh, t)?.scale(c))?;
    }
    Ok(out)
}

/// `Hom(Ind_K^G(k_ψ), N) ≅ N^((K,ψ))`: one morphism `r ⊗ 1 ↦ r·ℓ` per lineable fixed line `ℓ`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: MonomialModule,
    pub lines: Vec<usize>,
    pub morphisms: Vec<MonomialMorphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.lines.len()
    }
}

pub fn hom_via_fixed_points(p: &CharPair, n: &MonomialModule) -> Result<HomBasis> {
    let source = MonomialModule::induced(n.group(), p);
    if source.acting() != n.acting() {
        return Err(Error::Precondition("target must be a module over the whole group".into()));
    }
    let lines = n.lineable_fixed_points(p);
    let morphisms = lines
        .iter()
        .map(|&l| {
            let mut v = vec![CycloScalar::zero(n.modulus()); n.len()];
            v[l] = CycloScalar::one(n.modulus());
            morphism_from_value(&source, n, &v)
        })
        .collect::<Result<_>>()?;
    Ok(HomBasis {
        source,
        lines,
        morphisms,
    })
}

/// `f ↦ f(1 ⊗ 1)`.
pub fn value_at_one(f: &MonomialMorphism) -> Vec<CycloScalar> {
    let mut e = vec![CycloScalar::zero(f.modulus); f.source_len()];
    e[0] = CycloScalar::one(f.modulus);
    f.apply(&e)
}

/// The morphism `r ⊗ 1 ↦ r·v` for `v` supported on lineable fixed lines of the source pair.
pub fn morphism_from_value(
    source: &MonomialModule,
    n: &MonomialModule,
    v: &[CycloScalar],
) -> Result<MonomialMorphism> {
    let p = &source.lines()[0].pair;
    let fixed = n.lineable_fixed_points(p);
    if v.len() != n.len()
        || v
            .iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && fixed.binary_search(&i).is_err())
    {
        return Err(Error::Precondition("value is not a lineable fixed point".into()));
    }
    let mut m = MonomialMorphism::zero(source.len(), n.len(), n.modulus());
    for (i, line) in source.lines().iter().enumerate() {
        for (j, c) in n.act_on_vector(line.rep, v).iter().enumerate() {
            if !c.is_zero() {
                m.add_entry(i, j, c);
            }
        }
    }
    Ok(m)
}

/// The basis `{r·f_(H,φ)}` of functions `f(hx) = φ(h)f(x)`, with `(g·F)(x) = F(xg)`.
#[derive(Clone, Debug)]
pub struct FunctionModel {
    group: Arc<FiniteGroup>,
    pair: CharPair,
    reps: Vec<usize>,
}

impl FunctionModel {
    pub fn new(group: &Arc<FiniteGroup>, p: &CharPair) -> Self {
        FunctionModel {
            group: group.clone(),
            pair: p.clone(),
            reps: group.left_cosets(p.subgroup()).reps().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    fn modulus(&self) -> u32 {
        self.pair.character().modulus()
    }

    /// `f_(H,φ)`: `φ` on `H`, zero elsewhere.
    pub fn base_function(&self) -> Vec<CycloScalar> {
        let phi = self.pair.character();
        (0..self.group.order())
            .map(|x| match phi.exp_at(x) {
                Some(e) => CycloScalar::root_of_unity(self.modulus(), e as i64),
                None => CycloScalar::zero(self.modulus()),
            })
            .collect()
    }

    pub fn translate(&self, a: usize, f: &[CycloScalar]) -> Vec<CycloScalar> {
        (0..self.group.order())
            .map(|x| f[self.group.mul(x, a)].clone())
            .collect()
    }

    /// Value table of the basis function `r·f_(H,φ)`.
    pub fn basis_function(&self, i: usize) -> Vec<CycloScalar> {
        self.translate(self.reps[i], &self.base_function())
    }

    /// Coordinates of `F`: the coefficient of `r·f` is `F(r⁻¹)`.
    pub fn coordinates(&self, f: &[CycloScalar]) -> Vec<CycloScalar> {
        self.reps.iter().map(|&r| f[self.group.inv(r)].clone()).collect()
    }

    pub fn function(&self, coords: &[CycloScalar]) -> Vec<CycloScalar> {
        let mut out = vec![CycloScalar::zero(self.modulus()); self.group.order()];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (x, v) in self.basis_function(i).iter().enumerate() {
                if !v.is_zero() {
                    out[x] += &v.mul_ref(c);
                }
            }
        }
        out
    }

    /// Image of the basis function `r·f_(K,ψ)` under `[(K,ψ), g, (H,φ)]`: `r g⁻¹·f_(H,φ)`.
    pub fn triple_image(&self, target: &FunctionModel, g: usize, i: usize) -> Vec<CycloScalar> {
        let a = self.group.mul(self.reps[i], self.group.inv(g));
        target.translate(a, &target.base_function())
    }
}

/// `f̂(r ⊗ 1) = r·f_(H,φ)` as a `|G| × [G:H]` matrix of function values.
#[derive(Clone, Debug)]
pub struct Bridge {
    pub module: MonomialModule,
    pub model: FunctionModel,
    pub matrix: Vec<Vec<CycloScalar>>,
}

pub fn tensor_function_bridge(group: &Arc<FiniteGroup>, p: &CharPair) -> Bridge {
    let module = MonomialModule::induced(group, p);
    let model = FunctionModel::new(group, p);
    let cols: Vec<Vec<CycloScalar>> = (0..model.len()).map(|i| model.basis_function(i)).collect();
    let matrix = (0..group.order())
        .map(|x| cols.iter().map(|c| c[x].clone()).collect())
        .collect();
    Bridge {
        module,
        model,
        matrix,
    }
}

impl Bridge {
    pub fn forward(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        self.model.function(v)
    }

    pub fn backward(&self, f: &[CycloScalar]) -> Vec<CycloScalar> {
        self.model.coordinates(f)
    }

    /// Equivariance on generators and both roundtrips on basis vectors.
    pub fn check(&self) -> Result<()> {
        let g = self.module.group();
        let n = self.module.len();
        let modulus = self.module.modulus();
        let unit = |i: usize| {
            let mut v = vec![CycloScalar::zero(modulus); n];
            v[i] = CycloScalar::one(modulus);
            v
        };
        for a in g.generators_of(&g.whole()) {
            for i in 0..n {
                let lhs = self.forward(&self.module.act_on_vector(a, &unit(i)));
                let rhs = self.model.translate(a, &self.forward(&unit(i)));
                if lhs != rhs {
                    return Err(Error::InvariantViolation("bridge is not equivariant".into()));
                }
            }
        }
        for i in 0..n {
            if self.backward(&self.forward(&unit(i))) != unit(i) {
                return Err(Error::InvariantViolation("bridge roundtrip failed".into()));
            }
            let f = self.model.basis_function(i);
            if self.forward(&self.backward(&f)) != f {
                return Err(Error::InvariantViolation("inverse bridge roundtrip failed".into()));
            }
        }
        Ok(())
    }
}

/// One summand `Ind_{J∩zHz⁻¹}^J(φ_z)` of the double coset decomposition, `φ_z(l) = φ(z⁻¹lz)`.
#[derive(Clone, Debug)]
pub struct DoubleCosetSummand {
    pub z: usize,
    pub pair: CharPair,
    pub offset: usize,
}

/// `α: Res_J Ind_H^G(k_φ) → ⊕_z Ind_{J∩zHz⁻¹}^J(φ_z)` together with its inverse.
#[derive(Clone, Debug)]
pub struct DoubleCosetIso {
    pub summands: Vec<DoubleCosetSummand>,
    pub source: MonomialModule,
    pub target: MonomialModule,
    pub alpha: MonomialMorphism,
    pub alpha_inv: MonomialMorphism,
}

pub fn double_coset_formula(
    group: &Arc<FiniteGroup>,
    j: &Subgroup,
    p: &CharPair,
) -> Result<DoubleCosetIso> {
    let g = group.as_ref();
    let phi = p.character();
    let h = p.subgroup();
    let modulus = phi.modulus();
    let root = |e: u32| CycloScalar::root_of_unity(modulus, e as i64);
    let source = MonomialModule::induced(group, p).restrict(j)?;
    let src_cosets = g.left_cosets(h);

    let mut summands = Vec::new();
    let mut parts = Vec::new();
    let mut offset = 0;
    let dcs = g.double_cosets(j, h);
    for dc in &dcs {
        let z = dc.rep;
        let conj: Character = conj_character(g, g.inv(z), phi);
        let l = g.intersection(j, conj.domain());
        let pair = CharPair::new(conj.restrict(&l)?);
        let part = MonomialModule::induced_in(group, j, &pair);
        summands.push(DoubleCosetSummand { z, pair, offset });
        offset += part.len();
        parts.push(part);
    }
    let target = MonomialModule::direct_sum(&parts)?;
    let inner: Vec<CosetsWithin> = summands
        .iter()
        .map(|s| CosetsWithin::new(g, j, s.pair.subgroup()))
        .collect();

    let mut alpha = MonomialMorphism::zero(source.len(), target.len(), modulus);
    for (i, line) in source.lines().iter().enumerate() {
        let r = line.rep;
        let d = dcs
            .iter()
            .position(|dc| dc.elements.binary_search(&r).is_ok())
            .expect("double cosets cover the group");
        let s = &summands[d];
        let zinv = g.inv(s.z);
        let mut image: Option<(usize, u32)> = None;
        // every factorization r = j z h must give the same line and scalar
        for &jj in j.elements() {
            let hh = g.mul(zinv, g.mul(g.inv(jj), r));
            let Some(eh) = phi.exp_at(hh) else { continue };
            let (idx, l) = inner[d].split(jj);
            let el = s.pair.character().exp(l);
            let cand = (s.offset + idx, (eh + el) % modulus);
            match image {
                Some(prev) if prev != cand => {
                    return Err(Error::InvariantViolation(
                        "double coset map depends on the factorization".into(),
                    ));
                }
                _ => image = Some(cand),
            }
        }
        let (k, e) = image.expect("r lies in its double coset");
        alpha.add_entry(i, k, &root(e));
    }

    let mut alpha_inv = MonomialMorphism::zero(target.len(), source.len(), modulus);
    for (s, cos) in summands.iter().zip(&inner) {
        for (idx, &j0) in cos.reps().iter().enumerate() {
            let (k, hh) = src_cosets.split(g.mul(j0, s.z));
            alpha_inv.add_entry(s.offset + idx, k, &root(phi.exp(hh)));
        }
    }
    Ok(DoubleCosetIso {
        summands,
        source,
        target,
        alpha,
        alpha_inv,
    })
}

impl DoubleCosetIso {
    /// Mutually inverse, `J`-equivariant, and `Σ_z [J : J∩zHz⁻¹] = [G:H]`.
    pub fn check(&self) -> Result<()> {
        let n = self.source.len();
        let m = self.target.len();
        if n != m {
            return Err(Error::InvariantViolation("dimension count differs".into()));
        }
        let id = MonomialMorphism::identity(n, self.source.modulus());
        if self.alpha_inv.compose(&self.alpha)? != id || self.alpha.compose(&self.alpha_inv)? != id {
            return Err(Error::InvariantViolation("α and α⁻¹ are not inverse".into()));
        }
        if !self.alpha.is_equivariant(&self.source, &self.target)
            || !self.alpha_inv.is_equivariant(&self.target, &self.source)
        {
            return Err(Error::InvariantViolation("α is not J-equivariant".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::{central_characters, PairPoset};

    fn d8_poset(central: usize) -> Arc<PairPoset> {
        let g = Arc::new(FiniteGroup::builtin("d8").unwrap());
        let chi = central_characters(&g)[central].clone();
        Arc::new(PairPoset::new(g, chi).unwrap())
    }

    #[test]
    fn induced_modules_satisfy_axioms() {
        let poset = d8_poset(1);
        for p in poset.pairs() {
            let m = MonomialModule::induced(poset.group_arc(), p);
            m.check_axioms().unwrap();
            assert_eq!(m.len() * p.subgroup().order(), 8);
        }
    }

    #[test]
    fn whole_group_line_has_character_scalar() {
        let poset = d8_poset(0);
        let top = poset
            .pairs()
            .iter()
            .find(|p| p.subgroup().order() == 8 && p.character().exp(1) != 0 && p.character().exp(4) == 0)
            .unwrap();
        let m = MonomialModule::induced(poset.group_arc(), top);
        assert_eq!(m.len(), 1);
        assert_eq!(m.act(1, 0), (0, 2));
    }

    #[test]
    fn bridge_checks_out() {
        let poset = d8_poset(1);
        for p in poset.pairs() {
            tensor_function_bridge(poset.group_arc(), p).check().unwrap();
        }
    }
}
