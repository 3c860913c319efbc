//! Bar-monomial resolutions `… → M̃_{S,1} ⊗ S → M̃_{S,0} ⊗ S → V → 0`.
//!
//! A basis vector of `M̃_{S,i} ⊗ S` is `f ⊗ α₁ ⊗ … ⊗ αᵢ ⊗ ℓ` where `f` runs over the
//! concatenated bases of `V^(H,φ)` for the summands of `S`, each `α` over the canonical triples
//! between summands, and `ℓ` over the lines of `S`. Its index is
//! `((f·a + α₁)·a + … + αᵢ)·s + ℓ`.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::PairPoset;
use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};
use crate::hyperhecke::{HyperHecke, Triple};
use crate::linalg::{Matrix, SparseMatrix};
use crate::modp::{PrimeField, SparseModP};
use crate::monocentre::{monocentre_condition, valid_triples, MonoFamily};
use crate::monomial::{triple_morphism, MonomialModule};
use crate::rep::MatrixRep;

pub const DEFAULT_MAX_DIM: usize = 4000;
pub const DEFAULT_MAX_DEGREE: usize = 2;
const RANK_ATTEMPTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SMode {
    Full,
    Orbit,
}

impl SMode {
    /// Orbit representatives for groups of order above 4, every pair otherwise.
    pub fn default_for(order: usize) -> SMode {
        if order > 4 {
            SMode::Orbit
        } else {
            SMode::Full
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResolutionSpec {
    pub poset: Arc<PairPoset>,
    pub v: MatrixRep,
    pub s_mode: SMode,
    pub max_degree: usize,
    pub max_dim: usize,
    /// Lists the summands of `S` in reverse poset order.
    pub reversed: bool,
}

impl ResolutionSpec {
    pub fn new(poset: Arc<PairPoset>, v: MatrixRep) -> Self {
        let s_mode = SMode::default_for(poset.group().order());
        ResolutionSpec {
            poset,
            v,
            s_mode,
            max_degree: DEFAULT_MAX_DEGREE,
            max_dim: DEFAULT_MAX_DIM,
            reversed: false,
        }
    }

    pub fn with_mode(mut self, mode: SMode) -> Self {
        self.s_mode = mode;
        self
    }

    pub fn with_degree(mut self, d: usize) -> Self {
        self.max_degree = d;
        self
    }

    pub fn with_max_dim(mut self, n: usize) -> Self {
        self.max_dim = n;
        self
    }

    pub fn with_reversed(mut self, reversed: bool) -> Self {
        self.reversed = reversed;
        self
    }
}

/// Poset indices of the summands of `S`.
pub fn s_pairs(poset: &PairPoset, mode: SMode) -> Vec<usize> {
    match mode {
        SMode::Full => (0..poset.len()).collect(),
        SMode::Orbit => {
            let mut reps = poset.orbit_reps().to_vec();
            reps.sort_unstable();
            reps
        }
    }
}

/// `S = ⊕ Ind_H^G(k_φ)` over every pair, or over one pair per `G`-orbit.
pub fn build_s(poset: &PairPoset, mode: SMode) -> Result<MonomialModule> {
    let parts: Vec<MonomialModule> = s_pairs(poset, mode)
        .into_iter()
        .map(|p| MonomialModule::induced(poset.group_arc(), poset.pair(p)))
        .collect();
    MonomialModule::direct_sum(&parts)
}

/// A triple acting on the lines of `S`.
#[derive(Clone, Debug)]
struct TripleAction {
    source: usize,
    target: usize,
    /// Image of the `k`-th line of the source summand: a global line of `S` and a scalar.
    lines: Vec<(usize, CycloScalar)>,
}

#[derive(Debug)]
pub struct BarResolution {
    hh: HyperHecke,
    v: MatrixRep,
    mode: SMode,
    modulus: u32,
    pairs: Vec<usize>,
    s: MonomialModule,
    offsets: Vec<usize>,
    line_summand: Vec<usize>,
    line_pair: Vec<usize>,
    basis: Vec<Triple>,
    actions: Vec<TripleAction>,
    fixed: Vec<Matrix>,
    f_offsets: Vec<usize>,
    f_summand: Vec<usize>,
    /// `d0[α][b]`: coordinates of `f_(target, b)·V(α)` in the source summand's fixed-point basis.
    d0: Vec<Vec<Vec<(usize, CycloScalar)>>>,
    products: Vec<Vec<Option<(usize, CycloScalar)>>>,
    epsilon: SparseMatrix,
    differentials: Vec<SparseMatrix>,
}

fn term_dim_checked(h: usize, a: usize, s: usize, i: usize) -> Option<usize> {
    let mut n = h.checked_mul(s)?;
    for _ in 0..i {
        n = n.checked_mul(a)?;
    }
    Some(n)
}

fn accumulate(entries: Vec<(usize, CycloScalar)>, modulus: u32) -> BTreeMap<usize, CycloScalar> {
    let mut col: BTreeMap<usize, CycloScalar> = BTreeMap::new();
    for (i, c) in entries {
        *col.entry(i).or_insert_with(|| CycloScalar::zero(modulus)) += &c;
    }
    col.retain(|_, c| !c.is_zero());
    col
}

/// Stacked `ρ(h) − φ(h)` over generators `h` of `H`; its kernel is `V^(H,φ)`.
fn fixed_system(v: &MatrixRep, poset: &PairPoset, p: usize) -> Matrix {
    let g = poset.group();
    let phi = poset.pair(p).character();
    let mut system = Matrix::zero(0, v.dim(), v.modulus());
    for h in g.generators_of(phi.domain()) {
        let c = CycloScalar::root_of_unity(v.modulus(), phi.exp(h) as i64);
        let block = v
            .image(h)
            .sub(&Matrix::identity(v.dim(), v.modulus()).scale(&c))
            .expect("square blocks");
        system = system.vstack(&block).expect("same width");
    }
    system
}

pub fn build_resolution(spec: &ResolutionSpec) -> Result<BarResolution> {
    let poset = spec.poset.clone();
    let g = poset.group();
    let v = spec.v.clone();
    if v.group().order() != g.order() {
        return Err(Error::Precondition("representation and poset live on different groups".into()));
    }
    if !v.has_central_character(poset.central()) {
        return Err(Error::CentralCharacterMismatch(
            "V does not have the poset's central character".into(),
        ));
    }
    let hh = HyperHecke::new(poset.clone());
    let modulus = hh.exponent();
    if v.modulus() != modulus {
        return Err(Error::Precondition(format!(
            "representation modulus {} differs from {modulus}",
            v.modulus()
        )));
    }

    let mut pairs = s_pairs(&poset, spec.s_mode);
    if spec.reversed {
        pairs.reverse();
    }
    let parts: Vec<MonomialModule> = pairs
        .iter()
        .map(|&p| MonomialModule::induced(poset.group_arc(), poset.pair(p)))
        .collect();
    let s = MonomialModule::direct_sum(&parts)?;
    let mut offsets = Vec::with_capacity(parts.len());
    let mut line_summand = Vec::with_capacity(s.len());
    for (u, m) in parts.iter().enumerate() {
        offsets.push(line_summand.len());
        line_summand.extend(std::iter::repeat(u).take(m.len()));
    }
    let line_pair: Vec<usize> = s
        .lines()
        .iter()
        .map(|l| poset.index_of(&l.pair).expect("line pairs lie in the poset"))
        .collect();
    let summand_of: HashMap<usize, usize> = pairs.iter().enumerate().map(|(u, &p)| (p, u)).collect();

    let basis: Vec<Triple> = hh
        .basis()
        .iter()
        .filter(|t| summand_of.contains_key(&t.source) && summand_of.contains_key(&t.target))
        .copied()
        .collect();
    let basis_pos: HashMap<Triple, usize> = basis.iter().enumerate().map(|(i, &t)| (t, i)).collect();

    let fixed: Vec<Matrix> = pairs.iter().map(|&p| v.fixed_points(poset.pair(p))).collect();
    let mut f_offsets = vec![0];
    let mut f_summand = Vec::new();
    for (u, b) in fixed.iter().enumerate() {
        f_summand.extend(std::iter::repeat(u).take(b.cols()));
        f_offsets.push(f_summand.len());
    }
    let h = f_summand.len();
    let a = basis.len();
    let n_lines = s.len();

    for i in 0..=spec.max_degree {
        match term_dim_checked(h, a, n_lines, i) {
            Some(n) if n <= spec.max_dim => {}
            other => {
                return Err(Error::TooLarge {
                    what: format!("term {i} of the bar resolution"),
                    size: other.unwrap_or(usize::MAX),
                    limit: spec.max_dim,
                })
            }
        }
    }

    let mut actions = Vec::with_capacity(a);
    for t in &basis {
        let m = triple_morphism(&hh, t)?;
        let (src, tgt) = (summand_of[&t.source], summand_of[&t.target]);
        let lines = (0..m.source_len())
            .map(|k| {
                let (&j, c) = m.column(k).iter().next().expect("a triple maps lines to lines");
                (offsets[tgt] + j, c.clone())
            })
            .collect();
        actions.push(TripleAction {
            source: src,
            target: tgt,
            lines,
        });
    }

    let mut d0 = Vec::with_capacity(a);
    for act in &actions {
        let (line, c) = &act.lines[0];
        let image = v.image(s.lines()[*line].rep).scale(c);
        let src_basis = &fixed[act.source];
        let mut per_b = Vec::new();
        for b in 0..fixed[act.target].cols() {
            let w = image.apply(&fixed[act.target].column(b));
            if src_basis.cols() == 0 {
                if w.iter().any(|x| !x.is_zero()) {
                    return Err(Error::InvariantViolation(
                        "f·V(α) leaves the fixed points of the source".into(),
                    ));
                }
                per_b.push(Vec::new());
                continue;
            }
            let x = src_basis.solve(&w).map_err(|_| {
                Error::InvariantViolation("f·V(α) leaves the fixed points of the source".into())
            })?;
            per_b.push(
                x.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            );
        }
        d0.push(per_b);
    }

    let mut products = vec![vec![None; a]; a];
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            if let Some((e, t)) = hh.multiply_triples(x, y)? {
                let k = *basis_pos
                    .get(&t)
                    .ok_or_else(|| Error::InvariantViolation(format!("product {t:?} leaves A_S")))?;
                products[i][j] = Some((k, CycloScalar::root_of_unity(modulus, e as i64)));
            }
        }
    }

    let mut epsilon = SparseMatrix::zero(v.dim(), h * n_lines, modulus);
    for f in 0..h {
        let u = f_summand[f];
        let col = fixed[u].column(f - f_offsets[u]);
        for l in offsets[u]..offsets[u] + parts[u].len() {
            let w = v.image(s.lines()[l].rep).apply(&col);
            for (r, x) in w.iter().enumerate() {
                epsilon.add_entry(r, f * n_lines + l, x);
            }
        }
    }

    let mut res = BarResolution {
        hh,
        v,
        mode: spec.s_mode,
        modulus,
        pairs,
        s,
        offsets,
        line_summand,
        line_pair,
        basis,
        actions,
        fixed,
        f_offsets,
        f_summand,
        d0,
        products,
        epsilon,
        differentials: Vec::new(),
    };
    for i in 1..=spec.max_degree {
        let rows = res.term_dim(i - 1);
        let cols = res.term_dim(i);
        let mut d = SparseMatrix::zero(rows, cols, modulus);
        for c in 0..cols {
            d.set_column(c, accumulate(res.faces(i, c), modulus));
        }
        res.differentials.push(d);
    }
    Ok(res)
}

impl BarResolution {
    pub fn hyperhecke(&self) -> &HyperHecke {
        &self.hh
    }

    pub fn poset(&self) -> &PairPoset {
        self.hh.poset()
    }

    pub fn rep(&self) -> &MatrixRep {
        &self.v
    }

    pub fn mode(&self) -> SMode {
        self.mode
    }

    pub fn s_module(&self) -> &MonomialModule {
        &self.s
    }

    /// Poset index of each summand of `S`.
    pub fn index_pairs(&self) -> &[usize] {
        &self.pairs
    }

    pub fn as_basis(&self) -> &[Triple] {
        &self.basis
    }

    /// `Σ dim V^(H,φ)` over the summands of `S`.
    pub fn h(&self) -> usize {
        self.f_summand.len()
    }

    pub fn a(&self) -> usize {
        self.basis.len()
    }

    pub fn s(&self) -> usize {
        self.s.len()
    }

    pub fn max_degree(&self) -> usize {
        self.differentials.len()
    }

    pub fn term_dim(&self, i: usize) -> usize {
        self.h() * self.a().pow(i as u32) * self.s()
    }

    pub fn term_dims(&self) -> Vec<usize> {
        (0..=self.max_degree()).map(|i| self.term_dim(i)).collect()
    }

    /// `d : term_i → term_{i-1}` for `1 ≤ i ≤ max_degree`.
    pub fn differential(&self, i: usize) -> &SparseMatrix {
        &self.differentials[i - 1]
    }

    /// `ε : term_0 → V`.
    pub fn epsilon(&self) -> &SparseMatrix {
        &self.epsilon
    }

    /// Basis of `V^(H,φ)` for summand `u`, as columns.
    pub fn fixed_basis(&self, u: usize) -> &Matrix {
        &self.fixed[u]
    }

    pub fn decode(&self, i: usize, c: usize) -> (usize, Vec<usize>, usize) {
        let (a, s) = (self.a(), self.s());
        let line = c % s;
        let mut rest = c / s;
        let mut alphas = vec![0; i];
        for k in (0..i).rev() {
            alphas[k] = rest % a;
            rest /= a;
        }
        (rest, alphas, line)
    }

    pub fn encode(&self, f: usize, alphas: &[usize], line: usize) -> usize {
        let a = self.a();
        alphas.iter().fold(f, |acc, &x| acc * a + x) * self.s() + line
    }

    /// `Σ_j (-1)^j d_j` applied to basis vector `c` of term `i`, before collecting terms.
    fn faces(&self, i: usize, c: usize) -> Vec<(usize, CycloScalar)> {
        let (f, alphas, line) = self.decode(i, c);
        let mut out = Vec::new();
        let signed = |j: usize, x: CycloScalar| if j % 2 == 0 { x } else { -x };

        let first = &self.actions[alphas[0]];
        let u = self.f_summand[f];
        if first.target == u {
            for (b, x) in &self.d0[alphas[0]][f - self.f_offsets[u]] {
                let f2 = self.f_offsets[first.source] + b;
                out.push((self.encode(f2, &alphas[1..], line), x.clone()));
            }
        }
        for j in 1..i {
            if let Some((k, x)) = &self.products[alphas[j - 1]][alphas[j]] {
                let mut merged = Vec::with_capacity(i - 1);
                merged.extend_from_slice(&alphas[..j - 1]);
                merged.push(*k);
                merged.extend_from_slice(&alphas[j + 1..]);
                out.push((self.encode(f, &merged, line), signed(j, x.clone())));
            }
        }
        let last = &self.actions[alphas[i - 1]];
        if self.line_summand[line] == last.source {
            let (l2, x) = &last.lines[line - self.offsets[last.source]];
            out.push((self.encode(f, &alphas[..i - 1], *l2), signed(i, x.clone())));
        }
        out
    }

    /// Indices in term `i` whose line lies in `S^((p))`.
    pub fn lineable_indices(&self, i: usize, p: usize) -> Vec<usize> {
        let poset = self.poset();
        let s = self.s();
        let lines: Vec<usize> = (0..s).filter(|&l| poset.leq(p, self.line_pair[l])).collect();
        (0..self.term_dim(i) / s)
            .flat_map(|base| lines.iter().map(move |&l| base * s + l))
            .collect()
    }

    /// `ε∘d₁ = 0` and `dᵢ∘dᵢ₊₁ = 0` through `degree`, exactly.
    pub fn d_squared_zero(&self, degree: usize) -> Result<bool> {
        let degree = degree.min(self.max_degree());
        if degree >= 1 && !self.epsilon.mul(self.differential(1))?.is_zero() {
            return Ok(false);
        }
        for i in 1..degree {
            if !self.differential(i).mul(self.differential(i + 1))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every `dᵢ` maps lineable fixed points to lineable fixed points and `ε` maps them into `V^(H,φ)`.
    pub fn morphism_condition(&self, degree: usize) -> bool {
        let degree = degree.min(self.max_degree());
        let poset = self.poset();
        (0..poset.len()).all(|p| {
            let sel: Vec<Vec<usize>> = (0..=degree).map(|i| self.lineable_indices(i, p)).collect();
            let system = fixed_system(&self.v, poset, p);
            let eps_ok = sel[0].iter().all(|&c| {
                let mut w = vec![CycloScalar::zero(self.modulus); self.v.dim()];
                for (&r, x) in self.epsilon.column(c) {
                    w[r] = x.clone();
                }
                system.apply(&w).iter().all(CycloScalar::is_zero)
            });
            eps_ok
                && (1..=degree).all(|i| !self.differential(i).leaks_outside(&sel[i - 1], &sel[i]))
        })
    }

    /// Zeroes the first nonzero entry of `dᵢ` (`ε` when `i = 0`); false if there was none.
    pub fn corrupt_entry(&mut self, i: usize) -> bool {
        let m = if i == 0 {
            &mut self.epsilon
        } else {
            &mut self.differentials[i - 1]
        };
        for c in 0..m.ncols() {
            if let Some(&r) = m.column(c).keys().next() {
                let mut col = m.column(c).clone();
                col.remove(&r);
                m.set_column(c, col);
                return true;
            }
        }
        false
    }

    /// Exactness of `term_d^((p)) → … → term_0^((p)) → V^(p) → 0` at `V^(p)` and at
    /// `term_0, …, term_{d-1}`, for every pair `p` of the poset.
    ///
    /// Ranks are computed modulo primes `p ≡ 1 (mod N)` after a random projection, so each is a
    /// lower bound on the true rank. With `d∘d = 0` and the morphism condition verified exactly,
    /// lower bounds meeting `rank dᵢ₊₁ + rank dᵢ = dim termᵢ` certify exactness.
    pub fn check_monomial_resolution(&self, degree: usize, seed: u64) -> Result<ExactnessReport> {
        if degree > self.max_degree() {
            return Err(Error::Precondition(format!(
                "exactness through degree {degree} needs d_{degree}, built only through {}",
                self.max_degree()
            )));
        }
        let d_squared_zero = self.d_squared_zero(degree)?;
        let morphisms = self.morphism_condition(degree);
        let poset = self.poset();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs: Vec<PairExactness> = (0..poset.len())
            .map(|p| {
                let fixed_dim = self.v.fixed_points(poset.pair(p)).cols();
                let lines = (0..self.s()).filter(|&l| poset.leq(p, self.line_pair[l])).count();
                let dims: Vec<usize> = (0..=degree).map(|i| self.term_dim(i) / self.s() * lines).collect();
                PairExactness {
                    pair: p,
                    fixed_dim,
                    lines,
                    dims,
                    ranks: vec![0; degree + 1],
                    exact: vec![false; degree + 1],
                    all_exact: false,
                }
            })
            .collect();
        let mut primes = Vec::new();
        for _ in 0..RANK_ATTEMPTS {
            if pairs.iter().all(|r| r.certified()) {
                break;
            }
            let field = PrimeField::random(self.modulus, &mut rng);
            let Some(eps) = self.epsilon.reduce(&field) else {
                continue;
            };
            let mut ds = Vec::with_capacity(degree);
            for i in 1..=degree {
                match self.differential(i).reduce(&field) {
                    Some(m) => ds.push(m),
                    None => break,
                }
            }
            if ds.len() < degree {
                continue;
            }
            primes.push(field.p);
            let all_rows: Vec<usize> = (0..self.v.dim()).collect();
            for report in pairs.iter_mut().filter(|r| !r.certified()) {
                let sel: Vec<Vec<usize>> = (0..=degree).map(|i| self.lineable_indices(i, report.pair)).collect();
                let mut ranks = vec![projected(&eps.submatrix(&all_rows, &sel[0]), &field, &mut rng)];
                for i in 1..=degree {
                    ranks.push(projected(&ds[i - 1].submatrix(&sel[i - 1], &sel[i]), &field, &mut rng));
                }
                for (best, r) in report.ranks.iter_mut().zip(ranks) {
                    *best = (*best).max(r);
                }
                report.settle();
            }
        }
        for r in pairs.iter_mut() {
            if !(d_squared_zero && morphisms) {
                r.exact.iter_mut().for_each(|e| *e = false);
                r.all_exact = false;
            }
        }
        let exact = d_squared_zero && morphisms && pairs.iter().all(|r| r.all_exact);
        Ok(ExactnessReport {
            mode: self.mode,
            h: self.h(),
            a: self.a(),
            s: self.s(),
            term_dims: self.term_dims(),
            through_degree: degree,
            d_squared_zero,
            morphisms,
            primes,
            pairs,
            exact,
        })
    }

    /// `θ = ⊕ [(H,φ), x_(H,φ), (H,φ)]` on `S`.
    fn family_on_s(&self, fam: &MonoFamily) -> Result<SparseMatrix> {
        let mut theta = SparseMatrix::zero(self.s(), self.s(), self.modulus);
        for (u, &q) in self.pairs.iter().enumerate() {
            let m = triple_morphism(&self.hh, &Triple::new(q, fam.rep(q), q))?;
            for k in 0..m.source_len() {
                for (&j, x) in m.column(k) {
                    theta.add_entry(self.offsets[u] + j, self.offsets[u] + k, x);
                }
            }
        }
        Ok(theta)
    }

    /// `1 ⊗ θ` on term `i`.
    fn lift_to_term(&self, theta: &SparseMatrix, i: usize) -> SparseMatrix {
        let s = self.s();
        let n = self.term_dim(i);
        let mut out = SparseMatrix::zero(n, n, self.modulus);
        for c in 0..n {
            let base = c - c % s;
            out.set_column(
                c,
                theta.column(c % s).iter().map(|(&l, x)| (base + l, x.clone())).collect(),
            );
        }
        out
    }

    /// The chain endomorphism `1 ⊗ θ` of a monocentre family, with its commuting squares
    /// through `degree` and the endomorphism it induces on `V`.
    pub fn monocentre_chain_map(&self, fam: &MonoFamily, degree: usize) -> Result<ChainMapReport> {
        if degree > self.max_degree() {
            return Err(Error::Precondition(format!(
                "chain map through degree {degree} needs d_{degree}"
            )));
        }
        let poset = self.poset();
        if fam.len() != poset.len() {
            return Err(Error::FamilyNotInMonocentre("family has the wrong number of pairs".into()));
        }
        for t in valid_triples(&self.hh) {
            if !monocentre_condition(&self.hh, &t, fam.coset(t.source), fam.coset(t.target))? {
                return Err(Error::FamilyNotInMonocentre(format!("condition fails on {t:?}")));
            }
        }
        let theta = self.family_on_s(fam)?;
        let lifted: Vec<SparseMatrix> = (0..=degree).map(|i| self.lift_to_term(&theta, i)).collect();
        let mut squares = Vec::with_capacity(degree);
        for i in 1..=degree {
            let d = self.differential(i);
            squares.push(d.mul(&lifted[i])? == lifted[i - 1].mul(d)?);
        }

        let eps = self.epsilon.to_dense();
        let target = self.epsilon.mul(&lifted[0])?.to_dense();
        let eps_t = eps.transpose();
        let dim = self.v.dim();
        let mut rows = Vec::with_capacity(dim);
        for r in 0..dim {
            match eps_t.solve(target.row(r)) {
                Ok(x) => rows.push(x),
                Err(Error::Inconsistent) => break,
                Err(e) => return Err(e),
            }
        }
        let induced = if rows.len() == dim {
            Some(Matrix::from_rows(rows, dim, self.modulus)?)
        } else {
            None
        };
        let scalar = induced.as_ref().and_then(|m| {
            let c = if dim == 0 {
                CycloScalar::one(self.modulus)
            } else {
                m.get(0, 0).clone()
            };
            (*m == Matrix::identity(dim, self.modulus).scale(&c)).then_some(c)
        });
        Ok(ChainMapReport {
            through_degree: degree,
            squares,
            augmentation: induced.is_some(),
            induced,
            scalar,
        })
    }
}

fn projected(m: &SparseModP, f: &PrimeField, rng: &mut ChaCha8Rng) -> usize {
    m.projected_rank(m.nrows.min(m.cols.len()), f, rng)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairExactness {
    pub pair: usize,
    pub fixed_dim: usize,
    /// Lines of `S` whose pair lies above this one.
    pub lines: usize,
    /// `dim term_i^((p))` for `i = 0..=d`.
    pub dims: Vec<usize>,
    /// Certified lower bounds on the ranks of `ε, d₁, …, d_d`.
    pub ranks: Vec<usize>,
    /// Exactness at `V^(p)`, `term_0`, …, `term_{d-1}`.
    pub exact: Vec<bool>,
    pub all_exact: bool,
}

impl PairExactness {
    fn settle(&mut self) {
        let d = self.dims.len() - 1;
        self.exact[0] = self.ranks[0] == self.fixed_dim;
        for i in 0..d {
            self.exact[i + 1] = self.ranks[i + 1] + self.ranks[i] == self.dims[i];
        }
        self.all_exact = self.exact.iter().all(|&e| e);
    }

    fn certified(&self) -> bool {
        self.all_exact
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub mode: SMode,
    pub h: usize,
    pub a: usize,
    pub s: usize,
    pub term_dims: Vec<usize>,
    pub through_degree: usize,
    pub d_squared_zero: bool,
    pub morphisms: bool,
    pub primes: Vec<u64>,
    pub pairs: Vec<PairExactness>,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct ChainMapReport {
    pub through_degree: usize,
    /// `dᵢ∘Θᵢ = Θᵢ₋₁∘dᵢ` for `i = 1..=degree`.
    pub squares: Vec<bool>,
    /// Some `T` with `ε∘Θ₀ = T∘ε` exists.
    pub augmentation: bool,
    pub induced: Option<Matrix>,
    pub scalar: Option<CycloScalar>,
}

impl ChainMapReport {
    pub fn commutes(&self) -> bool {
        self.augmentation && self.squares.iter().all(|&b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::central_characters;
    use crate::group::FiniteGroup;

    fn setup(name: &str, central: usize) -> (Arc<FiniteGroup>, Arc<PairPoset>) {
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        let c = central_characters(&g).remove(central);
        let poset = Arc::new(PairPoset::new(g.clone(), c).unwrap());
        (g, poset)
    }

    #[test]
    fn c2_trivial_terms_are_one_dimensional() {
        let (g, poset) = setup("c2", 0);
        let r = build_resolution(&ResolutionSpec::new(poset, MatrixRep::trivial(&g))).unwrap();
        assert_eq!((r.h(), r.a(), r.s()), (1, 1, 1));
        assert_eq!(r.term_dims(), vec![1, 1, 1]);
        assert!(r.differential(1).is_zero());
        let report = r.check_monomial_resolution(2, 1).unwrap();
        assert!(report.exact, "{report:?}");
    }

    #[test]
    fn corrupted_differential_is_flagged() {
        let (g, poset) = setup("c2", 0);
        let mut r = build_resolution(&ResolutionSpec::new(poset, MatrixRep::trivial(&g))).unwrap();
        assert!(r.corrupt_entry(2));
        assert!(!r.check_monomial_resolution(2, 1).unwrap().exact);
    }

    #[test]
    fn d8_full_s_has_twenty_lines() {
        let (_, poset) = setup("d8", 0);
        assert_eq!(build_s(&poset, SMode::Full).unwrap().len(), 20);
        assert!(build_s(&poset, SMode::Orbit).unwrap().len() <= 20);
    }

    #[test]
    fn guard_reports_the_dimension() {
        let (g, poset) = setup("s3", 0);
        let v = crate::rep::irreducibles(&g).unwrap().remove(2);
        match build_resolution(&ResolutionSpec::new(poset, v)) {
            Err(Error::TooLarge { size, limit, .. }) => {
                assert_eq!(limit, DEFAULT_MAX_DIM);
                assert!(size > limit);
            }
            other => panic!("expected TooLarge, got {other:?}"),
        }
    }
}
