//! Matrix representations over `Q(ζ_E)` and their eigenspace fixed points.

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use crate::character::{characters, CharPair, Character};
use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::monomial::MonomialModule;

#[derive(Clone, Debug)]
pub struct MatrixRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    modulus: u32,
    images: Vec<Matrix>,
}

impl MatrixRep {
    /// Extends images of generators to the whole group; fails if the assignment is not a homomorphism.
    pub fn from_generators(group: &Arc<FiniteGroup>, dim: usize, gens: &[(usize, Matrix)]) -> Result<Self> {
        let g = group.as_ref();
        let modulus = g.exponent() as u32;
        for (a, m) in gens {
            if *a >= g.order() || m.rows() != dim || m.cols() != dim {
                return Err(Error::Precondition(format!("bad image for element {a}")));
            }
        }
        let mut images: Vec<Option<Matrix>> = vec![None; g.order()];
        images[0] = Some(Matrix::identity(dim, modulus));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (a, m) in gens {
                let xa = g.mul(x, *a);
                let img = images[x].as_ref().expect("visited").mul(m)?;
                match &images[xa] {
                    Some(prev) if *prev != img => {
                        return Err(Error::Precondition(
                            "generator images do not define a homomorphism".into(),
                        ));
                    }
                    Some(_) => {}
                    None => {
                        images[xa] = Some(img);
                        queue.push_back(xa);
                    }
                }
            }
        }
        let images: Option<Vec<Matrix>> = images.into_iter().collect();
        let images = images.ok_or_else(|| {
            Error::Precondition("generator images do not reach the whole group".into())
        })?;
        Ok(MatrixRep {
            group: group.clone(),
            dim,
            modulus,
            images,
        })
    }

    pub fn from_images(group: &Arc<FiniteGroup>, images: Vec<Matrix>) -> Result<Self> {
        let g = group.as_ref();
        let dim = images.first().map_or(0, Matrix::rows);
        if images.len() != g.order() {
            return Err(Error::Precondition("one image per element is required".into()));
        }
        let gens: Vec<(usize, Matrix)> = g
            .generators_of(&g.whole())
            .into_iter()
            .map(|a| (a, images[a].clone()))
            .collect();
        let rep = MatrixRep::from_generators(group, dim, &gens)?;
        if rep.images != images {
            return Err(Error::Precondition("images are not a homomorphism".into()));
        }
        Ok(rep)
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        let modulus = group.exponent() as u32;
        MatrixRep {
            group: group.clone(),
            dim: 1,
            modulus,
            images: vec![Matrix::identity(1, modulus); group.order()],
        }
    }

    /// `k_χ` for a character `χ` of the whole group.
    pub fn one_dim(group: &Arc<FiniteGroup>, chi: &Character) -> Result<Self> {
        if chi.domain() != &group.whole() {
            return Err(Error::Precondition("character must be defined on the whole group".into()));
        }
        let modulus = chi.modulus();
        let images = (0..group.order())
            .map(|x| {
                let mut m = Matrix::zero(1, 1, modulus);
                m.set(0, 0, CycloScalar::root_of_unity(modulus, chi.exp(x) as i64));
                m
            })
            .collect();
        Ok(MatrixRep {
            group: group.clone(),
            dim: 1,
            modulus,
            images,
        })
    }

    /// The monomial module as a matrix representation in its line basis.
    pub fn from_monomial(m: &MonomialModule) -> Result<Self> {
        let group = m.group();
        if m.acting() != &group.whole() {
            return Err(Error::Precondition("module must be over the whole group".into()));
        }
        let n = m.len();
        let images = (0..group.order())
            .map(|x| {
                let mut mat = Matrix::zero(n, n, m.modulus());
                for i in 0..n {
                    let (j, e) = m.act(x, i);
                    mat.set(j, i, CycloScalar::root_of_unity(m.modulus(), e as i64));
                }
                mat
            })
            .collect();
        Ok(MatrixRep {
            group: group.clone(),
            dim: n,
            modulus: m.modulus(),
            images,
        })
    }

    /// The `φ̄`-isotypic part of the regular representation, `Ind_{Z(G)}^G(k_φ̄)`.
    pub fn regular_isotypic(group: &Arc<FiniteGroup>, central: &Character) -> Result<Self> {
        MatrixRep::from_monomial(&MonomialModule::induced(group, &CharPair::new(central.clone())))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn image(&self, g: usize) -> &Matrix {
        &self.images[g]
    }

    pub fn character(&self, g: usize) -> CycloScalar {
        self.images[g].trace()
    }

    /// `ρ̂(g) = ρ(g⁻¹)ᵀ`.
    pub fn contragredient(&self) -> Self {
        let g = self.group.as_ref();
        MatrixRep {
            images: (0..g.order())
                .map(|x| self.images[g.inv(x)].transpose())
                .collect(),
            ..self.clone()
        }
    }

    pub fn direct_sum(&self, other: &MatrixRep) -> Result<Self> {
        if !Arc::ptr_eq(&self.group, &other.group) && self.group.table() != other.group.table() {
            return Err(Error::Precondition("representations of different groups".into()));
        }
        let d = self.dim + other.dim;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut m = Matrix::zero(d, d, self.modulus);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m.set(self.dim + i, self.dim + j, b.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Ok(MatrixRep {
            dim: d,
            images,
            ..self.clone()
        })
    }

    /// `ρ(1) = I` and `ρ(g)ρ(h) = ρ(gh)` for all pairs.
    pub fn check_homomorphism(&self) -> Result<()> {
        let g = self.group.as_ref();
        if self.images[0] != Matrix::identity(self.dim, self.modulus) {
            return Err(Error::InvariantViolation("identity is not sent to I".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.images[a].mul(&self.images[b])? != self.images[g.mul(a, b)] {
                    return Err(Error::InvariantViolation(format!(
                        "ρ({a})ρ({b}) differs from ρ({a}·{b})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ρ(z) = φ̄(z)·I` on the centre.
    pub fn has_central_character(&self, central: &Character) -> bool {
        central.domain().elements().iter().all(|&z| {
            let c = CycloScalar::root_of_unity(central.modulus(), central.exp(z) as i64);
            self.images[z] == Matrix::identity(self.dim, self.modulus).scale(&c)
        })
    }

    /// Basis (as columns) of `V^(H,φ) = {v : ρ(h)v = φ(h)v for h ∈ H}`.
    pub fn fixed_points(&self, p: &CharPair) -> Matrix {
        let g = self.group.as_ref();
        let phi = p.character();
        let mut system = Matrix::zero(0, self.dim, self.modulus);
        for h in g.generators_of(p.subgroup()) {
            let c = CycloScalar::root_of_unity(phi.modulus(), phi.exp(h) as i64);
            let block = self.images[h]
                .sub(&Matrix::identity(self.dim, self.modulus).scale(&c))
                .expect("square blocks");
            system = system.vstack(&block).expect("same width");
        }
        system.kernel()
    }

    /// `(1/|G|) Σ χ(g) conj(χ'(g))`.
    pub fn inner_product(&self, other: &MatrixRep) -> CycloScalar {
        let n = self.group.order();
        let mut acc = CycloScalar::zero(self.modulus);
        for x in 0..n {
            acc += &self.character(x).mul_ref(&other.character(x).conj());
        }
        acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(n as i64)))
    }

    pub fn is_irreducible(&self) -> bool {
        self.inner_product(self).is_one()
    }

    /// `dim Hom_G(self, other)`.
    pub fn intertwiner_dim(&self, other: &MatrixRep) -> Result<usize> {
        self.intertwiner_dim_supported(other, |_, _| true)
    }

    /// Dimension of `{X : ρ'(g)X = Xρ(g)}` with `X[i][j] = 0` whenever `allowed(i, j)` is false.
    pub fn intertwiner_dim_supported(
        &self,
        other: &MatrixRep,
        allowed: impl Fn(usize, usize) -> bool,
    ) -> Result<usize> {
        let (ds, dt) = (self.dim, other.dim);
        let nvars = ds * dt;
        if nvars == 0 {
            return Ok(0);
        }
        let var = |i: usize, j: usize| i * ds + j;
        let g = self.group.as_ref();
        let mut rows: Vec<Vec<CycloScalar>> = Vec::new();
        let zero = CycloScalar::zero(self.modulus);
        for a in g.generators_of(&g.whole()) {
            let (ra, ta) = (&self.images[a], &other.images[a]);
            for i in 0..dt {
                for j in 0..ds {
                    let mut row = vec![zero.clone(); nvars];
                    for k in 0..dt {
                        let c = ta.get(i, k);
                        if !c.is_zero() {
                            row[var(k, j)] += c;
                        }
                    }
                    for k in 0..ds {
                        let c = ra.get(k, j);
                        if !c.is_zero() {
                            row[var(i, k)] = row[var(i, k)].sub_ref(c);
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        for i in 0..dt {
            for j in 0..ds {
                if !allowed(i, j) {
                    let mut row = vec![zero.clone(); nvars];
                    row[var(i, j)] = CycloScalar::one(self.modulus);
                    rows.push(row);
                }
            }
        }
        let system = Matrix::from_rows(rows, nvars, self.modulus)?;
        Ok(nvars - system.rank())
    }

    /// Reads `{"dim": d, "images": {"elem": [[scalar,..],..], ..}}`; unlisted elements follow by closure.
    pub fn from_json(group: &Arc<FiniteGroup>, v: &Value) -> Result<Self> {
        let modulus = group.exponent() as u32;
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("representation needs an integer \"dim\"".into()))?
            as usize;
        let images = v
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("representation needs an \"images\" object".into()))?;
        let mut gens = Vec::new();
        for (k, m) in images {
            let a: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad element index {k:?}")))?;
            let rows = m
                .as_array()
                .ok_or_else(|| Error::Parse(format!("image of {a} must be a matrix")))?;
            let mut parsed = Vec::new();
            for r in rows {
                let r = r
                    .as_array()
                    .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
                let row: Result<Vec<CycloScalar>> = r
                    .iter()
                    .map(|x| CycloScalar::from_json(x, modulus).map(|s| to_modulus(&s, modulus)))
                    .collect::<Result<Vec<_>>>()
                    .and_then(|row| row.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
                        Error::Parse("entry conductor does not divide the group exponent".into())
                    }));
                parsed.push(row?);
            }
            let mat = Matrix::from_rows(parsed, dim, modulus)
                .map_err(|_| Error::Parse(format!("image of {a} is not {dim}x{dim}")))?;
            if mat.rows() != dim {
                return Err(Error::Parse(format!("image of {a} is not {dim}x{dim}")));
            }
            gens.push((a, mat));
        }
        MatrixRep::from_generators(group, dim, &gens).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `x` re-expressed in `Q(ζ_m)`: a lift when the conductor divides `m`, or a root of unity of order dividing `m`.
fn to_modulus(x: &CycloScalar, m: u32) -> Option<CycloScalar> {
    let n = x.conductor();
    if m % n == 0 {
        return Some(x.lift(m));
    }
    let (c, j) = x.as_root_of_unity()?;
    (m % c == 0).then(|| CycloScalar::root_of_unity(m, (j * (m / c)) as i64))
}

/// `dim Hom_G(Ind_H^G(k_φ), V)` and `dim V^(H,φ)`, computed independently.
pub fn frobenius_reciprocity_check(p: &CharPair, v: &MatrixRep) -> Result<(usize, usize)> {
    let g = v.group();
    let z = g.center();
    if !z.is_subset_of(p.subgroup()) {
        return Err(Error::Precondition("pair must contain the centre".into()));
    }
    let central = p.character().restrict(&z)?;
    if !v.has_central_character(&central) {
        return Err(Error::CentralCharacterMismatch(
            "representation does not have the pair's central character".into(),
        ));
    }
    let ind = MatrixRep::from_monomial(&MonomialModule::induced(g, p))?;
    Ok((ind.intertwiner_dim(v)?, v.fixed_points(p).cols()))
}

/// Irreducibles obtained as `Ind_H^G(k_φ)` (one-dimensional ones first), ordered by dimension
/// and then by first appearance over subgroups from the largest down.
pub fn irreducibles(group: &Arc<FiniteGroup>) -> Result<Vec<MatrixRep>> {
    let g = group.as_ref();
    let n = g.order();
    let mut subs = g.all_subgroups()?;
    subs.reverse();
    let mut found: Vec<(Vec<CycloScalar>, MonomialModule)> = Vec::new();
    let mut total = 0;
    for h in subs {
        let index = n / h.order();
        if index * index > n {
            continue;
        }
        for chi in characters(g, &h) {
            let m = MonomialModule::induced(group, &CharPair::new(chi));
            let ch = monomial_character(&m);
            let norm = character_norm(&ch, g);
            if !norm.is_one() || found.iter().any(|(c, _)| *c == ch) {
                continue;
            }
            total += index * index;
            found.push((ch, m));
        }
        if total == n {
            break;
        }
    }
    let mut reps: Vec<MatrixRep> = found
        .iter()
        .map(|(_, m)| MatrixRep::from_monomial(m))
        .collect::<Result<_>>()?;
    reps.sort_by_key(MatrixRep::dim);
    Ok(reps)
}

fn monomial_character(m: &MonomialModule) -> Vec<CycloScalar> {
    let g = m.group();
    (0..g.order())
        .map(|x| {
            let mut acc = CycloScalar::zero(m.modulus());
            for i in 0..m.len() {
                let (j, e) = m.act(x, i);
                if j == i {
                    acc += &CycloScalar::root_of_unity(m.modulus(), e as i64);
                }
            }
            acc
        })
        .collect()
}

fn character_norm(ch: &[CycloScalar], g: &FiniteGroup) -> CycloScalar {
    let mut acc = CycloScalar::zero(ch[0].conductor());
    for c in ch {
        acc += &c.mul_ref(&c.conj());
    }
    acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(g.order() as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::central_characters;

    #[test]
    fn s3_catalog() {
        let g = Arc::new(FiniteGroup::builtin("s3").unwrap());
        let irr = irreducibles(&g).unwrap();
        let dims: Vec<usize> = irr.iter().map(MatrixRep::dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        for r in &irr {
            r.check_homomorphism().unwrap();
            assert!(r.is_irreducible());
        }
    }

    #[test]
    fn regular_c2_splits() {
        let g = Arc::new(FiniteGroup::builtin("c2").unwrap());
        let triv = CharPair::new(Character::trivial(g.trivial_subgroup(), 2));
        let reg = MatrixRep::from_monomial(&MonomialModule::induced(&g, &triv)).unwrap();
        for chi in characters(&g, &g.whole()) {
            assert_eq!(reg.fixed_points(&CharPair::new(chi)).cols(), 1);
        }
        assert_eq!(central_characters(&g).len(), 2);
    }
}
