//! Finite groups stored as full Cayley tables.
//!
//! Elements are the indices `0..n`; the identity is always `0`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_integer::Integer;
use serde::Deserialize;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 10_000;
/// Largest group order for which the subgroup lattice is enumerated.
pub const MAX_LATTICE_ORDER: usize = 256;
pub const MAX_SUBGROUP_COUNT: usize = 20_000;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u16>,
    inverse: Vec<usize>,
    element_order: Vec<usize>,
    exponent: usize,
}

/// A subgroup, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements
            .len()
            .cmp(&other.elements.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    /// Wraps an element list without checking closure.
    pub(crate) fn from_sorted_unchecked(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.len() <= other.elements.len()
            && self.elements.iter().all(|&g| other.contains(g))
    }

    /// Position of `g` inside the sorted element list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }
}

/// Left cosets `gH` with minimal-index representatives.
#[derive(Clone, Debug)]
pub struct LeftCosets {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    factor: Vec<usize>,
}

impl LeftCosets {
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the coset containing `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Returns `(i, h)` with `g = reps[i] * h`.
    pub fn split(&self, g: usize) -> (usize, usize) {
        (self.coset_of[g], self.factor[g])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub rep: usize,
    pub elements: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupJson {
    Table {
        #[serde(default)]
        name: String,
        order: usize,
        table: Vec<Vec<usize>>,
    },
    Perms {
        #[serde(default)]
        name: String,
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

impl FiniteGroup {
    pub fn from_cayley_table(table: &[Vec<usize>], name: &str) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::too_large("group order", n, MAX_ORDER));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::NotAGroup(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x as u16);
            }
        }
        for i in 0..n {
            if flat[i] as usize != i || flat[i * n] as usize != i {
                return Err(Error::NotAGroup("element 0 is not the identity".into()));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let x = flat[i * n + j] as usize;
                if seen[x] == i {
                    return Err(Error::NotAGroup(format!("row {i} is not a permutation")));
                }
                seen[x] = i;
            }
        }
        let mut seen = vec![usize::MAX; n];
        for j in 0..n {
            for i in 0..n {
                let x = flat[i * n + j] as usize;
                if seen[x] == j {
                    return Err(Error::NotAGroup(format!("column {j} is not a permutation")));
                }
                seen[x] = j;
            }
        }
        let mul = |a: usize, b: usize| flat[a * n + b] as usize;
        // Light's test over a set whose left-normed products reach every element.
        let gens = right_generating_set(n, &mul);
        for &a in &gens {
            for x in 0..n {
                let xa = mul(x, a);
                for y in 0..n {
                    if mul(xa, y) != mul(x, mul(a, y)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({x}, {a}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(Self::from_flat(flat, n, name))
    }

    fn from_flat(table: Vec<u16>, n: usize, name: &str) -> Self {
        let mut inverse = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverse[a] = b;
                    break;
                }
            }
        }
        let mut element_order = vec![1; n];
        for (a, slot) in element_order.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            *slot = k;
        }
        let exponent = element_order.iter().fold(1usize, |acc, &o| acc.lcm(&o));
        FiniteGroup {
            name: name.to_string(),
            order: n,
            table,
            inverse,
            element_order,
            exponent,
        }
    }

    /// Builds the group generated by permutations of `0..degree`, given as image lists.
    ///
    /// Elements are sorted lexicographically by image list, so the identity is element 0.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], name: &str) -> Result<Self> {
        for (i, p) in generators.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::Parse(format!("generator {i} has length {}", p.len())));
            }
            let mut hit = vec![false; degree];
            for &x in p {
                if x >= degree || hit[x] {
                    return Err(Error::Parse(format!("generator {i} is not a permutation")));
                }
                hit[x] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut perms = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let prod = compose(&perms[i], g);
                if !index.contains_key(&prod) {
                    if perms.len() >= MAX_ORDER {
                        return Err(Error::too_large("group order", perms.len() + 1, MAX_ORDER));
                    }
                    index.insert(prod.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(prod);
                }
            }
        }
        perms.sort();
        Ok(Self::from_sorted_perms(&perms, name))
    }

    fn from_sorted_perms(perms: &[Vec<usize>], name: &str) -> Self {
        let n = perms.len();
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = compose(&perms[a], &perms[b]);
                table[a * n + b] = index[c.as_slice()] as u16;
            }
        }
        Self::from_flat(table, n, name)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let parsed: GroupJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("group json: {e}")))?;
        match parsed {
            GroupJson::Table { name, order, table } => {
                if order != table.len() {
                    return Err(Error::Parse(format!(
                        "declared order {order} but table has {} rows",
                        table.len()
                    )));
                }
                Self::from_cayley_table(&table, &name)
            }
            GroupJson::Perms {
                name,
                degree,
                generators,
            } => Self::from_permutations(degree, &generators, &name),
        }
    }

    /// Catalog groups.
    ///
    /// * `c1`..`c12`: cyclic, element `k` is the `k`-th power of a generator.
    /// * `d4`..`d16`: dihedral of order `2n`, element `a + n*b` is `x^a y^b`
    ///   with `x^n = y^2 = 1`, `yxy = x^-1`. For `d8` this is `1,x,x²,x³,y,xy,x²y,x³y`.
    /// * `q8`: element `a + 4b` is `x^a y^b` with `x^4 = 1`, `y^2 = x^2`, `yxy^-1 = x^-1`.
    /// * `s3`, `s4`, `a4`: permutations sorted by image list.
    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownGroup(name.to_string());
        match lower.as_str() {
            "s3" => return Self::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], "s3"),
            "s4" => {
                return Self::from_permutations(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], "s4")
            }
            "a4" => {
                return Self::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], "a4")
            }
            "q8" => return Ok(Self::quaternion()),
            _ => {}
        }
        if let Some(rest) = lower.strip_prefix('c') {
            let n: usize = rest.parse().map_err(|_| unknown())?;
            if (1..=12).contains(&n) {
                return Ok(Self::cyclic(n, &lower));
            }
        } else if let Some(rest) = lower.strip_prefix('d') {
            let m: usize = rest.parse().map_err(|_| unknown())?;
            if m % 2 == 0 && (4..=16).contains(&m) {
                return Ok(Self::dihedral(m / 2, &lower));
            }
        }
        Err(unknown())
    }

    pub fn builtin_names() -> Vec<String> {
        let mut names: Vec<String> = (1..=12).map(|n| format!("c{n}")).collect();
        names.extend((2..=8).map(|n| format!("d{}", 2 * n)));
        names.extend(["q8", "s3", "s4", "a4"].iter().map(|s| s.to_string()));
        names
    }

    fn cyclic(n: usize, name: &str) -> Self {
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = ((a + b) % n) as u16;
            }
        }
        Self::from_flat(table, n, name)
    }

    fn dihedral(n: usize, name: &str) -> Self {
        let order = 2 * n;
        let mut table = vec![0u16; order * order];
        for p in 0..order {
            let (a, b) = (p % n, p / n);
            for q in 0..order {
                let (c, d) = (q % n, q / n);
                let x = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table[p * order + q] = (x + n * ((b + d) % 2)) as u16;
            }
        }
        Self::from_flat(table, order, name)
    }

    fn quaternion() -> Self {
        let mut table = vec![0u16; 64];
        for p in 0..8 {
            let (a, b) = (p % 4, p / 4);
            for q in 0..8 {
                let (c, d) = (q % 4, q / 4);
                let mut x = if b == 0 { a + c } else { a + 4 - c };
                let mut y = b + d;
                if y == 2 {
                    y = 0;
                    x += 2;
                }
                table[p * 8 + q] = ((x % 4) + 4 * y) as u16;
            }
        }
        Self::from_flat(table, 8, "q8")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverse[g])
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut r = 0;
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.element_order[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            let e = elems[i];
            for &s in gens {
                let x = self.mul(e, s);
                if !member[x] {
                    member[x] = true;
                    elems.push(x);
                }
            }
            i += 1;
        }
        Subgroup::from_sorted_unchecked(elems)
    }

    /// Validates that `elements` is a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let s = Subgroup::from_sorted_unchecked(elements.to_vec());
        if s.elements.iter().any(|&g| g >= self.order) {
            return Err(Error::NotASubgroup("element out of range".into()));
        }
        if !s.contains(0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &s.elements {
            if !s.contains(self.inv(a)) {
                return Err(Error::NotASubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &s.elements {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("not closed at ({a}, {b})")));
                }
            }
        }
        Ok(s)
    }

    /// A small generating set, chosen greedily by element index.
    pub fn generators_of(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for &g in h.elements() {
            if !current.contains(g) {
                gens.push(g);
                current = self.generate(&gens);
            }
        }
        gens
    }

    pub fn center(&self) -> Subgroup {
        let elems = (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        Subgroup { elements: elems }
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        let elems = (0..self.order)
            .filter(|&z| h.elements.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        Subgroup { elements: elems }
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elems = (0..self.order)
            .filter(|&z| h.elements.iter().all(|&g| h.contains(self.conj(z, g))))
            .collect();
        Subgroup { elements: elems }
    }

    /// `gHg⁻¹`.
    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        Subgroup::from_sorted_unchecked(h.elements.iter().map(|&x| self.conj(g, x)).collect())
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup {
            elements: a.elements.iter().copied().filter(|&x| b.contains(x)).collect(),
        }
    }

    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms = BTreeSet::new();
        for &a in &h.elements {
            for &b in &h.elements {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                comms.insert(c);
            }
        }
        let gens: Vec<usize> = comms.into_iter().collect();
        self.generate(&gens)
    }

    pub fn is_normal_in(&self, n: &Subgroup, h: &Subgroup) -> bool {
        h.elements
            .iter()
            .all(|&g| n.elements.iter().all(|&x| n.contains(self.conj(g, x))))
    }

    /// All subgroups of `G` containing `z`, sorted by order then element set.
    pub fn subgroups_containing(&self, z: &Subgroup) -> Result<Vec<Subgroup>> {
        if self.order > MAX_LATTICE_ORDER {
            return Err(Error::too_large("subgroup lattice group order", self.order, MAX_LATTICE_ORDER));
        }
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let mut list = vec![z.clone()];
        found.insert(z.elements.clone());
        let mut i = 0;
        while i < list.len() {
            let h = list[i].clone();
            let mut gens = self.generators_of(&h);
            for g in 0..self.order {
                if h.contains(g) {
                    continue;
                }
                gens.push(g);
                let k = self.generate(&gens);
                gens.pop();
                if found.insert(k.elements.clone()) {
                    if list.len() >= MAX_SUBGROUP_COUNT {
                        return Err(Error::too_large("subgroup count", list.len() + 1, MAX_SUBGROUP_COUNT));
                    }
                    list.push(k);
                }
            }
            i += 1;
        }
        list.sort();
        Ok(list)
    }

    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.subgroups_containing(&self.trivial_subgroup())
    }

    pub fn left_cosets(&self, h: &Subgroup) -> LeftCosets {
        let n = self.order;
        let mut coset_of = vec![usize::MAX; n];
        let mut factor = vec![0; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &k in &h.elements {
                let x = self.mul(g, k);
                coset_of[x] = idx;
                factor[x] = k;
            }
        }
        LeftCosets {
            reps,
            coset_of,
            factor,
        }
    }

    /// Minimal-index representatives of the right cosets `Hg`.
    pub fn right_coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &k in &h.elements {
                seen[self.mul(k, g)] = true;
            }
        }
        reps
    }

    /// The set `HgK`.
    pub fn double_coset(&self, h: &Subgroup, g: usize, k: &Subgroup) -> Vec<usize> {
        let mut set = BTreeSet::new();
        for &a in &h.elements {
            let ag = self.mul(a, g);
            for &b in &k.elements {
                set.insert(self.mul(ag, b));
            }
        }
        set.into_iter().collect()
    }

    /// Partition of `G` into `H\G/K`; each representative is the minimal index of its class.
    pub fn double_cosets(&self, h: &Subgroup, k: &Subgroup) -> Vec<DoubleCoset> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let elements = self.double_coset(h, g, k);
            for &x in &elements {
                seen[x] = true;
            }
            out.push(DoubleCoset { rep: g, elements });
        }
        out
    }
}

/// `(στ)(i) = σ(τ(i))`.
fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&i| sigma[i]).collect()
}

fn right_generating_set(n: usize, mul: &impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut elems = vec![0usize];
    for cand in 0..n {
        if reached[cand] {
            continue;
        }
        gens.push(cand);
        let mut i = 0;
        while i < elems.len() {
            let e = elems[i];
            for &s in &gens {
                let x = mul(e, s);
                if !reached[x] {
                    reached[x] = true;
                    elems.push(x);
                }
            }
            i += 1;
        }
    }
    gens
}
