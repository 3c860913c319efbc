use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mono_core::bar::{build_resolution, ResolutionSpec, SMode};
use mono_core::character::{central_characters, characters};
use mono_core::convolution::{convolution_sides, Choices};
use mono_core::hyperhecke::{HyperHecke, Triple};
use mono_core::monocentre::{full_monocentre_order, monocentre as compute_monocentre};
use mono_core::monomial::double_coset_formula;
use mono_core::rep::MatrixRep;
use mono_core::{CharPair, Character, Error, FiniteGroup, PairPoset, Subgroup};

use crate::{Central, Failure};

const MAX_LISTED_FAILURES: usize = 20;

fn selected(group: &FiniteGroup, central: Central) -> Vec<usize> {
    match central {
        Central::All => (0..central_characters(group).len()).collect(),
        Central::Index(i) => vec![i],
    }
}

fn poset_for(group: &Arc<FiniteGroup>, c: usize) -> Result<Arc<PairPoset>, Failure> {
    let chi = central_characters(group).swap_remove(c);
    Ok(Arc::new(PairPoset::new(group.clone(), chi)?))
}

fn header(command: &str, group: &FiniteGroup) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("group".into(), json!({"name": group.name(), "order": group.order()}));
    m
}

fn values(chi: &Character) -> Vec<Value> {
    chi.domain()
        .elements()
        .iter()
        .map(|&h| chi.value(h).expect("defined on its domain").to_json())
        .collect()
}

fn subgroup_json(h: &Subgroup) -> Value {
    json!(h.elements())
}

fn central_json(c: usize, chi: &Character) -> Value {
    json!({
        "index": c,
        "centre": subgroup_json(chi.domain()),
        "values": values(chi),
        "trivial": chi.is_trivial(),
    })
}

fn triple_json(t: &Triple) -> Value {
    json!({"source": t.source, "g": t.g, "target": t.target})
}

pub fn poset(group: &Arc<FiniteGroup>, central: Central) -> Result<Value, Failure> {
    let mut out = header("poset", group);
    let mut blocks = Vec::new();
    for c in selected(group, central) {
        let p = poset_for(group, c)?;
        let pairs: Vec<Value> = (0..p.len())
            .map(|i| {
                let q = p.pair(i);
                json!({
                    "index": i,
                    "subgroup": subgroup_json(q.subgroup()),
                    "order": q.subgroup().order(),
                    "values": values(q.character()),
                    "kernel": subgroup_json(p.kernel(i)),
                    "stabilizer": subgroup_json(p.stabilizer(i)),
                    "orbit": p.orbit_of(i),
                    "above": (0..p.len()).filter(|&j| j != i && p.leq(i, j)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let orbits: Vec<Vec<usize>> = p
            .orbit_reps()
            .iter()
            .map(|&r| (0..p.len()).filter(|&i| p.orbit_of(i) == p.orbit_of(r)).collect())
            .collect();
        blocks.push(json!({
            "central_character": central_json(c, p.central()),
            "pair_count": p.len(),
            "bottom": p.bottom(),
            "pairs": pairs,
            "orbits": orbits,
        }));
    }
    out.insert("posets".into(), Value::Array(blocks));
    Ok(Value::Object(out))
}

pub fn hyperhecke(group: &Arc<FiniteGroup>, central: Central) -> Result<Value, Failure> {
    let mut out = header("hyperhecke", group);
    let mut blocks = Vec::new();
    for c in selected(group, central) {
        let h = HyperHecke::new(poset_for(group, c)?);
        let basis = h.basis();
        let mut table = Vec::new();
        let mut closed = true;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if b.target != a.source {
                    continue;
                }
                let (e, t) = h.multiply_triples(a, b)?.expect("composable triples multiply");
                let k = h.basis_index(&t);
                closed &= k.is_some();
                let scalar = mono_core::CycloScalar::root_of_unity(h.exponent(), e as i64);
                table.push(json!({"left": i, "right": j, "scalar": scalar.to_json(), "product": k}));
            }
        }
        let n = h.poset().len();
        let idempotents: Vec<usize> = (0..n)
            .map(|p| h.basis_index(&Triple::identity(p)).expect("identity triples are canonical"))
            .collect();
        let mut orthogonal = true;
        for p in 0..n {
            let ep = h.element(&Triple::identity(p))?;
            for q in 0..n {
                let eq = h.element(&Triple::identity(q))?;
                let prod = h.multiply(&ep, &eq)?;
                orthogonal &= if p == q { prod == ep } else { prod.is_zero() };
            }
        }
        blocks.push(json!({
            "central_character": central_json(c, h.poset().central()),
            "dimension": basis.len(),
            "basis": basis.iter().map(triple_json).collect::<Vec<_>>(),
            "table": table,
            "closed": closed,
            "idempotents": idempotents,
            "orthogonal_idempotents": orthogonal,
        }));
    }
    out.insert("algebras".into(), Value::Array(blocks));
    Ok(Value::Object(out))
}

pub fn monocentre(group: &Arc<FiniteGroup>, central: Central) -> Result<Value, Failure> {
    let mut out = header("monocentre", group);
    let mut blocks = Vec::new();
    for c in selected(group, central) {
        let h = HyperHecke::new(poset_for(group, c)?);
        let m = compute_monocentre(&h)?;
        let invariants = if m.is_closed() {
            json!(m.abelian_invariants()?)
        } else {
            Value::Null
        };
        blocks.push(json!({
            "central_character": central_json(c, h.poset().central()),
            "order": m.order(),
            "closed": m.is_closed(),
            "abelian_invariants": invariants,
            "generating_elements": m.generating_elements(),
            "families": m.families().iter().map(|f| json!(f.reps())).collect::<Vec<_>>(),
        }));
    }
    out.insert("monocentres".into(), Value::Array(blocks));
    if central == Central::All {
        out.insert("full_order".into(), json!(full_monocentre_order(group)?));
    }
    Ok(Value::Object(out))
}

pub struct ResolveOptions {
    pub degree: usize,
    pub mode: Option<SMode>,
    pub max_dim: usize,
    pub seed: u64,
}

pub fn resolve(
    group: &Arc<FiniteGroup>,
    central: Central,
    v: &MatrixRep,
    opts: &ResolveOptions,
) -> Result<Value, Failure> {
    let chars = central_characters(group);
    let c = match central {
        Central::Index(i) => i,
        Central::All => chars.iter().position(|chi| v.has_central_character(chi)).ok_or_else(|| {
            Failure::from(Error::CentralCharacterMismatch(
                "the representation has no single central character".into(),
            ))
        })?,
    };
    let poset = poset_for(group, c)?;
    let mut spec = ResolutionSpec::new(poset.clone(), v.clone())
        .with_degree(opts.degree)
        .with_max_dim(opts.max_dim);
    if let Some(mode) = opts.mode {
        spec = spec.with_mode(mode);
    }
    let r = build_resolution(&spec)?;
    let report = r.check_monomial_resolution(opts.degree, opts.seed)?;
    let mut out = header("resolve", group);
    out.insert("central_character".into(), central_json(c, poset.central()));
    out.insert("rep_dim".into(), json!(v.dim()));
    out.insert("max_dim".into(), json!(opts.max_dim));
    out.insert(
        "report".into(),
        serde_json::to_value(&report).expect("reports serialize"),
    );
    out.insert("pass".into(), json!(report.exact));
    Ok(Value::Object(out))
}

pub fn convolve_check(
    group: &Arc<FiniteGroup>,
    central: Central,
    sampling: Option<(usize, u64)>,
) -> Result<Value, Failure> {
    let mut out = header("convolve-check", group);
    out.insert("exhaustive".into(), json!(sampling.is_none()));
    let mut blocks = Vec::new();
    let mut all_pass = true;
    for c in selected(group, central) {
        let h = HyperHecke::new(poset_for(group, c)?);
        let n = group.order();
        let mut cases: Vec<(Triple, usize)> = h
            .basis()
            .iter()
            .flat_map(|&t| (0..n).map(move |g1| (t, g1)))
            .collect();
        if let Some((samples, seed)) = sampling {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ c as u64);
            if !cases.is_empty() {
                cases = (0..samples).map(|_| cases[rng.gen_range(0..cases.len())]).collect();
            }
        }
        let mut passed = 0;
        let mut literal = 0;
        let mut failures = Vec::new();
        for (t, g1) in &cases {
            let sides = convolution_sides(&h, t, *g1, &mut Choices::<ChaCha8Rng> { rng: None })?;
            if sides.holds() {
                passed += 1;
            } else if failures.len() < MAX_LISTED_FAILURES {
                failures.push(json!({"triple": triple_json(t), "g1": g1}));
            }
            if sides.literal_holds() {
                literal += 1;
            }
        }
        all_pass &= passed == cases.len();
        blocks.push(json!({
            "central_character": central_json(c, h.poset().central()),
            "cases": cases.len(),
            "passed": passed,
            "literal_involution_passed": literal,
            "failures": failures,
        }));
    }
    out.insert("checks".into(), Value::Array(blocks));
    out.insert("pass".into(), json!(all_pass));
    Ok(Value::Object(out))
}

pub fn doublecoset_check(group: &Arc<FiniteGroup>) -> Result<Value, Failure> {
    let subs = group.all_subgroups()?;
    let mut cases = 0;
    let mut passed = 0;
    let mut failures = Vec::new();
    for h in &subs {
        for phi in characters(group, h) {
            let pair = CharPair::new(phi);
            for j in &subs {
                cases += 1;
                let verdict = double_coset_formula(group, j, &pair).and_then(|iso| {
                    iso.check()?;
                    let total: usize = iso.summands.iter().map(|s| j.order() / s.pair.subgroup().order()).sum();
                    if total * h.order() == group.order() {
                        Ok(())
                    } else {
                        Err(Error::InvariantViolation(format!("dimension sum {total} ≠ [G:H]")))
                    }
                });
                match verdict {
                    Ok(()) => passed += 1,
                    Err(e) if failures.len() < MAX_LISTED_FAILURES => failures.push(json!({
                        "j": subgroup_json(j),
                        "h": subgroup_json(h),
                        "values": values(pair.character()),
                        "error": e.to_string(),
                    })),
                    Err(_) => {}
                }
            }
        }
    }
    let mut out = header("doublecoset-check", group);
    out.insert("subgroups".into(), json!(subs.len()));
    out.insert("cases".into(), json!(cases));
    out.insert("passed".into(), json!(passed));
    out.insert("failures".into(), Value::Array(failures));
    out.insert("pass".into(), json!(passed == cases));
    Ok(Value::Object(out))
}
