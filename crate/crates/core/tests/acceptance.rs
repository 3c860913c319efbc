use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use mono_core::bar::{build_resolution, ResolutionSpec, SMode};
use mono_core::character::{central_characters, characters, pair_leq};
use mono_core::convolution::{
    convolution_formula_check, convolution_sides, pi_of_phi, trace_distribution, Choices, GroupFunction,
};
use mono_core::hyperhecke::{HyperHecke, Triple};
use mono_core::monocentre::{commutation_check, monocentre, monocentre_exhaustive, valid_triples, MonoFamily};
use mono_core::monomial::{
    double_coset_formula, hom_via_fixed_points, morphism_from_value, tensor_function_bridge, triple_morphism,
    value_at_one, MonomialModule,
};
use mono_core::rep::{frobenius_reciprocity_check, irreducibles, MatrixRep};
use mono_core::{CharPair, CycloScalar, FiniteGroup, PairPoset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const X: usize = 1;
const X2: usize = 2;
const Y: usize = 4;
const XY: usize = 5;

fn criterion(n: u32, what: &str, limit: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let ok = outcome.is_ok() && elapsed < limit;
    println!(
        "\ncriterion {n:>2} {}: {what} ({:.2} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    if let Err(e) = outcome {
        resume_unwind(e);
    }
    assert!(elapsed < limit, "criterion {n} took {elapsed:?}, limit {limit:?}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::builtin(name).unwrap())
}

fn poset(g: &Arc<FiniteGroup>, central: usize) -> Arc<PairPoset> {
    Arc::new(PairPoset::new(g.clone(), central_characters(g)[central].clone()).unwrap())
}

fn hh(name: &str, central: usize) -> HyperHecke {
    HyperHecke::new(poset(&group(name), central))
}

fn z(n: u32, j: i64) -> CycloScalar {
    CycloScalar::root_of_unity(n, j)
}

fn d8_chi() -> usize {
    let g = group("d8");
    central_characters(&g)
        .iter()
        .position(|c| c.value(X2) == Some(z(2, 1)))
        .unwrap()
}

fn small_groups() -> Vec<&'static str> {
    vec!["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "d4", "d6", "d8", "q8", "s3"]
}

// (generators of H, values of φ on those generators)
type PairRow = (Vec<usize>, Vec<CycloScalar>);

fn listed(p: &PairPoset) -> BTreeSet<(Vec<usize>, Vec<String>)> {
    let g = p.group();
    p.pairs()
        .iter()
        .map(|q| {
            (
                q.subgroup().elements().to_vec(),
                (0..g.order())
                    .map(|h| q.character().value(h).map(|v| v.to_string()).unwrap_or_default())
                    .collect(),
            )
        })
        .collect()
}

fn expected(g: &FiniteGroup, rows: &[PairRow]) -> BTreeSet<(Vec<usize>, Vec<String>)> {
    rows.iter()
        .map(|(gens, vals)| {
            let h = g.generate(gens);
            // extend multiplicatively from the generators by breadth-first search
            let mut value: Vec<Option<CycloScalar>> = vec![None; g.order()];
            value[0] = Some(z(1, 0));
            let mut frontier = vec![0];
            while let Some(a) = frontier.pop() {
                for (s, v) in gens.iter().zip(vals) {
                    let b = g.mul(a, *s);
                    let w = value[a].clone().unwrap().mul_ref(v);
                    match &value[b] {
                        Some(old) => assert_eq!(old, &w, "inconsistent generator values"),
                        None => {
                            value[b] = Some(w);
                            frontier.push(b);
                        }
                    }
                }
            }
            (
                h.elements().to_vec(),
                value.iter().map(|v| v.as_ref().map(|x| x.to_string()).unwrap_or_default()).collect(),
            )
        })
        .collect()
}

#[test]
fn criterion_01_d8_pair_posets() {
    criterion(1, "D8 pair posets with exact character values", secs(1), || {
        let g = group("d8");
        let (one, m1, i, mi) = (z(1, 0), z(2, 1), z(4, 1), z(4, 3));
        let trivial: Vec<PairRow> = vec![
            (vec![X, Y], vec![one.clone(), one.clone()]),
            (vec![X, Y], vec![m1.clone(), one.clone()]),
            (vec![X, Y], vec![one.clone(), m1.clone()]),
            (vec![X, Y], vec![m1.clone(), m1.clone()]),
            (vec![X], vec![one.clone()]),
            (vec![X], vec![m1.clone()]),
            (vec![X2, Y], vec![one.clone(), one.clone()]),
            (vec![X2, Y], vec![one.clone(), m1.clone()]),
            (vec![X2, XY], vec![one.clone(), one.clone()]),
            (vec![X2, XY], vec![one.clone(), m1.clone()]),
            (vec![X2], vec![one.clone()]),
        ];
        let chi: Vec<PairRow> = vec![
            (vec![X], vec![i]),
            (vec![X], vec![mi]),
            (vec![X2, Y], vec![m1.clone(), one.clone()]),
            (vec![X2, Y], vec![m1.clone(), m1.clone()]),
            (vec![X2, XY], vec![m1.clone(), one.clone()]),
            (vec![X2, XY], vec![m1.clone(), m1.clone()]),
            (vec![X2], vec![m1]),
        ];
        let p = poset(&g, 0);
        assert_eq!(p.len(), 11);
        assert_eq!(listed(&p), expected(&g, &trivial));
        let p = poset(&g, d8_chi());
        assert_eq!(p.len(), 7);
        assert_eq!(listed(&p), expected(&g, &chi));
    });
}

#[test]
fn criterion_02_monocentre_regression() {
    criterion(2, "D8 monocentres and fast path against the exhaustive oracle", secs(10), || {
        let g = group("d8");
        let h = hh("d8", 0);
        let m = monocentre(&h).unwrap();
        assert_eq!(m.order(), 4);
        assert_eq!(m.abelian_invariants().unwrap(), vec![2, 2]);
        // one family per coset of ⟨x²⟩
        let classes: BTreeSet<usize> = m
            .generating_elements()
            .iter()
            .map(|&x| g.left_cosets(&g.center()).coset_of(x))
            .collect();
        assert_eq!(classes.len(), 4);

        let h = hh("d8", d8_chi());
        let m = monocentre(&h).unwrap();
        assert_eq!(m.order(), 2);
        let want: BTreeSet<_> = [0, X2]
            .iter()
            .map(|&x| MonoFamily::from_element(h.poset(), x).unwrap())
            .collect();
        let got: BTreeSet<_> = m.families().iter().cloned().collect();
        assert_eq!(got, want);

        let mut compared = 0;
        for name in small_groups() {
            let g = group(name);
            for c in 0..central_characters(&g).len() {
                let h = HyperHecke::new(poset(&g, c));
                let fast = monocentre(&h).unwrap();
                match monocentre_exhaustive(&h) {
                    Ok(slow) => {
                        assert!(fast.same_families(&slow), "{name} {c}");
                        compared += 1;
                    }
                    Err(e) => assert_eq!(e.kind(), "TooLarge"),
                }
            }
        }
        println!("    fast path compared with the exhaustive oracle on {compared} (group, central character) cases");
        assert!(compared > 0);
    });
}

#[test]
fn criterion_03_families_commute_with_triples() {
    criterion(3, "every monocentre family commutes with every valid triple", secs(60), || {
        let mut checks = 0usize;
        for name in small_groups() {
            let g = group(name);
            for c in 0..central_characters(&g).len() {
                let h = HyperHecke::new(poset(&g, c));
                let m = monocentre(&h).unwrap();
                let triples = valid_triples(&h);
                for fam in m.families() {
                    for t in &triples {
                        assert!(commutation_check(&h, t, fam).unwrap(), "{name} {c} {t:?}");
                        checks += 1;
                    }
                }
            }
        }
        println!("    {checks} products compared");
    });
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn criterion_04_idempotented_algebra() {
    criterion(4, "pair-set idempotents: e·e = e, ef = fe = f iff subsum", secs(10), || {
        for central in [0, d8_chi()] {
            let h = hh("d8", central);
            let n = h.poset().len();
            let subsets = subsets_up_to(n, 5);
            let sums: Vec<_> = subsets.iter().map(|s| h.idempotent_sum(s).unwrap()).collect();
            for e in &sums {
                assert_eq!(&h.multiply(e, e).unwrap(), e);
            }
            for (i, e) in sums.iter().enumerate() {
                let se: BTreeSet<usize> = subsets[i].iter().copied().collect();
                for (j, f) in sums.iter().enumerate() {
                    let absorbed = h.multiply(e, f).unwrap() == *f && h.multiply(f, e).unwrap() == *f;
                    assert_eq!(absorbed, subsets[j].iter().all(|p| se.contains(p)));
                }
            }
            println!("    central character {central}: {} subsets", subsets.len());
        }
    });
}

#[test]
fn criterion_05_convolution_formula() {
    criterion(5, "monomial morphisms as convolutions, exhaustive and choice-independent", secs(120), || {
        let cases: Vec<(&str, usize)> = ["d8", "s3", "c4", "q8"]
            .iter()
            .flat_map(|&n| (0..central_characters(&group(n)).len()).map(move |c| (n, c)))
            .collect();
        let mut pool = Vec::new();
        for &(name, c) in &cases {
            let h = hh(name, c);
            let order = h.poset().group().order();
            for &t in h.basis() {
                for g1 in 0..order {
                    assert!(convolution_formula_check(&h, &t, g1).unwrap(), "{name} {c} {t:?} {g1}");
                    pool.push((name, c, t, g1));
                }
            }
        }
        println!("    {} (triple, g1) cases exact", pool.len());
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let (name, c, t, g1) = pool[rng.gen_range(0..pool.len())];
            let h = hh(name, c);
            let fixed = convolution_sides(&h, &t, g1, &mut Choices::<ChaCha8Rng> { rng: None }).unwrap();
            let random = convolution_sides(&h, &t, g1, &mut Choices { rng: Some(&mut rng) }).unwrap();
            assert_eq!(random.holds(), fixed.holds());
            assert!(random.holds());
        }
    });
}

fn catalog() -> Vec<(&'static str, usize)> {
    ["c2", "c3", "c4", "c6", "d8", "q8", "s3", "d12", "a4"]
        .iter()
        .flat_map(|&n| (0..central_characters(&group(n)).len()).map(move |c| (n, c)))
        .collect()
}

#[test]
fn criterion_06_functoriality() {
    criterion(6, "triple morphisms compose like hyperHecke products", secs(30), || {
        let algebras: Vec<HyperHecke> = catalog().iter().map(|&(n, c)| hh(n, c)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..500 {
            let h = &algebras[rng.gen_range(0..algebras.len())];
            let basis = h.basis();
            let p = h.poset();
            let g = p.group();
            let t1 = basis[rng.gen_range(0..basis.len())];
            let next: Vec<Triple> = basis.iter().copied().filter(|t| t.source == t1.target).collect();
            let t2 = next[rng.gen_range(0..next.len())];
            let (e, prod) = h.multiply_triples(&t2, &t1).unwrap().unwrap();
            let composed = triple_morphism(h, &t2).unwrap().compose(&triple_morphism(h, &t1).unwrap()).unwrap();
            assert_eq!(composed, triple_morphism(h, &prod).unwrap().scale(&z(h.exponent(), e as i64)));

            let phi = p.pair(t1.target).character();
            let psi = p.pair(t1.source).character();
            let a = phi.domain().elements()[rng.gen_range(0..phi.domain().order())];
            let k = psi.domain().elements()[rng.gen_range(0..psi.domain().order())];
            let base = triple_morphism(h, &t1).unwrap();
            let right = triple_morphism(h, &Triple::new(t1.source, g.mul(t1.g, k), t1.target)).unwrap();
            assert_eq!(right, base.scale(&psi.value(g.inv(k)).unwrap()));
            let left = triple_morphism(h, &Triple::new(t1.source, g.mul(a, t1.g), t1.target)).unwrap();
            assert_eq!(left, base.scale(&phi.value(g.inv(a)).unwrap()));

            let src = tensor_function_bridge(p.group_arc(), p.pair(t1.source));
            let tgt = tensor_function_bridge(p.group_arc(), p.pair(t1.target));
            let i = rng.gen_range(0..src.module.len());
            let mut unit = vec![CycloScalar::zero(h.exponent()); src.module.len()];
            unit[i] = CycloScalar::one(h.exponent());
            assert_eq!(tgt.forward(&base.apply(&unit)), src.model.triple_image(&tgt.model, t1.g, i));
        }
    });
}

#[test]
fn criterion_07_double_coset_formula() {
    criterion(7, "double coset isomorphisms and dimension identity", secs(30), || {
        let mut checked = 0;
        for name in ["s3", "d8"] {
            let g = group(name);
            let subs = g.all_subgroups().unwrap();
            for hsub in &subs {
                for phi in characters(&g, hsub) {
                    let pair = CharPair::new(phi);
                    for j in &subs {
                        let iso = double_coset_formula(&g, j, &pair).unwrap();
                        iso.check().unwrap();
                        let total: usize = iso.summands.iter().map(|s| j.order() / s.pair.subgroup().order()).sum();
                        assert_eq!(total, g.order() / hsub.order());
                        checked += 1;
                    }
                }
            }
        }
        println!("    {checked} (J, H, φ) cases");
    });
}

#[test]
fn criterion_08_bar_monomial_resolutions() {
    criterion(8, "bar-monomial resolutions are exact at every pair", secs(900), || {
        let mut runs: Vec<(&str, usize, MatrixRep, usize, SMode)> = Vec::new();
        for c in 0..2 {
            let g = group("c2");
            let central = central_characters(&g)[c].clone();
            let v = characters(&g, &g.whole())
                .into_iter()
                .map(|x| MatrixRep::one_dim(&g, &x).unwrap())
                .find(|v| v.has_central_character(&central))
                .unwrap();
            runs.push(("c2", c, v, 2, SMode::Full));
        }
        let c3 = group("c3");
        runs.push(("c3", 0, MatrixRep::regular_isotypic(&c3, &central_characters(&c3)[0]).unwrap(), 2, SMode::Full));
        let s3 = group("s3");
        runs.push(("s3", 0, irreducibles(&s3).unwrap().remove(2), 2, SMode::Orbit));
        let d8 = group("d8");
        let irr = irreducibles(&d8).unwrap();
        for c in [0, d8_chi()] {
            let central = central_characters(&d8)[c].clone();
            let ones: Vec<MatrixRep> = irr.iter().filter(|v| v.dim() == 1 && v.has_central_character(&central)).cloned().collect();
            if ones.is_empty() {
                // no linear character restricts to χ on the centre
                let v = irr.iter().find(|v| v.has_central_character(&central)).unwrap().clone();
                runs.push(("d8", c, v, 1, SMode::Orbit));
            }
            for v in ones {
                runs.push(("d8", c, v, 1, SMode::Orbit));
            }
        }

        for (name, c, v, degree, mode) in runs {
            let g = group(name);
            let dim = v.dim();
            let spec = ResolutionSpec::new(poset(&g, c), v)
                .with_mode(mode)
                .with_degree(degree)
                .with_max_dim(200_000);
            let r = build_resolution(&spec).unwrap();
            assert!(r.d_squared_zero(degree).unwrap(), "{name} {c}");
            let report = r.check_monomial_resolution(degree, 11).unwrap();
            println!(
                "    {name} central {c} dim V {dim}: terms {:?}, h={} a={} s={}, exact through {degree}: {}",
                report.term_dims, report.h, report.a, report.s, report.exact
            );
            assert!(report.exact, "{name} {c}: {report:?}");
        }

        let g = group("c2");
        let spec = ResolutionSpec::new(poset(&g, 0), MatrixRep::trivial(&g));
        let mut r = build_resolution(&spec).unwrap();
        assert!(r.corrupt_entry(2));
        let report = r.check_monomial_resolution(2, 11).unwrap();
        assert!(!report.exact);
        println!("    corrupted differential flagged");
    });
}

#[test]
fn criterion_09_hom_and_lineable_fixed_points() {
    criterion(9, "Hom from induced lines equals lineable fixed points", secs(30), || {
        let g = group("d8");
        let pairs: Vec<CharPair> = [0, d8_chi()].iter().flat_map(|&c| poset(&g, c).pairs().to_vec()).collect();
        let modules: Vec<MonomialModule> = pairs.iter().map(|q| MonomialModule::induced(&g, q)).collect();
        for src_pair in &pairs {
            let src = MonomialModule::induced(&g, src_pair);
            let rs = MatrixRep::from_monomial(&src).unwrap();
            for n in &modules {
                let hom = hom_via_fixed_points(src_pair, n).unwrap();
                assert_eq!(hom.dim(), n.lineable_fixed_points(src_pair).len());
                let rt = MatrixRep::from_monomial(n).unwrap();
                let oracle = rs
                    .intertwiner_dim_supported(&rt, |a, b| pair_leq(&src.lines()[b].pair, &n.lines()[a].pair))
                    .unwrap();
                assert_eq!(hom.dim(), oracle);
                for f in &hom.morphisms {
                    assert!(f.is_equivariant(&hom.source, n));
                    assert_eq!(&morphism_from_value(&hom.source, n, &value_at_one(f)).unwrap(), f);
                }
            }
        }
    });
}

#[test]
fn criterion_10_frobenius_reciprocity() {
    criterion(10, "Frobenius reciprocity over S3", secs(30), || {
        let g = group("s3");
        let irr = irreducibles(&g).unwrap();
        assert_eq!(irr.len(), 3);
        for hsub in g.all_subgroups().unwrap() {
            for phi in characters(&g, &hsub) {
                let pair = CharPair::new(phi);
                for v in &irr {
                    let (a, b) = frobenius_reciprocity_check(&pair, v).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    });
}

fn random_function(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> GroupFunction {
    let n = g.exponent() as u32;
    let w = z(n, 1);
    let values = (0..g.order())
        .map(|_| {
            let a = CycloScalar::from_integer(n, rng.gen_range(-3..4));
            a.add_ref(&w.mul_ref(&CycloScalar::from_integer(n, rng.gen_range(-3..4))))
        })
        .collect();
    GroupFunction::from_values(g, values).unwrap()
}

#[test]
fn criterion_11_hecke_and_traces() {
    criterion(11, "Hecke algebra, π multiplicativity, trace distributions", secs(30), || {
        let g = group("s3");
        for a in 0..6 {
            for b in 0..6 {
                let lhs = GroupFunction::delta(&g, a).convolve(&GroupFunction::delta(&g, b));
                assert_eq!(lhs, GroupFunction::delta(&g, g.mul(a, b)));
            }
        }
        let irr = irreducibles(&g).unwrap();
        let v = irr.iter().find(|v| v.dim() == 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (f1, f2) = (random_function(&g, &mut rng), random_function(&g, &mut rng));
            let lhs = pi_of_phi(v, &f1.convolve(&f2)).unwrap();
            let rhs = pi_of_phi(v, &f1).unwrap().mul(&pi_of_phi(v, &f2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        for i in 0..irr.len() {
            for j in 0..i {
                assert!((0..6).any(|a| {
                    let f = GroupFunction::delta(&g, a);
                    trace_distribution(&irr[i], &f).unwrap() != trace_distribution(&irr[j], &f).unwrap()
                }));
            }
            let dual = irr[i].contragredient().contragredient();
            for a in 0..6 {
                assert_eq!(dual.image(a), irr[i].image(a));
            }
        }
    });
}

#[test]
fn criterion_12_monocentre_chain_maps() {
    criterion(12, "monocentre chain maps on D8 act on V by the predicted scalar", secs(60), || {
        let g = group("d8");
        let p = poset(&g, 0);
        let h = HyperHecke::new(p.clone());
        let m = monocentre(&h).unwrap();
        let bottom = p.bottom();
        for chi in characters(&g, &g.whole()) {
            let v = MatrixRep::one_dim(&g, &chi).unwrap();
            let r = build_resolution(&ResolutionSpec::new(p.clone(), v).with_degree(1).with_max_dim(10_000)).unwrap();
            for fam in m.families() {
                let report = r.monocentre_chain_map(fam, 1).unwrap();
                assert!(report.commutes());
                let x = fam.rep(bottom);
                let want = chi.value(g.inv(x)).unwrap();
                assert_eq!(report.scalar, Some(want));
            }
        }
    });
}
