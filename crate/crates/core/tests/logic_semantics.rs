use std::collections::BTreeMap;

use metriclat_core::lattice::boolean_measure_lattice;
use metriclat_core::logic::{
    builtin, builtin_sentences, evaluate, parse_formula, parse_formula_with_free, Compiled, Domain,
    Formula, Model, Term,
};
use metriclat_core::partition::PartitionLattice;
use metriclat_core::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn value(name: &str, m: &Model) -> Rational {
    evaluate(&builtin(name).unwrap().formula, m, &[]).unwrap()
}

fn rename_term(t: &Term, map: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::Zero => Term::Zero,
        Term::One => Term::One,
        Term::Join(a, b) => Term::join(rename_term(a, map), rename_term(b, map)),
        Term::Meet(a, b) => Term::meet(rename_term(a, map), rename_term(b, map)),
    }
}

/// Renames every bound variable to a fresh name drawn from `rng`.
fn alpha_rename(f: &Formula, map: &BTreeMap<String, String>, rng: &mut ChaCha8Rng) -> Formula {
    let all = |fs: &[Formula], rng: &mut ChaCha8Rng| fs.iter().map(|g| alpha_rename(g, map, rng)).collect();
    match f {
        Formula::Const(c) => Formula::Const(*c),
        Formula::Dist(a, b) => Formula::Dist(rename_term(a, map), rename_term(b, map)),
        Formula::DistPrime(a, b) => Formula::DistPrime(rename_term(a, map), rename_term(b, map)),
        Formula::Norm(a) => Formula::Norm(rename_term(a, map)),
        Formula::Max(fs) => Formula::Max(all(fs, rng)),
        Formula::Min(fs) => Formula::Min(all(fs, rng)),
        Formula::Add(fs) => Formula::Add(all(fs, rng)),
        Formula::TSub(a, b) => Formula::tsub(alpha_rename(a, map, rng), alpha_rename(b, map, rng)),
        Formula::Scale(r, g) => Formula::Scale(*r, Box::new(alpha_rename(g, map, rng))),
        Formula::Quant(q, v, dom, body) => {
            let dom = match dom {
                Domain::Sel(t) => Domain::Sel(rename_term(t, map)),
                other => other.clone(),
            };
            let fresh = format!("v{}_{}", rng.random_range(0..1_000_000u32), v.len());
            let mut inner = map.clone();
            inner.insert(v.clone(), fresh.clone());
            Formula::Quant(*q, fresh, dom, Box::new(alpha_rename(body, &inner, rng)))
        }
    }
}

#[test]
fn alpha_renaming_preserves_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = PartitionLattice::new(4).unwrap();
    let b = boolean_measure_lattice(&[Rational::from(1), Rational::from(3)]).unwrap();
    let models = [Model::partition(&p), Model::new(&b)];
    for entry in builtin_sentences().iter().filter(|e| e.name != "sigma_dist") {
        for _ in 0..3 {
            let renamed = alpha_rename(&entry.formula, &BTreeMap::new(), &mut rng);
            if matches!(entry.formula, Formula::Quant(..)) {
                assert_ne!(renamed, entry.formula, "{}", entry.name);
            }
            assert_eq!(renamed.free_vars(), entry.formula.free_vars());
            for m in &models {
                let n = m.lattice().len();
                let assignment: Vec<(&str, usize)> =
                    entry.free.iter().map(|v| (*v, rng.random_range(0..n))).collect();
                assert_eq!(
                    evaluate(&renamed, m, &assignment).unwrap(),
                    evaluate(&entry.formula, m, &assignment).unwrap(),
                    "{}",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn free_variable_order_does_not_matter() {
    let p = PartitionLattice::new(4).unwrap();
    let m = Model::partition(&p);
    let f = builtin("phi").unwrap().formula;
    let xy = Compiled::new(&f, &["x", "y"], &m).unwrap();
    let yx = Compiled::new(&f, &["y", "x"], &m).unwrap();
    for a in 0..p.lattice().len() {
        for b in 0..p.lattice().len() {
            assert_eq!(xy.eval(&m, &[a, b]).unwrap(), yx.eval(&m, &[b, a]).unwrap());
        }
    }
}

#[test]
fn mod_domain_is_the_singular_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=5 {
        let p = PartitionLattice::new(n).unwrap();
        let m = Model::partition(&p);
        let singular: Vec<usize> = (0..p.lattice().len()).filter(|&i| p.partition(i).is_singular()).collect();
        assert_eq!(m.modular(), &singular[..]);
        for body in ["d(x, y)", "tsub(norm(x), norm(y))", "max(d(join(x, y), 1), scale(1/2, norm(x)))"] {
            let inner = parse_formula_with_free(body, &["x", "y"]).unwrap();
            let for_y = Compiled::new(&inner, &["x", "y"], &m).unwrap();
            let sup_mod = Compiled::new(&parse_formula_with_free(&format!("sup x in MOD . {body}"), &["y"]).unwrap(), &["y"], &m).unwrap();
            let inf_mod = Compiled::new(&parse_formula_with_free(&format!("inf x in MOD . {body}"), &["y"]).unwrap(), &["y"], &m).unwrap();
            for _ in 0..10 {
                let y = rng.random_range(0..p.lattice().len());
                let vals: Vec<Rational> = singular.iter().map(|&x| for_y.eval(&m, &[x, y]).unwrap()).collect();
                assert_eq!(sup_mod.eval(&m, &[y]).unwrap(), *vals.iter().max().unwrap());
                assert_eq!(inf_mod.eval(&m, &[y]).unwrap(), *vals.iter().min().unwrap());
            }
        }
    }
}

#[test]
fn partition_lattice_sentence_values() {
    for n in 3..=6 {
        let p = PartitionLattice::new(n).unwrap();
        let m = Model::partition(&p);
        assert_eq!(value("sigma_wcom", &m), Rational::from(0), "n = {n}");
        // The inf-sup reading is identically 1: y = x gives 1 - 0.
        let literal = parse_formula("inf x . sup y . tsub(1, d(x, y))").unwrap();
        assert_eq!(evaluate(&literal, &m, &[]).unwrap(), Rational::from(1));
        if n <= 5 {
            assert_eq!(value("sigma_dd", &m), Rational::from(0), "n = {n}");
            assert_eq!(value("tml6", &m), Rational::from(0));
        }
    }
    let p4 = PartitionLattice::new(4).unwrap();
    let m = Model::partition(&p4);
    assert_eq!(value("sigma_mod", &m), Rational::new(1, 3));
    assert!(value("sigma_dist", &m) > Rational::from(0));
    // Partition lattices are complemented, but d is not a measure of a symmetric difference.
    assert_eq!(value("pr_complement", &m), Rational::from(0));
    assert!(value("pr_d_mu", &m) > Rational::from(0));
}

#[test]
fn boolean_lattices_satisfy_every_closed_entry() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for m in 1..=3 {
        let mut weights: Vec<Rational> = (0..m).map(|_| Rational::from(rng.random_range(1..=5))).collect();
        weights.shuffle(&mut rng);
        let l = boolean_measure_lattice(&weights).unwrap();
        let model = Model::new(&l);
        for e in builtin_sentences().iter().filter(|e| e.free.is_empty()) {
            assert_eq!(evaluate(&e.formula, &model, &[]).unwrap(), Rational::from(0), "{} on 2^{m}", e.name);
        }
    }
    let l = boolean_measure_lattice(&[Rational::from(1); 3]).unwrap();
    assert_eq!(value("sigma_mod", &Model::new(&l)), Rational::from(0));
}

#[test]
fn chi_is_at_most_twice_the_join_gap() {
    for n in 2..=5 {
        let p = PartitionLattice::new(n).unwrap();
        let m = Model::partition(&p);
        assert_eq!(value("chi_bound", &m), Rational::from(0), "n = {n}");
    }
}

#[test]
fn selector_quantifier_realizes_distance_one() {
    let p = PartitionLattice::new(5).unwrap();
    let m = Model::partition(&p);
    let f = parse_formula("sup x . sup y in SEL(x) . tsub(1, d(x, y))").unwrap();
    assert_eq!(evaluate(&f, &m, &[]).unwrap(), Rational::from(0));
    let g = parse_formula("sup x . inf y in SEL(x) . tsub(add(norm(x), norm(y)), 1)").unwrap();
    assert_eq!(evaluate(&g, &m, &[]).unwrap(), Rational::from(0));
}
