//! Formula evaluation against the hand-written evaluators on `P_n`.

use metriclat::oracle::PartitionOracle;
use metriclat::sweep::{par_eval, partition_lattice};
use metriclat_core::logic::{builtin, builtin_sentences, format_formula, parse_formula_with_free, psi_formula, Compiled, Model};

#[test]
fn every_closed_sentence_matches_the_oracle() {
    for n in 2..=5 {
        let p = partition_lattice(n).unwrap();
        let model = Model::partition(&p);
        let oracle = PartitionOracle::new(n);
        for e in builtin_sentences().into_iter().filter(|e| e.free.is_empty()) {
            let c = Compiled::new(&e.formula, &[], &model).unwrap();
            let got = par_eval(&c, &model, &[]).unwrap();
            let want = oracle.sentence(e.name).unwrap_or_else(|| panic!("oracle lacks {}", e.name));
            assert_eq!(got, want, "{} on P_{n}", e.name);
        }
    }
}

#[test]
fn free_formulas_match_the_oracle() {
    let phi = builtin("phi").unwrap();
    let chi = builtin("chi").unwrap();
    for n in 2..=5 {
        let p = partition_lattice(n).unwrap();
        let model = Model::partition(&p);
        let oracle = PartitionOracle::new(n);
        let at = oracle.align(&p);
        let cphi = Compiled::new(&phi.formula, &phi.free, &model).unwrap();
        let cchi = Compiled::new(&chi.formula, &chi.free, &model).unwrap();
        for x in 0..p.lattice().len() {
            for y in 0..p.lattice().len() {
                assert_eq!(cphi.eval(&model, &[x, y]).unwrap(), oracle.phi(at[x], at[y]), "φ on P_{n}");
            }
            for &z in model.modular() {
                assert_eq!(cchi.eval(&model, &[x, z]).unwrap(), oracle.chi(at[x], at[z]), "χ on P_{n}");
            }
        }
        for k in 1..=3 {
            let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
            let free: Vec<&str> = names.iter().map(String::as_str).collect();
            let c = Compiled::new(&psi_formula(k), &free, &model).unwrap();
            let len = p.lattice().len();
            for start in 0..len {
                let xs: Vec<usize> = (0..k).map(|i| (start + 5 * i) % len).collect();
                let mapped: Vec<usize> = xs.iter().map(|&x| at[x]).collect();
                assert_eq!(c.eval(&model, &xs).unwrap(), oracle.psi(&mapped), "ψ_{k} on P_{n}");
            }
        }
    }
}

#[test]
fn registry_round_trips_through_the_printer() {
    for e in builtin_sentences() {
        let printed = format_formula(&e.formula);
        let back = parse_formula_with_free(&printed, &e.free).unwrap();
        assert_eq!(back, e.formula, "{}", e.name);
        assert_eq!(format_formula(&back), printed);
    }
}
