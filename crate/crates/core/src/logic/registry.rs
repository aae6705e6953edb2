//! Named sentences and formulas.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{parse_formula_with_free, Formula, LogicError};

#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Free variables in evaluation order; empty for sentences.
    pub free: Vec<&'static str>,
    pub source: String,
    pub formula: Formula,
}

/// `|a - b|` in the connective set.
fn abs(a: &str, b: &str) -> String {
    format!("max(tsub({a}, {b}), tsub({b}, {a}))")
}

fn sources() -> Vec<(&'static str, &'static str, Vec<&'static str>, String)> {
    let sigma_mod_body =
        "max(tsub(add(norm(x), norm(y)), add(norm(join(x, y)), norm(z))), d(join(x, z), x), d(join(y, z), y))";
    let gap_yz = abs("1", "add(norm(y), norm(z))");
    let gap_wy = abs("1", "add(norm(w), norm(y))");
    let chi = format!(
        "inf w in MOD . max(tsub(d(z, w), {gap_yz}), d(join(z, w), z), d(join(w, y), 1), tsub({gap_wy}, scale(1/4, {gap_yz})))"
    );
    let sym_diff = "tsub(norm(join(x, y)), norm(meet(x, y)))";
    vec![
        ("tml1", "d(0,1) = 1", vec![], abs("d(0, 1)", "1")),
        ("tml2", "0 and 1 are neutral and absorbing", vec![], "sup x . add(d(join(x, 0), x), d(join(x, 1), 1))".into()),
        ("tml3", "join is idempotent", vec![], "sup x . d(join(x, x), x)".into()),
        ("tml4", "join is commutative", vec![], "sup x . sup y . d(join(x, y), join(y, x))".into()),
        (
            "tml5",
            "join is associative",
            vec![],
            "sup x . sup y . sup z . d(join(join(x, y), z), join(x, join(y, z)))".into(),
        ),
        (
            "tml6",
            "join is a contraction",
            vec![],
            "sup x . sup y . sup z . tsub(d(join(x, z), join(y, z)), d(x, y))".into(),
        ),
        (
            "tml7",
            "metric semilattice defect",
            vec![],
            "sup x . sup y . sup z . tsub(add(d(x, y), d(z, 0)), add(d(join(x, y), 0), d(join(x, z), x), d(join(y, z), y)))"
                .into(),
        ),
        ("sigma_mod", "metric modularity", vec![], format!("sup x . sup y . inf z . {sigma_mod_body}")),
        (
            "sigma_dist",
            "distributivity, with the exact meet",
            vec![],
            "sup x . sup y . sup z . inf t . inf w . max(d(meet(x, y), t), d(meet(x, z), w), d(meet(x, join(y, z)), join(t, w)))"
                .into(),
        ),
        // Every x has some y at distance 1. Written inf-then-sup the value would
        // be 1 on every model (take y = x).
        ("sigma_wcom", "weak complements", vec![], "sup x . inf y . tsub(1, d(x, y))".into()),
        ("sigma_dd", "d = d'", vec![], format!("sup x . sup y . {}", abs("d(x, y)", "dp(x, y)"))),
        ("pr_meet_comm", "meet is commutative", vec![], "sup x . sup y . d(meet(x, y), meet(y, x))".into()),
        (
            "pr_meet_assoc",
            "meet is associative",
            vec![],
            "sup x . sup y . sup z . d(meet(meet(x, y), z), meet(x, meet(y, z)))".into(),
        ),
        ("pr_absorb_join", "x + xy = x", vec![], "sup x . sup y . d(join(x, meet(x, y)), x)".into()),
        ("pr_absorb_meet", "x(x + y) = x", vec![], "sup x . sup y . d(meet(x, join(x, y)), x)".into()),
        (
            "pr_distrib",
            "meet distributes over join",
            vec![],
            "sup x . sup y . sup z . d(meet(x, join(y, z)), join(meet(x, y), meet(x, z)))".into(),
        ),
        (
            "pr_complement",
            "complements exist",
            vec![],
            "sup x . inf y . max(d(join(x, y), 1), d(meet(x, y), 0))".into(),
        ),
        ("pr_mu_bounds", "mu(0) = 0 and mu(1) = 1", vec![], "max(norm(0), tsub(1, norm(1)))".into()),
        ("pr_mu_meet", "mu(xy) <= mu(x)", vec![], "sup x . sup y . tsub(norm(meet(x, y)), norm(x))".into()),
        ("pr_mu_join", "mu(x) <= mu(x + y)", vec![], "sup x . sup y . tsub(norm(x), norm(join(x, y)))".into()),
        (
            "pr_mu_additive",
            "mu(x) - mu(xy) = mu(x + y) - mu(y)",
            vec![],
            format!(
                "sup x . sup y . {}",
                abs("tsub(norm(x), norm(meet(x, y)))", "tsub(norm(join(x, y)), norm(y))")
            ),
        ),
        ("pr_d_mu", "d(x,y) = mu(x symmetric difference y)", vec![], format!("sup x . sup y . {}", abs("d(x, y)", sym_diff))),
        ("phi", "modular-pair defect", vec!["x", "y"], format!("inf z . {sigma_mod_body}")),
        ("chi", "selector approximation defect", vec!["y", "z"], chi.clone()),
        (
            "chi_bound",
            "chi_z(y) is at most 2 d(y+z, 1) for modular z",
            vec![],
            format!("sup y . sup z in MOD . tsub({chi}, scale(2, d(join(y, z), 1)))"),
        ),
    ]
}

/// Every named sentence and formula, parsed.
pub fn builtin_sentences() -> Vec<BuiltinEntry> {
    sources()
        .into_iter()
        .map(|(name, summary, free, source)| {
            let formula = parse_formula_with_free(&source, &free).expect("builtin source parses");
            BuiltinEntry { name, summary, free, source, formula }
        })
        .collect()
}

pub fn builtin(name: &str) -> Result<BuiltinEntry, LogicError> {
    builtin_sentences().into_iter().find(|e| e.name == name).ok_or_else(|| LogicError::UnknownBuiltin(name.into()))
}

/// `ψ_n(x_1..x_n) = sup_y min_i d(x_i, y)`, with free variables `x1..xn`.
pub fn psi_formula(n: usize) -> Formula {
    assert!(n >= 1, "psi needs at least one variable");
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let body = names.iter().map(|x| format!("d({x}, y)")).collect::<Vec<_>>().join(", ");
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    parse_formula_with_free(&format!("sup y . min({body})"), &refs).expect("psi source parses")
}
