//! Every submodule of K² is generated by two elements: the spans of all
//! pairs give exactly the submodules found by the closure search, and their
//! number matches the closed-form count.

use ccring::oracle::{
    brute_submodules, brute_submodules_by_pairs, standard_chain, submodule_count_formula,
};
use num_bigint::BigUint;

#[test]
fn pair_spans_equal_all_submodules() {
    for (p, m, d, s) in [
        (2u64, 1u32, 1usize, 1u32),
        (2, 1, 2, 1),
        (2, 1, 1, 2),
        (3, 1, 1, 1),
    ] {
        let ctx = standard_chain(p, m, d, s).unwrap();
        let pairs = brute_submodules_by_pairs(&ctx).unwrap();
        assert_eq!(
            BigUint::from(pairs.len()),
            submodule_count_formula(&ctx),
            "({p},{m},{d},{s})"
        );
        assert_eq!(pairs, brute_submodules(&ctx).unwrap(), "({p},{m},{d},{s})");
    }
}

#[test]
fn budgets_are_enforced() {
    let ctx = standard_chain(5, 1, 1, 1).unwrap();
    assert!(brute_submodules_by_pairs(&ctx).is_err());
    let big = standard_chain(7, 1, 1, 1).unwrap();
    assert!(brute_submodules(&big).is_err());
}
