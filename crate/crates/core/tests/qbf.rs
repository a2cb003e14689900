mod common;

use nckt::qbf::{write_qdimacs, Provenance};
use nckt::{evaluate_qbf, normalize, parse_qdimacs, NormalizedQbf, QbfFormula, Quantifier};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_formula, random_general_formula, truth_table_qbf};

fn arb_formula() -> impl Strategy<Value = QbfFormula> {
    (any::<u64>(), 1u32..=6, 1usize..=6)
        .prop_map(|(seed, n, m)| random_general_formula(&mut ChaCha8Rng::seed_from_u64(seed), n, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn game_search_matches_truth_table(f in arb_formula()) {
        prop_assert_eq!(evaluate_qbf(&f).unwrap(), truth_table_qbf(&f));
    }

    #[test]
    fn normalization_preserves_truth_and_shape(f in arb_formula()) {
        let q = normalize(&f);
        prop_assume!(q.n() <= 21);
        prop_assert!(NormalizedQbf::violations(q.formula()).is_empty());
        prop_assert_eq!(q.is_true().unwrap(), truth_table_qbf(&f));
        prop_assert!(q.n() % 2 == 1 && q.n() >= 3);
        prop_assert!(!q.eval_matrix_bits(0));
        prop_assert!(q.m() >= 2);
        prop_assert!(q.formula().occurrences().iter().all(|&k| k <= 4));
        prop_assert_eq!(q.provenance().len(), q.n());
        // every original variable has exactly one image in its own prefix position
        for v in 1..=f.num_vars {
            let images = q
                .provenance()
                .iter()
                .filter(|p| match p {
                    Provenance::Original { var } => *var == v,
                    Provenance::Copy { var, copy } => *var == v && *copy == 1,
                    _ => false,
                })
                .count();
            prop_assert_eq!(images, 1);
        }
    }

    #[test]
    fn normalization_is_idempotent_on_normal_forms(f in arb_formula()) {
        let q = normalize(&f);
        let again = normalize(q.formula());
        prop_assert_eq!(again.formula(), q.formula());
    }

    #[test]
    fn qdimacs_round_trips(f in arb_formula()) {
        let text = write_qdimacs(&f);
        let back = parse_qdimacs(&text).unwrap();
        prop_assert_eq!(&back.clauses, &f.clauses);
        prop_assert_eq!(truth_table_qbf(&back), truth_table_qbf(&f));
    }

    #[test]
    fn suffix_values_follow_their_quantifier(seed in any::<u64>()) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), 5, 5, Some(4));
        let q = normalize(&f);
        prop_assume!(q.n() <= 15);
        let n = q.n();
        for i in 2..=n {
            let outer = q.suffix_table(i).unwrap();
            let inner = q.suffix_table(i - 1).unwrap();
            for (a, &v) in outer.iter().enumerate() {
                let lo = inner[a << 1];
                let hi = inner[a << 1 | 1];
                let expected = match q.quantifier(i - 1) {
                    Quantifier::Exists => lo || hi,
                    Quantifier::Forall => lo && hi,
                };
                prop_assert_eq!(v, expected);
            }
        }
    }
}

#[test]
fn free_variables_are_outermost_existentials() {
    let f = parse_qdimacs("p cnf 3 1\na 1 0\n1 2 3 0\n").unwrap();
    assert_eq!(f.quantifier_of(2), Some(Quantifier::Exists));
    assert_eq!(f.prefix.last(), Some(&(Quantifier::Forall, 1)));
    assert!(evaluate_qbf(&f).unwrap());
}

#[test]
fn heavy_variables_are_split() {
    // x1 in five clauses
    let text = "p cnf 3 5\ne 3 0\na 2 0\ne 1 0\n1 2 3 0\n1 -2 3 0\n-1 2 -3 0\n1 -2 -3 0\n-1 2 2 0\n";
    let f = parse_qdimacs(text).unwrap();
    let q = normalize(&f);
    assert!(q.provenance().iter().any(|p| matches!(p, Provenance::Copy { var: 1, .. })));
    assert!(q.formula().occurrences().iter().all(|&k| k <= 4));
    assert_eq!(q.is_true().unwrap(), truth_table_qbf(&f));
}
