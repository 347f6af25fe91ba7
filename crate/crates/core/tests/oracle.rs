mod common;

use common::brute_force_precision;
use gleu::{gleu_precision_stats, MetricConfig, Sentence};
use proptest::prelude::*;

fn sentence() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(
        prop::sample::select(vec!["a".to_string(), "b".into(), "c".into()]),
        0..=6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn precision_matches_brute_force(c in sentence(), s in sentence(), r in sentence(), order in 1usize..=4) {
        let cfg = MetricConfig::with_order(order).unwrap();
        let st = gleu_precision_stats(
            &Sentence::from_tokens(&c),
            &Sentence::from_tokens(&s),
            &Sentence::from_tokens(&r),
            &cfg,
        );
        for n in 1..=order {
            let (num, den) = brute_force_precision(&c, &s, &r, n);
            prop_assert_eq!(st.numerators[n - 1], num);
            prop_assert_eq!(st.denominators[n - 1], den);
        }
        prop_assert_eq!(st.cand_len as usize, c.len());
        prop_assert_eq!(st.ref_len as usize, r.len());
    }
}

#[test]
fn oracle_reproduces_hand_derivations() {
    let t = |s: &str| s.split(' ').map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(
        brute_force_precision(&t("the cat sat"), &t("the cat sit"), &t("the cat sat"), 1),
        (3, 3)
    );
    assert_eq!(
        brute_force_precision(&t("the cat sat"), &t("the cat sat"), &t("the cat sit"), 1),
        (1, 3)
    );
    assert_eq!(
        brute_force_precision(&t("a b c"), &t("a b c"), &t("x y z"), 1),
        (0, 3)
    );
}
