use std::sync::Arc;

use morfo::clitics::{split_clitics, PronounTable, HOST_MOODS, INVENTORY};
use morfo::conll::{
    evaluate_features, evaluate_features_parallel, parse_conll_text, FeatureMapping, TokenRecord,
};
use morfo::features::{FeatureSet, Pos};
use morfo::resources;
use morfo::{Analyzer, Morphology};
use proptest::prelude::*;

fn seed() -> Arc<Morphology> {
    Arc::new(Morphology::bundled().unwrap())
}

fn seed_forms(morph: &Morphology) -> Vec<(String, FeatureSet)> {
    let mut out = Vec::new();
    for entry in morph.lexicon().entries() {
        for e in morph.rules().expand_entry(entry) {
            out.push((e.form, e.features));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

#[test]
fn clitic_splits_over_seed_forms() {
    let morph = seed();
    let pronouns = PronounTable::from_text(resources::PRONOUNS).unwrap();
    let mut a = Analyzer::new(Arc::clone(&morph));
    let forms = seed_forms(&morph);
    let hosts: Vec<&String> = forms
        .iter()
        .filter(|(_, f)| f.mood.is_some_and(|m| HOST_MOODS.contains(&m)))
        .map(|(w, _)| w)
        .collect();

    let mut tokens: Vec<String> = forms.iter().map(|(w, _)| w.clone()).collect();
    for (i, host) in hosts.iter().enumerate() {
        let one = INVENTORY[i % INVENTORY.len()];
        let two = INVENTORY[(i * 7 + 3) % INVENTORY.len()];
        tokens.push(format!("{host}{one}"));
        tokens.push(format!("{host}{one}{two}"));
    }

    let mut split_count = 0;
    for token in &tokens {
        let s = split_clitics(token, &mut a, &pronouns);
        assert!(s.clitics.len() <= 2, "{token}");
        assert!(
            s.clitics.iter().all(|c| INVENTORY.contains(&c.as_str())),
            "{token}"
        );
        assert_eq!(s.rejoin(), *token);
        assert_eq!(s.pronoun_features.len(), s.clitics.len());
        assert!(s
            .pronoun_features
            .iter()
            .all(|f| f.pos == Some(Pos::Pronoun)));
        if s.is_split() {
            split_count += 1;
            assert!(
                a.has_verb_reading(&s.verb_part, &HOST_MOODS),
                "{token} -> {}",
                s.verb_part
            );
        }
        assert!(
            !split_clitics(&s.verb_part, &mut a, &pronouns).is_split(),
            "{token} not idempotent"
        );
    }
    assert!(split_count >= hosts.len(), "only {split_count} splits");
}

fn fixture_records() -> Vec<TokenRecord> {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/features20.conll"
    ))
    .unwrap();
    let mapping = FeatureMapping::from_text(resources::ANCORA_MAPPING).unwrap();
    parse_conll_text(&text, &mapping).unwrap().records
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn feature_scores_ignore_order_and_sharding(seed_val in any::<u64>(), threads in 1usize..6) {
        use rand::{seq::SliceRandom, SeedableRng};
        let morph = seed();
        let mut records = fixture_records();
        let mut base = Analyzer::new(Arc::clone(&morph));
        let reference = evaluate_features(&records, &mut base);
        records.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed_val));
        let mut fresh = Analyzer::new(Arc::clone(&morph));
        prop_assert_eq!(evaluate_features(&records, &mut fresh), reference);
        prop_assert_eq!(evaluate_features_parallel(&records, &base, threads), reference);
    }

    #[test]
    fn metric_ratios_stay_in_range(c in 0usize..50, extra_p in 0usize..50, extra_g in 0usize..50) {
        let counts = morfo::conll::Counts { correct: c, predicted: c + extra_p, gold: c + extra_g };
        for x in [counts.precision(), counts.recall(), counts.f_score()] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        let (p, r) = (counts.precision(), counts.recall());
        let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        prop_assert!((counts.f_score() - f).abs() < 1e-12);
    }
}
