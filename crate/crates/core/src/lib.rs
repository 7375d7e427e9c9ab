//! Rule-based Spanish morphology: feature labeling, lemmatization,
//! nominalization and clitic splitting over a Hunspell-style lexicon.

pub mod analyzer;
pub mod clitics;
pub mod coes;
pub mod conll;
pub mod defaults;
pub mod derivers;
pub mod error;
pub mod features;
pub mod lexicon;
pub mod pattern;
pub mod resources;
pub mod ruleset;
pub mod text;

pub use analyzer::{Analysis, Analyzer, Morphology, Provenance};
pub use clitics::{split_clitics, CliticSplit, PronounTable};
pub use coes::{convert_accents, import_rules, ImportOptions, ImportReport};
pub use conll::{
    evaluate_features, evaluate_lemmas, parse_conll, participle_filter, FeatureMapping,
    MetricsReport, TokenRecord,
};
pub use defaults::DefaultTable;
pub use derivers::{Lemmatizer, NominalFlags, Nominalizer};
pub use error::{Error, Result};
pub use features::{Animacy, Feature, FeatureSet, Gender, Mood, Number, Person, Pos, Tense};
pub use lexicon::{LexEntry, Lexicon};
pub use ruleset::{MorphRule, RuleId, RuleTable};
