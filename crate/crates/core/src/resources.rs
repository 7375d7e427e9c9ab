//! The bundled seed resources and their conventional file names.

pub const LEXICON: &str = include_str!("../data/lexicon.dic");
pub const RULES: &str = include_str!("../data/rules.tsv");
pub const NOMINAL_FLAGS: &str = include_str!("../data/nominal_flags.txt");
pub const DEFAULTS: &str = include_str!("../data/defaults.tsv");
pub const PRONOUNS: &str = include_str!("../data/pronouns.tsv");
pub const ANCORA_MAPPING: &str = include_str!("../data/ancora_mapping.tsv");

pub const LEXICON_FILE: &str = "lexicon.dic";
pub const RULES_FILE: &str = "rules.tsv";
pub const NOMINAL_FLAGS_FILE: &str = "nominal_flags.txt";
pub const DEFAULTS_FILE: &str = "defaults.tsv";
pub const PRONOUNS_FILE: &str = "pronouns.tsv";
pub const MAPPING_FILE: &str = "ancora_mapping.tsv";
