//! Detaching enclitic pronouns from imperative, infinitive and gerund forms.

use std::io::BufRead;

use crate::analyzer::Analyzer;
use crate::error::{Error, Result};
use crate::features::{parse_cell, FeatureSet, Mood, Pos, UnknownValue};
use crate::text::{normalize, strip_acute};

/// The closed set of enclitic pronouns.
pub const INVENTORY: [&str; 11] = [
    "me", "te", "se", "nos", "os", "le", "les", "lo", "los", "la", "las",
];

/// Moods a verb part must have for a split to be accepted.
pub const HOST_MOODS: [Mood; 3] = [Mood::Imperative, Mood::Infinitive, Mood::Gerund];

const MAX_CLITICS: usize = 2;
const RESOURCE: &str = "pronoun table";

/// Person, number and gender of each enclitic pronoun.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounTable {
    rows: Vec<(String, FeatureSet)>,
}

impl PronounTable {
    /// TSV with a `pronoun person number gender` header.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut rows = Vec::new();
        let mut header = true;
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
            if header {
                header = false;
                let names: Vec<String> = cells.iter().map(|c| c.to_lowercase()).collect();
                if names != ["pronoun", "person", "number", "gender"] {
                    return Err(Error::parse(
                        RESOURCE,
                        line_no,
                        "expected header: pronoun, person, number, gender",
                    ));
                }
                continue;
            }
            if cells.len() != 4 {
                return Err(Error::parse(
                    RESOURCE,
                    line_no,
                    format!("expected 4 columns, found {}", cells.len()),
                ));
            }
            let pronoun = normalize(cells[0]);
            if !INVENTORY.contains(&pronoun.as_str()) {
                return Err(Error::parse(
                    RESOURCE,
                    line_no,
                    format!("{pronoun:?} is not an enclitic pronoun"),
                ));
            }
            let fail = |e: UnknownValue| Error::parse(RESOURCE, line_no, e.to_string());
            let features = FeatureSet {
                person: parse_cell(cells[1]).map_err(fail)?,
                number: parse_cell(cells[2]).map_err(fail)?,
                gender: parse_cell(cells[3]).map_err(fail)?,
                ..FeatureSet::with_pos(Pos::Pronoun)
            };
            rows.retain(|(p, _)| *p != pronoun);
            rows.push((pronoun, features));
        }
        Ok(PronounTable { rows })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        PronounTable::load(text.as_bytes())
    }

    /// Features of `pronoun`; bare `pos=pronoun` when the table lacks it.
    pub fn features(&self, pronoun: &str) -> FeatureSet {
        self.rows
            .iter()
            .find(|(p, _)| p == pronoun)
            .map_or(FeatureSet::with_pos(Pos::Pronoun), |(_, f)| *f)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// A token split into its verb part and trailing clitics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliticSplit {
    /// The verb part as validated, with the attachment accent removed.
    pub verb_part: String,
    /// The verb part exactly as it appeared in the token.
    pub attached_part: String,
    pub clitics: Vec<String>,
    pub pronoun_features: Vec<FeatureSet>,
}

impl CliticSplit {
    fn unsplit(token: &str) -> Self {
        CliticSplit {
            verb_part: token.to_string(),
            attached_part: token.to_string(),
            clitics: Vec::new(),
            pronoun_features: Vec::new(),
        }
    }

    pub fn is_split(&self) -> bool {
        !self.clitics.is_empty()
    }

    /// The original token.
    pub fn rejoin(&self) -> String {
        let mut s = self.attached_part.clone();
        for c in &self.clitics {
            s.push_str(c);
        }
        s
    }
}

fn strip_pronoun(s: &str) -> Option<(&str, &'static str)> {
    INVENTORY
        .iter()
        .filter(|p| s.len() > p.len() && s.ends_with(*p))
        .max_by_key(|p| p.len())
        .map(|p| (&s[..s.len() - p.len()], *p))
}

/// Split enclitics off `token`.
///
/// Tokens that already have a dictionary analysis are left whole, as is any
/// token whose candidate verb part lacks a dictionary verb analysis in
/// imperative, infinitive or gerund mood.
pub fn split_clitics(token: &str, analyzer: &mut Analyzer, pronouns: &PronounTable) -> CliticSplit {
    let token = normalize(token);
    if token.is_empty() || analyzer.is_known(&token) {
        return CliticSplit::unsplit(&token);
    }

    // candidates[k] strips k + 1 pronouns, rightmost first
    let mut candidates: Vec<(&str, Vec<&'static str>)> = Vec::new();
    let mut rest = token.as_str();
    let mut stripped = Vec::new();
    while stripped.len() < MAX_CLITICS {
        let Some((head, pronoun)) = strip_pronoun(rest) else {
            break;
        };
        stripped.insert(0, pronoun);
        rest = head;
        candidates.push((rest, stripped.clone()));
    }

    for (attached, clitics) in candidates.into_iter().rev() {
        let plain = strip_acute(attached);
        let verb_part = [plain.as_str(), attached]
            .into_iter()
            .find(|v| analyzer.has_verb_reading(v, &HOST_MOODS));
        if let Some(verb_part) = verb_part {
            return CliticSplit {
                verb_part: verb_part.to_string(),
                attached_part: attached.to_string(),
                pronoun_features: clitics.iter().map(|c| pronouns.features(c)).collect(),
                clitics: clitics.into_iter().map(String::from).collect(),
            };
        }
    }
    CliticSplit::unsplit(&token)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::Morphology;
    use crate::defaults::DefaultTable;
    use crate::features::{Gender, Number, Person};
    use crate::lexicon::Lexicon;
    use crate::resources;
    use crate::ruleset::RuleTable;
    use std::sync::Arc;

    fn setup() -> (Analyzer, PronounTable) {
        let morph = Morphology::new(
            Lexicon::from_text(resources::LEXICON).unwrap(),
            RuleTable::from_text(resources::RULES).unwrap(),
            DefaultTable::from_text(resources::DEFAULTS).unwrap(),
        );
        (
            Analyzer::new(Arc::new(morph)),
            PronounTable::from_text(resources::PRONOUNS).unwrap(),
        )
    }

    #[test]
    fn dame_and_damelo() {
        let (mut a, p) = setup();
        let s = split_clitics("dame", &mut a, &p);
        assert_eq!(
            (s.verb_part.as_str(), s.clitics.clone()),
            ("da", vec!["me".to_string()])
        );
        let s = split_clitics("dámelo", &mut a, &p);
        assert_eq!(s.verb_part, "da");
        assert_eq!(s.attached_part, "dá");
        assert_eq!(s.clitics, ["me", "lo"]);
        assert_eq!(s.rejoin(), "dámelo");
        assert_eq!(s.pronoun_features[0].person, Some(Person::First));
        assert_eq!(s.pronoun_features[1].gender, Some(Gender::Male));
        assert_eq!(s.pronoun_features[1].number, Some(Number::Singular));
    }

    #[test]
    fn nouns_stay_whole() {
        let (mut a, p) = setup();
        for w in ["casa", "vaca", "mercado"] {
            let s = split_clitics(w, &mut a, &p);
            assert!(!s.is_split(), "{w}");
            assert_eq!(s.verb_part, w);
        }
    }

    #[test]
    fn infinitive_and_gerund_hosts() {
        let (mut a, p) = setup();
        let s = split_clitics("comerlo", &mut a, &p);
        assert_eq!((s.verb_part.as_str(), s.clitics.len()), ("comer", 1));
        let s = split_clitics("comiéndolas", &mut a, &p);
        assert_eq!(s.verb_part, "comiendo");
        assert_eq!(s.clitics, ["las"]);
    }

    #[test]
    fn split_is_idempotent() {
        let (mut a, p) = setup();
        for w in ["dámelo", "dame", "comerlo", "casa"] {
            let s = split_clitics(w, &mut a, &p);
            assert!(!split_clitics(&s.verb_part, &mut a, &p).is_split(), "{w}");
        }
    }

    #[test]
    fn pronoun_table_errors() {
        let err =
            PronounTable::from_text("pronoun\tperson\tnumber\tgender\nyo\tfirst\tsingular\t-\n")
                .unwrap_err();
        assert_eq!(err.line(), Some(2));
        assert!(PronounTable::from_text("a\tb\n").is_err());
        assert_eq!(
            PronounTable::from_text(resources::PRONOUNS).unwrap().len(),
            11
        );
    }
}
