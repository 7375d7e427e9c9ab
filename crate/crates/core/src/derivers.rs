//! Lemmatization and verb-to-noun nominalization, each with its own memo.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use crate::analyzer::Analyzer;
use crate::error::{Error, Result};
use crate::features::{Number, Pos};
use crate::lexicon::Lexicon;
use crate::ruleset::RuleTable;
use crate::text::normalize;

/// Memoizing lemmatizer over an [`Analyzer`].
#[derive(Debug)]
pub struct Lemmatizer {
    analyzer: Analyzer,
    memo: HashMap<(String, Option<Pos>), String>,
}

impl Lemmatizer {
    pub fn new(analyzer: Analyzer) -> Self {
        Lemmatizer {
            analyzer,
            memo: HashMap::new(),
        }
    }

    /// Lemma of the preferred analysis; the word itself when only the
    /// default fallback applies.
    pub fn lemmatize(&mut self, word: &str, pos: Option<Pos>) -> String {
        let word = normalize(word);
        if let Some(lemma) = self.memo.get(&(word.clone(), pos)) {
            return lemma.clone();
        }
        let lemma = self.analyzer.preferred_analysis(&word, pos).lemma;
        self.memo.insert((word, pos), lemma.clone());
        lemma
    }

    pub fn analyzer(&self) -> &Analyzer {
        &self.analyzer
    }

    pub fn analyzer_mut(&mut self) -> &mut Analyzer {
        &mut self.analyzer
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Stored (word, hint, lemma) triples.
    pub fn memo_entries(&self) -> impl Iterator<Item = (&str, Option<Pos>, &str)> + '_ {
        self.memo
            .iter()
            .map(|((w, p), l)| (w.as_str(), *p, l.as_str()))
    }

    pub fn fork(&self) -> Self {
        Lemmatizer::new(self.analyzer.fork())
    }

    pub fn into_analyzer(self) -> Analyzer {
        self.analyzer
    }
}

/// The set of flags whose noun rules derive nominal forms from verbs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NominalFlags(BTreeSet<char>);

impl NominalFlags {
    pub fn new(flags: impl IntoIterator<Item = char>) -> Self {
        NominalFlags(flags.into_iter().collect())
    }

    /// One flag per line; `#` starts a comment. Several flags on one line are
    /// also accepted.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut flags = BTreeSet::new();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let content = line.split('#').next().unwrap_or("");
            for c in content.chars().filter(|c| !c.is_whitespace() && *c != ',') {
                if !c.is_alphanumeric() {
                    return Err(Error::parse(
                        "nominal flag manifest",
                        i + 1,
                        format!("invalid flag {c:?}"),
                    ));
                }
                flags.insert(c);
            }
        }
        Ok(NominalFlags(flags))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        NominalFlags::load(text.as_bytes())
    }

    pub fn contains(&self, flag: char) -> bool {
        self.0.contains(&flag)
    }

    pub fn iter(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Roots carrying more than one nominalization flag.
    pub fn lint(&self, lexicon: &Lexicon) -> Vec<String> {
        lexicon
            .entries()
            .iter()
            .filter(|e| e.flags().iter().filter(|f| self.contains(**f)).count() > 1)
            .map(|e| e.to_string())
            .collect()
    }

    /// Flags in the manifest with no rule in `rules`.
    pub fn undefined(&self, rules: &RuleTable) -> Vec<char> {
        self.iter().filter(|f| !rules.has_flag(*f)).collect()
    }
}

/// Verb to noun converter.
#[derive(Debug)]
pub struct Nominalizer {
    lemmatizer: Lemmatizer,
    flags: NominalFlags,
    memo: HashMap<String, Option<String>>,
}

impl Nominalizer {
    pub fn new(lemmatizer: Lemmatizer, flags: NominalFlags) -> Self {
        let morph = lemmatizer.analyzer().morphology();
        for entry in flags.lint(morph.lexicon()) {
            log::warn!("entry {entry} carries more than one nominalization flag");
        }
        for flag in flags.undefined(morph.rules()) {
            log::warn!("nominalization flag {flag} has no rules");
        }
        Nominalizer {
            lemmatizer,
            flags,
            memo: HashMap::new(),
        }
    }

    /// Nominal form of a verb, lemmatizing first. `None` when the word is not
    /// a known verb or its entry has no nominalization flag.
    pub fn nominalize(&mut self, verb: &str) -> Option<String> {
        let analysis = self
            .lemmatizer
            .analyzer_mut()
            .preferred_analysis(verb, Some(Pos::Verb));
        if analysis.is_fallback() {
            return None;
        }
        let infinitive = analysis.lemma;
        if let Some(hit) = self.memo.get(&infinitive) {
            return hit.clone();
        }
        let nominal = self.convert(&infinitive);
        self.memo.insert(infinitive, nominal.clone());
        nominal
    }

    fn convert(&self, infinitive: &str) -> Option<String> {
        let morph = self.lemmatizer.analyzer().morphology();
        let entry = morph.lexicon().lookup(infinitive)?;
        let flag = entry
            .flags()
            .iter()
            .copied()
            .find(|f| self.flags.contains(*f))?;
        morph
            .rules()
            .rules_for(flag)
            .filter(|r| {
                r.features.pos == Some(Pos::Noun) && r.features.number != Some(Number::Plural)
            })
            .find_map(|r| r.apply(entry.root()))
    }

    pub fn lemmatizer(&self) -> &Lemmatizer {
        &self.lemmatizer
    }

    pub fn lemmatizer_mut(&mut self) -> &mut Lemmatizer {
        &mut self.lemmatizer
    }

    pub fn flags(&self) -> &NominalFlags {
        &self.flags
    }

    /// Stored (infinitive, nominal form) pairs.
    pub fn memo_entries(&self) -> impl Iterator<Item = (&str, Option<&str>)> + '_ {
        self.memo.iter().map(|(k, v)| (k.as_str(), v.as_deref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::Morphology;
    use crate::defaults::DefaultTable;
    use crate::resources;
    use std::sync::Arc;

    fn seed() -> Arc<Morphology> {
        Arc::new(Morphology::new(
            Lexicon::from_text(resources::LEXICON).unwrap(),
            RuleTable::from_text(resources::RULES).unwrap(),
            DefaultTable::from_text(resources::DEFAULTS).unwrap(),
        ))
    }

    fn nominalizer() -> Nominalizer {
        Nominalizer::new(
            Lemmatizer::new(Analyzer::new(seed())),
            NominalFlags::from_text(resources::NOMINAL_FLAGS).unwrap(),
        )
    }

    #[test]
    fn lemmatize_examples() {
        let mut l = Lemmatizer::new(Analyzer::new(seed()));
        assert_eq!(l.lemmatize("llegó", None), "llegar");
        assert_eq!(l.lemmatize("amar", None), "amar");
        assert_eq!(l.lemmatize("acusado", Some(Pos::Verb)), "acusar");
        assert_eq!(l.lemmatize("qwxz", None), "qwxz");
        assert_eq!(l.memo_len(), 4);
    }

    #[test]
    fn nominalize_examples() {
        let mut n = nominalizer();
        assert_eq!(n.nominalize("crear").as_deref(), Some("creación"));
        assert_eq!(n.nominalize("creó").as_deref(), Some("creación"));
        assert_eq!(n.nominalize("conocer").as_deref(), Some("conocimiento"));
        assert_eq!(n.nominalize("amar"), None);
        assert_eq!(n.nominalize("vaca"), None);
    }

    #[test]
    fn manifest_formats() {
        let f = NominalFlags::from_text("# comment\nN\n\nX # trailing\n").unwrap();
        assert_eq!(f.iter().collect::<String>(), "NX");
        let f = NominalFlags::from_text("N X\n").unwrap();
        assert!(f.contains('X'));
        assert_eq!(
            NominalFlags::from_text("N\n*\n").unwrap_err().line(),
            Some(2)
        );
    }

    #[test]
    fn lint_flags_double_nominal_entries() {
        let lex = Lexicon::from_text("crear/VN\nconocer/VNX\n").unwrap();
        let flags = NominalFlags::new(['N', 'X']);
        assert_eq!(flags.lint(&lex), vec!["conocer/NVX".to_string()]);
    }

    #[test]
    fn seed_lexicon_passes_lint() {
        let lex = Lexicon::from_text(resources::LEXICON).unwrap();
        let flags = NominalFlags::from_text(resources::NOMINAL_FLAGS).unwrap();
        assert!(flags.lint(&lex).is_empty());
    }
}
