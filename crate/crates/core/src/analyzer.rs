//! Surface form analysis.
//!
//! Lookup order for a word: the irregular-form table, then the form memo,
//! then a neighbor search over roots sharing the word's first letter. Every
//! root visited during a search is expanded completely into the memo, so
//! later words that land near the same roots are answered from the memo.
//!
//! The neighbor walk in each direction stops once the common prefix between
//! the word and the current root is too short for any lazily handled rule to
//! bridge: a rule with a `morph_ending` of `k` chars keeps `len(word) - k`
//! chars of the root, so roots sharing fewer than `len(word) - window` chars
//! cannot produce the word, and neither can anything beyond them in sorted
//! order. Rule applications that change the first letter, or whose ending
//! exceeds [`LONG_ENDING`], are expanded eagerly at load time instead.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::defaults::DefaultTable;
use crate::features::{FeatureSet, Mood, Pos};
use crate::lexicon::{LexEntry, Lexicon};
use crate::ruleset::{MorphRule, RuleId, RuleTable};
use crate::text::{common_prefix_len, normalize};

/// Endings longer than this many chars go to the irregular-form table.
pub const LONG_ENDING: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Dictionary,
    IrregularTable,
    DefaultFallback,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Dictionary => "dictionary",
            Provenance::IrregularTable => "irregular_table",
            Provenance::DefaultFallback => "default_fallback",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One interpretation of a surface form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub surface: String,
    pub lemma: String,
    pub rule: Option<RuleId>,
    pub features: FeatureSet,
    pub provenance: Provenance,
}

impl Analysis {
    pub fn is_fallback(&self) -> bool {
        self.provenance == Provenance::DefaultFallback
    }
}

/// (lexicon position, rule) pair explaining a form.
type Source = (usize, RuleId);

/// Immutable resources shared by every analyzer.
#[derive(Debug)]
pub struct Morphology {
    lexicon: Lexicon,
    rules: RuleTable,
    defaults: DefaultTable,
    irregular: HashMap<String, Vec<Source>>,
    morph_lens: Vec<usize>,
    window: usize,
}

impl Morphology {
    pub fn new(lexicon: Lexicon, rules: RuleTable, defaults: DefaultTable) -> Self {
        let morph_lens: Vec<usize> = rules
            .rules()
            .iter()
            .map(|r| r.morph_ending.chars().count())
            .collect();
        let window = morph_lens
            .iter()
            .copied()
            .filter(|&n| n <= LONG_ENDING)
            .max()
            .unwrap_or(0);

        let mut irregular: HashMap<String, Vec<Source>> = HashMap::new();
        for (pos, entry) in lexicon.entries().iter().enumerate() {
            let root_len = entry.root().chars().count();
            for rule in rules.licensed(entry) {
                let may_be_eager = morph_lens[rule.id.0] > LONG_ENDING
                    || rule.stem_ending.replaced_len() >= root_len;
                if !may_be_eager {
                    continue;
                }
                if let Some(form) = rule.apply(entry.root()) {
                    if is_eager(morph_lens[rule.id.0], entry.root(), &form) {
                        irregular.entry(form).or_default().push((pos, rule.id));
                    }
                }
            }
        }
        for sources in irregular.values_mut() {
            sources.sort_unstable();
            sources.dedup();
        }

        Morphology {
            lexicon,
            rules,
            defaults,
            irregular,
            morph_lens,
            window,
        }
    }

    /// The seed lexicon, rules and defaults shipped with the crate.
    pub fn bundled() -> crate::error::Result<Self> {
        use crate::resources;
        Ok(Morphology::new(
            Lexicon::from_text(resources::LEXICON)?,
            RuleTable::from_text(resources::RULES)?,
            DefaultTable::from_text(resources::DEFAULTS)?,
        ))
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn rules(&self) -> &RuleTable {
        &self.rules
    }

    pub fn defaults(&self) -> &DefaultTable {
        &self.defaults
    }

    /// Size of the eagerly built irregular-form table.
    pub fn irregular_len(&self) -> usize {
        self.irregular.len()
    }

    fn eager(&self, rule: &MorphRule, root: &str, form: &str) -> bool {
        is_eager(self.morph_lens[rule.id.0], root, form)
    }

    /// Visit every root that could produce `word` through a lazily handled rule.
    fn walk_window(&self, word: &str, mut visit: impl FnMut(usize, &LexEntry)) {
        let bound = word.chars().count().saturating_sub(self.window);
        let mut walk = self.lexicon.neighbor_roots(word);
        while let Some((side, pos, entry)) = walk.next_positioned() {
            if common_prefix_len(entry.root(), word) < bound {
                walk.close(side);
                continue;
            }
            visit(pos, entry);
        }
    }

    fn analysis(&self, surface: &str, (pos, rule): Source, provenance: Provenance) -> Analysis {
        Analysis {
            surface: surface.to_string(),
            lemma: self.lexicon.entries()[pos].root().to_string(),
            rule: Some(rule),
            features: self.rules.rule(rule).features,
            provenance,
        }
    }

    pub fn default_features(&self, word: &str, pos: Option<Pos>) -> FeatureSet {
        self.defaults.features(&normalize(word), pos)
    }
}

fn is_eager(morph_len: usize, root: &str, form: &str) -> bool {
    morph_len > LONG_ENDING || root.chars().next() != form.chars().next()
}

/// Analyzer with its own form memo over shared [`Morphology`].
///
/// Methods take `&mut self`; for concurrent use give each thread its own
/// analyzer via [`Analyzer::fork`]. The memo never changes results.
#[derive(Debug)]
pub struct Analyzer {
    morph: Arc<Morphology>,
    memoize: bool,
    forms: HashMap<String, Vec<Source>>,
    expanded: Vec<bool>,
    resolved: HashSet<String>,
}

impl Analyzer {
    pub fn new(morph: Arc<Morphology>) -> Self {
        let n = morph.lexicon.len();
        Analyzer {
            morph,
            memoize: true,
            forms: HashMap::new(),
            expanded: vec![false; n],
            resolved: HashSet::new(),
        }
    }

    /// An analyzer that recomputes every lookup from scratch.
    pub fn without_memo(morph: Arc<Morphology>) -> Self {
        Analyzer {
            memoize: false,
            ..Analyzer::new(morph)
        }
    }

    /// A fresh analyzer over the same resources, with an empty memo.
    pub fn fork(&self) -> Self {
        Analyzer {
            memoize: self.memoize,
            ..Analyzer::new(Arc::clone(&self.morph))
        }
    }

    pub fn morphology(&self) -> &Arc<Morphology> {
        &self.morph
    }

    /// Number of distinct forms in the memo.
    pub fn memo_len(&self) -> usize {
        self.forms.len()
    }

    /// Number of lexicon roots expanded so far.
    pub fn expanded_roots(&self) -> usize {
        self.expanded.iter().filter(|e| **e).count()
    }

    /// Memo contents as (form, lemma, rule, features).
    pub fn memo_entries(&self) -> impl Iterator<Item = (&str, &str, RuleId, FeatureSet)> + '_ {
        let lex = self.morph.lexicon.entries();
        self.forms.iter().flat_map(move |(form, sources)| {
            sources.iter().map(move |&(pos, rule)| {
                (
                    form.as_str(),
                    lex[pos].root(),
                    rule,
                    self.morph.rules.rule(rule).features,
                )
            })
        })
    }

    /// All analyses of `word`, most preferred first.
    ///
    /// With `pos` set only dictionary analyses of that part of speech are
    /// kept. When none remain, a single default-fallback analysis is returned.
    pub fn analyze(&mut self, word: &str, pos: Option<Pos>) -> Vec<Analysis> {
        let word = normalize(word);
        let mut found = self.dictionary_analyses(&word);
        if let Some(p) = pos {
            found.retain(|a| a.features.pos == Some(p));
        }
        if found.is_empty() {
            return vec![Analysis {
                lemma: word.clone(),
                rule: None,
                features: self.morph.defaults.features(&word, pos),
                provenance: Provenance::DefaultFallback,
                surface: word,
            }];
        }
        sort_by_preference(&word, &mut found);
        found
    }

    /// The single preferred analysis.
    pub fn preferred_analysis(&mut self, word: &str, pos: Option<Pos>) -> Analysis {
        self.analyze(word, pos).swap_remove(0)
    }

    pub fn default_features(&self, word: &str, pos: Option<Pos>) -> FeatureSet {
        self.morph.default_features(word, pos)
    }

    /// Whether `word` has a dictionary verb analysis in one of `moods`.
    pub fn has_verb_reading(&mut self, word: &str, moods: &[Mood]) -> bool {
        self.analyze(word, Some(Pos::Verb))
            .iter()
            .any(|a| !a.is_fallback() && a.features.mood.is_some_and(|m| moods.contains(&m)))
    }

    /// Whether `word` has any dictionary (non-fallback) analysis.
    pub fn is_known(&mut self, word: &str) -> bool {
        !self.analyze(word, None)[0].is_fallback()
    }

    fn dictionary_analyses(&mut self, word: &str) -> Vec<Analysis> {
        if word.is_empty() {
            return Vec::new();
        }
        let morph = Arc::clone(&self.morph);
        let mut out: Vec<Analysis> = morph
            .irregular
            .get(word)
            .into_iter()
            .flatten()
            .map(|&src| morph.analysis(word, src, Provenance::IrregularTable))
            .collect();

        let mut sources = if self.memoize {
            self.search_memoized(word)
        } else {
            search_direct(&morph, word)
        };
        sources.sort_unstable();
        sources.dedup();
        out.extend(
            sources
                .into_iter()
                .map(|src| morph.analysis(word, src, Provenance::Dictionary)),
        );
        out
    }

    fn search_memoized(&mut self, word: &str) -> Vec<Source> {
        if !self.resolved.contains(word) {
            let morph = Arc::clone(&self.morph);
            let forms = &mut self.forms;
            let expanded = &mut self.expanded;
            morph.walk_window(word, |pos, entry| {
                if expanded[pos] {
                    return;
                }
                expanded[pos] = true;
                for rule in morph.rules.licensed(entry) {
                    if let Some(form) = rule.apply(entry.root()) {
                        if !morph.eager(rule, entry.root(), &form) {
                            forms.entry(form).or_default().push((pos, rule.id));
                        }
                    }
                }
            });
            self.resolved.insert(word.to_string());
        }
        self.forms.get(word).cloned().unwrap_or_default()
    }
}

fn search_direct(morph: &Morphology, word: &str) -> Vec<Source> {
    let mut sources = Vec::new();
    morph.walk_window(word, |pos, entry| {
        for rule in morph.rules.licensed(entry) {
            if !word.ends_with(rule.morph_ending.as_str()) {
                continue;
            }
            if let Some(form) = rule.apply(entry.root()) {
                if form == word && !morph.eager(rule, entry.root(), &form) {
                    sources.push((pos, rule.id));
                }
            }
        }
    });
    sources
}

fn ends_like_noun(word: &str) -> bool {
    let stem = word.strip_suffix('s').unwrap_or(word);
    stem.ends_with('o') || stem.ends_with('a')
}

/// Dictionary readings before fallback, a root's reading of itself before
/// others, nouns and adjectives before verb participles on -o/-a words, then
/// rule-file order, then lemma.
fn sort_by_preference(word: &str, analyses: &mut [Analysis]) {
    let noun_like = ends_like_noun(word);
    analyses.sort_by(|a, b| {
        let rank = |x: &Analysis| {
            let fallback = x.is_fallback() as u8;
            let other_root = (x.lemma != word) as u8;
            let participle = (noun_like && x.features.mood == Some(Mood::Participle)) as u8;
            (fallback, other_root, participle, x.rule, x.lemma.clone())
        };
        rank(a).cmp(&rank(b))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{Gender, Number, Person, Tense};

    fn morph(lex: &str, rules: &str) -> Arc<Morphology> {
        let header =
            "flag\tstem_ending\tmorph_ending\tpos\tgender\tnumber\tperson\tmood\ttense\tanimate\n";
        Arc::new(Morphology::new(
            Lexicon::from_text(lex).unwrap(),
            RuleTable::from_text(&format!("{header}{rules}")).unwrap(),
            DefaultTable::from_text(crate::resources::DEFAULTS).unwrap(),
        ))
    }

    const RULES: &str = "\
V\tar\to\tverb\t\tsingular\tfirst\tindicative\tpresent\t
V\tar\tado\tverb\t\tsingular\t\tparticiple\t\t
V\t(?<=r)\t\tverb\t\t\t\tinfinitive\t\t
S\t(?<=o)\t\tnoun\tmale\tsingular\t\t\t\t
S\t(?<=[ao])\ts\tnoun\t\tplural\t\t\t\t
K\tser\tfue\tverb\t\tsingular\tthird\tindicative\tpast\t
K\tser\tser\tverb\t\t\t\tinfinitive\t\t
";

    #[test]
    fn finds_first_person_present() {
        let m = morph("amar/V\nvaca/S\n", RULES);
        let mut a = Analyzer::new(m);
        let got = a.analyze("amo", None);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].lemma, "amar");
        assert_eq!(got[0].features.person, Some(Person::First));
        assert_eq!(got[0].features.tense, Some(Tense::Present));
        assert_eq!(got[0].provenance, Provenance::Dictionary);
    }

    #[test]
    fn pos_hint_filters_and_preference_orders() {
        let m = morph("mercar/V\nmercado/S\n", RULES);
        let mut a = Analyzer::new(m);
        let all = a.analyze("mercado", None);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].features.pos, Some(Pos::Noun));
        assert_eq!(all[0].lemma, "mercado");

        let verb = a.analyze("mercado", Some(Pos::Verb));
        assert_eq!(verb.len(), 1);
        assert_eq!(verb[0].lemma, "mercar");
        assert_eq!(verb[0].features.mood, Some(Mood::Participle));

        let noun = a.preferred_analysis("MERCADO", Some(Pos::Noun));
        assert_eq!(noun.features.gender, Some(Gender::Male));
        assert_eq!(noun.features.number, Some(Number::Singular));
    }

    #[test]
    fn fallback_when_unknown_or_hint_unmatched() {
        let m = morph("amar/V\n", RULES);
        let mut a = Analyzer::new(m);
        let got = a.analyze("xyzal", None);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].provenance, Provenance::DefaultFallback);
        assert_eq!(got[0].lemma, "xyzal");
        assert_eq!(got[0].rule, None);
        assert_eq!(got[0].features.gender, Some(Gender::Male));

        let got = a.analyze("amo", Some(Pos::Noun));
        assert_eq!(got.len(), 1);
        assert!(got[0].is_fallback());
        assert_eq!(got[0].features.pos, Some(Pos::Noun));
    }

    #[test]
    fn first_letter_changes_use_irregular_table() {
        let m = morph("ser/K\nsal/S\n", RULES);
        assert_eq!(m.irregular_len(), 1);
        let mut a = Analyzer::new(m);
        let got = a.analyze("fue", None);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].lemma, "ser");
        assert_eq!(got[0].provenance, Provenance::IrregularTable);
        let got = a.analyze("ser", None);
        assert_eq!(got[0].provenance, Provenance::Dictionary);
        // the memo never holds the eager application
        a.analyze("sal", None);
        assert!(a.memo_entries().all(|(form, ..)| form != "fue"));
    }

    #[test]
    fn memo_grows_and_stays_consistent() {
        let m = morph("amar/V\namor/S\nandar/V\n", RULES);
        let mut warm = Analyzer::new(Arc::clone(&m));
        let mut cold = Analyzer::without_memo(m);
        for w in ["amo", "amado", "andar", "ando", "amar", "amo"] {
            assert_eq!(warm.analyze(w, None), cold.analyze(w, None), "{w}");
        }
        assert!(warm.memo_len() > 0);
        assert_eq!(cold.memo_len(), 0);
    }

    #[test]
    fn empty_word_falls_back() {
        let m = morph("amar/V\n", RULES);
        let mut a = Analyzer::new(m);
        let got = a.analyze("", None);
        assert_eq!(got.len(), 1);
        assert!(got[0].is_fallback());
    }
}
