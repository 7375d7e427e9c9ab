//! CoNLL-2009 reading and the feature and lemma evaluations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::io::BufRead;

use crate::analyzer::Analyzer;
use crate::derivers::Lemmatizer;
use crate::error::{Error, Result};
use crate::features::{Feature, FeatureSet, Gender, Mood, Number, Person, Pos, Tense};
use crate::text::normalize;

const CONLL: &str = "CoNLL file";
const MAPPING: &str = "feature mapping";

/// Fixed columns before the argument columns.
pub const FIXED_COLUMNS: usize = 14;
const ID: usize = 0;
const FORM: usize = 1;
const LEMMA: usize = 2;
const POS: usize = 4;
const FEAT: usize = 6;
const FILLPRED: usize = 12;
const PRED: usize = 13;

/// Translation from corpus POS tags and FEAT key/value spellings to enums.
#[derive(Debug, Clone, Default)]
pub struct FeatureMapping {
    pos: HashMap<String, Option<Pos>>,
    keys: HashMap<String, Feature>,
    values: HashMap<(Feature, String), Option<String>>,
}

impl FeatureMapping {
    /// TSV rows of `kind  corpus-value  artifact-value`, where kind is `pos`,
    /// `key` or a feature name. A `-` target maps to unset.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut mapping = FeatureMapping::default();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [kind, from, to] = cells[..] else {
                return Err(Error::parse(
                    MAPPING,
                    line_no,
                    format!("expected 3 columns, found {}", cells.len()),
                ));
            };
            let fail = |m: String| Error::parse(MAPPING, line_no, m);
            let from = from.to_lowercase();
            let target = (to != "-").then_some(to);
            match kind.to_lowercase().as_str() {
                "pos" => {
                    let pos = target
                        .map(|t| t.parse::<Pos>())
                        .transpose()
                        .map_err(|e| fail(e.to_string()))?;
                    mapping.pos.insert(from, pos);
                }
                "key" => {
                    let feature = scored_feature(to)
                        .ok_or_else(|| fail(format!("unknown feature {to:?}")))?;
                    mapping.keys.insert(from, feature);
                }
                kind => {
                    let feature = scored_feature(kind)
                        .ok_or_else(|| fail(format!("unknown kind {kind:?}")))?;
                    if let Some(t) = target {
                        let mut probe = FeatureSet::default();
                        assign(&mut probe, feature, t).map_err(fail)?;
                    }
                    mapping
                        .values
                        .insert((feature, from), target.map(String::from));
                }
            }
        }
        Ok(mapping)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        FeatureMapping::load(text.as_bytes())
    }

    /// Mapped coarse POS; unknown tags fall back to their first letter.
    pub fn pos(&self, tag: &str) -> Option<Pos> {
        let tag = tag.to_lowercase();
        if let Some(p) = self.pos.get(&tag) {
            return *p;
        }
        let first: String = tag.chars().take(1).collect();
        self.pos.get(&first).copied().flatten()
    }

    fn feature_for_key(&self, key: &str) -> Option<Feature> {
        self.keys.get(key).copied()
    }

    fn value(&self, feature: Feature, value: &str) -> Option<&Option<String>> {
        self.values.get(&(feature, value.to_string()))
    }
}

fn scored_feature(name: &str) -> Option<Feature> {
    Feature::SCORED.into_iter().find(|f| f.as_str() == name)
}

fn assign(
    features: &mut FeatureSet,
    feature: Feature,
    value: &str,
) -> std::result::Result<(), String> {
    let err = |e: crate::features::UnknownValue| e.to_string();
    match feature {
        Feature::Person => features.person = Some(value.parse::<Person>().map_err(err)?),
        Feature::Mood => features.mood = Some(value.parse::<Mood>().map_err(err)?),
        Feature::Tense => features.tense = Some(value.parse::<Tense>().map_err(err)?),
        Feature::Number => features.number = Some(value.parse::<Number>().map_err(err)?),
        Feature::Gender => features.gender = Some(value.parse::<Gender>().map_err(err)?),
    }
    Ok(())
}

/// One token of a CoNLL-2009 sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRecord {
    pub sentence_index: usize,
    pub token_index: usize,
    pub form: String,
    pub gold_lemma: String,
    pub gold_pos: Option<Pos>,
    pub gold_features: FeatureSet,
    /// FEAT pairs with no mapping, kept verbatim.
    pub unmapped_features: Vec<(String, String)>,
    pub is_predicate: bool,
    pub predicate_sense: Option<String>,
    /// Every column as read.
    pub columns: Vec<String>,
}

impl TokenRecord {
    pub fn pos_tag(&self) -> &str {
        &self.columns[POS]
    }

    pub fn feat(&self) -> &str {
        &self.columns[FEAT]
    }
}

/// Parsed records plus FEAT values the mapping could not translate.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub records: Vec<TokenRecord>,
    /// `key=value` pairs whose key is mapped but whose value is not, with counts.
    pub unmapped_values: BTreeMap<String, usize>,
}

impl Corpus {
    pub fn extend(&mut self, other: Corpus) {
        let offset = self.records.last().map_or(0, |r| r.sentence_index + 1);
        self.records.extend(other.records.into_iter().map(|mut r| {
            r.sentence_index += offset;
            r
        }));
        for (k, n) in other.unmapped_values {
            *self.unmapped_values.entry(k).or_default() += n;
        }
    }
}

/// The lemma of a predicate sense such as `llegar.b1`.
pub fn sense_lemma(sense: &str) -> &str {
    sense.rsplit_once('.').map_or(sense, |(lemma, _)| lemma)
}

pub fn parse_conll<R: BufRead>(source: R, mapping: &FeatureMapping) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    let mut sentence: Vec<(usize, Vec<String>)> = Vec::new();
    let mut sentence_index = 0;
    let mut flush = |sentence: &mut Vec<(usize, Vec<String>)>, corpus: &mut Corpus| -> Result<()> {
        if sentence.is_empty() {
            return Ok(());
        }
        let predicates = sentence.iter().filter(|(_, c)| c[FILLPRED] == "Y").count();
        let expected = FIXED_COLUMNS + predicates;
        if let Some((line, cells)) = sentence.iter().find(|(_, c)| c.len() != expected) {
            return Err(Error::parse(
                CONLL,
                *line,
                format!(
                    "expected {expected} columns for a sentence with {predicates} predicate(s), found {}",
                    cells.len()
                ),
            ));
        }
        for (line, cells) in sentence.drain(..) {
            let record = token_record(
                cells,
                sentence_index,
                line,
                mapping,
                &mut corpus.unmapped_values,
            )?;
            corpus.records.push(record);
        }
        sentence_index += 1;
        Ok(())
    };
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            flush(&mut sentence, &mut corpus)?;
            continue;
        }
        let cells: Vec<String> = line.split('\t').map(String::from).collect();
        if cells.len() < FIXED_COLUMNS {
            return Err(Error::parse(
                CONLL,
                line_no,
                format!(
                    "expected at least {FIXED_COLUMNS} columns, found {}",
                    cells.len()
                ),
            ));
        }
        sentence.push((line_no, cells));
    }
    flush(&mut sentence, &mut corpus)?;
    let missing: usize = corpus.unmapped_values.values().sum();
    if missing > 0 {
        log::warn!(
            "{missing} FEAT value(s) not covered by the mapping ({} distinct)",
            corpus.unmapped_values.len()
        );
    }
    Ok(corpus)
}

pub fn parse_conll_text(text: &str, mapping: &FeatureMapping) -> Result<Corpus> {
    parse_conll(text.as_bytes(), mapping)
}

fn token_record(
    columns: Vec<String>,
    sentence_index: usize,
    line: usize,
    mapping: &FeatureMapping,
    unmapped_values: &mut BTreeMap<String, usize>,
) -> Result<TokenRecord> {
    let token_index = columns[ID]
        .parse()
        .map_err(|_| Error::parse(CONLL, line, format!("bad token id {:?}", columns[ID])))?;
    let gold_pos = mapping.pos(&columns[POS]);
    let mut gold_features = FeatureSet {
        pos: gold_pos,
        ..FeatureSet::default()
    };
    let mut unmapped_features = Vec::new();
    if columns[FEAT] != "_" {
        for pair in columns[FEAT].split('|').filter(|p| !p.is_empty()) {
            let (key, value) = pair.split_once('=').unwrap_or((pair, ""));
            let (key_l, value_l) = (key.to_lowercase(), value.to_lowercase());
            let Some(feature) = mapping.feature_for_key(&key_l) else {
                unmapped_features.push((key.to_string(), value.to_string()));
                continue;
            };
            match mapping.value(feature, &value_l) {
                Some(Some(target)) => assign(&mut gold_features, feature, target)
                    .expect("mapping targets are validated on load"),
                Some(None) => {}
                None => {
                    *unmapped_values
                        .entry(format!("{key_l}={value_l}"))
                        .or_default() += 1;
                    unmapped_features.push((key.to_string(), value.to_string()));
                }
            }
        }
    }
    let is_predicate = columns[FILLPRED] == "Y" && columns[PRED] != "_";
    let predicate_sense = is_predicate.then(|| columns[PRED].clone());
    let gold_lemma = match &predicate_sense {
        Some(sense) => sense_lemma(sense).to_string(),
        None => columns[LEMMA].clone(),
    };
    Ok(TokenRecord {
        sentence_index,
        token_index,
        form: columns[FORM].clone(),
        gold_lemma,
        gold_pos,
        gold_features,
        unmapped_features,
        is_predicate,
        predicate_sense,
        columns,
    })
}

/// Serialize records back to CoNLL, one blank line after each sentence.
pub fn write_conll(records: &[TokenRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        let mut cols = r.columns.clone();
        cols[ID] = r.token_index.to_string();
        cols[FORM] = r.form.clone();
        if let Some(sense) = &r.predicate_sense {
            cols[PRED] = sense.clone();
        } else {
            cols[LEMMA] = r.gold_lemma.clone();
        }
        out.push_str(&cols.join("\t"));
        out.push('\n');
        if records
            .get(i + 1)
            .is_none_or(|n| n.sentence_index != r.sentence_index)
        {
            out.push('\n');
        }
    }
    out
}

/// True iff the form ends in -ado, -ido or -echo.
pub fn participle_filter(form: &str) -> bool {
    let form = normalize(form);
    ["ado", "ido", "echo"].iter().any(|s| form.ends_with(s))
}

/// Something that predicts features for a form given its gold coarse POS.
pub trait FeaturePredictor {
    fn predict_features(&mut self, form: &str, pos: Pos) -> FeatureSet;
}

impl FeaturePredictor for Analyzer {
    fn predict_features(&mut self, form: &str, pos: Pos) -> FeatureSet {
        self.preferred_analysis(form, Some(pos)).features
    }
}

impl<F: FnMut(&str, Pos) -> FeatureSet> FeaturePredictor for F {
    fn predict_features(&mut self, form: &str, pos: Pos) -> FeatureSet {
        self(form, pos)
    }
}

/// Something that predicts a verb's lemma.
pub trait LemmaPredictor {
    fn predict_lemma(&mut self, form: &str) -> String;
}

impl LemmaPredictor for Lemmatizer {
    fn predict_lemma(&mut self, form: &str) -> String {
        self.lemmatize(form, Some(Pos::Verb))
    }
}

impl<F: FnMut(&str) -> String> LemmaPredictor for F {
    fn predict_lemma(&mut self, form: &str) -> String {
        self(form)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub correct: usize,
    pub predicted: usize,
    pub gold: usize,
}

impl Counts {
    pub fn merge(&mut self, other: Counts) {
        self.correct += other.correct;
        self.predicted += other.predicted;
        self.gold += other.gold;
    }

    pub fn precision(&self) -> f64 {
        ratio(self.correct, self.predicted)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.correct, self.gold)
    }

    pub fn f_score(&self) -> f64 {
        f_score(self.precision(), self.recall())
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub fn f_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Per-feature counts, in [`Feature::SCORED`] order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeatureScores {
    pub counts: [Counts; 5],
}

impl FeatureScores {
    pub fn get(&self, feature: Feature) -> Counts {
        let i = Feature::SCORED
            .iter()
            .position(|f| *f == feature)
            .expect("scored feature");
        self.counts[i]
    }

    /// All features pooled.
    pub fn total(&self) -> Counts {
        let mut t = Counts::default();
        for c in self.counts {
            t.merge(c);
        }
        t
    }

    pub fn merge(&mut self, other: &FeatureScores) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            a.merge(b);
        }
    }

    pub fn add(&mut self, gold: &FeatureSet, predicted: &FeatureSet) {
        for (i, f) in Feature::SCORED.into_iter().enumerate() {
            let (g, p) = (gold.get(f), predicted.get(f));
            let c = &mut self.counts[i];
            c.gold += g.is_some() as usize;
            c.predicted += p.is_some() as usize;
            c.correct += (g.is_some() && g == p) as usize;
        }
    }
}

fn scored_pos(pos: Option<Pos>) -> Option<Pos> {
    pos.filter(|p| matches!(p, Pos::Verb | Pos::Noun | Pos::Adjective))
}

/// Score feature predictions on the verb, noun and adjective tokens.
pub fn evaluate_features<P: FeaturePredictor + ?Sized>(
    records: &[TokenRecord],
    predictor: &mut P,
) -> FeatureScores {
    let mut scores = FeatureScores::default();
    for r in records {
        let Some(pos) = scored_pos(r.gold_pos) else {
            continue;
        };
        let predicted = predictor.predict_features(&r.form, pos);
        scores.add(&r.gold_features, &predicted);
    }
    scores
}

/// [`evaluate_features`] sharded over `threads` forks of `analyzer`.
pub fn evaluate_features_parallel(
    records: &[TokenRecord],
    analyzer: &Analyzer,
    threads: usize,
) -> FeatureScores {
    let threads = threads.max(1);
    let chunk = records.len().div_ceil(threads).max(1);
    let mut total = FeatureScores::default();
    std::thread::scope(|scope| {
        let handles: Vec<_> = records
            .chunks(chunk)
            .map(|shard| {
                let mut worker = analyzer.fork();
                scope.spawn(move || evaluate_features(shard, &mut worker))
            })
            .collect();
        for h in handles {
            total.merge(&h.join().expect("evaluation worker panicked"));
        }
    });
    total
}

/// Which string the participle filter inspects.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FilterTarget {
    #[default]
    Surface,
    GoldLemma,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LemmaScores {
    pub total: usize,
    pub correct: usize,
    pub filtered_total: usize,
    pub filtered_correct: usize,
}

impl LemmaScores {
    pub fn accuracy(&self) -> f64 {
        ratio(self.correct, self.total)
    }

    pub fn filtered_accuracy(&self) -> f64 {
        ratio(self.filtered_correct, self.filtered_total)
    }

    pub fn merge(&mut self, other: LemmaScores) {
        self.total += other.total;
        self.correct += other.correct;
        self.filtered_total += other.filtered_total;
        self.filtered_correct += other.filtered_correct;
    }
}

/// Lemma accuracy over verb predicates, overall and without participle-like forms.
pub fn evaluate_lemmas<P: LemmaPredictor + ?Sized>(
    records: &[TokenRecord],
    predictor: &mut P,
    filter: FilterTarget,
) -> LemmaScores {
    let mut s = LemmaScores::default();
    for r in records
        .iter()
        .filter(|r| r.is_predicate && r.gold_pos == Some(Pos::Verb))
    {
        let ok = predictor.predict_lemma(&r.form) == normalize(&r.gold_lemma);
        let filtered_out = participle_filter(match filter {
            FilterTarget::Surface => &r.form,
            FilterTarget::GoldLemma => &r.gold_lemma,
        });
        s.total += 1;
        s.correct += ok as usize;
        if !filtered_out {
            s.filtered_total += 1;
            s.filtered_correct += ok as usize;
        }
    }
    s
}

/// Feature and lemma results ready for display.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    pub features: FeatureScores,
    pub lemmas: Option<LemmaScores>,
    pub tokens: usize,
    pub unmapped_values: usize,
}

impl MetricsReport {
    fn feature_rows(&self) -> Vec<(&'static str, Counts)> {
        let mut rows = vec![("total", self.features.total())];
        rows.extend(
            Feature::SCORED
                .into_iter()
                .map(|f| (f.as_str(), self.features.get(f))),
        );
        rows
    }

    /// Aligned text tables.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>10} {:>10} {:>10}",
            "feature", "precision", "recall", "f_score"
        );
        for (name, c) in self.feature_rows() {
            let label = if name == "total" { "Total" } else { name };
            let _ = writeln!(
                out,
                "{:<10} {:>10.6} {:>10.6} {:>10.6}",
                label,
                c.precision(),
                c.recall(),
                c.f_score()
            );
        }
        if let Some(l) = &self.lemmas {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:<10} {:>10} {:>10} {:>10}",
                "lemmas", "correct", "total", "ratio"
            );
            let _ = writeln!(
                out,
                "{:<10} {:>10} {:>10} {:>10.6}",
                "all",
                l.correct,
                l.total,
                l.accuracy()
            );
            let _ = writeln!(
                out,
                "{:<10} {:>10} {:>10} {:>10.6}",
                "filtered",
                l.filtered_correct,
                l.filtered_total,
                l.filtered_accuracy()
            );
        }
        out
    }

    /// One `key=value` per line.
    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tokens={}", self.tokens);
        let _ = writeln!(out, "unmapped_values={}", self.unmapped_values);
        for (name, c) in self.feature_rows() {
            let _ = writeln!(out, "{name}.correct={}", c.correct);
            let _ = writeln!(out, "{name}.predicted={}", c.predicted);
            let _ = writeln!(out, "{name}.gold={}", c.gold);
            let _ = writeln!(out, "{name}.precision={:.6}", c.precision());
            let _ = writeln!(out, "{name}.recall={:.6}", c.recall());
            let _ = writeln!(out, "{name}.f_score={:.6}", c.f_score());
        }
        if let Some(l) = &self.lemmas {
            let _ = writeln!(out, "lemma.correct={}", l.correct);
            let _ = writeln!(out, "lemma.total={}", l.total);
            let _ = writeln!(out, "lemma.ratio={:.6}", l.accuracy());
            let _ = writeln!(out, "lemma.filtered_correct={}", l.filtered_correct);
            let _ = writeln!(out, "lemma.filtered_total={}", l.filtered_total);
            let _ = writeln!(out, "lemma.filtered_ratio={:.6}", l.filtered_accuracy());
        }
        out
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_table())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources;

    fn mapping() -> FeatureMapping {
        FeatureMapping::from_text(resources::ANCORA_MAPPING).unwrap()
    }

    fn row(
        id: usize,
        form: &str,
        lemma: &str,
        pos: &str,
        feat: &str,
        pred: Option<&str>,
        apreds: usize,
    ) -> String {
        let mut cols = vec![
            id.to_string(),
            form.into(),
            lemma.into(),
            lemma.into(),
            pos.into(),
            pos.into(),
            feat.into(),
            feat.into(),
            "0".into(),
            "0".into(),
            "ROOT".into(),
            "ROOT".into(),
            if pred.is_some() { "Y" } else { "_" }.into(),
            pred.unwrap_or("_").into(),
        ];
        cols.extend(std::iter::repeat_n("_".to_string(), apreds));
        cols.join("\t")
    }

    #[test]
    fn predicate_lemma_from_sense() {
        let text = format!(
            "{}\n{}\n\n",
            row(
                1,
                "Juan",
                "juan",
                "n",
                "postype=proper|gen=m|num=s",
                None,
                1
            ),
            row(
                2,
                "llegó",
                "llegar",
                "v",
                "postype=main|gen=c|num=s|person=3|mood=indicative|tense=past",
                Some("llegar.b1"),
                1
            )
        );
        let corpus = parse_conll_text(&text, &mapping()).unwrap();
        assert_eq!(corpus.records.len(), 2);
        let r = &corpus.records[1];
        assert!(r.is_predicate);
        assert_eq!(r.gold_lemma, "llegar");
        assert_eq!(r.predicate_sense.as_deref(), Some("llegar.b1"));
        assert_eq!(r.gold_pos, Some(Pos::Verb));
        assert_eq!(r.gold_features.person, Some(Person::Third));
        assert_eq!(r.gold_features.tense, Some(Tense::Past));
        assert_eq!(r.gold_features.gender, None);
        assert_eq!(
            r.unmapped_features,
            [("postype".to_string(), "main".to_string())]
        );
        assert!(corpus.unmapped_values.is_empty());
    }

    #[test]
    fn column_count_mismatch_names_line() {
        let text = format!(
            "{}\n{}\n",
            row(1, "a", "a", "n", "_", None, 1),
            row(2, "b", "b", "v", "_", Some("b.01"), 0)
        );
        let err = parse_conll_text(&text, &mapping()).unwrap_err();
        assert_eq!(err.line(), Some(2));
        let err = parse_conll_text("1\tx\tx\n", &mapping()).unwrap_err();
        assert_eq!(err.line(), Some(1));
    }

    #[test]
    fn sentences_and_unmapped_values() {
        let text = format!(
            "{}\n\n\n{}\n",
            row(1, "casa", "casa", "n", "gen=f|num=x", None, 0),
            row(1, "perro", "perro", "n", "gen=m|num=s", None, 0)
        );
        let corpus = parse_conll_text(&text, &mapping()).unwrap();
        assert_eq!(corpus.records.len(), 2);
        assert_eq!(corpus.records[1].sentence_index, 1);
        assert_eq!(corpus.unmapped_values.get("num=x"), Some(&1));
        assert_eq!(
            corpus.records[0].unmapped_features,
            [("num".to_string(), "x".to_string())]
        );
    }

    #[test]
    fn write_then_parse_is_fixed_point() {
        let text = format!(
            "{}\n{}\n\n{}\n\n",
            row(1, "Juan", "juan", "n", "gen=m|num=s", None, 1),
            row(
                2,
                "llegó",
                "llegar",
                "v",
                "num=s|person=3",
                Some("llegar.b1"),
                1
            ),
            row(1, "casas", "casa", "n", "gen=f|num=p", None, 0)
        );
        let first = parse_conll_text(&text, &mapping()).unwrap();
        let written = write_conll(&first.records);
        assert_eq!(written, text);
        let second = parse_conll_text(&written, &mapping()).unwrap();
        assert_eq!(first.records, second.records);
    }

    #[test]
    fn participle_filter_examples() {
        assert!(participle_filter("acusado"));
        assert!(!participle_filter("Dicho"));
        assert!(participle_filter("hecho"));
        assert!(participle_filter("vivido"));
        assert!(!participle_filter("llegar"));
    }

    #[test]
    fn f_score_zero_when_empty() {
        assert_eq!(Counts::default().f_score(), 0.0);
        let c = Counts {
            correct: 3,
            predicted: 3,
            gold: 4,
        };
        assert_eq!(c.precision(), 1.0);
        assert_eq!(c.recall(), 0.75);
        assert!((c.f_score() - 6.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn mapping_errors() {
        assert_eq!(
            FeatureMapping::from_text("pos\tv\n").unwrap_err().line(),
            Some(1)
        );
        assert!(FeatureMapping::from_text("gender\tm\tneuter\n").is_err());
        assert!(FeatureMapping::from_text("colour\tr\tred\n").is_err());
    }

    #[test]
    fn report_rendering() {
        let mut features = FeatureScores::default();
        features.counts[4] = Counts {
            correct: 3,
            predicted: 3,
            gold: 4,
        };
        let report = MetricsReport {
            features,
            lemmas: Some(LemmaScores {
                total: 10,
                correct: 8,
                filtered_total: 9,
                filtered_correct: 8,
            }),
            tokens: 4,
            unmapped_values: 0,
        };
        let kv = report.render_kv();
        assert!(kv.contains("gender.precision=1.000000\n"));
        assert!(kv.contains("gender.recall=0.750000\n"));
        assert!(kv.contains("total.f_score=0.857143\n"));
        assert!(kv.contains("lemma.ratio=0.800000\n"));
        let table = report.render_table();
        assert!(table.lines().nth(1).unwrap().starts_with("Total"));
        let widths: Vec<usize> = table.lines().take(6).map(str::len).collect();
        assert!(widths.iter().all(|w| *w == widths[0]));
    }
}
