//! Import of COES (Ispell) affix files into the rule-table format.
//!
//! Only the skeleton is produced: flag, stem pattern, ending, and whatever
//! mood, tense or number the section comments mention. Everything else is
//! left blank for hand completion.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use crate::error::Result;
use crate::features::{FeatureSet, Mood, Number, Person, Tense};
use crate::pattern::{Atom, StemPattern};
use crate::ruleset::{MorphRule, RuleId, RuleTable};
use crate::text::strip_acute;

/// Replace COES accent notation with the accented characters.
///
/// `'a` becomes `á` (also for e, i, o, u and uppercase), `~n` and `'n`
/// become `ñ`. A quote or tilde before any other character is kept as is.
pub fn convert_accents(text: &str) -> String {
    let (out, dangling) = convert_accents_counted(text);
    if dangling > 0 {
        log::warn!("{dangling} unconverted accent mark(s) in {text:?}");
    }
    out
}

fn accented(mark: char, c: char) -> Option<char> {
    Some(match (mark, c) {
        ('\'', 'a') => 'á',
        ('\'', 'e') => 'é',
        ('\'', 'i') => 'í',
        ('\'', 'o') => 'ó',
        ('\'', 'u') => 'ú',
        ('\'', 'A') => 'Á',
        ('\'', 'E') => 'É',
        ('\'', 'I') => 'Í',
        ('\'', 'O') => 'Ó',
        ('\'', 'U') => 'Ú',
        ('\'' | '~', 'n') => 'ñ',
        ('\'' | '~', 'N') => 'Ñ',
        _ => return None,
    })
}

fn convert_accents_counted(text: &str) -> (String, usize) {
    let mut out = String::with_capacity(text.len());
    let mut dangling = 0;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\'' || c == '~' {
            match chars.peek().and_then(|&n| accented(c, n)) {
                Some(a) => {
                    out.push(a);
                    chars.next();
                }
                None => {
                    dangling += 1;
                    out.push(c);
                }
            }
        } else {
            out.push(c);
        }
    }
    (out, dangling)
}

/// Options for [`import_rules`].
#[derive(Debug, Clone, Default)]
pub struct ImportOptions {
    /// Assign person and number cyclically within each commented block that
    /// names a mood or tense.
    pub infer_person: bool,
    /// Flags whose sections are dropped entirely.
    pub skip_flags: BTreeSet<char>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ImportWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// One imported rule with its source line and example, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportedRule {
    pub line: usize,
    pub flag: char,
    pub stem_ending: StemPattern,
    pub morph_ending: String,
    pub features: FeatureSet,
    /// `(root, form)` from a trailing `# root form` comment.
    pub example: Option<(String, String)>,
}

impl ImportedRule {
    pub fn to_rule(&self, id: RuleId) -> MorphRule {
        MorphRule {
            id,
            flag: self.flag,
            stem_ending: self.stem_ending.clone(),
            morph_ending: self.morph_ending.clone(),
            features: self.features,
        }
    }

    /// Whether the example comment, when present, is reproduced by the rule.
    pub fn example_holds(&self) -> Option<bool> {
        let (root, form) = self.example.as_ref()?;
        Some(self.to_rule(RuleId(0)).apply(root).as_deref() == Some(form.as_str()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct ImportReport {
    pub rules: Vec<ImportedRule>,
    pub warnings: Vec<ImportWarning>,
    /// Flags of every rule line seen in the input, skipped ones included.
    pub source_flags: Vec<char>,
    pub skipped_rules: usize,
}

impl ImportReport {
    pub fn table(&self) -> RuleTable {
        RuleTable::from_rules(
            self.rules
                .iter()
                .enumerate()
                .map(|(i, r)| r.to_rule(RuleId(i)))
                .collect(),
        )
    }

    pub fn to_tsv(&self) -> String {
        self.table().to_tsv()
    }

    /// Rules whose example comment the imported rule fails to reproduce.
    pub fn failed_examples(&self) -> Vec<&ImportedRule> {
        self.rules
            .iter()
            .filter(|r| r.example_holds() == Some(false))
            .collect()
    }

    pub fn checked_examples(&self) -> usize {
        self.rules.iter().filter(|r| r.example.is_some()).count()
    }
}

const KEYWORDS: [(&str, Hint); 12] = [
    ("PRESENTE", Hint::Tense(Tense::Present)),
    ("FUTURO", Hint::Tense(Tense::Future)),
    ("PASADO", Hint::Tense(Tense::Past)),
    ("PRETERITO", Hint::Tense(Tense::Past)),
    ("IMPERFECTO", Hint::Tense(Tense::Imperfect)),
    ("CONDICIONAL", Hint::Tense(Tense::Conditional)),
    ("INDICATIVO", Hint::Mood(Mood::Indicative)),
    ("SUBJUNTIVO", Hint::Mood(Mood::Subjunctive)),
    ("IMPERATIVO", Hint::Mood(Mood::Imperative)),
    ("PARTICIPIO", Hint::Mood(Mood::Participle)),
    ("GERUNDIO", Hint::Mood(Mood::Gerund)),
    ("PLURAL", Hint::Plural),
];

#[derive(Debug, Clone, Copy)]
enum Hint {
    Tense(Tense),
    Mood(Mood),
    Plural,
}

/// Features named by the words of a comment.
pub fn comment_features(comment: &str) -> FeatureSet {
    let text = strip_acute(&convert_accents_counted(comment).0).to_uppercase();
    let mut features = FeatureSet::default();
    for word in text.split(|c: char| !c.is_alphanumeric()) {
        let Some((_, hint)) = KEYWORDS.iter().find(|(k, _)| *k == word) else {
            continue;
        };
        match *hint {
            Hint::Tense(t) => {
                // "pretérito imperfecto" names the imperfect
                if features.tense != Some(Tense::Imperfect) {
                    features.tense = Some(t);
                }
            }
            Hint::Mood(m) => features.mood = Some(m),
            Hint::Plural => features.number = Some(Number::Plural),
        }
    }
    features
}

const PERSON_CYCLE: [(Person, Number); 6] = [
    (Person::First, Number::Singular),
    (Person::Second, Number::Singular),
    (Person::Third, Number::Singular),
    (Person::First, Number::Plural),
    (Person::Second, Number::Plural),
    (Person::Third, Number::Plural),
];

#[derive(Default)]
struct State {
    flag: Option<char>,
    skipping: bool,
    prefixes: bool,
    hint: String,
    hint_line: usize,
    continuing: bool,
    block_index: usize,
}

impl State {
    fn set_hint(&mut self, text: &str, line: usize) {
        self.hint = text.to_string();
        self.hint_line = line;
        self.continuing = true;
        self.block_index = 0;
    }
}

/// Parse a COES affix file. Malformed rule lines become warnings.
pub fn import_rules<R: BufRead>(source: R, options: &ImportOptions) -> Result<ImportReport> {
    let mut report = ImportReport::default();
    let mut st = State::default();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            st.continuing = false;
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            st.set_hint(comment, line_no);
            continue;
        }
        let (body, comment) = match trimmed.split_once('#') {
            Some((b, c)) => (b.trim(), Some(c.trim())),
            None => (trimmed, None),
        };
        let keyword = body.to_lowercase();
        if keyword == "prefixes" || keyword == "suffixes" {
            st.prefixes = keyword == "prefixes";
            st.flag = None;
            continue;
        }
        if let Some(flag) = parse_flag_header(body) {
            st.flag = Some(flag);
            st.skipping = options.skip_flags.contains(&flag) || st.prefixes;
            if st.prefixes && !options.skip_flags.contains(&flag) {
                warn(
                    &mut report,
                    line_no,
                    format!("prefix flag {flag} is not imported"),
                );
            }
            st.set_hint(comment.unwrap_or(""), line_no);
            continue;
        }
        let Some(flag) = st.flag else {
            // table headers and declarations before the first flag
            continue;
        };
        if !body.contains('>') {
            if st.continuing {
                st.hint.push(' ');
                st.hint.push_str(body);
            }
            continue;
        }
        st.continuing = false;
        report.source_flags.push(flag);
        if st.skipping {
            report.skipped_rules += 1;
            continue;
        }
        match parse_rule_line(body) {
            Ok((stem_ending, morph_ending, dropped_dots)) => {
                if dropped_dots > 0 {
                    warn(
                        &mut report,
                        line_no,
                        format!("dropped {dropped_dots} leading '.' atom(s)"),
                    );
                }
                let mut features = comment_features(&st.hint);
                if options.infer_person && (features.mood.is_some() || features.tense.is_some()) {
                    let (person, number) = PERSON_CYCLE[st.block_index % PERSON_CYCLE.len()];
                    features.person = Some(person);
                    features.number = Some(number);
                }
                st.block_index += 1;
                let example = comment.and_then(parse_example);
                let rule = ImportedRule {
                    line: line_no,
                    flag,
                    stem_ending,
                    morph_ending,
                    features,
                    example,
                };
                if rule.example_holds() == Some(false) {
                    let (root, form) = rule.example.as_ref().unwrap();
                    warn(
                        &mut report,
                        line_no,
                        format!("rule does not turn example {root:?} into {form:?}"),
                    );
                }
                report.rules.push(rule);
            }
            Err(message) => warn(&mut report, line_no, message),
        }
    }
    Ok(report)
}

pub fn import_rules_from_text(text: &str, options: &ImportOptions) -> Result<ImportReport> {
    import_rules(text.as_bytes(), options)
}

fn warn(report: &mut ImportReport, line: usize, message: String) {
    log::warn!("line {line}: {message}");
    report.warnings.push(ImportWarning { line, message });
}

fn parse_flag_header(body: &str) -> Option<char> {
    let rest = body.strip_prefix("flag")?;
    if !rest.starts_with(char::is_whitespace) {
        return None;
    }
    let rest = rest.trim_start();
    let rest = rest.strip_prefix(['*', '~']).unwrap_or(rest);
    let mut chars = rest.chars();
    let flag = chars.next()?;
    (chars.next() == Some(':') && flag.is_ascii_alphabetic()).then_some(flag)
}

fn parse_example(comment: &str) -> Option<(String, String)> {
    let converted = convert_accents_counted(comment).0.to_lowercase();
    let mut words = converted.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some(root), Some(form), None) => Some((root.to_string(), form.to_string())),
        _ => None,
    }
}

/// Lowercased atoms of a COES pattern, with `'x` accents converted.
fn parse_atoms(pattern: &str) -> std::result::Result<Vec<Option<Atom>>, String> {
    let converted = convert_accents_counted(pattern).0.to_lowercase();
    let mut atoms = Vec::new();
    let mut chars = converted.chars();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '.' => atoms.push(None),
            '[' => {
                let mut members = Vec::new();
                let mut negated = false;
                let mut closed = false;
                for m in chars.by_ref() {
                    match m {
                        ']' => {
                            closed = true;
                            break;
                        }
                        '^' if members.is_empty() && !negated => negated = true,
                        m if m.is_whitespace() => {}
                        m if m.is_alphabetic() => {
                            if !members.contains(&m) {
                                members.push(m)
                            }
                        }
                        m => return Err(format!("unsupported character {m:?} in class")),
                    }
                }
                if !closed {
                    return Err("unterminated character class".into());
                }
                if members.is_empty() {
                    return Err("empty character class".into());
                }
                atoms.push(Some(Atom::Class { negated, members }));
            }
            c if c.is_alphabetic() => atoms.push(Some(Atom::Literal(c))),
            c => return Err(format!("unsupported character {c:?} in pattern")),
        }
    }
    Ok(atoms)
}

fn parse_rule_line(body: &str) -> std::result::Result<(StemPattern, String, usize), String> {
    let (pattern, action) = body.split_once('>').ok_or("missing '>'")?;
    let mut atoms = parse_atoms(pattern)?;
    let action = action.trim();
    let (removed, added) = match action.strip_prefix('-') {
        Some(rest) => {
            let (r, a) = rest.split_once(',').ok_or("expected '-REMOVED, ADDED'")?;
            (r.trim(), a.trim())
        }
        None => ("", action),
    };
    let removed = word_part(removed)?;
    let added = if added == "-" {
        String::new()
    } else {
        word_part(added)?
    };
    if added.is_empty() && removed.is_empty() && action.is_empty() {
        return Err("missing replacement".into());
    }

    let dots = atoms.iter().take_while(|a| a.is_none()).count();
    atoms.drain(..dots);
    if atoms.iter().any(Option::is_none) {
        return Err("'.' is only supported at the start of a pattern".into());
    }
    let atoms: Vec<Atom> = atoms.into_iter().flatten().collect();

    let removed_chars: Vec<char> = removed.chars().collect();
    if removed_chars.len() > atoms.len() {
        return Err(format!(
            "removed part {removed:?} is longer than the pattern"
        ));
    }
    let split = atoms.len() - removed_chars.len();
    for (atom, c) in atoms[split..].iter().zip(&removed_chars) {
        if !atom.matches(*c) {
            return Err(format!(
                "removed part {removed:?} does not match the pattern"
            ));
        }
    }
    let context = atoms[..split].to_vec();
    let replaced = removed_chars.into_iter().map(Atom::Literal).collect();
    Ok((StemPattern::new(context, replaced), added, dots))
}

fn word_part(s: &str) -> std::result::Result<String, String> {
    let converted = convert_accents_counted(s).0.to_lowercase();
    if converted.chars().all(char::is_alphabetic) {
        Ok(converted)
    } else {
        Err(format!("unsupported affix text {s:?}"))
    }
}
