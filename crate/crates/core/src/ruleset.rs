//! The feature-bearing affix rule table.
//!
//! One rule per TSV row: a flag, a `stem_ending` pattern, a `morph_ending`
//! replacement, and the feature columns. Rules are applied forward
//! (root to form) both when expanding entries and when checking whether a
//! root explains a surface form.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::features::{parse_cell, FeatureSet};
use crate::lexicon::LexEntry;
use crate::pattern::StemPattern;

const RESOURCE: &str = "rule table";

/// Column names in canonical order.
pub const COLUMNS: [&str; 10] = [
    "flag",
    "stem_ending",
    "morph_ending",
    "pos",
    "gender",
    "number",
    "person",
    "mood",
    "tense",
    "animate",
];

/// Stable identifier of a rule: its zero-based data-row position in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId(pub usize);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphRule {
    pub id: RuleId,
    pub flag: char,
    pub stem_ending: StemPattern,
    pub morph_ending: String,
    pub features: FeatureSet,
}

impl MorphRule {
    /// Apply to a root; `None` when the stem pattern does not match or the
    /// result would be empty.
    pub fn apply(&self, root: &str) -> Option<String> {
        let cut = self.stem_ending.split(root)?;
        if cut == 0 && self.morph_ending.is_empty() {
            return None;
        }
        let mut form = String::with_capacity(cut + self.morph_ending.len());
        form.push_str(&root[..cut]);
        form.push_str(&self.morph_ending);
        Some(form)
    }

    /// Whether applying to `root` replaces the whole root.
    pub fn replaces_whole(&self, root: &str) -> bool {
        self.stem_ending.replaced_len() == root.chars().count()
    }
}

/// Forward application of one rule to one root.
pub fn apply_rule(root: &str, rule: &MorphRule) -> Option<String> {
    rule.apply(root)
}

/// One generated form of an entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub form: String,
    pub rule: RuleId,
    pub features: FeatureSet,
}

#[derive(Debug, Clone, Default)]
pub struct RuleTable {
    rules: Vec<MorphRule>,
    by_flag: HashMap<char, Vec<usize>>,
}

impl RuleTable {
    pub fn from_rules(rules: Vec<MorphRule>) -> Self {
        let mut by_flag: HashMap<char, Vec<usize>> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            by_flag.entry(rule.flag).or_default().push(i);
        }
        RuleTable { rules, by_flag }
    }

    /// Parse a TSV rule table with a header row naming the ten columns.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut columns: Option<[usize; 10]> = None;
        let mut rules = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = line.split('\t').collect();
            match &columns {
                None => columns = Some(parse_header(&cells, line_no)?),
                Some(cols) => {
                    let rule = parse_row(&cells, cols, RuleId(rules.len()), line_no)?;
                    rules.push(rule);
                }
            }
        }
        if columns.is_none() {
            log::warn!("rule table has no header row");
        }
        Ok(RuleTable::from_rules(rules))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        RuleTable::load(text.as_bytes())
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[MorphRule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &MorphRule {
        &self.rules[id.0]
    }

    pub fn has_flag(&self, flag: char) -> bool {
        self.by_flag.contains_key(&flag)
    }

    pub fn flags(&self) -> impl Iterator<Item = char> + '_ {
        self.by_flag.keys().copied()
    }

    /// Rules carrying `flag`, in file order.
    pub fn rules_for(&self, flag: char) -> impl Iterator<Item = &MorphRule> + '_ {
        self.by_flag
            .get(&flag)
            .into_iter()
            .flatten()
            .map(|&i| &self.rules[i])
    }

    /// Rules licensed by an entry: flag order, then file order. Unknown
    /// flags are skipped with a warning.
    pub fn licensed<'a>(&'a self, entry: &'a LexEntry) -> impl Iterator<Item = &'a MorphRule> + 'a {
        entry.flags().iter().flat_map(move |flag| {
            if !self.has_flag(*flag) {
                log::warn!("flag {flag} on {:?} has no rules", entry.root());
            }
            self.rules_for(*flag)
        })
    }

    /// Every form the entry's licensed rules produce.
    pub fn expand_entry(&self, entry: &LexEntry) -> Vec<Expansion> {
        self.licensed(entry)
            .filter_map(|rule| {
                rule.apply(entry.root()).map(|form| Expansion {
                    form,
                    rule: rule.id,
                    features: rule.features,
                })
            })
            .collect()
    }

    /// Licensed rules of `entry` that turn its root into `surface`.
    pub fn reverse_candidates(&self, surface: &str, entry: &LexEntry) -> Vec<(RuleId, FeatureSet)> {
        self.licensed(entry)
            .filter(|rule| {
                surface.ends_with(rule.morph_ending.as_str())
                    && rule.apply(entry.root()).as_deref() == Some(surface)
            })
            .map(|rule| (rule.id, rule.features))
            .collect()
    }

    /// Longest `morph_ending` in chars.
    pub fn max_morph_len(&self) -> usize {
        self.rules
            .iter()
            .map(|r| r.morph_ending.chars().count())
            .max()
            .unwrap_or(0)
    }

    /// Serialize back to TSV with a canonical header.
    pub fn to_tsv(&self) -> String {
        let mut out = COLUMNS.join("\t");
        out.push('\n');
        for rule in &self.rules {
            out.push_str(&rule_row(rule));
            out.push('\n');
        }
        out
    }
}

fn canonical_column(name: &str) -> Option<usize> {
    let name = name.trim().to_lowercase().replace([' ', '-'], "_");
    let name = match name.as_str() {
        "stem_end" | "stem" => "stem_ending",
        "morph_end" | "morph" => "morph_ending",
        "animacy" => "animate",
        other => other,
    };
    COLUMNS.iter().position(|c| *c == name)
}

fn parse_header(cells: &[&str], line_no: usize) -> Result<[usize; 10]> {
    let mut positions = [usize::MAX; 10];
    for (i, cell) in cells.iter().enumerate() {
        if cell.trim().is_empty() {
            continue;
        }
        let col = canonical_column(cell).ok_or_else(|| {
            Error::parse(
                RESOURCE,
                line_no,
                format!("unknown column {:?}", cell.trim()),
            )
        })?;
        if positions[col] != usize::MAX {
            return Err(Error::parse(
                RESOURCE,
                line_no,
                format!("duplicate column {:?}", COLUMNS[col]),
            ));
        }
        positions[col] = i;
    }
    if let Some(missing) = positions.iter().position(|p| *p == usize::MAX) {
        return Err(Error::parse(
            RESOURCE,
            line_no,
            format!("missing column {:?}", COLUMNS[missing]),
        ));
    }
    Ok(positions)
}

fn parse_row(cells: &[&str], cols: &[usize; 10], id: RuleId, line_no: usize) -> Result<MorphRule> {
    let get = |col: usize| cells.get(cols[col]).map_or("", |c| c.trim());
    let fail = |message: String| Error::parse(RESOURCE, line_no, message);

    let flag_cell = get(0);
    let mut flag_chars = flag_cell.chars();
    let flag = match (flag_chars.next(), flag_chars.next()) {
        (Some(c), None) if c.is_ascii_alphabetic() => c,
        _ => {
            return Err(fail(format!(
                "flag must be one ASCII letter, got {flag_cell:?}"
            )))
        }
    };

    let stem_cell: String = dash_empty(get(1)).nfc().collect();
    let stem_ending: StemPattern = stem_cell.parse().map_err(|e| fail(format!("{e}")))?;
    let morph_ending: String = dash_empty(get(2)).nfc().collect();

    let value_err = |e: crate::features::UnknownValue| fail(e.to_string());
    let features = FeatureSet {
        pos: parse_cell(get(3)).map_err(value_err)?,
        gender: parse_cell(get(4)).map_err(value_err)?,
        number: parse_cell(get(5)).map_err(value_err)?,
        person: parse_cell(get(6)).map_err(value_err)?,
        mood: parse_cell(get(7)).map_err(value_err)?,
        tense: parse_cell(get(8)).map_err(value_err)?,
        animate: parse_cell(get(9)).map_err(value_err)?,
    };
    features.validate().map_err(fail)?;

    Ok(MorphRule {
        id,
        flag,
        stem_ending,
        morph_ending,
        features,
    })
}

fn dash_empty(cell: &str) -> &str {
    if cell == "-" {
        ""
    } else {
        cell
    }
}

/// One TSV row in canonical column order.
pub fn rule_row(rule: &MorphRule) -> String {
    use crate::features::cell;
    let f = &rule.features;
    let stem = rule.stem_ending.to_string();
    [
        rule.flag.to_string(),
        if stem.is_empty() { "-".into() } else { stem },
        if rule.morph_ending.is_empty() {
            "-".into()
        } else {
            rule.morph_ending.clone()
        },
        cell(f.pos),
        cell(f.gender),
        cell(f.number),
        cell(f.person),
        cell(f.mood),
        cell(f.tense),
        cell(f.animate),
    ]
    .join("\t")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{Gender, Mood, Number, Person, Pos, Tense};

    const HEADER: &str =
        "flag\tstem_ending\tmorph_ending\tpos\tgender\tnumber\tperson\tmood\ttense\tanimate\n";

    fn table(rows: &str) -> RuleTable {
        RuleTable::from_text(&format!("{HEADER}{rows}")).unwrap()
    }

    fn rule(flag: char, stem: &str, morph: &str) -> MorphRule {
        MorphRule {
            id: RuleId(0),
            flag,
            stem_ending: stem.parse().unwrap(),
            morph_ending: morph.into(),
            features: FeatureSet::default(),
        }
    }

    #[test]
    fn first_person_present_row() {
        let t = table("V\tar\to\tverb\t\tsingular\tfirst\tindicative\tpresent\t\n");
        let r = &t.rules()[0];
        assert_eq!(r.flag, 'V');
        assert_eq!(r.stem_ending.to_string(), "ar");
        assert_eq!(r.morph_ending, "o");
        assert_eq!(r.features.pos, Some(Pos::Verb));
        assert_eq!(r.features.number, Some(Number::Singular));
        assert_eq!(r.features.person, Some(Person::First));
        assert_eq!(r.features.mood, Some(Mood::Indicative));
        assert_eq!(r.features.tense, Some(Tense::Present));
        assert_eq!(r.features.gender, None);
    }

    #[test]
    fn plural_row_with_context_only() {
        let t = table("S\t(?<=[a])\ts\tnoun\tfemale\tplural\t-\t-\t-\t-\n");
        let r = &t.rules()[0];
        assert_eq!(r.stem_ending.replaced_len(), 0);
        assert_eq!(r.stem_ending.context().len(), 1);
        assert_eq!(r.features.gender, Some(Gender::Female));
        assert_eq!(r.apply("vaca").as_deref(), Some("vacas"));
    }

    #[test]
    fn header_only() {
        assert!(table("").is_empty());
    }

    #[test]
    fn header_aliases_and_order() {
        let t = RuleTable::from_text(
            "Flag\tStem End\tMorph End\tpos\tgender\tnumber\tperson\tmood\ttense\tanimate\n\
             V\tar\to\tverb\t-\t-\t-\t-\t-\t-\n",
        )
        .unwrap();
        assert_eq!(t.len(), 1);
        let t = RuleTable::from_text(
            "pos\tflag\tmorph_ending\tstem_ending\tgender\tnumber\tperson\tmood\ttense\tanimate\n\
             noun\tS\ts\t(?<=a)\tfemale\tplural\t\t\t\t\n",
        )
        .unwrap();
        assert_eq!(t.rules()[0].apply("casa").as_deref(), Some("casas"));
    }

    #[test]
    fn load_errors_name_rows() {
        let err = RuleTable::from_text(
            "flag\tstem\tmorph\tpos\tcolour\tnumber\tperson\tmood\ttense\tanimate\n",
        )
        .unwrap_err();
        assert_eq!(err.line(), Some(1));
        assert!(err.to_string().contains("colour"));

        let err =
            RuleTable::from_text(&format!("{HEADER}V\tar\to\tverb\n# c\nV\ta|r\to\n")).unwrap_err();
        assert_eq!(err.line(), Some(4));

        let err = RuleTable::from_text(&format!("{HEADER}V\tar\to\tverb\tneuter\n")).unwrap_err();
        assert_eq!(err.line(), Some(2));

        let err =
            RuleTable::from_text(&format!("{HEADER}S\ta\ts\tnoun\t\t\t\t\tpast\n")).unwrap_err();
        assert!(err.to_string().contains("tense"));

        let err = RuleTable::from_text(&format!("{HEADER}VV\tar\to\n")).unwrap_err();
        assert_eq!(err.line(), Some(2));

        let err = RuleTable::from_text("flag\tstem_ending\tmorph_ending\n").unwrap_err();
        assert!(err.to_string().contains("missing column"));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(
            apply_rule("amar", &rule('V', "ar", "o")).as_deref(),
            Some("amo")
        );
        assert_eq!(
            apply_rule("vencer", &rule('V', "cer", "zo")).as_deref(),
            Some("venzo")
        );
        let r = rule('V', "(?<=[^cg])er", "o");
        assert_eq!(apply_rule("comer", &r).as_deref(), Some("como"));
        assert_eq!(apply_rule("coger", &r), None);
        assert_eq!(
            apply_rule("coger", &rule('V', "ger", "jo")).as_deref(),
            Some("cojo")
        );
        assert_eq!(apply_rule("amar", &rule('S', "(?<=[a])", "s")), None);
    }

    #[test]
    fn context_is_preserved() {
        let r = rule('S', "(?<=[úíjlmry])", "es");
        assert_eq!(r.apply("tabú").as_deref(), Some("tabúes"));
        let r = rule('S', "(?<=[cs]i)ón", "ones");
        assert_eq!(r.apply("canción").as_deref(), Some("canciones"));
    }

    #[test]
    fn expand_and_reverse() {
        let t = table(
            "V\tar\to\tverb\t\tsingular\tfirst\tindicative\tpresent\t\n\
             S\t(?<=[a])\ts\tnoun\tfemale\tplural\t\t\t\t\n\
             S\t(?<=[a])\t-\tnoun\tfemale\tsingular\t\t\t\t\n\
             S\t(?<=[úíjlmry])\tes\tnoun\tmale\tplural\t\t\t\t\n",
        );
        let vaca = LexEntry::new("vaca", ['S']);
        let forms: Vec<String> = t.expand_entry(&vaca).into_iter().map(|e| e.form).collect();
        assert_eq!(forms, vec!["vacas", "vaca"]);

        let tabu = LexEntry::new("tabú", ['S']);
        let forms: Vec<String> = t.expand_entry(&tabu).into_iter().map(|e| e.form).collect();
        assert_eq!(forms, vec!["tabúes"]);

        let amar = LexEntry::new("amar", ['V']);
        assert_eq!(t.reverse_candidates("amo", &amar).len(), 1);
        assert_eq!(t.reverse_candidates("amo", &vaca), vec![]);

        let bare = LexEntry::new("y", []);
        assert!(t.expand_entry(&bare).is_empty());

        // unknown flags are skipped
        let odd = LexEntry::new("amar", ['Q', 'V']);
        assert_eq!(t.expand_entry(&odd).len(), 1);
    }

    #[test]
    fn tsv_round_trip() {
        let t = table(
            "V\t(?<=[^cg])er\to\tverb\t\tsingular\tfirst\tindicative\tpresent\t\n\
             S\t(?<=[a])\t\tnoun\tfemale\tsingular\t\t\t\tanimate\n",
        );
        let again = RuleTable::from_text(&t.to_tsv()).unwrap();
        assert_eq!(t.rules(), again.rules());
    }
}
