//! Ending-pattern defaults for words no dictionary root explains.

use std::io::BufRead;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::features::{parse_cell, FeatureSet, Pos, UnknownValue};

const RESOURCE: &str = "default table";
const COLUMNS: [&str; 8] = [
    "ending", "pos", "gender", "number", "person", "mood", "tense", "animate",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultRow {
    /// Literal suffix; empty matches every word.
    pub ending: String,
    pub features: FeatureSet,
}

/// Ordered ending table. Lookup picks the longest matching ending, then the
/// earliest row.
#[derive(Debug, Clone, Default)]
pub struct DefaultTable {
    rows: Vec<DefaultRow>,
}

impl DefaultTable {
    pub fn new(rows: Vec<DefaultRow>) -> Self {
        DefaultTable { rows }
    }

    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut columns: Option<[usize; 8]> = None;
        let mut rows = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = line.split('\t').collect();
            let Some(cols) = &columns else {
                columns = Some(parse_header(&cells, line_no)?);
                continue;
            };
            let get = |col: usize| cells.get(cols[col]).map_or("", |c| c.trim());
            let fail = |e: UnknownValue| Error::parse(RESOURCE, line_no, e.to_string());
            let ending = match get(0) {
                "-" => String::new(),
                e => e.nfc().collect::<String>().to_lowercase(),
            };
            let features = FeatureSet {
                pos: parse_cell(get(1)).map_err(fail)?,
                gender: parse_cell(get(2)).map_err(fail)?,
                number: parse_cell(get(3)).map_err(fail)?,
                person: parse_cell(get(4)).map_err(fail)?,
                mood: parse_cell(get(5)).map_err(fail)?,
                tense: parse_cell(get(6)).map_err(fail)?,
                animate: parse_cell(get(7)).map_err(fail)?,
            };
            features
                .validate()
                .map_err(|m| Error::parse(RESOURCE, line_no, m))?;
            rows.push(DefaultRow { ending, features });
        }
        Ok(DefaultTable { rows })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        DefaultTable::load(text.as_bytes())
    }

    pub fn rows(&self) -> &[DefaultRow] {
        &self.rows
    }

    /// Features for `word` (NFC lowercase), restricted to rows of `pos` when given.
    ///
    /// Single characters and words without letters get `pos=other` and
    /// nothing else. A hint that no row matches yields just that pos.
    pub fn features(&self, word: &str, pos: Option<Pos>) -> FeatureSet {
        let mut chars = word.chars();
        let single = chars.next().is_some() && chars.next().is_none();
        if single || !word.chars().any(char::is_alphabetic) {
            return FeatureSet::with_pos(Pos::Other);
        }
        let mut best: Option<&DefaultRow> = None;
        for row in &self.rows {
            if pos.is_some() && row.features.pos != pos {
                continue;
            }
            if !word.ends_with(row.ending.as_str()) {
                continue;
            }
            match best {
                Some(b) if b.ending.chars().count() >= row.ending.chars().count() => {}
                _ => best = Some(row),
            }
        }
        match (best, pos) {
            (Some(row), _) => row.features,
            (None, Some(p)) => FeatureSet::with_pos(p),
            (None, None) => FeatureSet::with_pos(Pos::Other),
        }
    }
}

fn parse_header(cells: &[&str], line_no: usize) -> Result<[usize; 8]> {
    let mut positions = [usize::MAX; 8];
    for (i, cell) in cells.iter().enumerate() {
        let name = cell.trim().to_lowercase();
        if name.is_empty() {
            continue;
        }
        let col = COLUMNS
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::parse(RESOURCE, line_no, format!("unknown column {name:?}")))?;
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
