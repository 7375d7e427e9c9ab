//! The root-word dictionary.
//!
//! Entries are kept sorted by root in code-point order so that the analyzer
//! can binary-search for the insertion point of a surface form and walk
//! outward over neighboring roots that share its first letter.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::text::normalize;

const RESOURCE: &str = "dictionary";

/// A root word plus the rule flags licensed for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    root: String,
    flags: Vec<char>,
}

impl LexEntry {
    /// Build an entry. The root is normalized; flags are sorted and deduplicated.
    pub fn new(root: &str, flags: impl IntoIterator<Item = char>) -> Self {
        let mut flags: Vec<char> = flags.into_iter().collect();
        flags.sort_unstable();
        flags.dedup();
        LexEntry {
            root: normalize(root),
            flags,
        }
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    /// Flags in ascending order.
    pub fn flags(&self) -> &[char] {
        &self.flags
    }

    pub fn has_flag(&self, flag: char) -> bool {
        self.flags.binary_search(&flag).is_ok()
    }

    fn merge_flags(&mut self, other: &[char]) {
        self.flags.extend_from_slice(other);
        self.flags.sort_unstable();
        self.flags.dedup();
    }
}

impl fmt::Display for LexEntry {
    /// `root` or `root/FLAGS`, the dictionary line format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.root)?;
        if !self.flags.is_empty() {
            f.write_str("/")?;
            for flag in &self.flags {
                write!(f, "{flag}")?;
            }
        }
        Ok(())
    }
}

/// Sorted, deduplicated dictionary of roots. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    index: HashMap<String, usize>,
}

impl Lexicon {
    /// Build from arbitrary entries; duplicate roots merge their flag sets.
    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Self {
        let mut entries: Vec<LexEntry> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.root.cmp(&b.root));
        let mut merged: Vec<LexEntry> = Vec::with_capacity(entries.len());
        for entry in entries {
            match merged.last_mut() {
                Some(last) if last.root == entry.root => last.merge_flags(&entry.flags),
                _ => merged.push(entry),
            }
        }
        let index = merged
            .iter()
            .enumerate()
            .map(|(i, e)| (e.root.clone(), i))
            .collect();
        Lexicon {
            entries: merged,
            index,
        }
    }

    /// Load `word` / `word/FLAGS` lines. `#` lines and blank lines are skipped.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            if let Some(entry) = parse_line(&line, i + 1)? {
                entries.push(entry);
            }
        }
        Ok(Lexicon::from_entries(entries))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Lexicon::load(text.as_bytes())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn get(&self, position: usize) -> Option<&LexEntry> {
        self.entries.get(position)
    }

    /// Exact lookup. The argument must already be NFC lowercase.
    pub fn lookup(&self, root: &str) -> Option<&LexEntry> {
        self.position(root).map(|i| &self.entries[i])
    }

    pub fn position(&self, root: &str) -> Option<usize> {
        self.index.get(root).copied()
    }

    /// Roots sharing the first character of `surface`, nearest to its
    /// insertion point first, alternating upward and downward.
    pub fn neighbor_roots<'a>(&'a self, surface: &str) -> NeighborRoots<'a> {
        let start = self.entries.partition_point(|e| e.root.as_str() < surface);
        let first = surface.chars().next();
        NeighborRoots {
            entries: &self.entries,
            first,
            below: start,
            above: start,
            below_open: first.is_some(),
            above_open: first.is_some(),
            take_above: true,
        }
    }

    /// Dictionary lines for every entry, in sorted order.
    pub fn to_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.entries.iter().map(|e| e.to_string())
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<LexEntry>> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let (word, flags) = match line.split_once('/') {
        Some((word, flags)) => (word.trim(), flags.trim()),
        None => (line, ""),
    };
    if word.is_empty() {
        return Err(Error::parse(RESOURCE, line_no, "empty root"));
    }
    if let Some(bad) = flags.chars().find(|c| !c.is_ascii_alphabetic()) {
        return Err(Error::parse(
            RESOURCE,
            line_no,
            format!("invalid flag character {bad:?}"),
        ));
    }
    Ok(Some(LexEntry::new(word, flags.chars())))
}

/// Which side of the insertion point an entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Outward walk over same-first-letter roots. See [`Lexicon::neighbor_roots`].
#[derive(Debug, Clone)]
pub struct NeighborRoots<'a> {
    entries: &'a [LexEntry],
    first: Option<char>,
    // next candidate below is entries[below - 1]; above is entries[above]
    below: usize,
    above: usize,
    below_open: bool,
    above_open: bool,
    take_above: bool,
}

impl<'a> NeighborRoots<'a> {
    /// Stop walking in one direction.
    pub fn close(&mut self, side: Side) {
        match side {
            Side::Below => self.below_open = false,
            Side::Above => self.above_open = false,
        }
    }

    fn shares_first(&self, entry: &LexEntry) -> bool {
        entry.root.chars().next() == self.first
    }

    fn step_above(&mut self) -> Option<(Side, usize, &'a LexEntry)> {
        let entries = self.entries;
        match entries.get(self.above) {
            Some(e) if self.shares_first(e) => {
                self.above += 1;
                Some((Side::Above, self.above - 1, e))
            }
            _ => {
                self.above_open = false;
                None
            }
        }
    }

    fn step_below(&mut self) -> Option<(Side, usize, &'a LexEntry)> {
        let entries = self.entries;
        if self.below == 0 {
            self.below_open = false;
            return None;
        }
        let e = &entries[self.below - 1];
        if self.shares_first(e) {
            self.below -= 1;
            Some((Side::Below, self.below, e))
        } else {
            self.below_open = false;
            None
        }
    }

    /// Next entry together with its side and position in the lexicon.
    pub fn next_positioned(&mut self) -> Option<(Side, usize, &'a LexEntry)> {
        loop {
            if !self.above_open && !self.below_open {
                return None;
            }
            let from_above = if self.above_open && self.below_open {
                self.take_above
            } else {
                self.above_open
            };
            let item = if from_above {
                self.step_above()
            } else {
                self.step_below()
            };
            if item.is_some() {
                self.take_above = !from_above;
                return item;
            }
        }
    }
}

impl<'a> Iterator for NeighborRoots<'a> {
    type Item = &'a LexEntry;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_positioned().map(|(_, _, e)| e)
    }
}
