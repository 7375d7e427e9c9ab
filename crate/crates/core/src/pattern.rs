//! The restricted suffix-pattern dialect used in the `stem_ending` column.
//!
//! A pattern is an optional retained context `(?<=...)` followed by the part
//! that gets replaced. Both parts are sequences of atoms: a literal
//! character, a class `[abc]` or a negated class `[^abc]`. The whole pattern
//! is anchored at the end of the root. Nothing else is accepted.
//!
//! ```text
//! ar               replace "ar"
//! (?<=[^cg])er     replace "er" when preceded by anything but c or g
//! (?<=[a])         replace nothing after a final "a"
//! ```

use std::fmt;
use std::str::FromStr;

const SPECIAL: &[char] = &[
    '(', ')', '[', ']', '^', '.', '*', '+', '?', '|', '{', '}', '$', '\\',
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Literal(char),
    Class { negated: bool, members: Vec<char> },
}

impl Atom {
    pub fn matches(&self, c: char) -> bool {
        match self {
            Atom::Literal(l) => *l == c,
            Atom::Class { negated, members } => members.contains(&c) != *negated,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Literal(c) => write!(f, "{c}"),
            Atom::Class { negated, members } => {
                f.write_str("[")?;
                if *negated {
                    f.write_str("^")?;
                }
                for c in members {
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid stem pattern {pattern:?}: {reason}")]
pub struct PatternError {
    pub pattern: String,
    pub reason: String,
}

/// A compiled `stem_ending`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StemPattern {
    context: Vec<Atom>,
    replaced: Vec<Atom>,
}

impl StemPattern {
    pub fn new(context: Vec<Atom>, replaced: Vec<Atom>) -> Self {
        StemPattern { context, replaced }
    }

    /// A pattern replacing exactly this literal suffix.
    pub fn literal(suffix: &str) -> Self {
        StemPattern {
            context: Vec::new(),
            replaced: suffix.chars().map(Atom::Literal).collect(),
        }
    }

    pub fn context(&self) -> &[Atom] {
        &self.context
    }

    pub fn replaced(&self) -> &[Atom] {
        &self.replaced
    }

    /// Number of trailing characters removed on a match.
    pub fn replaced_len(&self) -> usize {
        self.replaced.len()
    }

    /// Minimum root length (in chars) this pattern can match.
    pub fn min_len(&self) -> usize {
        self.context.len() + self.replaced.len()
    }

    /// Whether the pattern matches the end of `word`.
    pub fn matches(&self, word: &str) -> bool {
        self.split(word).is_some()
    }

    /// On a match, the byte offset where the replaced part begins.
    pub fn split(&self, word: &str) -> Option<usize> {
        let atoms = self.context.iter().chain(self.replaced.iter());
        let n = self.min_len();
        let mut tail = word.char_indices().rev();
        let mut offsets = Vec::with_capacity(n);
        for atom in atoms.rev() {
            let (offset, c) = tail.next()?;
            if !atom.matches(c) {
                return None;
            }
            offsets.push(offset);
        }
        // offsets run from the last char backwards; the replaced part starts
        // at the offset of its first atom
        Some(match self.replaced.len() {
            0 => word.len(),
            k => offsets[k - 1],
        })
    }
}

impl fmt::Display for StemPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.context.is_empty() {
            f.write_str("(?<=")?;
            for atom in &self.context {
                write!(f, "{atom}")?;
            }
            f.write_str(")")?;
        }
        for atom in &self.replaced {
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl FromStr for StemPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PatternError {
            pattern: s.to_string(),
            reason: reason.to_string(),
        };
        let mut chars = s.chars().peekable();
        let mut context = Vec::new();
        if let Some(rest) = s.strip_prefix("(?<=") {
            chars = rest.chars().peekable();
            loop {
                match chars.peek() {
                    None => return Err(err("unterminated context group")),
                    Some(')') => {
                        chars.next();
                        break;
                    }
                    Some(_) => context.push(parse_atom(&mut chars).map_err(|r| err(&r))?),
                }
            }
            if context.is_empty() {
                return Err(err("empty context group"));
            }
        }
        let mut replaced = Vec::new();
        while chars.peek().is_some() {
            replaced.push(parse_atom(&mut chars).map_err(|r| err(&r))?);
        }
        Ok(StemPattern { context, replaced })
    }
}

fn parse_atom(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> Result<Atom, String> {
    match chars.next() {
        Some('[') => {
            let negated = chars.peek() == Some(&'^');
            if negated {
                chars.next();
            }
            let mut members = Vec::new();
            loop {
                match chars.next() {
                    None => return Err("unterminated character class".into()),
                    Some(']') => break,
                    Some(c) if SPECIAL.contains(&c) => {
                        return Err(format!("{c:?} is not allowed inside a class"))
                    }
                    Some(c) => members.push(c),
                }
            }
            if members.is_empty() {
                return Err("empty character class".into());
            }
            Ok(Atom::Class { negated, members })
        }
        Some(c) if SPECIAL.contains(&c) => Err(format!("unsupported construct {c:?}")),
        Some(c) if c.is_whitespace() => Err("whitespace in pattern".into()),
        Some(c) => Ok(Atom::Literal(c)),
        None => Err("unexpected end of pattern".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> StemPattern {
        s.parse().unwrap()
    }

    #[test]
    fn literal_suffix() {
        let pat = p("ar");
        assert!(pat.context().is_empty());
        assert_eq!(pat.replaced_len(), 2);
        assert_eq!(pat.split("amar"), Some(2));
        assert_eq!(pat.split("comer"), None);
    }

    #[test]
    fn negated_context() {
        let pat = p("(?<=[^cg])er");
        assert_eq!(pat.context().len(), 1);
        assert!(pat.matches("comer"));
        assert!(!pat.matches("coger"));
        assert!(!pat.matches("er"));
    }

    #[test]
    fn empty_replaced_part() {
        let pat = p("(?<=[a])");
        assert_eq!(pat.replaced_len(), 0);
        assert_eq!(pat.split("vaca"), Some(4));
        assert_eq!(pat.split("toro"), None);
    }

    #[test]
    fn multibyte_offsets() {
        let pat = p("(?<=[cs]i)ón");
        let word = "canción";
        let at = pat.split(word).unwrap();
        assert_eq!(&word[..at], "canci");
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "ar",
            "(?<=[^cg])er",
            "(?<=[a])",
            "(?<=[úíjlmry])",
            "z",
            "(?<=[cs]i)ón",
            "",
        ] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn rejects_unsupported_syntax() {
        for s in [
            "a|b", "ar$", "a*", "(?<=a", "[]", "[ab", "(?<=)ar", ".r", "(ar)",
        ] {
            assert!(s.parse::<StemPattern>().is_err(), "{s} should be rejected");
        }
    }

    #[test]
    fn whole_word_match() {
        let pat = p("ser");
        assert_eq!(pat.split("ser"), Some(0));
        assert_eq!(pat.min_len(), 3);
    }
}
