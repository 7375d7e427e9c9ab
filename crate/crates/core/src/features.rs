//! Closed feature vocabularies and the [`FeatureSet`] bundle attached to rules and analyses.

use std::fmt;
use std::str::FromStr;

macro_rules! feature_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl FromStr for $name {
            type Err = UnknownValue;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownValue {
                        kind: stringify!($name),
                        value: s.to_string(),
                    }),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

feature_enum!(
    /// Coarse part of speech.
    Pos {
        Verb => "verb",
        Noun => "noun",
        Adjective => "adjective",
        Pronoun => "pronoun",
        Other => "other",
    }
);

feature_enum!(Gender { Male => "male", Female => "female" });

feature_enum!(Number { Singular => "singular", Plural => "plural" });

feature_enum!(Person { First => "first", Second => "second", Third => "third" });

feature_enum!(Mood {
    Infinitive => "infinitive",
    Indicative => "indicative",
    Subjunctive => "subjunctive",
    Imperative => "imperative",
    Participle => "participle",
    Gerund => "gerund",
});

feature_enum!(Tense {
    Present => "present",
    Past => "past",
    Future => "future",
    Conditional => "conditional",
    Imperfect => "imperfect",
});

feature_enum!(Animacy { Animate => "animate", Inanimate => "inanimate" });

/// A feature value that is not part of its closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} value {value:?}")]
pub struct UnknownValue {
    pub kind: &'static str,
    pub value: String,
}

impl Pos {
    /// Accepts the full names plus the usual one-letter tags.
    pub fn parse_loose(s: &str) -> Option<Pos> {
        let s = s.trim().to_lowercase();
        match s.as_str() {
            "v" | "vb" => Some(Pos::Verb),
            "n" | "nn" => Some(Pos::Noun),
            "a" | "adj" => Some(Pos::Adjective),
            "p" | "pron" => Some(Pos::Pronoun),
            other => other.parse().ok(),
        }
    }
}

/// The labeled bundle carried by a rule or an analysis. `None` means unset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct FeatureSet {
    pub pos: Option<Pos>,
    pub gender: Option<Gender>,
    pub number: Option<Number>,
    pub person: Option<Person>,
    pub mood: Option<Mood>,
    pub tense: Option<Tense>,
    pub animate: Option<Animacy>,
}

/// The five features scored against annotated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Person,
    Mood,
    Tense,
    Number,
    Gender,
}

impl Feature {
    pub const SCORED: [Feature; 5] = [
        Feature::Person,
        Feature::Mood,
        Feature::Tense,
        Feature::Number,
        Feature::Gender,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Person => "person",
            Feature::Mood => "mood",
            Feature::Tense => "tense",
            Feature::Number => "number",
            Feature::Gender => "gender",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FeatureSet {
    pub fn with_pos(pos: Pos) -> Self {
        FeatureSet {
            pos: Some(pos),
            ..Default::default()
        }
    }

    /// The value of one scored feature as its vocabulary string.
    pub fn get(&self, feature: Feature) -> Option<&'static str> {
        match feature {
            Feature::Person => self.person.map(Person::as_str),
            Feature::Mood => self.mood.map(Mood::as_str),
            Feature::Tense => self.tense.map(Tense::as_str),
            Feature::Number => self.number.map(Number::as_str),
            Feature::Gender => self.gender.map(Gender::as_str),
        }
    }

    /// Check the part-of-speech conditional constraints.
    ///
    /// Mood and tense belong to verbs; person to verbs and pronouns; gender to
    /// nouns, adjectives and pronouns. An unset pos admits everything.
    pub fn validate(&self) -> Result<(), String> {
        let Some(pos) = self.pos else { return Ok(()) };
        if pos != Pos::Verb {
            if self.mood.is_some() {
                return Err(format!("mood is only valid for verbs, not {pos}"));
            }
            if self.tense.is_some() {
                return Err(format!("tense is only valid for verbs, not {pos}"));
            }
            if self.person.is_some() && pos != Pos::Pronoun {
                return Err(format!(
                    "person is only valid for verbs and pronouns, not {pos}"
                ));
            }
        }
        if self.gender.is_some() && matches!(pos, Pos::Verb | Pos::Other) {
            return Err(format!("gender is not valid for {pos}"));
        }
        Ok(())
    }
}

/// Parse one cell: empty or `-` is unset.
pub(crate) fn parse_cell<T: FromStr<Err = UnknownValue>>(
    cell: &str,
) -> Result<Option<T>, UnknownValue> {
    let cell = cell.trim();
    if cell.is_empty() || cell == "-" {
        Ok(None)
    } else {
        cell.parse().map(Some)
    }
}

/// Render an optional value, `-` when unset.
pub fn cell<T: fmt::Display>(value: Option<T>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enum_round_trip() {
        for m in Mood::ALL {
            assert_eq!(m.as_str().parse::<Mood>().unwrap(), *m);
        }
        assert!("pluperfect".parse::<Tense>().is_err());
    }

    #[test]
    fn cells_dash_and_empty_are_unset() {
        assert_eq!(parse_cell::<Gender>("-").unwrap(), None);
        assert_eq!(parse_cell::<Gender>("").unwrap(), None);
        assert_eq!(
            parse_cell::<Gender>("female").unwrap(),
            Some(Gender::Female)
        );
        assert!(parse_cell::<Gender>("neuter").is_err());
    }

    #[test]
    fn pos_conditional_constraints() {
        let noun_with_tense = FeatureSet {
            pos: Some(Pos::Noun),
            tense: Some(Tense::Past),
            ..Default::default()
        };
        assert!(noun_with_tense.validate().is_err());

        let verb_with_gender = FeatureSet {
            pos: Some(Pos::Verb),
            gender: Some(Gender::Male),
            ..Default::default()
        };
        assert!(verb_with_gender.validate().is_err());

        let pronoun = FeatureSet {
            pos: Some(Pos::Pronoun),
            person: Some(Person::First),
            gender: Some(Gender::Female),
            ..Default::default()
        };
        assert!(pronoun.validate().is_ok());

        let unset_pos = FeatureSet {
            mood: Some(Mood::Indicative),
            gender: Some(Gender::Male),
            ..Default::default()
        };
        assert!(unset_pos.validate().is_ok());
    }

    #[test]
    fn loose_pos_tags() {
        assert_eq!(Pos::parse_loose("V"), Some(Pos::Verb));
        assert_eq!(Pos::parse_loose("noun"), Some(Pos::Noun));
        assert_eq!(Pos::parse_loose("zz"), None);
    }
}
