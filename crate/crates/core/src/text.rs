//! String normalization shared by every lookup path.

use unicode_normalization::UnicodeNormalization;

/// NFC-normalize and lowercase.
pub fn normalize(word: &str) -> String {
    word.nfc()
        .collect::<String>()
        .to_lowercase()
        .nfc()
        .collect()
}

/// Remove the acute accent from vowels (á → a). `ü` and `ñ` are kept.
pub fn strip_acute(word: &str) -> String {
    word.chars()
        .map(|c| match c {
            'á' => 'a',
            'é' => 'e',
            'í' => 'i',
            'ó' => 'o',
            'ú' => 'u',
            'Á' => 'A',
            'É' => 'E',
            'Í' => 'I',
            'Ó' => 'O',
            'Ú' => 'U',
            c => c,
        })
        .collect()
}

/// Length in chars of the longest common prefix.
pub fn common_prefix_len(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_decomposed_and_uppercase() {
        // "A" + combining acute
        assert_eq!(normalize("TABU\u{0301}"), "tabú");
        assert_eq!(normalize("AMAR"), "amar");
    }

    #[test]
    fn strips_accents() {
        assert_eq!(strip_acute("dámelo"), "damelo");
        assert_eq!(strip_acute("pingüino"), "pingüino");
    }

    #[test]
    fn prefix_len_counts_chars() {
        assert_eq!(common_prefix_len("canción", "canciones"), 5);
        assert_eq!(common_prefix_len("", "a"), 0);
    }
}
