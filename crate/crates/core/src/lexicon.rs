//! Valence-arousal-dominance lexicons in the NRC tab-separated layout.
//!
//! Stored values live in `[0, 1]`; lookups map them onto `[-1, 1]` with `2x - 1`.

use std::collections::HashMap;
use std::path::Path;

use crate::emotion_set::{Emotion, EmotionSet};
use crate::error::{Error, Result};
use crate::point::VAPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VadEntry {
    pub valence: f64,
    pub arousal: f64,
    pub dominance: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, VadEntry>,
}

impl Lexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::io::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses TSV rows `word, valence, arousal, dominance`. A first row whose
    /// second column is not numeric is taken as a header. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if entries.is_empty()
                && n == 0
                && cols
                    .get(1)
                    .is_some_and(|c| c.trim().parse::<f64>().is_err())
            {
                continue;
            }
            if cols.len() != 4 {
                return Err(Error::MalformedRow {
                    line: line_no,
                    reason: format!("expected 4 tab-separated columns, found {}", cols.len()),
                });
            }
            let word = cols[0].trim().to_lowercase();
            if word.is_empty() {
                return Err(Error::MalformedRow {
                    line: line_no,
                    reason: "empty word".into(),
                });
            }
            let mut vals = [0.0; 3];
            for (slot, raw) in vals.iter_mut().zip(&cols[1..]) {
                let x: f64 = raw.trim().parse().map_err(|_| Error::MalformedRow {
                    line: line_no,
                    reason: format!("not a number: {raw:?}"),
                })?;
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::ValueOutOfRange {
                        line: line_no,
                        value: x,
                    });
                }
                *slot = x;
            }
            let entry = VadEntry {
                valence: vals[0],
                arousal: vals[1],
                dominance: vals[2],
            };
            if entries.insert(word.clone(), entry).is_some() {
                return Err(Error::DuplicateWord {
                    line: line_no,
                    word,
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored `[0, 1]` values for a word (after trimming and lowercasing).
    pub fn entry(&self, word: &str) -> Option<&VadEntry> {
        self.entries.get(&word.trim().to_lowercase())
    }

    pub fn lookup_va(&self, word: &str) -> Result<VAPoint> {
        let e = self
            .entry(word)
            .ok_or_else(|| Error::WordNotFound(word.to_string()))?;
        VAPoint::new(2.0 * e.valence - 1.0, 2.0 * e.arousal - 1.0)
    }

    /// Builds an emotion set from looked-up anchors. On failure, reports every
    /// missing word at once.
    pub fn build_set(&self, name: &str, words: &[String]) -> Result<EmotionSet> {
        let missing: Vec<&str> = words
            .iter()
            .filter(|w| self.entry(w).is_none())
            .map(String::as_str)
            .collect();
        if !missing.is_empty() {
            return Err(Error::WordNotFound(missing.join(", ")));
        }
        let emotions = words
            .iter()
            .map(|w| {
                Ok(Emotion {
                    label: w.trim().to_lowercase(),
                    anchor: self.lookup_va(w)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EmotionSet::new(name, emotions)
    }
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    Lexicon::load(path)
}

pub fn lookup_va(lex: &Lexicon, word: &str) -> Result<VAPoint> {
    lex.lookup_va(word)
}
