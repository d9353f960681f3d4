use std::collections::HashMap;

use serde::Deserialize;

use super::WeightedPointCloud;
use crate::emotion_set::EmotionSet;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::point::VAPoint;

/// Resolves an emotion label to its VA anchor.
pub trait AnchorSource: Sync {
    fn resolve(&self, label: &str) -> Option<VAPoint>;
}

impl AnchorSource for EmotionSet {
    fn resolve(&self, label: &str) -> Option<VAPoint> {
        self.anchor_of(label)
            .or_else(|| self.anchor_of(label.trim()))
            .or_else(|| {
                let wanted = label.trim().to_lowercase();
                self.emotions()
                    .iter()
                    .find(|e| e.label.to_lowercase() == wanted)
                    .map(|e| e.anchor)
            })
    }
}

impl AnchorSource for Lexicon {
    fn resolve(&self, label: &str) -> Option<VAPoint> {
        self.lookup_va(label).ok()
    }
}

/// Tries each source in order.
pub struct AnchorChain<'a>(pub Vec<&'a dyn AnchorSource>);

impl AnchorSource for AnchorChain<'_> {
    fn resolve(&self, label: &str) -> Option<VAPoint> {
        self.0.iter().find_map(|s| s.resolve(label))
    }
}

/// One crowd annotation of an image.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationRecord {
    pub image_id: String,
    pub emotion_label: String,
    pub sentence_va: Option<VAPoint>,
}

#[derive(Deserialize)]
struct RawRecord {
    image_id: String,
    emotion: String,
    #[serde(default)]
    sentence_va: Option<[f64; 2]>,
}

impl AnnotationRecord {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawRecord = serde_json::from_str(s)?;
        if raw.image_id.is_empty() {
            return Err(Error::Format("empty image_id".into()));
        }
        let sentence_va = raw
            .sentence_va
            .map(|[v, a]| VAPoint::new(v, a))
            .transpose()?;
        Ok(Self {
            image_id: raw.image_id,
            emotion_label: raw.emotion,
            sentence_va,
        })
    }
}

/// Parses an annotations JSON Lines document. Blank lines are skipped; errors
/// carry the 1-based line number.
pub fn parse_annotations(text: &str) -> Result<Vec<AnnotationRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            AnnotationRecord::from_json_str(l).map_err(|e| Error::MalformedRow {
                line: n + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

/// Groups records by image id, in order of first appearance.
pub fn group_by_image(records: Vec<AnnotationRecord>) -> Vec<(String, Vec<AnnotationRecord>)> {
    let mut slots: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<(String, Vec<AnnotationRecord>)> = Vec::new();
    for r in records {
        match slots.get(&r.image_id) {
            Some(&k) => groups[k].1.push(r),
            None => {
                slots.insert(r.image_id.clone(), groups.len());
                groups.push((r.image_id.clone(), vec![r]));
            }
        }
    }
    groups
}

/// One point per label anchor plus one per sentence point, all equally weighted.
pub fn annotations_to_points(
    records: &[AnnotationRecord],
    anchors: &dyn AnchorSource,
) -> Result<WeightedPointCloud> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut points = Vec::with_capacity(records.len() * 2);
    for r in records {
        let anchor = anchors
            .resolve(&r.emotion_label)
            .ok_or_else(|| Error::UnresolvableLabel(r.emotion_label.clone()))?;
        points.push(anchor);
        points.extend(r.sentence_va);
    }
    WeightedPointCloud::uniform(points)
}
