use std::collections::HashMap;
use std::fmt::Write;
use std::sync::OnceLock;

use crate::model::ShapeKind;

pub const STRUCTURAL_SIZE: usize = 441;
pub const PADDING_SIZE: usize = 35;
pub const PRESET_SLOTS: u8 = 14;

const HIERARCHY: &[&str] = &["M", "M_END", "ASSET", "ASSET_END", "LAYER", "LAYER_END", "LAYER_KS", "GR_END"];

const PROPERTY: &[&str] = &[
    "PROP_STATIC",
    "PROP_ANIMATED",
    "PROP_KF_START",
    "PROP_KF_END",
    "KS_STATIC",
    "KS_ANIMATED",
    "t",
    "ease",
];

const FIELDS: &[&str] = &[
    "v", "fr", "ip", "op", "w", "h", "ddd", "id", "layers", "ty", "st", "bm", "ind", "parent", "p", "a", "s", "r",
    "o", "sk", "sa", "d", "or", "os", "pt", "sy", "ir", "is", "c", "lc", "lj", "ml", "e", "g", "i", "x",
];

const JSON: &[&str] = &["EXTRA", "J_ARR", "J_OBJ", "J_END", "true", "false", "null"];

const NUMERIC: &[&str] = &[
    "DIGIT_0", "DIGIT_1", "DIGIT_2", "DIGIT_3", "DIGIT_4", "DIGIT_5", "DIGIT_6", "DIGIT_7", "DIGIT_8", "DIGIT_9",
    "MINUS", "POINT", "EXP",
];

/// Fixed token table: structural entries with contiguous ids from 0,
/// followed by padding entries.
#[derive(Debug)]
pub struct Vocabulary {
    entries: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn get() -> &'static Vocabulary {
        static VOCAB: OnceLock<Vocabulary> = OnceLock::new();
        VOCAB.get_or_init(Vocabulary::build)
    }

    fn build() -> Vocabulary {
        let mut entries: Vec<String> = HIERARCHY.iter().map(|s| s.to_string()).collect();
        entries.extend(ShapeKind::SUPPORTED.iter().map(|k| format!("ITEM_{}", k.code())));
        entries.extend(PROPERTY.iter().map(|s| s.to_string()));
        entries.extend((1..=PRESET_SLOTS).map(|i| format!("EASE_{i}")));
        entries.extend(FIELDS.iter().map(|s| s.to_string()));
        entries.extend(JSON.iter().map(|s| s.to_string()));
        entries.extend(NUMERIC.iter().map(|s| s.to_string()));
        let reserved = STRUCTURAL_SIZE - entries.len();
        entries.extend((0..reserved).map(|i| format!("RESERVED_{i}")));
        entries.extend((0..PADDING_SIZE).map(|i| format!("PAD_{i}")));

        let ids: HashMap<String, u32> = entries.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        assert_eq!(ids.len(), entries.len(), "vocabulary names must be unique");
        Vocabulary { entries, ids }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn structural(&self) -> &[String] {
        &self.entries[..STRUCTURAL_SIZE]
    }

    pub fn padding(&self) -> &[String] {
        &self.entries[STRUCTURAL_SIZE..]
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.entries.get(id as usize).map(String::as_str)
    }

    /// Interned name for `name`, if it is a structural entry.
    pub fn intern(&'static self, name: &str) -> Option<&'static str> {
        let id = self.id(name)? as usize;
        (id < STRUCTURAL_SIZE).then(|| self.entries[id].as_str())
    }

    /// Markdown table of every entry, as frozen in the docs.
    pub fn render_markdown(&self) -> String {
        let mut out = String::from("# Token vocabulary\n\n");
        let _ = writeln!(
            out,
            "{} structural entries (ids 0-{}) and {} padding entries (ids {}-{}).\n",
            STRUCTURAL_SIZE,
            STRUCTURAL_SIZE - 1,
            PADDING_SIZE,
            STRUCTURAL_SIZE,
            self.len() - 1
        );
        out.push_str("| id | token |\n|---:|---|\n");
        for (i, e) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "| {i} | `<|{e}|>` |");
        }
        out
    }
}
