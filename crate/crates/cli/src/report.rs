use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::Value;

/// A command's output: JSON for `--format json`, lines for text.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

impl Report {
    pub fn new(json: impl Serialize, text: impl Into<String>) -> Self {
        Report { json: serde_json::to_value(json).expect("reports serialize"), text: text.into(), code: 0 }
    }

    pub fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }
}

/// `{2..15, 34..64}` style rendering of an index set.
pub fn format_indices(set: &BTreeSet<u64>) -> String {
    let items: Vec<u64> = set.iter().copied().collect();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let mut j = i;
        while j + 1 < items.len() && items[j + 1] == items[j] + 1 {
            j += 1;
        }
        runs.push(if i == j { items[i].to_string() } else { format!("{}..{}", items[i], items[j]) });
        i = j + 1;
    }
    format!("{{{}}}", runs.join(", "))
}

/// Rounds to 12 decimal places so reports stay byte-stable.
pub fn stable(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}
