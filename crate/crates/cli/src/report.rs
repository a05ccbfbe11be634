use std::fmt::Write as _;

use clap::ValueEnum;
use clifford_core::document::WorkbenchDocument;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
    Structured,
}

/// Output of one subcommand in all three channels.
pub struct Report {
    pub human: String,
    pub tsv: String,
    pub structured: String,
    pub violations: bool,
}

impl Report {
    pub fn new(human: impl Into<String>, structured: &impl Serialize) -> Self {
        Self {
            human: human.into(),
            tsv: String::new(),
            structured: serde_json::to_string_pretty(structured).expect("serializable report"),
            violations: false,
        }
    }

    /// A report whose structured channel is a document.
    pub fn document(human: impl Into<String>, doc: &WorkbenchDocument) -> Self {
        Self {
            human: human.into(),
            tsv: String::new(),
            structured: doc.to_json(),
            violations: false,
        }
    }

    pub fn tsv(mut self, tsv: String) -> Self {
        self.tsv = tsv;
        self
    }

    /// TSV from `key, value` rows.
    pub fn tsv_pairs<K: AsRef<str>, V: ToString>(self, rows: impl IntoIterator<Item = (K, V)>) -> Self {
        let mut out = String::from("key\tvalue\n");
        for (k, v) in rows {
            let _ = writeln!(out, "{}\t{}", k.as_ref(), v.to_string());
        }
        self.tsv(out)
    }

    pub fn violations(mut self, v: bool) -> Self {
        self.violations = v;
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = match format {
            Format::Human => self.human.clone(),
            Format::Tsv => self.tsv.clone(),
            Format::Structured => self.structured.clone(),
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

/// Space-separated labels.
pub fn join<S: AsRef<str>>(items: impl IntoIterator<Item = S>) -> String {
    items.into_iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().join(" ")
}

/// Cayley table with a header row, aligned on the widest label.
pub fn table(labels: &[String], cell: impl Fn(usize, usize) -> usize) -> String {
    let w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1);
    let pad = |s: &str| format!("{s:>w$}");
    let mut out = format!("{} |", pad(""));
    for l in labels {
        out.push(' ');
        out.push_str(&pad(l));
    }
    out.push('\n');
    for (i, l) in labels.iter().enumerate() {
        out.push_str(&pad(l));
        out.push_str(" |");
        for j in 0..labels.len() {
            out.push(' ');
            out.push_str(&pad(&labels[cell(i, j)]));
        }
        out.push('\n');
    }
    out
}
