//! The sectioned plain-text layout shared by record and summary files.
//!
//! A file starts with `#` header lines (provenance that may differ between
//! otherwise identical files), followed by the body: sections introduced by
//! `== name ==` lines. Section contents are either TOML key-value pairs or
//! whitespace-separated tables with a header row.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::FormatError;

/// A section of a parsed file; line numbers are 1-based file lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Section<'a> {
    pub name: &'a str,
    pub line: usize,
    pub lines: Vec<(usize, &'a str)>,
}

impl<'a> Section<'a> {
    /// The section's lines joined back into text, for TOML parsing.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (_, line) in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    /// Parses the section as TOML, mapping errors to file lines.
    pub fn toml<T: serde::de::DeserializeOwned>(&self) -> Result<T, FormatError> {
        let text = self.text();
        toml::from_str(&text).map_err(|e| {
            let offset = e.span().map_or(0, |span| span.start);
            let within = text[..offset.min(text.len())].matches('\n').count();
            let line = self.lines.get(within).map_or(self.line, |(n, _)| *n);
            FormatError::new(line, format!("section `{}`: {}", self.name, e.message().trim()))
        })
    }

    /// Rows of a table section, after checking its header row.
    pub fn table(&self, header: &[&str]) -> Result<Vec<(usize, Vec<&'a str>)>, FormatError> {
        let mut rows = self.lines.iter().filter(|(_, l)| !l.trim().is_empty());
        let Some((line, first)) = rows.next() else {
            return Err(FormatError::new(self.line, format!("section `{}` has no header row", self.name)));
        };
        let found: Vec<&str> = first.split_whitespace().collect();
        if found != header {
            return Err(FormatError::new(
                *line,
                format!("section `{}`: expected columns `{}`", self.name, header.join(" ")),
            ));
        }
        Ok(rows.map(|(n, l)| (*n, l.split_whitespace().collect())).collect())
    }
}

pub fn section_marker(name: &str) -> String {
    format!("== {name} ==")
}

fn parse_marker(line: &str) -> Option<&str> {
    line.trim()
        .strip_prefix("== ")
        .and_then(|rest| rest.strip_suffix(" =="))
        .map(str::trim)
}

/// The text after the leading `#` header lines.
pub fn body(text: &str) -> &str {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.starts_with('#') {
            break;
        }
        offset += line.len();
    }
    &text[offset..]
}

/// Splits a file into its named sections, in order.
pub fn split(text: &str) -> Result<Vec<Section<'_>>, FormatError> {
    let mut sections: Vec<Section> = Vec::new();
    let mut in_header = true;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        if in_header && line.starts_with('#') {
            continue;
        }
        in_header = false;
        if let Some(name) = parse_marker(line) {
            sections.push(Section { name, line: n, lines: Vec::new() });
        } else if let Some(section) = sections.last_mut() {
            section.lines.push((n, line));
        } else if !line.trim().is_empty() {
            return Err(FormatError::new(n, "content before the first section marker"));
        }
    }
    Ok(sections)
}

/// Looks up a required section.
pub fn find<'s, 'a>(sections: &'s [Section<'a>], name: &str) -> Result<&'s Section<'a>, FormatError> {
    sections
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| FormatError::new(1, format!("missing section `{name}`")))
}

/// Parses one table cell.
pub fn cell<T: std::str::FromStr>(line: usize, column: &str, value: &str) -> Result<T, FormatError> {
    value
        .parse()
        .map_err(|_| FormatError::new(line, format!("bad {column} value `{value}`")))
}

/// Appends a row of floats in shortest round-trip notation.
pub fn push_floats(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v:?}");
    }
}

/// Writes `contents` to a temporary sibling of `path` and renames it into
/// place, so readers never observe a partially written file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)
}
