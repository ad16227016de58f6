//! Line-oriented section files: `#` comments, blank lines, `[name]` headers,
//! whitespace-separated fields.

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub fields: Vec<&'a str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Section<'a> {
    /// `None` for content before the first header.
    pub name: Option<&'a str>,
    pub line: usize,
    pub lines: Vec<Line<'a>>,
}

/// A syntax problem at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SyntaxError {
    pub line: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn sections(text: &str) -> Result<Vec<Section<'_>>, SyntaxError> {
    let mut out: Vec<Section<'_>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .map(str::trim)
                .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
                .ok_or_else(|| {
                    SyntaxError::new(number, format!("malformed section header `{line}`"))
                })?;
            if out.iter().any(|s| s.name == Some(name)) {
                return Err(SyntaxError::new(
                    number,
                    format!("section [{name}] appears twice"),
                ));
            }
            out.push(Section {
                name: Some(name),
                line: number,
                lines: Vec::new(),
            });
            continue;
        }
        if out.is_empty() {
            out.push(Section {
                name: None,
                line: number,
                lines: Vec::new(),
            });
        }
        out.last_mut().expect("a section exists").lines.push(Line {
            number,
            fields: line.split_whitespace().collect(),
        });
    }
    Ok(out)
}

/// Splits parsed sections by name, rejecting names outside `allowed` and
/// headerless content unless `headerless` names the section it belongs to.
pub(crate) fn by_name<'a, 'b>(
    sections: &'b [Section<'a>],
    allowed: &[&'b str],
    headerless: Option<&'b str>,
) -> Result<Vec<(&'b str, &'b Section<'a>)>, SyntaxError> {
    let mut out = Vec::new();
    for s in sections {
        match s.name {
            Some(name) if allowed.contains(&name) => out.push((name, s)),
            Some(name) => {
                return Err(SyntaxError::new(
                    s.line,
                    format!(
                        "unknown section [{name}], expected one of {}",
                        bracketed(allowed)
                    ),
                ))
            }
            None => match headerless {
                Some(name) if sections.len() == 1 => out.push((name, s)),
                _ => {
                    return Err(SyntaxError::new(
                        s.line,
                        format!(
                            "content before the first section header; expected one of {}",
                            bracketed(allowed)
                        ),
                    ))
                }
            },
        }
    }
    Ok(out)
}

fn bracketed(names: &[&str]) -> String {
    names
        .iter()
        .map(|n| format!("[{n}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn lines_of<'a, 'b>(found: &[(&str, &'b Section<'a>)], name: &str) -> &'b [Line<'a>] {
    found
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.lines.as_slice())
        .unwrap_or(&[])
}

pub(crate) fn has_section(found: &[(&str, &Section<'_>)], name: &str) -> bool {
    found.iter().any(|(n, _)| *n == name)
}

impl Line<'_> {
    pub fn expect_fields(&self, min: usize, max: usize, shape: &str) -> Result<(), SyntaxError> {
        let n = self.fields.len();
        if n < min || n > max {
            return Err(SyntaxError::new(
                self.number,
                format!("expected `{shape}`, found {n} field(s)"),
            ));
        }
        Ok(())
    }

    pub fn parse<T: FromStr>(&self, idx: usize, what: &str) -> Result<T, SyntaxError> {
        let raw = self.fields[idx];
        raw.parse()
            .map_err(|_| SyntaxError::new(self.number, format!("invalid {what} `{raw}`")))
    }
}
