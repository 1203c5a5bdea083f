//! Output shaping shared by all subcommands.
//!
//! One report renders to three formats. JSON carries a versioned `schema`
//! field and, unless suppressed, a `generated_at` unix timestamp; markdown
//! prints the timestamp as a trailing note; CSV is always timestamp-free
//! so that spreadsheet diffs stay clean. Key order in JSON objects is
//! alphabetical (serde_json's default map), which makes equal reports
//! byte-identical.

use serde_json::{Map, Value};

use crate::config::RunConfig;

/// Floats print with 12 significant digits, scientific notation.
pub fn float12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Wraps a JSON payload with its schema tag and optional timestamp.
pub fn json_report(schema: &str, cfg: &RunConfig, fields: Vec<(&str, Value)>) -> String {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(schema.into()));
    if let Some(t) = cfg.timestamp {
        map.insert("generated_at".into(), Value::from(t));
    }
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(map))
        .expect("report serialization cannot fail");
    out.push('\n');
    out
}

fn csv_cell(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

pub fn csv_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &headers
            .iter()
            .map(|h| csv_cell(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|c| csv_cell(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

pub fn markdown_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", headers.join(" | ")));
    out.push_str(&format!(
        "|{}\n",
        headers.iter().map(|_| " --- |").collect::<String>()
    ));
    for row in rows {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    out
}

/// Markdown report: a title, any number of named tables, the stamp note.
pub fn markdown_report(title: &str, cfg: &RunConfig, sections: &[(String, String)]) -> String {
    let mut out = format!("# {title}\n");
    for (heading, body) in sections {
        out.push('\n');
        if !heading.is_empty() {
            out.push_str(&format!("## {heading}\n\n"));
        }
        out.push_str(body);
    }
    if let Some(t) = cfg.timestamp {
        out.push_str(&format!("\n_generated at unix {t}_\n"));
    }
    out
}

/// Two-column markdown table for single-object reports.
pub fn markdown_fields(fields: &[(&str, String)]) -> String {
    markdown_table(
        &["field", "value"],
        &fields
            .iter()
            .map(|(k, v)| vec![k.to_string(), v.clone()])
            .collect::<Vec<_>>(),
    )
}

/// One-row CSV for single-object reports.
pub fn csv_fields(fields: &[(&str, String)]) -> String {
    let headers: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    let row: Vec<String> = fields.iter().map(|(_, v)| v.clone()).collect();
    csv_table(&headers, &[row])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_keeps_twelve_digits() {
        assert_eq!(float12(2.0), "2.00000000000e0");
        assert_eq!(float12(409.99999999), "4.09999999990e2");
        assert_eq!(float12(-1.0 / 12.0), "-8.33333333333e-2");
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        let table = csv_table(
            &["a", "b"],
            &[
                vec!["plain".into(), "has,comma".into()],
                vec!["x\"y".into(), "z".into()],
            ],
        );
        assert_eq!(table, "a,b\nplain,\"has,comma\"\n\"x\"\"y\",z\n");
    }

    #[test]
    fn markdown_table_shape() {
        let t = markdown_table(&["l", "rank"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(t, "| l | rank |\n| --- | --- |\n| 1 | 2 |\n");
    }
}
