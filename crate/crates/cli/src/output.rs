use serde::Serialize;

use crate::config::Format;
use crate::error::Failure;

/// A command result with a text rendering and, optionally, a CSV one.
pub trait Report: Serialize {
    fn text(&self) -> String;

    fn csv(&self) -> Option<String> {
        None
    }
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(report.text()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => report.csv().ok_or_else(|| Failure::Input("this command has no CSV output".into())),
    }
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}
