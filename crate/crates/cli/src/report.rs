use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// Ordered output, written once at the end of a run.
pub struct Report {
    format: Format,
    lines: Vec<String>,
}

impl Report {
    pub fn new(format: Format) -> Self {
        Self { format, lines: Vec::new() }
    }

    /// A record with named fields. Text mode prints `kind  key=value ...`
    /// unless `text` supplies the line.
    pub fn record(&mut self, kind: &str, fields: Vec<(&str, Value)>, text: Option<String>) {
        match self.format {
            Format::Structured => {
                let mut obj = Map::new();
                obj.insert("record".into(), Value::from(kind));
                for (k, v) in fields {
                    obj.insert(k.into(), v);
                }
                self.lines.push(Value::Object(obj).to_string());
            }
            Format::Text => {
                let line = text.unwrap_or_else(|| {
                    let body: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
                    format!("{kind}  {}", body.join("  "))
                });
                self.lines.push(line);
            }
        }
    }

    /// A line that only appears in text mode.
    pub fn text(&mut self, line: impl Into<String>) {
        if self.format == Format::Text {
            self.lines.push(line.into());
        }
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn complex(re: f64, im: f64) -> Value {
    Value::from(vec![sci(re), sci(im)])
}

/// Fixed-width scientific notation so reports compare byte for byte.
pub fn sci(x: f64) -> Value {
    Value::from(format!("{x:.12e}"))
}
