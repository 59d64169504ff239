use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// Outcome of one command: exit code 0 for yes or success, 1 for a negative
/// answer, 2 for errors.
pub struct Report {
    pub command: &'static str,
    pub exit_code: u8,
    pub human: String,
    pub fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, exit_code: u8) -> Self {
        Report {
            command,
            exit_code,
            human: String::new(),
            fields: Map::new(),
        }
    }

    pub fn error(command: &'static str, msg: String) -> Self {
        let mut r = Report::new(command, 2);
        let _ = writeln!(r.human, "error: {msg}");
        r.set("error", msg);
        r
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> &mut Self {
        self.human.push_str(text.as_ref());
        if !self.human.ends_with('\n') {
            self.human.push('\n');
        }
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn machine_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("exit_code".into(), json!(self.exit_code));
        obj.extend(self.fields.clone());
        serde_json::to_string_pretty(&Value::Object(obj)).expect("plain JSON")
    }
}
