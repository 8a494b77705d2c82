//! One JSON object per line on stderr.

use std::io::Write;
use std::time::Instant;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, Default)]
pub struct Logger {
    pub quiet: bool,
}

impl Logger {
    pub fn emit(&self, stage: &str, event: &str, fields: Value) {
        if self.quiet {
            return;
        }
        let mut obj = Map::new();
        obj.insert("stage".into(), json!(stage));
        obj.insert("event".into(), json!(event));
        if let Value::Object(extra) = fields {
            obj.extend(extra);
        }
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{}", Value::Object(obj));
    }

    /// Runs `f`, then logs its duration together with the fields it returns.
    pub fn timed<T, E>(
        &self,
        stage: &str,
        f: impl FnOnce() -> Result<(T, Value), E>,
    ) -> Result<(T, u128), E> {
        let start = Instant::now();
        let (out, fields) = f()?;
        let ms = start.elapsed().as_millis();
        let mut fields = fields;
        if let Value::Object(ref mut m) = fields {
            m.insert("duration_ms".into(), json!(ms));
        }
        self.emit(stage, "done", fields);
        Ok((out, ms))
    }
}
