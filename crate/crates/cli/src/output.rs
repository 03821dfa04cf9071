use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
}

/// Writes result records in the chosen format. JSON lines are streamed; CSV
/// rows are buffered so the header can cover every column that appears.
pub struct Emitter {
    sink: Box<dyn Write + Send>,
    format: Format,
    rows: Vec<Map<String, Value>>,
    emitted: u64,
}

impl Emitter {
    pub fn new(sink: Box<dyn Write + Send>, format: Format) -> Self {
        Self {
            sink,
            format,
            rows: Vec::new(),
            emitted: 0,
        }
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Emits one record tagged with `kind`.
    pub fn emit(&mut self, kind: &str, fields: Value) -> io::Result<()> {
        let mut record = Map::new();
        record.insert("type".into(), Value::from(kind));
        match fields {
            Value::Object(map) => record.extend(map),
            other => {
                record.insert("value".into(), other);
            }
        }
        self.emitted += 1;
        match self.format {
            Format::JsonLines => writeln!(self.sink, "{}", Value::Object(record)),
            Format::Csv => {
                self.rows.push(record);
                Ok(())
            }
        }
    }

    /// Writes the summary record and flushes. In CSV the summary goes on a
    /// trailing `# summary` comment line as compact JSON.
    pub fn finish(mut self, summary: Value) -> io::Result<()> {
        match self.format {
            Format::JsonLines => writeln!(self.sink, "{summary}")?,
            Format::Csv => {
                write_csv(&mut self.sink, &self.rows)?;
                writeln!(self.sink, "# summary {summary}")?;
            }
        }
        self.sink.flush()
    }
}

fn write_csv(sink: &mut dyn Write, rows: &[Map<String, Value>]) -> io::Result<()> {
    let mut columns: Vec<&str> = Vec::new();
    for row in rows {
        for key in row.keys() {
            if !columns.contains(&key.as_str()) {
                columns.push(key);
            }
        }
    }
    let mut writer = csv::Writer::from_writer(sink);
    if !columns.is_empty() {
        writer.write_record(&columns)?;
    }
    for row in rows {
        writer.write_record(columns.iter().map(|c| cell(row.get(*c))))?;
    }
    writer.flush()
}

fn cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use std::sync::{Arc, Mutex};

    #[derive(Clone, Default)]
    struct Shared(Arc<Mutex<Vec<u8>>>);

    impl Write for Shared {
        fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
            self.0.lock().unwrap().extend_from_slice(buf);
            Ok(buf.len())
        }
        fn flush(&mut self) -> io::Result<()> {
            Ok(())
        }
    }

    fn run(format: Format) -> String {
        let buf = Shared::default();
        let mut out = Emitter::new(Box::new(buf.clone()), format);
        out.emit("edge", json!({"a": 1, "b": 7, "root": "2"})).unwrap();
        out.emit("edge", json!({"a": 1, "b": 26, "root": "3", "extra": [1, 2]}))
            .unwrap();
        out.finish(json!({"type": "summary", "violations": 0})).unwrap();
        let bytes = buf.0.lock().unwrap().clone();
        String::from_utf8(bytes).unwrap()
    }

    #[test]
    fn json_lines() {
        assert_eq!(
            run(Format::JsonLines),
            "{\"type\":\"edge\",\"a\":1,\"b\":7,\"root\":\"2\"}\n\
             {\"type\":\"edge\",\"a\":1,\"b\":26,\"root\":\"3\",\"extra\":[1,2]}\n\
             {\"type\":\"summary\",\"violations\":0}\n"
        );
    }

    #[test]
    fn csv_union_header() {
        assert_eq!(
            run(Format::Csv),
            "type,a,b,root,extra\nedge,1,7,2,\nedge,1,26,3,\"[1,2]\"\n# summary {\"type\":\"summary\",\"violations\":0}\n"
        );
    }
}
