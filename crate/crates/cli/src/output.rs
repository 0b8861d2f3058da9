use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// 17 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(p) => {
            let f = File::create(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn new(out: Option<&Path>, header: &[String]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(sink(out)?);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn numbers(&mut self, values: &[f64]) -> Result<(), CliError> {
        let fields: Vec<String> = values.iter().map(|&v| fmt(v)).collect();
        self.row(&fields)
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(|source| CliError::Io {
            path: "output".into(),
            source,
        })
    }
}

pub fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|source| CliError::Io {
            path: "output".into(),
            source,
        })
}
