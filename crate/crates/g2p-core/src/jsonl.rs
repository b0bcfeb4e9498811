//! JSON-lines helpers shared by the pipeline stages. One object per line,
//! UTF-8, LF line endings.

use std::io::{self, BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

pub fn write_records<T: Serialize, W: Write>(
    writer: &mut W,
    records: impl IntoIterator<Item = T>,
) -> io::Result<()> {
    for record in records {
        let line = serde_json::to_string(&record)?;
        writer.write_all(line.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn to_string<T: Serialize>(records: impl IntoIterator<Item = T>) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn read_records<T: DeserializeOwned, R: BufRead>(reader: R) -> io::Result<Vec<T>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        out.push(record);
    }
    Ok(out)
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> io::Result<Vec<T>> {
    read_records(text.as_bytes())
}
