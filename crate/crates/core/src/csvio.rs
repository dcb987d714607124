//! CSV ingestion and export.
//!
//! Layout: a leading `time` column with ISO-8601 UTC timestamps at second
//! precision, then one column per scalar series and `name[i]` columns for
//! arrays with a feature axis. Empty cells are NaN. Floats are written in
//! the shortest form that parses back to the same bits, so write-then-read
//! is the identity. Feature labels and axes beyond the first are not
//! persisted.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::timeseries::{format_timestamp, parse_timestamp, DataSet, TimeArray, TimeIndex};

pub fn read_csv(path: &Path) -> Result<DataSet> {
    read_csv_from(File::open(path)?)
}

pub fn read_csv_from<R: Read>(reader: R) -> Result<DataSet> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let headers = csv_reader
        .headers()
        .map_err(|e| Error::MalformedHeader {
            message: e.to_string(),
        })?
        .clone();
    if headers.is_empty() || headers.get(0) != Some("time") {
        return Err(Error::MalformedHeader {
            message: "first column must be 'time'".into(),
        });
    }

    // Columns after "time": either a bare series name or name[i].
    #[derive(Default)]
    struct ColumnGroup {
        indexed: BTreeMap<usize, usize>, // feature index -> csv column
        plain: Option<usize>,
    }
    let mut groups: BTreeMap<String, ColumnGroup> = BTreeMap::new();
    for (col, header) in headers.iter().enumerate().skip(1) {
        let (name, feature) = split_header(header)?;
        let group = groups.entry(name.to_string()).or_default();
        let clash = match feature {
            Some(i) => group.indexed.insert(i, col).is_some() || group.plain.is_some(),
            None => {
                let had_plain = group.plain.replace(col).is_some();
                had_plain || !group.indexed.is_empty()
            }
        };
        if clash {
            return Err(Error::MalformedHeader {
                message: format!("conflicting columns for '{name}'"),
            });
        }
    }
    for (name, group) in &groups {
        for (expected, &actual) in group.indexed.keys().enumerate() {
            if actual != expected {
                return Err(Error::MalformedHeader {
                    message: format!("'{name}' feature indices must cover 0..k without gaps"),
                });
            }
        }
    }

    let mut stamps: Vec<i64> = Vec::new();
    let mut cells: Vec<Vec<f64>> = vec![Vec::new(); headers.len() - 1];
    for (row_number, record) in csv_reader.records().enumerate() {
        let row = row_number + 1;
        let record = record.map_err(|_| Error::RaggedRow { row })?;
        if record.len() != headers.len() {
            return Err(Error::RaggedRow { row });
        }
        let ts = parse_timestamp(record.get(0).unwrap_or_default()).map_err(|message| {
            Error::MalformedTimestamp { row, message }
        })?;
        if let Some(&last) = stamps.last() {
            if ts <= last {
                return Err(Error::NonIncreasingTime { position: row });
            }
        }
        stamps.push(ts);
        for (col, cell) in record.iter().enumerate().skip(1) {
            let value = parse_cell(cell).ok_or_else(|| Error::MalformedValue {
                row,
                column: headers.get(col).unwrap_or_default().to_string(),
            })?;
            cells[col - 1].push(value);
        }
    }

    let index = TimeIndex::new(stamps)?;
    let mut out = DataSet::new();
    for (name, group) in groups {
        let array = if let Some(col) = group.plain {
            TimeArray::series(name, index.clone(), cells[col - 1].clone())?
        } else {
            let width = group.indexed.len();
            let mut values = Vec::with_capacity(index.len() * width);
            for row in 0..index.len() {
                for &col in group.indexed.values() {
                    values.push(cells[col - 1][row]);
                }
            }
            TimeArray::new(name, index.clone(), values, vec![width])?
        };
        out.insert(array)?;
    }
    Ok(out)
}

pub fn write_csv(data: &DataSet, path: &Path) -> Result<()> {
    write_csv_with_precision(data, path, None)
}

/// Writes with an optional fixed decimal precision; `None` keeps the exact
/// shortest-round-trip form.
pub fn write_csv_with_precision(
    data: &DataSet,
    path: &Path,
    precision: Option<usize>,
) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file = BufWriter::new(File::create(path)?);
    write_csv_to(data, file, precision)
}

pub fn write_csv_to<W: Write>(data: &DataSet, writer: W, precision: Option<usize>) -> Result<()> {
    let mut csv_writer = csv::Writer::from_writer(writer);

    let mut header = vec!["time".to_string()];
    for array in data.arrays() {
        if array.is_scalar() {
            header.push(array.name().to_string());
        } else {
            for i in 0..array.row_width() {
                header.push(format!("{}[{i}]", array.name()));
            }
        }
    }
    csv_writer
        .write_record(&header)
        .map_err(csv_io_error)?;

    if let Some(index) = data.index() {
        for row in 0..index.len() {
            let mut record = vec![format_timestamp(index.get(row))];
            for array in data.arrays() {
                for &value in array.row(row) {
                    record.push(format_cell(value, precision));
                }
            }
            csv_writer.write_record(&record).map_err(csv_io_error)?;
        }
    }
    csv_writer.flush()?;
    Ok(())
}

fn csv_io_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn split_header(header: &str) -> Result<(&str, Option<usize>)> {
    match (header.find('['), header.ends_with(']')) {
        (Some(open), true) => {
            let name = &header[..open];
            let digits = &header[open + 1..header.len() - 1];
            let feature = digits.parse().map_err(|_| Error::MalformedHeader {
                message: format!("bad feature index in '{header}'"),
            })?;
            if name.is_empty() {
                return Err(Error::MalformedHeader {
                    message: format!("empty array name in '{header}'"),
                });
            }
            Ok((name, Some(feature)))
        }
        (None, false) if !header.is_empty() => Ok((header, None)),
        _ => Err(Error::MalformedHeader {
            message: format!("cannot parse column '{header}'"),
        }),
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Some(f64::NAN);
    }
    cell.parse().ok()
}

fn format_cell(value: f64, precision: Option<usize>) -> String {
    if value.is_nan() {
        return String::new();
    }
    match precision {
        Some(p) => format!("{value:.p$}"),
        None => format!("{value}"),
    }
}
