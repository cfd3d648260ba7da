//! Project dataset files: one project per row.
//!
//! ```text
//! id,kdsi,mode,rely,data,cplx,time,stor,virt,turn,acap,aexp,pcap,vexp,lexp,modp,tool,sced,actual_pm
//! p01,32,organic,n,n,h,n,n,l,n,h,n,n,n,n,n,n,n,120
//! ```
//!
//! Lines starting with `#` are comments. An empty rating cell means Nominal
//! and is reported as a warning.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::cocomo::{CostDriverTable, DriverId, DriverRatings, Level, Mode, ProjectRecord};
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 19] = [
    "id",
    "kdsi",
    "mode",
    "rely",
    "data",
    "cplx",
    "time",
    "stor",
    "virt",
    "turn",
    "acap",
    "aexp",
    "pcap",
    "vexp",
    "lexp",
    "modp",
    "tool",
    "sced",
    "actual_pm",
];

/// Default size window for validation runs, KDSI, inclusive.
pub const DEFAULT_SIZE_RANGE: (f64, f64) = (1.0, 100.0);

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub records: Vec<ProjectRecord>,
    pub warnings: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn validation_err(line: u64, message: impl Into<String>) -> Error {
    Error::Validation {
        line,
        message: message.into(),
    }
}

pub fn read_dataset<R: Read>(source: R) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let header = reader.headers().map_err(|e| csv_err(&e))?.clone();
    let got: Vec<String> = header.iter().map(|h| h.to_ascii_lowercase()).collect();
    if got != COLUMNS {
        let line = header.position().map_or(1, |p| p.line());
        return Err(parse_err(
            line,
            format!(
                "expected header `{}`, found `{}`",
                COLUMNS.join(","),
                got.join(",")
            ),
        ));
    }

    let table = CostDriverTable::standard();
    let mut data = Dataset::default();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(&e))?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != COLUMNS.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", COLUMNS.len(), row.len()),
            ));
        }
        let id = row[0].to_string();
        if id.is_empty() {
            return Err(validation_err(line, "empty project id"));
        }
        let number = |col: usize| -> Result<f64> {
            row[col].parse::<f64>().map_err(|_| {
                parse_err(
                    line,
                    format!("{}: `{}` is not a number", COLUMNS[col], &row[col]),
                )
            })
        };
        let kdsi = number(1)?;
        let actual = number(18)?;
        let mode: Mode = row[2]
            .parse()
            .map_err(|e: Error| validation_err(line, e.to_string()))?;

        let mut ratings = DriverRatings::nominal();
        let mut defaulted = Vec::new();
        for (k, id_) in DriverId::ALL.into_iter().enumerate() {
            let cell = &row[3 + k];
            if cell.is_empty() {
                defaulted.push(id_);
                continue;
            }
            let level: Level = cell
                .parse()
                .map_err(|_| validation_err(line, format!("{id_}: unknown rating `{cell}`")))?;
            table
                .get(id_)
                .multiplier(level)
                .map_err(|e| validation_err(line, e.to_string()))?;
            ratings.set(id_, level);
        }
        let mut record = ProjectRecord::new(id, kdsi, mode, ratings, actual)
            .map_err(|e| validation_err(line, e.to_string()))?;
        if !defaulted.is_empty() {
            let names: Vec<String> = defaulted.iter().map(|d| d.to_string()).collect();
            data.warnings.push(format!(
                "line {line}: project {}: missing {} rated nominal",
                record.id,
                names.join(", ")
            ));
        }
        record.defaulted = defaulted;
        data.records.push(record);
    }
    Ok(data)
}

fn csv_err(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_err(line, e.to_string())
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(file).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        Error::Validation { line, message } => Error::Validation {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Writes records in the dataset format. Numbers use the shortest
/// representation that reads back to the same value.
pub fn write_dataset<W: Write>(sink: W, records: &[ProjectRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let io = |e: csv::Error| Error::Io {
        path: "<dataset>".into(),
        message: e.to_string(),
    };
    w.write_record(COLUMNS).map_err(io)?;
    for r in records {
        let mut row = vec![r.id.clone(), r.kdsi.to_string(), r.mode.token().to_string()];
        row.extend(r.ratings.iter().map(|(_, l)| l.token().to_string()));
        row.push(r.actual_pm.to_string());
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<dataset>".into(),
        message: e.to_string(),
    })
}

/// Projects whose size lies in `[lo, hi]` KDSI.
pub fn filter_by_size(records: &[ProjectRecord], lo: f64, hi: f64) -> Vec<ProjectRecord> {
    records
        .iter()
        .filter(|r| r.kdsi >= lo && r.kdsi <= hi)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,kdsi,mode,rely,data,cplx,time,stor,virt,turn,acap,aexp,pcap,vexp,lexp,modp,tool,sced,actual_pm\n";

    fn load(body: &str) -> Result<Dataset> {
        read_dataset(format!("{HEADER}{body}").as_bytes())
    }

    #[test]
    fn header_only_is_empty() {
        assert!(load("").unwrap().is_empty());
    }

    #[test]
    fn single_nominal_row() {
        let d = load("a,32,organic,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,120\n").unwrap();
        assert_eq!(d.len(), 1);
        let r = &d.records[0];
        assert_eq!(r.mode, Mode::Organic);
        assert!((r.crisp_total() - 121.8).abs() < 0.05);
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn large_project_loaded_then_filtered() {
        let d = load(
            "# comment line\n\
             a,32,organic,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,120\n\
             b,150,embedded,h,n,n,n,n,n,n,n,n,n,n,n,n,n,n,2000\n",
        )
        .unwrap();
        assert_eq!(d.len(), 2);
        let kept = filter_by_size(&d.records, 1.0, 100.0);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].id, "a");
        assert_eq!(filter_by_size(&d.records, 32.0, 150.0).len(), 2);
    }

    #[test]
    fn missing_ratings_default_with_warning() {
        let d = load("a,10,semidetached,,n,n,n,,n,n,n,n,n,n,n,n,n,n,50\n").unwrap();
        assert_eq!(d.records[0].defaulted, vec![DriverId::Rely, DriverId::Stor]);
        assert_eq!(d.warnings.len(), 1);
        assert!(d.warnings[0].contains("RELY"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let ok = "a,32,organic,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,120\n";
        let bad_mode = format!("{ok}b,5,agile,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,9\n");
        match load(&bad_mode) {
            Err(Error::Validation { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad_num = format!("{ok}b,five,organic,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,9\n");
        assert!(matches!(load(&bad_num), Err(Error::Parse { line: 3, .. })));
        let short = format!("{ok}b,5,organic,n\n");
        assert!(matches!(load(&short), Err(Error::Parse { line: 3, .. })));
        let stor_vl = "b,5,organic,n,n,n,n,vl,n,n,n,n,n,n,n,n,n,n,9\n";
        match load(stor_vl) {
            Err(Error::Validation { line: 2, message }) => assert!(message.contains("STOR")),
            other => panic!("{other:?}"),
        }
        let zero = "b,0,organic,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,9\n";
        assert!(matches!(load(zero), Err(Error::Validation { .. })));
        assert!(matches!(
            read_dataset("id,size\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn write_then_read_round_trips() {
        let d = load(
            "a,32.5,organic,vh,l,xh,vh,h,l,h,vl,l,vl,vl,vl,h,vh,vl,120.25\n\
             b,0.1,embedded,n,n,n,n,n,n,n,n,n,n,n,n,n,n,n,1e-3\n",
        )
        .unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &d.records).unwrap();
        let back = read_dataset(buf.as_slice()).unwrap();
        assert_eq!(back.records, d.records);
    }
}
