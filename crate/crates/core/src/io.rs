//! Plain-text interchange formats.
//!
//! * bit files: one line of ASCII `0`/`1`;
//! * fragment files: one fragment per line, in delivery order;
//! * truth sidecars: one `offset,length` line per fragment, same order.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: String) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse_line(path: &Path, line: usize, s: &str) -> Result<BitString, IoError> {
    s.parse().map_err(|e: crate::bits::ParseBitsError| IoError::Parse {
        path: path.to_owned(),
        line,
        msg: e.to_string(),
    })
}

pub fn read_bits(path: &Path) -> Result<BitString, IoError> {
    let text = read(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines.next().unwrap_or("");
    if lines.next().is_some() {
        return Err(IoError::Parse {
            path: path.to_owned(),
            line: 2,
            msg: "expected a single line of bits".into(),
        });
    }
    parse_line(path, 1, first)
}

pub fn write_bits(path: &Path, bits: &BitString) -> Result<(), IoError> {
    write(path, format!("{bits}\n"))
}

/// Blank lines are skipped.
pub fn read_fragments(path: &Path) -> Result<Vec<BitString>, IoError> {
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_line(path, i + 1, l))
        .collect()
}

pub fn write_fragments(path: &Path, fragments: &[BitString]) -> Result<(), IoError> {
    let mut text = String::with_capacity(fragments.iter().map(|f| f.len() + 1).sum());
    for f in fragments {
        text.push_str(&f.to_string());
        text.push('\n');
    }
    write(path, text)
}

pub fn read_truth(path: &Path) -> Result<Vec<(usize, usize)>, IoError> {
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let bad = || IoError::Parse {
                path: path.to_owned(),
                line: i + 1,
                msg: format!("expected offset,length, got {l:?}"),
            };
            let (a, b) = l.trim().split_once(',').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn write_truth(path: &Path, truth: &[(usize, usize)]) -> Result<(), IoError> {
    write(path, truth.iter().map(|(o, l)| format!("{o},{l}\n")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x");
        write_bits(&p, &bits("0110")).unwrap();
        assert_eq!(read_bits(&p).unwrap(), bits("0110"));

        let frags = vec![bits("1"), bits("0101"), bits("00")];
        write_fragments(&p, &frags).unwrap();
        assert_eq!(read_fragments(&p).unwrap(), frags);

        write_truth(&p, &[(3, 1), (0, 3)]).unwrap();
        assert_eq!(read_truth(&p).unwrap(), vec![(3, 1), (0, 3)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f");
        std::fs::write(&p, "0101\n01x1\n").unwrap();
        match read_fragments(&p) {
            Err(IoError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(read_bits(&p).is_err());
        std::fs::write(&p, "1;2\n").unwrap();
        assert!(read_truth(&p).is_err());
        assert!(matches!(read_bits(&dir.path().join("missing")), Err(IoError::Io { .. })));
    }
}
