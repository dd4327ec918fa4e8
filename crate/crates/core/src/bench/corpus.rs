use std::path::Path;

use crate::formula::{parse, Formula, ParseError};

use super::BenchError;

/// Formulas read from a corpus file, plus the lines that failed to parse
/// when errors are skipped.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<(usize, Formula)>,
    pub skipped: Vec<(usize, ParseError)>,
}

/// Parses one formula per line. Blank lines and lines starting with `#`
/// are ignored; ids are 1-based line numbers.
pub fn parse_corpus(text: &str, skip_errors: bool) -> Result<Corpus, BenchError> {
    let mut corpus = Corpus::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse(trimmed) {
            Ok(f) => corpus.entries.push((line_no, f)),
            Err(e) if skip_errors => corpus.skipped.push((line_no, e)),
            Err(e) => return Err(BenchError::Parse { line: line_no, text: trimmed.to_string(), error: e }),
        }
    }
    Ok(corpus)
}

pub fn load_corpus(path: &Path, skip_errors: bool) -> Result<Corpus, BenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_corpus(&text, skip_errors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn comments_and_line_numbers() {
        let c = parse_corpus("a U b\n# c\nG a", false).unwrap();
        let ids: Vec<usize> = c.entries.iter().map(|e| e.0).collect();
        assert_eq!(ids, [1, 3]);
        assert_eq!(c.entries[1].1, parse("G a").unwrap());
        assert!(parse_corpus("", false).unwrap().entries.is_empty());
    }

    #[test]
    fn parse_errors_carry_the_line() {
        match parse_corpus("a U", false) {
            Err(BenchError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        let c = parse_corpus("a\n(b\nc", true).unwrap();
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.skipped[0].0, 2);
    }

    #[test]
    fn reads_files() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# header\nX a\n\nF G b").unwrap();
        let c = load_corpus(file.path(), false).unwrap();
        assert_eq!(c.entries.iter().map(|e| e.0).collect::<Vec<_>>(), [2, 4]);
        assert!(matches!(
            load_corpus(Path::new("/nonexistent/corpus.txt"), false),
            Err(BenchError::Io { .. })
        ));
    }
}
