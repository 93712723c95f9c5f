//! Dataset file format: one example per line, UTF-8, input tokens separated
//! by single spaces, one tab, output tokens separated by single spaces, `\n`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Example;
use crate::crtenc::{parse_input, parse_output, reconstruct, Base, CrtVector, TokenStream};
use crate::error::{Error, Result};

/// A parsed and validated dataset line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub input: CrtVector,
    pub output: i64,
    pub input_tokens: TokenStream,
    pub output_tokens: TokenStream,
}

impl Record {
    /// Low 64 bits of the reconstructed n; exact whenever the basis product
    /// exceeds the sampling range.
    pub fn key(&self) -> u64 {
        reconstruct(&self.input)
            .iter_u64_digits()
            .next()
            .unwrap_or(0)
    }
}

pub fn format_line(input: &TokenStream, output: &TokenStream) -> String {
    format!("{input}\t{output}\n")
}

pub fn write_examples<W: Write>(w: &mut W, examples: &[Example]) -> std::io::Result<()> {
    for ex in examples {
        w.write_all(format_line(&ex.input, &ex.output).as_bytes())?;
    }
    Ok(())
}

pub fn write_dataset(path: &Path, examples: &[Example]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_examples(&mut w, examples)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn parse_line(line: &str, base: Base) -> Result<Record> {
    let (input, output) = line
        .split_once('\t')
        .ok_or_else(|| Error::Config("missing tab separator".into()))?;
    if output.contains('\t') {
        return Err(Error::Config("more than one tab".into()));
    }
    let input_tokens = TokenStream::parse(input)?;
    let output_tokens = TokenStream::parse(output)?;
    Ok(Record {
        input: parse_input(&input_tokens, base)?,
        output: parse_output(&output_tokens, base)?,
        input_tokens,
        output_tokens,
    })
}

/// Parse every line of `reader`; `name` labels error messages.
pub fn read_records<R: Read>(reader: R, name: &str, base: Base) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut reader = BufReader::new(reader);
    let mut line = String::new();
    let mut lineno = 0;
    loop {
        line.clear();
        let read = reader
            .read_line(&mut line)
            .map_err(|e| Error::io(name, e))?;
        if read == 0 {
            break;
        }
        lineno += 1;
        let at = |message: String| Error::DatasetLine {
            path: name.to_string(),
            line: lineno,
            message,
        };
        let body = line
            .strip_suffix('\n')
            .ok_or_else(|| at("line is not newline-terminated".into()))?;
        out.push(parse_line(body, base).map_err(|e| at(e.to_string()))?);
    }
    Ok(out)
}

pub fn read_dataset(path: &Path, base: Base) -> Result<Vec<Record>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(file, &path.display().to_string(), base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str) -> Result<Vec<Record>> {
        read_records(s.as_bytes(), "mem", Base::THOUSAND)
    }

    #[test]
    fn parses_valid_lines() {
        let recs = read("+ 1 + 2 + 1 + 3\t- 1\n+ 0 + 2 + 0 + 3\t+ 0\n").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].input.residues(), &[1, 1]);
        assert_eq!(recs[0].output, -1);
        assert_eq!(recs[0].key(), 1);
        assert_eq!(recs[1].output, 0);
    }

    #[test]
    fn reports_line_numbers() {
        let err = read("+ 1 + 2\t+ 1\n+ 1 + 2 + 1\n").unwrap_err();
        assert!(matches!(err, Error::DatasetLine { line: 2, .. }), "{err}");
        let err = read("+ 1 + 2\t+ 1\n+ 1 + 2\t+ 1\n+ 3 + 2\t+ 0\n").unwrap_err();
        match err {
            Error::DatasetLine { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("residue 3 >= modulus 2"), "{message}");
            }
            other => panic!("{other}"),
        }
        assert!(matches!(
            read("+ 1 + 2\t+ 1").unwrap_err(),
            Error::DatasetLine { line: 1, .. }
        ));
        assert!(read("+ 1 + 2\t+ 1 + 2\n").is_err());
        assert!(read("+ 1  + 2\t+ 1\n").is_err());
    }
}
