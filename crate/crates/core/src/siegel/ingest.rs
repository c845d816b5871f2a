use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::arith::{CoefficientSeries, Values};
use crate::error::{Error, Result};

/// Where a table of Siegel eigenvalues came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenSource {
    Synthetic,
    Ingested(String),
}

impl std::fmt::Display for EigenSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EigenSource::Synthetic => write!(f, "synthetic"),
            EigenSource::Ingested(path) => write!(f, "ingested:{path}"),
        }
    }
}

/// Hecke eigenvalues λ_F(n) of a genus-2 eigenform of weight k and their
/// normalization λ(n) = λ_F(n)/n^{k−3/2}. Absent indices hold zero and are
/// listed in `missing`.
#[derive(Clone, Debug)]
pub struct SiegelEigenData {
    pub weight: u32,
    pub limit: usize,
    pub lambda_f: Vec<f64>,
    pub normalized: Vec<f64>,
    pub missing: Vec<usize>,
    pub source: EigenSource,
}

impl SiegelEigenData {
    pub fn normalized_series(&self) -> CoefficientSeries {
        CoefficientSeries::new(
            format!("lambda[{}]", self.source),
            Values::Real(self.normalized.clone()),
            false,
        )
        .with_missing(self.missing.clone())
    }

    /// Fraction of 1..=N without a value.
    pub fn gap_fraction(&self) -> f64 {
        self.missing.len() as f64 / self.limit as f64
    }
}

/// Parses an eigenvalue table: `#` comments (one of which must read
/// `# weight=k`), then `n value` lines.
pub fn parse_eigenvalues<R: BufRead>(
    reader: R,
    weight: u32,
    source: EigenSource,
) -> Result<SiegelEigenData> {
    let mut declared = None;
    let mut values = BTreeMap::new();
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(w) = comment.trim().strip_prefix("weight=") {
                declared = Some(
                    w.trim()
                        .parse::<u32>()
                        .map_err(|_| err(format!("bad weight `{w}`")))?,
                );
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(err(format!("expected `n value`, got `{trimmed}`")));
        }
        let n: usize = tokens[0]
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| err(format!("bad index `{}`", tokens[0])))?;
        let value = match tokens[1].parse::<f64>() {
            Ok(v) => v,
            Err(_) if tokens[1].contains(['i', 'j']) => {
                return Err(Error::Data(format!(
                    "line {lineno}: non-real value `{}`",
                    tokens[1]
                )))
            }
            Err(_) => return Err(err(format!("bad value `{}`", tokens[1]))),
        };
        if !value.is_finite() {
            return Err(Error::Data(format!(
                "line {lineno}: non-finite value `{}`",
                tokens[1]
            )));
        }
        if let Some(im) = tokens.get(2) {
            let im: f64 = im
                .parse()
                .map_err(|_| err(format!("bad imaginary part `{im}`")))?;
            if im != 0.0 {
                return Err(Error::Data(format!(
                    "line {lineno}: non-real value {value}{im:+}i"
                )));
            }
        }
        if values.insert(n, value).is_some() {
            return Err(err(format!("index {n} listed twice")));
        }
    }
    let declared = declared.ok_or(Error::Parse {
        line: last_line.max(1),
        message: "missing `# weight=k` header comment".into(),
    })?;
    if declared != weight {
        return Err(Error::Data(format!(
            "file declares weight {declared}, expected {weight}"
        )));
    }
    match values.get(&1) {
        Some(&v) if (v - 1.0).abs() <= 1e-9 => {}
        Some(&v) => return Err(Error::Data(format!("λ_F(1) = {v}, expected 1"))),
        None => return Err(Error::Data("no value for n = 1".into())),
    }
    let limit = *values.keys().next_back().expect("n = 1 present");
    let mut lambda_f = vec![0.0; limit + 1];
    let mut normalized = vec![0.0; limit + 1];
    let mut missing = Vec::new();
    let exponent = weight as f64 - 1.5;
    for n in 1..=limit {
        match values.get(&n) {
            Some(&v) => {
                lambda_f[n] = v;
                normalized[n] = v / (n as f64).powf(exponent);
            }
            None => missing.push(n),
        }
    }
    Ok(SiegelEigenData {
        weight,
        limit,
        lambda_f,
        normalized,
        missing,
        source,
    })
}

/// Reads an eigenvalue table from disk; see [`parse_eigenvalues`].
pub fn ingest_eigenvalues(path: impl AsRef<Path>, weight: u32) -> Result<SiegelEigenData> {
    let path = path.as_ref();
    let file = File::open(path)?;
    parse_eigenvalues(
        BufReader::new(file),
        weight,
        EigenSource::Ingested(path.display().to_string()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, weight: u32) -> Result<SiegelEigenData> {
        parse_eigenvalues(text.as_bytes(), weight, EigenSource::Synthetic)
    }

    #[test]
    fn single_line() {
        let d = parse("# weight=20\n1 1.0\n", 20).unwrap();
        assert_eq!(d.limit, 1);
        assert_eq!(d.lambda_f[1], 1.0);
        assert!(d.missing.is_empty());
    }

    #[test]
    fn gaps_are_recorded() {
        let text = "# weight=20\n1 1\n2 -840\n3 -30\n4 1\n5 1\n6 1\n8 2\n";
        let d = parse(text, 20).unwrap();
        assert_eq!(d.missing, vec![7]);
        let s = d.normalized_series();
        assert!(!s.is_present(7));
        assert_eq!(d.gap_fraction(), 1.0 / 8.0);
    }

    #[test]
    fn weight_twenty_normalization() {
        let d = parse("# weight=20\n1 1\n2 -840\n", 20).unwrap();
        assert!((d.normalized[2] - (-840.0 / 2f64.powf(18.5))).abs() < 1e-20);
    }

    #[test]
    fn malformed_lines() {
        match parse("# weight=20\n1 1\nfoo bar\n", 20) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("# weight=20\n1 1\n2 3+4i\n", 20),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            parse("# weight=20\n1 1\n2 3 0.5\n", 20),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            parse("# weight=20\n1 1\n2 nan\n", 20),
            Err(Error::Data(_))
        ));
        assert!(matches!(parse("1 1\n", 20), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("# weight=18\n1 1\n", 20),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            parse("# weight=20\n1 2\n", 20),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            parse("# weight=20\n1 1\n1 1\n", 20),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn reads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f20.txt");
        std::fs::write(
            &path,
            "# weight=20\n# computed elsewhere\n1 1.0\n2 -840.0\n",
        )
        .unwrap();
        let d = ingest_eigenvalues(&path, 20).unwrap();
        assert_eq!(d.limit, 2);
        assert!(matches!(d.source, EigenSource::Ingested(_)));
    }
}
