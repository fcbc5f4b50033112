//! JSON matrix documents.
//!
//! ```json
//! {"backend": "rational", "rows": 2, "cols": 2,
//!  "entries": ["2/1", "1/1-1/2i", "1/1+1/2i", "1/1"], "partition": [1, 1]}
//! ```
//!
//! Entries are row-major. Float entries are `[re, im]` pairs, printed
//! shortest-round-trip. Rational entries follow
//! `sign? digits "/" digits ( sign ( "i" | digits "/" digits "i" ) )?`;
//! on input the `"/" digits` parts may be omitted for integers.

use std::str::FromStr;

use num::{BigInt, BigRational, Complex};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use shorted::{Backend, Complex64, GaussianRational, HermitianMatrix, Matrix, Scalar};

use crate::exit::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub backend: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
}

/// Backend-tagged matrix read from a document.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Float(Matrix<Complex64>),
    Rational(Matrix<GaussianRational>),
}

impl AnyMatrix {
    pub fn backend(&self) -> Backend {
        match self {
            AnyMatrix::Float(_) => Backend::Float,
            AnyMatrix::Rational(_) => Backend::Rational,
        }
    }
}

/// Conversion of entries to and from JSON, and between backends.
pub trait Codec: Scalar {
    fn encode(&self) -> Value;
    fn decode(v: &Value) -> Result<Self, String>;
    fn from_any(m: &AnyMatrix) -> Matrix<Self>;
}

impl Codec for Complex64 {
    fn encode(&self) -> Value {
        Value::from(vec![self.re, self.im])
    }

    fn decode(v: &Value) -> Result<Self, String> {
        let pair = v.as_array().filter(|a| a.len() == 2).ok_or("float entries are [re, im] pairs")?;
        let part = |x: &Value| x.as_f64().filter(|x| x.is_finite()).ok_or("float parts must be finite numbers");
        Ok(Complex::new(part(&pair[0])?, part(&pair[1])?))
    }

    fn from_any(m: &AnyMatrix) -> Matrix<Self> {
        match m {
            AnyMatrix::Float(m) => m.clone(),
            AnyMatrix::Rational(m) => Matrix::from_fn(m.rows(), m.cols(), |i, j| {
                Complex::new(m[(i, j)].re_f64(), m[(i, j)].im_f64())
            }),
        }
    }
}

impl Codec for GaussianRational {
    fn encode(&self) -> Value {
        Value::String(format_gaussian(self))
    }

    fn decode(v: &Value) -> Result<Self, String> {
        let s = v.as_str().ok_or("rational entries are strings")?;
        parse_gaussian(s)
    }

    fn from_any(m: &AnyMatrix) -> Matrix<Self> {
        match m {
            AnyMatrix::Float(m) => {
                let exact = |x: f64| BigRational::from_float(x).expect("documents hold finite floats");
                Matrix::from_fn(m.rows(), m.cols(), |i, j| Complex::new(exact(m[(i, j)].re), exact(m[(i, j)].im)))
            }
            AnyMatrix::Rational(m) => m.clone(),
        }
    }
}

fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Canonical text: the real part always, the imaginary part when nonzero.
pub fn format_gaussian(v: &GaussianRational) -> String {
    let re = format_ratio(&v.re);
    if v.im == BigRational::from_integer(BigInt::from(0)) {
        return re;
    }
    let im = format_ratio(&v.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{re}{sign}{im}i")
}

fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let bad = || format!("malformed rational {s:?}");
    let (sign, body) = match s.as_bytes().first() {
        Some(b'+') => (1, &s[1..]),
        Some(b'-') => (-1, &s[1..]),
        _ => (1, s),
    };
    let digits = |t: &str| -> Result<BigInt, String> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(t).map_err(|_| bad())
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (digits(n)?, digits(d)?),
        None => (digits(body)?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num * sign, den))
}

pub fn parse_gaussian(s: &str) -> Result<GaussianRational, String> {
    let zero = || BigRational::from_integer(BigInt::from(0));
    let Some(head) = s.strip_suffix('i') else {
        return Ok(Complex::new(parse_ratio(s)?, zero()));
    };
    // The imaginary part starts at the last sign that is not leading.
    let split = head
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last()
        .ok_or_else(|| format!("malformed rational {s:?}: expected a real part before the imaginary one"))?;
    let (re, im) = head.split_at(split);
    let im = match im {
        "+" => BigRational::from_integer(BigInt::from(1)),
        "-" => BigRational::from_integer(BigInt::from(-1)),
        _ => parse_ratio(im)?,
    };
    Ok(Complex::new(parse_ratio(re)?, im))
}

impl MatrixDocument {
    pub fn from_matrix<S: Codec>(m: &Matrix<S>, partition: Option<Vec<usize>>) -> Self {
        MatrixDocument {
            backend: S::BACKEND.name().to_string(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(Codec::encode).collect(),
            partition,
        }
    }

    pub fn from_hermitian<S: Codec>(m: &HermitianMatrix<S>, partition: Option<Vec<usize>>) -> Self {
        Self::from_matrix(m.matrix(), partition)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid document: {e}")))?;
        doc.validate_shape()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    fn validate_shape(&self) -> Result<(), CliError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(CliError::parse(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        if let Some(p) = &self.partition {
            if !(2..=3).contains(&p.len()) || p.iter().sum::<usize>() != self.rows {
                return Err(CliError::validation(format!(
                    "partition {p:?} does not split {} rows into two or three blocks",
                    self.rows
                )));
            }
        }
        Ok(())
    }

    fn decode_entries<S: Codec>(&self) -> Result<Matrix<S>, CliError> {
        let data = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, v)| S::decode(v).map_err(|e| CliError::parse(format!("entry {k}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::new(self.rows, self.cols, data).map_err(|e| CliError::parse(e.to_string()))
    }

    pub fn matrix(&self) -> Result<AnyMatrix, CliError> {
        match Backend::from_str(&self.backend) {
            Ok(Backend::Float) => Ok(AnyMatrix::Float(self.decode_entries()?)),
            Ok(Backend::Rational) => Ok(AnyMatrix::Rational(self.decode_entries()?)),
            Err(_) => Err(CliError::parse(format!("unknown backend {:?}", self.backend))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use shorted::scalar::{gaussian, ratio};

    #[test]
    fn rational_grammar() {
        assert_eq!(parse_gaussian("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_gaussian("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_gaussian("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_gaussian("1/2+3/4i").unwrap(), gaussian((1, 2), (3, 4)));
        assert_eq!(parse_gaussian("-1/2-3/4i").unwrap(), gaussian((-1, 2), (-3, 4)));
        assert_eq!(parse_gaussian("0/1+i").unwrap(), gaussian((0, 1), (1, 1)));
        assert_eq!(parse_gaussian("2/1-i").unwrap(), gaussian((2, 1), (-1, 1)));
        for bad in ["", "1/0", "i", "3/4i", "1/2+", "1.5", "1//2", "a/b", "1/2+3/4", "+-1/2"] {
            assert!(parse_gaussian(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in ["1/2", "-1/3", "0/1", "5/1+1/7i", "-2/3-9/4i", "0/1+1/1i"] {
            assert_eq!(format_gaussian(&parse_gaussian(s).unwrap()), s);
        }
        assert_eq!(format_gaussian(&parse_gaussian("4/8").unwrap()), "1/2");
    }

    #[test]
    fn documents_round_trip() {
        let m: Matrix<GaussianRational> = Matrix::new(
            2,
            2,
            vec![ratio(2, 1), gaussian((1, 1), (-1, 2)), gaussian((1, 1), (1, 2)), ratio(1, 3)],
        )
        .unwrap();
        let doc = MatrixDocument::from_matrix(&m, Some(vec![1, 1]));
        let text = doc.to_json();
        let back = MatrixDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.matrix().unwrap(), AnyMatrix::Rational(m));

        let f: Matrix<Complex64> = Matrix::new(1, 2, vec![Complex::new(0.1, -1e-300), Complex::new(1.0 / 3.0, 2.0)]).unwrap();
        let doc = MatrixDocument::from_matrix(&f, None);
        let back = MatrixDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(back.matrix().unwrap(), AnyMatrix::Float(f));
    }

    #[test]
    fn shape_errors() {
        let short = r#"{"backend":"float","rows":2,"cols":2,"entries":[[1,0]]}"#;
        assert_eq!(MatrixDocument::parse(short).unwrap_err().code, 64);
        let partition = r#"{"backend":"float","rows":1,"cols":1,"entries":[[1,0]],"partition":[1,1]}"#;
        assert_eq!(MatrixDocument::parse(partition).unwrap_err().code, 65);
        let backend = r#"{"backend":"decimal","rows":1,"cols":1,"entries":[[1,0]]}"#;
        assert_eq!(MatrixDocument::parse(backend).unwrap().matrix().unwrap_err().code, 64);
    }

    #[test]
    fn backends_convert() {
        let q = AnyMatrix::Rational(Matrix::new(1, 1, vec![gaussian((1, 4), (-3, 2))]).unwrap());
        let c = Complex64::from_any(&q);
        assert_eq!(c[(0, 0)], Complex::new(0.25, -1.5));
        assert_eq!(GaussianRational::from_any(&AnyMatrix::Float(c)), GaussianRational::from_any(&q));
    }
}
