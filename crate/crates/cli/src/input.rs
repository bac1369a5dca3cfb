//! Input files: algebras, augmentations, models and sample elements.

use serde::Deserialize;
use serde_json::Value;

use rackforge::algebra::{AugmentedLeibnizAlgebra, LeibnizAlgebra};
use rackforge::linalg::Matrix;
use rackforge::scalar::{parse_float, Rational};
use rackforge::Scalar;

use crate::error::CliError;

/// Raw file layout. Every numeric entry is a JSON string (`"3/4"`) or a
/// JSON number; rational files accept integer numbers only.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub format: u32,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub dimension: Option<usize>,
    pub scalars: String,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub bracket: Option<Value>,
    #[serde(default)]
    pub lie: Option<bool>,
    #[serde(default)]
    pub augmentation: Option<AugmentationFile>,
    #[serde(default)]
    pub nilradical: Option<Value>,
    #[serde(default)]
    pub model: Option<ModelFile>,
    #[serde(default)]
    pub elements: Option<Value>,
    #[serde(default)]
    pub matrices: Option<Value>,
    #[serde(default)]
    pub product_override: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentationFile {
    pub g_dimension: usize,
    pub g_bracket: Value,
    pub p: Value,
    pub action: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    #[serde(default)]
    pub representation: Option<Value>,
}

/// Parsed contents in one scalar mode.
#[derive(Debug, Clone)]
pub struct Parsed<S: Scalar> {
    pub algebra: Option<LeibnizAlgebra<S>>,
    pub augmentation: Option<AugmentedLeibnizAlgebra<S>>,
    pub nilradical: Option<Vec<Vec<S>>>,
    pub elements: Vec<Vec<S>>,
    pub matrices: Vec<Matrix<S>>,
}

#[derive(Debug, Clone)]
pub enum Content {
    Rational(Parsed<Rational>),
    Float(Parsed<f64>),
}

#[derive(Debug, Clone)]
pub struct Input {
    pub name: String,
    pub declared_lie: Option<bool>,
    pub model: Option<ModelFile>,
    pub representation: Option<Vec<Matrix<f64>>>,
    pub product_override: Option<String>,
    pub content: Content,
}

impl Input {
    pub fn scalars(&self) -> &'static str {
        match self.content {
            Content::Rational(_) => "rational",
            Content::Float(_) => "float64",
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match &self.content {
            Content::Rational(p) => p.algebra.as_ref().map(LeibnizAlgebra::dim),
            Content::Float(p) => p.algebra.as_ref().map(LeibnizAlgebra::dim),
        }
    }

    /// The algebra in floating point, if the file has one.
    pub fn algebra_f64(&self) -> Option<LeibnizAlgebra<f64>> {
        match &self.content {
            Content::Rational(p) => p.algebra.as_ref().map(LeibnizAlgebra::to_f64),
            Content::Float(p) => p.algebra.clone(),
        }
    }

    pub fn augmentation_f64(&self) -> Option<AugmentedLeibnizAlgebra<f64>> {
        match &self.content {
            Content::Rational(p) => p.augmentation.as_ref().map(AugmentedLeibnizAlgebra::to_f64),
            Content::Float(p) => p.augmentation.clone(),
        }
    }

    pub fn require_algebra(&self) -> Result<(), CliError> {
        if self.dimension().is_none() {
            return Err(CliError::input("file has no 'bracket'; an algebra is required"));
        }
        Ok(())
    }
}

fn entry<S: Scalar>(v: &Value, at: &str) -> Result<S, CliError> {
    match v {
        Value::String(s) => {
            if S::is_exact() {
                S::parse_literal(s).map_err(|e| CliError::input(format!("{at}: {e}")))
            } else {
                parse_float(s)
                    .map(S::from_f64)
                    .map_err(|e| CliError::input(format!("{at}: {e}")))
            }
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(S::from_i64(i))
            } else if S::is_exact() {
                Err(CliError::input(format!(
                    "{at}: non-integer number {n} in a rational file; write it as a string such as \"3/4\""
                )))
            } else {
                Ok(S::from_f64(n.as_f64().unwrap_or(f64::NAN)))
            }
        }
        other => Err(CliError::input(format!("{at}: expected a number or numeric string, found {other}"))),
    }
}

fn array<'a>(v: &'a Value, at: &str, len: Option<usize>) -> Result<&'a Vec<Value>, CliError> {
    let a = v
        .as_array()
        .ok_or_else(|| CliError::input(format!("{at}: expected an array")))?;
    if let Some(n) = len {
        if a.len() != n {
            return Err(CliError::input(format!("{at}: expected {n} entries, found {}", a.len())));
        }
    }
    Ok(a)
}

fn vector<S: Scalar>(v: &Value, at: &str, len: Option<usize>) -> Result<Vec<S>, CliError> {
    array(v, at, len)?
        .iter()
        .enumerate()
        .map(|(i, x)| entry(x, &format!("{at}[{i}]")))
        .collect()
}

fn matrix<S: Scalar>(v: &Value, at: &str, rows: Option<usize>, cols: Option<usize>) -> Result<Matrix<S>, CliError> {
    let r = array(v, at, rows)?;
    if r.is_empty() {
        return Err(CliError::input(format!("{at}: empty matrix")));
    }
    let first = array(&r[0], &format!("{at}[0]"), cols)?.len();
    let rows = r
        .iter()
        .enumerate()
        .map(|(i, row)| vector(row, &format!("{at}[{i}]"), Some(first)))
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows).map_err(|e| CliError::input(format!("{at}: {e}")))
}

fn bracket<S: Scalar>(v: &Value, at: &str, n: usize) -> Result<LeibnizAlgebra<S>, CliError> {
    let mut flat = Vec::with_capacity(n * n * n);
    for (i, row) in array(v, at, Some(n))?.iter().enumerate() {
        for (j, c) in array(row, &format!("{at}[{i}]"), Some(n))?.iter().enumerate() {
            flat.extend(vector::<S>(c, &format!("{at}[{i}][{j}]"), Some(n))?);
        }
    }
    LeibnizAlgebra::from_flat(n, flat).map_err(|e| CliError::input(format!("{at}: {e}")))
}

fn parse_content<S: Scalar>(f: &AlgebraFile) -> Result<Parsed<S>, CliError> {
    let algebra = match (&f.bracket, f.dimension) {
        (Some(b), Some(n)) => {
            let mut alg = bracket::<S>(b, "bracket", n)?;
            if let Some(labels) = &f.basis {
                if labels.len() != n {
                    return Err(CliError::input(format!("basis: expected {n} labels, found {}", labels.len())));
                }
                alg = alg.with_labels(labels.clone()).map_err(|e| CliError::input(format!("basis: {e}")))?;
            }
            Some(alg.with_lie_flag(f.lie.unwrap_or(false)))
        }
        (Some(_), None) => return Err(CliError::input("'bracket' given without 'dimension'")),
        (None, _) => None,
    };
    let n = algebra.as_ref().map(LeibnizAlgebra::dim);
    let augmentation = match &f.augmentation {
        None => None,
        Some(a) => {
            let h = n.ok_or_else(|| CliError::input("augmentation requires the algebra 'bracket' and 'dimension'"))?;
            let g = bracket::<S>(&a.g_bracket, "augmentation.g_bracket", a.g_dimension)?;
            let p = matrix::<S>(&a.p, "augmentation.p", Some(a.g_dimension), Some(h))?;
            let action = array(&a.action, "augmentation.action", Some(a.g_dimension))?
                .iter()
                .enumerate()
                .map(|(k, m)| matrix::<S>(m, &format!("augmentation.action[{k}]"), Some(h), Some(h)))
                .collect::<Result<Vec<_>, _>>()?;
            Some(
                AugmentedLeibnizAlgebra::new(h, g, p, action)
                    .map_err(|e| CliError::input(format!("augmentation: {e}")))?,
            )
        }
    };
    if let (Some(alg), Some(aug)) = (&algebra, &augmentation) {
        if alg.flat_table() != aug.derived_algebra().flat_table() {
            return Err(CliError::input(
                "bracket does not match the bracket p(x).y induced by the augmentation",
            ));
        }
    }
    let nilradical = match &f.nilradical {
        None => None,
        Some(v) => {
            let d = n.ok_or_else(|| CliError::input("nilradical requires an algebra"))?;
            Some(
                array(v, "nilradical", None)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| vector::<S>(x, &format!("nilradical[{i}]"), Some(d)))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
    };
    let elements = match &f.elements {
        None => Vec::new(),
        Some(v) => {
            let d = n.ok_or_else(|| CliError::input("elements require an algebra"))?;
            array(v, "elements", None)?
                .iter()
                .enumerate()
                .map(|(i, x)| vector::<S>(x, &format!("elements[{i}]"), Some(d)))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let matrices = match &f.matrices {
        None => Vec::new(),
        Some(v) => array(v, "matrices", None)?
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let m = matrix::<S>(m, &format!("matrices[{i}]"), None, None)?;
                if !m.is_square() {
                    return Err(CliError::input(format!("matrices[{i}]: matrix is not square")));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(Parsed {
        algebra,
        augmentation,
        nilradical,
        elements,
        matrices,
    })
}

/// Parses and shape-checks a file's text.
pub fn parse_input(text: &str, fallback_name: &str) -> Result<Input, CliError> {
    let f: AlgebraFile = serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed JSON: {e}")))?;
    if f.format != 1 {
        return Err(CliError::input(format!("unsupported format {}; expected 1", f.format)));
    }
    let content = match f.scalars.as_str() {
        "rational" => Content::Rational(parse_content::<Rational>(&f)?),
        "float64" => Content::Float(parse_content::<f64>(&f)?),
        other => {
            return Err(CliError::input(format!(
                "scalars: expected \"rational\" or \"float64\", found {other:?}"
            )))
        }
    };
    let representation = match f.model.as_ref().and_then(|m| m.representation.as_ref()) {
        None => None,
        Some(v) => Some(
            array(v, "model.representation", None)?
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let m = matrix::<f64>(m, &format!("model.representation[{k}]"), None, None)?;
                    if !m.is_square() {
                        return Err(CliError::input(format!("model.representation[{k}]: matrix is not square")));
                    }
                    Ok(m)
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    if let Some(o) = &f.product_override {
        if o != "additive" {
            return Err(CliError::input(format!("product_override: unknown product {o:?}")));
        }
        if f.dimension.is_none() {
            return Err(CliError::input("product_override requires 'dimension'"));
        }
    }
    Ok(Input {
        name: f.name.clone().unwrap_or_else(|| fallback_name.to_string()),
        declared_lie: f.lie,
        model: f.model.clone(),
        representation,
        product_override: f.product_override.clone(),
        content,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_errors_name_the_location() {
        let text = r#"{"format":1,"dimension":2,"scalars":"rational","bracket":[[["0","1"],["0"]],[["0","0"],["0","0"]]]}"#;
        let e = parse_input(text, "x").unwrap_err();
        assert!(e.to_string().contains("bracket[0][1]"), "{e}");
        let text = r#"{"format":1,"dimension":1,"scalars":"rational","bracket":[[[0.5]]]}"#;
        assert!(parse_input(text, "x").is_err());
        let text = r#"{"format":2,"scalars":"rational"}"#;
        assert!(parse_input(text, "x").unwrap_err().to_string().contains("format"));
        let text = r#"{"format":1,"scalars":"complex"}"#;
        assert!(parse_input(text, "x").is_err());
    }

    #[test]
    fn literals() {
        let text = r#"{"format":1,"dimension":1,"scalars":"float64","bracket":[[["pi/2"]]]}"#;
        let i = parse_input(text, "x").unwrap();
        assert_eq!(i.algebra_f64().unwrap().constant(0, 0, 0), &(std::f64::consts::PI / 2.0));
        assert_eq!(i.name, "x");
        let text = r#"{"format":1,"dimension":1,"scalars":"rational","bracket":[[["-3/4"]]]}"#;
        let i = parse_input(text, "x").unwrap();
        assert_eq!(i.algebra_f64().unwrap().constant(0, 0, 0), &-0.75);
    }
}
