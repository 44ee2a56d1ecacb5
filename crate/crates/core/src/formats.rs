//! JSON interchange formats used by the command-line front end.
//!
//! Each file holds a single object. Matrices are nested arrays in row-major
//! physical layout; the block structure is derived from n, s, m, k rather
//! than stored per block. Entries may be JSON numbers or strings holding an
//! integer or a fraction such as "-3/7", so exact-mode fixtures survive
//! round trips without precision loss.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::blockmat::BlockMatrix;
use crate::error::{Error, Result};
use crate::mat::{LinearOps, Mat};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::system::{BlockSystem, Form, HigherOrderOde, TargetCoefficients};

/// Scalars that can be read from and written to JSON values.
pub trait JsonScalar: LinearOps {
    fn from_value(v: &Value) -> Result<Self>;
    fn to_value(&self) -> Value;
}

impl JsonScalar for f64 {
    fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::Number(x) => x
                .as_f64()
                .ok_or_else(|| Error::Validation(format!("number out of range: {x}"))),
            Value::String(s) => parse_rational(s)
                .map(|r| Scalar::to_f64(&r))
                .or_else(|| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Validation(format!("cannot parse number \"{s}\""))),
            other => Err(Error::Validation(format!("expected a number, got {other}"))),
        }
    }

    fn to_value(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.to_string()))
    }
}

impl JsonScalar for Rational {
    fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::Number(x) => {
                if let Some(i) = x.as_i64() {
                    Ok(Scalar::from_i64(i))
                } else if let Some(f) = x.as_f64() {
                    num_rational::BigRational::from_float(f).ok_or_else(|| {
                        Error::Validation(format!("non-finite number: {f}"))
                    })
                } else {
                    Err(Error::Validation(format!("number out of range: {x}")))
                }
            }
            Value::String(s) => parse_rational(s)
                .ok_or_else(|| Error::Validation(format!("cannot parse rational \"{s}\""))),
            other => Err(Error::Validation(format!("expected a number, got {other}"))),
        }
    }

    fn to_value(&self) -> Value {
        Value::String(format_rational(self))
    }
}

/// Nested-array matrix as it appears in the files.
pub type MatrixData = Vec<Vec<Value>>;

pub fn matrix_from_data<T: JsonScalar>(
    data: &MatrixData,
    rows: usize,
    cols: usize,
    name: &str,
) -> Result<Mat<T>> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::Validation(format!(
            "{name} must be {rows}x{cols}, got {}x{}",
            data.len(),
            data.first().map_or(0, |r| r.len())
        )));
    }
    let mut out = Mat::zeros(rows, cols);
    for (i, row) in data.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let x = T::from_value(v).map_err(|e| {
                Error::Validation(format!("{name} entry ({},{}): {e}", i + 1, j + 1))
            })?;
            out.set(i, j, x);
        }
    }
    Ok(out)
}

pub fn matrix_to_data<T: JsonScalar>(m: &Mat<T>) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_value()).collect())
        .collect()
}

/// State-space system file: dimensions, declared form, and the three
/// coefficient matrices at physical size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub k: usize,
    pub p: usize,
    pub form: String,
    #[serde(rename = "F")]
    pub f: MatrixData,
    #[serde(rename = "G")]
    pub g: MatrixData,
    #[serde(rename = "H")]
    pub h: MatrixData,
}

pub fn parse_form(s: &str) -> Result<Form> {
    match s {
        "frobenius" => Ok(Form::Frobenius),
        "hessenberg" => Ok(Form::Hessenberg),
        other => Err(Error::Validation(format!(
            "form must be \"frobenius\" or \"hessenberg\", got \"{other}\""
        ))),
    }
}

impl SystemFile {
    pub fn into_system<T: JsonScalar>(&self) -> Result<BlockSystem<T>> {
        let (n, s) = (self.n, self.s);
        if n == 0 || s == 0 || self.m == 0 || self.k == 0 {
            return Err(Error::Validation("n, s, m, k must be positive".into()));
        }
        let form = parse_form(&self.form)?;
        let f = matrix_from_data(&self.f, n * s, n * s, "F")?;
        let g = matrix_from_data(&self.g, n * s, self.m * s, "G")?;
        let h = matrix_from_data(&self.h, self.k * s, n * s, "H")?;
        BlockSystem::new(
            BlockMatrix::new(f, s)?,
            BlockMatrix::new(g, s)?,
            BlockMatrix::new(h, s)?,
            self.p,
            form,
        )
    }

    pub fn from_system<T: JsonScalar>(sys: &BlockSystem<T>) -> Self {
        SystemFile {
            n: sys.n,
            s: sys.s,
            m: sys.m,
            k: sys.k,
            p: sys.p,
            form: sys.form.to_string(),
            f: matrix_to_data(&sys.f.mat),
            g: matrix_to_data(&sys.g.mat),
            h: matrix_to_data(&sys.h.mat),
        }
    }
}

/// Targets file: either coefficient blocks Γ₁..Γₙ or a complete set of
/// left solvents, never both.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetsFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<MatrixData>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvents: Option<Vec<MatrixData>>,
}

impl TargetsFile {
    fn blocks<T: JsonScalar>(
        list: &[MatrixData],
        n: usize,
        s: usize,
        name: &str,
    ) -> Result<Vec<Mat<T>>> {
        if list.len() != n {
            return Err(Error::Validation(format!(
                "{name} must hold {n} blocks, got {}",
                list.len()
            )));
        }
        list.iter()
            .enumerate()
            .map(|(i, d)| matrix_from_data(d, s, s, &format!("{name}[{}]", i + 1)))
            .collect()
    }

    pub fn into_targets<T: JsonScalar>(&self, n: usize, s: usize) -> Result<TargetCoefficients<T>> {
        match (&self.gammas, &self.solvents) {
            (Some(g), None) => TargetCoefficients::new(Self::blocks(g, n, s, "gammas")?),
            _ => Err(Error::Validation(
                "targets file must hold exactly the key \"gammas\"".into(),
            )),
        }
    }

    pub fn into_solvents<T: JsonScalar>(&self, n: usize, s: usize) -> Result<Vec<Mat<T>>> {
        match (&self.gammas, &self.solvents) {
            (None, Some(l)) => Self::blocks(l, n, s, "solvents"),
            _ => Err(Error::Validation(
                "targets file must hold exactly the key \"solvents\"".into(),
            )),
        }
    }

    pub fn kind(&self) -> Result<&'static str> {
        match (&self.gammas, &self.solvents) {
            (Some(_), None) => Ok("gammas"),
            (None, Some(_)) => Ok("solvents"),
            _ => Err(Error::Validation(
                "targets file must hold exactly one of \"gammas\" or \"solvents\"".into(),
            )),
        }
    }
}

/// Gain file: any object with a key "Q"; assignment result files qualify.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GainFile {
    #[serde(rename = "Q")]
    pub q: MatrixData,
}

/// Higher-order ODE file. `A` lists A₁..Aₙ; `B[l-p][α-1]` and `C[ν-1][β-1]`
/// hold the forcing and observation coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OdeFile {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub k: usize,
    pub p: usize,
    #[serde(rename = "A")]
    pub a: Vec<MatrixData>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<MatrixData>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<MatrixData>>,
}

impl OdeFile {
    pub fn into_ode<T: JsonScalar>(&self) -> Result<HigherOrderOde<T>> {
        let (n, s, m, k, p) = (self.n, self.s, self.m, self.k, self.p);
        if n == 0 || s == 0 || m == 0 || k == 0 || p == 0 || p > n {
            return Err(Error::Validation("n, s, m, k, p out of range".into()));
        }
        let a = TargetsFile::blocks(&self.a, n, s, "A")?;
        if self.b.len() != n - p + 1 || self.c.len() != p {
            return Err(Error::Validation(format!(
                "B must hold {} rows and C {} rows of blocks",
                n - p + 1,
                p
            )));
        }
        let b = self
            .b
            .iter()
            .enumerate()
            .map(|(l, row)| TargetsFile::blocks(row, m, s, &format!("B[{}]", l + p)))
            .collect::<Result<Vec<_>>>()?;
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(nu, row)| TargetsFile::blocks(row, k, s, &format!("C[{}]", nu + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(HigherOrderOde { a, b, c, n, s, m, k, p })
    }
}

/// Output document shared by all commands; absent fields are omitted.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ResultFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precheck_mk_ge_n: Option<bool>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<MatrixData>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixData>,
    #[serde(rename = "Phi", skip_serializing_if = "Option::is_none")]
    pub phi: Option<MatrixData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<MatrixData>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_solve: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_similarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvent_residuals: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}
