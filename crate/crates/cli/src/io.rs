//! JSON documents read and written by the command line.
//!
//! Coefficients may be JSON integers or strings such as `"-3"` or `"1/2"`;
//! the engine reduces them into the ground field. Output coefficients are
//! always strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use ktower::algebras::{Algebra, Bimodule};
use ktower::blakers::Cell;
use ktower::dga::{DgAlgebra, SemifreeDga};
use ktower::exactla::{GroundField, Matrix, Scalar};
use ktower::hochschild::CohomologyClass;
use ktower::moduli::MinimalExtensionModel;
use ktower::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Prime { p: u64 },
    Rational { rational: bool },
}

impl FieldSpec {
    pub fn field(&self) -> Result<GroundField> {
        match self {
            FieldSpec::Prime { p } => GroundField::prime(*p),
            FieldSpec::Rational { rational: true } => Ok(GroundField::Rationals),
            FieldSpec::Rational { rational: false } => {
                Err(Error::Invalid("field: {\"rational\": false} names no field".into()))
            }
        }
    }

    pub fn of(field: GroundField) -> Self {
        match field.order() {
            Some(p) => FieldSpec::Prime { p },
            None => FieldSpec::Rational { rational: true },
        }
    }
}

fn coeff(field: GroundField, v: &Value, what: &str) -> Result<Scalar> {
    match v {
        Value::Number(n) => field.parse_scalar(&n.to_string()),
        Value::String(s) => field.parse_scalar(s),
        _ => Err(Error::Invalid(format!("{what}: coefficient {v} is not a number"))),
    }
}

fn coeffs(field: GroundField, vs: &[Value], what: &str) -> Result<Vec<Scalar>> {
    vs.iter().map(|v| coeff(field, v, what)).collect()
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix(field: GroundField, rows: &[Vec<Value>], size: usize, what: &str) -> Result<Matrix> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(Error::Invalid(format!("{what}: expected a {size}x{size} matrix")));
    }
    let rows = rows
        .iter()
        .map(|r| coeffs(field, r, what))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(field, size, rows))
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(m.row(i))).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: FieldSpec,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<Value>,
    /// `[i, j, k, c]`: `e_i e_j` has coefficient `c` on `e_k`.
    pub product: Vec<(usize, usize, usize, Value)>,
}

impl AlgebraFile {
    pub fn build(&self) -> Result<Algebra> {
        let f = self.field.field()?;
        if self.basis.len() != self.dim || self.unit.len() != self.dim {
            return Err(Error::Invalid(format!(
                "algebra: dim is {} but basis has {} and unit {} entries",
                self.dim,
                self.basis.len(),
                self.unit.len()
            )));
        }
        let mut triples = Vec::new();
        for (idx, (i, j, k, c)) in self.product.iter().enumerate() {
            triples.push((*i, *j, *k, coeff(f, c, &format!("product #{idx}"))?));
        }
        let a = Algebra::new(f, self.basis.clone(), coeffs(f, &self.unit, "unit")?, &triples)?;
        let report = a.validate();
        if let Some(&(i, j, k)) = report.associativity_failures.first() {
            return Err(Error::Invalid(format!(
                "algebra is not associative: (e_{i} e_{j}) e_{k} != e_{i} (e_{j} e_{k}) ({} failing triples)",
                report.associativity_failures.len()
            )));
        }
        if let Some(&i) = report.unit_failures.first() {
            return Err(Error::Invalid(format!("unit does not act as identity on basis element {i}")));
        }
        Ok(a)
    }

    pub fn of(a: &Algebra) -> Self {
        AlgebraFile {
            field: FieldSpec::of(a.field()),
            dim: a.dim(),
            basis: a.basis().to_vec(),
            unit: a.unit().iter().map(|s| Value::String(s.to_string())).collect(),
            product: a
                .triples()
                .into_iter()
                .map(|(i, j, k, c)| (i, j, k, Value::String(c.to_string())))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleFile {
    pub dim: usize,
    pub basis: Vec<String>,
    /// One matrix per algebra basis element, acting on column vectors.
    pub left: Vec<Vec<Vec<Value>>>,
    pub right: Vec<Vec<Vec<Value>>>,
}

impl BimoduleFile {
    pub fn build(&self, a: &Algebra) -> Result<Bimodule> {
        let f = a.field();
        if self.basis.len() != self.dim {
            return Err(Error::Invalid(format!(
                "bimodule: dim is {} but basis has {} entries",
                self.dim,
                self.basis.len()
            )));
        }
        let mats = |side: &[Vec<Vec<Value>>], name: &str| -> Result<Vec<Matrix>> {
            side.iter()
                .enumerate()
                .map(|(i, m)| matrix(f, m, self.dim, &format!("{name} action of e_{i}")))
                .collect()
        };
        let m = Bimodule::new(a, self.basis.clone(), mats(&self.left, "left")?, mats(&self.right, "right")?)?;
        let r = m.validate_against(a)?;
        if let Some(&(i, j)) = r.left_failures.first() {
            return Err(Error::Invalid(format!("left action fails L_{i} L_{j} = L_(e_{i} e_{j})")));
        }
        if let Some(&(i, j)) = r.right_failures.first() {
            return Err(Error::Invalid(format!("right action fails R_{j} R_{i} = R_(e_{i} e_{j})")));
        }
        if let Some(&(i, j)) = r.commute_failures.first() {
            return Err(Error::Invalid(format!("left action of e_{i} does not commute with right action of e_{j}")));
        }
        if r.unit_failure {
            return Err(Error::Invalid("the unit does not act as the identity".into()));
        }
        Ok(m)
    }

    pub fn of(m: &Bimodule) -> Self {
        let mats = |ms: &[Matrix]| -> Vec<Vec<Vec<Value>>> {
            ms.iter()
                .map(|x| {
                    matrix_rows(x)
                        .into_iter()
                        .map(|r| r.into_iter().map(Value::String).collect())
                        .collect()
                })
                .collect()
        };
        BimoduleFile {
            dim: m.dim(),
            basis: m.basis().to_vec(),
            left: mats(m.left_all()),
            right: mats(m.right_all()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgaFile {
    pub field: FieldSpec,
    /// Basis labels per degree, keyed by the degree as a string.
    pub degrees: BTreeMap<String, Vec<String>>,
    /// `[p, i, j, c]`: entry `(i, j)` of `d_p`, from basis `j` of degree `p`
    /// to basis `i` of degree `p - 1`.
    pub differential: Vec<(usize, usize, usize, Value)>,
    /// `[p, i, q, j, k, c]`: `e^p_i e^q_j` has coefficient `c` on `e^{p+q}_k`.
    pub product: Vec<(usize, usize, usize, usize, usize, Value)>,
    pub unit: Vec<Value>,
    /// Whether the window holds the whole algebra. Defaults to true.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_exact: Option<bool>,
}

impl DgaFile {
    pub fn build(&self) -> Result<DgAlgebra> {
        let f = self.field.field()?;
        let mut hi = 0;
        for key in self.degrees.keys() {
            let p: usize = key
                .parse()
                .map_err(|_| Error::Invalid(format!("degrees: key {key:?} is not a degree")))?;
            hi = hi.max(p);
        }
        let labels: Vec<Vec<String>> = (0..=hi)
            .map(|p| self.degrees.get(&p.to_string()).cloned().unwrap_or_default())
            .collect();
        let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
        let mut diffs: Vec<Matrix> = (1..=hi).map(|p| Matrix::zeros(f, dims[p - 1], dims[p])).collect();
        for (idx, (p, i, j, c)) in self.differential.iter().enumerate() {
            if *p == 0 || *p > hi || *i >= dims[p - 1] || *j >= dims[*p] {
                return Err(Error::Invalid(format!(
                    "differential entry #{idx} ({p}, {i}, {j}) indexes outside the basis"
                )));
            }
            let c = coeff(f, c, &format!("differential entry #{idx}"))?;
            diffs[p - 1].add_at(*i, *j, &c);
        }
        let mut product = Vec::new();
        for (idx, (p, i, q, j, k, c)) in self.product.iter().enumerate() {
            product.push((*p, *i, *q, *j, *k, coeff(f, c, &format!("product #{idx}"))?));
        }
        let unit = coeffs(f, &self.unit, "unit")?;
        let c = DgAlgebra::new(f, labels, diffs, &product, unit, self.top_exact.unwrap_or(true))?;
        if let Some(msg) = c.validate().first_failure() {
            return Err(Error::Invalid(format!("DGA axioms fail: {msg}")));
        }
        Ok(c)
    }

    pub fn of(c: &DgAlgebra) -> Self {
        let f = c.field();
        let mut differential = Vec::new();
        for p in 1..=c.hi() {
            let d = c.d(p);
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    let v = d.get(i, j);
                    if !f.is_zero(v) {
                        differential.push((p, i, j, Value::String(v.to_string())));
                    }
                }
            }
        }
        DgaFile {
            field: FieldSpec::of(f),
            degrees: (0..=c.hi()).map(|p| (p.to_string(), c.labels(p).to_vec())).collect(),
            differential,
            product: c
                .product_terms()
                .into_iter()
                .map(|(p, i, q, j, k, s)| (p, i, q, j, k, Value::String(s.to_string())))
                .collect(),
            unit: c.unit().iter().map(|s| Value::String(s.to_string())).collect(),
            top_exact: (!c.top_exact()).then_some(false),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
    /// Boundary over earlier generator names.
    pub d: String,
}

impl GeneratorSpec {
    pub fn cell(&self) -> Cell {
        Cell::new(&self.name, self.degree, &self.d)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemifreeFile {
    pub field: FieldSpec,
    pub window: usize,
    pub generators: Vec<GeneratorSpec>,
}

impl SemifreeFile {
    pub fn build(&self, window: Option<usize>) -> Result<SemifreeDga> {
        let mut s = SemifreeDga::new(self.field.field()?, window.unwrap_or(self.window));
        for g in &self.generators {
            s = s.adjoin_cell_str(&g.name, g.degree, &g.d)?;
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub base: SemifreeFile,
    pub cells_b: Vec<GeneratorSpec>,
    pub cells_c: Vec<GeneratorSpec>,
    pub m: usize,
    pub n: usize,
}

/// A Hochschild class tied to the `(A, M, s)` it was computed for.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub level: usize,
    /// Context hash of the cochain complex the class lives in.
    pub context: String,
    /// Cochain values on tensor tuples, first slot most significant.
    pub cochain: Vec<Value>,
    /// Coordinates in the canonical basis of `HH^s`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Value>>,
}

impl ClassFile {
    pub fn of(c: &CohomologyClass, coords: Option<&[Scalar]>) -> Self {
        ClassFile {
            level: c.level,
            context: c.context.clone(),
            cochain: c.cochain.iter().map(|s| Value::String(s.to_string())).collect(),
            coords: coords.map(|v| v.iter().map(|s| Value::String(s.to_string())).collect()),
        }
    }

    pub fn build(&self, field: GroundField) -> Result<CohomologyClass> {
        Ok(CohomologyClass {
            level: self.level,
            cochain: coeffs(field, &self.cochain, "class cochain")?,
            context: self.context.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub algebra: AlgebraFile,
    pub bimodule: BimoduleFile,
    pub n: usize,
    /// Values of the higher operation on all `A^{⊗(n+2)}` tuples.
    pub operation: Vec<Value>,
}

impl ModelFile {
    pub fn of(e: &MinimalExtensionModel) -> Self {
        ModelFile {
            algebra: AlgebraFile::of(&e.algebra),
            bimodule: BimoduleFile::of(&e.bimodule),
            n: e.n,
            operation: e.operation.iter().map(|s| Value::String(s.to_string())).collect(),
        }
    }

    pub fn build(&self) -> Result<MinimalExtensionModel> {
        let a = self.algebra.build()?;
        let m = self.bimodule.build(&a)?;
        let operation = coeffs(a.field(), &self.operation, "operation")?;
        let mut e = MinimalExtensionModel::trivial(&a, &m, self.n)?;
        if operation.len() != e.operation.len() {
            return Err(Error::Invalid(format!(
                "operation has {} values, arity {} needs {}",
                operation.len(),
                e.arity(),
                e.operation.len()
            )));
        }
        e.operation = operation;
        Ok(e)
    }
}

/// Reads and parses a JSON document; syntax errors carry line and column.
pub fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn read_value(path: &Path) -> Result<Value> {
    read(path)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub(crate) fn scalars(v: &[Scalar]) -> Vec<String> {
    strings(v)
}

pub(crate) fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    matrix_rows(m)
}

/// Index of shipped example files; paths are relative to the manifest.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub manifest: u32,
    #[serde(default)]
    pub algebras: Vec<String>,
    /// Bimodule files with the algebra they are over.
    #[serde(default)]
    pub bimodules: Vec<ManifestEntry>,
    #[serde(default)]
    pub dgas: Vec<String>,
    #[serde(default)]
    pub semifree: Vec<String>,
    #[serde(default)]
    pub problems: Vec<String>,
    #[serde(default)]
    pub classes: Vec<ManifestEntry>,
    #[serde(default)]
    pub models: Vec<String>,
    /// Coefficient pairs `(A, M)` used by the examples.
    #[serde(default)]
    pub pairs: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<String>,
    /// Level for classes and pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl Manifest {
    /// Every listed file with the context needed to validate it.
    pub fn entries(&self) -> Vec<ManifestEntry> {
        let plain = |f: &String| ManifestEntry { file: f.clone(), ..Default::default() };
        let mut out: Vec<ManifestEntry> = self.algebras.iter().map(plain).collect();
        out.extend(self.bimodules.iter().cloned());
        out.extend(self.dgas.iter().map(plain));
        out.extend(self.semifree.iter().map(plain));
        out.extend(self.problems.iter().map(plain));
        out.extend(self.classes.iter().cloned());
        out.extend(self.models.iter().map(plain));
        out
    }
}
