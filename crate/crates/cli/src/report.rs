//! Report documents. The machine format is the serde form of these types;
//! the text format is a short human summary of the same data.

use std::fmt::Write as _;

use serde::Serialize;

use crate::io::{ClassFile, FieldSpec};

pub trait Report: Serialize {
    fn text(&self) -> String;
}

fn join(v: &[String]) -> String {
    format!("[{}]", v.join(", "))
}

#[derive(Debug, Serialize)]
pub struct HhReport {
    pub field: FieldSpec,
    pub level: usize,
    pub normalized: bool,
    pub cochain_dim: usize,
    pub dim: usize,
    pub context: String,
    pub representatives: Vec<Vec<String>>,
}

impl Report for HhReport {
    fn text(&self) -> String {
        let mut s = format!(
            "HH^{} ({}): dim {} (cochains {}, context {})\n",
            self.level,
            if self.normalized { "normalized" } else { "unnormalized" },
            self.dim,
            self.cochain_dim,
            self.context
        );
        for (i, r) in self.representatives.iter().enumerate() {
            let support = r.iter().filter(|c| c.as_str() != "0").count();
            let _ = writeln!(s, "  class {i}: {support} nonzero cochain values");
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct AutReport {
    pub field: FieldSpec,
    pub order: usize,
    pub maps: Vec<Vec<Vec<String>>>,
}

impl Report for AutReport {
    fn text(&self) -> String {
        let mut s = format!("|Aut(M)| = {}\n", self.order);
        for (i, m) in self.maps.iter().enumerate() {
            let rows: Vec<String> = m.iter().map(|r| join(r)).collect();
            let _ = writeln!(s, "  sigma_{i} = {}", rows.join(" "));
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitRow {
    pub coords: Vec<String>,
    pub orbit_size: u64,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub field: FieldSpec,
    pub n: usize,
    pub hh_dim: usize,
    pub aut_order: u64,
    pub orbit_count: u64,
    pub representatives: Vec<OrbitRow>,
    pub classes_enumerated: u64,
    pub action_applications: u64,
}

impl Report for ClassifyReport {
    fn text(&self) -> String {
        let mut s = format!(
            "n = {}: dim HH^{} = {}, |Aut(M)| = {}, {} extension classes\n",
            self.n,
            self.n + 2,
            self.hh_dim,
            self.aut_order,
            self.orbit_count
        );
        for r in &self.representatives {
            let _ = writeln!(s, "  {} (orbit size {})", join(&r.coords), r.orbit_size);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub field: FieldSpec,
    pub n: usize,
    pub count: usize,
    pub aut_order: u64,
    pub cochains_enumerated: u64,
    pub cocycles: u64,
    pub classes: Vec<Vec<String>>,
}

impl Report for OracleReport {
    fn text(&self) -> String {
        format!(
            "n = {}: {} extension classes ({} cochains enumerated, {} cocycles, |Aut(M)| = {})\n",
            self.n, self.count, self.cochains_enumerated, self.cocycles, self.aut_order
        )
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub associativity_failures: usize,
    pub module_failures: Vec<String>,
    pub cocycle_failures: usize,
    pub shape_failures: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct RealizeReport {
    pub n: usize,
    pub arity: usize,
    pub input_coords: Vec<String>,
    pub read_back: Vec<String>,
    pub round_trip: bool,
    pub check: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_file: Option<String>,
}

impl Report for RealizeReport {
    fn text(&self) -> String {
        let mut s = format!(
            "m_{} realized; class {} read back as {} ({})\n",
            self.arity,
            join(&self.input_coords),
            join(&self.read_back),
            if self.round_trip { "match" } else { "MISMATCH" }
        );
        let _ = writeln!(
            s,
            "A-infinity check: {}",
            if self.check.passed { "passed" } else { "FAILED" }
        );
        if let Some(p) = &self.model_file {
            let _ = writeln!(s, "model written to {p}");
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct KinvReport {
    pub n: usize,
    pub convention: String,
    pub h0_dim: usize,
    pub hn_dim: usize,
    pub hh_dim: usize,
    pub zero: bool,
    pub coords: Vec<String>,
    pub class: ClassFile,
}

impl Report for KinvReport {
    fn text(&self) -> String {
        format!(
            "k-invariant at level {}: {} (dim H_0 = {}, dim H_{} = {}, dim HH^{} = {})\n",
            self.n,
            if self.zero { "zero".to_string() } else { join(&self.coords) },
            self.h0_dim,
            self.n,
            self.hn_dim,
            self.n + 2,
            self.hh_dim
        )
    }
}

#[derive(Debug, Serialize)]
pub struct TruncateReport {
    pub n: usize,
    pub dims_before: Vec<usize>,
    pub dims_after: Vec<usize>,
    pub homology_before: Vec<usize>,
    pub homology_after: Vec<usize>,
    pub out: String,
}

impl Report for TruncateReport {
    fn text(&self) -> String {
        format!(
            "truncated at {}: dims {:?} -> {:?}, homology {:?} -> {:?}; written to {}\n",
            self.n, self.dims_before, self.dims_after, self.homology_before, self.homology_after, self.out
        )
    }
}

#[derive(Debug, Serialize)]
pub struct BmRow {
    pub seed: Option<u64>,
    pub m: usize,
    pub n: usize,
    pub window: usize,
    pub bound: i64,
    pub connectivity: i64,
    pub window_limited: bool,
    pub first_nonvanishing: Option<(i64, usize)>,
    pub verified: Option<bool>,
    pub relative_degrees: usize,
    pub relative_holds: bool,
    pub sharp: Option<bool>,
    pub unit_boundary: bool,
    pub violation: bool,
}

#[derive(Debug, Serialize)]
pub struct BmTable {
    pub instances: usize,
    pub violations: usize,
    pub rows: Vec<BmRow>,
}

fn tri(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "n/a",
    }
}

impl Report for BmTable {
    fn text(&self) -> String {
        let mut s = String::from("seed   m n win bound conn first   verified sharp\n");
        for r in &self.rows {
            let seed = r.seed.map_or("-".to_string(), |x| x.to_string());
            let first = r
                .first_nonvanishing
                .map_or("-".to_string(), |(d, k)| format!("H{d}:{k}"));
            let conn = format!("{}{}", r.connectivity, if r.window_limited { "+" } else { "" });
            let _ = writeln!(
                s,
                "{seed:<6} {} {} {:<3} {:<5} {conn:<4} {first:<7} {:<8} {}",
                r.m,
                r.n,
                r.window,
                r.bound,
                tri(r.verified),
                tri(r.sharp)
            );
        }
        let _ = writeln!(s, "{} instances, {} violations", self.instances, self.violations);
        s
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub file: String,
    pub kind: String,
    pub valid: bool,
    pub summary: String,
}

impl Report for ValidateReport {
    fn text(&self) -> String {
        format!("{}: valid {} ({})\n", self.file, self.kind, self.summary)
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateAll {
    pub files: Vec<ValidateReport>,
}

impl Report for ValidateAll {
    fn text(&self) -> String {
        self.files.iter().map(Report::text).collect()
    }
}
