use std::collections::HashMap;

use super::poly::{parse_poly, Poly, Word};
use super::{empty_products, DgAlgebra, Sparse};
use crate::complexes::ChainComplex;
use crate::error::{Error, Result};
use crate::exactla::{GroundField, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub boundary: Poly,
}

/// A semifree DGA: the tensor algebra on generators of positive degree,
/// each with a boundary in the subalgebra generated by earlier ones,
/// seen through the degree window `[0, window]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemifreeDga {
    field: GroundField,
    window: usize,
    generators: Vec<Generator>,
}

impl SemifreeDga {
    /// The ground field, with no generators.
    pub fn new(field: GroundField, window: usize) -> Self {
        SemifreeDga {
            field,
            window,
            generators: Vec::new(),
        }
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn with_window(&self, window: usize) -> Self {
        SemifreeDga {
            window,
            ..self.clone()
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn word_degree(&self, w: &[usize]) -> usize {
        w.iter().map(|&g| self.generators[g].degree).sum()
    }

    /// Leibniz differential: `d(g_1 ... g_r) = Σ ± g_1 ... d(g_k) ... g_r`
    /// with sign `(-1)^{|g_1| + ... + |g_{k-1}|}`.
    pub fn differential(&self, p: &Poly) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f);
        for (w, c) in p.terms() {
            let mut prefix_deg = 0usize;
            for (k, &g) in w.iter().enumerate() {
                let coeff = f.mul(c, &f.sign(prefix_deg as i64));
                let left = Poly::monomial(f, w[..k].to_vec(), coeff);
                let right = Poly::monomial(f, w[k + 1..].to_vec(), f.one());
                out.add_scaled(&left.mul(&self.generators[g].boundary).mul(&right), &f.one());
                prefix_deg += self.generators[g].degree;
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        parse_poly(self.field, &self.names(), text)
    }

    /// Adjoins a generator `name` of degree `degree` with `d(name) = boundary`.
    pub fn adjoin_cell(&self, name: &str, degree: usize, boundary: Poly) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid(format!(
                "generator {name} has degree 0; only positive-degree generators keep each degree finite"
            )));
        }
        let valid_name = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if !valid_name {
            return Err(Error::invalid(format!("bad generator name {name:?}")));
        }
        if self.generators.iter().any(|g| g.name == name) {
            return Err(Error::invalid(format!("generator {name} already present")));
        }
        if boundary.field() != self.field {
            return Err(Error::FieldMismatch("cell boundary".into()));
        }
        if boundary.max_letter().is_some_and(|m| m >= self.generators.len()) {
            return Err(Error::invalid(format!(
                "boundary of {name} uses a generator that is not earlier"
            )));
        }
        for (w, _) in boundary.terms() {
            let dw = self.word_degree(w);
            if dw + 1 != degree {
                return Err(Error::invalid(format!(
                    "boundary of {name} has a term of degree {dw}, expected {}",
                    degree - 1
                )));
            }
        }
        let db = self.differential(&boundary);
        if !db.is_zero() {
            return Err(Error::invalid(format!(
                "boundary of {name} is not a cycle: d({}) = {}",
                boundary.render(&self.names()),
                db.render(&self.names())
            )));
        }
        let mut out = self.clone();
        out.generators.push(Generator {
            name: name.to_string(),
            degree,
            boundary,
        });
        Ok(out)
    }

    pub fn adjoin_cell_str(&self, name: &str, degree: usize, boundary: &str) -> Result<Self> {
        let b = self.parse(boundary)?;
        self.adjoin_cell(name, degree, b)
    }

    fn check_degrees(&self) -> Result<()> {
        if let Some(g) = self.generators.iter().find(|g| g.degree == 0) {
            return Err(Error::invalid(format!(
                "generator {} has degree 0; expansion would be infinite in degree 0",
                g.name
            )));
        }
        Ok(())
    }

    /// Number of words in each degree of the window, without listing them.
    pub fn dims(&self) -> Result<Vec<u64>> {
        self.check_degrees()?;
        let mut count = vec![0u64; self.window + 1];
        count[0] = 1;
        for k in 1..=self.window {
            let mut c = 0u64;
            for g in &self.generators {
                if g.degree <= k {
                    c = c.saturating_add(count[k - g.degree]);
                }
            }
            count[k] = c;
        }
        Ok(count)
    }

    /// Words of each degree, ordered by length and then lexicographically.
    pub fn words(&self) -> Result<Vec<Vec<Word>>> {
        self.check_degrees()?;
        let mut by_degree: Vec<Vec<Word>> = vec![Vec::new(); self.window + 1];
        by_degree[0].push(Vec::new());
        for k in 1..=self.window {
            let mut ws = Vec::new();
            for (g, gen) in self.generators.iter().enumerate() {
                if gen.degree <= k {
                    for tail in &by_degree[k - gen.degree] {
                        let mut w = Vec::with_capacity(tail.len() + 1);
                        w.push(g);
                        w.extend_from_slice(tail);
                        ws.push(w);
                    }
                }
            }
            ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            by_degree[k] = ws;
        }
        Ok(by_degree)
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            "1".into()
        } else {
            w.iter()
                .map(|&g| self.generators[g].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    fn index(words: &[Vec<Word>]) -> Vec<HashMap<Word, usize>> {
        words
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect()
    }

    fn build_complex(
        &self,
        words: &[Vec<Word>],
        index: &[HashMap<Word, usize>],
    ) -> Result<ChainComplex> {
        let f = self.field;
        let mut diffs = Vec::new();
        for k in 1..=self.window {
            let mut d = Matrix::zeros(f, words[k - 1].len(), words[k].len());
            for (col, w) in words[k].iter().enumerate() {
                let dw = self.differential(&Poly::monomial(f, w.clone(), f.one()));
                for (u, c) in dw.terms() {
                    let row = index[k - 1].get(u).ok_or_else(|| {
                        Error::Internal(format!("boundary term {u:?} of wrong degree"))
                    })?;
                    d.add_at(*row, col, c);
                }
            }
            diffs.push(d);
        }
        let labels = words
            .iter()
            .map(|ws| ws.iter().map(|w| self.render_word(w)).collect())
            .collect();
        let dims = words.iter().map(Vec::len).collect();
        ChainComplex::with_labels(f, 0, dims, labels, diffs, self.generators.is_empty())
    }

    /// The underlying chain complex of the expansion.
    pub fn expand_complex(&self) -> Result<ChainComplex> {
        let words = self.words()?;
        let index = Self::index(&words);
        self.build_complex(&words, &index)
    }

    /// Degreewise expansion: words as bases, Leibniz differential,
    /// concatenation product dropped above the window.
    pub fn expand(&self) -> Result<DgAlgebra> {
        let f = self.field;
        let words = self.words()?;
        let index = Self::index(&words);
        let complex = self.build_complex(&words, &index)?;
        let dims: Vec<usize> = words.iter().map(Vec::len).collect();
        let mut products = empty_products(&dims);
        for p in 0..=self.window {
            for q in 0..=self.window - p {
                let mut table: Vec<Sparse> = Vec::with_capacity(dims[p] * dims[q]);
                for a in &words[p] {
                    for b in &words[q] {
                        let mut w = a.clone();
                        w.extend_from_slice(b);
                        table.push(vec![(index[p + q][&w], f.one())]);
                    }
                }
                products[p][q] = table;
            }
        }
        Ok(DgAlgebra::from_parts(complex, products, vec![f.one()]))
    }
}
