//! Blakers–Massey connectivity for pushouts of semifree algebras.
//!
//! For cell extensions `A → B` and `A → C`, the algebra pushout is the
//! semifree algebra on all cells at once. The comparison map runs from the
//! pushout of underlying complexes `(B ⊕ C)/A` into it, and its cone should
//! be `(m + n - 1)`-connected when `A → C` is an `(m - 1)`-equivalence and
//! `A → B` an `(n - 1)`-equivalence.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::complexes::{cone, connectivity, ChainComplex, ChainMap, Connectivity};
use crate::dga::{Poly, SemifreeDga, Word};
use crate::dga::random::random_scalar;
use crate::error::{Error, Result};
use crate::exactla::{Convention, GroundField, Matrix, Subspace};

/// A cell to adjoin: `d(name) = boundary`, the boundary written over the
/// names already present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub degree: usize,
    pub boundary: String,
}

impl Cell {
    pub fn new(name: &str, degree: usize, boundary: &str) -> Self {
        Cell {
            name: name.into(),
            degree,
            boundary: boundary.into(),
        }
    }
}

fn adjoin_all(x: &SemifreeDga, cells: &[Cell]) -> Result<SemifreeDga> {
    cells
        .iter()
        .try_fold(x.clone(), |acc, c| acc.adjoin_cell_str(&c.name, c.degree, &c.boundary))
}

/// Inclusion of expansions, matching generators by name.
fn inclusion(x: &SemifreeDga, y: &SemifreeDga, cx: &ChainComplex, cy: &ChainComplex) -> Result<ChainMap> {
    let f = x.field();
    let ynames: HashMap<String, usize> =
        y.names().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let relabel: Vec<usize> = x
        .names()
        .iter()
        .map(|s| {
            ynames
                .get(s)
                .copied()
                .ok_or_else(|| Error::Internal(format!("generator {s} missing from the target")))
        })
        .collect::<Result<_>>()?;
    let xw = x.words()?;
    let yw = y.words()?;
    let mut maps = Vec::new();
    for k in 0..xw.len() {
        let index: HashMap<&Word, usize> = yw[k].iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(f, yw[k].len(), xw[k].len());
        for (col, w) in xw[k].iter().enumerate() {
            let image: Word = w.iter().map(|&g| relabel[g]).collect();
            m.set(index[&image], col, f.one());
        }
        maps.push(m);
    }
    ChainMap::new(cx.clone(), cy.clone(), maps)
}

/// Pushout of `B ← A → C` in chain complexes, for degreewise injective
/// `f: A → B` and `g: A → C`: the quotient of `B ⊕ C` by `(f a, -g a)`.
pub fn complex_pushout(f: &ChainMap, g: &ChainMap) -> Result<ComplexPushout> {
    if f.source() != g.source() {
        return Err(Error::invalid("pushout legs have different sources"));
    }
    let (b, c) = (f.target(), g.target());
    let field = b.field();
    let (lo, hi) = (f.lo(), f.hi().max(g.hi()));
    let minus = field.from_i64(-1);
    let mut quotients = Vec::new();
    let mut dims = Vec::new();
    let mut labels = Vec::new();
    for i in lo..=hi {
        let (fa, ga) = (f.component(i), g.component(i));
        let mut rel = Matrix::zeros(field, fa.rows() + ga.rows(), fa.cols());
        rel.set_block(0, 0, &fa);
        rel.set_block(fa.rows(), 0, &ga.scale(&minus));
        let q = Subspace::column_space(&rel, Convention::RowEchelon).quotient();
        let bl = b.labels(i).iter().map(|s| format!("B:{s}"));
        let cl = c.labels(i).iter().map(|s| format!("C:{s}"));
        let all: Vec<String> = bl.chain(cl).collect();
        labels.push(q.complement().iter().map(|&k| all[k].clone()).collect());
        dims.push(q.dim());
        quotients.push(q);
    }
    // the quotient basis is a subset of the standard basis of B ⊕ C
    let lifts: Vec<Matrix> = quotients
        .iter()
        .map(|q| {
            let mut m = Matrix::zeros(field, q.ambient(), q.dim());
            for (col, &k) in q.complement().iter().enumerate() {
                m.set(k, col, field.one());
            }
            m
        })
        .collect();
    let block = |i: i64| -> Matrix {
        let (db, dc) = (b.d(i), c.d(i));
        let mut m = Matrix::zeros(field, db.rows() + dc.rows(), db.cols() + dc.cols());
        m.set_block(0, 0, &db);
        m.set_block(db.rows(), db.cols(), &dc);
        m
    };
    let diffs: Vec<Matrix> = (lo + 1..=hi)
        .map(|i| quotients[(i - 1 - lo) as usize].projection_matrix().mul(&block(i)).mul(&lifts[(i - lo) as usize]))
        .collect();
    let top_exact = b.top_exact() && c.top_exact();
    let p = ChainComplex::with_labels(field, lo, dims, labels, diffs, top_exact)?;
    let from = |which: usize| -> Result<ChainMap> {
        let src = if which == 0 { b } else { c };
        let maps = (lo..=hi)
            .map(|i| {
                let q = &quotients[(i - lo) as usize];
                let n = src.dim(i);
                let offset = if which == 0 { 0 } else { b.dim(i) };
                let mut inc = Matrix::zeros(field, q.ambient(), n);
                for k in 0..n {
                    inc.set(offset + k, k, field.one());
                }
                q.projection_matrix().mul(&inc)
            })
            .collect();
        ChainMap::new(src.clone(), p.clone(), maps)
    };
    Ok(ComplexPushout {
        from_b: from(0)?,
        from_c: from(1)?,
        complex: p,
        lo,
        lifts,
    })
}

/// Pushout of chain complexes with its structure maps.
#[derive(Clone, Debug)]
pub struct ComplexPushout {
    pub complex: ChainComplex,
    pub from_b: ChainMap,
    pub from_c: ChainMap,
    lo: i64,
    lifts: Vec<Matrix>,
}

impl ComplexPushout {
    /// Degree `i` basis vectors as elements of `B_i ⊕ C_i`.
    pub fn lift(&self, i: i64) -> &Matrix {
        &self.lifts[(i - self.lo) as usize]
    }
}

/// Two cell extensions of a common semifree base, with declared
/// connectivities that are checked on construction.
#[derive(Clone, Debug)]
pub struct PushoutProblem {
    base: SemifreeDga,
    cells_b: Vec<Cell>,
    cells_c: Vec<Cell>,
    m: usize,
    n: usize,
    b: SemifreeDga,
    c: SemifreeDga,
    pushout: SemifreeDga,
    complexes: [ChainComplex; 4],
    /// `A → B`, `A → C`, `B → P`, `C → P`.
    maps: [ChainMap; 4],
    measured_m: Connectivity,
    measured_n: Connectivity,
}

impl PushoutProblem {
    /// `A → C` must be an `(m - 1)`-equivalence and `A → B` an
    /// `(n - 1)`-equivalence, measured in the base's window.
    pub fn new(
        base: &SemifreeDga,
        cells_b: &[Cell],
        cells_c: &[Cell],
        m: usize,
        n: usize,
        caps: &Caps,
    ) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("declared connectivities m and n must be at least 1"));
        }
        let mut seen: Vec<&str> = base.generators().iter().map(|g| g.name.as_str()).collect();
        for cell in cells_b.iter().chain(cells_c) {
            if seen.contains(&cell.name.as_str()) {
                return Err(Error::invalid(format!("cell name {} is used twice", cell.name)));
            }
            seen.push(&cell.name);
        }
        let b = adjoin_all(base, cells_b)?;
        let c = adjoin_all(base, cells_c)?;
        let pushout = adjoin_all(&b, cells_c)?;
        let total: u64 = pushout.dims()?.iter().fold(0u64, |a, &d| a.saturating_add(d));
        if total > caps.tensor {
            return Err(Error::cap("coproduct expansion", total, caps.tensor));
        }
        let complexes = [
            base.expand_complex()?,
            b.expand_complex()?,
            c.expand_complex()?,
            pushout.expand_complex()?,
        ];
        let [ca, cb, cc, cp] = &complexes;
        let maps = [
            inclusion(base, &b, ca, cb)?,
            inclusion(base, &c, ca, cc)?,
            inclusion(&b, &pushout, cb, cp)?,
            inclusion(&c, &pushout, cc, cp)?,
        ];
        let measured_n = connectivity(&maps[0])?;
        let measured_m = connectivity(&maps[1])?;
        check_declared("A -> B", "n", n, &measured_n)?;
        check_declared("A -> C", "m", m, &measured_m)?;
        Ok(PushoutProblem {
            base: base.clone(),
            cells_b: cells_b.to_vec(),
            cells_c: cells_c.to_vec(),
            m,
            n,
            b,
            c,
            pushout,
            complexes,
            maps,
            measured_m,
            measured_n,
        })
    }

    pub fn base(&self) -> &SemifreeDga {
        &self.base
    }

    pub fn cells_b(&self) -> &[Cell] {
        &self.cells_b
    }

    pub fn cells_c(&self) -> &[Cell] {
        &self.cells_c
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.base.window()
    }

    pub fn extension_b(&self) -> &SemifreeDga {
        &self.b
    }

    pub fn extension_c(&self) -> &SemifreeDga {
        &self.c
    }

    /// The algebra pushout: the base with every cell adjoined.
    pub fn pushout(&self) -> &SemifreeDga {
        &self.pushout
    }

    /// Measured connectivities of `A → C` and `A → B`.
    pub fn measured(&self) -> (&Connectivity, &Connectivity) {
        (&self.measured_m, &self.measured_n)
    }

    /// Same cells, larger or smaller window.
    pub fn with_window(&self, window: usize, caps: &Caps) -> Result<Self> {
        Self::new(&self.base.with_window(window), &self.cells_b, &self.cells_c, self.m, self.n, caps)
    }

    /// Some cell boundary has a nonzero constant term.
    pub fn has_unit_boundary(&self) -> bool {
        self.pushout
            .generators()
            .iter()
            .any(|g| g.boundary.terms().any(|(w, _)| w.is_empty()))
    }
}

fn check_declared(map: &str, name: &str, declared: usize, c: &Connectivity) -> Result<()> {
    let need = declared as i64 - 1;
    if c.c >= need {
        return Ok(());
    }
    let (deg, dim) = c.first_nonvanishing.unwrap_or((c.c + 1, 0));
    if c.window_limited {
        return Err(Error::WindowLimited(format!(
            "{map}: cannot confirm {name} = {declared}; homology of the cone is visible only through degree {}",
            c.c
        )));
    }
    Err(Error::invalid(format!(
        "{map} is not a ({need})-equivalence as declared by {name} = {declared}: H_{deg} of its cone has dimension {dim}"
    )))
}

/// The comparison map from the pushout of underlying complexes to the
/// algebra pushout: words of length at most one in the letters of `B` and `C`.
pub fn comparison_map(p: &PushoutProblem) -> Result<ChainMap> {
    let po = complex_pushout(&p.maps[0], &p.maps[1])?;
    let q = &po.complex;
    let [_, cb, cc, cp] = &p.complexes;
    let maps = (q.lo()..=q.hi())
        .map(|i| {
            let nb = cb.dim(i);
            let mut both = Matrix::zeros(q.field(), cp.dim(i), nb + cc.dim(i));
            both.set_block(0, 0, p.maps[2].at(i));
            both.set_block(0, nb, p.maps[3].at(i));
            both.mul(po.lift(i))
        })
        .collect();
    ChainMap::new(q.clone(), cp.clone(), maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Isomorphism,
    Surjection,
}

/// `H_i(cone(A → B)) → H_i(cone(C → P))` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeDegree {
    pub degree: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub expected: Expectation,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmReport {
    pub m: usize,
    pub n: usize,
    pub window: usize,
    /// `m + n - 1`.
    pub bound: i64,
    pub comparison: Connectivity,
    /// `None` when the window ends before the bound can be confirmed.
    pub verified: Option<bool>,
    pub relative: Vec<RelativeDegree>,
    /// Whether the first nonvanishing cone homology sits right above the bound.
    pub sharp: Option<bool>,
    pub unit_boundary: bool,
}

impl BmReport {
    pub fn violation(&self) -> bool {
        self.verified == Some(false) || self.relative.iter().any(|r| !r.holds)
    }
}

pub fn bm_check(p: &PushoutProblem) -> Result<BmReport> {
    let cmp = comparison_map(p)?;
    let comparison = connectivity(&cmp)?;
    let bound = (p.m + p.n) as i64 - 1;
    let verified = if comparison.c >= bound {
        Some(true)
    } else if comparison.window_limited {
        None
    } else {
        Some(false)
    };
    let sharp = comparison.first_nonvanishing.map(|(d, _)| d == bound + 1);
    Ok(BmReport {
        m: p.m,
        n: p.n,
        window: p.window(),
        bound,
        comparison,
        verified,
        relative: relative_form(p, bound)?,
        sharp,
        unit_boundary: p.has_unit_boundary(),
    })
}

/// The square `A → B`, `C → P` induces `cone(A → B) → cone(C → P)`,
/// `(b, a) ↦ (b, a)` on words.
fn relative_form(p: &PushoutProblem, bound: i64) -> Result<Vec<RelativeDegree>> {
    let w = p.window() as i64;
    let src = cone(&p.maps[0])?.restrict(w)?;
    let tgt = cone(&p.maps[3])?.restrict(w)?;
    let field = src.field();
    let [ca, cb, cc, cp] = &p.complexes;
    let maps = (0..=w)
        .map(|i| {
            let mut m = Matrix::zeros(field, cp.dim(i) + cc.dim(i - 1), cb.dim(i) + ca.dim(i - 1));
            m.set_block(0, 0, &p.maps[2].component(i));
            m.set_block(cp.dim(i), cb.dim(i), &p.maps[1].component(i - 1));
            m
        })
        .collect();
    let rel = ChainMap::new(src, tgt, maps)?;
    let mut out = Vec::new();
    // degree w is window-limited on both sides
    for i in 0..=bound.min(w - 1) {
        let h = rel.on_homology(i)?;
        let rank = h.rank();
        let (source_dim, target_dim) = (h.cols(), h.rows());
        let expected = if i < bound {
            Expectation::Isomorphism
        } else {
            Expectation::Surjection
        };
        let holds = match expected {
            Expectation::Isomorphism => rank == source_dim && rank == target_dim,
            Expectation::Surjection => rank == target_dim,
        };
        out.push(RelativeDegree {
            degree: i,
            source_dim,
            target_dim,
            rank,
            expected,
            holds,
        });
    }
    Ok(out)
}

/// A random cycle of degree `k` in the expansion of `x`, as a polynomial.
pub fn random_cycle<R: Rng>(rng: &mut R, x: &SemifreeDga, k: usize) -> Result<Poly> {
    let f = x.field();
    let x = &x.with_window(k);
    let words = x.words()?;
    let cx = x.expand_complex()?;
    let z = cx.d(k as i64).kernel_basis();
    let mut v = f.zero_vec(words[k].len());
    for b in &z {
        f.axpy(&mut v, &random_scalar(rng, f), b);
    }
    let mut p = Poly::zero(f);
    for (w, c) in words[k].iter().zip(&v) {
        p.add_term(w.clone(), c);
    }
    Ok(p)
}

/// Adjoins `count` random cells named `prefix0, prefix1, ...` with cycle
/// boundaries.
pub fn random_cells<R: Rng>(rng: &mut R, x: &SemifreeDga, prefix: &str, count: usize) -> Result<(SemifreeDga, Vec<Cell>)> {
    let mut cur = x.clone();
    let mut cells = Vec::new();
    for i in 0..count {
        let degree = rng.gen_range(1..=3);
        let boundary = if degree == 1 && rng.gen_bool(0.8) {
            Poly::zero(x.field())
        } else {
            random_cycle(rng, &cur, degree - 1)?
        };
        let name = format!("{prefix}{i}");
        let text = boundary.render(&cur.names());
        cur = cur.adjoin_cell(&name, degree, boundary)?;
        cells.push(Cell::new(&name, degree, &text));
    }
    Ok((cur, cells))
}

fn field_from<R: Rng>(rng: &mut R) -> GroundField {
    match rng.gen_range(0..4) {
        0 => GroundField::Prime(2),
        1 => GroundField::Prime(3),
        2 => GroundField::Prime(5),
        _ => GroundField::Rationals,
    }
}

/// Largest expansion drawn by [`random_problem`], in words through the window.
const RANDOM_WORDS: u64 = 2000;

/// Random instance: up to 2 base cells and 1 to 3 cells on each side, all
/// of degree at most 3, window 4 to 7. Draws whose pushout expands to more
/// than a few thousand words are redrawn. The declared connectivities are
/// the measured ones, lowered when needed to keep `m + n - 1` inside the
/// window.
pub fn random_problem(seed: u64, caps: &Caps) -> Result<PushoutProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (base, cells_b, cells_c) = loop {
        let field = field_from(&mut rng);
        let window = rng.gen_range(4..=7);
        let start = SemifreeDga::new(field, window);
        let k = rng.gen_range(0..=2);
        let (base, _) = random_cells(&mut rng, &start, "a", k)?;
        let k = rng.gen_range(1..=3);
        let (b, cells_b) = random_cells(&mut rng, &base, "b", k)?;
        let k = rng.gen_range(1..=3);
        let (_, cells_c) = random_cells(&mut rng, &base, "c", k)?;
        let total: u64 = adjoin_all(&b, &cells_c)?.dims()?.iter().sum();
        if total <= RANDOM_WORDS {
            break (base, cells_b, cells_c);
        }
    };
    let probe = PushoutProblem::new(&base, &cells_b, &cells_c, 1, 1, caps)?;
    let (cm, cn) = probe.measured();
    let window = base.window();
    let mut m = (cm.c + 1) as usize;
    let mut n = (cn.c + 1) as usize;
    while m + n > window && m + n > 2 {
        if m >= n {
            m -= 1;
        } else {
            n -= 1;
        }
    }
    PushoutProblem::new(&base, &cells_b, &cells_c, m, n, caps)
}

#[derive(Clone, Debug)]
pub struct CampaignEntry {
    pub seed: u64,
    pub report: BmReport,
}

/// `count` random instances with seeds `seed, seed + 1, ...`, sorted by seed.
pub fn campaign(seed: u64, count: u64, caps: &Caps) -> Result<Vec<CampaignEntry>> {
    let mut out: Vec<CampaignEntry> = (seed..seed + count)
        .into_par_iter()
        .map(|s| {
            let p = random_problem(s, caps)?;
            Ok(CampaignEntry {
                seed: s,
                report: bm_check(&p)?,
            })
        })
        .collect::<Result<_>>()?;
    out.sort_by_key(|e| e.seed);
    Ok(out)
}

/// Stagewise dimensions of the word-length filtration of `X ⨿ T(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordFiltration {
    pub window: usize,
    pub letter_degree: usize,
    /// `stages[r][k]`: words of degree `k` with at most `r` new letters.
    pub stages: Vec<Vec<usize>>,
    /// `quotients[r][k]`: words of degree `k` with exactly `r` new letters.
    pub quotients: Vec<Vec<usize>>,
    /// `quotients` predicted from the dimensions of `X` alone:
    /// `r` copies of the new letter interleaved with `r + 1` words of `X`.
    pub formula: Vec<Vec<usize>>,
    /// Dimensions of the full extension.
    pub total: Vec<usize>,
    /// Homology of each quotient below the window, and the Künneth
    /// prediction from the homology of `X`.
    pub quotient_homology: Vec<Vec<usize>>,
    pub kunneth: Vec<Vec<usize>>,
    /// Each stage is closed under the differential.
    pub subcomplexes: bool,
    /// Degrees where every word has at most `r_max` new letters.
    pub telescoping_degrees: usize,
}

impl WordFiltration {
    pub fn formula_matches(&self) -> bool {
        self.quotients == self.formula
    }

    pub fn telescopes(&self) -> bool {
        (0..self.telescoping_degrees).all(|k| {
            self.quotients.iter().map(|q| q[k]).sum::<usize>() == self.total[k]
        })
    }

    pub fn kunneth_matches(&self) -> bool {
        self.quotient_homology == self.kunneth
    }
}

fn convolve(a: &[usize], b: &[usize], len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Filtration of `X` with one more cell by the number of letters of the new
/// cell, through `r_max` letters.
pub fn word_filtration(x: &SemifreeDga, cell: &Cell, r_max: usize) -> Result<WordFiltration> {
    let w = x.window();
    let e = cell.degree;
    if e == 0 {
        return Err(Error::invalid("the new cell needs positive degree"));
    }
    if r_max * e > w {
        return Err(Error::WindowLimited(format!(
            "words with {r_max} letters of degree {e} need window {}, have {w}",
            r_max * e
        )));
    }
    let p = x.adjoin_cell_str(&cell.name, e, &cell.boundary)?;
    let y = x.generators().len();
    let field = x.field();
    let words = p.words()?;
    let count = |word: &[usize]| word.iter().filter(|&&g| g == y).count();
    let mut quotients = vec![vec![0usize; w + 1]; r_max + 1];
    for (k, ws) in words.iter().enumerate() {
        for word in ws {
            let r = count(word);
            if r <= r_max {
                quotients[r][k] += 1;
            }
        }
    }
    let stages: Vec<Vec<usize>> = (0..=r_max)
        .map(|r| (0..=w).map(|k| quotients[..=r].iter().map(|q| q[k]).sum()).collect())
        .collect();
    let total: Vec<usize> = words.iter().map(Vec::len).collect();

    let xd: Vec<usize> = x.dims()?.iter().map(|&d| d as usize).collect();
    let mut formula = Vec::new();
    let mut power = xd.clone();
    for r in 0..=r_max {
        let mut row = vec![0usize; w + 1];
        for k in r * e..=w {
            row[k] = power[k - r * e];
        }
        formula.push(row);
        power = convolve(&power, &xd, w + 1);
    }

    let subcomplexes = words.iter().flatten().all(|word| {
        let d = p.differential(&Poly::monomial(field, word.clone(), field.one()));
        let closed = d.terms().all(|(u, _)| count(u) <= count(word));
        closed
    });

    // quotient complexes: words with exactly r letters, dropping terms
    // that lose a letter
    let hx = x.expand_complex()?.homology_dims();
    let mut quotient_homology = Vec::new();
    let mut kunneth = Vec::new();
    let mut hpow = hx.clone();
    for r in 0..=r_max {
        let basis: Vec<Vec<&Word>> = words
            .iter()
            .map(|ws| ws.iter().filter(|u| count(u) == r).collect())
            .collect();
        let index: Vec<HashMap<&Word, usize>> = basis
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, u)| (*u, i)).collect())
            .collect();
        let mut diffs = Vec::new();
        for k in 1..=w {
            let mut d = Matrix::zeros(field, basis[k - 1].len(), basis[k].len());
            for (col, word) in basis[k].iter().enumerate() {
                let dw = p.differential(&Poly::monomial(field, (*word).clone(), field.one()));
                for (u, c) in dw.terms() {
                    if let Some(&row) = index[k - 1].get(u) {
                        d.add_at(row, col, c);
                    }
                }
            }
            diffs.push(d);
        }
        let dims = basis.iter().map(Vec::len).collect();
        let q = ChainComplex::new(field, 0, dims, diffs, false)?;
        quotient_homology.push(q.homology_dims()[..w].to_vec());
        let mut pred = vec![0usize; w];
        for k in r * e..w {
            pred[k] = hpow[k - r * e];
        }
        kunneth.push(pred);
        hpow = convolve(&hpow, &hx, w + 1);
    }

    Ok(WordFiltration {
        window: w,
        letter_degree: e,
        stages,
        quotients,
        formula,
        total,
        quotient_homology,
        kunneth,
        subcomplexes,
        telescoping_degrees: ((r_max + 1) * e).min(w + 1),
    })
}

#[cfg(test)]
mod tests;
