//! The assembled character table for one `q`, with exact global checks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::characters::{enumerate_chars, transport_char, CharError, CharList, ValueExpr};
use crate::classes::{enumerate_class_reps, transport_class, ClassError, ClassList};
use crate::cyclotomic::{CycError, CycInt};
use crate::ffield::Field;
use crate::group::GraphAuto;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error("values too large for the fast inner-product path")]
    Overflow,
}

/// Tables with at most this many cells are stored; larger ones are
/// evaluated on demand.
pub const MATERIALIZE_LIMIT: usize = 20_000_000;

pub struct CharTable {
    pub field: Field,
    pub classes: ClassList,
    pub chars: CharList,
    /// Row-major indices into `pool`, when materialized.
    cells: Option<Vec<u32>>,
    pool: Vec<ValueExpr>,
    pool_values: Vec<CycInt>,
}

/// Sums that must both equal `q^12`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub rows: usize,
    pub cols: usize,
    pub order: u128,
    pub class_size_sum: u128,
    pub degree_square_sum: u128,
}

impl CountReport {
    pub fn ok(&self) -> bool {
        self.rows == self.cols
            && self.class_size_sum == self.order
            && self.degree_square_sum == self.order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthMode {
    Full,
    /// At least `pairs` row and column pairs in total, drawn from a seeded
    /// stratified sample of rows and of columns.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrthReport {
    pub row_pairs: usize,
    pub col_pairs: usize,
    pub failures: Vec<String>,
}

impl OrthReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivReport {
    pub compared: usize,
    pub skipped_rows: usize,
    pub skipped_cols: usize,
    pub failures: Vec<String>,
}

impl CharTable {
    /// Builds rows and columns; stores every cell when `materialize` is set
    /// and the table is under [`MATERIALIZE_LIMIT`].
    pub fn build(field: Field, materialize: bool) -> Result<CharTable, TableError> {
        let classes = enumerate_class_reps(&field)?;
        let chars = enumerate_chars(&field)?;
        let mut t =
            CharTable { field, classes, chars, cells: None, pool: Vec::new(), pool_values: Vec::new() };
        let n = t.rows() * t.cols();
        if materialize && n <= MATERIALIZE_LIMIT {
            let mut index: HashMap<ValueExpr, u32> = HashMap::new();
            let mut cells = Vec::with_capacity(n);
            for i in 0..t.rows() {
                for j in 0..t.cols() {
                    let v = t.compute(i, j)?;
                    let k = *index.entry(v).or_insert_with(|| {
                        t.pool.push(v);
                        t.pool_values.push(v.evaluate(&t.field));
                        (t.pool.len() - 1) as u32
                    });
                    cells.push(k);
                }
            }
            t.cells = Some(cells);
        }
        Ok(t)
    }

    pub fn q(&self) -> u128 {
        self.field.q() as u128
    }

    pub fn rows(&self) -> usize {
        self.chars.labels.len()
    }

    pub fn cols(&self) -> usize {
        self.classes.reps.len()
    }

    pub fn is_materialized(&self) -> bool {
        self.cells.is_some()
    }

    fn compute(&self, i: usize, j: usize) -> Result<ValueExpr, TableError> {
        Ok(self.chars.value_expr_at(&self.field, i, &self.classes.reps[j].rep)?)
    }

    pub fn value_expr(&self, i: usize, j: usize) -> Result<ValueExpr, TableError> {
        match &self.cells {
            Some(c) => Ok(self.pool[c[i * self.cols() + j] as usize]),
            None => self.compute(i, j),
        }
    }

    pub fn value(&self, i: usize, j: usize) -> Result<CycInt, TableError> {
        match &self.cells {
            Some(c) => Ok(self.pool_values[c[i * self.cols() + j] as usize].clone()),
            None => Ok(self.compute(i, j)?.evaluate(&self.field)),
        }
    }

    pub fn class_sizes(&self) -> Vec<u128> {
        let q = self.q();
        self.classes.reps.iter().map(|r| self.classes.class_size(q, r)).collect()
    }

    pub fn degrees(&self) -> Vec<u128> {
        let q = self.q();
        self.chars.labels.iter().map(|l| self.chars.degree(q, l)).collect()
    }

    pub fn counts(&self) -> CountReport {
        CountReport {
            rows: self.rows(),
            cols: self.cols(),
            order: self.q().pow(12),
            class_size_sum: self.class_sizes().iter().sum(),
            degree_square_sum: self.degrees().iter().map(|d| d * d).sum(),
        }
    }

    /// Evaluates every cell; errors on the first uncovered shape.
    pub fn evaluate_all(&self) -> Result<usize, TableError> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                self.value_expr(i, j)?;
            }
        }
        Ok(self.rows() * self.cols())
    }

    fn row_planes(&self, i: usize) -> Result<Planes, TableError> {
        let mut pl = Planes::new(self.field.p(), self.cols());
        for j in 0..self.cols() {
            pl.set(j, &self.value(i, j)?)?;
        }
        Ok(pl)
    }

    fn col_planes(&self, j: usize) -> Result<Planes, TableError> {
        let mut pl = Planes::new(self.field.p(), self.rows());
        for i in 0..self.rows() {
            pl.set(i, &self.value(i, j)?)?;
        }
        Ok(pl)
    }

    /// First and second orthogonality relations, exactly.
    pub fn orthogonality(&self, mode: OrthMode) -> Result<OrthReport, TableError> {
        let (rows, cols): (Vec<usize>, Vec<usize>) = match mode {
            OrthMode::Full => ((0..self.rows()).collect(), (0..self.cols()).collect()),
            OrthMode::Sampled { pairs, seed } => {
                // n(n+1)/2 >= pairs/2 for each side
                let half = pairs.div_ceil(2);
                let mut n = 1;
                while n * (n + 1) / 2 < half {
                    n += 1;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (
                    stratified(&self.chars.offsets, n, &mut rng),
                    stratified(&self.classes.offsets, n, &mut rng),
                )
            }
        };
        let mut report = OrthReport::default();
        let p = self.field.p();
        let order = self.q().pow(12);

        let sizes = self.class_sizes();
        let weights: Vec<i64> = sizes.iter().map(|&s| s as i64).collect();
        let planes = rows.iter().map(|&i| self.row_planes(i)).collect::<Result<Vec<_>, _>>()?;
        for a in 0..rows.len() {
            for b in a..rows.len() {
                let got = planes[a].inner(&planes[b], &weights)?;
                let want = if a == b { order as i128 } else { 0 };
                report.row_pairs += 1;
                if !is_int(&got, want) && report.failures.len() < 20 {
                    report.failures.push(format!(
                        "rows {} and {}: sum {} expected {}",
                        self.chars.label(&self.chars.labels[rows[a]]),
                        self.chars.label(&self.chars.labels[rows[b]]),
                        CycInt::from_coeffs(p, got.to_vec()),
                        want
                    ));
                }
            }
        }
        drop(planes);

        let ones = vec![1i64; self.rows()];
        let planes = cols.iter().map(|&j| self.col_planes(j)).collect::<Result<Vec<_>, _>>()?;
        for a in 0..cols.len() {
            for b in a..cols.len() {
                let got = planes[a].inner(&planes[b], &ones)?;
                let want = if a == b { (order / sizes[cols[a]]) as i128 } else { 0 };
                report.col_pairs += 1;
                if !is_int(&got, want) && report.failures.len() < 20 {
                    report.failures.push(format!(
                        "columns {} and {}: sum {} expected {}",
                        self.classes.label(&self.classes.reps[cols[a]]),
                        self.classes.label(&self.classes.reps[cols[b]]),
                        CycInt::from_coeffs(p, got.to_vec()),
                        want
                    ));
                }
            }
        }
        Ok(report)
    }

    /// `χ(C) = (gχ)(gC)` over all rows and columns for a graph
    /// automorphism `g`. Rows and columns whose families are not stable
    /// for this `p` are skipped and counted.
    pub fn equivariance(&self, g: &GraphAuto) -> Result<EquivReport, TableError> {
        let f = &self.field;
        let mut report = EquivReport::default();
        let col_map: Vec<Option<usize>> = self
            .classes
            .reps
            .iter()
            .map(|r| match transport_class(f, &self.classes, g, r) {
                Ok(img) => Ok(self.classes.position(&img.rep)),
                Err(ClassError::Unstable(..)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<_, _>>()?;
        report.skipped_cols = col_map.iter().filter(|c| c.is_none()).count();
        let mut cache: HashMap<ValueExpr, CycInt> = HashMap::new();
        let mut eval = |v: ValueExpr| cache.entry(v).or_insert_with(|| v.evaluate(f)).clone();
        for (i, l) in self.chars.labels.iter().enumerate() {
            let img = match transport_char(f, &self.chars, g, l) {
                Ok(img) => img,
                Err(CharError::Unstable(..)) => {
                    report.skipped_rows += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let k = self.chars.position(&img).expect("transported label is enumerated");
            for (j, cj) in col_map.iter().enumerate() {
                let Some(cj) = *cj else { continue };
                let (x, y) = (self.value_expr(i, j)?, self.value_expr(k, cj)?);
                report.compared += 1;
                if x != y && eval(x) != eval(y) && report.failures.len() < 20 {
                    report.failures.push(format!(
                        "{} at {}: {} but image gives {}",
                        self.chars.label(l),
                        self.classes.label(&self.classes.reps[j]),
                        x.describe(),
                        y.describe()
                    ));
                }
            }
        }
        Ok(report)
    }
}

/// `n` indices (or all, if fewer exist) with the first index of every
/// block included, the rest drawn at random; sorted.
fn stratified(offsets: &[usize], n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let total = *offsets.last().unwrap();
    if n >= total {
        return (0..total).collect();
    }
    let mut picked: Vec<usize> = offsets[..offsets.len() - 1].to_vec();
    picked.dedup();
    picked.truncate(n);
    let mut rest: Vec<usize> = (0..total).filter(|i| !picked.contains(i)).collect();
    rest.shuffle(rng);
    picked.extend(rest.into_iter().take(n - picked.len()));
    picked.sort_unstable();
    picked
}

fn is_int(coeffs: &[i128], n: i128) -> bool {
    coeffs[0] == n && coeffs[1..].iter().all(|&c| c == 0)
}

/// A vector of cyclotomic integers stored as `p - 1` coefficient planes,
/// for fast exact inner products.
struct Planes {
    p: usize,
    n: usize,
    data: Vec<i32>,
    max: i64,
}

impl Planes {
    fn new(p: u32, n: usize) -> Planes {
        let p = p as usize;
        Planes { p, n, data: vec![0; (p - 1) * n], max: 0 }
    }

    fn set(&mut self, j: usize, x: &CycInt) -> Result<(), TableError> {
        for (u, &c) in x.coeffs().iter().enumerate() {
            let c = i32::try_from(c).map_err(|_| TableError::Overflow)?;
            self.max = self.max.max((c as i64).abs());
            self.data[u * self.n + j] = c;
        }
        Ok(())
    }

    fn plane(&self, u: usize) -> &[i32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// `Σ_j w_j x_j conj(y_j)` on the basis `1, .., ζ^{p-2}`.
    fn inner(&self, other: &Planes, w: &[i64]) -> Result<Vec<i128>, TableError> {
        let wmax = w.iter().map(|x| x.abs()).max().unwrap_or(0);
        let bound = (wmax as i128) * (self.max as i128) * (other.max as i128);
        if bound >= i64::MAX as i128 {
            return Err(TableError::Overflow);
        }
        let p = self.p;
        let mut full = vec![0i128; p];
        for u in 0..p - 1 {
            let xu = self.plane(u);
            for v in 0..p - 1 {
                let yv = other.plane(v);
                let mut acc: i128 = 0;
                for ((&wj, &a), &b) in w.iter().zip(xu).zip(yv) {
                    acc += (wj * a as i64 * b as i64) as i128;
                }
                full[(u + p - v) % p] += acc;
            }
        }
        let last = full[p - 1];
        Ok(full[..p - 1].iter().map(|&c| c - last).collect())
    }
}
