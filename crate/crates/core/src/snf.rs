//! Smith normal form by sparse elimination.
//!
//! Pivots are chosen by smallest magnitude, ties broken by the Markowitz
//! fill estimate `(row_len - 1) * (col_len - 1)` and then by `(row, col)`.
//! Boundary matrices are almost entirely unit pivots, so the heavy lifting is
//! ordinary sparse Gaussian elimination; non-unit pivots fall back to
//! Euclidean reduction and the final diagonal is repaired into a divisibility
//! chain with gcd/lcm steps.
//!
//! When transforms are requested every elementary operation is logged, so
//! `U` and `V` with `U·A·V = D` can be applied to vectors without ever being
//! materialized.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::integer::Integer;
use crate::matrix::SparseIntMatrix;

/// Ceiling on work done by one elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of stored nonzeros at any point.
    pub max_entries: u64,
    /// Maximum bit size of any intermediate entry.
    pub max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_entries: 50_000_000,
            max_bits: 4096,
        }
    }
}

/// Row operation applied to the matrix from the left.
#[derive(Clone, Debug, PartialEq, Eq)]
enum RowOp {
    /// `row[dst] += q * row[src]`
    Add {
        dst: u32,
        src: u32,
        q: Integer,
    },
    Negate(u32),
}

/// Column operation applied from the right: `col[dst] += q * col[src]`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ColOp {
    dst: u32,
    src: u32,
    q: Integer,
}

/// A nonzero diagonal entry of `U·A·V`, in original row/column coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub value: Integer,
}

/// Logged elementary operations reproducing `U` and `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfTransforms {
    n_rows: usize,
    n_cols: usize,
    row_ops: Vec<RowOp>,
    col_ops: Vec<ColOp>,
    /// Diagonal position of each row / column (pivots first, in chain order).
    row_position: Vec<usize>,
    col_position: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub invariant_factors: Vec<Integer>,
    /// Where each invariant factor sits in the original coordinates.
    pub pivots: Vec<Pivot>,
    pub transforms: Option<SnfTransforms>,
    pub n_rows: usize,
    pub n_cols: usize,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<Integer> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_unit())
            .cloned()
            .collect()
    }

    /// Columns that carry no pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n_cols];
        for p in &self.pivots {
            is_pivot[p.col] = true;
        }
        (0..self.n_cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Rows that carry no pivot, ascending.
    pub fn free_rows(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n_rows];
        for p in &self.pivots {
            is_pivot[p.row] = true;
        }
        (0..self.n_rows).filter(|&r| !is_pivot[r]).collect()
    }
}

impl SnfTransforms {
    /// `U·z` in original row coordinates (the row permutation is not applied).
    pub fn apply_u_unpermuted(&self, z: &mut [Integer]) {
        for op in &self.row_ops {
            match op {
                RowOp::Add { dst, src, q } => {
                    let s = z[*src as usize].clone();
                    if !s.is_zero() {
                        let d = &mut z[*dst as usize];
                        *d = d.sub_mul(&-q, &s);
                    }
                }
                RowOp::Negate(r) => {
                    let v = &mut z[*r as usize];
                    *v = -&*v;
                }
            }
        }
    }

    /// `U⁻¹·w` for `w` in original row coordinates.
    pub fn apply_u_inverse_unpermuted(&self, w: &mut [Integer]) {
        for op in self.row_ops.iter().rev() {
            match op {
                RowOp::Add { dst, src, q } => {
                    let s = w[*src as usize].clone();
                    if !s.is_zero() {
                        let d = &mut w[*dst as usize];
                        *d = d.sub_mul(q, &s);
                    }
                }
                RowOp::Negate(r) => {
                    let v = &mut w[*r as usize];
                    *v = -&*v;
                }
            }
        }
    }

    /// `V·y` for `y` in original column coordinates.
    pub fn apply_v_unpermuted(&self, y: &mut [Integer]) {
        for op in self.col_ops.iter().rev() {
            let d = y[op.dst as usize].clone();
            if !d.is_zero() {
                let s = &mut y[op.src as usize];
                *s = s.sub_mul(&-&op.q, &d);
            }
        }
    }

    /// `V⁻¹·x` for `x` in original column coordinates.
    pub fn apply_v_inverse_unpermuted(&self, x: &mut [Integer]) {
        for op in &self.col_ops {
            let d = x[op.dst as usize].clone();
            if !d.is_zero() {
                let s = &mut x[op.src as usize];
                *s = s.sub_mul(&op.q, &d);
            }
        }
    }

    /// The full `U` (row permutation included), so that `U·A·V` is diagonal
    /// with the invariant factors leading.
    pub fn u_matrix(&self) -> SparseIntMatrix {
        let n = self.n_rows;
        let cols = (0..n)
            .map(|c| {
                let mut e = vec![Integer::ZERO; n];
                e[c] = Integer::ONE;
                self.apply_u_unpermuted(&mut e);
                let mut col: Vec<(u32, Integer)> = e
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(r, v)| (self.row_position[r] as u32, v))
                    .collect();
                col.sort_by_key(|x| x.0);
                col
            })
            .collect();
        SparseIntMatrix::from_columns(n, cols)
    }

    /// The full `V` (column permutation included).
    pub fn v_matrix(&self) -> SparseIntMatrix {
        let n = self.n_cols;
        let mut position_to_col = vec![0; n];
        for (c, &pos) in self.col_position.iter().enumerate() {
            position_to_col[pos] = c;
        }
        let cols = (0..n)
            .map(|pos| {
                let mut e = vec![Integer::ZERO; n];
                e[position_to_col[pos]] = Integer::ONE;
                self.apply_v_unpermuted(&mut e);
                e.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(r, v)| (r as u32, v))
                    .collect()
            })
            .collect();
        SparseIntMatrix::from_columns(n, cols)
    }

    pub fn op_count(&self) -> usize {
        self.row_ops.len() + self.col_ops.len()
    }
}

/// Working state: the active submatrix, row-major with a column index.
struct Eliminator {
    rows: Vec<Vec<(u32, Integer)>>,
    col_rows: Vec<BTreeSet<u32>>,
    /// Nonempty columns keyed by `(entry count, index)`.
    col_order: BTreeSet<(u32, u32)>,
    /// Nonempty rows keyed by `(length, index)`.
    row_order: BTreeSet<(u32, u32)>,
    row_active: Vec<bool>,
    col_active: Vec<bool>,
    nnz: u64,
    budget: Budget,
    log: Option<(Vec<RowOp>, Vec<ColOp>)>,
}

fn reorder(order: &mut BTreeSet<(u32, u32)>, index: u32, old_len: usize, new_len: usize) {
    if old_len == new_len {
        return;
    }
    if old_len > 0 {
        order.remove(&(old_len as u32, index));
    }
    if new_len > 0 {
        order.insert((new_len as u32, index));
    }
}

fn col_insert(col_rows: &mut [BTreeSet<u32>], order: &mut BTreeSet<(u32, u32)>, c: u32, r: u32) {
    let set = &mut col_rows[c as usize];
    let old = set.len();
    set.insert(r);
    reorder(order, c, old, set.len());
}

fn col_remove(col_rows: &mut [BTreeSet<u32>], order: &mut BTreeSet<(u32, u32)>, c: u32, r: u32) {
    let set = &mut col_rows[c as usize];
    let old = set.len();
    set.remove(&r);
    reorder(order, c, old, set.len());
}

impl Eliminator {
    fn new(a: &SparseIntMatrix, budget: Budget, with_transforms: bool) -> Self {
        let rows = a.rows();
        let mut col_rows = vec![BTreeSet::new(); a.n_cols()];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].insert(r as u32);
            }
        }
        let col_order = col_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, s)| (s.len() as u32, c as u32))
            .collect();
        let row_order = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| (r.len() as u32, i as u32))
            .collect();
        Eliminator {
            nnz: a.nnz() as u64,
            rows,
            col_rows,
            col_order,
            row_order,
            row_active: vec![true; a.n_rows()],
            col_active: vec![true; a.n_cols()],
            budget,
            log: with_transforms.then(|| (Vec::new(), Vec::new())),
        }
    }

    fn entry(&self, r: usize, c: u32) -> Option<&Integer> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|i| &row[i].1)
    }

    /// Pivot rule: a unit that is alone in its row; else, in the shortest
    /// column holding a unit, the unit on the shortest row (ties by index);
    /// else the smallest-magnitude entry.
    fn choose_pivot(&self) -> Option<(usize, u32)> {
        let &(len, r) = self.row_order.first()?;
        if len == 1 {
            let (c, v) = &self.rows[r as usize][0];
            if v.is_unit() {
                return Some((r as usize, *c));
            }
        }
        for &(_, c) in &self.col_order {
            let best = self.col_rows[c as usize]
                .iter()
                .filter(|&&r| self.entry(r as usize, c).is_some_and(Integer::is_unit))
                .min_by_key(|&&r| (self.rows[r as usize].len(), r));
            if let Some(&r) = best {
                return Some((r as usize, c));
            }
        }
        self.smallest_entry()
    }

    fn smallest_entry(&self) -> Option<(usize, u32)> {
        let mut best: Option<(Integer, usize, usize, u32)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let row_cost = row.len() - 1;
            for (c, v) in row {
                let cost = row_cost * (self.col_rows[*c as usize].len() - 1);
                let better = match &best {
                    None => true,
                    Some((bv, bcost, br, bc)) => match v.cmp_abs(bv) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => (cost, r, *c) < (*bcost, *br, *bc),
                    },
                };
                if better {
                    best = Some((v.abs(), cost, r, *c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// `row[dst] -= q * row[src]`, keeping the column index in sync.
    fn row_sub(&mut self, dst: usize, src: usize, q: &Integer) -> Result<()> {
        if q.is_zero() {
            return Ok(());
        }
        let a = std::mem::take(&mut self.rows[dst]);
        let b = &self.rows[src];
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let v = -(q * &b[j].1);
                self.check_bits(&v)?;
                col_insert(&mut self.col_rows, &mut self.col_order, b[j].0, dst as u32);
                out.push((b[j].0, v));
                j += 1;
            } else {
                let v = a[i].1.sub_mul(q, &b[j].1);
                if v.is_zero() {
                    col_remove(&mut self.col_rows, &mut self.col_order, a[i].0, dst as u32);
                } else {
                    self.check_bits(&v)?;
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.nnz = self.nnz + out.len() as u64 - a.len() as u64;
        if self.nnz > self.budget.max_entries {
            return Err(Error::BudgetExceeded {
                what: "matrix entries",
                count: self.nnz,
                limit: self.budget.max_entries,
            });
        }
        reorder(&mut self.row_order, dst as u32, a.len(), out.len());
        self.rows[dst] = out;
        if let Some((row_ops, _)) = &mut self.log {
            row_ops.push(RowOp::Add {
                dst: dst as u32,
                src: src as u32,
                q: -q,
            });
        }
        Ok(())
    }

    /// `col[dst] -= q * col[src]` where `col[src]` has a single entry at `row`.
    fn col_sub_single(&mut self, dst: u32, src: u32, row: usize, q: &Integer) -> Result<()> {
        let pivot = self.entry(row, src).expect("pivot present").clone();
        let delta = q * &pivot;
        let r = &mut self.rows[row];
        let old_len = r.len();
        match r.binary_search_by_key(&dst, |e| e.0) {
            Ok(i) => {
                let v = &r[i].1 - &delta;
                if v.is_zero() {
                    r.remove(i);
                    col_remove(&mut self.col_rows, &mut self.col_order, dst, row as u32);
                    self.nnz -= 1;
                } else {
                    r[i].1 = v;
                }
            }
            Err(i) => {
                r.insert(i, (dst, -delta));
                col_insert(&mut self.col_rows, &mut self.col_order, dst, row as u32);
                self.nnz += 1;
            }
        }
        let new_len = self.rows[row].len();
        reorder(&mut self.row_order, row as u32, old_len, new_len);
        if let Some((_, col_ops)) = &mut self.log {
            col_ops.push(ColOp { dst, src, q: -q });
        }
        Ok(())
    }

    fn check_bits(&self, v: &Integer) -> Result<()> {
        let bits = v.bits();
        if bits > self.budget.max_bits {
            return Err(Error::BudgetExceeded {
                what: "entry bit size",
                count: bits,
                limit: self.budget.max_bits,
            });
        }
        Ok(())
    }

    /// Reduces the column and row of the pivot by rounded division. Returns
    /// true when both are clear apart from the pivot itself.
    fn reduce_at(&mut self, r: usize, c: u32) -> Result<bool> {
        let pivot = self.entry(r, c).expect("pivot present").clone();
        let mut clean = true;
        let others: Vec<u32> = self.col_rows[c as usize]
            .iter()
            .copied()
            .filter(|&x| x as usize != r)
            .collect();
        for o in others {
            let v = self.entry(o as usize, c).expect("indexed entry").clone();
            let q = v.div_round(&pivot);
            self.row_sub(o as usize, r, &q)?;
            if self.entry(o as usize, c).is_some() {
                clean = false;
            }
        }
        if !clean {
            return Ok(false);
        }
        let others: Vec<(u32, Integer)> =
            self.rows[r].iter().filter(|e| e.0 != c).cloned().collect();
        for (oc, v) in others {
            let q = v.div_round(&pivot);
            self.col_sub_single(oc, c, r, &q)?;
            if self.entry(r, oc).is_some() {
                clean = false;
            }
        }
        Ok(clean)
    }

    fn retire(&mut self, r: usize, c: u32) -> Integer {
        let row = std::mem::take(&mut self.rows[r]);
        debug_assert_eq!(row.len(), 1);
        self.nnz -= row.len() as u64;
        reorder(&mut self.row_order, r as u32, 1, 0);
        reorder(&mut self.col_order, c, self.col_rows[c as usize].len(), 0);
        self.col_rows[c as usize].clear();
        self.row_active[r] = false;
        self.col_active[c as usize] = false;
        row.into_iter().next().expect("pivot entry").1
    }
}

/// Smith normal form of `a`, with the elementary operations logged when
/// `with_transforms` is set.
pub fn smith_normal_form(a: &SparseIntMatrix, with_transforms: bool) -> Result<SnfResult> {
    smith_normal_form_with_budget(a, with_transforms, Budget::default())
}

pub fn smith_normal_form_with_budget(
    a: &SparseIntMatrix,
    with_transforms: bool,
    budget: Budget,
) -> Result<SnfResult> {
    let mut el = Eliminator::new(a, budget, with_transforms);
    if el.nnz > budget.max_entries {
        return Err(Error::BudgetExceeded {
            what: "matrix entries",
            count: el.nnz,
            limit: budget.max_entries,
        });
    }
    let mut pivots: Vec<Pivot> = Vec::new();
    while let Some((r, c)) = el.choose_pivot() {
        if el.reduce_at(r, c)? {
            let value = el.retire(r, c);
            pivots.push(Pivot {
                row: r,
                col: c as usize,
                value,
            });
        }
    }
    let (mut row_ops, mut col_ops) = el.log.take().unwrap_or_default();
    let logging = with_transforms;
    normalize_diagonal(&mut pivots, logging, &mut row_ops, &mut col_ops);

    let invariant_factors: Vec<Integer> = pivots.iter().map(|p| p.value.clone()).collect();
    let transforms = with_transforms.then(|| {
        let mut row_position = vec![usize::MAX; a.n_rows()];
        let mut col_position = vec![usize::MAX; a.n_cols()];
        for (i, p) in pivots.iter().enumerate() {
            row_position[p.row] = i;
            col_position[p.col] = i;
        }
        let mut next = pivots.len();
        for slot in row_position.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = next;
            next += 1;
        }
        let mut next = pivots.len();
        for slot in col_position.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = next;
            next += 1;
        }
        SnfTransforms {
            n_rows: a.n_rows(),
            n_cols: a.n_cols(),
            row_ops,
            col_ops,
            row_position,
            col_position,
        }
    });
    Ok(SnfResult {
        invariant_factors,
        pivots,
        transforms,
        n_rows: a.n_rows(),
        n_cols: a.n_cols(),
    })
}

/// Result of eliminating only unit pivots.
pub struct UnitElimination {
    /// Rows and columns consumed by unit pivots, ascending.
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    /// What is left of the matrix on the remaining rows and columns, in their
    /// original relative order.
    pub residual: SparseIntMatrix,
}

/// Eliminates unit pivots until none remain. The invariant factors of `a`
/// are one for each eliminated pivot followed by those of the residual.
pub fn eliminate_units(a: &SparseIntMatrix, budget: Budget) -> Result<UnitElimination> {
    let mut el = Eliminator::new(a, budget, false);
    while let Some((r, c)) = el.choose_pivot() {
        if !el.entry(r, c).expect("pivot present").is_unit() {
            break;
        }
        let clean = el.reduce_at(r, c)?;
        debug_assert!(clean, "unit pivots always clear their row and column");
        el.retire(r, c);
    }
    let pivot_rows: Vec<usize> = (0..a.n_rows()).filter(|&r| !el.row_active[r]).collect();
    let pivot_cols: Vec<usize> = (0..a.n_cols()).filter(|&c| !el.col_active[c]).collect();
    let mut row_slot = vec![u32::MAX; a.n_rows()];
    for (i, r) in (0..a.n_rows()).filter(|&r| el.row_active[r]).enumerate() {
        row_slot[r] = i as u32;
    }
    let mut col_slot = vec![usize::MAX; a.n_cols()];
    for (i, c) in (0..a.n_cols()).filter(|&c| el.col_active[c]).enumerate() {
        col_slot[c] = i;
    }
    let n_res_rows = a.n_rows() - pivot_rows.len();
    let mut cols: Vec<Vec<(u32, Integer)>> = vec![Vec::new(); a.n_cols() - pivot_cols.len()];
    for (r, row) in el.rows.into_iter().enumerate() {
        for (c, v) in row {
            cols[col_slot[c as usize]].push((row_slot[r], v));
        }
    }
    Ok(UnitElimination {
        pivot_rows,
        pivot_cols,
        residual: SparseIntMatrix::from_columns(n_res_rows, cols),
    })
}

/// Makes every pivot positive and turns the diagonal into a divisibility
/// chain, logging the 2x2 operations used for each gcd/lcm exchange.
fn normalize_diagonal(
    pivots: &mut Vec<Pivot>,
    logging: bool,
    row_ops: &mut Vec<RowOp>,
    col_ops: &mut Vec<ColOp>,
) {
    for p in pivots.iter_mut() {
        if p.value.is_negative() {
            p.value = -&p.value;
            if logging {
                row_ops.push(RowOp::Negate(p.row as u32));
            }
        }
    }
    // units first; they divide everything
    pivots.sort_by(|x, y| {
        (!x.value.is_unit(), x.row, x.col).cmp(&(!y.value.is_unit(), y.row, y.col))
    });
    let start = pivots
        .iter()
        .position(|p| !p.value.is_unit())
        .unwrap_or(pivots.len());
    for i in start..pivots.len() {
        for j in (i + 1)..pivots.len() {
            if pivots[i].value.divides(&pivots[j].value) {
                continue;
            }
            let (g, l) = gcd_lcm_exchange(&pivots[i], &pivots[j], logging, row_ops, col_ops);
            pivots[i] = g;
            pivots[j] = l;
        }
    }
}

/// Works on the 2x2 block `diag(x, y)` at rows `(pi.row, pj.row)`, columns
/// `(pi.col, pj.col)`; returns pivots carrying `gcd(x, y)` and `lcm(x, y)`.
fn gcd_lcm_exchange(
    pi: &Pivot,
    pj: &Pivot,
    logging: bool,
    row_ops: &mut Vec<RowOp>,
    col_ops: &mut Vec<ColOp>,
) -> (Pivot, Pivot) {
    let rows = [pi.row, pj.row];
    let cols = [pi.col, pj.col];
    // m[r][c] indexes into rows/cols
    let mut m = [
        [pi.value.clone(), Integer::ZERO],
        [Integer::ZERO, pj.value.clone()],
    ];
    let mut add_row = |m: &mut [[Integer; 2]; 2], dst: usize, src: usize, q: Integer| {
        for c in 0..2 {
            let s = m[src][c].clone();
            m[dst][c] = m[dst][c].sub_mul(&-&q, &s);
        }
        if logging {
            row_ops.push(RowOp::Add {
                dst: rows[dst] as u32,
                src: rows[src] as u32,
                q,
            });
        }
    };
    let mut add_col = |m: &mut [[Integer; 2]; 2], dst: usize, src: usize, q: Integer| {
        for r in 0..2 {
            let s = m[r][src].clone();
            m[r][dst] = m[r][dst].sub_mul(&-&q, &s);
        }
        if logging {
            col_ops.push(ColOp {
                dst: cols[dst] as u32,
                src: cols[src] as u32,
                q,
            });
        }
    };
    // [[x, 0], [y, y]]
    add_col(&mut m, 0, 1, Integer::ONE);
    while !m[0][0].is_zero() && !m[1][0].is_zero() {
        let (big, small) = if m[0][0].cmp_abs(&m[1][0]).is_ge() {
            (0, 1)
        } else {
            (1, 0)
        };
        let q = m[big][0].div_round(&m[small][0]);
        add_row(&mut m, big, small, -q);
    }
    let g = if m[0][0].is_zero() { 1 } else { 0 };
    let o = 1 - g;
    let q = m[g][1]
        .div_exact(&m[g][0])
        .expect("gcd divides the second column");
    add_col(&mut m, 1, 0, -q);
    debug_assert!(m[g][1].is_zero() && m[o][0].is_zero());
    for r in [g, o] {
        let c = if r == g { 0 } else { 1 };
        if m[r][c].is_negative() {
            m[r][c] = -&m[r][c];
            if logging {
                row_ops.push(RowOp::Negate(rows[r] as u32));
            }
        }
    }
    (
        Pivot {
            row: rows[g],
            col: cols[0],
            value: m[g][0].clone(),
        },
        Pivot {
            row: rows[o],
            col: cols[1],
            value: m[o][1].clone(),
        },
    )
}

/// Decides whether `a·x = z` has an integer solution, returning a witness
/// that has been checked by multiplication.
pub fn solve_in_image(a: &SparseIntMatrix, z: &[Integer]) -> Result<Option<Vec<Integer>>> {
    let snf = smith_normal_form(a, true)?;
    solve_with(a, &snf, z)
}

/// As [`solve_in_image`], reusing a factorization computed with transforms.
pub fn solve_with(
    a: &SparseIntMatrix,
    snf: &SnfResult,
    z: &[Integer],
) -> Result<Option<Vec<Integer>>> {
    if z.len() != a.n_rows() {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            z.len(),
            a.n_rows()
        )));
    }
    let t = snf.transforms.as_ref().ok_or_else(|| {
        Error::InvalidParameter("factorization computed without transforms".into())
    })?;
    let mut w = z.to_vec();
    t.apply_u_unpermuted(&mut w);
    let mut y = vec![Integer::ZERO; a.n_cols()];
    let mut is_pivot_row = vec![false; a.n_rows()];
    for p in &snf.pivots {
        is_pivot_row[p.row] = true;
        match w[p.row].div_exact(&p.value) {
            Some(q) => y[p.col] = q,
            None => return Ok(None),
        }
    }
    if w.iter()
        .zip(&is_pivot_row)
        .any(|(v, &piv)| !piv && !v.is_zero())
    {
        return Ok(None);
    }
    t.apply_v_unpermuted(&mut y);
    if a.mul_vec(&y)? != z {
        return Err(Error::InvalidParameter(
            "solution failed verification".into(),
        ));
    }
    Ok(Some(y))
}

/// Rank over the rationals by fraction-free elimination with primitive rows.
/// Independent of the Smith form path; used for Betti numbers and as a
/// cross-check.
pub fn rank_over_rationals(a: &SparseIntMatrix) -> usize {
    let mut rows: Vec<Vec<(u32, Integer)>> =
        a.rows().into_iter().filter(|r| !r.is_empty()).collect();
    let mut rank = 0;
    // pivot on the leading column of the shortest row
    while !rows.is_empty() {
        let (idx, _) = rows
            .iter()
            .enumerate()
            .min_by_key(|(i, r)| (r[0].0, r.len(), *i))
            .expect("nonempty");
        let pivot_row = rows.swap_remove(idx);
        let (pc, pv) = (pivot_row[0].0, pivot_row[0].1.clone());
        rank += 1;
        let mut next = Vec::with_capacity(rows.len());
        for row in rows {
            if row[0].0 != pc {
                next.push(row);
                continue;
            }
            // pv * row - row[0] * pivot_row, then strip the content
            let f = row[0].1.clone();
            let combined = combine(&row, &pv, &pivot_row, &f);
            if !combined.is_empty() {
                next.push(primitive(combined));
            }
        }
        rows = next;
    }
    rank
}

fn combine(
    a: &[(u32, Integer)],
    sa: &Integer,
    b: &[(u32, Integer)],
    sb: &Integer,
) -> Vec<(u32, Integer)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, sa * &a[i].1));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(sb * &b[j].1)));
            j += 1;
        } else {
            let v = &(sa * &a[i].1) - &(sb * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn primitive(mut row: Vec<(u32, Integer)>) -> Vec<(u32, Integer)> {
    let g = row.iter().fold(Integer::ZERO, |g, (_, v)| g.gcd(v));
    if !g.is_unit() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g).expect("content divides entries");
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(m: &SparseIntMatrix) -> Vec<i64> {
        smith_normal_form(m, false)
            .unwrap()
            .invariant_factors
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    fn check_transforms(a: &SparseIntMatrix) {
        let snf = smith_normal_form(a, true).unwrap();
        let t = snf.transforms.as_ref().unwrap();
        let (u, v) = (t.u_matrix(), t.v_matrix());
        let d = u.mul(a).unwrap().mul(&v).unwrap();
        for (r, c, val) in d.triplets() {
            assert_eq!(r, c, "off-diagonal entry in U A V");
            assert_eq!(val, &snf.invariant_factors[r]);
        }
        assert_eq!(d.nnz(), snf.rank());
        for w in snf.invariant_factors.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
        // unimodular: Smith form is all ones
        for m in [&u, &v] {
            let s = smith_normal_form(m, false).unwrap();
            assert_eq!(s.rank(), m.n_rows());
            assert!(s.invariant_factors.iter().all(Integer::is_unit));
        }
        // inverse application agrees with the forward one
        let mut x: Vec<Integer> = (0..a.n_cols())
            .map(|i| Integer::from(3 * i as i64 - 1))
            .collect();
        let orig = x.clone();
        t.apply_v_unpermuted(&mut x);
        t.apply_v_inverse_unpermuted(&mut x);
        assert_eq!(x, orig);
        let mut z: Vec<Integer> = (0..a.n_rows())
            .map(|i| Integer::from(7 - 2 * i as i64))
            .collect();
        let orig = z.clone();
        t.apply_u_unpermuted(&mut z);
        t.apply_u_inverse_unpermuted(&mut z);
        assert_eq!(z, orig);
    }

    #[test]
    fn examples() {
        assert_eq!(factors(&SparseIntMatrix::identity(3)), vec![1, 1, 1]);
        assert_eq!(factors(&SparseIntMatrix::zeros(3, 4)), Vec::<i64>::new());
        // d1 = gcd(2,4,6,8) = 2, d1 * d2 = |det| = |16 - 24| = 8
        assert_eq!(
            factors(&SparseIntMatrix::from_dense(&[vec![2, 4], vec![6, 8]])),
            vec![2, 4]
        );
        assert_eq!(
            factors(&SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]])),
            vec![1, 6]
        );
        assert_eq!(
            factors(&SparseIntMatrix::from_dense(&[
                vec![4, 0, 0],
                vec![0, 6, 0],
                vec![0, 0, 10]
            ])),
            vec![2, 2, 60]
        );
        check_transforms(&SparseIntMatrix::from_dense(&[vec![2, 4], vec![6, 8]]));
        check_transforms(&SparseIntMatrix::from_dense(&[
            vec![4, 0, 0],
            vec![0, 6, 0],
            vec![0, 0, 10],
        ]));
        check_transforms(&SparseIntMatrix::zeros(2, 3));
    }

    #[test]
    fn solve_examples() {
        let z = SparseIntMatrix::from_dense(&[vec![2]]);
        assert_eq!(solve_in_image(&z, &[Integer::from(3)]).unwrap(), None);
        assert_eq!(
            solve_in_image(&z, &[Integer::from(4)]).unwrap(),
            Some(vec![Integer::from(2)])
        );
        let a = SparseIntMatrix::from_dense(&[vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(
            solve_in_image(&a, &[Integer::ZERO, Integer::ZERO]).unwrap(),
            Some(vec![Integer::ZERO; 3])
        );
        let tall = SparseIntMatrix::from_dense(&[vec![1], vec![1]]);
        assert_eq!(
            solve_in_image(&tall, &[Integer::ONE, Integer::ZERO]).unwrap(),
            None
        );
        assert!(solve_in_image(&tall, &[Integer::ONE]).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 1, 1], vec![1, 2, 3], vec![1, 3, 7]]);
        let tight = Budget {
            max_entries: 4,
            max_bits: 64,
        };
        assert!(matches!(
            smith_normal_form_with_budget(&a, false, tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn large_entries_escalate() {
        let big = Integer::from(i64::MAX);
        let a = SparseIntMatrix::from_triplets(
            2,
            2,
            [
                (0, 0, big.clone()),
                (0, 1, Integer::from(2)),
                (1, 0, Integer::from(3)),
                (1, 1, big.clone()),
            ],
        )
        .unwrap();
        let snf = smith_normal_form(&a, true).unwrap();
        let det = (&big * &big) - Integer::from(6);
        let prod = snf
            .invariant_factors
            .iter()
            .fold(Integer::ONE, |acc, d| &acc * d);
        assert_eq!(prod, det.abs());
        check_transforms(&a);
    }

    #[test]
    fn rational_rank_agrees_on_examples() {
        assert_eq!(
            rank_over_rationals(&SparseIntMatrix::from_dense(&[vec![2, 4], vec![1, 2]])),
            1
        );
        assert_eq!(
            rank_over_rationals(&SparseIntMatrix::from_dense(&[vec![2, 4], vec![6, 8]])),
            2
        );
        assert_eq!(rank_over_rationals(&SparseIntMatrix::zeros(3, 3)), 0);
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = SparseIntMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(
                prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -9i64..=9], c),
                r,
            )
            .prop_map(|rows| SparseIntMatrix::from_dense(&rows))
        })
    }

    proptest! {
        #[test]
        fn transforms_diagonalize(a in arb_matrix(6)) {
            check_transforms(&a);
            prop_assert_eq!(rank_over_rationals(&a), smith_normal_form(&a, false).unwrap().rank());
        }

        #[test]
        fn solve_finds_every_image_vector(a in arb_matrix(5), seed in prop::collection::vec(-3i64..=3, 5)) {
            let x: Vec<Integer> = (0..a.n_cols()).map(|i| Integer::from(seed[i % seed.len()])).collect();
            let z = a.mul_vec(&x).unwrap();
            let w = solve_in_image(&a, &z).unwrap();
            prop_assert!(w.is_some());
            prop_assert_eq!(a.mul_vec(&w.unwrap()).unwrap(), z);
        }
    }
}
