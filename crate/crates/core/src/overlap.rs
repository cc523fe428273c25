//! Overlaps between two eigenbases, zero classification with a
//! scale-separation certificate, non-mixing partition search and the
//! projector-sum symmetry operator built from a partition.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::eigen::{diagonalize, EigenSystem, DEGENERACY_WINDOW};
use crate::error::{Error, Result};
use crate::model::{ModelParams, OperatorLabel, OperatorMatrix};

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-8;
/// Minimum smallest-retained / largest-ignored ratio for a valid split.
pub const REQUIRED_SEPARATION: f64 = 1e3;
pub const DEFAULT_LEVELS: usize = 10;

#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub params_row: ModelParams,
    pub params_col: ModelParams,
    pub n_levels: usize,
    /// entries[(n, m)] = |⟨ψ_n(row)|ψ_m(col)⟩|
    pub entries: DMatrix<f64>,
    pub zero_threshold: f64,
    /// Largest entry classified as zero (0 when none).
    pub largest_ignored: f64,
    /// Smallest entry kept as finite (∞ when none).
    pub smallest_retained: f64,
    /// Row and column indices whose entries are subspace overlaps of a
    /// degenerate block rather than single-vector overlaps.
    pub degenerate_rows: Vec<usize>,
    pub degenerate_cols: Vec<usize>,
}

impl OverlapMatrix {
    pub fn separation_ratio(&self) -> f64 {
        self.smallest_retained / self.largest_ignored.max(1e-300)
    }

    pub fn is_valid(&self) -> bool {
        self.separation_ratio() >= REQUIRED_SEPARATION
    }

    pub fn is_zero(&self, n: usize, m: usize) -> bool {
        self.entries[(n, m)] < self.zero_threshold
    }

    pub fn zero_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|x| **x < self.zero_threshold)
            .count()
    }

    pub fn transposed(&self) -> OverlapMatrix {
        OverlapMatrix {
            params_row: self.params_col,
            params_col: self.params_row,
            entries: self.entries.transpose(),
            degenerate_rows: self.degenerate_cols.clone(),
            degenerate_cols: self.degenerate_rows.clone(),
            ..self.clone()
        }
    }
}

/// Re-diagonalizes whichever system has the smaller truncation at the
/// larger one.
pub fn align_truncation(e1: &EigenSystem, e2: &EigenSystem) -> Result<(EigenSystem, EigenSystem)> {
    use std::cmp::Ordering::*;
    let lift = |e: &EigenSystem, n: usize| -> Result<EigenSystem> {
        let mut s = diagonalize(&e.params, n)?;
        // a larger truncation keeps the converged levels converged
        s.converged_levels = s.converged_levels.max(e.converged_levels);
        Ok(s)
    };
    match e1.n_fock.cmp(&e2.n_fock) {
        Equal => Ok((e1.clone(), e2.clone())),
        Less => Ok((lift(e1, e2.n_fock)?, e2.clone())),
        Greater => Ok((e1.clone(), lift(e2, e1.n_fock)?)),
    }
}

pub fn overlap_matrix(
    e1: &EigenSystem,
    e2: &EigenSystem,
    n_levels: usize,
) -> Result<OverlapMatrix> {
    if e1.n_fock != e2.n_fock {
        return Err(Error::TruncationMismatch(e1.n_fock, e2.n_fock));
    }
    for e in [e1, e2] {
        if e.converged_levels < n_levels {
            return Err(Error::InsufficientLevels {
                requested: n_levels,
                available: e.converged_levels,
            });
        }
    }
    let v1 = e1.vectors.columns(0, n_levels);
    let v2 = e2.vectors.columns(0, n_levels);
    let mut entries = (v1.transpose() * v2).abs();

    // Degenerate eigenvectors are only defined up to a rotation within
    // their block; use the rotation-invariant block overlap
    // ‖V_B1ᵀ V_B2‖_F / √(|B1| |B2|) for every entry of such a block pair.
    let rows = e1.degenerate_blocks(n_levels, DEGENERACY_WINDOW);
    let cols = e2.degenerate_blocks(n_levels, DEGENERACY_WINDOW);
    let mut degenerate_rows = Vec::new();
    let mut degenerate_cols = Vec::new();
    for b in rows.iter().filter(|b| b.len() > 1) {
        degenerate_rows.extend(b.clone());
    }
    for b in cols.iter().filter(|b| b.len() > 1) {
        degenerate_cols.extend(b.clone());
    }
    if !degenerate_rows.is_empty() || !degenerate_cols.is_empty() {
        for r in &rows {
            for c in &cols {
                if r.len() == 1 && c.len() == 1 {
                    continue;
                }
                let block = v1.columns(r.start, r.len()).transpose() * v2.columns(c.start, c.len());
                let value = block.norm() / ((r.len() * c.len()) as f64).sqrt();
                for n in r.clone() {
                    for m in c.clone() {
                        entries[(n, m)] = value;
                    }
                }
            }
        }
    }

    let mut out = OverlapMatrix {
        params_row: e1.params,
        params_col: e2.params,
        n_levels,
        entries,
        zero_threshold: DEFAULT_ZERO_THRESHOLD,
        largest_ignored: 0.0,
        smallest_retained: f64::INFINITY,
        degenerate_rows,
        degenerate_cols,
    };
    out = classify_zeros(out, DEFAULT_ZERO_THRESHOLD);
    Ok(out)
}

/// Diagonalize both parameter points (already converged for `n_levels`),
/// align truncations and form the overlap matrix.
pub fn overlap_between(
    p_row: &ModelParams,
    p_col: &ModelParams,
    n_levels: usize,
    tol: f64,
) -> Result<OverlapMatrix> {
    let e1 = crate::eigen::diagonalize_converged(p_row, n_levels, tol)?;
    let e2 = crate::eigen::diagonalize_converged(p_col, n_levels, tol)?;
    let (e1, e2) = align_truncation(&e1, &e2)?;
    overlap_matrix(&e1, &e2, n_levels)
}

pub fn classify_zeros(mut m: OverlapMatrix, threshold: f64) -> OverlapMatrix {
    assert!(threshold > 0.0, "zero threshold must be positive");
    m.zero_threshold = threshold;
    m.largest_ignored = 0.0;
    m.smallest_retained = f64::INFINITY;
    for &x in m.entries.iter() {
        if x < threshold {
            m.largest_ignored = m.largest_ignored.max(x);
        } else {
            m.smallest_retained = m.smallest_retained.min(x);
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult {
    pub found: bool,
    /// All groups are singletons.
    pub trivial: bool,
    /// 0-based level indices, each group ascending, groups ordered by
    /// their smallest row index.
    pub groups_row: Vec<Vec<usize>>,
    pub groups_col: Vec<Vec<usize>>,
    pub row_permutation: Vec<usize>,
    pub col_permutation: Vec<usize>,
    pub params_row: ModelParams,
    pub params_col: ModelParams,
    pub largest_ignored: f64,
    pub smallest_retained: f64,
}

impl PartitionResult {
    /// Group of row state `n` (0-based).
    pub fn row_group_of(&self, n: usize) -> Option<&[usize]> {
        self.groups_row
            .iter()
            .find(|g| g.contains(&n))
            .map(|g| g.as_slice())
    }

    pub fn col_group_of(&self, m: usize) -> Option<&[usize]> {
        self.groups_col
            .iter()
            .find(|g| g.contains(&m))
            .map(|g| g.as_slice())
    }
}

struct DisjointSet(Vec<usize>);

impl DisjointSet {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Connected components of the bipartite graph whose edges are the
/// finite entries.
pub fn find_partition(m: &OverlapMatrix) -> Result<PartitionResult> {
    if m.params_row.g == 0.0 || m.params_col.g == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if !m.is_valid() {
        return Err(Error::NoScaleSeparation {
            ratio: m.separation_ratio(),
            required: REQUIRED_SEPARATION,
        });
    }
    let n = m.n_levels;
    // rows are nodes 0..n, columns n..2n
    let mut sets = DisjointSet((0..2 * n).collect());
    for r in 0..n {
        for c in 0..n {
            if !m.is_zero(r, c) {
                sets.union(r, n + c);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut groups_row: Vec<Vec<usize>> = Vec::new();
    let mut groups_col: Vec<Vec<usize>> = Vec::new();
    for node in 0..2 * n {
        let root = sets.find(node);
        let gi = match roots.iter().position(|&r| r == root) {
            Some(i) => i,
            None => {
                roots.push(root);
                groups_row.push(Vec::new());
                groups_col.push(Vec::new());
                roots.len() - 1
            }
        };
        if node < n {
            groups_row[gi].push(node);
        } else {
            groups_col[gi].push(node - n);
        }
    }
    // roots are minimal members, so groups come out ordered by smallest
    // row index (column-only components last)
    let balanced = groups_row
        .iter()
        .zip(&groups_col)
        .all(|(r, c)| !r.is_empty() && !c.is_empty());
    let found = roots.len() >= 2 && balanced;
    let trivial = found && groups_row.iter().all(|g| g.len() == 1);
    Ok(PartitionResult {
        found,
        trivial,
        row_permutation: groups_row.concat(),
        col_permutation: groups_col.concat(),
        groups_row,
        groups_col,
        params_row: m.params_row,
        params_col: m.params_col,
        largest_ignored: m.largest_ignored,
        smallest_retained: m.smallest_retained,
    })
}

/// S = Σ_i S_i Σ_{j ∈ group i} v_j v_jᵀ, restricted to the span of the
/// partitioned levels.
pub fn synthesize_symmetry_operator(
    partition: &PartitionResult,
    e: &EigenSystem,
    labels: &[f64],
) -> Result<OperatorMatrix> {
    if !partition.found {
        return Err(Error::PartitionNotFound);
    }
    let groups = if e.params == partition.params_row {
        &partition.groups_row
    } else if e.params == partition.params_col {
        &partition.groups_col
    } else {
        return Err(Error::ParamsMismatch);
    };
    if labels.len() != groups.len() {
        return Err(Error::LabelMismatch {
            labels: labels.len(),
            groups: groups.len(),
        });
    }
    for (i, a) in labels.iter().enumerate() {
        if labels[..i].contains(a) {
            return Err(Error::DuplicateLabels);
        }
    }
    let needed = groups.iter().flatten().max().map_or(0, |m| m + 1);
    if e.converged_levels < needed {
        return Err(Error::InsufficientLevels {
            requested: needed,
            available: e.converged_levels,
        });
    }
    let dim = e.dim();
    let mut s = DMatrix::zeros(dim, dim);
    for (group, &label) in groups.iter().zip(labels) {
        for &j in group {
            let v = e.vectors.column(j);
            s.ger(label, &v, &v, 1.0);
        }
    }
    Ok(OperatorMatrix::new(OperatorLabel::Symmetry, s))
}

/// Formats a number with `digits` significant digits in the style of
/// C's `%g` (trailing zeros removed).
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Appendix-style table: index header row and column, entries at
/// `digits` significant digits, classified zeros written as `0`.
pub fn format_table(m: &OverlapMatrix, digits: usize) -> String {
    let mut out = String::new();
    let n = m.n_levels;
    out.push(' ');
    for c in 1..=n {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for r in 0..n {
        let _ = write!(out, "{}", r + 1);
        for c in 0..n {
            let cell = if m.is_zero(r, c) {
                "0".to_string()
            } else {
                format_significant(m.entries[(r, c)], digits)
            };
            let _ = write!(out, ",{cell}");
        }
        out.push('\n');
    }
    out
}

/// Parses a table written by [`format_table`] (comment lines skipped).
pub fn parse_table(text: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .collect();
    let bad = |msg: &str| Error::Usage(format!("malformed overlap table: {msg}"));
    let header = rows.first().ok_or_else(|| bad("empty"))?;
    let n = header.split(',').count() - 1;
    let mut m = DMatrix::zeros(n, n);
    for (r, line) in rows[1..].iter().take(n).enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n + 1 {
            return Err(bad("ragged row"));
        }
        for c in 0..n {
            m[(r, c)] = cells[c + 1]
                .trim()
                .parse()
                .map_err(|_| bad("non-numeric cell"))?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::diagonalize_converged;

    fn unit(delta: f64, epsilon: f64, g: f64) -> ModelParams {
        ModelParams::unit(delta, epsilon, g).unwrap()
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.0858720123, 6), "0.085872");
        assert_eq!(format_significant(0.96738, 6), "0.96738");
        assert_eq!(format_significant(0.000722655, 6), "0.000722655");
        assert_eq!(format_significant(0.0143253111, 6), "0.0143253");
        assert_eq!(format_significant(1.6e-9, 6), "1.6e-09");
        assert_eq!(format_significant(1.0, 6), "1");
        assert_eq!(format_significant(-2.5, 3), "-2.5");
        assert_eq!(format_significant(123456789.0, 6), "1.23457e+08");
    }

    #[test]
    fn self_overlap_is_identity() {
        let e = diagonalize_converged(&unit(0.7, 0.3, 0.5), 10, 1e-10).unwrap();
        let m = overlap_matrix(&e, &e, 10).unwrap();
        assert!((m.entries.clone() - DMatrix::identity(10, 10)).amax() < 1e-12);
        assert!(m.is_valid());
        let p = find_partition(&m).unwrap();
        assert!(p.found && p.trivial);
        assert_eq!(p.groups_row.len(), 10);
    }

    #[test]
    fn mismatched_truncations() {
        let a = diagonalize(&unit(0.7, 0.0, 0.5), 40).unwrap();
        let b = diagonalize(&unit(0.7, 0.0, 0.6), 50).unwrap();
        assert!(matches!(
            overlap_matrix(&a, &b, 5),
            Err(Error::TruncationMismatch(40, 50))
        ));
        let (a, b) = align_truncation(&a, &b).unwrap();
        assert_eq!(a.n_fock, b.n_fock);
        assert!(overlap_matrix(&a, &b, 5).is_ok());
    }

    #[test]
    fn insufficient_levels() {
        let mut a = diagonalize(&unit(0.7, 0.0, 0.5), 40).unwrap();
        a.converged_levels = 3;
        assert!(matches!(
            overlap_matrix(&a, &a, 5),
            Err(Error::InsufficientLevels {
                requested: 5,
                available: 3
            })
        ));
    }

    #[test]
    fn zero_coupling_refused() {
        let e = diagonalize(&unit(0.7, 0.0, 0.0), 20).unwrap();
        let m = overlap_matrix(&e, &e, 4).unwrap();
        assert!(matches!(find_partition(&m), Err(Error::ZeroCoupling)));
    }

    #[test]
    fn invalid_classification_refused() {
        let e = diagonalize(&unit(0.7, 0.0, 0.5), 30).unwrap();
        let mut m = overlap_matrix(&e, &e, 4).unwrap();
        m.entries[(0, 1)] = 5e-9;
        m.entries[(1, 0)] = 2e-8;
        let m = classify_zeros(m, 1e-8);
        assert!(!m.is_valid());
        assert!(matches!(
            find_partition(&m),
            Err(Error::NoScaleSeparation { .. })
        ));
    }

    #[test]
    fn degenerate_blocks_use_subspace_overlap() {
        // Δ = ε = 0: every level is doubly degenerate
        let a = diagonalize(&unit(0.0, 0.0, 0.5), 40).unwrap();
        let b = diagonalize(&unit(0.0, 0.0, 0.9), 40).unwrap();
        let m = overlap_matrix(&a, &b, 6).unwrap();
        assert_eq!(m.degenerate_rows, (0..6).collect::<Vec<_>>());
        for r in 0..6 {
            let s: f64 = m.entries.row(r).iter().map(|x| x * x).sum();
            assert!(s <= 1.0 + 1e-8);
        }
        // the 2×2 blocks carry one value each
        assert_eq!(m.entries[(0, 0)], m.entries[(1, 1)]);
        assert_eq!(m.entries[(0, 1)], m.entries[(1, 0)]);
    }

    #[test]
    fn table_round_trip() {
        let e = diagonalize_converged(&unit(0.7, 0.0, 0.5), 6, 1e-10).unwrap();
        let f = diagonalize_converged(&unit(0.7, 0.0, 1.1), 6, 1e-10).unwrap();
        let (e, f) = align_truncation(&e, &f).unwrap();
        let m = overlap_matrix(&e, &f, 6).unwrap();
        let text = format_table(&m, 6);
        let back = parse_table(&text).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let want = if m.is_zero(r, c) {
                    0.0
                } else {
                    m.entries[(r, c)]
                };
                assert!((back[(r, c)] - want).abs() <= 5e-6 * want.max(1e-300) + 1e-12);
            }
        }
    }
}
