//! Minimum-cost bijection on a square cost matrix.
//!
//! The default backend is the matrix form of the Hungarian method: reduce
//! rows, look for a perfect matching among zero entries, and when there is
//! none, take a minimum line cover from the König construction and shift the
//! smallest uncovered entry `Δ` into the covered columns. The alternative
//! backend is the `O(k³)` shortest-augmenting-path method with row/column
//! potentials. Both end with a matrix of non-negative reduced costs in which
//! every optimal bijection uses zeros only; the lexicographically smallest
//! such bijection is returned.

use crate::error::{Error, Result};

use super::{Cost, FileMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Matrix,
    ShortestPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HungarianOptions {
    pub backend: Backend,
    /// Record every intermediate matrix, cover and `Δ` (matrix backend).
    pub trace: bool,
    /// Also subtract column minima after the row reduction (matrix backend).
    pub column_reduction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep<T> {
    RowReduced(Vec<Vec<T>>),
    ColumnReduced(Vec<Vec<T>>),
    /// Maximum matching on the zero entries, as `(row, column)` pairs.
    ZeroMatching(Vec<(usize, usize)>),
    /// Minimum set of covering lines.
    Cover {
        rows: Vec<usize>,
        columns: Vec<usize>,
    },
    Adjusted {
        delta: T,
        matrix: Vec<Vec<T>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HungarianTrace<T> {
    pub steps: Vec<TraceStep<T>>,
}

impl<T> Default for HungarianTrace<T> {
    fn default() -> Self {
        HungarianTrace { steps: Vec::new() }
    }
}

impl<T: Clone> HungarianTrace<T> {
    pub fn deltas(&self) -> Vec<T> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                TraceStep::Adjusted { delta, .. } => Some(delta.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn matchings(&self) -> Vec<&[(usize, usize)]> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                TraceStep::ZeroMatching(m) => Some(m.as_slice()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment<T> {
    pub map: FileMap,
    pub cost: T,
    /// Final reduced matrix; optimal bijections are exactly its zero matchings.
    pub reduced: Vec<Vec<T>>,
    pub trace: Option<HungarianTrace<T>>,
}

pub(super) fn check_square<T>(cost: &[Vec<T>]) -> Result<usize> {
    let k = cost.len();
    match cost.iter().position(|r| r.len() != k) {
        Some(row) => Err(Error::NotSquare {
            rows: k,
            row,
            cols: cost[row].len(),
        }),
        None => Ok(k),
    }
}

pub fn hungarian_min_assignment<T: Cost>(
    cost: &[Vec<T>],
    opts: &HungarianOptions,
) -> Result<Assignment<T>> {
    let k = check_square(cost)?;
    let (reduced, trace) = match opts.backend {
        Backend::Matrix => {
            let (m, t) = matrix_method(cost, opts);
            (m, t)
        }
        Backend::ShortestPath => (shortest_path_method(cost), None),
    };
    let files = lex_smallest_zero_matching(&reduced)
        .expect("reduced matrix admits a perfect zero matching");
    let map = FileMap::new(files);
    debug_assert_eq!(map.files().len(), k);
    let total = map.cost(cost);
    Ok(Assignment {
        map,
        cost: total,
        reduced,
        trace,
    })
}

fn matrix_method<T: Cost>(
    cost: &[Vec<T>],
    opts: &HungarianOptions,
) -> (Vec<Vec<T>>, Option<HungarianTrace<T>>) {
    let k = cost.len();
    let mut trace = opts.trace.then(HungarianTrace::default);
    let mut record = |step: TraceStep<T>| {
        if let Some(t) = trace.as_mut() {
            t.steps.push(step);
        }
    };
    let mut m: Vec<Vec<T>> = cost.to_vec();
    for row in m.iter_mut() {
        if let Some(min) = row.iter().min().cloned() {
            for x in row.iter_mut() {
                *x = x.clone() - min.clone();
            }
        }
    }
    record(TraceStep::RowReduced(m.clone()));
    if opts.column_reduction {
        for j in 0..k {
            let min = (0..k).map(|i| &m[i][j]).min().cloned().expect("non-empty");
            for row in m.iter_mut() {
                row[j] = row[j].clone() - min.clone();
            }
        }
        record(TraceStep::ColumnReduced(m.clone()));
    }
    loop {
        let matching = max_zero_matching(&m, &[], &[]);
        let pairs: Vec<(usize, usize)> = matching
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|j| (i, j)))
            .collect();
        let size = pairs.len();
        record(TraceStep::ZeroMatching(pairs));
        if size == k {
            break;
        }
        let (cover_rows, cover_cols) = konig_cover(&m, &matching);
        let delta = (0..k)
            .filter(|i| !cover_rows[*i])
            .flat_map(|i| (0..k).filter(|j| !cover_cols[*j]).map(move |j| (i, j)))
            .map(|(i, j)| &m[i][j])
            .min()
            .cloned()
            .expect("a cover smaller than k leaves an uncovered entry");
        record(TraceStep::Cover {
            rows: (0..k).filter(|&i| cover_rows[i]).collect(),
            columns: (0..k).filter(|&j| cover_cols[j]).collect(),
        });
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if !cover_rows[i] {
                    *x = x.clone() - delta.clone();
                }
                if cover_cols[j] {
                    *x = x.clone() + delta.clone();
                }
            }
        }
        record(TraceStep::Adjusted {
            delta,
            matrix: m.clone(),
        });
    }
    (m, trace)
}

/// Maximum matching on zero entries via augmenting paths, with rows in
/// `skip_rows` and columns in `skip_cols` excluded. Returns the column
/// matched to each row.
fn max_zero_matching<T: Cost>(
    m: &[Vec<T>],
    skip_rows: &[usize],
    skip_cols: &[usize],
) -> Vec<Option<usize>> {
    let k = m.len();
    let mut row_of_col: Vec<Option<usize>> = vec![None; k];
    let mut col_of_row: Vec<Option<usize>> = vec![None; k];

    fn augment<T: Cost>(
        m: &[Vec<T>],
        i: usize,
        seen: &mut [bool],
        row_of_col: &mut [Option<usize>],
        col_of_row: &mut [Option<usize>],
        skip_cols: &[usize],
    ) -> bool {
        for j in 0..m.len() {
            if seen[j] || skip_cols.contains(&j) || !m[i][j].is_zero() {
                continue;
            }
            seen[j] = true;
            let free = match row_of_col[j] {
                None => true,
                Some(other) => augment(m, other, seen, row_of_col, col_of_row, skip_cols),
            };
            if free {
                row_of_col[j] = Some(i);
                col_of_row[i] = Some(j);
                return true;
            }
        }
        false
    }

    for i in 0..k {
        if skip_rows.contains(&i) {
            continue;
        }
        let mut seen = vec![false; k];
        augment(m, i, &mut seen, &mut row_of_col, &mut col_of_row, skip_cols);
    }
    col_of_row
}

/// König's construction: mark everything reachable from unmatched rows by
/// alternating paths; the cover is the unmarked rows plus the marked columns.
fn konig_cover<T: Cost>(m: &[Vec<T>], col_of_row: &[Option<usize>]) -> (Vec<bool>, Vec<bool>) {
    let k = m.len();
    let mut row_of_col = vec![None; k];
    for (i, c) in col_of_row.iter().enumerate() {
        if let Some(j) = c {
            row_of_col[*j] = Some(i);
        }
    }
    let mut row_marked = vec![false; k];
    let mut col_marked = vec![false; k];
    let mut stack: Vec<usize> = (0..k).filter(|&i| col_of_row[i].is_none()).collect();
    for &i in &stack {
        row_marked[i] = true;
    }
    while let Some(i) = stack.pop() {
        for j in 0..k {
            if col_marked[j] || !m[i][j].is_zero() {
                continue;
            }
            col_marked[j] = true;
            if let Some(r) = row_of_col[j] {
                if !row_marked[r] {
                    row_marked[r] = true;
                    stack.push(r);
                }
            }
        }
    }
    let cover_rows = row_marked.iter().map(|&r| !r).collect();
    (cover_rows, col_marked)
}

/// Lexicographically smallest perfect matching on the zero entries of `m`,
/// as the column chosen for each row.
fn lex_smallest_zero_matching<T: Cost>(m: &[Vec<T>]) -> Option<Vec<usize>> {
    let k = m.len();
    let mut fixed_rows = Vec::with_capacity(k);
    let mut fixed_cols = Vec::with_capacity(k);
    for i in 0..k {
        let choice = (0..k).find(|&j| {
            if fixed_cols.contains(&j) || !m[i][j].is_zero() {
                return false;
            }
            fixed_rows.push(i);
            fixed_cols.push(j);
            let rest = max_zero_matching(m, &fixed_rows, &fixed_cols);
            let complete = rest.iter().filter(|c| c.is_some()).count() == k - fixed_rows.len();
            fixed_rows.pop();
            fixed_cols.pop();
            complete
        })?;
        fixed_rows.push(i);
        fixed_cols.push(choice);
    }
    Some(fixed_cols)
}

/// Shortest augmenting paths with potentials; returns `c - u - v`.
fn shortest_path_method<T: Cost>(cost: &[Vec<T>]) -> Vec<Vec<T>> {
    let k = cost.len();
    // 1-based internally, index 0 is the virtual source column
    let mut u = vec![T::zero(); k + 1];
    let mut v = vec![T::zero(); k + 1];
    let mut row_of_col = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<T>> = vec![None; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0usize;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|mv| cur < *mv) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("just set");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=k {
                if used[j] {
                    let r = row_of_col[j];
                    u[r] = u[r].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(mv) = minv[j].as_mut() {
                    *mv = mv.clone() - delta.clone();
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| cost[i][j].clone() - u[i + 1].clone() - v[j + 1].clone())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::brute_force_assignment;
    use crate::rational::{q, qi, Q};
    use proptest::prelude::*;

    fn table3() -> Vec<Vec<Q>> {
        vec![
            vec![q(1, 10), q(9, 20), q(9, 20)],
            vec![q(23, 40), q(9, 40), q(29, 20)],
            vec![q(23, 40), q(23, 40), q(11, 10)],
        ]
    }

    #[test]
    fn table3_assignment() {
        let a = hungarian_min_assignment(&table3(), &HungarianOptions::default()).unwrap();
        assert_eq!(a.map.files(), &[2, 1, 0]);
        assert_eq!(a.cost, q(5, 4));
    }

    #[test]
    fn table3_trace() {
        let opts = HungarianOptions {
            trace: true,
            ..Default::default()
        };
        let a = hungarian_min_assignment(&table3(), &opts).unwrap();
        let trace = a.trace.unwrap();
        assert_eq!(
            trace.steps[0],
            TraceStep::RowReduced(vec![
                vec![qi(0), q(7, 20), q(7, 20)],
                vec![q(7, 20), qi(0), q(49, 40)],
                vec![qi(0), qi(0), q(21, 40)],
            ])
        );
        assert_eq!(trace.matchings()[0].len(), 2);
        assert!(trace.steps.contains(&TraceStep::Cover {
            rows: vec![],
            columns: vec![0, 1]
        }));
        assert_eq!(trace.deltas(), vec![q(7, 20)]);
        assert_eq!(
            a.reduced,
            vec![
                vec![qi(0), q(7, 20), qi(0)],
                vec![q(7, 20), qi(0), q(7, 8)],
                vec![qi(0), qi(0), q(7, 40)],
            ]
        );
        assert_eq!(trace.matchings().last().unwrap().len(), 3);
    }

    #[test]
    fn column_reduction_skips_delta_step() {
        let opts = HungarianOptions {
            trace: true,
            column_reduction: true,
            ..Default::default()
        };
        let a = hungarian_min_assignment(&table3(), &opts).unwrap();
        assert_eq!(a.cost, q(5, 4));
        assert!(a.trace.unwrap().deltas().is_empty());
    }

    #[test]
    fn shortest_path_backend_on_table3() {
        let opts = HungarianOptions {
            backend: Backend::ShortestPath,
            ..Default::default()
        };
        let a = hungarian_min_assignment(&table3(), &opts).unwrap();
        assert_eq!(a.map.files(), &[2, 1, 0]);
        assert_eq!(a.cost, q(5, 4));
    }

    #[test]
    fn zero_diagonal_gives_identity() {
        let m: Vec<Vec<i64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if i == j { 0 } else { 3 + i as i64 + j as i64 })
                    .collect()
            })
            .collect();
        let a = hungarian_min_assignment(&m, &HungarianOptions::default()).unwrap();
        assert_eq!(a.map, FileMap::identity(4));
        assert_eq!(a.cost, 0);
    }

    #[test]
    fn ties_resolve_lexicographically() {
        let m = vec![vec![1i64; 3]; 3];
        for backend in [Backend::Matrix, Backend::ShortestPath] {
            let a = hungarian_min_assignment(
                &m,
                &HungarianOptions {
                    backend,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(a.map, FileMap::identity(3));
        }
    }

    #[test]
    fn negative_entries() {
        let m = vec![vec![-5i64, 2], vec![-1, -7]];
        let a = hungarian_min_assignment(&m, &HungarianOptions::default()).unwrap();
        assert_eq!(a.cost, -12);
    }

    #[test]
    fn non_square_is_rejected() {
        let m = vec![vec![1i64, 2], vec![3]];
        assert!(matches!(
            hungarian_min_assignment(&m, &HungarianOptions::default()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn empty_matrix() {
        let m: Vec<Vec<i64>> = Vec::new();
        let a = hungarian_min_assignment(&m, &HungarianOptions::default()).unwrap();
        assert_eq!(a.cost, 0);
    }

    fn matrix(k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-20i64..40, k), k)
    }

    proptest! {
        #[test]
        fn backends_agree_with_brute_force(m in (1usize..=6).prop_flat_map(matrix)) {
            let (best_map, best) = brute_force_assignment(&m).unwrap();
            for backend in [Backend::Matrix, Backend::ShortestPath] {
                for column_reduction in [false, true] {
                    let opts = HungarianOptions { backend, column_reduction, trace: true };
                    let a = hungarian_min_assignment(&m, &opts).unwrap();
                    prop_assert_eq!(&a.cost, &best);
                    prop_assert_eq!(&a.map, &best_map);
                    prop_assert!(a.reduced.iter().flatten().all(|x| *x >= 0));
                    for (i, &j) in a.map.files().iter().enumerate() {
                        prop_assert_eq!(a.reduced[i][j], 0);
                    }
                }
            }
        }

        #[test]
        fn trace_matrices_keep_a_zero_per_row(m in (2usize..=5).prop_flat_map(matrix)) {
            let opts = HungarianOptions { trace: true, ..Default::default() };
            let a = hungarian_min_assignment(&m, &opts).unwrap();
            for step in a.trace.unwrap().steps {
                let mat = match step {
                    TraceStep::RowReduced(x) | TraceStep::ColumnReduced(x) => x,
                    TraceStep::Adjusted { matrix, delta } => { prop_assert!(delta > 0); matrix }
                    _ => continue,
                };
                prop_assert!(mat.iter().flatten().all(|x| *x >= 0));
                prop_assert!(mat.iter().all(|r| r.contains(&0)));
            }
        }

        #[test]
        fn row_and_column_shifts(m in (2usize..=5).prop_flat_map(matrix), row in 0usize..5, shift in -10i64..10) {
            let k = m.len();
            let row = row % k;
            let base = hungarian_min_assignment(&m, &HungarianOptions::default()).unwrap();
            let mut shifted = m.clone();
            for x in shifted[row].iter_mut() { *x += shift; }
            let a = hungarian_min_assignment(&shifted, &HungarianOptions::default()).unwrap();
            prop_assert_eq!(a.cost, base.cost + shift);
            prop_assert_eq!(a.map, base.map.clone());
            let mut by_col = m.clone();
            for r in by_col.iter_mut() { r[row] += shift; }
            let b = hungarian_min_assignment(&by_col, &HungarianOptions::default()).unwrap();
            prop_assert_eq!(b.cost, base.cost + shift);
            prop_assert_eq!(b.map, base.map);
        }
    }
}
