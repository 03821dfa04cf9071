//! Plain bipartite graphs on sorted integer vertex lists, and `K_{s,t}`
//! enumeration over them.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Bipartite graph whose vertices are positive integers. Both sides are
/// strictly increasing; `adj[i]` holds sorted indices into `right`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bigraph {
    left: Vec<u64>,
    right: Vec<u64>,
    adj: Vec<Vec<u32>>,
}

fn check_vertices(values: &[u64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if value == 0 || (index > 0 && values[index - 1] >= value) {
            return Err(Error::InvalidVertices { index, value });
        }
    }
    Ok(())
}

impl Bigraph {
    pub fn new(left: Vec<u64>, right: Vec<u64>, adj: Vec<Vec<u32>>) -> Result<Self> {
        check_vertices(&left)?;
        check_vertices(&right)?;
        if adj.len() != left.len() {
            return Err(Error::SizeGuard {
                what: "adjacency rows",
                size: adj.len() as u64,
                limit: left.len() as u64,
            });
        }
        for row in &adj {
            let sorted = row.windows(2).all(|w| w[0] < w[1]);
            if !sorted || row.last().is_some_and(|&j| j as usize >= right.len()) {
                return Err(Error::Overflow("adjacency index out of order or range"));
            }
        }
        Ok(Self { left, right, adj })
    }

    /// Graph spanned by an edge list; isolated vertices are not represented.
    pub fn from_edges(mut edges: Vec<(u64, u64)>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let mut right: Vec<u64> = edges.iter().map(|&(_, b)| b).collect();
        right.sort_unstable();
        right.dedup();
        let mut left = Vec::new();
        let mut adj: Vec<Vec<u32>> = Vec::new();
        for (a, b) in edges {
            if left.last() != Some(&a) {
                left.push(a);
                adj.push(Vec::new());
            }
            let j = right.binary_search(&b).expect("right vertex present") as u32;
            adj.last_mut().expect("row pushed").push(j);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Self::new(left, right, adj)
    }

    pub fn complete(left: Vec<u64>, right: Vec<u64>) -> Result<Self> {
        let row: Vec<u32> = (0..right.len() as u32).collect();
        let adj = vec![row; left.len()];
        Self::new(left, right, adj)
    }

    pub fn left(&self) -> &[u64] {
        &self.left
    }

    pub fn right(&self) -> &[u64] {
        &self.right
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn neighbor_values(&self, i: usize) -> impl Iterator<Item = u64> + '_ {
        self.adj[i].iter().map(|&j| self.right[j as usize])
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(move |(i, row)| row.iter().map(move |&j| (self.left[i], self.right[j as usize])))
    }
}

/// Optional restrictions on reported grids.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GridConstraints {
    /// Every column must be at least this value.
    pub min_col: Option<u64>,
    /// Every row must be at most every column.
    pub rows_below_cols: bool,
}

/// A complete bipartite subgraph: every row is adjacent to every column.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Biclique {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

struct GridSearch<'g> {
    graph: &'g Bigraph,
    s: usize,
    t: usize,
    /// Per row: neighbour indices that satisfy the column constraints.
    usable: Vec<&'g [u32]>,
    /// Per column: rows (ascending) for which it is usable.
    col_rows: Vec<Vec<u32>>,
}

impl<'g> GridSearch<'g> {
    fn new(graph: &'g Bigraph, s: usize, t: usize, constraints: GridConstraints) -> Self {
        let min_col = constraints.min_col.unwrap_or(0);
        let usable: Vec<&[u32]> = (0..graph.left.len())
            .map(|i| {
                let floor = if constraints.rows_below_cols {
                    min_col.max(graph.left[i])
                } else {
                    min_col
                };
                let first_col = graph.right.partition_point(|&b| b < floor) as u32;
                let row = &graph.adj[i];
                &row[row.partition_point(|&j| j < first_col)..]
            })
            .collect();
        let mut col_rows = vec![Vec::new(); if s > 1 { graph.right.len() } else { 0 }];
        if s > 1 {
            for (i, row) in usable.iter().enumerate() {
                if row.len() >= t {
                    for &j in row.iter() {
                        col_rows[j as usize].push(i as u32);
                    }
                }
            }
        }
        Self {
            graph,
            s,
            t,
            usable,
            col_rows,
        }
    }

    fn starting_at(&self, first: usize) -> Vec<Biclique> {
        let mut out = Vec::new();
        let cols = self.usable[first].to_vec();
        if cols.len() >= self.t {
            let mut rows = vec![first as u32];
            self.extend(&mut rows, &cols, &mut out);
        }
        out
    }

    fn extend(&self, rows: &mut Vec<u32>, cols: &[u32], out: &mut Vec<Biclique>) {
        if rows.len() == self.s {
            out.push(Biclique {
                rows: rows.iter().map(|&i| self.graph.left[i as usize]).collect(),
                cols: cols.iter().map(|&j| self.graph.right[j as usize]).collect(),
            });
            return;
        }
        let last = *rows.last().expect("at least one row");
        let mut hits: Vec<u32> = cols
            .iter()
            .flat_map(|&j| {
                let list = &self.col_rows[j as usize];
                list[list.partition_point(|&i| i <= last)..].iter().copied()
            })
            .collect();
        hits.sort_unstable();
        for run in hits.chunk_by(|x, y| x == y) {
            if run.len() < self.t {
                continue;
            }
            let next = run[0];
            let shared = intersect_sorted(cols, self.usable[next as usize]);
            debug_assert_eq!(shared.len(), run.len());
            rows.push(next);
            self.extend(rows, &shared, out);
            rows.pop();
        }
    }
}

pub(crate) fn intersect_sorted<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// All `K_{s,t}` with `s` rows from the left side and at least `t` columns
/// from the right side.
///
/// One biclique is reported per qualifying row subset, carrying the full
/// common (constrained) neighbourhood as its columns; every `t`-subset of
/// those columns is a grid as well. Output is sorted by rows.
pub fn find_grid(graph: &Bigraph, s: usize, t: usize, constraints: GridConstraints) -> Result<Vec<Biclique>> {
    if s == 0 || t == 0 {
        return Err(Error::BadGridShape { s, t });
    }
    let search = GridSearch::new(graph, s, t, constraints);
    let starts: Vec<usize> = (0..graph.left.len()).filter(|&i| search.usable[i].len() >= t).collect();
    let found: Vec<Vec<Biclique>> = starts.par_iter().map(|&i| search.starting_at(i)).collect();
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize == size)
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
            .collect()
    }

    /// Every (row subset, column subset of size t) pair, by exhaustion.
    fn brute_force(graph: &Bigraph, s: usize, t: usize, c: GridConstraints) -> BTreeSet<(Vec<u64>, Vec<u64>)> {
        let mut out = BTreeSet::new();
        for rows in subsets(graph.left().len(), s) {
            for cols in subsets(graph.right().len(), t) {
                let complete = rows.iter().all(|&i| cols.iter().all(|&j| graph.is_adjacent(i, j)));
                let rv: Vec<u64> = rows.iter().map(|&i| graph.left()[i]).collect();
                let cv: Vec<u64> = cols.iter().map(|&j| graph.right()[j]).collect();
                let min_ok = c.min_col.is_none_or(|m| cv.iter().all(|&v| v >= m));
                let order_ok = !c.rows_below_cols || rv.last() <= cv.first();
                if complete && min_ok && order_ok {
                    out.insert((rv, cv));
                }
            }
        }
        out
    }

    fn expand(found: &[Biclique], t: usize) -> BTreeSet<(Vec<u64>, Vec<u64>)> {
        let mut out = BTreeSet::new();
        for grid in found {
            for pick in subsets(grid.cols.len(), t) {
                out.insert((grid.rows.clone(), pick.iter().map(|&j| grid.cols[j]).collect()));
            }
        }
        out
    }

    #[test]
    fn complete_three_by_seven() {
        let g = Bigraph::complete(vec![1, 2, 3], (10..17).collect()).unwrap();
        let found = find_grid(&g, 3, 7, GridConstraints::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].cols.len(), 7);
        // sub-grids: one witness per row subset
        assert_eq!(find_grid(&g, 2, 3, GridConstraints::default()).unwrap().len(), 3);
    }

    #[test]
    fn edgeless_and_empty() {
        let g = Bigraph::new(vec![1, 2], vec![5], vec![vec![], vec![]]).unwrap();
        assert!(find_grid(&g, 1, 1, GridConstraints::default()).unwrap().is_empty());
        assert!(find_grid(&Bigraph::default(), 2, 2, GridConstraints::default())
            .unwrap()
            .is_empty());
        assert!(find_grid(&g, 0, 1, GridConstraints::default()).is_err());
    }

    #[test]
    fn from_edges_builds_sorted_sides() {
        let g = Bigraph::from_edges(vec![(2, 13), (1, 26), (1, 7), (2, 62), (1, 7)]).unwrap();
        assert_eq!(g.left(), &[1, 2]);
        assert_eq!(g.right(), &[7, 13, 26, 62]);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 7), (1, 26), (2, 13), (2, 62)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn find_grid_is_complete(
            nl in 1usize..=12,
            nr in 1usize..=12,
            density in 0.2f64..0.95,
            seed in any::<u64>(),
            s in 1usize..=3,
            t in 1usize..=3,
            min_col in proptest::option::of(1u64..30),
            rows_below_cols in any::<bool>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let left: Vec<u64> = (1..=nl as u64).map(|i| 2 * i).collect();
            let right: Vec<u64> = (1..=nr as u64).map(|j| 2 * j + 1).collect();
            let adj = (0..nl)
                .map(|_| (0..nr as u32).filter(|_| rng.gen_bool(density)).collect())
                .collect();
            let g = Bigraph::new(left, right, adj).unwrap();
            let c = GridConstraints { min_col, rows_below_cols };
            let found = find_grid(&g, s, t, c).unwrap();
            let rows: Vec<_> = found.iter().map(|b| b.rows.clone()).collect();
            let mut sorted = rows.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(&rows, &sorted);
            prop_assert_eq!(expand(&found, t), brute_force(&g, s, t, c));
        }
    }
}
