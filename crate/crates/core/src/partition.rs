//! Integer partitions `λ ⊢ n`, hook-length dimensions and standard Young
//! tableaux.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{de, Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::perm::factorial;

/// Largest `n` covered by the memoized dimension tables.
pub const MAX_TABLE_N: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("parts not non-increasing: {parts:?}")));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Length of the first row.
    pub fn first_part(&self) -> usize {
        self.0[0]
    }

    /// `n - λ_1`, the level this isotype contributes to the boolean degree.
    pub fn level(&self) -> usize {
        self.n() - self.first_part()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.0[0];
        Partition((0..cols).map(|c| self.0.iter().filter(|&&r| r > c).count()).collect())
    }

    /// Hook lengths row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.0
            .iter()
            .enumerate()
            .map(|(r, &len)| (0..len).map(|c| (len - c - 1) + (conj.0[c] - r - 1) + 1).collect())
            .collect()
    }

    /// Dimension of the irreducible representation, `n! / Π hooks`.
    pub fn dim(&self) -> u64 {
        let n = self.n();
        if n <= MAX_TABLE_N {
            if let Some(d) = dimension_table(n).get(self) {
                return *d;
            }
        }
        hook_dimension(self)
    }

    /// `C(n, λ_1) · sqrt((n - λ_1)!)`, an upper bound on [`Partition::dim`].
    pub fn dim_upper_bound(&self) -> f64 {
        let n = self.n();
        binomial(n, self.first_part()) as f64 * (factorial(self.level()) as f64).sqrt()
    }

    /// `(row, col)` of every box, zero-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// Rows whose last box can be removed leaving a partition.
    fn removable_rows(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&r| r + 1 == self.0.len() || self.0[r + 1] < self.0[r]).collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::new(Vec::<usize>::deserialize(d)?).map_err(de::Error::custom)
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

fn hook_dimension(lambda: &Partition) -> u64 {
    let n = lambda.n();
    // numerator and denominator as u128 to stay exact up to n = 25 or so
    let num: u128 = (1..=n as u128).product();
    let den: u128 = lambda.hook_lengths().iter().flatten().map(|&h| h as u128).product();
    debug_assert_eq!(num % den, 0);
    (num / den) as u64
}

/// All partitions of `n`, reverse-lexicographic: decreasing `λ_1`, then
/// decreasing later parts. `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    assert!(n >= 1, "partitions need n >= 1");
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_partitions(n, n, &mut current, &mut out);
    out
}

fn fill_partitions(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=rest.min(max_part)).rev() {
        current.push(part);
        fill_partitions(rest - part, part, current, out);
        current.pop();
    }
}

/// Memoized `λ ↦ d_λ` for a given `n`. Built once per `n`, then read-only.
pub fn dimension_table(n: usize) -> &'static HashMap<Partition, u64> {
    static TABLES: [OnceLock<HashMap<Partition, u64>>; MAX_TABLE_N + 1] =
        [const { OnceLock::new() }; MAX_TABLE_N + 1];
    assert!((1..=MAX_TABLE_N).contains(&n), "dimension table supports 1..={MAX_TABLE_N}");
    TABLES[n].get_or_init(|| partitions_of(n).into_iter().map(|l| {
        let d = hook_dimension(&l);
        (l, d)
    }).collect())
}

/// A filling of a Young diagram with `1..=n`, increasing along rows and
/// columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.n();
        let mut seen = vec![false; n + 1];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v > n || seen[v] {
                    return Err(Error::InvalidSpec(format!("bad tableau entry {v}")));
                }
                seen[v] = true;
                if c > 0 && row[c - 1] >= v {
                    return Err(Error::InvalidSpec("rows must increase".into()));
                }
                if r > 0 && rows[r - 1][c] >= v {
                    return Err(Error::InvalidSpec("columns must increase".into()));
                }
            }
        }
        Ok(Self { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// `(row, col)` of entry `v` (one-based entry, zero-based coordinates).
    pub fn position(&self, v: usize) -> (usize, usize) {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&x| x == v) {
                return (r, c);
            }
        }
        panic!("entry {v} not present in tableau");
    }

    /// Content `col - row` of the box holding `v`.
    pub fn content(&self, v: usize) -> isize {
        let (r, c) = self.position(v);
        c as isize - r as isize
    }

    /// The filling with `v` and `v + 1` exchanged; `None` if not standard.
    pub fn swap_entries(&self, v: usize) -> Option<StandardTableau> {
        let mut rows = self.rows.clone();
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                if *x == v {
                    *x = v + 1;
                } else if *x == v + 1 {
                    *x = v;
                }
            }
        }
        StandardTableau::new(rows).ok()
    }
}

/// Standard tableaux of shape `λ` in last-letter order: ordered by the row
/// holding `n` (top row first), ties broken by the row holding `n - 1`, and
/// so on.
pub fn standard_tableaux(lambda: &Partition) -> Vec<StandardTableau> {
    let n = lambda.n();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = lambda.parts().iter().map(|&l| vec![0; l]).collect();
    place_largest(lambda.parts().to_vec(), n, &mut rows, &mut out);
    out.into_iter().map(|rows| StandardTableau { shape: lambda.clone(), rows }).collect()
}

fn place_largest(shape: Vec<usize>, v: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if v == 0 {
        out.push(rows.clone());
        return;
    }
    let lambda = Partition(shape.clone());
    for r in lambda.removable_rows() {
        let c = shape[r] - 1;
        rows[r][c] = v;
        let mut smaller = shape.clone();
        smaller[r] -= 1;
        if smaller[r] == 0 {
            smaller.pop();
        }
        place_largest(smaller, v - 1, rows, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    // Independent count: number of partitions of n with parts <= m.
    fn count_partitions(n: usize, m: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=m.min(n)).map(|p| count_partitions(n - p, p)).sum()
    }

    #[test]
    fn partitions_order_and_counts() {
        assert_eq!(partitions_of(1), vec![part(&[1])]);
        assert_eq!(
            partitions_of(4),
            vec![part(&[4]), part(&[3, 1]), part(&[2, 2]), part(&[2, 1, 1]), part(&[1, 1, 1, 1])]
        );
        assert_eq!(partitions_of(6).len(), 11);
        for n in 1..=12 {
            assert_eq!(partitions_of(n).len(), count_partitions(n, n));
        }
    }

    #[test]
    fn rejects_malformed_partitions() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(part(&[5]).dim(), 1);
        assert_eq!(part(&[1, 1, 1, 1, 1]).dim(), 1);
        assert_eq!(part(&[2, 1]).dim(), 2);
        assert_eq!(part(&[3, 1]).dim(), 3);
        assert_eq!(part(&[2, 2]).dim(), 2);
    }

    #[test]
    fn sum_of_squared_dimensions_is_group_order() {
        for n in 1..=10 {
            let total: u64 = partitions_of(n).iter().map(|l| l.dim() * l.dim()).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn tableaux_count_matches_dimension() {
        for n in 1..=8 {
            for l in partitions_of(n) {
                let tabs = standard_tableaux(&l);
                assert_eq!(tabs.len() as u64, l.dim(), "shape {l}");
                for t in &tabs {
                    assert!(StandardTableau::new(t.rows().to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn small_tableaux() {
        assert_eq!(standard_tableaux(&part(&[4])).len(), 1);
        let t21 = standard_tableaux(&part(&[2, 1]));
        // last-letter order: 3 in the top row first
        assert_eq!(t21[0].rows(), &[vec![1, 3], vec![2]]);
        assert_eq!(t21[1].rows(), &[vec![1, 2], vec![3]]);
        assert_eq!(standard_tableaux(&part(&[2, 2])).len(), 2);
    }

    #[test]
    fn upper_bound_dominates_dimension() {
        assert_eq!(part(&[4]).dim_upper_bound(), 1.0);
        assert_eq!(part(&[3, 1]).dim_upper_bound(), 4.0);
        assert!((part(&[2, 2]).dim_upper_bound() - 6.0 * 2f64.sqrt()).abs() < 1e-12);
        for n in 1..=10 {
            for l in partitions_of(n) {
                assert!(l.dim() as f64 <= l.dim_upper_bound() + 1e-9, "{l}");
            }
        }
    }

    #[test]
    fn first_row_count_matches_partitions_of_remainder() {
        for n in 1..=10 {
            let all = partitions_of(n);
            for i in 1..=n / 2 {
                let with_first = all.iter().filter(|l| l.first_part() == n - i).count();
                assert_eq!(with_first, partitions_of(i).len(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn conjugate_and_hooks() {
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        assert_eq!(part(&[2, 2]).hook_lengths(), vec![vec![3, 2], vec![2, 1]]);
    }
}
