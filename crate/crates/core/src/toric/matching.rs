//! The matching monoid: exponent matrices of `π`-images of cover monomials.

use thiserror::Error;

use crate::symmetry::{Index, Monomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("exponent matrix is not in the matching monoid")]
    NotMember,
    #[error("exponent matrix has {got} blocks, expected {expected}")]
    Shape { expected: usize, got: usize },
}

/// One `k_p × w` nonnegative integer matrix per orbit. Row `i` of block `p`
/// holds the exponents of `z[p,i,1], z[p,i,2], ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    pub blocks: Vec<Vec<Vec<u32>>>,
}

impl ExponentMatrix {
    pub fn zeros(arities: &[usize], width: usize) -> ExponentMatrix {
        ExponentMatrix {
            blocks: arities.iter().map(|&k| vec![vec![0; width]; k]).collect(),
        }
    }

    pub fn from_blocks(blocks: Vec<Vec<Vec<u32>>>) -> ExponentMatrix {
        ExponentMatrix { blocks }
    }

    /// Single-block convenience constructor.
    pub fn single(rows: Vec<Vec<u32>>) -> ExponentMatrix {
        ExponentMatrix { blocks: vec![rows] }
    }

    /// Matrix of `π(u)` for a cover monomial `u`; orbit `p` of the cover is
    /// block `p`.
    pub fn of_cover_monomial(u: &Monomial, arities: &[usize]) -> ExponentMatrix {
        let width = u.width() as usize;
        let mut a = ExponentMatrix::zeros(arities, width);
        for (v, e) in u.factors() {
            for (i, &j) in v.indices.iter().enumerate() {
                a.blocks[v.orbit as usize][i][j as usize - 1] += e;
            }
        }
        a
    }

    pub fn arities(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn width(&self) -> usize {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|r| r.iter().rposition(|&x| x > 0).map_or(0, |p| p + 1))
            .max()
            .unwrap_or(0)
    }

    fn entry(&self, p: usize, i: usize, j: usize) -> u32 {
        self.blocks[p][i].get(j).copied().unwrap_or(0)
    }

    fn ncols(&self, p: usize) -> usize {
        self.blocks[p].iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Row sums of block `p`.
    pub fn row_sums(&self, p: usize) -> Vec<u32> {
        self.blocks[p].iter().map(|r| r.iter().sum()).collect()
    }

    /// Column sums of block `p`, over `width` columns.
    pub fn col_sums(&self, p: usize, width: usize) -> Vec<u32> {
        (0..width)
            .map(|j| (0..self.blocks[p].len()).map(|i| self.entry(p, i, j)).sum())
            .collect()
    }

    /// The common row sum of block `p`, if the rows agree.
    pub fn degree(&self, p: usize) -> Option<u32> {
        let r = self.row_sums(p);
        match r.first() {
            None => Some(0),
            Some(&d) if r.iter().all(|&x| x == d) => Some(d),
            _ => None,
        }
    }

    /// `self - other`, entrywise; `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &ExponentMatrix) -> Option<ExponentMatrix> {
        let mut out = self.clone();
        for (p, block) in other.blocks.iter().enumerate() {
            for (i, row) in block.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let r = &mut out.blocks[p][i];
                    if r.len() <= j {
                        r.resize(j + 1, 0);
                    }
                    r[j] = r[j].checked_sub(x)?;
                }
            }
        }
        Some(out)
    }

    pub fn add(&self, other: &ExponentMatrix) -> ExponentMatrix {
        let mut out = self.clone();
        for (p, block) in other.blocks.iter().enumerate() {
            for (i, row) in block.iter().enumerate() {
                let r = &mut out.blocks[p][i];
                if r.len() < row.len() {
                    r.resize(row.len(), 0);
                }
                for (j, &x) in row.iter().enumerate() {
                    r[j] += x;
                }
            }
        }
        out
    }

    /// The `z` monomial `z^A`, with `z[p,i]` rows numbered consecutively.
    pub fn to_z_monomial(&self) -> Monomial {
        let mut row = 0u16;
        let mut factors = Vec::new();
        for block in &self.blocks {
            for r in block {
                for (j, &e) in r.iter().enumerate() {
                    factors.push((Variable::raw(row, &[j as Index + 1]), e));
                }
                row += 1;
            }
        }
        Monomial::from_factors(factors)
    }
}

/// Equal row sums `d_p` and column sums at most `d_p`, in every block.
pub fn mm_member(a: &ExponentMatrix) -> bool {
    (0..a.blocks.len()).all(|p| match a.degree(p) {
        Some(d) => a.col_sums(p, a.ncols(p)).iter().all(|&c| c <= d),
        None => false,
    })
}

/// Whether `z^A` divides `z^B` inside the matching monoid.
pub fn mm_divides(a: &ExponentMatrix, b: &ExponentMatrix) -> Result<bool, MatchingError> {
    if a.blocks.len() != b.blocks.len() {
        return Err(MatchingError::Shape {
            expected: a.blocks.len(),
            got: b.blocks.len(),
        });
    }
    if !mm_member(a) || !mm_member(b) {
        return Err(MatchingError::NotMember);
    }
    let Some(diff) = b.checked_sub(a) else {
        return Ok(false);
    };
    for p in 0..a.blocks.len() {
        let slack = b.degree(p).unwrap_or(0) - a.degree(p).unwrap_or(0);
        if diff.col_sums(p, diff.ncols(p)).iter().any(|&c| c > slack) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Entrywise L1 distance.
pub fn mm_norm_distance(a: &ExponentMatrix, b: &ExponentMatrix) -> u64 {
    let blocks = a.blocks.len().max(b.blocks.len());
    let mut total = 0u64;
    for p in 0..blocks {
        let rows = a.blocks.get(p).map_or(0, |x| x.len()).max(b.blocks.get(p).map_or(0, |x| x.len()));
        let cols = a
            .blocks
            .get(p)
            .map_or(0, |_| a.ncols(p))
            .max(b.blocks.get(p).map_or(0, |_| b.ncols(p)));
        for i in 0..rows {
            for j in 0..cols {
                let x = a.blocks.get(p).and_then(|bl| bl.get(i)).and_then(|r| r.get(j)).copied().unwrap_or(0);
                let y = b.blocks.get(p).and_then(|bl| bl.get(i)).and_then(|r| r.get(j)).copied().unwrap_or(0);
                total += x.abs_diff(y) as u64;
            }
        }
    }
    total
}

/// Kuhn augmenting path from `u` (left side) in `adj`.
fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none_or(|w| augment(w, adj, seen, match_right)) {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

/// Whether every left vertex can be matched.
fn saturates(adj: &[Vec<usize>], nright: usize) -> bool {
    let mut match_right = vec![None; nright];
    (0..adj.len()).all(|u| {
        let mut seen = vec![false; nright];
        augment(u, adj, &mut seen, &mut match_right)
    })
}

/// Lexicographically smallest system of distinct representatives of one
/// block: row `i` gets a column with a positive entry, and every column
/// whose sum equals the row sum is used.
fn extract_sdr(block: &[Vec<u32>], ncols: usize, d: u32) -> Option<Vec<usize>> {
    let k = block.len();
    let entry = |i: usize, j: usize| block[i].get(j).copied().unwrap_or(0);
    let tight: Vec<bool> = (0..ncols)
        .map(|j| (0..k).map(|i| entry(i, j)).sum::<u32>() == d)
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    // The remaining rows must be matchable into unused columns, and the
    // uncovered tight columns into the remaining rows. By the
    // Mendelsohn-Dulmage theorem both together give one matching doing both.
    let feasible = |chosen: &[usize]| -> bool {
        let rows: Vec<usize> = (chosen.len()..k).collect();
        let free: Vec<usize> = (0..ncols).filter(|j| !chosen.contains(j)).collect();
        let row_adj: Vec<Vec<usize>> = rows
            .iter()
            .map(|&i| {
                free.iter()
                    .enumerate()
                    .filter(|(_, &j)| entry(i, j) > 0)
                    .map(|(t, _)| t)
                    .collect()
            })
            .collect();
        if !saturates(&row_adj, free.len()) {
            return false;
        }
        let tight_free: Vec<usize> = free.iter().copied().filter(|&j| tight[j]).collect();
        let col_adj: Vec<Vec<usize>> = tight_free
            .iter()
            .map(|&j| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, &i)| entry(i, j) > 0)
                    .map(|(t, _)| t)
                    .collect()
            })
            .collect();
        saturates(&col_adj, rows.len())
    };
    if !feasible(&chosen) {
        return None;
    }
    for i in 0..k {
        let pick = (0..ncols).find(|&j| {
            if chosen.contains(&j) || entry(i, j) == 0 {
                return false;
            }
            chosen.push(j);
            let ok = feasible(&chosen);
            chosen.pop();
            ok
        })?;
        chosen.push(pick);
    }
    Some(chosen)
}

/// A cover monomial `u` with `π(u) = z^A`, built from `d_p` successive
/// systems of distinct representatives per block.
pub fn mm_preimage(a: &ExponentMatrix) -> Result<Monomial, MatchingError> {
    if !mm_member(a) {
        return Err(MatchingError::NotMember);
    }
    let mut factors = Vec::new();
    for (p, block) in a.blocks.iter().enumerate() {
        let d = a.degree(p).expect("member");
        let ncols = a.ncols(p);
        let mut rest: Vec<Vec<u32>> = block.iter().map(|r| {
            let mut r = r.clone();
            r.resize(ncols, 0);
            r
        }).collect();
        for left in (1..=d).rev() {
            let cols = extract_sdr(&rest, ncols, left).ok_or(MatchingError::NotMember)?;
            for (i, &j) in cols.iter().enumerate() {
                rest[i][j] -= 1;
            }
            let idx: Vec<Index> = cols.iter().map(|&j| j as Index + 1).collect();
            factors.push((Variable::raw(p as u16, &idx), 1));
        }
    }
    Ok(Monomial::from_factors(factors))
}

/// A lift `v` of `z^B` close to `u`, together with the kept factor `u'` of
/// `u` (so `v = u' · v''`).
///
/// The variables of each orbit of `u` are scanned in ascending variable
/// order. Position `j` is dropped if `j > m`, if it pushes an entry of the
/// running matrix above `B`, or if some column `l` outside its tuple has
/// `j - (A_j)_{+l} > m - B_{+l}`. What is kept divides `z^B` in the
/// matching monoid, and the rest of `z^B` is filled by [`mm_preimage`].
pub fn lift_with_kept(u: &Monomial, b: &ExponentMatrix) -> Result<(Monomial, Monomial), MatchingError> {
    if !mm_member(b) {
        return Err(MatchingError::NotMember);
    }
    let arities = b.arities();
    let width = (u.width() as usize).max(b.width());
    let mut kept = Vec::new();
    for (p, &k) in arities.iter().enumerate() {
        let m = b.degree(p).expect("member") as usize;
        let bcols = b.col_sums(p, width);
        let mut a = vec![vec![0u32; width]; k];
        let mut acols = vec![0u32; width];
        let seq: Vec<Variable> = u
            .variables()
            .into_iter()
            .filter(|v| v.orbit as usize == p)
            .collect();
        for (pos, v) in seq.iter().enumerate() {
            let j = pos + 1;
            for (i, &c) in v.indices.iter().enumerate() {
                a[i][c as usize - 1] += 1;
                acols[c as usize - 1] += 1;
            }
            if j > m {
                continue;
            }
            let over = v
                .indices
                .iter()
                .enumerate()
                .any(|(i, &c)| a[i][c as usize - 1] > b.entry(p, i, c as usize - 1));
            if over {
                continue;
            }
            let deficit = (0..width).any(|l| {
                !v.indices.contains(&(l as Index + 1))
                    && (j as i64 - acols[l] as i64) > (m as i64 - bcols[l] as i64)
            });
            if deficit {
                continue;
            }
            kept.push((v.clone(), 1));
        }
    }
    let kept = Monomial::from_factors(kept);
    let a_kept = ExponentMatrix::of_cover_monomial(&kept, &arities);
    let rest = b.checked_sub(&a_kept).ok_or(MatchingError::NotMember)?;
    let fill = mm_preimage(&rest)?;
    Ok((kept.mul(&fill), kept))
}

pub fn lift(u: &Monomial, b: &ExponentMatrix) -> Result<Monomial, MatchingError> {
    lift_with_kept(u, b).map(|(v, _)| v)
}

/// Total degree of the binomial `(u - v) / gcd(u, v)`.
pub fn binomial_gap(u: &Monomial, v: &Monomial) -> u32 {
    let g = u.gcd(v);
    let du = u.div(&g).expect("gcd divides").degree();
    let dv = v.div(&g).expect("gcd divides").degree();
    du.max(dv)
}
