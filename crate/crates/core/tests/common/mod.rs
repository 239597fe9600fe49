//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the equivariant reduction or matching code it is compared against.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use incgb::order::{MonomialOrder, Order};
use incgb::poly::Polynomial;
use incgb::symmetry::{IncMap, Index, Monomial, RingSignature, Variable};
use incgb::toric::ExponentMatrix;
use incgb::SmallRational as Q;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_611;

/// Seed from `INCGB_SEED`, or the fixed default.
pub fn seed() -> u64 {
    std::env::var("INCGB_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed().wrapping_add(offset))
}

pub fn x_ring(rows: usize) -> Arc<RingSignature> {
    Arc::new(RingSignature::x_ring(rows))
}

/// A monomial in `x[r,j]`, `r <= rows`, `j <= width`, of degree `1..=deg`.
pub fn random_x_monomial(rng: &mut ChaCha8Rng, rows: usize, width: Index, deg: u32) -> Monomial {
    let d = rng.gen_range(1..=deg);
    let mut m = Monomial::one();
    for _ in 0..d {
        let r = rng.gen_range(0..rows) as u16;
        let j = rng.gen_range(1..=width);
        m = m.mul(&Monomial::var(Variable::raw(r, &[j])));
    }
    m
}

/// `a - b` with `a != b`.
pub fn random_x_binomial(rng: &mut ChaCha8Rng, rows: usize, width: Index, deg: u32) -> Polynomial<Q> {
    loop {
        let a = random_x_monomial(rng, rows, width, deg);
        let b = if rng.gen_bool(0.2) {
            Monomial::one()
        } else {
            random_x_monomial(rng, rows, width, deg)
        };
        if a != b {
            return Polynomial::binomial(a, b);
        }
    }
}

/// Every `ρ g` with `ρ: {1..w(g)} -> {1..n}` increasing.
pub fn shifted_members(g: &Polynomial<Q>, n: usize) -> Vec<Polynomial<Q>> {
    let w = g.width() as usize;
    if w > n {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rho in IncMap::all_into(w, n) {
        let h = g.map_monomials(|m| m.map_indices_monotone(|i| rho.at(i)));
        if seen.insert(format!("{h:?}")) {
            out.push(h);
        }
    }
    out
}

fn lead(p: &Polynomial<Q>, order: &Order) -> (Monomial, Q) {
    p.terms()
        .max_by(|a, b| order.cmp(a.0, b.0))
        .map(|(m, c)| (m.clone(), *c))
        .expect("nonzero")
}

/// Division by a fixed finite list, always using the first divisor of the
/// largest reducible term.
pub fn plain_nf(f: &Polynomial<Q>, gens: &[Polynomial<Q>], order: &Order) -> Polynomial<Q> {
    let leads: Vec<(Monomial, Q)> = gens.iter().map(|g| lead(g, order)).collect();
    let mut work = f.clone();
    let mut rest = Polynomial::zero();
    while !work.is_zero() {
        let (t, c) = lead(&work, order);
        match leads.iter().position(|(l, _)| l.divides(&t)) {
            Some(i) => {
                let cof = t.div(&leads[i].0).expect("divides");
                let q = c / leads[i].1;
                work = work.sub(&gens[i].mul_monomial(&cof).scale(&q));
            }
            None => {
                rest.add_term(t.clone(), c);
                work = work.sub(&Polynomial::term(c, t));
            }
        }
    }
    rest
}

/// Classical S-polynomials of every pair `(σ1 f, σ2 g)` of shifts inside
/// `{1..n}` with non-coprime leads, each divided by every shift of `basis`
/// inside `{1..n + slack}`. Returns the pairs that do not reduce to zero.
pub fn brute_force_failures(
    basis: &[Polynomial<Q>],
    order: &Order,
    n: usize,
    slack: usize,
) -> Vec<Polynomial<Q>> {
    let members: Vec<Vec<Polynomial<Q>>> = basis.iter().map(|g| shifted_members(g, n)).collect();
    let reducers: Vec<Polynomial<Q>> = basis
        .iter()
        .flat_map(|g| shifted_members(g, n + slack))
        .collect();
    let mut bad = Vec::new();
    for (i, fi) in members.iter().enumerate() {
        for fj in members.iter().skip(i) {
            for a in fi {
                for b in fj {
                    if a == b {
                        continue;
                    }
                    let (la, ca) = lead(a, order);
                    let (lb, cb) = lead(b, order);
                    if la.is_coprime(&lb) {
                        continue;
                    }
                    let l = la.lcm(&lb);
                    let s = a
                        .mul_monomial(&l.div(&la).unwrap())
                        .scale(&cb)
                        .sub(&b.mul_monomial(&l.div(&lb).unwrap()).scale(&ca));
                    let r = plain_nf(&s, &reducers, order);
                    if !r.is_zero() {
                        bad.push(r);
                    }
                }
            }
        }
    }
    bad
}

/// Whether some increasing `ρ` into `{1..w(b)}` has `ρ(a) | b`, by
/// enumerating every such map.
pub fn brute_divides(a: &Monomial, b: &Monomial) -> bool {
    let wa = a.width() as usize;
    let wb = b.width() as usize;
    if wa > wb {
        return a.is_one();
    }
    IncMap::all_into(wa, wb)
        .iter()
        .any(|rho| rho.apply(a).unwrap().divides(b))
}

/// Per-block exhaustive search for a cover monomial with exponent matrix `a`:
/// repeatedly removes one tuple of pairwise distinct columns, one per row.
pub fn brute_preimage_exists(a: &[Vec<u32>]) -> bool {
    let total: u32 = a.iter().flatten().sum();
    if total == 0 {
        return true;
    }
    let k = a.len();
    let width = a[0].len();
    let mut cur = a.to_vec();
    fn rec(cur: &mut Vec<Vec<u32>>, row: usize, used: &mut Vec<bool>, k: usize, width: usize) -> bool {
        if row == k {
            return brute_preimage_exists(cur);
        }
        for j in 0..width {
            if !used[j] && cur[row][j] > 0 {
                used[j] = true;
                cur[row][j] -= 1;
                let ok = rec(cur, row + 1, used, k, width);
                cur[row][j] += 1;
                used[j] = false;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(&mut cur, 0, &mut vec![false; width], k, width)
}

/// Whether `b - a` is entrywise nonnegative and has a cover preimage.
pub fn brute_quotient_exists(a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let mut c = b.to_vec();
    for (ra, rc) in a.iter().zip(c.iter_mut()) {
        for (x, y) in ra.iter().zip(rc.iter_mut()) {
            if x > y {
                return false;
            }
            *y -= x;
        }
    }
    brute_preimage_exists(&c)
}

/// All `k x cols` matrices with entries in `0..=max` and row sums at most `max`.
pub fn small_matrices(k: usize, cols: usize, max: u32) -> Vec<Vec<Vec<u32>>> {
    fn rows(cols: usize, max: u32) -> Vec<Vec<u32>> {
        if cols == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..=max {
            for mut rest in rows(cols - 1, max - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let r = rows(cols, max);
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|m| {
                r.iter().map(move |row| {
                    let mut m = m.clone();
                    m.push(row.clone());
                    m
                })
            })
            .collect();
    }
    out
}

/// A random cover monomial: `deg` variables of each orbit, indices in `1..=width`.
pub fn random_cover_monomial(rng: &mut ChaCha8Rng, arities: &[usize], width: Index, deg: &[u32]) -> Monomial {
    let mut m = Monomial::one();
    for (p, (&k, &d)) in arities.iter().zip(deg).enumerate() {
        for _ in 0..d {
            let mut cols: Vec<Index> = (1..=width).collect();
            let mut tuple = Vec::with_capacity(k);
            for _ in 0..k {
                let i = rng.gen_range(0..cols.len());
                tuple.push(cols.remove(i));
            }
            m = m.mul(&Monomial::var(Variable::raw(p as u16, &tuple)));
        }
    }
    m
}

/// Exponent matrix of `π(u)` computed from the variable list.
pub fn matrix_of(u: &Monomial, arities: &[usize], width: usize) -> ExponentMatrix {
    let mut blocks: Vec<Vec<Vec<u32>>> = arities.iter().map(|&k| vec![vec![0; width]; k]).collect();
    for (v, e) in u.factors() {
        for (i, &j) in v.indices.iter().enumerate() {
            blocks[v.orbit as usize][i][j as usize - 1] += e;
        }
    }
    ExponentMatrix::from_blocks(blocks)
}

/// Multiset of leading monomials, as sorted strings, for comparing bases.
pub fn lead_set(basis: &[Polynomial<Q>], order: &Order, ring: &RingSignature) -> Vec<String> {
    let mut v: Vec<String> = basis.iter().map(|g| ring.fmt_monomial(&lead(g, order).0)).collect();
    v.sort();
    v
}

/// Exponent counts per variable, for quick equality checks in messages.
pub fn exponents(m: &Monomial) -> BTreeMap<String, u32> {
    m.factors().iter().map(|(v, e)| (format!("{v:?}"), *e)).collect()
}
