//! Inc(N)-respecting monomial orders and an exhaustive axiom checker.
//!
//! All orders share the variable order of [`Variable`]'s `Ord`. The toric
//! orders compare images under the matching map `π` first (graded lex on the
//! `z` variables) and break ties inside a fiber by graded reverse lex. On
//! rings whose orbits carry nontrivial stabilizers, the toric orders are
//! transported from the free cover: each variable is replaced by the smallest
//! cover variable over it before comparing.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::symmetry::{
    canonical_form, Block, IncMap, Index, IndexTuple, Monomial, RingKind, RingSignature,
    Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("monomial does not belong to the ring the order was built for")]
    RingMismatch,
    #[error("order {kind} cannot be used on a {ring:?} ring")]
    Unsupported { kind: OrderKind, ring: RingKind },
    #[error("unknown order name {0:?}")]
    UnknownName(String),
}

/// Something that totally orders monomials.
pub trait MonomialOrder: Send + Sync {
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering;

    /// `table[i][j] = cmp(monos[i], monos[j])`.
    fn cmp_table(&self, monos: &[Monomial]) -> Vec<Vec<Ordering>> {
        monos
            .par_iter()
            .map(|a| monos.iter().map(|b| self.cmp(a, b)).collect())
            .collect()
    }

    /// `w(a) < w(b)` implies `a < b`.
    fn is_width_order(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GradedLex,
    GradedRevLex,
    /// Graded reverse lex; the tie-break used inside `π`-fibers.
    FiberRevLex,
    /// `π`-images under graded lex on `[Z]`, ties by [`OrderKind::FiberRevLex`].
    HybridToric,
    /// X-block first (graded lex on `[X]`), then the hybrid order on the Y block.
    Elimination,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderKind::Lex => "lex",
            OrderKind::GradedLex => "grlex",
            OrderKind::GradedRevLex => "grevlex",
            OrderKind::FiberRevLex => "fiber-revlex",
            OrderKind::HybridToric => "hybrid-toric",
            OrderKind::Elimination => "elimination",
        };
        f.write_str(s)
    }
}

impl FromStr for OrderKind {
    type Err = OrderError;
    fn from_str(s: &str) -> Result<OrderKind, OrderError> {
        Ok(match s {
            "lex" => OrderKind::Lex,
            "grlex" => OrderKind::GradedLex,
            "grevlex" => OrderKind::GradedRevLex,
            "fiber-revlex" => OrderKind::FiberRevLex,
            "hybrid-toric" => OrderKind::HybridToric,
            "elimination" => OrderKind::Elimination,
            _ => return Err(OrderError::UnknownName(s.to_string())),
        })
    }
}

/// A monomial order bound to a ring.
#[derive(Debug, Clone)]
pub struct Order {
    kind: OrderKind,
    ring: Arc<RingSignature>,
    /// Per orbit: id of the first `z` row of its `π`-image (Y block only).
    z_offset: Vec<u16>,
    /// Elimination only: images of the Y-orbit representatives in the X
    /// block. When set, monomials are first compared by their image.
    grading: Option<Arc<Vec<Monomial>>>,
}

impl Order {
    pub fn new(kind: OrderKind, ring: Arc<RingSignature>) -> Result<Order, OrderError> {
        let ok = match kind {
            OrderKind::HybridToric => matches!(ring.kind(), RingKind::Y | RingKind::YPrime),
            OrderKind::Elimination => ring.kind() == RingKind::Product,
            _ => true,
        };
        if !ok {
            return Err(OrderError::Unsupported {
                kind,
                ring: ring.kind(),
            });
        }
        let mut z_offset = Vec::with_capacity(ring.num_orbits());
        let mut next = 0u16;
        for o in ring.orbits() {
            z_offset.push(next);
            if o.block == Block::Y {
                next += o.arity as u16;
            }
        }
        Ok(Order {
            kind,
            ring,
            z_offset,
            grading: None,
        })
    }

    /// The elimination order refined by the grading `y -> image`: monomials
    /// are compared by the graded lex order of their images in `[X]` first.
    /// On ideals homogeneous for this grading it eliminates the X block.
    pub fn graded_elimination(ring: Arc<RingSignature>, images: Vec<Monomial>) -> Result<Order, OrderError> {
        let mut o = Order::new(OrderKind::Elimination, ring)?;
        o.grading = Some(Arc::new(images));
        Ok(o)
    }

    /// The image of `m` under the grading, if one is set.
    pub fn grade(&self, m: &Monomial) -> Option<Monomial> {
        let images = self.grading.as_ref()?;
        let mut out = Monomial::one();
        let mut xs = Vec::new();
        for (v, e) in m.factors() {
            if self.is_x(v) {
                xs.push((v.clone(), *e));
                continue;
            }
            let img = Monomial::from_factors(images[v.orbit as usize].factors().iter().map(|(x, ex)| {
                (Variable::raw(x.orbit, &[v.indices[x.indices[0] as usize - 1]]), ex * e)
            }));
            out = out.mul(&img);
        }
        Some(out.mul(&Monomial::from_factors(xs)))
    }

    /// `toric` picks the hybrid order on tuple rings and the elimination
    /// order on graph rings.
    pub fn from_name(name: &str, ring: Arc<RingSignature>) -> Result<Order, OrderError> {
        let kind = if name == "toric" {
            if ring.kind() == RingKind::Product {
                OrderKind::Elimination
            } else {
                OrderKind::HybridToric
            }
        } else {
            name.parse()?
        };
        Order::new(kind, ring)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn ring(&self) -> &Arc<RingSignature> {
        &self.ring
    }

    /// Checked comparison.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, OrderError> {
        if !self.ring.contains(a) || !self.ring.contains(b) {
            return Err(OrderError::RingMismatch);
        }
        Ok(MonomialOrder::cmp(self, a, b))
    }

    /// The `π`-image of the Y-block part of `m`, as a monomial in the `z`
    /// ring (orbit ids are row ids there).
    pub fn pi_image(&self, m: &Monomial) -> Monomial {
        Monomial::from_factors(m.factors().iter().flat_map(|(v, e)| {
            let base = self.z_offset[v.orbit as usize];
            v.indices
                .iter()
                .enumerate()
                .map(move |(i, &j)| (Variable::raw(base + i as u16, &[j]), *e))
        }))
    }

    /// Smallest cover variable over `v` under the hybrid order. Identity on
    /// trivial-stabilizer orbits.
    pub fn nu_variable(&self, v: &Variable) -> Variable {
        let spec = self.ring.orbit(v.orbit);
        if spec.has_trivial_stabilizer() {
            return v.clone();
        }
        spec.class_members(&v.indices)
            .into_iter()
            .map(|t: IndexTuple| Variable {
                orbit: v.orbit,
                indices: t,
            })
            .min_by_key(|v| {
                let mut key = OrderKey::new();
                self.hybrid_key_raw(&Monomial::var(v.clone()), &mut key);
                key
            })
            .expect("class is nonempty")
    }

    /// The order-minimal right inverse of the quotient map from the cover,
    /// extended multiplicatively. The result is a cover monomial whose tuples
    /// need not be canonical for this ring.
    pub fn nu(&self, m: &Monomial) -> Monomial {
        if self.ring.has_trivial_stabilizers() {
            return m.clone();
        }
        Monomial::from_factors(m.factors().iter().map(|(v, e)| (self.nu_variable(v), *e)))
    }

    fn hybrid_key_raw(&self, m: &Monomial, key: &mut OrderKey) {
        let z = self.pi_image(m);
        push_grlex(&z, key);
        push_grevlex(m, key);
    }

    /// A sort key: `cmp(a, b)` is the comparison of `sort_key(a)` and
    /// `sort_key(b)` as sequences.
    pub fn sort_key(&self, m: &Monomial) -> OrderKey {
        let mut key = OrderKey::with_capacity(2 * m.factors().len() + 4);
        match self.kind {
            OrderKind::Lex => push_lex(m, &mut key),
            OrderKind::GradedLex => push_grlex(m, &mut key),
            OrderKind::GradedRevLex | OrderKind::FiberRevLex => push_grevlex(m, &mut key),
            OrderKind::HybridToric => self.hybrid_key_raw(&self.nu(m), &mut key),
            OrderKind::Elimination => {
                if let Some(g) = self.grade(m) {
                    push_grlex(&g, &mut key);
                }
                let (y, x) = self.split_blocks(m);
                push_grlex(&x, &mut key);
                self.hybrid_key_raw(&self.nu(&y), &mut key);
            }
        }
        key
    }

    fn is_x(&self, v: &Variable) -> bool {
        self.ring.orbit(v.orbit).block == Block::X
    }

    /// Splits a graph-ring monomial into its (Y part, X part).
    pub fn split_blocks(&self, m: &Monomial) -> (Monomial, Monomial) {
        let (x, y) = m.split(|v| self.is_x(v));
        (y, x)
    }

    /// The order restricted to monomials in `vars` (sorted ascending) as a
    /// weight matrix: `a < b` iff the vector of form values of `a` is
    /// lexicographically smaller. Forms are sparse rows `(var position,
    /// weight)`. `None` when `ν` is not the identity, which is not linear.
    pub fn linear_forms(&self, vars: &[Variable]) -> Option<Vec<Vec<(usize, i64)>>> {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        let all: Vec<usize> = (0..vars.len()).collect();
        let mut forms = Vec::new();
        let lex = |forms: &mut Vec<Vec<(usize, i64)>>, idx: &[usize]| {
            forms.extend(idx.iter().rev().map(|&i| vec![(i, 1)]));
        };
        let deg = |forms: &mut Vec<Vec<(usize, i64)>>, idx: &[usize]| {
            forms.push(idx.iter().map(|&i| (i, 1)).collect());
        };
        let revlex = |forms: &mut Vec<Vec<(usize, i64)>>, idx: &[usize]| {
            forms.extend(idx.iter().map(|&i| vec![(i, -1)]));
        };
        // grlex on the images of a linear substitution `var -> Σ w · target`
        let image_grlex = |forms: &mut Vec<Vec<(usize, i64)>>, images: &[(usize, Monomial)]| {
            let mut targets: std::collections::BTreeMap<Variable, Vec<(usize, i64)>> = Default::default();
            let mut total: Vec<(usize, i64)> = Vec::new();
            for (i, img) in images {
                if img.degree() > 0 {
                    total.push((*i, img.degree() as i64));
                }
                for (t, e) in img.factors() {
                    targets.entry(t.clone()).or_default().push((*i, *e as i64));
                }
            }
            forms.push(total);
            forms.extend(targets.into_values().rev());
        };
        match self.kind {
            OrderKind::Lex => lex(&mut forms, &all),
            OrderKind::GradedLex => {
                deg(&mut forms, &all);
                lex(&mut forms, &all);
            }
            OrderKind::GradedRevLex | OrderKind::FiberRevLex => {
                deg(&mut forms, &all);
                revlex(&mut forms, &all);
            }
            OrderKind::HybridToric | OrderKind::Elimination => {
                let ys: Vec<usize> = all.iter().copied().filter(|&i| !self.is_x(&vars[i])).collect();
                let xs: Vec<usize> = all.iter().copied().filter(|&i| self.is_x(&vars[i])).collect();
                if ys.iter().any(|&i| !self.ring.orbit(vars[i].orbit).has_trivial_stabilizer()) {
                    return None;
                }
                if self.kind == OrderKind::Elimination {
                    if self.grading.is_some() {
                        let images: Vec<(usize, Monomial)> = all
                            .iter()
                            .map(|&i| (i, self.grade(&Monomial::var(vars[i].clone())).expect("graded")))
                            .collect();
                        image_grlex(&mut forms, &images);
                    }
                    deg(&mut forms, &xs);
                    lex(&mut forms, &xs);
                }
                let pis: Vec<(usize, Monomial)> = ys
                    .iter()
                    .map(|&i| (i, self.pi_image(&Monomial::var(vars[i].clone()))))
                    .collect();
                image_grlex(&mut forms, &pis);
                deg(&mut forms, &ys);
                revlex(&mut forms, &ys);
            }
        }
        Some(forms)
    }
}

impl MonomialOrder for Order {
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => lex(a, b),
            OrderKind::GradedLex => grlex(a, b),
            OrderKind::GradedRevLex | OrderKind::FiberRevLex => grevlex(a, b),
            _ => self.sort_key(a).cmp(&self.sort_key(b)),
        }
    }

    fn cmp_table(&self, monos: &[Monomial]) -> Vec<Vec<Ordering>> {
        if matches!(self.kind, OrderKind::HybridToric | OrderKind::Elimination) {
            let keys: Vec<OrderKey> = monos.par_iter().map(|m| self.sort_key(m)).collect();
            keys.par_iter().map(|a| keys.iter().map(|b| a.cmp(b)).collect()).collect()
        } else {
            monos
                .par_iter()
                .map(|a| monos.iter().map(|b| MonomialOrder::cmp(self, a, b)).collect())
                .collect()
        }
    }

    fn is_width_order(&self) -> bool {
        self.kind == OrderKind::Lex
    }
}

/// Sequence key of a monomial under an [`Order`].
pub type OrderKey = Vec<u128>;

const LEX_END: u128 = 0;
const REVLEX_END: u128 = u128::MAX;

fn push_lex(m: &Monomial, key: &mut OrderKey) {
    key.extend(
        m.factors()
            .iter()
            .rev()
            .map(|(v, e)| ((v.packed() as u128) << 32) | *e as u128),
    );
    key.push(LEX_END);
}

fn push_grlex(m: &Monomial, key: &mut OrderKey) {
    key.push(m.degree() as u128);
    push_lex(m, key);
}

fn push_grevlex(m: &Monomial, key: &mut OrderKey) {
    key.push(m.degree() as u128);
    key.extend(
        m.factors()
            .iter()
            .map(|(v, e)| ((v.packed() as u128) << 32) | (u32::MAX - *e) as u128),
    );
    key.push(REVLEX_END);
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// Lex: the larger monomial has the larger exponent at the largest variable
/// where the two differ.
pub fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let mut ia = a.factors().iter().rev();
    let mut ib = b.factors().iter().rev();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => continue,
                    o => return o,
                },
                o => return o,
            },
        }
    }
}

pub fn grlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| lex(a, b))
}

/// Graded reverse lex: after degree, the smaller monomial has the larger
/// exponent at the smallest variable where the two differ.
pub fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| revlex(a, b))
}

fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    let mut ia = a.factors().iter();
    let mut ib = b.factors().iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                // `a` carries the smaller variable, which `b` lacks.
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                },
            },
        }
    }
}

/// A violated order axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// `cmp(a, b)` and `cmp(b, a)` disagree, or distinct monomials compare equal.
    NotAntisymmetric { a: Monomial, b: Monomial },
    /// `a < b < c < a`.
    NotTransitive { a: Monomial, b: Monomial, c: Monomial },
    /// `a < b` but not `ac < bc`.
    NotMultiplicative { a: Monomial, b: Monomial, c: Monomial },
    /// `a < b` but not `ρa < ρb`.
    NotIncRespecting { a: Monomial, b: Monomial, rho: IncMap },
    /// `ρ(a)` divides `b` but not `a < b`.
    NotRefining { a: Monomial, b: Monomial, rho: IncMap },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderReport {
    pub monomials: usize,
    pub inc_maps: usize,
    pub counterexample: Option<Counterexample>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// All canonical variables of `ring` with width at most `width_cap`, sorted.
pub fn variables_up_to_width(ring: &RingSignature, width_cap: usize) -> Vec<Variable> {
    let mut out = Vec::new();
    for (o, spec) in ring.orbits().iter().enumerate() {
        let mut tuples = Vec::new();
        let mut cur: Vec<Index> = Vec::new();
        distinct_tuples(spec.arity, width_cap as Index, &mut cur, &mut tuples);
        for t in tuples {
            let v = Variable {
                orbit: o as u16,
                indices: spec.canonical_tuple(&t),
            };
            out.push(v);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn distinct_tuples(k: usize, n: Index, cur: &mut Vec<Index>, out: &mut Vec<Vec<Index>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in 1..=n {
        if !cur.contains(&i) {
            cur.push(i);
            distinct_tuples(k, n, cur, out);
            cur.pop();
        }
    }
}

/// All monomials over `vars` of degree at most `deg_cap`, the unit included.
pub fn monomials_up_to(vars: &[Variable], deg_cap: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..deg_cap {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let n = m.mul(&Monomial::var(v.clone()));
                out.push(n.clone());
                next.push((n, i));
            }
        }
        frontier = next;
    }
    out
}

/// Exhaustively checks the order axioms on all monomials of width at most
/// `width_cap` and degree at most `deg_cap`, with every increasing map
/// `{1..width_cap} -> {1..width_cap+2}`.
///
/// Checked: antisymmetry and totality, transitivity, multiplicativity (by
/// single variables, which implies it for all cofactors), compatibility with
/// the increasing maps, and refinement of equivariant divisibility.
pub fn validate_order<O: MonomialOrder + ?Sized>(
    ring: &RingSignature,
    order: &O,
    width_cap: usize,
    deg_cap: u32,
) -> OrderReport {
    let vars = variables_up_to_width(ring, width_cap);
    let monos = monomials_up_to(&vars, deg_cap);
    let maps: Vec<IncMap> = IncMap::all_into(width_cap, width_cap + 2)
        .into_iter()
        .filter(|r| *r != IncMap::identity(width_cap))
        .collect();
    let n = monos.len();
    let report = |c: Option<Counterexample>| OrderReport {
        monomials: n,
        inc_maps: maps.len(),
        counterexample: c,
    };

    let table = order.cmp_table(&monos);

    for i in 0..n {
        for j in i..n {
            let bad = if i == j {
                table[i][j] != Ordering::Equal
            } else {
                table[i][j] == Ordering::Equal || table[i][j] != table[j][i].reverse()
            };
            if bad {
                return report(Some(Counterexample::NotAntisymmetric {
                    a: monos[i].clone(),
                    b: monos[j].clone(),
                }));
            }
        }
    }

    // A tournament is transitive iff `u < v` always implies score(u) < score(v);
    // otherwise some w below u but above v closes a 3-cycle.
    let score: Vec<usize> = table
        .iter()
        .map(|row| row.iter().filter(|o| **o == Ordering::Greater).count())
        .collect();
    for u in 0..n {
        for v in 0..n {
            if table[u][v] == Ordering::Less && score[u] >= score[v] {
                let w = (0..n)
                    .find(|&w| table[w][u] == Ordering::Less && table[w][v] == Ordering::Greater)
                    .expect("tournament 3-cycle");
                return report(Some(Counterexample::NotTransitive {
                    a: monos[w].clone(),
                    b: monos[u].clone(),
                    c: monos[v].clone(),
                }));
            }
        }
    }

    let first = |found: Vec<Option<Counterexample>>| found.into_iter().flatten().next();

    // `score` is now the rank in a strict total order, so every `a < b` in the
    // set is a chain of rank-adjacent steps.
    let mut by_rank = vec![0usize; n];
    for (i, &r) in score.iter().enumerate() {
        by_rank[r] = i;
    }
    let steps: Vec<(usize, usize)> = by_rank.windows(2).map(|w| (w[0], w[1])).collect();

    let mult: Vec<Option<Counterexample>> = steps
        .par_iter()
        .map(|&(i, j)| {
            vars.iter().find_map(|v| {
                let c = Monomial::var(v.clone());
                (order.cmp(&monos[i].mul(&c), &monos[j].mul(&c)) != Ordering::Less).then(|| {
                    Counterexample::NotMultiplicative {
                        a: monos[i].clone(),
                        b: monos[j].clone(),
                        c,
                    }
                })
            })
        })
        .collect();
    if let Some(c) = first(mult) {
        return report(Some(c));
    }

    let inc: Vec<Option<Counterexample>> = steps
        .par_iter()
        .map(|&(i, j)| {
            maps.iter().find_map(|r| {
                let (a, b) = (r.apply(&monos[i]).ok()?, r.apply(&monos[j]).ok()?);
                (order.cmp(&a, &b) != Ordering::Less).then(|| Counterexample::NotIncRespecting {
                    a: monos[i].clone(),
                    b: monos[j].clone(),
                    rho: r.clone(),
                })
            })
        })
        .collect();
    if let Some(c) = first(inc) {
        return report(Some(c));
    }

    // Every pair with `ρ(a) | b` inside the set is `b = ρ(a) c` for some
    // `ρ: [w(a)] -> [width_cap]` and some `c` in the set.
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let refine: Vec<Option<Counterexample>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = &monos[i];
            for rho in IncMap::all_into(a.width() as usize, width_cap) {
                let image = rho.apply(a).ok()?;
                for c in monos.iter().filter(|c| c.degree() + a.degree() <= deg_cap) {
                    let Some(&j) = index.get(&image.mul(c)) else { continue };
                    if i != j && table[i][j] != Ordering::Less {
                        return Some(Counterexample::NotRefining {
                            a: a.clone(),
                            b: monos[j].clone(),
                            rho,
                        });
                    }
                }
            }
            None
        })
        .collect();
    report(first(refine))
}

/// Canonical (support-compressed) form used to compare leading monomials up
/// to shifts.
pub fn canonical_monomial(m: &Monomial) -> Monomial {
    canonical_form(m).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_ring() -> Arc<RingSignature> {
        Arc::new(RingSignature::x_ring(1))
    }

    fn xm(parts: &[(Index, u32)]) -> Monomial {
        Monomial::from_factors(parts.iter().map(|&(j, e)| (Variable::raw(0, &[j]), e)))
    }

    fn ym(parts: &[(&[Index], u32)]) -> Monomial {
        Monomial::from_factors(parts.iter().map(|&(t, e)| (Variable::raw(0, t), e)))
    }

    #[test]
    fn lex_increasing_variables() {
        let o = Order::new(OrderKind::Lex, x_ring()).unwrap();
        assert_eq!(o.compare(&xm(&[(1, 1)]), &xm(&[(2, 1)])), Ok(Ordering::Less));
        assert_eq!(o.compare(&xm(&[(1, 5)]), &xm(&[(2, 1)])), Ok(Ordering::Less));
        assert!(o.is_width_order());
    }

    #[test]
    fn grevlex_degree_tie() {
        let o = Order::new(OrderKind::GradedRevLex, x_ring()).unwrap();
        // x1 x3 carries the smallest differing variable, so it is smaller.
        assert_eq!(
            o.compare(&xm(&[(1, 1), (3, 1)]), &xm(&[(2, 2)])),
            Ok(Ordering::Less)
        );
        let g = Order::new(OrderKind::GradedLex, x_ring()).unwrap();
        assert_eq!(
            g.compare(&xm(&[(1, 1), (3, 1)]), &xm(&[(2, 2)])),
            Ok(Ordering::Greater)
        );
    }

    #[test]
    fn ring_mismatch() {
        let o = Order::new(OrderKind::Lex, x_ring()).unwrap();
        let bad = Monomial::var(Variable::raw(3, &[1]));
        assert_eq!(o.compare(&bad, &xm(&[])), Err(OrderError::RingMismatch));
        assert!(Order::new(OrderKind::HybridToric, x_ring()).is_err());
    }

    #[test]
    fn hybrid_breaks_fiber_ties() {
        let ring = Arc::new(RingSignature::yprime(&[("y", 2)]));
        let o = Order::new(OrderKind::HybridToric, ring).unwrap();
        let a = ym(&[(&[1, 2], 1)]);
        let b = ym(&[(&[2, 1], 1)]);
        // Different π-images: z[1,2,2] is the largest z variable and sits in π(a).
        assert_eq!(o.compare(&a, &b), Ok(Ordering::Greater));
        // Same fiber: y(1,2) y(3,4) and y(1,4) y(3,2).
        let u = ym(&[(&[1, 2], 1), (&[3, 4], 1)]);
        let v = ym(&[(&[1, 4], 1), (&[3, 2], 1)]);
        assert_eq!(o.pi_image(&u), o.pi_image(&v));
        assert_eq!(MonomialOrder::cmp(&o, &u, &v), grevlex(&u, &v));
    }

    #[test]
    fn shipped_small_orders_pass() {
        for kind in [OrderKind::Lex, OrderKind::GradedLex, OrderKind::GradedRevLex] {
            let o = Order::new(kind, x_ring()).unwrap();
            let r = validate_order(o.ring(), &o, 3, 3);
            assert!(r.passed(), "{kind}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn keys_agree_with_comparators() {
        let ring = x_ring();
        let vars = variables_up_to_width(&ring, 3);
        let monos = monomials_up_to(&vars, 3);
        for kind in [OrderKind::Lex, OrderKind::GradedLex, OrderKind::GradedRevLex] {
            let o = Order::new(kind, ring.clone()).unwrap();
            for a in &monos {
                for b in &monos {
                    assert_eq!(o.sort_key(a).cmp(&o.sort_key(b)), MonomialOrder::cmp(&o, a, b));
                }
            }
        }
    }

    #[test]
    fn toric_orders_pass_small() {
        let cover = Arc::new(RingSignature::yprime(&[("y", 2)]));
        let o = Order::new(OrderKind::HybridToric, cover.clone()).unwrap();
        let r = validate_order(&cover, &o, 3, 2);
        assert!(r.passed(), "{:?}", r.counterexample);

        let sym = Arc::new(
            RingSignature::new(
                vec![crate::symmetry::OrbitSpec::symmetric("y", 2)],
                RingKind::Y,
            )
            .unwrap(),
        );
        let o = Order::new(OrderKind::HybridToric, sym.clone()).unwrap();
        let r = validate_order(&sym, &o, 3, 2);
        assert!(r.passed(), "{:?}", r.counterexample);

        let prod = Arc::new(RingSignature::product(&cover, &RingSignature::x_ring(1)));
        let o = Order::new(OrderKind::Elimination, prod.clone()).unwrap();
        let r = validate_order(&prod, &o, 3, 2);
        assert!(r.passed(), "{:?}", r.counterexample);
    }

    #[test]
    fn elimination_puts_x_on_top() {
        let cover = RingSignature::yprime(&[("y", 2)]);
        let prod = Arc::new(RingSignature::product(&cover, &RingSignature::x_ring(1)));
        let o = Order::new(OrderKind::Elimination, prod.clone()).unwrap();
        let vars = variables_up_to_width(&prod, 3);
        let monos = monomials_up_to(&vars, 2);
        for a in monos.iter().filter(|m| m.factors().iter().all(|(v, _)| v.orbit == 0)) {
            for b in monos.iter().filter(|m| m.factors().iter().any(|(v, _)| v.orbit == 1)) {
                assert_eq!(MonomialOrder::cmp(&o, a, b), Ordering::Less);
            }
        }
    }

    #[test]
    fn nu_commutes_with_shifts() {
        let sym = Arc::new(
            RingSignature::new(
                vec![crate::symmetry::OrbitSpec::symmetric("y", 3)],
                RingKind::Y,
            )
            .unwrap(),
        );
        let o = Order::new(OrderKind::HybridToric, sym.clone()).unwrap();
        let vars = variables_up_to_width(&sym, 4);
        let monos = monomials_up_to(&vars, 2);
        for rho in IncMap::all_into(4, 6) {
            for m in &monos {
                let lhs = o.nu(&rho.apply(m).unwrap());
                let rhs = rho.apply(&o.nu(m)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    struct ReversedLex;
    impl MonomialOrder for ReversedLex {
        fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
            // x1 becomes the largest variable.
            let flip = |m: &Monomial| {
                Monomial::from_factors(m.factors().iter().map(|(v, e)| {
                    let idx: Vec<Index> = v.indices.iter().map(|&i| 100 - i).collect();
                    (Variable::raw(v.orbit, &idx), *e)
                }))
            };
            lex(&flip(a), &flip(b))
        }
    }

    #[test]
    fn reversed_lex_fails_refinement() {
        let ring = RingSignature::x_ring(1);
        let r = validate_order(&ring, &ReversedLex, 3, 2);
        match r.counterexample {
            Some(Counterexample::NotRefining { a, b, .. }) => {
                assert_eq!(a, xm(&[(1, 1)]));
                assert_eq!(b, xm(&[(2, 1)]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    struct SupportFirst;
    impl MonomialOrder for SupportFirst {
        fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
            a.factors().len().cmp(&b.factors().len()).then_with(|| lex(a, b))
        }
    }

    #[test]
    fn support_size_is_not_multiplicative() {
        let ring = RingSignature::x_ring(1);
        let r = validate_order(&ring, &SupportFirst, 3, 2);
        assert!(matches!(r.counterexample, Some(Counterexample::NotMultiplicative { .. })), "{r:?}");
    }
}
