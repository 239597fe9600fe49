//! Critical pairs up to shifts.
//!
//! For `f, g` the pairs `(m1 ρ1 f, m2 ρ2 g)` with equal leading monomials
//! are generated, as a module over monomial multiples and shifts, by the
//! classical S-pairs of `ρ1 f` and `ρ2 g` where `(ρ1, ρ2)` runs over the
//! interlacings of the two index sets.

use std::collections::HashSet;

use crate::order::Order;
use crate::poly::{PolyError, Polynomial};
use crate::scalar::Field;
use crate::symmetry::{IncMap, Index, Monomial};

/// Every pair of increasing maps `{1..wf} -> {1..wf+wg}` and
/// `{1..wg} -> {1..wf+wg}`.
pub fn interlacings(wf: usize, wg: usize) -> Vec<(IncMap, IncMap)> {
    let n = wf + wg;
    let left = IncMap::all_into(wf, n);
    let right = IncMap::all_into(wg, n);
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in &left {
        for b in &right {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// Interlacings whose images jointly cover `{1..m}`, for every `m`. Every
/// interlacing is a shift of exactly one of these.
pub fn merge_patterns(wf: usize, wg: usize) -> Vec<(IncMap, IncMap)> {
    (wf.max(wg)..=wf + wg)
        .flat_map(|m| merge_patterns_at(wf, wg, m))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub left: usize,
    pub right: usize,
    pub rho_left: IncMap,
    pub rho_right: IncMap,
}

/// A lead-only description of a critical pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairShape {
    pub rho_left: IncMap,
    pub rho_right: IncMap,
    pub lcm: Monomial,
    pub width: Index,
}

/// `left = m1 ρ1 f`, `right = m2 ρ2 g`, with equal leading monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPair<C> {
    pub left: Polynomial<C>,
    pub right: Polynomial<C>,
    pub lcm: Monomial,
    pub width: Index,
    pub provenance: Provenance,
}

impl<C: Field> SPair<C> {
    /// `LC(right) · left - LC(left) · right`.
    pub fn difference(&self) -> Polynomial<C> {
        let a = self.left.coefficient(&self.lcm);
        let b = self.right.coefficient(&self.lcm);
        self.left.scale(&b).sub(&self.right.scale(&a))
    }
}

/// Restriction of `rho` to `supp`, as a key for deduplication.
fn restrict(rho: &IncMap, supp: &[Index]) -> Vec<Index> {
    supp.iter().map(|&i| rho.at(i)).collect()
}

/// Interlacings covering exactly `{1..m}`.
pub fn merge_patterns_at(wf: usize, wg: usize, m: usize) -> Vec<(IncMap, IncMap)> {
    let mut out = Vec::new();
    for a in IncMap::all_into(wf, m) {
        for b in IncMap::all_into(wg, m) {
            let mut hit = vec![false; m];
            for &i in a.images().iter().chain(b.images()) {
                hit[i as usize - 1] = true;
            }
            if hit.iter().all(|&h| h) {
                out.push((a.clone(), b));
            }
        }
    }
    out
}

/// The critical pair shapes of two generators given by their leading
/// monomials, widths and index supports. `same` marks a generator paired
/// with itself; then only one of `(ρ1, ρ2)`, `(ρ2, ρ1)` is kept and pairs
/// acting identically on the support are skipped. With `prune`, pairs with
/// coprime shifted leads are dropped. `only_width` restricts to patterns
/// covering exactly `{1..m}`.
#[allow(clippy::too_many_arguments)]
pub fn pair_shapes(
    lead_f: &Monomial,
    wf: usize,
    supp_f: &[Index],
    lead_g: &Monomial,
    wg: usize,
    supp_g: &[Index],
    same: bool,
    prune: bool,
    only_width: Option<usize>,
) -> Vec<PairShape> {
    let patterns = match only_width {
        Some(m) => merge_patterns_at(wf, wg, m),
        None => merge_patterns(wf, wg),
    };
    let mut seen: HashSet<(Vec<Index>, Vec<Index>)> = HashSet::new();
    let mut out = Vec::new();
    for (r1, r2) in patterns {
        let a = restrict(&r1, supp_f);
        let b = restrict(&r2, supp_g);
        if same && a >= b {
            continue;
        }
        if !seen.insert((a, b)) {
            continue;
        }
        let lf = r1.apply(lead_f).expect("domain is the width");
        let lg = r2.apply(lead_g).expect("domain is the width");
        if prune && lf.is_coprime(&lg) {
            continue;
        }
        let width = r1.max_image().max(r2.max_image());
        out.push(PairShape {
            lcm: lf.lcm(&lg),
            rho_left: r1,
            rho_right: r2,
            width,
        });
    }
    out
}

/// Builds the pair polynomials of a shape. Leading monomials commute with
/// shifts, so `lcm / ρ(in f)` is the cofactor.
pub fn materialize<C: Field>(
    f: &Polynomial<C>,
    lead_f: &Monomial,
    g: &Polynomial<C>,
    lead_g: &Monomial,
    shape: &PairShape,
    provenance: (usize, usize),
) -> SPair<C> {
    let side = |p: &Polynomial<C>, lead: &Monomial, rho: &IncMap| {
        let shifted_lead = rho.apply(lead).expect("domain is the width");
        let cof = shape.lcm.div(&shifted_lead).expect("lcm is a multiple");
        p.apply_inc(rho).expect("domain is the width").mul_monomial(&cof)
    };
    SPair {
        left: side(f, lead_f, &shape.rho_left),
        right: side(g, lead_g, &shape.rho_right),
        lcm: shape.lcm.clone(),
        width: shape.width,
        provenance: Provenance {
            left: provenance.0,
            right: provenance.1,
            rho_left: shape.rho_left.clone(),
            rho_right: shape.rho_right.clone(),
        },
    }
}

fn pairs_between<C: Field>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    order: &Order,
    same: bool,
    prune: bool,
) -> Result<Vec<SPair<C>>, PolyError> {
    let lf = f.leading_term(order)?.monomial;
    let lg = g.leading_term(order)?.monomial;
    if f.is_constant() || g.is_constant() {
        return Ok(Vec::new());
    }
    let shapes = pair_shapes(
        &lf,
        f.width() as usize,
        &f.support(),
        &lg,
        g.width() as usize,
        &g.support(),
        same,
        prune,
        None,
    );
    Ok(shapes
        .iter()
        .map(|s| materialize(f, &lf, g, &lg, s, (0, if same { 0 } else { 1 })))
        .collect())
}

/// Generators of the pairs between two distinct basis elements.
pub fn spair_generators<C: Field>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    order: &Order,
    prune: bool,
) -> Result<Vec<SPair<C>>, PolyError> {
    pairs_between(f, g, order, false, prune)
}

/// Generators of the pairs between shifts of one basis element.
pub fn self_spair_generators<C: Field>(
    f: &Polynomial<C>,
    order: &Order,
    prune: bool,
) -> Result<Vec<SPair<C>>, PolyError> {
    pairs_between(f, f, order, true, prune)
}
