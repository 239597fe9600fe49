//! Equivariant Buchberger, its width-truncated driver, and a plain
//! finite-variable Buchberger used for truncations and cross-checks.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::order::{MonomialOrder, Order, OrderKey};
use crate::poly::{orbit_members_up_to_width, PolyError, Polynomial, ReducerSet};
use crate::scalar::Field;
use crate::spair::{materialize, pair_shapes, SPair};
use crate::symmetry::{Index, Monomial, ShiftPattern};

/// How a non-width order computes the basis at each truncation level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Equivariant pairs of width at most `n`, reduced by shifted generators
    /// of width at most `n`.
    Equivariant,
    /// Ordinary Buchberger on all shifted generators of width at most `n`.
    Classical,
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Largest pair width Algorithm 1 may process.
    pub width_cap: Index,
    /// Worker threads for the per-width reduction batches.
    pub threads: usize,
    pub prune_coprime: bool,
    /// Print one record per width level to stderr.
    pub progress: bool,
    pub strategy: Strategy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            width_cap: 12,
            threads: 1,
            prune_coprime: true,
            progress: false,
            strategy: Strategy::Classical,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub pairs_processed: usize,
    pub zero_reductions: usize,
    pub generators_added: usize,
    pub generators_removed: usize,
    pub criterion_pairs: usize,
}

#[derive(Debug, Clone)]
pub struct TruncationReport<C> {
    pub width: Index,
    pub basis: Vec<Polynomial<C>>,
    pub is_equivariant_gb: bool,
    /// Pairs whose difference has a nonzero normal form, with that form.
    pub certificate: Vec<(SPair<C>, Polynomial<C>)>,
    pub stats: Stats,
}

/// A basis with its report, or why none was produced.
pub type EgbResult<C> = Result<(Vec<Polynomial<C>>, TruncationReport<C>), EngineError<C>>;

#[derive(Debug, Error)]
pub enum EngineError<C: Field> {
    #[error("width cap {cap} exceeded: next critical pair has width {width}")]
    WidthCapExceeded {
        cap: Index,
        width: Index,
        state: Box<BasisState<C>>,
    },
    #[error("no equivariant Groebner basis found up to width {max_width}")]
    MaxWidthReached {
        max_width: Index,
        report: Box<TruncationReport<C>>,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone)]
struct Gen<C> {
    poly: Polynomial<C>,
    lead: Monomial,
    width: usize,
    support: Vec<Index>,
}

/// Queue key: pair width first, then creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PairKey {
    width: Index,
    seq: u64,
}

/// All interlacings of generators `left <= right` covering exactly
/// `{1..width}`, expanded when popped.
#[derive(Debug, Clone, Copy)]
struct PairBatch {
    left: usize,
    right: usize,
}

/// Generators, reducers and the width-keyed pair queue.
#[derive(Debug, Clone)]
pub struct BasisState<C> {
    gens: Vec<Option<Gen<C>>>,
    reducers: ReducerSet<C>,
    queue: BTreeMap<PairKey, PairBatch>,
    seq: u64,
    /// Queue entries above the current level whose pairs already reduce to
    /// zero. Cleared when a generator is removed.
    verified: HashSet<PairKey>,
    unit: bool,
    /// Current truncation level.
    pub width_cursor: Index,
    /// Largest level at which a generator was added after the input.
    pub last_new_width: Index,
    pub stats: Stats,
}

impl<C: Field> Default for BasisState<C> {
    fn default() -> Self {
        BasisState {
            gens: Vec::new(),
            reducers: ReducerSet::empty(),
            queue: BTreeMap::new(),
            seq: 0,
            verified: HashSet::new(),
            unit: false,
            width_cursor: 0,
            last_new_width: 0,
            stats: Stats::default(),
        }
    }
}

struct Ctx<'a> {
    order: &'a Order,
    cfg: &'a EngineConfig,
    pool: rayon::ThreadPool,
}

impl<'a> Ctx<'a> {
    fn new(order: &'a Order, cfg: &'a EngineConfig) -> Ctx<'a> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads.max(1))
            .build()
            .expect("thread pool");
        Ctx { order, cfg, pool }
    }
}

impl<C: Field> BasisState<C> {
    /// Current generators, in insertion order.
    pub fn generators(&self) -> Vec<Polynomial<C>> {
        self.gens.iter().flatten().map(|g| g.poly.clone()).collect()
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    fn active(&self) -> impl Iterator<Item = (usize, &Gen<C>)> {
        self.gens
            .iter()
            .enumerate()
            .filter_map(|(i, g)| g.as_ref().map(|g| (i, g)))
    }

    fn make_unit(&mut self, order: &Order) {
        self.gens.clear();
        self.queue.clear();
        self.verified.clear();
        self.reducers = ReducerSet::empty();
        self.unit = true;
        let one = Polynomial::one();
        self.reducers.push(&one, order);
        self.gens.push(Some(Gen {
            poly: one,
            lead: Monomial::one(),
            width: 0,
            support: Vec::new(),
        }));
    }

    /// Inserts without reduction or eviction and queues all its pairs.
    fn insert(&mut self, h: Polynomial<C>, order: &Order) {
        let lead = h.lead_monomial(order).expect("nonzero");
        let width = h.width() as usize;
        let k = self.gens.len();
        self.reducers.push(&h, order);
        self.gens.push(Some(Gen {
            support: h.support(),
            poly: h,
            lead,
            width,
        }));
        let partners: Vec<(usize, usize)> = self.active().map(|(i, g)| (i, g.width)).collect();
        for (i, wi) in partners {
            for m in wi.max(width)..=wi + width {
                self.seq += 1;
                self.queue.insert(
                    PairKey {
                        width: m as Index,
                        seq: self.seq,
                    },
                    PairBatch { left: i, right: k },
                );
            }
        }
        self.stats.generators_added += 1;
    }

    /// Adds a reduced nonzero element. Generators whose leading monomial
    /// becomes reducible (within `limit`) are removed and their normal forms
    /// re-added.
    fn add_generator(&mut self, h: Polynomial<C>, order: &Order, limit: Option<Index>) {
        if h.is_zero() || self.unit {
            return;
        }
        let h = h.monic(order);
        if h.is_constant() {
            self.make_unit(order);
            return;
        }
        let lead = h.lead_monomial(order).expect("nonzero");
        let pattern = ShiftPattern::new(&lead);
        let wh = h.width() as usize;
        let evicted: Vec<usize> = self
            .active()
            .filter(|(_, g)| match pattern.find(&g.lead) {
                Some(rho) => limit.is_none_or(|n| rho.extend_to(wh).max_image() <= n),
                None => false,
            })
            .map(|(i, _)| i)
            .collect();
        let mut old = Vec::new();
        for &i in &evicted {
            let g = self.gens[i].take().expect("active");
            self.reducers.disable(i);
            old.push(g.poly);
            self.stats.generators_removed += 1;
        }
        if !evicted.is_empty() {
            let gone: HashSet<usize> = evicted.iter().copied().collect();
            self.queue
                .retain(|_, b| !gone.contains(&b.left) && !gone.contains(&b.right));
            self.verified.clear();
        }
        self.last_new_width = self.last_new_width.max(self.width_cursor);
        self.insert(h, order);
        for g in old {
            let r = self.reducers.normal_form(&g, order, limit);
            self.add_generator(r, order, limit);
        }
    }

    fn pairs_of(&self, b: PairBatch, width: Index, ctx: &Ctx) -> Vec<SPair<C>> {
        let (Some(f), Some(g)) = (&self.gens[b.left], &self.gens[b.right]) else {
            return Vec::new();
        };
        pair_shapes(
            &f.lead,
            f.width,
            &f.support,
            &g.lead,
            g.width,
            &g.support,
            b.left == b.right,
            ctx.cfg.prune_coprime,
            Some(width as usize),
        )
        .iter()
        .map(|s| materialize(&f.poly, &f.lead, &g.poly, &g.lead, s, (b.left, b.right)))
        .collect()
    }

    fn normal_forms(&self, pairs: &[SPair<C>], ctx: &Ctx, limit: Option<Index>) -> Vec<Polynomial<C>> {
        let reducers = &self.reducers;
        let order = ctx.order;
        ctx.pool.install(|| {
            pairs
                .par_iter()
                .map(|p| reducers.normal_form(&p.difference(), order, limit))
                .collect()
        })
    }

    /// Processes queued pairs of width at most `stop`, smallest width first.
    /// Returns the offending width if a pair above `cap` comes up.
    fn process(&mut self, ctx: &Ctx, limit: Option<Index>, stop: Index, cap: Option<Index>) -> Result<(), Index> {
        let order = ctx.order;
        while let Some((&key, _)) = self.queue.first_key_value() {
            let m = key.width;
            if m > stop {
                break;
            }
            if cap.is_some_and(|c| m > c) {
                return Err(m);
            }
            self.width_cursor = self.width_cursor.max(m);
            let rest = self.queue.split_off(&PairKey {
                width: m + 1,
                seq: 0,
            });
            let batch = std::mem::replace(&mut self.queue, rest);
            let pairs: Vec<SPair<C>> = batch
                .values()
                .flat_map(|b| self.pairs_of(*b, m, ctx))
                .collect();
            let nfs = self.normal_forms(&pairs, ctx, limit);
            self.stats.pairs_processed += pairs.len();
            let mut changed = false;
            for nf in nfs {
                if self.unit {
                    break;
                }
                let r = if changed && !nf.is_zero() {
                    self.reducers.normal_form(&nf, order, limit)
                } else {
                    nf
                };
                if r.is_zero() {
                    self.stats.zero_reductions += 1;
                } else {
                    self.add_generator(r, order, limit);
                    changed = true;
                }
            }
            let level_done = self.queue.first_key_value().is_none_or(|(k, _)| k.width != m);
            if ctx.cfg.progress && level_done {
                self.progress(m);
            }
        }
        Ok(())
    }

    fn progress(&self, width: Index) {
        eprintln!(
            "width={} basis={} queue={} zero_reductions={}",
            width,
            self.active().count(),
            self.queue.len(),
            self.stats.zero_reductions
        );
    }

    /// Reduces all queued pairs above width `above` without restriction.
    /// With `fail_fast`, stops at the first batch containing a failure.
    fn check(&mut self, ctx: &Ctx, above: Index, fail_fast: bool) -> Vec<(SPair<C>, Polynomial<C>)> {
        const CHUNK: usize = 512;
        let keys: Vec<(PairKey, PairBatch)> = self
            .queue
            .range(PairKey {
                width: above + 1,
                seq: 0,
            }..)
            .filter(|(k, _)| !self.verified.contains(k))
            .map(|(k, b)| (*k, *b))
            .collect();
        let mut failures = Vec::new();
        let mut idx = 0;
        while idx < keys.len() {
            let mut pairs: Vec<SPair<C>> = Vec::new();
            let mut owners: Vec<usize> = Vec::new();
            let start = idx;
            while idx < keys.len() && pairs.len() < CHUNK {
                let (k, b) = keys[idx];
                for p in self.pairs_of(b, k.width, ctx) {
                    pairs.push(p);
                    owners.push(idx);
                }
                idx += 1;
            }
            let nfs = self.normal_forms(&pairs, ctx, None);
            self.stats.criterion_pairs += pairs.len();
            let mut bad: HashSet<usize> = HashSet::new();
            for ((p, nf), o) in pairs.into_iter().zip(nfs).zip(owners) {
                if !nf.is_zero() {
                    bad.insert(o);
                    failures.push((p, nf));
                }
            }
            for (j, (k, _)) in keys.iter().enumerate().take(idx).skip(start) {
                if !bad.contains(&j) {
                    self.verified.insert(*k);
                }
            }
            if fail_fast && !failures.is_empty() {
                break;
            }
        }
        failures
    }

    /// Drops generators with shift-divisible leading monomials, reduces the
    /// tails, and sorts by leading monomial.
    pub fn reduced_basis(&self, order: &Order) -> Vec<Polynomial<C>> {
        let polys = self.generators();
        interreduce(&polys, order)
    }
}

/// Minimal, tail-reduced, monic, sorted by leading monomial ascending.
pub fn interreduce<C: Field>(polys: &[Polynomial<C>], order: &Order) -> Vec<Polynomial<C>> {
    let mut items: Vec<(OrderKey, Monomial, Polynomial<C>)> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let p = p.monic(order);
            let lead = p.lead_monomial(order).expect("nonzero");
            (order.sort_key(&lead), lead, p)
        })
        .collect();
    if items.iter().any(|(_, l, _)| l.is_one()) {
        return vec![Polynomial::one()];
    }
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut keep: Vec<(Monomial, Polynomial<C>)> = Vec::new();
    for (i, (_, lead, p)) in items.iter().enumerate() {
        let redundant = items.iter().enumerate().any(|(j, (_, other, _))| {
            j != i && ShiftPattern::new(other).find(lead).is_some() && (other != lead || j < i)
        });
        if !redundant {
            keep.push((lead.clone(), p.clone()));
        }
    }
    for i in 0..keep.len() {
        let others: Vec<Polynomial<C>> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (_, p))| p.clone())
            .collect();
        let set = ReducerSet::new(&others, order);
        let (lead, p) = &keep[i];
        let lc = p.coefficient(lead);
        let mut tail = p.clone();
        tail.add_term(lead.clone(), -lc.clone());
        let reduced = set.normal_form(&tail, order, None);
        let mut out = reduced;
        out.add_term(lead.clone(), lc);
        keep[i].1 = out.monic(order);
    }
    keep.into_iter().map(|(_, p)| p).collect()
}

fn seed<C: Field>(state: &mut BasisState<C>, f: &[Polynomial<C>], order: &Order, limit: Option<Index>) {
    for p in f.iter().filter(|p| !p.is_zero()) {
        let r = state.reducers.normal_form(p, order, limit);
        state.add_generator(r, order, limit);
    }
    // input generators do not count as new
    state.last_new_width = 0;
}

fn input_width<C: Field>(f: &[Polynomial<C>]) -> Index {
    f.iter().map(|p| p.width()).max().unwrap_or(0)
}

/// Algorithm 1: processes critical pairs in width order until none is left.
/// Fails if a pair wider than `cfg.width_cap` comes up.
pub fn equivariant_buchberger<C: Field>(
    f: &[Polynomial<C>],
    order: &Order,
    cfg: &EngineConfig,
) -> Result<Vec<Polynomial<C>>, EngineError<C>> {
    let ctx = Ctx::new(order, cfg);
    let mut state = BasisState::default();
    seed(&mut state, f, order, None);
    if let Err(width) = state.process(&ctx, None, Index::MAX, Some(cfg.width_cap)) {
        return Err(EngineError::WidthCapExceeded {
            cap: cfg.width_cap,
            width,
            state: Box::new(state),
        });
    }
    Ok(state.reduced_basis(order))
}

/// Algorithm 2: bases of the truncations `n = w(F), w(F)+1, ...` until the
/// equivariant criterion holds, or `max_width` is passed.
pub fn truncated_egb<C: Field>(
    f: &[Polynomial<C>],
    order: &Order,
    max_width: Index,
    cfg: &EngineConfig,
) -> EgbResult<C> {
    let f: Vec<Polynomial<C>> = f.iter().filter(|p| !p.is_zero()).cloned().collect();
    let ctx = Ctx::new(order, cfg);
    let wf = input_width(&f);
    if wf > max_width {
        let report = TruncationReport {
            width: wf,
            basis: f,
            is_equivariant_gb: false,
            certificate: Vec::new(),
            stats: Stats::default(),
        };
        return conclude(report, max_width);
    }
    let finish = |state: &BasisState<C>, width: Index, certificate: Vec<(SPair<C>, Polynomial<C>)>| {
        let basis = state.reduced_basis(order);
        TruncationReport {
            width,
            is_equivariant_gb: certificate.is_empty(),
            basis,
            certificate,
            stats: state.stats.clone(),
        }
    };
    if order.is_width_order() {
        let mut state = BasisState::default();
        seed(&mut state, &f, order, None);
        state
            .process(&ctx, None, max_width.max(wf), None)
            .expect("no cap");
        let cert = state.check(&ctx, max_width.max(wf), true);
        let width = wf.max(state.last_new_width);
        let report = finish(&state, width, cert);
        return conclude(report, max_width);
    }
    match cfg.strategy {
        Strategy::Equivariant => {
            let mut n = wf;
            let mut state = BasisState::default();
            seed(&mut state, &f, order, Some(n));
            loop {
                state.width_cursor = n;
                state.process(&ctx, Some(n), n, None).expect("no cap");
                let cert = state.check(&ctx, n, true);
                if cert.is_empty() || n >= max_width {
                    return conclude(finish(&state, n, cert), max_width);
                }
                n += 1;
            }
        }
        Strategy::Classical => {
            let mut n = wf;
            let mut prev: Vec<Polynomial<C>> = f.clone();
            loop {
                let mut input = prev.clone();
                input.extend(f.iter().cloned());
                let trunc = generator_truncation(&input, n as usize);
                let gb = classical_buchberger(&trunc, order, n);
                let gn = minimize_within(&gb, order, n);
                let mut state = BasisState::default();
                for g in &gn {
                    state.insert(g.clone(), order);
                }
                state.width_cursor = n;
                let cert = state.check(&ctx, 0, true);
                if cfg.progress {
                    state.progress(n);
                }
                if cert.is_empty() || n >= max_width {
                    return conclude(finish(&state, n, cert), max_width);
                }
                prev = gn;
                n += 1;
            }
        }
    }
}

fn conclude<C: Field>(
    report: TruncationReport<C>,
    max_width: Index,
) -> EgbResult<C> {
    if report.is_equivariant_gb {
        Ok((report.basis.clone(), report))
    } else {
        Err(EngineError::MaxWidthReached {
            max_width,
            report: Box::new(report),
        })
    }
}

/// Orbit representatives of a truncated basis: elements whose leading
/// monomial is divisible by a shift (staying within width `n`) of another
/// leading monomial are dropped.
fn minimize_within<C: Field>(gb: &[Polynomial<C>], order: &Order, n: Index) -> Vec<Polynomial<C>> {
    let leads: Vec<Monomial> = gb.iter().map(|g| g.lead_monomial(order).expect("nonzero")).collect();
    let mut out = Vec::new();
    for (i, g) in gb.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(j, l)| {
            j != i
                && (l != &leads[i] || j < i)
                && ShiftPattern::new(l).find(&leads[i]).is_some_and(|rho| {
                    rho.extend_to(gb[j].width() as usize).max_image() <= n
                })
        });
        if !redundant {
            out.push(g.clone());
        }
    }
    out
}

/// Generators of the truncation at width `n`: every shift of every input
/// element that fits in width `n`.
pub fn generator_truncation<C: Field>(f: &[Polynomial<C>], n: usize) -> Vec<Polynomial<C>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in f.iter().filter(|p| !p.is_zero()) {
        for q in orbit_members_up_to_width(p, n) {
            if seen.insert(q.clone()) {
                out.push(q);
            }
        }
    }
    out
}

/// Checks the equivariant Buchberger criterion on every critical pair of
/// `g`. The report lists every failing pair.
pub fn is_equivariant_gb<C: Field>(g: &[Polynomial<C>], order: &Order, cfg: &EngineConfig) -> TruncationReport<C> {
    let ctx = Ctx::new(order, cfg);
    let mut state = BasisState::default();
    for p in g.iter().filter(|p| !p.is_zero()) {
        state.insert(p.monic(order), order);
    }
    let cert = state.check(&ctx, 0, false);
    TruncationReport {
        width: input_width(g),
        basis: g.to_vec(),
        is_equivariant_gb: cert.is_empty(),
        certificate: cert,
        stats: state.stats,
    }
}

/// Plain division by the leading terms of `gens` (no shifts).
fn plain_normal_form<C: Field>(
    f: &Polynomial<C>,
    gens: &[(Monomial, Polynomial<C>)],
    order: &Order,
) -> Polynomial<C> {
    let mut work: BTreeMap<OrderKey, (Monomial, C)> = f
        .terms()
        .map(|(m, c)| (order.sort_key(m), (m.clone(), c.clone())))
        .collect();
    let mut rest = Polynomial::zero();
    while let Some((_, (t, c))) = work.pop_last() {
        let Some((lead, g)) = gens.iter().find(|(l, _)| l.divides(&t)) else {
            rest.add_term(t, c);
            continue;
        };
        let cof = t.div(lead).expect("divides");
        let q = c / g.coefficient(lead);
        for (m, a) in g.terms() {
            if m == lead {
                continue;
            }
            let n = m.mul(&cof);
            let key = order.sort_key(&n);
            let delta = -(q.clone() * a.clone());
            let sum = match work.get(&key) {
                Some((_, old)) => old.clone() + delta,
                None => delta,
            };
            if sum.is_zero() {
                work.remove(&key);
            } else {
                work.insert(key, (n, sum));
            }
        }
    }
    rest
}

/// Reduced Groebner basis of the ideal generated by `f` in the finitely many
/// variables of width at most `width_bound`, by the ordinary Buchberger
/// algorithm (sugar selection with the Gebauer-Möller criteria when the
/// order is a weight-matrix order on those variables).
pub fn classical_buchberger<C: Field>(
    f: &[Polynomial<C>],
    order: &Order,
    width_bound: Index,
) -> Vec<Polynomial<C>> {
    debug_assert!(f.iter().all(|p| p.width() <= width_bound));
    if let Some(gb) = crate::dense::buchberger(f, order) {
        return gb;
    }
    let mut basis: Vec<(Monomial, Polynomial<C>)> = Vec::new();
    let mut pairs: BTreeMap<(OrderKey, usize, usize), ()> = BTreeMap::new();
    let add = |basis: &mut Vec<(Monomial, Polynomial<C>)>,
                   pairs: &mut BTreeMap<(OrderKey, usize, usize), ()>,
                   h: Polynomial<C>| {
        let h = h.monic(order);
        let lead = h.lead_monomial(order).expect("nonzero");
        let k = basis.len();
        for (i, (l, _)) in basis.iter().enumerate() {
            if !l.is_coprime(&lead) {
                pairs.insert((order.sort_key(&l.lcm(&lead)), i, k), ());
            }
        }
        basis.push((lead, h));
    };
    for p in f {
        let r = plain_normal_form(p, &basis, order);
        if !r.is_zero() {
            add(&mut basis, &mut pairs, r);
        }
    }
    while let Some(((_, i, j), ())) = pairs.pop_first() {
        let (li, pi) = &basis[i];
        let (lj, pj) = &basis[j];
        let l = li.lcm(lj);
        let s = pi
            .mul_monomial(&l.div(li).expect("lcm"))
            .sub(&pj.mul_monomial(&l.div(lj).expect("lcm")));
        let r = plain_normal_form(&s, &basis, order);
        if !r.is_zero() {
            add(&mut basis, &mut pairs, r);
        }
    }
    // reduced basis
    let mut min: Vec<(Monomial, Polynomial<C>)> = Vec::new();
    for (i, (l, p)) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(j, (m, _))| j != i && m.divides(l) && (m != l || j < i));
        if !redundant {
            min.push((l.clone(), p.clone()));
        }
    }
    let mut out: Vec<(OrderKey, Polynomial<C>)> = Vec::new();
    for i in 0..min.len() {
        let others: Vec<(Monomial, Polynomial<C>)> = min
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, x)| x.clone())
            .collect();
        let (l, p) = &min[i];
        let lc = p.coefficient(l);
        let mut tail = p.clone();
        tail.add_term(l.clone(), -lc.clone());
        let mut r = plain_normal_form(&tail, &others, order);
        r.add_term(l.clone(), lc);
        out.push((order.sort_key(l), r.monic(order)));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, p)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::OrderKind;
    use crate::poly::{normal_form, var_monomial};
    use crate::symmetry::RingSignature;
    use crate::SmallRational as Q;
    use std::sync::Arc;

    fn x(j: Index) -> Monomial {
        var_monomial(&[(0, &[j], 1)])
    }

    fn lex() -> Order {
        Order::new(OrderKind::Lex, Arc::new(RingSignature::x_ring(1))).unwrap()
    }

    fn sum(ms: &[Monomial]) -> Polynomial<Q> {
        Polynomial::from_terms(ms.iter().map(|m| (m.clone(), Q::from_integer(1))))
    }

    #[test]
    fn single_monomial() {
        let f = vec![sum(&[x(1)])];
        let g = equivariant_buchberger(&f, &lex(), &EngineConfig::default()).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn sum_collapses_to_variable() {
        let o = lex();
        let f = vec![sum(&[x(1), x(2)])];
        let (g, rep) = truncated_egb(&f, &o, 6, &EngineConfig::default()).unwrap();
        assert_eq!(g, vec![sum(&[x(1)])]);
        assert!(rep.width <= 3);
        let direct = equivariant_buchberger(&f, &o, &EngineConfig::default()).unwrap();
        assert_eq!(direct, g);
    }

    #[test]
    fn criterion_examples() {
        let o = lex();
        let cfg = EngineConfig::default();
        assert!(is_equivariant_gb(&[sum(&[x(1)])], &o, &cfg).is_equivariant_gb);
        let bad = is_equivariant_gb(&[sum(&[x(1), x(2)])], &o, &cfg);
        assert!(!bad.is_equivariant_gb && !bad.certificate.is_empty());
        assert!(is_equivariant_gb::<Q>(&[], &o, &cfg).is_equivariant_gb);
    }

    #[test]
    fn idempotent_binomial() {
        let o = lex();
        let f = vec![Polynomial::<Q>::binomial(x(1).mul(&x(2)), x(1))];
        let g = equivariant_buchberger(&f, &o, &EngineConfig::default()).unwrap();
        assert!(is_equivariant_gb(&g, &o, &EngineConfig::default()).is_equivariant_gb);
    }

    #[test]
    fn truncations() {
        assert_eq!(generator_truncation(&[sum(&[x(1)])], 2).len(), 2);
        let f = Polynomial::<Q>::binomial(x(1).mul(&x(2)), x(1));
        assert_eq!(generator_truncation(std::slice::from_ref(&f), 3).len(), 3);
        assert!(generator_truncation(&[f], 1).is_empty());
    }

    #[test]
    fn classical_small() {
        let o = lex();
        let f = vec![sum(&[x(1), x(2)]), sum(&[x(1), x(3)])];
        let gb = classical_buchberger(&f, &o, 3);
        // x3 + x1, x2 + x1: already reduced, sorted by lead
        assert_eq!(gb.len(), 2);
        for p in &f {
            assert!(plain_normal_form(p, &gb.iter().map(|g| (g.lead_monomial(&o).unwrap(), g.clone())).collect::<Vec<_>>(), &o).is_zero());
        }
        assert!(classical_buchberger::<Q>(&[], &o, 3).is_empty());
        let with_unit = vec![sum(&[x(1)]), sum(&[x(1), Monomial::one()])];
        assert_eq!(classical_buchberger(&with_unit, &o, 1), vec![Polynomial::one()]);
    }

    #[test]
    fn grevlex_strategies_agree() {
        let o = Order::new(OrderKind::GradedRevLex, Arc::new(RingSignature::x_ring(1))).unwrap();
        let f = vec![Polynomial::<Q>::binomial(x(1).mul(&x(2)), x(1).mul(&x(1)))];
        let eq = truncated_egb(&f, &o, 6, &EngineConfig::default()).unwrap().0;
        let cl_cfg = EngineConfig {
            strategy: Strategy::Classical,
            ..EngineConfig::default()
        };
        let cl = truncated_egb(&f, &o, 6, &cl_cfg).unwrap().0;
        // same initial ideal: each basis reduces the other to zero
        for p in &eq {
            assert!(normal_form(p, &cl, &o).is_zero());
        }
        for p in &cl {
            assert!(normal_form(p, &eq, &o).is_zero());
        }
    }
}
