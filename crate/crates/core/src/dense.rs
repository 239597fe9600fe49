//! Finite-variable Buchberger on sparse exponent vectors, for orders given
//! by a weight matrix. Pairs are selected by sugar and pruned with the
//! Gebauer-Möller criteria.

use std::collections::{BTreeMap, HashMap};

use smallvec::SmallVec;

use crate::order::Order;
use crate::poly::Polynomial;
use crate::scalar::Field;
use crate::symmetry::{Monomial, Variable};

type Key = Box<[i64]>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Mono {
    /// `(variable position, exponent)`, sorted by position.
    e: SmallVec<[(u32, u32); 8]>,
    mask: u64,
    deg: u32,
}

impl Mono {
    fn from_parts(e: SmallVec<[(u32, u32); 8]>) -> Mono {
        let mask = e.iter().fold(0u64, |m, (v, _)| m | 1 << (v % 64));
        let deg = e.iter().map(|(_, x)| x).sum();
        Mono { e, mask, deg }
    }

    fn divides(&self, other: &Mono) -> bool {
        if self.mask & !other.mask != 0 || self.deg > other.deg {
            return false;
        }
        let mut j = 0;
        for &(v, x) in &self.e {
            while j < other.e.len() && other.e[j].0 < v {
                j += 1;
            }
            if j == other.e.len() || other.e[j].0 != v || other.e[j].1 < x {
                return false;
            }
        }
        true
    }

    fn merge(&self, other: &Mono, f: impl Fn(u32, u32) -> u32) -> Mono {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.e.len() || j < other.e.len() {
            let (v, x) = match (self.e.get(i), other.e.get(j)) {
                (Some(&(a, x)), Some(&(b, _))) if a < b => {
                    i += 1;
                    (a, f(x, 0))
                }
                (Some(&(a, _)), Some(&(b, y))) if b < a => {
                    j += 1;
                    (b, f(0, y))
                }
                (Some(&(a, x)), Some(&(_, y))) => {
                    i += 1;
                    j += 1;
                    (a, f(x, y))
                }
                (Some(&(a, x)), None) => {
                    i += 1;
                    (a, f(x, 0))
                }
                (None, Some(&(b, y))) => {
                    j += 1;
                    (b, f(0, y))
                }
                (None, None) => unreachable!(),
            };
            if x > 0 {
                out.push((v, x));
            }
        }
        Mono::from_parts(out)
    }

    fn mul(&self, other: &Mono) -> Mono {
        self.merge(other, |a, b| a + b)
    }

    /// Assumes `other` divides `self`.
    fn div(&self, other: &Mono) -> Mono {
        self.merge(other, |a, b| a - b)
    }

    fn lcm(&self, other: &Mono) -> Mono {
        self.merge(other, |a, b| a.max(b))
    }

    fn coprime(&self, other: &Mono) -> bool {
        if self.mask & other.mask == 0 {
            return true;
        }
        self.merge(other, |a, b| a.min(b)).deg == 0
    }
}

#[derive(Debug, Clone)]
struct Term<C> {
    key: Key,
    mono: Mono,
    coef: C,
}

/// Terms in ascending order; the last one leads.
type DPoly<C> = Vec<Term<C>>;

struct Ring {
    vars: Vec<Variable>,
    index: HashMap<Variable, u32>,
    /// For each variable: `(form, weight)`.
    var_forms: Vec<Vec<(usize, i64)>>,
    nforms: usize,
}

impl Ring {
    fn key(&self, m: &Mono) -> Key {
        let mut k = vec![0i64; self.nforms];
        for &(v, x) in &m.e {
            for &(f, w) in &self.var_forms[v as usize] {
                k[f] += w * x as i64;
            }
        }
        k.into_boxed_slice()
    }

    fn mono(&self, m: &Monomial) -> Mono {
        let mut e: SmallVec<[(u32, u32); 8]> = m.factors().iter().map(|(v, x)| (self.index[v], *x)).collect();
        e.sort_unstable();
        Mono::from_parts(e)
    }

    fn monomial(&self, m: &Mono) -> Monomial {
        Monomial::from_factors(m.e.iter().map(|&(v, x)| (self.vars[v as usize].clone(), x)))
    }

    fn poly<C: Field>(&self, p: &Polynomial<C>) -> DPoly<C> {
        let mut out: DPoly<C> = p
            .terms()
            .map(|(m, c)| {
                let mono = self.mono(m);
                Term {
                    key: self.key(&mono),
                    mono,
                    coef: c.clone(),
                }
            })
            .collect();
        out.sort_by(|a, b| a.key.cmp(&b.key));
        out
    }

    fn polynomial<C: Field>(&self, p: &DPoly<C>) -> Polynomial<C> {
        Polynomial::from_terms(p.iter().map(|t| (self.monomial(&t.mono), t.coef.clone())))
    }
}

fn add_keys(a: &Key, b: &Key) -> Key {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

/// `p - c · m · g`, where `g` skips its leading term (cancelled by the caller).
fn sub_multiple<C: Field>(p: Vec<Term<C>>, c: &C, m: &Mono, mkey: &Key, g: &[Term<C>]) -> Vec<Term<C>> {
    let shifted = g.iter().map(|t| Term {
        key: add_keys(&t.key, mkey),
        mono: t.mono.mul(m),
        coef: -(c.clone() * t.coef.clone()),
    });
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut a = p.into_iter().peekable();
    let mut b = shifted.peekable();
    loop {
        let take_a = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => match x.key.cmp(&y.key) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    let mut x = a.next().expect("peeked");
                    let y = b.next().expect("peeked");
                    x.coef = x.coef + y.coef;
                    if !x.coef.is_zero() {
                        out.push(x);
                    }
                    continue;
                }
            },
        };
        out.push(if take_a { a.next() } else { b.next() }.expect("peeked"));
    }
    out
}

struct Gen<C> {
    poly: DPoly<C>,
    sugar: u32,
}

impl<C> Gen<C> {
    fn lead(&self) -> &Term<C> {
        self.poly.last().expect("nonzero")
    }
}

struct Engine<C> {
    ring: Ring,
    gens: Vec<Gen<C>>,
    /// Indices of the current minimal basis, in insertion order.
    active: Vec<usize>,
    /// `(sugar, lcm key, i, j) -> lcm`.
    pairs: BTreeMap<(u32, Key, usize, usize), Mono>,
}

impl<C: Field> Engine<C> {
    fn reducer(&self, m: &Mono) -> Option<usize> {
        self.active.iter().copied().find(|&i| self.gens[i].lead().mono.divides(m))
    }

    /// Full normal form.
    fn normal_form(&self, mut work: DPoly<C>) -> DPoly<C> {
        let mut rest: Vec<Term<C>> = Vec::new();
        while let Some(t) = work.pop() {
            match self.reducer(&t.mono) {
                None => rest.push(t),
                Some(i) => {
                    let g = &self.gens[i];
                    let lead = g.lead();
                    let cof = t.mono.div(&lead.mono);
                    let ckey = self.ring.key(&cof);
                    let c = t.coef / lead.coef.clone();
                    work = sub_multiple(work, &c, &cof, &ckey, &g.poly[..g.poly.len() - 1]);
                }
            }
        }
        rest.reverse();
        rest
    }

    fn monic(mut p: DPoly<C>) -> DPoly<C> {
        let lc = p.last().expect("nonzero").coef.clone();
        if !lc.is_one() {
            for t in &mut p {
                t.coef = t.coef.clone() / lc.clone();
            }
        }
        p
    }

    /// Adds `h` (reduced, nonzero) and updates the pairs.
    fn update(&mut self, h: DPoly<C>, sugar: u32) {
        let h = Engine::monic(h);
        let k = self.gens.len();
        let lh = h.last().expect("nonzero").mono.clone();
        self.gens.push(Gen { poly: h, sugar });
        let cand: Vec<(usize, Mono)> = self
            .active
            .iter()
            .map(|&i| (i, self.gens[i].lead().mono.lcm(&lh)))
            .collect();
        // criterion M/F: keep a new pair only if no other new lcm divides it
        let mut keep: Vec<(usize, Mono)> = Vec::new();
        for (a, (i, l)) in cand.iter().enumerate() {
            let coprime = self.gens[*i].lead().mono.coprime(&lh);
            let dominated = cand.iter().enumerate().any(|(b, (_, l2))| {
                b != a && l2.divides(l) && (l2 != l || b < a)
            });
            if coprime || !dominated {
                keep.push((*i, l.clone()));
            }
        }
        // criterion B on old pairs
        let gens = &self.gens;
        self.pairs.retain(|(_, _, i, j), l| {
            !lh.divides(l)
                || &gens[*i].lead().mono.lcm(&lh) == l
                || &gens[*j].lead().mono.lcm(&lh) == l
        });
        for (i, l) in keep {
            let li = &self.gens[i].lead().mono;
            if li.coprime(&lh) {
                continue;
            }
            let s = (self.gens[i].sugar + l.deg - li.deg).max(sugar + l.deg - lh.deg);
            let key = self.ring.key(&l);
            self.pairs.insert((s, key, i, k), l);
        }
        let gens = &self.gens;
        self.active.retain(|&i| !lh.divides(&gens[i].lead().mono));
        self.active.push(k);
    }

    fn spoly(&self, i: usize, j: usize, l: &Mono) -> DPoly<C> {
        let gi = &self.gens[i];
        let gj = &self.gens[j];
        let ci = l.div(&gi.lead().mono);
        let cj = l.div(&gj.lead().mono);
        let ki = self.ring.key(&ci);
        let kj = self.ring.key(&cj);
        // both monic: (ci gi - cj gj) with the leads cancelling
        let left = sub_multiple(Vec::new(), &-C::one(), &ci, &ki, &gi.poly[..gi.poly.len() - 1]);
        sub_multiple(left, &C::one(), &cj, &kj, &gj.poly[..gj.poly.len() - 1])
    }
}

/// Reduced Groebner basis, sorted by leading monomial ascending. `None` if
/// the order is not linear on the variables involved.
pub(crate) fn buchberger<C: Field>(f: &[Polynomial<C>], order: &Order) -> Option<Vec<Polynomial<C>>> {
    let mut vars: Vec<Variable> = f
        .iter()
        .flat_map(|p| p.monomials().flat_map(|m| m.factors().iter().map(|(v, _)| v.clone())))
        .collect();
    vars.sort();
    vars.dedup();
    let forms = order.linear_forms(&vars)?;
    let mut var_forms = vec![Vec::new(); vars.len()];
    for (fi, form) in forms.iter().enumerate() {
        for &(v, w) in form {
            var_forms[v].push((fi, w));
        }
    }
    let index = vars.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
    let ring = Ring {
        vars,
        index,
        var_forms,
        nforms: forms.len(),
    };
    let mut eng = Engine {
        ring,
        gens: Vec::new(),
        active: Vec::new(),
        pairs: BTreeMap::new(),
    };
    let mut inputs: Vec<DPoly<C>> = f.iter().filter(|p| !p.is_zero()).map(|p| eng.ring.poly(p)).collect();
    inputs.sort_by(|a, b| a.last().expect("nonzero").key.cmp(&b.last().expect("nonzero").key));
    for p in inputs {
        let sugar = p.iter().map(|t| t.mono.deg).max().unwrap_or(0);
        let r = eng.normal_form(p);
        if r.is_empty() {
            continue;
        }
        if r.last().expect("nonzero").mono.deg == 0 {
            return Some(vec![Polynomial::one()]);
        }
        eng.update(r, sugar);
    }
    while let Some(((sugar, _, i, j), l)) = eng.pairs.pop_first() {
        let s = eng.spoly(i, j, &l);
        let r = eng.normal_form(s);
        if r.is_empty() {
            continue;
        }
        if r.last().expect("nonzero").mono.deg == 0 {
            return Some(vec![Polynomial::one()]);
        }
        eng.update(r, sugar);
    }
    // tail reduction of the minimal basis
    let mut out: Vec<(Key, DPoly<C>)> = Vec::new();
    for &i in &eng.active {
        let g = &eng.gens[i].poly;
        let lead = g.last().expect("nonzero").clone();
        let mut tail = eng.normal_form(g[..g.len() - 1].to_vec());
        let key = lead.key.clone();
        tail.push(lead);
        out.push((key, tail));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Some(out.iter().map(|(_, p)| eng.ring.polynomial(p)).collect())
}
