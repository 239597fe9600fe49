//! Kernels of equivariant monomial maps `R[Y] -> R[X]`.
//!
//! The map is lifted to the free cover `Y'` (one variable per ordered
//! tuple), the graph ideal `⟨y' - φθ(y')⟩` is eliminated under an
//! elimination order, and the result is pushed down along `θ: Y' -> Y`.

pub mod matching;

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::{
    classical_buchberger, generator_truncation, interreduce, truncated_egb, EngineConfig, EngineError, Stats,
};
use crate::order::{Order, OrderError, OrderKind};
use crate::poly::{Polynomial, ReducerSet};
use crate::scalar::Field;
use crate::symmetry::{
    Block, Index, IndexTuple, Monomial, OrbitLabel, Perm, RingKind, RingSignature, ShiftPattern, SymmetryError,
    Variable,
};

pub use matching::{
    binomial_gap, lift, lift_with_kept, mm_divides, mm_member, mm_norm_distance, mm_preimage, ExponentMatrix,
    MatchingError,
};

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("image of orbit {orbit} is not fixed by the stabilizer permutation {perm:?}")]
    NotEquivariant { orbit: String, perm: Vec<Index> },
    #[error("image of orbit {orbit} has width {width}, more than its arity {arity}")]
    ImageTooWide { orbit: String, width: Index, arity: usize },
    #[error("invalid map: {0}")]
    BadMap(String),
    #[error("graph ideal has no equivariant Groebner basis up to width {max_width}")]
    MaxWidthReached { max_width: Index },
    #[error("width cap {cap} exceeded at width {width}")]
    WidthCapExceeded { cap: Index, width: Index },
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("{0}")]
    Engine(String),
}

impl<C: Field> From<EngineError<C>> for ToricError {
    fn from(e: EngineError<C>) -> Self {
        match e {
            EngineError::MaxWidthReached { max_width, .. } => ToricError::MaxWidthReached { max_width },
            EngineError::WidthCapExceeded { cap, width, .. } => ToricError::WidthCapExceeded { cap, width },
            EngineError::Poly(p) => ToricError::Engine(p.to_string()),
        }
    }
}

/// Relabels the row variables of `m` by `j -> t[j-1]`.
fn move_columns(m: &Monomial, t: &[Index]) -> Monomial {
    Monomial::from_factors(
        m.factors()
            .iter()
            .map(|(v, e)| (Variable::raw(v.orbit, &[t[v.indices[0] as usize - 1]]), *e)),
    )
}

/// An equivariant monomial map given by the images of the orbit
/// representatives `y_p(1,...,k_p)`. Images are monomials in
/// `RingSignature::x_ring(rows)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMapSpec {
    pub domain: Arc<RingSignature>,
    pub rows: usize,
    pub images: Vec<Monomial>,
}

impl MonomialMapSpec {
    pub fn new(domain: Arc<RingSignature>, rows: usize, images: Vec<Monomial>) -> Result<Self, ToricError> {
        let spec = MonomialMapSpec { domain, rows, images };
        validate_map(&spec)?;
        Ok(spec)
    }

    pub fn x_ring(&self) -> RingSignature {
        RingSignature::x_ring(self.rows)
    }

    pub fn arities(&self) -> Vec<usize> {
        self.domain.orbits().iter().map(|o| o.arity).collect()
    }

    /// `φ(y_p(t))`: the representative image with column `j` moved to `t_j`.
    pub fn image_of(&self, v: &Variable) -> Monomial {
        move_columns(&self.images[v.orbit as usize], &v.indices)
    }

    pub fn apply(&self, m: &Monomial) -> Monomial {
        m.factors()
            .iter()
            .fold(Monomial::one(), |acc, (v, e)| {
                let img = self.image_of(v);
                (0..*e).fold(acc, |a, _| a.mul(&img))
            })
    }

    pub fn apply_poly<C: Field>(&self, f: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m, c) in f.terms() {
            out.add_term(self.apply(m), c.clone());
        }
        out
    }
}

/// Images must fit in their arity and be fixed by the orbit stabilizers.
pub fn validate_map(spec: &MonomialMapSpec) -> Result<(), ToricError> {
    if !matches!(spec.domain.kind(), RingKind::Y | RingKind::YPrime) {
        return Err(ToricError::BadMap("domain must be a tuple ring".into()));
    }
    if spec.images.len() != spec.domain.num_orbits() {
        return Err(ToricError::BadMap(format!(
            "{} images for {} orbits",
            spec.images.len(),
            spec.domain.num_orbits()
        )));
    }
    let x = spec.x_ring();
    for (p, (o, img)) in spec.domain.orbits().iter().zip(&spec.images).enumerate() {
        if !matches!(o.label, OrbitLabel::Tuple(_)) {
            return Err(ToricError::BadMap(format!("orbit {p} is not a tuple orbit")));
        }
        if o.arity == 0 {
            return Err(ToricError::BadMap(format!("orbit {} has arity 0", o.name())));
        }
        if !img.factors().iter().all(|(v, _)| (v.orbit as usize) < spec.rows) || !x.contains(img) {
            return Err(ToricError::BadMap(format!("image of {} uses unknown rows", o.name())));
        }
        if img.width() as usize > o.arity {
            return Err(ToricError::ImageTooWide {
                orbit: o.name().to_string(),
                width: img.width(),
                arity: o.arity,
            });
        }
        for h in &o.stabilizer {
            let t: Vec<Index> = (0..o.arity).map(|i| h.apply(i) as Index + 1).collect();
            if move_columns(img, &t) != *img {
                return Err(ToricError::NotEquivariant {
                    orbit: o.name().to_string(),
                    perm: t,
                });
            }
        }
    }
    Ok(())
}

/// The free cover `Y'` of a tuple ring and the quotient `θ: Y' -> Y`.
#[derive(Debug, Clone)]
pub struct FreeCover {
    pub domain: Arc<RingSignature>,
    pub cover: Arc<RingSignature>,
}

impl FreeCover {
    pub fn new(domain: Arc<RingSignature>) -> FreeCover {
        let names: Vec<(&str, usize)> = domain.orbits().iter().map(|o| (o.name(), o.arity)).collect();
        let cover = Arc::new(RingSignature::yprime(&names));
        FreeCover { domain, cover }
    }

    pub fn theta(&self, m: &Monomial) -> Monomial {
        Monomial::from_factors(m.factors().iter().map(|(v, e)| {
            let indices = self.domain.orbit(v.orbit).canonical_tuple(&v.indices);
            (Variable { orbit: v.orbit, indices }, *e)
        }))
    }

    pub fn theta_poly<C: Field>(&self, f: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m, c) in f.terms() {
            out.add_term(self.theta(m), c.clone());
        }
        out
    }

    /// Cover variables over `v`.
    pub fn fiber(&self, v: &Variable) -> Vec<Variable> {
        self.domain
            .orbit(v.orbit)
            .class_members(&v.indices)
            .into_iter()
            .map(|indices: IndexTuple| Variable { orbit: v.orbit, indices })
            .collect()
    }
}

/// Row ids of `z[p,i]`: orbit `p` starts at `offsets[p]`.
fn z_offsets(arities: &[usize]) -> Vec<u16> {
    let mut out = Vec::with_capacity(arities.len());
    let mut next = 0u16;
    for &k in arities {
        out.push(next);
        next += k as u16;
    }
    out
}

/// `π(y'_p(α)) = ∏_i z[p,i,α_i]`, as a monomial of `RingSignature::z_ring`.
pub fn pi_image(cover: &RingSignature, m: &Monomial) -> Monomial {
    let arities: Vec<usize> = cover.orbits().iter().map(|o| o.arity).collect();
    let off = z_offsets(&arities);
    Monomial::from_factors(m.factors().iter().flat_map(|(v, e)| {
        let base = off[v.orbit as usize];
        v.indices
            .iter()
            .enumerate()
            .map(move |(i, &j)| (Variable::raw(base + i as u16, &[j]), *e))
    }))
}

/// `ψ(z[p,i,j])`: the factors of `φ(y_p)` in column `i`, moved to column `j`.
pub fn psi(spec: &MonomialMapSpec, z: &Monomial) -> Monomial {
    let arities = spec.arities();
    let mut row_of = Vec::new();
    for (p, &k) in arities.iter().enumerate() {
        for i in 1..=k as Index {
            row_of.push((p, i));
        }
    }
    let mut out = Monomial::one();
    for (v, e) in z.factors() {
        let (p, i) = row_of[v.orbit as usize];
        let j = v.indices[0];
        let col = Monomial::from_factors(
            spec.images[p]
                .factors()
                .iter()
                .filter(|(x, _)| x.indices[0] == i)
                .map(|(x, ex)| (Variable::raw(x.orbit, &[j]), ex * e)),
        );
        out = out.mul(&col);
    }
    out
}

/// The graph ideal of `φθ` on `R[Y'][X]` under the elimination order.
#[derive(Debug, Clone)]
pub struct GraphSetup<C> {
    pub cover: FreeCover,
    pub product: Arc<RingSignature>,
    pub order: Order,
    /// `y'_p(σ) - φ(y_p(σ))` for every orbit `p` and `σ ∈ S_{k_p}`.
    pub generators: Vec<Polynomial<C>>,
}

pub fn graph_setup<C: Field>(spec: &MonomialMapSpec) -> Result<GraphSetup<C>, ToricError> {
    validate_map(spec)?;
    let cover = FreeCover::new(spec.domain.clone());
    let product = Arc::new(RingSignature::product(&cover.cover, &spec.x_ring()));
    let shift = spec.domain.num_orbits() as u16;
    let order = Order::graded_elimination(
        product.clone(),
        spec.images.iter().map(|m| m.map_orbits(|r| r + shift)).collect(),
    )?;
    let mut generators = Vec::new();
    for (p, o) in spec.domain.orbits().iter().enumerate() {
        for sigma in Perm::all(o.arity) {
            let t: Vec<Index> = sigma.images().iter().map(|&i| i as Index + 1).collect();
            let y = Monomial::var(Variable::raw(p as u16, &t));
            let x = move_columns(&spec.images[p], &t).map_orbits(|r| r + shift);
            generators.push(Polynomial::binomial(y, x));
        }
    }
    Ok(GraphSetup {
        cover,
        product,
        order,
        generators,
    })
}

#[derive(Debug, Clone)]
pub struct KernelResult<C> {
    /// Equivariant Groebner basis of `ker(φθ)` on the cover.
    pub cover_basis: Vec<Polynomial<C>>,
    pub cover_order: Order,
    /// Its image under `θ`, minimized: a basis of `ker φ`.
    pub basis: Vec<Polynomial<C>>,
    pub order: Order,
    /// Truncation width at which the graph ideal stabilized.
    pub width: Index,
    pub stats: Stats,
}

fn is_y_only(order: &Order, p: &Polynomial<impl Field>) -> bool {
    let ring = order.ring();
    p.monomials()
        .all(|m| m.factors().iter().all(|(v, _)| ring.orbit(v.orbit).block == Block::Y))
}

/// Sorted by leading monomial, ascending.
fn sort_by_lead<C: Field>(v: &mut [Polynomial<C>], order: &Order) {
    v.sort_by_cached_key(|p| order.sort_key(&p.lead_monomial(order).unwrap_or_default()));
}

/// Equivariant Groebner basis of `ker φ` under the hybrid order (with the
/// `ν` transport on symmetric orbits).
pub fn compute_kernel_egb<C: Field>(
    spec: &MonomialMapSpec,
    max_width: Index,
    cfg: &EngineConfig,
) -> Result<KernelResult<C>, ToricError> {
    let setup = graph_setup::<C>(spec)?;
    let (graph_basis, report) = truncated_egb(&setup.generators, &setup.order, max_width, cfg)?;
    let cover_order = Order::new(OrderKind::HybridToric, setup.cover.cover.clone())?;
    let mut cover_basis: Vec<Polynomial<C>> = graph_basis
        .into_iter()
        .filter(|g| is_y_only(&setup.order, g))
        .map(|g| g.monic(&cover_order))
        .collect();
    sort_by_lead(&mut cover_basis, &cover_order);
    let order = Order::new(OrderKind::HybridToric, spec.domain.clone())?;
    let mut seen = HashSet::new();
    let pushed: Vec<Polynomial<C>> = cover_basis
        .iter()
        .map(|g| setup.cover.theta_poly(g))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(&order))
        .filter(|g| seen.insert(g.clone()))
        .collect();
    let basis = interreduce(&pushed, &order);
    Ok(KernelResult {
        cover_basis,
        cover_order,
        basis,
        order,
        width: report.width,
        stats: report.stats,
    })
}

/// The map `y'_p(α) -> ∏_i x[r_p + i, α_i]` whose kernel is `ker π`.
pub fn pi_map_spec(cover: Arc<RingSignature>) -> Result<MonomialMapSpec, ToricError> {
    let arities: Vec<usize> = cover.orbits().iter().map(|o| o.arity).collect();
    let off = z_offsets(&arities);
    let images = arities
        .iter()
        .zip(&off)
        .map(|(&k, &base)| {
            Monomial::from_factors((0..k).map(|i| (Variable::raw(base + i as u16, &[i as Index + 1]), 1)))
        })
        .collect();
    MonomialMapSpec::new(cover, arities.iter().sum(), images)
}

/// Equivariant Groebner basis of `ker π` on a free cover with the given
/// orbit names and arities.
pub fn kernel_pi_egb<C: Field>(
    orbits: &[(&str, usize)],
    max_width: Index,
    cfg: &EngineConfig,
) -> Result<KernelResult<C>, ToricError> {
    let cover = Arc::new(RingSignature::yprime(orbits));
    compute_kernel_egb(&pi_map_spec(cover)?, max_width, cfg)
}

/// Reduced Groebner basis of `ker(φθ) ∩ R[Y'_W]` by ordinary elimination on
/// the width-`W` truncation of the graph ideal.
pub fn elimination_oracle<C: Field>(spec: &MonomialMapSpec, width: Index) -> Result<Vec<Polynomial<C>>, ToricError> {
    let setup = graph_setup::<C>(spec)?;
    let trunc = generator_truncation(&setup.generators, width as usize);
    let gb = classical_buchberger(&trunc, &setup.order, width);
    let cover_order = Order::new(OrderKind::HybridToric, setup.cover.cover.clone())?;
    let mut out: Vec<Polynomial<C>> = gb
        .into_iter()
        .filter(|g| is_y_only(&setup.order, g))
        .map(|g| g.monic(&cover_order))
        .collect();
    sort_by_lead(&mut out, &cover_order);
    Ok(out)
}

/// Disagreements between an equivariant kernel basis and the oracle at one
/// truncation width. Empty fields mean agreement.
#[derive(Debug, Clone, Default)]
pub struct OracleComparison<C> {
    /// Oracle elements not reducing to zero by shifts of the cover basis.
    pub unreduced: Vec<Polynomial<C>>,
    /// Oracle leads not divisible by a shifted cover-basis lead.
    pub undivided: Vec<Monomial>,
    /// Cover-basis elements of width at most `W` not in the oracle ideal.
    pub outside: Vec<Polynomial<C>>,
}

impl<C> OracleComparison<C> {
    pub fn agrees(&self) -> bool {
        self.unreduced.is_empty() && self.undivided.is_empty() && self.outside.is_empty()
    }
}

pub fn compare_with_oracle<C: Field>(
    result: &KernelResult<C>,
    oracle: &[Polynomial<C>],
    width: Index,
) -> OracleComparison<C> {
    let order = &result.cover_order;
    let ours = ReducerSet::new(&result.cover_basis, order);
    let theirs = ReducerSet::new(oracle, order);
    let patterns: Vec<ShiftPattern> = result
        .cover_basis
        .iter()
        .filter_map(|g| g.lead_monomial(order))
        .map(|l| ShiftPattern::new(&l))
        .collect();
    let mut cmp = OracleComparison {
        unreduced: Vec::new(),
        undivided: Vec::new(),
        outside: Vec::new(),
    };
    for g in oracle {
        if !ours.normal_form(g, order, None).is_zero() {
            cmp.unreduced.push(g.clone());
        }
        let lead = g.lead_monomial(order).expect("nonzero");
        if !patterns.iter().any(|p| p.find(&lead).is_some()) {
            cmp.undivided.push(lead);
        }
    }
    for g in result.cover_basis.iter().filter(|g| g.width() <= width) {
        if !theirs.normal_form(g, order, Some(width)).is_zero() {
            cmp.outside.push(g.clone());
        }
    }
    cmp
}
