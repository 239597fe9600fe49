//! Variables, monomials and the two symmetry actions.
//!
//! A ring is described by a [`RingSignature`]: a finite list of variable
//! orbits. Each orbit has an arity `k` and its variables are indexed by
//! `k`-tuples of distinct positive integers. Finite permutations of the
//! index set act on the tuples; strictly increasing maps ([`IncMap`]) act the
//! same way on elements whose width fits in the map's domain.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// A natural index. Indices are 1-based throughout.
pub type Index = u32;

/// Largest index a variable may carry.
pub const MAX_INDEX: Index = 255;
/// Largest orbit arity.
pub const MAX_ARITY: usize = 6;

/// Index tuple of a variable.
pub type IndexTuple = SmallVec<[Index; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("inc map with domain size {domain} applied to an element of width {width}")]
    DomainTooSmall { domain: usize, width: usize },
    #[error("inc map images must be positive and strictly increasing: {0:?}")]
    NotIncreasing(Vec<Index>),
    #[error("orbit {orbit}: {reason}")]
    BadOrbit { orbit: String, reason: String },
    #[error("variable of orbit {orbit}: {reason}")]
    BadVariable { orbit: String, reason: String },
    #[error("duplicate orbit label {0}")]
    DuplicateOrbit(String),
    #[error("ring has no orbits")]
    EmptyRing,
}

/// A permutation of tuple positions, stored 0-based as the image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// All permutations of `n` points in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
            if cur.len() == n {
                out.push(Perm(cur.clone()));
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// How an orbit's variables are named and rendered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrbitLabel {
    /// `name(i1,...,ik)`
    Tuple(String),
    /// `name[p1,...,pr,j]`: a fixed prefix followed by the single moving index.
    Row { name: String, prefix: Vec<u32> },
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Tuple(name) => write!(f, "{name}"),
            OrbitLabel::Row { name, prefix } => {
                write!(f, "{name}[")?;
                for p in prefix {
                    write!(f, "{p},")?;
                }
                write!(f, "*]")
            }
        }
    }
}

/// Which block of a graph ring an orbit belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    Y,
    X,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitSpec {
    pub label: OrbitLabel,
    pub arity: usize,
    /// Position permutations fixing the representative variable. Always
    /// contains the identity and is closed under composition.
    pub stabilizer: Vec<Perm>,
    pub block: Block,
}

impl OrbitSpec {
    pub fn tuple(name: impl Into<String>, arity: usize) -> OrbitSpec {
        OrbitSpec {
            label: OrbitLabel::Tuple(name.into()),
            arity,
            stabilizer: vec![Perm::identity(arity)],
            block: Block::Y,
        }
    }

    /// A tuple orbit whose variables are unordered (stabilizer = full `S_k`).
    pub fn symmetric(name: impl Into<String>, arity: usize) -> OrbitSpec {
        OrbitSpec {
            stabilizer: Perm::all(arity),
            ..OrbitSpec::tuple(name, arity)
        }
    }

    pub fn row(name: impl Into<String>, prefix: Vec<u32>, block: Block) -> OrbitSpec {
        OrbitSpec {
            label: OrbitLabel::Row {
                name: name.into(),
                prefix,
            },
            arity: 1,
            stabilizer: vec![Perm::identity(1)],
            block,
        }
    }

    pub fn name(&self) -> &str {
        match &self.label {
            OrbitLabel::Tuple(n) => n,
            OrbitLabel::Row { name, .. } => name,
        }
    }

    pub fn has_trivial_stabilizer(&self) -> bool {
        self.stabilizer.len() == 1
    }

    /// Lexicographically minimal tuple in the stabilizer class of `indices`.
    pub fn canonical_tuple(&self, indices: &[Index]) -> IndexTuple {
        let mut best: IndexTuple = indices.iter().copied().collect();
        if self.has_trivial_stabilizer() {
            return best;
        }
        for h in &self.stabilizer {
            let cand: IndexTuple = (0..indices.len()).map(|i| indices[h.apply(i)]).collect();
            if cand < best {
                best = cand;
            }
        }
        best
    }

    /// Every tuple in the stabilizer class of `indices`, sorted and deduplicated.
    pub fn class_members(&self, indices: &[Index]) -> Vec<IndexTuple> {
        let set: BTreeSet<IndexTuple> = self
            .stabilizer
            .iter()
            .map(|h| (0..indices.len()).map(|i| indices[h.apply(i)]).collect())
            .collect();
        set.into_iter().collect()
    }

    fn check(&self) -> Result<(), SymmetryError> {
        let bad = |reason: &str| SymmetryError::BadOrbit {
            orbit: self.label.to_string(),
            reason: reason.to_string(),
        };
        if self.stabilizer.iter().any(|p| p.len() != self.arity) {
            return Err(bad("stabilizer permutation of wrong degree"));
        }
        if !self.stabilizer.contains(&Perm::identity(self.arity)) {
            return Err(bad("stabilizer lacks the identity"));
        }
        for a in &self.stabilizer {
            if !self.stabilizer.contains(&a.inverse()) {
                return Err(bad("stabilizer not closed under inverse"));
            }
            for b in &self.stabilizer {
                if !self.stabilizer.contains(&a.compose(b)) {
                    return Err(bad("stabilizer not closed under composition"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    Y,
    YPrime,
    Z,
    X,
    /// Graph ring: Y-orbits first, then the X rows.
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSignature {
    orbits: Vec<OrbitSpec>,
    kind: RingKind,
}

impl RingSignature {
    pub fn new(orbits: Vec<OrbitSpec>, kind: RingKind) -> Result<RingSignature, SymmetryError> {
        if orbits.is_empty() {
            return Err(SymmetryError::EmptyRing);
        }
        if orbits.len() > 256 {
            return Err(SymmetryError::BadOrbit {
                orbit: orbits[256].label.to_string(),
                reason: "at most 256 orbits".into(),
            });
        }
        let mut labels = BTreeSet::new();
        for o in &orbits {
            o.check()?;
            if o.arity > MAX_ARITY {
                return Err(SymmetryError::BadOrbit {
                    orbit: o.label.to_string(),
                    reason: format!("arity above {MAX_ARITY}"),
                });
            }
            if !labels.insert(format!("{:?}", o.label)) {
                return Err(SymmetryError::DuplicateOrbit(o.label.to_string()));
            }
            if matches!(kind, RingKind::YPrime | RingKind::Z | RingKind::X)
                && !o.has_trivial_stabilizer()
            {
                return Err(SymmetryError::BadOrbit {
                    orbit: o.label.to_string(),
                    reason: "cover, Z and X rings need trivial stabilizers".into(),
                });
            }
        }
        Ok(RingSignature { orbits, kind })
    }

    /// `x[r,j]` for `r` in `1..=rows`.
    pub fn x_ring(rows: usize) -> RingSignature {
        let orbits = (1..=rows as u32)
            .map(|r| OrbitSpec::row("x", vec![r], Block::X))
            .collect();
        RingSignature::new(orbits, RingKind::X).expect("x ring")
    }

    /// `z[p,i,j]` for orbit `p` and row `i <= k_p`.
    pub fn z_ring(arities: &[usize]) -> RingSignature {
        let mut orbits = Vec::new();
        for (p, &k) in arities.iter().enumerate() {
            for i in 1..=k as u32 {
                orbits.push(OrbitSpec::row("z", vec![p as u32 + 1, i], Block::X));
            }
        }
        RingSignature::new(orbits, RingKind::Z).expect("z ring")
    }

    /// Trivial-stabilizer tuple ring with the given orbit names and arities.
    pub fn yprime(orbits: &[(&str, usize)]) -> RingSignature {
        let orbits = orbits
            .iter()
            .map(|&(n, k)| OrbitSpec::tuple(n, k))
            .collect();
        RingSignature::new(orbits, RingKind::YPrime).expect("yprime ring")
    }

    /// `Y` orbits followed by the `X` rows of `x`. Orbit ids of `x` are shifted
    /// by the number of `Y` orbits.
    pub fn product(y: &RingSignature, x: &RingSignature) -> RingSignature {
        let mut orbits: Vec<OrbitSpec> = y
            .orbits
            .iter()
            .cloned()
            .map(|mut o| {
                o.block = Block::Y;
                o
            })
            .collect();
        orbits.extend(x.orbits.iter().cloned().map(|mut o| {
            o.block = Block::X;
            o
        }));
        RingSignature::new(orbits, RingKind::Product).expect("product ring")
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn orbits(&self) -> &[OrbitSpec] {
        &self.orbits
    }

    pub fn orbit(&self, id: u16) -> &OrbitSpec {
        &self.orbits[id as usize]
    }

    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn max_arity(&self) -> usize {
        self.orbits.iter().map(|o| o.arity).max().unwrap_or(0)
    }

    pub fn has_trivial_stabilizers(&self) -> bool {
        self.orbits.iter().all(|o| o.has_trivial_stabilizer())
    }

    pub fn find_tuple_orbit(&self, name: &str) -> Option<u16> {
        self.orbits
            .iter()
            .position(|o| matches!(&o.label, OrbitLabel::Tuple(n) if n == name))
            .map(|p| p as u16)
    }

    pub fn find_row_orbit(&self, name: &str, prefix: &[u32]) -> Option<u16> {
        self.orbits
            .iter()
            .position(|o| {
                matches!(&o.label, OrbitLabel::Row { name: n, prefix: p } if n == name && p == prefix)
            })
            .map(|p| p as u16)
    }

    /// Builds a canonical variable after checking arity and distinctness.
    pub fn variable(&self, orbit: u16, indices: &[Index]) -> Result<Variable, SymmetryError> {
        let spec = self
            .orbits
            .get(orbit as usize)
            .ok_or_else(|| SymmetryError::BadVariable {
                orbit: format!("#{orbit}"),
                reason: "no such orbit".into(),
            })?;
        let bad = |reason: &str| SymmetryError::BadVariable {
            orbit: spec.label.to_string(),
            reason: reason.to_string(),
        };
        if indices.len() != spec.arity {
            return Err(bad("wrong number of indices"));
        }
        if indices.contains(&0) {
            return Err(bad("indices are 1-based"));
        }
        if indices.iter().any(|&i| i > MAX_INDEX) {
            return Err(bad("index too large"));
        }
        for (a, i) in indices.iter().enumerate() {
            if indices[..a].contains(i) {
                return Err(bad("indices must be distinct"));
            }
        }
        Ok(Variable {
            orbit,
            indices: spec.canonical_tuple(indices),
        })
    }

    /// Checks that every variable of `m` belongs to this ring and is canonical.
    pub fn contains(&self, m: &Monomial) -> bool {
        m.factors().iter().all(|(v, _)| {
            (v.orbit as usize) < self.orbits.len() && {
                let spec = self.orbit(v.orbit);
                v.indices.len() == spec.arity
                    && v.indices.iter().all(|&i| i > 0)
                    && spec.canonical_tuple(&v.indices) == v.indices
            }
        })
    }

    /// Applies a finite permutation of indices (given on `1..=n`, identity
    /// beyond) and re-canonicalizes.
    pub fn permute_monomial(&self, sigma: &[Index], m: &Monomial) -> Monomial {
        let map = |i: Index| -> Index {
            if (i as usize) <= sigma.len() {
                sigma[i as usize - 1]
            } else {
                i
            }
        };
        Monomial::from_factors(m.factors().iter().map(|(v, e)| {
            let moved: IndexTuple = v.indices.iter().map(|&i| map(i)).collect();
            (
                Variable {
                    orbit: v.orbit,
                    indices: self.orbit(v.orbit).canonical_tuple(&moved),
                },
                *e,
            )
        }))
    }

    pub fn fmt_variable(&self, v: &Variable) -> String {
        let spec = self.orbit(v.orbit);
        match &spec.label {
            OrbitLabel::Tuple(name) => {
                let parts: Vec<String> = v.indices.iter().map(|i| i.to_string()).collect();
                format!("{name}({})", parts.join(","))
            }
            OrbitLabel::Row { name, prefix } => {
                let mut parts: Vec<String> = prefix.iter().map(|i| i.to_string()).collect();
                parts.extend(v.indices.iter().map(|i| i.to_string()));
                format!("{name}[{}]", parts.join(","))
            }
        }
    }

    /// Space-separated factors in ascending variable order, `1` when empty.
    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = m
            .factors()
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    self.fmt_variable(v)
                } else {
                    format!("{}^{e}", self.fmt_variable(v))
                }
            })
            .collect();
        parts.join(" ")
    }
}

/// A variable: orbit id plus the canonical index tuple.
///
/// `Ord` is the variable order shared by every monomial order in the crate:
/// max index, then indices right-to-left, then orbit id. Strictly increasing
/// index maps preserve it, and every variable has finitely many predecessors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub orbit: u16,
    pub indices: IndexTuple,
}

impl Variable {
    /// Builds a variable without canonicalizing. Callers guarantee the tuple
    /// is already canonical for its orbit.
    pub fn raw(orbit: u16, indices: &[Index]) -> Variable {
        Variable {
            orbit,
            indices: indices.iter().copied().collect(),
        }
    }

    pub fn width(&self) -> Index {
        self.indices.iter().copied().max().unwrap_or(0)
    }

    /// The variable order packed into one integer: width, then up to six
    /// indices right-to-left, then the orbit id. Needs indices and orbit ids
    /// below 256.
    pub fn packed(&self) -> u64 {
        debug_assert!(self.indices.len() <= 6 && self.orbit < 256);
        let mut key = (self.width() as u64) << 56;
        for (slot, &i) in self.indices.iter().rev().enumerate() {
            debug_assert!(i < 256);
            key |= (i as u64) << (48 - 8 * slot);
        }
        key | self.orbit as u64
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Variable) -> Ordering {
        self.width()
            .cmp(&other.width())
            .then_with(|| self.indices.iter().rev().cmp(other.indices.iter().rev()))
            .then_with(|| self.orbit.cmp(&other.orbit))
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Variable) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A monomial: `(variable, exponent)` pairs sorted ascending by the variable
/// order, with positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    factors: Vec<(Variable, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Monomial {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn var_pow(v: Variable, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: vec![(v, e)],
        }
    }

    /// Collects factors, merging repeated variables and dropping zero exponents.
    pub fn from_factors(it: impl IntoIterator<Item = (Variable, u32)>) -> Monomial {
        let mut factors: Vec<(Variable, u32)> = it.into_iter().filter(|(_, e)| *e > 0).collect();
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Variable, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial { factors: out }
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn width(&self) -> Index {
        self.factors.iter().map(|(v, _)| v.width()).max().unwrap_or(0)
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        match self.factors.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(p) => self.factors[p].1,
            Err(_) => 0,
        }
    }

    /// Sorted distinct indices occurring in the monomial.
    pub fn support(&self) -> Vec<Index> {
        let mut s: Vec<Index> = self
            .factors
            .iter()
            .flat_map(|(v, _)| v.indices.iter().copied())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Flattened variable sequence with multiplicity.
    pub fn variables(&self) -> Vec<Variable> {
        self.factors
            .iter()
            .flat_map(|(v, e)| std::iter::repeat_n(v.clone(), *e as usize))
            .collect()
    }

    fn merge(&self, other: &Monomial, mut f: impl FnMut(u32, u32) -> Option<u32>) -> Option<Monomial> {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (v, e) = match ord {
                Ordering::Less => {
                    i += 1;
                    (&a[i - 1].0, f(a[i - 1].1, 0)?)
                }
                Ordering::Greater => {
                    j += 1;
                    (&b[j - 1].0, f(0, b[j - 1].1)?)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (&a[i - 1].0, f(a[i - 1].1, b[j - 1].1)?)
                }
            };
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        Some(Monomial { factors: out })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |x, y| Some(x + y)).expect("mul")
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.merge(other, |x, y| x.checked_sub(y))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for (v, e) in &self.factors {
            while j < other.factors.len() && other.factors[j].0 < *v {
                j += 1;
            }
            match other.factors.get(j) {
                Some((w, f)) if w == v && f >= e => j += 1,
                _ => return false,
            }
        }
        true
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, |x, y| Some(x.max(y))).expect("lcm")
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge(other, |x, y| Some(x.min(y))).expect("gcd")
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for (v, _) in &self.factors {
            while j < other.factors.len() && other.factors[j].0 < *v {
                j += 1;
            }
            if j < other.factors.len() && other.factors[j].0 == *v {
                return false;
            }
        }
        true
    }

    /// Relabels every index through `f`. `f` must be strictly increasing on
    /// the support so that canonical tuples stay canonical.
    pub fn map_indices_monotone(&self, f: impl Fn(Index) -> Index) -> Monomial {
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|(v, e)| {
                    (
                        Variable {
                            orbit: v.orbit,
                            indices: v.indices.iter().map(|&i| f(i)).collect(),
                        },
                        *e,
                    )
                })
                .collect(),
        }
    }

    /// Relabels orbit ids; the result is re-sorted.
    pub fn map_orbits(&self, f: impl Fn(u16) -> u16) -> Monomial {
        Monomial::from_factors(self.factors.iter().map(|(v, e)| {
            (
                Variable {
                    orbit: f(v.orbit),
                    indices: v.indices.clone(),
                },
                *e,
            )
        }))
    }

    /// Splits into the factors accepted by `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&Variable) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.factors.iter().cloned().partition(|(v, _)| pred(v));
        (Monomial { factors: a }, Monomial { factors: b })
    }
}

/// A strictly increasing map `{1..n} -> N`, stored by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncMap {
    images: Vec<Index>,
}

impl IncMap {
    pub fn new(images: Vec<Index>) -> Result<IncMap, SymmetryError> {
        let ok = images.first().is_none_or(|&a| a >= 1) && images.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(IncMap { images })
        } else {
            Err(SymmetryError::NotIncreasing(images))
        }
    }

    pub fn identity(n: usize) -> IncMap {
        IncMap {
            images: (1..=n as Index).collect(),
        }
    }

    /// `i -> i + by` on `1..=n`.
    pub fn shift(n: usize, by: Index) -> IncMap {
        IncMap {
            images: (1..=n as Index).map(|i| i + by).collect(),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Index] {
        &self.images
    }

    /// Largest image, 0 for the empty map.
    pub fn max_image(&self) -> Index {
        self.images.last().copied().unwrap_or(0)
    }

    /// `ρ(i)` for `1 <= i <= n`.
    pub fn at(&self, i: Index) -> Index {
        self.images[i as usize - 1]
    }

    /// `self ∘ inner`. Requires `inner`'s images to lie in `self`'s domain.
    pub fn compose(&self, inner: &IncMap) -> Result<IncMap, SymmetryError> {
        if inner.max_image() as usize > self.domain_size() {
            return Err(SymmetryError::DomainTooSmall {
                domain: self.domain_size(),
                width: inner.max_image() as usize,
            });
        }
        Ok(IncMap {
            images: inner.images.iter().map(|&i| self.at(i)).collect(),
        })
    }

    /// Smallest strictly increasing extension to domain `n`: new points get
    /// the least values the increase condition allows.
    pub fn extend_to(&self, n: usize) -> IncMap {
        if n <= self.images.len() {
            return self.clone();
        }
        let mut images = self.images.clone();
        let mut last = self.max_image();
        for _ in self.images.len()..n {
            last += 1;
            images.push(last);
        }
        IncMap { images }
    }

    pub fn apply(&self, m: &Monomial) -> Result<Monomial, SymmetryError> {
        let w = m.width() as usize;
        if w > self.domain_size() {
            return Err(SymmetryError::DomainTooSmall {
                domain: self.domain_size(),
                width: w,
            });
        }
        Ok(m.map_indices_monotone(|i| self.at(i)))
    }

    /// All strictly increasing maps `{1..from} -> {1..to}`, lexicographically.
    pub fn all_into(from: usize, to: usize) -> Vec<IncMap> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(from);
        fn rec(from: usize, to: Index, next: Index, cur: &mut Vec<Index>, out: &mut Vec<IncMap>) {
            if cur.len() == from {
                out.push(IncMap {
                    images: cur.clone(),
                });
                return;
            }
            let remaining = (from - cur.len()) as Index;
            let mut v = next;
            while v + remaining - 1 <= to {
                cur.push(v);
                rec(from, to, v + 1, cur, out);
                cur.pop();
                v += 1;
            }
        }
        rec(from, to as Index, 1, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for IncMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Compresses the support of `m` onto `{1..s}`. Returns the compressed
/// monomial and the map sending it back to `m`.
pub fn canonical_form(m: &Monomial) -> (Monomial, IncMap) {
    let supp = m.support();
    let compressed = m.map_indices_monotone(|i| supp.binary_search(&i).expect("in support") as Index + 1);
    (compressed, IncMap { images: supp })
}

/// Pattern of a divisor monomial prepared for repeated shift searches.
/// (orbit, support positions of the indices, exponent).
type PatternVar = (u16, SmallVec<[usize; 4]>, u32);

#[derive(Debug, Clone)]
pub struct ShiftPattern {
    support: Vec<Index>,
    /// For each support position, the variables whose largest index sits
    /// there.
    by_last: Vec<Vec<PatternVar>>,
    degree: u32,
    width: usize,
}

impl ShiftPattern {
    pub fn new(a: &Monomial) -> ShiftPattern {
        let support = a.support();
        let mut by_last = vec![Vec::new(); support.len()];
        for (v, e) in a.factors() {
            let pos: SmallVec<[usize; 4]> = v
                .indices
                .iter()
                .map(|i| support.binary_search(i).expect("in support"))
                .collect();
            let last = *pos.iter().max().expect("variables have indices");
            by_last[last].push((v.orbit, pos, *e));
        }
        ShiftPattern {
            support,
            by_last,
            degree: a.degree(),
            width: a.width() as usize,
        }
    }

    /// Lexicographically smallest `ρ` (on `{1..w(a)}`) with `ρ(a) | b`.
    pub fn find(&self, b: &Monomial) -> Option<IncMap> {
        if self.degree > b.degree() {
            return None;
        }
        if self.support.is_empty() {
            return Some(IncMap::identity(self.width));
        }
        let target = b.support();
        if target.len() < self.support.len() {
            return None;
        }
        let mut assign: Vec<Index> = Vec::with_capacity(self.support.len());
        if self.search(b, &target, 0, &mut assign) {
            Some(self.to_inc_map(&assign))
        } else {
            None
        }
    }

    fn search(&self, b: &Monomial, target: &[Index], start: usize, assign: &mut Vec<Index>) -> bool {
        let pos = assign.len();
        if pos == self.support.len() {
            return true;
        }
        let remaining = self.support.len() - pos;
        let min_value = match assign.last() {
            Some(&prev) => prev + (self.support[pos] - self.support[pos - 1]),
            None => self.support[0],
        };
        for t in start..=target.len() - remaining {
            let value = target[t];
            if value < min_value {
                continue;
            }
            assign.push(value);
            let ok = self.by_last[pos].iter().all(|(orbit, positions, e)| {
                let idx: IndexTuple = positions.iter().map(|&p| assign[p]).collect();
                b.exponent(&Variable {
                    orbit: *orbit,
                    indices: idx,
                }) >= *e
            });
            if ok && self.search(b, target, t + 1, assign) {
                return true;
            }
            assign.pop();
        }
        false
    }

    /// Builds the map on `{1..w(a)}` from the support assignment, filling
    /// the gaps with the smallest admissible values.
    fn to_inc_map(&self, assign: &[Index]) -> IncMap {
        let mut images = Vec::with_capacity(self.width);
        let mut k = 0;
        for i in 1..=self.width as Index {
            if k < self.support.len() && self.support[k] == i {
                images.push(assign[k]);
                k += 1;
            } else if k == 0 {
                images.push(i);
            } else {
                images.push(assign[k - 1] + (i - self.support[k - 1]));
            }
        }
        IncMap { images }
    }
}

/// Equivariant divisibility: returns `(ρ, c)` with `c · ρ(a) = b`.
pub fn equivariant_divides(a: &Monomial, b: &Monomial) -> Option<(IncMap, Monomial)> {
    let rho = ShiftPattern::new(a).find(b)?;
    let shifted = rho.apply(a).expect("domain covers width");
    let c = b.div(&shifted).expect("search guarantees divisibility");
    Some((rho, c))
}
