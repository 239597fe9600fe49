mod common;

use std::sync::Arc;

use common::{brute_force_failures, plain_nf, random_x_binomial, rng, shifted_members, x_ring};
use incgb::engine::{
    classical_buchberger, generator_truncation, is_equivariant_gb, truncated_egb, EngineConfig, Strategy,
};
use incgb::order::{Order, OrderKind};
use incgb::poly::Polynomial;
use incgb::symmetry::{equivariant_divides, Monomial, RingSignature, Variable};
use incgb::SmallRational as Q;

fn x(r: u16, j: u32) -> Monomial {
    Monomial::var(Variable::raw(r, &[j]))
}

/// Small inputs with known finite bases, plus seeded random binomial sets.
fn examples() -> Vec<(Vec<Polynomial<Q>>, Order)> {
    let one_row = x_ring(1);
    let lex = Order::new(OrderKind::Lex, one_row.clone()).unwrap();
    let grevlex = Order::new(OrderKind::GradedRevLex, one_row).unwrap();
    let mut out = vec![
        (vec![Polynomial::binomial(x(0, 1).mul(&x(0, 2)), x(0, 1))], lex.clone()),
        (vec![Polynomial::binomial(x(0, 1), x(0, 2))], lex.clone()),
        (vec![Polynomial::binomial(x(0, 1).mul(&x(0, 1)), x(0, 2))], grevlex.clone()),
        (vec![Polynomial::binomial(x(0, 2).mul(&x(0, 2)), x(0, 1).mul(&x(0, 3)))], grevlex),
    ];
    let mut rng = rng(21);
    let two_rows = x_ring(2);
    for k in 0..6 {
        let kind = if k % 2 == 0 { OrderKind::GradedRevLex } else { OrderKind::Lex };
        let order = Order::new(kind, two_rows.clone()).unwrap();
        let f: Vec<Polynomial<Q>> = (0..1 + k % 2).map(|_| random_x_binomial(&mut rng, 2, 2, 2)).collect();
        out.push((f, order));
    }
    out
}

fn run(f: &[Polynomial<Q>], order: &Order, cfg: &EngineConfig) -> Option<Vec<Polynomial<Q>>> {
    truncated_egb(f, order, 6, cfg).ok().map(|(g, _)| g)
}

#[test]
fn bases_lie_in_the_ideal() {
    let cfg = EngineConfig::default();
    for (f, order) in examples() {
        let Some(g) = run(&f, &order, &cfg) else { continue };
        for h in &g {
            let n = h.width() + 2;
            let truncation = classical_buchberger(&generator_truncation(&f, n as usize), &order, n);
            assert!(plain_nf(h, &truncation, &order).is_zero(), "{h:?} not in <{f:?}>");
        }
    }
}

#[test]
fn bases_cover_every_truncation() {
    let cfg = EngineConfig::default();
    let mut finished = 0;
    for (f, order) in examples() {
        let Some(g) = run(&f, &order, &cfg) else { continue };
        finished += 1;
        for n in 1..=6u32 {
            let trunc = generator_truncation(&f, n as usize);
            if trunc.is_empty() {
                continue;
            }
            let reducers: Vec<Polynomial<Q>> = g.iter().flat_map(|h| shifted_members(h, n as usize + 3)).collect();
            for h in classical_buchberger(&trunc, &order, n) {
                assert!(plain_nf(&h, &reducers, &order).is_zero(), "width {n}: {h:?} for {f:?}");
            }
        }
    }
    assert!(finished >= 6, "only {finished} examples finished");
}

#[test]
fn output_is_deterministic() {
    for (f, order) in examples() {
        let one = EngineConfig::default();
        let many = EngineConfig { threads: 4, ..EngineConfig::default() };
        let a = run(&f, &order, &one);
        assert_eq!(a, run(&f, &order, &one));
        assert_eq!(a, run(&f, &order, &many));
        let eq = EngineConfig { strategy: Strategy::Equivariant, ..EngineConfig::default() };
        let eq4 = EngineConfig { threads: 4, ..eq.clone() };
        assert_eq!(run(&f, &order, &eq), run(&f, &order, &eq4));
    }
}

/// Leads of all shifts within width `n`, reduced to the minimal ones.
fn initial_ideal(g: &[Polynomial<Q>], order: &Order, n: usize) -> Vec<Monomial> {
    let mut leads: Vec<Monomial> = g
        .iter()
        .flat_map(|h| shifted_members(h, n))
        .map(|h| h.lead_monomial(order).unwrap())
        .collect();
    leads.sort_by_key(|m| (m.degree(), format!("{m:?}")));
    let mut min: Vec<Monomial> = Vec::new();
    for m in leads {
        if !min.iter().any(|l| l.divides(&m)) {
            min.push(m);
        }
    }
    min.sort_by_key(|m| format!("{m:?}"));
    min
}

#[test]
fn coprime_pruning_keeps_initial_ideals() {
    for (f, order) in examples() {
        let on = EngineConfig::default();
        let off = EngineConfig { prune_coprime: false, ..EngineConfig::default() };
        let (Some(a), Some(b)) = (run(&f, &order, &on), run(&f, &order, &off)) else { continue };
        assert_eq!(initial_ideal(&a, &order, 5), initial_ideal(&b, &order, 5));
    }
}

#[test]
fn strategies_agree_on_initial_ideals() {
    for (f, order) in examples() {
        let eq = EngineConfig { strategy: Strategy::Equivariant, ..EngineConfig::default() };
        let (Some(a), Some(b)) = (run(&f, &order, &EngineConfig::default()), run(&f, &order, &eq)) else {
            continue;
        };
        for (g, h) in [(&a, &b), (&b, &a)] {
            for p in g {
                let l = p.lead_monomial(&order).unwrap();
                assert!(h.iter().any(|q| equivariant_divides(&q.lead_monomial(&order).unwrap(), &l).is_some()));
            }
        }
    }
}

#[test]
fn criterion_matches_brute_force() {
    let mut rng = rng(31);
    let ring: Arc<RingSignature> = x_ring(2);
    let mut seen = [0usize; 2];
    for k in 0..24 {
        let kind = if k % 2 == 0 { OrderKind::GradedRevLex } else { OrderKind::Lex };
        let order = Order::new(kind, ring.clone()).unwrap();
        let f: Vec<Polynomial<Q>> = (0..1 + k % 3).map(|_| random_x_binomial(&mut rng, 2, 2, 2)).collect();
        let report = is_equivariant_gb(&f, &order, &EngineConfig::default());
        let brute = brute_force_failures(&f, &order, 5, 2).is_empty();
        assert_eq!(report.is_equivariant_gb, brute, "{f:?}");
        seen[brute as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}
