use std::collections::BTreeSet;

use proptest::prelude::*;

use reslogic::syntax::{parse_fact, Fact, Term, Var};
use reslogic::world::{holds_fact, parse_world, random_world, GroundAtom, Interval, Situation, StepWorld, Time};

const DMAX: u32 = 2;

type Assignment = (u32, u32);

fn all_assignments() -> BTreeSet<Assignment> {
    (0..=DMAX).flat_map(|x| (0..=DMAX).map(move |y| (x, y))).collect()
}

fn value(t: &Term, (x, y): Assignment) -> Option<u32> {
    match t {
        Term::Const(c) => (*c <= DMAX).then_some(*c),
        Term::Var(v) => Some(if v.as_str() == "x" { x } else { y }),
        Term::Sum(a, b) => value(a, (x, y))?.checked_add(value(b, (x, y))?).filter(|s| *s <= DMAX),
    }
}

/// Satisfaction sets over the two variables, computed bottom-up.
fn sat(s: &Situation, f: &Fact) -> BTreeSet<Assignment> {
    let all = all_assignments();
    let not = |a: BTreeSet<Assignment>| all.difference(&a).copied().collect::<BTreeSet<_>>();
    let quant = |v: &Var, body: BTreeSet<Assignment>, every: bool| -> BTreeSet<Assignment> {
        all.iter()
            .copied()
            .filter(|&(x, y)| {
                let mut hits = (0..=DMAX).map(|c| if v.as_str() == "x" { (c, y) } else { (x, c) }).map(|a| body.contains(&a));
                if every {
                    hits.all(|h| h)
                } else {
                    hits.any(|h| h)
                }
            })
            .collect()
    };
    match f {
        Fact::False => BTreeSet::new(),
        Fact::True => all.clone(),
        Fact::Atom(n, args) => all
            .iter()
            .copied()
            .filter(|&a| {
                let vals: Option<Vec<u32>> = args.iter().map(|t| value(t, a)).collect();
                vals.is_some_and(|v| s.contains(n, &v))
            })
            .collect(),
        Fact::Eq(l, r) => all.iter().copied().filter(|&a| matches!((value(l, a), value(r, a)), (Some(p), Some(q)) if p == q)).collect(),
        Fact::Not(a) => not(sat(s, a)),
        Fact::Implies(a, b) => not(sat(s, a)).union(&sat(s, b)).copied().collect(),
        Fact::And(a, b) => sat(s, a).intersection(&sat(s, b)).copied().collect(),
        Fact::Or(a, b) => sat(s, a).union(&sat(s, b)).copied().collect(),
        Fact::Iff(a, b) => {
            let (p, q) = (sat(s, a), sat(s, b));
            all.iter().copied().filter(|x| p.contains(x) == q.contains(x)).collect()
        }
        Fact::Forall(v, a) => quant(v, sat(s, a), true),
        Fact::Exists(v, a) => quant(v, sat(s, a), false),
    }
}

fn close(f: Fact) -> Fact {
    let free = f.free_vars();
    free.into_iter().fold(f, |f, v| Fact::Forall(v, Box::new(f)))
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0u32..4).prop_map(Term::Const), prop::sample::select(vec!["x", "y"]).prop_map(Term::var)];
    leaf.prop_recursive(1, 3, 2, |t| (t.clone(), t).prop_map(|(a, b)| Term::sum(a, b)))
}

/// Facts of depth at most 4.
fn fact() -> impl Strategy<Value = Fact> {
    let leaf = prop_oneof![
        Just(Fact::False),
        Just(Fact::True),
        Just(Fact::prop("A")),
        term().prop_map(|t| Fact::atom("B", vec![t])),
        (term(), term()).prop_map(|(a, b)| Fact::atom("C", vec![a, b])),
        (term(), term()).prop_map(|(a, b)| Fact::Eq(a, b)),
    ];
    leaf.prop_recursive(3, 24, 2, |f| {
        let v = prop::sample::select(vec!["x", "y"]).prop_map(Var::new);
        prop_oneof![
            f.clone().prop_map(Fact::not),
            (f.clone(), f.clone()).prop_map(|(a, b)| Fact::Implies(Box::new(a), Box::new(b))),
            (f.clone(), f.clone()).prop_map(|(a, b)| Fact::and(a, b)),
            (f.clone(), f.clone()).prop_map(|(a, b)| Fact::or(a, b)),
            (f.clone(), f.clone()).prop_map(|(a, b)| Fact::iff(a, b)),
            (v.clone(), f.clone()).prop_map(|(v, a)| Fact::Forall(v, Box::new(a))),
            (v, f).prop_map(|(v, a)| Fact::Exists(v, Box::new(a))),
        ]
    })
}

fn pool() -> Vec<GroundAtom> {
    let mut p = vec![GroundAtom::prop("A")];
    for i in 0..=DMAX {
        p.push(GroundAtom::new("B", vec![i]));
        for j in 0..=DMAX {
            p.push(GroundAtom::new("C", vec![i, j]));
        }
    }
    p
}

fn situation() -> impl Strategy<Value = Situation> {
    prop::sample::subsequence(pool(), 0..=pool().len()).prop_map(Situation::new)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn holds_fact_agrees_with_satisfaction_sets(f in fact(), s in situation()) {
        prop_assume!(f.depth() <= 4);
        let c = close(f);
        let expected = sat(&s, &c).contains(&(0, 0));
        prop_assert_eq!(holds_fact(&s, &c, DMAX).unwrap(), expected, "{}", c);
        prop_assert_eq!(holds_fact(&s, &c.expand(), DMAX).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn exists_is_dual_to_forall(f in fact(), s in situation(), v in prop::sample::select(vec!["x", "y"])) {
        let ex = close(Fact::Exists(Var::new(v), Box::new(f.clone())));
        let dual = close(Fact::not(Fact::Forall(Var::new(v), Box::new(Fact::not(f)))));
        prop_assert_eq!(holds_fact(&s, &ex, DMAX).unwrap(), holds_fact(&s, &dual, DMAX).unwrap());
    }
}

#[test]
fn fact_examples() {
    let s = Situation::new([GroundAtom::new("L", vec![2]), GroundAtom::prop("Np")]);
    let holds = |t: &str| holds_fact(&s, &parse_fact(t).unwrap(), 31).unwrap();
    assert!(holds("L(2) & Np"));
    assert!(holds("ex x. L(x) & x + x = 4"));
    assert!(!holds("all x. L(x)"));
    assert!(holds("2 + 0 = 2 & 2 + 2 = 4 & 2 + 4 = 6 & 6 + 4 = 10"));
    assert!(!holds("L(1 + 2)"));
    assert!(holds("~Q(0)"));
}

#[test]
fn time_and_intervals() {
    assert!(Time::At(0) < Time::At(1));
    assert!(Time::At(u64::MAX) < Time::Infinity);
    assert!(Interval::finite(3, 3).is_err());
    assert!(Interval::finite(4, 3).is_err());
    assert_eq!(Interval::parse("(2,inf)").unwrap(), Interval::unbounded(2));
    assert_eq!(Interval::parse("0,5").unwrap(), Interval::finite(0, 5).unwrap());
    assert!(Interval::parse("(5,1)").is_err());
}

#[test]
fn situations_are_right_continuous() {
    let (w, _) = parse_world("@0: A\n@3: B\n@7:\n").unwrap();
    assert!(w.situation_at(2).contains("A", &[]));
    assert!(w.situation_at(3).contains("B", &[]));
    assert!(!w.situation_at(3).contains("A", &[]));
    assert!(w.situation_at(6).contains("B", &[]));
    assert!(w.situation_at(7).atoms.is_empty());
    assert!(w.situation_at(1_000_000).atoms.is_empty());
    assert_eq!(w.last_change(), 7);
    assert_eq!(w.change_points().collect::<Vec<_>>(), vec![3, 7]);
}

#[test]
fn worlds_must_start_at_zero_and_increase() {
    assert!(StepWorld::new(vec![(1, Situation::default())]).is_err());
    assert!(StepWorld::new(vec![(0, Situation::default()), (0, Situation::default())]).is_err());
    assert!(parse_world("").is_err());
    let (w, _) = parse_world("@0: A\n@2: A\n@4: B").unwrap();
    assert_eq!(w.normalized().segments().len(), 2);
}

#[test]
fn random_worlds() {
    let p = pool();
    assert_eq!(random_world(1, DMAX, 4, &p), random_world(1, DMAX, 4, &p));
    for seed in 0..1000 {
        let w = random_world(seed, DMAX, 4, &p);
        assert!(w.check_invariants(), "seed {seed}");
        assert!(w.segments().len() <= 4);
        assert_eq!(random_world(seed, DMAX, 1, &p).segments().len(), 1);
        // Atoms beyond the domain never appear.
        let small = random_world(seed, 0, 3, &p);
        assert!(small.segments().iter().all(|(_, s)| s.atoms.iter().all(|a| a.args.iter().all(|c| *c == 0))));
    }
}
