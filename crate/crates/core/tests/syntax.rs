use std::collections::BTreeSet;

use proptest::prelude::*;

use reslogic::syntax::{
    apply_substitution, parse, parse_fact, parse_process, parse_resource, print_document, Conjunct, DoNode, DoneNode,
    Fact, LeadChain, LeafKind, Level, Link, Multiplicity, Potential, Process, Resource, Substitution, Term, Var,
};
use reslogic::Error;

fn vars(names: &[&str]) -> BTreeSet<Var> {
    names.iter().map(|n| Var::new(*n)).collect()
}

#[test]
fn parse_examples() {
    let p = parse_process("first P() .-> first P()").unwrap();
    assert_eq!(p, Process::implies(Process::First(Fact::prop("P")), Process::First(Fact::prop("P"))));

    let doc = parse("def Theta := >> ( <<(a1 Theta), <<(a2 Theta), <<(a3 Theta) );", Level::Definitions);
    // Effects must be processes; undeclared names are syntax errors.
    assert!(doc.is_err());
    let src = "proc a1 := first A1; proc a2 := first A2; proc a3 := first A3;\n\
               def Theta := >> ( <<(a1 Theta), <<(a2 Theta), <<(a3 Theta) );";
    let doc = parse(src, Level::Definitions).unwrap();
    let theta = &doc.defs.defs["Theta"];
    assert!(theta.vars.is_empty());
    assert_eq!(theta.branches.len(), 3);
    for (k, d) in theta.branches.iter().enumerate() {
        let [Resource::Do { effect: Process::Named(n, _), potential: Potential::Ref(r) }] = d.choices.as_slice() else {
            panic!("branch {k}: {d}");
        };
        assert_eq!((n.as_str(), r.as_str()), ([ "a1", "a2", "a3"][k], "Theta"));
    }

    match parse_resource("first tt >> x (<<(R(x)), <<(S(x)) extra") {
        Err(Error::Syntax { line, col, msg }) => assert!(line == 1 && col > 1 && msg.contains("unbalanced"), "{col} {msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_error_kinds() {
    assert!(matches!(parse_fact("P(1) & P(1, 2)"), Err(Error::Arity { .. })));
    match parse_resource("first A Nowhere") {
        Err(Error::Syntax { msg, col, .. }) => assert!(msg.contains("unknown definition Nowhere") && col == 9, "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("def T := >> (<<(first A >>));", Level::Definitions), Err(Error::Shape { .. })));
    assert!(matches!(parse_process("first A ~>[3,2] first B"), Err(Error::Syntax { .. })));
    // Line and column point into the second line.
    match parse_process("first A .&\n  .& first B") {
        Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn printing_keeps_sugar_and_references() {
    let p = parse_process("first A .-> (first B .& upto C)").unwrap();
    assert_eq!(p.to_string(), "first A() .-> first B() .& upto C()");
    let src = "proc a := first A;\ndef Theta := >> (<<(a Theta));\na Theta :-> a Theta;";
    let doc = parse(src, Level::Resource).unwrap();
    let printed = print_document(&doc);
    assert!(printed.contains("a Theta :-> a Theta"), "{printed}");
    assert_eq!(parse(&printed, Level::Resource).unwrap(), doc);
}

#[test]
fn free_variable_examples() {
    let (r, _) = parse_resource(":all x. R(x, y)").unwrap();
    assert_eq!(r.free_vars(), vars(&["y"]));
    let (r, _) = parse_resource("first tt >> x (<< y (R(x, y)))").unwrap();
    assert_eq!(r.free_vars(), vars(&[]));
    let p = parse_process("first L1(x) .-> first L1(x)").unwrap();
    assert_eq!(p.free_vars(), vars(&["x"]));
    assert!(!p.is_closed());
    let f = parse_fact("all x. ex y. L(x + y, z)").unwrap();
    assert_eq!(f.free_vars(), vars(&["z"]));
}

#[test]
fn derived_operators_expand_to_the_basic_ones() {
    let f = |s: &str| parse_fact(s).unwrap().expand();
    let a = Fact::prop("A");
    let b = Fact::prop("B");
    let imp = |x: Fact, y: Fact| Fact::Implies(Box::new(x), Box::new(y));
    let not = |x: Fact| imp(x, Fact::False);
    assert_eq!(f("~A"), not(a.clone()));
    assert_eq!(f("tt"), not(Fact::False));
    assert_eq!(f("A \\/ B"), imp(not(a.clone()), b.clone()));
    assert_eq!(f("A & B"), not(imp(not(not(a.clone())), not(b.clone()))));
    assert_eq!(f("ex x. P(x)"), not(Fact::Forall(Var::new("x"), Box::new(not(Fact::atom("P", vec![Term::var("x")]))))));
    let p = |s: &str| parse_process(s).unwrap().expand();
    assert_eq!(p("updown A"), p("first A .& upto A"));
    assert_eq!(p("down A"), p("first A .& inner A"));
    assert_eq!(p("first A |>= first B"), p("first A .\\/ (first A |> first B)"));
    assert_eq!(p(".~ first A"), p("first A .-> box ff"));
}

fn letter_image(params: &[&str], body: &str) -> (Vec<Var>, Resource) {
    (params.iter().map(|p| Var::new(*p)).collect(), parse_resource(body).unwrap().0)
}

#[test]
fn substitution_examples() {
    let mut tau = Substitution::new(true);
    let (ps, img) = letter_image(&[], "first tt >> (<<(first tt >>))");
    tau.insert("P", ps, img.clone()).unwrap();
    let (p, _) = parse_resource("P").unwrap();
    assert_eq!(apply_substitution(&p, &tau).unwrap(), img);
    let (pp, _) = parse_resource("P :-> P").unwrap();
    assert_eq!(apply_substitution(&pp, &tau).unwrap(), Resource::implies(img.clone(), img));

    let mut tau = Substitution::new(false);
    let (ps, img) = letter_image(&["x1", "x2"], "first L(x1, x2) >>");
    tau.insert("Q", ps, img).unwrap();
    let (q, _) = parse_resource("Q(3, y)").unwrap();
    assert_eq!(apply_substitution(&q, &tau).unwrap(), parse_resource("first L(3, y) >>").unwrap().0);

    // Missing letters and pool clashes are errors.
    let (r, _) = parse_resource("P(2)").unwrap();
    assert!(matches!(apply_substitution(&r, &tau), Err(Error::Substitution(_))));
    let (r, _) = parse_resource(":all x1. Q(x1, 0)").unwrap();
    assert!(matches!(apply_substitution(&r, &tau), Err(Error::Substitution(_))));
    // A safe substitution refuses effectful images.
    let (ps, img) = letter_image(&[], "first A >>");
    assert!(Substitution::new(true).insert("P", ps, img).is_err());
}

#[test]
fn expand_once_unfolds_one_level() {
    let src = "proc a := first A;\ndef Theta := >> (<<(a Theta));\na Theta;";
    let doc = parse(src, Level::Resource).unwrap();
    let r = doc.resource().unwrap();
    let once = doc.defs.expand_once(r).unwrap();
    let Resource::Do { potential: Potential::Inline(n), .. } = &once else { panic!("{once}") };
    assert_eq!(n, &doc.defs.defs["Theta"]);
    let bang = Resource::bang(r.clone());
    assert_eq!(doc.defs.expand_once(&bang).unwrap(), Resource::and(r.clone(), bang.clone()));
    let plain = parse_resource("first A >> (<<(first B >>))").unwrap().0;
    assert_eq!(doc.defs.expand_once(&plain).unwrap(), plain);
}

#[test]
fn corpus_files_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let prelude = std::fs::read_to_string(format!("{dir}/assembly.rl")).unwrap();
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let path = e.unwrap().path();
        if path.extension().and_then(|x| x.to_str()) != Some("rl") {
            continue;
        }
        let own = std::fs::read_to_string(&path).unwrap();
        let text = if path.ends_with("assembly.rl") { own } else { format!("{prelude}\n{own}") };
        let level = match path.file_stem().and_then(|x| x.to_str()) {
            Some("assembly") => Level::Definitions,
            Some("assembly-process") => Level::Process,
            _ => Level::Resource,
        };
        let doc = parse(&text, level).unwrap();
        let printed = print_document(&doc);
        assert_eq!(parse(&printed, level).unwrap(), doc, "{}", path.display());
        assert_eq!(print_document(&parse(&printed, level).unwrap()), printed);
        n += 1;
    }
    assert!(n >= 4);
}

// ---- generators ----

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0u32..6).prop_map(Term::Const), prop::sample::select(vec!["x", "y"]).prop_map(Term::var)];
    leaf.prop_recursive(2, 6, 2, |t| (t.clone(), t).prop_map(|(a, b)| Term::sum(a, b)))
}

fn fact() -> impl Strategy<Value = Fact> {
    let leaf = prop_oneof![
        Just(Fact::False),
        Just(Fact::True),
        Just(Fact::prop("A")),
        term().prop_map(|t| Fact::atom("B", vec![t])),
        (term(), term()).prop_map(|(a, b)| Fact::Eq(a, b)),
    ];
    leaf.prop_recursive(3, 12, 2, |f| {
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

fn chain(head: Process, nexts: Vec<Process>, gaps: Vec<(u64, u64)>, open_ended: bool) -> Process {
    let mut t = 0;
    let links = nexts
        .into_iter()
        .zip(gaps)
        .enumerate()
        .map(|(i, (next, (g1, g2)))| {
            let after = t + g1 + u64::from(i > 0);
            let before = after + 1 + g2;
            t = before;
            Link { after, before, next }
        })
        .collect();
    Process::Chain(LeadChain { head: Box::new(head), links, open_ended })
}

fn fact_leaf() -> impl Strategy<Value = Process> {
    fact().prop_flat_map(|f| {
        prop::sample::select(vec![
            Process::First(f.clone()),
            Process::Inner(f.clone()),
            Process::Upto(f.clone()),
            Process::Always(f.clone()),
            Process::UpDown(f.clone()),
            Process::Down(f),
        ])
    })
}

fn finitary(p: impl Strategy<Value = Process> + Clone + 'static) -> BoxedStrategy<Process> {
    let v = prop::sample::select(vec!["x", "y"]);
    prop_oneof![
        p.clone().prop_map(Process::not),
        p.clone().prop_map(Process::rep),
        p.clone().prop_map(Process::wrep),
        (p.clone(), p.clone()).prop_map(|(a, b)| Process::implies(a, b)),
        (p.clone(), p.clone()).prop_map(|(a, b)| Process::and(a, b)),
        (p.clone(), p.clone()).prop_map(|(a, b)| Process::or(a, b)),
        (p.clone(), p.clone()).prop_map(|(a, b)| Process::iff(a, b)),
        (p.clone(), p.clone()).prop_map(|(a, b)| Process::seq(a, b)),
        (p.clone(), p.clone()).prop_map(|(a, b)| Process::wseq(a, b)),
        (v.clone(), p.clone()).prop_map(|(v, a)| Process::forall(v, a)),
        (v, p).prop_map(|(v, a)| Process::exists(v, a)),
    ]
    .boxed()
}

fn finitary_process() -> impl Strategy<Value = Process> {
    fact_leaf().prop_recursive(3, 16, 2, finitary)
}

/// Includes chains and infinitary conjunctions.
fn process() -> impl Strategy<Value = Process> {
    fact_leaf().prop_recursive(3, 16, 3, |p| {
        let mult = prop_oneof![(1u32..4).prop_map(Multiplicity::Finite), Just(Multiplicity::Unbounded)];
        prop_oneof![
            4 => finitary(p.clone()),
            1 => (p.clone(), prop::collection::vec(p.clone(), 1..3), prop::collection::vec((0u64..3, 0u64..3), 2), any::<bool>())
                .prop_map(|(h, ns, gs, o)| chain(h, ns, gs, o)),
            1 => prop::collection::vec((p, mult), 0..3).prop_map(|cs| Process::InfConj(
                cs.into_iter().map(|(process, multiplicity)| Conjunct { process, multiplicity }).collect()
            )),
        ]
    })
}

fn var_list() -> impl Strategy<Value = Vec<Var>> {
    prop::sample::subsequence(vec!["u", "v", "w"], 0..3).prop_map(|vs| vs.into_iter().map(Var::new).collect())
}

fn resource() -> impl Strategy<Value = Resource> {
    let leaf = prop_oneof![
        Just(Resource::letter("P")),
        term().prop_map(|t| Resource::Letter("Q".into(), vec![t])),
        finitary_process().prop_map(|p| Resource::Do { effect: p, potential: Potential::Inline(DoNode::empty()) }),
        Just(Resource::rfalse()),
        Just(Resource::rtrue()),
    ];
    leaf.prop_recursive(3, 12, 3, |r| {
        let v = prop::sample::select(vec!["x", "y"]).prop_map(Var::new);
        fn bx(r: Resource) -> Box<Resource> {
            Box::new(r)
        }
        let done = (var_list(), prop::collection::vec(r.clone(), 1..3)).prop_map(|(vars, choices)| DoneNode { vars, choices });
        prop_oneof![
            (finitary_process(), var_list(), prop::collection::vec(done, 0..3)).prop_map(|(effect, vars, branches)| Resource::Do {
                effect,
                potential: Potential::Inline(DoNode { vars, branches })
            }),
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::implies(a, b)),
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::and(a, b)),
            (v.clone(), r.clone()).prop_map(|(v, a)| Resource::Forall(v, bx(a))),
            r.clone().prop_map(Resource::bang),
            r.clone().prop_map(|a| Resource::Not(bx(a))),
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::Or(bx(a), bx(b))),
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::With(bx(a), bx(b))),
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::Plus(bx(a), bx(b))),
            (v.clone(), r.clone()).prop_map(|(v, a)| Resource::Exists(v, bx(a))),
            (v.clone(), r.clone()).prop_map(|(v, a)| Resource::AForall(v, bx(a))),
            (v, r).prop_map(|(v, a)| Resource::AExists(v, bx(a))),
        ]
    })
}

/// Schemata over letters P and Q(t) built with `:->`, `:&` and `:all`.
fn scheme() -> impl Strategy<Value = Resource> {
    let leaf = prop_oneof![
        Just(Resource::letter("P")),
        prop_oneof![(0u32..4).prop_map(Term::Const), Just(Term::var("x"))].prop_map(|t| Resource::Letter("Q".into(), vec![t])),
    ];
    leaf.prop_recursive(4, 16, 2, |r| {
        prop_oneof![
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::implies(a, b)),
            (r.clone(), r.clone()).prop_map(|(a, b)| Resource::and(a, b)),
            r.prop_map(|a| Resource::Forall(Var::new("x"), Box::new(a))),
        ]
    })
}

fn tau() -> Substitution {
    let mut tau = Substitution::new(false);
    let (ps, img) = letter_image(&[], "first A >> (<<(first tt >>), <<(rff))");
    tau.insert("P", ps, img).unwrap();
    let (ps, img) = letter_image(&["z"], "first B(z) >> k (<<(first B(z + k) >>))");
    tau.insert("Q", ps, img).unwrap();
    tau
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, ..ProptestConfig::default() })]

    #[test]
    fn facts_round_trip(f in fact()) {
        let text = f.to_string();
        prop_assert_eq!(parse_fact(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn processes_round_trip(p in process()) {
        let text = p.to_string();
        prop_assert_eq!(parse_process(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn resources_round_trip(r in resource()) {
        let text = r.to_string();
        prop_assert_eq!(parse_resource(&text).unwrap().0, r, "{}", text);
    }

    #[test]
    fn every_resource_decomposes_into_spine_leaves(r in resource()) {
        for (kind, leaf) in r.spine_leaves() {
            let ok = matches!(
                (kind, &leaf),
                (LeafKind::DoInline, Resource::Do { potential: Potential::Inline(_), .. })
                    | (LeafKind::DoRef, Resource::Do { potential: Potential::Ref(_), .. })
                    | (LeafKind::Letter, Resource::Letter(..))
                    | (LeafKind::Bang, Resource::Bang(_))
            );
            prop_assert!(ok, "{:?} {}", kind, leaf);
        }
    }

    #[test]
    fn substitution_is_homomorphic(a in scheme(), b in scheme()) {
        let t = tau();
        let s = |r: &Resource| apply_substitution(r, &t).unwrap();
        prop_assert_eq!(s(&Resource::implies(a.clone(), b.clone())), Resource::implies(s(&a), s(&b)));
        prop_assert_eq!(s(&Resource::and(a.clone(), b.clone())), Resource::and(s(&a), s(&b)));
        let all = Resource::Forall(Var::new("x"), Box::new(a.clone()));
        prop_assert_eq!(s(&all), Resource::Forall(Var::new("x"), Box::new(s(&a))));
        prop_assert!(!s(&a).has_letters());
    }
}
