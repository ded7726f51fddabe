#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use reslogic::game::{Actor, Game, MoveDelta, Node, OccId, Play, Position};
use reslogic::mll::MllFormula;
use reslogic::syntax::{parse_resource, Fact, Process};
use reslogic::world::{GroundAtom, Interval, Situation, StepWorld, Time};

pub fn atom(name: &str) -> Fact {
    Fact::Atom(name.into(), vec![])
}

pub fn random_fact<R: Rng>(rng: &mut R) -> Fact {
    let a = || atom("A");
    let b = || atom("B");
    let choices = [
        a(),
        b(),
        Fact::Not(Box::new(a())),
        Fact::Not(Box::new(b())),
        Fact::And(Box::new(a()), Box::new(b())),
        Fact::Or(Box::new(a()), Box::new(b())),
        Fact::True,
        Fact::False,
    ];
    choices.choose(rng).unwrap().clone()
}

/// Random closed process over 0-ary atoms `A` and `B` with operator depth at most `depth`.
pub fn random_process<R: Rng>(rng: &mut R, depth: usize) -> Process {
    let leaf = |rng: &mut R| {
        let f = random_fact(rng);
        match rng.gen_range(0..6) {
            0 => Process::First(f),
            1 => Process::Inner(f),
            2 => Process::Upto(f),
            3 => Process::Always(f),
            4 => Process::UpDown(f),
            _ => Process::Down(f),
        }
    };
    if depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    let sub = |rng: &mut R| Box::new(random_process(rng, depth - 1));
    match rng.gen_range(0..9) {
        0 => Process::Not(sub(rng)),
        1 => Process::And(sub(rng), sub(rng)),
        2 => Process::Or(sub(rng), sub(rng)),
        3 => Process::Implies(sub(rng), sub(rng)),
        4 => Process::Seq(sub(rng), sub(rng)),
        5 => Process::WSeq(sub(rng), sub(rng)),
        6 => Process::RepSeq(sub(rng)),
        7 => Process::WRepSeq(sub(rng)),
        _ => Process::Iff(sub(rng), sub(rng)),
    }
}

pub fn sit(atoms: &[&str]) -> Situation {
    Situation::new(atoms.iter().map(|a| GroundAtom::prop(a)))
}

pub fn world(segs: &[(u64, &[&str])]) -> StepWorld {
    StepWorld::new(segs.iter().map(|(t, a)| (*t, sit(a))).collect()).unwrap()
}

/// Random world over `A`, `B` with at most `max_seg` segments and change points at most `max_t`.
pub fn random_ab_world<R: Rng>(rng: &mut R, max_seg: usize, max_t: u64) -> StepWorld {
    let n = rng.gen_range(1..=max_seg);
    let mut times: Vec<u64> = (1..=max_t).collect();
    times.shuffle(rng);
    let mut times: Vec<u64> = times.into_iter().take(n - 1).collect();
    times.insert(0, 0);
    times.sort();
    let all = [&[][..], &["A"][..], &["B"][..], &["A", "B"][..]];
    StepWorld::new(times.into_iter().map(|t| (t, sit(all.choose(rng).unwrap()))).collect()).unwrap()
}

pub fn random_interval<R: Rng>(rng: &mut R, max_hi: u64) -> Interval {
    let lo = rng.gen_range(0..max_hi);
    if rng.gen_bool(0.4) {
        Interval::unbounded(lo)
    } else {
        Interval { lo, hi: Time::At(rng.gen_range(lo + 1..=max_hi)) }
    }
}

/// Random closed resource text over small inline DO-resources, implications, conjunctions and bangs.
pub fn random_resource_text<R: Rng>(rng: &mut R, depth: usize) -> String {
    const LEAVES: [&str; 4] = [
        "first A >>",
        "first B >> (<<(first A >>), <<(first B >>))",
        "first A >> (<<(first B >>, first A >>))",
        "upto B >> x (<<(first A >>), <<(first B >>))",
    ];
    if depth == 0 || rng.gen_bool(0.3) {
        return LEAVES.choose(rng).unwrap().to_string();
    }
    match rng.gen_range(0..3) {
        0 => format!("({} :-> {})", random_resource_text(rng, depth - 1), random_resource_text(rng, depth - 1)),
        1 => format!("({} :& {})", random_resource_text(rng, depth - 1), random_resource_text(rng, depth - 1)),
        _ => format!("!({})", random_resource_text(rng, depth - 1)),
    }
}

/// A random resource advanced by a few random legal moves of either side.
pub fn random_position<R: Rng>(rng: &mut R) -> (Game, Position) {
    let (r, defs) = parse_resource(&random_resource_text(rng, 3)).unwrap();
    let game = Game::new(defs, 3);
    let mut pos = Position::from_resource(&r).unwrap();
    for _ in 0..rng.gen_range(0..5) {
        let actor = if rng.gen_bool(0.5) { Actor::Master } else { Actor::Slave };
        let moves = game.legal_moves(&pos, actor, 2);
        if let Some(d) = moves.choose(rng) {
            pos = game.apply_move(&pos, d).unwrap();
        }
    }
    (game, pos)
}

/// A play from a random resource: up to eight random legal moves by either side, each
/// one to three ticks after the previous.
pub fn random_play<R: Rng>(rng: &mut R, text: &str) -> (Game, Play) {
    let (r, defs) = parse_resource(text).unwrap();
    let game = Game::new(defs, 3);
    let mut play = Play::new(Position::from_resource(&r).unwrap());
    let mut t = 0;
    for _ in 0..rng.gen_range(0..=8) {
        let actor = if rng.gen_bool(0.5) { Actor::Master } else { Actor::Slave };
        let moves = game.legal_moves(play.last(), actor, 2);
        if let Some(d) = moves.choose(rng) {
            t += rng.gen_range(1..=3);
            let next = game.apply_move(play.last(), d).unwrap();
            play.push(t, next).unwrap();
        }
    }
    (game, play)
}

/// Every node id of a position with its subtree hash and its ancestors' ids.
fn indexed(p: &Position, anc: &mut Vec<OccId>, out: &mut BTreeMap<OccId, (u64, Vec<OccId>)>) {
    out.insert(p.id, (p.subtree_hash(), anc.clone()));
    anc.push(p.id);
    match &p.node {
        Node::Implies(a, b) | Node::And(a, b) => {
            indexed(a, anc, out);
            indexed(b, anc, out);
        }
        Node::Forall(_, a) => indexed(a, anc, out),
        Node::Bang { copies, .. } => copies.iter().for_each(|c| indexed(c, anc, out)),
        Node::Do { .. } | Node::Done(_) => {}
    }
    anc.pop();
}

/// Describe how `after` differs from `before` outside the subtrees `delta` targets, if it does.
pub fn frame_violation(before: &Position, after: &Position, delta: &MoveDelta) -> Option<String> {
    let (mut old, mut new) = (BTreeMap::new(), BTreeMap::new());
    indexed(before, &mut Vec::new(), &mut old);
    indexed(after, &mut Vec::new(), &mut new);
    // Peeled bangs that gained copies count as targets too.
    let grown: Vec<OccId> = delta
        .peels
        .keys()
        .copied()
        .filter(|b| old.get(b).map(|o| o.0) != new.get(b).map(|n| n.0))
        .collect();
    let mut touched: BTreeSet<OccId> = BTreeSet::new();
    for id in delta.replacements.keys().chain(&grown) {
        touched.insert(*id);
        if let Some((_, anc)) = old.get(id).or_else(|| new.get(id)) {
            touched.extend(anc.iter().copied());
        }
    }
    for id in delta.replacements.keys() {
        if new.contains_key(id) {
            return Some(format!("replaced occurrence {id:#x} is still present"));
        }
    }
    for (id, (h, _)) in &old {
        if touched.contains(id) {
            continue;
        }
        match new.get(id) {
            Some((h2, _)) if h2 == h => {}
            _ => return Some(format!("untargeted occurrence {id:#x} changed")),
        }
    }
    for (id, (_, anc)) in &new {
        if old.contains_key(id) {
            continue;
        }
        let parent = anc.iter().rev().find(|a| old.contains_key(a));
        match parent {
            Some(p) if delta.replacements.keys().any(|t| old.get(t).and_then(|o| o.1.last()) == Some(p)) || grown.contains(p) => {}
            None if delta.replacements.contains_key(&before.id) => {}
            _ => return Some(format!("new occurrence {id:#x} outside the targeted subtrees")),
        }
    }
    None
}

/// Every world over `A`, `B` with at most three segments and change points in 1..=6.
pub fn grid_worlds() -> Vec<StepWorld> {
    let sits: [&[&str]; 4] = [&[], &["A"], &["B"], &["A", "B"]];
    let mut out = Vec::new();
    for a in sits {
        out.push(world(&[(0, a)]));
        for b in sits.iter().filter(|b| **b != a) {
            for t in 1..=6 {
                out.push(world(&[(0, a), (t, b)]));
                for c in sits.iter().filter(|c| *c != b) {
                    for u in t + 1..=6 {
                        out.push(world(&[(0, a), (t, b), (u, c)]));
                    }
                }
            }
        }
    }
    out
}

/// Every interval with `hi <= 8`, and every `(lo, inf)` with `lo <= 8`.
pub fn grid_intervals() -> Vec<Interval> {
    let mut out = Vec::new();
    for i in 0..=8 {
        for j in i + 1..=8 {
            out.push(Interval::finite(i, j).unwrap());
        }
        out.push(Interval::unbounded(i));
    }
    out
}

/// Every relabeling that gives each fresh letter to at most two leaves of one original letter.
pub fn oracle(f: &MllFormula) -> bool {
    let occ = f.occurrences();
    let letters: Vec<Option<String>> = occ.iter().map(|o| o.letter.clone()).collect();
    let mut label = vec![usize::MAX; occ.len()];
    fn go(k: usize, next: usize, letters: &[Option<String>], label: &mut Vec<usize>, f: &MllFormula) -> bool {
        if k == letters.len() {
            return tautology(f, label);
        }
        if letters[k].is_none() || label[k] != usize::MAX {
            return go(k + 1, next, letters, label, f);
        }
        label[k] = next;
        if go(k + 1, next + 1, letters, label, f) {
            label[k] = usize::MAX;
            return true;
        }
        for j in k + 1..letters.len() {
            if letters[j] == letters[k] && label[j] == usize::MAX {
                label[j] = next;
                let ok = go(k + 1, next + 1, letters, label, f);
                label[j] = usize::MAX;
                if ok {
                    label[k] = usize::MAX;
                    return true;
                }
            }
        }
        label[k] = usize::MAX;
        false
    }
    go(0, 0, &letters, &mut label, f)
}

/// Naive truth table over a leaf labeling, by recursion.
pub fn tautology(f: &MllFormula, label: &[usize]) -> bool {
    let n = label.iter().filter(|&&l| l != usize::MAX).map(|l| l + 1).max().unwrap_or(0);
    fn val(f: &MllFormula, label: &[usize], bits: u32, k: &mut usize) -> bool {
        match f {
            MllFormula::False => {
                *k += 1;
                false
            }
            MllFormula::Letter(_) => {
                let v = bits >> label[*k] & 1 == 1;
                *k += 1;
                v
            }
            MllFormula::Implies(a, b) => {
                let a = val(a, label, bits, k);
                let b = val(b, label, bits, k);
                !a || b
            }
            MllFormula::And(a, b) => {
                let a = val(a, label, bits, k);
                let b = val(b, label, bits, k);
                a && b
            }
        }
    }
    (0..1u32 << n).all(|bits| val(f, label, bits, &mut 0))
}

/// All formulas with exactly `n` nodes over `letters` and `rff`.
pub fn formulas(n: usize, letters: &[&str], memo: &mut HashMap<usize, Vec<MllFormula>>) -> Vec<MllFormula> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(MllFormula::False);
        out.extend(letters.iter().map(|l| MllFormula::letter(l)));
    } else {
        for left in (1..n - 1).step_by(2) {
            let right = n - 1 - left;
            for a in formulas(left, letters, memo) {
                for b in formulas(right, letters, memo) {
                    out.push(MllFormula::implies(a.clone(), b.clone()));
                    out.push(MllFormula::and(a.clone(), b.clone()));
                }
            }
        }
    }
    memo.insert(n, out.clone());
    out
}

/// Situations of the assembly world, in order.
pub const TRACE: [&str; 9] = [
    "{L1(2), L2(0), L3(0), Np}",
    "{L1(2), L2(0), L3(0), P2}",
    "{L1(2), L2(2), L3(0), Np}",
    "{L1(2), L2(2), L3(0), P3}",
    "{L1(2), L2(2), L3(4), Np}",
    "{L1(2), L2(2), L3(4), P1}",
    "{L1(6), L2(2), L3(4), Np}",
    "{L1(6), L2(2), L3(4), P2}",
    "{L1(6), L2(10), L3(4), Np}",
];
