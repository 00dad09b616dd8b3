//! Invariant suites run by `provtop selftest`. Each suite checks a law on
//! exhaustive small instances plus seeded random samples and reports the
//! first few failures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dmap::{dsum_along_omega_plus_one, SymbolicDMap};
use crate::error::Result;
use crate::formula::{dot3, lin, lob, random_formula, Formula, Word};
use crate::icard::{below_candidates, eval_word, min_word, trichotomy, word_entails};
use crate::kripke::{all_trees, gl3_brute_force, gl3_decide, gl_decide, model_check_tree, Tree};
use crate::ordinal::Ordinal;
use crate::space::enumerate::{all_topologies, random_space};
use crate::space::{validates, Caps, FiniteSpace};

const MAX_REPORTED: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub seed: u64,
    pub samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, samples: 200 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { report: SuiteReport { name, checked: 0, failed: 0, failures: Vec::new() } }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.report.checked += 1;
        if !ok {
            self.report.failed += 1;
            if self.report.failures.len() < MAX_REPORTED {
                self.report.failures.push(what());
            }
        }
    }

    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

fn corpus(cfg: &Config) -> Vec<FiniteSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out: Vec<FiniteSpace> = (1..=3).flat_map(all_topologies).collect();
    for _ in 0..cfg.samples / 4 {
        let n = rng.gen_range(4..=6);
        out.push(random_space(&mut rng, n));
    }
    out
}

fn ordinal_suite(cfg: &Config) -> SuiteReport {
    let mut s = Suite::new("ordinal arithmetic");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let mut r = || Ordinal::random(&mut rng, 3, 3, 4);
        let (a, b, c) = (r(), r(), r());
        let rels = [a < b, a == b, a > b].iter().filter(|&&x| x).count();
        s.check(rels == 1, || format!("trichotomy {a} {b}"));
        s.check(a.add(&b).add(&c) == a.add(&b.add(&c)), || format!("associativity {a} {b} {c}"));
        let sum = a.add(&b);
        s.check_result(sum.sub_left(&a).map(|d| a.add(&d) == sum), || format!("sub_left {a} {b}"));
        s.check(a.add(&Ordinal::omega_pow(b.clone())).ell() == b, || format!("ell {a} {b}"));
    }
    s.report
}

fn space_suite(cfg: &Config) -> SuiteReport {
    let mut s = Suite::new("finite spaces");
    let caps = Caps::default();
    let (p, q) = (Formula::var("p"), Formula::var("q"));
    let (lin_pq, dot3_pq) = (lin(p.clone(), q.clone()), dot3(p, q));
    for x in corpus(cfg) {
        let magari = x.magari_violation().is_none();
        s.check(x.is_scattered() == magari, || format!("scattered vs Magari on {x:?}"));
        if !x.is_scattered() {
            continue;
        }
        let primal = x.is_primal();
        let tops = std::slice::from_ref(&x);
        s.check_result(validates(tops, &lin_pq, &caps).map(|c| c.is_none() == primal), || format!("lin on {x:?}"));
        s.check_result(validates(tops, &dot3_pq, &caps).map(|c| c.is_none() == primal), || format!(".3 on {x:?}"));
        let plus = match x.plus_topology() {
            Ok(plus) => plus,
            Err(e) => {
                s.check(false, || format!("plus topology on {x:?}: {e}"));
                continue;
            }
        };
        s.check(plus.is_t1() && plus.is_discrete() && plus.refines(&x), || format!("plus laws on {x:?}"));
        let dx = x.derivative(x.points());
        s.check(dx.is_empty() || !x.is_open(dx), || format!("d(X) open on {x:?}"));
        s.check_result(
            FiniteSpace::check_glp_space(&[x.clone(), plus.clone()], &caps).map(|r| r.holds()),
            || format!("GLP space on {x:?}"),
        );
        s.check_result(
            x.reflexive_points(2, &caps).map(|r| r == plus.derivative(plus.points())),
            || format!("doubly reflexive points on {x:?}"),
        );
    }
    s.report
}

fn gl_suite(cfg: &Config) -> SuiteReport {
    let mut s = Suite::new("GL and GL.3");
    let p = Formula::var("p");
    let q = Formula::var("q");
    let cases = [
        (lob(0, p.clone()), true),
        (Formula::dia(0, Formula::dia(0, p.clone())).imp(Formula::dia(0, p.clone())), true),
        (Formula::dia(0, Formula::Top), false),
        (p.clone().imp(Formula::boxed(0, p.clone())), false),
        (dot3(p, q), false),
    ];
    for (phi, expect) in &cases {
        s.check_result(gl_decide(phi).map(|v| v.provable == *expect), || format!("verdict on {phi}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let phi = random_formula(&mut rng, 2, 2, 4);
        let verdict = match gl_decide(&phi) {
            Ok(v) => v,
            Err(e) => {
                s.check(false, || format!("{phi}: {e}"));
                continue;
            }
        };
        if let Some(m) = &verdict.countermodel {
            s.check_result(
                model_check_tree(&m.tree, &m.valuation, &phi).map(|set| !set.contains(m.node)),
                || format!("countermodel for {phi}"),
            );
        }
        s.check_result(
            gl3_decide(&phi).map(|v3| !verdict.provable || v3.provable),
            || format!("GL theorem {phi} not a GL.3 theorem"),
        );
        if phi.variables().len() <= 2 {
            s.check_result(
                gl3_decide(&phi).and_then(|v3| Ok(!v3.provable || gl3_brute_force(&phi, 4, 24)?.is_none())),
                || format!("GL.3 verdict on {phi} against chains"),
            );
        }
    }
    s.report
}

fn dmap_suite(cfg: &Config) -> SuiteReport {
    let mut s = Suite::new("ordinal d-maps");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for t in all_trees(5) {
        let f = SymbolicDMap::build(&t);
        // a single leaf maps from 1, not from w^0 + 1 = 2
        let expect = match t.height() {
            0 => Ordinal::one(),
            h => Ordinal::omega_pow(Ordinal::from(h as u64)).succ(),
        };
        s.check(f.dom() == expect, || format!("dom of {:?}", t.parents()));
        for xi in f.sample_points(&mut rng, cfg.samples.max(10)) {
            s.check_result(
                f.apply(&xi).map(|x| xi.ell() == Ordinal::from(t.node_height(x) as u64)),
                || format!("rank at {xi} on {:?}", t.parents()),
            );
        }
    }
    for n in 1..=4usize {
        let f = SymbolicDMap::build(&Tree::fork(n).expect("n >= 1"));
        for k in 0..=100u64 {
            s.check_result(
                f.apply(&Ordinal::from(k)).map(|x| x == (k as usize % n) + 1),
                || format!("fork({n}) at {k}"),
            );
        }
    }
    for n in 0..=5u64 {
        let a = Ordinal::omega_pow(Ordinal::from(n)).succ();
        let b = Ordinal::omega_pow(Ordinal::from(n + 1)).succ();
        s.check(dsum_along_omega_plus_one(&a) == b, || format!("sum along w+1 at {n}"));
    }
    s.report
}

fn icard_suite(cfg: &Config) -> SuiteReport {
    let mut s = Suite::new("Icard words");
    let words = Word::enumerate(3, 2);
    for w in &words {
        s.check_result(
            min_word(w).and_then(|m| {
                let mut ok = eval_word(w, &m)?;
                for c in below_candidates(&m) {
                    ok &= !eval_word(w, &c)?;
                }
                Ok(ok)
            }),
            || format!("minimum of {w}"),
        );
        for v in &words {
            s.check_result(trichotomy(w, v).map(|_| true), || format!("trichotomy {w} {v}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let len = rng.gen_range(0..=4);
        let w = Word::new((0..len).map(|_| rng.gen_range(0..=2)).collect());
        let a = Ordinal::random(&mut rng, 3, 3, 4);
        s.check_result(
            eval_word(&w.shift_up(), &a).and_then(|l| Ok(l == eval_word(&w, &a.ell())?)),
            || format!("shift of {w} at {a}"),
        );
    }
    for a in Word::enumerate(4, 0) {
        for b in Word::enumerate(4, 0) {
            s.check_result(
                word_entails(&a, &b).and_then(|e| Ok(e == gl_decide(&a.to_formula().imp(b.to_formula()))?.provable)),
                || format!("{a} -> {b} against GL"),
            );
        }
    }
    s.report
}

/// Runs every suite.
pub fn run(cfg: &Config) -> Vec<SuiteReport> {
    vec![ordinal_suite(cfg), space_suite(cfg), gl_suite(cfg), dmap_suite(cfg), icard_suite(cfg)]
}
