//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! `cargo test -p lierigid --test acceptance`

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lierigid::cohomology::{dims_by_degree, direct_h1, kostant_h1, NegativePart, Verdict};
use lierigid::grading::{grade_algebra, grade_module, grading_element, ParabolicMarking};
use lierigid::linalg::{rat, Rational};
use lierigid::repthy::{construct_rep, IrrComponent, DEFAULT_ORACLE_BOUND};
use lierigid::rigidity::{run_scenario_with_bound, ScenarioSpec};
use lierigid::rootsys::{parse_factors, Family, RootSystem, SimpleFactor, Weight};
use lierigid::tableau::{is_involutive, prolong, random_tableau, torsion_quotient_dim, Tableau};
use lierigid::vogel::{dim_g, dim_yk, VogelParams};

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn rs(s: &str) -> RootSystem {
    RootSystem::build(&parse_factors(s).unwrap()).unwrap()
}

fn as_rational(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

const EXCEPTIONAL_ROWS: [(&str, i64, i64); 5] = [("D4", 0, 28), ("F4", 1, 52), ("E6", 2, 78), ("E7", 4, 133), ("E8", 8, 248)];

fn vogel_vs_weyl() -> Outcome {
    let mut o = Outcome::new();
    for (t, m, d) in EXCEPTIONAL_ROWS {
        let p = VogelParams::exceptional(m);
        let v = dim_g(&p).unwrap();
        let r = rs(t);
        let w = as_rational(r.weyl_dim(&r.highest_root_weight(0)).unwrap());
        o.check(v == rat(d) && w == v, || format!("{t}: dim_g {v}, weyl {w}, expected {d}"));
    }
    for n in 5..=12i64 {
        let v = dim_g(&VogelParams::so(n)).unwrap();
        let factor = if n % 2 == 1 { format!("B{}", (n - 1) / 2) } else { format!("D{}", n / 2) };
        let root_count = rs(&factor).dimension() as i64;
        o.check(v == rat(n * (n - 1) / 2) && root_count == n * (n - 1) / 2, || format!("so({n}): dim_g {v}"));
    }
    o
}

fn cartan_powers() -> Outcome {
    let mut o = Outcome::new();
    for (t, m, _) in EXCEPTIONAL_ROWS {
        let p = VogelParams::exceptional(m);
        let r = rs(t);
        let theta = r.highest_root_weight(0);
        for k in 1..=3u32 {
            let y = dim_yk(&p, k).unwrap();
            let w = as_rational(r.weyl_dim(&theta.scale(k as i64)).unwrap());
            o.check(y == w, || format!("{t} k={k}: Y_k {y}, weyl {w}"));
        }
    }
    o
}

fn kostant_vs_oracle() -> Outcome {
    let mut o = Outcome::new();
    let cases: Vec<(&str, Vec<usize>, Vec<i64>)> = vec![
        ("A1", vec![1], vec![2]),
        ("A1", vec![1], vec![4]),
        ("A1", vec![1], vec![6]),
        ("A2", vec![1, 2], vec![1, 1]),
        ("A2", vec![1, 2], vec![3, 0]),
        ("A2", vec![1, 2], vec![0, 3]),
        ("A2", vec![1, 2], vec![2, 2]),
        ("A1xA1", vec![1, 2], vec![2, 2]),
        ("A1xA1", vec![1, 2], vec![2, 0]),
        ("A1xA1", vec![1, 2], vec![0, 2]),
        ("A1xA1", vec![1, 2], vec![4, 2]),
        ("A1xA1", vec![1, 2], vec![1, 1]),
    ];
    let mut checked = 0;
    for (t, marks, hw) in cases {
        let r = rs(t);
        let lam = Weight(hw);
        if r.weyl_dim(&lam).unwrap() > BigInt::from(DEFAULT_ORACLE_BOUND) {
            o.notes.push(format!("{t} {lam} above bound, skipped"));
            continue;
        }
        let m = ParabolicMarking::new(marks);
        let z = grading_element(&r, &m).unwrap();
        let neg = NegativePart::new(&r, &z).unwrap();
        let rep = construct_rep(&r, &lam, DEFAULT_ORACLE_BOUND).unwrap();
        // direct_h1 rejects any slice where ∂¹∘∂⁰ ≠ 0
        match direct_h1(&r, &z, &neg, &rep) {
            Ok(d) => {
                let k = dims_by_degree(
                    &kostant_h1(&r, &m, &IrrComponent { highest_weight: lam.clone(), multiplicity: 1 }).unwrap(),
                );
                o.check(k == d.h1(), || format!("{t} {lam}: Kostant {k:?} vs direct {:?}", d.h1()));
                checked += 1;
            }
            Err(e) => o.failures.push(format!("{t} {lam}: {e}")),
        }
    }
    o.notes.push(format!("{checked} modules compared"));
    o
}

fn fixture(name: &str) -> ScenarioSpec {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../cli/fixtures");
    p.push(format!("{name}.json"));
    serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap()
}

fn verdicts() -> Outcome {
    let mut o = Outcome::new();
    let run = |spec: &ScenarioSpec| run_scenario_with_bound(spec, DEFAULT_ORACLE_BOUND).unwrap();
    let describe = |v: &lierigid::rigidity::RigidityVerdict| {
        let degs: Vec<String> = v.h1_by_degree.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        format!("{:?}, H¹ by degree {{{}}}", v.verdict, degs.join(", "))
    };

    let a = run(&fixture("adjoint-a2"));
    let ok = a.verdict == Verdict::Rigid;
    o.notes.push(format!("(a) adjoint-a2 p=-1: {} -> {}", describe(&a), if ok { "PASS" } else { "FAIL" }));
    o.check(ok, || format!("(a) expected RIGID, got {}", describe(&a)));

    let mut vspec = fixture("veronese-a1");
    let b = run(&vspec);
    vspec.p = 2;
    let b2 = run(&vspec);
    let ok = b.verdict == Verdict::Inconclusive
        && b.offending_pieces.len() == 1
        && b.offending_pieces[0].degree == rat(3)
        && b2.verdict == Verdict::Rigid;
    o.notes.push(format!("(b) veronese-a1 p=-1: {}; p=2: {:?} -> {}", describe(&b), b2.verdict, if ok { "PASS" } else { "FAIL" }));
    o.check(ok, || "(b) veronese-a1".to_string());

    let c = run(&fixture("segre-1-1"));
    let ok = c.verdict == Verdict::Inconclusive;
    o.notes.push(format!("(c) segre-1-1 p=0: {} -> {}", describe(&c), if ok { "PASS" } else { "FAIL" }));
    o.check(ok, || format!("(c) expected INCONCLUSIVE, got {}", describe(&c)));

    let d = run(&fixture("segre-2-2"));
    let stated = d.oracle.as_ref().is_some_and(|r| r.summary.contains("Kostant path alone decided"));
    let ok = d.verdict == Verdict::Rigid && stated;
    o.notes.push(format!("(d) segre-2-2 p=0: {} -> {}", describe(&d), if ok { "PASS" } else { "FAIL" }));
    o.check(ok, || format!("(d) expected RIGID with bound note, got {}", describe(&d)));
    o
}

fn tableaux() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ab1_ea0);
    for i in 0..200 {
        let n = rng.gen_range(1..=5);
        let w = rng.gen_range(1..=5);
        let k = rng.gen_range(0..=12usize.min(n * w));
        let t = random_tableau(&mut rng, n, w, k);
        let r = is_involutive(&t, i);
        o.check(r.dim_prolongation <= r.bound, || format!("#{i}: Cartan inequality {} > {}", r.dim_prolongation, r.bound));
        o.check(t.delta_rank() + r.dim_prolongation == n * t.dim(), || format!("#{i}: rank δ + dim A(1) ≠ n dim A"));
    }
    let cr = Tableau::cauchy_riemann();
    let r = is_involutive(&cr, 0);
    o.check(
        prolong(&cr).len() == 2 && r.characters == vec![2, 0] && r.involutive && torsion_quotient_dim(&cr) == 0,
        || format!("Cauchy–Riemann: {r:?}"),
    );
    let full = Tableau::full(3, 2);
    let r = is_involutive(&full, 0);
    o.check(
        r.dim_prolongation == 12 && r.characters == vec![6, 4, 2] && r.involutive && torsion_quotient_dim(&full) == 0,
        || format!("full: {r:?}"),
    );
    let zero = Tableau::zero(3, 2);
    let r = is_involutive(&zero, 0);
    o.check(
        r.dim_prolongation == 0 && r.characters == vec![0, 0, 0] && r.involutive && torsion_quotient_dim(&zero) == 6,
        || format!("zero: {r:?}"),
    );
    o
}

fn simple_types_up_to_rank_six() -> Vec<SimpleFactor> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(SimpleFactor::new(Family::A, n).unwrap());
    }
    for n in 2..=6 {
        out.push(SimpleFactor::new(Family::B, n).unwrap());
    }
    for n in 2..=6 {
        out.push(SimpleFactor::new(Family::C, n).unwrap());
    }
    for n in 4..=6 {
        out.push(SimpleFactor::new(Family::D, n).unwrap());
    }
    out.push(SimpleFactor::new(Family::E, 6).unwrap());
    out.push(SimpleFactor::new(Family::F, 4).unwrap());
    out.push(SimpleFactor::new(Family::G, 2).unwrap());
    out
}

fn gradings() -> Outcome {
    let mut o = Outcome::new();
    let mut count = 0;
    for f in simple_types_up_to_rank_six() {
        let r = RootSystem::build(&[f]).unwrap();
        for node in 1..=r.rank() {
            let g = grade_algebra(&r, &ParabolicMarking::new([node])).unwrap();
            o.check(g.total() == r.dimension() as u64, || format!("{f} node {node}: total {}", g.total()));
            o.check(g.dims.iter().all(|(d, n)| g.get(-d) == *n), || format!("{f} node {node}: asymmetric"));
            let coeff = r.highest_root(0)[node - 1];
            o.check(g.depth() == coeff, || format!("{f} node {node}: depth {} vs coefficient {coeff}", g.depth()));
            count += 1;
        }
    }
    let m = grade_module(&rs("A3"), &ParabolicMarking::new([2]), &Weight(vec![0, 1, 0])).unwrap();
    let expected: BTreeMap<i64, u64> = [(0, 1), (-1, 4), (-2, 1)].into_iter().collect();
    o.check(m.shifted.dims == expected, || format!("(A3, P2, ω2): {:?}", m.shifted.dims));
    o.notes.push(format!("{count} (type, node) pairs"));
    o
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 6] = [
        ("1 Vogel/Weyl agreement", vogel_vs_weyl, Duration::from_secs(10)),
        ("2 Cartan-power agreement", cartan_powers, Duration::from_secs(60)),
        ("3 Kostant vs direct oracle", kostant_vs_oracle, Duration::from_secs(120)),
        ("4 rigidity verdicts", verdicts, Duration::from_secs(120)),
        ("5 tableau engine", tableaux, Duration::from_secs(30)),
        ("6 grading properties", gradings, Duration::from_secs(20)),
    ];
    let mut all_ok = true;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if elapsed > limit {
            outcome.failures.push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
        let ok = outcome.failures.is_empty();
        all_ok &= ok;
        println!("criterion {name}: {} ({elapsed:.2?})", if ok { "PASS" } else { "FAIL" });
        for n in &outcome.notes {
            println!("    {n}");
        }
        for f in &outcome.failures {
            println!("    failure: {f}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
