//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mwshed::fixtures;
use mwshed::forest::{msf_oracle, verify_msf_theorem, watershed_forest};
use mwshed::manifold::{strictly_connected_oracle, validate, ORACLE_FACE_LIMIT};
use mwshed::morse::{
    classify, dmf_dual_check, gradient, random_morse_stack_with, separating_faces, stack_from_gradient,
};
use mwshed::stack::minima_extend;
use mwshed::watershed::{cut_report_mask, verify_drop_of_water_mask};
use mwshed::{
    is_morse, morse_watershed, morse_watershed_direct, simplex, watershed_collapse, Altitude, CollapseMode, Complex,
    FaceId, Simplex, Stack, WatershedResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(host: &Complex, ids: &[FaceId]) -> Vec<Simplex> {
    ids.iter().map(|&f| host.face(f).clone()).collect()
}

/// Critical-facet rate cycling through a few values so that the corpus
/// mixes single- and multi-minimum stacks.
fn rate(seed: u64) -> f64 {
    [0.0, 0.08, 0.15, 0.25, 0.4][(seed % 5) as usize]
}

struct Instance {
    name: String,
    stack: Stack,
}

fn fuzz_corpus() -> Vec<Instance> {
    let t3 = Arc::new(fixtures::torus(3, 3));
    let t5 = Arc::new(fixtures::torus(5, 5));
    let mut out = Vec::new();
    for seed in 0..100 {
        out.push(Instance {
            name: format!("TOR(3,3) seed {seed}"),
            stack: random_morse_stack_with(Arc::clone(&t3), seed, rate(seed)),
        });
    }
    for seed in 0..25 {
        out.push(Instance {
            name: format!("TOR(5,5) seed {seed}"),
            stack: random_morse_stack_with(Arc::clone(&t5), 1000 + seed, rate(seed)),
        });
    }
    out
}

/// Small normal pseudomanifolds whose facet graphs have at most 12
/// vertices.
fn small_corpus() -> Vec<Instance> {
    let mut hosts: Vec<(String, Complex)> = (3..=12).map(|n| (format!("C{n}"), fixtures::cycle(n))).collect();
    hosts.push(("boundary of tetrahedron".into(), fixtures::simplex_boundary(3)));
    hosts.push(("boundary of 4-simplex".into(), fixtures::simplex_boundary(4)));
    hosts.push(("octahedron".into(), fixtures::octahedron()));
    let mut out = Vec::new();
    for (name, host) in hosts {
        let host = Arc::new(host);
        for seed in 0..10 {
            out.push(Instance {
                name: format!("{name} seed {seed}"),
                stack: random_morse_stack_with(Arc::clone(&host), seed, rate(seed)),
            });
        }
    }
    out
}

fn same_cut(a: &WatershedResult, b: &WatershedResult) -> bool {
    a.cut_faces() == b.cut_faces()
}

fn is_pure_cut(w: &Complex, d: usize) -> bool {
    w.is_empty() || (w.dim() == d as isize - 1 && w.facets().iter().all(|&f| w.face_dim(f) + 1 == d))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = fixtures::cyc6_stack();
    let host = f.host();
    let m = morse_watershed(&f).map_err(|e| e.to_string())?;
    let cut = names(host, &m.cut_faces());
    ensure(cut == vec![simplex![3], simplex![5]], || format!("morse cut {cut:?}"))?;
    let mut sizes: Vec<usize> = m.basins().iter().map(|b| b.faces.len()).collect();
    sizes.sort_unstable();
    ensure(sizes == vec![3, 7], || format!("basin sizes {sizes:?}"))?;
    for seed in 0..20 {
        let c = watershed_collapse(&f, seed).map_err(|e| e.to_string())?;
        ensure(same_cut(&c, &m), || {
            format!("collapse seed {seed} cut {:?}", names(host, &c.cut_faces()))
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "cut {{3}}, {{5}}; basins 7 + 3; 20 collapse seeds agree; {elapsed:?}"
    ))
}

fn criteria_2_to_4(corpus: &[Instance], elapsed_budget: Duration) -> (Outcome, Outcome, Outcome) {
    let start = Instant::now();
    let mut agree = Ok(());
    let mut axioms = Ok(());
    let mut pure = Ok(());
    let mut multi = 0;
    let mut nonempty = 0;
    for inst in corpus {
        let f = &inst.stack;
        let d = f.host().dim() as usize;
        let m = morse_watershed(f).expect("normal host, Morse stack");
        if m.basins().len() > 1 {
            multi += 1;
        }
        let direct = morse_watershed_direct(f).expect("normal host, Morse stack");
        if agree.is_ok() && direct != m.cut_complex() {
            agree = Err(format!("{}: direct construction differs", inst.name));
        }
        for seed in 0..5 {
            let c = watershed_collapse(f, seed).expect("normal host");
            if agree.is_ok() && !same_cut(&c, &m) {
                agree = Err(format!("{}: collapse seed {seed} differs", inst.name));
            }
        }
        let mask = m.cut_mask();
        let report = cut_report_mask(f, &mask).expect("closed cut");
        let drop = verify_drop_of_water_mask(f, &mask).expect("normal host");
        if axioms.is_ok() && !(report.is_cut() && drop) {
            axioms = Err(format!("{}: cut {report:?}, drop of water {drop}", inst.name));
        }
        let w = m.cut_complex();
        if !w.is_empty() {
            nonempty += 1;
        }
        if pure.is_ok() && !is_pure_cut(&w, d) {
            pure = Err(format!("{}: cut is not a pure (d-1)-complex", inst.name));
        }
    }
    let elapsed = start.elapsed();
    let over = |r: Result<(), String>, detail: String| -> Outcome {
        r?;
        ensure(elapsed < elapsed_budget, || format!("took {elapsed:?}"))?;
        Ok(detail)
    };
    (
        over(
            agree,
            format!(
                "{} stacks ({multi} with several minima); collapse x5, flood and direct agree; {elapsed:?}",
                corpus.len()
            ),
        ),
        over(
            axioms,
            format!("{} cuts pass the cut and drop-of-water checks", corpus.len()),
        ),
        over(pure, format!("{nonempty} non-empty cuts, all pure of dimension d-1")),
    )
}

fn criterion_5(corpus: &[Instance], small: &[Instance]) -> Outcome {
    let start = Instant::now();
    let f = fixtures::cyc6_stack();
    let (g, forest) = watershed_forest(&f).map_err(|e| e.to_string())?;
    ensure(forest.weight(&g) == 6, || {
        format!("cyc6 forest weight {}", forest.weight(&g))
    })?;
    let o = msf_oracle(&g, &forest.roots).map_err(|e| e.to_string())?;
    ensure(o.weight == 6, || format!("cyc6 oracle weight {}", o.weight))?;

    let mut enumerated = 0;
    for inst in corpus.iter().chain(small).chain(std::iter::once(&Instance {
        name: "cyc6".into(),
        stack: f.clone(),
    })) {
        let v = verify_msf_theorem(&inst.stack).map_err(|e| format!("{}: {e}", inst.name))?;
        ensure(v.forest_weight == v.oracle_weight, || {
            format!(
                "{}: weight {} vs oracle {}",
                inst.name, v.forest_weight, v.oracle_weight
            )
        })?;
        ensure(v.basins_match, || format!("{}: trees differ from basins", inst.name))?;
        ensure(v.passed(), || format!("{}: {v:?}", inst.name))?;
        if let Some(single) = v.enumerated_singleton {
            ensure(single, || format!("{}: enumeration found other forests", inst.name))?;
            enumerated += 1;
        }
    }
    ensure(enumerated >= small.len(), || {
        format!("only {enumerated} instances enumerated")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "cyc6 weight 6; {} stacks match the oracle; {enumerated} enumerated with a single minimum forest; {elapsed:?}",
        corpus.len() + small.len() + 1
    ))
}

/// Closure of up to 8 random triangles on `vertices` vertices.
fn random_triangle_closure(rng: &mut ChaCha8Rng, vertices: u32) -> Complex {
    let k = rng.random_range(1..=8);
    let tris: Vec<Simplex> = (0..k)
        .filter_map(|_| {
            let a = rng.random_range(0..vertices);
            let b = rng.random_range(0..vertices);
            let c = rng.random_range(0..vertices);
            Simplex::new([a, b, c]).ok()
        })
        .collect();
    if tris.is_empty() {
        Complex::closure([simplex![0, 1, 2]])
    } else {
        Complex::closure(tris)
    }
}

fn criterion_6() -> Outcome {
    let mut cases: Vec<(String, Complex)> = vec![
        ("cyc6".into(), fixtures::cycle(6)),
        ("boundary of tetrahedron".into(), fixtures::simplex_boundary(3)),
        ("TOR(3,3)".into(), fixtures::torus(3, 3)),
        ("TOR(4,4)".into(), fixtures::torus(4, 4)),
        ("wedge".into(), fixtures::wedge()),
        ("branch".into(), fixtures::branch()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        // few vertices make closed surfaces likely
        let vertices = if i % 2 == 0 { 7 } else { 4 };
        cases.push((
            format!("random closure {i}"),
            random_triangle_closure(&mut rng, vertices),
        ));
    }
    let mut oracle_checked = 0;
    let mut normal = 0;
    for (name, c) in &cases {
        let r = validate(c);
        ensure(r.normal_by_definition() == r.normal_by_link_condition(), || {
            format!(
                "{name}: definition {} vs link condition {}",
                r.normal_by_definition(),
                r.normal_by_link_condition()
            )
        })?;
        ensure(r.is_normal == r.normal_by_link_condition(), || {
            format!("{name}: report inconsistent")
        })?;
        if r.is_normal {
            normal += 1;
        }
        if c.len() <= ORACLE_FACE_LIMIT {
            let o = strictly_connected_oracle(c).map_err(|e| e.to_string())?;
            ensure(o == r.strictly_connected, || {
                format!("{name}: strictly connected {} vs oracle {o}", r.strictly_connected)
            })?;
            let by_oracle = r.dim >= 1 && r.connected && r.pure && r.non_branching && o;
            ensure(by_oracle == r.is_normal, || {
                format!("{name}: oracle normality {by_oracle} vs {}", r.is_normal)
            })?;
            oracle_checked += 1;
        }
    }
    for (name, expect) in [("wedge", false), ("branch", false), ("TOR(3,3)", true), ("cyc6", true)] {
        let c = &cases.iter().find(|(n, _)| n == name).unwrap().1;
        ensure(validate(c).is_normal == expect, || {
            format!("{name}: expected is_normal={expect}")
        })?;
    }
    Ok(format!(
        "{} complexes ({normal} normal); both routes agree; {oracle_checked} also match the open-subset oracle",
        cases.len()
    ))
}

fn criterion_7() -> Outcome {
    let hosts = [
        Arc::new(fixtures::torus(3, 3)),
        Arc::new(fixtures::torus(4, 4)),
        Arc::new(fixtures::octahedron()),
        Arc::new(fixtures::simplex_boundary(4)),
        Arc::new(fixtures::cycle(9)),
    ];
    for seed in 0..100u64 {
        let host = &hosts[(seed % 5) as usize];
        let f = random_morse_stack_with(Arc::clone(host), 700 + seed, rate(seed / 5));
        ensure(is_morse(&f), || {
            format!("seed {seed}: generator gave a non-Morse stack")
        })?;
        ensure(dmf_dual_check(&f), || format!("seed {seed}: dual check failed"))?;
        let g = gradient(&f).map_err(|e| e.to_string())?;
        let rebuilt = stack_from_gradient(Arc::clone(host), g.pairs()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(is_morse(&rebuilt), || format!("seed {seed}: rebuilt stack not Morse"))?;
        let g2 = gradient(&rebuilt).map_err(|e| e.to_string())?;
        ensure(g2 == g, || format!("seed {seed}: gradient changed"))?;
    }
    Ok("100 Morse stacks: dual check holds, rebuilt stacks keep the gradient".into())
}

fn random_stack(host: &Arc<Complex>, rng: &mut ChaCha8Rng, h: Altitude) -> Stack {
    let mut alt = vec![0; host.len()];
    for x in host.ids().rev() {
        alt[x.index()] = match host.cofaces(x).iter().map(|y| alt[y.index()]).max() {
            None => rng.random_range(0..h),
            Some(m) => m + rng.random_range(0..2),
        };
    }
    Stack::new(Arc::clone(host), alt).expect("top-down values form a stack")
}

fn criterion_8() -> Outcome {
    let host = Arc::new(fixtures::torus(3, 3));
    let d = host.dim() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut steps = 0;
    let mut restarts = 0;
    let mut f = random_stack(&host, &mut rng, 5);
    while steps < 200 {
        let pairs = f.free_pairs(None);
        if pairs.is_empty() {
            restarts += 1;
            f = random_stack(&host, &mut rng, 5);
            continue;
        }
        let (x, y) = pairs[rng.random_range(0..pairs.len())];
        let g = f.collapse(x, y, CollapseMode::Unit).map_err(|e| e.to_string())?;
        let (before, after) = (f.minima(), g.minima());
        ensure(minima_extend(&before, &after), || {
            format!("step {steps}: minima not extended")
        })?;
        let (div_f, div_g) = (&before.divide, &after.divide);
        ensure(div_g.faces().iter().all(|s| div_f.contains(s)), || {
            format!("step {steps}: divide grew")
        })?;
        let shrink = div_f.len() - div_g.len();
        ensure(shrink == 0 || shrink == 2, || {
            format!("step {steps}: divide lost {shrink} faces")
        })?;
        let stack_free = !g.free_pairs(Some(d)).is_empty();
        let divide_free = div_g.free_pairs().iter().any(|&(_, y)| div_g.face_dim(y) == d);
        ensure(stack_free == divide_free, || {
            format!("step {steps}: free d-pair mismatch")
        })?;
        f = g;
        steps += 1;
    }

    let b = fixtures::branching_stack();
    let bh = b.host();
    let (x, y) = (bh.require(&simplex![0]).unwrap(), bh.require(&simplex![0, 3]).unwrap());
    let c = b.collapse(x, y, CollapseMode::Unit).map_err(|e| e.to_string())?;
    let (n0, n1) = (b.minima().len(), c.minima().len());
    ensure((n0, n1) == (3, 2), || format!("branching minima {n0} -> {n1}"))?;
    ensure(!minima_extend(&b.minima(), &c.minima()), || {
        "branching collapse still extends".into()
    })?;
    Ok(format!(
        "{steps} collapses on TOR(3,3) ({restarts} restarts) extend the minima; branching complex merges 3 -> 2 and fails"
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    for n in [50u32, 100, 200] {
        let host = Arc::new(fixtures::torus(n, n));
        let f = random_morse_stack_with(Arc::clone(&host), n as u64, 0.05);
        morse_watershed(&f).map_err(|e| e.to_string())?;
        let mut times: Vec<Duration> = (0..3)
            .map(|_| {
                let t = Instant::now();
                let r = morse_watershed(&f).expect("normal host");
                std::hint::black_box(&r);
                t.elapsed()
            })
            .collect();
        times.sort_unstable();
        rows.push((n, host.len(), times[1]));
    }
    let mut detail = Vec::new();
    for w in rows.windows(2) {
        let ((_, fa, ta), (n, fb, tb)) = (w[0], w[1]);
        let ratio = tb.as_secs_f64() / ta.as_secs_f64().max(1e-9);
        detail.push(format!(
            "x{:.1} faces -> x{ratio:.2} time at n={n}",
            fb as f64 / fa as f64
        ));
        ensure(ratio <= 6.0, || {
            format!("time grew x{ratio:.2} for x{:.1} faces", fb as f64 / fa as f64)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    let medians: Vec<String> = rows.iter().map(|(n, _, t)| format!("n={n}: {t:?}")).collect();
    Ok(format!("{}; {}", medians.join(", "), detail.join(", ")))
}

fn criterion_10() -> Outcome {
    let host = Arc::new(fixtures::torus(4, 4));
    for seed in 0..500u64 {
        let f = random_morse_stack_with(Arc::clone(&host), seed, 0.3);
        let critical = classify(&f).map_err(|e| e.to_string())?;
        let cut = morse_watershed(&f).map_err(|e| e.to_string())?.cut_mask();
        let hit = separating_faces(&f)
            .map_err(|e| e.to_string())?
            .into_iter()
            .find(|&z| critical.is_critical(z) && !cut[z.index()]);
        if let Some(z) = hit {
            return Ok(format!(
                "TOR(4,4) seed {seed}: critical separating edge {{{}}} lies outside the cut",
                host.face(z)
            ));
        }
    }
    Err("no generated stack has a critical separating face outside the cut".into())
}

fn run(id: &str, title: &str, outcome: impl FnOnce() -> Outcome) -> bool {
    let result = catch_unwind(AssertUnwindSafe(outcome)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    match result {
        Ok(detail) => {
            println!("PASS [{id}] {title}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL [{id}] {title}: {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let corpus = fuzz_corpus();
    let small = small_corpus();
    let mut ok = true;
    ok &= run("1", "six-cycle end to end", criterion_1);
    let (c2, c3, c4) = criteria_2_to_4(&corpus, Duration::from_secs(60));
    ok &= run("2", "collapse, flood and direct watersheds coincide", || c2);
    ok &= run("3", "computed cuts are watersheds", || c3);
    ok &= run("4", "watersheds are pure (d-1)-complexes", || c4);
    ok &= run("5", "watershed forest is the unique minimum spanning forest", || {
        criterion_5(&corpus, &small)
    });
    ok &= run("6", "normality by definition matches the link condition", criterion_6);
    ok &= run("7", "Morse stacks versus flat discrete Morse functions", criterion_7);
    ok &= run("8", "collapses extend minima on pseudomanifolds only", criterion_8);
    ok &= run("9", "flood watershed scales linearly", criterion_9);
    ok &= run("10", "critical separating face outside the watershed", criterion_10);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
