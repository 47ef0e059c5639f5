//! Acceptance checks for the headway model. Prints one PASS/FAIL line per
//! criterion with diagnostics underneath; the exit code stays 0 so that
//! known failures are reported rather than aborting the test run.

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use metro_maxplus::analytics::{composed_cycle_time, exact_headway, headway, optimal_dm, sweep, Headway};
use metro_maxplus::line::LineDescription;
use metro_maxplus::maxplus::{max_cycle_ratio, Matrix, MaxPlus, MaxPlusError};
use metro_maxplus::sim::{measure_headways, simulate_departures, simulate_parity, MeasureOptions};
use metro_maxplus::Rational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use support::*;

const REL: f64 = 1e-6;
const FAMILY_TOL: f64 = 1e-9;
const HORIZON: usize = 2000;
const TRANSIENT: usize = 500;

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

fn report(id: usize, name: &str, o: Outcome) -> bool {
    println!("C{id} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.summary);
    for n in o.notes {
        println!("    {n}");
    }
    o.pass
}

fn desk() -> LineDescription<f64> {
    LineDescription::uniform([3, 5, 5], 90.0, 30.0)
}

fn finite(h: Headway<f64>) -> f64 {
    h.value().unwrap_or(f64::INFINITY)
}

struct Triangle {
    n: [usize; 3],
    parts: [usize; 3],
    formula: f64,
    composed: Result<f64, String>,
    simulated: f64,
    exact: f64,
    ratio1: f64,
    ratio2: f64,
}

fn triangle(line: &LineDescription<f64>) -> Triangle {
    let c = line.validate().unwrap();
    let formula = finite(headway(line, c.m, c.dm).unwrap().h0);
    let composed = composed_cycle_time(line).map(finite).map_err(|e| e.to_string());
    let traj = simulate_departures(line, HORIZON).unwrap();
    let m = measure_headways(
        &traj,
        MeasureOptions {
            transient: Some(TRANSIENT),
        },
    )
    .unwrap();
    Triangle {
        n: c.n,
        parts: c.parts,
        formula,
        composed,
        simulated: m.h0,
        exact: finite(exact_headway(line).unwrap()),
        ratio1: m.h1 / m.h0,
        ratio2: m.h2 / m.h0,
    }
}

fn oracle_triangle(rows: &[Triangle], elapsed: f64) -> Outcome {
    let mut agree = 0;
    let (mut fs, mut fb, mut bs, mut es) = (0, 0, 0, 0);
    let mut by_class: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut errors: BTreeMap<String, usize> = BTreeMap::new();
    let mut example = None;
    for r in rows {
        let b = r.composed.as_ref().ok().copied();
        let f_s = rel_close(r.formula, r.simulated, REL);
        let f_b = b.is_some_and(|b| rel_close(r.formula, b, REL));
        let b_s = b.is_some_and(|b| rel_close(b, r.simulated, REL));
        fs += f_s as usize;
        fb += f_b as usize;
        bs += b_s as usize;
        es += rel_close(r.exact, r.simulated, REL) as usize;
        if let Err(e) = &r.composed {
            let kind = e.split(':').next().unwrap_or(e).to_string();
            *errors.entry(kind).or_default() += 1;
        }
        let all = f_s && f_b && b_s;
        agree += all as usize;
        let parity = |v: usize| if v % 2 == 1 { "odd" } else { "even" };
        let class = format!(
            "topology {}, m0 {}",
            if r.n.iter().all(|v| v % 2 == 1) {
                "all-odd"
            } else {
                "mixed"
            },
            parity(r.parts[0])
        );
        let e = by_class.entry(class).or_default();
        e.0 += all as usize;
        e.1 += 1;
        if !all && example.is_none() {
            example = Some(format!(
                "first disagreement: n={:?} parts={:?} formula={} composed={:?} simulated={}",
                r.n, r.parts, r.formula, r.composed, r.simulated
            ));
        }
    }
    let total = rows.len();
    let mut notes = vec![
        format!("formula~simulation {fs}/{total}, formula~composed {fb}/{total}, composed~simulation {bs}/{total}"),
        format!("two-phase cycle time~simulation {es}/{total}"),
    ];
    for (class, (ok, n)) in by_class {
        notes.push(format!("{class}: {ok}/{n} agree"));
    }
    for (kind, count) in errors {
        notes.push(format!("composed system rejected {count}x: {kind}"));
    }
    notes.extend(example);
    Outcome {
        pass: agree == total && total >= 50 && elapsed < 30.0,
        summary: format!("{agree}/{total} instances agree pairwise within {REL:e}, {elapsed:.1}s"),
        notes,
    }
}

fn branch_ratio(rows: &[Triangle]) -> Outcome {
    let bad: Vec<&Triangle> = rows
        .iter()
        .filter(|r| (r.ratio1 - 2.0).abs() > REL || (r.ratio2 - 2.0).abs() > REL)
        .collect();
    let worst = rows
        .iter()
        .map(|r| (r.ratio1 - 2.0).abs().max((r.ratio2 - 2.0).abs()))
        .fold(0.0, f64::max);
    Outcome {
        pass: bad.is_empty(),
        summary: format!("{}/{} instances within 2 ± {REL:e}", rows.len() - bad.len(), rows.len()),
        notes: vec![format!("largest deviation {worst:e}")],
    }
}

fn family_decomposition(rng: &mut ChaCha8Rng) -> Outcome {
    let mut lines = vec![desk().with_part_counts([2, 2, 2]).unwrap()];
    while lines.len() < 40 {
        let n = [rng.gen_range(1..=8), rng.gen_range(2..=8), rng.gen_range(2..=8)];
        lines.push(random_line_with(rng, n));
    }
    let mut ok = 0;
    let mut term_misses: BTreeMap<&str, usize> = BTreeMap::new();
    let mut class_ok: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut two_arc_violations = 0;
    let mut graph_mismatch = 0;
    let mut other_critical = 0;
    let mut example = None;
    for line in &lines {
        let c = line.validate().unwrap();
        let rep = headway(line, c.m, c.dm).unwrap();
        let cycles = classified_cycles(line);
        let family_max = |fams: &[Family]| {
            cycles
                .iter()
                .filter(|(f, _, _)| fams.contains(f))
                .map(|(_, mu, _)| *mu)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let checks = [
            (
                "fw",
                finite(rep.h_fw),
                family_max(&[Family::Forward1, Family::Forward2]),
            ),
            (
                "bw",
                finite(rep.h_bw),
                family_max(&[Family::Backward1, Family::Backward2]),
            ),
            (
                "br",
                finite(rep.h_br),
                family_max(&[Family::Branches1, Family::Branches2]),
            ),
            ("min", finite(rep.h_min), family_max(&[Family::Loop])),
        ];
        let mut good = true;
        for (term, want, got) in checks {
            if !rel_close(want, got, FAMILY_TOL) {
                good = false;
                *term_misses.entry(term).or_default() += 1;
                if example.is_none() {
                    example = Some(format!(
                        "first mismatch: n={:?} parts={:?} term {term}: formula {want}, family max {got}",
                        c.n, c.parts
                    ));
                }
            }
        }
        if family_max(&[Family::TwoArc]) > finite(rep.h_min) + FAMILY_TOL {
            good = false;
            two_arc_violations += 1;
        }
        let named = checks.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
        if family_max(&[Family::Other]) > named * (1.0 + FAMILY_TOL) {
            other_critical += 1;
        }
        // the oracle graph must carry the same cycle time as the library's
        let all = cycles.iter().map(|(_, mu, _)| *mu).fold(f64::NEG_INFINITY, f64::max);
        let lib = composed_cycle_time(line).map(finite);
        if !lib.as_ref().is_ok_and(|&v| rel_close(v, all, FAMILY_TOL)) && lib.is_ok() {
            graph_mismatch += 1;
        }
        ok += good as usize;
        let class = if c.n.iter().all(|v| v % 2 == 1) {
            "all-odd"
        } else {
            "mixed"
        };
        let e = class_ok.entry(class).or_default();
        e.0 += good as usize;
        e.1 += 1;
    }
    let mut notes = Vec::new();
    for (class, (g, n)) in class_ok {
        notes.push(format!("{class} topologies: {g}/{n}"));
    }
    if !term_misses.is_empty() {
        notes.push(format!("mismatches per term: {term_misses:?}"));
    }
    notes.push(format!("two-arc cycles above the loop bound: {two_arc_violations}"));
    notes.push(format!(
        "instances where a cycle outside the families is critical: {other_critical}"
    ));
    notes.push(format!(
        "enumerated graph vs library cycle time disagreements: {graph_mismatch}"
    ));
    notes.extend(example);
    Outcome {
        pass: ok == lines.len(),
        summary: format!("{ok}/{} instances decompose within {FAMILY_TOL:e}", lines.len()),
        notes,
    }
}

fn cycle_ratio_vs_enumeration(rng: &mut ChaCha8Rng) -> Outcome {
    let mut ok = 0;
    let mut total = 0;
    let mut notes = Vec::new();
    while total < 100 {
        let n = rng.gen_range(1..=10);
        let g = random_graph(rng, n, 0.3_f64.min(2.5 / n as f64), &[1, 2]);
        let Some(best) = max_ratio_by_enumeration(&g) else {
            continue;
        };
        total += 1;
        match max_cycle_ratio(&g) {
            Ok(c) if (c.mu - best).abs() <= 1e-9 * best.abs().max(1.0) => ok += 1,
            other => {
                if notes.is_empty() {
                    notes.push(format!("first miss: {n} nodes, enumeration {best}, got {other:?}"));
                }
            }
        }
    }
    Outcome {
        pass: ok == total,
        summary: format!("{ok}/{total} graphs match within 1e-9"),
        notes,
    }
}

fn engine_equivalence(lines: &[LineDescription<f64>]) -> Outcome {
    let mut ok = 0;
    let mut notes = Vec::new();
    for line in lines {
        let d = simulate_departures(line, HORIZON).unwrap();
        let delta = simulate_parity(line, HORIZON).unwrap();
        let same = d.nodes() == delta.nodes() && (0..d.nodes().len()).all(|i| d.series(i) == delta.series(i));
        ok += same as usize;
        if !same && notes.is_empty() {
            notes.push(format!("first difference on n={:?}", line.segment_counts()));
        }
    }
    Outcome {
        pass: ok == lines.len(),
        summary: format!("{ok}/{} instances identical over {HORIZON} events", lines.len()),
        notes,
    }
}

fn phase_structure() -> Outcome {
    let line = desk();
    let [n0, n1, n2] = line.segment_counts();
    let capacity = n0 + n1 + n2;
    let reports = sweep(&line, 0..=capacity, -(n1 as i64)..=(n2 as i64)).unwrap();
    // a phase is a regime binding alone somewhere; ties sit on boundaries
    let live: Vec<_> = reports.iter().filter(|r| r.feasible && r.h0.is_finite()).collect();
    let phases: BTreeSet<&str> = live
        .iter()
        .filter(|r| r.binding.len() == 1)
        .map(|r| r.binding[0].label())
        .collect();
    let boundaries: BTreeSet<String> = live
        .iter()
        .filter(|r| r.binding.len() > 1)
        .map(|r| r.binding_label())
        .collect();
    let mut notes = vec![
        format!("phases: {}", phases.iter().cloned().collect::<Vec<_>>().join(", ")),
        format!(
            "boundary points: {}",
            boundaries.iter().cloned().collect::<Vec<_>>().join(", ")
        ),
    ];
    let mut linear_ok = true;
    let mut shape_ok = true;
    for dm in -(n1 as i64)..=(n2 as i64) {
        let slice: Vec<_> = reports.iter().filter(|r| r.dm == dm && r.feasible).collect();
        for w in slice.windows(3) {
            let contiguous = w[1].m == w[0].m + 1 && w[2].m == w[1].m + 1;
            let same = w[0].binding == w[1].binding && w[1].binding == w[2].binding;
            if contiguous && same && (w[0].f0 - 2.0 * w[1].f0 + w[2].f0).abs() > 1e-12 {
                linear_ok = false;
                notes.push(format!("curved inside a regime at dm={dm}, m={}", w[1].m));
            }
        }
        // nondecreasing up to the peak, nonincreasing after it
        let f: Vec<f64> = slice.iter().map(|r| r.f0).collect();
        let peak = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let first = f.iter().position(|&v| v == peak).unwrap_or(0);
        let last = f.iter().rposition(|&v| v == peak).unwrap_or(0);
        let rising = f[..=first].windows(2).all(|w| w[1] >= w[0] - 1e-15);
        let plateau = f[first..=last].iter().all(|&v| (v - peak).abs() <= 1e-15);
        let falling = f[last..].windows(2).all(|w| w[1] <= w[0] + 1e-15);
        if !(rising && plateau && falling) {
            shape_ok = false;
            notes.push(format!("dm={dm} is not a trapezoid: {f:?}"));
        }
        if dm == 0 {
            notes.push(format!(
                "dm=0 slice: rises over m 0..{}, plateau to m {}, falls to m {}",
                slice[first].m,
                slice[last].m,
                slice.last().unwrap().m
            ));
        }
    }
    let at = |m: usize, dm: i64| reports.iter().find(|r| r.m == m && r.dm == dm).unwrap().f0;
    let ends = at(0, 0) == 0.0 && at(capacity, n2 as i64 - n1 as i64) == 0.0;
    if !ends {
        notes.push("frequency does not vanish at an end of the range".into());
    }
    Outcome {
        pass: phases.len() <= 8 && linear_ok && shape_ok && ends,
        summary: format!(
            "{} phases, piecewise linear: {linear_ok}, trapezoids: {shape_ok}, zero ends: {ends}",
            phases.len()
        ),
        notes,
    }
}

fn optimal_allocation() -> Outcome {
    let line = desk();
    let n = line.segment_counts();
    let capacity: usize = n.iter().sum();
    let mut ok = 0;
    let mut notes = Vec::new();
    for m in 0..=capacity {
        let freq = |dm: i64| {
            feasible_splits(n, m, dm)
                .first()
                .map(|&p| 1.0 / formula_terms(&line, p).into_iter().fold(0.0, f64::max))
        };
        let best = (-(capacity as i64)..=capacity as i64)
            .filter_map(freq)
            .fold(f64::NEG_INFINITY, f64::max);
        let (dm, f0) = optimal_dm(&line, m).unwrap();
        let attained = freq(dm) == Some(best);
        ok += attained as usize;
        notes.push(format!(
            "m={m}: dm={dm}, f0={:.3}/h, scan max {:.3}/h",
            f0 * 3600.0,
            best * 3600.0
        ));
        if !attained {
            notes.push(format!("m={m}: returned dm does not reach the scan maximum"));
        }
    }
    Outcome {
        pass: ok == capacity + 1,
        summary: format!("{ok}/{} values of m attain the exhaustive maximum", capacity + 1),
        notes,
    }
}

fn placement_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    let mut ok = 0;
    let mut exact_ok = 0;
    let instances = 20;
    for _ in 0..instances {
        let line = random_line(rng);
        let c = line.validate().unwrap();
        let rep = headway(&line, c.m, c.dm).unwrap();
        let eig = composed_cycle_time(&line).map(finite).map_err(|e| e.to_string());
        let ex = finite(exact_headway(&line).unwrap());
        let mut good = true;
        let mut exact_good = true;
        for _ in 0..20 {
            let s = shuffle_within_parts(&line, rng);
            let cs = s.validate().unwrap();
            good &= headway(&s, cs.m, cs.dm).unwrap() == rep;
            let e = composed_cycle_time(&s).map(finite).map_err(|e| e.to_string());
            good &= match (&eig, &e) {
                (Ok(a), Ok(b)) => rel_close(*a, *b, 1e-9),
                (Err(a), Err(b)) => a == b,
                _ => false,
            };
            exact_good &= rel_close(ex, finite(exact_headway(&s).unwrap()), 1e-9);
        }
        ok += good as usize;
        exact_ok += exact_good as usize;
    }
    Outcome {
        pass: ok == instances,
        summary: format!("{ok}/{instances} instances unchanged under 20 shuffles"),
        notes: vec![format!("two-phase cycle time unchanged on {exact_ok}/{instances}")],
    }
}

fn rational(rng: &mut ChaCha8Rng) -> MaxPlus<Rational> {
    if rng.gen_bool(0.15) {
        MaxPlus::EPSILON
    } else {
        MaxPlus::new(Rational::new(rng.gen_range(-500..500), rng.gen_range(1..9)))
    }
}

fn algebra_laws(rng: &mut ChaCha8Rng) -> Outcome {
    let cases = 2000;
    let mut scalar_fail = 0;
    for _ in 0..cases {
        let (a, b, c) = (rational(rng), rational(rng), rational(rng));
        let laws = [
            a.oplus(b) == b.oplus(a),
            a.otimes(b) == b.otimes(a),
            a.oplus(b).oplus(c) == a.oplus(b.oplus(c)),
            a.otimes(b).otimes(c) == a.otimes(b.otimes(c)),
            a.otimes(b.oplus(c)) == a.otimes(b).oplus(a.otimes(c)),
            a.oplus(MaxPlus::EPSILON) == a,
            a.otimes(MaxPlus::e()) == a,
            a.otimes(MaxPlus::EPSILON).is_epsilon(),
            a.oplus(a) == a,
        ];
        scalar_fail += laws.iter().filter(|&&l| !l).count();
    }
    let mut matrix_fail = 0;
    for _ in 0..cases {
        let n = rng.gen_range(1..5);
        let mut m = || Matrix::from_fn(n, |_, _| rational(rng));
        let (a, b, c) = (m(), m(), m());
        let assoc = a.otimes(&b).unwrap().otimes(&c).unwrap() == a.otimes(&b.otimes(&c).unwrap()).unwrap();
        let dist =
            a.otimes(&b.oplus(&c).unwrap()).unwrap() == a.otimes(&b).unwrap().oplus(&a.otimes(&c).unwrap()).unwrap();
        let unit = a.otimes(&Matrix::identity(n)).unwrap() == a;
        matrix_fail += [assoc, dist, unit].iter().filter(|&&l| !l).count();
    }
    let mut star_fail = 0;
    for _ in 0..cases {
        let n = rng.gen_range(1..9);
        let p = rng.gen_range(0.1..0.8);
        let a = random_acyclic(rng, n, p);
        let star = a.kleene_star().unwrap();
        let fixed = a.otimes(&star).unwrap().oplus(&Matrix::identity(n)).unwrap();
        if fixed != star || Some(&star) != longest_paths(&a).as_ref() {
            star_fail += 1;
        }
    }
    let mut rejected = 0;
    for _ in 0..cases / 4 {
        let n = rng.gen_range(2..7);
        let mut a = random_acyclic(rng, n, 0.4);
        a.set(0, n - 1, MaxPlus::new(0.0));
        a.set(n - 1, 0, MaxPlus::new(0.0));
        rejected += matches!(a.kleene_star(), Err(MaxPlusError::CyclicZeroDelay { .. })) as usize;
    }
    Outcome {
        pass: scalar_fail == 0 && matrix_fail == 0 && star_fail == 0 && rejected == cases / 4,
        summary: format!(
            "{cases} scalar, {cases} matrix and {cases} star cases; violations {scalar_fail}/{matrix_fail}/{star_fail}"
        ),
        notes: vec![format!("cyclic inputs rejected: {rejected}/{}", cases / 4)],
    }
}

fn main() {
    let mut rng = rng(20_240_517);
    let start = Instant::now();
    let lines: Vec<LineDescription<f64>> = (0..60).map(|_| random_line(&mut rng)).collect();
    let rows: Vec<Triangle> = lines.iter().map(triangle).collect();
    let elapsed = start.elapsed().as_secs_f64();

    let results = [
        report(1, "oracle triangle", oracle_triangle(&rows, elapsed)),
        report(2, "cycle families", family_decomposition(&mut rng)),
        report(3, "cycle ratio vs enumeration", cycle_ratio_vs_enumeration(&mut rng)),
        report(4, "engine equivalence", engine_equivalence(&lines)),
        report(5, "branch/central ratio", branch_ratio(&rows)),
        report(6, "phase structure", phase_structure()),
        report(7, "optimal dm", optimal_allocation()),
        report(8, "placement invariance", placement_invariance(&mut rng)),
        report(9, "algebra laws", algebra_laws(&mut rng)),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria pass", results.len());
}
