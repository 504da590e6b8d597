use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shtuka_crit::affweyl::{
    admissible_set, check_adm_additivity, is_straight, newton_point, AffineElement, CyclicShift,
};
use shtuka_crit::brauer::{AlgebraSpec, ExtensionPlace, ExtensionShape, LegAssignment, Place};
use shtuka_crit::coweight::{balance_weights, is_balanced, BoundTuple, Coweight};
use shtuka_crit::criteria::{
    blocking_profile, check_lau, check_main, find_blocking, lau_profile, Scenario, Variant,
};
use shtuka_crit::exactq::{QModZ, Rational};
use shtuka_crit::isospace::{check_degree_congruence, degree_at, relevant_places, IsoSpaceSpec};
use shtuka_crit::newton::{b_set, basic_point, NewtonPoint};

type Outcome = Result<String, String>;
type Criterion = (u32, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b).unwrap()
}

fn cw(v: &[i64]) -> Coweight {
    Coweight::new(v.to_vec()).unwrap()
}

fn dominant(d: usize, lo: i64, hi: i64) -> Vec<Coweight> {
    fn rec(d: usize, hi: i64, lo: i64, cur: &mut Vec<i64>, out: &mut Vec<Coweight>) {
        if cur.len() == d {
            out.push(Coweight::new(cur.clone()).unwrap());
            return;
        }
        for x in (lo..=hi).rev() {
            cur.push(x);
            rec(d, x, lo, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, hi, lo, &mut Vec::new(), &mut out);
    out
}

fn algebra(d: usize, invs: &[(String, u32, Rational)]) -> AlgebraSpec {
    AlgebraSpec {
        d,
        places: invs
            .iter()
            .map(|(id, deg, _)| Place::new(id.clone(), *deg))
            .collect(),
        invariants: invs
            .iter()
            .filter(|(_, _, r)| !r.is_zero())
            .map(|(id, _, r)| (id.clone(), QModZ::new(r.clone())))
            .collect(),
    }
}

fn example6(n: usize) -> Scenario {
    let invs: Vec<_> = (1..=n).map(|k| (format!("x{k}"), 1, q(1, 2))).collect();
    Scenario::generic(
        algebra(2, &invs),
        BoundTuple::from_entries(&[&[1, 0], &[0, -1]]).unwrap(),
    )
}

fn criterion_1() -> Outcome {
    let expect = [(2, false, false), (4, true, false), (6, true, true)];
    for (n, lau, main) in expect {
        let s = example6(n);
        let l = check_lau(&s);
        ensure(l.holds == lau, || {
            format!("|Ram|={n}: lau holds={}", l.holds)
        })?;
        let v = check_main(&s, Variant::Theorem);
        ensure(v.holds == main, || {
            format!("|Ram|={n}: main holds={}", v.holds)
        })?;
    }
    let v = check_main(&example6(4), Variant::Theorem);
    let w = v
        .witnesses
        .iter()
        .find(|w| w.m == Some(1))
        .ok_or("no witness at m=1 for |Ram|=4")?;
    ensure(w.lhs == Some(q(1, 1)) && w.rhs == Some(q(1, 1)), || {
        format!("|Ram|=4 m=1 witness {w:?}")
    })?;
    Ok("lau F/T/T, main F/F/T, |Ram|=4 m=1: 1 vs 1".into())
}

struct Bfs {
    d: usize,
    words: HashMap<AffineElement, Vec<usize>>,
}

impl Bfs {
    fn new(d: usize, radius: usize) -> Self {
        let mut words = HashMap::new();
        let id = AffineElement::identity(d);
        words.insert(id.clone(), Vec::new());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let w = words[&x].clone();
            if w.len() == radius {
                continue;
            }
            for i in 0..d {
                let y = x.mul(&AffineElement::simple(d, i));
                if !words.contains_key(&y) {
                    let mut wy = w.clone();
                    wy.push(i);
                    words.insert(y.clone(), wy);
                    queue.push_back(y);
                }
            }
        }
        Bfs { d, words }
    }

    fn split(&self, e: &AffineElement) -> (AffineElement, i64) {
        let k = e.kappa();
        (e.mul(&AffineElement::omega_pow(self.d, -k)), k)
    }

    fn dist(&self, e: &AffineElement) -> Option<usize> {
        self.words.get(&self.split(e).0).map(Vec::len)
    }

    fn adm(&self, lambda: &Coweight) -> Option<BTreeSet<AffineElement>> {
        let mut out = BTreeSet::new();
        let orbit: BTreeSet<Vec<i64>> = permutations(self.d)
            .into_iter()
            .map(|p| p.iter().map(|&i| lambda.entries()[i]).collect())
            .collect();
        for v in orbit {
            let (x, k) = self.split(&AffineElement::translation(v));
            let word = self.words.get(&x)?;
            let shift = AffineElement::omega_pow(self.d, k);
            for mask in 0u32..(1 << word.len()) {
                let mut y = AffineElement::identity(self.d);
                for (j, &i) in word.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        y = y.mul(&AffineElement::simple(self.d, i));
                    }
                }
                out.insert(y.mul(&shift));
            }
        }
        Some(out)
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..d).collect(), &mut Vec::new(), &mut out);
    out
}

fn box_elements(d: usize, r: i64) -> Vec<AffineElement> {
    let mut vs: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..d {
        vs = vs
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let perms = permutations(d);
    vs.iter()
        .flat_map(|v| {
            perms
                .iter()
                .map(|w| AffineElement::new(v.clone(), w.clone()).unwrap())
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let a = admissible_set(&cw(&[1, 0])).len();
    let b = admissible_set(&cw(&[1, -1])).len();
    ensure(a == 3 && b == 5, || {
        format!("|Adm(1,0)|={a}, |Adm(1,-1)|={b}")
    })?;
    let mut checked = 0;
    for d in [2usize, 3] {
        let bfs = Bfs::new(d, 6);
        for e in box_elements(d, 3) {
            let l = e.length() as usize;
            match bfs.dist(&e) {
                Some(k) => ensure(k == l, || format!("{e:?}: length {l}, oracle {k}"))?,
                None => ensure(l > 6, || {
                    format!("{e:?}: length {l} but not reached at radius 6")
                })?,
            }
            checked += 1;
        }
        for lambda in dominant(d, -1, 2) {
            let Some(oracle) = bfs.adm(&lambda) else {
                continue;
            };
            let adm = admissible_set(&lambda);
            ensure(adm.elements == oracle, || {
                format!(
                    "Adm({:?}) has {} elements, oracle {}",
                    lambda.entries(),
                    adm.len(),
                    oracle.len()
                )
            })?;
        }
        let oracle_a = Bfs::new(2, 6).adm(&cw(&[1, 0])).map(|s| s.len());
        let oracle_b = Bfs::new(2, 6).adm(&cw(&[1, -1])).map(|s| s.len());
        ensure(oracle_a == Some(3) && oracle_b == Some(5), || {
            format!("oracle sizes {oracle_a:?} {oracle_b:?}")
        })?;
    }
    Ok(format!("sizes 3 and 5, {checked} lengths against BFS"))
}

fn criterion_3() -> Outcome {
    let mut pairs = 0;
    for d in [2usize, 3] {
        let ws = dominant(d, -1, 1);
        for l1 in &ws {
            for l2 in &ws {
                let r = check_adm_additivity(l1, l2).map_err(|e| e.to_string())?;
                ensure(r.holds, || {
                    format!(
                        "additivity fails for {:?} + {:?}",
                        l1.entries(),
                        l2.entries()
                    )
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    for d in 1..=3usize {
        for lambda in dominant(d, -2, 2) {
            let top = NewtonPoint::from_coweight(&lambda);
            let mut straight = BTreeSet::new();
            for e in &admissible_set(&lambda).elements {
                let nu = newton_point(e);
                ensure(nu.leq(&top), || {
                    format!("ν({e:?}) not below {:?}", lambda.entries())
                })?;
                if is_straight(std::slice::from_ref(e), CyclicShift::default())
                    .map_err(|e| e.to_string())?
                {
                    straight.insert(nu);
                }
                total += 1;
            }
            let b = b_set(&lambda);
            ensure(straight == b, || {
                format!(
                    "λ={:?}: straight {} points, b_set {}",
                    lambda.entries(),
                    straight.len(),
                    b.len()
                )
            })?;
        }
    }
    Ok(format!("{total} admissible elements"))
}

fn criterion_5() -> Outcome {
    let b2 = b_set(&cw(&[1, 0]));
    let want: BTreeSet<NewtonPoint> = [
        NewtonPoint::new(vec![q(1, 1), q(0, 1)]).unwrap(),
        NewtonPoint::new(vec![q(1, 2), q(1, 2)]).unwrap(),
    ]
    .into();
    ensure(b2 == want, || format!("B(GL2,(1,0)) = {b2:?}"))?;
    let n3 = b_set(&cw(&[1, 0, 0])).len();
    ensure(n3 == 3, || format!("|B(GL3,(1,0,0))| = {n3}"))?;
    let mut sets = 0;
    for d in 1..=4usize {
        for lambda in dominant(d, -2, 2) {
            let b = b_set(&lambda);
            let basic = basic_point(&lambda);
            ensure(b.contains(&basic), || {
                format!("basic point missing for {:?}", lambda.entries())
            })?;
            ensure(b.iter().all(|p| basic.leq(p)), || {
                format!("basic point not minimal for {:?}", lambda.entries())
            })?;
            sets += 1;
        }
    }
    Ok(format!("{sets} sets"))
}

fn weight_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect()
    })
}

fn check_balance(d: usize, e: &[usize]) -> Result<(), String> {
    let sum: usize = e.iter().sum();
    match balance_weights(d, e) {
        Ok(eps) => ensure(sum.is_multiple_of(d) && is_balanced(d, e, &eps), || {
            format!("d={d} e={e:?}: output {eps:?} rejected by checker")
        }),
        Err(err) => ensure(!sum.is_multiple_of(d), || format!("d={d} e={e:?}: {err}")),
    }
}

fn criterion_6() -> Outcome {
    let mut n = 0;
    for d in 1..=3usize {
        for len in 1..=3 {
            for e in weight_tuples(d, len) {
                check_balance(d, &e)?;
                n += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for len in 1..=5 {
        let mut done = 0;
        while done < 200 {
            let e: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
            if e.iter().sum::<usize>() % 4 != 0 {
                continue;
            }
            check_balance(4, &e)?;
            done += 1;
            n += 1;
        }
    }
    Ok(format!("{n} tuples"))
}

fn random_algebra(rng: &mut ChaCha8Rng, d: usize, r: usize) -> AlgebraSpec {
    let d64 = d as i64;
    let mut nums = vec![1i64];
    nums.extend((2..r).map(|_| rng.gen_range(1..d64)));
    let last = (-nums.iter().sum::<i64>()).rem_euclid(d64);
    if last != 0 {
        nums.push(last);
    }
    let invs: Vec<_> = nums
        .iter()
        .enumerate()
        .map(|(k, &a)| (format!("x{}", k + 1), rng.gen_range(1..=3), q(a, d64)))
        .collect();
    algebra(d, &invs)
}

fn random_iso(rng: &mut ChaCha8Rng) -> IsoSpaceSpec {
    let d = rng.gen_range(2..=6usize);
    let r = rng.gen_range(2..=5usize);
    let mut alg = random_algebra(rng, d, r);
    for k in 0..rng.gen_range(0..=2) {
        alg.places
            .push(Place::new(format!("z{k}"), rng.gen_range(1..=2)));
    }
    let n = rng.gen_range(1..=3u32);
    let mut places = Vec::new();
    for p in &alg.places {
        if !alg.is_ramified(&p.id) && rng.gen_bool(0.5) {
            continue;
        }
        let mut left = n;
        let mut j = 0;
        while left > 0 {
            let e = rng.gen_range(1..=left);
            places.push(ExtensionPlace {
                id: format!("{}_{j}", p.id),
                over: p.id.clone(),
                local_degree: e,
                absolute_degree: None,
            });
            left -= e;
            j += 1;
        }
    }
    let mut pi = BTreeMap::new();
    let mut sum = q(0, 1);
    let ids: Vec<String> = places.iter().map(|p| p.id.clone()).collect();
    for y in ids.iter().skip(1) {
        if rng.gen_bool(0.6) {
            let x = q(rng.gen_range(-2 * d as i64..=2 * d as i64), d as i64);
            sum += &x;
            pi.insert(y.clone(), x);
        }
    }
    if !sum.is_zero() {
        pi.insert(ids[0].clone(), -sum);
    }
    IsoSpaceSpec {
        algebra: alg,
        extension: ExtensionShape {
            total_degree: n,
            places,
        },
        pi_degrees: pi,
    }
}

fn hand_iso_specs() -> Vec<IsoSpaceSpec> {
    ["iso_simple.json", "iso_split.json"]
        .iter()
        .map(|f| {
            serde_json::from_str(&std::fs::read_to_string(fixtures().join(f)).unwrap()).unwrap()
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut specs = hand_iso_specs();
    specs.extend((0..500).map(|_| random_iso(&mut rng)));
    let mut places = 0;
    for spec in &specs {
        spec.validate()
            .map_err(|e| format!("generated spec invalid: {e}: {spec:?}"))?;
        let mut total = q(0, 1);
        for x in relevant_places(spec) {
            let ok = check_degree_congruence(spec, &x).map_err(|e| e.to_string())?;
            ensure(ok, || format!("congruence fails at {x} for {spec:?}"))?;
            total += degree_at(spec, &x).map_err(|e| e.to_string())?;
            places += 1;
        }
        ensure(total.is_zero(), || {
            format!("Σ degree_at = {total} for {spec:?}")
        })?;
    }
    Ok(format!("{} specs, {places} places", specs.len()))
}

fn invariant_vectors(d: usize, r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .fold(vec![Vec::new()], |acc, _| {
            acc.into_iter()
                .flat_map(|v| {
                    (1..d as i64).map(move |a| {
                        let mut v = v.clone();
                        v.push(a);
                        v
                    })
                })
                .collect()
        })
        .into_iter()
        .filter(|v| v.iter().sum::<i64>() % d as i64 == 0)
        .collect()
}

fn small_bounds(d: usize) -> Vec<BoundTuple> {
    let ws = dominant(d, -1, 1);
    let mut out = Vec::new();
    for a in &ws {
        if a.degree() == 0 {
            out.push(BoundTuple::new([(1, a.clone())]).unwrap());
        }
        for b in &ws {
            if a.degree() + b.degree() == 0 {
                out.push(BoundTuple::new([(1, a.clone()), (2, b.clone())]).unwrap());
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut n = 0;
    for d in 2..=3usize {
        let bounds = small_bounds(d);
        for r in 0..=6usize {
            for v in invariant_vectors(d, r) {
                let invs: Vec<_> = v
                    .iter()
                    .enumerate()
                    .map(|(k, &a)| (format!("x{}", k + 1), 1 + (k % 2) as u32, q(a, d as i64)))
                    .collect();
                let alg = algebra(d, &invs);
                if alg.ramified_ids().is_empty() && d > 1 {
                    continue;
                }
                for b in &bounds {
                    let s = Scenario::generic(alg.clone(), b.clone());
                    let legs = LegAssignment::generic(1..=b.len() as u32);
                    let lau: BTreeMap<usize, bool> = lau_profile(&s)
                        .into_iter()
                        .map(|(m, l, r)| (m, l > r))
                        .collect();
                    let rows = blocking_profile(&s, &legs);
                    ensure(rows.len() == lau.len(), || {
                        format!("profile lengths differ for {v:?}")
                    })?;
                    for row in &rows {
                        ensure(row.blocking == !lau[&row.m], || {
                            format!(
                                "d={d} inv={v:?} bounds={b:?} m={}: blocking={}",
                                row.m, row.blocking
                            )
                        })?;
                    }
                    let verdict = find_blocking(&s, &legs);
                    ensure(verdict.holds == lau.values().all(|&x| x), || {
                        format!("d={d} inv={v:?}: find_blocking holds={}", verdict.holds)
                    })?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} scenarios"))
}

fn random_bounds(rng: &mut ChaCha8Rng, d: usize) -> BoundTuple {
    let legs = rng.gen_range(1..=4u32);
    let mut ws: Vec<Vec<i64>> = (0..legs)
        .map(|_| {
            let mut v: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
        .collect();
    let deg: i64 = ws.iter().flatten().sum();
    let last = ws.last_mut().unwrap();
    if deg > 0 {
        last[d - 1] -= deg;
    } else {
        last[0] -= deg;
    }
    BoundTuple::new(
        ws.into_iter()
            .enumerate()
            .map(|(i, v)| (i as u32 + 1, Coweight::new(v).unwrap())),
    )
    .unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut held = 0;
    for _ in 0..500 {
        let d = rng.gen_range(2..=5usize);
        let r = rng.gen_range(2..=8usize);
        let alg = random_algebra(&mut rng, d, r);
        let bounds = random_bounds(&mut rng, d);
        let s = Scenario::generic(alg.clone(), bounds.clone());
        let lau = check_lau(&s).holds;
        let a = rng.gen_range(1..d as i64);
        let mut bigger = alg.clone();
        for (k, x) in [(1, q(a, d as i64)), (2, q(d as i64 - a, d as i64))] {
            let id = format!("w{k}");
            bigger
                .places
                .push(Place::new(id.clone(), rng.gen_range(1..=2)));
            bigger.invariants.insert(id, QModZ::new(x));
        }
        let t = Scenario::generic(bigger, bounds.clone());
        for variant in [Variant::Intro, Variant::Theorem] {
            let main = check_main(&s, variant).holds;
            ensure(!main || lau, || {
                format!("{variant:?} holds but lau fails: d={d} {bounds:?} {alg:?}")
            })?;
            ensure(!main || check_main(&t, variant).holds, || {
                format!("{variant:?} broken by a ramified pair: d={d} {bounds:?} {alg:?}")
            })?;
            held += main as usize;
        }
    }
    Ok(format!("500 scenarios, {held} main verdicts held"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run_cli(threads: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_shtuka-crit"))
        .args(args)
        .env("SHTUKA_CRIT_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .is_some_and(|n| n.to_string_lossy().starts_with("ex6_"))
        })
        .collect();
    files.sort();
    ensure(!files.is_empty(), || "no scenario fixtures".into())?;
    for f in &files {
        let path = f.to_str().unwrap();
        for fmt in ["json", "text"] {
            let args = ["report", "--scenario", path, "--format", fmt];
            let first = run_cli("1", &args)?;
            for threads in ["1", "4", "8"] {
                let again = run_cli(threads, &args)?;
                ensure(again == first, || {
                    format!("{path} {fmt}: output differs with {threads} threads")
                })?;
            }
        }
        let args = ["degeneration", "--all-placements", "--scenario", path];
        ensure(run_cli("1", &args)? == run_cli("8", &args)?, || {
            format!("{path}: all-placements output differs across thread counts")
        })?;
    }
    Ok(format!("{} fixtures", files.len()))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 10] = [
        (1, Duration::from_secs(1), criterion_1),
        (2, Duration::from_secs(30), criterion_2),
        (3, Duration::from_secs(120), criterion_3),
        (4, Duration::from_secs(120), criterion_4),
        (5, Duration::from_secs(120), criterion_5),
        (6, Duration::from_secs(120), criterion_6),
        (7, Duration::from_secs(120), criterion_7),
        (8, Duration::from_secs(120), criterion_8),
        (9, Duration::from_secs(120), criterion_9),
        (10, Duration::from_secs(120), criterion_10),
    ];
    let mut failed = 0;
    for (n, budget, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let outcome = outcome.and_then(|s| {
            if t <= budget {
                Ok(s)
            } else {
                Err(format!("{s}; took {t:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(s) => println!("criterion {n:>2}: PASS ({t:.2?}) {s}"),
            Err(s) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL ({t:.2?}) {s}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
