//! Acceptance suite. One line per criterion; exits nonzero if any fails.
//!
//! Run with `cargo test -p tptri --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tptri::bijection::{partition_of_word, total_order, validate_word, word_of_partition};
use tptri::network::{build_d, build_dprime, specialize_ace};
use tptri::partition::{enumerate_partitions, stirling_subset, triangle_from_partitions, SetPartition, Variant};
use tptri::poly::{Polynomial, Scalar, VariableTable};
use tptri::tpcheck::*;
use tptri::triangle::*;
use tptri::Triangle;

// wall-clock limits per criterion
const LIMIT_FIDELITY: Duration = Duration::from_secs(1);
const LIMIT_SPECIALIZATION: Duration = Duration::from_secs(60);
const LIMIT_PARTITION_ORACLE: Duration = Duration::from_secs(60);
const LIMIT_ALTERNATE: Duration = Duration::from_secs(60);
const LIMIT_NETWORK: Duration = Duration::from_secs(300);
const LIMIT_BIJECTION: Duration = Duration::from_secs(120);
const LIMIT_LGV: Duration = Duration::from_secs(300);
const LIMIT_CERTIFY: Duration = Duration::from_secs(3 * 3600);
const LIMIT_DET_ORACLE: Duration = Duration::from_secs(300);
const LIMIT_CHECKPOINT: Duration = Duration::from_secs(600);

const JOBS: usize = 4;
const RANDOM_MINORS: usize = 500;
const SEED: u64 = 0x5eed_7470;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ints(tri: &Triangle) -> Vec<Vec<i64>> {
    tri.integer_rows()
        .unwrap()
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

fn g4_ac0e(t: &Arc<VariableTable>, nmax: usize) -> Triangle {
    gen_general4(nmax, &Params4 { d: Polynomial::zero(t), ..Params4::symbolic(t) })
}

fn triangle_fidelity() -> Outcome {
    let t = VariableTable::new();
    let eulerian: Vec<Vec<i64>> = vec![
        vec![1],
        vec![1, 1],
        vec![1, 4, 1],
        vec![1, 11, 11, 1],
        vec![1, 26, 66, 26, 1],
        vec![1, 57, 302, 302, 57, 1],
    ];
    let rev_stirling: Vec<Vec<i64>> = vec![
        vec![1],
        vec![1, 0],
        vec![1, 1, 0],
        vec![1, 3, 1, 0],
        vec![1, 6, 7, 1, 0],
        vec![1, 10, 25, 15, 1, 0],
    ];
    ensure(ints(&gen_eulerian(&t, 5)) == eulerian, || "eulerian rows differ".into())?;
    ensure(ints(&gen_rev_stirling(&t, 5)) == rev_stirling, || "reversed Stirling rows differ".into())?;
    Ok("rows 0..=5 of both triangles".into())
}

fn specialization_identities() -> Outcome {
    let t = VariableTable::new();
    ensure(gen_general4(10, &Params4::integers(&t, [1, 1, 1, 1])) == gen_eulerian(&t, 10), || {
        "general4(1,1,1,1) != eulerian".into()
    })?;
    ensure(gen_general4(10, &Params4::integers(&t, [1, 0, 0, 1])) == gen_rev_stirling(&t, 10), || {
        "general4(1,0,0,1) != rev_stirling".into()
    })?;
    let p = Params6::symbolic(&t);
    ensure(gen_general6(7, &p).reverse() == gen_general6(7, &p.reversed()), || {
        "general6 reversal fails".into()
    })?;
    Ok("nmax 10 specializations, symbolic reversal to nmax 7".into())
}

fn partition_oracle() -> Outcome {
    let t = VariableTable::new();
    let z = Polynomial::zero(&t);
    let sym = Params4::symbolic(&t);
    let i = triangle_from_partitions(&t, Variant::I, 7).map_err(|e| e.to_string())?;
    ensure(i == gen_general4(7, &Params4 { a: z.clone(), ..sym.clone() }), || {
        "variant I != general4(0,c,d,e)".into()
    })?;
    let ii = triangle_from_partitions(&t, Variant::II, 7).map_err(|e| e.to_string())?;
    ensure(ii == gen_general4(7, &Params4 { d: z, ..sym }), || {
        "variant II != general4(a,c,0,e)".into()
    })?;
    let bell8: usize = (1..=8).map(|k| enumerate_partitions(8, k).len()).sum();
    ensure(bell8 == 4140, || format!("Bell(8) = {bell8}"))?;
    Ok(format!("{bell8} partitions of [8], both variants"))
}

fn alternate_recurrences() -> Outcome {
    let t = VariableTable::new();
    let [a, c, d, e] = [Scalar::A, Scalar::C, Scalar::D, Scalar::E].map(|s| Polynomial::scalar(&t, s));
    let z = Polynomial::zero(&t);
    let g4 = |a: &Polynomial, d: &Polynomial| {
        gen_general4(8, &Params4 { a: a.clone(), c: c.clone(), d: d.clone(), e: e.clone() })
    };
    ensure(gen_alt_i(8, &c, &d, &e) == g4(&z, &d), || "alt_i mismatch".into())?;
    ensure(gen_alt_ii(8, &a, &c, &e) == g4(&a, &z), || "alt_ii mismatch".into())?;
    Ok("nmax 8".into())
}

fn network_gates() -> Outcome {
    let t = VariableTable::new();
    let d = build_d(&t, 8, |_, _| Polynomial::one(&t), |_, l| Polynomial::constant(&t, l as i64));
    let pm = d.path_matrix(8).map_err(|e| e.to_string())?;
    let s = stirling_subset(8);
    for n in 0..=8 {
        for k in 0..=n {
            ensure(pm.get(n, k).as_integer().as_ref() == Some(&s[n][k]), || {
                format!("D entry ({n},{k}) = {}", pm.get(n, k))
            })?;
        }
    }
    let dp = build_dprime(&t, 7);
    for n in 0..=7 {
        for k in 0..=n {
            let count = dp.path_count(dp.sources()[n], dp.sinks()[k]);
            ensure(count == s[n + 1][n + 1 - k], || format!("|P({n},{k})| = {count}"))?;
        }
    }
    let pm = build_dprime(&t, 6).path_matrix(6).map_err(|e| e.to_string())?;
    let spec = specialize_ace(&pm).map_err(|e| e.to_string())?;
    ensure(spec == g4_ac0e(&t, 6), || "specialized D' path matrix != general4(a,c,0,e)".into())?;
    Ok("Stirling D to 8, D' census to 7, specialization to 6".into())
}

fn bijection() -> Outcome {
    let mut total = 0;
    for n in 0..=7 {
        for k in 0..=n {
            for pi in enumerate_partitions(n + 1, n + 1 - k) {
                let (w, wn, wk) = word_of_partition(&pi);
                ensure((wn, wk) == (n, k), || format!("{pi}: indices ({wn},{wk})"))?;
                validate_word(&w, n, k).map_err(|v| format!("{pi} -> {w}: {v}"))?;
                let back = partition_of_word(&w, n, k).map_err(|e| format!("{w}: {e}"))?;
                ensure(back == pi, || format!("{pi} -> {w} -> {back}"))?;
                total += 1;
            }
        }
    }
    let pi = SetPartition::new(vec![vec![1, 5, 8], vec![2, 3, 9], vec![4, 7], vec![6]]).unwrap();
    let order: String = total_order(&pi).iter().map(u32::to_string).collect();
    ensure(order == "156478239", || format!("worked example order {order}"))?;
    Ok(format!("{total} partitions of [1..=8] round-tripped"))
}

fn lgv() -> Outcome {
    let t = VariableTable::new();
    let net = build_dprime(&t, 5);
    let pm = net.path_matrix(5).map_err(|e| e.to_string())?;
    let cache = MinorCache::new(&pm);
    let mut count = 0;
    for spec in enumerate_minors(6, 1, 3) {
        let fams = net
            .nonintersecting_families(&spec.rows, &spec.cols, 1_000_000)
            .map_err(|e| e.to_string())?;
        let sum = fams.iter().fold(Polynomial::zero(&t), |acc, f| {
            &acc + &f.iter().fold(Polynomial::one(&t), |w, p| &w * &p.weight)
        });
        ensure(*cache.det_spec(&spec) == sum, || format!("minor {spec:?}"))?;
        count += 1;
    }
    Ok(format!("{count} minors of order <= 3"))
}

fn certify(tri: &Triangle, n: usize, want: Status, minors: u64) -> Result<TpReport, String> {
    let rep = check_total_positivity(tri, n, &TpOptions { jobs: JOBS, ..Default::default() })
        .map_err(|e| e.to_string())?;
    ensure(rep.status() == want, || format!("{} N={n}: {:?}", tri.family(), rep.status()))?;
    if want == Status::Certified {
        ensure(rep.report.minors_checked == minors, || {
            format!("{} N={n}: {} minors", tri.family(), rep.report.minors_checked)
        })?;
    }
    Ok(rep)
}

fn desk_scale() -> Outcome {
    let t = VariableTable::new();
    let g6 = certify(&gen_general6(5, &Params6::symbolic(&t)), 6, Status::Certified, 923)?;
    let g4 = certify(&g4_ac0e(&t, 6), 7, Status::Certified, 3431)?;
    let planted_tri = planted(&t, 5);
    let bad = certify(&planted_tri, 6, Status::Refuted, 0)?;
    let serial = check_total_positivity(&planted_tri, 6, &TpOptions::default()).map_err(|e| e.to_string())?;
    ensure(serial.body_json() == bad.body_json(), || "witness depends on parallelism".into())?;
    let w = bad.report.witness.as_ref().ok_or("no witness")?;
    Ok(format!(
        "general6 N=6 {:.2}s, general4(a,c,0,e) N=7 {:.2}s, planted witness {:?}x{:?} = {}",
        g6.meta.wall_seconds, g4.meta.wall_seconds, w.minor.rows, w.minor.cols, w.determinant
    ))
}

fn det_oracle() -> Outcome {
    let t = VariableTable::new();
    let tris = [
        gen_general6(7, &Params6::symbolic(&t)),
        gen_general4(7, &Params4::symbolic(&t)),
        gen_ace_seq(7, &AceParams::symbolic(&t, 7)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..RANDOM_MINORS {
        let tri = &tris[i % tris.len()];
        let r = rng.gen_range(1..=4);
        let mut pick = || {
            let mut v = rand::seq::index::sample(&mut rng, 8, r).into_vec();
            v.sort();
            v
        };
        let spec = MinorSpec { rows: pick(), cols: pick() };
        ensure(minor_det(tri, &spec) == minor_det_bareiss(tri, &spec), || {
            format!("{} {spec:?}", tri.family())
        })?;
    }
    Ok(format!("{RANDOM_MINORS} random minors of order <= 4"))
}

fn checkpoint_determinism() -> Outcome {
    let t = VariableTable::new();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut stops = Vec::new();
    for (tri, n) in [(gen_general6(5, &Params6::symbolic(&t)), 6), (g4_ac0e(&t, 6), 7)] {
        let chunk_size = 32;
        let full = check_total_positivity(&tri, n, &TpOptions { jobs: JOBS, chunk_size, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let chunks = full.report.minors_total.div_ceil(chunk_size);
        let stop = rng.gen_range(1..chunks);
        let path = dir.path().join(format!("{}.ck", tri.family()));
        let opts = TpOptions {
            jobs: JOBS,
            chunk_size,
            checkpoint: Some(path.clone()),
            budget: Budget { seconds: None, chunks: Some(stop) },
            ..Default::default()
        };
        let part = check_total_positivity(&tri, n, &opts).map_err(|e| e.to_string())?;
        ensure(part.status() == Status::Partial, || "interrupted run did not stop".into())?;
        let resumed = resume(&path, &tri, &TpOptions { jobs: 1, ..Default::default() })
            .map_err(|e| e.to_string())?;
        ensure(resumed.body_json() == full.body_json(), || {
            format!("{} resumed at chunk {stop} differs", tri.family())
        })?;
        stops.push(format!("chunk {stop}/{chunks}"));
    }
    Ok(format!("interrupted at {}", stops.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("triangle fidelity", LIMIT_FIDELITY, triangle_fidelity),
        ("specialization identities", LIMIT_SPECIALIZATION, specialization_identities),
        ("partition oracle equivalence", LIMIT_PARTITION_ORACLE, partition_oracle),
        ("alternate recurrences", LIMIT_ALTERNATE, alternate_recurrences),
        ("network reconstruction gates", LIMIT_NETWORK, network_gates),
        ("bijection round trip", LIMIT_BIJECTION, bijection),
        ("LGV identity", LIMIT_LGV, lgv),
        ("desk-scale certification", LIMIT_CERTIFY, desk_scale),
        ("determinant oracle agreement", LIMIT_DET_ORACLE, det_oracle),
        ("checkpoint determinism", LIMIT_CHECKPOINT, checkpoint_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("exceeded {limit:?}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} {:>2} {name:<30} {:>8.3}s  {detail}", i + 1, elapsed.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
