//! Identity suites comparing independent constructions entry by entry.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};
use tptri::bijection::{partition_of_word, validate_word, word_of_partition};
use tptri::network::{build_d, build_dprime, specialize_ace, specialize_ace_seq};
use tptri::partition::{enumerate_partitions, stirling_subset, triangle_from_partitions, Variant, MAX_PARTITION_NMAX};
use tptri::poly::{Polynomial, Scalar, VariableTable};
use tptri::tpcheck::{enumerate_minors, MinorCache};
use tptri::triangle::*;
use tptri::{Error, Result, Triangle};

use crate::config::{CrosscheckArgs, Suite};

/// Largest `nmax` for suites that build the reduced network symbolically.
pub const MAX_NETWORK_NMAX: usize = 8;
/// Largest `nmax` for the brute-force LGV suite.
pub const MAX_LGV_NMAX: usize = 6;
pub const MAX_LGV_MINOR: usize = 4;
const PATH_BUDGET: usize = 1_000_000;

#[derive(Serialize, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Serialize, Debug)]
pub struct Cell {
    pub n: usize,
    pub k: usize,
    pub partitions: u64,
    pub paths: u64,
}

#[derive(Serialize, Debug)]
pub struct Summary {
    pub suite: Suite,
    pub nmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minor_size: Option<usize>,
    pub status: &'static str,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<Cell>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn guard(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got > limit {
        return Err(Error::GuardExceeded { what, got, limit });
    }
    Ok(())
}

/// Entrywise comparison; the counterexample is the first differing entry in
/// row-major order, so it has the smallest `n`.
fn compare(name: &str, left: &Triangle, right: &Triangle) -> Check {
    let nmax = left.nmax().max(right.nmax());
    for n in 0..=nmax {
        for k in 0..=n {
            let (l, r) = (left.at(n as isize, k as isize), right.at(n as isize, k as isize));
            if l != r {
                return Check {
                    name: name.to_string(),
                    pass: false,
                    detail: format!("first difference at T({n},{k})"),
                    counterexample: Some(json!({
                        "n": n,
                        "k": k,
                        "left": l.to_string(),
                        "right": r.to_string(),
                    })),
                };
            }
        }
    }
    Check {
        name: name.to_string(),
        pass: true,
        detail: format!("{} entries equal", (nmax + 1) * (nmax + 2) / 2),
        counterexample: None,
    }
}

fn scalars(t: &std::sync::Arc<VariableTable>) -> [Polynomial; 4] {
    [Scalar::A, Scalar::C, Scalar::D, Scalar::E].map(|s| Polynomial::scalar(t, s))
}

pub fn run(args: &CrosscheckArgs) -> Result<Summary> {
    let t = VariableTable::new();
    let nmax = args.nmax;
    let [a, c, d, e] = scalars(&t);
    let z = Polynomial::zero(&t);
    let g4 = |a: &Polynomial, d: &Polynomial| {
        gen_general4(nmax, &Params4 { a: a.clone(), c: c.clone(), d: d.clone(), e: e.clone() })
    };
    let mut cells = Vec::new();
    let checks = match args.suite {
        Suite::Prop21 => {
            guard("partition nmax", nmax, MAX_PARTITION_NMAX)?;
            vec![
                compare(
                    "partitions variant I = general4(0,c,d,e)",
                    &triangle_from_partitions(&t, Variant::I, nmax)?,
                    &g4(&z, &d),
                ),
                compare(
                    "partitions variant II = general4(a,c,0,e)",
                    &triangle_from_partitions(&t, Variant::II, nmax)?,
                    &g4(&a, &z),
                ),
            ]
        }
        Suite::Lemma22 => vec![
            compare("alt-i = general4(0,c,d,e)", &gen_alt_i(nmax, &c, &d, &e), &g4(&z, &d)),
            compare("alt-ii = general4(a,c,0,e)", &gen_alt_ii(nmax, &a, &c, &e), &g4(&a, &z)),
            compare(
                "alt-ii = ace-seq with constant sequences",
                &gen_alt_ii(nmax, &a, &c, &e),
                &gen_ace_seq(nmax, &AceParams::constant(&a, &c, &e, nmax)),
            ),
        ],
        Suite::Reversal => {
            let p = Params6::symbolic(&t);
            vec![
                compare(
                    "general6 reversed = general6 with (a,c) <-> (d,e)",
                    &gen_general6(nmax, &p).reverse(),
                    &gen_general6(nmax, &p.reversed()),
                ),
                compare(
                    "general4(1,1,1,1) = eulerian",
                    &gen_general4(nmax, &Params4::integers(&t, [1, 1, 1, 1])),
                    &gen_eulerian(&t, nmax),
                ),
                compare(
                    "general4(1,0,0,1) = rev-stirling",
                    &gen_general4(nmax, &Params4::integers(&t, [1, 0, 0, 1])),
                    &gen_rev_stirling(&t, nmax),
                ),
            ]
        }
        Suite::Network => {
            guard("network nmax", nmax, MAX_NETWORK_NMAX)?;
            let s = stirling_subset(nmax + 1);
            let stirling = Triangle::from_rows(
                &t,
                "stirling-subset",
                Default::default(),
                (0..=nmax)
                    .map(|n| (0..=n).map(|k| Polynomial::constant(&t, s[n][k].clone())).collect())
                    .collect(),
            );
            let d_net = build_d(&t, nmax, |_, _| Polynomial::one(&t), |_, l| Polynomial::constant(&t, l as i64));
            let net = build_dprime(&t, nmax);
            let census = Triangle::from_rows(
                &t,
                "census",
                Default::default(),
                (0..=nmax)
                    .map(|n| {
                        (0..=n)
                            .map(|k| Polynomial::constant(&t, net.path_count(net.sources()[n], net.sinks()[k])))
                            .collect()
                    })
                    .collect(),
            );
            let expected_census = Triangle::from_rows(
                &t,
                "stirling-reversed-shifted",
                Default::default(),
                (0..=nmax)
                    .map(|n| (0..=n).map(|k| Polynomial::constant(&t, s[n + 1][n + 1 - k].clone())).collect())
                    .collect(),
            );
            let pm = net.path_matrix(nmax)?;
            vec![
                compare("path matrix of D(1, l) = Stirling subset", &d_net.path_matrix(nmax)?, &stirling),
                compare("|P(n,k)| in D' = S(n+1, n+1-k)", &census, &expected_census),
                compare("ace specialization of D' = general4(a,c,0,e)", &specialize_ace(&pm)?, &g4(&a, &z)),
                compare(
                    "sequence specialization of D' = ace-seq",
                    &specialize_ace_seq(&pm)?,
                    &gen_ace_seq(nmax, &AceParams::symbolic(&t, nmax)),
                ),
            ]
        }
        Suite::Bijection => {
            guard("bijection nmax", nmax + 1, MAX_PARTITION_NMAX)?;
            guard("network nmax", nmax, MAX_NETWORK_NMAX)?;
            bijection_suite(&t, nmax, &mut cells)?
        }
        Suite::Lgv => {
            guard("lgv nmax", nmax, MAX_LGV_NMAX)?;
            guard("minor size", args.minor_size, MAX_LGV_MINOR)?;
            vec![lgv_check(&t, nmax, args.minor_size)?]
        }
    };
    let mut summary = Summary {
        suite: args.suite,
        nmax,
        minor_size: (args.suite == Suite::Lgv).then_some(args.minor_size),
        status: "pass",
        checks,
        cells,
    };
    if !summary.passed() {
        summary.status = "fail";
    }
    Ok(summary)
}

fn bijection_suite(t: &std::sync::Arc<VariableTable>, nmax: usize, cells: &mut Vec<Cell>) -> Result<Vec<Check>> {
    let net = build_dprime(t, nmax);
    let mut round_trip = None;
    let mut words_match = None;
    for n in 0..=nmax {
        for k in 0..=n {
            let parts = enumerate_partitions(n + 1, n + 1 - k);
            let mut part_words = BTreeSet::new();
            for pi in &parts {
                let (w, _, _) = word_of_partition(pi);
                let ok = validate_word(&w, n, k).is_ok()
                    && partition_of_word(&w, n, k).is_ok_and(|back| &back == pi);
                if !ok && round_trip.is_none() {
                    round_trip = Some(json!({ "n": n, "k": k, "partition": pi.to_string(), "word": w.to_string() }));
                }
                part_words.insert(w.to_string());
            }
            let paths = net.enumerate_paths(n, k, PATH_BUDGET)?;
            let path_words: BTreeSet<String> = paths
                .iter()
                .map(|p| p.word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            if (path_words != part_words || paths.len() != parts.len()) && words_match.is_none() {
                let missing = path_words.symmetric_difference(&part_words).next().cloned();
                words_match = Some(json!({ "n": n, "k": k, "word": missing }));
            }
            cells.push(Cell { n, k, partitions: parts.len() as u64, paths: paths.len() as u64 });
        }
    }
    let total: u64 = cells.iter().map(|c| c.partitions).sum();
    Ok(vec![
        Check {
            name: "partition -> word -> partition, every word valid".into(),
            pass: round_trip.is_none(),
            detail: format!("{total} partitions"),
            counterexample: round_trip,
        },
        Check {
            name: "words of partitions = words of D' paths, per (n,k)".into(),
            pass: words_match.is_none(),
            detail: format!("{} cells", cells.len()),
            counterexample: words_match,
        },
    ])
}

fn lgv_check(t: &std::sync::Arc<VariableTable>, nmax: usize, r: usize) -> Result<Check> {
    let net = build_dprime(t, nmax);
    let pm = net.path_matrix(nmax)?;
    let cache = MinorCache::new(&pm);
    let mut count = 0u64;
    for spec in enumerate_minors(nmax + 1, 1, r.min(nmax + 1)) {
        let families = net.nonintersecting_families(&spec.rows, &spec.cols, PATH_BUDGET)?;
        let sum = families.iter().fold(Polynomial::zero(t), |acc, f| {
            &acc + &f.iter().fold(Polynomial::one(t), |w, p| &w * &p.weight)
        });
        let det = cache.det_spec(&spec);
        if *det != sum {
            return Ok(Check {
                name: "minor = nonintersecting family sum".into(),
                pass: false,
                detail: format!("mismatch after {count} minors"),
                counterexample: Some(json!({
                    "rows": spec.rows,
                    "cols": spec.cols,
                    "determinant": det.to_string(),
                    "families": sum.to_string(),
                })),
            });
        }
        count += 1;
    }
    Ok(Check {
        name: "minor = nonintersecting family sum".into(),
        pass: true,
        detail: format!("{count} minors of order <= {r}"),
        counterexample: None,
    })
}
