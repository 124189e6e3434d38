//! Lower-triangular matrices of polynomials and the recurrences that
//! generate them.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{PolyDoc, Polynomial, Scalar, Symbol, VarId, VariableTable};

/// `T(n,k)` for `0 <= k <= n <= nmax`; entries outside read as zero.
#[derive(Clone, Debug)]
pub struct Triangle {
    table: Arc<VariableTable>,
    family: String,
    params: BTreeMap<String, String>,
    rows: Vec<Vec<Polynomial>>,
    zero: Polynomial,
}

impl PartialEq for Triangle {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Triangle {
    /// Builds a triangle from explicit rows; row `n` must have `n + 1` entries.
    pub fn from_rows(
        table: &Arc<VariableTable>,
        family: impl Into<String>,
        params: BTreeMap<String, String>,
        rows: Vec<Vec<Polynomial>>,
    ) -> Triangle {
        assert!(!rows.is_empty(), "a triangle has at least row 0");
        for (n, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n + 1, "row {n} has wrong length");
        }
        Triangle {
            table: Arc::clone(table),
            family: family.into(),
            params,
            rows,
            zero: Polynomial::zero(table),
        }
    }

    pub fn from_integer_rows(
        table: &Arc<VariableTable>,
        family: impl Into<String>,
        rows: &[Vec<i64>],
    ) -> Triangle {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Polynomial::constant(table, v)).collect())
            .collect();
        Triangle::from_rows(table, family, BTreeMap::new(), rows)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn nmax(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    pub fn get(&self, n: usize, k: usize) -> &Polynomial {
        self.rows
            .get(n)
            .and_then(|row| row.get(k))
            .unwrap_or(&self.zero)
    }

    /// Signed-index access used by recurrences.
    pub fn at(&self, n: isize, k: isize) -> &Polynomial {
        if n < 0 || k < 0 {
            &self.zero
        } else {
            self.get(n as usize, k as usize)
        }
    }

    /// Leading `rows` rows.
    pub fn truncate(&self, nmax: usize) -> Triangle {
        let mut t = self.clone();
        t.rows.truncate(nmax + 1);
        t
    }

    /// Entry `(n, k)` of the result is entry `(n, n - k)` of `self`.
    pub fn reverse(&self) -> Triangle {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().rev().cloned().collect())
            .collect();
        Triangle {
            family: format!("reverse({})", self.family),
            rows,
            ..self.clone()
        }
    }

    pub fn map(&self, label: &str, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Triangle> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Triangle {
            family: label.to_string(),
            rows,
            ..self.clone()
        })
    }

    pub fn substitute(&self, assignment: &HashMap<VarId, Polynomial>) -> Result<Triangle> {
        self.map(&format!("specialized({})", self.family), |p| p.substitute(assignment))
    }

    /// Integer rows, if every entry is constant.
    pub fn integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, p)| p.as_integer().ok_or(Error::NotNumeric(n, k)))
                    .collect()
            })
            .collect()
    }

    pub fn to_doc(&self) -> TriangleDoc {
        TriangleDoc {
            family: self.family.clone(),
            params: self.params.clone(),
            nmax: self.nmax(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(Polynomial::to_doc).collect())
                .collect(),
        }
    }

    pub fn from_doc(table: &Arc<VariableTable>, doc: &TriangleDoc) -> Result<Triangle> {
        if doc.rows.len() != doc.nmax + 1 || doc.rows.iter().enumerate().any(|(n, r)| r.len() != n + 1) {
            return Err(Error::PolyFormat("triangle rows have the wrong shape".into()));
        }
        let rows = doc
            .rows
            .iter()
            .map(|r| r.iter().map(|p| Polynomial::from_doc(table, p)).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok(Triangle::from_rows(table, doc.family.clone(), doc.params.clone(), rows))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows = self.integer_rows()?;
        let mut out = String::new();
        for row in rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, row) in self.rows.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                writeln!(out, "T({n},{k}) = {p}").unwrap();
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleDoc {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub nmax: usize,
    pub rows: Vec<Vec<PolyDoc>>,
}

/// Pascal's triangle up to row `n`, exact.
pub fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::from(1); i + 1];
        for k in 1..i {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Bindings of the six-parameter recurrence.
#[derive(Clone, Debug)]
pub struct Params6 {
    pub a: Polynomial,
    pub c: Polynomial,
    pub d: Polynomial,
    pub e: Polynomial,
    pub f: Polynomial,
    pub g: Polynomial,
}

impl Params6 {
    pub fn symbolic(t: &Arc<VariableTable>) -> Params6 {
        let s = |x| Polynomial::scalar(t, x);
        Params6 {
            a: s(Scalar::A),
            c: s(Scalar::C),
            d: s(Scalar::D),
            e: s(Scalar::E),
            f: s(Scalar::F),
            g: s(Scalar::G),
        }
    }

    pub fn integers(t: &Arc<VariableTable>, v: [i64; 6]) -> Params6 {
        let k = |x| Polynomial::constant(t, x);
        Params6 {
            a: k(v[0]),
            c: k(v[1]),
            d: k(v[2]),
            e: k(v[3]),
            f: k(v[4]),
            g: k(v[5]),
        }
    }

    /// Parameters under which the reversed triangle is generated:
    /// `(a,c) <-> (d,e)`.
    pub fn reversed(&self) -> Params6 {
        Params6 {
            a: self.d.clone(),
            c: self.e.clone(),
            d: self.a.clone(),
            e: self.c.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
        }
    }

    fn describe(&self) -> BTreeMap<String, String> {
        [("a", &self.a), ("c", &self.c), ("d", &self.d), ("e", &self.e), ("f", &self.f), ("g", &self.g)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

/// Bindings of the four-parameter recurrence.
#[derive(Clone, Debug)]
pub struct Params4 {
    pub a: Polynomial,
    pub c: Polynomial,
    pub d: Polynomial,
    pub e: Polynomial,
}

impl Params4 {
    pub fn symbolic(t: &Arc<VariableTable>) -> Params4 {
        let p = Params6::symbolic(t);
        Params4 {
            a: p.a,
            c: p.c,
            d: p.d,
            e: p.e,
        }
    }

    pub fn integers(t: &Arc<VariableTable>, v: [i64; 4]) -> Params4 {
        let k = |x| Polynomial::constant(t, x);
        Params4 {
            a: k(v[0]),
            c: k(v[1]),
            d: k(v[2]),
            e: k(v[3]),
        }
    }

    pub fn with_fg_zero(&self) -> Params6 {
        let z = Polynomial::zero(self.a.table());
        Params6 {
            a: self.a.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            e: self.e.clone(),
            f: z.clone(),
            g: z,
        }
    }
}

fn empty_rows(t: &Arc<VariableTable>, nmax: usize) -> Vec<Vec<Polynomial>> {
    (0..=nmax).map(|n| vec![Polynomial::zero(t); n + 1]).collect()
}

fn get(rows: &[Vec<Polynomial>], n: isize, k: isize) -> Option<&Polynomial> {
    if n < 0 || k < 0 {
        return None;
    }
    rows.get(n as usize).and_then(|r| r.get(k as usize))
}

/// `T(n,k) = [a(n-k)+c] T(n-1,k-1) + (dk+e) T(n-1,k) + [f(n-2)+g] T(n-2,k-1)`,
/// `T(0,k) = δ_{k0}`.
pub fn gen_general6(nmax: usize, p: &Params6) -> Triangle {
    let t = p.a.table();
    let mut rows = empty_rows(t, nmax);
    rows[0][0] = Polynomial::one(t);
    for n in 1..=nmax {
        for k in 0..=n {
            let (ni, ki) = (n as isize, k as isize);
            let mut acc = Polynomial::zero(t);
            if let Some(prev) = get(&rows, ni - 1, ki - 1) {
                let coeff = &p.a.scale((n - k) as i64) + &p.c;
                acc = &acc + &(&coeff * prev);
            }
            if let Some(prev) = get(&rows, ni - 1, ki) {
                let coeff = &p.d.scale(k as i64) + &p.e;
                acc = &acc + &(&coeff * prev);
            }
            if let Some(prev) = get(&rows, ni - 2, ki - 1) {
                let coeff = &p.f.scale(n as i64 - 2) + &p.g;
                acc = &acc + &(&coeff * prev);
            }
            rows[n][k] = acc;
        }
    }
    Triangle::from_rows(t, "general6", p.describe(), rows)
}

pub fn gen_general4(nmax: usize, p: &Params4) -> Triangle {
    let mut tri = gen_general6(nmax, &p.with_fg_zero());
    tri.family = "general4".into();
    tri.params.remove("f");
    tri.params.remove("g");
    tri
}

fn integer_triangle(
    t: &Arc<VariableTable>,
    family: &str,
    nmax: usize,
    step: impl Fn(usize, usize, &BigInt, &BigInt) -> BigInt,
) -> Triangle {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    let zero = BigInt::from(0);
    for n in 1..=nmax {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let diag = if k > 0 { &prev[k - 1] } else { &zero };
                let up = prev.get(k).unwrap_or(&zero);
                step(n, k, diag, up)
            })
            .collect();
        rows.push(row);
    }
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|v| Polynomial::constant(t, v)).collect())
        .collect();
    Triangle::from_rows(t, family, BTreeMap::new(), rows)
}

/// Clean Eulerian triangle: `A(n,k) = (n-k+1) A(n-1,k-1) + (k+1) A(n-1,k)`.
pub fn gen_eulerian(t: &Arc<VariableTable>, nmax: usize) -> Triangle {
    integer_triangle(t, "eulerian", nmax, |n, k, diag, up| {
        diag * BigInt::from(n - k + 1) + up * BigInt::from(k + 1)
    })
}

/// Reversed Stirling subset triangle: `S(n,k) = (n-k) S(n-1,k-1) + S(n-1,k)`.
pub fn gen_rev_stirling(t: &Arc<VariableTable>, nmax: usize) -> Triangle {
    integer_triangle(t, "rev-stirling", nmax, |n, k, diag, up| {
        diag * BigInt::from(n - k) + up
    })
}

/// Bindings of the sequence recurrence: one `a` and sequences `c_i`, `e_i`.
#[derive(Clone, Debug)]
pub struct AceParams {
    pub a: Polynomial,
    pub c: Vec<Polynomial>,
    pub e: Vec<Polynomial>,
}

impl AceParams {
    /// `a` symbolic, `c_i` and `e_i` distinct indeterminates for `i < len`.
    pub fn symbolic(t: &Arc<VariableTable>, len: usize) -> AceParams {
        let seq = |f: fn(u32) -> Symbol| {
            (0..len as u32)
                .map(|i| Polynomial::variable(t, f(i)).unwrap())
                .collect()
        };
        AceParams {
            a: Polynomial::scalar(t, Scalar::A),
            c: seq(Symbol::CSeq),
            e: seq(Symbol::ESeq),
        }
    }

    pub fn constant(a: &Polynomial, c: &Polynomial, e: &Polynomial, len: usize) -> AceParams {
        AceParams {
            a: a.clone(),
            c: vec![c.clone(); len],
            e: vec![e.clone(); len],
        }
    }
}

/// `T(n,k) = c_{n-1} T(n-1,k-1) + Σ_m C(n-1,m) a^m e_{n-1-m} T(n-1-m,k-m)`.
pub fn gen_ace_seq(nmax: usize, p: &AceParams) -> Triangle {
    assert!(p.c.len() >= nmax && p.e.len() >= nmax, "sequences must cover indices 0..nmax-1");
    let t = p.a.table();
    let binom = binomials(nmax);
    let apow: Vec<Polynomial> = (0..=nmax as u32).map(|m| p.a.pow(m)).collect();
    let mut rows = empty_rows(t, nmax);
    rows[0][0] = Polynomial::one(t);
    for n in 1..=nmax {
        for k in 0..=n {
            let (ni, ki) = (n as isize, k as isize);
            let mut acc = Polynomial::zero(t);
            if let Some(prev) = get(&rows, ni - 1, ki - 1) {
                acc = &acc + &(&p.c[n - 1] * prev);
            }
            for m in 0..n {
                if let Some(prev) = get(&rows, ni - 1 - m as isize, ki - m as isize) {
                    let coeff = (&apow[m] * &p.e[n - 1 - m]).scale(binom[n - 1][m].clone());
                    acc = &acc + &(&coeff * prev);
                }
            }
            rows[n][k] = acc;
        }
    }
    let mut params = BTreeMap::new();
    params.insert("a".to_string(), p.a.to_string());
    let seq = |v: &[Polynomial]| v[..nmax].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
    params.insert("c".to_string(), seq(&p.c));
    params.insert("e".to_string(), seq(&p.e));
    Triangle::from_rows(t, "ace-seq", params, rows)
}

/// `T(n,k) = e T(n-1,k) + Σ_m C(n-1,m) d^m c T(n-1-m,k-1)`.
pub fn gen_alt_i(nmax: usize, c: &Polynomial, d: &Polynomial, e: &Polynomial) -> Triangle {
    let t = c.table();
    let binom = binomials(nmax);
    let dpow: Vec<Polynomial> = (0..=nmax as u32).map(|m| d.pow(m)).collect();
    let mut rows = empty_rows(t, nmax);
    rows[0][0] = Polynomial::one(t);
    for n in 1..=nmax {
        for k in 0..=n {
            let (ni, ki) = (n as isize, k as isize);
            let mut acc = Polynomial::zero(t);
            if let Some(prev) = get(&rows, ni - 1, ki) {
                acc = &acc + &(e * prev);
            }
            for m in 0..n {
                if let Some(prev) = get(&rows, ni - 1 - m as isize, ki - 1) {
                    let coeff = (&dpow[m] * c).scale(binom[n - 1][m].clone());
                    acc = &acc + &(&coeff * prev);
                }
            }
            rows[n][k] = acc;
        }
    }
    let params = [("c", c), ("d", d), ("e", e)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Triangle::from_rows(t, "alt-i", params, rows)
}

/// `T(n,k) = c T(n-1,k-1) + Σ_m C(n-1,m) a^m e T(n-1-m,k-m)`.
pub fn gen_alt_ii(nmax: usize, a: &Polynomial, c: &Polynomial, e: &Polynomial) -> Triangle {
    let mut tri = gen_ace_seq(nmax, &AceParams::constant(a, c, e, nmax));
    tri.family = "alt-ii".into();
    tri.params = [("a", a), ("c", c), ("e", e)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    tri
}

/// Family selector with its parameter bindings.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    Eulerian,
    RevStirling,
    General4(Params4),
    General6(Params6),
    AceSeq(AceSeqBinding),
    AltI { c: Polynomial, d: Polynomial, e: Polynomial },
    AltII { a: Polynomial, c: Polynomial, e: Polynomial },
    /// Integer control matrix with a planted negative 2x2 minor.
    Planted,
}

/// How the `c` and `e` sequences of the ace-seq family are bound.
#[derive(Clone, Debug)]
pub struct AceSeqBinding {
    pub a: Polynomial,
    /// `None` means the indexed indeterminates `c_i`.
    pub c: Option<Polynomial>,
    pub e: Option<Polynomial>,
}

pub const FAMILIES: [&str; 8] = [
    "eulerian",
    "rev-stirling",
    "general4",
    "general6",
    "ace-seq",
    "alt-i",
    "alt-ii",
    "planted",
];

/// Parses `name=value,...` where each value is an integer or a scalar name.
pub fn parse_bindings(t: &Arc<VariableTable>, s: &str) -> Result<BTreeMap<char, Polynomial>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::BadParameter(format!("`{item}` is not name=value")))?;
        let name = name.trim();
        let key = match name.chars().collect::<Vec<_>>().as_slice() {
            [c] if Scalar::from_name(*c).is_some() => *c,
            _ => return Err(Error::BadParameter(format!("unknown parameter `{name}`"))),
        };
        let value = value.trim();
        let poly = if let Ok(v) = value.parse::<BigInt>() {
            Polynomial::constant(t, v)
        } else {
            match value.chars().collect::<Vec<_>>().as_slice() {
                [c] if Scalar::from_name(*c).is_some() => {
                    Polynomial::scalar(t, Scalar::from_name(*c).unwrap())
                }
                _ => {
                    return Err(Error::BadParameter(format!(
                        "value `{value}` is neither an integer nor a symbol"
                    )))
                }
            }
        };
        if out.insert(key, poly).is_some() {
            return Err(Error::BadParameter(format!("`{name}` bound twice")));
        }
    }
    Ok(out)
}

impl FamilySpec {
    pub fn parse(t: &Arc<VariableTable>, family: &str, params: &str) -> Result<FamilySpec> {
        let mut b = parse_bindings(t, params)?;
        let allowed: &[char] = match family {
            "eulerian" | "rev-stirling" | "planted" => &[],
            "general4" => &['a', 'c', 'd', 'e'],
            "general6" => &['a', 'c', 'd', 'e', 'f', 'g'],
            "ace-seq" | "alt-ii" => &['a', 'c', 'e'],
            "alt-i" => &['c', 'd', 'e'],
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some(k) = b.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::BadParameter(format!("family {family} takes no parameter `{k}`")));
        }
        let mut take = |c: char| {
            b.remove(&c)
                .unwrap_or_else(|| Polynomial::scalar(t, Scalar::from_name(c).unwrap()))
        };
        Ok(match family {
            "eulerian" => FamilySpec::Eulerian,
            "rev-stirling" => FamilySpec::RevStirling,
            "planted" => FamilySpec::Planted,
            "general4" => FamilySpec::General4(Params4 {
                a: take('a'),
                c: take('c'),
                d: take('d'),
                e: take('e'),
            }),
            "general6" => FamilySpec::General6(Params6 {
                a: take('a'),
                c: take('c'),
                d: take('d'),
                e: take('e'),
                f: take('f'),
                g: take('g'),
            }),
            "ace-seq" => FamilySpec::AceSeq(AceSeqBinding {
                a: take('a'),
                c: b.remove(&'c'),
                e: b.remove(&'e'),
            }),
            "alt-i" => FamilySpec::AltI {
                c: take('c'),
                d: take('d'),
                e: take('e'),
            },
            "alt-ii" => FamilySpec::AltII {
                a: take('a'),
                c: take('c'),
                e: take('e'),
            },
            _ => unreachable!(),
        })
    }

    pub fn generate(&self, t: &Arc<VariableTable>, nmax: usize) -> Triangle {
        match self {
            FamilySpec::Eulerian => gen_eulerian(t, nmax),
            FamilySpec::RevStirling => gen_rev_stirling(t, nmax),
            FamilySpec::General4(p) => gen_general4(nmax, p),
            FamilySpec::General6(p) => gen_general6(nmax, p),
            FamilySpec::AceSeq(b) => {
                let sym = AceParams::symbolic(t, nmax);
                let p = AceParams {
                    a: b.a.clone(),
                    c: b.c.as_ref().map_or(sym.c, |c| vec![c.clone(); nmax]),
                    e: b.e.as_ref().map_or(sym.e, |e| vec![e.clone(); nmax]),
                };
                gen_ace_seq(nmax, &p)
            }
            FamilySpec::AltI { c, d, e } => gen_alt_i(nmax, c, d, e),
            FamilySpec::AltII { a, c, e } => gen_alt_ii(nmax, a, c, e),
            FamilySpec::Planted => planted(t, nmax),
        }
    }
}

/// Pascal-like integer triangle whose rows {1,2} x cols {0,1} form the
/// matrix [[1,2],[3,1]] (determinant -5). Rows past 2 are zero apart from a
/// unit diagonal.
pub fn planted(t: &Arc<VariableTable>, nmax: usize) -> Triangle {
    let head: [&[i64]; 3] = [&[1], &[1, 2], &[3, 1, 1]];
    let rows: Vec<Vec<i64>> = (0..=nmax)
        .map(|n| match head.get(n) {
            Some(r) => r.to_vec(),
            None => (0..=n).map(|k| i64::from(k == n)).collect(),
        })
        .collect();
    Triangle::from_integer_rows(t, "planted", &rows)
}
