//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Every polynomial carries a reference to the [`VariableTable`] its variable
//! ids were issued from. Arithmetic between polynomials of different tables is
//! rejected. Terms are kept sorted in descending graded-lexicographic order on
//! variable ids, so the leading term is always `terms[0]`.

use std::cmp::Ordering;
use std::collections::{btree_map, BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type VarId = u32;

/// The six named indeterminates of the triangle recurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    A,
    C,
    D,
    E,
    F,
    G,
}

impl Scalar {
    pub const ALL: [Scalar; 6] = [Scalar::A, Scalar::C, Scalar::D, Scalar::E, Scalar::F, Scalar::G];

    pub fn name(self) -> char {
        match self {
            Scalar::A => 'a',
            Scalar::C => 'c',
            Scalar::D => 'd',
            Scalar::E => 'e',
            Scalar::F => 'f',
            Scalar::G => 'g',
        }
    }

    pub fn from_name(c: char) -> Option<Scalar> {
        Scalar::ALL.into_iter().find(|s| s.name() == c)
    }
}

/// Variable descriptor.
///
/// Textual forms: `a` .. `g` for scalars, `a(i,j,l)` and `e(i,l)` for the
/// network alphabet, `c_i` and `e_i` for the sequence indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Scalar(Scalar),
    /// `a_{i,j,l}`, requires `j <= i`.
    A { i: u32, j: u32, l: u32 },
    /// `e_{i,l}`.
    E { i: u32, l: u32 },
    CSeq(u32),
    ESeq(u32),
}

impl Symbol {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Symbol::A { i, j, .. } if j > i => Err(Error::MalformedSymbol(self.to_string())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::Scalar(s) => write!(f, "{}", s.name()),
            Symbol::A { i, j, l } => write!(f, "a({i},{j},{l})"),
            Symbol::E { i, l } => write!(f, "e({i},{l})"),
            Symbol::CSeq(i) => write!(f, "c_{i}"),
            Symbol::ESeq(i) => write!(f, "e_{i}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedSymbol(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        let sym = if rest.is_empty() {
            Symbol::Scalar(Scalar::from_name(head).ok_or_else(bad)?)
        } else if let Some(idx) = rest.strip_prefix('_') {
            let i: u32 = idx.parse().map_err(|_| bad())?;
            match head {
                'c' => Symbol::CSeq(i),
                'e' => Symbol::ESeq(i),
                _ => return Err(bad()),
            }
        } else {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            let idx: Vec<u32> = inner
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            match (head, idx.as_slice()) {
                ('a', &[i, j, l]) => Symbol::A { i, j, l },
                ('e', &[i, l]) => Symbol::E { i, l },
                _ => return Err(bad()),
            }
        };
        sym.validate()?;
        Ok(sym)
    }
}

#[derive(Default)]
struct TableInner {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, VarId>,
}

/// Append-only registry of variables shared by all polynomials of a session.
#[derive(Default)]
pub struct VariableTable {
    inner: RwLock<TableInner>,
}

impl fmt::Debug for VariableTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VariableTable").field("len", &self.len()).finish()
    }
}

impl VariableTable {
    pub fn new() -> Arc<VariableTable> {
        Arc::new(VariableTable::default())
    }

    /// Returns the id of `sym`, registering it if needed.
    pub fn intern(&self, sym: Symbol) -> Result<VarId> {
        sym.validate()?;
        if let Some(&id) = self.inner.read().unwrap().index.get(&sym) {
            return Ok(id);
        }
        let mut inner = self.inner.write().unwrap();
        if let Some(&id) = inner.index.get(&sym) {
            return Ok(id);
        }
        let id = inner.symbols.len() as VarId;
        inner.symbols.push(sym);
        inner.index.insert(sym, id);
        Ok(id)
    }

    pub fn lookup(&self, sym: &Symbol) -> Option<VarId> {
        self.inner.read().unwrap().index.get(sym).copied()
    }

    pub fn symbol(&self, id: VarId) -> Symbol {
        self.inner.read().unwrap().symbols[id as usize]
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.inner.read().unwrap().symbols.clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exponent vector, sorted by variable id, zero exponents never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(id: VarId) -> Monomial {
        let mut v = SmallVec::new();
        v.push((id, 1));
        Monomial(v)
    }

    /// Builds a monomial from arbitrary `(id, exp)` pairs, merging repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Monomial {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0u32) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn exponent(&self, id: VarId) -> u32 {
        self.0
            .binary_search_by_key(&id, |&(v, _)| v)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut d = 0;
            if j < other.0.len() && other.0[j].0 == v {
                d = other.0[j].1;
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            match e.cmp(&d) {
                Ordering::Less => return None,
                Ordering::Greater => out.push((v, e - d)),
                Ordering::Equal => {}
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }
}

/// Graded lexicographic comparison of two sorted exponent lists, with the
/// smaller key being the more significant variable.
fn grlex<K: Ord + Copy>(a: &[(K, u32)], b: &[(K, u32)]) -> Ordering {
    let da: u32 = a.iter().map(|p| p.1).sum();
    let db: u32 = b.iter().map(|p| p.1).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            let ord = match x.0.cmp(&y.0) {
                Ordering::Less => Ordering::Greater,
                Ordering::Greater => Ordering::Less,
                Ordering::Equal => x.1.cmp(&y.1),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.len().cmp(&b.len())
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct Polynomial {
    table: Arc<VariableTable>,
    // descending monomial order, nonzero coefficients
    terms: Vec<(Monomial, BigInt)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_table(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(table: &Arc<VariableTable>) -> Polynomial {
        Polynomial {
            table: Arc::clone(table),
            terms: Vec::new(),
        }
    }

    pub fn one(table: &Arc<VariableTable>) -> Polynomial {
        Polynomial::constant(table, 1)
    }

    pub fn constant(table: &Arc<VariableTable>, c: impl Into<BigInt>) -> Polynomial {
        Polynomial::from_terms(table, [(Monomial::one(), c.into())])
    }

    /// The degree-1 monic polynomial on `sym`; registers the symbol.
    pub fn variable(table: &Arc<VariableTable>, sym: Symbol) -> Result<Polynomial> {
        let id = table.intern(sym)?;
        Ok(Polynomial::from_terms(table, [(Monomial::var(id), BigInt::one())]))
    }

    /// Shorthand for the six named scalars; never fails.
    pub fn scalar(table: &Arc<VariableTable>, s: Scalar) -> Polynomial {
        Polynomial::variable(table, Symbol::Scalar(s)).expect("scalars are well formed")
    }

    pub fn from_terms(
        table: &Arc<VariableTable>,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Polynomial {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Polynomial::from_map(table, acc)
    }

    fn from_map(table: &Arc<VariableTable>, acc: HashMap<Monomial, BigInt>) -> Polynomial {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial {
            table: Arc::clone(table),
            terms,
        }
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn same_table(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.table, &other.table)
    }

    fn check_table(&self, other: &Polynomial) -> Result<()> {
        if self.same_table(other) {
            Ok(())
        } else {
            Err(Error::MixedTables)
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    /// The value of a constant polynomial.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &BigInt| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), rhs(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Polynomial {
            table: Arc::clone(&self.table),
            terms: out,
        }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.table));
        }
        if let [(m, c)] = other.terms.as_slice() {
            return Ok(self.mul_term(m, c));
        }
        if let [(m, c)] = self.terms.as_slice() {
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(c) => *c += ca * cb,
                    None => {
                        acc.insert(m, ca * cb);
                    }
                }
            }
        }
        Ok(Polynomial::from_map(&self.table, acc))
    }

    /// Multiplication by a single term preserves the order, no re-sort.
    fn mul_term(&self, m: &Monomial, c: &BigInt) -> Polynomial {
        Polynomial {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Polynomial {
        let k = k.into();
        if k.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * &k)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.table);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True iff every coefficient is nonnegative (vacuously for zero).
    pub fn is_coeffwise_nonneg(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// First negative term in canonical order, if any.
    pub fn first_negative_term(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.iter().find(|(_, c)| c.is_negative())
    }

    /// Set of total degrees occurring in the polynomial.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).collect()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == d)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.exponents().iter().map(|&(v, _)| v))
            .collect()
    }

    /// Simultaneous substitution; variables absent from `assignment` stay.
    pub fn substitute(&self, assignment: &HashMap<VarId, Polynomial>) -> Result<Polynomial> {
        for v in assignment.values() {
            self.check_table(v)?;
        }
        let mut powers: HashMap<(VarId, u32), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero(&self.table);
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Polynomial::constant(&self.table, c.clone());
            for &(v, e) in m.exponents() {
                match assignment.get(&v) {
                    Some(val) => {
                        let p = powers.entry((v, e)).or_insert_with(|| val.pow(e));
                        factor = &factor * p;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                factor = factor.mul_term(&Monomial(kept.into_iter().collect()), &BigInt::one());
            }
            acc = &acc + &factor;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`. Fails if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_table(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::NotDivisible)?;
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lm).ok_or(Error::NotDivisible)?;
            if !(&c % lc).is_zero() {
                return Err(Error::NotDivisible);
            }
            let qc = &c / lc;
            for (dm, dc) in &divisor.terms[1..] {
                let key = dm.mul(&qm);
                let delta = dc * &qc;
                match rem.entry(key) {
                    btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        // quotient terms were produced in strictly descending order
        Ok(Polynomial {
            table: Arc::clone(&self.table),
            terms: quotient,
        })
    }

    /// Terms as `(symbol, exp)` lists sorted by symbol, in descending graded
    /// lexicographic order on symbols. Independent of the table's id order.
    fn symbolic_terms(&self) -> Vec<(Vec<(Symbol, u32)>, &BigInt)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut pairs: Vec<(Symbol, u32)> = m
                    .exponents()
                    .iter()
                    .map(|&(v, e)| (self.table.symbol(v), e))
                    .collect();
                pairs.sort();
                (pairs, c)
            })
            .collect();
        out.sort_by(|x, y| grlex(&y.0, &x.0));
        out
    }

    pub fn to_doc(&self) -> PolyDoc {
        let terms = self.symbolic_terms();
        let vars: Vec<Symbol> = terms
            .iter()
            .flat_map(|(pairs, _)| pairs.iter().map(|p| p.0))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos = |s: &Symbol| vars.binary_search(s).unwrap();
        PolyDoc {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: terms
                .iter()
                .map(|(pairs, c)| (pairs.iter().map(|(s, e)| (pos(s), *e)).collect(), c.to_string()))
                .collect(),
        }
    }

    pub fn from_doc(table: &Arc<VariableTable>, doc: &PolyDoc) -> Result<Polynomial> {
        let ids = doc
            .vars
            .iter()
            .map(|s| table.intern(s.parse()?))
            .collect::<Result<Vec<_>>>()?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (pairs, coeff) in &doc.terms {
            let mut mono = Vec::with_capacity(pairs.len());
            for &(idx, e) in pairs {
                let id = *ids
                    .get(idx)
                    .ok_or_else(|| Error::PolyFormat(format!("variable index {idx} out of range")))?;
                mono.push((id, e));
            }
            let c: BigInt = coeff
                .parse()
                .map_err(|_| Error::PolyFormat(format!("bad coefficient `{coeff}`")))?;
            terms.push((Monomial::from_pairs(mono), c));
        }
        Ok(Polynomial::from_terms(table, terms))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(table: &Arc<VariableTable>, s: &str) -> Result<Polynomial> {
        let doc: PolyDoc = serde_json::from_str(s)?;
        Polynomial::from_doc(table, &doc)
    }
}

/// Serialized form: `{"vars": [...], "terms": [[[[varIndex, exp], ...], "coeff"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<(usize, u32)>, String)>,
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (pairs, c)) in self.symbolic_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if !abs.is_one() || pairs.is_empty() {
                write!(f, "{abs}")?;
                first = false;
            }
            for (s, e) in pairs {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{s}")?;
                } else {
                    write!(f, "{s}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials from different tables")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials from different tables")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials from different tables")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1)
    }
}
