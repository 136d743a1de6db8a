//! Finite relations, primitive positive formulas and walls.
//!
//! Relations are stored as sorted tuple sets over a domain `0..k`. A
//! [`PPFormula`] has atoms over one designated graph's edge relation and
//! equality; evaluating it is a homomorphism search from the formula's
//! variable structure into the graph, one search per free assignment.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, OddGirth, VertexSet};
use crate::hom::{AdjacencyView, HomSolver, PartialMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("tuple {tuple:?} does not fit arity {arity} over domain {domain}")]
    BadTuple {
        tuple: Vec<usize>,
        arity: usize,
        domain: usize,
    },
    #[error("atom {0} refers to a variable outside the formula")]
    BadAtom(String),
    #[error("enumeration of {0} assignments exceeds the budget")]
    Budget(u128),
    #[error("cycle length {k} invalid for arity {arity}: need odd k with 1 <= k <= arity")]
    BadCycle { k: usize, arity: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not a wall for this relation and graph")]
    NotAWall,
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("template `{name}` needs {what}")]
    TemplateParameter { name: String, what: String },
    #[error("hypothesis does not hold: {0}")]
    Hypothesis(String),
    #[error("malformed relation text: {0}")]
    Parse(String),
}

/// Bound on the number of tuples any enumeration here may visit.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

fn check_budget(domain: usize, arity: usize) -> Result<(), RelationError> {
    let size = (domain as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_BUDGET {
        Err(RelationError::Budget(size))
    } else {
        Ok(())
    }
}

/// Every tuple of `0..domain` of length `arity`, in lexicographic order.
fn all_tuples(domain: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (domain as u128).pow(arity as u32);
    let mut current = vec![0usize; arity];
    let mut produced = 0u128;
    std::iter::from_fn(move || {
        if produced == total {
            return None;
        }
        let out = current.clone();
        produced += 1;
        for slot in current.iter_mut().rev() {
            *slot += 1;
            if *slot < domain {
                break;
            }
            *slot = 0;
        }
        Some(out)
    })
}

/// An `arity`-ary relation over `0..domain`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Relation {
    domain: usize,
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn new<I>(domain: usize, arity: usize, tuples: I) -> Result<Relation, RelationError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity || t.iter().any(|&x| x >= domain) {
                return Err(RelationError::BadTuple {
                    tuple: t,
                    arity,
                    domain,
                });
            }
            set.insert(t);
        }
        Ok(Relation {
            domain,
            arity,
            tuples: set,
        })
    }

    pub fn empty(domain: usize, arity: usize) -> Relation {
        Relation {
            domain,
            arity,
            tuples: BTreeSet::new(),
        }
    }

    /// Edge relation of `h`, both orientations.
    pub fn edges(h: &Graph) -> Relation {
        let tuples = h
            .edges()
            .into_iter()
            .flat_map(|(u, v)| [vec![u, v], vec![v, u]]);
        Relation::new(h.order(), 2, tuples).expect("graph edges are in range")
    }

    pub fn equality(k: usize) -> Relation {
        Relation::new(k, 2, (0..k).map(|x| vec![x, x])).expect("in range")
    }

    /// The disequality relation on `0..k` (the edge relation of `K_k`).
    pub fn neq(k: usize) -> Relation {
        let tuples = (0..k).flat_map(|x| (0..k).filter(move |&y| y != x).map(move |y| vec![x, y]));
        Relation::new(k, 2, tuples).expect("in range")
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.tuples.iter()
    }

    pub fn insert(&mut self, t: Vec<usize>) -> Result<(), RelationError> {
        if t.len() != self.arity || t.iter().any(|&x| x >= self.domain) {
            return Err(RelationError::BadTuple {
                tuple: t,
                arity: self.arity,
                domain: self.domain,
            });
        }
        self.tuples.insert(t);
        Ok(())
    }

    /// Text format: header `k n`, then one tuple per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.domain, self.arity);
        for t in &self.tuples {
            let line: Vec<String> = t.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Relation, RelationError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = parse_ints(lines.next().ok_or_else(|| RelationError::Parse("missing header".into()))?)?;
        let [domain, arity] = header[..] else {
            return Err(RelationError::Parse("header must be `k n`".into()));
        };
        let mut tuples = Vec::new();
        for line in lines {
            tuples.push(parse_ints(line)?);
        }
        Relation::new(domain, arity, tuples)
    }
}

fn parse_ints(line: &str) -> Result<Vec<usize>, RelationError> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| RelationError::Parse(format!("bad integer `{t}`")))
        })
        .collect()
}

/// One conjunct of a pp-formula. Indices refer to formula variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Atom {
    Edge(usize, usize),
    Eq(usize, usize),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Edge(i, j) => write!(f, "E(x{i},x{j})"),
            Atom::Eq(i, j) => write!(f, "x{i}=x{j}"),
        }
    }
}

/// `R(x0..x{free-1}) = exists x{free}..: atoms`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPFormula {
    free: usize,
    existential: usize,
    atoms: Vec<Atom>,
}

impl PPFormula {
    pub fn new(free: usize, existential: usize, atoms: Vec<Atom>) -> Result<PPFormula, RelationError> {
        let total = free + existential;
        for a in &atoms {
            let (Atom::Edge(i, j) | Atom::Eq(i, j)) = *a;
            if i >= total || j >= total {
                return Err(RelationError::BadAtom(a.to_string()));
            }
        }
        Ok(PPFormula {
            free,
            existential,
            atoms,
        })
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn existential(&self) -> usize {
        self.existential
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.existential == 0
    }
}

impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = (0..self.free).map(|i| format!("x{i}")).collect();
        write!(f, "R({}) := ", free.join(","))?;
        if self.existential > 0 {
            let ex: Vec<String> = (self.free..self.free + self.existential)
                .map(|i| format!("x{i}"))
                .collect();
            write!(f, "exists {}: ", ex.join(","))?;
        }
        if self.atoms.is_empty() {
            return f.write_str("true");
        }
        let atoms: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        f.write_str(&atoms.join(" & "))
    }
}

struct AdjacencyLists(Vec<Vec<usize>>);

impl AdjacencyView for AdjacencyLists {
    fn order(&self) -> usize {
        self.0.len()
    }

    fn neighbor_list(&self, v: usize) -> Vec<usize> {
        self.0[v].clone()
    }
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The relation defined by `f` over `h`.
pub fn pp_evaluate(f: &PPFormula, h: &Graph) -> Result<Relation, RelationError> {
    let k = h.order();
    check_budget(k, f.free)?;
    let total = f.free + f.existential;
    let mut parent: Vec<usize> = (0..total).collect();
    for a in &f.atoms {
        if let Atom::Eq(i, j) = *a {
            let (ri, rj) = (find_root(&mut parent, i), find_root(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut class_of = vec![0usize; total];
    let mut classes = 0;
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (v, slot) in class_of.iter_mut().enumerate() {
        let root = find_root(&mut parent, v);
        *slot = *index.entry(root).or_insert_with(|| {
            classes += 1;
            classes - 1
        });
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); classes];
    for a in &f.atoms {
        if let Atom::Edge(i, j) = *a {
            let (ci, cj) = (class_of[i], class_of[j]);
            if ci == cj {
                // a loop atom is never satisfied in a simple graph
                return Ok(Relation::empty(k, f.free));
            }
            adj[ci].insert(cj);
            adj[cj].insert(ci);
        }
    }
    let structure = AdjacencyLists(adj.into_iter().map(|s| s.into_iter().collect()).collect());
    let mut solver = HomSolver::new(&structure, h);
    let mut out = Relation::empty(k, f.free);
    'assign: for t in all_tuples(k, f.free) {
        let mut pins = PartialMap::empty(classes);
        for (var, &x) in t.iter().enumerate() {
            let c = class_of[var];
            match pins.get(c) {
                Some(y) if y != x => continue 'assign,
                _ => pins.set(c, x),
            }
        }
        let found = solver
            .find_where(&pins, |_| true)
            .expect("pins have the structure's length");
        if found.is_some() {
            out.tuples.insert(t);
        }
    }
    Ok(out)
}

fn atom_holds(base: &Relation, vars: &[usize], t: &[usize]) -> bool {
    let image: Vec<usize> = vars.iter().map(|&v| t[v]).collect();
    base.contains(&image)
}

/// Whether `target` is an intersection of atoms `base(..)` and `x_i = x_j`
/// over its own variables, i.e. whether `base` qfpp-defines `target`.
pub fn qfpp_definable_over(target: &Relation, base: &Relation) -> Result<bool, RelationError> {
    if target.domain != base.domain {
        return Err(RelationError::Dimension(format!(
            "domains {} and {} differ",
            target.domain, base.domain
        )));
    }
    let n = target.arity;
    check_budget(target.domain, n)?;
    check_budget(n.max(1), base.arity)?;
    let implied_base: Vec<Vec<usize>> = all_tuples(n, base.arity)
        .filter(|vars| target.iter().all(|t| atom_holds(base, vars, t)))
        .collect();
    let implied_eq: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| target.iter().all(|t| t[i] == t[j]))
        .collect();
    let closure_size = all_tuples(target.domain, n)
        .filter(|t| {
            implied_eq.iter().all(|&(i, j)| t[i] == t[j])
                && implied_base.iter().all(|vars| atom_holds(base, vars, t))
        })
        .count();
    Ok(closure_size == target.len())
}

/// Whether the edge relation of `h` qfpp-defines `r`.
pub fn qfpp_definable(r: &Relation, h: &Graph) -> Result<bool, RelationError> {
    qfpp_definable_over(r, &Relation::edges(h))
}

/// `R(x_1..x_n) = E(x_1,x_2) & ... & E(x_k,x_1)`, the remaining
/// coordinates unconstrained.
pub fn cycle_relation(h: &Graph, k: usize, arity: usize) -> Result<Relation, RelationError> {
    if k == 0 || k.is_multiple_of(2) || k > arity {
        return Err(RelationError::BadCycle { k, arity });
    }
    let n = h.order();
    check_budget(n, arity)?;
    let mut walks: Vec<Vec<usize>> = Vec::new();
    fn extend(h: &Graph, k: usize, walk: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if walk.len() == k {
            if h.has_edge(walk[k - 1], walk[0]) {
                out.push(walk.clone());
            }
            return;
        }
        let last = *walk.last().expect("walk starts non-empty");
        for w in h.neighbors(last).iter() {
            walk.push(w);
            extend(h, k, walk, out);
            walk.pop();
        }
    }
    for s in 0..n {
        extend(h, k, &mut vec![s], &mut walks);
    }
    let mut out = Relation::empty(n, arity);
    for w in walks {
        for tail in all_tuples(n, arity - k) {
            let mut t = w.clone();
            t.extend(tail);
            out.tuples.insert(t);
        }
    }
    Ok(out)
}

/// Whether consecutive entries of `xs` (cyclically) are all adjacent.
pub fn induced_kcycle_check(h: &Graph, xs: &[usize]) -> bool {
    let k = xs.len();
    k > 0 && (0..k).all(|i| h.has_edge(xs[i], xs[(i + 1) % k]))
}

/// Literal test: `xs` are distinct and induce exactly the cycle
/// `xs[0] - xs[1] - ... - xs[k-1] - xs[0]`.
pub fn is_induced_cycle(h: &Graph, xs: &[usize]) -> bool {
    let k = xs.len();
    if k < 3 || xs.iter().collect::<BTreeSet<_>>().len() != k {
        return false;
    }
    (0..k).all(|i| {
        (0..k).all(|j| {
            let consecutive = (i + 1) % k == j || (j + 1) % k == i;
            h.has_edge(xs[i], xs[j]) == consecutive
        })
    })
}

/// Same vertices; keeps exactly the edges lying on some `k`-cycle.
pub fn cycle_edge_subgraph(h: &Graph, k: usize) -> Graph {
    fn reaches(h: &Graph, from: usize, to: usize, steps: usize, used: VertexSet) -> bool {
        if steps == 1 {
            return h.has_edge(from, to);
        }
        h.neighbors(from)
            .iter()
            .filter(|&w| !used.contains(w))
            .any(|w| {
                let mut next = used;
                next.insert(w);
                reaches(h, w, to, steps - 1, next)
            })
    }
    let mut out = Graph::empty(h.order()).expect("same order");
    if k < 3 {
        return out;
    }
    for (u, v) in h.edges() {
        let used = VertexSet::from_vertices([u, v]);
        if reaches(h, v, u, k - 1, used) {
            out.add_edge(u, v).expect("edge of h");
        }
    }
    out
}

/// A partial operation `V^m -> V` given by its table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialOperation {
    arity: usize,
    table: BTreeMap<Vec<usize>, usize>,
}

impl PartialOperation {
    pub fn new(arity: usize, entries: impl IntoIterator<Item = (Vec<usize>, usize)>) -> Result<Self, RelationError> {
        let mut table = BTreeMap::new();
        for (t, x) in entries {
            if t.len() != arity {
                return Err(RelationError::Dimension(format!(
                    "argument {t:?} has length {} but arity is {arity}",
                    t.len()
                )));
            }
            table.insert(t, x);
        }
        Ok(PartialOperation { arity, table })
    }

    /// The operation with value `a` on every tuple of `domain`.
    pub fn constant(arity: usize, domain: impl IntoIterator<Item = Vec<usize>>, a: usize) -> Result<Self, RelationError> {
        PartialOperation::new(arity, domain.into_iter().map(|t| (t, a)))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, t: &[usize]) -> Option<usize> {
        self.table.get(t).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.table.keys()
    }
}

/// Whether `f` preserves `r`: for every `n x m` matrix whose columns lie in
/// `r` and whose rows lie in the domain of `f`, the column of row images
/// lies in `r`.
pub fn is_partial_polymorphism(f: &PartialOperation, r: &Relation) -> bool {
    let m = f.arity;
    let n = r.arity;
    if f.table.is_empty() || n == 0 {
        return true;
    }
    let mut prefixes: HashSet<&[usize]> = HashSet::new();
    for t in f.table.keys() {
        for len in 1..=m {
            prefixes.insert(&t[..len]);
        }
    }
    let columns: Vec<&Vec<usize>> = r.iter().collect();
    let mut rows: Vec<Vec<usize>> = vec![Vec::with_capacity(m); n];

    // Returns false as soon as some completed matrix maps outside `r`.
    fn fill(
        f: &PartialOperation,
        r: &Relation,
        columns: &[&Vec<usize>],
        prefixes: &HashSet<&[usize]>,
        rows: &mut Vec<Vec<usize>>,
        depth: usize,
    ) -> bool {
        if depth == f.arity {
            let image: Vec<usize> = rows
                .iter()
                .map(|row| f.get(row).expect("full rows are in the domain"))
                .collect();
            return r.contains(&image);
        }
        for col in columns {
            for (row, &x) in rows.iter_mut().zip(col.iter()) {
                row.push(x);
            }
            let extendable = rows.iter().all(|row| prefixes.contains(row.as_slice()));
            let ok = !extendable || fill(f, r, columns, prefixes, rows, depth + 1);
            for row in rows.iter_mut() {
                row.pop();
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fill(f, r, &columns, &prefixes, &mut rows, 0)
}

/// An `n x m` matrix of vertices, stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallMatrix {
    rows: Vec<Vec<usize>>,
}

impl WallMatrix {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<WallMatrix, RelationError> {
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(RelationError::Dimension("matrix rows must share a positive length".into()));
        }
        Ok(WallMatrix { rows })
    }

    pub fn from_columns(columns: &[Vec<usize>]) -> Result<WallMatrix, RelationError> {
        let height = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != height) || height == 0 {
            return Err(RelationError::Dimension("matrix columns must share a positive length".into()));
        }
        let rows = (0..height).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        WallMatrix::from_rows(rows)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Text format: header `rows cols`, then one row per line.
    pub fn from_text(text: &str) -> Result<WallMatrix, RelationError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = parse_ints(lines.next().ok_or_else(|| RelationError::Parse("missing header".into()))?)?;
        let [n, m] = header[..] else {
            return Err(RelationError::Parse("header must be `rows cols`".into()));
        };
        let rows: Vec<Vec<usize>> = lines.map(parse_ints).collect::<Result<_, _>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != m) {
            return Err(RelationError::Parse(format!("expected a {n}x{m} matrix")));
        }
        WallMatrix::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.row_count(), self.column_count());
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Whether `m` is an `r`-wall for `h`: every column lies in `r`, and every
/// pair of rows has a column where the two entries are not adjacent.
pub fn check_wall(m: &WallMatrix, r: &Relation, h: &Graph) -> Result<bool, RelationError> {
    if m.row_count() != r.arity {
        return Err(RelationError::Dimension(format!(
            "matrix has {} rows, relation has arity {}",
            m.row_count(),
            r.arity
        )));
    }
    let columns_ok = (0..m.column_count()).all(|j| r.contains(&m.column(j)));
    let n = m.row_count();
    let pairs_ok = (0..n).all(|i| {
        (0..n).all(|i2| (0..m.column_count()).any(|j| !h.has_edge(m.rows[i][j], m.rows[i2][j])))
    });
    Ok(columns_ok && pairs_ok)
}

/// Builds a wall whose columns are, for each pair `i < i'`, the first tuple
/// of `r` whose entries `i` and `i'` are not adjacent.
pub fn build_wall(r: &Relation, h: &Graph) -> Option<WallMatrix> {
    let n = r.arity;
    if n == 1 {
        return r.iter().next().map(|t| WallMatrix::from_columns(std::slice::from_ref(t)).expect("one column"));
    }
    let mut columns = Vec::new();
    for i in 0..n {
        for i2 in i + 1..n {
            let t = r.iter().find(|t| !h.has_edge(t[i], t[i2]))?;
            columns.push(t.clone());
        }
    }
    WallMatrix::from_columns(&columns).ok()
}

/// A vertex `a` whose constant map on the rows of the wall preserves `r`
/// (so the constant tuple `(a, .., a)` lies in `r`), or `None`.
pub fn triviality_witness(m: &WallMatrix, r: &Relation, h: &Graph) -> Result<Option<usize>, RelationError> {
    if !check_wall(m, r, h)? {
        return Err(RelationError::NotAWall);
    }
    let edges = Relation::edges(h);
    for a in 0..h.order() {
        let f = PartialOperation::constant(m.column_count(), m.rows().iter().cloned(), a)?;
        debug_assert!(is_partial_polymorphism(&f, &edges));
        if is_partial_polymorphism(&f, r) {
            debug_assert!(r.contains(&vec![a; r.arity]));
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Side of each coordinate in the two-colouring of the vertices of one
/// tuple of `r`: `true` for the side of the first coordinate.
///
/// Requires `og(h) > arity`, `r` non-empty and `r => E(x_1, x_2)`; then
/// `E_h(x, y)` holds iff the tuple placing `x` on the first side and `y`
/// on the other lies in `r` (given pPol(E_h) is contained in pPol(r)).
pub fn edge_definition_pattern(r: &Relation, h: &Graph) -> Result<Vec<bool>, RelationError> {
    let n = r.arity;
    if n < 2 {
        return Err(RelationError::Hypothesis("arity must be at least 2".into()));
    }
    if h.odd_girth() <= OddGirth::Finite(n) {
        return Err(RelationError::Hypothesis(format!("odd girth {} is not above {n}", h.odd_girth())));
    }
    let Some(a) = r.iter().next() else {
        return Err(RelationError::Hypothesis("relation is empty".into()));
    };
    if let Some(t) = r.iter().find(|t| !h.has_edge(t[0], t[1])) {
        return Err(RelationError::Hypothesis(format!("tuple {t:?} has a non-edge in front")));
    }
    let vertices = VertexSet::from_vertices(a.iter().copied());
    let mut side: BTreeMap<usize, bool> = BTreeMap::new();
    for start in vertices.iter() {
        if side.contains_key(&start) {
            continue;
        }
        side.insert(start, start == a[0] || !h.has_edge(start, a[0]));
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let s = side[&v];
            for w in VertexSet(h.row(v) & vertices.0).iter() {
                match side.get(&w) {
                    Some(&sw) if sw == s => {
                        return Err(RelationError::Hypothesis("tuple vertices are not bipartite".into()))
                    }
                    Some(_) => {}
                    None => {
                        side.insert(w, !s);
                        stack.push(w);
                    }
                }
            }
        }
    }
    // orient so that the first coordinate is on the `true` side
    let flip = !side[&a[0]];
    Ok(a.iter().map(|v| side[v] ^ flip).collect())
}

/// `{(x, y) : pattern(x, y) in r}` where `pattern` places `x` on `true`
/// coordinates and `y` on the others.
pub fn substitute_pattern(r: &Relation, pattern: &[bool]) -> Result<Relation, RelationError> {
    if pattern.len() != r.arity {
        return Err(RelationError::Dimension("pattern length differs from arity".into()));
    }
    let k = r.domain;
    let mut out = Relation::empty(k, 2);
    for x in 0..k {
        for y in 0..k {
            let t: Vec<usize> = pattern.iter().map(|&p| if p { x } else { y }).collect();
            if r.contains(&t) {
                out.tuples.insert(vec![x, y]);
            }
        }
    }
    Ok(out)
}

/// A walk of `len` edges from `x0` to `x1`.
pub fn walk_formula(len: usize) -> PPFormula {
    assert!(len >= 1);
    let mut chain = vec![0];
    chain.extend(2..len + 1);
    chain.push(1);
    let atoms = chain.windows(2).map(|w| Atom::Edge(w[0], w[1])).collect();
    PPFormula::new(2, len - 1, atoms).expect("indices in range")
}

/// `exists x2, x3, w_1..w_q`: path `x0 - x2 - x3 - x1`, every `w` adjacent
/// to the four path vertices, and the `w`s pairwise adjacent.
fn path_with_clique_formula(q: usize) -> PPFormula {
    let (x1, x4, x2, x3) = (0, 1, 2, 3);
    let path = [x1, x2, x3, x4];
    let ws: Vec<usize> = (4..4 + q).collect();
    let mut atoms = vec![Atom::Edge(x1, x2), Atom::Edge(x2, x3), Atom::Edge(x3, x4)];
    for &p in &path {
        for &w in &ws {
            atoms.push(Atom::Edge(p, w));
        }
    }
    for (idx, &w) in ws.iter().enumerate() {
        for &w2 in &ws[idx + 1..] {
            atoms.push(Atom::Edge(w, w2));
        }
    }
    PPFormula::new(2, 2 + q, atoms).expect("indices in range")
}

/// Bundled pp-definitions of disequality.
///
/// * `clique`: `E(x0, x1)`.
/// * `odd_cycle` with `k` odd: a walk of `k - 2` edges.
/// * `walk` with a length; `grotzsch` and `petersen` are walks of 3 edges.
/// * `complement_cycle` with `p >= 2`: path plus `p - 2` clique vertices.
/// * `c5_plus` with `p >= 0`: path plus `p` clique vertices.
pub fn neq_pp_template(name: &str, param: Option<usize>) -> Result<PPFormula, RelationError> {
    let need = |what: &str| RelationError::TemplateParameter {
        name: name.to_string(),
        what: what.to_string(),
    };
    match name {
        "clique" => Ok(walk_formula(1)),
        "grotzsch" | "petersen" => Ok(walk_formula(3)),
        "walk" => match param {
            Some(len) if len >= 1 => Ok(walk_formula(len)),
            _ => Err(need("a length >= 1")),
        },
        "odd_cycle" => match param {
            Some(k) if k >= 3 && k % 2 == 1 => Ok(walk_formula(k - 2)),
            _ => Err(need("an odd cycle length k >= 3")),
        },
        "complement_cycle" => match param {
            Some(p) if p >= 2 => Ok(path_with_clique_formula(p - 2)),
            _ => Err(need("p >= 2 (the cycle has 2p+1 vertices)")),
        },
        "c5_plus" => match param {
            Some(p) => Ok(path_with_clique_formula(p)),
            None => Err(need("the number p of universal vertices")),
        },
        _ => Err(RelationError::UnknownTemplate(name.to_string())),
    }
}

/// Templates worth trying on a graph with `k` vertices, labelled.
pub fn candidate_templates(k: usize) -> Vec<(String, PPFormula)> {
    let mut out = vec![("clique".to_string(), walk_formula(1))];
    if k >= 3 && k % 2 == 1 {
        out.push((format!("odd_cycle(k={k})"), walk_formula(k - 2)));
    }
    if k != 5 {
        out.push(("walk(len=3)".to_string(), walk_formula(3)));
    }
    if k >= 7 && k % 2 == 1 {
        let p = (k - 1) / 2;
        out.push((format!("complement_cycle(p={p})"), path_with_clique_formula(p - 2)));
    }
    if k >= 6 {
        out.push((format!("c5_plus(p={})", k - 5), path_with_clique_formula(k - 5)));
    }
    out
}

/// First bundled template whose evaluation on `h` is exactly `NEQ_k`.
pub fn find_neq_definition(h: &Graph) -> Option<(String, PPFormula)> {
    let neq = Relation::neq(h.order());
    candidate_templates(h.order())
        .into_iter()
        .find(|(_, f)| pp_evaluate(f, h).is_ok_and(|r| r == neq))
}
