//! Polymorphisms, semiprojections and projectivity.
//!
//! An `m`-ary polymorphism of `H` is a homomorphism `H^m -> H`. Tuples of
//! `V(H)^m` are numbered most significant coordinate first, so the tuple
//! `(x_1, .., x_m)` has index `x_1 n^(m-1) + .. + x_m`.

use serde::Serialize;
use thiserror::Error;

use crate::classify::enumerate_graphs;
use crate::cores::is_core;
use crate::graph::{Graph, GraphError};
use crate::hom::{is_homomorphism, AdjacencyView, HomError, HomSolver, PartialMap};
use crate::iso::isomorphism;
use crate::relations::find_neq_definition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("power H^{arity} of a {order}-vertex graph exceeds {limit} vertices")]
    PowerTooLarge {
        order: usize,
        arity: usize,
        limit: usize,
    },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),
    #[error("table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Largest power graph any search here will build.
pub const POWER_BUDGET: usize = 4096;

/// Node budget for a single polymorphism search.
pub const SEARCH_BUDGET: u64 = 200_000_000;

pub fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

pub fn tuple_at(mut index: usize, n: usize, m: usize) -> Vec<usize> {
    let mut t = vec![0; m];
    for slot in t.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    t
}

fn power_size(n: usize, m: usize) -> Option<usize> {
    n.checked_pow(m as u32).filter(|&s| s <= POWER_BUDGET)
}

/// `H^m`: tuples adjacent iff adjacent in every coordinate.
#[derive(Clone, Debug)]
pub struct PowerGraph {
    base: usize,
    arity: usize,
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
}

pub fn power(h: &Graph, m: usize) -> Result<PowerGraph, AlgebraError> {
    if m == 0 {
        return Err(AlgebraError::ZeroArity);
    }
    let n = h.order();
    let size = power_size(n, m).ok_or(AlgebraError::PowerTooLarge {
        order: n,
        arity: m,
        limit: POWER_BUDGET,
    })?;
    let mut offsets = Vec::with_capacity(size + 1);
    let mut adjacency = Vec::new();
    offsets.push(0);
    let mut nbrs: Vec<usize> = Vec::new();
    for idx in 0..size {
        let t = tuple_at(idx, n, m);
        nbrs.clear();
        nbrs.push(0);
        for &x in &t {
            let row: Vec<usize> = h.neighbors(x).iter().collect();
            let mut next = Vec::with_capacity(nbrs.len() * row.len());
            for &prefix in &nbrs {
                next.extend(row.iter().map(|&y| prefix * n + y));
            }
            nbrs = next;
        }
        adjacency.extend(nbrs.iter().map(|&w| w as u32));
        offsets.push(adjacency.len());
    }
    Ok(PowerGraph {
        base: n,
        arity: m,
        offsets,
        adjacency,
    })
}

impl PowerGraph {
    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base_order(&self) -> usize {
        self.base
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|&w| w as usize)
    }

    /// As an ordinary graph, when it has at most 16 vertices.
    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(self.order())?;
        for u in 0..self.order() {
            for w in self.neighbors(u).filter(|&w| w > u) {
                g.add_edge(u, w)?;
            }
        }
        Ok(g)
    }
}

impl AdjacencyView for PowerGraph {
    fn order(&self) -> usize {
        PowerGraph::order(self)
    }

    fn neighbor_list(&self, v: usize) -> Vec<usize> {
        self.neighbors(v).collect()
    }
}

/// A total operation `V^m -> V` on `n` vertices, serialised as its table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Polymorphism {
    arity: usize,
    domain: usize,
    table: Vec<usize>,
}

impl Polymorphism {
    pub fn from_table(domain: usize, arity: usize, table: Vec<usize>) -> Result<Self, AlgebraError> {
        let expected = domain.pow(arity as u32);
        if table.len() != expected {
            return Err(AlgebraError::TableLength {
                expected,
                found: table.len(),
            });
        }
        Ok(Polymorphism {
            arity,
            domain,
            table,
        })
    }

    /// The operation `(x_1..x_m) -> f(x_1..x_m)` tabulated over all tuples.
    pub fn from_fn(domain: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let size = domain.pow(arity as u32);
        let table = (0..size).map(|i| f(&tuple_at(i, domain, arity))).collect();
        Polymorphism {
            arity,
            domain,
            table,
        }
    }

    /// `(x_1..x_m) -> x_{i+1}`.
    pub fn projection(domain: usize, arity: usize, i: usize) -> Self {
        assert!(i < arity);
        Polymorphism::from_fn(domain, arity, |t| t[i])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, t: &[usize]) -> usize {
        self.table[tuple_index(t, self.domain)]
    }

    /// The coordinate this operation projects to, if any.
    pub fn projection_coordinate(&self) -> Option<usize> {
        (0..self.arity).find(|&i| *self == Polymorphism::projection(self.domain, self.arity, i))
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.domain).all(|x| self.apply(&vec![x; self.arity]) == x)
    }

    /// Whether `f(x_1..x_m) = x_{i+1}` whenever two arguments coincide.
    pub fn is_semiprojection_on(&self, i: usize) -> bool {
        (0..self.table.len()).all(|idx| {
            let t = tuple_at(idx, self.domain, self.arity);
            is_injective(&t) || self.table[idx] == t[i]
        })
    }

    /// Whether this is a homomorphism `h^m -> h`.
    pub fn verify(&self, h: &Graph) -> bool {
        if h.order() != self.domain {
            return false;
        }
        match power(h, self.arity) {
            Ok(p) => is_homomorphism(&p, h, &self.table),
            Err(_) => self.verify_streaming(h),
        }
    }

    fn verify_streaming(&self, h: &Graph) -> bool {
        let n = self.domain;
        (0..self.table.len()).all(|i| {
            let t = tuple_at(i, n, self.arity);
            (0..self.table.len()).all(|j| {
                let s = tuple_at(j, n, self.arity);
                !t.iter().zip(&s).all(|(&a, &b)| h.has_edge(a, b))
                    || h.has_edge(self.table[i], self.table[j])
            })
        })
    }

    /// `sigma` applied after this operation.
    pub fn then(&self, sigma: &[usize]) -> Polymorphism {
        Polymorphism {
            arity: self.arity,
            domain: self.domain,
            table: self.table.iter().map(|&x| sigma[x]).collect(),
        }
    }
}

fn is_injective(t: &[usize]) -> bool {
    let mut seen = 0u32;
    t.iter().all(|&x| {
        let fresh = seen & (1 << x) == 0;
        seen |= 1 << x;
        fresh
    })
}

/// All endomorphisms of `h`, in the solver's order.
pub fn unary_polymorphisms(h: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    HomSolver::new(h, h)
        .for_each(&PartialMap::empty(h.order()), |m| {
            out.push(m.to_vec());
            std::ops::ControlFlow::Continue(())
        })
        .expect("no pins, no budget");
    out
}

/// Pins every constant tuple to its value.
pub fn idempotent_pins(n: usize, m: usize) -> PartialMap {
    let mut pins = PartialMap::empty(n.pow(m as u32));
    for x in 0..n {
        pins.set(tuple_index(&vec![x; m], n), x);
    }
    pins
}

/// An `m`-ary polymorphism extending `pins` whose table differs from every
/// table in `forbidden`.
pub fn find_polymorphism(
    h: &Graph,
    m: usize,
    pins: &PartialMap,
    forbidden: &[Polymorphism],
) -> Result<Option<Polymorphism>, AlgebraError> {
    let p = power(h, m)?;
    let mut solver = HomSolver::new(&p, h).with_budget(SEARCH_BUDGET);
    let found = solver.find_where(pins, |t| forbidden.iter().all(|f| f.table != t))?;
    Ok(found.map(|table| Polymorphism {
        arity: m,
        domain: h.order(),
        table,
    }))
}

/// Arity up to which semiprojections must be excluded: every `m`-ary
/// semiprojection with `m > (n-1)/delta + 1` is a projection, where `delta`
/// is the minimum degree.
pub fn semiprojection_arity_bound(h: &Graph) -> Result<usize, AlgebraError> {
    if let Some(v) = (0..h.order()).find(|&v| h.degree(v) == 0) {
        return Err(AlgebraError::IsolatedVertex(v));
    }
    let delta = h.min_degree().unwrap_or(1);
    Ok((h.order().saturating_sub(1)) / delta + 1)
}

/// Pins non-injective tuples to their coordinate `i`.
pub fn semiprojection_pins(n: usize, m: usize, i: usize) -> PartialMap {
    let size = n.pow(m as u32);
    let mut pins = PartialMap::empty(size);
    for idx in 0..size {
        let t = tuple_at(idx, n, m);
        if !is_injective(&t) {
            pins.set(idx, t[i]);
        }
    }
    pins
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Semiprojection {
    pub coordinate: usize,
    pub op: Polymorphism,
}

/// Search effort spent on one arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArityCheck {
    pub arity: usize,
    pub coordinates: usize,
    pub nodes: u64,
}

/// An `m`-ary semiprojection of `h` that is not a projection, trying the
/// distinguished coordinate `0, 1, ..` in turn.
pub fn find_semiprojection(h: &Graph, m: usize) -> Result<Option<Semiprojection>, AlgebraError> {
    find_semiprojection_counted(h, m).map(|(found, _)| found)
}

pub fn find_semiprojection_counted(
    h: &Graph,
    m: usize,
) -> Result<(Option<Semiprojection>, ArityCheck), AlgebraError> {
    let n = h.order();
    let p = power(h, m)?;
    let projections: Vec<Polymorphism> = (0..m).map(|i| Polymorphism::projection(n, m, i)).collect();
    let mut nodes = 0;
    for i in 0..m {
        let pins = semiprojection_pins(n, m, i);
        let mut solver = HomSolver::new(&p, h).with_budget(SEARCH_BUDGET);
        let found = solver.find_where(&pins, |t| projections.iter().all(|f| f.table != t))?;
        nodes += solver.nodes();
        if let Some(table) = found {
            let op = Polymorphism {
                arity: m,
                domain: n,
                table,
            };
            let check = ArityCheck {
                arity: m,
                coordinates: i + 1,
                nodes,
            };
            return Ok((Some(Semiprojection { coordinate: i, op }), check));
        }
    }
    Ok((
        None,
        ArityCheck {
            arity: m,
            coordinates: m,
            nodes,
        },
    ))
}

/// A factorisation `h ~ left x right` with both factors on at least two
/// vertices; `phi[v]` is the pair of factor vertices for `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub left: Graph,
    pub right: Graph,
    pub phi: Vec<(usize, usize)>,
}

/// Tensor product; `(a, b)` is numbered `a * |right| + b`.
pub fn product(left: &Graph, right: &Graph) -> Result<Graph, GraphError> {
    let (p, q) = (left.order(), right.order());
    let mut g = Graph::empty(p * q)?;
    for (a, a2) in left.edges() {
        for (b, b2) in right.edges() {
            g.add_edge(a * q + b, a2 * q + b2)?;
            g.add_edge(a * q + b2, a2 * q + b)?;
        }
    }
    Ok(g)
}

/// Largest order for which [`is_decomposable`] searches factorisations.
pub const DECOMPOSE_LIMIT: usize = 9;

pub fn is_decomposable(h: &Graph) -> Option<Decomposition> {
    let n = h.order();
    if n > DECOMPOSE_LIMIT {
        return None;
    }
    for p in 2..=n / 2 {
        if !n.is_multiple_of(p) {
            continue;
        }
        let q = n / p;
        for left in enumerate_graphs(p) {
            for right in enumerate_graphs(q) {
                let prod = product(&left, &right).expect("at most 16 vertices");
                if let Some(iso) = isomorphism(h, &prod) {
                    let phi = iso.iter().map(|&x| (x / q, x % q)).collect();
                    return Some(Decomposition { left, right, phi });
                }
            }
        }
    }
    None
}

/// `f(x, y) = phi^-1(phi(x).0, phi(y).1)`.
pub fn decomposition_witness(d: &Decomposition) -> Polymorphism {
    let q = d.right.order();
    let n = d.phi.len();
    let mut inverse = vec![0; n];
    for (v, &(a, b)) in d.phi.iter().enumerate() {
        inverse[a * q + b] = v;
    }
    Polymorphism::from_fn(n, 2, |t| inverse[d.phi[t[0]].0 * q + d.phi[t[1]].1])
}

/// `f(x, y) = x` if `x` is in the component of vertex 0, else `y`.
pub fn disconnected_witness(h: &Graph) -> Option<Polymorphism> {
    let components = h.components();
    if components.len() < 2 {
        return None;
    }
    let first = components[0];
    Some(Polymorphism::from_fn(h.order(), 2, |t| {
        if first.contains(t[0]) {
            t[0]
        } else {
            t[1]
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectivityStatus {
    Projective,
    NotProjective,
    NotApplicable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Disconnected,
    Decomposable,
    Semiprojection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub op: Polymorphism,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PpCertificate {
    pub template: String,
    pub formula: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SemiprojectionExclusion {
    pub arity_bound: usize,
    pub checked: Vec<ArityCheck>,
    /// True when every arity from 2 to the bound was searched exhaustively.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectivityVerdict {
    pub status: ProjectivityStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pp_definition: Option<PpCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semiprojections: Option<SemiprojectionExclusion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ProjectivityVerdict {
    fn new(status: ProjectivityStatus) -> Self {
        ProjectivityVerdict {
            status,
            reason: None,
            pp_definition: None,
            semiprojections: None,
            witness: None,
        }
    }

    fn not_applicable(reason: &str) -> Self {
        ProjectivityVerdict {
            reason: Some(reason.to_string()),
            ..ProjectivityVerdict::new(ProjectivityStatus::NotApplicable)
        }
    }
}

/// Which certificates [`is_projective_with`] should try.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectivityOptions {
    pub pp_templates: bool,
    pub semiprojections: bool,
    /// Run the semiprojection search even after a template succeeded.
    pub both: bool,
}

impl Default for ProjectivityOptions {
    fn default() -> Self {
        ProjectivityOptions {
            pp_templates: true,
            semiprojections: true,
            both: false,
        }
    }
}

/// Exhaustive semiprojection search for arities `2..=bound` within the
/// power budget.
pub fn exclude_semiprojections(h: &Graph) -> Result<(SemiprojectionExclusion, Option<Semiprojection>), AlgebraError> {
    let bound = semiprojection_arity_bound(h)?;
    let mut record = SemiprojectionExclusion {
        arity_bound: bound,
        ..Default::default()
    };
    for m in 2..=bound {
        if power_size(h.order(), m).is_none() {
            record.stopped = Some(format!("arity {m} exceeds the power budget"));
            return Ok((record, None));
        }
        match find_semiprojection_counted(h, m) {
            Ok((found, check)) => {
                record.checked.push(check);
                if found.is_some() {
                    return Ok((record, found));
                }
            }
            Err(AlgebraError::Hom(HomError::BudgetExceeded(b))) => {
                record.stopped = Some(format!("arity {m} exceeded the search budget of {b} nodes"));
                return Ok((record, None));
            }
            Err(e) => return Err(e),
        }
    }
    record.complete = true;
    Ok((record, None))
}

pub fn is_projective(h: &Graph) -> ProjectivityVerdict {
    is_projective_with(h, ProjectivityOptions::default())
}

/// Projectivity of a non-bipartite core, with certificates.
pub fn is_projective_with(h: &Graph, opts: ProjectivityOptions) -> ProjectivityVerdict {
    use ProjectivityStatus::*;
    if h.order() < 3 {
        return ProjectivityVerdict::not_applicable("fewer than 3 vertices");
    }
    if h.is_bipartite() {
        return ProjectivityVerdict::not_applicable("bipartite");
    }
    if !is_core(h) {
        return ProjectivityVerdict::not_applicable("not a core");
    }
    if let Some(op) = disconnected_witness(h) {
        debug_assert!(op.verify(h));
        return ProjectivityVerdict {
            witness: Some(Witness {
                kind: WitnessKind::Disconnected,
                op,
                decomposition: None,
            }),
            ..ProjectivityVerdict::new(NotProjective)
        };
    }
    if let Some(d) = is_decomposable(h) {
        let op = decomposition_witness(&d);
        debug_assert!(op.verify(h));
        return ProjectivityVerdict {
            witness: Some(Witness {
                kind: WitnessKind::Decomposable,
                op,
                decomposition: Some(d),
            }),
            ..ProjectivityVerdict::new(NotProjective)
        };
    }
    let mut verdict = ProjectivityVerdict::new(Inconclusive);
    if opts.pp_templates {
        if let Some((template, formula)) = find_neq_definition(h) {
            verdict.status = Projective;
            verdict.pp_definition = Some(PpCertificate {
                template,
                formula: formula.to_string(),
            });
        }
    }
    let want_search = opts.semiprojections && (verdict.status != Projective || opts.both);
    if want_search {
        match exclude_semiprojections(h) {
            Ok((record, found)) => {
                if let Some(s) = found {
                    assert!(
                        verdict.status != Projective,
                        "a pp-definition of disequality and a semiprojection cannot coexist"
                    );
                    verdict.status = NotProjective;
                    verdict.witness = Some(Witness {
                        kind: WitnessKind::Semiprojection,
                        op: s.op,
                        decomposition: None,
                    });
                } else if record.complete {
                    verdict.status = Projective;
                }
                verdict.semiprojections = Some(record);
            }
            Err(e) => verdict.reason = Some(e.to_string()),
        }
    }
    if verdict.status == Inconclusive && verdict.reason.is_none() {
        verdict.reason = Some("no template matched and the semiprojection search was cut off".into());
    }
    verdict
}
