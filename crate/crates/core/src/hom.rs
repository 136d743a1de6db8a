//! Homomorphism search `G -> H` by backtracking with arc consistency.
//!
//! The only constraint is the edge constraint, so arc consistency reduces
//! to: the domain of every neighbour of `u` lies inside the union of the
//! target neighbourhoods of `dom(u)`. Variables are chosen by smallest
//! remaining domain (ties by lowest index) and values are tried in
//! increasing order, so every search is deterministic.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{clique, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("pins have length {found}, source has {expected} vertices")]
    PinLength { expected: usize, found: usize },
    #[error("pin {vertex} -> {image} is outside the target's {order} vertices")]
    PinOutOfRange {
        vertex: usize,
        image: usize,
        order: usize,
    },
    #[error("pinned vertices {0} and {1} are adjacent but their images are not")]
    InconsistentPins(usize, usize),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
}

/// Anything with a vertex count and symmetric adjacency lists.
pub trait AdjacencyView {
    fn order(&self) -> usize;
    fn neighbor_list(&self, v: usize) -> Vec<usize>;
}

impl AdjacencyView for Graph {
    fn order(&self) -> usize {
        Graph::order(self)
    }

    fn neighbor_list(&self, v: usize) -> Vec<usize> {
        self.neighbors(v).iter().collect()
    }
}

/// A partial map from source vertices to target vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialMap {
    images: Vec<Option<usize>>,
}

impl PartialMap {
    /// The nowhere-defined map on `n` source vertices.
    pub fn empty(n: usize) -> PartialMap {
        PartialMap {
            images: vec![None; n],
        }
    }

    pub fn from_total(images: &[usize]) -> PartialMap {
        PartialMap {
            images: images.iter().copied().map(Some).collect(),
        }
    }

    pub fn from_images(images: Vec<Option<usize>>) -> PartialMap {
        PartialMap { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.images.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: usize, image: usize) {
        self.images[v] = Some(image);
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    pub fn to_total(&self) -> Option<Vec<usize>> {
        self.images.iter().copied().collect()
    }

    /// Checks that every assigned edge of `g` lands on an edge of `h`.
    pub fn check_consistent<G: AdjacencyView + ?Sized>(
        &self,
        g: &G,
        h: &Graph,
    ) -> Result<(), HomError> {
        if self.images.len() != g.order() {
            return Err(HomError::PinLength {
                expected: g.order(),
                found: self.images.len(),
            });
        }
        for (v, img) in self.images.iter().enumerate() {
            if let Some(x) = *img {
                if x >= h.order() {
                    return Err(HomError::PinOutOfRange {
                        vertex: v,
                        image: x,
                        order: h.order(),
                    });
                }
            }
        }
        for (u, img) in self.images.iter().enumerate() {
            let Some(x) = *img else { continue };
            for w in g.neighbor_list(u) {
                if let Some(y) = self.get(w) {
                    if !h.has_edge(x, y) {
                        return Err(HomError::InconsistentPins(u.min(w), u.max(w)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether `map` is a homomorphism `g -> h`.
pub fn is_homomorphism<G: AdjacencyView + ?Sized>(g: &G, h: &Graph, map: &[usize]) -> bool {
    map.len() == g.order()
        && map.iter().all(|&x| x < h.order())
        && (0..g.order()).all(|u| g.neighbor_list(u).into_iter().all(|w| h.has_edge(map[u], map[w])))
}

/// Reusable search state for one source structure and one target graph.
pub struct HomSolver<'h> {
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
    target: &'h Graph,
    node_budget: Option<u64>,
    nodes: u64,
}

impl<'h> HomSolver<'h> {
    pub fn new<G: AdjacencyView + ?Sized>(g: &G, h: &'h Graph) -> HomSolver<'h> {
        let mut offsets = Vec::with_capacity(g.order() + 1);
        let mut adjacency = Vec::new();
        offsets.push(0);
        for v in 0..g.order() {
            adjacency.extend(g.neighbor_list(v).into_iter().map(|w| w as u32));
            offsets.push(adjacency.len());
        }
        HomSolver {
            offsets,
            adjacency,
            target: h,
            node_budget: None,
            nodes: 0,
        }
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn source_order(&self) -> usize {
        self.offsets.len() - 1
    }

    fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    fn support(&self, mut dom: u32) -> u32 {
        let mut s = 0u32;
        while dom != 0 {
            let x = dom.trailing_zeros() as usize;
            dom &= dom - 1;
            s |= self.target.row(x) as u32;
        }
        s
    }

    fn propagate(&self, dom: &mut [u32], queue: &mut Vec<usize>, queued: &mut [bool]) -> bool {
        while let Some(u) = queue.pop() {
            queued[u] = false;
            let s = self.support(dom[u]);
            for &w in self.neighbors(u) {
                let w = w as usize;
                let nd = dom[w] & s;
                if nd != dom[w] {
                    if nd == 0 {
                        for q in queue.drain(..) {
                            queued[q] = false;
                        }
                        return false;
                    }
                    dom[w] = nd;
                    if !queued[w] {
                        queued[w] = true;
                        queue.push(w);
                    }
                }
            }
        }
        true
    }

    fn initial_domains(&self, pins: &PartialMap) -> Result<Vec<u32>, HomError> {
        let n = self.source_order();
        if pins.len() != n {
            return Err(HomError::PinLength {
                expected: n,
                found: pins.len(),
            });
        }
        let full = (1u32 << self.target.order()) - 1;
        Ok((0..n)
            .map(|v| pins.get(v).map_or(full, |x| 1u32 << x))
            .collect())
    }

    /// Visits every homomorphism extending `pins`, in deterministic order,
    /// until `visit` breaks.
    pub fn for_each<F>(&mut self, pins: &PartialMap, mut visit: F) -> Result<(), HomError>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut dom = self.initial_domains(pins)?;
        let n = dom.len();
        let mut queue: Vec<usize> = (0..n).rev().collect();
        let mut queued = vec![true; n];
        if dom.contains(&0) || !self.propagate(&mut dom, &mut queue, &mut queued) {
            return Ok(());
        }
        let mut scratch = vec![0usize; n];
        self.descend(dom, &mut queue, &mut queued, &mut scratch, &mut visit)
            .map(|_| ())
    }

    fn descend<F>(
        &mut self,
        dom: Vec<u32>,
        queue: &mut Vec<usize>,
        queued: &mut [bool],
        scratch: &mut [usize],
        visit: &mut F,
    ) -> Result<ControlFlow<()>, HomError>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if let Some(budget) = self.node_budget {
            if self.nodes > budget {
                return Err(HomError::BudgetExceeded(budget));
            }
        }
        let mut pick: Option<(u32, usize)> = None;
        for (v, &d) in dom.iter().enumerate() {
            let size = d.count_ones();
            if size > 1 && pick.is_none_or(|(s, _)| size < s) {
                pick = Some((size, v));
                if size == 2 {
                    break;
                }
            }
        }
        let Some((_, var)) = pick else {
            for (slot, &d) in scratch.iter_mut().zip(&dom) {
                *slot = d.trailing_zeros() as usize;
            }
            debug_assert!(self.verify(scratch));
            return Ok(visit(scratch));
        };
        let mut values = dom[var];
        while values != 0 {
            let x = values.trailing_zeros();
            values &= values - 1;
            let mut child = dom.clone();
            child[var] = 1 << x;
            queue.push(var);
            queued[var] = true;
            if self.propagate(&mut child, queue, queued) {
                if let ControlFlow::Break(()) = self.descend(child, queue, queued, scratch, visit)? {
                    return Ok(ControlFlow::Break(()));
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn verify(&self, map: &[usize]) -> bool {
        (0..self.source_order()).all(|u| {
            self.neighbors(u)
                .iter()
                .all(|&w| self.target.has_edge(map[u], map[w as usize]))
        })
    }

    /// First homomorphism extending `pins` that `accept` agrees to.
    pub fn find_where<F>(&mut self, pins: &PartialMap, mut accept: F) -> Result<Option<Vec<usize>>, HomError>
    where
        F: FnMut(&[usize]) -> bool,
    {
        let mut found = None;
        self.for_each(pins, |m| {
            if accept(m) {
                found = Some(m.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(m) = &found {
            assert!(self.verify(m), "solver produced a non-homomorphism");
        }
        Ok(found)
    }
}

/// A homomorphism `g -> h` extending `pins`, or `None` if there is none.
pub fn find_hom<G: AdjacencyView + ?Sized>(
    g: &G,
    h: &Graph,
    pins: &PartialMap,
) -> Result<Option<Vec<usize>>, HomError> {
    pins.check_consistent(g, h)?;
    HomSolver::new(g, h).find_where(pins, |_| true)
}

/// Default node budget for [`count_homs`].
pub const COUNT_BUDGET: u64 = 50_000_000;

/// Number of homomorphisms `g -> h`.
pub fn count_homs(g: &Graph, h: &Graph) -> Result<u64, HomError> {
    let mut solver = HomSolver::new(g, h).with_budget(COUNT_BUDGET);
    let mut count = 0u64;
    solver.for_each(&PartialMap::empty(g.order()), |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    if k >= g.order() {
        return true;
    }
    let target = clique(k).expect("k < order <= 16");
    find_hom(g, &target, &PartialMap::empty(g.order()))
        .expect("unpinned search cannot fail")
        .is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, grotzsch, named};

    fn none() -> impl Fn(&Graph) -> PartialMap {
        |g| PartialMap::empty(g.order())
    }

    #[test]
    fn colorings_of_c5() {
        let c5 = cycle(5).unwrap();
        let k3 = clique(3).unwrap();
        let map = find_hom(&c5, &k3, &none()(&c5)).unwrap().unwrap();
        assert!(is_homomorphism(&c5, &k3, &map));
        assert_eq!(find_hom(&c5, &clique(2).unwrap(), &none()(&c5)).unwrap(), None);
        assert_eq!(count_homs(&c5, &k3).unwrap(), 30);
    }

    #[test]
    fn grotzsch_needs_four_colors() {
        let g = grotzsch();
        assert_eq!(find_hom(&g, &clique(3).unwrap(), &none()(&g)).unwrap(), None);
        assert!(is_k_colorable(&g, 4));
    }

    #[test]
    fn counting_identities() {
        let h = named("petersen").unwrap();
        assert_eq!(count_homs(&clique(1).unwrap(), &h).unwrap(), 10);
        assert_eq!(count_homs(&clique(2).unwrap(), &h).unwrap(), 30);
    }

    #[test]
    fn colorability() {
        assert!(!is_k_colorable(&named("g1").unwrap(), 3));
        assert!(is_k_colorable(&named("c5p2").unwrap(), 5));
        assert!(!is_k_colorable(&named("c5p2").unwrap(), 4));
        assert!(!is_k_colorable(&clique(4).unwrap(), 3));
        assert!(is_k_colorable(&Graph::empty(0).unwrap(), 0));
        assert!(!is_k_colorable(&Graph::empty(1).unwrap(), 0));
    }

    #[test]
    fn pins_are_respected_and_checked() {
        let c5 = cycle(5).unwrap();
        let k3 = clique(3).unwrap();
        let mut pins = PartialMap::empty(5);
        pins.set(0, 2);
        pins.set(2, 2);
        let map = find_hom(&c5, &k3, &pins).unwrap().unwrap();
        assert_eq!((map[0], map[2]), (2, 2));
        pins.set(1, 2);
        assert_eq!(find_hom(&c5, &k3, &pins), Err(HomError::InconsistentPins(0, 1)));
        let mut bad = PartialMap::empty(5);
        bad.set(0, 7);
        assert!(matches!(find_hom(&c5, &k3, &bad), Err(HomError::PinOutOfRange { .. })));
        assert!(matches!(
            find_hom(&c5, &k3, &PartialMap::empty(4)),
            Err(HomError::PinLength { .. })
        ));
    }

    #[test]
    fn edgeless_targets() {
        let e3 = Graph::empty(3).unwrap();
        let e2 = Graph::empty(2).unwrap();
        assert_eq!(find_hom(&e3, &e2, &none()(&e3)).unwrap(), Some(vec![0, 0, 0]));
        let k2 = clique(2).unwrap();
        assert_eq!(find_hom(&k2, &e2, &none()(&k2)).unwrap(), None);
        assert_eq!(find_hom(&e2, &Graph::empty(0).unwrap(), &none()(&e2)).unwrap(), None);
        assert_eq!(
            find_hom(&Graph::empty(0).unwrap(), &Graph::empty(0).unwrap(), &PartialMap::empty(0)).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn deterministic_witness() {
        let g = named("g4").unwrap();
        let k4 = clique(4).unwrap();
        let a = find_hom(&g, &k4, &none()(&g)).unwrap();
        let b = find_hom(&g, &k4, &none()(&g)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_reported() {
        let e = Graph::empty(12).unwrap();
        let k3 = clique(3).unwrap();
        let mut solver = HomSolver::new(&e, &k3).with_budget(10);
        let r = solver.for_each(&PartialMap::empty(12), |_| ControlFlow::Continue(()));
        assert_eq!(r, Err(HomError::BudgetExceeded(10)));
    }
}
