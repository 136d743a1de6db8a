//! Cores: recognition, computation and cheap structural filters.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::hom::{find_hom, is_k_colorable, PartialMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("filter is defined for 7-vertex graphs, got {0} vertices")]
    WrongOrder(usize),
}

fn hom_exists(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    find_hom(g, h, &PartialMap::empty(g.order())).expect("unpinned search cannot fail")
}

/// A graph is a core iff it has no homomorphism into itself minus a vertex.
pub fn is_core(h: &Graph) -> bool {
    let all = h.vertices();
    (0..h.order()).all(|v| hom_exists(h, &h.induced(all.without(v))).is_none())
}

/// The core of a graph together with a retraction onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreRetract {
    /// Vertices of the input that induce the core.
    pub vertices: VertexSet,
    /// Homomorphism from the input onto the core (core vertices numbered
    /// `0..|vertices|` in increasing order).
    pub retraction: Vec<usize>,
}

impl CoreRetract {
    pub fn core(&self, h: &Graph) -> Graph {
        h.induced(self.vertices)
    }
}

/// Greedy core computation: delete vertices in ascending order whenever the
/// graph still maps into what remains, restarting after every deletion.
pub fn core_retract(h: &Graph) -> CoreRetract {
    let mut kept = h.vertices();
    let mut retraction: Vec<usize> = (0..h.order()).collect();
    'restart: loop {
        for v in kept.iter() {
            let smaller = kept.without(v);
            if let Some(map) = hom_exists(h, &h.induced(smaller)) {
                kept = smaller;
                retraction = map;
                continue 'restart;
            }
        }
        return CoreRetract {
            vertices: kept,
            retraction,
        };
    }
}

pub fn compute_core(h: &Graph) -> Graph {
    core_retract(h).core(h)
}

/// Sufficient condition for a 7-vertex graph to be a core: not
/// 3-colourable, no `K_4`, and maximum degree at most 4.
pub fn quick_core_filter(h: &Graph) -> Result<bool, CoreError> {
    if h.order() != 7 {
        return Err(CoreError::WrongOrder(h.order()));
    }
    Ok(h.max_degree().unwrap_or(0) <= 4 && !h.has_clique(4) && !is_k_colorable(h, 3))
}

/// Every vertex has degree at least 2 (necessary for cores on 3 or more
/// vertices).
pub fn min_degree_check(h: &Graph) -> bool {
    (0..h.order()).all(|v| h.degree(v) >= 2)
}

fn is_cycle_graph(g: &Graph) -> bool {
    g.order() >= 3 && (0..g.order()).all(|v| g.degree(v) == 2) && g.is_connected()
}

/// Whether `h` has an induced `C_k` or complement of `C_k` for some odd
/// `k >= 5`, i.e. whether `h` is not perfect.
pub fn has_induced_odd_hole_or_antihole(h: &Graph) -> bool {
    let n = h.order();
    (0u32..1 << n).any(|mask| {
        let size = mask.count_ones() as usize;
        if size < 5 || size.is_multiple_of(2) {
            return false;
        }
        let sub = h.induced(VertexSet(mask as u16));
        is_cycle_graph(&sub) || is_cycle_graph(&sub.complement())
    })
}
