//! Connected hypergraphs over the nonzero links of an interaction.
//!
//! Two links are adjacent when their site sets overlap, so a hypergraph is
//! connected exactly when its links induce a connected subgraph of this
//! overlap graph. Connected link sets are enumerated with the ESU scheme
//! (each set is produced once, rooted at its smallest link index).

use crate::error::{Error, Result};
use crate::graph::{EdgeSite, EdgeSubset};
use crate::lattice::Interaction;

/// Default cap on links per enumerated hypergraph.
pub const MAX_LINKS_DEFAULT: usize = 4;

/// Maximum number of connected link sets visited in one enumeration.
pub const VISIT_LIMIT: usize = 50_000_000;

/// Maximum number of hypergraphs materialized by
/// [`enumerate_connected_hypergraphs`].
pub const COLLECT_LIMIT: usize = 2_000_000;

/// A set of links `Γ`, each a nonempty edge subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    links: Vec<EdgeSubset>,
}

impl Hypergraph {
    pub fn new(mut links: Vec<EdgeSubset>) -> Self {
        links.sort();
        links.dedup();
        Hypergraph { links }
    }

    pub fn links(&self) -> &[EdgeSubset] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// `∪Γ`.
    pub fn support(&self) -> EdgeSubset {
        self.links.iter().fold(EdgeSubset::EMPTY, |acc, x| acc.union(*x))
    }

    pub fn is_connected(&self) -> bool {
        links_connected(&self.links)
    }
}

/// Whether the support is nonempty and the links form one overlap component.
pub fn links_connected(links: &[EdgeSubset]) -> bool {
    if links.is_empty() || links.iter().any(|x| x.is_empty()) {
        return false;
    }
    let mut reached = links[0];
    let mut used = vec![false; links.len()];
    used[0] = true;
    let mut grew = true;
    while grew {
        grew = false;
        for (i, x) in links.iter().enumerate() {
            if !used[i] && x.overlaps(reached) {
                used[i] = true;
                reached = reached.union(*x);
                grew = true;
            }
        }
    }
    used.iter().all(|&u| u)
}

/// The overlap graph of a list of links.
#[derive(Clone, Debug)]
pub(crate) struct LinkGraph {
    links: Vec<(EdgeSubset, f64)>,
    nbrs: Vec<Vec<usize>>,
}

impl LinkGraph {
    pub(crate) fn new(links: Vec<(EdgeSubset, f64)>) -> Self {
        let nbrs = (0..links.len())
            .map(|i| {
                (0..links.len())
                    .filter(|&j| j != i && links[i].0.overlaps(links[j].0))
                    .collect()
            })
            .collect();
        LinkGraph { links, nbrs }
    }

    pub(crate) fn from_interaction(k: &Interaction) -> Self {
        Self::new(k.iter().collect())
    }

    /// Only the links contained in `within`.
    pub(crate) fn restricted(k: &Interaction, within: EdgeSubset) -> Self {
        Self::new(k.iter().filter(|(x, _)| x.is_subset_of(within)).collect())
    }

    pub(crate) fn links(&self) -> &[(EdgeSubset, f64)] {
        &self.links
    }

    /// Calls `f(link indices, support)` once per connected set of at most
    /// `max_links` links, in a fixed order. Returns the number of sets.
    pub(crate) fn visit<F>(&self, max_links: usize, f: F) -> Result<usize>
    where
        F: FnMut(&[usize], EdgeSubset),
    {
        let mut esu = Esu {
            graph: self,
            max_links,
            visits: 0,
            blocked: vec![0; self.links.len()],
            sub: Vec::new(),
            supports: Vec::new(),
            f,
        };
        if max_links == 0 {
            return Ok(0);
        }
        for v in 0..self.links.len() {
            esu.push(v);
            let ext: Vec<usize> = self.nbrs[v].iter().copied().filter(|&u| u > v).collect();
            esu.extend(&ext, v)?;
            esu.pop();
        }
        Ok(esu.visits)
    }
}

struct Esu<'a, F> {
    graph: &'a LinkGraph,
    max_links: usize,
    visits: usize,
    // how many members of the current set have this link in their closed neighborhood
    blocked: Vec<u32>,
    sub: Vec<usize>,
    supports: Vec<EdgeSubset>,
    f: F,
}

impl<F: FnMut(&[usize], EdgeSubset)> Esu<'_, F> {
    fn push(&mut self, w: usize) {
        let base = self.supports.last().copied().unwrap_or(EdgeSubset::EMPTY);
        self.sub.push(w);
        self.supports.push(base.union(self.graph.links[w].0));
        self.blocked[w] += 1;
        for &u in &self.graph.nbrs[w] {
            self.blocked[u] += 1;
        }
    }

    fn pop(&mut self) {
        let w = self.sub.pop().expect("pop on empty set");
        self.supports.pop();
        self.blocked[w] -= 1;
        for &u in &self.graph.nbrs[w] {
            self.blocked[u] -= 1;
        }
    }

    fn extend(&mut self, ext: &[usize], root: usize) -> Result<()> {
        self.visits += 1;
        if self.visits > VISIT_LIMIT {
            return Err(Error::GuardExceeded {
                what: "connected hypergraph enumeration",
                requested: self.visits,
                limit: VISIT_LIMIT,
            });
        }
        let support = *self.supports.last().expect("nonempty set");
        (self.f)(&self.sub, support);
        if self.sub.len() == self.max_links {
            return Ok(());
        }
        for (idx, &w) in ext.iter().enumerate() {
            let mut next: Vec<usize> = ext[idx + 1..].to_vec();
            // exclusive neighbors of w: not in the current set nor adjacent to it
            next.extend(
                self.graph.nbrs[w]
                    .iter()
                    .copied()
                    .filter(|&u| u > root && self.blocked[u] == 0),
            );
            self.push(w);
            let res = self.extend(&next, root);
            self.pop();
            res?;
        }
        Ok(())
    }
}

/// Every connected hypergraph with at most `max_links` links drawn from the
/// nonzero support of `K`, optionally only those whose support contains
/// `root`. Each appears once, in a deterministic order.
pub fn enumerate_connected_hypergraphs(
    k: &Interaction,
    max_links: usize,
    root: Option<EdgeSite>,
) -> Result<Vec<Hypergraph>> {
    let graph = LinkGraph::from_interaction(k);
    let mut out = Vec::new();
    let mut overflow = false;
    graph.visit(max_links, |idx, support| {
        if root.is_some_and(|r| !support.contains(r)) || overflow {
            return;
        }
        if out.len() == COLLECT_LIMIT {
            overflow = true;
            return;
        }
        out.push(Hypergraph {
            links: {
                let mut v: Vec<EdgeSubset> = idx.iter().map(|&i| graph.links()[i].0).collect();
                v.sort();
                v
            },
        });
    })?;
    if overflow {
        return Err(Error::GuardExceeded {
            what: "materialized hypergraphs",
            requested: COLLECT_LIMIT + 1,
            limit: COLLECT_LIMIT,
        });
    }
    Ok(out)
}
