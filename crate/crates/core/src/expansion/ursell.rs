//! Ursell coefficients `C(N_1..N_k)`: the signed count `Σ (-1)^{|E(R)|}` over
//! connected spanning subgraphs `R` of the overlap graph of the supports.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::graph::EdgeSubset;

/// Largest tuple size accepted.
pub const URSELL_GUARD: usize = 8;

/// `C(N_1, ..., N_k)` for a tuple of supports.
pub fn ursell_coefficient(supports: &[EdgeSubset]) -> Result<i64> {
    check_size(supports.len())?;
    if supports.is_empty() {
        return Ok(0);
    }
    Ok(connected_signed_sum(&overlap_adjacency(supports)))
}

pub(crate) fn check_size(k: usize) -> Result<()> {
    if k > URSELL_GUARD {
        return Err(Error::GuardExceeded { what: "Ursell tuple size", requested: k, limit: URSELL_GUARD });
    }
    Ok(())
}

/// Neighbor bitmasks of the overlap graph (no self-loops).
pub(crate) fn overlap_adjacency(supports: &[EdgeSubset]) -> Vec<u8> {
    (0..supports.len())
        .map(|i| {
            (0..supports.len())
                .filter(|&j| j != i && supports[i].overlaps(supports[j]))
                .fold(0u8, |acc, j| acc | 1 << j)
        })
        .collect()
}

pub(crate) fn is_connected(adj: &[u8]) -> bool {
    if adj.is_empty() {
        return false;
    }
    let full = ((1u16 << adj.len()) - 1) as u8;
    let mut seen = 1u8;
    let mut frontier = 1u8;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == full
}

/// Signed sum over connected spanning subgraphs, via the decomposition of
/// all spanning subgraphs by the component of the lowest vertex:
/// `Z(S) = Σ_{T ∋ min S} C(T) Z(S \ T)`, where `Z(S) = Σ_F (-1)^{|F|}` is 1
/// when `S` spans no edge and 0 otherwise.
pub(crate) fn connected_signed_sum(adj: &[u8]) -> i64 {
    let k = adj.len();
    if k == 0 {
        return 0;
    }
    let states = 1usize << k;
    let mut independent = vec![false; states];
    independent[0] = true;
    for s in 1..states {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        independent[s] = independent[rest] && (adj[v] as usize & rest) == 0;
    }
    let mut c = vec![0i64; states];
    for s in 1..states {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut acc = independent[s] as i64;
        let mut sub = rest;
        loop {
            if sub != rest {
                let t = low | sub;
                acc -= c[t] * independent[s ^ t] as i64;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        c[s] = acc;
    }
    c[states - 1]
}

fn cache_key(adj: &[u8]) -> u64 {
    let mut key = adj.len() as u64;
    let mut bit = 4;
    for i in 0..adj.len() {
        for j in i + 1..adj.len() {
            if adj[i] >> j & 1 == 1 {
                key |= 1 << bit;
            }
            bit += 1;
        }
    }
    key
}

/// Memo of Ursell coefficients keyed by the labeled overlap graph.
#[derive(Debug, Default)]
pub struct UrsellCache {
    map: Mutex<HashMap<u64, i64>>,
}

impl UrsellCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn get(&self, adj: &[u8]) -> i64 {
        let key = cache_key(adj);
        if let Some(&c) = self.map.lock().unwrap().get(&key) {
            return c;
        }
        let c = connected_signed_sum(adj);
        *self.map.lock().unwrap().entry(key).or_insert(c)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
