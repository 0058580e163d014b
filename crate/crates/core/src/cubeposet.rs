//! The cube `2^I` of sub-words with its mixed orientation.
//!
//! A vertex is a subset `J` of letter positions. Morphisms drop a positive
//! letter from the target's side or a negative letter from the source's
//! side, so every morphism points towards the terminal vertex `I⁺` (all
//! positive letters, no negative ones) and the filtration degree of a vertex
//! is its Hamming distance to `I⁺`.
//!
//! Edge signs are the Koszul signs relative to `I⁺`: the edge toggling
//! position `p` out of the vertex `v` nearer to `I⁺` carries
//! `(−1)^{#(toggled positions of v before p)}`, where "toggled" means
//! differing from `I⁺`. Every square then anticommutes.
//!
//! The broken-Schubert categories are products `2^{I'} × 𝒪_red`; only the
//! second factor, [`ReducedSequencePoset`], is materialized here.

use std::fmt::Write as _;

use crate::braidword::BraidWord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeVertex {
    pub mask: u64,
}

impl CubeVertex {
    pub fn contains(&self, pos: usize) -> bool {
        self.mask >> pos & 1 == 1
    }

    pub fn toggle(&self, pos: usize) -> Self {
        Self { mask: self.mask ^ (1 << pos) }
    }

    /// Letter positions (0-based) in the subset.
    pub fn positions(&self, k: usize) -> Vec<usize> {
        (0..k).filter(|&p| self.contains(p)).collect()
    }

    /// Bits as a string, letter 1 first.
    pub fn to_bits(&self, k: usize) -> String {
        (0..k).map(|p| if self.contains(p) { '1' } else { '0' }).collect()
    }
}

/// A poset morphism `source → target`; `position` is the 0-based toggled letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeEdge {
    pub source: CubeVertex,
    pub target: CubeVertex,
    pub position: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubePoset {
    word: BraidWord,
    terminal: CubeVertex,
    edges: Vec<CubeEdge>,
}

pub const MAX_CUBE_LETTERS: usize = 24;

impl CubePoset {
    pub fn build(word: &BraidWord) -> Result<Self> {
        let k = word.len();
        if k > MAX_CUBE_LETTERS {
            return Err(Error::ResourceLimit(format!("cube on {k} letters")));
        }
        let terminal = CubeVertex {
            mask: word
                .letters()
                .iter()
                .enumerate()
                .filter(|(_, l)| l.is_positive())
                .fold(0u64, |m, (p, _)| m | 1 << p),
        };
        let mut edges = vec![];
        for mask in 0..1u64 << k {
            let target = CubeVertex { mask };
            let toggled = mask ^ terminal.mask;
            for p in 0..k {
                if toggled >> p & 1 == 1 {
                    continue;
                }
                let below = (toggled & ((1u64 << p) - 1)).count_ones();
                let sign = if below % 2 == 0 { 1 } else { -1 };
                edges.push(CubeEdge { source: target.toggle(p), target, position: p, sign });
            }
        }
        edges.sort();
        Ok(Self { word: word.clone(), terminal, edges })
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn terminal(&self) -> CubeVertex {
        self.terminal
    }

    pub fn edges(&self) -> &[CubeEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = CubeVertex> {
        (0..1u64 << self.len()).map(|mask| CubeVertex { mask })
    }

    pub fn distance(&self, v: CubeVertex) -> usize {
        (v.mask ^ self.terminal.mask).count_ones() as usize
    }

    pub fn layer(&self, t: usize) -> Result<Vec<CubeVertex>> {
        if t > self.len() {
            return Err(Error::OutOfRange(format!("layer {t} of a {}-cube", self.len())));
        }
        Ok(self.vertices().filter(|&v| self.distance(v) == t).collect())
    }

    /// Edges whose poset target is `v` (cohomologically: leaving `v`).
    pub fn edges_into(&self, v: CubeVertex) -> impl Iterator<Item = &CubeEdge> {
        self.edges.iter().filter(move |e| e.target == v)
    }

    /// Line-oriented adjacency dump: one `vertex` line per vertex with its
    /// distance, then one `edge` line per morphism.
    pub fn dump(&self) -> String {
        let k = self.len();
        let mut out = String::new();
        let _ = writeln!(out, "cube k={k} word=\"{}\" terminal={}", self.word, self.terminal.to_bits(k));
        for v in self.vertices() {
            let _ = writeln!(out, "vertex {} t={}", v.to_bits(k), self.distance(v));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} -> {} pos={} sign={}",
                e.source.to_bits(k),
                e.target.to_bits(k),
                e.position + 1,
                if e.sign > 0 { '+' } else { '-' }
            );
        }
        out
    }
}

/// Vertex relabeling induced by moving the first letter to the end.
pub fn cyclic_relabel(v: CubeVertex, k: usize) -> CubeVertex {
    if k == 0 {
        return v;
    }
    let first = v.mask & 1;
    CubeVertex { mask: (v.mask >> 1) | (first << (k - 1)) }
}

/// The poset of reduced sequences of the last `m` terms of the alternation
/// `(i, j, i, …)` of length `m_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSequencePoset {
    pub pair: (usize, usize),
    pub m: usize,
    pub elements: Vec<Vec<usize>>,
}

impl ReducedSequencePoset {
    pub fn new(i: usize, j: usize, m: usize, m_ij: usize) -> Result<Self> {
        if m == 0 || m > m_ij {
            return Err(Error::OutOfRange(format!("m = {m} outside 1..={m_ij}")));
        }
        let full: Vec<usize> = (0..m_ij).map(|k| if k % 2 == 0 { i } else { j }).collect();
        let tail = &full[m_ij - m..];
        let mut elements: Vec<Vec<usize>> = vec![];
        for mask in 0..1u32 << m {
            let mut seq: Vec<usize> = vec![];
            for (k, &g) in tail.iter().enumerate() {
                if mask >> k & 1 == 1 && seq.last() != Some(&g) {
                    seq.push(g);
                }
            }
            if !elements.contains(&seq) {
                elements.push(seq);
            }
        }
        elements.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(Self { pair: (i, j), m, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// There is a unique morphism from a sequence into any strictly longer one.
    pub fn has_morphism(&self, a: usize, b: usize) -> bool {
        a == b || self.elements[a].len() < self.elements[b].len()
    }
}
