//! Block-cutpoint tree, (i,j)-pruning, and the blob-chain decomposition.
//!
//! Blocks are maximal 2-connected subgraphs (a single edge counts as a
//! block and is a bridge). The pruning of a query pair is the union of the
//! blocks on the unique block-cutpoint tree path between the pair; it
//! equals the union of all simple paths joining them and preserves the
//! noncommutative distance. On the pruned graph, maximal runs of bridge
//! blocks become chains and maximal runs of non-bridge blocks glued at
//! cutpoints become blobs, alternating b_1 - C_1 - ... - b_k. Endpoints
//! that sit on a bridge get a degenerate single-vertex blob so the
//! alternation is always well formed.

use std::collections::BTreeSet;

use crate::chain::Chain;
use crate::error::NcdError;
use crate::graph::WeightedGraph;

/// Node of the block-cutpoint tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcNode {
    /// Index into [`BlockCutTree::blocks`].
    Block(usize),
    /// A cutpoint, by vertex label.
    Cut(usize),
}

/// Block-cutpoint tree of a connected graph.
#[derive(Debug, Clone)]
pub struct BlockCutTree {
    /// Maximal 2-connected vertex sets, each sorted.
    pub blocks: Vec<Vec<usize>>,
    /// Edges per block, normalized (u < v).
    pub block_edges: Vec<Vec<(usize, usize)>>,
    /// Cut vertices, sorted.
    pub cutpoints: Vec<usize>,
}

impl BlockCutTree {
    pub fn is_cutpoint(&self, v: usize) -> bool {
        self.cutpoints.binary_search(&v).is_ok()
    }

    /// Whether a block is a bridge (a single edge).
    pub fn is_bridge(&self, block: usize) -> bool {
        self.block_edges[block].len() == 1
    }

    /// The tree node a vertex maps to: itself if it is a cutpoint, else
    /// its unique block.
    pub fn node_of(&self, v: usize) -> Option<BcNode> {
        if self.is_cutpoint(v) {
            return Some(BcNode::Cut(v));
        }
        self.blocks
            .iter()
            .position(|b| b.binary_search(&v).is_ok())
            .map(BcNode::Block)
    }

    /// Tree adjacency: a block node joins the cutpoints it contains.
    fn neighbors(&self, node: BcNode) -> Vec<BcNode> {
        match node {
            BcNode::Block(b) => self.blocks[b]
                .iter()
                .filter(|&&v| self.is_cutpoint(v))
                .map(|&v| BcNode::Cut(v))
                .collect(),
            BcNode::Cut(v) => self
                .blocks
                .iter()
                .enumerate()
                .filter(|(_, verts)| verts.binary_search(&v).is_ok())
                .map(|(b, _)| BcNode::Block(b))
                .collect(),
        }
    }

    /// Unique tree path between two nodes.
    pub fn path(&self, from: BcNode, to: BcNode) -> Vec<BcNode> {
        let mut queue = std::collections::VecDeque::new();
        let mut prev: Vec<(BcNode, Option<BcNode>)> = vec![(from, None)];
        queue.push_back(from);
        while let Some(node) = queue.pop_front() {
            if node == to {
                break;
            }
            for next in self.neighbors(node) {
                if prev.iter().all(|&(seen, _)| seen != next) {
                    prev.push((next, Some(node)));
                    queue.push_back(next);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while let Some(&(_, Some(p))) = prev.iter().find(|&&(n, _)| n == cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// Computes blocks and cutpoints by depth-first low-link search.
pub fn block_cut_tree(g: &WeightedGraph) -> Result<BlockCutTree, NcdError> {
    let n = g.vertex_count();
    // structural connectivity, +inf edges included
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (u, v, _) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    {
        let mut seen = vec![false; n + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        if count != n {
            return Err(NcdError::Disconnected);
        }
    }
    if n == 1 {
        return Ok(BlockCutTree {
            blocks: vec![vec![1]],
            block_edges: vec![vec![]],
            cutpoints: vec![],
        });
    }

    let mut disc = vec![0usize; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut timer = 1usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks_edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut cutpoints = BTreeSet::new();

    // iterative DFS from vertex 1
    struct Frame {
        v: usize,
        parent: usize,
        next: usize,
        children: usize,
    }
    let mut stack = vec![Frame {
        v: 1,
        parent: 0,
        next: 0,
        children: 0,
    }];
    disc[1] = timer;
    low[1] = timer;
    timer += 1;
    while let Some(frame) = stack.last_mut() {
        let v = frame.v;
        if frame.next < adj[v].len() {
            let u = adj[v][frame.next];
            frame.next += 1;
            if disc[u] == 0 {
                frame.children += 1;
                edge_stack.push((v, u));
                disc[u] = timer;
                low[u] = timer;
                timer += 1;
                stack.push(Frame {
                    v: u,
                    parent: v,
                    next: 0,
                    children: 0,
                });
            } else if u != frame.parent && disc[u] < disc[v] {
                edge_stack.push((v, u));
                low[v] = low[v].min(disc[u]);
            }
        } else {
            let parent = frame.parent;
            let children = frame.children;
            stack.pop();
            if parent == 0 {
                if children >= 2 {
                    cutpoints.insert(v);
                }
                continue;
            }
            if let Some(p) = stack.last_mut() {
                low[p.v] = low[p.v].min(low[v]);
                if low[v] >= disc[parent] {
                    // one biconnected component closes at (parent, v)
                    if stack.len() > 1 {
                        cutpoints.insert(parent);
                    }
                    let mut block = Vec::new();
                    while let Some(&(a, b)) = edge_stack.last() {
                        edge_stack.pop();
                        block.push(if a < b { (a, b) } else { (b, a) });
                        if (a, b) == (parent, v) {
                            break;
                        }
                    }
                    blocks_edges.push(block);
                }
            }
        }
    }
    // root cutpoint detection handled above; dedupe block edge lists
    let mut blocks = Vec::new();
    let mut block_edges = Vec::new();
    for mut edges in blocks_edges {
        edges.sort_unstable();
        edges.dedup();
        let mut verts = BTreeSet::new();
        for &(a, b) in &edges {
            verts.insert(a);
            verts.insert(b);
        }
        blocks.push(verts.into_iter().collect());
        block_edges.push(edges);
    }
    Ok(BlockCutTree {
        blocks,
        block_edges,
        cutpoints: cutpoints.into_iter().collect(),
    })
}

/// The (i,j)-pruning Π(i,j): union of the blocks on the block-cutpoint
/// tree path between the query pair, as a sorted vertex set.
pub fn prune(g: &WeightedGraph, i: usize, j: usize) -> Result<Vec<usize>, NcdError> {
    if i == j {
        return Err(NcdError::EqualVertices);
    }
    let tree = block_cut_tree(g)?;
    let from = tree.node_of(i).ok_or(NcdError::VertexOutOfRange {
        vertex: i,
        n: g.vertex_count(),
    })?;
    let to = tree.node_of(j).ok_or(NcdError::VertexOutOfRange {
        vertex: j,
        n: g.vertex_count(),
    })?;
    let mut verts = BTreeSet::new();
    for node in tree.path(from, to) {
        match node {
            BcNode::Block(b) => verts.extend(tree.blocks[b].iter().copied()),
            BcNode::Cut(v) => {
                verts.insert(v);
            }
        }
    }
    Ok(verts.into_iter().collect())
}

/// A blob: a maximal union of non-bridge blocks glued at cutpoints, with
/// its entry and exit vertices. Degenerate (single-vertex, entry = exit)
/// at an endpoint that lies on a bridge.
#[derive(Debug, Clone)]
pub struct Blob {
    pub vertices: Vec<usize>,
    pub entry: usize,
    pub exit: usize,
}

impl Blob {
    pub fn is_degenerate(&self) -> bool {
        self.entry == self.exit
    }
}

/// A maximal run of bridges: the path vertices in order and the bridge
/// weights along it.
#[derive(Debug, Clone)]
pub struct BridgeChain {
    pub vertices: Vec<usize>,
    pub weights: Vec<f64>,
}

impl BridgeChain {
    pub fn chain(&self) -> Result<Chain, NcdError> {
        Chain::new(self.weights.clone())
    }
}

/// Alternating blobs and bridge-chains between two query vertices:
/// b_1 - C_1 - b_2 - ... - C_{k-1} - b_k.
#[derive(Debug, Clone)]
pub struct BlobChainDecomposition {
    pub blobs: Vec<Blob>,
    pub chains: Vec<BridgeChain>,
}

impl BlobChainDecomposition {
    pub fn blob_count(&self) -> usize {
        self.blobs.len()
    }
}

/// Blob-chain decomposition of the (i,j)-pruned graph.
pub fn blob_chain(
    g: &WeightedGraph,
    i: usize,
    j: usize,
) -> Result<BlobChainDecomposition, NcdError> {
    if i == j {
        return Err(NcdError::EqualVertices);
    }
    let tree = block_cut_tree(g)?;
    let from = tree.node_of(i).ok_or(NcdError::VertexOutOfRange {
        vertex: i,
        n: g.vertex_count(),
    })?;
    let to = tree.node_of(j).ok_or(NcdError::VertexOutOfRange {
        vertex: j,
        n: g.vertex_count(),
    })?;
    let path = tree.path(from, to);
    // ordered block sequence with entry/exit vertices
    let block_ids: Vec<usize> = path
        .iter()
        .filter_map(|node| match node {
            BcNode::Block(b) => Some(*b),
            BcNode::Cut(_) => None,
        })
        .collect();
    let cut_between: Vec<usize> = path
        .iter()
        .filter_map(|node| match node {
            BcNode::Cut(v) => Some(*v),
            BcNode::Block(_) => None,
        })
        .collect();
    // cuts strictly between two blocks, dropping a leading/trailing cut
    // that is the query vertex itself
    let mut joints = cut_between;
    if path.first() == Some(&BcNode::Cut(i)) {
        joints.remove(0);
    }
    if path.last() == Some(&BcNode::Cut(j)) {
        joints.pop();
    }
    debug_assert_eq!(joints.len() + 1, block_ids.len());

    let entry_of = |t: usize| if t == 0 { i } else { joints[t - 1] };
    let exit_of = |t: usize| {
        if t + 1 == block_ids.len() {
            j
        } else {
            joints[t]
        }
    };

    let mut blobs = Vec::new();
    let mut chains = Vec::new();
    let mut t = 0usize;
    while t < block_ids.len() {
        let bridge = tree.is_bridge(block_ids[t]);
        let start = t;
        while t + 1 < block_ids.len() && tree.is_bridge(block_ids[t + 1]) == bridge {
            t += 1;
        }
        let entry = entry_of(start);
        let exit = exit_of(t);
        if bridge {
            if chains.is_empty() && blobs.is_empty() {
                blobs.push(Blob {
                    vertices: vec![i],
                    entry: i,
                    exit: i,
                });
            }
            // walk the bridges from entry to exit
            let mut vertices = vec![entry];
            let mut weights = Vec::new();
            let mut at = entry;
            for &b in &block_ids[start..=t] {
                let (u, v) = tree.block_edges[b][0];
                let next = if u == at { v } else { u };
                weights.push(g.weight(u, v).unwrap());
                vertices.push(next);
                at = next;
            }
            debug_assert_eq!(at, exit);
            chains.push(BridgeChain { vertices, weights });
        } else {
            let mut verts = BTreeSet::new();
            for &b in &block_ids[start..=t] {
                verts.extend(tree.blocks[b].iter().copied());
            }
            blobs.push(Blob {
                vertices: verts.into_iter().collect(),
                entry,
                exit,
            });
        }
        t += 1;
    }
    if blobs.len() == chains.len() {
        blobs.push(Blob {
            vertices: vec![j],
            entry: j,
            exit: j,
        });
    }
    debug_assert_eq!(blobs.len(), chains.len() + 1);
    Ok(BlobChainDecomposition { blobs, chains })
}

/// Drops the first and last weight of a chain; `None` when |C| <= 2
/// (λ of the empty chain is 0 by convention).
pub fn amputate(c: &Chain) -> Option<Chain> {
    if c.len() <= 2 {
        return None;
    }
    Chain::new(c.weights()[1..c.len() - 1].to_vec()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_bridge_triangle() -> WeightedGraph {
        // vertices 1..8: triangle {1,2,3}, chain 3-4-5-6, triangle {6,7,8}
        WeightedGraph::new(
            8,
            [
                (1, 2, 1.0),
                (2, 3, 1.0),
                (1, 3, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (5, 6, 1.0),
                (6, 7, 1.0),
                (7, 8, 1.0),
                (6, 8, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn triangle_is_one_block() {
        let g = WeightedGraph::new(3, [(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)]).unwrap();
        let t = block_cut_tree(&g).unwrap();
        assert_eq!(t.blocks.len(), 1);
        assert_eq!(t.blocks[0], vec![1, 2, 3]);
        assert!(t.cutpoints.is_empty());
    }

    #[test]
    fn path_blocks_and_cutpoint() {
        let g = WeightedGraph::new(3, [(1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let t = block_cut_tree(&g).unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.cutpoints, vec![2]);
        assert!(t.is_bridge(0) && t.is_bridge(1));
    }

    #[test]
    fn shared_vertex_triangles() {
        // two triangles sharing vertex 3
        let g = WeightedGraph::new(
            5,
            [
                (1, 2, 1.0),
                (2, 3, 1.0),
                (1, 3, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
        )
        .unwrap();
        let t = block_cut_tree(&g).unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.cutpoints, vec![3]);
    }

    #[test]
    fn rejects_disconnected() {
        let g = WeightedGraph::new(4, [(1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        assert!(matches!(block_cut_tree(&g), Err(NcdError::Disconnected)));
    }

    #[test]
    fn prune_chain_is_whole_graph() {
        let g = WeightedGraph::new(4, [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]).unwrap();
        assert_eq!(prune(&g, 1, 4).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn prune_star_leaves() {
        // star with center 1, leaves 2..5: prune(2,4) = {1, 2, 4}
        let g = WeightedGraph::new(
            5,
            (2..=5).map(|v| (1, v, 1.0)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(prune(&g, 2, 4).unwrap(), vec![1, 2, 4]);
    }

    /// brute-force reference: union of all simple paths from i to j
    fn simple_path_union(g: &WeightedGraph, i: usize, j: usize) -> Vec<usize> {
        fn dfs(
            g: &WeightedGraph,
            path: &mut Vec<usize>,
            j: usize,
            hit: &mut BTreeSet<usize>,
        ) {
            let v = *path.last().unwrap();
            if v == j {
                hit.extend(path.iter().copied());
                return;
            }
            for u in g.neighbors(v) {
                if !path.contains(&u) {
                    path.push(u);
                    dfs(g, path, j, hit);
                    path.pop();
                }
            }
        }
        let mut hit = BTreeSet::new();
        dfs(g, &mut vec![i], j, &mut hit);
        hit.into_iter().collect()
    }

    #[test]
    fn prune_excludes_dangling_branch() {
        // triangle {1,2,3}, path 3-4-5, dangling branch 4-6
        let g = WeightedGraph::new(
            6,
            [
                (1, 2, 1.0),
                (2, 3, 1.0),
                (1, 3, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (4, 6, 1.0),
            ],
        )
        .unwrap();
        let p = prune(&g, 1, 5).unwrap();
        assert_eq!(p, vec![1, 2, 3, 4, 5]);
        assert_eq!(p, simple_path_union(&g, 1, 5));
    }

    #[test]
    fn prune_matches_simple_path_union_random() {
        for seed in 0..30u64 {
            let g = WeightedGraph::random_instance(seed, 7, 0.3, (0.5, 2.0)).unwrap();
            let p = prune(&g, 1, 7).unwrap();
            assert_eq!(p, simple_path_union(&g, 1, 7), "seed {seed}");
        }
    }

    #[test]
    fn blob_chain_pure_path() {
        let g = WeightedGraph::new(4, [(1, 2, 1.0), (2, 3, 2.0), (3, 4, 3.0)]).unwrap();
        let bc = blob_chain(&g, 1, 4).unwrap();
        assert_eq!(bc.blobs.len(), 2);
        assert!(bc.blobs[0].is_degenerate() && bc.blobs[1].is_degenerate());
        assert_eq!(bc.blobs[0].entry, 1);
        assert_eq!(bc.blobs[1].entry, 4);
        assert_eq!(bc.chains.len(), 1);
        assert_eq!(bc.chains[0].vertices, vec![1, 2, 3, 4]);
        assert_eq!(bc.chains[0].weights, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn blob_chain_triangle_bridge_triangle() {
        let g = triangle_bridge_triangle();
        let bc = blob_chain(&g, 1, 8).unwrap();
        assert_eq!(bc.blobs.len(), 2);
        assert_eq!(bc.chains.len(), 1);
        assert_eq!(bc.blobs[0].vertices, vec![1, 2, 3]);
        assert_eq!((bc.blobs[0].entry, bc.blobs[0].exit), (1, 3));
        assert_eq!(bc.blobs[1].vertices, vec![6, 7, 8]);
        assert_eq!((bc.blobs[1].entry, bc.blobs[1].exit), (6, 8));
        assert_eq!(bc.chains[0].vertices, vec![3, 4, 5, 6]);
        assert_eq!(bc.chains[0].weights, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn blob_chain_shared_vertex_is_single_blob() {
        let g = WeightedGraph::new(
            5,
            [
                (1, 2, 1.0),
                (2, 3, 1.0),
                (1, 3, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
        )
        .unwrap();
        let bc = blob_chain(&g, 1, 5).unwrap();
        assert_eq!(bc.blobs.len(), 1);
        assert!(bc.chains.is_empty());
        assert_eq!(bc.blobs[0].vertices, vec![1, 2, 3, 4, 5]);
        assert_eq!((bc.blobs[0].entry, bc.blobs[0].exit), (1, 5));
    }

    #[test]
    fn blob_chain_covers_pruned_edges_once() {
        for seed in 0..25u64 {
            let g = WeightedGraph::random_instance(seed, 8, 0.25, (0.5, 2.0)).unwrap();
            let pruned = prune(&g, 1, 8).unwrap();
            let bc = blob_chain(&g, 1, 8).unwrap();
            let mut classified: Vec<(usize, usize)> = Vec::new();
            for blob in &bc.blobs {
                for (a_i, &a) in blob.vertices.iter().enumerate() {
                    for &b in blob.vertices.iter().skip(a_i + 1) {
                        if g.has_edge(a, b) {
                            classified.push((a.min(b), a.max(b)));
                        }
                    }
                }
            }
            for chain in &bc.chains {
                for w in chain.vertices.windows(2) {
                    classified.push((w[0].min(w[1]), w[0].max(w[1])));
                }
            }
            classified.sort_unstable();
            let before = classified.len();
            classified.dedup();
            assert_eq!(before, classified.len(), "seed {seed}: edge counted twice");
            let mut expected: Vec<(usize, usize)> = g
                .edges()
                .filter(|&(u, v, _)| {
                    pruned.binary_search(&u).is_ok() && pruned.binary_search(&v).is_ok()
                })
                .map(|(u, v, _)| (u, v))
                .collect();
            expected.sort_unstable();
            assert_eq!(classified, expected, "seed {seed}: classification differs");
        }
    }

    #[test]
    fn amputate_examples() {
        let c = Chain::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(amputate(&c).unwrap().weights(), &[2.0]);
        let c = Chain::new(vec![1.0, 2.0]).unwrap();
        assert!(amputate(&c).is_none());
        let c = Chain::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(amputate(&c).unwrap().weights(), &[2.0, 3.0, 4.0]);
    }
}
