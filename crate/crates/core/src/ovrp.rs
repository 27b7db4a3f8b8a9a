//! Relaxed open vehicle routing on trees.
//!
//! `p` vehicles start at the root depot; every vertex must be visited by at
//! least one of them; vehicles need not return. The objective is the sum of
//! the walk lengths. Four solvers are provided:
//!
//! - [`solve_greedy`]: red/blue recoloring, one extra vehicle per step;
//! - [`solve_knapsack_v1`]: tree-knapsack DP over `(P_in, P_out)`, `O(p⁴n)`;
//! - [`solve_knapsack_v2`]: the same DP restricted to `P_out ∈ {0, 1}`, `O(p²n)`;
//! - [`solve_leaf_interval`]: DP over DFS leaf order, `O(pn)`.

use serde::Serialize;
use thiserror::Error;

use crate::tree::RootedTree;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OvrpError {
    #[error("at least one vehicle is required")]
    NoVehicles,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OvrpInstance {
    tree: RootedTree,
    vehicles: usize,
}

impl OvrpInstance {
    pub fn new(tree: RootedTree, vehicles: usize) -> Result<Self, OvrpError> {
        if vehicles == 0 {
            return Err(OvrpError::NoVehicles);
        }
        Ok(Self { tree, vehicles })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn vehicles(&self) -> usize {
        self.vehicles
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OvrpSolution {
    pub total_cost: f64,
    /// One vertex walk per vehicle, each starting at the root.
    pub routes: Vec<Vec<usize>>,
    pub vehicles_used: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RouteError {
    #[error("route {route} does not start at the root")]
    NotRooted { route: usize },
    #[error("route {route} steps between non-adjacent vertices {from} and {to}")]
    NotAdjacent { route: usize, from: usize, to: usize },
    #[error("route {route} ends at non-leaf vertex {vertex}")]
    EndsAtInternal { route: usize, vertex: usize },
    #[error("vertex {vertex} is not visited by any route")]
    Uncovered { vertex: usize },
    #[error("{used} routes exceed the {available} available vehicles")]
    TooManyRoutes { used: usize, available: usize },
}

impl OvrpSolution {
    /// Re-costs the routes edge by edge, checking that they are rooted
    /// walks that end at leaves and jointly cover every vertex.
    pub fn audit(&self, inst: &OvrpInstance) -> Result<f64, RouteError> {
        let tree = inst.tree();
        if self.routes.len() > inst.vehicles() {
            return Err(RouteError::TooManyRoutes { used: self.routes.len(), available: inst.vehicles() });
        }
        let mut covered = vec![false; tree.len()];
        let mut total = 0.0;
        for (r, route) in self.routes.iter().enumerate() {
            if route.first() != Some(&tree.root()) {
                return Err(RouteError::NotRooted { route: r });
            }
            covered[tree.root()] = true;
            for w in route.windows(2) {
                let (a, b) = (w[0], w[1]);
                let len = if tree.parent(b) == Some(a) {
                    tree.edge_len(b)
                } else if tree.parent(a) == Some(b) {
                    tree.edge_len(a)
                } else {
                    return Err(RouteError::NotAdjacent { route: r, from: a, to: b });
                };
                total += len;
                covered[b] = true;
            }
            let last = *route.last().expect("non-empty route");
            if !tree.is_leaf(last) {
                return Err(RouteError::EndsAtInternal { route: r, vertex: last });
            }
        }
        if let Some(vertex) = covered.iter().position(|&c| !c) {
            return Err(RouteError::Uncovered { vertex });
        }
        Ok(total)
    }
}

fn single_vertex_solution(tree: &RootedTree) -> OvrpSolution {
    OvrpSolution { total_cost: 0.0, routes: vec![vec![tree.root()]], vehicles_used: 1 }
}

/// Optimum for one vehicle: traverse everything twice except the deepest
/// root-to-leaf path.
pub fn single_vehicle_closed_form(inst: &OvrpInstance) -> f64 {
    let tree = inst.tree();
    let deepest = tree.leaves_dfs_order().into_iter().map(|l| tree.droot(l)).fold(0.0, f64::max);
    2.0 * tree.total_length() - deepest
}

/// Red/blue greedy. Starts from a single closed depth-first tour and, up to
/// `p` times, adds the vehicle whose root-to-leaf path yields the most
/// negative cost change `δ(l)`. Ties go to the smaller leaf id.
pub fn solve_greedy(inst: &OvrpInstance) -> OvrpSolution {
    let tree = inst.tree();
    let n = tree.len();
    if n == 1 {
        return single_vertex_solution(tree);
    }
    let mut leaves = tree.leaves_dfs_order();
    leaves.sort_unstable();

    let mut blue = vec![false; n];
    blue[tree.root()] = true;
    let mut total = 2.0 * tree.total_length();
    // (leaf, closest blue ancestor at the time it was chosen)
    let mut chosen: Vec<(usize, usize)> = Vec::new();

    for step in 0..inst.vehicles() {
        let mut best: Option<(f64, usize, usize)> = None;
        for &leaf in &leaves {
            if blue[leaf] {
                continue;
            }
            let mut v = leaf;
            while !blue[v] {
                v = tree.parent(v).expect("root is blue");
            }
            let delta = tree.path_cost(tree.root(), v) - tree.path_cost(v, leaf);
            if best.is_none_or(|(d, _, _)| delta < d) {
                best = Some((delta, leaf, v));
            }
        }
        // The first vehicle always exists; ending it at a leaf never costs more.
        match best {
            Some((delta, leaf, attach)) if delta < 0.0 || step == 0 => {
                let mut v = leaf;
                while v != attach {
                    blue[v] = true;
                    v = tree.parent(v).expect("attach is an ancestor");
                }
                total += delta;
                chosen.push((leaf, attach));
            }
            _ => break,
        }
    }

    let routes = greedy_routes(tree, &blue, &chosen);
    OvrpSolution { total_cost: total, vehicles_used: routes.len(), routes }
}

/// Vehicle `q` walks from the root to its attachment point, then down its
/// own blue segment, fully touring every red subtree hanging off the blue
/// vertices it owns.
fn greedy_routes(tree: &RootedTree, blue: &[bool], chosen: &[(usize, usize)]) -> Vec<Vec<usize>> {
    chosen
        .iter()
        .enumerate()
        .map(|(q, &(leaf, attach))| {
            let full = tree.root_path(leaf);
            let attach_pos = full.iter().position(|&v| v == attach).expect("attach on root path");
            let mut walk: Vec<usize> = full[..=attach_pos].to_vec();
            let owned_from = if q == 0 { attach_pos } else { attach_pos + 1 };
            for (i, &u) in full.iter().enumerate().skip(owned_from) {
                if i > attach_pos {
                    walk.push(u);
                }
                for &c in tree.children(u) {
                    if !blue[c] {
                        append_subtree_tour(tree, c, &mut walk, |_| true);
                    }
                }
            }
            walk
        })
        .collect()
}

/// Appends a closed depth-first tour of the subtree below `top` (entering
/// from and returning to its parent), restricted to vertices accepted by
/// `keep`.
fn append_subtree_tour(tree: &RootedTree, top: usize, walk: &mut Vec<usize>, keep: impl Fn(usize) -> bool) {
    let back = tree.parent(top).expect("subtree top has a parent");
    walk.push(top);
    let mut stack: Vec<(usize, usize)> = vec![(top, 0)];
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        let kids = tree.children(u);
        let mut descended = false;
        while *next < kids.len() {
            let c = kids[*next];
            *next += 1;
            if keep(c) {
                walk.push(c);
                stack.push((c, 0));
                descended = true;
                break;
            }
        }
        if !descended {
            stack.pop();
            walk.push(stack.last().map_or(back, |&(p, _)| p));
        }
    }
}

type Table = Vec<f64>;

/// Tree-knapsack DP over `(P_in, P_out)` with `0 ≤ P_out ≤ P_in ≤ p`.
///
/// Children are merged one at a time; a child entered by `P'_in` vehicles
/// of which `P'_out` come back costs `(P'_in + P'_out)·l(u, child)` on the
/// connecting edge and permanently absorbs `P'_in − P'_out` vehicles.
pub fn solve_knapsack_v1(inst: &OvrpInstance) -> f64 {
    let tree = inst.tree();
    let p = inst.vehicles();
    let w = p + 1;
    let idx = |pin: usize, pout: usize| pin * w + pout;
    let mut tables: Vec<Option<Table>> = vec![None; tree.len()];

    for u in tree.postorder() {
        let mut cur = vec![f64::INFINITY; w * w];
        for pin in 1..=p {
            for pout in 0..=pin {
                cur[idx(pin, pout)] = 0.0;
            }
        }
        for &s in tree.children(u) {
            let child = tables[s].take().expect("children finish first");
            let len = tree.edge_len(s);
            let mut aux = vec![f64::INFINITY; w * w];
            for pin in 1..=p {
                for pout in 0..=pin {
                    let base = cur[idx(pin, pout)];
                    if base == f64::INFINITY {
                        continue;
                    }
                    for cpin in 1..=pin {
                        for cpout in 0..=cpin {
                            let loss = cpin - cpout;
                            if pout < loss {
                                continue;
                            }
                            let v = base + child[idx(cpin, cpout)] + (cpin + cpout) as f64 * len;
                            let slot = &mut aux[idx(pin, pout - loss)];
                            if v < *slot {
                                *slot = v;
                            }
                        }
                    }
                }
            }
            cur = aux;
        }
        tables[u] = Some(cur);
    }

    let root = tables[tree.root()].take().expect("root table");
    (1..=p).map(|pin| root[idx(pin, 0)]).fold(f64::INFINITY, f64::min)
}

/// Tree-knapsack DP with at most one vehicle leaving each subtree.
pub fn solve_knapsack_v2(inst: &OvrpInstance) -> f64 {
    let tree = inst.tree();
    let p = inst.vehicles();
    let idx = |pin: usize, pout: usize| pin * 2 + pout;
    let mut tables: Vec<Option<Table>> = vec![None; tree.len()];

    for u in tree.postorder() {
        let mut cur = vec![f64::INFINITY; (p + 1) * 2];
        for pin in 1..=p {
            cur[idx(pin, 0)] = 0.0;
            cur[idx(pin, 1)] = 0.0;
        }
        for &s in tree.children(u) {
            let child = tables[s].take().expect("children finish first");
            let len = tree.edge_len(s);
            let mut aux = vec![f64::INFINITY; (p + 1) * 2];
            let mut relax = |pin: usize, pout: usize, v: f64| {
                let slot = &mut aux[idx(pin, pout)];
                if v < *slot {
                    *slot = v;
                }
            };
            for pin in 1..=p {
                for cpin in 1..=p {
                    for cpout in 0..=1usize {
                        let sub = child[idx(cpin, cpout)] + (cpin + cpout) as f64 * len;
                        if sub == f64::INFINITY {
                            continue;
                        }
                        // the vehicle passing through u continues into the child
                        if cpin > cpout && pin + cpin - cpout - 1 <= p {
                            relax(pin + cpin - cpout - 1, 0, cur[idx(pin, 1)] + sub);
                        }
                        // a fresh vehicle becomes the one passing through u
                        if pin + 1 + cpin - cpout <= p {
                            relax(pin + 1 + cpin - cpout, 1, cur[idx(pin, 0)] + sub);
                        }
                        if pin + cpin - cpout <= p {
                            for pout in 0..=1 {
                                relax(pin + cpin - cpout, pout, cur[idx(pin, pout)] + sub);
                            }
                        }
                    }
                }
            }
            cur = aux;
        }
        tables[u] = Some(cur);
    }

    let root = tables[tree.root()].take().expect("root table");
    (1..=p).map(|pin| root[idx(pin, 0)]).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LeafAction {
    NewVehicle,
    Extend,
    Detour,
}

/// Leaf-interval DP: every vehicle serves a block of consecutive leaves in
/// DFS order. `C1(i, j)` is the best cost for the first `i` leaves with at
/// most `j` vehicles when some route ends at leaf `i`; `C0(i, j)` drops that
/// requirement. Routes are rebuilt from the stored choices.
pub fn solve_leaf_interval(inst: &OvrpInstance) -> OvrpSolution {
    let tree = inst.tree();
    if tree.len() == 1 {
        return single_vertex_solution(tree);
    }
    let p = inst.vehicles();
    let leaves = tree.leaves_dfs_order();
    let lcas = tree.consecutive_leaf_lcas(&leaves);
    let k = leaves.len();
    let w = p + 1;
    let at = |i: usize, j: usize| i * w + j;

    let mut c1 = vec![f64::INFINITY; k * w];
    let mut c0 = vec![f64::INFINITY; k * w];
    let mut new_vehicle = vec![false; k * w];
    let mut detour = vec![false; k * w];

    for j in 1..=p {
        c1[at(0, j)] = tree.droot(leaves[0]);
        c0[at(0, j)] = tree.droot(leaves[0]);
        new_vehicle[at(0, j)] = true;
    }
    for i in 1..k {
        let (prev, leaf, lca) = (leaves[i - 1], leaves[i], lcas[i - 1]);
        let up_down = tree.path_cost(prev, lca) + tree.path_cost(lca, leaf);
        let branch = tree.path_cost(lca, leaf);
        for j in 1..=p {
            let extend = c1[at(i - 1, j)] + up_down;
            let fresh = c0[at(i - 1, j - 1)] + tree.droot(leaf);
            if fresh < extend {
                c1[at(i, j)] = fresh;
                new_vehicle[at(i, j)] = true;
            } else {
                c1[at(i, j)] = extend;
            }
            let side = c0[at(i - 1, j)] + 2.0 * branch;
            if side < c1[at(i, j)] {
                c0[at(i, j)] = side;
                detour[at(i, j)] = true;
            } else {
                c0[at(i, j)] = c1[at(i, j)];
            }
        }
    }
    let total_cost = c0[at(k - 1, p)];

    let mut actions = vec![LeafAction::Detour; k];
    let (mut i, mut j, mut ends_here) = (k - 1, p, false);
    loop {
        if !ends_here && detour[at(i, j)] {
            actions[i] = LeafAction::Detour;
        } else if new_vehicle[at(i, j)] {
            actions[i] = LeafAction::NewVehicle;
            j -= 1;
            ends_here = false;
        } else {
            actions[i] = LeafAction::Extend;
            ends_here = true;
        }
        if i == 0 {
            break;
        }
        i -= 1;
    }
    debug_assert!(actions[0] == LeafAction::NewVehicle);

    let mut routes = Vec::new();
    let mut start = 0;
    while start < k {
        let mut end_leaf = start;
        while end_leaf + 1 < k && actions[end_leaf + 1] == LeafAction::Extend {
            end_leaf += 1;
        }
        let mut stop = end_leaf + 1;
        while stop < k && actions[stop] == LeafAction::Detour {
            stop += 1;
        }
        routes.push(interval_route(tree, &leaves[start..stop], leaves[end_leaf]));
        start = stop;
    }
    OvrpSolution { total_cost, vehicles_used: routes.len(), routes }
}

/// Walk from the root covering every root-to-leaf path for `leaves`,
/// touring side branches fully and finishing at `end` without returning.
fn interval_route(tree: &RootedTree, leaves: &[usize], end: usize) -> Vec<usize> {
    let n = tree.len();
    let mut in_steiner = vec![false; n];
    in_steiner[tree.root()] = true;
    for &l in leaves {
        let mut v = l;
        while !in_steiner[v] {
            in_steiner[v] = true;
            v = tree.parent(v).expect("root is marked");
        }
    }
    let spine = tree.root_path(end);
    let mut on_spine = vec![false; n];
    for &v in &spine {
        on_spine[v] = true;
    }

    let mut walk = vec![tree.root()];
    for (pos, &u) in spine.iter().enumerate() {
        if pos > 0 {
            walk.push(u);
        }
        for &c in tree.children(u) {
            if in_steiner[c] && !on_spine[c] {
                append_subtree_tour(tree, c, &mut walk, |v| in_steiner[v]);
            }
        }
    }
    walk
}
