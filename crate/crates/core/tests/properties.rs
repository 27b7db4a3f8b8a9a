use std::collections::HashSet;

use proptest::prelude::*;
use rand::Rng;
use transopt_core::fuel::{feasible, min_initial_fuel, preprocess, simulate_route};
use transopt_core::generate::{
    convex_polygon, int_values, random_gas, random_graph, random_tree, seeded, star_polygon,
};
use transopt_core::hampath::{
    curve_ham_path, curve_weighted_ham_path, shortest_ham_path_fixed_start, shortest_ham_path_free_start,
};
use transopt_core::jeep::{
    continuous_optimum, eval_equal_fast, eval_subdivision_exact, first_index, method2_naive, segment_step_exact,
    FirstIndexMethod, TransferMode,
};
use transopt_core::num::le_tol;
use transopt_core::oracles::jeep_simulate_plan;
use transopt_core::ovrp::{single_vehicle_closed_form, solve_greedy, solve_knapsack_v2, solve_leaf_interval};
use transopt_core::{
    CurveInstance, DistanceMatrix, Engine, FuelInstance, JeepGraph, JeepParams, OvrpInstance, RootedTree, Subdivision,
    ValueMode,
};

fn tree_from(seed: u64, n: usize, max_children: Option<usize>) -> RootedTree {
    let edges = random_tree(&mut seeded(seed), n, max_children, 9);
    RootedTree::new(n, &edges, 0).unwrap()
}

fn params() -> impl Strategy<Value = JeepParams> {
    (0.5f64..2.0, 0.5f64..2.0).prop_map(|(m, g)| JeepParams::new(m, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn path_cost_matches_walk(seed: u64, n in 1usize..=50) {
        let t = tree_from(seed, n, None);
        for v in 0..n {
            let mut walked = 0.0;
            let mut u = v;
            loop {
                prop_assert_eq!(t.path_cost(u, v), walked);
                prop_assert_eq!(t.path_cost(v, u), walked);
                match t.parent(u) {
                    Some(p) => {
                        walked += t.edge_len(u);
                        u = p;
                    }
                    None => break,
                }
            }
        }
    }

    #[test]
    fn leaf_lcas_match_ancestor_sets(seed: u64, n in 1usize..=40) {
        let t = tree_from(seed, n, None);
        let leaves = t.leaves_dfs_order();
        let lcas = t.consecutive_leaf_lcas(&leaves);
        for (w, &lca) in leaves.windows(2).zip(&lcas) {
            let above: HashSet<usize> = t.root_path(w[0]).into_iter().collect();
            let naive = *t.root_path(w[1]).iter().rev().find(|v| above.contains(v)).unwrap();
            prop_assert_eq!(lca, naive);
        }
    }

    #[test]
    fn ovrp_optimum_non_increasing_in_p(seed: u64, n in 1usize..=30) {
        let t = tree_from(seed, n, None);
        let mut last = f64::INFINITY;
        for p in 1..=6 {
            let inst = OvrpInstance::new(t.clone(), p).unwrap();
            let cost = solve_knapsack_v2(&inst);
            prop_assert!(cost <= last);
            prop_assert_eq!(solve_leaf_interval(&inst).total_cost, cost);
            if p == 1 {
                prop_assert_eq!(cost, single_vehicle_closed_form(&inst));
            }
            last = cost;
        }
    }

    #[test]
    fn ovrp_routes_recost_on_real_lengths(seed: u64, n in 1usize..=40, p in 1usize..=5) {
        let mut rng = seeded(seed);
        let edges: Vec<_> = random_tree(&mut rng, n, None, 9)
            .into_iter()
            .map(|(u, v, _)| (u, v, rng.gen_range(0.1..5.0)))
            .collect();
        let inst = OvrpInstance::new(RootedTree::new(n, &edges, 0).unwrap(), p).unwrap();
        let reference = solve_knapsack_v2(&inst);
        for sol in [solve_greedy(&inst), solve_leaf_interval(&inst)] {
            let audited = sol.audit(&inst).unwrap();
            prop_assert!((audited - sol.total_cost).abs() <= 1e-9 * sol.total_cost.max(1.0));
            prop_assert!((sol.total_cost - reference).abs() <= 1e-9 * reference.max(1.0));
            prop_assert!(sol.vehicles_used <= p);
        }
    }

    #[test]
    fn fuel_feasibility_is_monotone(seed: u64, n in 2usize..=30) {
        let mut rng = seeded(seed);
        let edges = random_tree(&mut rng, n, Some(4), 9);
        let gas = random_gas(&mut rng, n, 9);
        let inst = FuelInstance::new(RootedTree::new(n, &edges, 0).unwrap(), gas, ValueMode::Integer).unwrap();
        let sol = min_initial_fuel(&inst, Engine::SegmentTree);
        let pre = preprocess(&inst, &sol.per_vertex);
        for u in 0..n {
            let mut seen_feasible = false;
            for c in 0..=(sol.per_vertex[u] as u64 + 3) {
                let ok = feasible(&inst, &pre, u, c as f64, Engine::SegmentTree).feasible;
                prop_assert!(ok || !seen_feasible, "vertex {} feasible below {}", u, c);
                seen_feasible |= ok;
            }
        }
    }

    #[test]
    fn fuel_engines_agree(seed: u64, n in 1usize..=30) {
        let mut rng = seeded(seed);
        let edges = random_tree(&mut rng, n, None, 9);
        let gas = random_gas(&mut rng, n, 9);
        let inst = FuelInstance::new(RootedTree::new(n, &edges, 0).unwrap(), gas, ValueMode::Integer).unwrap();
        let a = min_initial_fuel(&inst, Engine::SegmentTree);
        let b = min_initial_fuel(&inst, Engine::Naive);
        prop_assert_eq!(&a.per_vertex, &b.per_vertex);
        prop_assert_eq!(&a.route, &b.route);
    }

    #[test]
    fn fuel_route_is_a_valid_tour(seed: u64, n in 1usize..=40) {
        let mut rng = seeded(seed);
        let edges = random_tree(&mut rng, n, None, 9);
        let gas = random_gas(&mut rng, n, 9);
        let tree = RootedTree::new(n, &edges, 0).unwrap();
        let inst = FuelInstance::new(tree.clone(), gas.clone(), ValueMode::Integer).unwrap();
        let sol = min_initial_fuel(&inst, Engine::SegmentTree);
        let route = &sol.route;
        prop_assert_eq!(route.first(), Some(&0));
        prop_assert_eq!(route.last(), Some(&0));
        prop_assert_eq!(route.len(), 2 * (n - 1) + 1);
        let mut crossings = vec![0; n];
        for w in route.windows(2) {
            let down = tree.parent(w[1]) == Some(w[0]);
            prop_assert!(down || tree.parent(w[0]) == Some(w[1]), "{:?} is not a tree edge", w);
            crossings[if down { w[1] } else { w[0] }] += 1;
        }
        prop_assert!(crossings.iter().skip(1).all(|&c| c == 2));
        prop_assert!(simulate_route(&inst, route, sol.cmin) >= 0.0);
        let lower = (2.0 * tree.total_length() - gas.iter().sum::<f64>()).max(0.0);
        prop_assert!(sol.cmin >= lower);
    }

    #[test]
    fn fuel_real_mode_error_bounded_by_height(seed: u64, n in 1usize..=20) {
        let mut rng = seeded(seed);
        let edges = random_tree(&mut rng, n, None, 9);
        let gas = random_gas(&mut rng, n, 9);
        let tree = RootedTree::new(n, &edges, 0).unwrap();
        let exact = min_initial_fuel(&FuelInstance::new(tree.clone(), gas.clone(), ValueMode::Integer).unwrap(), Engine::SegmentTree);
        let eps = 1e-6;
        let levels = (0..n).map(|u| tree.depth(u)).max().unwrap() + 1;
        let real = min_initial_fuel(&FuelInstance::new(tree, gas, ValueMode::Real { epsilon: eps }).unwrap(), Engine::SegmentTree);
        // each level's search returns the upper end of its bracket, and the
        // parent searches against those slightly inflated child minima
        let slack = levels as f64 * eps;
        prop_assert!(real.cmin >= exact.cmin - eps && real.cmin <= exact.cmin + slack, "{} vs {}", real.cmin, exact.cmin);
    }

    #[test]
    fn segment_step_monotone(p in params(), c_frac in 0.01f64..0.49, a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let c = c_frac * p.range();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (f_lo, _) = segment_step_exact(lo, c, &p, TransferMode::Faithful).unwrap();
        let (f_hi, _) = segment_step_exact(hi, c, &p, TransferMode::Faithful).unwrap();
        prop_assert!(le_tol(f_lo, f_hi), "{} -> {}, {} -> {}", lo, f_lo, hi, f_hi);
    }

    #[test]
    fn corrected_never_exceeds_faithful(p in params(), c_frac in 0.01f64..0.49, f_next in 0.0f64..20.0) {
        let c = c_frac * p.range();
        let (faithful, _) = segment_step_exact(f_next, c, &p, TransferMode::Faithful).unwrap();
        let (corrected, _) = segment_step_exact(f_next, c, &p, TransferMode::Corrected).unwrap();
        prop_assert!(corrected <= faithful);
    }

    #[test]
    fn plans_replay_and_respect_continuous_bound(p in params(), x_frac in 0.05f64..3.0, k in 0u64..64) {
        let x = x_frac * p.range();
        let d = Subdivision::equal(x, k).unwrap();
        if let Ok(eval) = eval_subdivision_exact(&d, &p, 0.0, TransferMode::Faithful) {
            prop_assert_eq!(jeep_simulate_plan(&d, &p, &eval.plans, 0.0).unwrap(), eval.fuel);
            prop_assert!(le_tol(continuous_optimum(x, &p), eval.fuel));
            for (i, plan) in eval.plans.iter().enumerate() {
                let burn = p.consumption * (d.points()[i + 1] - d.points()[i]);
                let delivered = plan.round_trips as f64 * (p.capacity - 2.0 * burn) + plan.final_delivery;
                prop_assert!((delivered - eval.requirements[i + 1]).abs() <= 1e-9 * eval.requirements[i + 1].max(1.0));
            }
        }
    }

    #[test]
    fn method2_bounds_method1(p in params(), x_frac in 0.05f64..5.0, k in 1u64..=64) {
        let x = x_frac * p.range();
        if let Ok(fast) = eval_equal_fast(x, k, &p) {
            prop_assert_eq!(fast.fuel.to_bits(), method2_naive(x, k, &p).unwrap().to_bits());
            prop_assert!(fast.points_touched <= (fast.l0 + 2).min(k + 2));
            let f = eval_subdivision_exact(&Subdivision::equal(x, k).unwrap(), &p, 0.0, TransferMode::Faithful).unwrap().fuel;
            prop_assert!(le_tol(f, fast.fuel));
        }
    }

    #[test]
    fn jeep_graph_methods_agree(seed: u64, n in 2usize..=8, extra in 0usize..=6) {
        let unit = JeepParams::new(1.0, 1.0).unwrap();
        let edges = random_graph(&mut seeded(seed), n, extra, 0.05..0.7);
        let g = JeepGraph::new(n, &edges).unwrap();
        let h = g.min_gas_backward(&unit);
        prop_assert_eq!(g.vertex_depots_continuous(&unit, 0), h.clone());
        let fwd = g.min_gas_binary_forward(&unit, 1e-6);
        if h[0].is_finite() && fwd.g_min.is_finite() {
            prop_assert!((h[0] - fwd.g_min).abs() <= 1e-5);
        }
        prop_assert!(g.free_depots(&unit) <= h[0] + 1e-9);
    }

    #[test]
    fn visibility_is_sane(seed: u64, n in 3usize..=12) {
        let mut rng = seeded(seed);
        prop_assert!(convex_polygon(&mut rng, n).visibility().all_visible());
        let poly = star_polygon(&mut rng, n);
        let vis = poly.visibility();
        for i in 0..n {
            prop_assert!(vis.get(i, (i + 1) % n));
            for j in 0..n {
                prop_assert_eq!(vis.get(i, j), vis.get(j, i));
            }
        }
    }

    #[test]
    fn ham_paths_are_consistent(seed: u64, n in 3usize..=12) {
        let mut rng = seeded(seed);
        let poly = star_polygon(&mut rng, n);
        let dist = DistanceMatrix::from_polygon(&poly);
        let s = rng.gen_range(0..n);
        for path in [shortest_ham_path_fixed_start(&dist, s).unwrap(), shortest_ham_path_free_start(&dist)] {
            if !path.length.is_finite() {
                continue;
            }
            let mut sorted = path.path.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
            let recomputed: f64 = path.path.windows(2).map(|w| dist.get(w[0], w[1])).sum();
            prop_assert!((recomputed - path.length).abs() <= 1e-9 * path.length.max(1.0));
            let v = poly.vertices();
            let ends = v[path.path[0]].dist(v[path.path[n - 1]]);
            prop_assert!(path.length >= ends - 1e-9);
        }
        let fixed = shortest_ham_path_fixed_start(&dist, s).unwrap();
        prop_assert_eq!(fixed.path.first().copied(), fixed.length.is_finite().then_some(s));
        prop_assert!(shortest_ham_path_free_start(&dist).length <= fixed.length);
    }

    #[test]
    fn curve_weighted_dp_path_scores_its_cost(seed: u64, n in 1usize..=15) {
        let mut rng = seeded(seed);
        let gaps = int_values(&mut rng, n, 1, 9);
        let weights = int_values(&mut rng, n, 0, 9);
        let start = rng.gen_bool(0.5).then(|| rng.gen_range(0..n));
        let inst = CurveInstance::new(gaps, weights.clone(), start).unwrap();
        let best = curve_weighted_ham_path(&inst);
        let mut t = 0.0;
        let mut cost = 0.0;
        for w in best.path.windows(2) {
            t += inst.dist(w[0], w[1]);
            cost += weights[w[1]] * t;
        }
        prop_assert_eq!(cost, best.length);
        if let Some(s) = start {
            prop_assert_eq!(best.path[0], s);
        }
        let zero = CurveInstance::new(inst.gaps().to_vec(), vec![0.0; n], start).unwrap();
        prop_assert_eq!(curve_weighted_ham_path(&zero).length, 0.0);
        let free = CurveInstance::new(inst.gaps().to_vec(), vec![1.0; n], None).unwrap();
        let max_gap = inst.gaps().iter().copied().fold(0.0, f64::max);
        prop_assert_eq!(curve_ham_path(&free), if n == 1 { 0.0 } else { inst.total() - max_gap });
    }
}

#[test]
fn first_index_methods_agree() {
    let mut rng = seeded(0xf1);
    for _ in 0..10_000 {
        let m = rng.gen_range(0.5..4.0);
        let a = rng.gen_range(0.001..0.499) * m;
        let v = rng.gen_range(1..5_000);
        let g_v = if rng.gen_bool(0.3) {
            // land exactly on multiples of a, where the boundary cases live
            rng.gen_range(0..2_000) as f64 * a
        } else {
            rng.gen_range(0.0..50.0 * m)
        };
        let direct = first_index(v, g_v, a, m, FirstIndexMethod::Direct);
        let binary = first_index(v, g_v, a, m, FirstIndexMethod::BinarySearch);
        assert_eq!(direct, binary, "v={v} g_v={g_v} a={a} m={m}");
    }
}

#[test]
fn continuous_optimum_is_approached_from_above() {
    let unit = JeepParams::new(1.0, 1.0).unwrap();
    for x in [0.5, 1.0, 4.0 / 3.0, 1.7, 2.2] {
        let cont = continuous_optimum(x, &unit);
        let mut last = f64::INFINITY;
        for k in [10, 100, 1000, 10_000] {
            let f = eval_subdivision_exact(&Subdivision::equal(x, k).unwrap(), &unit, 0.0, TransferMode::Faithful)
                .unwrap()
                .fuel;
            assert!(le_tol(cont, f), "x={x} k={k}: {f} < {cont}");
            assert!(f <= last + 1e-9, "x={x} k={k}: {f} after {last}");
            last = f;
        }
        assert!(last - cont < 0.01 * cont, "x={x}: {last} far from {cont}");
    }
}

#[test]
fn jeep_graph_backward_matches_path_enumeration() {
    use transopt_core::oracles::jeep_graph_paths_brute;
    let unit = JeepParams::new(1.0, 1.0).unwrap();
    let mut rng = seeded(0x9a);
    for _ in 0..500 {
        let n = rng.gen_range(2..=8);
        let extra = rng.gen_range(0..=6);
        let g = JeepGraph::new(n, &random_graph(&mut rng, n, extra, 0.05..0.9)).unwrap();
        for k in [0, 3] {
            let dp = g.vertex_depots_continuous(&unit, k)[0];
            let brute = jeep_graph_paths_brute(&g, &unit, k).unwrap();
            assert!(dp == brute.gas || (dp - brute.gas).abs() <= 1e-9 * dp, "k={k}: {dp} vs {}", brute.gas);
            assert!((g.shortest_path() - brute.shortest).abs() <= 1e-12);
        }
    }
}
