"""Smoke test for the chromres Python module."""

import chromres

g = chromres.Graph.gnp(40, 0.5, seed=3)
assert g.n == 40 and g.edge_count == len(g.edges())
assert chromres.Graph.from_edge_list(g.to_edge_list()) == g
assert chromres.Graph.from_dimacs(g.to_dimacs()) == g

prof = chromres.profile(40, 0.5)
assert prof["k0"] == chromres.compute_k0(40, 0.5) == 7
k0 = prof["k0"]
assert abs(prof["mu0"] / prof["mu"] - k0 * (k0 - 1) / (40 * 39)) < 1e-12

mis = chromres.max_independent_set(g)
turan = chromres.turan_extract(g)
assert len(turan) <= len(mis)

fam = chromres.enumerate_isets(g, len(mis) - 1)
assert all(sorted(s) == s for s in fam["sets"])
choice = chromres.sparse_iset(g, len(mis) - 1, chromres.random_budget(g, 20, seed=1))
assert choice["planted_inside"] <= choice["family_mean"]

colors = chromres.dsatur(g)
assert chromres.verify_coloring(g, colors)
assert chromres.chromatic_exact(chromres.Graph.petersen())[0] == 3

added = chromres.plant_clique(g, list(range(10)))
colors, trace = chromres.strip_color(g, added, p=0.5)
assert chromres.verify_coloring(g.union(added), colors)
assert max(colors) + 1 == sum(trace["bucket_counts"]) + trace["residual_colors"]

c5 = chromres.Graph.cycle(5)
value, witness = chromres.global_resilience(c5, 3, 5)
assert value == 3 and len(witness) == 3
assert chromres.local_resilience(c5, 3, 4)[0] == 2

report = chromres.density_audit(chromres.Graph.gnp(20, 0.5, seed=9), 0.5, workers=2)
assert report["exhaustive"]

table = chromres.run_experiment("n = 20\nseeds = 1..2\nstrategy = none; plant_clique\n", workers=2)
assert len(table["rows"]) == 4 and all(r["row"]["all_proper"] for r in table["rows"])

print("chromres", chromres.__version__, "smoke test passed")
