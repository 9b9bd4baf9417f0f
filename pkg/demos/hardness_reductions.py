"""Both hardness constructions, exercised end to end where size permits.

Vertex cover instances stay tiny after reduction, so the equivalence
(optimal pigeons = n + minVC - 1) can be checked against brute force.
The 3-CNF construction explodes by design; there we validate structure
and run the executable witness schedule through the 2-hop verifier.
"""

from pigeonpost import (
    UndirectedGraph,
    min_vertex_cover_bruteforce,
    optimal_multihop,
    parse_dimacs_cnf,
    reduce_3sat_to_twohop,
    reduce_vertex_cover_to_multihop,
    sat_bruteforce,
    satisfying_assignment_plan,
    verify_twohop,
)


def vertex_cover_demo():
    g = UndirectedGraph.from_pairs(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    cover = min_vertex_cover_bruteforce(g)
    reduced = reduce_vertex_cover_to_multihop(g, cover)
    best = optimal_multihop(reduced.graph)
    print("vertex cover -> multihop")
    print("  edges:", sorted(g.edges))
    print(f"  min cover {cover}, budget n+k-1 = {reduced.budget}")
    print(f"  optimal multihop pigeons: {best.count} (proven: {best.proven_optimal})")
    assert best.count == reduced.budget


def sat_demo():
    cnf = "p cnf 5 2\n1 -3 2 0\n3 4 5 0\n"
    formula = parse_dimacs_cnf(cnf)
    reduced = reduce_3sat_to_twohop(formula)
    print("3-CNF -> 2-hop")
    print(f"  formula: {formula.num_vars} vars, {len(formula.clauses)} clauses")
    print(f"  instance: {reduced.graph.n} nodes, {len(reduced.graph.demands)} demands")
    print(f"  forced edges: {len(reduced.forced_edges)}, budget k = {reduced.budget}")

    sat = sat_bruteforce(formula)
    print(f"  satisfiable: {sat.satisfiable}, witness {sat.witness}")
    plan = satisfying_assignment_plan(formula, reduced, sat.witness)
    report = verify_twohop(reduced.graph, plan)
    print(f"  witness schedule: {plan.count} pigeons, verifies: {report.satisfied}")
    assert plan.count == reduced.budget and report.satisfied


def main():
    vertex_cover_demo()
    print()
    sat_demo()


if __name__ == "__main__":
    main()
