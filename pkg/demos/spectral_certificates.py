"""
Spectral certificates
=====================

Two quantities certify how well connected a graph is: the algebraic
connectivity lambda2 (second-smallest Laplacian eigenvalue) and the
isoperimetric number i(G) (worst boundary-to-size ratio over small vertex
sets).  They sandwich each other,

    2 i(G)  >=  lambda2  >=  i(G)^2 / (2 * max_degree),

and for connected graphs lambda2 > 2/n^3.  Those inequalities power a lower
bound on how far a single step must move the amounts whenever they are
spread wider than delta.
"""

from garbagegame import GarbageState, Threshold, cheeger_check, generate_graph, nontrivial_displacement_bound

print(f"{'graph':>12} {'lambda2':>10} {'i(G)':>8} {'2i(G)':>8} "
      f"{'i^2/2max_deg':>13} {'2/n^3':>10}")
for kind, order in (("path", 8), ("cycle", 8), ("star", 8), ("complete", 8),
                    ("cycle", 4), ("path", 2)):
    rep = cheeger_check(generate_graph(kind, order))
    lower = rep.isoperimetric**2 / (2 * rep.max_degree)
    print(f"{kind + ':' + str(order):>12} {rep.lambda2:>10.5f} "
          f"{rep.isoperimetric:>8.3f} {2 * rep.isoperimetric:>8.3f} "
          f"{lower:>13.5f} {rep.lambda2_floor:>10.5f}")
    assert rep.sandwich_ok and rep.floor_ok

print()
print("displacement bound on a 4-cycle spread wider than delta = 1:")
c4 = generate_graph("cycle", 4)
res = nontrivial_displacement_bound(
    c4, GarbageState([0.0, 1.0, 2.0, 3.0]), Threshold.infinite(), [1, 2, 3, 4], 1.0)
print(f"  one-step squared displacement {res.lhs}  >  bound {res.rhs:.3e}: {res.ok}")
