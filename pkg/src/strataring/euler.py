"""Euler characteristics and stratum reports.

The (orbifold) Euler characteristic is the dimension-weighted sum over all
boundary graphs of the product of the top powers of the tautological
line-bundle class of every level, converted to level-wise integrals by the
stack factor of the graph.
"""

from __future__ import annotations

from fractions import Fraction

from . import evaluation


def euler_characteristic(X, quiet=True, cache=None):
    """Sum over all enhanced profiles of the weighted level-wise products."""
    cache = cache or evaluation.DEFAULT_CACHE
    if X.is_empty():
        return Fraction(0)
    d = X.dim()
    total = Fraction(0)
    for length in range(d + 1):
        eps = X.enhanced_profiles_of_length(length)
        if not quiet:
            print(f"Going through {len(eps)} profiles of length {length}...")
        for n, ep in enumerate(eps):
            p, _ = ep
            ell_product = 1
            for i in p:
                ell_product *= X.bics[i].ell
            if p:
                n_top = X.bics[p[0]].top.dim() + 1
            else:
                n_top = d + 1
            stack = X.additive_generator(ep).stack_factor
            if not quiet:
                print(f"{n + 1} / {len(eps)}, {ep}: Calculating xi",
                      end=" ")
            product = Fraction(1)
            for l in range(length + 1):
                v = X.top_xi_at_level(ep, l, cache=cache)
                if not quiet:
                    print(f"at level {l}: {v}", end=" ")
                product *= v
                if v == 0:
                    if not quiet:
                        print("Product 0.", end=" ")
                    break
            if not quiet:
                print("Done.")
            total += ell_product * n_top * stack * product
    return (-1) ** d * total


def info_string(X):
    """The boundary report: genus, dimension, graph counts per codimension."""
    out = str(X) + "\n"
    out += f"\nGenus: {X.g}\n"
    out += f"Dimension: {X.dim()}\n"
    out += "Boundary Graphs (without horizontal edges):\n"
    total = 0
    for codim, profiles in enumerate(X.lookup_list):
        count = sum(len(X.lookup(p)) for p in profiles)
        total += count
        plural = "graph" if count == 1 else "graphs"
        out += f"Codimension {codim}: {count} {plural}\n"
    out += f"Total graphs: {total}"
    return out
