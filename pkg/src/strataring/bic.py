"""Generation of all two-level graphs (BICs) of a generalised stratum.

The combinatorial enumeration works on one connected signature at a time:
distribute the labeled points onto bottom and top vertices, choose genera,
then place the edges.  Candidates failing stability, connectivity or the
global residue condition are discarded.  The marked points are placed
canonically so that the i-th point of the signature is the leg i+1.

For a disconnected stratum the BICs are products of the per-component
two-level graphs, where components may also contribute their smooth graph
on either level (but not all of them at once).
"""

from __future__ import annotations

import itertools

from .levelgraph import LevelGraph
from .sig import Signature


def _partitions_into_parts_ge2(total, num_parts):
    """Multisets (descending) of ``num_parts`` integers >= 2 summing to total."""
    if num_parts == 0:
        return [()] if total == 0 else []
    out = []

    def rec(rem, parts_left, maxpart, acc):
        if parts_left == 1:
            if 2 <= rem <= maxpart:
                out.append(tuple(acc + [rem]))
            return
        lo = 2
        hi = min(maxpart, rem - 2 * (parts_left - 1))
        for first in range(hi, lo - 1, -1):
            rec(rem - first, parts_left - 1, first, acc + [first])

    rec(total, num_parts, total, [])
    return out


def _genus_distributions(total, length):
    """All length-tuples of nonnegative integers summing to total."""
    if length == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _genus_distributions(total - first, length - 1):
            out.append((first,) + rest)
    return out


def _genus_partitions(total, length):
    """Non-increasing length-tuples of nonnegative integers summing to total."""
    out = []

    def rec(rem, parts_left, maxpart, acc):
        if parts_left == 0:
            if rem == 0:
                out.append(tuple(acc))
            return
        for first in range(min(maxpart, rem), -1, -1):
            rec(rem - first, parts_left - 1, first, acc + [first])

    rec(total, length, total, [])
    return out


def _connected(b, t, edges):
    """Is the bipartite graph on b bottom and t top nodes connected?"""
    n = b + t
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, u in edges:
        rv, ru = find(v), find(b + u)
        if rv != ru:
            parent[ru] = rv
    return len({find(x) for x in range(n)}) == 1


def bic_alt(sig):
    """All combinatorial two-level graphs on a connected signature.

    Returns a list of LevelGraphs with marked point i at leg i+1, filtered by
    stability and the classical global residue condition, with exact
    duplicates removed.  Top vertices come first, on level 0.
    """
    if not isinstance(sig, Signature):
        sig = Signature(sig)
    orders = sig.sig
    n = sig.n
    g = sig.g
    zeros = list(sig.zero_ind)
    poles = list(sig.pole_ind)
    marks = [i for i, m in enumerate(orders) if m == 0]
    max_b = len(zeros) + len(marks) // 2
    results = []
    seen = set()

    for b in range(1, max_b + 1):
        for z_bot in _subsets(zeros):
            z_top = [i for i in zeros if i not in z_bot]
            for zeta in itertools.product(range(b), repeat=len(z_bot)):
                for p_bot in _subsets(poles):
                    p_top = [i for i in poles if i not in p_bot]
                    for pi in itertools.product(range(b), repeat=len(p_bot)):
                        for m_bot in _subsets(marks):
                            m_top = [i for i in marks if i not in m_bot]
                            for mu in itertools.product(
                                    range(b), repeat=len(m_bot)):
                                _bottom_case(
                                    orders, g, b, z_bot, zeta, p_bot, pi,
                                    m_bot, mu, z_top, p_top, m_top,
                                    results, seen)
    return results


def _subsets(items):
    for r in range(len(items) + 1):
        yield from (list(c) for c in itertools.combinations(items, r))


def _bottom_case(orders, g, b, z_bot, zeta, p_bot, pi, m_bot, mu,
                 z_top, p_top, m_top, results, seen):
    # points per bottom vertex
    bot_points = [[] for _ in range(b)]
    for i, v in zip(z_bot, zeta):
        bot_points[v].append(i)
    for i, v in zip(p_bot, pi):
        bot_points[v].append(i)
    for i, v in zip(m_bot, mu):
        bot_points[v].append(i)
    # every bottom vertex needs a zero or at least two marked points
    for v in range(b):
        pts = bot_points[v]
        if not any(orders[i] > 0 for i in pts) and \
                sum(1 for i in pts if orders[i] == 0) < 2:
            return
    sums = [sum(orders[i] for i in pts) for pts in bot_points]
    max_gbot = g
    for gammas in _genus_distributions_upto(max_gbot, b):
        spaces = [2 * gam - 2 - s for gam, s in zip(gammas, sums)]
        if any(sp > -2 for sp in spaces):
            continue
        g_bot = sum(gammas)
        slots_budget = sum(-sp for sp in spaces)
        max_edges = sum((-sp) // 2 for sp in spaces)
        for g_top_total in range(0, g - g_bot + 1):
            cycles = g - g_bot - g_top_total
            for t in range(1, max_edges + 1):
                E = b + t - 1 + cycles
                if E < max(b, t, 1) or E > max_edges:
                    continue
                if slots_budget < 2 * E:
                    continue
                for tau in _genus_partitions(g_top_total, t):
                    _top_case(orders, b, t, E, gammas, tau, bot_points,
                              spaces, z_top, p_top, m_top, results, seen)


def _genus_distributions_upto(max_total, length):
    for total in range(max_total + 1):
        yield from _genus_distributions(total, length)


def _top_case(orders, b, t, E, gammas, tau, bot_points, spaces,
              z_top, p_top, m_top, results, seen):
    for zf in itertools.product(range(t), repeat=len(z_top)):
        for pf in itertools.product(range(t), repeat=len(p_top)):
            for mf in itertools.product(range(t), repeat=len(m_top)):
                top_points = [[] for _ in range(t)]
                for i, u in zip(z_top, zf):
                    top_points[u].append(i)
                for i, u in zip(p_top, pf):
                    top_points[u].append(i)
                for i, u in zip(m_top, mf):
                    top_points[u].append(i)
                budgets = [2 * tg - 2 - sum(orders[i] for i in pts)
                           for tg, pts in zip(tau, top_points)]
                if any(r < 0 for r in budgets):
                    continue
                _place_edges(orders, b, t, E, gammas, tau, bot_points,
                             top_points, spaces, budgets, results, seen)


def _place_edges(orders, b, t, E, gammas, tau, bot_points, top_points,
                 spaces, budgets, results, seen):
    # choose, per bottom vertex, a partition of its space into slots
    per_vertex = []
    for sp in spaces:
        choices = []
        for e_v in range(1, (-sp) // 2 + 1):
            choices.extend((e_v, parts) for parts in
                           _partitions_into_parts_ge2(-sp, e_v))
        per_vertex.append(choices)
    for combo in itertools.product(*per_vertex):
        if sum(c[0] for c in combo) != E:
            continue
        slots = []  # (bottom vertex, magnitude)
        for v, (_, parts) in enumerate(combo):
            slots.extend((v, q) for q in parts)
        # assign every slot to a top vertex
        for assign in itertools.product(range(t), repeat=E):
            recv = [0] * t
            cnt = [0] * t
            for (v, q), u in zip(slots, assign):
                recv[u] += q - 2
                cnt[u] += 1
            if recv != budgets or any(c == 0 for c in cnt):
                continue
            if not _connected(b, t,
                              [(v, u) for (v, q), u in zip(slots, assign)]):
                continue
            _build_graph(orders, b, t, gammas, tau, bot_points, top_points,
                         slots, assign, results, seen)


def _build_graph(orders, b, t, gammas, tau, bot_points, top_points,
                 slots, assign, results, seen):
    n = len(orders)
    genera = list(tau) + list(gammas)
    legs = [[i + 1 for i in pts] for pts in top_points] + \
           [[i + 1 for i in pts] for pts in bot_points]
    leg_orders = {i + 1: orders[i] for i in range(n)}
    next_leg = n + 1
    top_legs = {}
    for u in range(t):
        for s, ((v, q), uu) in enumerate(zip(slots, assign)):
            if uu == u:
                top_legs[s] = next_leg
                legs[u].append(next_leg)
                leg_orders[next_leg] = q - 2
                next_leg += 1
    edges = []
    for s, (v, q) in enumerate(slots):
        legs[t + v].append(next_leg)
        leg_orders[next_leg] = -q
        edges.append((top_legs[s], next_leg))
        next_leg += 1
    # stability
    for gv, ll in zip(genera, legs):
        if 2 * gv - 2 + len(ll) <= 0:
            return
    levels = [0] * t + [-1] * b
    G = LevelGraph(genera, legs, edges, leg_orders, levels)
    if not G.is_legal():
        return
    key = G.data()
    if key not in seen:
        seen.add(key)
        results.append(G)


# -- products over components -------------------------------------------------


def smooth_component_graph(sig, level):
    """One-vertex graph of a connected signature, placed at 0 or -1."""
    if not isinstance(sig, Signature):
        sig = Signature(sig)
    legs = list(range(1, sig.n + 1))
    orders = {i + 1: m for i, m in enumerate(sig.sig)}
    return LevelGraph([sig.g], [legs], [], orders, [level])


def unite_embedded_graphs(X, pieces):
    """Renumber per-component graphs into one graph embedded in X.

    Each piece is a bare LevelGraph for one component whose marked point i
    sits at leg i+1; legs are shifted so they do not collide.
    """
    from .embedded import EmbeddedLevelGraph
    genera, legs, edges, orders, levels, dmp = [], [], [], {}, [], {}
    offset = 0
    for c, piece in enumerate(pieces):
        shift = {l: l + offset for l in piece.orders}
        genera.extend(piece.genera)
        legs.extend([[shift[l] for l in ll] for ll in piece.legs])
        edges.extend([(shift[a], shift[b]) for a, b in piece.edges])
        orders.update({shift[l]: o for l, o in piece.orders.items()})
        levels.extend(piece.levels)
        for i in range(X.sig_list[c].n):
            dmp[shift[i + 1]] = (c, i)
        offset += max(piece.orders)
    LG = LevelGraph(genera, legs, edges, orders, levels)
    return EmbeddedLevelGraph(X, LG, dmp)


def generate_bics(X):
    """All BICs of a stratum: embedded, legal, deduplicated and sorted."""
    if X.is_empty():
        return []
    options = []
    for c, s in enumerate(X.sig_list):
        opts = [('bic', G) for G in bic_alt(s)]
        if X.n_components >= 2:
            opts.append(('smooth', smooth_component_graph(s, 0)))
            opts.append(('smooth', smooth_component_graph(s, -1)))
        options.append(opts)
    candidates = []
    for combo in itertools.product(*options):
        levels_used = set()
        for kind, piece in combo:
            levels_used.update(piece.levels)
        if levels_used != {0, -1}:
            continue
        ELG = unite_embedded_graphs(X, [piece for _, piece in combo])
        if ELG.is_legal():
            candidates.append(ELG)
    # sort into isomorphism classes
    classes = []
    buckets = {}
    for ELG in candidates:
        key = ELG.invariant_key()
        for rep in buckets.get(key, []):
            if ELG.is_isomorphic(rep):
                break
        else:
            buckets.setdefault(key, []).append(ELG)
            classes.append(ELG)
    classes.sort(key=lambda G: (G.invariant_key(), G.LG.data()))
    return classes
