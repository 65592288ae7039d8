"""Level graphs embedded into a generalised stratum.

An embedded level graph is a LevelGraph together with a dictionary of marked
points ``dmp`` identifying the free legs with the points of the stratum.  The
embedding is what makes residue conditions, legality and isomorphism
meaningful; two embedded graphs are isomorphic only if the bijection fixes
every marked point of the stratum.
"""

from __future__ import annotations

import itertools

from . import linalg
from .errors import NoSuchLevel, NotABic, NotAPole
from .levelgraph import LevelGraph, connected_components


class EmbeddedLevelGraph:

    def __init__(self, X, LG, dmp, dlevels=None, check=True):
        self.X = X
        self.LG = LG
        self.dmp = dict(dmp)
        self._dmp_inv = {p: l for l, p in self.dmp.items()}
        self._levels = {}
        self._automorphisms = None
        self._invariant_key = None
        if check:
            self._validate()

    def _validate(self):
        assert len(self._dmp_inv) == len(self.dmp), "dmp is not injective"
        points = set(self.X.all_points())
        assert set(self.dmp.values()) == points, (
            f"dmp image {sorted(self.dmp.values())} does not cover the "
            f"stratum points {sorted(points)}")
        for l, p in self.dmp.items():
            assert self.LG.order_at_leg(l) == self.X.point_order(p), (
                f"leg {l} has order {self.LG.order_at_leg(l)}, stratum point "
                f"{p} has order {self.X.point_order(p)}")
        marked = set(self.LG.marked_legs())
        assert set(self.dmp) == marked, "dmp keys must be the free legs"

    # -- basics ---------------------------------------------------------------

    @property
    def dlevels(self):
        return {lev: -r for r, lev in enumerate(self.LG.internal_levels())}

    @property
    def num_levels(self):
        return self.LG.num_levels

    def is_bic(self):
        return (self.num_levels == 2
                and not any(self.LG.is_horizontal_edge(e)
                            for e in self.LG.edges))

    @property
    def ell(self):
        return self.LG.ell

    @property
    def top(self):
        return self.level(0)

    @property
    def bot(self):
        return self.level(1)

    def __repr__(self):
        return (f"EmbeddedLevelGraph(LG={self.LG!r},dmp={self.dmp},"
                f"dlevels={self.dlevels})")

    def serialize(self):
        """JSON-ready description, round-trippable via ``deserialize``."""
        return {
            "genera": list(self.LG.genera),
            "legs": [list(l) for l in self.LG.legs],
            "edges": [list(e) for e in self.LG.edges],
            "orders": {str(l): o for l, o in self.LG.orders.items()},
            "levels": list(self.LG.levels),
            "dmp": {str(l): list(p) for l, p in self.dmp.items()},
        }

    @classmethod
    def deserialize(cls, X, data):
        LG = LevelGraph(
            data["genera"],
            data["legs"],
            [tuple(e) for e in data["edges"]],
            {int(l): o for l, o in data["orders"].items()},
            data["levels"],
        )
        dmp = {int(l): tuple(p) for l, p in data["dmp"].items()}
        return cls(X, LG, dmp)

    # -- residue bookkeeping ---------------------------------------------------

    def residue_matrix_from_RT(self):
        """One row per vertex: the poles of the stratum sitting on it."""
        poles = self.X.poles()
        col = {p: j for j, p in enumerate(poles)}
        rows = []
        for v in range(self.LG.num_vertices):
            row = [0] * len(poles)
            for l in self.LG.legs[v]:
                p = self.dmp.get(l)
                if p is not None and p in col:
                    row[col[p]] = 1
            rows.append(row)
        return rows

    def full_residue_matrix(self):
        return self.X.residue_matrix() + self.residue_matrix_from_RT()

    def residue_zero(self, pole):
        """Is the residue at this pole forced to vanish?"""
        if self.X.point_order(pole) >= 0:
            raise NotAPole(pole)
        poles = self.X.poles()
        unit = [1 if p == pole else 0 for p in poles]
        return linalg.in_row_span(unit, self.full_residue_matrix())

    def res_edges(self):
        """(condition index, leg) pairs attaching conditioned poles to their
        residue node in the underlying graph."""
        return [(k, self._dmp_inv[p])
                for k, cond in enumerate(self.X.res_cond) for p in cond]

    def underlying_adjacency(self):
        return self.LG._adjacency(self.res_edges())

    # -- level extraction -------------------------------------------------------

    def level(self, l):
        if l not in self._levels:
            self._levels[l] = self._extract_level(l)
        return self._levels[l]

    def _extract_level(self, l):
        from .stratum import LevelStratum
        LG = self.LG
        if not 0 <= l < self.num_levels:
            raise NoSuchLevel(l)
        verts = LG.vertices_at_rank(l)
        sig_list, leg_dict = [], {}
        for c, v in enumerate(verts):
            sig = []
            for pos, leg in enumerate(LG.legs[v]):
                sig.append(LG.orders[leg])
                leg_dict[leg] = (c, pos)
            sig_list.append(tuple(sig))
        # group the poles on this level by the connected components of the
        # underlying graph strictly above; components seeing a free pole of
        # the stratum impose no condition
        adj = self.underlying_adjacency()
        above = {('v', v) for v in range(LG.num_vertices)
                 if LG.vertex_rank(v) < l}
        above |= {('res', k) for k in range(len(self.X.res_cond))}
        comps = connected_components(above, adj)
        free = self.X.free_poles()
        free_nodes = {('v', LG.vertex_of_leg(self._dmp_inv[p]))
                      for p in free}
        upper_of = {}
        for a, b in LG.edges:
            if not LG.is_horizontal_edge((a, b)):
                upper_of[b] = LG.vertex_of_leg(a)
        cond_of_point = {}
        for k, cond in enumerate(self.X.res_cond):
            for p in cond:
                cond_of_point[p] = k
        conditions = []
        for comp in comps:
            if comp & free_nodes:
                continue
            attached = []
            for leg, pt in leg_dict.items():
                if LG.orders[leg] > -2:
                    continue
                if leg in upper_of and ('v', upper_of[leg]) in comp:
                    attached.append(pt)
                    continue
                mp = self.dmp.get(leg)
                if mp is not None and mp in cond_of_point \
                        and ('res', cond_of_point[mp]) in comp:
                    attached.append(pt)
            if attached:
                conditions.append(sorted(attached))
        conditions.sort()
        L = LevelStratum(sig_list, conditions, leg_dict)
        L._orbit_thunk = lambda: self._level_orbits(l, leg_dict)
        return L

    def _level_orbits(self, l, leg_dict):
        points = sorted(leg_dict.values())
        parent = {p: p for p in points}

        def find(p):
            while parent[p] != p:
                parent[p] = parent[parent[p]]
                p = parent[p]
            return p

        inv = {pt: leg for leg, pt in leg_dict.items()}
        for _, legmap in self.automorphisms:
            for pt in points:
                img = leg_dict[legmap[inv[pt]]]
                ra, rb = find(pt), find(img)
                if ra != rb:
                    parent[rb] = ra
        orbits = {}
        for pt in points:
            orbits.setdefault(find(pt), []).append(pt)
        return list(orbits.values())

    # -- legality ----------------------------------------------------------------

    def is_legal(self, quiet=True):
        """Check the residue-constrained global residue condition, including
        non-emptiness of every level."""
        for l in range(self.num_levels):
            if self.level(l).is_empty():
                if not quiet:
                    print(f"Level {l} is empty!")
                return False
        free_pole_legs = {self._dmp_inv[p] for p in self.X.free_poles()}
        return self.LG.is_legal(free_pole_legs, self.res_edges(), quiet=quiet)

    # -- squishing ----------------------------------------------------------------

    def squish_vertical(self, crossing):
        return EmbeddedLevelGraph(
            self.X, self.LG.squish_vertical(crossing), self.dmp)

    def delta(self, i):
        return EmbeddedLevelGraph(self.X, self.LG.delta(i), self.dmp)

    # -- isomorphisms ----------------------------------------------------------------

    def invariant_key(self):
        """Cheap isomorphism invariant used for bucketing and sorting."""
        if self._invariant_key is None:
            LG = self.LG
            levels = []
            for r in range(self.num_levels):
                vs = []
                for v in LG.vertices_at_rank(r):
                    pts = tuple(sorted(self.dmp[l] for l in LG.legs[v]
                                       if l in self.dmp))
                    vs.append((LG.genera[v],
                               tuple(sorted(LG.orders[l] for l in LG.legs[v])),
                               pts))
                levels.append(tuple(sorted(vs)))
            edges = tuple(sorted(
                (LG.vertex_rank(LG.vertex_of_leg(a)),
                 LG.vertex_rank(LG.vertex_of_leg(b)),
                 LG.prongs[(a, b)])
                for a, b in LG.edges))
            self._invariant_key = (LG.num_vertices, tuple(levels), edges)
        return self._invariant_key

    def _vertex_signature(self, v):
        LG = self.LG
        return (LG.genera[v],
                tuple(sorted(LG.orders[l] for l in LG.legs[v])),
                tuple(sorted(self.dmp[l] for l in LG.legs[v]
                             if l in self.dmp)))

    def _leg_bijections(self, other, v1, v2, forced_leg):
        """All order-preserving leg bijections v1 -> v2 respecting dmp."""
        legs1 = self.LG.legs[v1]
        legs2 = other.LG.legs[v2]
        by_order1, by_order2 = {}, {}
        fixed = {}
        for l in legs1:
            if l in forced_leg:
                tgt = forced_leg[l]
                if tgt not in legs2 or \
                        other.LG.orders[tgt] != self.LG.orders[l]:
                    return
                fixed[l] = tgt
            else:
                by_order1.setdefault(self.LG.orders[l], []).append(l)
        taken = set(fixed.values())
        for l in legs2:
            if l not in taken:
                by_order2.setdefault(other.LG.orders[l], []).append(l)
        if sorted(by_order1) != sorted(by_order2):
            return
        orders = sorted(by_order1)
        if any(len(by_order1[o]) != len(by_order2[o]) for o in orders):
            return
        pools = [itertools.permutations(by_order2[o]) for o in orders]
        for choice in itertools.product(*pools):
            m = dict(fixed)
            for o, perm in zip(orders, choice):
                m.update(zip(by_order1[o], perm))
            yield m

    def _level_isomorphisms(self, other, r, forced_vertex, forced_leg):
        verts1 = self.LG.vertices_at_rank(r)
        verts2 = other.LG.vertices_at_rank(r)
        if len(verts1) != len(verts2):
            return
        sig1 = {v: self._vertex_signature(v) for v in verts1}
        sig2 = {v: other._vertex_signature(v) for v in verts2}
        if sorted(sig1.values()) != sorted(sig2.values()):
            return
        groups1, groups2 = {}, {}
        for v in verts1:
            groups1.setdefault(sig1[v], []).append(v)
        for v in verts2:
            groups2.setdefault(sig2[v], []).append(v)

        def vertex_maps():
            keys = sorted(groups1)
            pools = []
            for key in keys:
                g1, g2 = groups1[key], groups2.get(key, [])
                if len(g1) != len(g2):
                    return
                perms = []
                for perm in itertools.permutations(g2):
                    ok = all(forced_vertex.get(a, b) == b
                             for a, b in zip(g1, perm))
                    if ok:
                        perms.append(dict(zip(g1, perm)))
                pools.append(perms)
            for combo in itertools.product(*pools):
                m = {}
                for d in combo:
                    m.update(d)
                yield m

        for vmap in vertex_maps() or ():
            pools = []
            ok = True
            for v1, v2 in vmap.items():
                opts = list(self._leg_bijections(other, v1, v2, forced_leg))
                if not opts:
                    ok = False
                    break
                pools.append(opts)
            if not ok:
                continue
            for combo in itertools.product(*pools):
                legmap = {}
                for d in combo:
                    legmap.update(d)
                yield vmap, legmap

    def isomorphisms(self, other):
        """Yield all isomorphisms onto ``other`` as (vertex map, leg map)."""
        if self.X is not other.X and self.X != other.X:
            return
        if self.num_levels != other.num_levels:
            return
        if self.invariant_key() != other.invariant_key():
            return
        forced_leg, forced_vertex = {}, {}
        for p, l1 in self._dmp_inv.items():
            l2 = other._dmp_inv[p]
            if self.LG.vertex_rank(self.LG.vertex_of_leg(l1)) != \
                    other.LG.vertex_rank(other.LG.vertex_of_leg(l2)):
                return
            forced_leg[l1] = l2
            v1 = self.LG.vertex_of_leg(l1)
            v2 = other.LG.vertex_of_leg(l2)
            if forced_vertex.get(v1, v2) != v2:
                return
            forced_vertex[v1] = v2
        per_level = []
        for r in range(self.num_levels):
            opts = list(self._level_isomorphisms(
                other, r, forced_vertex, forced_leg))
            if not opts:
                return
            per_level.append(opts)
        edges2 = set(other.LG.edges)
        edges2 |= {(b, a) for a, b in other.LG.edges
                   if other.LG.is_horizontal_edge((a, b))}
        for combo in itertools.product(*per_level):
            vmap, legmap = {}, {}
            for vm, lm in combo:
                vmap.update(vm)
                legmap.update(lm)
            if all((legmap[a], legmap[b]) in edges2
                   for a, b in self.LG.edges):
                yield vmap, legmap

    @property
    def automorphisms(self):
        if self._automorphisms is None:
            self._automorphisms = list(self.isomorphisms(self))
        return self._automorphisms

    def is_isomorphic(self, other):
        return next(self.isomorphisms(other), None) is not None

    # -- splitting a two-level graph ------------------------------------------------

    def subgraph_at_ranks(self, ranks, stratum, point_map):
        """The induced subgraph on the given relative levels, embedded into
        ``stratum`` via ``point_map`` (leg -> stratum point).

        Vertex and leg names are preserved; edges leaving the rank set are
        cut, their stumps becoming marked points.
        """
        LG = self.LG
        keep = [v for v in range(LG.num_vertices)
                if LG.vertex_rank(v) in ranks]
        keepset = set(keep)
        legs = [list(LG.legs[v]) for v in keep]
        all_legs = {l for ll in legs for l in ll}
        edges = [(a, b) for a, b in LG.edges
                 if LG.vertex_of_leg(a) in keepset
                 and LG.vertex_of_leg(b) in keepset]
        orders = {l: LG.orders[l] for l in all_legs}
        genera = [LG.genera[v] for v in keep]
        levels = [LG.levels[v] for v in keep]
        sub = LevelGraph(genera, legs, edges, orders, levels)
        free = set(sub.marked_legs())
        dmp = {l: point_map[l] for l in free}
        return EmbeddedLevelGraph(stratum, sub, dmp)

    def split(self):
        """Splitting data of a two-level graph.

        Returns a dict with the keys understood by :func:`clutch`: the two
        pieces embedded into the top/bottom level strata, the clutching
        dictionary pairing the cut edges, and the embedding dictionaries
        locating the marked points of the ambient stratum in the pieces.
        """
        if not self.is_bic():
            raise NotABic(self)
        T, B = self.top, self.bot
        top_piece = self.subgraph_at_ranks({0}, T, T.leg_dict)
        bot_piece = self.subgraph_at_ranks({1}, B, B.leg_dict)
        clutch_dict = {T.leg_dict[a]: B.leg_dict[b] for a, b in self.LG.edges}
        emb_top = {p: T.leg_dict[l] for l, p in self.dmp.items()
                   if l in T.leg_dict}
        emb_bot = {p: B.leg_dict[l] for l, p in self.dmp.items()
                   if l in B.leg_dict}
        return {
            'X': self.X,
            'top': top_piece,
            'bottom': bot_piece,
            'clutch_dict': clutch_dict,
            'emb_dict_top': emb_top,
            'emb_dict_bot': emb_bot,
        }

    # -- human-readable description ----------------------------------------------

    def explain(self):
        print(self.explain_string())

    def explain_string(self):
        LG = self.LG
        out = [f"LevelGraph embedded into stratum {self.X}", " with:"]
        for r in range(self.num_levels):
            out.append(f"On level {r}:")
            for v in LG.vertices_at_rank(r):
                out.append(f"* A vertex (number {v}) of genus {LG.genera[v]}")
        pt_levels = sorted({LG.vertex_rank(LG.vertex_of_leg(l))
                            for l in self.dmp})
        if len(pt_levels) == 1:
            out.append(f"The marked points are on level {pt_levels[0]}.")
        else:
            lst = " and ".join(
                [", ".join(str(l) for l in pt_levels[:-1]), str(pt_levels[-1])])
            out.append(f"The marked points are on levels {lst}.")
        out.append("More precisely, we have:")
        for l in sorted(self.dmp, key=lambda l: self.dmp[l]):
            v = LG.vertex_of_leg(l)
            out.append(f"* Marked point {self.dmp[l]} of order "
                       f"{LG.orders[l]} on vertex {v} on level "
                       f"{LG.vertex_rank(v)}")
        pairs = {}
        for a, b in LG.edges:
            va, vb = LG.vertex_of_leg(a), LG.vertex_of_leg(b)
            pairs.setdefault((va, vb), []).append(LG.prongs[(a, b)])
        n_edges = len(LG.edges)
        out.append("Finally, we have "
                   + ("one edge" if n_edges == 1 else f"{n_edges} edges")
                   + ". More precisely:")
        for (va, vb), ks in sorted(pairs.items()):
            where = (f"between vertex {va} (on level {LG.vertex_rank(va)}) "
                     f"and vertex {vb} (on level {LG.vertex_rank(vb)})")
            if len(ks) == 1:
                out.append(f"* one edge {where} with prong {ks[0]}.")
            else:
                kstr = " and ".join(
                    [", ".join(str(k) for k in ks[:-1]), str(ks[-1])])
                out.append(f"* {len(ks)} edges {where} with prongs {kstr}.")
        return "\n".join(out)
