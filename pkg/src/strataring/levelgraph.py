"""Enhanced level graphs: the bare combinatorial objects.

A level graph is a stable graph with a level function on the vertices and an
enhancement (prong number) on every edge.  Legs are positive integers, each
attached to exactly one vertex; an edge is an ordered pair of legs.  For a
non-horizontal edge the upper leg carries the order ``kappa - 1`` and the
lower leg ``-kappa - 1``; horizontal edges carry a simple pole on both sides.

LevelGraph objects are immutable: every surgery returns a fresh graph.
"""

from __future__ import annotations

from math import lcm

from .errors import (
    NoSuchCrossing,
    NoSuchLevel,
    NotHorizontal,
    UnknownLeg,
    UnknownVertex,
)


def connected_components(nodes, adj):
    """Connected components of a graph given by an adjacency dict.

    ``adj`` maps a node to an iterable of neighbours; nodes outside ``nodes``
    are ignored.  Returns a list of sets.
    """
    nodes = set(nodes)
    seen = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y in nodes and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    return comps


class LevelGraph:
    """An enhanced level graph.

    Args:
        genera: list of genera, one per vertex
        legs: list of lists of legs, one list per vertex
        edges: list of (leg, leg) pairs
        orders: dict mapping each leg to the order of the differential there
        levels: list of (internal) level numbers, one per vertex
    """

    def __init__(self, genera, legs, edges, orders, levels, check=True):
        self.genera = [int(g) for g in genera]
        self.legs = [list(l) for l in legs]
        self.orders = dict(orders)
        self.levels = [int(l) for l in levels]
        self._leg_vertex = {}
        for v, ll in enumerate(self.legs):
            for l in ll:
                self._leg_vertex[l] = v
        # store non-horizontal edges (upper, lower), horizontal ones with the
        # smaller leg number first
        norm = []
        for a, b in edges:
            if self.orders[a] >= 0 and self.orders[b] <= -2:
                norm.append((a, b))
            elif self.orders[b] >= 0 and self.orders[a] <= -2:
                norm.append((b, a))
            else:
                norm.append((min(a, b), max(a, b)))
        self.edges = norm
        if check:
            self._validate()

    # -- validation ---------------------------------------------------------

    def _validate(self):
        assert len(self.genera) == len(self.legs) == len(self.levels)
        seen = set()
        for ll in self.legs:
            for l in ll:
                assert l not in seen, f"leg {l} appears twice"
                seen.add(l)
        assert set(self.orders) == seen, "orders must cover exactly the legs"
        for a, b in self.edges:
            assert a in seen and b in seen
            oa, ob = self.orders[a], self.orders[b]
            va, vb = self._leg_vertex[a], self._leg_vertex[b]
            if oa == ob == -1:
                assert self.levels[va] == self.levels[vb], (
                    f"horizontal edge {(a, b)} joins different levels")
            else:
                assert oa >= 0 and oa + ob == -2, (
                    f"edge {(a, b)} has bad orders {(oa, ob)}")
                assert self.levels[va] > self.levels[vb], (
                    f"edge {(a, b)} does not point downwards")
        for v in range(len(self.genera)):
            assert self.genera[v] >= 0
            total = sum(self.orders[l] for l in self.legs[v])
            assert total == 2 * self.genera[v] - 2, (
                f"vertex {v}: orders sum to {total}, "
                f"expected {2 * self.genera[v] - 2}")

    # -- basic accessors ----------------------------------------------------

    @property
    def num_vertices(self):
        return len(self.genera)

    def genus(self, v):
        try:
            return self.genera[v]
        except IndexError:
            raise UnknownVertex(v)

    def legs_at_vertex(self, v):
        try:
            return list(self.legs[v])
        except IndexError:
            raise UnknownVertex(v)

    def vertex_of_leg(self, l):
        try:
            return self._leg_vertex[l]
        except KeyError:
            raise UnknownLeg(l)

    def order_at_leg(self, l):
        try:
            return self.orders[l]
        except KeyError:
            raise UnknownLeg(l)

    def level_of_vertex(self, v):
        try:
            return self.levels[v]
        except IndexError:
            raise UnknownVertex(v)

    def internal_levels(self):
        """Distinct internal level values, from top to bottom."""
        return sorted(set(self.levels), reverse=True)

    @property
    def num_levels(self):
        return len(set(self.levels))

    def level_number(self, internal):
        """Relative level (0 = top) of an internal level value."""
        try:
            return self.internal_levels().index(internal)
        except ValueError:
            raise NoSuchLevel(internal)

    def internal_level_number(self, rel):
        levels = self.internal_levels()
        if not 0 <= rel < len(levels):
            raise NoSuchLevel(rel)
        return levels[rel]

    def vertex_rank(self, v):
        return self.level_number(self.level_of_vertex(v))

    def vertices_at_rank(self, rel):
        internal = self.internal_level_number(rel)
        return [v for v in range(self.num_vertices)
                if self.levels[v] == internal]

    def is_horizontal_edge(self, e):
        a, b = e
        return self.orders[a] == self.orders[b] == -1

    @property
    def prongs(self):
        """Map edge -> prong number; 0 exactly for horizontal edges."""
        return {e: (0 if self.is_horizontal_edge(e) else self.orders[e[0]] + 1)
                for e in self.edges}

    @property
    def ell(self):
        """lcm of the prongs over the non-horizontal edges (1 if none)."""
        ks = [k for k in self.prongs.values() if k > 0]
        return lcm(*ks) if ks else 1

    def marked_legs(self):
        """Legs that are not part of any edge, in vertex order."""
        edge_legs = {l for e in self.edges for l in e}
        return [l for ll in self.legs for l in ll if l not in edge_legs]

    def has_long_edge(self):
        return any(self.vertex_rank(self.vertex_of_leg(b))
                   - self.vertex_rank(self.vertex_of_leg(a)) > 1
                   for a, b in self.edges if not self.is_horizontal_edge((a, b)))

    # -- serialization / comparison -----------------------------------------

    def data(self):
        return (tuple(self.genera),
                tuple(tuple(l) for l in self.legs),
                tuple(self.edges),
                tuple(sorted(self.orders.items())),
                tuple(self.levels))

    def __eq__(self, other):
        return isinstance(other, LevelGraph) and self.data() == other.data()

    def __hash__(self):
        return hash(self.data())

    def __repr__(self):
        return (f"LevelGraph({self.genera},{self.legs},{self.edges},"
                f"{self.orders},{self.levels})")

    # -- squishing ----------------------------------------------------------

    def squish_horizontal(self, e):
        """Contract one horizontal edge, returning a new graph."""
        if e not in self.edges:
            e = (e[1], e[0])
        if e not in self.edges or not self.is_horizontal_edge(e):
            raise NotHorizontal(e)
        a, b = e
        va, vb = self.vertex_of_leg(a), self.vertex_of_leg(b)
        genera = list(self.genera)
        legs = [list(l) for l in self.legs]
        levels = list(self.levels)
        orders = dict(self.orders)
        edges = [f for f in self.edges if f != e]
        del orders[a]
        del orders[b]
        if va == vb:
            genera[va] += 1
            legs[va] = [l for l in legs[va] if l not in (a, b)]
        else:
            v1, v2 = min(va, vb), max(va, vb)
            genera[v1] += genera[v2]
            merged = [l for l in legs[v1] + legs[v2] if l not in (a, b)]
            legs[v1] = merged
            del genera[v2], legs[v2], levels[v2]
        return LevelGraph(genera, legs, edges, orders, levels)

    def squish_vertical(self, crossing):
        """Contract the level crossing between relative levels ``crossing``
        and ``crossing + 1`` in a single pass.

        Surviving legs keep their numbers; long edges over the crossing are
        preserved (they just get shorter).
        """
        levels = self.internal_levels()
        if not 0 <= crossing < len(levels) - 1:
            raise NoSuchCrossing(crossing)
        hi, lo = levels[crossing], levels[crossing + 1]
        contract = [
            (a, b) for a, b in self.edges
            if not self.is_horizontal_edge((a, b))
            and self.levels[self.vertex_of_leg(a)] == hi
            and self.levels[self.vertex_of_leg(b)] == lo
        ]
        # union-find over vertices
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in contract:
            ra, rb = find(self.vertex_of_leg(a)), find(self.vertex_of_leg(b))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups = {}
        for v in range(self.num_vertices):
            groups.setdefault(find(v), []).append(v)
        reps = sorted(groups)
        removed_legs = {l for e in contract for l in e}
        genera, legs, levels_new = [], [], []
        index = {}
        for new_i, r in enumerate(reps):
            members = groups[r]
            for v in members:
                index[v] = new_i
            extra = len([e for e in contract
                         if find(self.vertex_of_leg(e[0])) == r])
            extra -= len(members) - 1
            genera.append(sum(self.genera[v] for v in members) + extra)
            legs.append([l for v in members for l in self.legs[v]
                         if l not in removed_legs])
            lev = self.levels[members[0]]
            if lev == lo:
                lev = hi
            levels_new.append(lev)
        # raise any untouched vertex sitting at the squished level
        for i, lev in enumerate(levels_new):
            if lev == lo:
                levels_new[i] = hi
        edges = [e for e in self.edges if e not in contract]
        orders = {l: o for l, o in self.orders.items()
                  if l not in removed_legs}
        return LevelGraph(genera, legs, edges, orders, levels_new)

    def delta(self, i):
        """Two-level graph keeping only the i-th level crossing (1-based)."""
        n_cross = self.num_levels - 1
        if not 1 <= i <= n_cross:
            raise NoSuchCrossing(i)
        g = self
        for j in range(n_cross - 1, -1, -1):
            if j != i - 1:
                g = g.squish_vertical(j)
        return g

    # -- legality (global residue condition) --------------------------------

    def _adjacency(self, res_edges=None):
        """Adjacency of the underlying graph.

        Nodes are ('v', i) for graph vertices and ('res', k) for residue
        conditions; ``res_edges`` is a list of (condition index, leg) pairs.
        Horizontal and vertical edges are included alike.
        """
        adj = {('v', i): set() for i in range(self.num_vertices)}
        for a, b in self.edges:
            na = ('v', self.vertex_of_leg(a))
            nb = ('v', self.vertex_of_leg(b))
            adj[na].add(nb)
            adj[nb].add(na)
        for k, leg in (res_edges or []):
            nr = ('res', k)
            nv = ('v', self.vertex_of_leg(leg))
            adj.setdefault(nr, set()).add(nv)
            adj[nv].add(nr)
        return adj

    def is_inconvenient_vertex(self, v):
        """Genus-zero vertex carrying a zero too large for its poles."""
        if self.genera[v] != 0:
            return False
        orders = [self.orders[l] for l in self.legs[v]]
        if any(o == -1 for o in orders):
            return False
        poles = [-o for o in orders if o < -1]
        if not poles:
            return False
        bound = sum(p - 1 for p in poles) - 1
        return any(o > bound for o in orders if o >= 0)

    def _vertex_connections_up(self, v, res_edges):
        """Connection points from v into the graph at levels >= level(v).

        Returns a list of nodes (with multiplicity) that v's upward edges and
        residue memberships attach to.
        """
        rank_v = self.vertex_rank(v)
        out = []
        for a, b in self.edges:
            va, vb = self.vertex_of_leg(a), self.vertex_of_leg(b)
            if vb == v and va != v and self.vertex_rank(va) <= rank_v:
                out.append(('v', va))
            elif va == v and vb != v and self.vertex_rank(vb) == rank_v:
                out.append(('v', vb))
            elif va == v and vb == v and self.is_horizontal_edge((a, b)):
                out.append(('v', v))
        for k, leg in (res_edges or []):
            if self.vertex_of_leg(leg) == v:
                out.append(('res', k))
        return out

    def is_legal_vertex(self, v, free_pole_legs=(), res_edges=None):
        """Check one vertex against the (R-)global residue condition.

        ``free_pole_legs`` are legs carrying marked poles whose residue is
        unconstrained; ``res_edges`` attach conditioned poles to their
        condition nodes at the level above every level.

        An inconvenient vertex is legal if it lies on a cycle not dipping
        below its level, or if the graph at levels >= its own, deprived of
        the vertex, falls apart into at least two components adjacent to it
        that each contain a free pole (a free pole of the vertex itself
        counts as a dangling component).
        """
        if not self.is_inconvenient_vertex(v):
            return True
        res_edges = res_edges or []
        free_pole_legs = set(free_pole_legs)
        rank_v = self.vertex_rank(v)
        adj = {n: set(nb) for n, nb in self._adjacency(res_edges).items()}
        # free poles dangle as rays at the level above everything
        for l in free_pole_legs:
            ray = ('pole', l)
            vl = ('v', self.vertex_of_leg(l))
            adj.setdefault(ray, set()).add(vl)
            adj[vl].add(ray)
        node_v = ('v', v)
        nodes = {('v', w) for w in range(self.num_vertices)
                 if self.vertex_rank(w) <= rank_v and w != v}
        nodes |= {('res', k) for k, _ in res_edges}
        nodes |= {('pole', l) for l in free_pole_legs
                  if self.vertex_of_leg(l) != v}
        comps = connected_components(nodes, adj)
        targets = self._vertex_connections_up(v, res_edges)
        if node_v in targets:
            return True
        comp_of = {}
        for i, comp in enumerate(comps):
            for n in comp:
                comp_of[n] = i
        hit = [0] * len(comps)
        for t in targets:
            if t in comp_of:
                hit[comp_of[t]] += 1
        if any(h >= 2 for h in hit):
            return True
        # adjacent components containing a free pole, plus dangling rays at v
        escape = {comp_of[t] for t in targets
                  if t in comp_of and any(
                      n[0] == 'pole' for n in comps[comp_of[t]])}
        n_escape = len(escape)
        n_escape += sum(1 for l in free_pole_legs
                        if self.vertex_of_leg(l) == v)
        return n_escape >= 2

    def is_legal_edge(self, e, free_pole_legs=(), res_edges=None):
        """Horizontal-edge counterpart of the vertex check."""
        if not self.is_horizontal_edge(e):
            return True
        a, b = e
        va, vb = self.vertex_of_leg(a), self.vertex_of_leg(b)
        if va == vb:
            return True
        rank_e = self.vertex_rank(va)
        adj = self._adjacency(res_edges)
        # drop this one edge (as a single adjacency only if no parallel edge)
        parallel = sum(1 for f in self.edges if {
            self.vertex_of_leg(f[0]), self.vertex_of_leg(f[1])} == {va, vb})
        nodes = {('v', w) for w in range(self.num_vertices)
                 if self.vertex_rank(w) <= rank_e}
        nodes |= {('res', k) for k, _ in (res_edges or [])}
        if parallel >= 2:
            return True
        adj = {n: set(x for x in nb) for n, nb in adj.items()}
        adj[('v', va)].discard(('v', vb))
        adj[('v', vb)].discard(('v', va))
        comps = connected_components(nodes, adj)
        comp_a = next(c for c in comps if ('v', va) in c)
        if ('v', vb) in comp_a:
            return True
        comp_b = next(c for c in comps if ('v', vb) in c)
        for comp in (comp_a, comp_b):
            free = {l for l in free_pole_legs
                    if ('v', self.vertex_of_leg(l)) in comp}
            if not free:
                return False
        return True

    def is_legal(self, free_pole_legs=None, res_edges=None, quiet=True):
        """Check the global residue condition on all vertices and edges.

        Without arguments this is the classical check: every marked pole of
        order <= -2 counts as free.
        """
        if free_pole_legs is None:
            free_pole_legs = {l for l in self.marked_legs()
                              if self.orders[l] <= -2}
        for v in range(self.num_vertices):
            if not self.is_legal_vertex(v, free_pole_legs, res_edges):
                if not quiet:
                    print(f"Vertex {v} is illegal!")
                return False
        for e in self.edges:
            if self.is_horizontal_edge(e) and not self.is_legal_edge(
                    e, free_pole_legs, res_edges):
                if not quiet:
                    print(f"Edge {e} is illegal!")
                return False
        return True
