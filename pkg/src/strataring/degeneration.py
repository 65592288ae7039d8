"""Profiles, the degeneration graph, and graph lookup.

A profile names an isomorphism class of boundary graphs by the tuple of
two-level graphs (indices into ``X.bics``) obtained by contracting all level
crossings but one.  Since a profile can contain several isomorphism classes,
an *enhanced profile* ``(profile, component)`` is the canonical name of a
graph.  All queries about degenerations are phrased in terms of enhanced
profiles; the underlying graphs are only consulted through the memoized
representatives returned by ``lookup``.
"""

from __future__ import annotations

from .clutching import clutch
from .errors import InternalInconsistency, NoSuchLevel, NotThreeLevel


def _is_subsequence(small, big):
    it = iter(big)
    return all(x in it for x in small)


class DegenerationGraph:
    """The maps sending two-level graphs of a level stratum of a BIC to
    two-level graphs of the ambient stratum."""

    def __init__(self, X):
        self.X = X
        self._top = {}
        self._bot = {}
        self._middle = {}

    def _match_bic(self, G):
        key = G.invariant_key()
        for k, B in enumerate(self.X.bics):
            if B.invariant_key() == key and G.is_isomorphic(B):
                return k
        raise InternalInconsistency(
            f"no BIC of the stratum matches the squished graph {G!r}")

    def top_to_bic(self, i):
        if i not in self._top:
            B = self.X.bics[i]
            d = B.split()
            out = {}
            for j, Bt in enumerate(B.top.bics):
                dd = dict(d)
                dd['top'] = Bt
                G = clutch(**dd)
                out[j] = self._match_bic(G.delta(1))
            self._top[i] = out
        return self._top[i]

    def bot_to_bic(self, i):
        if i not in self._bot:
            B = self.X.bics[i]
            d = B.split()
            out = {}
            for j, Bb in enumerate(B.bot.bics):
                dd = dict(d)
                dd['bottom'] = Bb
                G = clutch(**dd)
                out[j] = self._match_bic(G.delta(2))
            self._bot[i] = out
        return self._bot[i]

    def middle_to_bic(self, ep3):
        """For a three-level enhanced profile: map BICs of the middle level
        stratum to BICs of the ambient stratum."""
        key = (tuple(ep3[0]), ep3[1])
        if key not in self._middle:
            d = self.X.doublesplit(ep3)
            M = d['middle']
            out = {}
            for j, Bm in enumerate(M.bics):
                dd = dict(d)
                dd['middle'] = Bm
                G = clutch(**dd)
                out[j] = self._match_bic(G.delta(2))
            self._middle[key] = out
        return self._middle[key]

    @staticmethod
    def _invert(d):
        inv = {}
        for k, v in d.items():
            inv.setdefault(v, []).append(k)
        return {v: sorted(ks) for v, ks in inv.items()}

    def top_to_bic_inv(self, i):
        return self._invert(self.top_to_bic(i))

    def bot_to_bic_inv(self, i):
        return self._invert(self.bot_to_bic(i))


class DegenerationMixin:
    """Profile bookkeeping, mixed into GeneralisedStratum."""

    # -- BICs and the degeneration graph --------------------------------------

    @property
    def bics(self):
        if self._bics is None:
            from .bic import generate_bics
            self._bics = generate_bics(self)
        return self._bics

    @property
    def DG(self):
        if self._DG is None:
            self._DG = DegenerationGraph(self)
        return self._DG

    def lies_over(self, i, j):
        """Is (i, j) a non-empty profile?"""
        return j in set(self.DG.bot_to_bic(i).values())

    # -- profiles ----------------------------------------------------------------

    def _sort_profile(self, p):
        """Reorder a set of BIC indices into profile order, or None."""
        out = []
        for x in p:
            if x in out:
                return None
            pos = len(out)
            for k, y in enumerate(out):
                if self.lies_over(x, y):
                    pos = k
                    break
            out.insert(pos, x)
        for a, b in zip(out, out[1:]):
            if not self.lies_over(a, b):
                return None
        return tuple(out)

    @property
    def lookup_list(self):
        if self._lookup_list is None:
            if not self.bics:
                self._lookup_list = [[()]]
                return self._lookup_list
            lst = [[()], sorted((i,) for i in range(len(self.bics)))]
            while True:
                new = set()
                for p in lst[-1]:
                    for v in set(self.DG.top_to_bic(p[0]).values()):
                        if v not in p:
                            new.add((v,) + p)
                    if len(p) > 1:
                        for v in set(self.DG.bot_to_bic(p[-1]).values()):
                            if v not in p:
                                new.add(p + (v,))
                if not new:
                    break
                lst.append(sorted(new))
            self._lookup_list = lst
        return self._lookup_list

    def lookup(self, profile):
        """All graphs in a profile, one per isomorphism class, memoized.

        The profile may be given in any order; an unrealizable profile gives
        the empty list.  Repeated calls return identical objects.
        """
        canonical = self._sort_profile(tuple(profile))
        if canonical is None:
            return []
        if canonical in self._lookup:
            return self._lookup[canonical]
        if len(canonical) == 0:
            result = [self.smooth_LG]
        elif len(canonical) == 1:
            result = [self.bics[canonical[0]]]
        else:
            result = self._build_profile_graphs(canonical)
        self._lookup[canonical] = result
        return result

    def _build_profile_graphs(self, p):
        B = self.bics[p[0]]
        d = B.split()
        inv = self.DG.bot_to_bic_inv(p[0])
        bot_lists = [[]]
        for j in p[1:]:
            occ = inv.get(j)
            if not occ:
                return []
            bot_lists = [bl + [o] for bl in bot_lists for o in occ]
        candidates = []
        for bl in bot_lists:
            for H in B.bot.lookup(tuple(bl)):
                dd = dict(d)
                dd['bottom'] = H
                candidates.append(clutch(**dd))
        classes, buckets = [], {}
        for G in candidates:
            key = G.invariant_key()
            for rep in buckets.get(key, []):
                if G.is_isomorphic(rep):
                    break
            else:
                buckets.setdefault(key, []).append(G)
                classes.append(G)
        classes.sort(key=lambda G: (G.invariant_key(), G.LG.data()))
        return classes

    def lookup_graph(self, profile, component=0):
        profile = tuple(profile)
        if self._sort_profile(profile) != profile:
            raise KeyError(f"{profile} is not an ordered profile")
        graphs = self.lookup(profile)
        if not graphs:
            raise KeyError(f"profile {profile} is empty")
        return graphs[component]

    def enhanced_profiles_of_length(self, l):
        ll = self.lookup_list
        if l >= len(ll):
            return ()
        return tuple((p, c) for p in ll[l]
                     for c in range(len(self.lookup(p))))

    # -- degeneration queries -------------------------------------------------------

    def squish(self, ep, crossing):
        """Contract one level crossing, in enhanced-profile language."""
        p, c = ep
        new_p = p[:crossing] + p[crossing + 1:]
        G = self.lookup_graph(p, c).squish_vertical(crossing)
        for cc, H in enumerate(self.lookup(new_p)):
            if G.is_isomorphic(H):
                return (new_p, cc)
        raise InternalInconsistency(f"squish of {ep} not found in {new_p}")

    def _squish_to_profile(self, ep, q):
        """The undegeneration of ep with profile q, as an enhanced profile."""
        p, c = ep
        G = self.lookup_graph(p, c)
        qset = set(q)
        for i in range(len(p) - 1, -1, -1):
            if p[i] not in qset:
                G = G.squish_vertical(i)
        for cc, H in enumerate(self.lookup(tuple(q))):
            if G.is_isomorphic(H):
                return (tuple(q), cc)
        raise InternalInconsistency(f"{ep} does not squish into {q}")

    def explicit_leg_maps(self, ep_small, ep_big):
        """All leg maps (small-graph leg -> big-graph leg) realizing the
        undegeneration; [] if ep_big does not degenerate from ep_small."""
        key = (tuple(ep_small[0]), ep_small[1], tuple(ep_big[0]), ep_big[1])
        cache = self._AGs.setdefault('_legmaps', {})
        if key in cache:
            return cache[key]
        p_small, c_small = ep_small
        p_big, c_big = ep_big
        result = []
        if _is_subsequence(p_small, p_big):
            G = self.lookup_graph(p_big, c_big)
            small_set = set(p_small)
            for i in range(len(p_big) - 1, -1, -1):
                if p_big[i] not in small_set:
                    G = G.squish_vertical(i)
            target = self.lookup_graph(p_small, c_small)
            for _, legmap in G.isomorphisms(target):
                result.append({t: s for s, t in legmap.items()})
        cache[key] = result
        return result

    def is_degeneration(self, ep1, ep2):
        """Does ep1 degenerate from ep2 (so ep2 is an undegeneration)?"""
        if tuple(ep1[0]) == tuple(ep2[0]):
            return ep1[1] == ep2[1]
        if not _is_subsequence(ep2[0], ep1[0]):
            return False
        return bool(self.explicit_leg_maps(ep2, ep1))

    def merge_profiles(self, p, q):
        """Merge two profiles along the partial order; None if impossible."""
        union = set(p) | set(q)
        ll = self.lookup_list
        if len(union) >= len(ll):
            return None
        for r in ll[len(union)]:
            if set(r) == union and _is_subsequence(p, r) \
                    and _is_subsequence(q, r):
                return r
        return None

    def common_degenerations(self, ep1, ep2):
        """All enhanced profiles degenerating from both arguments, supported
        on the merged profile."""
        q = self.merge_profiles(ep1[0], ep2[0])
        if q is None:
            return []
        return [(q, c) for c in range(len(self.lookup(q)))
                if self.is_degeneration((q, c), ep1)
                and self.is_degeneration((q, c), ep2)]

    def codim_one_degenerations(self, ep):
        p, _ = ep
        ll = self.lookup_list
        if len(p) + 1 >= len(ll):
            return []
        out = []
        for q in ll[len(p) + 1]:
            if not _is_subsequence(p, q):
                continue
            for c in range(len(self.lookup(q))):
                if self.is_degeneration((q, c), ep):
                    out.append((q, c))
        return out

    def codim_one_common_undegenerations(self, ep1, ep2, ambient):
        return [epp for epp in self.codim_one_degenerations(ambient)
                if self.is_degeneration(ep1, epp)
                and self.is_degeneration(ep2, epp)]

    def minimal_common_undegeneration(self, ep1, ep2):
        """The graph of minimal dimension both arguments degenerate from."""
        p1, p2 = ep1[0], ep2[0]
        s2 = set(p2)
        q = tuple(x for x in p1 if x in s2)
        epm = self._squish_to_profile(ep1, q)
        if not self.is_degeneration(ep2, epm):
            raise InternalInconsistency(
                f"{ep1} and {ep2} have no common undegeneration in {q}")
        return epm

    def three_level_profile_for_level(self, ep, l):
        """Enhanced profile of the three-level graph around level l."""
        p, _ = ep
        if not 0 < l < len(p):
            raise NoSuchLevel(l)
        return self._squish_to_profile(ep, (p[l - 1], p[l]))

    # -- splitting --------------------------------------------------------------------

    def _first_leg_map(self, G, target):
        iso = next(G.isomorphisms(target), None)
        if iso is None:
            raise InternalInconsistency(
                f"{G!r} is not isomorphic to its reference {target!r}")
        return iso[1]

    def _undegeneration_map(self, G, keep, bic_index):
        """Leg map of G's surviving legs onto the BIC keeping crossing
        ``keep`` only."""
        H = G
        for i in range(G.num_levels - 2, -1, -1):
            if i != keep:
                H = H.squish_vertical(i)
        return self._first_leg_map(H, self.bics[bic_index])

    def doublesplit(self, ep):
        """Splitting data of a three-level graph around its middle level."""
        p, c = ep
        if len(p) != 2:
            raise NotThreeLevel(ep)
        key = (tuple(p), c)
        cache = self._AGs.setdefault('_doublesplit', {})
        if key not in cache:
            cache[key] = self._split_at_level((tuple(p), c), 1)
        return cache[key]

    def _middle_leg_map(self, ep, l):
        """Legs of the graph on level l -> points of the standardised middle."""
        p, c = ep
        G = self.lookup_graph(p, c)
        LG = G.LG
        ep3 = self.three_level_profile_for_level(ep, l)
        H = self.lookup_graph(*ep3)
        M = H.level(1)
        if (tuple(p), c) == (tuple(ep3[0]), ep3[1]):
            return M, dict(M.leg_dict)
        H3 = G
        keepset = {l - 1, l}
        for i in range(len(p) - 1, -1, -1):
            if i not in keepset:
                H3 = H3.squish_vertical(i)
        iota3 = self._first_leg_map(H3, H)
        mid = {leg: M.leg_dict[iota3[leg]] for leg in iota3
               if LG.vertex_rank(LG.vertex_of_leg(leg)) == l}
        return M, mid

    def _split_at_level(self, ep, l):
        p, c = ep
        G = self.lookup_graph(p, c)
        n_levels = len(p) + 1
        if not 0 <= l < n_levels:
            raise NoSuchLevel(l)
        LG = G.LG

        def rank_of_leg(leg):
            return LG.vertex_rank(LG.vertex_of_leg(leg))

        if l == 0 or l == n_levels - 1:
            keep = 0 if l == 0 else l - 1
            bic = p[0] if l == 0 else p[-1]
            iota = self._undegeneration_map(G, keep, bic)
            T = self.bics[bic].top
            B = self.bics[bic].bot
            cut = keep + 1  # ranks >= cut go to the bottom piece
            top_map = {leg: T.leg_dict[iota[leg]] for leg in iota
                       if rank_of_leg(leg) < cut}
            bot_map = {leg: B.leg_dict[iota[leg]] for leg in iota
                       if rank_of_leg(leg) >= cut}
            top_piece = G.subgraph_at_ranks(set(range(cut)), T, top_map)
            bot_piece = G.subgraph_at_ranks(
                set(range(cut, n_levels)), B, bot_map)
            clutch_dict = {}
            for a, b in LG.edges:
                if rank_of_leg(a) < cut <= rank_of_leg(b):
                    clutch_dict[top_map[a]] = bot_map[b]
            emb_top, emb_bot = {}, {}
            for leg, q in G.dmp.items():
                if rank_of_leg(leg) < cut:
                    emb_top[q] = top_map[leg]
                else:
                    emb_bot[q] = bot_map[leg]
            return {'X': self, 'top': top_piece, 'bottom': bot_piece,
                    'clutch_dict': clutch_dict,
                    'emb_dict_top': emb_top, 'emb_dict_bot': emb_bot}
        # interior level: three pieces
        M, mid_map = self._middle_leg_map(ep, l)
        T = self.bics[p[l - 1]].top
        iota_t = self._undegeneration_map(G, l - 1, p[l - 1])
        top_map = {leg: T.leg_dict[iota_t[leg]] for leg in iota_t
                   if rank_of_leg(leg) < l}
        B = self.bics[p[l]].bot
        iota_b = self._undegeneration_map(G, l, p[l])
        bot_map = {leg: B.leg_dict[iota_b[leg]] for leg in iota_b
                   if rank_of_leg(leg) > l}
        top_piece = G.subgraph_at_ranks(set(range(l)), T, top_map)
        bot_piece = G.subgraph_at_ranks(
            set(range(l + 1, n_levels)), B, bot_map)
        cd, cdl, cdlong = {}, {}, {}
        for a, b in LG.edges:
            ra, rb = rank_of_leg(a), rank_of_leg(b)
            if ra < l and rb == l:
                cd[top_map[a]] = mid_map[b]
            elif ra == l and rb > l:
                cdl[mid_map[a]] = bot_map[b]
            elif ra < l and rb > l:
                cdlong[top_map[a]] = bot_map[b]
        emb_top, emb_mid, emb_bot = {}, {}, {}
        for leg, q in G.dmp.items():
            r = rank_of_leg(leg)
            if r < l:
                emb_top[q] = top_map[leg]
            elif r == l:
                emb_mid[q] = mid_map[leg]
            else:
                emb_bot[q] = bot_map[leg]
        return {'X': self, 'top': top_piece, 'bottom': bot_piece,
                'middle': M,
                'emb_dict_top': emb_top, 'emb_dict_mid': emb_mid,
                'emb_dict_bot': emb_bot,
                'clutch_dict': cd, 'clutch_dict_lower': cdl,
                'clutch_dict_long': cdlong}

    def splitting_info_at_level(self, ep, l):
        """Splitting data plus the standardised level stratum at level l.

        Returns (splitting dict, leg dict, level stratum); the leg dict maps
        the legs of the graph on level l to the points of the standardised
        level (top of the first BIC, bottom of the last, or the middle level
        of the bounding three-level graph).
        """
        p, c = ep
        key = (tuple(p), c, l)
        cache = self._AGs.setdefault('_splits', {})
        if key in cache:
            return cache[key]
        n_levels = len(p) + 1
        if not 0 <= l < n_levels:
            raise NoSuchLevel(l)
        d = self._split_at_level((tuple(p), c), l)
        if l == 0:
            L = self.bics[p[0]].top
            leg_dict = dict(d['top'].dmp)
        elif l == n_levels - 1:
            L = self.bics[p[-1]].bot
            leg_dict = dict(d['bottom'].dmp)
        else:
            L = d['middle']
            _, leg_dict = self._middle_leg_map((tuple(p), c), l)
        result = (d, leg_dict, L)
        cache[key] = result
        return result

    def sub_graph_from_level(self, ep, l, direction):
        """The subgraph above or below level l of the graph of ``ep``,
        realized in the level stratum of the bounding BIC."""
        p, _ = ep
        n_levels = len(p) + 1
        if direction == 'above':
            if not 1 <= l < n_levels:
                raise NoSuchLevel(f"no subgraph above level {l}")
            return self._split_at_level(ep, l)['top'] if l < n_levels - 1 \
                else self._split_at_level(ep, l)['top']
        if direction == 'below':
            if not 0 <= l < n_levels - 1:
                raise NoSuchLevel(f"no subgraph below level {l}")
            return self._split_at_level(ep, l)['bottom']
        raise ValueError(f"unknown direction {direction!r}")
