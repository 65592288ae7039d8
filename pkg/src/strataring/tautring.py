"""Tautological-ring operations: intersections, normal bundles, pullbacks.

Multiplication is the excess intersection formula: the product of classes
supported on two graphs is a sum over their common degenerations of the
pulled-back psi monomials, corrected by the common normal bundle whenever
the intersection is not transversal.  The normal bundle of a one-level
degeneration is assembled from the tautological line-bundle classes of the
adjacent levels and the weighted boundary sum obtained by splitting the
level.  Everything is memoized on the stratum, keyed by enhanced profiles
and pooled additive generators.
"""

from __future__ import annotations

from fractions import Fraction

from .clutching import clutch
from .errors import (
    Disconnected,
    InternalInconsistency,
    LegNotOnLevel,
    NotCodimOne,
    RedundantCondition,
)
from .tautclass import AdditiveGenerator, TautClass


class _Unit:
    """Dummy value for a transversal common normal bundle.

    Distinct from the class ONE: inside an ambient graph the unit of the
    product would be the ambient class itself, so transversality must be
    handled separately by the callers.
    """

    def __repr__(self):
        return "1"


UNIT = _Unit()

_EMPTY = ((), 0)


def _norm_ep(ep):
    return (tuple(ep[0]), ep[1])


class TautRingMixin:

    # -- generators and basic classes ------------------------------------------

    def additive_generator(self, enh_profile, leg_dict=None):
        ep = _norm_ep(enh_profile)
        key = (ep, tuple(sorted((leg_dict or {}).items())))
        pool = self._AGs.setdefault('_pool', {})
        if key not in pool:
            pool[key] = AdditiveGenerator(self, ep, leg_dict)
        return pool[key]

    def taut_from_graph(self, profile, component=0):
        return self.additive_generator((tuple(profile), component)).as_taut()

    @property
    def ZERO(self):
        return TautClass(self, [])

    @property
    def ONE(self):
        return self.taut_from_graph((), 0)

    def psi(self, l):
        """The psi class at the marked point l (a leg of the smooth graph)."""
        if self.n_components > 1:
            raise Disconnected("psi classes require a connected stratum")
        if l not in self.smooth_LG.dmp:
            raise LegNotOnLevel(f"no marked point at leg {l}")
        return self.additive_generator(_EMPTY, {l: 1}).as_taut()

    def psi_monomial(self, psis):
        """Product of psi classes from a dict of stratum points."""
        legs = {}
        for p, e in psis.items():
            leg = self.smooth_LG._dmp_inv[p]
            legs[leg] = legs.get(leg, 0) + e
        return self.additive_generator(_EMPTY, legs).as_taut()

    # -- xi via the psi/boundary relation ----------------------------------------

    def _xi_boundary_count(self, pt):
        """Number of boundary divisors with this point on their lower level."""
        count = 0
        for B in self.bics:
            leg = B._dmp_inv[pt]
            if B.LG.vertex_rank(B.LG.vertex_of_leg(leg)) == 1:
                count += 1
        return count

    @property
    def xi(self):
        if '_xi' not in self._AGs:
            self._AGs['_xi'] = self.xi_at_level(0, _EMPTY)
        return self._AGs['_xi']

    def xi_with_leg(self, point):
        leg = self.smooth_LG._dmp_inv[point]
        return self.xi_at_level(0, _EMPTY, leg=leg)

    # -- gluing a divisor of a level into a graph ----------------------------------

    def _glue_bic_at_level(self, ep, l, j):
        """Insert the j-th BIC of the standardised level l into the graph.

        Returns (new enhanced profile, automorphism factor, index of the
        inserted ambient BIC).
        """
        ep = _norm_ep(ep)
        key = (ep, l, j)
        cache = self._AGs.setdefault('_glue', {})
        if key in cache:
            return cache[key]
        p, c = ep
        if not p:
            result = (((j,), 0), Fraction(1), j)
            cache[key] = result
            return result
        d, leg_dict, L = self.splitting_info_at_level(ep, l)
        Bj = L.bics[j]
        dd = dict(d)
        if l == 0:
            dd['top'] = Bj
            ins = self.DG.top_to_bic(p[0])[j]
        elif l == len(p):
            dd['bottom'] = Bj
            ins = self.DG.bot_to_bic(p[-1])[j]
        else:
            dd['middle'] = Bj
            ep3 = self.three_level_profile_for_level(ep, l)
            ins = self.DG.middle_to_bic(ep3)[j]
        G2 = clutch(**dd)
        new_p = p[:l] + (ins,) + p[l:]
        for cc, H in enumerate(self.lookup(new_p)):
            if G2.is_isomorphic(H):
                break
        else:
            raise InternalInconsistency(
                f"glued graph not found in profile {new_p}")
        G = self.lookup_graph(p, c)
        autfac = Fraction(len(G2.automorphisms),
                          len(G.automorphisms) * len(Bj.automorphisms))
        result = ((new_p, cc), autfac, ins)
        cache[key] = result
        return result

    def _standardised_level(self, ep, l):
        ep = _norm_ep(ep)
        if not ep[0]:
            return self, dict(self.smooth_LG.dmp)
        _, leg_dict, L = self.splitting_info_at_level(ep, l)
        return L, leg_dict

    def xi_at_level(self, l, ep, leg=None):
        """The tautological line-bundle class of level l of the graph of ep,
        expressed on degenerations of that graph.

        The psi term is transported along the level identification; each
        boundary divisor of the level is glued in and weighted by the prong
        and automorphism comparison of the level projection.
        """
        ep = _norm_ep(ep)
        key = (ep, l, leg)
        cache = self._AGs.setdefault('_xi_at_level', {})
        if key in cache:
            return cache[key]
        L, leg_dict = self._standardised_level(ep, l)
        if leg is not None:
            if leg not in leg_dict:
                raise LegNotOnLevel(f"leg {leg} is not on level {l}")
            pt = leg_dict[leg]
        else:
            pt = min(L.all_points(),
                     key=lambda q: (L._xi_boundary_count(q), q))
        inv = {q: lg for lg, q in leg_dict.items()}
        m = L.point_order(pt)
        terms = [(Fraction(m + 1),
                  self.additive_generator(ep, {inv[pt]: 1}))]
        for j, Bj in enumerate(L.bics):
            bleg = Bj._dmp_inv[pt]
            if Bj.LG.vertex_rank(Bj.LG.vertex_of_leg(bleg)) != 1:
                continue
            new_ep, autfac, ins = self._glue_bic_at_level(ep, l, j)
            coeff = -self.bics[ins].ell * autfac
            terms.append((coeff, self.additive_generator(new_ep)))
        result = TautClass(self, terms)
        cache[key] = result
        return result

    def calL(self, ep=_EMPTY, l=0):
        """The weighted boundary sum obtained by splitting level l."""
        ep = _norm_ep(ep)
        key = (ep, l)
        cache = self._AGs.setdefault('_calL', {})
        if key in cache:
            return cache[key]
        L, _ = self._standardised_level(ep, l)
        terms = []
        for j in range(len(L.bics)):
            new_ep, autfac, ins = self._glue_bic_at_level(ep, l, j)
            terms.append((self.bics[ins].ell * autfac,
                          self.additive_generator(new_ep)))
        result = TautClass(self, terms)
        cache[key] = result
        return result

    # -- normal bundles --------------------------------------------------------------

    def _normal_bundle_raw(self, ep, ambient=_EMPTY):
        ep, ambient = _norm_ep(ep), _norm_ep(ambient)
        p, pa = ep[0], ambient[0]
        extra = [x for x in p if x not in set(pa)]
        if len(extra) != 1 or not self.is_degeneration(ep, ambient):
            raise NotCodimOne(f"{ep} is not codim one over {ambient}")
        i = p.index(extra[0])
        ell = self.bics[p[i]].ell
        nb = (-self.xi_at_level(i, ep) - self.calL(ep, i)
              + self.xi_at_level(i + 1, ep))
        return Fraction(1, ell) * nb

    def normal_bundle(self, ep, ambient=_EMPTY):
        """First Chern class of the normal bundle of the graph of ep inside
        the ambient graph."""
        ep = _norm_ep(ep)
        key = (ep, _norm_ep(ambient))
        cache = self._AGs.setdefault('_nb', {})
        if key not in cache:
            raw = self._normal_bundle_raw(ep, ambient)
            cache[key] = self.gen_pullback_taut(raw, ep, ep)
        return cache[key]

    def cnb(self, ep1, ep2, ambient=_EMPTY):
        """Common normal bundle: the product of the normal bundles of all
        codimension-one common undegenerations, pulled back to the minimal
        common undegeneration; UNIT if the intersection is transversal."""
        ep1, ep2, ambient = _norm_ep(ep1), _norm_ep(ep2), _norm_ep(ambient)
        key = (ep1, ep2, ambient)
        cache = self._AGs.setdefault('_cnb', {})
        if key in cache:
            return cache[key]
        min_com = self.minimal_common_undegeneration(ep1, ep2)
        if min_com == ambient:
            result = UNIT
        else:
            factors = []
            for epp in self.codim_one_common_undegenerations(
                    ep1, ep2, ambient):
                raw = self._normal_bundle_raw(epp, ambient)
                factors.append(self.gen_pullback_taut(raw, min_com, epp))
            if not factors:
                raise InternalInconsistency(
                    f"no codim-one common undegeneration for {ep1}, {ep2} "
                    f"over {ambient}")
            result = factors[0]
            for f in factors[1:]:
                result = self.intersection(result, f, min_com)
        cache[key] = result
        return result

    # -- pullback ----------------------------------------------------------------------

    def gen_pullback(self, A, ep_target, ambient=_EMPTY):
        """Pull an additive generator back to its intersection with the
        graph of ep_target, inside ambient."""
        ep_target, ambient = _norm_ep(ep_target), _norm_ep(ambient)
        key = (A, ep_target, ambient)
        cache = self._AGs.setdefault('_pullback', {})
        if key in cache:
            return cache[key]
        degs = self.common_degenerations(A.enh_profile, ep_target)
        if not degs:
            result = self.ZERO
        else:
            nb = self.cnb(A.enh_profile, ep_target, ambient)
            pulled = [A.pull_back(Pi) for Pi in degs]
            total = TautClass(self, [t for T in pulled for t in T.psi_list])
            if nb is UNIT:
                result = total
            else:
                min_com = self.minimal_common_undegeneration(
                    A.enh_profile, ep_target)
                result = self.intersection(total, nb, min_com)
        cache[key] = result
        return result

    def gen_pullback_taut(self, T, ep_target, ambient=_EMPTY):
        parts = []
        for c, A in T.psi_list:
            parts.append(c * self.gen_pullback(A, ep_target, ambient))
        return self.ELGsum(parts)

    # -- intersection ---------------------------------------------------------------------

    @staticmethod
    def _direct_product(T1, T2):
        """Product of two classes supported on one and the same graph."""
        X = T1.X
        terms = []
        for c1, A1 in T1.psi_list:
            for c2, A2 in T2.psi_list:
                merged = dict(A1.leg_dict)
                for l, e in A2.leg_dict.items():
                    merged[l] = merged.get(l, 0) + e
                terms.append((c1 * c2,
                              X.additive_generator(A1.enh_profile, merged)))
        return TautClass(X, terms)

    def intersection_AG(self, A1, A2, ambient=_EMPTY):
        """Excess intersection of two additive generators inside ambient."""
        ambient = _norm_ep(ambient)
        key = tuple(sorted([A1._key, A2._key])) + (ambient,)
        cache = self._AGs.setdefault('_intAG', {})
        if key in cache:
            return cache[key]
        ep1, ep2 = A1.enh_profile, A2.enh_profile
        degs = self.common_degenerations(ep1, ep2)
        if not degs:
            result = self.ZERO
        else:
            nb = self.cnb(ep1, ep2, ambient)
            min_com = None
            if nb is not UNIT:
                min_com = self.minimal_common_undegeneration(ep1, ep2)
            parts = []
            for Pi in degs:
                t = self._direct_product(A1.pull_back(Pi), A2.pull_back(Pi))
                if nb is UNIT:
                    parts.append(t)
                else:
                    parts.append(self.intersection(t, nb, min_com))
            result = self.ELGsum(parts)
        cache[key] = result
        return result

    def intersection(self, T1, T2, ambient=_EMPTY):
        """Product of two tautological classes inside an ambient graph."""
        assert T1.X is self and T2.X is self
        dim_bound = self.dim()
        parts = []
        for c1, A1 in T1.psi_list:
            for c2, A2 in T2.psi_list:
                # a term of the product has codimension at least the size of
                # the merged profile, and at least the combined psi degree
                lower = len(set(A1.enh_profile[0]) | set(A2.enh_profile[0]))
                if lower + A1.psi_degree + A2.psi_degree > dim_bound:
                    continue
                parts.append(c1 * c2 * self.intersection_AG(A1, A2, ambient))
        return self.ELGsum(parts)

    def pow(self, T, k, ambient=_EMPTY):
        if k == 0:
            return self.ONE if _norm_ep(ambient) == _EMPTY \
                else self.taut_from_graph(*_norm_ep(ambient))
        result = T
        for _ in range(k - 1):
            result = self.intersection(result, T, ambient)
        return result

    def ELGsum(self, classes):
        terms = []
        for T in classes:
            if T == 0:
                continue
            terms.extend(T.psi_list)
        return TautClass(self, terms)

    # -- powers of xi on a level ---------------------------------------------------------

    def xi_at_level_pow(self, l, ep, k):
        ep = _norm_ep(ep)
        key = (ep, l, k)
        cache = self._AGs.setdefault('_xipow', {})
        if key in cache:
            return cache[key]
        if k == 0:
            result = self.taut_from_graph(*ep)
        else:
            xi = self.xi_at_level(l, ep)
            result = xi
            for _ in range(k - 1):
                result = self.intersection(result, xi, ep)
        cache[key] = result
        return result

    def top_xi_at_level(self, ep, l, cache=None):
        """Evaluated top power of xi on the standardised level; persistently
        cached by the normalized level stratum."""
        from . import evaluation
        ep = _norm_ep(ep)
        L, _ = self._standardised_level(ep, l)
        return _top_xi_of_stratum(L, cache or evaluation.DEFAULT_CACHE)

    # -- the class of a residue condition --------------------------------------------------

    def res_stratum_class(self, cond):
        """Divisor class of the sub-stratum cut out by one extra residue
        condition.

        The boundary terms are the divisors on which the condition becomes
        automatic: those whose top level forces the residues of the
        condition's upper-level poles to vanish (in particular all divisors
        with every conditioned pole on the lower level).
        """
        from . import linalg
        cond = sorted(tuple(p) for p in cond)
        rows = self.smooth_LG.full_residue_matrix()
        poles = self.poles()
        new_row = [1 if p in set(cond) else 0 for p in poles]
        if linalg.in_row_span(new_row, rows):
            raise RedundantCondition(cond)
        cls = -self.xi
        for i, B in enumerate(self.bics):
            top_pts = []
            for p in cond:
                leg = B._dmp_inv[p]
                if B.LG.vertex_rank(B.LG.vertex_of_leg(leg)) == 0:
                    top_pts.append(B.top.leg_dict[leg])
            if top_pts:
                T = B.top
                tpoles = T.poles()
                row = [1 if q in set(top_pts) else 0 for q in tpoles]
                if not linalg.in_row_span(
                        row, T.smooth_LG.full_residue_matrix()):
                    continue
            cls = cls - B.ell * self.taut_from_graph((i,), 0)
        return cls

    # -- feature-flagged surface ------------------------------------------------------------

    def c1_E(self):
        """First Chern class of the log cotangent bundle.

        The coefficient scheme lives outside this package's scope; exposed
        as a stub so callers can detect the absence.
        """
        return NotImplemented


def _top_xi_of_stratum(L, cache):
    """Evaluate the top self-intersection of xi on one level stratum."""
    from . import evaluation
    d = L.dim()
    if d < 0:
        return Fraction(0)
    if d == 0:
        return Fraction(1)
    sig0 = L.sig_list[0]
    if (L.n_components == 1 and not L.res_cond and sig0.p == 0
            and d >= 2 * sig0.g):
        return Fraction(0)
    key = evaluation.stratum_dict_key(L)
    hit = cache.xi_lookup(key)
    if hit is not None:
        return hit
    P = evaluation.pooled_stratum([s.sig for s in L.sig_list], L.res_cond)
    value = P.pow(P.xi, d).evaluate(cache=cache)
    cache.xi_store(key, value)
    return value
