"""Additive generators and tautological classes.

An additive generator is a psi monomial on (the levels of) one boundary
graph, named by its enhanced profile; a tautological class is a formal
rational linear combination of additive generators.  Additive generators are
pooled per stratum and hashable; tautological classes are reduced after
every operation and are not hashable.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod

from .errors import OracleMiss


class AdditiveGenerator:
    """A psi monomial on one boundary graph.

    Use ``X.additive_generator(...)`` instead of the constructor so that
    equal generators are the same object.
    """

    def __init__(self, X, enh_profile, leg_dict=None):
        self.X = X
        profile, comp = enh_profile
        self.enh_profile = (tuple(profile), comp)
        self.leg_dict = {int(l): int(e)
                         for l, e in (leg_dict or {}).items() if e}
        self._key = (self.enh_profile,
                     tuple(sorted(self.leg_dict.items())))
        self._stack_factor = None

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, AdditiveGenerator) and \
            self._key == other._key and self.X is other.X

    @property
    def graph(self):
        return self.X.lookup_graph(*self.enh_profile)

    @property
    def codim(self):
        return len(self.enh_profile[0])

    @property
    def psi_degree(self):
        return sum(self.leg_dict.values())

    @property
    def degree(self):
        return self.codim + self.psi_degree

    def psi_degree_at_level(self, l):
        G = self.graph
        return sum(e for leg, e in self.leg_dict.items()
                   if G.LG.vertex_rank(G.LG.vertex_of_leg(leg)) == l)

    def vanishes_by_dimension(self):
        """True if some level carries more psi than its dimension allows."""
        if self.degree > self.X.dim():
            return True
        G = self.graph
        for l in range(G.num_levels):
            if self.psi_degree_at_level(l) > G.level(l).dim():
                return True
        return False

    @property
    def stack_factor(self):
        if self._stack_factor is None:
            G = self.graph
            num = prod(G.LG.prongs.values()) if G.LG.edges else 1
            den = prod(self.X.bics[i].ell for i in self.enh_profile[0])
            den *= len(G.automorphisms)
            self._stack_factor = Fraction(num, den)
        return self._stack_factor

    def evaluate(self, cache=None):
        """Integrate against the stratum class; zero unless top degree."""
        from .evaluation import level_value
        if self.degree != self.X.dim():
            return Fraction(0)
        G = self.graph
        total = self.stack_factor
        for l in range(G.num_levels):
            L = G.level(l)
            psis = {}
            for leg, e in self.leg_dict.items():
                if G.LG.vertex_rank(G.LG.vertex_of_leg(leg)) == l:
                    psis[L.leg_dict[leg]] = psis.get(L.leg_dict[leg], 0) + e
            v = level_value(L, psis, cache)
            if v == 0:
                return Fraction(0)
            total *= v
        return total

    def pull_back(self, ep_target):
        """Average of the transports along all undegeneration leg maps."""
        maps = self.X.explicit_leg_maps(self.enh_profile, ep_target)
        if not maps:
            return self.X.ZERO
        coeff = Fraction(1, len(maps))
        terms = []
        for m in maps:
            new_legs = {}
            for leg, e in self.leg_dict.items():
                tgt = m[leg]
                new_legs[tgt] = new_legs.get(tgt, 0) + e
            terms.append((coeff,
                          self.X.additive_generator(ep_target, new_legs)))
        return TautClass(self.X, terms)

    def as_taut(self):
        return TautClass(self.X, [(Fraction(1), self)])

    def __repr__(self):
        return (f"AdditiveGenerator(X={self.X!r},"
                f"enh_profile={self.enh_profile},leg_dict={self.leg_dict})")

    def __str__(self):
        G = self.graph
        parts = []
        for leg in sorted(self.leg_dict):
            lvl = G.LG.vertex_rank(G.LG.vertex_of_leg(leg))
            parts.append(f"Psi class {leg} with exponent "
                         f"{self.leg_dict[leg]} on level {lvl}")
        parts.append(f"Graph {self.enh_profile}")
        return " * ".join(parts)

    def __mul__(self, other):
        if isinstance(other, AdditiveGenerator):
            if other.enh_profile != self.enh_profile:
                raise ValueError(
                    "generators on different graphs; use intersection_AG")
            merged = dict(self.leg_dict)
            for l, e in other.leg_dict.items():
                merged[l] = merged.get(l, 0) + e
            return self.X.additive_generator(
                self.enh_profile, merged).as_taut()
        return self.as_taut() * other

    __rmul__ = __mul__


class TautClass:
    """A formal sum of additive generators with rational coefficients."""

    def __init__(self, X, psi_list, reduce=True):
        self.X = X
        self.psi_list = [(Fraction(c), A) for c, A in psi_list]
        if reduce:
            self.reduce()

    def reduce(self):
        combined = {}
        for c, A in self.psi_list:
            if c == 0:
                continue
            combined[A] = combined.get(A, Fraction(0)) + c
        self.psi_list = [
            (c, A) for A, c in combined.items()
            if c != 0 and not A.vanishes_by_dimension()]
        self.psi_list.sort(key=lambda t: t[1]._key)
        return self

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        if other == 0:
            return self
        if not isinstance(other, TautClass):
            return NotImplemented
        assert self.X is other.X
        return TautClass(self.X, self.psi_list + other.psi_list)

    __radd__ = __add__

    def __neg__(self):
        return TautClass(self.X, [(-c, A) for c, A in self.psi_list],
                         reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TautClass):
            return self.X.intersection(self, other)
        if isinstance(other, AdditiveGenerator):
            return self.X.intersection(self, other.as_taut())
        return TautClass(self.X, [(c * other, A) for c, A in self.psi_list])

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        return self.X.pow(self, k)

    def __eq__(self, other):
        if isinstance(other, TautClass):
            return self.X is other.X and \
                sorted(self.psi_list, key=lambda t: t[1]._key) == \
                sorted(other.psi_list, key=lambda t: t[1]._key)
        if other == 0:
            return not self.psi_list
        return NotImplemented

    # -- inspection -------------------------------------------------------------

    def degree(self, d):
        """The degree-d part."""
        return TautClass(self.X, [(c, A) for c, A in self.psi_list
                                  if A.degree == d])

    def is_equidimensional(self):
        return len({A.degree for _, A in self.psi_list}) <= 1

    def list_by_degree(self):
        return [self.degree(d) for d in range(self.X.dim() + 1)]

    def evaluate(self, quiet=True, cache=None):
        total = Fraction(0)
        for c, A in self.psi_list:
            total += c * A.evaluate(cache)
        return total

    def __repr__(self):
        return f"TautClass(X={self.X!r},psi_list={self.psi_list})"

    def __str__(self):
        out = f"Tautological class on {self.X}\n\n"
        for c, A in self.psi_list:
            out += f"{c} * {A} +\n"
        return out
