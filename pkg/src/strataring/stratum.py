"""Generalised strata: products of signatures with residue conditions.

A generalised stratum owns every cache used downstream: the list of its
two-level boundary graphs, the degeneration maps between them, the lookup
table of profiles and the pool of additive generators.  All of these are
built lazily on first access and are read-only afterwards.
"""

from __future__ import annotations

from . import linalg
from .degeneration import DegenerationMixin
from .errors import Disconnected, InvalidResidueCondition, NotAPole
from .sig import Signature
from .tautring import TautRingMixin


class GeneralisedStratum(DegenerationMixin, TautRingMixin):
    """A product of strata of abelian differentials cut by residue conditions.

    Args:
        sig_list: list of Signature (or signature tuples), one per component
        res_cond: list of residue conditions; each condition is a list of
            points (component, index) whose residues sum to zero
    """

    def __init__(self, sig_list, res_cond=None):
        if not sig_list:
            raise InvalidResidueCondition("a stratum needs at least one signature")
        self.sig_list = [s if isinstance(s, Signature) else Signature(s)
                         for s in sig_list]
        self.res_cond = [sorted(tuple(p) for p in cond)
                         for cond in (res_cond or [])]
        for cond in self.res_cond:
            if not cond:
                raise InvalidResidueCondition("empty residue condition")
            for p in cond:
                if self.point_order(p) >= -1:
                    raise InvalidResidueCondition(
                        f"point {p} is not a pole of order <= -2")
        self._dim = None
        self._smooth_LG = None
        self._bics = None
        self._lookup = {}
        self._lookup_list = None
        self._DG = None
        self._AGs = {}
        self._middle_maps = {}
        self._relaxed = {}
        self._xi_cache = {}

    # -- basic data ----------------------------------------------------------

    @property
    def n_components(self):
        return len(self.sig_list)

    @property
    def g(self):
        return [s.g for s in self.sig_list]

    def point_order(self, p):
        c, i = p
        try:
            return self.sig_list[c].sig[i]
        except IndexError:
            raise NotAPole(p)

    def all_points(self):
        return [(c, i) for c, s in enumerate(self.sig_list)
                for i in range(s.n)]

    def poles(self):
        """All marked poles, ordered lexicographically by point."""
        return [p for p in self.all_points() if self.point_order(p) < 0]

    def simple_poles(self):
        return [p for p in self.all_points() if self.point_order(p) == -1]

    def conditioned_poles(self):
        """Poles appearing in some residue condition of the stratum."""
        return {p for cond in self.res_cond for p in cond}

    def free_poles(self):
        """Poles of order <= -2 not constrained by any residue condition."""
        conditioned = self.conditioned_poles()
        return {p for p in self.poles()
                if self.point_order(p) <= -2 and p not in conditioned}

    # -- the smooth (zero-level) graph ----------------------------------------

    @property
    def smooth_LG(self):
        if self._smooth_LG is None:
            from .embedded import EmbeddedLevelGraph
            from .levelgraph import LevelGraph
            genera, legs, orders, dmp = [], [], {}, {}
            leg = 1
            for c, s in enumerate(self.sig_list):
                genera.append(s.g)
                ll = []
                for i, m in enumerate(s.sig):
                    ll.append(leg)
                    orders[leg] = m
                    dmp[leg] = (c, i)
                    leg += 1
                legs.append(ll)
            LG = LevelGraph(genera, legs, [], orders, [0] * len(genera))
            self._smooth_LG = EmbeddedLevelGraph(self, LG, dmp)
        return self._smooth_LG

    # -- residue matrices and dimension ---------------------------------------

    def matrix_from_res_conditions(self, conds):
        """0/1 matrix with one row per condition, one column per pole."""
        poles = self.poles()
        col = {p: j for j, p in enumerate(poles)}
        return [[1 if p in set(cond) else 0 for p in poles] for cond in conds]

    def residue_matrix(self):
        return self.matrix_from_res_conditions(self.res_cond)

    def dim(self):
        """Projectivized dimension."""
        if self._dim is None:
            total = sum(2 * s.g + s.n - 1 for s in self.sig_list)
            full = self.smooth_LG.full_residue_matrix()
            self._dim = total - linalg.rank(full) - 1
        return self._dim

    def is_empty(self):
        """A stratum is empty iff some simple pole has its residue forced zero."""
        return any(self.smooth_LG.residue_zero(p) for p in self.simple_poles())

    # -- printing --------------------------------------------------------------

    def __repr__(self):
        return (f"GeneralisedStratum(sig_list={self.sig_list},"
                f"res_cond={self.res_cond})")

    def __str__(self):
        if self.n_components == 1:
            out = f"Stratum: {self.sig_list[0].sig}\n"
        else:
            out = "Product of Strata:\n"
            out += "".join(f"{s!r}\n" for s in self.sig_list)
        out += "with residue conditions: "
        out += " ".join(str(list(c)) for c in self.res_cond)
        return out

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GeneralisedStratum)
                and self.sig_list == other.sig_list
                and self.res_cond == other.res_cond)

    def __hash__(self):
        return hash((tuple(s.sig for s in self.sig_list),
                     tuple(tuple(c) for c in self.res_cond)))

    # -- euler characteristic / reporting (implemented in euler module) --------

    def euler_characteristic(self, quiet=True):
        from .euler import euler_characteristic
        return euler_characteristic(self, quiet=quiet)

    def info(self):
        from .euler import info_string
        print(info_string(self))


class LevelStratum(GeneralisedStratum):
    """A stratum appearing as a level of a graph.

    Carries ``leg_dict``, mapping the legs of the ambient graph lying on this
    level to the stratum's own marked points, and remembers the orbits of the
    ambient automorphism group on those points.
    """

    def __init__(self, sig_list, res_cond=None, leg_dict=None):
        super().__init__(sig_list, res_cond)
        self.leg_dict = dict(leg_dict or {})
        self._orbit_thunk = None
        self._leg_orbits = None

    @property
    def leg_orbits(self):
        if self._leg_orbits is None:
            if self._orbit_thunk is not None:
                self._leg_orbits = self._orbit_thunk()
            else:
                self._leg_orbits = [[p] for p in self.all_points()]
        return self._leg_orbits

    def stratum_point(self, leg):
        return self.leg_dict[leg]

    def __repr__(self):
        return (f"LevelStratum(sig_list={self.sig_list},"
                f"res_cond={self.res_cond},leg_dict={self.leg_dict})")

    def __str__(self):
        if self.n_components == 1:
            out = f"Stratum: {self.sig_list[0]!r}\n"
        else:
            out = "Product of Strata:\n"
            out += "".join(f"{s!r}\n" for s in self.sig_list)
        out += "with residue conditions: "
        out += " ".join(str(list(c)) for c in self.res_cond)
        out += f"\ndimension: {self.dim()}"
        out += f"\nleg dictionary: {self.leg_dict}"
        out += f"\nleg orbits: {self.leg_orbits}"
        return out

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, LevelStratum):
            return (self.sig_list == other.sig_list
                    and self.res_cond == other.res_cond
                    and self.leg_dict == other.leg_dict)
        return GeneralisedStratum.__eq__(self, other)

    def __hash__(self):
        return GeneralisedStratum.__hash__(self)


class Stratum(GeneralisedStratum):
    """Frontend for a connected stratum without residue conditions."""

    def __init__(self, sig):
        super().__init__([Signature(tuple(sig))])
