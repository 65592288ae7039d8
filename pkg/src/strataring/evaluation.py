"""Evaluation of top-degree classes: oracle, caches, and level values.

The final moduli-space integrals (psi monomials against the class of a
connected stratum without residue conditions) are delegated to a pluggable
oracle.  The default oracle chain consults the in-memory cache, the cache
files, the built-in seed table, and finally an exact genus-zero evaluator;
anything else raises OracleMiss carrying the normalized key.

Cache files are line-delimited JSON in the working directory (override with
the STRATA_CACHE_DIR environment variable or ``set_cache_dir``); every newly
computed value is written through immediately with an atomic rename.
"""

from __future__ import annotations

import json
import math
import os
import threading
from fractions import Fraction

from .errors import FileCorrupt, OracleMiss
from .seeds import ADM_SEED, XI_SEED

ADM_FILENAME = "adm_evals.jsonl"
XI_FILENAME = "top_xis.jsonl"


# -- keys ------------------------------------------------------------------------


def adm_key(sig, psis):
    """Normalized cache key: signature sorted, exponents renumbered.

    Marked points of equal order are interchangeable for the integral, so
    within each block of equal orders the exponents are sorted descending;
    the key is invariant under any relabeling of equal-order points.

        >>> adm_key((2, -2), {1: 2, 2: 1})
        ((-2, 2), ((1, 1), (2, 2)))
    """
    sig = tuple(sig)
    pairs = sorted(((m, -psis.get(i + 1, 0)) for i, m in enumerate(sig)))
    key_psis = tuple((pos + 1, -negexp) for pos, (m, negexp) in
                     enumerate(pairs) if negexp)
    return (tuple(sorted(sig)), key_psis)


def dict_key(sig_list, res_cond):
    """Normalized key of a (possibly disconnected) residue-cut stratum.

    Component signatures are sorted, the components themselves sorted, and
    the residue conditions renumbered accordingly and sorted.  Marked points
    of equal order (and identical components) are interchangeable, so the
    conditions are minimized over all such relabelings; the key is invariant
    under any order-preserving relabeling and idempotent.
    """
    import itertools

    sigs = [tuple(s) for s in sig_list]
    per_comp = []
    for sig in sigs:
        order = sorted(range(len(sig)), key=lambda j: (sig[j], j))
        newpos = {j: rank for rank, j in enumerate(order)}
        per_comp.append((tuple(sorted(sig)), newpos))
    comp_order = sorted(range(len(sigs)), key=lambda c: per_comp[c][0])
    key_sigs = tuple(per_comp[c][0] for c in comp_order)
    base = {c: rank for rank, c in enumerate(comp_order)}
    conds = [tuple((base[c], per_comp[c][1][i]) for c, i in cond)
             for cond in res_cond]
    if not conds:
        return (key_sigs, ())

    # blocks of interchangeable positions: equal orders within a component
    pos_blocks = []
    for rank, sig in enumerate(key_sigs):
        start = 0
        for j in range(1, len(sig) + 1):
            if j == len(sig) or sig[j] != sig[start]:
                if j - start > 1:
                    pos_blocks.append((rank, tuple(range(start, j))))
                start = j
    # blocks of identical components
    comp_blocks = []
    start = 0
    for r in range(1, len(key_sigs) + 1):
        if r == len(key_sigs) or key_sigs[r] != key_sigs[start]:
            if r - start > 1:
                comp_blocks.append(tuple(range(start, r)))
            start = r

    def variants():
        pools = [list(itertools.permutations(b)) for _, b in pos_blocks]
        cpools = [list(itertools.permutations(b)) for b in comp_blocks]
        for perms in itertools.product(*pools):
            posmap = {}
            for (rank, block), perm in zip(pos_blocks, perms):
                posmap[rank] = dict(zip(block, perm))
            for cperms in itertools.product(*cpools):
                compmap = {}
                for block, perm in zip(comp_blocks, cperms):
                    compmap.update(dict(zip(block, perm)))
                out = []
                for cond in conds:
                    out.append(tuple(sorted(
                        (compmap.get(c, c),
                         posmap.get(c, {}).get(i, i))
                        for c, i in cond)))
                yield tuple(sorted(out))

    return (key_sigs, min(variants()))


def stratum_dict_key(X):
    return dict_key([s.sig for s in X.sig_list], X.res_cond)


# -- fraction (de)serialization ----------------------------------------------------


def _frac(s):
    return Fraction(s)


def _frac_str(v):
    return str(Fraction(v))


# -- the cache -----------------------------------------------------------------------


class EvalCache:
    """Both caches plus the oracle chain, synchronized with files."""

    def __init__(self, directory=None):
        self._dir = directory
        self._adm = None
        self._xi = None
        self._lock = threading.RLock()
        self.extra_oracles = []

    # - location -

    @property
    def directory(self):
        if self._dir is not None:
            return self._dir
        return os.environ.get("STRATA_CACHE_DIR", os.getcwd())

    def set_directory(self, directory):
        with self._lock:
            self._dir = directory
            self._adm = None
            self._xi = None

    def _path(self, name):
        return os.path.join(self.directory, name)

    # - loading -

    @staticmethod
    def _load_file(path, parse):
        out = {}
        if not os.path.exists(path):
            return out
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    key, value = parse(rec)
                except (ValueError, KeyError, TypeError) as exc:
                    raise FileCorrupt(f"{path}: {exc}") from exc
                out[key] = value
        return out

    @staticmethod
    def _parse_adm(rec):
        key = adm_key(tuple(rec["sig"]),
                      {int(i): int(e) for i, e in rec["psis"]})
        return key, _frac(rec["value"])

    @staticmethod
    def _parse_xi(rec):
        key = dict_key([tuple(s) for s in rec["components"]],
                       [[tuple(p) for p in cond] for cond in rec["res"]])
        return key, _frac(rec["value"])

    def adm_cache(self):
        with self._lock:
            if self._adm is None:
                self._adm = {}
                for sig, psis, val in ADM_SEED:
                    self._adm[adm_key(sig, dict(psis))] = _frac(val)
                self._adm.update(
                    self._load_file(self._path(ADM_FILENAME), self._parse_adm))
            return self._adm

    def xi_cache(self):
        with self._lock:
            if self._xi is None:
                self._xi = {}
                for sigs, conds, val in XI_SEED:
                    self._xi[dict_key(sigs, conds)] = _frac(val)
                self._xi.update(
                    self._load_file(self._path(XI_FILENAME), self._parse_xi))
            return self._xi

    # - persistence -

    def _write_all(self, name, records):
        path = self._path(name)
        tmp = path + ".tmp"
        try:
            with open(tmp, "w") as fh:
                for rec in records:
                    fh.write(json.dumps(rec) + "\n")
            os.replace(tmp, path)
        except OSError:
            pass

    def _persist_adm(self):
        records = [{"sig": list(sig), "psis": [list(p) for p in psis],
                    "value": _frac_str(v)}
                   for (sig, psis), v in sorted(self.adm_cache().items())]
        self._write_all(ADM_FILENAME, records)

    def _persist_xi(self):
        records = [{"components": [list(s) for s in sigs],
                    "res": [[list(p) for p in cond] for cond in conds],
                    "value": _frac_str(v)}
                   for (sigs, conds), v in sorted(self.xi_cache().items())]
        self._write_all(XI_FILENAME, records)

    # - oracle chain -

    def adm_evaluate(self, sig, psis):
        """Integral of a psi monomial against the class of the connected
        stratum with this signature; raises OracleMiss if unknown."""
        key = adm_key(sig, psis)
        cache = self.adm_cache()
        if key in cache:
            return cache[key]
        value = genus_zero_integral(key[0], dict(key[1]))
        if value is None:
            for oracle in self.extra_oracles:
                value = oracle(key)
                if value is not None:
                    break
        if value is None:
            raise OracleMiss(key)
        with self._lock:
            cache[key] = value
            self._persist_adm()
        return value

    def xi_lookup(self, key):
        return self.xi_cache().get(key)

    def xi_store(self, key, value):
        with self._lock:
            self.xi_cache()[key] = value
            self._persist_xi()

    # - import / export / print -

    def import_adm_evals(self, path):
        data = self._load_file(path, self._parse_adm)
        with self._lock:
            self.adm_cache().update(data)
            self._persist_adm()

    def import_top_xis(self, path):
        data = self._load_file(path, self._parse_xi)
        with self._lock:
            self.xi_cache().update(data)
            self._persist_xi()

    def export_adm_evals(self, path):
        records = [{"sig": list(sig), "psis": [list(p) for p in psis],
                    "value": _frac_str(v)}
                   for (sig, psis), v in sorted(self.adm_cache().items())]
        with open(path, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")

    def export_top_xis(self, path):
        records = [{"components": [list(s) for s in sigs],
                    "res": [[list(p) for p in cond] for cond in conds],
                    "value": _frac_str(v)}
                   for (sigs, conds), v in sorted(self.xi_cache().items())]
        with open(path, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")

    def list_top_xis(self):
        for (sigs, conds), v in sorted(self.xi_cache().items()):
            yield sigs, conds, v


DEFAULT_CACHE = EvalCache()


def set_cache_dir(directory):
    DEFAULT_CACHE.set_directory(directory)


# -- printing ----------------------------------------------------------------------


def _fmt_components(sigs):
    if len(sigs) == 1:
        return str(tuple(sigs[0]))
    return str([tuple(s) for s in sigs])


def _fmt_conds(conds):
    if not conds:
        return "()"
    if len(conds) == 1:
        return str([tuple(p) for p in conds[0]])
    return str([[tuple(p) for p in cond] for cond in conds])


def print_top_xis(cache=None):
    cache = cache if cache is not None else DEFAULT_CACHE.xi_cache()
    out = [f"{'Stratum':<18} | {'Residue Conditions':<28} | xi^dim",
           "-" * 64]
    for (sigs, conds), v in sorted(cache.items()):
        out.append(f"{_fmt_components(sigs):<18} | {_fmt_conds(conds):<28} | {v}")
    print("\n".join(out))


def print_adm_evals(cache=None):
    cache = cache if cache is not None else DEFAULT_CACHE.adm_cache()
    out = [f"{'Stratum':<18} | {'Psis':<28} | eval",
           "-" * 64]
    for (sig, psis), v in sorted(cache.items()):
        psi_str = str({i: e for i, e in psis})
        out.append(f"{str(tuple(sig)):<18} | {psi_str:<28} | {v}")
    print("\n".join(out))


# -- genus-zero closed form -----------------------------------------------------------


def genus_zero_integral(sig, psis):
    """psi integrals in genus zero.

    For a genus-zero signature the closure of the stratum is the whole
    moduli space of stable rational curves, so the integral of a psi
    monomial of top degree n-3 is the multinomial coefficient
    (n-3)! / prod(e_i!).  Returns None in higher genus.
    """
    if sum(sig) != -2:
        return None
    n = len(sig)
    exps = list(psis.values())
    if sum(exps) != n - 3:
        return Fraction(0)
    denom = 1
    for e in exps:
        denom *= math.factorial(e)
    return Fraction(math.factorial(n - 3), denom)


# -- strata pool and level values -------------------------------------------------------

_STRATUM_POOL = {}


def pooled_stratum(sig_list, res_cond):
    """Shared GeneralisedStratum instances so their caches are reused."""
    key = (tuple(tuple(s) for s in sig_list),
           tuple(tuple(tuple(p) for p in c) for c in res_cond))
    if key not in _STRATUM_POOL:
        from .stratum import GeneralisedStratum
        _STRATUM_POOL[key] = GeneralisedStratum(
            [tuple(s) for s in sig_list],
            [list(c) for c in res_cond])
    return _STRATUM_POOL[key]


def level_value(L, psis, cache=None):
    """Integral of a psi monomial over one level stratum.

    ``psis`` maps stratum points to exponents.  Strata with residue
    conditions are peeled one condition at a time, multiplying by the class
    of the cut sub-stratum in the relaxed stratum; disconnected strata
    evaluate to zero unless their residue conditions tie the components
    together in the underlying graph.
    """
    cache = cache or DEFAULT_CACHE
    psis = {p: e for p, e in psis.items() if e}
    deg = sum(psis.values())
    dim = L.dim()
    if dim < 0 or deg != dim:
        return Fraction(0)
    if L.res_cond:
        from .levelgraph import connected_components
        adj = L.smooth_LG.underlying_adjacency()
        if len(connected_components(set(adj), adj)) > 1:
            return Fraction(0)
        from . import linalg
        cond = L.res_cond[0]
        rest = [list(c) for c in L.res_cond[1:]]
        Xr = pooled_stratum([s.sig for s in L.sig_list], rest)
        if linalg.rank(Xr.smooth_LG.full_residue_matrix()) == \
                linalg.rank(L.smooth_LG.full_residue_matrix()):
            return level_value(Xr, psis, cache)
        mono = Xr.psi_monomial(psis)
        cls = Xr.res_stratum_class(cond)
        return Xr.intersection(mono, cls).evaluate(cache=cache)
    if L.n_components > 1:
        return Fraction(0)
    if dim == 0:
        return Fraction(1)
    sig = L.sig_list[0].sig
    psis_1based = {i + 1: e for (c, i), e in psis.items()}
    return cache.adm_evaluate(sig, psis_1based)
