"""Signatures of strata of abelian differentials."""

from __future__ import annotations

from .errors import MalformedSignature


class Signature:
    """A signature of a stratum.

    Attributes:
        sig (tuple): signature tuple of integer orders, summing to 2g-2
        g (int): genus
        n (int): total number of points
        p (int): number of poles
        z (int): number of zeroes
        poles (tuple): tuple of pole orders
        zeroes (tuple): tuple of zero orders
        pole_ind (tuple): tuple of indices of poles
        zero_ind (tuple): tuple of indices of zeroes

    EXAMPLES::

        >>> sig = Signature((2, 1, -1, 0))
        >>> sig.g
        2
        >>> sig.n
        4
        >>> sig.poles
        (-1,)
        >>> sig.zeroes
        (2, 1)
        >>> sig.pole_ind
        (2,)
        >>> sig.zero_ind
        (0, 1)
    """

    def __init__(self, sig):
        sig = tuple(int(m) for m in sig)
        if not sig:
            raise MalformedSignature("empty signature")
        total = sum(sig)
        if total % 2 != 0:
            raise MalformedSignature(f"signature {sig} has odd total order")
        g2 = total + 2
        if g2 < 0 or g2 % 2 != 0:
            raise MalformedSignature(f"signature {sig} gives no genus")
        self.sig = sig
        self.g = g2 // 2
        self.n = len(sig)
        self.poles = tuple(m for m in sig if m < 0)
        self.zeroes = tuple(m for m in sig if m > 0)
        self.pole_ind = tuple(i for i, m in enumerate(sig) if m < 0)
        self.zero_ind = tuple(i for i, m in enumerate(sig) if m > 0)
        self.p = len(self.poles)
        self.z = len(self.zeroes)

    def __repr__(self):
        return f"Signature({self.sig})"

    def __eq__(self, other):
        return isinstance(other, Signature) and self.sig == other.sig

    def __hash__(self):
        return hash(self.sig)
