"""Clutching: reassembling a level graph from split pieces.

The inverse of the splitting operations: takes two or three pieces (each an
embedded graph in its level stratum, or the stratum itself for the smooth
case) plus the clutching dictionaries pairing the cut edges, and produces one
embedded graph in the ambient stratum.  The two-piece and three-piece cases
are handled in one pass; clutching cannot be iterated because intermediate
results are not embedded anywhere.
"""

from __future__ import annotations

from .errors import IncompatibleClutch
from .levelgraph import LevelGraph


def _as_graph(piece):
    from .embedded import EmbeddedLevelGraph
    if isinstance(piece, EmbeddedLevelGraph):
        return piece
    return piece.smooth_LG


def clutch(X, top, bottom, middle=None,
           emb_dict_top=None, emb_dict_mid=None, emb_dict_bot=None,
           clutch_dict=None, clutch_dict_lower=None, clutch_dict_long=None):
    """Glue the pieces into one embedded graph in X.

    ``clutch_dict`` pairs points of the top piece's stratum with points of
    the middle (or, without a middle, the bottom); ``clutch_dict_lower``
    pairs middle with bottom and ``clutch_dict_long`` top with bottom.
    The ``emb_dict``s say where the marked points of X live.
    """
    emb_dict_top = emb_dict_top or {}
    emb_dict_mid = emb_dict_mid or {}
    emb_dict_bot = emb_dict_bot or {}
    clutch_dict = clutch_dict or {}
    clutch_dict_lower = clutch_dict_lower or {}
    clutch_dict_long = clutch_dict_long or {}
    pieces = [_as_graph(top)]
    if middle is not None:
        pieces.append(_as_graph(middle))
    pieces.append(_as_graph(bottom))

    genera, legs, edges, orders, levels = [], [], [], {}, []
    renum = []  # per piece: old leg -> new leg
    next_leg = 1
    rank_offset = 0
    for piece in pieces:
        shift = {}
        for v in range(piece.LG.num_vertices):
            for l in piece.LG.legs[v]:
                shift[l] = next_leg
                next_leg += 1
        renum.append(shift)
        genera.extend(piece.LG.genera)
        legs.extend([[shift[l] for l in ll] for ll in piece.LG.legs])
        edges.extend([(shift[a], shift[b]) for a, b in piece.LG.edges])
        orders.update({shift[l]: o for l, o in piece.LG.orders.items()})
        levels.extend([-(rank_offset + piece.LG.vertex_rank(v))
                       for v in range(piece.LG.num_vertices)])
        rank_offset += piece.LG.num_levels

    def new_leg(piece_idx, point):
        piece = pieces[piece_idx]
        leg = piece._dmp_inv.get(point)
        if leg is None:
            raise IncompatibleClutch(
                f"piece {piece_idx} has no marked point {point}")
        return renum[piece_idx][leg]

    i_top, i_bot = 0, len(pieces) - 1
    i_mid = 1 if middle is not None else None
    pairs = [(i_top, i_mid if i_mid is not None else i_bot, clutch_dict)]
    if middle is not None:
        pairs.append((i_mid, i_bot, clutch_dict_lower))
        pairs.append((i_top, i_bot, clutch_dict_long))
    used = set()
    for i_up, i_low, cd in pairs:
        for p_up, p_low in cd.items():
            a = new_leg(i_up, p_up)
            b = new_leg(i_low, p_low)
            if orders[a] < 0 or orders[a] + orders[b] != -2:
                raise IncompatibleClutch(
                    f"orders {orders[a]}, {orders[b]} at {p_up}->{p_low} "
                    f"do not match")
            edges.append((a, b))
            used.add(a)
            used.add(b)

    dmp = {}
    for emb, idx in ((emb_dict_top, i_top), (emb_dict_mid, i_mid),
                     (emb_dict_bot, i_bot)):
        if idx is None:
            if emb:
                raise IncompatibleClutch("middle embedding without middle")
            continue
        for q, point in emb.items():
            dmp[new_leg(idx, point)] = q
    LG = LevelGraph(genera, legs, edges, orders, levels)
    dangling = set(LG.marked_legs()) - set(dmp)
    if dangling:
        raise IncompatibleClutch(f"dangling points at legs {sorted(dangling)}")
    from .embedded import EmbeddedLevelGraph
    return EmbeddedLevelGraph(X, LG, dmp)
