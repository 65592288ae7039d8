"""Built-in cache contents for the final moduli-space integrals.

Two tables: psi-monomial integrals against stratum classes of connected
strata (keyed by sorted signature and renumbered exponents), and top-power
integrals of the tautological line-bundle class over level strata (keyed by
normalized components and residue conditions).  These cover every level
stratum appearing in the boundary of the holomorphic strata of genus <= 3
minimal/coarse cases shipped with the package tests.
"""

# (signature, ((point, exponent), ...)): value as a string fraction;
# points are 1-based positions in the sorted signature
ADM_SEED = [
    ((0,), ((1, 1),), "1/24"),
    ((-2, 2), ((1, 1),), "1/8"),
    ((-2, 0, 0, 0), ((1, 1),), "1"),
    ((-2, -2, -2, 4), ((1, 1),), "1"),
    ((-2, -2, 1, 1), ((1, 1),), "1"),
    ((-4, 4), ((1, 1),), "5/8"),
    ((-2, -2, 0, 2), ((1, 1),), "1"),
    ((0, 0), ((1, 1), (2, 1)), "1/24"),
    ((-2, -2, 4), ((1, 1), (2, 1)), "11/12"),
    ((-2, 0, 2), ((1, 1), (2, 1)), "1/4"),
    ((-2, 1, 1), ((1, 1), (2, 1)), "1/6"),
    ((0, 0, 0), ((1, 1), (2, 1), (3, 1)), "1/12"),
    ((-2, 4), ((1, 1), (2, 2)), "73/1152"),
    ((0, 0, 0), ((1, 1), (2, 2)), "1/12"),
    ((1, 1), ((1, 1), (2, 3)), "1/720"),
    ((-2, -2, 4), ((1, 1), (3, 1)), "11/12"),
    ((0, 0), ((1, 2),), "1/24"),
    ((-2, -2, 4), ((1, 2),), "19/24"),
    ((-2, 0, 2), ((1, 2),), "1/8"),
    ((-2, 1, 1), ((1, 2),), "1/24"),
    ((-2, 4), ((1, 2), (2, 1)), "97/1152"),
    ((1, 1), ((1, 2), (2, 2)), "1/720"),
    ((2,), ((1, 3),), "1/1920"),
    ((0, 0, 0), ((1, 3),), "1/24"),
    ((-2, 4), ((1, 3),), "43/1152"),
    ((0, 2), ((1, 4),), "11/1920"),
    ((1, 1), ((1, 4),), "1/720"),
    ((4,), ((1, 5),), "13/580608"),
    ((-4, 4), ((2, 1),), "5/8"),
    ((-2, 2), ((2, 1),), "1/8"),
    ((-2, 0, 0, 0), ((2, 1),), "1"),
    ((-2, 1, 1), ((2, 1), (3, 1)), "1/6"),
    ((-2, 0, 2), ((2, 2),), "1/4"),
    ((-2, 1, 1), ((2, 2),), "1/6"),
    ((-2, 4), ((2, 3),), "19/1152"),
    ((-2, -2, 0, 2), ((3, 1),), "1"),
    ((-2, -2, 1, 1), ((3, 1),), "1"),
    ((-2, -2, 4), ((3, 2),), "7/24"),
    ((-2, -2, -2, 4), ((4, 1),), "1"),
]

# (component signatures, residue conditions, value); conditions refer to the
# signatures as written
XI_SEED = [
    (((-4, -2, 4),), (((0, 0), (0, 1)),), "1"),
    (((-4, 0, 2),), (((0, 0),),), "1"),
    (((-4, 1, 1),), (((0, 0),),), "1"),
    (((-4, 4),), (((0, 0),),), "-15/8"),
    (((-3, -3, 4),), (((0, 0), (0, 1)),), "1"),
    (((-2, -2, -2, 4),), (((0, 0), (0, 1), (0, 2)),), "-4"),
    (((-2, -2, -2, 4),), (((0, 0), (0, 2)), ((0, 1),)), "1"),
    (((-2, -2, 0, 2),), (((0, 0), (0, 1)),), "-2"),
    (((-2, -2, 1, 1),), (((0, 0),), ((0, 1),)), "1"),
    (((-2, -2, 1, 1),), (((0, 0), (0, 1)),), "-1"),
    (((-2, -2, 2),), (((0, 0), (0, 1)),), "1"),
    (((-2, -2, 4),), (((0, 0),), ((0, 1),)), "-11/12"),
    (((-2, -2, 4),), (((0, 0), (0, 1)),), "13/8"),
    (((-2, 0, 0),), (((0, 0),),), "1"),
    (((-2, 0, 0, 0),), (((0, 0),),), "-1"),
    (((-2, 0, 2),), (((0, 0),),), "1/8"),
    (((-2, 1, 1),), (((0, 0),),), "0"),
    (((-2, 2),), (((0, 0),),), "-1/8"),
    (((-2, 4),), (((0, 0),),), "-23/1152"),
    (((0,),), (), "1/24"),
    (((0,), (-2, 0, 0)), (((1, 0),),), "-1/24"),
    (((0,), (0,)), (), "-1/576"),
    (((0,), (0, 0)), (), "0"),
    (((0, 0),), (), "0"),
    (((0, 0, 0),), (), "0"),
    (((0, 2),), (), "0"),
    (((1, 1),), (), "0"),
    (((2,),), (), "-1/640"),
    (((4,),), (), "305/580608"),
]
