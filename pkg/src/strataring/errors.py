"""Exception types shared across the package."""


class MalformedSignature(ValueError):
    """Signature tuple does not define a stratum (bad parity or negative genus)."""


class InvalidResidueCondition(ValueError):
    """A residue condition references a point that is not a pole of order <= -2."""


class NotAPole(ValueError):
    pass


class UnknownLeg(KeyError):
    pass


class UnknownVertex(KeyError):
    pass


class NotHorizontal(ValueError):
    pass


class NoSuchLevel(ValueError):
    pass


class NoSuchCrossing(ValueError):
    pass


class NotABic(ValueError):
    pass


class NotThreeLevel(ValueError):
    pass


class NotCodimOne(ValueError):
    pass


class AmbientMismatch(ValueError):
    pass


class IncompatibleClutch(ValueError):
    """Clutching data does not match up (order mismatch or dangling point)."""


class RedundantCondition(ValueError):
    """The residue condition is already implied by the existing ones."""


class Disconnected(ValueError):
    pass


class LegNotOnLevel(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """A generated graph could not be matched back; signals a generation bug."""


class FileCorrupt(ValueError):
    pass


class OracleMiss(Exception):
    """A psi-integral was requested that no oracle or cache can supply.

    Carries the normalized lookup key so the missing value can be computed
    elsewhere and imported.
    """

    def __init__(self, key):
        self.key = key
        super().__init__(f"no cached or computable value for key {key!r}")
