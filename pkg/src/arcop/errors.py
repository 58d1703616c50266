"""Exception hierarchy.  Every validation failure names the invariant it violates."""


class ArcopError(Exception):
    """Base class for all library errors."""


class ValidationError(ArcopError):
    invariant = "Validation"

    def __init__(self, message: str, item=None):
        super().__init__(message)
        self.item = item

    def __str__(self):
        msg = super().__str__()
        return f"{self.invariant}: {msg}" if not msg.startswith(self.invariant) else msg


def _make(name: str, base=ValidationError):
    return type(name, (base,), {"invariant": name})


# algebra
NotAssociative = _make("NotAssociative")
NotUnital = _make("NotUnital")
PairingDegenerate = _make("PairingDegenerate")
PairingNotInvariant = _make("PairingNotInvariant")
PairingNotSymmetric = _make("PairingNotSymmetric")
OddDegreeBasis = _make("OddDegreeBasis")
NotAnAlgebraMap = _make("NotAnAlgebraMap")
FieldMismatch = _make("FieldMismatch")

# bar complexes / correlators
DegreeMismatch = _make("DegreeMismatch")
NotReduced = _make("NotReduced")

# surfaces
MarkedPointError = _make("MarkedPointError")
ParallelArcs = _make("ParallelArcs")
InessentialArc = _make("InessentialArc")
SideUsage = _make("SideUsage")
EulerMismatch = _make("EulerMismatch")
OrphanPuncture = _make("OrphanPuncture")
SlotError = _make("SlotError")

# gluing
WeightMismatch = _make("WeightMismatch")
InactiveWindow = _make("InactiveWindow")
KindMismatch = _make("KindMismatch")

# correlators / sullivan
NonCommutativeAmbiguity = _make("NonCommutativeAmbiguity")
UnvalidatedGraph = _make("UnvalidatedGraph")
NotSullivanType = _make("NotSullivanType")
PairingMismatch = _make("PairingMismatch")


class ParseError(ArcopError):
    def __init__(self, message: str, path: str = "", location: str = ""):
        where = ":".join(p for p in (path, location) if p)
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.location = location


class UsageError(ArcopError):
    pass
