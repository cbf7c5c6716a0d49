"""Exception hierarchy for the cadeval toolkit.

Every error raised by the library derives from CadevalError so callers can
catch one base class.  INPUT_ERRORS collects the classes that map to CLI
exit code 2 (bad user input); executor unavailability maps to exit code 3.
"""


class CadevalError(Exception):
    """Base class for all cadeval errors."""


# --- command program parsing / validation ---

class MalformedDocument(CadevalError):
    """Program document is not parseable or violates the schema."""


class UnknownCommandTag(MalformedDocument):
    """Command tag string is not one of the known tags."""


class ArityError(MalformedDocument):
    """Command parameter list does not hold exactly 16 slots."""


class ValidationError(CadevalError):
    """A command parameter is out of range or an enum code is unknown."""


class GrammarError(CadevalError):
    """Command sequence violates the loop/extrude grammar."""


class OutOfRangeCode(CadevalError):
    """Quantized slot holds a non-integer or a code outside [0, 2^bits - 1]."""


# --- transpiler ---

class UnsupportedBooleanOnFirstBody(CadevalError):
    """First extrude group of a program must create a new body."""


class DegenerateLoop(CadevalError):
    """Loop contains a zero-length segment or zero-radius circle after scaling."""


class DegenerateArc(CadevalError):
    """Arc endpoints coincide; no circle is defined."""


# --- meshes and geometry ---

class MalformedStl(CadevalError):
    """STL content is truncated or syntactically invalid."""


class EmptyMesh(CadevalError):
    """STL parsed but contains no triangles."""


class NotWatertight(CadevalError):
    """Mesh boundary is not a closed, consistently oriented 2-manifold."""


class DegenerateVolume(CadevalError):
    """Enclosed volume is smaller than 1e-12 in absolute value."""


class InvalidRotationInput(CadevalError):
    """Matrix argument is not orthonormal with determinant +1."""


class ResolutionOutOfRange(CadevalError):
    """Voxel resolution outside the supported [8, 512] range."""


class GridMismatch(CadevalError):
    """Voxel grids do not share origin, cell size and dimensions."""


class EmptyUnion(CadevalError):
    """IOU undefined: both occupancy grids are empty."""


class LengthMismatch(CadevalError):
    """Point correspondence lists differ in length or hold fewer than 3 points."""


class DegenerateConfiguration(CadevalError):
    """Point configuration is rank-deficient; alignment is ill-posed."""


# --- evaluation harness ---

class MalformedManifest(CadevalError):
    """Manifest line is not a valid sample record."""


class DuplicateId(MalformedManifest):
    """Two manifest records share the same id."""


class MissingFile(MalformedManifest):
    """A path referenced by the manifest does not exist."""


class EmptyInput(CadevalError):
    """Operation requires at least one sample/outcome."""


class ExecutorUnavailable(CadevalError):
    """Samples require script execution but the executor command cannot run."""


INPUT_ERRORS = (
    MalformedDocument,
    ValidationError,
    GrammarError,
    OutOfRangeCode,
    UnsupportedBooleanOnFirstBody,
    DegenerateLoop,
    DegenerateArc,
    MalformedStl,
    EmptyMesh,
    NotWatertight,
    DegenerateVolume,
    InvalidRotationInput,
    ResolutionOutOfRange,
    GridMismatch,
    EmptyUnion,
    LengthMismatch,
    DegenerateConfiguration,
    MalformedManifest,
    EmptyInput,
)
