"""Exception hierarchy shared across the toolkit.

Each class carries a short machine-readable ``code`` used by the CLI when
it reports failures on stderr.
"""


class TikError(Exception):
    code = "error"
    exit_status = 2


class InputError(TikError):
    code = "input"


class ShapeError(InputError):
    code = "shape"


class FieldMismatch(InputError):
    code = "field"


class SingularError(InputError):
    code = "singular"


class CapExceeded(TikError):
    code = "cap"
    exit_status = 3


class WitnessError(TikError):
    """A witness failed a structural check during transport or extraction."""

    code = "witness"
    exit_status = 1


class ToleranceError(WitnessError):
    code = "tolerance"
    exit_status = 4


class UnsupportedError(InputError):
    code = "unsupported"
