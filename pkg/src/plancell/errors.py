"""Exception hierarchy shared by all plancell modules.

The three mid-level classes map onto CLI exit codes: DataError -> 3,
ModelError -> 4, LimitError -> 5.
"""


class PlancellError(Exception):
    """Base class for all errors raised by this package."""


class DataError(PlancellError):
    """Malformed or inconsistent input data (project files, CSV, problems)."""


class ModelError(PlancellError):
    """A trained model cannot be loaded or cannot handle the given input."""


class LimitError(PlancellError):
    """A configured search or enumeration budget was exhausted."""


class UnknownValueError(ModelError):
    """An instance carries an attribute value never seen where it is needed."""


class ModelIntegrityError(ModelError):
    """A model produced structurally impossible output (e.g. two class facts)."""


class InapplicableActionError(DataError):
    """A blocksworld action was applied in a state violating its precondition."""
