"""Error taxonomy shared by the library and the CLI.

Two families matter for exit codes: invalid input data (documents that do
not parse, graphs violating their invariants, coefficient recipes that do
not compile for the target graph) and unsatisfied mathematical
preconditions on otherwise valid data (non-general profile where a general
one is required, a clutching recipe without matching marking coefficients,
a non-simple sheaf, a degree mismatch).
"""


class JacstabError(Exception):
    """Base class for all errors raised by jacstab."""


class ValidationError(JacstabError):
    """Invalid input data.  CLI exit code 2."""


class PreconditionError(JacstabError):
    """Valid data, unsatisfied operation precondition.  CLI exit code 3."""
