"""Exception hierarchy shared by all tiltlab modules.

The split mirrors the CLI exit codes: contract violations (bad mathematical
input) are distinct from precision/budget exhaustion, which is distinct from
usage errors.
"""


class TiltlabError(Exception):
    """Base class for all tiltlab errors."""


class ContractError(TiltlabError):
    """A mathematical precondition was violated (mismatched parameters,
    incompatible residues, non-unit where a unit is required, ...)."""


class ParameterError(ContractError):
    """Invalid model parameters (non-prime p, alpha outside (0,1), ...)."""


class PrecisionError(TiltlabError):
    """The inputs do not carry enough precision to perform the operation.

    The message names the required bound so callers can re-run deeper.
    """


class BudgetError(TiltlabError):
    """A brute-force search would exceed its configured budget."""


class UnsupportedRingError(TiltlabError):
    """A coefficient ring lacks a capability the operation needs
    (p-torsion-freeness for ghost maps, inverse Frobenius for expansion)."""


class IntegralityError(TiltlabError):
    """Internal consistency failure: a universal Witt polynomial came out
    non-integral.  Indicates an implementation bug, never expected."""


class StabilizationError(TiltlabError):
    """A limit node failed to stabilize at its declared step bound."""


class FormulaSyntaxError(TiltlabError):
    """Parse failure in the formula / element / polynomial grammars."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
