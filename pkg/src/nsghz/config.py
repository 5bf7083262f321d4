"""Tolerances and the amplitude cap."""
import os

from .errors import CapExceededError

#: State-level equality tolerance (fidelity deficit, residual norms).
STATE_TOL = 1e-10
#: Operator-level tolerance (unitarity, entrywise matrix equality).
OPERATOR_TOL = 1e-12

DEFAULT_CAP = 2 ** 20
CAP_ENV = "NSGHZ_CAP"


def amplitude_cap():
    """Return the active cap on ``d**n``; ``$NSGHZ_CAP`` overrides the default."""
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be positive, got {cap}")
    return cap


def check_cap(d, n, cap=None):
    if cap is None:
        cap = amplitude_cap()
    size = d ** n
    if size > cap:
        raise CapExceededError(
            f"state with d={d}, n={n} has {size} amplitudes, cap is {cap}")
    return size
