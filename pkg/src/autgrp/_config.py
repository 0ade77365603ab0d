import os

import numpy as np

# relative rank threshold: sigma <= RTOL * sigma_max counts as zero
DEFAULT_RTOL = 1e-9
_ENV_VAR = "AUTGRP_TOL"


def default_tol():
    """Return the package-wide relative tolerance.

    The environment variable ``AUTGRP_TOL`` overrides the built-in value.
    """
    value = os.environ.get(_ENV_VAR)
    if value is None:
        return DEFAULT_RTOL
    tol = float(value)
    if not tol > 0:
        raise ValueError(f"{_ENV_VAR} must be positive, got {value!r}")
    return tol


def resolve_tol(tol):
    if tol is None:
        return default_tol()
    tol = float(tol)
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return tol


def cluster_radius(tol):
    # defective eigenvalues move like eps**(1/m); cluster well above that
    return max(np.sqrt(tol), 1e-7) * 10.0
