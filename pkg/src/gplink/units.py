"""dB/linear power conversions. Single convention point for the whole package."""

import numpy as np


def db_to_linear(x_db):
    """10^(x/10). Scalars in, float out; arrays in, array out."""
    out = 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def linear_to_db(x):
    """10*log10(x). Scalars in, float out; arrays in, array out; x > 0."""
    out = 10.0 * np.log10(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out
