"""Shared test utilities."""
import copy

import numpy as np

from pbedg.assembly import apply_rhs


def gross_moment_scale(data, c, s=1):
    """Size of the gross ``s``-th moment transfer: gain and loss terms taken separately.

    Conservation is an exact cancellation between gain and loss, so round-off
    in the moment rate is measured against the size of each side rather than
    against the (possibly much smaller) net coefficient rates.
    """
    gain, loss = copy.copy(data), copy.copy(data)
    if data.agg_birth is not None:
        gain.agg_death = np.zeros_like(data.agg_death)
        loss.agg_birth = np.zeros_like(data.agg_birth)
    if data.brk_birth is not None:
        gain.brk_death = np.zeros_like(data.brk_death)
        gain.brk_cell = np.zeros_like(data.brk_cell)
        loss.brk_birth = np.zeros_like(data.brk_birth)
    W = data.moment_weights(s)
    return float(np.sum(np.abs(apply_rhs(gain, c) * W)) + np.sum(np.abs(apply_rhs(loss, c) * W)))
