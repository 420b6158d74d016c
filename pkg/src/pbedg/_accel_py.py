"""Pure numpy versions of the hot loops (used when the extension is absent)."""
import numpy as np


def _scatter(out, rows, contrib):
    L = out.shape[0]
    for j in range(out.shape[1]):
        out[:, j] += np.bincount(rows, weights=contrib[:, j], minlength=L)


def agg_rhs(birth, death, band, p, q, c, out):
    """Accumulate aggregation birth into ``out[band]`` and death into ``out[p]``."""
    if birth.shape[0] == 0:
        return
    cp = c[p]
    cq = c[q]
    b = np.einsum("tjm,tm->tj", np.einsum("tjml,tl->tjm", birth, cq), cp)
    d = np.einsum("tjm,tm->tj", np.einsum("tjml,tl->tjm", death, cq), cp)
    _scatter(out, band, b)
    _scatter(out, p, -d)


def break_rhs(bbirth, bdeath, weight, p, q, c, out):
    """Accumulate breakage birth into ``out[p]`` and mass-split death into ``out[q]``."""
    if bbirth.shape[0] == 0:
        return
    cq = c[q]
    b = np.einsum("ejm,em->ej", bbirth, cq)
    d = np.einsum("em,em->e", bdeath, cq)
    _scatter(out, p, b)
    _scatter(out, q, -d[:, None] * weight[q])


def dpbe_rhs(beta, n, out):
    """Truncated discrete Smoluchowski right-hand side for class counts ``n``.

    Class ``i`` (0-based) holds particles of size ``(i+1) dv``; pairs whose
    combined size exceeds the last class are excluded from both gain and loss.
    """
    K = n.size
    out[:] = 0.0
    for i in range(K):
        # gain: sum over j + l = i - 1 (0-based) of beta n_j n_l / 2
        if i >= 1:
            j = np.arange(i)
            out[i] += 0.5 * np.dot(beta[j, i - 1 - j] * n[j], n[i - 1 - j])
        m = K - i - 1
        if m > 0:
            out[i] -= n[i] * np.dot(beta[i, :m], n[:m])
