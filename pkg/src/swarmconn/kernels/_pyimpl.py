"""Pure-Python hot kernels (fallback when the compiled extension is absent).

All functions take flat float lists so both backends share one calling
convention.  `rel` holds neighbor offsets p_j - p_i concatenated:
[dx0, dy0, ..., dx1, dy1, ...] for m-dimensional positions.
"""
import math


def lj_force_scalar(d, a, b, delta, iota):
    """Signed Lennard-Jones force term at separation d.

    Negative = repulsion (pushes i away from the neighbor), positive =
    attraction, applied along the unit vector toward the neighbor.
    """
    return -iota * ((a * delta ** a / d ** (a + 1.0)) ** a
                    - 2.0 * (b * delta / d ** (b + 1.0)) ** b)


def lj_sum(rel, m, a, b, delta, iota, d_min):
    """Sum of Lennard-Jones force vectors over neighbors."""
    out = [0.0] * m
    k = len(rel) // m
    for j in range(k):
        base = j * m
        d2 = 0.0
        for c in range(m):
            d2 += rel[base + c] * rel[base + c]
        d = math.sqrt(d2)
        if d < 1e-12:
            continue  # no direction; magnitude would be clamped anyway
        f = lj_force_scalar(max(d, d_min), a, b, delta, iota)
        s = f / d
        for c in range(m):
            out[c] += s * rel[base + c]
    return out


def conn_grad(rel, dx2, m, sigma_w, comm_range, d_min):
    """d(lambda2)/d(p_i) for the smooth Gaussian edge weights.

    With w(d) = exp(-d^2 / (2 s^2)), w'(d) (p_i - p_j)/d simplifies to
    (w(d)/s^2) (p_j - p_i), so each neighbor contributes
    (w/s^2) * (x_i - x_j)^2 * rel.  dx2 holds the squared Fiedler-entry
    differences.  Returns (gradient, skipped) where skipped counts
    coincident neighbors dropped for degeneracy.
    """
    out = [0.0] * m
    skipped = 0
    inv_s2 = 1.0 / (sigma_w * sigma_w)
    k = len(rel) // m
    for j in range(k):
        base = j * m
        d2 = 0.0
        for c in range(m):
            d2 += rel[base + c] * rel[base + c]
        d = math.sqrt(d2)
        if d < d_min:
            skipped += 1
            continue
        if d > comm_range:
            continue
        s = math.exp(-d2 * 0.5 * inv_s2) * inv_s2 * dx2[j]
        for c in range(m):
            out[c] += s * rel[base + c]
    return out, skipped


def lap_row(x_k, weights, xs):
    """(L x)_k computed from local data: deg * x_k - sum w_j x_j."""
    deg = 0.0
    acc = 0.0
    for j in range(len(weights)):
        w = weights[j]
        deg += w
        acc += w * xs[j]
    return deg * x_k - acc
