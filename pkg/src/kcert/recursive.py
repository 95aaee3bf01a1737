"""Multi-level delegation of the blocked sequence certificate.

With stride levels near n^{1/k}, n^{2/k}, ..., the verifier's two row
computations are pushed down a delegation tree: each blocked run hands its
Z row to a certified sub-run on the transposed operator, and audits its
committed T row against a second sub-run at a freshly drawn projection.
Leaves of the tree fall back to prover-supplied lists (or to direct
computation once strides are tiny).

The stride exponents come from balancing the cost of adjacent levels of the
tree, a tridiagonal system solved exactly over the rationals.
"""

from fractions import Fraction

from . import engine
from .checkpoint import C_U, C_V0, _block_protocol


def level_schedule(k):
    """Exponents e_1 < ... < e_{k-1} solving 2 e_j = e_{j-1} + e_{j+1}, e_0 = 0, e_k = 1."""
    if k < 2:
        raise ValueError("need at least two levels")
    m = k - 1
    diag = [Fraction(2)] * m
    rhs = [Fraction(0)] * m
    rhs[m - 1] = Fraction(1)
    for i in range(1, m):
        w = Fraction(-1) / diag[i - 1]
        diag[i] += w
        rhs[i] -= w * rhs[i - 1]
    exps = [Fraction(0)] * m
    exps[m - 1] = rhs[m - 1] / diag[m - 1]
    for i in range(m - 2, -1, -1):
        exps[i] = (rhs[i] + exps[i + 1]) / diag[i]
    return exps


def level_strides(k, n):
    """Raw stride targets n^(j/k) rounded to integers."""
    return [max(1, round(n ** float(e))) for e in level_schedule(k)]


def effective_strides(k, n, delta):
    """Strides actually used: each divides the next, all within min(n, delta).

    Divisibility keeps every delegated chain landing exactly on its target
    power; levels that cannot grow under the cap are dropped.
    """
    cap = min(n, delta)
    eff = []
    for raw in level_strides(k, n):
        if not eff:
            step = max(1, min(raw, cap))
        else:
            step = eff[-1] * max(2, round(raw / eff[-1]))
            if step > cap:
                break
        eff.append(step)
    return eff


def _scheme(sess, op, u, v0, delta, level, eff):
    stride = eff[level - 1] if level >= 1 else 1
    K = max(1, min(stride, delta))
    if level <= 0 or stride <= 4 or stride > delta:
        return _block_protocol(sess, op, u, v0, delta, K, "direct")
    if level == 1:
        return _block_protocol(sess, op, u, v0, delta, K, "lists")

    def child(s2, op2, u2, v2, d2):
        return _scheme(s2, op2, u2, v2, d2, level - 1, eff)

    return _block_protocol(sess, op, u, v0, delta, K, "delegate", delegate=child)


def klevel_header(mat, delta, k):
    params = (delta, k) + engine.digest_words(mat.digest)
    return engine.Header(engine.T_KLEVEL, mat.p, mat.n, params)


def run_klevel(sess, op, delta, k):
    """Certify the sequence with up to k - 1 levels of delegated row work."""
    if delta < 1:
        raise ValueError("sequence length parameter must be >= 1")
    if k < 2:
        raise ValueError("need at least two levels")
    eff = effective_strides(k, op.n, delta)

    def body():
        u = sess.challenge_vector(C_U, op.n)
        v0 = sess.challenge_vector(C_V0, op.n)
        _scheme(sess, op, u, v0, delta, len(eff), eff)

    return engine.run_with_outcome(sess, body)
