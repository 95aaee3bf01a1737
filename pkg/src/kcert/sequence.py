"""Krylov projection sequences and the closed-form cost expressions.

The prover's base task is the sequence s[i] = u^T A^i v0.  The block-size
pickers and verifier cost bounds live here because every protocol and the
bench command quote them.
"""

import math

from .matrix import dot, matvec


def compute_sequence(op, u, v0, delta, snapshot_every=0, chain_to=None):
    """s[i] = u^T A^i v0 for 0 <= i <= delta.

    With snapshot_every = K also returns the chain snapshots
    [v0, A^K v0, A^{2K} v0, ...]; chain_to extends the product chain past
    delta so a final snapshot can land beyond the sequence.  Costs delta
    matvecs and delta + 1 dots, plus one matvec per extra chain step.
    """
    p = op.p
    last = delta if chain_to is None else max(delta, chain_to)
    v = list(v0)
    s = [dot(u, v, p)]
    snaps = [list(v)]
    for i in range(1, last + 1):
        v = matvec(op, v)
        if i <= delta:
            s.append(dot(u, v, p))
        if snapshot_every and i % snapshot_every == 0:
            snaps.append(list(v))
    if snapshot_every:
        return s, snaps
    return s


def seq_reference_cost(n, mu):
    """Cost of the unverified baseline: the prover's sequence run at delta = 2n."""
    return 2 * n * mu + 4 * n * n


def choose_K(n, delta, mu):
    """Block size minimising the checkpoint verifier cost 2K(mu+n) + (delta/K)(2K+6n)."""
    k = int(math.sqrt(3 * n * delta / (mu + n)) + 0.5)
    return max(1, min(k, n, delta))


def choose_K_dense(delta):
    """Block size for the dense-challenge variant, minimising 10Kn + 6n*delta/K."""
    k = int(math.sqrt(0.6 * delta) + 0.5)
    return max(1, min(k, delta))


def checkpoint_verifier_bound(n, mu, delta, K):
    """Verifier budget of the checkpoint protocol at block size K."""
    m = -(-delta // K)
    return 2 * K * (mu + n) + m * (2 * K + 6 * n)


def dense_verifier_bound(n, mu, delta, K):
    """Verifier budget when challenge rows are delegated as dense lists."""
    m = -(-delta // K)
    return 2 * mu + 10 * K * n + m * (2 * K + 6 * n)


def power_log_verifier_bound(n, mu, d):
    """Verifier budget of the halving power certificate."""
    return (mu + 8 * n) * max(1, (d - 1).bit_length()) + mu


def seq_log_verifier_reference(n, mu, d):
    """Reference verifier cost for the recursive sequence certificate, halving powers."""
    lg = math.log2(d)
    return (0.5 * mu + 4 * n) * lg * lg


def seq_single_verifier_reference(n, mu, d):
    """Reference verifier cost for the recursive sequence certificate, single-matvec powers."""
    lg = math.log2(d)
    return mu * lg + 6 * n * lg * lg
