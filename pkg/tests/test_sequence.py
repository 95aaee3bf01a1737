from kcert import engine
from kcert.field import FieldSpec
from kcert.matrix import random_sparse, dot
from kcert.oracle import mat_from_sparse, mat_mul
from kcert.sequence import (checkpoint_verifier_bound, choose_K,
                            choose_K_dense, compute_sequence,
                            dense_verifier_bound, seq_reference_cost)

P = 101


def charged_session(n):
    header = engine.Header(engine.T_SEQUENCE, P, n,
                           (0,) + engine.digest_words(b"\x00" * 32))
    return engine.Session(FieldSpec(P), header, "prove")


def naive_sequence(mat, u, v0, delta):
    rows = mat_from_sparse(mat)
    out = []
    v = list(v0)
    for i in range(delta + 1):
        out.append(dot(u, v, P))
        if i < delta:
            v = [sum(a * x for a, x in zip(row, v)) % P for row in rows]
    return out


def test_sequence_matches_naive():
    mat = random_sparse(6, 2, 3, P)
    u = [1, 2, 3, 4, 5, 6]
    v0 = [6, 5, 4, 3, 2, 1]
    s = compute_sequence(mat, u, v0, 9)
    assert s == naive_sequence(mat, u, v0, 9)


def test_sequence_snapshots():
    mat = random_sparse(5, 2, 8, P)
    u = [1] * 5
    v0 = [2, 0, 1, 0, 3]
    s, snaps = compute_sequence(mat, u, v0, 8, snapshot_every=3)
    assert snaps[0] == v0
    assert len(snaps) == 1 + 8 // 3
    w = list(v0)
    for j in range(1, len(snaps)):
        for _ in range(3):
            w = mat.apply(w)
        assert snaps[j] == w


def test_sequence_ledger_is_exact():
    n, delta = 7, 11
    mat = random_sparse(n, 3, 1, P)
    sess = charged_session(n)
    with sess.charging(engine.PROVER):
        compute_sequence(mat, [1] * n, [1] * n, delta)
    led = sess.prover_ledger
    assert led.matvec_count == delta
    assert led.field_ops == delta * mat.mu + (delta + 1) * (2 * n - 1)


def test_sequence_chain_extension():
    n, delta, chain = 5, 6, 9
    mat = random_sparse(n, 2, 4, P)
    sess = charged_session(n)
    with sess.charging(engine.PROVER):
        s, snaps = compute_sequence(mat, [1] * n, [1] * n, delta,
                                    snapshot_every=3, chain_to=chain)
    assert len(s) == delta + 1
    assert len(snaps) == 1 + chain // 3
    assert sess.prover_ledger.matvec_count == chain


def test_reference_cost():
    assert seq_reference_cost(64, 320) == 2 * 64 * 320 + 4 * 64 * 64


def test_choose_K_balances_published_instance():
    assert choose_K(253008, 506046, 1265036) == 503


def test_choose_K_clamps():
    assert choose_K(4, 2, 1000) == 1
    assert choose_K(8, 4, 1) <= 4
    assert choose_K(64, 128, 320) == 8
    assert choose_K_dense(20000) == 110
    assert choose_K_dense(1) == 1


def test_bound_formulas_frozen():
    # n=64, delta=128, K=8, mu=320
    assert checkpoint_verifier_bound(64, 320, 128, 8) == 12544
    assert dense_verifier_bound(64, 320, 128, 9) == 12430
