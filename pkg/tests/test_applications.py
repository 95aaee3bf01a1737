import logging
import random

import pytest

from kcert import applications as apps, engine
from kcert.field import DEFAULT_PRIME, FieldSpec, poly_divmod
from kcert.matrix import SparseMatrix, random_sparse
from kcert.oracle import (dense_charpoly, dense_det, dense_minpoly,
                          mat_from_sparse)

P = 101
BIG = DEFAULT_PRIME


def roundtrip(spec, header, runner, mutate=None):
    ps = engine.Session(spec, header, "prove")
    out_p, val_p = runner(ps)
    h2, msgs = engine.parse_transcript(ps.transcript_bytes())
    if mutate:
        msgs = mutate(msgs)
    vs = engine.Session(spec, h2, "verify", recorded=msgs)
    out_v, val_v = runner(vs)
    return out_p, val_p, out_v, val_v


def singular_matrix(n, seed):
    base = random_sparse(n, 3, seed, BIG)
    trips = [(r, c, v) for (r, c, v) in base.triplets if r != 1]
    trips += [(1, c, v) for (r, c, v) in base.triplets if r == 0]
    return SparseMatrix(n, BIG, trips)


@pytest.mark.parametrize("variant", ["single", "log", "checkpoint", "dense"])
def test_minpoly_matches_oracle(variant):
    rng = random.Random(hash(variant) & 0xffff)
    for _ in range(3):
        n = rng.randrange(2, 12)
        mat = random_sparse(n, min(3, n), rng.randrange(10 ** 6), BIG)
        spec = FieldSpec(BIG)
        out_p, f_p, out_v, f_v = roundtrip(
            spec, apps.minpoly_header(mat, variant, 1),
            lambda s: apps.run_minpoly(s, mat, variant, 1))
        assert out_p.accepted and out_v.accepted
        assert f_p == f_v == dense_minpoly(mat_from_sparse(mat), BIG)


def test_minpoly_multiple_projections():
    mat = random_sparse(9, 3, 5, BIG)
    spec = FieldSpec(BIG)
    _, _, out_v, f_v = roundtrip(
        spec, apps.minpoly_header(mat, "single", 3),
        lambda s: apps.run_minpoly(s, mat, "single", 3))
    assert out_v.accepted
    assert f_v == dense_minpoly(mat_from_sparse(mat), BIG)


def test_minpoly_mismatch_rejects():
    mat = random_sparse(6, 3, 8, BIG)
    spec = FieldSpec(BIG)

    def corrupt(msgs):
        out = list(msgs)
        d, t, payload = out[-1]
        assert t == apps.M_MINPOLY
        vals = engine.decode_vector(payload, BIG)
        vals[0] = (vals[0] + 1) % BIG
        out[-1] = (d, t, engine.encode_vector(vals))
        return out

    _, _, out_v, f_v = roundtrip(
        spec, apps.minpoly_header(mat, "single", 1),
        lambda s: apps.run_minpoly(s, mat, "single", 1), corrupt)
    assert not out_v.accepted and out_v.check_id == "minpoly-mismatch"
    assert f_v is None


def test_minpoly_warns_on_small_sample_set(caplog):
    mat = random_sparse(8, 2, 1, P)
    spec = FieldSpec(P)  # 101 < 100 * 64
    sess = engine.Session(spec, apps.minpoly_header(mat, "single", 1), "prove")
    with caplog.at_level(logging.WARNING, logger="kcert.applications"):
        apps.run_minpoly(sess, mat, "single", 1)
    assert any("sample set" in r.message for r in caplog.records)


def test_det_matches_oracle():
    rng = random.Random(42)
    spec = FieldSpec(BIG)
    for _ in range(6):
        n = rng.randrange(2, 14)
        mat = random_sparse(n, min(3, n), rng.randrange(10 ** 6), BIG)
        out_p, d_p, out_v, d_v = roundtrip(
            spec, apps.det_header(mat, "single"),
            lambda s: apps.run_det(s, mat, "single"))
        assert out_p.accepted and out_v.accepted
        assert d_p == d_v == dense_det(mat_from_sparse(mat), BIG)


def test_det_singular_uses_witness():
    mat = singular_matrix(7, 33)
    spec = FieldSpec(BIG)
    out_p, d_p, out_v, d_v = roundtrip(
        spec, apps.det_header(mat, "single"),
        lambda s: apps.run_det(s, mat, "single"))
    assert out_v.accepted and d_p == d_v == 0
    # the witness path is deterministic: no probabilistic tests happen
    assert out_v.num_tests == 0
    assert out_v.soundness_error_bound == 0


def test_det_zero_and_identity():
    spec = FieldSpec(BIG)
    zero = SparseMatrix(4, BIG, [])
    _, d_p, out_v, d_v = roundtrip(
        spec, apps.det_header(zero, "single"),
        lambda s: apps.run_det(s, zero, "single"))
    assert out_v.accepted and d_v == 0
    ident = SparseMatrix(5, BIG, [(i, i, 1) for i in range(5)])
    _, _, out_v, d_v = roundtrip(
        spec, apps.det_header(ident, "single"),
        lambda s: apps.run_det(s, ident, "single"))
    assert out_v.accepted and d_v == 1


def tamper_first(tag, p, decode, encode, bump):
    state = {"done": False}

    def hook(idx, t, payload):
        if t == tag and not state["done"]:
            state["done"] = True
            return encode(bump(decode(payload, p)))
        return payload
    return hook


def test_det_claim_tamper_rejected():
    mat = random_sparse(6, 3, 12, BIG)
    spec = FieldSpec(BIG)
    for seed in range(5):
        sess = engine.Session(
            spec, apps.det_header(mat, "single"), "live", seed=seed,
            tamper=tamper_first(apps.M_DETVAL, BIG, engine.decode_scalar,
                                engine.encode_scalar,
                                lambda v: (v + 1) % BIG))
        out, d = apps.run_det(sess, mat, "single")
        assert not out.accepted and out.check_id == "det-claim"
        assert d is None


def test_kernel_witness_tamper_rejected():
    mat = singular_matrix(6, 5)
    spec = FieldSpec(BIG)

    def bad_witness(vals):
        vals[0] = (vals[0] + 1) % BIG
        return vals

    sess = engine.Session(
        spec, apps.det_header(mat, "single"), "live", seed=0,
        tamper=tamper_first(apps.M_WITNESS, BIG, engine.decode_vector,
                            engine.encode_vector, bad_witness))
    out, _ = apps.run_det(sess, mat, "single")
    assert not out.accepted and out.check_id == "kernel-witness"


def test_unknown_mode_byte_is_malformed():
    mat = random_sparse(5, 2, 3, BIG)
    spec = FieldSpec(BIG)
    sess = engine.Session(
        spec, apps.det_header(mat, "single"), "live", seed=0,
        tamper=lambda i, t, pl: b"\x07" if t == apps.M_MODE else pl)
    with pytest.raises(engine.MalformedTranscript):
        apps.run_det(sess, mat, "single")


@pytest.mark.parametrize("variant", ["single", "checkpoint"])
def test_charpoly_matches_oracle(variant):
    rng = random.Random(9)
    spec = FieldSpec(BIG)
    for _ in range(3):
        n = rng.randrange(2, 10)
        mat = random_sparse(n, min(3, n), rng.randrange(10 ** 6), BIG)
        out_p, g_p, out_v, g_v = roundtrip(
            spec, apps.charpoly_header(mat, variant),
            lambda s: apps.run_charpoly(s, mat, variant))
        assert out_p.accepted and out_v.accepted
        assert g_p == g_v == dense_charpoly(mat_from_sparse(mat), BIG)


def test_charpoly_of_singular_matrix():
    mat = singular_matrix(6, 77)
    spec = FieldSpec(BIG)
    _, _, out_v, g_v = roundtrip(
        spec, apps.charpoly_header(mat, "single"),
        lambda s: apps.run_charpoly(s, mat, "single"))
    assert out_v.accepted
    assert g_v == dense_charpoly(mat_from_sparse(mat), BIG)
    assert g_v[0] == 0  # zero determinant shows up as a zero constant term


def test_charpoly_shape_tamper_rejected():
    mat = random_sparse(6, 2, 2, BIG)
    spec = FieldSpec(BIG)

    def shorten(vals):
        return vals[:-1]

    sess = engine.Session(
        spec, apps.charpoly_header(mat, "single"), "live", seed=1,
        tamper=tamper_first(apps.M_CHARPOLY, BIG, engine.decode_vector,
                            engine.encode_vector, shorten))
    out, _ = apps.run_charpoly(sess, mat, "single")
    assert not out.accepted and out.check_id == "charpoly-shape"


def test_charpoly_eval_tamper_rejected():
    mat = random_sparse(6, 2, 2, BIG)
    spec = FieldSpec(BIG)

    def bump_low(vals):
        vals[0] = (vals[0] + 1) % BIG
        return vals

    for seed in range(3):
        sess = engine.Session(
            spec, apps.charpoly_header(mat, "single"), "live", seed=seed,
            tamper=tamper_first(apps.M_CHARPOLY, BIG, engine.decode_vector,
                                engine.encode_vector, bump_low))
        out, _ = apps.run_charpoly(sess, mat, "single")
        assert not out.accepted and out.check_id == "charpoly-eval"


def test_charpoly_weighted_soundness_accounting():
    n = 7
    mat = random_sparse(n, 2, 21, BIG)
    spec = FieldSpec(BIG)
    _, _, out_v, _ = roundtrip(
        spec, apps.charpoly_header(mat, "single"),
        lambda s: apps.run_charpoly(s, mat, "single"))
    assert out_v.accepted
    # the evaluation check alone contributes weight n
    assert out_v.num_tests >= n


def test_validation():
    mat = random_sparse(4, 2, 0, BIG)
    spec = FieldSpec(BIG)
    sess = engine.Session(spec, apps.minpoly_header(mat, "single", 1), "prove")
    with pytest.raises(ValueError):
        apps.run_minpoly(sess, mat, "nope", 1)
    with pytest.raises(ValueError):
        apps.run_minpoly(sess, mat, "single", 0)
    with pytest.raises(KeyError):
        apps.minpoly_header(mat, "nope", 1)


def test_minpoly_of_diagonal_with_repeated_eigenvalue():
    # diag(1,1,2): the repeated eigenvalue collapses to (x-1)(x-2)
    mat = SparseMatrix(3, P, [(0, 0, 1), (1, 1, 1), (2, 2, 2)])
    _, _, out_v, f = roundtrip(
        FieldSpec(P), apps.minpoly_header(mat, "single", 1),
        lambda s: apps.run_minpoly(s, mat, "single", 1))
    assert out_v.accepted
    assert f == [2, P - 3, 1]


def test_charpoly_of_zero_matrix():
    mat = SparseMatrix(3, P, [])
    _, _, out_v, g = roundtrip(
        FieldSpec(P), apps.charpoly_header(mat, "single"),
        lambda s: apps.run_charpoly(s, mat, "single"))
    assert out_v.accepted
    assert g == [0, 0, 0, 1]


def test_charpoly_of_small_diagonal():
    mat = SparseMatrix(2, P, [(0, 0, 1), (1, 1, 2)])
    _, _, out_v, g = roundtrip(
        FieldSpec(P), apps.charpoly_header(mat, "single"),
        lambda s: apps.run_charpoly(s, mat, "single"))
    assert out_v.accepted
    assert g == [2, P - 3, 1]


def test_minpoly_divides_oracle_and_usually_equals_it():
    # the certified polynomial always divides the true minimal polynomial;
    # over a large field a single projection recovers it almost surely
    rng = random.Random(424242)
    spec = FieldSpec(BIG)
    trials = 500
    equal = 0
    for _ in range(trials):
        n = rng.randrange(2, 11)
        mat = random_sparse(n, min(3, n), rng.randrange(10 ** 9), BIG)
        sess = engine.Session(spec, apps.minpoly_header(mat, "single", 1),
                              "prove")
        out, f = apps.run_minpoly(sess, mat, "single", 1)
        assert out.accepted
        oracle = dense_minpoly(mat_from_sparse(mat), BIG)
        _, rem = poly_divmod(oracle, f, BIG)
        assert not any(rem)
        equal += f == oracle
    assert equal >= trials - trials // 100


def test_charpoly_flipped_coefficient_acceptance_rate():
    # a commitment with one altered coefficient survives only when the
    # evaluation point happens to hide the change
    mat = random_sparse(8, 3, 77, P)
    spec = FieldSpec(P)
    trials = 300
    accepted = 0

    def bump(vals):
        vals[2] = (vals[2] + 1) % P
        return vals

    for seed in range(trials):
        sess = engine.Session(
            spec, apps.charpoly_header(mat, "single"), "live", seed=seed,
            tamper=tamper_first(apps.M_CHARPOLY, P, engine.decode_vector,
                                engine.encode_vector, bump))
        out, _ = apps.run_charpoly(sess, mat, "single")
        accepted += out.accepted
    rate = accepted / trials
    q = mat.n / P
    assert rate <= q + 3 * (q * (1 - q) / trials) ** 0.5
