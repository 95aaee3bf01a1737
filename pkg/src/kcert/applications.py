"""Certified linear-algebra results built on the sequence certificates.

minpoly    certify projection sequences at 2n terms, recover each run's
           generator with the iterative solver, combine by lcm, and hold
           the prover to a committed claim.
det        a committed claim plus either a kernel witness (singular) or a
           diagonally preconditioned minimal polynomial of full degree
           (nonsingular), retried with fresh scalings when the degree
           falls short.
charpoly   a committed monic polynomial g, audited at a random point:
           g(lambda) must equal the certified determinant of the
           materialised shift lambda I - A.
"""

import logging

from . import engine
from .checkpoint import _block_protocol
from .field import f_inv, minpoly_of_sequence, poly_degree, poly_eval, poly_lcm
from .logdepth import VARIANT_CODES, run_sequence_cert
from .matrix import DiagScaledOp, SparseMatrix, matvec
from .oracle import dense_charpoly, dense_det, dense_kernel_vector, mat_from_sparse
from .sequence import choose_K, choose_K_dense

log = logging.getLogger(__name__)

C_U3 = 0x40
C_V3 = 0x41
M_MINPOLY = 0x42
M_MODE = 0x43
M_DETVAL = 0x44
M_WITNESS = 0x45
C_D = 0x46
M_CHARPOLY = 0x47
C_LAMBDA = 0x48

DET_ATTEMPTS = 3


def _certified_sequence(sess, op, u, v0, delta, variant):
    """One certified projection sequence under the chosen sub-protocol."""
    if variant == "checkpoint":
        s, _ = _block_protocol(sess, op, u, v0, delta,
                               choose_K(op.n, delta, op.mu), "direct")
        return s
    if variant == "dense":
        s, _ = _block_protocol(sess, op, u, v0, delta,
                               choose_K_dense(delta), "lists")
        return s
    if variant in ("log", "single"):
        return run_sequence_cert(sess, op, u, v0, delta, variant)
    raise ValueError("unknown sequence variant %r" % (variant,))


def _certified_minpoly(sess, op, variant, projections):
    """lcm of the generators of `projections` certified sequences of A."""
    p = op.p
    n = op.n
    f = [1]
    for _ in range(projections):
        u = sess.challenge_vector(C_U3, n)
        v0 = sess.challenge_vector(C_V3, n)
        s = _certified_sequence(sess, op, u, v0, 2 * n, variant)
        role = engine.VERIFIER if sess.verifying else engine.PROVER
        with sess.charging(role):
            g = minpoly_of_sequence(s[:2 * n], p)
            f = poly_lcm(f, g, p)
    return f


def minpoly_header(mat, variant, projections):
    params = (VARIANT_CODES[variant], projections) + engine.digest_words(mat.digest)
    return engine.Header(engine.T_MINPOLY, mat.p, mat.n, params)


def run_minpoly(sess, op, variant="single", projections=1):
    """Certify the minimal polynomial of A; returns (outcome, coefficients)."""
    if variant not in VARIANT_CODES:
        raise ValueError("unknown sequence variant %r" % (variant,))
    if projections < 1:
        raise ValueError("need at least one projection")
    if sess.spec.sample_set_size < 100 * op.n * op.n:
        log.warning("sample set size %d is small for n = %d; "
                    "the certified polynomial may be a proper divisor",
                    sess.spec.sample_set_size, op.n)
    result = {}

    def body():
        f = _certified_minpoly(sess, op, variant, projections)
        claimed = sess.send_vector(M_MINPOLY, (lambda: f) if sess.proving else None)
        sess.check(claimed == f, "minpoly-mismatch", ())
        result["value"] = claimed

    outcome = engine.run_with_outcome(sess, body)
    return outcome, result.get("value")


def _det_core(sess, op, variant):
    """Commit a determinant claim and certify it; returns the claimed value."""
    p = op.p
    n = op.n
    claim = None
    if sess.proving:
        with sess.charging(engine.PROVER):
            rows = mat_from_sparse(op)
            dval = dense_det(rows, p)
            witness = dense_kernel_vector(rows, p) if dval == 0 else None
            claim = (dval, witness)
    mode = sess.send_mode(M_MODE, (lambda: 1 if claim[0] == 0 else 0) if claim else None)
    if mode not in (0, 1):
        raise engine.MalformedTranscript("unknown determinant mode byte")
    value = sess.send_scalar(M_DETVAL, (lambda: claim[0]) if claim else None)

    if mode == 1:
        w = sess.send_vector(M_WITNESS, (lambda: claim[1]) if claim else None,
                             expect_len=n)
        if sess.verifying:
            with sess.charging(engine.VERIFIER):
                sess.check(any(w), "kernel-witness", (0,))
                sess.check(not any(matvec(op, w)), "kernel-witness", (1,))
                sess.check(engine.scalar_equal(value, 0), "det-claim", ())
        return value

    for attempt in range(DET_ATTEMPTS):
        dvec = sess.challenge_vector(C_D, n, nonzero=True)
        b = DiagScaledOp(dvec, op, "left")
        f = _certified_minpoly(sess, b, variant, 1)
        if poly_degree(f) < n:
            continue
        role = engine.VERIFIER if sess.verifying else engine.PROVER
        with sess.charging(role):
            det_b = f[0] if n % 2 == 0 else -f[0] % p
            prod = 1
            for di in dvec:
                prod = prod * di % p
            det_a = det_b * f_inv(prod, p) % p
            engine.charge_field_ops(n + 2)
        sess.check(engine.scalar_equal(det_a, value), "det-claim", (attempt,))
        return value
    raise engine.RejectError("degree-deficient", (DET_ATTEMPTS,))


def det_header(mat, variant):
    params = (VARIANT_CODES[variant],) + engine.digest_words(mat.digest)
    return engine.Header(engine.T_DET, mat.p, mat.n, params)


def run_det(sess, op, variant="single"):
    """Certify det(A); returns (outcome, value)."""
    if variant not in VARIANT_CODES:
        raise ValueError("unknown sequence variant %r" % (variant,))
    result = {}

    def body():
        result["value"] = _det_core(sess, op, variant)

    outcome = engine.run_with_outcome(sess, body)
    return outcome, result.get("value") if outcome.accepted else None


def charpoly_header(mat, variant):
    params = (VARIANT_CODES[variant],) + engine.digest_words(mat.digest)
    return engine.Header(engine.T_CHARPOLY, mat.p, mat.n, params)


def run_charpoly(sess, op, variant="single"):
    """Certify det(x I - A); returns (outcome, coefficients).

    The honest prover derives its claim densely, which needs p > n; the
    verifier has no such constraint.
    """
    if variant not in VARIANT_CODES:
        raise ValueError("unknown sequence variant %r" % (variant,))
    result = {}

    def body():
        p = op.p
        n = op.n
        gdata = None
        if sess.proving:
            with sess.charging(engine.PROVER):
                gdata = dense_charpoly(mat_from_sparse(op), p)
        g = sess.send_vector(M_CHARPOLY, (lambda: gdata) if gdata else None)
        sess.check(len(g) == n + 1 and g[n] == 1, "charpoly-shape", ())
        lam = sess.challenge_scalar(C_LAMBDA)
        role = engine.VERIFIER if sess.verifying else engine.PROVER
        with sess.charging(role):
            # the shift is materialised: its own sparsity cost is what the
            # determinant run below gets charged for
            trips = [(r, c, -v % p) for r, c, v in op.triplets]
            trips += [(i, i, lam) for i in range(n)]
            cmat = SparseMatrix(n, p, trips)
            engine.charge_field_ops(op.nnz + n)
        dval = _det_core(sess, cmat, variant)
        if sess.verifying:
            with sess.charging(engine.VERIFIER):
                gl = poly_eval(g, lam, p)
                sess.note_test(weight=n)
                sess.check(engine.scalar_equal(gl, dval), "charpoly-eval", ())
        result["value"] = g

    outcome = engine.run_with_outcome(sess, body)
    return outcome, result.get("value") if outcome.accepted else None
